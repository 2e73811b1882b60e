import os
import logging

from typing import Any, Dict, Optional

from src.utils import DEFAULT_CONFIG, sha256_of
from src.scalars.scalars import Ring
from src.finalg.finalg import MAX_DIM
from src.multiplier.multiplier import multiplier_algebra, elementary_multiplier_model
from src.grouplib.groups import MAX_GROUP, parse_group
from src.grouplib.cohomology import second_cohomology, brute_force_h2_order
from src.grouplib.dual import group_algebra
from src.graded.graded import is_strongly_graded
from src.graded.galois import galois_check, galois_classes_equal, class_is_trivial, require_galois
from src.graded.miyashita import LITERAL, miyashita_properties
from src.azumaya.elementary import elementary_from_pair
from src.azumaya.azumaya import is_taylor_azumaya, is_elementary, morita_equivalent
from src.azumaya.quaternion import is_split_quaternion, zero_divisor, split_report
from src.equivariant.pi import PiResult, pi_galois
from src.equivariant.inner import strongly_inner_witness, compare_with_pi_lifts
from src.equivariant.splitting import split_and_verify
from src.equivariant.sequence import verify_exact_sequence
from src.scenario.scenario import Scenario, load_scenario
from src.scenario.report import Report

logger = logging.getLogger(__name__)

BUNDLED_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))),
                           "scenarios")

BUNDLED = {
    "gf5_c2": "gf5_c2_corpus.json",
    "gf7_c3": "gf7_c3_corpus.json",
    "gf5_c2xc2": "gf5_c2xc2_galois.json",
    "m2_conjugation": "m2_conjugation.json",
    "multiplier_pairs": "multiplier_pairs.json",
    "galois_checks": "galois_checks.json",
    "quaternions_q": "quaternions_q.json",
    "ks3_gf7": "ks3_gf7.json",
}

# (group, ring, expected |H^2|)
H2_CASES = (("C2", "GF(5)", 2), ("C3", "GF(7)", 3), ("C2xC2", "GF(3)", None))


def bundled_path(name: str) -> str:
    return os.path.join(BUNDLED_DIR, BUNDLED[name])


def load_bundled(name: str, max_dim: int = MAX_DIM, max_group: int = MAX_GROUP) -> Scenario:
    return load_scenario(bundled_path(name), max_dim=max_dim, max_group=max_group)


class Selftest:
    """Runs the bundled fixtures through every acceptance check and fills one report.

    Args:
        config: Merged configuration.
        convention: Miyashita convention under test.
    """

    def __init__(self, config: Optional[Dict[str, Any]] = None, convention: Optional[str] = None):
        self.config = config or DEFAULT_CONFIG
        self.limits = self.config["limits"]
        self.combinations = self.config["search"]["elementary_combinations"]
        self.height = self.config["search"]["quaternion_height"]
        self.convention = convention or self.config["miyashita"]["convention"]
        self.report = Report("selftest", self.config["report"]["tool_version"])
        self.scenarios: Dict[str, Scenario] = {}
        self.pis: Dict[str, PiResult] = {}

    def scenario(self, name: str) -> Scenario:
        if name not in self.scenarios:
            S = load_bundled(name, self.limits["max_dim"], self.limits["max_group"])
            self.scenarios[name] = S
            self.report.inputs[name] = S.sha256
        return self.scenarios[name]

    def pi(self, corpus: str, name: str) -> PiResult:
        key = f"{corpus}.{name}"
        if key not in self.pis:
            self.pis[key] = pi_galois(self.scenario(corpus).gmodules[name])
        return self.pis[key]

    # --- checks ---------------------------------------------------------------

    def multiplier_model(self):
        S = self.scenario("multiplier_pairs")
        rows = {}
        ok = len(S.pairs) >= 5
        for name, P in S.pairs.items():
            model = elementary_multiplier_model(P, max_dim=self.limits["max_multiplier_dim"])
            direct = multiplier_algebra(elementary_from_pair(P).algebra, self.limits["max_multiplier_dim"])
            rows[name] = {"dim_E": P.dim, "dim_model": model.algebra.dim, "dim_direct": direct.dim}
            ok = ok and model.algebra.dim == direct.dim
            self.report.certificates.append(model.alpha.certificate())
        ok = ok and rows["first"]["dim_model"] == 3
        self.report.details["multiplier_model"] = rows
        self.report.check("multiplier model matches M(E(P))", ok)

    def galois_equivalence(self):
        S = self.scenario("galois_checks")
        rows = {}
        ok = True
        for name, graded in S.graded.items():
            check = galois_check(graded)
            strong = bool(is_strongly_graded(graded))
            unit_dim = graded.component(graded.group.identity).shape[1]
            rows[name] = {"galois": check.is_galois, "strongly_graded": strong, "dim_S_e": unit_dim,
                          "reason": check.reason}
            ok = ok and check.is_galois == (strong and unit_dim == 1)
            if check.is_galois:
                gamma = check.galois.gamma
                ok = ok and S.ring.equal_arrays(S.ring.dot(check.galois.gamma_inverse, gamma),
                                                S.ring.eye(gamma.shape[1]))
        ok = ok and not rows["nil"]["galois"] and rows["sqrt2"]["galois"]
        self.report.details["galois_equivalence"] = rows
        self.report.check("Galois iff strongly graded with S_e = k", ok)

    def trivial_actions(self):
        ok = True
        rows = {}
        for corpus in ("gf5_c2", "gf7_c3"):
            S = self.scenario(corpus)
            kG = require_galois(group_algebra(S.ring, S.group))
            for name, A in S.gmodules.items():
                if not A.is_trivial():
                    continue
                comparison = galois_classes_equal(self.pi(corpus, name).galois, kG, self.limits["max_units"])
                rows[f"{corpus}.{name}"] = comparison.equal
                ok = ok and comparison.equal
                if comparison.isomorphism is not None:
                    self.report.certificates.append(comparison.isomorphism.certificate())
        self.report.details["trivial_action_pi"] = rows
        self.report.check("trivial actions give pi = kG", ok and bool(rows))

    def nontrivial_pi(self):
        S = self.scenario("m2_conjugation")
        A = S.gmodules["M2u"]
        G = A.group
        g = G.non_identity()[0]
        pi = pi_galois(A)
        value = pi.galois.cocycle.values[g, g]
        corpus = self.scenario("gf5_c2")
        comparison = galois_classes_equal(pi.galois, corpus.galois["cross2"], self.limits["max_units"])
        decision = strongly_inner_witness(A, pi, self.limits["max_units"])
        # x = u^-1 spans degree g with x^2 = 3, so value / 3 is a square
        square = S.ring.mul(value, S.ring.inv(3)) in {S.ring.mul(c, c) for c in S.ring.units()}
        self.report.details["nontrivial_pi"] = {"cocycle": pi.galois.cocycle.encode(),
                                                "class_of_cross2": comparison.equal,
                                                "strongly_inner": decision.strongly_inner}
        if comparison.isomorphism is not None:
            self.report.certificates.append(comparison.isomorphism.certificate())
        self.report.check("pi(M2, conjugation by u) is the u^2 = 2 crossed product",
                          square and comparison.equal and not decision.strongly_inner)

    def strongly_inner(self):
        ok = True
        rows = {}
        for corpus in ("gf5_c2", "gf7_c3"):
            S = self.scenario(corpus)
            for name, A in S.gmodules.items():
                pi = self.pi(corpus, name)
                decision = strongly_inner_witness(A, pi, self.limits["max_units"])
                trivial = class_is_trivial(pi.galois, self.limits["max_units"])
                row = {"pi_trivial": trivial, "witness": decision.witness is not None}
                if decision.witness is not None and A.algebra.has_identity:
                    row["pi_lifts"] = compare_with_pi_lifts(decision, pi, self.limits["max_units"]).passed
                    ok = ok and row["pi_lifts"]
                rows[f"{corpus}.{name}"] = row
                ok = ok and trivial == (decision.witness is not None)
        ok = ok and rows["gf5_c2.M2d"]["witness"]
        self.report.details["strongly_inner"] = rows
        self.report.check("trivial pi class iff strongly inner", ok)

    def sequences(self):
        for corpus in ("gf5_c2", "gf7_c3"):
            S = self.scenario(corpus)
            result = verify_exact_sequence(S.corpus(), self.convention, self.combinations,
                                           self.limits["max_units"])
            self.report.details[f"sequence.{corpus}"] = result.encode()
            self.report.certificates.extend(result.certificates())
            for clause, verdict in result.verdicts().items():
                self.report.check(f"{corpus} {clause}", verdict)

    def splittings(self):
        S = self.scenario("gf5_c2xc2")
        rows = {}
        ok = True
        for name, B in S.galois.items():
            split = split_and_verify(B, self.convention)
            rows[name] = split.verdicts()
            ok = ok and split.passed
            if split.phi is not None:
                self.report.certificates.append(split.phi.certificate())
        self.report.details["split.gf5_c2xc2"] = rows
        self.report.check("gf5_c2xc2 split_surjective", ok)

    def h2(self):
        rows = {}
        ok = True
        for group_name, ring_literal, expected in H2_CASES:
            G = parse_group(group_name)
            ring = Ring.parse(ring_literal)
            smith = second_cohomology(G, ring, self.limits["max_units"]).order
            brute = brute_force_h2_order(G, ring)
            rows[f"{group_name}/{ring_literal}"] = {"smith": smith, "brute_force": brute}
            ok = ok and smith == brute and (expected is None or smith == expected)
        self.report.details["h2"] = rows
        self.report.check("H^2 agrees with enumeration", ok)

    def quaternions(self):
        S = self.scenario("quaternions_q")
        hamilton = S.algebras["hamilton"]
        cert = is_taylor_azumaya(hamilton)
        elementary = is_elementary(hamilton, self.combinations)
        split_one = morita_equivalent(S.algebras["split11"], S.algebras["M2"], self.combinations)
        agreement = {}
        for name, (a, b) in S.quaternions.items():
            found = zero_divisor(a, b, self.height) is not None
            agreement[name] = {"split": is_split_quaternion(a, b), "zero_divisor": found,
                               "symbols": split_report(a, b).symbols}
        a, b = S.quaternions["hamilton"]
        self.report.details["quaternions"] = {"hamilton_azumaya": cert.passed,
                                              "hamilton_elementary": elementary.method,
                                              "split11_morita_M2": split_one.elementary,
                                              "places": agreement}
        self.report.check("(-1,-1) is a nontrivial Brauer class",
                          cert.passed and not elementary and not is_split_quaternion(a, b))
        self.report.check("(1,1) is Morita equivalent to M2(Q)", split_one.elementary)
        self.report.check("Hilbert symbols agree with zero-divisor search",
                          all(row["split"] == row["zero_divisor"] for row in agreement.values()))

    def miyashita(self):
        S = self.scenario("ks3_gf7")
        B = S.galois["kS3"]
        chosen = miyashita_properties(B, self.convention)
        literal = chosen if self.convention == LITERAL else miyashita_properties(B, LITERAL)
        self.report.details["miyashita"] = {"chosen": chosen.verdicts(), "literal": literal.verdicts()}
        self.report.check(f"Miyashita ({self.convention}) on kS3", chosen.passed)
        self.report.check("literal convention breaks quantum commutativity on kS3",
                          not literal.quantum_commutative)

    def determinism(self):
        first = self._fingerprint()
        second = self._fingerprint()
        self.report.details["determinism"] = {"first": first, "second": second}
        self.report.check("repeated runs give identical bodies", first == second)

    def _fingerprint(self) -> str:
        S = load_bundled("m2_conjugation")
        pi = pi_galois(S.gmodules["M2u"])
        G = parse_group("C2")
        h2 = second_cohomology(G, Ring.parse("GF(5)"))
        return sha256_of({"scenario": S.sha256, "pi": pi.encode(),
                          "h2": [alpha.encode() for alpha in h2.representatives]})

    def run(self) -> Report:
        stages = (
            ("multiplier", self.multiplier_model),
            ("galois", self.galois_equivalence),
            ("trivial_pi", self.trivial_actions),
            ("nontrivial_pi", self.nontrivial_pi),
            ("strongly_inner", self.strongly_inner),
            ("sequence", self.sequences),
            ("split", self.splittings),
            ("h2", self.h2),
            ("quaternions", self.quaternions),
            ("miyashita", self.miyashita),
            ("determinism", self.determinism),
        )
        for name, stage in stages:
            with self.report.timings.stage(name):
                stage()
            logger.debug("selftest stage %s done", name)
        return self.report


def run_selftest(config: Optional[Dict[str, Any]] = None, convention: Optional[str] = None) -> Report:
    """
    Run every bundled acceptance check.

    Parameters:
    config: merged configuration, defaults when None
    convention: Miyashita convention for the splitting and the kS3 check, config value when None

    Returns:
    Report with one scoreboard line per check
    """
    return Selftest(config, convention).run()
