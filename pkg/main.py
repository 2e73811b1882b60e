import os
import sys
import yaml
import logging
import argparse

from typing import Any, Callable, Dict, List, Optional

from src.utils import CONVENTIONS, load_config, validate_config
from src.scalars.scalars import InputError, CapExceededError
from src.multiplier.multiplier import multiplier_algebra, canonical_embedding, is_ideal_image, \
    elementary_multiplier_model
from src.grouplib.cohomology import second_cohomology, brute_force_h2_order, is_coboundary
from src.grouplib.dual import group_algebra
from src.graded.galois import crossed_product, cotensor, galois_classes_equal, class_is_trivial, \
    galois_summary, require_galois
from src.graded.miyashita import miyashita_properties
from src.azumaya.azumaya import is_taylor_azumaya, is_elementary
from src.azumaya.quaternion import split_report
from src.equivariant.smash import smash_product, balanced_square_check
from src.equivariant.pi import pi_galois, commutant_check
from src.equivariant.inner import strongly_inner_witness
from src.equivariant.splitting import split_and_verify
from src.equivariant.sequence import verify_exact_sequence
from src.scenario.scenario import Scenario, load_scenario
from src.scenario.report import Report, load_report, verify_report
from src.scenario.corpus import bundled_path, run_selftest

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "configs", "default_config.yaml")

COMMANDS = ("check-azumaya", "multiplier", "pi", "h2", "crossed-product", "cotensor", "smash",
            "split-galois", "miyashita", "verify-sequence", "selftest", "verify-witness")

# scenario used when --scenario is omitted
DEFAULT_SCENARIOS = {
    "check-azumaya": "quaternions_q",
    "multiplier": "multiplier_pairs",
    "pi": "m2_conjugation",
    "h2": "gf5_c2",
    "crossed-product": "gf5_c2",
    "cotensor": "gf5_c2",
    "smash": "m2_conjugation",
    "split-galois": "gf5_c2",
    "miyashita": "ks3_gf7",
    "verify-sequence": "gf5_c2",
}


def cmd_check_azumaya(scenario: Scenario, config: Dict[str, Any], report: Report):
    limits = config["limits"]
    for name, A in scenario.algebras.items():
        cert = is_taylor_azumaya(A, limits["max_tensor_square"], limits["max_projective_unknowns"])
        row = cert.verdicts()
        if cert.passed:
            row["elementary"] = is_elementary(A, config["search"]["elementary_combinations"]).method
        if name in scenario.quaternions:
            row["local_symbols"] = split_report(*scenario.quaternions[name]).symbols
        report.details[name] = row
        report.check(f"{name} is Taylor-Azumaya", cert.passed)


def cmd_multiplier(scenario: Scenario, config: Dict[str, Any], report: Report):
    cap = config["limits"]["max_multiplier_dim"]
    for name, A in scenario.algebras.items():
        try:
            M = multiplier_algebra(A, max_dim=cap)
        except CapExceededError as exc:
            report.details[name] = {"skipped": str(exc)}
            continue
        embedding = canonical_embedding(A, M)
        report.details[name] = {"dim": A.dim, "dim_M": M.dim, "has_identity": A.has_identity}
        report.check(f"{name} is an ideal of M({name})", is_ideal_image(M, embedding))
    for name, P in scenario.pairs.items():
        model = elementary_multiplier_model(P, max_dim=cap)
        report.details[f"pair.{name}"] = {"dim_E": P.dim, "dim_M": model.multipliers.dim,
                                          "dim_model": model.algebra.dim}
        report.certificates.append(model.alpha.certificate())
        report.check(f"model of M(E({name})) is isomorphic", model.alpha.is_bijective())


def cmd_pi(scenario: Scenario, config: Dict[str, Any], report: Report):
    limits = config["limits"]
    group = scenario.require_group()
    kG = require_galois(group_algebra(scenario.ring, group))
    for name, A in scenario.gmodules.items():
        pi = pi_galois(A)
        trivial = class_is_trivial(pi.galois, limits["max_units"])
        decision = strongly_inner_witness(A, pi, limits["max_units"])
        commutant = commutant_check(A, pi, limits["max_multiplier_dim"])
        row = {"galois_class": "trivial" if trivial else "nontrivial", "pi": galois_summary(pi.galois),
               "balanced": pi.balanced.verdicts(), "strongly_inner": decision.strongly_inner,
               "commutant": commutant.verdicts()}
        if decision.witness is not None:
            row["witness"] = decision.witness.encode()
        if trivial:
            comparison = galois_classes_equal(kG, pi.galois, limits["max_units"])
            report.certificates.append(comparison.isomorphism.certificate())
        if commutant.alpha is not None:
            report.certificates.append(commutant.alpha.certificate())
        report.details[name] = row
        report.check(f"pi({name}) strongly inner iff trivial", decision.strongly_inner == trivial)
        if commutant.checked:
            report.check(f"pi({name}) is the commutant of {name} in M({name} # kG)", commutant.passed)


def cmd_h2(scenario: Scenario, config: Dict[str, Any], report: Report, brute_force: bool = False):
    group = scenario.require_group()
    H2 = second_cohomology(group, scenario.ring, config["limits"]["max_units"])
    row = {"group": group.name, "ring": scenario.ring.literal, "order": H2.order,
           "invariant_factors": H2.invariant_factors,
           "representatives": [{"order": d, "cocycle": alpha.encode()} for d, alpha in H2.summands]}
    report.check("representatives are cocycles", all(alpha.defect() is None for alpha in H2.representatives))
    if brute_force:
        try:
            row["brute_force_order"] = brute_force_h2_order(group, scenario.ring)
            report.check("order agrees with enumeration", row["brute_force_order"] == H2.order)
        except CapExceededError as exc:
            row["brute_force_order"] = None
            row["brute_force_note"] = str(exc)
    report.details["h2"] = row


def cmd_crossed_product(scenario: Scenario, config: Dict[str, Any], report: Report):
    group = scenario.require_group()
    for name, alpha in scenario.cocycles.items():
        S = crossed_product(scenario.ring, group, alpha)
        trivial = is_coboundary(alpha, config["limits"]["max_units"])
        report.details[name] = {**galois_summary(S), "trivial_class": trivial.coboundary,
                                "coboundary_witness": trivial.witness}
        report.check(f"crossed product by {name} is Galois", S.cocycle.defect() is None)


def cmd_cotensor(scenario: Scenario, config: Dict[str, Any], report: Report):
    group = scenario.require_group()
    items = list(scenario.galois.items())
    for i, (name_s, S) in enumerate(items):
        for name_t, T in items[i:]:
            box = cotensor(S, T)
            expected = crossed_product(scenario.ring, group, S.cocycle * T.cocycle)
            comparison = galois_classes_equal(box, expected, config["limits"]["max_units"])
            label = f"{name_s} box {name_t}"
            report.details[label] = {"cocycle": box.cocycle.encode(), "product_class": comparison.equal}
            if comparison.isomorphism is not None:
                report.certificates.append(comparison.isomorphism.certificate())
            report.check(f"{label} has the product class", comparison.equal)


def cmd_smash(scenario: Scenario, config: Dict[str, Any], report: Report):
    for name, A in scenario.gmodules.items():
        S = smash_product(A)
        check = balanced_square_check(S)
        report.details[name] = {"dim": S.dim, "balanced": check.verdicts()}
        if check.checked:
            report.check(f"{name} # kG: beta inverts on the balanced square", check.passed)


def cmd_split_galois(scenario: Scenario, config: Dict[str, Any], report: Report):
    convention = config["miyashita"]["convention"]
    for name, B in scenario.galois.items():
        split = split_and_verify(B, convention)
        report.details[name] = split.verdicts()
        if split.phi is not None:
            report.certificates.append(split.phi.certificate())
        report.check(f"{name} -> pi({name} # k(G)) is a graded isomorphism", split.passed)


def cmd_miyashita(scenario: Scenario, config: Dict[str, Any], report: Report):
    convention = config["miyashita"]["convention"]
    for name, B in scenario.galois.items():
        props = miyashita_properties(B, convention)
        report.details[name] = props.verdicts()
        report.check(f"Miyashita action on {name} ({convention})", props.passed)


def cmd_verify_sequence(scenario: Scenario, config: Dict[str, Any], report: Report):
    result = verify_exact_sequence(scenario.corpus(), config["miyashita"]["convention"],
                                   config["search"]["elementary_combinations"], config["limits"]["max_units"])
    report.details["sequence"] = result.encode()
    report.certificates.extend(result.certificates())
    for clause, verdict in result.verdicts().items():
        report.check(clause, verdict)


HANDLERS: Dict[str, Callable] = {
    "check-azumaya": cmd_check_azumaya,
    "multiplier": cmd_multiplier,
    "pi": cmd_pi,
    "crossed-product": cmd_crossed_product,
    "cotensor": cmd_cotensor,
    "smash": cmd_smash,
    "split-galois": cmd_split_galois,
    "miyashita": cmd_miyashita,
    "verify-sequence": cmd_verify_sequence,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Exact verification of the equivariant Brauer sequence')
    parser.add_argument('command', choices=COMMANDS,
                        help='Check to run')
    parser.add_argument('--scenario', type=str, default=None,
                        help='Scenario JSON file (a report file for verify-witness)')
    parser.add_argument('--out', type=str, default=None,
                        help='Write the canonical JSON report to this path')
    output = parser.add_mutually_exclusive_group()
    output.add_argument('--json', action='store_true',
                        help='Print the canonical JSON report')
    output.add_argument('--text', action='store_true',
                        help='Print a scoreboard (default)')
    parser.add_argument('--max-dim', type=int, default=None,
                        help='Override limits.max_dim')
    parser.add_argument('--max-group', type=int, default=None,
                        help='Override limits.max_group')
    parser.add_argument('--convention', type=str, choices=CONVENTIONS, default=None,
                        help='Miyashita convention: corrected (default) or literal')
    parser.add_argument('--brute-force', action='store_true',
                        help='h2: cross-check the order by enumerating cocycles')
    parser.add_argument('--config', type=str, default=DEFAULT_CONFIG_PATH,
                        help='YAML configuration file')
    parser.add_argument('--verbose', action='store_true',
                        help='Debug logging')
    return parser


def apply_overrides(config: Dict[str, Any], args: argparse.Namespace) -> Dict[str, Any]:
    if args.max_dim is not None:
        config["limits"]["max_dim"] = args.max_dim
    if args.max_group is not None:
        config["limits"]["max_group"] = args.max_group
    if args.convention is not None:
        config["miyashita"]["convention"] = args.convention
    return config


def run(args: argparse.Namespace, config: Dict[str, Any]) -> Report:
    limits = config["limits"]
    version = config["report"]["tool_version"]
    if args.command == "verify-witness":
        if args.scenario is None:
            raise InputError("verify-witness needs --scenario pointing at a report file", location="--scenario")
        print(f"Step 1: re-checking certificates in {args.scenario}")
        report = Report(args.command, version)
        result = verify_report(load_report(args.scenario))
        report.details["verify_witness"] = result
        report.check("body hash matches", result["hash_ok"])
        report.check(f"{result['certificates']} certificate(s) re-verified", not result["failures"])
        return report

    if args.command == "selftest":
        extra = None
        if args.scenario is not None:
            print(f"Step 1: validating extra fixture {args.scenario}")
            extra = load_scenario(args.scenario, limits["max_dim"], limits["max_group"])
        print(f"Step {2 if extra is not None else 1}: running the bundled corpus")
        report = run_selftest(config)
        if extra is not None:
            report.inputs["extra"] = extra.sha256
        return report

    path = args.scenario or bundled_path(DEFAULT_SCENARIOS[args.command])
    report = Report(args.command, version)
    with report.timings.stage("load"):
        print(f"Step 1: loading scenario {path}")
        scenario = load_scenario(path, limits["max_dim"], limits["max_group"])
    report.inputs["scenario"] = scenario.sha256
    with report.timings.stage(args.command):
        print(f"Step 2: running {args.command} on {scenario.name}")
        if args.command == "h2":
            cmd_h2(scenario, config, report, brute_force=args.brute_force)
        else:
            HANDLERS[args.command](scenario, config, report)
    return report


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = apply_overrides(load_config(args.config), args)
        validate_config(config)
        report = run(args, config)
    except InputError as exc:
        print(f"Input error: {exc.describe()}", file=sys.stderr)
        return 2
    except yaml.YAMLError as exc:
        print(f"Error parsing YAML config: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        # json.JSONDecodeError and UnitGroupError are ValueErrors
        print(f"Error: {exc}", file=sys.stderr)
        return 2

    if args.out:
        report.write(args.out)
    if args.json:
        print(report.dumps())
    else:
        print(report.scoreboard())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
