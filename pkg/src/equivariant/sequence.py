import logging

import numpy as np
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from src.scalars.scalars import Ring, InputError, encode_array
from src.scalars.units import MAX_UNITS
from src.finalg.finalg import AlgebraMap
from src.graded.galois import GaloisObject, cotensor, galois_classes_equal
from src.graded.miyashita import CORRECTED
from src.grouplib.groups import FinGroup
from src.azumaya.azumaya import ElementaryResult, is_elementary
from src.equivariant.gmodule import GModuleAlgebra, tensor_gmodule, opposite_gmodule, ground_gmodule
from src.equivariant.pi import PiResult, pi_galois
from src.equivariant.inner import (
    InnerDecision, GDualPair, strongly_inner_witness, recover_pair, elementary_g_module,
)
from src.equivariant.splitting import split_and_verify, cotensor_comparison

logger = logging.getLogger(__name__)

# A (x) B^op above this dimension is not searched for elementary witnesses
MAX_MORITA_DIM = 16
# pi(A (x) B) is computed up to this dimension
MAX_PRODUCT_DIM = 81

CLAUSES = ("well_defined", "multiplicative", "split_surjective", "kernel")


@dataclass
class MoritaVerdict:
    """Equivariant Morita equivalence through A (x) B^op.

    Args:
        equivalent: A (x) B^op is elementary and its action strongly inner.
        elementary: Outcome of the elementary search.
        inner: Strong innerness decision, when the algebra is elementary.
    """
    equivalent: bool
    elementary: ElementaryResult
    inner: Optional[InnerDecision] = None

    def __bool__(self):
        return self.equivalent


def equivariant_morita(A: GModuleAlgebra, B: GModuleAlgebra, combinations: bool = True,
                       max_units: int = MAX_UNITS) -> MoritaVerdict:
    """
    A ~ B in BM'(k, G) iff A (x) B^op is an elementary G-module algebra.

    Parameters:
    A, B: G-module Taylor-Azumaya algebras over one (ring, group)
    combinations: forwarded to the elementary search
    max_units: unit-group cap

    Returns:
    MoritaVerdict
    """
    T = tensor_gmodule(A, opposite_gmodule(B))
    elementary = is_elementary(T.algebra, combinations)
    if not elementary:
        return MoritaVerdict(False, elementary)
    inner = strongly_inner_witness(T, check_azumaya=False, max_units=max_units)
    return MoritaVerdict(bool(inner), elementary, inner)


@dataclass
class Corpus:
    """G-module algebras and Galois objects over one (ring, group).

    Args:
        name: Label used in reports.
        ring: k.
        group: G.
        gmodules: G-module Taylor-Azumaya algebras.
        galois: Galois objects.
        pairs: Name of a G-module algebra -> the equivariant dual pair it was built from.
    """
    name: str
    ring: Ring
    group: FinGroup
    gmodules: List[GModuleAlgebra] = field(default_factory=list)
    galois: List[GaloisObject] = field(default_factory=list)
    pairs: Dict[str, GDualPair] = field(default_factory=dict)

    def validate(self):
        for A in self.gmodules:
            if A.ring != self.ring or not np.array_equal(A.group.table, self.group.table):
                raise InputError(f"{A.name} lives over another (ring, group)", location=f"corpus.{A.name}")
        for B in self.galois:
            if B.ring != self.ring or not np.array_equal(B.group.table, self.group.table):
                raise InputError("Galois object over another (ring, group)", location="corpus.galois")
        names = [A.name for A in self.gmodules]
        if len(set(names)) != len(names):
            raise InputError("Corpus algebra names must be unique", location="corpus")


@dataclass
class ClauseResult:
    """One clause of the sequence check.

    Args:
        name: Clause key.
        entries: One record per checked item, each with an "ok" flag.
        certificates: Isomorphism certificates backing the entries.
        skipped: Items left out by a size cap.
    """
    name: str
    entries: List[Dict[str, Any]] = field(default_factory=list)
    certificates: List[dict] = field(default_factory=list, repr=False)
    skipped: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(entry["ok"] for entry in self.entries)

    def encode(self) -> dict:
        return {"passed": self.passed, "entries": self.entries, "skipped": self.skipped}


@dataclass
class SequenceReport:
    corpus: str
    clauses: Dict[str, ClauseResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses.values())

    def verdicts(self) -> Dict[str, bool]:
        return {name: self.clauses[name].passed for name in CLAUSES}

    def certificates(self) -> List[dict]:
        return [cert for name in CLAUSES for cert in self.clauses[name].certificates]

    def encode(self) -> dict:
        return {"corpus": self.corpus, "passed": self.passed,
                "clauses": {name: self.clauses[name].encode() for name in CLAUSES}}


class _PiCache:
    """pi of corpus members and derived tensors, keyed by object identity."""

    def __init__(self, max_units: int):
        self.max_units = max_units
        # the algebra is stored next to pi so its id stays taken
        self.values: Dict[int, Tuple[GModuleAlgebra, PiResult]] = {}
        self.tensors: Dict[Tuple[int, int], Tuple[GModuleAlgebra, GModuleAlgebra, GModuleAlgebra]] = {}

    def get(self, A: GModuleAlgebra, check_azumaya: bool) -> PiResult:
        if id(A) not in self.values:
            self.values[id(A)] = (A, pi_galois(A, check_azumaya=check_azumaya))
        return self.values[id(A)][1]

    def tensor(self, A: GModuleAlgebra, B: GModuleAlgebra) -> GModuleAlgebra:
        key = (id(A), id(B))
        if key not in self.tensors:
            self.tensors[key] = (A, B, tensor_gmodule(A, B))
        return self.tensors[key][2]


def _pairs(items: List[GModuleAlgebra], cap: int):
    for i, A in enumerate(items):
        for B in items[i:]:
            yield A, B, A.dim * B.dim <= cap


def _well_defined(corpus: Corpus, cache: _PiCache, max_morita_dim: int, max_product_dim: int,
                  combinations: bool) -> ClauseResult:
    clause = ClauseResult("well_defined")
    for A, B, fits in _pairs(corpus.gmodules, max_morita_dim):
        label = f"{A.name}~{B.name}"
        if not fits:
            clause.skipped.append(label)
            continue
        verdict = equivariant_morita(A, B, combinations, cache.max_units)
        comparison = galois_classes_equal(cache.get(A, True).galois, cache.get(B, True).galois, cache.max_units)
        clause.entries.append({"pair": label, "morita": verdict.equivalent, "pi_equal": comparison.equal,
                               "ok": (not verdict.equivalent) or comparison.equal})
        if verdict.equivalent and comparison.isomorphism is not None:
            clause.certificates.append(comparison.isomorphism.certificate())
    for E_name in sorted(corpus.pairs):
        E = next(A for A in corpus.gmodules if A.name == E_name)
        for A in corpus.gmodules:
            label = f"{A.name}*{E_name}"
            if A.dim * E.dim > max_product_dim:
                clause.skipped.append(label)
                continue
            T = cache.tensor(A, E)
            comparison = galois_classes_equal(cache.get(T, False).galois, cache.get(A, True).galois,
                                              cache.max_units)
            clause.entries.append({"pair": label, "absorbs_elementary": comparison.equal,
                                   "ok": comparison.equal})
            if comparison.isomorphism is not None:
                clause.certificates.append(comparison.isomorphism.certificate())
    return clause


def _multiplicative(corpus: Corpus, cache: _PiCache, max_product_dim: int) -> ClauseResult:
    clause = ClauseResult("multiplicative")
    for A, B, fits in _pairs(corpus.gmodules, max_product_dim):
        label = f"{A.name}*{B.name}"
        if not fits:
            clause.skipped.append(label)
            continue
        pi_a, pi_b = cache.get(A, True), cache.get(B, True)
        pi_ab = cache.get(cache.tensor(A, B), False)
        box = cotensor(pi_a.galois, pi_b.galois)
        comparison = galois_classes_equal(pi_ab.galois, box, cache.max_units)
        comparison_map = cotensor_comparison(pi_a, pi_b, pi_ab)
        clause.entries.append({"pair": label, "class_equal": comparison.equal,
                               "comparison_map": comparison_map.is_bijective(),
                               "ok": comparison.equal and comparison_map.is_bijective()})
        clause.certificates.append(comparison_map.certificate())
    return clause


def _split_surjective(corpus: Corpus, convention: str) -> ClauseResult:
    clause = ClauseResult("split_surjective")
    for index, B in enumerate(corpus.galois):
        report = split_and_verify(B, convention)
        clause.entries.append({"galois": index, "cocycle": B.cocycle.encode(), **report.verdicts(),
                               "ok": report.passed})
        if report.phi is not None:
            clause.certificates.append(report.phi.certificate())
    return clause


def equivariant_trivialization(A: GModuleAlgebra, elementary: ElementaryResult,
                               max_units: int = MAX_UNITS) -> Optional[GDualPair]:
    """
    G-actions on a dual pair P with E(P) equivariantly isomorphic to A, when A has a pair witness.

    Parameters:
    A: strongly inner G-module algebra
    elementary: elementary result for A.algebra with method "pair"
    max_units: unit-group cap

    Returns:
    GDualPair Q whose induced action matches A through the recorded isomorphism, or None
    """
    if elementary.method != "pair":
        return None
    ring = A.ring
    iso: AlgebraMap = elementary.isomorphism
    iso_inv = iso.inverse().matrix
    action = np.stack([ring.dot(ring.dot(iso_inv, A.action[g]), iso.matrix) for g in A.group.elements()])
    transported = GModuleAlgebra(iso.source, A.group, action, name=f"E({A.name})")
    decision = strongly_inner_witness(transported, check_azumaya=False, max_units=max_units)
    if not decision:
        return None
    Q = recover_pair(elementary.pair, decision.witness)
    induced = elementary_g_module(Q)
    if not ring.equal_arrays(induced.action, transported.action):
        return None
    return Q


def _kernel(corpus: Corpus, cache: _PiCache, combinations: bool) -> ClauseResult:
    clause = ClauseResult("kernel")
    ground = ground_gmodule(corpus.ring, corpus.group)
    for A in corpus.gmodules:
        pi = cache.get(A, True)
        decision = strongly_inner_witness(A, pi, cache.max_units)
        entry: Dict[str, Any] = {"algebra": A.name, "pi_trivial": decision.pi_trivial,
                                 "strongly_inner": decision.strongly_inner}
        if decision.pi_trivial:
            ok = decision.strongly_inner
            elementary = is_elementary(A.algebra, combinations)
            entry["elementary"] = elementary.method
            if elementary.method == "pair":
                Q = equivariant_trivialization(A, elementary, cache.max_units)
                entry["trivialization"] = Q is not None
                if Q is not None:
                    entry["pair_actions"] = {"psi": encode_array(A.ring, Q.psi),
                                             "psi_prime": encode_array(A.ring, Q.psi_prime)}
                ok = ok and Q is not None
        else:
            verdict = equivariant_morita(A, ground, combinations, cache.max_units)
            entry["equivariantly_trivial"] = verdict.equivalent
            ok = not decision.strongly_inner and not verdict.equivalent
        entry["ok"] = ok
        clause.entries.append(entry)
    return clause


def verify_exact_sequence(corpus: Corpus, convention: str = CORRECTED, combinations: bool = True,
                          max_units: int = MAX_UNITS, max_morita_dim: int = MAX_MORITA_DIM,
                          max_product_dim: int = MAX_PRODUCT_DIM) -> SequenceReport:
    """
    Check 1 -> Br'(k) -> BM'(k, G) -> Gal(k, G) -> 1 on a corpus.

    Parameters:
    corpus: G-module algebras and Galois objects over one (ring, group)
    convention: Miyashita convention used by the section
    combinations: forwarded to the elementary search
    max_units: unit-group cap
    max_morita_dim: cap on dim A * dim B for the Morita clause
    max_product_dim: cap on dim A * dim B for the product clause

    Returns:
    SequenceReport with one ClauseResult per clause
    """
    corpus.validate()
    cache = _PiCache(max_units)
    clauses = {
        "well_defined": _well_defined(corpus, cache, max_morita_dim, max_product_dim, combinations),
        "multiplicative": _multiplicative(corpus, cache, max_product_dim),
        "split_surjective": _split_surjective(corpus, convention),
        "kernel": _kernel(corpus, cache, combinations),
    }
    for name in CLAUSES:
        result = clauses[name]
        if result.skipped:
            logger.warning("%s: %d item(s) above the size caps were skipped", name, len(result.skipped))
        logger.debug("clause %s on %s: %s", name, corpus.name, result.passed)
    return SequenceReport(corpus.name, clauses)
