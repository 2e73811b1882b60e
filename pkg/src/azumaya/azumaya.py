import logging
import itertools

import numpy as np
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from src.scalars.scalars import Ring, InputError, CapExceededError, PRIME_FIELD, encode_array
from src.scalars.linalg import (
    NoSolutionError, solve, nullspace, rank, column_basis, span_contains, scalar_ratio, kron,
    vec_left, vec_right,
)
from src.finalg.finalg import (
    FinAlgebra, AlgebraMap, MAX_TENSOR_SQUARE, tensor_product, opposite, is_unital, is_faithful,
    center_endos, algebra_generators, is_isomorphism,
)
from src.graded.graded import bilinear
from src.azumaya.elementary import DualPair, DualPairError, elementary_from_pair

logger = logging.getLogger(__name__)

MAX_PROJECTIVE_UNKNOWNS = 512
# combination candidates x_i +- x_j are only tried up to this dimension
MAX_COMBINATION_DIM = 16
MAX_WITNESS_ATTEMPTS = 64

STAGES = ("unital", "faithful", "central", "projective", "generator")


class NotTaylorAzumayaError(InputError):
    """Algebra fails a stage of the Taylor-Azumaya test."""


@dataclass
class AzumayaCertificate:
    """Staged outcome of is_taylor_azumaya.

    Args:
        passed: All five stages hold.
        failed_stage: Name of the first failing stage, None on success.
        stages: Stage name -> verdict, for the stages that ran.
        details: Per-stage artifacts (center dimension, separability element, ...).
    """
    passed: bool
    failed_stage: Optional[str]
    stages: Dict[str, bool] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def verdicts(self) -> dict:
        return {"passed": self.passed, "failed_stage": self.failed_stage, "stages": dict(self.stages),
                "details": self.details}


def _spans_everything(ring: Ring, cols: np.ndarray, N: int) -> bool:
    if cols.shape[1] == 0:
        return N == 0
    if ring.is_field:
        return rank(ring, cols) == N
    return span_contains(ring, cols, ring.eye(N))


def _separability_route(A: FinAlgebra, details: Dict[str, Any]) -> Tuple[bool, bool]:
    """Projective and generator stages for algebras with identity, via A-central elements of A (x) A."""
    ring = A.ring
    n = A.dim
    eye = ring.eye(n)
    blocks = [ring.reduce(kron(ring, A.left_ops[b], eye) - kron(ring, eye, A.right_ops[b]))
              for b in algebra_generators(A)]
    W = nullspace(ring, np.concatenate(blocks, axis=0)) if blocks else ring.eye(n * n)
    W = column_basis(ring, W)
    details["central_tensors"] = W.shape[1]
    if W.shape[1] == 0:
        return False, False
    try:
        c = solve(ring, ring.dot(A.products_matrix, W), A.identity)
    except NoSolutionError:
        return False, False
    t = ring.dot(W, c)
    details["separability_element"] = encode_array(ring, t)
    images = np.concatenate([ring.dot(kron(ring, A.left_ops[i], eye), W) for i in range(n)], axis=1)
    generator = _spans_everything(ring, images, n * n)
    return True, generator


def _splitting_route(A: FinAlgebra, details: Dict[str, Any], max_unknowns: int) -> Tuple[bool, bool]:
    """Same stages without an identity: A^e-linear f: A -> A (x) A with m f = id."""
    ring = A.ring
    n = A.dim
    unknowns = n ** 3
    if unknowns > max_unknowns:
        raise CapExceededError(f"Projectivity system has {unknowns} unknowns, above cap {max_unknowns}")
    eye = ring.eye(n)
    blocks = []
    for b in range(n):
        # F L_b = (L_b (x) 1) F and F R_b = (1 (x) R_b) F, F of shape (n^2 x n)
        blocks.append(vec_right(ring, A.left_ops[b], n * n) - vec_left(ring, kron(ring, A.left_ops[b], eye), n))
        blocks.append(vec_right(ring, A.right_ops[b], n * n) - vec_left(ring, kron(ring, eye, A.right_ops[b]), n))
    H = column_basis(ring, nullspace(ring, ring.reduce(np.concatenate(blocks, axis=0))))
    details["bimodule_maps"] = H.shape[1]
    if H.shape[1] == 0:
        return False, False
    compose = ring.dot(vec_left(ring, A.products_matrix, n), H)
    try:
        c = solve(ring, compose, eye.reshape(-1))
        details["splitting"] = encode_array(ring, ring.dot(H, c).reshape(n * n, n))
        projective = True
    except NoSolutionError:
        projective = False
    images = np.concatenate([H[:, s].reshape(n * n, n) for s in range(H.shape[1])], axis=1)
    return projective, _spans_everything(ring, images, n * n)


def is_taylor_azumaya(A: FinAlgebra, max_tensor_square: int = MAX_TENSOR_SQUARE,
                      max_projective_unknowns: int = MAX_PROJECTIVE_UNKNOWNS) -> AzumayaCertificate:
    """
    Staged test: unital, faithful, central, projective over A^e, generator over A^e.

    Parameters:
    A: algebra, identity element optional
    max_tensor_square: cap for the identity-free unital and center systems
    max_projective_unknowns: cap for the identity-free projectivity system

    Returns:
    AzumayaCertificate naming the first failing stage
    """
    ring = A.ring
    stages: Dict[str, bool] = {}
    details: Dict[str, Any] = {}

    def fail(stage: str) -> AzumayaCertificate:
        stages[stage] = False
        logger.debug("Taylor-Azumaya test on %r failed at %s", A, stage)
        return AzumayaCertificate(False, stage, stages, details)

    unital = is_unital(A, max_tensor_square)
    details["unital"] = unital.reason
    if not unital:
        return fail("unital")
    stages["unital"] = True
    if not is_faithful(A):
        return fail("faithful")
    stages["faithful"] = True
    center = center_endos(A, max_tensor_square)
    details["center_dim"] = center.dim
    eye = ring.eye(A.dim)
    scalar = all(scalar_ratio(ring, center.maps[s], eye) is not None for s in range(center.dim))
    if not scalar or center.dim == 0:
        return fail("central")
    stages["central"] = True
    if A.has_identity:
        projective, generator = _separability_route(A, details)
    else:
        projective, generator = _splitting_route(A, details, max_projective_unknowns)
    if not projective:
        return fail("projective")
    stages["projective"] = True
    if not generator:
        return fail("generator")
    stages["generator"] = True
    return AzumayaCertificate(True, None, stages, details)


def require_taylor_azumaya(A: FinAlgebra, **caps) -> AzumayaCertificate:
    cert = is_taylor_azumaya(A, **caps)
    if not cert:
        raise NotTaylorAzumayaError(f"Algebra is not Taylor-Azumaya: fails stage {cert.failed_stage}",
                                    witness={"stage": cert.failed_stage})
    return cert


# --- elementary algebras -------------------------------------------------------

@dataclass
class ElementaryResult:
    """Outcome of the elementary-algebra search.

    Args:
        elementary: A witness was found or the finite-field shortcut applied.
        method: "pair", "wedderburn" or "none".
        pair: Recovered dual pair (M, M', mu) for the "pair" method.
        isomorphism: Verified map E(pair) -> A.
        note: Scope of a negative answer.
    """
    elementary: bool
    method: str
    pair: Optional[DualPair] = None
    isomorphism: Optional[AlgebraMap] = None
    note: str = ""

    def __bool__(self):
        return self.elementary


def _candidates(A: FinAlgebra, combinations: bool) -> List[np.ndarray]:
    ring = A.ring
    n = A.dim
    eye = ring.eye(n)
    out = [eye[i] for i in range(n)]
    if combinations and n <= MAX_COMBINATION_DIM:
        for i, j in itertools.combinations(range(n), 2):
            out.append(ring.reduce(eye[i] + eye[j]))
            out.append(ring.reduce(eye[i] - eye[j]))
        quasi = []
        for c in out[n:]:
            ratio = scalar_ratio(ring, A.product(c, c), c)
            if ratio is not None and ring.is_unit(ratio):
                quasi.append(c)
        # products of quasi-idempotents reach rank-one idempotents of split tensor squares
        for c1, c2 in itertools.combinations(quasi[:MAX_COMBINATION_DIM], 2):
            p = A.product(c1, c2)
            if not ring.is_zero_array(p):
                out.append(p)
    return out


def _try_witness(A: FinAlgebra, M: np.ndarray, Mp: np.ndarray) -> Optional[Tuple[DualPair, AlgebraMap]]:
    ring = A.ring
    n = A.dim
    prods = bilinear(A, Mp, M).reshape(n, -1)
    nz = [j for j in range(prods.shape[1]) if not ring.is_zero_array(prods[:, j])]
    if not nz:
        return None
    z = prods[:, nz[0]]
    c = scalar_ratio(ring, A.product(z, z), z)
    if c is None or not ring.is_unit(c):
        return None
    mu = ring.zeros((Mp.shape[1], M.shape[1]))
    for s in range(Mp.shape[1]):
        for t in range(M.shape[1]):
            r = scalar_ratio(ring, prods[:, s * M.shape[1] + t], z)
            if r is None:
                return None
            mu[s, t] = r
    try:
        pair = DualPair(ring, M.shape[1], Mp.shape[1], mu)
    except DualPairError:
        return None
    E = elementary_from_pair(pair).algebra
    F = ring.reduce(bilinear(A, M, Mp).reshape(n, -1) * ring.inv(c))
    if not is_isomorphism(E, A, F):
        return None
    return pair, AlgebraMap(E, A, F)


def _is_simple(A: FinAlgebra) -> bool:
    """Every nonzero A^e-submodule of A is A: the operators L_a R_b span End(A)."""
    ring = A.ring
    n = A.dim
    ops = np.matmul(A.left_ops[:, None], A.right_ops[None, :]).reshape(n * n, n * n).T
    return rank(ring, ring.reduce(ops)) == n * n


def is_elementary(A: FinAlgebra, combinations: bool = True,
                  max_tensor_square: int = MAX_TENSOR_SQUARE) -> ElementaryResult:
    """
    Search for a dual pair P with E(P) isomorphic to A.

    Parameters:
    A: algebra
    combinations: also try x_i +- x_j and products of quasi-idempotent ones
    max_tensor_square: cap forwarded to the center computation of the shortcut

    Returns:
    ElementaryResult; "no witness found" is not a proof of non-elementarity
    """
    ring = A.ring
    n = A.dim
    if n == 0:
        return ElementaryResult(False, "none", note="zero algebra")
    cands = _candidates(A, combinations)
    lefts, rights = [], []
    for v in cands:
        Mv = column_basis(ring, A.right_matrix(v))
        wM = column_basis(ring, A.left_matrix(v))
        if Mv.shape[1]:
            lefts.append(Mv)
        if wM.shape[1]:
            rights.append(wM)
    lefts.sort(key=lambda B: B.shape[1])
    rights.sort(key=lambda B: B.shape[1])
    attempts = 0
    for M in lefts:
        for Mp in rights:
            if M.shape[1] * Mp.shape[1] != n:
                continue
            attempts += 1
            found = _try_witness(A, M, Mp)
            if found is not None:
                pair, iso = found
                logger.debug("elementary witness for %r: dims (%d, %d)", A, pair.m, pair.mprime)
                return ElementaryResult(True, "pair", pair, iso)
            if attempts >= MAX_WITNESS_ATTEMPTS:
                break
        if attempts >= MAX_WITNESS_ATTEMPTS:
            break
    if ring.kind == PRIME_FIELD and A.has_identity:
        if center_endos(A, max_tensor_square).dim == 1 and _is_simple(A):
            return ElementaryResult(True, "wedderburn", note="central simple over a finite field")
    return ElementaryResult(False, "none", note="no witness found within the search space")


def morita_equivalent(A: FinAlgebra, B: FinAlgebra, combinations: bool = True,
                      check_inputs: bool = True) -> ElementaryResult:
    """
    A ~ B iff A (x) B^op is elementary.

    Parameters:
    A, B: Taylor-Azumaya algebras over one ring
    combinations: forwarded to is_elementary
    check_inputs: run is_taylor_azumaya on both inputs first

    Returns:
    ElementaryResult for A (x) B^op
    """
    if check_inputs:
        require_taylor_azumaya(A)
        require_taylor_azumaya(B)
    return is_elementary(tensor_product(A, opposite(B)), combinations)


def brauer_product(A: FinAlgebra, B: FinAlgebra) -> FinAlgebra:
    return tensor_product(A, B)


def brauer_inverse(A: FinAlgebra) -> FinAlgebra:
    return opposite(A)


def brauer_trivial(A: FinAlgebra, combinations: bool = True) -> bool:
    return bool(is_elementary(A, combinations))


@dataclass(frozen=True, eq=False)
class BrauerClass:
    """Class in Br'(k) carried by a representative.

    Args:
        representative: Algebra; validated when built with of().
        provenance: Operations that produced it, e.g. ["M2(GF(5))", "inverse"].
    """
    representative: FinAlgebra
    provenance: Tuple[str, ...] = ()

    @classmethod
    def of(cls, A: FinAlgebra, name: str = "A") -> "BrauerClass":
        require_taylor_azumaya(A)
        return cls(A, (name,))

    def __mul__(self, other: "BrauerClass") -> "BrauerClass":
        # tensor products of validated representatives are not re-tested
        return BrauerClass(brauer_product(self.representative, other.representative),
                           self.provenance + ("(x)",) + other.provenance)

    def inverse(self) -> "BrauerClass":
        return BrauerClass(brauer_inverse(self.representative), self.provenance + ("op",))

    def is_trivial(self) -> bool:
        return brauer_trivial(self.representative)

    def equals(self, other: "BrauerClass") -> bool:
        return bool(morita_equivalent(self.representative, other.representative, check_inputs=False))
