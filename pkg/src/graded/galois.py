import logging

import numpy as np
from dataclasses import dataclass, field
from typing import List, Optional

from src.scalars.scalars import Ring, InputError, InternalInconsistencyError, encode_array
from src.scalars.linalg import NoSolutionError, inverse, nullspace, normalize_column, scalar_ratio, column_basis
from src.finalg.finalg import FinAlgebra, AlgebraMap, make_algebra, algebra_on_basis
from src.graded.graded import (
    GradedAlgebra, grading_from_degrees, is_strongly_graded, graded_isomorphism,
)
from src.grouplib.groups import FinGroup
from src.grouplib.cohomology import Cocycle, cohomologous, is_coboundary
from src.scalars.units import MAX_UNITS

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GaloisObject:
    """kG-Galois object with its validation artifacts.

    Args:
        graded: The graded algebra S.
        gamma: Matrix of s (x) t -> sum_g s t_g (x) g, rows (l, g) -> l*|G| + g.
        gamma_inverse: Exact inverse of gamma.
        basis: (dim x |G|) matrix whose column g spans S_g, column e the identity.
        cocycle: v_g v_h = alpha(g, h) v_gh.
    """
    graded: GradedAlgebra
    gamma: np.ndarray = field(repr=False)
    gamma_inverse: np.ndarray = field(repr=False)
    basis: np.ndarray = field(repr=False)
    cocycle: Cocycle = field(repr=False)

    @property
    def algebra(self) -> FinAlgebra:
        return self.graded.algebra

    @property
    def group(self) -> FinGroup:
        return self.graded.group

    @property
    def ring(self) -> Ring:
        return self.graded.ring

    @property
    def dim(self) -> int:
        return self.graded.dim


@dataclass
class GaloisCheck:
    """Outcome of galois_check.

    Args:
        is_galois: Verdict.
        gamma_bijective: gamma is invertible.
        trivial_unit_component: S_e is spanned by the identity.
        strongly_graded: S_g S_h = S_gh for all g, h.
        reason: Why the verdict is negative, empty otherwise.
        kernel: A nonzero element of ker gamma when gamma is singular.
        galois: The validated object on success.
    """
    is_galois: bool
    gamma_bijective: bool
    trivial_unit_component: bool
    strongly_graded: bool
    reason: str = ""
    kernel: Optional[np.ndarray] = None
    galois: Optional[GaloisObject] = None

    def __bool__(self):
        return self.is_galois


def canonical_map(S: GradedAlgebra) -> np.ndarray:
    """gamma as a (dim*|G| x dim^2) matrix."""
    A = S.algebra
    n = A.dim
    m = S.group.order
    # (i, k', l) x (g, k', k) -> (i, l, g, k)
    raw = np.tensordot(A.sc, S.projections, ([1], [1]))
    return S.ring.reduce(raw.transpose(1, 2, 0, 3).reshape(n * m, n * n))


def _unit_component(S: GradedAlgebra) -> bool:
    A = S.algebra
    if not A.has_identity:
        return False
    e = S.group.identity
    if not S.is_homogeneous(A.identity, e):
        return False
    Se = S.component(e)
    return Se.shape[1] == 1 and scalar_ratio(S.ring, Se[:, 0], A.identity) is not None and \
        S.ring.is_unit(scalar_ratio(S.ring, Se[:, 0], A.identity))


def _extract(S: GradedAlgebra) -> Optional[tuple]:
    """(basis, cocycle) from rank-1 components, or None when a component is not free of rank 1."""
    ring = S.ring
    G = S.group
    A = S.algebra
    cols = []
    for g in G.elements():
        if g == G.identity:
            cols.append(A.identity)
            continue
        comp = S.component(g)
        if comp.shape[1] != 1:
            return None
        cols.append(normalize_column(ring, comp[:, 0]))
    V = np.stack(cols, axis=1)
    vals = np.empty((G.order, G.order), dtype=object)
    for g in G.elements():
        for h in G.elements():
            c = scalar_ratio(ring, A.product(V[:, g], V[:, h]), V[:, G.mul(g, h)])
            if c is None or not ring.is_unit(c):
                return None
            vals[g, h] = ring.canonical(c)
    alpha = Cocycle(G, ring, vals)
    if alpha.defect() is not None:
        raise InternalInconsistencyError("extracted values violate the cocycle identity")
    return V, alpha


def galois_check(S: GradedAlgebra) -> GaloisCheck:
    """
    Decide whether S is a kG-Galois object through the canonical map gamma.

    Parameters:
    S: graded algebra

    Returns:
    GaloisCheck; on success .galois holds basis, gamma^-1 and cocycle
    """
    ring = S.ring
    gamma = canonical_map(S)
    unit_ok = _unit_component(S)
    strong = bool(is_strongly_graded(S))
    gamma_inv = None
    kernel = None
    if gamma.shape[0] == gamma.shape[1]:
        try:
            gamma_inv = inverse(ring, gamma)
        except NoSolutionError:
            gamma_inv = None
    if gamma_inv is None:
        N = nullspace(ring, gamma)
        nz = [j for j in range(N.shape[1]) if not ring.is_zero_array(N[:, j])]
        kernel = N[:, nz[0]] if nz else None
    bijective = gamma_inv is not None
    if not unit_ok:
        return GaloisCheck(False, bijective, False, strong, "S_e != k", kernel)
    if not bijective:
        return GaloisCheck(False, False, True, strong, "gamma is singular", kernel)
    extracted = _extract(S)
    if extracted is None:
        return GaloisCheck(False, True, True, strong, "a component is not free of rank 1")
    V, alpha = extracted
    galois = GaloisObject(S, gamma, gamma_inv, V, alpha)
    logger.debug("Galois object over %s, cocycle %s", S.group.name, alpha.encode())
    return GaloisCheck(True, True, True, strong, "", None, galois)


def require_galois(S: GradedAlgebra) -> GaloisObject:
    check = galois_check(S)
    if not check:
        raise InputError(f"Not a Galois object: {check.reason}")
    return check.galois


def crossed_product(ring: Ring, group: FinGroup, alpha: Cocycle) -> GaloisObject:
    """
    S = sum_g k v_g with v_g v_h = alpha(g, h) v_gh, normalized first.

    Parameters:
    ring: k
    group: G
    alpha: 2-cocycle

    Returns:
    GaloisObject
    """
    if alpha.ring != ring or not np.array_equal(alpha.group.table, group.table):
        raise InputError("Cocycle does not match (ring, group)")
    alpha = alpha.normalize()
    m = group.order
    sc = ring.zeros((m, m, m))
    for g in group.elements():
        for h in group.elements():
            sc[g, h, group.mul(g, h)] = alpha.values[g, h]
    labels = [f"v_{group.label(g)}" for g in group.elements()]
    A = make_algebra(ring, m, sc, identity=ring.eye(m)[group.identity], labels=labels, verify=True)
    S = grading_from_degrees(A, group, list(group.elements()))
    check = galois_check(S)
    if not check:
        raise InternalInconsistencyError(f"crossed product is not Galois: {check.reason}")
    return check.galois


def cotensor(S: GaloisObject, T: GaloisObject) -> GaloisObject:
    """
    S box T = sum_g S_g (x) T_g on the basis w_g = v_g (x) v'_g.
    """
    if S.ring != T.ring or not np.array_equal(S.group.table, T.group.table):
        raise InputError("Cotensor needs Galois objects over the same (ring, group)")
    ring = S.ring
    G = S.group
    m = G.order
    W = np.stack([np.multiply.outer(S.basis[:, g], T.basis[:, g]).reshape(-1) for g in G.elements()],
                 axis=1)
    W = ring.reduce(W)
    products = ring.zeros((m, m, W.shape[0]))
    for g in G.elements():
        for h in G.elements():
            left = S.algebra.product(S.basis[:, g], S.basis[:, h])
            right = T.algebra.product(T.basis[:, g], T.basis[:, h])
            products[g, h] = ring.reduce(np.multiply.outer(left, right).reshape(-1))
    identity = ring.reduce(np.multiply.outer(S.algebra.identity, T.algebra.identity).reshape(-1))
    labels = [f"w_{G.label(g)}" for g in G.elements()]
    A = algebra_on_basis(ring, W, products, identity=identity, labels=labels)
    graded = grading_from_degrees(A, G, list(G.elements()))
    check = galois_check(graded)
    if not check:
        raise InternalInconsistencyError(f"cotensor product is not Galois: {check.reason}")
    expected = S.cocycle * T.cocycle
    if not all(expected.values[g, h] == check.galois.cocycle.values[g, h]
               for g in G.elements() for h in G.elements()):
        raise InternalInconsistencyError("cotensor cocycle is not the product of the factors")
    return check.galois


@dataclass
class ClassComparison:
    """Equality test in Gal(k, G).

    Args:
        equal: Verdict.
        witness: b with alpha_S = alpha_T * delta b, when equal.
        isomorphism: Verified graded isomorphism S -> T, when equal.
        note: Scope of a negative verdict.
    """
    equal: bool
    witness: Optional[List] = None
    isomorphism: Optional[AlgebraMap] = None
    note: str = ""

    def __bool__(self):
        return self.equal


def galois_classes_equal(S: GaloisObject, T: GaloisObject, max_units: int = MAX_UNITS) -> ClassComparison:
    """
    Same class in Gal(k, G), with a graded isomorphism built from the coboundary witness.

    Parameters:
    S, T: Galois objects over one (ring, group)
    max_units: unit-group cap

    Returns:
    ClassComparison
    """
    if S.ring != T.ring or not np.array_equal(S.group.table, T.group.table):
        raise InputError("Galois objects live over different (ring, group) pairs")
    ring = S.ring
    result = cohomologous(S.cocycle, T.cocycle, max_units)
    if not result:
        return ClassComparison(False, note=result.note)
    b = result.witness
    V_S_inv = inverse(ring, S.basis)
    D = ring.zeros((S.group.order, S.group.order))
    for g in S.group.elements():
        D[g, g] = ring.canonical(b[g])
    F = ring.dot(ring.dot(T.basis, D), V_S_inv)
    iso = graded_isomorphism(S.graded, T.graded, F)
    return ClassComparison(True, list(b), iso)


def class_is_trivial(S: GaloisObject, max_units: int = MAX_UNITS) -> bool:
    return bool(is_coboundary(S.cocycle, max_units))


def galois_summary(S: GaloisObject) -> dict:
    return {
        "group": S.group.name,
        "dim": S.dim,
        "cocycle": S.cocycle.encode(),
        "basis": encode_array(S.ring, S.basis),
    }


def galois_from_graded(S: GradedAlgebra) -> GaloisObject:
    return require_galois(S)


def homogeneous_columns(S: GradedAlgebra) -> np.ndarray:
    """All component bases side by side, ordered by degree."""
    return np.concatenate([column_basis(S.ring, S.projections[g]) for g in S.group.elements()], axis=1)
