import logging

import numpy as np
from dataclasses import dataclass, field
from typing import Dict

from src.scalars.scalars import Ring, InternalInconsistencyError
from src.scalars.linalg import kron
from src.finalg.finalg import FinAlgebra, make_algebra
from src.graded.graded import GradedAlgebra, grading_from_degrees
from src.grouplib.groups import FinGroup

logger = logging.getLogger(__name__)


def group_algebra(ring: Ring, group: FinGroup) -> GradedAlgebra:
    """
    kG on the basis u_g with u_g u_h = u_gh, graded by deg u_g = g.

    Parameters:
    ring: coefficient ring
    group: G

    Returns:
    GradedAlgebra
    """
    m = group.order
    sc = ring.zeros((m, m, m))
    for g in group.elements():
        for h in group.elements():
            sc[g, h, group.mul(g, h)] = ring.one
    identity = ring.eye(m)[group.identity]
    labels = [f"u_{group.label(g)}" for g in group.elements()]
    A = make_algebra(ring, m, sc, identity=identity, labels=labels)
    return grading_from_degrees(A, group, list(group.elements()))


@dataclass(frozen=True, eq=False)
class DualFunctionAlgebra:
    """k(G) = (kG)* on the basis p_g with its Hopf structure maps.

    Args:
        group: G.
        algebra: k(G), p_g p_h = delta_gh p_g, identity sum p_g.
        comultiplication: (|G|^2 x |G|) matrix of Delta(p_g) = sum_h p_h (x) p_(h^-1 g).
        counit: (1 x |G|) matrix of eps(p_g) = delta_(g, e).
        antipode: (|G| x |G|) matrix of S(p_g) = p_(g^-1).
        checks: Name -> verdict of each Hopf identity.
    """
    group: FinGroup
    algebra: FinAlgebra
    comultiplication: np.ndarray = field(repr=False)
    counit: np.ndarray = field(repr=False)
    antipode: np.ndarray = field(repr=False)
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def ring(self) -> Ring:
        return self.algebra.ring

    def delta(self, x: np.ndarray) -> np.ndarray:
        return self.ring.dot(self.comultiplication, np.asarray(x))


def _hopf_checks(ring: Ring, A: FinAlgebra, Delta: np.ndarray, eps: np.ndarray,
                 S: np.ndarray) -> Dict[str, bool]:
    m = A.dim
    eye = ring.eye(m)
    # k(G) (x) k(G) = k(G x G) multiplies coordinatewise
    pointwise = ring.reduce(Delta[:, :, None] * Delta[:, None, :])
    expected = ring.reduce(Delta[:, :, None] * eye[None, :, :])
    checks = {
        "delta_multiplicative": ring.equal_arrays(pointwise, expected),
        "delta_unital": ring.equal_arrays(ring.dot(Delta, A.identity), ring.reduce(np.ones(m * m, dtype=np.int64))),
        "coassociative": ring.equal_arrays(ring.dot(kron(ring, Delta, eye), Delta),
                                           ring.dot(kron(ring, eye, Delta), Delta)),
        "counit_left": ring.equal_arrays(ring.dot(kron(ring, eps, eye), Delta), eye),
        "counit_right": ring.equal_arrays(ring.dot(kron(ring, eye, eps), Delta), eye),
    }
    convolution = ring.dot(A.products_matrix, ring.dot(kron(ring, S, eye), Delta))
    checks["antipode"] = ring.equal_arrays(convolution, np.multiply.outer(A.identity, eps[0]))
    return checks


def dual_function_algebra(ring: Ring, group: FinGroup) -> DualFunctionAlgebra:
    """
    k(G) with comultiplication, counit and antipode, every Hopf identity verified.

    Parameters:
    ring: coefficient ring
    group: finite G

    Returns:
    DualFunctionAlgebra
    """
    m = group.order
    sc = ring.zeros((m, m, m))
    for g in group.elements():
        sc[g, g, g] = ring.one
    labels = [f"p_{group.label(g)}" for g in group.elements()]
    A = make_algebra(ring, m, sc, identity=ring.reduce(np.ones(m, dtype=np.int64)), labels=labels)
    Delta = ring.zeros((m * m, m))
    for g in group.elements():
        for h in group.elements():
            Delta[h * m + group.mul(group.inv(h), g), g] = ring.one
    eps = ring.zeros((1, m))
    eps[0, group.identity] = ring.one
    S = ring.zeros((m, m))
    for g in group.elements():
        S[group.inv(g), g] = ring.one
    checks = _hopf_checks(ring, A, Delta, eps, S)
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise InternalInconsistencyError(f"k({group.name}) fails Hopf identities: {failed}")
    logger.debug("k(%s) Hopf identities verified", group.name)
    return DualFunctionAlgebra(group, A, Delta, eps, S, checks)
