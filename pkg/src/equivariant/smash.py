import logging

import numpy as np
from dataclasses import dataclass, field
from typing import Dict, Optional

from src.scalars.scalars import InputError
from src.scalars.linalg import kron, span_contains
from src.finalg.finalg import FinAlgebra, AlgebraMap, ASSOCIATIVITY_CHECK_DIM, make_algebra, unital_decomposition
from src.graded.graded import GradedAlgebra, grading_from_degrees
from src.graded.galois import canonical_map
from src.equivariant.gmodule import GModuleAlgebra

logger = logging.getLogger(__name__)

# the balanced-square check works in dim(S)^2 coordinates
MAX_BALANCED_CHECK_DIM = 12


@dataclass(frozen=True, eq=False)
class SmashProduct:
    """A # kG on the basis x_i # g, index g * dim A + i.

    Args:
        base: The G-module algebra A.
        graded: A # kG graded by deg(a # g) = g.
        eta: The embedding a -> a # e.
    """
    base: GModuleAlgebra
    graded: GradedAlgebra
    eta: AlgebraMap = field(repr=False)

    @property
    def algebra(self) -> FinAlgebra:
        return self.graded.algebra

    @property
    def dim(self) -> int:
        return self.graded.dim

    def element(self, a: np.ndarray, g: int) -> np.ndarray:
        """Coordinates of a # g."""
        ring = self.base.ring
        n = self.base.dim
        out = ring.zeros(self.dim)
        out[g * n:(g + 1) * n] = np.asarray(a)
        return out


def smash_constants(A: GModuleAlgebra) -> np.ndarray:
    """(x_i # g)(x_j # h) = x_i (g x_j) # gh."""
    ring = A.ring
    n = A.dim
    G = A.group
    m = G.order
    sc = ring.zeros((m * n, m * n, m * n))
    for g in G.elements():
        # B[i, j, l] = sum_k c[i, k, l] rho_g[k, j]
        block = ring.reduce(np.tensordot(A.algebra.sc, A.action[g], ([1], [0])).transpose(0, 2, 1))
        for h in G.elements():
            gh = G.mul(g, h)
            sc[g * n:(g + 1) * n, h * n:(h + 1) * n, gh * n:(gh + 1) * n] = block
    return sc


def bimodule_operator(S: SmashProduct, a: np.ndarray, a_prime: np.ndarray) -> np.ndarray:
    """(a (x) a') . (b # g) = a b (g a') # g, block diagonal in g."""
    A = S.base
    ring = A.ring
    n = A.dim
    out = ring.zeros((S.dim, S.dim))
    for g in A.group.elements():
        block = ring.dot(A.algebra.left_matrix(a), A.algebra.right_matrix(A.act(g, a_prime)))
        out[g * n:(g + 1) * n, g * n:(g + 1) * n] = block
    return out


def smash_product(A: GModuleAlgebra, verify: Optional[bool] = None) -> SmashProduct:
    """
    A # kG with its grading, the embedding eta and the A^e-action checked.

    Parameters:
    A: unital G-module algebra
    verify: re-run the associativity scan; default is dim <= ASSOCIATIVITY_CHECK_DIM

    Returns:
    SmashProduct
    """
    ring = A.ring
    n = A.dim
    G = A.group
    m = G.order
    N = m * n
    if verify is None:
        verify = N <= ASSOCIATIVITY_CHECK_DIM
    if not verify:
        logger.warning("associativity scan skipped for the %d-dimensional smash product", N)
    identity = None
    if A.algebra.has_identity:
        identity = ring.zeros(N)
        identity[G.identity * n:(G.identity + 1) * n] = A.algebra.identity
    labels = [f"{A.algebra.labels[i]}#{G.label(g)}" for g in G.elements() for i in range(n)]
    algebra = make_algebra(ring, N, smash_constants(A), identity=identity, labels=labels, verify=verify,
                           detect_identity=False, max_dim=max(N, 64))
    graded = grading_from_degrees(algebra, G, [g for g in G.elements() for _ in range(n)])
    E = ring.zeros((N, n))
    E[G.identity * n:(G.identity + 1) * n] = ring.eye(n)
    eta = AlgebraMap(A.algebra, algebra, E)
    S = SmashProduct(A, graded, eta)
    for a in range(n):
        for b in range(n):
            op = bimodule_operator(S, A.algebra.basis_vector(a), A.algebra.basis_vector(b))
            expected = ring.dot(algebra.left_matrix(E[:, a]), algebra.right_matrix(E[:, b]))
            if not ring.equal_arrays(op, expected):
                raise InputError(f"A^e-action on the smash product fails on {(a, b)}")
    logger.debug("smash product of dim %d over %s", N, G.name)
    return S


def beta_inverse_matrix(S: SmashProduct, decomposition: np.ndarray) -> np.ndarray:
    """
    Closed form of beta^-1: (a # g) (x) h -> sum (a_i # g h^-1) (x) ((h g^-1) a'_i # h),
    from a = sum a_i a'_i, as a (dim S^2 x dim S |G|) matrix.
    """
    A = S.base
    ring = A.ring
    G = A.group
    n, m, N = A.dim, G.order, S.dim
    out = ring.zeros((N * N, N * m))
    for g in G.elements():
        for h in G.elements():
            left = ring.zeros((N, n))
            k = G.mul(g, G.inv(h))
            left[k * n:(k + 1) * n] = ring.eye(n)
            right = ring.zeros((N, n))
            right[h * n:(h + 1) * n] = A.action[G.mul(h, G.inv(g))]
            for i in range(n):
                block = ring.dot(ring.dot(left, decomposition[i]), right.T)
                out[:, (g * n + i) * m + h] = block.reshape(-1)
    return out


@dataclass
class BalancedSquareCheck:
    """beta and its closed-form inverse on S (x)_A S.

    Args:
        checked: False when skipped by the size cap.
        beta_kills_relations: beta vanishes on the balancing relations.
        right_inverse: beta beta^-1 = id on S (x) kG.
        left_inverse: beta^-1 beta = id modulo the balancing relations.
    """
    checked: bool
    beta_kills_relations: bool = False
    right_inverse: bool = False
    left_inverse: bool = False

    @property
    def passed(self) -> bool:
        return self.checked and self.beta_kills_relations and self.right_inverse and self.left_inverse

    def verdicts(self) -> Dict[str, bool]:
        return {"checked": self.checked, "beta_kills_relations": self.beta_kills_relations,
                "right_inverse": self.right_inverse, "left_inverse": self.left_inverse}


def balanced_square_check(S: SmashProduct, alternate: bool = False,
                          max_dim: int = MAX_BALANCED_CHECK_DIM) -> BalancedSquareCheck:
    """
    Verify beta((a # g) (x) (b # h)) = (a # g)(b # h) (x) h against its closed-form inverse.

    Parameters:
    S: smash product of a unital algebra
    alternate: use the second unital decomposition
    max_dim: skip above this smash dimension

    Returns:
    BalancedSquareCheck
    """
    ring = S.base.ring
    N = S.dim
    if N > max_dim:
        logger.warning("balanced-square check skipped: smash dimension %d above %d", N, max_dim)
        return BalancedSquareCheck(False)
    beta = canonical_map(S.graded)
    T = unital_decomposition(S.base.algebra, alternate=alternate)
    beta_inv = beta_inverse_matrix(S, T)
    eye = ring.eye(N)
    relations = np.concatenate([
        ring.reduce(kron(ring, S.algebra.right_matrix(S.eta.matrix[:, a]), eye)
                    - kron(ring, eye, S.algebra.left_matrix(S.eta.matrix[:, a])))
        for a in range(S.base.dim)], axis=1)
    kills = ring.is_zero_array(ring.dot(beta, relations))
    right = ring.equal_arrays(ring.dot(beta, beta_inv), ring.eye(beta.shape[0]))
    drift = ring.reduce(ring.dot(beta_inv, beta) - ring.eye(N * N))
    left = span_contains(ring, relations, drift)
    return BalancedSquareCheck(True, kills, right, left)
