import logging

import numpy as np
from dataclasses import dataclass, field
from typing import Optional, Tuple

from src.scalars.scalars import InputError, CapExceededError, InternalInconsistencyError, RESIDUE_RING
from src.scalars.linalg import NoSolutionError, solve, nullspace, column_basis, kron, vec_left, vec_right
from src.finalg.finalg import (
    FinAlgebra, AlgebraMap, algebra_on_basis, is_unital, is_faithful,
)
from src.azumaya.elementary import DualPair, elementary_from_pair

logger = logging.getLogger(__name__)

MAX_MULTIPLIER_DIM = 12


@dataclass(frozen=True, eq=False)
class Multiplier:
    """Pair (rho1, rho2) of endomorphisms of A with a rho1(b) = rho2(a) b.

    Args:
        base: The algebra A.
        rho1: Right A-linear map, the left action of the multiplier.
        rho2: Left A-linear map, the right action of the multiplier.
    """
    base: FinAlgebra
    rho1: np.ndarray = field(repr=False)
    rho2: np.ndarray = field(repr=False)

    def defect(self) -> Optional[Tuple[str, int, int]]:
        """First violated identity as (kind, i, j), or None."""
        A = self.base
        ring = A.ring
        for y in range(A.dim):
            if not ring.equal_arrays(ring.dot(self.rho1, A.right_ops[y]), ring.dot(A.right_ops[y], self.rho1)):
                return "rho1 not right linear", y, y
            if not ring.equal_arrays(ring.dot(self.rho2, A.left_ops[y]), ring.dot(A.left_ops[y], self.rho2)):
                return "rho2 not left linear", y, y
        for a in range(A.dim):
            lhs = ring.dot(A.left_ops[a], self.rho1)
            rhs = ring.dot(A.right_ops, self.rho2[:, a]).T
            bad = np.flatnonzero(np.any(ring.reduce(lhs - rhs) != 0, axis=0))
            if bad.size:
                return "a rho1(b) != rho2(a) b", a, int(bad[0])
        return None

    def __mul__(self, other: "Multiplier") -> "Multiplier":
        ring = self.base.ring
        return Multiplier(self.base, ring.dot(self.rho1, other.rho1), ring.dot(other.rho2, self.rho2))


@dataclass(frozen=True, eq=False)
class MultiplierAlgebra:
    """M(A) on a solved basis of multipliers.

    Args:
        base: The algebra A.
        algebra: M(A) as a FinAlgebra with identity (id, id).
        rho1: Stack (k, n, n) of the basis left actions.
        rho2: Stack (k, n, n) of the basis right actions.
    """
    base: FinAlgebra
    algebra: FinAlgebra
    rho1: np.ndarray = field(repr=False)
    rho2: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def stacked(self) -> np.ndarray:
        """Basis as columns of [vec rho1; vec rho2]."""
        k = self.dim
        n = self.base.dim
        return np.concatenate([self.rho1.reshape(k, n * n), self.rho2.reshape(k, n * n)], axis=1).T

    def multiplier(self, coords: np.ndarray) -> Multiplier:
        ring = self.base.ring
        coords = ring.reduce(np.asarray(coords))
        rho1 = ring.reduce(np.tensordot(coords, self.rho1, ([0], [0])))
        rho2 = ring.reduce(np.tensordot(coords, self.rho2, ([0], [0])))
        return Multiplier(self.base, rho1, rho2)

    def coordinates(self, x: Multiplier) -> np.ndarray:
        """Coordinates of a multiplier; NoSolutionError when it is not one."""
        ring = self.base.ring
        target = np.concatenate([np.asarray(x.rho1).reshape(-1), np.asarray(x.rho2).reshape(-1)])
        return solve(ring, self.stacked(), target)

    def of_element(self, a: np.ndarray) -> Multiplier:
        """The multiplier (L_a, R_a) of an element of A."""
        return Multiplier(self.base, self.base.left_matrix(a), self.base.right_matrix(a))


def _multiplier_system(A: FinAlgebra) -> np.ndarray:
    ring = A.ring
    n = A.dim
    nn = n * n
    eye = ring.eye(n)
    zero = ring.zeros((nn, nn))
    blocks = []
    for y in range(n):
        R = A.right_ops[y]
        L = A.left_ops[y]
        blocks.append(np.concatenate([vec_right(ring, R, n) - vec_left(ring, R, n), zero], axis=1))
        blocks.append(np.concatenate([zero, vec_right(ring, L, n) - vec_left(ring, L, n)], axis=1))
    # rows (a, b, l): (L_a X)[l, b] - (R_b Y)[l, a]
    CX = A.left_ops[:, None, :, :, None] * eye[None, :, None, None, :]
    CY = A.right_ops[None, :, :, :, None] * eye[:, None, None, None, :]
    blocks.append(np.concatenate([CX.reshape(n ** 3, nn), -CY.reshape(n ** 3, nn)], axis=1))
    return ring.reduce(np.concatenate(blocks, axis=0))


def multiplier_algebra(A: FinAlgebra, max_dim: int = MAX_MULTIPLIER_DIM) -> MultiplierAlgebra:
    """
    Multiplier algebra M(A) with product (r1, r2)(s1, s2) = (r1 s1, s2 r2).

    Parameters:
    A: unital, faithful algebra
    max_dim: cap on dim A for the identity-free linear system

    Returns:
    MultiplierAlgebra
    """
    ring = A.ring
    n = A.dim
    if not is_faithful(A):
        raise InputError("Multiplier algebra needs a faithful algebra")
    if A.has_identity:
        # M(A) = A through a -> (L_a, R_a)
        rho1 = np.stack([A.left_ops[a] for a in range(n)])
        rho2 = np.stack([A.right_ops[a] for a in range(n)])
        M = FinAlgebra(ring, n, A.sc, A.identity, A.labels)
        return MultiplierAlgebra(A, M, rho1, rho2)
    if ring.kind == RESIDUE_RING:
        raise InputError("Multipliers over Z/n are supported only for algebras with identity")
    if n > max_dim:
        raise CapExceededError(f"Multiplier system for dim {n} exceeds cap {max_dim}")
    if not is_unital(A):
        raise InputError("Multiplier algebra needs a unital algebra")
    nn = n * n
    basis = column_basis(ring, nullspace(ring, _multiplier_system(A)))
    k = basis.shape[1]
    X = basis[:nn].T.reshape(k, n, n)
    Y = basis[nn:].T.reshape(k, n, n)
    XX = np.matmul(X[:, None], X[None, :])
    YY = np.matmul(Y[None, :], Y[:, None])
    products = ring.reduce(np.concatenate([XX.reshape(k, k, nn), YY.reshape(k, k, nn)], axis=2))
    identity = np.concatenate([ring.eye(n).reshape(-1), ring.eye(n).reshape(-1)])
    labels = [f"m{s}" for s in range(k)]
    M = algebra_on_basis(ring, basis, products, identity=identity, labels=labels)
    logger.debug("M(A) for dim %d without identity has dimension %d", n, k)
    return MultiplierAlgebra(A, M, ring.reduce(X), ring.reduce(Y))


def canonical_embedding(A: FinAlgebra, M: Optional[MultiplierAlgebra] = None,
                        require_injective: bool = True) -> AlgebraMap:
    """
    a -> (L_a, R_a) as an algebra map A -> M(A).

    Parameters:
    A: unital, faithful algebra
    M: precomputed M(A)
    require_injective: raise when some a is killed from both sides

    Returns:
    AlgebraMap, injective unless require_injective is False
    """
    if M is None:
        M = multiplier_algebra(A)
    ring = A.ring
    if A.dim == 0:
        return AlgebraMap(A, M.algebra, ring.zeros((M.dim, 0)))
    cols = [M.coordinates(M.of_element(A.basis_vector(a))) for a in range(A.dim)]
    embedding = AlgebraMap(A, M.algebra, np.stack(cols, axis=1))
    if not embedding.is_injective():
        if require_injective:
            raise InternalInconsistencyError("Embedding A -> M(A) is not injective")
        logger.debug("A -> M(A) has a kernel: A has a two-sided annihilator")
    return embedding


@dataclass(frozen=True, eq=False)
class MultiplierModel:
    """The model E-bar of M(E(P)) with the mutually inverse maps alpha, beta.

    Args:
        pair: The dual pair P.
        algebra: E-bar, pairs (F, F') with mu F = F'^T mu, product (F G, G' F').
        pairs: Stack of basis (F, F') as concatenated vec columns.
        multipliers: M(E(P)).
        alpha: E-bar -> M(E(P)).
        beta: M(E(P)) -> E-bar.
    """
    pair: DualPair
    algebra: FinAlgebra
    pairs: np.ndarray = field(repr=False)
    multipliers: MultiplierAlgebra = field(repr=False)
    alpha: AlgebraMap = field(repr=False)
    beta: AlgebraMap = field(repr=False)


def _model_algebra(P: DualPair) -> Tuple[FinAlgebra, np.ndarray]:
    ring = P.ring
    m, mp = P.m, P.mprime
    eye_mp = ring.eye(mp)
    # mu F - F'^T mu = 0, entry (j, i)
    lhs = vec_left(ring, P.mu, m)
    rhs = (P.mu.T[None, :, :, None] * eye_mp[:, None, None, :]).reshape(mp * m, mp * mp)
    system = np.concatenate([lhs, -rhs], axis=1)
    basis = column_basis(ring, nullspace(ring, system))
    k = basis.shape[1]
    F = basis[:m * m].T.reshape(k, m, m)
    Fp = basis[m * m:].T.reshape(k, mp, mp)
    FF = np.matmul(F[:, None], F[None, :]).reshape(k, k, m * m)
    FpFp = np.matmul(Fp[None, :], Fp[:, None]).reshape(k, k, mp * mp)
    products = ring.reduce(np.concatenate([FF, FpFp], axis=2))
    identity = np.concatenate([ring.eye(m).reshape(-1), eye_mp.reshape(-1)])
    algebra = algebra_on_basis(ring, basis, products, identity=identity,
                               labels=[f"f{s}" for s in range(k)])
    return algebra, basis


def elementary_multiplier_model(P: DualPair, max_dim: int = MAX_MULTIPLIER_DIM) -> MultiplierModel:
    """
    E-bar = {(F, F') : mu(m' (x) F m) = mu(F' m' (x) m)} and its isomorphism with M(E(P)).

    Parameters:
    P: dual pair
    max_dim: cap on dim E(P) for the multiplier solve

    Returns:
    MultiplierModel with alpha and beta verified mutually inverse
    """
    ring = P.ring
    m, mp = P.m, P.mprime
    E = elementary_from_pair(P).algebra
    M = multiplier_algebra(E, max_dim=max_dim)
    model, basis = _model_algebra(P)
    k = model.dim
    eye_m = ring.eye(m)
    eye_mp = ring.eye(mp)
    alpha_cols = []
    for s in range(k):
        F = basis[:m * m, s].reshape(m, m)
        Fp = basis[m * m:, s].reshape(mp, mp)
        x = Multiplier(E, kron(ring, F, eye_mp), kron(ring, eye_m, Fp))
        alpha_cols.append(M.coordinates(x))
    alpha = AlgebraMap(model, M.algebra, np.stack(alpha_cols, axis=1), unit_preserving=True)

    terms = P.unit_terms()
    beta_cols = []
    for t in range(M.dim):
        rho1, rho2 = M.rho1[t], M.rho2[t]
        F = ring.zeros((m, m))
        Fp = ring.zeros((mp, mp))
        for pprime, n0 in terms:
            mu_n = ring.dot(P.mu, n0)
            p_mu = ring.dot(pprime, P.mu)
            for i in range(m):
                Z = ring.dot(rho1, np.multiply.outer(eye_m[i], pprime).reshape(-1)).reshape(m, mp)
                F[:, i] = ring.reduce(F[:, i] + ring.dot(Z, mu_n))
            for j in range(mp):
                W = ring.dot(rho2, np.multiply.outer(n0, eye_mp[j]).reshape(-1)).reshape(m, mp)
                Fp[:, j] = ring.reduce(Fp[:, j] + ring.dot(p_mu, W))
        target = np.concatenate([F.reshape(-1), Fp.reshape(-1)])
        beta_cols.append(solve(ring, basis, target))
    beta = AlgebraMap(M.algebra, model, np.stack(beta_cols, axis=1), unit_preserving=True)

    if not ring.equal_arrays(ring.dot(beta.matrix, alpha.matrix), ring.eye(k)):
        raise InternalInconsistencyError("beta after alpha is not the identity on E-bar")
    if not ring.equal_arrays(ring.dot(alpha.matrix, beta.matrix), ring.eye(M.dim)):
        raise InternalInconsistencyError("alpha after beta is not the identity on M(E)")
    logger.debug("E-bar of (%d, %d) has dimension %d", m, mp, k)
    return MultiplierModel(P, model, basis, M, alpha, beta)


def is_ideal_image(M: MultiplierAlgebra, embedding: AlgebraMap) -> bool:
    """The embedded copy of A is a two-sided ideal of M(A)."""
    ring = M.base.ring
    image = embedding.matrix
    if image.shape[1] == 0:
        return True
    for s in range(M.dim):
        left = ring.dot(M.algebra.left_ops[s], image)
        right = ring.dot(M.algebra.right_ops[s], image)
        for block in (left, right):
            try:
                solve(ring, image, block)
            except NoSolutionError:
                return False
    return True


def unit_inverse(A: FinAlgebra, x: np.ndarray) -> Optional[np.ndarray]:
    """Two-sided inverse of x in an algebra with identity, or None."""
    ring = A.ring
    if not A.has_identity:
        raise InputError("Units need an algebra with identity")
    try:
        y = solve(ring, A.left_matrix(x), A.identity)
    except NoSolutionError:
        return None
    if not ring.equal_arrays(A.product(y, x), A.identity):
        return None
    return y
