import math
import logging

import numpy as np
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

from src.scalars.scalars import Ring, InputError, CapExceededError, RESIDUE_RING, encode_array
from src.scalars.linalg import (
    Mat, NoSolutionError, solve, nullspace, rank, span_contains, first_outside,
    column_basis, inverse, vec_left, vec_right,
)
from src.utils import sha256_of

logger = logging.getLogger(__name__)

MAX_DIM = 64
# derived constructions above this size skip the n^4 associativity scan
ASSOCIATIVITY_CHECK_DIM = 32
MAX_TENSOR_SQUARE = 1024


class NonAssociativeError(InputError):
    """(x_i x_j) x_l != x_i (x_j x_l) for the witness triple (i, j, l)."""


@dataclass(frozen=True, eq=False)
class FinAlgebra:
    """Finite-dimensional associative algebra given by structure constants.

    Args:
        ring: Coefficient ring.
        dim: Number of basis vectors.
        sc: Array (dim, dim, dim) with x_i x_j = sum_l sc[i, j, l] x_l.
        identity: Coordinates of the identity element, or None.
        labels: Basis labels, used in reports only.
    """
    ring: Ring
    dim: int
    sc: np.ndarray = field(repr=False)
    identity: Optional[np.ndarray] = field(default=None, repr=False)
    labels: Tuple[str, ...] = ()

    @property
    def has_identity(self) -> bool:
        return self.identity is not None

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.ring.zeros(self.dim)
        v[i] = self.ring.one
        return v

    def zero(self) -> np.ndarray:
        return self.ring.zeros(self.dim)

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        y = np.asarray(y)
        return self.ring.reduce(np.tensordot(np.tensordot(x, self.sc, ([0], [0])), y, ([0], [0])))

    def left_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> x y."""
        return self.ring.reduce(np.tensordot(np.asarray(x), self.sc, ([0], [0])).T)

    def right_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> y x."""
        return self.ring.reduce(np.tensordot(np.asarray(x), self.sc, ([0], [1])).T)

    @cached_property
    def left_ops(self) -> np.ndarray:
        """Stack of L_i = left multiplication by x_i."""
        return self.ring.reduce(self.sc.transpose(0, 2, 1))

    @cached_property
    def right_ops(self) -> np.ndarray:
        """Stack of R_j = right multiplication by x_j."""
        return self.ring.reduce(self.sc.transpose(1, 2, 0))

    @cached_property
    def products_matrix(self) -> np.ndarray:
        """dim x dim^2 matrix of the multiplication map A (x) A -> A, column i*dim+j = x_i x_j."""
        return self.sc.reshape(self.dim * self.dim, self.dim).T.copy()

    @cached_property
    def fingerprint(self) -> str:
        return sha256_of({"ring": self.ring.literal, "sc": encode_array(self.ring, self.sc)})

    def is_commutative(self) -> bool:
        return self.ring.equal_arrays(self.sc, self.sc.transpose(1, 0, 2))

    def encode(self) -> dict:
        out = {"ring": self.ring.literal, "dim": self.dim,
               "sc": encode_array(self.ring, self.sc)}
        if self.identity is not None:
            out["identity"] = encode_array(self.ring, self.identity)
        if self.labels:
            out["labels"] = list(self.labels)
        return out

    def __repr__(self) -> str:
        unit = "with identity" if self.has_identity else "no identity"
        return f"FinAlgebra(dim={self.dim} over {self.ring}, {unit})"


def associativity_witness(ring: Ring, sc: np.ndarray) -> Optional[Tuple[int, int, int]]:
    """First basis triple violating associativity, or None."""
    left = ring.reduce(np.tensordot(sc, sc, ([2], [0])))
    right = ring.reduce(np.tensordot(sc, sc, ([2], [1])).transpose(2, 0, 1, 3))
    bad = np.argwhere(ring.reduce(left - right) != 0)
    if bad.size == 0:
        return None
    i, j, l, _ = (int(v) for v in bad[0])
    return i, j, l


def find_identity(ring: Ring, sc: np.ndarray) -> Optional[np.ndarray]:
    """Solve e x_i = x_i = x_i e; None when the system is inconsistent."""
    n = sc.shape[0]
    if n == 0:
        return None
    left = sc.transpose(1, 2, 0).reshape(n * n, n)
    right = sc.transpose(0, 2, 1).reshape(n * n, n)
    system = np.concatenate([left, right], axis=0)
    target = ring.eye(n).reshape(-1)
    rhs = np.concatenate([target, target])
    try:
        e = solve(ring, system, rhs)
    except NoSolutionError:
        return None
    return e


def _identity_defect(ring: Ring, sc: np.ndarray, e: np.ndarray) -> Optional[int]:
    n = sc.shape[0]
    L = ring.reduce(np.tensordot(e, sc, ([0], [0])))
    R = ring.reduce(np.tensordot(e, sc, ([0], [1])))
    eye = ring.eye(n)
    for i in range(n):
        if not (ring.equal_arrays(L[i], eye[i]) and ring.equal_arrays(R[i], eye[i])):
            return i
    return None


def make_algebra(ring: Ring, dim: int, sc, identity=None,
                 labels: Optional[Sequence[str]] = None,
                 verify: Optional[bool] = None,
                 detect_identity: bool = True,
                 max_dim: int = MAX_DIM) -> FinAlgebra:
    """
    Build and validate a FinAlgebra from structure constants.

    Parameters:
    ring: coefficient ring
    dim: number of basis vectors
    sc: array-like of shape (dim, dim, dim)
    identity: optional claimed identity coordinates, verified
    labels: optional basis labels
    verify: run the associativity scan; default is dim <= ASSOCIATIVITY_CHECK_DIM
    detect_identity: solve for an identity when none is given
    max_dim: dimension cap

    Returns:
    FinAlgebra
    """
    if dim < 0:
        raise InputError(f"Negative dimension {dim}")
    if dim > max_dim:
        raise CapExceededError(f"Algebra dimension {dim} exceeds cap {max_dim}",
                               witness={"dim": dim, "max_dim": max_dim})
    sc = ring.reduce(np.asarray(sc) if dim else ring.zeros((0, 0, 0)))
    if sc.shape != (dim, dim, dim):
        raise InputError(f"Structure constants must have shape {(dim, dim, dim)}, got {sc.shape}")
    if labels is not None and len(labels) != dim:
        raise InputError(f"Expected {dim} labels, got {len(labels)}")
    if dim == 0:
        logger.warning("zero-dimensional algebra over %s; every predicate will be false", ring)
    if verify is None:
        verify = dim <= ASSOCIATIVITY_CHECK_DIM
    if verify and dim:
        witness = associativity_witness(ring, sc)
        if witness is not None:
            raise NonAssociativeError(f"Structure constants are not associative at {witness}",
                                      witness=witness)
    if identity is not None:
        identity = ring.reduce(np.asarray(identity)).reshape(-1)
        if identity.shape != (dim,):
            raise InputError(f"Identity must have {dim} coordinates")
        bad = _identity_defect(ring, sc, identity)
        if bad is not None:
            raise InputError(f"Claimed identity fails on basis vector {bad}", witness=bad)
    elif detect_identity:
        identity = find_identity(ring, sc)
    labels = tuple(labels) if labels is not None else tuple(f"x{i}" for i in range(dim))
    return FinAlgebra(ring, dim, sc, identity, labels)


def algebra_on_basis(ring: Ring, basis: np.ndarray, products: np.ndarray,
                     identity: Optional[np.ndarray] = None,
                     labels: Optional[Sequence[str]] = None,
                     verify: Optional[bool] = None) -> FinAlgebra:
    """
    Algebra whose elements are columns of `basis` inside some ambient module.

    Parameters:
    ring: coefficient ring
    basis: (N x k) independent columns spanning a multiplicatively closed set
    products: (k, k, N) ambient coordinates of basis_s * basis_t
    identity: optional ambient coordinates of the identity
    labels: optional basis labels

    Returns:
    FinAlgebra of dimension k
    """
    basis = ring.reduce(basis)
    N, k = basis.shape
    if k == 0:
        return make_algebra(ring, 0, ring.zeros((0, 0, 0)), labels=labels)
    flat = ring.reduce(np.asarray(products)).reshape(k * k, N).T
    try:
        coords = solve(ring, basis, flat)
    except NoSolutionError as exc:
        raise InputError("Basis is not closed under multiplication",
                         witness=None if exc.certificate is None else encode_array(ring, exc.certificate))
    sc = coords.T.reshape(k, k, k)
    unit = None
    if identity is not None:
        unit = solve(ring, basis, ring.reduce(identity))
    return make_algebra(ring, k, sc, identity=unit, labels=labels, verify=verify)


def subalgebra(A: FinAlgebra, basis: np.ndarray, identity: Optional[np.ndarray] = None,
               labels: Optional[Sequence[str]] = None) -> FinAlgebra:
    """Subalgebra spanned by the columns of basis, in those coordinates."""
    ring = A.ring
    basis = ring.reduce(basis)
    T1 = np.tensordot(basis, A.sc, ([0], [0]))
    products = ring.reduce(np.tensordot(T1, basis, ([1], [0])).transpose(0, 2, 1))
    return algebra_on_basis(ring, basis, products, identity=identity, labels=labels)


def rebase(A: FinAlgebra, P: np.ndarray, labels: Optional[Sequence[str]] = None) -> FinAlgebra:
    """Same algebra written in the basis given by the columns of the invertible P."""
    identity = None
    if A.identity is not None:
        identity = A.identity
    return subalgebra(A, P, identity=identity, labels=labels)


# --- constructions -----------------------------------------------------------

def ground_algebra(ring: Ring) -> FinAlgebra:
    """k itself, x x = x."""
    return make_algebra(ring, 1, ring.eye(1).reshape(1, 1, 1), identity=ring.eye(1)[0], labels=["1"])


def matrix_algebra(ring: Ring, n: int) -> FinAlgebra:
    """M_n(k) on matrix units e_ij (index i*n + j), e_ij e_kl = delta_jk e_il."""
    d = n * n
    sc = ring.zeros((d, d, d))
    for i in range(n):
        for j in range(n):
            for l in range(n):
                sc[i * n + j, j * n + l, i * n + l] = ring.one
    identity = ring.eye(n).reshape(-1)
    labels = [f"e{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return make_algebra(ring, d, sc, identity=identity, labels=labels, verify=False)


def truncated_polynomial(ring: Ring, coeffs: Sequence) -> FinAlgebra:
    """
    k[x]/(x^d - sum_i c_i x^i) on the basis 1, x, ..., x^(d-1).

    Parameters:
    ring: coefficient ring
    coeffs: [c_0, ..., c_(d-1)]

    Returns:
    FinAlgebra of dimension d with identity
    """
    d = len(coeffs)
    if d == 0:
        raise InputError("Truncated polynomial algebra needs at least one coefficient")
    c = ring.array(list(coeffs))
    powers = [ring.eye(d)[m] for m in range(d)]
    for _ in range(d, 2 * d - 1):
        prev = powers[-1]
        shifted = ring.zeros(d)
        shifted[1:] = prev[:-1]
        powers.append(ring.reduce(shifted + prev[-1] * c))
    sc = ring.zeros((d, d, d))
    for a in range(d):
        for b in range(d):
            sc[a, b] = powers[a + b]
    labels = ["1"] + [f"x^{m}" if m > 1 else "x" for m in range(1, d)]
    return make_algebra(ring, d, sc, identity=ring.eye(d)[0], labels=labels)


def tensor_product(A: FinAlgebra, B: FinAlgebra, verify: Optional[bool] = None,
                   max_dim: int = MAX_DIM * MAX_DIM) -> FinAlgebra:
    """
    A (x) B with (a (x) b)(a' (x) b') = aa' (x) bb', basis (i, k) -> i * dim B + k.
    """
    if A.ring != B.ring:
        raise InputError(f"Ring mismatch: {A.ring} vs {B.ring}")
    ring = A.ring
    n = A.dim * B.dim
    sc = np.multiply.outer(A.sc, B.sc).transpose(0, 3, 1, 4, 2, 5).reshape(n, n, n)
    identity = None
    if A.identity is not None and B.identity is not None:
        identity = np.multiply.outer(A.identity, B.identity).reshape(-1)
    labels = [f"{a}*{b}" for a in A.labels for b in B.labels]
    if verify is None:
        verify = n <= ASSOCIATIVITY_CHECK_DIM // 2
    return make_algebra(ring, n, sc, identity=identity, labels=labels, verify=verify,
                        detect_identity=identity is None and n <= ASSOCIATIVITY_CHECK_DIM,
                        max_dim=max_dim)


def opposite(A: FinAlgebra) -> FinAlgebra:
    return FinAlgebra(A.ring, A.dim, A.ring.reduce(A.sc.transpose(1, 0, 2)), A.identity, A.labels)


def enveloping(A: FinAlgebra) -> FinAlgebra:
    """A^e = A (x) A^op."""
    return tensor_product(A, opposite(A))


# --- algebra maps ------------------------------------------------------------

def multiplicativity_witness(source: FinAlgebra, target: FinAlgebra, F: np.ndarray,
                             anti: bool = False) -> Optional[Tuple[int, int]]:
    """First basis pair (i, j) with F(x_i x_j) != F(x_i) F(x_j) (or F(x_j) F(x_i) when anti)."""
    ring = source.ring
    F = ring.reduce(F)
    if source.dim == 0:
        return None
    lhs = ring.reduce(np.tensordot(source.sc, F, ([2], [1])))
    half = ring.reduce(np.tensordot(F, target.sc, ([0], [0])))
    rhs = np.tensordot(half, F, ([1], [0])).transpose(0, 2, 1)
    if anti:
        rhs = rhs.transpose(1, 0, 2)
    bad = np.argwhere(ring.reduce(lhs - rhs) != 0)
    if bad.size == 0:
        return None
    return int(bad[0][0]), int(bad[0][1])


@dataclass(frozen=True, eq=False)
class AlgebraMap:
    """k-linear map between algebras, checked multiplicative at construction.

    Args:
        source: Domain algebra.
        target: Codomain algebra.
        matrix: (target.dim x source.dim) matrix in the two bases.
        unit_preserving: Also require f(1) = 1 when both sides have an identity.
        anti: Check f(xy) = f(y) f(x) instead.
    """
    source: FinAlgebra
    target: FinAlgebra
    matrix: np.ndarray = field(repr=False)
    unit_preserving: bool = False
    anti: bool = False

    def __post_init__(self):
        ring = self.source.ring
        if self.target.ring != ring:
            raise InputError(f"Ring mismatch: {ring} vs {self.target.ring}")
        F = ring.reduce(np.asarray(self.matrix)).reshape(self.target.dim, self.source.dim)
        object.__setattr__(self, "matrix", F)
        witness = multiplicativity_witness(self.source, self.target, F, anti=self.anti)
        if witness is not None:
            kind = "anti-multiplicative" if self.anti else "multiplicative"
            raise InputError(f"Map is not {kind} on basis pair {witness}", witness=witness)
        if self.unit_preserving and self.source.has_identity and self.target.has_identity:
            if not ring.equal_arrays(ring.dot(F, self.source.identity), self.target.identity):
                raise InputError("Map does not preserve the identity")

    @property
    def mat(self) -> Mat:
        return Mat(self.source.ring, self.matrix)

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.source.ring.dot(self.matrix, np.asarray(x))

    def compose(self, other: "AlgebraMap") -> "AlgebraMap":
        """self after other."""
        return AlgebraMap(other.source, self.target,
                          self.source.ring.dot(self.matrix, other.matrix),
                          unit_preserving=self.unit_preserving and other.unit_preserving,
                          anti=self.anti != other.anti)

    def is_injective(self) -> bool:
        ring = self.source.ring
        if self.source.dim == 0:
            return True
        return ring.is_zero_array(nullspace(ring, self.matrix))

    def is_bijective(self) -> bool:
        if self.source.dim != self.target.dim:
            return False
        if self.source.dim == 0:
            return True
        try:
            inverse(self.source.ring, self.matrix)
            return True
        except NoSolutionError:
            return False

    def inverse(self) -> "AlgebraMap":
        inv = inverse(self.source.ring, self.matrix)
        return AlgebraMap(self.target, self.source, inv,
                          unit_preserving=self.unit_preserving, anti=self.anti)

    def certificate(self) -> dict:
        """Re-checkable isomorphism record for reports."""
        return {
            "kind": "isomorphism",
            "ring": self.source.ring.literal,
            "anti": self.anti,
            "source": self.source.encode(),
            "target": self.target.encode(),
            "matrix": encode_array(self.source.ring, self.matrix),
        }


def is_isomorphism(source: FinAlgebra, target: FinAlgebra, F: np.ndarray, anti: bool = False) -> bool:
    if source.dim != target.dim:
        return False
    if multiplicativity_witness(source, target, F, anti=anti) is not None:
        return False
    return AlgebraMap(source, target, F, anti=anti).is_bijective()


# --- predicates --------------------------------------------------------------

@dataclass
class UnitalityCertificate:
    """Outcome of the A (x)_A A -> A test.

    Args:
        unital: Verdict.
        reason: "identity", "bijective", "not surjective", "not injective" or "zero".
        cokernel: A vector outside the image of multiplication, when not surjective.
        kernel: An element of A (x) A killed by multiplication but not in the
            balancing span, when not injective.
    """
    unital: bool
    reason: str
    cokernel: Optional[np.ndarray] = None
    kernel: Optional[np.ndarray] = None

    def __bool__(self):
        return self.unital


def balancing_relations(A: FinAlgebra) -> np.ndarray:
    """Columns ab (x) c - a (x) bc for basis a, b, c, as dim^2 x dim^3 matrix."""
    ring = A.ring
    n = A.dim
    eye = ring.eye(n)
    K1 = A.sc[:, :, None, :, None] * eye[None, None, :, None, :]
    K2 = eye[:, None, None, :, None] * A.sc[None, :, :, None, :]
    return ring.reduce((K1 - K2).reshape(n ** 3, n * n).T)


def is_unital(A: FinAlgebra, max_tensor_square: int = MAX_TENSOR_SQUARE) -> UnitalityCertificate:
    """
    Is the canonical map A (x)_A A -> A an isomorphism?

    Parameters:
    A: algebra
    max_tensor_square: cap on dim^2 for the identity-free computation

    Returns:
    UnitalityCertificate
    """
    if A.dim == 0:
        return UnitalityCertificate(False, "zero")
    if A.has_identity:
        return UnitalityCertificate(True, "identity")
    ring = A.ring
    n = A.dim
    if n * n > max_tensor_square:
        raise CapExceededError(f"A (x) A has dimension {n * n}, above cap {max_tensor_square}")
    P = A.products_matrix
    eye = ring.eye(n)
    missing = first_outside(ring, P, eye)
    if missing is not None:
        return UnitalityCertificate(False, "not surjective", cokernel=eye[:, missing])
    K = balancing_relations(A)
    kernel = nullspace(ring, P)
    if ring.is_field:
        # K lies in ker m by associativity, so equal ranks settle containment
        if rank(ring, K) == kernel.shape[1]:
            return UnitalityCertificate(True, "bijective")
    elif span_contains(ring, K, kernel):
        return UnitalityCertificate(True, "bijective")
    bad = first_outside(ring, K, kernel)
    return UnitalityCertificate(False, "not injective",
                                kernel=None if bad is None else kernel[:, bad])


def unital_decomposition(A: FinAlgebra, alternate: bool = False) -> np.ndarray:
    """
    Fixed decompositions x_a = sum_ij T[a, i, j] x_i x_j.

    Parameters:
    A: unital algebra
    alternate: return a second, different decomposition where one exists

    Returns:
    T: array (dim, dim, dim)
    """
    ring = A.ring
    n = A.dim
    if A.has_identity:
        T = ring.zeros((n, n, n))
        e = A.identity
        for a in range(n):
            if alternate:
                T[a, a, :] = e
            else:
                T[a, :, a] = e
        return T
    P = A.products_matrix
    try:
        X = solve(ring, P, ring.eye(n))
    except NoSolutionError:
        raise InputError("Algebra is not unital: A A != A")
    if alternate:
        N = nullspace(ring, P)
        if N.shape[1]:
            X = ring.reduce(X + N[:, :1])
    return ring.reduce(X.T.reshape(n, n, n))


@dataclass
class EndoAlgebra:
    """End_{A^e}(A) realised as an algebra of maps.

    Args:
        algebra: Commutative algebra in the basis of `maps`, product = composition.
        maps: Array (k, dim, dim) of the basis endomorphisms.
        elements: Central elements z_s with maps[s] = L_{z_s}, when A has an identity.
    """
    algebra: FinAlgebra
    maps: np.ndarray
    elements: Optional[np.ndarray] = None

    @property
    def dim(self) -> int:
        return self.algebra.dim


def algebra_generators(A: FinAlgebra) -> List[int]:
    """Greedy set of basis indices generating A as an algebra (with 1 if present)."""
    ring = A.ring
    n = A.dim
    if n == 0:
        return []
    gens: List[int] = []
    span = A.identity.reshape(-1, 1) if A.has_identity else ring.zeros((n, 0))
    for i in range(n):
        x = A.basis_vector(i)
        if span.shape[1] and span_contains(ring, span, x):
            continue
        gens.append(i)
        span = _generated_span(A, gens)
        if span.shape[1] == n and ring.is_field:
            break
    return gens


def _generated_span(A: FinAlgebra, gens: List[int]) -> np.ndarray:
    ring = A.ring
    cols = [A.basis_vector(g) for g in gens]
    if A.has_identity:
        cols.insert(0, A.identity)
    span = column_basis(ring, np.stack(cols, axis=1))
    frontier = [span[:, k] for k in range(span.shape[1])]
    while frontier:
        fresh = []
        for s in frontier:
            for g in gens:
                v = ring.dot(A.left_ops[g], s)
                if ring.is_zero_array(v) or span_contains(ring, span, v):
                    continue
                span = np.concatenate([span, v.reshape(-1, 1)], axis=1)
                fresh.append(v)
        frontier = fresh
    return span


def center_endos(A: FinAlgebra, max_tensor_square: int = MAX_TENSOR_SQUARE) -> EndoAlgebra:
    """
    End_{A^e}(A): all phi with phi(a x b) = a phi(x) b, with composition.

    Parameters:
    A: unital algebra
    max_tensor_square: cap on dim^2 unknowns for identity-free algebras

    Returns:
    EndoAlgebra
    """
    ring = A.ring
    n = A.dim
    if not is_unital(A, max_tensor_square):
        raise InputError("Center is only defined for unital algebras")
    if A.has_identity:
        # phi = L_z with z central; constraints on generators suffice
        gens = algebra_generators(A)
        blocks = [ring.reduce(A.right_ops[g] - A.left_ops[g]) for g in gens]
        Z = nullspace(ring, np.concatenate(blocks, axis=0)) if blocks else ring.eye(n)
        Z = column_basis(ring, Z)
        k = Z.shape[1]
        maps = np.stack([A.left_matrix(Z[:, s]) for s in range(k)])
        center = subalgebra(A, Z, identity=A.identity)
        logger.debug("center of %r has dimension %d", A, k)
        return EndoAlgebra(center, maps, Z)
    if n * n > max_tensor_square:
        raise CapExceededError(f"Center system has {n * n} unknowns, above cap {max_tensor_square}")
    blocks = []
    for a in range(n):
        for op in (A.left_ops[a], A.right_ops[a]):
            blocks.append(vec_right(ring, op, n) - vec_left(ring, op, n))
    N = column_basis(ring, nullspace(ring, np.concatenate(blocks, axis=0)))
    k = N.shape[1]
    maps = np.stack([N[:, s].reshape(n, n) for s in range(k)])
    products = np.stack([np.stack([ring.dot(maps[s], maps[t]).reshape(-1) for t in range(k)])
                         for s in range(k)])
    algebra = algebra_on_basis(ring, N, products, identity=ring.eye(n).reshape(-1))
    logger.debug("center of %r has dimension %d (identity-free route)", A, k)
    return EndoAlgebra(algebra, maps)


def is_faithful(A: FinAlgebra) -> bool:
    """
    No nonzero scalar kills A.

    The annihilator is taken on the span A A of all products, which is A
    itself for unital algebras; over fields any nonzero algebra is faithful.
    """
    if A.dim == 0:
        return False
    if A.ring.is_field:
        return True
    if A.ring.kind == RESIDUE_RING:
        g = A.ring.modulus
        for v in A.sc.reshape(-1):
            g = math.gcd(g, int(v))
            if g == 1:
                return True
        return g == 1
    return True
