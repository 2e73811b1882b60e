import logging

import numpy as np
from fractions import Fraction
from dataclasses import dataclass
from typing import Any, List, Optional, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from src.scalars.scalars import Ring, RATIONALS, RESIDUE_RING, encode_array
from src.scalars.smith import smith_form, solve_modular, nullspace_modular

logger = logging.getLogger(__name__)


class NoSolutionError(ValueError):
    """Inconsistent linear system.

    Args:
        message: Human readable reason.
        certificate: Row y with y A = 0 and y b != 0.
    """
    def __init__(self, message: str, certificate: Optional[np.ndarray] = None):
        super().__init__(message)
        self.certificate = certificate


@dataclass(frozen=True)
class Mat:
    """Matrix over an exact Ring.

    Args:
        ring: Coefficient ring shared by every entry.
        entries: 2-d numpy array in canonical form.
    """
    ring: Ring
    entries: np.ndarray

    def __post_init__(self):
        entries = self.ring.reduce(self.entries)
        if entries.ndim == 1:
            entries = entries.reshape(-1, 1)
        if entries.ndim != 2:
            raise ValueError(f"Mat needs a 2-d array, got shape {entries.shape}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, ring: Ring, rows: List[List[Any]]) -> "Mat":
        return cls(ring, ring.array(rows))

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Mat":
        return cls(ring, ring.eye(n))

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int) -> "Mat":
        return cls(ring, ring.zeros((rows, cols)))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def T(self) -> "Mat":
        return Mat(self.ring, self.entries.T)

    def _check(self, other: "Mat"):
        if other.ring != self.ring:
            raise ValueError(f"Ring mismatch: {self.ring} vs {other.ring}")

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check(other)
        return Mat(self.ring, self.ring.dot(self.entries, other.entries))

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        return Mat(self.ring, self.entries + other.entries)

    def __sub__(self, other: "Mat") -> "Mat":
        self._check(other)
        return Mat(self.ring, self.entries - other.entries)

    def __neg__(self) -> "Mat":
        return Mat(self.ring, -self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat) or other.ring != self.ring:
            return False
        return self.ring.equal_arrays(self.entries, other.entries)

    def __hash__(self):
        return hash((self.ring, self.entries.shape, tuple(self.tolist_flat())))

    def tolist_flat(self) -> List[Any]:
        return [x for row in self.tolist() for x in row]

    def tolist(self) -> List[List[Any]]:
        return encode_array(self.ring, self.entries)


@dataclass(frozen=True)
class LinearSolution:
    """Particular solution plus generators of the homogeneous solutions.

    Args:
        particular: One solution x of A x = b (as a column Mat).
        nullspace: Columns generating {x : A x = 0}.
    """
    particular: Mat
    nullspace: Mat


# --- row reduction over fields ---------------------------------------------

def _rref_modular(M: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    A = np.array(M, copy=True)
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c] != 0)
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col != 0)
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _rref_rational(M: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    rows, cols = M.shape
    data = {}
    for i in range(rows):
        row = {}
        for j in range(cols):
            v = M[i, j]
            if v != 0:
                row[j] = QQ(v.numerator, v.denominator)
        if row:
            data[i] = row
    dm = DomainMatrix(data, (rows, cols), QQ)
    reduced, pivots = dm.rref()
    pivots = list(pivots)
    out = np.empty((len(pivots), cols), dtype=object)
    out.fill(Fraction(0))
    dense = reduced.to_Matrix()
    for i in range(len(pivots)):
        for j in range(cols):
            v = dense[i, j]
            if v != 0:
                out[i, j] = Fraction(int(v.p), int(v.q))
    return out, pivots


def row_reduce(ring: Ring, M: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form over a field, zero rows dropped.

    Parameters:
    ring: GF(p) or Q
    M: 2-d array

    Returns:
    (R, pivots): R has one row per pivot column
    """
    if not ring.is_field:
        raise ValueError(f"Row reduction needs a field, got {ring}")
    M = ring.reduce(M)
    if M.ndim != 2:
        raise ValueError(f"Expected a matrix, got shape {M.shape}")
    if M.shape[0] == 0 or M.shape[1] == 0:
        return ring.zeros((0, M.shape[1])), []
    if ring.kind == RATIONALS:
        return _rref_rational(M)
    return _rref_modular(M, ring.modulus)


def rank(ring: Ring, M: np.ndarray) -> int:
    """Rank over a field; over Z/n the number of Smith factors not divisible by n."""
    M = ring.reduce(M)
    if M.size == 0:
        return 0
    if ring.kind == RESIDUE_RING:
        return sum(1 for d in smith_form(M).diagonal if d % ring.modulus != 0)
    return len(row_reduce(ring, M)[1])


def nullspace(ring: Ring, M: np.ndarray) -> np.ndarray:
    """Columns generating {x : M x = 0}; a basis over fields."""
    M = ring.reduce(M)
    cols = M.shape[1]
    if ring.kind == RESIDUE_RING:
        if M.shape[0] == 0:
            return ring.eye(cols)
        return ring.reduce(nullspace_modular(M, ring.modulus))
    R, pivots = row_reduce(ring, M)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    N = ring.zeros((cols, len(free)))
    if free:
        if pivots:
            N[pivots, :] = ring.reduce(-R[:, free])
        for k, f in enumerate(free):
            N[f, k] = ring.one
    return N


def _as_columns(ring: Ring, B: np.ndarray) -> Tuple[np.ndarray, bool]:
    B = ring.reduce(B)
    if B.ndim == 1:
        return B.reshape(-1, 1), True
    return B, False


def _certificate(ring: Ring, A: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    # y with y A = 0 and y b = 1: solve [A^T; b^T] y = e_last
    system = np.concatenate([A.T, b.reshape(1, -1)], axis=0)
    rhs = ring.zeros(system.shape[0])
    rhs[-1] = ring.one
    try:
        return solve(ring, system, rhs)
    except NoSolutionError:
        return None


def solve(ring: Ring, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """
    One solution X of A X = B.

    Parameters:
    ring: coefficient ring
    A: matrix (rows x cols)
    B: vector (rows,) or matrix (rows x k)

    Returns:
    X: vector (cols,) or matrix (cols x k)

    Raises:
    NoSolutionError: carrying a certificate row for the first bad column
    """
    A = ring.reduce(A)
    B, was_vector = _as_columns(ring, B)
    rows, cols = A.shape
    if B.shape[0] != rows:
        raise ValueError(f"Shape mismatch: A is {A.shape}, b has {B.shape[0]} rows")
    k = B.shape[1]
    X = ring.zeros((cols, k))
    if ring.kind == RESIDUE_RING:
        n = ring.modulus
        form = smith_form(A) if rows and cols else None
        for col in range(k):
            if form is None:
                if np.any(B[:, col] != 0):
                    raise NoSolutionError("no solution", B[:, col].copy())
                continue
            x, cert = solve_modular(A, B[:, col], n, form=form)
            if x is None:
                raise NoSolutionError("no solution", ring.reduce(cert))
            X[:, col] = ring.reduce(x)
        return X[:, 0] if was_vector else X
    if rows == 0:
        return X[:, 0] if was_vector else X
    R, pivots = row_reduce(ring, np.concatenate([A, B], axis=1))
    a_pivots = [c for c in pivots if c < cols]
    r = len(a_pivots)
    tail = R[r:, cols:]
    if tail.size and np.any(tail != 0):
        bad = int(np.flatnonzero(np.any(tail != 0, axis=0))[0])
        raise NoSolutionError("no solution", _certificate(ring, A, B[:, bad]))
    if r:
        X[a_pivots, :] = R[:r, cols:]
    return X[:, 0] if was_vector else X


def solve_linear(A: Mat, b: Mat) -> LinearSolution:
    """
    Solve A x = b, returning a particular solution and the homogeneous generators.

    Parameters:
    A: coefficient matrix
    b: right-hand side, one column

    Returns:
    LinearSolution

    Raises:
    NoSolutionError: inconsistent system, with certificate row
    """
    if A.ring != b.ring:
        raise ValueError(f"Ring mismatch: {A.ring} vs {b.ring}")
    x = solve(A.ring, A.entries, b.entries[:, 0])
    return LinearSolution(Mat(A.ring, x), Mat(A.ring, nullspace(A.ring, A.entries)))


def inverse(ring: Ring, M: np.ndarray) -> np.ndarray:
    """Exact inverse of a square matrix; NoSolutionError if singular."""
    M = ring.reduce(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError(f"Inverse needs a square matrix, got {M.shape}")
    try:
        return solve(ring, M, ring.eye(n))
    except NoSolutionError as exc:
        raise NoSolutionError("matrix is singular", exc.certificate)


def column_basis(ring: Ring, G: np.ndarray) -> np.ndarray:
    """Independent columns spanning the column space (non-zero columns over Z/n)."""
    G = ring.reduce(G)
    if G.ndim == 1:
        G = G.reshape(-1, 1)
    if G.shape[1] == 0:
        return G
    if ring.kind == RESIDUE_RING:
        keep = [j for j in range(G.shape[1]) if np.any(G[:, j] != 0)]
        return G[:, keep]
    _, pivots = row_reduce(ring, G)
    return G[:, pivots]


def span_contains(ring: Ring, G: np.ndarray, V: np.ndarray) -> bool:
    """True when every column of V lies in the column span of G."""
    V, _ = _as_columns(ring, V)
    G = ring.reduce(G)
    if G.ndim == 1:
        G = G.reshape(-1, 1)
    if G.shape[1] == 0:
        return ring.is_zero_array(V)
    try:
        solve(ring, G, V)
        return True
    except NoSolutionError:
        return False


def spans_equal(ring: Ring, G: np.ndarray, H: np.ndarray) -> bool:
    return span_contains(ring, G, H) and span_contains(ring, H, G)


def first_outside(ring: Ring, G: np.ndarray, V: np.ndarray) -> Optional[int]:
    """Index of the first column of V outside span(G), or None."""
    V, _ = _as_columns(ring, V)
    for j in range(V.shape[1]):
        if not span_contains(ring, G, V[:, j]):
            return j
    return None


def scalar_ratio(ring: Ring, v: np.ndarray, w: np.ndarray) -> Optional[Any]:
    """
    The scalar c with v = c * w, or None if v is not a multiple of w.
    """
    v = ring.reduce(v).reshape(-1)
    w = ring.reduce(w).reshape(-1)
    nz = np.flatnonzero(w != 0)
    if nz.size == 0:
        return ring.zero if ring.is_zero_array(v) else None
    for idx in nz:
        if ring.is_unit(w[idx]):
            c = ring.div(v[idx], w[idx])
            break
    else:
        try:
            c = solve(ring, w.reshape(-1, 1), v)[0]
        except NoSolutionError:
            return None
    if ring.equal_arrays(v, ring.reduce(w * c)):
        return c
    return None


def normalize_column(ring: Ring, v: np.ndarray) -> np.ndarray:
    """Scale v so its first unit entry becomes 1 (fields: first non-zero entry)."""
    v = ring.reduce(v)
    for idx in np.flatnonzero(v != 0):
        if ring.is_unit(v[idx]):
            return ring.reduce(v * ring.inv(v[idx]))
    return v


def kron(ring: Ring, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product with row (i, k) -> i * B.rows + k."""
    A = np.asarray(A)
    B = np.asarray(B)
    out = A[:, None, :, None] * B[None, :, None, :]
    return ring.reduce(out.reshape(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1]))


def vec_left(ring: Ring, B: np.ndarray, n: int) -> np.ndarray:
    """Matrix of X -> B X on row-major vec(X), X of shape (B.cols x n)."""
    return kron(ring, B, ring.eye(n))


def vec_right(ring: Ring, B: np.ndarray, m: int) -> np.ndarray:
    """Matrix of X -> X B on row-major vec(X), X of shape (m x B.rows)."""
    return kron(ring, ring.eye(m), np.asarray(B).T)
