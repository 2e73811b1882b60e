import math

import numpy as np
from dataclasses import dataclass
from typing import List, Optional, Tuple


def int_matrix(A) -> np.ndarray:
    """Copy of A as a 2-d object array of Python ints."""
    A = np.asarray(A, dtype=object)
    if A.ndim != 2:
        raise ValueError(f"Expected a 2-d integer matrix, got shape {A.shape}")
    out = np.empty(A.shape, dtype=object)
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            out[i, j] = int(A[i, j])
    return out


def int_identity(n: int) -> np.ndarray:
    out = np.empty((n, n), dtype=object)
    out.fill(0)
    for i in range(n):
        out[i, i] = 1
    return out


def int_vector(values) -> np.ndarray:
    flat = np.asarray(values, dtype=object).reshape(-1)
    out = np.empty(flat.size, dtype=object)
    for idx, v in enumerate(flat):
        out[idx] = int(v)
    return out


def int_matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.dot(np.asarray(A, dtype=object), np.asarray(B, dtype=object))


@dataclass
class SmithForm:
    """Smith normal form U @ A @ V == D.

    Args:
        U: Left unimodular transform (rows x rows).
        D: Diagonal matrix with d_1 | d_2 | ... (rows x cols).
        V: Right unimodular transform (cols x cols).
        U_inv: Inverse of U, tracked when requested.
        V_inv: Inverse of V, tracked when requested.
    """
    U: np.ndarray
    D: np.ndarray
    V: np.ndarray
    U_inv: Optional[np.ndarray] = None
    V_inv: Optional[np.ndarray] = None

    @property
    def diagonal(self) -> List[int]:
        return [int(self.D[i, i]) for i in range(min(self.D.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


class _Reducer:
    """Elementary row/column operations applied to D and mirrored on the transforms."""

    def __init__(self, A, track_inverses: bool):
        self.D = int_matrix(A)
        m, n = self.D.shape
        self.U = int_identity(m)
        self.V = int_identity(n)
        self.U_inv = int_identity(m) if track_inverses else None
        self.V_inv = int_identity(n) if track_inverses else None

    def swap_rows(self, a: int, b: int):
        self.D[[a, b]] = self.D[[b, a]]
        self.U[[a, b]] = self.U[[b, a]]
        if self.U_inv is not None:
            self.U_inv[:, [a, b]] = self.U_inv[:, [b, a]]

    def swap_cols(self, a: int, b: int):
        self.D[:, [a, b]] = self.D[:, [b, a]]
        self.V[:, [a, b]] = self.V[:, [b, a]]
        if self.V_inv is not None:
            self.V_inv[[a, b]] = self.V_inv[[b, a]]

    def add_row(self, target: int, source: int, q: int):
        # row_target += q * row_source
        self.D[target, :] = self.D[target, :] + q * self.D[source, :]
        self.U[target, :] = self.U[target, :] + q * self.U[source, :]
        if self.U_inv is not None:
            self.U_inv[:, source] = self.U_inv[:, source] - q * self.U_inv[:, target]

    def add_col(self, target: int, source: int, q: int):
        # col_target += q * col_source
        self.D[:, target] = self.D[:, target] + q * self.D[:, source]
        self.V[:, target] = self.V[:, target] + q * self.V[:, source]
        if self.V_inv is not None:
            self.V_inv[source, :] = self.V_inv[source, :] - q * self.V_inv[target, :]

    def negate_row(self, t: int):
        self.D[t, :] = -self.D[t, :]
        self.U[t, :] = -self.U[t, :]
        if self.U_inv is not None:
            self.U_inv[:, t] = -self.U_inv[:, t]


def _min_abs_index(values: np.ndarray) -> Optional[int]:
    best = None
    for idx, v in enumerate(values):
        if v != 0 and (best is None or abs(v) < abs(values[best])):
            best = idx
    return best


def _place_pivot(red: _Reducer, t: int) -> bool:
    D = red.D
    m, n = D.shape
    best = None
    for i in range(t, m):
        for j in range(t, n):
            v = D[i, j]
            if v != 0 and (best is None or abs(v) < abs(D[best])):
                best = (i, j)
    if best is None:
        return False
    i, j = best
    if i != t:
        red.swap_rows(t, i)
    if j != t:
        red.swap_cols(t, j)
    return True


def _clear_column(red: _Reducer, t: int):
    D = red.D
    m = D.shape[0]
    while np.any(D[t + 1:, t] != 0):
        i = t + _min_abs_index(D[t:, t])
        if i != t:
            red.swap_rows(t, i)
        pivot = D[t, t]
        for i in range(t + 1, m):
            if D[i, t] != 0:
                red.add_row(i, t, -(D[i, t] // pivot))


def _clear_row(red: _Reducer, t: int):
    D = red.D
    n = D.shape[1]
    while np.any(D[t, t + 1:] != 0):
        j = t + _min_abs_index(D[t, t:])
        if j != t:
            red.swap_cols(t, j)
        pivot = D[t, t]
        for j in range(t + 1, n):
            if D[t, j] != 0:
                red.add_col(j, t, -(D[t, j] // pivot))


def _find_nondivisible_row(D: np.ndarray, t: int) -> Optional[int]:
    pivot = D[t, t]
    m, n = D.shape
    for i in range(t + 1, m):
        for j in range(t + 1, n):
            if D[i, j] % pivot != 0:
                return i
    return None


def smith_form(A, track_inverses: bool = False) -> SmithForm:
    """Smith normal form with unimodular transforms, optionally with their inverses."""
    red = _Reducer(A, track_inverses)
    m, n = red.D.shape
    for t in range(min(m, n)):
        if not _place_pivot(red, t):
            break
        while True:
            _clear_column(red, t)
            _clear_row(red, t)
            if np.any(red.D[t + 1:, t] != 0):
                continue
            bad = _find_nondivisible_row(red.D, t)
            if bad is None:
                break
            red.add_row(t, bad, 1)
        if red.D[t, t] < 0:
            red.negate_row(t)
    return SmithForm(red.U, red.D, red.V, red.U_inv, red.V_inv)


def smith_normal_form(A) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Smith normal form of an integer matrix with unimodular transforms.

    Parameters:
    A: integer matrix (m x n), any array-like

    Returns:
    (U, D, V): object arrays of Python ints with U @ A @ V == D,
    D diagonal with non-negative entries d_1 | d_2 | ..., and
    det(U), det(V) in {1, -1}
    """
    form = smith_form(A)
    return form.U, form.D, form.V


def invariant_factors(A) -> List[int]:
    """Non-zero diagonal of the Smith form, in divisibility order."""
    return [d for d in smith_form(A).diagonal if d != 0]


def solve_integer(A, b) -> Optional[np.ndarray]:
    """
    One integer solution of A x = b, or None if there is none.

    Parameters:
    A: integer matrix (m x n)
    b: integer vector (m,)

    Returns:
    x: object array of Python ints, or None
    """
    form = smith_form(A)
    m, n = form.D.shape
    c = int_matmul(form.U, int_vector(b))
    y = int_vector(np.zeros(n, dtype=object))
    for i in range(m):
        d = form.D[i, i] if i < n else 0
        if d == 0:
            if c[i] != 0:
                return None
            continue
        if c[i] % d != 0:
            return None
        y[i] = c[i] // d
    return int_matmul(form.V, y)


def solve_modular(A, b, n: int, form: Optional[SmithForm] = None):
    """
    Solve A x = b over Z/n through the Smith form of A lifted to Z.

    Parameters:
    A: integer matrix (rows x cols), entries read mod n
    b: integer vector (rows,)
    n: modulus
    form: precomputed smith_form(A), reused across right-hand sides

    Returns:
    (x, certificate): x a particular solution (or None) and, when there
    is no solution, a row y with y A = 0 and y b != 0 mod n
    """
    if form is None:
        form = smith_form(A)
    rows, cols = form.D.shape
    c = [v % n for v in int_matmul(form.U, int_vector(b))]
    y = int_vector(np.zeros(cols, dtype=object))
    for i in range(rows):
        d = int(form.D[i, i]) % n if i < cols else 0
        g = math.gcd(d, n)
        if c[i] % g != 0:
            scale = n // g if d != 0 else 1
            cert = np.array([(scale * u) % n for u in form.U[i]], dtype=object)
            return None, cert
        if i >= cols or d == 0:
            continue
        modulus = n // g
        y[i] = ((c[i] // g) * pow(d // g, -1, modulus)) % modulus if modulus > 1 else 0
    x = np.array([v % n for v in int_matmul(form.V, y)], dtype=object)
    return x, None


def nullspace_modular(A, n: int, form: Optional[SmithForm] = None) -> np.ndarray:
    """
    Generators of {x : A x = 0 mod n}, returned as columns.
    """
    if form is None:
        form = smith_form(A)
    rows, cols = form.D.shape
    gens = []
    for i in range(cols):
        d = int(form.D[i, i]) % n if i < rows else 0
        scale = n // math.gcd(d, n) if d != 0 else 1
        if scale % n == 0:
            continue
        col = np.array([(scale * v) % n for v in form.V[:, i]], dtype=object)
        if np.any(col != 0):
            gens.append(col)
    if not gens:
        return np.zeros((cols, 0), dtype=object)
    return np.stack(gens, axis=1)
