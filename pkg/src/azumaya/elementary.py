import math
import logging

import numpy as np
from dataclasses import dataclass, field
from typing import List, Tuple

from src.scalars.scalars import Ring, InputError, InternalInconsistencyError, RESIDUE_RING, encode_array
from src.scalars.linalg import NoSolutionError, solve
from src.finalg.finalg import FinAlgebra, make_algebra, is_unital

logger = logging.getLogger(__name__)


class DualPairError(InputError):
    """Invalid dual pair (M, M', mu)."""


@dataclass(frozen=True, eq=False)
class DualPair:
    """Free modules M = k^m, M' = k^m' and a surjective pairing mu: M' (x) M -> k.

    Args:
        ring: Coefficient ring.
        m: Rank of M.
        mprime: Rank of M'.
        mu: Matrix (mprime x m), mu[j, i] = mu(e'_j (x) e_i).
    """
    ring: Ring
    m: int
    mprime: int
    mu: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.m < 1 or self.mprime < 1:
            raise DualPairError(f"Dual pair needs m, m' >= 1, got ({self.m}, {self.mprime})")
        mu = self.ring.reduce(np.asarray(self.mu))
        if mu.shape != (self.mprime, self.m):
            raise DualPairError(f"Pairing must have shape {(self.mprime, self.m)}, got {mu.shape}",
                                location="mu")
        object.__setattr__(self, "mu", mu)
        if not self.is_surjective():
            raise DualPairError("Pairing mu is not surjective", witness=encode_array(self.ring, mu),
                                location="mu")

    @property
    def dim(self) -> int:
        return self.m * self.mprime

    def is_surjective(self) -> bool:
        entries = [int(v) if self.ring.is_finite else v for v in self.mu.reshape(-1)]
        if self.ring.kind == RESIDUE_RING:
            g = self.ring.modulus
            for v in entries:
                g = math.gcd(g, v)
            return g == 1
        return any(v != 0 for v in entries)

    def pairing(self, mprime_vec: np.ndarray, m_vec: np.ndarray):
        return self.ring.dot(self.ring.dot(np.asarray(mprime_vec), self.mu), np.asarray(m_vec)).item()

    def unit_terms(self) -> List[Tuple[np.ndarray, np.ndarray]]:
        """Pairs (p'_r, n_r) with sum_r mu(p'_r (x) n_r) = 1."""
        ring = self.ring
        flat = self.mu.reshape(1, -1)
        try:
            coeffs = solve(ring, flat, ring.eye(1)[0])
        except NoSolutionError:
            raise DualPairError("Pairing mu is not surjective")
        coeffs = coeffs.reshape(self.mprime, self.m)
        eye_m = ring.eye(self.m)
        eye_mp = ring.eye(self.mprime)
        terms = []
        for j in range(self.mprime):
            for i in range(self.m):
                if coeffs[j, i] != 0:
                    terms.append((ring.reduce(eye_mp[j] * coeffs[j, i]), eye_m[i]))
        return terms

    def encode(self) -> dict:
        return {"ring": self.ring.literal, "M": self.m, "Mprime": self.mprime,
                "mu": encode_array(self.ring, self.mu)}


def dual_pair(ring: Ring, m: int, mprime: int, mu) -> DualPair:
    return DualPair(ring, int(m), int(mprime), ring.array(mu) if not isinstance(mu, np.ndarray) else mu)


def perfect_pair(ring: Ring, n: int) -> DualPair:
    """(k^n, k^n, standard pairing); E of it is M_n(k)."""
    return DualPair(ring, n, n, ring.eye(n))


@dataclass(frozen=True, eq=False)
class ElementaryAlgebra:
    """E(P) = M (x) M' with (m (x) m')(n (x) n') = mu(m' (x) n) m (x) n'.

    Args:
        pair: The dual pair.
        algebra: Structure constants on the basis e_i (x) e'_j, index i * m' + j.
        left_action: Stack (dim, m, m), action of each basis element on M.
        right_action: Stack (dim, m', m'), right action on M' written on columns.
    """
    pair: DualPair
    algebra: FinAlgebra
    left_action: np.ndarray = field(repr=False)
    right_action: np.ndarray = field(repr=False)


def elementary_constants(P: DualPair) -> np.ndarray:
    ring = P.ring
    m, mp = P.m, P.mprime
    eye_m = ring.eye(m)
    eye_mp = ring.eye(mp)
    sc = (P.mu[None, :, :, None, None, None]
          * eye_m[:, None, None, None, :, None]
          * eye_mp[None, None, None, :, None, :])
    return ring.reduce(sc.reshape(P.dim, P.dim, P.dim))


def _action_witness(ring: Ring, A: FinAlgebra, action: np.ndarray, anti: bool):
    combined = ring.reduce(np.tensordot(A.sc, action, ([2], [0])))
    if anti:
        composed = np.matmul(action[None, :], action[:, None])
    else:
        composed = np.matmul(action[:, None], action[None, :])
    bad = np.argwhere(ring.reduce(combined - composed) != 0)
    if bad.size == 0:
        return None
    return int(bad[0][0]), int(bad[0][1])


def elementary_from_pair(P: DualPair) -> ElementaryAlgebra:
    """
    Elementary algebra of a dual pair together with its module actions.

    Parameters:
    P: dual pair

    Returns:
    ElementaryAlgebra
    """
    ring = P.ring
    m, mp = P.m, P.mprime
    labels = [f"m{i}*n{j}" for i in range(m) for j in range(mp)]
    A = make_algebra(ring, P.dim, elementary_constants(P), labels=labels)
    eye_m = ring.eye(m)
    eye_mp = ring.eye(mp)
    left = ring.zeros((P.dim, m, m))
    right = ring.zeros((P.dim, mp, mp))
    for i in range(m):
        for j in range(mp):
            left[i * mp + j] = np.multiply.outer(eye_m[i], P.mu[j])
            right[i * mp + j] = np.multiply.outer(eye_mp[j], P.mu[:, i])
    left = ring.reduce(left)
    right = ring.reduce(right)
    for action, anti, side in ((left, False, "M"), (right, True, "M'")):
        witness = _action_witness(ring, A, action, anti)
        if witness is not None:
            raise InternalInconsistencyError(f"E(P) action on {side} fails on basis pair {witness}")
    if not is_unital(A):
        raise InternalInconsistencyError("E(P) of a surjective pairing is not unital")
    logger.debug("E(P) of dims (%d, %d): identity %s", m, mp, A.has_identity)
    return ElementaryAlgebra(P, A, left, right)
