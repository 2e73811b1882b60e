import math
import logging

import numpy as np
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from sympy import factorint, legendre_symbol, multiplicity

from src.scalars.scalars import Ring, InputError, InternalInconsistencyError
from src.finalg.finalg import FinAlgebra, make_algebra

logger = logging.getLogger(__name__)

QUATERNION_HEIGHT = 30
INFINITY = "inf"

Place = Union[int, str]


def _rational(value) -> Fraction:
    value = Fraction(value)
    if value == 0:
        raise InputError("Quaternion parameters must be nonzero", location="quaternion")
    return value


def quaternion_algebra(a, b, ring: Optional[Ring] = None) -> FinAlgebra:
    """
    (a, b) on the basis 1, i, j, k = ij with i^2 = a, j^2 = b, ji = -ij.

    Parameters:
    a, b: nonzero scalars, rationals by default
    ring: coefficient ring, Q when omitted

    Returns:
    FinAlgebra of dimension 4 with identity
    """
    ring = ring or Ring.rationals()
    a = ring.canonical(_rational(a) if not ring.is_finite else a)
    b = ring.canonical(_rational(b) if not ring.is_finite else b)
    if ring.is_zero(a) or ring.is_zero(b):
        raise InputError("Quaternion parameters must be nonzero", location="quaternion")
    ab = ring.mul(a, b)
    sc = ring.zeros((4, 4, 4))
    one, neg = ring.one, ring.neg(ring.one)
    table = {
        (1, 1): (0, a), (2, 2): (0, b), (3, 3): (0, ring.neg(ab)),
        (1, 2): (3, one), (2, 1): (3, neg),
        (1, 3): (2, a), (3, 1): (2, ring.neg(a)),
        (2, 3): (1, ring.neg(b)), (3, 2): (1, b),
    }
    for x in range(4):
        sc[0, x, x] = one
        sc[x, 0, x] = one
    for (x, y), (z, c) in table.items():
        sc[x, y, z] = c
    return make_algebra(ring, 4, sc, identity=ring.eye(4)[0], labels=["1", "i", "j", "k"])


def _square_class(value: Fraction) -> int:
    """Integer in the same square class as value: num * den."""
    return value.numerator * value.denominator


def _epsilon(u: int) -> int:
    return ((u - 1) // 2) % 2


def _omega(u: int) -> int:
    return ((u * u - 1) // 8) % 2


def hilbert_symbol(a, b, p: Place) -> int:
    """
    Local Hilbert symbol (a, b)_p for rationals a, b, a prime p or "inf".

    Parameters:
    a, b: nonzero rationals
    p: prime or INFINITY

    Returns:
    +1 or -1
    """
    a = _square_class(_rational(a))
    b = _square_class(_rational(b))
    if p == INFINITY:
        return -1 if a < 0 and b < 0 else 1
    p = int(p)
    alpha, beta = multiplicity(p, a), multiplicity(p, b)
    u, v = a // p ** alpha, b // p ** beta
    if p == 2:
        e = _epsilon(u) * _epsilon(v) + alpha * _omega(v) + beta * _omega(u)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return int(sign * legendre_symbol(u % p, p) ** beta * legendre_symbol(v % p, p) ** alpha)


def relevant_places(a, b) -> List[Place]:
    """Places where (a, b) can ramify: infinity, 2 and the primes of a and b."""
    primes = {2}
    for x in (_rational(a), _rational(b)):
        for n in (x.numerator, x.denominator):
            primes.update(factorint(abs(n)).keys())
    return [INFINITY] + sorted(primes)


@dataclass
class SplitReport:
    """Local symbols of (a, b) and the resulting verdict.

    Args:
        split: Every local symbol is +1.
        symbols: Place -> symbol at each relevant place.
        ramified: Places with symbol -1, an even number.
    """
    split: bool
    symbols: Dict[str, int] = field(default_factory=dict)
    ramified: List[str] = field(default_factory=list)

    def __bool__(self):
        return self.split


def split_report(a, b) -> SplitReport:
    symbols = {str(p): hilbert_symbol(a, b, p) for p in relevant_places(a, b)}
    ramified = [p for p, s in symbols.items() if s == -1]
    if len(ramified) % 2:
        raise InternalInconsistencyError(f"Product formula fails for ({a}, {b}): ramified at {ramified}")
    return SplitReport(not ramified, symbols, ramified)


def is_split_quaternion(a, b) -> bool:
    return split_report(a, b).split


def norm_form_solution(a, b, height: int = QUATERNION_HEIGHT) -> Optional[Tuple[int, int, int]]:
    """
    Nonzero (x, y, z) with a' x^2 + b' y^2 = z^2 and |x|, |y| <= height, where
    a', b' are the integer square-class representatives of a, b.
    """
    a = _square_class(_rational(a))
    b = _square_class(_rational(b))
    for x in range(0, height + 1):
        for y in range(-height, height + 1):
            if x == 0 and y == 0:
                continue
            s = a * x * x + b * y * y
            if s < 0:
                continue
            z = math.isqrt(s)
            if z * z == s:
                return x, y, z
    return None


def zero_divisor(a, b, height: int = QUATERNION_HEIGHT) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """
    Pair (u - z, u + z) of nonzero elements with zero product, u = x' i + y' j.

    The scaling x' = x * den(a), y' = y * den(b) turns a' x^2 + b' y^2 = z^2
    into u^2 = z^2 in (a, b).
    """
    sol = norm_form_solution(a, b, height)
    if sol is None:
        return None
    a, b = _rational(a), _rational(b)
    x, y, z = sol
    ring = Ring.rationals()
    u = ring.array([0, Fraction(x * a.denominator), Fraction(y * b.denominator), 0])
    # u^2 = a x^2 den(a)^2 + b y^2 den(b)^2 = a' x^2 + b' y^2 = z^2
    left = ring.reduce(u - ring.array([z, 0, 0, 0]))
    right = ring.reduce(u + ring.array([z, 0, 0, 0]))
    A = quaternion_algebra(a, b)
    if not ring.is_zero_array(A.product(left, right)):
        raise InternalInconsistencyError(f"Norm-form solution {sol} does not give a zero divisor")
    return left, right
