import re
import math
import logging

import numpy as np
from fractions import Fraction
from dataclasses import dataclass
from typing import Any, Iterator, Optional, Union

from sympy import isprime

logger = logging.getLogger(__name__)

PRIME_FIELD = "prime_field"
RESIDUE_RING = "residue_ring"
RATIONALS = "rationals"

# int64 products of two residues summed over long rows must not overflow
INT64_MODULUS_BOUND = 2 ** 20

RING_PATTERN = re.compile(r"^\s*(?:GF\((\d+)\)|Z/(\d+)|Q)\s*$")

ScalarValue = Union[int, Fraction]


class InputError(ValueError):
    """Rejection of malformed input.

    Args:
        message: Human readable reason.
        witness: Optional data pinpointing the violation.
        location: Optional scenario block path, e.g. "algebra.sc".
    """
    def __init__(self, message: str, witness: Any = None,
                 location: Optional[str] = None):
        super().__init__(message)
        self.witness = witness
        self.location = location

    def describe(self) -> str:
        text = str(self)
        if self.location:
            text = f"[{self.location}] {text}"
        if self.witness is not None:
            text = f"{text} (witness: {self.witness})"
        return text


class CapExceededError(InputError):
    """A configured desk-scale cap was exceeded."""


class InternalInconsistencyError(RuntimeError):
    """Two computations that must agree did not."""


@dataclass(frozen=True)
class Ring:
    """Exact coefficient ring: GF(p), Z/n or Q.

    Args:
        kind: One of "prime_field", "residue_ring", "rationals".
        modulus: p or n for the modular kinds, 0 for Q.
    """
    kind: str
    modulus: int = 0

    def __post_init__(self):
        if self.kind == PRIME_FIELD:
            if not isprime(self.modulus):
                raise InputError(f"GF(p) needs a prime, got {self.modulus}")
        elif self.kind == RESIDUE_RING:
            if self.modulus < 2:
                raise InputError(f"Z/n needs n >= 2, got {self.modulus}")
        elif self.kind == RATIONALS:
            if self.modulus != 0:
                raise InputError("Q carries no modulus")
        else:
            raise InputError(f"Unknown ring kind: {self.kind}")

    @classmethod
    def prime_field(cls, p: int) -> "Ring":
        return cls(PRIME_FIELD, int(p))

    @classmethod
    def residue_ring(cls, n: int) -> "Ring":
        return cls(RESIDUE_RING, int(n))

    @classmethod
    def rationals(cls) -> "Ring":
        return cls(RATIONALS, 0)

    @classmethod
    def parse(cls, literal: str) -> "Ring":
        """Parse a scenario ring literal: "GF(5)", "Z/8" or "Q"."""
        match = RING_PATTERN.match(str(literal))
        if match is None:
            raise InputError(f"Unrecognised ring literal: {literal!r}")
        if match.group(1) is not None:
            return cls.prime_field(int(match.group(1)))
        if match.group(2) is not None:
            return cls.residue_ring(int(match.group(2)))
        return cls.rationals()

    @property
    def literal(self) -> str:
        if self.kind == PRIME_FIELD:
            return f"GF({self.modulus})"
        if self.kind == RESIDUE_RING:
            return f"Z/{self.modulus}"
        return "Q"

    def __str__(self) -> str:
        return self.literal

    @property
    def is_field(self) -> bool:
        return self.kind != RESIDUE_RING

    @property
    def is_finite(self) -> bool:
        return self.kind != RATIONALS

    @property
    def size(self) -> Optional[int]:
        return self.modulus if self.is_finite else None

    @property
    def dtype(self):
        if self.kind == PRIME_FIELD and self.modulus < INT64_MODULUS_BOUND:
            return np.int64
        return object

    # --- scalar arithmetic -------------------------------------------------

    def canonical(self, value: Any) -> ScalarValue:
        """Unique representative: residue in [0, m) or a reduced Fraction."""
        if self.is_finite:
            if isinstance(value, Fraction):
                return self.div(value.numerator, value.denominator)
            if isinstance(value, str):
                value = Fraction(value)
                return self.div(value.numerator, value.denominator)
            return int(value) % self.modulus
        return Fraction(value)

    @property
    def zero(self) -> ScalarValue:
        return self.canonical(0)

    @property
    def one(self) -> ScalarValue:
        return self.canonical(1)

    def add(self, a: ScalarValue, b: ScalarValue) -> ScalarValue:
        return self.canonical(a + b)

    def sub(self, a: ScalarValue, b: ScalarValue) -> ScalarValue:
        return self.canonical(a - b)

    def mul(self, a: ScalarValue, b: ScalarValue) -> ScalarValue:
        return self.canonical(a * b)

    def neg(self, a: ScalarValue) -> ScalarValue:
        return self.canonical(-a)

    def is_zero(self, a: ScalarValue) -> bool:
        return self.canonical(a) == 0

    def is_unit(self, a: ScalarValue) -> bool:
        if self.is_finite:
            return math.gcd(int(a) % self.modulus, self.modulus) == 1
        return Fraction(a) != 0

    def inv(self, a: ScalarValue) -> ScalarValue:
        if self.is_finite:
            a = int(a) % self.modulus
            if math.gcd(a, self.modulus) != 1:
                raise ZeroDivisionError(f"{a} is not a unit in {self.literal}")
            return pow(a, -1, self.modulus)
        a = Fraction(a)
        if a == 0:
            raise ZeroDivisionError("0 is not a unit in Q")
        return 1 / a

    def div(self, a: ScalarValue, b: ScalarValue) -> ScalarValue:
        if self.is_finite:
            return self.canonical(int(a) * self.inv(b))
        return Fraction(a) / Fraction(b)

    def power(self, a: ScalarValue, e: int) -> ScalarValue:
        if self.is_finite:
            if e < 0:
                return pow(self.inv(a), -e, self.modulus)
            return pow(int(a) % self.modulus, e, self.modulus)
        return Fraction(a) ** e

    def elements(self) -> Iterator[int]:
        if not self.is_finite:
            raise InputError("Q is not enumerable")
        return iter(range(self.modulus))

    def units(self) -> Iterator[int]:
        return (a for a in self.elements() if self.is_unit(a))

    # --- arrays --------------------------------------------------------------

    def reduce(self, arr: Any) -> np.ndarray:
        """Canonical form of every entry of an array."""
        arr = np.asarray(arr)
        if self.kind == RATIONALS:
            out = np.empty(arr.shape, dtype=object)
            flat = arr.reshape(-1)
            out_flat = out.reshape(-1)
            for idx in range(flat.size):
                out_flat[idx] = Fraction(flat[idx])
            return out
        if self.dtype is np.int64:
            if arr.dtype == object:
                arr = np.array([int(x) % self.modulus for x in arr.reshape(-1)],
                               dtype=np.int64).reshape(arr.shape)
                return arr
            return np.mod(arr.astype(np.int64), self.modulus)
        out = np.empty(arr.shape, dtype=object)
        flat = arr.reshape(-1)
        out_flat = out.reshape(-1)
        for idx in range(flat.size):
            out_flat[idx] = self.canonical(flat[idx])
        return out

    def array(self, values: Any) -> np.ndarray:
        """Build a canonical array from nested lists of literals."""
        raw = np.array(values, dtype=object)
        out = np.empty(raw.shape, dtype=object)
        out_flat = out.reshape(-1)
        for idx, token in enumerate(raw.reshape(-1)):
            out_flat[idx] = parse_scalar(self, token)
        return self.reduce(out)

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is np.int64:
            return np.zeros(shape, dtype=np.int64)
        return self.reduce(np.zeros(shape, dtype=object))

    def eye(self, n: int) -> np.ndarray:
        if self.dtype is np.int64:
            return np.eye(n, dtype=np.int64)
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def dot(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(np.dot(a, b))

    def is_zero_array(self, arr: np.ndarray) -> bool:
        return not np.any(self.reduce(arr) != 0)

    def equal_arrays(self, a: np.ndarray, b: np.ndarray) -> bool:
        a = np.asarray(a)
        b = np.asarray(b)
        return a.shape == b.shape and self.is_zero_array(a - b)


def parse_scalar(ring: Ring, token: Any) -> ScalarValue:
    """Scenario scalar: integers for modular rings, ints or "p/q" for Q."""
    if isinstance(token, bool):
        raise InputError(f"Boolean is not a scalar: {token!r}")
    if isinstance(token, (int, np.integer)):
        return ring.canonical(int(token))
    if isinstance(token, Fraction):
        return ring.canonical(token)
    if isinstance(token, str):
        try:
            return ring.canonical(Fraction(token.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"Bad scalar literal {token!r}: {exc}")
    raise InputError(f"Unsupported scalar literal {token!r}")


def encode_scalar(ring: Ring, value: ScalarValue) -> Union[int, str]:
    """Inverse of parse_scalar, used for reports."""
    value = ring.canonical(value)
    if ring.is_finite:
        return int(value)
    if value.denominator == 1:
        return int(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def encode_array(ring: Ring, arr: np.ndarray) -> Any:
    arr = np.asarray(arr)
    if arr.ndim == 0:
        return encode_scalar(ring, arr.item())
    return [encode_array(ring, row) for row in arr]


@dataclass(frozen=True)
class Scalar:
    """Element of a Ring, kept in canonical form."""
    ring: Ring
    value: ScalarValue

    def __post_init__(self):
        object.__setattr__(self, "value", self.ring.canonical(self.value))

    def _coerce(self, other: Any) -> ScalarValue:
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise InputError(f"Ring mismatch: {self.ring} vs {other.ring}")
            return other.value
        return self.ring.canonical(other)

    def __add__(self, other):
        return Scalar(self.ring, self.ring.add(self.value, self._coerce(other)))

    def __sub__(self, other):
        return Scalar(self.ring, self.ring.sub(self.value, self._coerce(other)))

    def __mul__(self, other):
        return Scalar(self.ring, self.ring.mul(self.value, self._coerce(other)))

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.ring, self.ring.neg(self.value))

    def __pow__(self, e: int):
        return Scalar(self.ring, self.ring.power(self.value, e))

    def inverse(self) -> "Scalar":
        return Scalar(self.ring, self.ring.inv(self.value))

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.value)

    def __int__(self):
        return int(self.value)

    def __repr__(self) -> str:
        return f"{encode_scalar(self.ring, self.value)} in {self.ring.literal}"
