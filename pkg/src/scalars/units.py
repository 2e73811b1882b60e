import itertools
import logging

from dataclasses import dataclass, field
from typing import Dict, List, Set, Tuple

from sympy import factorint, n_order
from sympy.ntheory.modular import crt

from src.scalars.scalars import Ring, RATIONALS

logger = logging.getLogger(__name__)

# Enumeration cap on |k|
MAX_UNITS = 10 ** 6


class UnitGroupError(ValueError):
    """The unit group of the ring cannot be enumerated."""


@dataclass
class UnitGroupPresentation:
    """U(k) written additively as Z/d_1 x ... x Z/d_r with d_1 | d_2 | ...

    Args:
        ring: The finite coefficient ring.
        invariant_factors: The d_i, all > 1, in divisibility order.
        generators: One unit per factor, of exactly that order.
        log_table: Unit -> exponent vector with respect to the generators.
    """
    ring: Ring
    invariant_factors: List[int]
    generators: List[int]
    log_table: Dict[int, Tuple[int, ...]] = field(repr=False, default_factory=dict)

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def log(self, unit) -> Tuple[int, ...]:
        """Discrete logarithm of a unit."""
        key = int(unit) % self.ring.modulus
        if key not in self.log_table:
            raise ValueError(f"{key} is not a unit of {self.ring}")
        return self.log_table[key]

    def element(self, exponents) -> int:
        """Unit with the given exponent vector."""
        out = 1
        for g, e, d in zip(self.generators, exponents, self.invariant_factors):
            out = (out * pow(g, int(e) % d, self.ring.modulus)) % self.ring.modulus
        return out


def _cyclic_pieces(n: int) -> List[Tuple[int, int]]:
    """(generator, order) of cyclic factors of U(Z/n), lifted by CRT."""
    factors = factorint(n)
    moduli = [q ** e for q, e in sorted(factors.items())]
    pieces = []
    for idx, (q, e) in enumerate(sorted(factors.items())):
        qe = q ** e
        if q == 2 and e >= 3:
            local = [(qe - 1, 2), (5, 2 ** (e - 2))]
        elif q == 2 and e == 2:
            local = [(3, 2)]
        elif q == 2:
            local = []
        else:
            phi = qe - qe // q
            root = next(a for a in range(2, qe) if a % q and n_order(a, qe) == phi)
            local = [(root, phi)]
        for g, order in local:
            residues = [1] * len(moduli)
            residues[idx] = g
            lifted = int(crt(moduli, residues)[0]) % n if len(moduli) > 1 else g % n
            pieces.append((lifted, order))
    return pieces


def _merge_invariant(pieces: List[Tuple[int, int]], n: int) -> Tuple[List[int], List[int]]:
    """Recombine cyclic pieces into invariant factors with matching generators."""
    by_prime: Dict[int, List[Tuple[int, int]]] = {}
    for g, order in pieces:
        for q, e in factorint(order).items():
            qe = q ** e
            by_prime.setdefault(q, []).append((pow(g, order // qe, n), qe))
    length = max((len(v) for v in by_prime.values()), default=0)
    factors = [1] * length
    gens = [1] * length
    for q, parts in by_prime.items():
        parts.sort(key=lambda item: item[1])
        offset = length - len(parts)
        for k, (g, qe) in enumerate(parts):
            factors[offset + k] *= qe
            gens[offset + k] = (gens[offset + k] * g) % n
    return factors, gens


def _powers(g: int, order: int, n: int) -> List[int]:
    out = [1]
    for _ in range(order - 1):
        out.append((out[-1] * g) % n)
    return out


def _greedy_generators(units: List[int], factors: List[int], n: int) -> List[int]:
    """Smallest units of the required orders spanning a direct product, or [] if greedy fails."""
    chosen: Dict[int, int] = {}
    span: Set[int] = {1}
    for idx in sorted(range(len(factors)), key=lambda i: -factors[i]):
        d = factors[idx]
        for u in units:
            if n_order(u, n) != d:
                continue
            powers = _powers(u, d, n)
            if any(x in span for x in powers[1:]):
                continue
            span = {(s * x) % n for s in span for x in powers}
            chosen[idx] = u
            break
        else:
            return []
    return [chosen[i] for i in range(len(factors))]


def unit_group(ring: Ring, max_units: int = MAX_UNITS) -> UnitGroupPresentation:
    """
    Invariant-factor presentation of U(k) with a complete discrete-log table.

    Parameters:
    ring: GF(p) or Z/n
    max_units: enumeration cap on |k|

    Returns:
    UnitGroupPresentation
    """
    if ring.kind == RATIONALS:
        raise UnitGroupError("unit group not enumerable")
    n = ring.modulus
    if n > max_units:
        raise UnitGroupError(f"unit group not enumerable: |{ring}| = {n} exceeds cap {max_units}")
    units = [u for u in range(1, n) if ring.is_unit(u)] if n > 1 else []
    factors, fallback = _merge_invariant(_cyclic_pieces(n), n)
    gens = _greedy_generators(units, factors, n) or fallback
    presentation = UnitGroupPresentation(ring, factors, gens)
    for exps in itertools.product(*[range(d) for d in factors]):
        presentation.log_table[presentation.element(exps)] = tuple(exps)
    if len(presentation.log_table) != len(units):
        raise RuntimeError(f"unit group presentation of {ring} does not cover U(k)")
    for g, d in zip(gens, factors):
        if n_order(g, n) != d:
            raise RuntimeError(f"generator {g} of {ring} has order {n_order(g, n)}, expected {d}")
    logger.debug("unit group of %s: factors %s, generators %s", ring, factors, gens)
    return presentation
