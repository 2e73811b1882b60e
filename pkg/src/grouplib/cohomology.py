import itertools
import logging

import numpy as np
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from sympy import factorint

from src.scalars.scalars import Ring, InputError, CapExceededError, InternalInconsistencyError, RATIONALS, encode_array
from src.scalars.smith import (
    smith_form, solve_integer, solve_modular, int_matrix, int_matmul, invariant_factors,
)
from src.scalars.units import MAX_UNITS, UnitGroupError, UnitGroupPresentation, unit_group
from src.grouplib.groups import FinGroup

logger = logging.getLogger(__name__)

# cap on |U(k)|^((|G|-1)^2) for brute-force enumeration
MAX_BRUTE_FORCE = 4096


class CocycleError(InputError):
    """Values violate the 2-cocycle identity or are not units."""


@dataclass(frozen=True, eq=False)
class Cocycle:
    """2-cocycle alpha: G x G -> U(k) with trivial action.

    Args:
        group: The group G.
        ring: The coefficient ring k.
        values: (|G| x |G|) object array, values[g, h] = alpha(g, h).
    """
    group: FinGroup
    ring: Ring
    values: np.ndarray = field(repr=False)

    def __call__(self, g: int, h: int):
        return self.values[g, h]

    def is_normalized(self) -> bool:
        e = self.group.identity
        one = self.ring.one
        return all(self.values[e, g] == one and self.values[g, e] == one for g in self.group.elements())

    def defect(self) -> Optional[Tuple[int, int, int]]:
        """First (g, h, l) with alpha(h,l) alpha(g,hl) != alpha(g,h) alpha(gh,l)."""
        G = self.group
        ring = self.ring
        for g in G.elements():
            for h in G.elements():
                for l in G.elements():
                    lhs = ring.mul(self.values[h, l], self.values[g, G.mul(h, l)])
                    rhs = ring.mul(self.values[g, h], self.values[G.mul(g, h), l])
                    if lhs != rhs:
                        return g, h, l
        return None

    def __mul__(self, other: "Cocycle") -> "Cocycle":
        _check_compatible(self, other)
        values = _map_values(self.ring, self.values, other.values, self.ring.mul)
        return Cocycle(self.group, self.ring, values)

    def inverse(self) -> "Cocycle":
        values = _map_values(self.ring, self.values, self.values, lambda a, _: self.ring.inv(a))
        return Cocycle(self.group, self.ring, values)

    def normalize(self) -> "Cocycle":
        """Divide by the constant alpha(e, e)."""
        c = self.ring.inv(self.values[self.group.identity, self.group.identity])
        values = _map_values(self.ring, self.values, self.values, lambda a, _: self.ring.mul(a, c))
        return Cocycle(self.group, self.ring, values)

    def is_trivial_values(self) -> bool:
        return all(v == self.ring.one for v in self.values.reshape(-1))

    def encode(self) -> list:
        return encode_array(self.ring, self.values)


def _check_compatible(a: Cocycle, b: Cocycle):
    if a.ring != b.ring or not np.array_equal(a.group.table, b.group.table):
        raise InputError("Cocycles live on different (group, ring) pairs")


def _map_values(ring: Ring, A: np.ndarray, B: np.ndarray, op) -> np.ndarray:
    out = np.empty(A.shape, dtype=object)
    for idx in np.ndindex(A.shape):
        out[idx] = ring.canonical(op(A[idx], B[idx]))
    return out


def make_cocycle(group: FinGroup, ring: Ring, values, normalize: bool = False) -> Cocycle:
    """
    Validate values as a 2-cocycle of units.

    Parameters:
    group: G
    ring: k
    values: (|G| x |G|) nested list of scalar literals
    normalize: divide by alpha(e, e) after validation

    Returns:
    Cocycle
    """
    raw = ring.array(values)
    if raw.shape != (group.order, group.order):
        raise CocycleError(f"Cocycle must be {group.order} x {group.order}, got {raw.shape}",
                           location="cocycle")
    vals = np.empty(raw.shape, dtype=object)
    for idx in np.ndindex(raw.shape):
        v = ring.canonical(raw[idx])
        if not ring.is_unit(v):
            raise CocycleError(f"Cocycle value at {idx} is not a unit", witness=idx, location="cocycle")
        vals[idx] = v
    alpha = Cocycle(group, ring, vals)
    defect = alpha.defect()
    if defect is not None:
        raise CocycleError(f"Cocycle identity fails at {defect}", witness=defect, location="cocycle")
    return alpha.normalize() if normalize else alpha


def trivial_cocycle(group: FinGroup, ring: Ring) -> Cocycle:
    vals = np.empty((group.order, group.order), dtype=object)
    vals.fill(ring.one)
    return Cocycle(group, ring, vals)


def cocycle_from_function(group: FinGroup, ring: Ring, fn) -> Cocycle:
    return make_cocycle(group, ring, [[fn(g, h) for h in group.elements()] for g in group.elements()])


# --- integer coboundary operators -------------------------------------------

def _pair_index(group: FinGroup) -> Dict[Tuple[int, int], int]:
    rest = group.non_identity()
    return {(g, h): k for k, (g, h) in enumerate(itertools.product(rest, rest))}


def cocycle_operator(group: FinGroup) -> np.ndarray:
    """Integer matrix of normalized additive delta^2 on pairs of non-identity elements."""
    rest = group.non_identity()
    pairs = _pair_index(group)
    rows = []
    for g, h, l in itertools.product(rest, rest, rest):
        row = [0] * len(pairs)
        for sign, key in ((1, (h, l)), (1, (g, group.mul(h, l))),
                          (-1, (g, h)), (-1, (group.mul(g, h), l))):
            if key in pairs:
                row[pairs[key]] += sign
        rows.append(row)
    if not rows:
        return int_matrix(np.zeros((0, len(pairs)), dtype=object))
    return int_matrix(rows)


def coboundary_operator(group: FinGroup, normalized: bool = True) -> np.ndarray:
    """Integer matrix of (delta b)(g, h) = b(g) + b(h) - b(gh).

    normalized: rows and columns on non-identity elements only, else all of G.
    """
    elems = group.non_identity() if normalized else list(group.elements())
    col = {g: k for k, g in enumerate(elems)}
    rows = []
    for g, h in itertools.product(elems, elems):
        row = [0] * len(elems)
        for sign, x in ((1, g), (1, h), (-1, group.mul(g, h))):
            if x in col:
                row[col[x]] += sign
        rows.append(row)
    if not rows:
        return int_matrix(np.zeros((0, len(elems)), dtype=object))
    return int_matrix(rows)


# --- H^2 over a finite ring --------------------------------------------------

@dataclass
class H2Presentation:
    """H^2(G, U(k)) as a direct sum of cyclic summands with representatives.

    Args:
        group: G.
        ring: k.
        units: Presentation of U(k).
        summands: (order, representative cocycle) per cyclic summand.
        invariant_factors: Invariant factors of the whole group.
    """
    group: FinGroup
    ring: Ring
    units: UnitGroupPresentation = field(repr=False)
    summands: List[Tuple[int, Cocycle]] = field(repr=False)
    invariant_factors: List[int]

    @property
    def order(self) -> int:
        out = 1
        for d, _ in self.summands:
            out *= d
        return out

    @property
    def representatives(self) -> List[Cocycle]:
        return [alpha for _, alpha in self.summands]


def _canonical_sign(vector: List[int], d: int) -> List[int]:
    for v in vector:
        if v % d:
            if v % d > d // 2:
                return [(-x) % d for x in vector]
            break
    return [x % d for x in vector]


def _component_summands(group: FinGroup, delta2: np.ndarray, delta1: np.ndarray,
                        d: int) -> List[Tuple[int, List[int]]]:
    """Cyclic summands of Z^2(G, Z/d) / B^2(G, Z/d) with additive representatives."""
    N = delta1.shape[0]
    if N == 0:
        return []
    if delta2.shape[0]:
        form2 = smith_form(delta2, track_inverses=True)
        diag = form2.diagonal + [0] * (N - len(form2.diagonal))
        V, V_inv = form2.V, form2.V_inv
    else:
        diag = [0] * N
        V = int_matrix(np.eye(N, dtype=int))
        V_inv = V
    scales = [d // int(np.gcd(int(s), d)) for s in diag[:N]]
    # columns of K span the additive cocycles mod d (a lattice containing d Z^N)
    K = int_matmul(V, int_matrix(np.diag(scales)))
    B = np.concatenate([delta1, int_matrix(d * np.eye(N, dtype=int))], axis=1)
    VB = int_matmul(V_inv, B)
    C = np.empty(VB.shape, dtype=object)
    for i in range(N):
        for j in range(VB.shape[1]):
            if VB[i, j] % scales[i]:
                raise InternalInconsistencyError("coboundaries are not cocycles; delta operators disagree")
            C[i, j] = VB[i, j] // scales[i]
    formC = smith_form(C, track_inverses=True)
    out = []
    for i, e in enumerate(formC.diagonal):
        if e == 1:
            continue
        rep = int_matmul(K, formC.U_inv[:, i])
        out.append((int(e), _canonical_sign([int(v) for v in rep], d)))
    return out


def second_cohomology(group: FinGroup, ring: Ring, max_units: int = MAX_UNITS) -> H2Presentation:
    """
    H^2(G, U(k)) for finite k with representatives of each cyclic summand.

    Parameters:
    group: G
    ring: GF(p) or Z/n
    max_units: unit-group enumeration cap

    Returns:
    H2Presentation
    """
    if ring.kind == RATIONALS:
        raise UnitGroupError("H^2 over Q is supported only via is_coboundary on explicit cocycles")
    units = unit_group(ring, max_units)
    delta2 = cocycle_operator(group)
    delta1 = coboundary_operator(group)
    pairs = _pair_index(group)
    summands: List[Tuple[int, Cocycle]] = []
    for d, gen in zip(units.invariant_factors, units.generators):
        for order, rep in _component_summands(group, delta2, delta1, d):
            vals = np.empty((group.order, group.order), dtype=object)
            vals.fill(ring.one)
            for (g, h), k in pairs.items():
                vals[g, h] = ring.power(gen, rep[k])
            alpha = Cocycle(group, ring, vals)
            if alpha.defect() is not None:
                raise InternalInconsistencyError(f"H^2 representative for factor {d} is not a cocycle")
            summands.append((order, alpha))
    orders = [o for o, _ in summands]
    factors = invariant_factors(np.diag(orders)) if orders else []
    logger.debug("H^2(%s, U(%s)) summands %s", group.name, ring, orders)
    return H2Presentation(group, ring, units, summands, [f for f in factors if f != 1])


# --- coboundary membership ---------------------------------------------------

@dataclass
class CoboundaryResult:
    """Verdict of the coboundary test.

    Args:
        coboundary: Verdict.
        witness: b: G -> U(k) with alpha(g,h) = b(g) b(h) b(gh)^-1, when true.
        note: Scope of a negative verdict.
    """
    coboundary: bool
    witness: Optional[List] = None
    note: str = ""

    def __bool__(self):
        return self.coboundary


def _verify_witness(alpha: Cocycle, b: List) -> bool:
    G, ring = alpha.group, alpha.ring
    for g in G.elements():
        for h in G.elements():
            expected = ring.div(ring.mul(b[g], b[h]), b[G.mul(g, h)])
            if expected != alpha.values[g, h]:
                return False
    return True


def _coboundary_finite(alpha: Cocycle, max_units: int) -> CoboundaryResult:
    G, ring = alpha.group, alpha.ring
    units = unit_group(ring, max_units)
    D1 = coboundary_operator(G, normalized=False)
    form = smith_form(D1)
    logs = [[units.log(alpha.values[g, h]) for h in G.elements()] for g in G.elements()]
    exps = []
    for c, d in enumerate(units.invariant_factors):
        target = [logs[g][h][c] for g in G.elements() for h in G.elements()]
        x, _ = solve_modular(D1, target, d, form=form)
        if x is None:
            return CoboundaryResult(False, note=f"no solution in the Z/{d} component")
        exps.append(x)
    b = [units.element([int(x[g]) for x in exps]) for g in G.elements()]
    if not _verify_witness(alpha, b):
        raise InternalInconsistencyError("coboundary witness failed verification")
    return CoboundaryResult(True, b)


def _coboundary_rational(alpha: Cocycle) -> CoboundaryResult:
    G = alpha.group
    m = G.order
    vals = [Fraction(alpha.values[g, h]) for g in G.elements() for h in G.elements()]
    primes = set()
    for v in vals:
        primes.update(factorint(abs(v.numerator)).keys())
        primes.update(factorint(v.denominator).keys())
    primes.discard(1)
    D1 = coboundary_operator(G, normalized=False)
    note = "not a coboundary within generated subgroup"
    signs = [0 if v > 0 else 1 for v in vals]
    s, _ = solve_modular(D1, signs, 2)
    if s is None:
        return CoboundaryResult(False, note=note)
    b = [Fraction(-1) ** int(s[g]) for g in range(m)]
    for p in sorted(primes):
        exps = []
        for v in vals:
            num = factorint(abs(v.numerator)).get(p, 0)
            den = factorint(v.denominator).get(p, 0)
            exps.append(num - den)
        x = solve_integer(D1, exps)
        if x is None:
            return CoboundaryResult(False, note=note)
        b = [b[g] * Fraction(p) ** int(x[g]) for g in range(m)]
    if not _verify_witness(alpha, b):
        raise InternalInconsistencyError("rational coboundary witness failed verification")
    return CoboundaryResult(True, b)


def is_coboundary(alpha: Cocycle, max_units: int = MAX_UNITS) -> CoboundaryResult:
    """
    Is alpha(g, h) = b(g) b(h) b(gh)^-1 for some b: G -> U(k)?

    Parameters:
    alpha: cocycle over GF(p), Z/n or Q
    max_units: unit-group cap for finite rings

    Returns:
    CoboundaryResult with a re-verified witness when true
    """
    if alpha.ring.kind == RATIONALS:
        return _coboundary_rational(alpha)
    return _coboundary_finite(alpha, max_units)


def cohomologous(alpha: Cocycle, beta: Cocycle, max_units: int = MAX_UNITS) -> CoboundaryResult:
    """alpha and beta define the same class; witness b with alpha = beta * delta b."""
    _check_compatible(alpha, beta)
    return is_coboundary(alpha * beta.inverse(), max_units)


# --- brute force -------------------------------------------------------------

def enumerate_normalized_cocycles(group: FinGroup, ring: Ring,
                                  max_candidates: int = MAX_BRUTE_FORCE) -> Iterator[Cocycle]:
    """Every normalized cocycle, by exhaustive search over unit-valued functions."""
    if ring.kind == RATIONALS:
        raise UnitGroupError("unit group not enumerable")
    units = list(ring.units())
    rest = group.non_identity()
    slots = len(rest) ** 2
    if len(units) ** slots > max_candidates:
        raise CapExceededError(f"{len(units)}^{slots} candidate cocycles exceed cap {max_candidates}")
    for choice in itertools.product(units, repeat=slots):
        vals = np.empty((group.order, group.order), dtype=object)
        vals.fill(ring.one)
        for k, (g, h) in enumerate(itertools.product(rest, rest)):
            vals[g, h] = choice[k]
        alpha = Cocycle(group, ring, vals)
        if alpha.defect() is None:
            yield alpha


def normalized_coboundaries(group: FinGroup, ring: Ring) -> set:
    units = list(ring.units())
    rest = group.non_identity()
    out = set()
    for choice in itertools.product(units, repeat=len(rest)):
        b = {group.identity: ring.one}
        b.update(zip(rest, choice))
        key = tuple(ring.div(ring.mul(b[g], b[h]), b[group.mul(g, h)]) for g in rest for h in rest)
        out.add(key)
    return out


def brute_force_h2_order(group: FinGroup, ring: Ring, max_candidates: int = MAX_BRUTE_FORCE) -> int:
    """|Z^2| / |B^2| on normalized cochains, by enumeration."""
    cocycles = sum(1 for _ in enumerate_normalized_cocycles(group, ring, max_candidates))
    return cocycles // len(normalized_coboundaries(group, ring))
