import re
import itertools
import logging

import numpy as np
from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Tuple

from sympy.combinatorics import Permutation

from src.scalars.scalars import InputError, CapExceededError

logger = logging.getLogger(__name__)

MAX_GROUP = 24

GROUP_PATTERN = re.compile(r"^\s*(C\d+(?:\s*x\s*C\d+)*|S3)\s*$")


class GroupAxiomError(InputError):
    """Multiplication table violates a group axiom."""


@dataclass(frozen=True, eq=False)
class FinGroup:
    """Finite group given by its multiplication table on indices 0..order-1.

    Args:
        order: Number of elements.
        table: (order x order) int array, table[g, h] = index of g h.
        identity: Index of the identity.
        inverse: inverse[g] = index of g^-1.
        name: Display name, e.g. "C2xC2".
        labels: Element labels.
    """
    order: int
    table: np.ndarray = field(repr=False)
    identity: int = 0
    inverse: Tuple[int, ...] = field(default=(), repr=False)
    name: str = "G"
    labels: Tuple[str, ...] = field(default=(), repr=False)

    def mul(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def inv(self, g: int) -> int:
        return self.inverse[g]

    def conj(self, g: int, s: int) -> int:
        """g s g^-1."""
        return self.mul(self.mul(g, s), self.inv(g))

    def elements(self) -> range:
        return range(self.order)

    def non_identity(self) -> List[int]:
        return [g for g in self.elements() if g != self.identity]

    def power(self, g: int, n: int) -> int:
        out = self.identity
        base = g if n >= 0 else self.inv(g)
        for _ in range(abs(n)):
            out = self.mul(out, base)
        return out

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.mul(x, g)
            k += 1
        return k

    def exponent(self) -> int:
        out = 1
        for g in self.elements():
            out = int(np.lcm(out, self.element_order(g)))
        return out

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def generators(self) -> List[int]:
        """Greedy generating set, smallest indices first."""
        gens: List[int] = []
        span = {self.identity}
        for g in self.elements():
            if g in span:
                continue
            gens.append(g)
            span = self.closure(gens)
        return gens

    def closure(self, gens: Sequence[int]) -> set:
        span = {self.identity}
        frontier = [self.identity]
        while frontier:
            fresh = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in span:
                        span.add(y)
                        fresh.append(y)
            frontier = fresh
        return span

    def label(self, g: int) -> str:
        return self.labels[g] if self.labels else str(g)

    def encode(self) -> dict:
        return {"name": self.name, "table": self.table.tolist()}

    def __repr__(self) -> str:
        return f"FinGroup({self.name}, order={self.order})"


def _axiom_check(table: np.ndarray) -> Tuple[int, Tuple[int, ...]]:
    m = table.shape[0]
    if table.shape != (m, m):
        raise GroupAxiomError(f"Table must be square, got shape {table.shape}")
    if m == 0:
        raise GroupAxiomError("Empty group")
    if table.min() < 0 or table.max() >= m:
        bad = np.argwhere((table < 0) | (table >= m))[0]
        raise GroupAxiomError("Table is not closed", witness=tuple(int(v) for v in bad))
    assoc = table[table, :]
    # assoc[a, b, c] = (a b) c; compare with a (b c)
    right = table[np.arange(m)[:, None, None], table[None, :, :]]
    bad = np.argwhere(assoc != right)
    if bad.size:
        a, b, c = (int(v) for v in bad[0])
        raise GroupAxiomError(f"Associativity fails at {(a, b, c)}", witness=(a, b, c))
    candidates = [e for e in range(m)
                  if np.array_equal(table[e], np.arange(m)) and np.array_equal(table[:, e], np.arange(m))]
    if not candidates:
        raise GroupAxiomError("No identity element")
    e = candidates[0]
    inverse = []
    for g in range(m):
        hits = np.flatnonzero(table[g] == e)
        if hits.size == 0 or table[int(hits[0]), g] != e:
            raise GroupAxiomError(f"Element {g} has no inverse", witness=g)
        inverse.append(int(hits[0]))
    return e, tuple(inverse)


def from_table(table: Any, name: str = "G", labels: Optional[Sequence[str]] = None,
               max_order: int = MAX_GROUP) -> FinGroup:
    """
    Validate a multiplication table and wrap it as a FinGroup.

    Parameters:
    table: square nested list or array of indices
    name: display name
    labels: optional element labels
    max_order: group order cap

    Returns:
    FinGroup
    """
    table = np.asarray(table, dtype=np.int64)
    if table.ndim != 2:
        raise GroupAxiomError(f"Table must be a matrix, got shape {table.shape}")
    if table.shape[0] > max_order:
        raise CapExceededError(f"Group order {table.shape[0]} exceeds cap {max_order}")
    e, inverse = _axiom_check(table)
    labels = tuple(labels) if labels is not None else tuple(str(g) for g in range(table.shape[0]))
    return FinGroup(table.shape[0], table, e, inverse, name, labels)


def cyclic(n: int) -> FinGroup:
    """C_n with element k = g^k."""
    if n < 1:
        raise GroupAxiomError(f"Cyclic group needs n >= 1, got {n}")
    idx = np.arange(n)
    labels = ["e"] + [f"g^{k}" if k > 1 else "g" for k in range(1, n)]
    return from_table((idx[:, None] + idx[None, :]) % n, name=f"C{n}", labels=labels,
                      max_order=max(n, MAX_GROUP))


def direct_product(G: FinGroup, H: FinGroup) -> FinGroup:
    """G x H with (g, h) at index g * |H| + h."""
    m, n = G.order, H.order
    table = (G.table[:, None, :, None] * n + H.table[None, :, None, :]).reshape(m * n, m * n)
    labels = [f"({G.label(g)},{H.label(h)})" for g in range(m) for h in range(n)]
    return from_table(table, name=f"{G.name}x{H.name}", labels=labels,
                      max_order=max(m * n, MAX_GROUP))


def symmetric_group(n: int = 3) -> FinGroup:
    """S_n on permutations in lexicographic order, identity first; (gh)(x) = g(h(x))."""
    perms = [Permutation(list(p)) for p in itertools.permutations(range(n))]
    index = {tuple(p.array_form): k for k, p in enumerate(perms)}
    m = len(perms)
    table = np.zeros((m, m), dtype=np.int64)
    for a, g in enumerate(perms):
        for b, h in enumerate(perms):
            # sympy's h * g applies h first
            table[a, b] = index[tuple((h * g).array_form)]
    labels = [str(tuple(p.cyclic_form)) if p.cyclic_form else "e" for p in perms]
    return from_table(table, name=f"S{n}", labels=labels, max_order=max(m, MAX_GROUP))


def parse_group(spec: Any, max_order: int = MAX_GROUP) -> FinGroup:
    """
    Group from a scenario block: "C2", "C3", "C2xC2", "S3" or {"table": [[...]]}.
    """
    if isinstance(spec, dict):
        if "table" not in spec:
            raise InputError("Group block needs a 'table' or a name", location="group")
        return from_table(spec["table"], name=str(spec.get("name", "G")), max_order=max_order)
    if not isinstance(spec, str) or GROUP_PATTERN.match(spec) is None:
        raise InputError(f"Unrecognised group {spec!r}", location="group")
    spec = spec.replace(" ", "")
    if spec == "S3":
        group = symmetric_group(3)
    else:
        factors = [cyclic(int(part[1:])) for part in spec.split("x")]
        group = factors[0]
        for H in factors[1:]:
            group = direct_product(group, H)
    if group.order > max_order:
        raise CapExceededError(f"Group order {group.order} exceeds cap {max_order}")
    return group


def trivial_group() -> FinGroup:
    return cyclic(1)
