import logging

import numpy as np
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from src.scalars.scalars import InputError, encode_array
from src.scalars.linalg import column_basis, span_contains
from src.finalg.finalg import FinAlgebra, AlgebraMap, multiplicativity_witness
from src.grouplib.groups import FinGroup

logger = logging.getLogger(__name__)


class GradingError(InputError):
    """Projection family is not a valid G-grading."""


def bilinear(A: FinAlgebra, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """All products U[:, s] V[:, t] as an array (dim, s, t)."""
    T1 = np.tensordot(U, A.sc, ([0], [0]))
    return A.ring.reduce(np.tensordot(T1, V, ([1], [0])).transpose(1, 0, 2))


@dataclass(frozen=True, eq=False)
class GradedAlgebra:
    """Algebra with a G-grading given by projections onto the components.

    Args:
        algebra: Underlying algebra.
        group: Grading group.
        projections: Stack (|G|, dim, dim) of idempotents pi_g.
        degrees: Degree of each basis vector when the grading is basis-aligned.
    """
    algebra: FinAlgebra
    group: FinGroup
    projections: np.ndarray = field(repr=False)
    degrees: Optional[Tuple[int, ...]] = None

    @property
    def ring(self):
        return self.algebra.ring

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def component(self, g: int) -> np.ndarray:
        """Basis of S_g as columns."""
        return column_basis(self.ring, self.projections[g])

    def component_dims(self) -> List[int]:
        return [self.component(g).shape[1] for g in self.group.elements()]

    def project(self, x: np.ndarray, g: int) -> np.ndarray:
        return self.ring.dot(self.projections[g], np.asarray(x))

    def is_homogeneous(self, x: np.ndarray, g: int) -> bool:
        return self.ring.equal_arrays(self.project(x, g), np.asarray(x))

    def encode(self) -> dict:
        out = {"algebra": self.algebra.encode(), "group": self.group.name}
        if self.degrees is not None:
            out["degrees"] = list(self.degrees)
        else:
            out["projections"] = encode_array(self.ring, self.projections)
        return out


def _family_defect(A: FinAlgebra, G: FinGroup, projections: np.ndarray) -> Optional[str]:
    ring = A.ring
    n = A.dim
    if projections.shape != (G.order, n, n):
        return f"expected {G.order} projections of shape {(n, n)}, got {projections.shape}"
    if not ring.equal_arrays(ring.reduce(projections.sum(axis=0)), ring.eye(n)):
        return "projections do not sum to the identity"
    for g in G.elements():
        for h in G.elements():
            prod = ring.dot(projections[g], projections[h])
            expected = projections[g] if g == h else ring.zeros((n, n))
            if not ring.equal_arrays(prod, expected):
                return f"pi_{g} pi_{h} is wrong"
    return None


def attach_grading(A: FinAlgebra, group: FinGroup, projections: np.ndarray,
                   degrees: Optional[Sequence[int]] = None) -> GradedAlgebra:
    """
    Validate a projection family as a G-grading of A.

    Parameters:
    A: algebra
    group: grading group
    projections: stack (|G|, dim, dim)
    degrees: optional per-basis-vector degrees, recorded when given

    Returns:
    GradedAlgebra
    """
    ring = A.ring
    projections = ring.reduce(np.asarray(projections))
    defect = _family_defect(A, group, projections)
    if defect is not None:
        raise GradingError(f"Invalid projection family: {defect}", location="grading")
    bases = [column_basis(ring, projections[g]) for g in group.elements()]
    for g in group.elements():
        for h in group.elements():
            if bases[g].shape[1] == 0 or bases[h].shape[1] == 0:
                continue
            gh = group.mul(g, h)
            prods = bilinear(A, bases[g], bases[h]).reshape(A.dim, -1)
            escape = ring.reduce(prods - ring.dot(projections[gh], prods))
            bad = np.flatnonzero(np.any(escape != 0, axis=0))
            if bad.size:
                vector = encode_array(ring, prods[:, int(bad[0])])
                raise GradingError(f"Product of degrees {g} and {h} leaves degree {gh}",
                                   witness={"g": g, "h": h, "product": vector}, location="grading")
    logger.debug("grading by %s with component dims %s", group.name, [b.shape[1] for b in bases])
    return GradedAlgebra(A, group, projections, tuple(int(d) for d in degrees) if degrees is not None else None)


def grading_from_degrees(A: FinAlgebra, group: FinGroup, degrees: Sequence[int]) -> GradedAlgebra:
    """Basis-aligned grading: basis vector i has degree degrees[i]."""
    ring = A.ring
    if len(degrees) != A.dim:
        raise GradingError(f"Expected {A.dim} degrees, got {len(degrees)}", location="grading.degrees")
    projections = ring.zeros((group.order, A.dim, A.dim))
    for i, g in enumerate(degrees):
        if not 0 <= int(g) < group.order:
            raise GradingError(f"Degree {g} is not a group element", location="grading.degrees")
        projections[int(g), i, i] = ring.one
    return attach_grading(A, group, projections, degrees)


def trivial_grading(A: FinAlgebra, group: FinGroup) -> GradedAlgebra:
    return grading_from_degrees(A, group, [group.identity] * A.dim)


@dataclass
class StrongGrading:
    """Outcome of the S_g S_h = S_gh test.

    Args:
        strongly_graded: Verdict.
        witness: First (g, h) whose products fall short of S_gh.
    """
    strongly_graded: bool
    witness: Optional[Tuple[int, int]] = None

    def __bool__(self):
        return self.strongly_graded


def is_strongly_graded(S: GradedAlgebra) -> StrongGrading:
    ring = S.ring
    G = S.group
    bases = [S.component(g) for g in G.elements()]
    for g in G.elements():
        for h in G.elements():
            target = bases[G.mul(g, h)]
            if target.shape[1] == 0:
                continue
            if bases[g].shape[1] == 0 or bases[h].shape[1] == 0:
                return StrongGrading(False, (g, h))
            prods = bilinear(S.algebra, bases[g], bases[h]).reshape(S.dim, -1)
            if not span_contains(ring, prods, target):
                return StrongGrading(False, (g, h))
    return StrongGrading(True)


def graded_map_defect(S: GradedAlgebra, T: GradedAlgebra, F: np.ndarray) -> Optional[str]:
    """Why F is not a graded algebra isomorphism S -> T, or None."""
    ring = S.ring
    if S.group.order != T.group.order or not np.array_equal(S.group.table, T.group.table):
        return "different grading groups"
    if S.dim != T.dim:
        return "different dimensions"
    F = ring.reduce(np.asarray(F))
    for g in S.group.elements():
        if not ring.equal_arrays(ring.dot(F, S.projections[g]), ring.dot(T.projections[g], F)):
            return f"degree {g} not preserved"
    witness = multiplicativity_witness(S.algebra, T.algebra, F)
    if witness is not None:
        return f"not multiplicative on {witness}"
    if not AlgebraMap(S.algebra, T.algebra, F).is_bijective():
        return "not bijective"
    return None


def graded_isomorphism(S: GradedAlgebra, T: GradedAlgebra, F: np.ndarray) -> AlgebraMap:
    """F as a verified graded isomorphism; GradingError otherwise."""
    defect = graded_map_defect(S, T, F)
    if defect is not None:
        raise GradingError(f"Not a graded isomorphism: {defect}")
    return AlgebraMap(S.algebra, T.algebra, F)


def component_table(S: GradedAlgebra) -> Dict[str, int]:
    return {S.group.label(g): d for g, d in enumerate(S.component_dims())}
