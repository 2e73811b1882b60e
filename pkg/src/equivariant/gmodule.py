import logging

import numpy as np
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from src.scalars.scalars import Ring, InputError, encode_array
from src.scalars.linalg import NoSolutionError, inverse
from src.finalg.finalg import FinAlgebra, multiplicativity_witness, tensor_product, opposite, ground_algebra
from src.grouplib.groups import FinGroup

logger = logging.getLogger(__name__)


class ActionError(InputError):
    """Matrices do not define an action by algebra automorphisms."""


@dataclass(frozen=True, eq=False)
class GModuleAlgebra:
    """Algebra with G acting by automorphisms.

    Args:
        algebra: Underlying algebra.
        group: Acting group.
        action: Stack (|G|, dim, dim), action[g] = rho(g).
        name: Display name used in reports.
    """
    algebra: FinAlgebra
    group: FinGroup
    action: np.ndarray = field(repr=False)
    name: str = "A"

    @property
    def ring(self) -> Ring:
        return self.algebra.ring

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def act(self, g: int, x: np.ndarray) -> np.ndarray:
        return self.ring.dot(self.action[g], np.asarray(x))

    def is_trivial(self) -> bool:
        eye = self.ring.eye(self.dim)
        return all(self.ring.equal_arrays(self.action[g], eye) for g in self.group.elements())

    def encode(self) -> dict:
        return {"name": self.name, "algebra": self.algebra.encode(), "group": self.group.name,
                "action": encode_array(self.ring, self.action)}


def action_defect(A: FinAlgebra, group: FinGroup, action: np.ndarray) -> Optional[Tuple[str, Tuple]]:
    """Why `action` is not an action by automorphisms, or None."""
    ring = A.ring
    n = A.dim
    if action.shape != (group.order, n, n):
        return "shape", (group.order, n, n)
    if not ring.equal_arrays(action[group.identity], ring.eye(n)):
        return "identity does not act trivially", (group.identity,)
    for g in group.elements():
        for h in group.elements():
            if not ring.equal_arrays(ring.dot(action[g], action[h]), action[group.mul(g, h)]):
                return "rho(g) rho(h) != rho(gh)", (g, h)
    for g in group.elements():
        witness = multiplicativity_witness(A, A, action[g])
        if witness is not None:
            return "not multiplicative", (g,) + tuple(witness)
    return None


def make_gmodule(A: FinAlgebra, group: FinGroup, action, name: str = "A") -> GModuleAlgebra:
    """
    Validate an action by automorphisms.

    Parameters:
    A: algebra
    group: G
    action: stack (|G|, dim, dim)
    name: display name

    Returns:
    GModuleAlgebra
    """
    ring = A.ring
    action = ring.reduce(np.asarray(action))
    defect = action_defect(A, group, action)
    if defect is not None:
        reason, witness = defect
        raise ActionError(f"Invalid G-action: {reason}", witness=witness, location="action")
    return GModuleAlgebra(A, group, action, name)


def action_from_generators(A: FinAlgebra, group: FinGroup, images: Dict[int, np.ndarray],
                           name: str = "A") -> GModuleAlgebra:
    """
    Extend rho from the given elements to the generated group, then validate.

    Parameters:
    A: algebra
    group: G, generated by the keys of images
    images: g -> rho(g)
    name: display name

    Returns:
    GModuleAlgebra
    """
    ring = A.ring
    n = A.dim
    ops = {group.identity: ring.eye(n)}
    gens = {int(g): ring.reduce(np.asarray(m)) for g, m in images.items()}
    frontier = [group.identity]
    while frontier:
        fresh = []
        for x in frontier:
            for g, rho in gens.items():
                y = group.mul(x, g)
                if y not in ops:
                    ops[y] = ring.dot(ops[x], rho)
                    fresh.append(y)
        frontier = fresh
    missing = [g for g in group.elements() if g not in ops]
    if missing:
        raise ActionError("Action images do not generate the group", witness=missing, location="action")
    return make_gmodule(A, group, np.stack([ops[g] for g in group.elements()]), name)


def trivial_action(A: FinAlgebra, group: FinGroup, name: str = "A") -> GModuleAlgebra:
    ring = A.ring
    return GModuleAlgebra(A, group, np.stack([ring.eye(A.dim)] * group.order), name)


def conjugation_operator(A: FinAlgebra, u: np.ndarray) -> np.ndarray:
    """Matrix of a -> u a u^-1 for a unit u of an algebra with identity."""
    ring = A.ring
    u = ring.reduce(np.asarray(u))
    try:
        u_inv = ring.dot(inverse(ring, A.left_matrix(u)), A.identity)
    except NoSolutionError:
        raise ActionError("Conjugating element is not a unit", witness=encode_array(ring, u))
    return ring.dot(A.left_matrix(u), A.right_matrix(u_inv))


def conjugation_action(A: FinAlgebra, group: FinGroup, units: Dict[int, np.ndarray],
                       name: str = "A") -> GModuleAlgebra:
    """
    Inner action g -> conjugation by units[g] on the given generators.

    Parameters:
    A: algebra with identity, e.g. M_n(k) with units as n x n matrices
    group: G
    units: g -> element coordinates (or an n x n matrix for M_n(k))

    Returns:
    GModuleAlgebra
    """
    if not A.has_identity:
        raise ActionError("Conjugation needs an algebra with identity")
    images = {g: conjugation_operator(A, np.asarray(u).reshape(-1)) for g, u in units.items()}
    return action_from_generators(A, group, images, name)


def tensor_gmodule(A: GModuleAlgebra, B: GModuleAlgebra, name: Optional[str] = None) -> GModuleAlgebra:
    """A (x) B with the diagonal action g (a (x) b) = ga (x) gb."""
    if not np.array_equal(A.group.table, B.group.table):
        raise ActionError("Tensor product needs a common group")
    ring = A.ring
    T = tensor_product(A.algebra, B.algebra)
    action = np.stack([np.multiply.outer(A.action[g], B.action[g]).transpose(0, 2, 1, 3)
                       .reshape(T.dim, T.dim) for g in A.group.elements()])
    return GModuleAlgebra(T, A.group, ring.reduce(action), name or f"{A.name}*{B.name}")


def opposite_gmodule(A: GModuleAlgebra) -> GModuleAlgebra:
    return GModuleAlgebra(opposite(A.algebra), A.group, A.action, f"{A.name}^op")


def ground_gmodule(ring: Ring, group: FinGroup) -> GModuleAlgebra:
    """k with the trivial action, the unit of BM'(k, G)."""
    return trivial_action(ground_algebra(ring), group, name="k")
