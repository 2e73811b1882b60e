import logging

import numpy as np
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.scalars.scalars import InputError
from src.finalg.finalg import multiplicativity_witness
from src.graded.galois import GaloisObject
from src.utils import CONVENTIONS

logger = logging.getLogger(__name__)

CORRECTED = "corrected"
LITERAL = "literal"


def _check_convention(convention: str):
    if convention not in CONVENTIONS:
        raise InputError(f"Unknown Miyashita convention {convention!r}, expected one of {CONVENTIONS}",
                         location="miyashita.convention")


def inverse_image(S: GaloisObject, h: int) -> np.ndarray:
    """sum X (x) Y = gamma^-1(1 (x) h) as a (dim x dim) coefficient matrix."""
    ring = S.ring
    n = S.dim
    m = S.group.order
    target = ring.zeros((n, m))
    target[:, h] = S.algebra.identity
    return ring.dot(S.gamma_inverse, target.reshape(n * m)).reshape(n, n)


def miyashita_action(S: GaloisObject, g: int, convention: str = CORRECTED) -> np.ndarray:
    """
    Operator b -> sum X b Y with sum X (x) Y = gamma^-1(1 (x) g^-1).

    Parameters:
    S: Galois object
    g: group element
    convention: "corrected" solves at g^-1; "literal" solves at g

    Returns:
    (dim x dim) matrix
    """
    _check_convention(convention)
    ring = S.ring
    A = S.algebra
    h = S.group.inv(g) if convention == CORRECTED else g
    T = inverse_image(S, h)
    # sum_i L_i (sum_k T[i, k] R_k)
    RT = ring.reduce(np.tensordot(T, A.right_ops, ([1], [0])))
    return ring.reduce(np.matmul(A.left_ops, RT).sum(axis=0))


@dataclass
class MiyashitaReport:
    """Properties of the action on every basis element and group element.

    Args:
        convention: Convention the operators were solved with.
        is_group_action: op(e) = id and op(g) op(h) = op(gh).
        yetter_drinfeld: op(g) maps S_s into S_(g s g^-1).
        quantum_commutative: b a = (s -> a) b for b in S_s.
        automorphism: Every op(g) is multiplicative.
        witnesses: First failing element per property.
        operators: op(g) per group element.
    """
    convention: str
    is_group_action: bool
    yetter_drinfeld: bool
    quantum_commutative: bool
    automorphism: bool
    witnesses: Dict[str, Tuple] = field(default_factory=dict)
    operators: List[np.ndarray] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return self.is_group_action and self.yetter_drinfeld and self.quantum_commutative and self.automorphism

    def verdicts(self) -> dict:
        return {
            "convention": self.convention,
            "is_group_action": self.is_group_action,
            "yetter_drinfeld": self.yetter_drinfeld,
            "quantum_commutative": self.quantum_commutative,
            "automorphism": self.automorphism,
            "witnesses": {k: list(v) for k, v in sorted(self.witnesses.items())},
        }


def _group_action_witness(S: GaloisObject, ops: List[np.ndarray]) -> Optional[Tuple]:
    ring = S.ring
    G = S.group
    if not ring.equal_arrays(ops[G.identity], ring.eye(S.dim)):
        return (G.identity,)
    for g in G.elements():
        for h in G.elements():
            if not ring.equal_arrays(ring.dot(ops[g], ops[h]), ops[G.mul(g, h)]):
                return (g, h)
    return None


def _yetter_drinfeld_witness(S: GaloisObject, ops: List[np.ndarray]) -> Optional[Tuple]:
    ring = S.ring
    G = S.group
    P = S.graded.projections
    eye = ring.eye(S.dim)
    for g in G.elements():
        for s in G.elements():
            escape = ring.dot(ring.reduce(eye - P[G.conj(g, s)]), ring.dot(ops[g], P[s]))
            if not ring.is_zero_array(escape):
                return (g, s)
    return None


def _quantum_commutative_witness(S: GaloisObject, ops: List[np.ndarray]) -> Optional[Tuple]:
    ring = S.ring
    A = S.algebra
    for s in S.group.elements():
        basis = S.graded.component(s)
        for t in range(basis.shape[1]):
            b = basis[:, t]
            if not ring.equal_arrays(A.left_matrix(b), ring.dot(A.right_matrix(b), ops[s])):
                return (s, t)
    return None


def miyashita_properties(S: GaloisObject, convention: str = CORRECTED) -> MiyashitaReport:
    """
    Check the action, Yetter-Drinfeld and quantum-commutativity properties.

    Parameters:
    S: Galois object
    convention: see miyashita_action

    Returns:
    MiyashitaReport; failures are entries, never exceptions
    """
    ops = [miyashita_action(S, g, convention) for g in S.group.elements()]
    witnesses = {}
    checks = {
        "is_group_action": _group_action_witness(S, ops),
        "yetter_drinfeld": _yetter_drinfeld_witness(S, ops),
        "quantum_commutative": _quantum_commutative_witness(S, ops),
    }
    auto = None
    for g in S.group.elements():
        w = multiplicativity_witness(S.algebra, S.algebra, ops[g])
        if w is not None:
            auto = (g,) + tuple(w)
            break
    checks["automorphism"] = auto
    for name, witness in checks.items():
        if witness is not None:
            witnesses[name] = witness
    report = MiyashitaReport(convention, checks["is_group_action"] is None, checks["yetter_drinfeld"] is None,
                             checks["quantum_commutative"] is None, auto is None, witnesses, ops)
    logger.debug("Miyashita (%s) on %s: %s", convention, S.group.name, report.verdicts())
    return report
