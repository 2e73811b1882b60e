import logging

import numpy as np
from dataclasses import dataclass, field
from typing import List, Optional

from src.scalars.scalars import Ring, InputError, InternalInconsistencyError, encode_array
from src.scalars.linalg import kron, nullspace, column_basis, scalar_ratio
from src.scalars.units import MAX_UNITS
from src.finalg.finalg import AlgebraMap
from src.graded.galois import class_is_trivial, galois_classes_equal, require_galois
from src.grouplib.groups import FinGroup
from src.grouplib.cohomology import Cocycle, is_coboundary
from src.grouplib.dual import group_algebra
from src.multiplier.multiplier import (
    Multiplier, MultiplierAlgebra, multiplier_algebra, canonical_embedding, unit_inverse,
)
from src.azumaya.elementary import DualPair, DualPairError, elementary_from_pair
from src.equivariant.gmodule import GModuleAlgebra, make_gmodule
from src.equivariant.pi import PiResult, pi_galois, anti_hom_p

logger = logging.getLogger(__name__)

# nullspace columns tried, alone and in pairs, when looking for a unit lift
MAX_LIFT_CANDIDATES = 8


@dataclass(frozen=True, eq=False)
class InnerWitness:
    """Group morphism f: G -> U(M(A)) with g.a = f(g) a f(g^-1).

    Args:
        gmodule: The G-module algebra A.
        multipliers: M(A).
        embedding: A -> M(A).
        units: Array (|G|, dim M(A)), units[g] = coordinates of f(g).
    """
    gmodule: GModuleAlgebra
    multipliers: MultiplierAlgebra = field(repr=False)
    embedding: AlgebraMap = field(repr=False)
    units: np.ndarray = field(repr=False)

    def multiplier(self, g: int) -> Multiplier:
        return self.multipliers.multiplier(self.units[g])

    def defect(self) -> Optional[str]:
        """Why f fails to be a strongly inner witness, or None."""
        A = self.gmodule
        ring = A.ring
        G = A.group
        M = self.multipliers.algebra
        if not ring.equal_arrays(self.units[G.identity], M.identity):
            return "f(e) is not the identity"
        for g in G.elements():
            for h in G.elements():
                if not ring.equal_arrays(M.product(self.units[g], self.units[h]), self.units[G.mul(g, h)]):
                    return f"f({g}) f({h}) != f({G.mul(g, h)})"
        for g in G.elements():
            # a -> f(g) a f(g^-1), read on A itself
            conj = ring.dot(self.multiplier(G.inv(g)).rho2, self.multiplier(g).rho1)
            if not ring.equal_arrays(conj, A.action[g]):
                return f"f({g}) does not induce the action of {g}"
        return None

    def encode(self) -> dict:
        return {"units": encode_array(self.gmodule.ring, self.units)}


@dataclass
class InnerDecision:
    """Both routes to strong innerness.

    Args:
        strongly_inner: Verdict.
        pi_trivial: The class of pi(A) is trivial.
        lift_cocycle: lambda with u_g u_h = lambda(g, h) u_gh for the per-element lifts.
        witness: The verified morphism f, when strongly inner.
        note: Why no lift exists.
    """
    strongly_inner: bool
    pi_trivial: bool
    lift_cocycle: Optional[Cocycle] = None
    witness: Optional[InnerWitness] = None
    note: str = ""

    def __bool__(self):
        return self.strongly_inner


def _unit_lift(M: MultiplierAlgebra, N: np.ndarray) -> Optional[np.ndarray]:
    ring = M.base.ring
    cols = [N[:, s] for s in range(min(N.shape[1], MAX_LIFT_CANDIDATES))]
    cands = list(cols)
    for s in range(len(cols)):
        for t in range(s + 1, len(cols)):
            cands.append(ring.reduce(cols[s] + cols[t]))
    for u in cands:
        if ring.is_zero_array(u):
            continue
        if unit_inverse(M.algebra, u) is not None:
            return u
    return None


def element_lifts(A: GModuleAlgebra, M: MultiplierAlgebra) -> Optional[List[np.ndarray]]:
    """Units u_g of M(A) with u_g a = (g.a) u_g, u_e = 1; None when some g has no unit solution."""
    ring = A.ring
    G = A.group
    Malg = M.algebra
    k = M.dim
    n = A.dim
    lifts = []
    for g in G.elements():
        if ring.equal_arrays(A.action[g], ring.eye(n)):
            lifts.append(Malg.identity)
            continue
        # rho1_u = rho2_u o g on A, linear in the coordinates of u
        D = ring.reduce(M.rho1 - np.matmul(M.rho2, A.action[g][None, :, :]))
        N = column_basis(ring, nullspace(ring, D.reshape(k, n * n).T))
        u = _unit_lift(M, N)
        if u is None:
            logger.debug("no unit implements %s on %s", G.label(g), A.name)
            return None
        lifts.append(u)
    return lifts


def lift_cocycle(A: GModuleAlgebra, M: MultiplierAlgebra, lifts: List[np.ndarray]) -> Cocycle:
    ring = A.ring
    G = A.group
    values = np.empty((G.order, G.order), dtype=object)
    for g in G.elements():
        for h in G.elements():
            c = scalar_ratio(ring, M.algebra.product(lifts[g], lifts[h]), lifts[G.mul(g, h)])
            if c is None or not ring.is_unit(c):
                raise InternalInconsistencyError(f"u_{g} u_{h} is not a unit multiple of u_{G.mul(g, h)}")
            values[g, h] = ring.canonical(c)
    alpha = Cocycle(G, ring, values)
    if alpha.defect() is not None:
        raise InternalInconsistencyError("lift values violate the cocycle identity")
    return alpha


def strongly_inner_witness(A: GModuleAlgebra, pi: Optional[PiResult] = None,
                           max_units: int = MAX_UNITS, check_azumaya: bool = True) -> InnerDecision:
    """
    Decide strong innerness through pi(A) and through explicit lifts, and insist they agree.

    Parameters:
    A: G-module Taylor-Azumaya algebra
    pi: precomputed pi(A)
    max_units: unit-group cap for the coboundary solve
    check_azumaya: certify A when pi has to be computed

    Returns:
    InnerDecision with a re-verified witness when strongly inner
    """
    ring = A.ring
    G = A.group
    pi = pi or pi_galois(A, check_azumaya=check_azumaya)
    pi_trivial = class_is_trivial(pi.galois, max_units)
    M = multiplier_algebra(A.algebra)
    iota = canonical_embedding(A.algebra, M, require_injective=False)
    lifts = element_lifts(A, M)
    witness = None
    lam = None
    note = ""
    if lifts is None:
        note = "some group element acts by a non-inner automorphism"
    else:
        lam = lift_cocycle(A, M, lifts)
        result = is_coboundary(lam, max_units)
        if result:
            b = result.witness
            units = np.stack([ring.reduce(lifts[g] * ring.inv(b[g])) for g in G.elements()])
            witness = InnerWitness(A, M, iota, units)
            defect = witness.defect()
            if defect is not None:
                raise InternalInconsistencyError(f"rescaled lifts are not a witness: {defect}")
        else:
            note = f"lift cocycle is not a coboundary: {result.note}"
    if pi_trivial != (witness is not None):
        raise InternalInconsistencyError(
            f"{A.name}: pi class trivial={pi_trivial} but witness found={witness is not None}")
    logger.debug("%s strongly inner: %s", A.name, witness is not None)
    return InnerDecision(witness is not None, pi_trivial, lam, witness, note)


def extended_action(witness: InnerWitness) -> GModuleAlgebra:
    """M(A) with g.x = f(g) x f(g^-1), checked to restrict to the action on A."""
    A = witness.gmodule
    ring = A.ring
    G = A.group
    Malg = witness.multipliers.algebra
    ops = np.stack([ring.dot(Malg.left_matrix(witness.units[g]), Malg.right_matrix(witness.units[G.inv(g)]))
                    for g in G.elements()])
    iota = witness.embedding.matrix
    for g in G.elements():
        if not ring.equal_arrays(ring.dot(ops[g], iota), ring.dot(iota, A.action[g])):
            raise InternalInconsistencyError(f"extended action of {g} does not restrict to A")
    return make_gmodule(Malg, G, ops, name=f"M({A.name})")


@dataclass
class LiftComparison:
    """Lifts f'(g) = p(eta(g^-1)) read off from an isomorphism eta: kG -> pi(A).

    Args:
        units: Array (|G|, dim M(A)) of the f'(g).
        is_witness: f' is itself a strongly inner witness.
        scalars: c_g with f'(g) = c_g f(g) against the linear-route witness.
    """
    units: np.ndarray
    is_witness: bool
    scalars: Optional[List] = None

    @property
    def passed(self) -> bool:
        return self.is_witness and self.scalars is not None


def compare_with_pi_lifts(decision: InnerDecision, pi: PiResult, max_units: int = MAX_UNITS) -> LiftComparison:
    """
    Rebuild the witness from pi(A) = kG and compare with the linear route.

    Parameters:
    decision: strongly inner decision carrying a witness
    pi: pi(A)
    max_units: unit-group cap

    Returns:
    LiftComparison
    """
    witness = decision.witness
    if witness is None:
        raise InputError("No strongly inner witness to compare against")
    A = witness.gmodule
    ring = A.ring
    G = A.group
    kG = require_galois(group_algebra(ring, G))
    comparison = galois_classes_equal(kG, pi.galois, max_units)
    if not comparison:
        raise InternalInconsistencyError("pi(A) has trivial class but no isomorphism with kG")
    eta = comparison.isomorphism.matrix
    p = anti_hom_p(A, pi, witness.multipliers)
    units = np.stack([ring.dot(p.matrix, eta[:, G.inv(g)]) for g in G.elements()])
    candidate = InnerWitness(A, witness.multipliers, witness.embedding, units)
    ok = candidate.defect() is None
    scalars = []
    for g in G.elements():
        c = scalar_ratio(ring, units[g], witness.units[g])
        if c is None or not ring.is_unit(c):
            scalars = None
            break
        scalars.append(c)
    return LiftComparison(units, ok, scalars)


# --- equivariant dual pairs ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class GDualPair:
    """Dual pair with G acting on M and M', mu(g m' (x) g m) = mu(m' (x) m).

    Args:
        pair: The dual pair (M, M', mu).
        group: G.
        psi: Stack (|G|, m, m) of the action on M.
        psi_prime: Stack (|G|, m', m') of the action on M'.
    """
    pair: DualPair
    group: FinGroup
    psi: np.ndarray = field(repr=False)
    psi_prime: np.ndarray = field(repr=False)

    @property
    def ring(self) -> Ring:
        return self.pair.ring


def _module_action_defect(ring: Ring, G: FinGroup, psi: np.ndarray, size: int) -> Optional[str]:
    if psi.shape != (G.order, size, size):
        return f"expected shape {(G.order, size, size)}, got {psi.shape}"
    if not ring.equal_arrays(psi[G.identity], ring.eye(size)):
        return "identity does not act trivially"
    for g in G.elements():
        for h in G.elements():
            if not ring.equal_arrays(ring.dot(psi[g], psi[h]), psi[G.mul(g, h)]):
                return f"psi({g}) psi({h}) != psi({G.mul(g, h)})"
    return None


def g_dual_pair(pair: DualPair, group: FinGroup, psi, psi_prime) -> GDualPair:
    """
    Validate G-actions on both modules of a dual pair.

    Parameters:
    pair: dual pair
    group: G
    psi: stack (|G|, m, m)
    psi_prime: stack (|G|, m', m')

    Returns:
    GDualPair
    """
    ring = pair.ring
    psi = ring.reduce(np.asarray(psi))
    psi_prime = ring.reduce(np.asarray(psi_prime))
    for name, stack, size in (("psi", psi, pair.m), ("psi_prime", psi_prime, pair.mprime)):
        defect = _module_action_defect(ring, group, stack, size)
        if defect is not None:
            raise DualPairError(f"Invalid action on {'M' if name == 'psi' else 'Mprime'}: {defect}",
                                location=name)
    for g in group.elements():
        if not ring.equal_arrays(ring.dot(ring.dot(psi_prime[g].T, pair.mu), psi[g]), pair.mu):
            raise DualPairError(f"Pairing is not invariant under {group.label(g)}", witness=g, location="mu")
    return GDualPair(pair, group, psi, psi_prime)


def trivial_g_dual_pair(pair: DualPair, group: FinGroup) -> GDualPair:
    ring = pair.ring
    return g_dual_pair(pair, group, np.stack([ring.eye(pair.m)] * group.order),
                       np.stack([ring.eye(pair.mprime)] * group.order))


def elementary_g_module(P: GDualPair, name: str = "E") -> GModuleAlgebra:
    """E(P) with g.(m (x) m') = g m (x) g m'."""
    ring = P.ring
    E = elementary_from_pair(P.pair).algebra
    action = np.stack([kron(ring, P.psi[g], P.psi_prime[g]) for g in P.group.elements()])
    return make_gmodule(E, P.group, action, name)


def pair_witness(P: GDualPair, E: Optional[GModuleAlgebra] = None) -> InnerWitness:
    """f(g) = (psi(g) (x) 1, 1 (x) psi'(g^-1)), verified."""
    ring = P.ring
    G = P.group
    E = E or elementary_g_module(P)
    M = multiplier_algebra(E.algebra)
    iota = canonical_embedding(E.algebra, M, require_injective=False)
    eye_m, eye_mp = ring.eye(P.pair.m), ring.eye(P.pair.mprime)
    units = []
    for g in G.elements():
        x = Multiplier(E.algebra, kron(ring, P.psi[g], eye_mp), kron(ring, eye_m, P.psi_prime[G.inv(g)]))
        units.append(M.coordinates(x))
    witness = InnerWitness(E, M, iota, np.stack(units))
    defect = witness.defect()
    if defect is not None:
        raise InternalInconsistencyError(f"module actions do not give a witness: {defect}")
    return witness


def recover_pair(pair: DualPair, witness: InnerWitness) -> GDualPair:
    """
    Read the actions on M and M' off a witness on E(pair).

    Parameters:
    pair: the dual pair underlying the algebra of the witness
    witness: strongly inner witness on E(pair)

    Returns:
    GDualPair, invariance re-verified
    """
    ring = pair.ring
    G = witness.gmodule.group
    m, mp = pair.m, pair.mprime
    eye_m, eye_mp = ring.eye(m), ring.eye(mp)
    psi, psi_prime = [], []
    for g in G.elements():
        rho1 = witness.multiplier(g).rho1
        F = rho1[::mp, ::mp]
        if not ring.equal_arrays(rho1, kron(ring, F, eye_mp)):
            raise InternalInconsistencyError(f"f({g}) does not act on M alone")
        rho2 = witness.multiplier(G.inv(g)).rho2
        Fp = rho2[:mp, :mp]
        if not ring.equal_arrays(rho2, kron(ring, eye_m, Fp)):
            raise InternalInconsistencyError(f"f({G.inv(g)}) does not act on M' alone")
        psi.append(F)
        psi_prime.append(Fp)
    return g_dual_pair(pair, G, np.stack(psi), np.stack(psi_prime))


def pair_rescaling(P: GDualPair, Q: GDualPair) -> Optional[List]:
    """Scalars c_g with psi_Q(g) = c_g psi_P(g) and psi'_Q(g) = c_g^-1 psi'_P(g), or None."""
    ring = P.ring
    out = []
    for g in P.group.elements():
        c = scalar_ratio(ring, Q.psi[g], P.psi[g])
        if c is None or not ring.is_unit(c):
            return None
        if not ring.equal_arrays(Q.psi_prime[g], ring.reduce(P.psi_prime[g] * ring.inv(c))):
            return None
        out.append(c)
    return out
