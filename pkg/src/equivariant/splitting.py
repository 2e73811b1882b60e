import logging

import numpy as np
from dataclasses import dataclass, field
from typing import Optional

from src.scalars.linalg import NoSolutionError, inverse, kron
from src.finalg.finalg import AlgebraMap, make_algebra
from src.graded.graded import GradingError, graded_isomorphism
from src.graded.galois import GaloisObject, cotensor
from src.graded.miyashita import CORRECTED, miyashita_action
from src.azumaya.azumaya import AzumayaCertificate, is_taylor_azumaya
from src.azumaya.elementary import DualPair, ElementaryAlgebra, elementary_from_pair
from src.scalars.scalars import InternalInconsistencyError
from src.equivariant.gmodule import GModuleAlgebra, make_gmodule
from src.equivariant.pi import PiResult, pi_galois

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DualSmash:
    """B # k(G) for a Galois object B, with its Morita context data.

    Args:
        galois: The Galois object B, basis v_g with v_g v_h = alpha(g, h) v_gh.
        gmodule: B # k(G) on the basis v_s # p_g (index s * |G| + g), G acting on the p_g.
        pair: (B, B, (a, b) -> (ab)_e) in the v-basis.
        elementary: E of that pair.
        bracket: The context map E(pair) -> B # k(G), v_i (x) v_j -> [v_i, v_j].
        azumaya: Taylor-Azumaya certificate of B # k(G).
    """
    galois: GaloisObject
    gmodule: GModuleAlgebra
    pair: DualPair = field(repr=False)
    elementary: ElementaryAlgebra = field(repr=False)
    bracket: AlgebraMap = field(repr=False)
    azumaya: AzumayaCertificate = field(repr=False)


def smash_with_dual(B: GaloisObject) -> DualSmash:
    """
    A = B # k(G) with (a # p_g)(b # p_h) = a b_{gh^-1} # p_h and s.(b # p_h) = b # p_{h s^-1}.

    Parameters:
    B: Galois object

    Returns:
    DualSmash with the bracket verified as an isomorphism and A certified Taylor-Azumaya
    """
    ring = B.ring
    G = B.group
    m = G.order
    alpha = B.cocycle.values
    e = G.identity
    N = m * m
    sc = ring.zeros((N, N, N))
    for s in G.elements():
        for g in G.elements():
            for h in G.elements():
                t = G.mul(g, G.inv(h))
                sc[s * m + g, t * m + h, G.mul(s, t) * m + h] = alpha[s, t]
    identity = ring.zeros(N)
    for g in G.elements():
        identity[e * m + g] = ring.one
    labels = [f"v_{G.label(s)}#p_{G.label(g)}" for s in G.elements() for g in G.elements()]
    A = make_algebra(ring, N, sc, identity=identity, labels=labels)
    action = ring.zeros((m, N, N))
    for s in G.elements():
        for t in G.elements():
            for h in G.elements():
                action[s, t * m + G.mul(h, G.inv(s)), t * m + h] = ring.one
    gmodule = make_gmodule(A, G, action, name=f"B{B.dim}#k(G)")

    mu = ring.zeros((m, m))
    for j in G.elements():
        mu[j, G.inv(j)] = alpha[j, G.inv(j)]
    pair = DualPair(ring, m, m, mu)
    E = elementary_from_pair(pair)
    bracket = ring.zeros((N, N))
    for i in G.elements():
        for j in G.elements():
            bracket[G.mul(i, j) * m + G.inv(j), i * m + j] = alpha[i, j]
    bracket_map = AlgebraMap(E.algebra, A, bracket)
    if not bracket_map.is_bijective():
        raise InternalInconsistencyError("E(B, B, [,]) -> B # k(G) is not bijective")
    cert = is_taylor_azumaya(A)
    logger.debug("B # k(G) of dimension %d, Taylor-Azumaya: %s", N, cert.passed)
    return DualSmash(B, gmodule, pair, E, bracket_map, cert)


@dataclass
class SplitReport:
    """B -> pi(B # k(G)) through v_s -> sum_g (g acting on v_s) # p_g in degree s.

    Args:
        dual: The smash product with k(G).
        pi: pi(B # k(G)).
        phi: The verified graded isomorphism, when it is one.
        convention: Miyashita convention used in the formula.
        note: Why phi is not an isomorphism.
    """
    dual: DualSmash
    pi: PiResult
    phi: Optional[AlgebraMap] = None
    convention: str = CORRECTED
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.phi is not None and self.dual.azumaya.passed and self.dual.bracket.is_bijective()

    def verdicts(self) -> dict:
        return {"azumaya": self.dual.azumaya.passed, "elementary": self.dual.bracket.is_bijective(),
                "isomorphism": self.phi is not None, "convention": self.convention, "note": self.note}


def split_and_verify(B: GaloisObject, convention: str = CORRECTED) -> SplitReport:
    """
    Build the section of pi at B and check it.

    Parameters:
    B: Galois object
    convention: Miyashita convention for the action in the formula

    Returns:
    SplitReport
    """
    ring = B.ring
    G = B.group
    m = G.order
    dual = smash_with_dual(B)
    A = dual.gmodule
    pi = pi_galois(A, check_azumaya=False)
    V = B.basis
    V_inv = inverse(ring, V)
    ops = [ring.dot(ring.dot(V_inv, miyashita_action(B, g, convention)), V) for g in G.elements()]
    cols = []
    for s in G.elements():
        X = ring.zeros(m * m)
        for g in G.elements():
            image = ops[g][:, s]
            for t in G.elements():
                X[t * m + g] = image[t]
        components = ring.zeros((m, A.dim, A.dim))
        components[s] = A.algebra.right_matrix(X)
        try:
            cols.append(pi.coordinates(components))
        except NoSolutionError:
            note = f"image of v_{G.label(s)} is not in pi(A)"
            logger.warning("section fails for %s: %s", A.name, note)
            return SplitReport(dual, pi, None, convention, note)
    phi = ring.dot(np.stack(cols, axis=1), V_inv)
    try:
        iso = graded_isomorphism(B.graded, pi.galois.graded, phi)
    except GradingError as exc:
        return SplitReport(dual, pi, None, convention, str(exc))
    return SplitReport(dual, pi, iso, convention)


def cotensor_comparison(pi_a: PiResult, pi_b: PiResult, pi_ab: PiResult) -> AlgebraMap:
    """
    pi(A) box pi(B) -> pi(A (x) B), f_g (x) f'_g -> (f_g (x) f'_g) in degree g, verified graded.

    Parameters:
    pi_a, pi_b: pi of the factors
    pi_ab: pi of the tensor product with the diagonal action

    Returns:
    AlgebraMap of graded algebras
    """
    ring = pi_ab.gmodule.ring
    G = pi_ab.gmodule.group
    n = pi_ab.gmodule.dim
    box = cotensor(pi_a.galois, pi_b.galois)
    cols = []
    for g in G.elements():
        components = ring.zeros((G.order, n, n))
        components[g] = kron(ring, pi_a.homogeneous_map(g), pi_b.homogeneous_map(g))
        cols.append(pi_ab.coordinates(components))
    return graded_isomorphism(box.graded, pi_ab.galois.graded, np.stack(cols, axis=1))
