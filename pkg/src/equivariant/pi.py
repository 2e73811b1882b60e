import logging

import numpy as np
from dataclasses import dataclass, field
from typing import Optional, Tuple

from src.scalars.scalars import InputError, CapExceededError, InternalInconsistencyError, encode_array
from src.scalars.linalg import NoSolutionError, solve, nullspace, column_basis, vec_left, vec_right
from src.finalg.finalg import (
    FinAlgebra, AlgebraMap, make_algebra, subalgebra, unital_decomposition, algebra_generators,
)
from src.graded.graded import bilinear, grading_from_degrees
from src.graded.galois import GaloisObject, galois_check
from src.multiplier.multiplier import (
    Multiplier, MultiplierAlgebra, MAX_MULTIPLIER_DIM, multiplier_algebra, canonical_embedding,
)
from src.azumaya.azumaya import AzumayaCertificate, require_taylor_azumaya
from src.equivariant.gmodule import GModuleAlgebra
from src.equivariant.smash import (
    SmashProduct, BalancedSquareCheck, MAX_BALANCED_CHECK_DIM, smash_product, balanced_square_check,
)

logger = logging.getLogger(__name__)


def graded_component_endos(A: GModuleAlgebra, g: int) -> np.ndarray:
    """
    Basis of End_A^g(A): left A-linear f with f(ab) = f(a)(g.b).

    Parameters:
    A: unital G-module algebra
    g: group element

    Returns:
    stack (k, dim, dim) of the basis maps
    """
    ring = A.ring
    alg = A.algebra
    n = A.dim
    if alg.has_identity:
        # f = R_x with b x = x (g.b); generators suffice
        gens = algebra_generators(alg)
        blocks = [ring.reduce(alg.left_ops[b] - alg.right_matrix(A.act(g, alg.basis_vector(b))))
                  for b in gens]
        X = nullspace(ring, np.concatenate(blocks, axis=0)) if blocks else ring.eye(n)
        X = column_basis(ring, X)
        return np.stack([alg.right_matrix(X[:, s]) for s in range(X.shape[1])]) if X.shape[1] \
            else ring.zeros((0, n, n))
    blocks = []
    for a in range(n):
        L = alg.left_ops[a]
        blocks.append(vec_left(ring, L, n) - vec_right(ring, L, n))
        twisted = alg.right_matrix(A.act(g, alg.basis_vector(a)))
        blocks.append(vec_right(ring, alg.right_ops[a], n) - vec_left(ring, twisted, n))
    N = column_basis(ring, nullspace(ring, ring.reduce(np.concatenate(blocks, axis=0))))
    return np.stack([N[:, s].reshape(n, n) for s in range(N.shape[1])]) if N.shape[1] \
        else ring.zeros((0, n, n))


@dataclass(frozen=True, eq=False)
class PiResult:
    """pi(A) = Hom_{A^e}(A, A # kG) as a Galois object on the maps it is built from.

    Args:
        gmodule: The G-module algebra A.
        galois: pi(A) as a validated Galois object.
        maps: Stack (D, dim A, dim A), basis element d is maps[d] in degree degrees[d].
        degrees: Degree of each basis element.
        decomposition_independent: The product agrees for two unital decompositions.
        balanced: Outcome of the beta / beta^-1 check on the smash product.
        azumaya: Certificate of the input, when it was checked here.
    """
    gmodule: GModuleAlgebra
    galois: GaloisObject
    maps: np.ndarray = field(repr=False)
    degrees: Tuple[int, ...] = ()
    decomposition_independent: bool = True
    balanced: Optional[BalancedSquareCheck] = None
    azumaya: Optional[AzumayaCertificate] = field(default=None, repr=False)

    @property
    def algebra(self) -> FinAlgebra:
        return self.galois.algebra

    @property
    def dim(self) -> int:
        return self.galois.dim

    def stacked(self) -> np.ndarray:
        return _stack(self.gmodule, self.maps, self.degrees)

    def coordinates(self, components: np.ndarray) -> np.ndarray:
        """pi-coordinates of the element with the given (|G|, n, n) components."""
        ring = self.gmodule.ring
        return solve(ring, self.stacked(), ring.reduce(np.asarray(components)).reshape(-1))

    def components(self, x: np.ndarray) -> np.ndarray:
        """(|G|, n, n) components f_g of the element with coordinates x."""
        ring = self.gmodule.ring
        m, n = self.gmodule.group.order, self.gmodule.dim
        return ring.dot(self.stacked(), np.asarray(x)).reshape(m, n, n)

    def homogeneous_map(self, g: int) -> np.ndarray:
        """Component g of the spanning element of degree g."""
        return self.components(self.galois.basis[:, g])[g]

    def encode(self) -> dict:
        ring = self.gmodule.ring
        return {"degrees": list(self.degrees), "maps": encode_array(ring, self.maps),
                "cocycle": self.galois.cocycle.encode(),
                "decomposition_independent": self.decomposition_independent}


def _stack(A: GModuleAlgebra, maps: np.ndarray, degrees) -> np.ndarray:
    """Columns: each basis map placed in its degree block of k^(|G| n^2)."""
    ring = A.ring
    n = A.dim
    m = A.group.order
    out = ring.zeros((m * n * n, len(degrees)))
    for d, g in enumerate(degrees):
        out[g * n * n:(g + 1) * n * n, d] = maps[d].reshape(-1)
    return out


def convolution_constants(A: GModuleAlgebra, maps: np.ndarray, degrees, T: np.ndarray) -> np.ndarray:
    """
    Structure constants of (phi psi)(a) = sum_i phi(a_i) psi(a'_i) from x_a = sum T[a, i, j] x_i x_j.

    With phi in degree g and psi in degree h the product lies in degree gh with
    component a -> sum_i phi_g(a_i) (g.psi_h(a'_i)).
    """
    ring = A.ring
    G = A.group
    n = A.dim
    D = len(degrees)
    stacked = _stack(A, maps, degrees)
    products = ring.zeros((G.order * n * n, D * D))
    for s in range(D):
        g = degrees[s]
        for t in range(D):
            h = degrees[t]
            twisted = ring.dot(A.action[g], maps[t])
            P = ring.reduce(np.tensordot(bilinear(A.algebra, maps[s], twisted), T, ([1, 2], [1, 2])))
            gh = G.mul(g, h)
            products[gh * n * n:(gh + 1) * n * n, s * D + t] = P.reshape(-1)
    try:
        X = solve(ring, stacked, products)
    except NoSolutionError:
        raise InternalInconsistencyError("convolution product leaves the span of the graded endomorphisms")
    return ring.reduce(X.T.reshape(D, D, D))


def pi_galois(A: GModuleAlgebra, check_azumaya: bool = True,
              balanced_max_dim: int = MAX_BALANCED_CHECK_DIM) -> PiResult:
    """
    pi(A) assembled from the End_A^g(A) with the convolution product.

    Parameters:
    A: G-module Taylor-Azumaya algebra
    check_azumaya: certify the input first
    balanced_max_dim: size cap for the beta^-1 check on A # kG

    Returns:
    PiResult
    """
    ring = A.ring
    G = A.group
    n = A.dim
    cert = require_taylor_azumaya(A.algebra) if check_azumaya else None
    blocks = [(g, graded_component_endos(A, g)) for g in G.elements()]
    maps = np.concatenate([F for _, F in blocks], axis=0)
    degrees = tuple(g for g, F in blocks for _ in range(F.shape[0]))
    logger.debug("End^g dimensions for %s: %s", A.name, [F.shape[0] for _, F in blocks])

    T = unital_decomposition(A.algebra)
    sc = convolution_constants(A, maps, degrees, T)
    sc_alt = convolution_constants(A, maps, degrees, unital_decomposition(A.algebra, alternate=True))
    independent = ring.equal_arrays(sc, sc_alt)
    if not independent:
        raise InternalInconsistencyError("convolution product depends on the unital decomposition")

    unit_components = ring.zeros((G.order, n, n))
    unit_components[G.identity] = ring.eye(n)
    try:
        unit = solve(ring, _stack(A, maps, degrees), unit_components.reshape(-1))
    except NoSolutionError:
        raise InputError(f"{A.name}: the identity map is not in End_A^e(A)")
    labels = [f"f{d}@{G.label(g)}" for d, g in enumerate(degrees)]
    algebra = make_algebra(ring, len(degrees), sc, identity=unit, labels=labels, verify=True)
    check = galois_check(grading_from_degrees(algebra, G, degrees))
    if not check:
        if cert is not None:
            raise InternalInconsistencyError(f"pi({A.name}) is not a Galois object: {check.reason}")
        raise InputError(f"pi({A.name}) is not a Galois object: {check.reason}")

    balanced = BalancedSquareCheck(False)
    if n * G.order <= balanced_max_dim:
        balanced = balanced_square_check(smash_product(A), max_dim=balanced_max_dim)
        if not balanced.passed:
            raise InternalInconsistencyError(f"beta^-1 check fails on {A.name} # kG: {balanced.verdicts()}")
    logger.debug("pi(%s) has cocycle %s", A.name, check.galois.cocycle.encode())
    return PiResult(A, check.galois, maps, degrees, independent, balanced, cert)


@dataclass
class CommutantReport:
    """M(A # kG)^A against pi(A).

    Args:
        checked: False when a cap stopped the computation.
        commutant_dim: Dimension of the commutant of A in M(A # kG).
        pi_dim: Dimension of pi(A).
        alpha: Isomorphism commutant -> pi(A), c -> (a -> c . (a # e)).
        beta: pi(A) -> commutant, f -> (rho1, rho2) built from f.
        direct_formula: beta(f) = sum_g f_g(1) # g agrees, for algebras with identity.
        mutually_inverse: alpha beta and beta alpha are both the identity.
        note: Reason for skipping.
    """
    checked: bool
    commutant_dim: int = 0
    pi_dim: int = 0
    alpha: Optional[AlgebraMap] = field(default=None, repr=False)
    beta: Optional[AlgebraMap] = field(default=None, repr=False)
    direct_formula: Optional[bool] = None
    mutually_inverse: Optional[bool] = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return (self.checked and self.alpha is not None and self.direct_formula is not False
                and self.mutually_inverse is True)

    def verdicts(self) -> dict:
        return {"checked": self.checked, "commutant_dim": self.commutant_dim, "pi_dim": self.pi_dim,
                "isomorphism": self.alpha is not None, "direct_formula": self.direct_formula,
                "mutually_inverse": self.mutually_inverse,
                "note": self.note}


def _beta_multiplier(S: SmashProduct, pi: PiResult, x: np.ndarray) -> Multiplier:
    """(rho1, rho2) with rho1(a # g) = f(a)(1 # g) and rho2(a # g) = (1 # g) f(g^-1 . a)."""
    A = S.base
    ring = A.ring
    G = A.group
    n = A.dim
    comps = pi.components(x)
    rho1 = ring.zeros((S.dim, S.dim))
    rho2 = ring.zeros((S.dim, S.dim))
    for g in G.elements():
        cols = slice(g * n, (g + 1) * n)
        for h in G.elements():
            hg, gh = G.mul(h, g), G.mul(g, h)
            rho1[hg * n:(hg + 1) * n, cols] = comps[h]
            rho2[gh * n:(gh + 1) * n, cols] = ring.dot(ring.dot(A.action[g], comps[h]), A.action[G.inv(g)])
    return Multiplier(S.algebra, ring.reduce(rho1), ring.reduce(rho2))


def commutant_check(A: GModuleAlgebra, pi: Optional[PiResult] = None,
                    max_multiplier_dim: int = MAX_MULTIPLIER_DIM) -> CommutantReport:
    """
    Identify the A-commutant of M(A # kG) with pi(A).

    Parameters:
    A: G-module Taylor-Azumaya algebra
    pi: precomputed pi(A)
    max_multiplier_dim: cap forwarded to the multiplier solve

    Returns:
    CommutantReport, unchecked with a note when the cap is exceeded
    """
    ring = A.ring
    G = A.group
    n = A.dim
    pi = pi or pi_galois(A)
    S = smash_product(A)
    try:
        M = multiplier_algebra(S.algebra, max_dim=max_multiplier_dim)
    except CapExceededError as exc:
        logger.warning("commutant check skipped for %s: %s", A.name, exc)
        return CommutantReport(False, note=str(exc))
    iota = canonical_embedding(S.algebra, M)
    images = ring.dot(iota.matrix, S.eta.matrix)
    blocks = [ring.reduce(M.algebra.right_matrix(images[:, a]) - M.algebra.left_matrix(images[:, a]))
              for a in range(n)]
    C = column_basis(ring, nullspace(ring, np.concatenate(blocks, axis=0)))
    commutant = subalgebra(M.algebra, C, identity=M.algebra.identity)

    cols = []
    for s in range(C.shape[1]):
        X = ring.dot(M.multiplier(C[:, s]).rho1, S.eta.matrix)
        cols.append(pi.coordinates(X.reshape(G.order, n, n)))
    alpha = AlgebraMap(commutant, pi.algebra, np.stack(cols, axis=1), unit_preserving=True)
    if not alpha.is_bijective():
        raise InternalInconsistencyError(f"commutant of {A.name} in M(A # kG) is not isomorphic to pi")
    beta_cols = []
    for d in range(pi.dim):
        x = _beta_multiplier(S, pi, ring.eye(pi.dim)[d])
        defect = x.defect()
        if defect is not None:
            raise InternalInconsistencyError(f"beta of basis element {d} is not a multiplier: {defect}")
        try:
            beta_cols.append(solve(ring, C, M.coordinates(x)))
        except NoSolutionError:
            raise InternalInconsistencyError(
                f"beta of basis element {d} lies outside the commutant of {A.name}")
    beta = AlgebraMap(pi.algebra, commutant, np.stack(beta_cols, axis=1), unit_preserving=True)
    inverse_pair = (ring.equal_arrays(ring.dot(alpha.matrix, beta.matrix), ring.eye(pi.dim))
                    and ring.equal_arrays(ring.dot(beta.matrix, alpha.matrix), ring.eye(C.shape[1])))

    direct = None
    if A.algebra.has_identity:
        direct = True
        for d in range(pi.dim):
            comps = pi.components(ring.eye(pi.dim)[d])
            element = ring.reduce(np.concatenate([ring.dot(comps[g], A.algebra.identity)
                                                  for g in G.elements()]))
            coords = M.coordinates(M.of_element(element))
            if not ring.equal_arrays(ring.dot(C, beta.matrix[:, d]), coords):
                direct = False
                break
    logger.debug("commutant of %s has dimension %d", A.name, C.shape[1])
    return CommutantReport(True, C.shape[1], pi.dim, alpha, beta, direct, inverse_pair)


def anti_hom_p(A: GModuleAlgebra, pi: Optional[PiResult] = None,
               M: Optional[MultiplierAlgebra] = None) -> AlgebraMap:
    """
    p: pi(A) -> M(A), f -> (sum_h f_h (h^-1 .), sum_h f_h), checked anti-multiplicative.

    Parameters:
    A: G-module Taylor-Azumaya algebra
    pi: precomputed pi(A)
    M: precomputed M(A)

    Returns:
    AlgebraMap with anti=True
    """
    ring = A.ring
    G = A.group
    pi = pi or pi_galois(A)
    M = M or multiplier_algebra(A.algebra)
    cols = []
    for d, h in enumerate(pi.degrees):
        F = pi.maps[d]
        x = Multiplier(A.algebra, ring.dot(F, A.action[G.inv(h)]), F)
        defect = x.defect()
        if defect is not None:
            raise InternalInconsistencyError(f"p of basis element {d} is not a multiplier: {defect}")
        cols.append(M.coordinates(x))
    return AlgebraMap(pi.algebra, M.algebra, np.stack(cols, axis=1), unit_preserving=True, anti=True)
