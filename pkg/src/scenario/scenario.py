import json
import logging

import numpy as np
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from src.utils import sha256_of
from src.scalars.scalars import Ring, InputError
from src.finalg.finalg import FinAlgebra, MAX_DIM, make_algebra, matrix_algebra, truncated_polynomial
from src.grouplib.groups import FinGroup, MAX_GROUP, parse_group
from src.grouplib.cohomology import Cocycle, make_cocycle
from src.grouplib.dual import group_algebra
from src.graded.graded import GradedAlgebra, grading_from_degrees
from src.graded.galois import GaloisObject, crossed_product, galois_check
from src.azumaya.quaternion import quaternion_algebra
from src.azumaya.elementary import DualPair, dual_pair, elementary_from_pair
from src.equivariant.gmodule import (
    GModuleAlgebra, action_from_generators, conjugation_action, trivial_action,
)
from src.equivariant.inner import GDualPair, g_dual_pair, elementary_g_module
from src.equivariant.sequence import Corpus

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

SECTIONS = ("cocycles", "pairs", "algebras", "graded", "galois", "gmodules")
BUILTINS = ("matrix", "truncated", "group_algebra", "crossed_product", "quaternion", "dual_pair")


class ScenarioError(InputError):
    """Scenario file that cannot be parsed or whose blocks do not validate."""


@contextmanager
def _block(location: str):
    """Re-raise any rejection inside a block as a ScenarioError located at that block."""
    try:
        yield
    except ScenarioError:
        raise
    except InputError as exc:
        where = f"{location}.{exc.location}" if exc.location else location
        raise ScenarioError(str(exc), witness=exc.witness, location=where) from exc


@dataclass
class Scenario:
    """Validated contents of a scenario file.

    Args:
        name: Scenario name.
        ring: k.
        group: G, None when the file declares none.
        sha256: Hash of the canonical JSON of the file.
        cocycles: Named 2-cocycles.
        pairs: Named dual pairs.
        algebras: Named algebras, builtins expanded.
        quaternions: Algebra name -> (a, b) for quaternion builtins.
        graded: Named graded algebras, Galois or not.
        galois: Named Galois objects.
        gmodules: Named G-module algebras.
        g_pairs: G-module name -> the equivariant dual pair it was built from.
    """
    name: str
    ring: Ring
    group: Optional[FinGroup]
    sha256: str
    cocycles: Dict[str, Cocycle] = field(default_factory=dict)
    pairs: Dict[str, DualPair] = field(default_factory=dict)
    algebras: Dict[str, FinAlgebra] = field(default_factory=dict)
    quaternions: Dict[str, Tuple[Fraction, Fraction]] = field(default_factory=dict)
    graded: Dict[str, GradedAlgebra] = field(default_factory=dict)
    galois: Dict[str, GaloisObject] = field(default_factory=dict)
    gmodules: Dict[str, GModuleAlgebra] = field(default_factory=dict)
    g_pairs: Dict[str, GDualPair] = field(default_factory=dict)

    def require_group(self, location: str = "group") -> FinGroup:
        if self.group is None:
            raise ScenarioError("This scenario needs a 'group' block", location=location)
        return self.group

    def corpus(self) -> Corpus:
        """Every G-module algebra and Galois object of the file as a verification corpus."""
        group = self.require_group("corpus")
        return Corpus(self.name, self.ring, group, list(self.gmodules.values()),
                      list(self.galois.values()), dict(self.g_pairs))

    def summary(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "ring": self.ring.literal,
            "group": None if self.group is None else self.group.name,
            "sha256": self.sha256,
            **{section: sorted(getattr(self, section)) for section in SECTIONS},
        }


# --- block parsers -----------------------------------------------------------

def _mapping(value: Any, location: str) -> Dict[str, Any]:
    if not isinstance(value, dict):
        raise ScenarioError(f"Expected a JSON object, got {type(value).__name__}", location=location)
    return value


def _group_element(group: FinGroup, key: Any, location: str) -> int:
    try:
        g = int(key)
    except (TypeError, ValueError):
        labels = list(group.labels)
        if key in labels:
            return labels.index(key)
        raise ScenarioError(f"Unknown group element {key!r}", location=location)
    if not 0 <= g < group.order:
        raise ScenarioError(f"Group element {g} out of range 0..{group.order - 1}", location=location)
    return g


def _element_map(ring: Ring, group: FinGroup, block: Any, location: str) -> Dict[int, np.ndarray]:
    out = {}
    for key, matrix in _mapping(block, location).items():
        g = _group_element(group, key, f"{location}.{key}")
        with _block(f"{location}.{key}"):
            out[g] = ring.array(matrix)
    return out


def _cocycle(scenario: Scenario, spec: Any, location: str) -> Cocycle:
    """A cocycle by name or as an inline |G| x |G| table."""
    if isinstance(spec, str):
        if spec not in scenario.cocycles:
            raise ScenarioError(f"Unknown cocycle {spec!r}", location=location)
        return scenario.cocycles[spec]
    group = scenario.require_group(location)
    with _block(location):
        return make_cocycle(group, scenario.ring, spec)


def parse_dual_pair(ring: Ring, block: Any, location: str) -> DualPair:
    """{"M": m, "Mprime": m', "mu": [[...]]}."""
    block = _mapping(block, location)
    missing = [key for key in ("M", "Mprime", "mu") if key not in block]
    if missing:
        raise ScenarioError(f"Dual pair block lacks {missing}", location=location)
    with _block(location):
        return dual_pair(ring, int(block["M"]), int(block["Mprime"]), block["mu"])


def parse_algebra(scenario: Scenario, name: str, block: Any, max_dim: int = MAX_DIM) -> FinAlgebra:
    """
    An algebra block: a builtin or explicit {"dim", "sc", "identity", "labels"}.

    Parameters:
    scenario: scenario being filled, for ring, group and cocycle lookups
    name: block name
    block: decoded JSON object
    max_dim: dimension cap

    Returns:
    FinAlgebra; builtins with a natural grading also register it
    """
    ring = scenario.ring
    location = f"algebras.{name}"
    block = _mapping(block, location)
    builtin = [key for key in BUILTINS if key in block]
    if len(builtin) > 1:
        raise ScenarioError(f"Several builtins in one block: {builtin}", location=location)
    with _block(location):
        if builtin == ["matrix"]:
            n = int(block["matrix"])
            if n * n > max_dim:
                raise ScenarioError(f"M_{n} exceeds the dimension cap {max_dim}", location=location)
            return matrix_algebra(ring, n)
        if builtin == ["truncated"]:
            return truncated_polynomial(ring, block["truncated"])
        if builtin == ["group_algebra"]:
            graded = group_algebra(ring, scenario.require_group(location))
            scenario.graded[name] = graded
            return graded.algebra
        if builtin == ["crossed_product"]:
            alpha = _cocycle(scenario, block["crossed_product"], f"{location}.crossed_product")
            S = crossed_product(ring, scenario.require_group(location), alpha)
            scenario.graded[name] = S.graded
            return S.algebra
        if builtin == ["quaternion"]:
            a, b = block["quaternion"]
            algebra = quaternion_algebra(a, b, ring)
            scenario.quaternions[name] = (Fraction(str(a)), Fraction(str(b)))
            return algebra
        if builtin == ["dual_pair"]:
            P = parse_dual_pair(ring, block["dual_pair"], f"{location}.dual_pair")
            scenario.pairs.setdefault(name, P)
            return elementary_from_pair(P).algebra
        if "dim" not in block or "sc" not in block:
            raise ScenarioError("Algebra block needs 'dim' and 'sc' or a builtin", location=location)
        if "ring" in block and Ring.parse(block["ring"]) != ring:
            raise ScenarioError(f"Algebra ring {block['ring']} differs from {ring.literal}", location=location)
        dim = int(block["dim"])
        identity = ring.array(block["identity"]) if "identity" in block else None
        return make_algebra(ring, dim, ring.array(block["sc"]) if dim else ring.zeros((0, 0, 0)),
                            identity=identity, labels=block.get("labels"),
                            max_dim=max_dim, verify=True)


def _named_algebra(scenario: Scenario, block: Dict[str, Any], location: str) -> Tuple[str, FinAlgebra]:
    ref = block.get("algebra")
    if ref not in scenario.algebras:
        raise ScenarioError(f"Unknown algebra {ref!r}", location=f"{location}.algebra")
    return ref, scenario.algebras[ref]


def parse_graded(scenario: Scenario, name: str, block: Any, section: str = "graded") -> GradedAlgebra:
    """{"algebra": name, "grading": {"degrees": [...]}}; builtins may omit the grading."""
    location = f"{section}.{name}"
    block = _mapping(block, location)
    if section == "galois" and "crossed_product" in block:
        alpha = _cocycle(scenario, block["crossed_product"], f"{location}.crossed_product")
        with _block(location):
            return crossed_product(scenario.ring, scenario.require_group(location), alpha).graded
    ref, A = _named_algebra(scenario, block, location)
    group = scenario.require_group(location)
    if "grading" not in block:
        if ref not in scenario.graded:
            raise ScenarioError(f"Algebra {ref!r} has no natural grading; give 'grading'", location=location)
        return scenario.graded[ref]
    grading = _mapping(block["grading"], f"{location}.grading")
    if "degrees" not in grading:
        raise ScenarioError("Grading block needs 'degrees'", location=f"{location}.grading")
    degrees = [_group_element(group, d, f"{location}.grading.degrees") for d in grading["degrees"]]
    with _block(location):
        return grading_from_degrees(A, group, degrees)


def parse_galois(scenario: Scenario, name: str, block: Any) -> GaloisObject:
    graded = parse_graded(scenario, name, block, section="galois")
    check = galois_check(graded)
    if not check:
        raise ScenarioError(f"Not a Galois object: {check.reason}", location=f"galois.{name}",
                            witness=None if check.kernel is None else [str(v) for v in check.kernel])
    return check.galois


def parse_gmodule(scenario: Scenario, name: str, block: Any) -> GModuleAlgebra:
    """
    A G-module block.

    Forms: {"algebra": ref} (trivial action), {"algebra": ref, "action": {g: matrix}},
    {"algebra": ref, "conjugation": {g: unit}} and
    {"dual_pair": {M, Mprime, mu}, "psi": {g: matrix}, "psi_prime": {g: matrix}}.
    """
    ring = scenario.ring
    location = f"gmodules.{name}"
    block = _mapping(block, location)
    group = scenario.require_group(location)
    if "dual_pair" in block:
        P = parse_dual_pair(ring, block["dual_pair"], f"{location}.dual_pair")
        psi = _element_map(ring, group, block.get("psi", {}), f"{location}.psi")
        psi_prime = _element_map(ring, group, block.get("psi_prime", {}), f"{location}.psi_prime")
        with _block(location):
            Q = g_dual_pair(P, group, _generated(ring, group, psi, P.m, f"{location}.psi"),
                            _generated(ring, group, psi_prime, P.mprime, f"{location}.psi_prime"))
            A = elementary_g_module(Q, name)
        scenario.g_pairs[name] = Q
        return A
    _, algebra = _named_algebra(scenario, block, location)
    if "action" in block and "conjugation" in block:
        raise ScenarioError("Give either 'action' or 'conjugation'", location=location)
    with _block(location):
        if "conjugation" in block:
            units = _element_map(ring, group, block["conjugation"], f"{location}.conjugation")
            return conjugation_action(algebra, group, units, name)
        if "action" in block:
            images = _element_map(ring, group, block["action"], f"{location}.action")
            return action_from_generators(algebra, group, images, name)
        return trivial_action(algebra, group, name)


def _generated(ring: Ring, group: FinGroup, images: Dict[int, np.ndarray], size: int,
               location: str) -> np.ndarray:
    """Stack (|G|, size, size) from images of generators, identity when empty."""
    ops = {group.identity: ring.eye(size)}
    frontier = [group.identity]
    while frontier:
        fresh = []
        for x in frontier:
            for g, rho in images.items():
                y = group.mul(x, g)
                if y not in ops:
                    ops[y] = ring.dot(ops[x], rho)
                    fresh.append(y)
        frontier = fresh
    missing = [g for g in group.elements() if g not in ops]
    if missing:
        raise ScenarioError("Module action images do not generate the group", witness=missing,
                            location=location)
    return np.stack([ops[g] for g in group.elements()])


# --- files -------------------------------------------------------------------

def parse_scenario(data: Any, max_dim: int = MAX_DIM, max_group: int = MAX_GROUP) -> Scenario:
    """
    Validate a decoded scenario document block by block.

    Parameters:
    data: decoded JSON object with "schema", "ring" and optional sections
    max_dim: algebra dimension cap
    max_group: group order cap

    Returns:
    Scenario
    """
    data = _mapping(data, "scenario")
    schema = data.get("schema")
    if schema != SCHEMA_VERSION:
        raise ScenarioError(f"Unsupported schema version {schema!r}, expected {SCHEMA_VERSION}",
                            location="schema")
    if "ring" not in data:
        raise ScenarioError("Scenario needs a 'ring'", location="ring")
    with _block("ring"):
        ring = Ring.parse(data["ring"])
    group = None
    if "group" in data:
        with _block("group"):
            group = parse_group(data["group"], max_order=max_group)
    unknown = sorted(set(data) - {"schema", "name", "ring", "group", "description"} - set(SECTIONS))
    if unknown:
        raise ScenarioError(f"Unknown scenario sections {unknown}", location="scenario")
    scenario = Scenario(str(data.get("name", "scenario")), ring, group, sha256_of(data))
    for name, block in _mapping(data.get("cocycles", {}), "cocycles").items():
        scenario.cocycles[name] = _cocycle(scenario, block, f"cocycles.{name}")
    for name, block in _mapping(data.get("pairs", {}), "pairs").items():
        scenario.pairs[name] = parse_dual_pair(ring, block, f"pairs.{name}")
    for name, block in _mapping(data.get("algebras", {}), "algebras").items():
        scenario.algebras[name] = parse_algebra(scenario, name, block, max_dim)
    for name, block in _mapping(data.get("graded", {}), "graded").items():
        scenario.graded[name] = parse_graded(scenario, name, block)
    for name, block in _mapping(data.get("galois", {}), "galois").items():
        scenario.galois[name] = parse_galois(scenario, name, block)
    for name, block in _mapping(data.get("gmodules", {}), "gmodules").items():
        scenario.gmodules[name] = parse_gmodule(scenario, name, block)
    logger.debug("scenario %s: %s", scenario.name, scenario.summary())
    return scenario


def load_scenario(path: str, max_dim: int = MAX_DIM, max_group: int = MAX_GROUP) -> Scenario:
    """Read and validate a JSON scenario file."""
    with open(path, "r") as stream:
        try:
            data = json.load(stream)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"Invalid JSON in {path}: {exc}", location=f"{path}:{exc.lineno}")
    return parse_scenario(data, max_dim=max_dim, max_group=max_group)


def first_of(items: Dict[str, Any], what: str) -> Tuple[str, Any]:
    """The first named block of a section, for commands acting on one object."""
    if not items:
        raise ScenarioError(f"Scenario has no {what}", location=what)
    name = next(iter(items))
    return name, items[name]
