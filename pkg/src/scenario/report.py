import json
import time
import logging

from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional

from src.utils import canonical_json, sha256_of, to_jsonable
from src.scalars.scalars import Ring, InputError
from src.finalg.finalg import FinAlgebra, AlgebraMap, make_algebra

logger = logging.getLogger(__name__)

CERTIFICATE_KIND = "isomorphism"


class Timings:
    """Wall-clock seconds per stage; reported beside the hashed body, never inside it."""

    def __init__(self):
        self.seconds: Dict[str, float] = {}

    @contextmanager
    def stage(self, name: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.seconds[name] = round(self.seconds.get(name, 0.0) + time.perf_counter() - start, 6)


@dataclass
class Report:
    """Deterministic outcome of one command.

    Args:
        command: CLI command name.
        tool_version: Version string from the config.
        inputs: Input name -> sha256 of its canonical JSON.
        checks: Scoreboard line -> verdict; the exit code is 0 iff all hold.
        details: Verdict data, JSON-encodable after to_jsonable.
        certificates: Re-checkable isomorphism records.
        timings: Stage timings, excluded from the hash.
    """
    command: str
    tool_version: str
    inputs: Dict[str, str] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)
    certificates: List[dict] = field(default_factory=list)
    timings: Timings = field(default_factory=Timings)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def check(self, name: str, verdict: bool):
        self.checks[name] = bool(verdict)

    def body(self) -> Dict[str, Any]:
        return to_jsonable({
            "command": self.command,
            "tool_version": self.tool_version,
            "inputs": self.inputs,
            "checks": self.checks,
            "passed": self.passed,
            "details": self.details,
            "certificates": self.certificates,
        })

    def to_dict(self) -> Dict[str, Any]:
        body = self.body()
        return {"body": body, "body_sha256": sha256_of(body), "timings": dict(self.timings.seconds)}

    def dumps(self) -> str:
        return canonical_json(self.to_dict())

    def write(self, path: str):
        with open(path, "w") as stream:
            stream.write(self.dumps())
            stream.write("\n")
        logger.debug("report written to %s", path)

    def scoreboard(self) -> str:
        width = max((len(name) for name in self.checks), default=0)
        lines = [f"{self.command}:"]
        for name, verdict in self.checks.items():
            lines.append(f"  {name.ljust(width)}  {'PASS' if verdict else 'FAIL'}")
        lines.append(f"  {'overall'.ljust(width)}  {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


# --- witness re-verification ---------------------------------------------------

def decode_algebra(block: Dict[str, Any]) -> FinAlgebra:
    """Inverse of FinAlgebra.encode, validated again."""
    ring = Ring.parse(block["ring"])
    dim = int(block["dim"])
    identity = ring.array(block["identity"]) if "identity" in block else None
    sc = ring.array(block["sc"]) if dim else ring.zeros((0, 0, 0))
    return make_algebra(ring, dim, sc, identity=identity, labels=block.get("labels"),
                        detect_identity=False, max_dim=max(dim, 1), verify=True)


def iter_certificates(value: Any) -> Iterator[dict]:
    """Every isomorphism record nested anywhere in a report body."""
    if isinstance(value, dict):
        if value.get("kind") == CERTIFICATE_KIND:
            yield value
            return
        for key in sorted(value):
            yield from iter_certificates(value[key])
    elif isinstance(value, list):
        for item in value:
            yield from iter_certificates(item)


def check_certificate(cert: dict) -> Optional[str]:
    """Why the record fails to certify an isomorphism, or None."""
    try:
        source = decode_algebra(cert["source"])
        target = decode_algebra(cert["target"])
        ring = Ring.parse(cert["ring"])
        F = AlgebraMap(source, target, ring.array(cert["matrix"]) if source.dim else
                       ring.zeros((target.dim, 0)), anti=bool(cert.get("anti", False)))
    except InputError as exc:
        return exc.describe()
    except (KeyError, TypeError, ValueError) as exc:
        return f"malformed certificate: {exc}"
    if not F.is_bijective():
        return "map is not bijective"
    return None


def load_report(path: str) -> Dict[str, Any]:
    with open(path, "r") as stream:
        data = json.load(stream)
    if not isinstance(data, dict) or "body" not in data:
        raise InputError("Not a report file: no 'body'", location=path)
    return data


def verify_report(data: Dict[str, Any]) -> Dict[str, Any]:
    """
    Re-check a report: its body hash and every isomorphism certificate in it.

    Parameters:
    data: decoded report file

    Returns:
    dict with "hash_ok", "certificates" (count) and "failures" (index, reason)
    """
    body = data["body"]
    hash_ok = sha256_of(body) == data.get("body_sha256")
    failures = []
    count = 0
    for index, cert in enumerate(iter_certificates(body)):
        count += 1
        reason = check_certificate(cert)
        if reason is not None:
            failures.append({"index": index, "reason": reason})
    logger.debug("re-checked %d certificates, %d failures", count, len(failures))
    return {"hash_ok": hash_ok, "certificates": count, "failures": failures}
