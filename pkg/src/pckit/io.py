"""Problem files: loading, validation and the resulting session.

A problem file is a JSON object::

    {
      "schema": 1,
      "ring": {"kind": "Fq", "p": 3}          or "GF(9)", "Z/3^2", "GF(5)[eps]",
      "group": {"name": "S3"}                 or {"permutations": [[1, 2, 0], [1, 0, 2]]}
                                              or {"table": [[...]], "generators": [1]},
      "representations": {
        "rho": {"kind": "GL_2", "generators": [[[0, 2], [1, 2]], [[2, 1], [0, 1]]]}
      },
      "tasks": [{"task": "pc-eq", "reps": ["rho", "rho"]}]
    }

Representations may carry their own ``"ring"``.  ``"representations"`` may
also be a list of objects with a ``"name"`` field.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .coeffring import GF, RingSpec, Zmod, dual_numbers
from .errors import InvalidRingSpec, ParseError, SchemaError
from .groups import FiniteGroup, Representation, named_group
from .matgroups import GroupKind

SCHEMA_VERSION = 1

_RING_PATTERNS = (
    (re.compile(r"^(?:GF|F)\((\d+)(?:\^(\d+))?\)\[eps\]$"), "dual"),
    (re.compile(r"^(?:GF|F)\((\d+)(?:\^(\d+))?\)$"), "field"),
    (re.compile(r"^Z/(\d+)(?:\^(\d+))?$"), "zmod"),
)


def _prime_power(n: int) -> tuple[int, int]:
    for p in range(2, n + 1):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if n != 1:
                raise InvalidRingSpec("ring size must be a prime power")
            return p, e
    raise InvalidRingSpec("ring size must be a prime power")


def parse_ring(data) -> RingSpec:
    """Read a ring from its JSON form or a short string like ``"GF(9)"``."""
    if isinstance(data, dict):
        return RingSpec.from_json(data)
    if not isinstance(data, str):
        raise SchemaError(f"cannot read a ring from {data!r}")
    text = data.replace(" ", "")
    for pattern, what in _RING_PATTERNS:
        m = pattern.match(text)
        if not m:
            continue
        base, exp = int(m.group(1)), int(m.group(2) or 1)
        p, e = _prime_power(base)
        e *= exp
        if what == "zmod":
            return Zmod(p, e)
        return dual_numbers(p, e) if what == "dual" else GF(p, e)
    raise SchemaError(f"cannot read a ring from {data!r}")


def parse_kind(data) -> GroupKind:
    """``{"flavor": "Sp", "n": 1}`` or ``"Sp_2"`` (symplectic sizes are matrix sizes)."""
    if isinstance(data, dict):
        try:
            return GroupKind.from_json(data)
        except (KeyError, ValueError, TypeError) as exc:
            raise SchemaError(f"bad group kind {data!r}: {exc}") from None
    m = re.match(r"^([A-Za-z]+)_?(\d+)$", str(data).replace(" ", ""))
    if not m:
        raise SchemaError(f"bad group kind {data!r}")
    flavor, size = m.group(1), int(m.group(2))
    try:
        kind = GroupKind(flavor, size)
        if kind.is_symplectic:
            if size % 2:
                raise SchemaError(f"{data!r}: symplectic groups have even size")
            kind = GroupKind(flavor, size // 2)
    except ValueError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"bad group kind {data!r}: {exc}") from None
    return kind


def parse_group(data) -> FiniteGroup:
    if isinstance(data, str):
        data = {"name": data}
    if not isinstance(data, dict):
        raise SchemaError("'group' must be an object or a name")
    try:
        if "name" in data and "table" not in data and "permutations" not in data:
            return named_group(data["name"])
        if "permutations" in data:
            return FiniteGroup.from_permutations(data["permutations"], name=data.get("name"))
        if "table" in data:
            return FiniteGroup(data["table"], data.get("generators"), name=data.get("name"),
                               labels=data.get("labels"))
    except (ValueError, TypeError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"bad group description: {exc}") from None
    raise SchemaError("'group' needs one of 'name', 'permutations' or 'table'")


@dataclass
class Session:
    """A loaded problem: one group, named representations and task records."""

    ring: RingSpec | None
    group: FiniteGroup
    representations: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)
    source: str | None = None

    def rep(self, name: str) -> Representation:
        try:
            return self.representations[name]
        except KeyError:
            raise SchemaError(f"no representation named {name!r}") from None

    def element(self, ref) -> int:
        """Resolve an element reference: an index or a label."""
        G = self.group
        if isinstance(ref, bool):
            raise SchemaError(f"bad element reference {ref!r}")
        if isinstance(ref, int):
            if not 0 <= ref < G.order:
                raise SchemaError(f"element index {ref} out of range")
            return ref
        if G.labels and ref in G.labels:
            return G.labels.index(ref)
        raise SchemaError(f"unknown element {ref!r}")

    def summary(self) -> dict:
        return {
            "ring": self.ring.to_json() if self.ring else None,
            "group": {"name": self.group.name, "order": self.group.order,
                      "generators": self.group.generators},
            "representations": {k: {"kind": str(v.kind), "ring": repr(v.ring)}
                                for k, v in self.representations.items()},
            "tasks": len(self.tasks),
        }


def _rep_records(data):
    if isinstance(data, dict):
        return list(data.items())
    if isinstance(data, list):
        out = []
        for rec in data:
            if not isinstance(rec, dict) or "name" not in rec:
                raise SchemaError("list-form representations need a 'name'")
            out.append((rec["name"], rec))
        return out
    raise SchemaError("'representations' must be an object or a list")


def build_session(data: dict, source: str | None = None) -> Session:
    """Validate a parsed problem and build the session.

    Raises :class:`SchemaError` for structural problems and lets
    ``NotAHomomorphism`` / ``MembershipViolation`` from validation through.
    """
    if not isinstance(data, dict):
        raise SchemaError("problem file must hold a JSON object")
    version = data.get("schema", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {version!r}")
    unknown = set(data) - {"schema", "ring", "group", "representations", "tasks", "comment"}
    if unknown:
        raise SchemaError(f"unknown top-level keys {sorted(unknown)}")
    if "group" not in data:
        raise SchemaError("missing 'group'")
    try:
        ring = parse_ring(data["ring"]) if "ring" in data else None
    except InvalidRingSpec as exc:
        raise SchemaError(str(exc)) from None
    group = parse_group(data["group"])
    reps = {}
    for name, rec in _rep_records(data.get("representations", {})):
        if not isinstance(rec, dict) or "kind" not in rec or "generators" not in rec:
            raise SchemaError(f"representation {name!r} needs 'kind' and 'generators'")
        try:
            R = parse_ring(rec["ring"]) if "ring" in rec else ring
        except InvalidRingSpec as exc:
            raise SchemaError(str(exc)) from None
        if R is None:
            raise SchemaError(f"representation {name!r} has no ring")
        kind = parse_kind(rec["kind"])
        try:
            gens = [[[R.code_from_payload(x) for x in row] for row in M] for M in rec["generators"]]
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"representation {name!r}: bad matrix entries ({exc})") from None
        for M in gens:
            if len(M) != kind.d or any(len(row) != kind.d for row in M):
                raise SchemaError(f"representation {name!r}: generator images must be "
                                  f"{kind.d}x{kind.d}")
        try:
            reps[name] = Representation.from_generators(group, kind, R, gens)
        except Exception as exc:
            exc.args = (f"representation {name!r}: {exc}",)
            raise
    tasks = data.get("tasks", [])
    if not isinstance(tasks, list) or not all(isinstance(t, dict) and "task" in t for t in tasks):
        raise SchemaError("'tasks' must be a list of objects with a 'task' field")
    for t in tasks:
        for ref in _rep_refs(t):
            if ref not in reps:
                raise SchemaError(f"task {t['task']!r} refers to unknown representation {ref!r}")
    return Session(ring, group, reps, tasks, source)


def _rep_refs(task: dict) -> list:
    refs = []
    if "rep" in task:
        refs.append(task["rep"])
    refs.extend(task.get("reps", []))
    return refs


def load_problem(path) -> Session:
    """Read, parse and validate a problem file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return build_session(data, str(path))
