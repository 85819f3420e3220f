"""Certificates and identity reports, and their JSON form."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Optional

from .det import DetValue, Mode
from .scalars import exact_str, point_value, to_float


class Verdict(str, enum.Enum):
    PASS_SAMPLED = "PASS_SAMPLED"
    POSITIVE_SAMPLED = "POSITIVE_SAMPLED"
    SATISFIED_SAMPLED = "SATISFIED_SAMPLED"
    REFUTED = "REFUTED"
    VIOLATED = "VIOLATED"
    INDETERMINATE = "INDETERMINATE"

    @property
    def passed(self) -> bool:
        return self in (Verdict.PASS_SAMPLED, Verdict.POSITIVE_SAMPLED, Verdict.SATISFIED_SAMPLED)

    @property
    def failed(self) -> bool:
        return self in (Verdict.REFUTED, Verdict.VIOLATED)


class Property(str, enum.Enum):
    T_OMEGA_CONVEX = "T_OMEGA_CONVEX"
    T_OMEGA_AFFINE = "T_OMEGA_AFFINE"
    OMEGA_JENSEN = "OMEGA_JENSEN"
    JENSEN_AFFINE = "JENSEN_AFFINE"
    OMEGA_CONVEX = "OMEGA_CONVEX"
    OMEGA_AFFINE = "OMEGA_AFFINE"
    WRIGHT = "WRIGHT"
    CHEBYSHEV_POSITIVE = "CHEBYSHEV_POSITIVE"
    FACTORIZATION = "FACTORIZATION"
    CHWC_RATIO = "CHWC_RATIO"
    CHWC_PERM_SUM = "CHWC_PERM_SUM"
    AFFINE_FIT = "AFFINE_FIT"
    QP_EQUATION = "QP_EQUATION"
    EXTENSION = "EXTENSION"


@dataclass(frozen=True)
class Witness:
    """A configuration together with the offending value."""

    config: dict
    value: DetValue
    note: str = ""

    @property
    def points(self) -> tuple:
        return tuple(self.config.get("points", ()))

    def sort_key(self):
        pts = self.points or tuple(v for v in self.config.values() if not isinstance(v, (tuple, list, str)))
        return (tuple(to_float(p) for p in pts), tuple(exact_str(p) for p in pts))

    def to_json(self) -> dict:
        out: dict[str, Any] = {}
        for key, val in self.config.items():
            if isinstance(val, (tuple, list)):
                out[key] = [exact_str(v) for v in val]
            else:
                out[key] = exact_str(val)
        coords = [list(map(exact_str, p.coords)) for p in self.points if hasattr(p, "coords")]
        if coords:
            out["module_coords"] = coords
        out["value"] = exact_str(self.value.value)
        if self.value.mode is Mode.FLOAT:
            out["abs_error_bound"] = repr(float(self.value.abs_error_bound))
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class Record:
    """One evaluated configuration, kept for plot exports."""

    config: dict
    value: DetValue
    violated: bool


@dataclass
class Certificate:
    """Outcome of a sampled check.

    ``PASS_SAMPLED`` (and the other ``*_SAMPLED`` verdicts) only claim that no
    tested configuration violated the property.
    """

    property: Property
    verdict: Verdict
    samples: int
    mode: Mode
    seed: Optional[int] = None
    witnesses: list[Witness] = field(default_factory=list)
    violations: int = 0
    indeterminate: int = 0
    exhaustive: bool = False
    notes: dict = field(default_factory=dict)
    both_sides: Optional[tuple] = None
    records: list[Record] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return self.verdict.passed

    def to_json(self) -> dict:
        out = {
            "property": self.property.value,
            "verdict": self.verdict.value,
            "mode": self.mode.value,
            "samples": self.samples,
            "seed": self.seed,
            "exhaustive": self.exhaustive,
            "violations": self.violations,
            "indeterminate": self.indeterminate,
            "witnesses": [w.to_json() for w in self.witnesses],
        }
        if self.notes:
            out["notes"] = {k: _jsonable(v) for k, v in sorted(self.notes.items())}
        if self.both_sides is not None:
            out["both_sides"] = [exact_str(self.both_sides[0]), exact_str(self.both_sides[1])]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


Report = Certificate


def _jsonable(v):
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in sorted(v.items())}
    if isinstance(v, enum.Enum):
        return v.value
    return exact_str(point_value(v))


def sorted_witnesses(witnesses, limit: Optional[int] = None) -> list[Witness]:
    out = sorted(witnesses, key=Witness.sort_key)
    return out if limit is None else out[:limit]
