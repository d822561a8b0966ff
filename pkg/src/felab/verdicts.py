"""Three-valued verdicts with JSON-ready certificates.

Proved and Refuted carry exact certificates; BoundedEvidence records which
direction the exhausted search pointed and the bounds it exhausted. Exit codes
follow the CLI contract: 0 proved, 1 refuted, 2 bounded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

PROVED = "proved"
REFUTED = "refuted"
BOUNDED = "bounded"


@dataclass(frozen=True)
class Verdict:
    status: str
    direction: str | None = None
    certificate: Mapping[str, Any] = field(default_factory=dict)
    bounds: Mapping[str, Any] = field(default_factory=dict)

    @classmethod
    def proved(cls, certificate: Mapping[str, Any], bounds: Mapping[str, Any] | None = None) -> "Verdict":
        return cls(PROVED, None, dict(certificate), dict(bounds or {}))

    @classmethod
    def refuted(cls, certificate: Mapping[str, Any], bounds: Mapping[str, Any] | None = None) -> "Verdict":
        return cls(REFUTED, None, dict(certificate), dict(bounds or {}))

    @classmethod
    def bounded(cls, direction: str, bounds: Mapping[str, Any],
                certificate: Mapping[str, Any] | None = None) -> "Verdict":
        if direction not in ("for", "against"):
            raise ValueError(f"direction must be 'for' or 'against', got {direction!r}")
        return cls(BOUNDED, direction, dict(certificate or {}), dict(bounds))

    @property
    def is_proved(self) -> bool:
        return self.status == PROVED

    @property
    def is_refuted(self) -> bool:
        return self.status == REFUTED

    @property
    def is_bounded(self) -> bool:
        return self.status == BOUNDED

    @property
    def exit_code(self) -> int:
        return {PROVED: 0, REFUTED: 1, BOUNDED: 2}[self.status]

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"status": self.status}
        if self.direction is not None:
            out["direction"] = self.direction
        out["certificate"] = _jsonable(self.certificate)
        out["bounds"] = _jsonable(self.bounds)
        return out


def _jsonable(value: Any) -> Any:
    """Recursively coerce tuples/sets into deterministic JSON-friendly forms."""
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return [_jsonable(v) for v in sorted(value)]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value
