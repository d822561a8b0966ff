"""Bounded view of a set of naturals with three-valued membership.

A LazySet knows a sorted list of members and the bound `complete_below` up to
which that list is exhaustive. EXACT sets additionally carry a total membership
predicate, so they answer every query; PREFIX sets answer True for listed
members, False at or below the completeness bound, and unknown (None) above it.
Known members may legitimately sit above the bound: generated fixtures keep all
their elements even past the evaluation horizon, because discarding them would
only discard sound witnesses.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Callable, Iterable

from ..errors import PrecisionError, ResourceError

EXACT = "EXACT"
PREFIX = "PREFIX"


@dataclass(frozen=True)
class EvalConfig:
    horizon: int = 100_000
    max_elements: int = 2_000_000
    fs_max_len: int = 24
    subset_cap: int = 200_000


DEFAULT_CONFIG = EvalConfig()


class LazySet:
    __slots__ = ("expr", "_members", "_member_set", "complete_below", "pred", "finite")

    def __init__(self, expr, members: Iterable[int], complete_below: int,
                 pred: Callable[[int], bool] | None = None, finite: bool = False):
        self.expr = expr
        ms = sorted(set(members))
        self._members = ms
        self._member_set = set(ms)
        self.complete_below = complete_below
        self.pred = pred
        self.finite = finite

    @property
    def exactness(self) -> str:
        return EXACT if self.pred is not None else PREFIX

    @property
    def is_exact(self) -> bool:
        return self.pred is not None

    def contains(self, n: int) -> bool | None:
        """True/False when decidable, None when unknown."""
        if n < 1:
            return False
        if self.pred is not None:
            return bool(self.pred(n))
        if n in self._member_set:
            return True
        if n <= self.complete_below:
            return False
        return None

    def require(self, n: int) -> bool:
        """Like contains but unknown raises a precision error naming the point."""
        r = self.contains(n)
        if r is None:
            raise PrecisionError(
                f"membership of {n} is unknown in {self.describe_short()}", required_horizon=n)
        return r

    def elements(self, bound: int | None = None) -> list[int]:
        """Known members, optionally cut at bound. A sound sublist of the set."""
        if bound is None:
            return list(self._members)
        idx = bisect.bisect_right(self._members, bound)
        return self._members[:idx]

    def extend_to(self, bound: int, config: EvalConfig = DEFAULT_CONFIG) -> None:
        """Grow the enumeration of an EXACT set so completeness reaches `bound`."""
        if bound <= self.complete_below or self.pred is None:
            return
        if self.finite:
            # the member list already is the whole set
            self.complete_below = bound
            return
        pred = self.pred
        fresh = [n for n in range(self.complete_below + 1, bound + 1) if pred(n)]
        if len(self._members) + len(fresh) > config.max_elements:
            raise ResourceError(
                f"enumerating {self.describe_short()} to {bound} exceeds the "
                f"element cap {config.max_elements}")
        merged = sorted(self._member_set.union(fresh))
        self._members = merged
        self._member_set = set(merged)
        self.complete_below = bound

    def complete_elements(self, bound: int, config: EvalConfig = DEFAULT_CONFIG) -> list[int]:
        """Every member <= bound; raises a precision error if that is not knowable."""
        if bound > self.complete_below:
            if self.pred is None:
                raise PrecisionError(
                    f"enumeration of {self.describe_short()} is only complete below "
                    f"{self.complete_below}", required_horizon=bound)
            self.extend_to(bound, config)
        return self.elements(bound)

    def max_known(self) -> int:
        return self._members[-1] if self._members else 0

    def count_known(self) -> int:
        return len(self._members)

    def describe_short(self) -> str:
        from .nodes import unparse
        if self.expr is not None:
            try:
                return unparse(self.expr)
            except Exception:
                pass
        return f"<set with {len(self._members)} known members>"

    def describe(self) -> dict:
        return {
            "expression": self.describe_short(),
            "exactness": self.exactness,
            "complete_below": self.complete_below,
            "known_members": len(self._members),
            "finite": self.finite,
        }

    def __repr__(self) -> str:
        head = ",".join(str(m) for m in self._members[:8])
        more = ",..." if len(self._members) > 8 else ""
        return f"LazySet({self.describe_short()}: {{{head}{more}}} {self.exactness})"
