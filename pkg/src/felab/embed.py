"""Finite embeddability under dilation: witnesses, exact refuters, chains.

A family F embeds into B at dilation k when every k*f is a member of B.
Positive answers carry the least verified k. Negative answers are either
exact (finite target exhausted, a level certificate, a residue certificate)
or bounded (k-range exhausted with membership still decidable everywhere).
Unknown membership at a needed point raises a precision error instead of
guessing in either direction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import arith
from .constructions import sidon_sequence
from .errors import InapplicableError, InputError, PrecisionError, ResourceError
from .setlang import analysis, nodes
from .setlang.lazyset import DEFAULT_CONFIG, EvalConfig, LazySet
from .verdicts import Verdict

__all__ = [
    "FeWitness",
    "FeRefutation",
    "ChainResult",
    "fe_witness",
    "fe_fip_oracle",
    "fe_prefix_check",
    "me_check",
    "fe_refute_level",
    "fe_refute_residue",
    "decreasing_chain",
    "sidon_sequence",
    "mthick_check",
]

_CHAIN_SCAN_CAP = 200_000


@dataclass(frozen=True)
class FeWitness:
    """Dilation factor k with every k*f verified inside the target."""

    k: int
    family: tuple[int, ...]
    images: tuple[int, ...]

    def to_json(self) -> dict:
        return {"k": self.k, "family": list(self.family), "images": list(self.images)}


@dataclass(frozen=True)
class FeRefutation:
    """Why no dilation works: kind names the argument, detail re-verifies it."""

    kind: str
    family: tuple[int, ...]
    detail: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.kind != "exhausted"

    def to_json(self) -> dict:
        return {"kind": self.kind, "family": list(self.family), "detail": dict(self.detail)}


def _check_family(F) -> tuple[int, ...]:
    fam = tuple(sorted(set(F)))
    if not fam:
        raise InputError("family must be nonempty")
    if fam[0] < 1:
        raise InputError(f"family elements must be naturals >= 1, got {fam[0]}")
    return fam


def _statuses(B: LazySet, k: int, fam: tuple[int, ...]):
    """Aggregate membership of k*fam: True, False, or the unknown points."""
    unknown = []
    for f in fam:
        r = B.contains(k * f)
        if r is False:
            return False, ()
        if r is None:
            unknown.append(k * f)
    if unknown:
        return None, tuple(unknown)
    return True, ()


def _precision(undecided: list[tuple[int, tuple[int, ...]]]) -> PrecisionError:
    worst = max(max(pts) for _, pts in undecided)
    ks = [k for k, _ in undecided]
    return PrecisionError(
        f"membership unknown for {len(ks)} candidate dilations "
        f"(first k={ks[0]}, last k={ks[-1]})",
        required_horizon=worst,
    )


def _finite_k_candidates(B: LazySet, fam: tuple[int, ...]) -> tuple[int, list[int]]:
    """Exact k-range and its only possible witnesses for a finite target."""
    elems = B.elements()
    bound = (elems[-1] // fam[0]) if elems else 0
    fmin = fam[0]
    cands = sorted(b // fmin for b in elems if b % fmin == 0)
    return bound, [k for k in cands if k <= bound]


def fe_witness(F, B: LazySet, k_max: int) -> FeWitness | FeRefutation:
    """Least verified k <= k_max with k*F inside B, else a refutation."""
    fam = _check_family(F)
    if k_max < 1:
        raise InputError(f"k_max must be >= 1, got {k_max}")
    if B.finite:
        bound, cands = _finite_k_candidates(B, fam)
        for k in cands:
            ok, _ = _statuses(B, k, fam)
            if ok is True:
                return FeWitness(k, fam, tuple(k * f for f in fam))
        return FeRefutation("finite-target", fam, {"bound": bound})
    undecided: list[tuple[int, tuple[int, ...]]] = []
    for k in range(1, k_max + 1):
        ok, unknown = _statuses(B, k, fam)
        if ok is True:
            return FeWitness(k, fam, tuple(k * f for f in fam))
        if ok is None:
            undecided.append((k, unknown))
    if undecided:
        raise _precision(undecided)
    return FeRefutation("exhausted", fam, {"k_max": k_max})


def fe_fip_oracle(F, B: LazySet, k_max: int) -> FeWitness | FeRefutation:
    """Same decision as fe_witness via intersecting the quotient sets B/a."""
    fam = _check_family(F)
    if k_max < 1:
        raise InputError(f"k_max must be >= 1, got {k_max}")
    if B.finite:
        bound, cands = _finite_k_candidates(B, fam)
        elems = set(B.elements())
        live = [k for k in cands if all(k * a in elems for a in fam)]
        if live:
            k = live[0]
            return FeWitness(k, fam, tuple(k * f for f in fam))
        return FeRefutation("finite-target", fam, {"bound": bound})
    verdicts = {k: True for k in range(1, k_max + 1)}
    unknown_pts: dict[int, list[int]] = {}
    for a in fam:
        for k in range(1, k_max + 1):
            if verdicts[k] is False:
                continue
            r = B.contains(k * a)
            if r is False:
                verdicts[k] = False
                unknown_pts.pop(k, None)
            elif r is None:
                verdicts[k] = None
                unknown_pts.setdefault(k, []).append(k * a)
    for k in range(1, k_max + 1):
        if verdicts[k] is True:
            return FeWitness(k, fam, tuple(k * f for f in fam))
    undecided = [(k, tuple(unknown_pts[k])) for k in sorted(unknown_pts)]
    if undecided:
        raise _precision(undecided)
    return FeRefutation("exhausted", fam, {"k_max": k_max})


def fe_prefix_check(A: LazySet, B: LazySet, p: int = 16, k_max: int = 1_000_000,
                    config: EvalConfig = DEFAULT_CONFIG) -> Verdict:
    """Embed the prefix of A's first p elements into B, refuting exactly when possible."""
    if p < 1:
        raise InputError(f"prefix length must be >= 1, got {p}")
    fam = _prefix_of(A, p, config)
    # sound structural refuters are cheap; consult them before scanning dilations
    for refuter in (_try_level, _try_residue):
        cert = refuter(A, fam, B, config)
        if cert is not None:
            return Verdict.refuted({"refutation": cert.to_json()}, {"prefix": p, "k_max": k_max})
    res = fe_witness(fam, B, k_max)
    if isinstance(res, FeWitness):
        return Verdict.proved({"witness": res.to_json()}, {"prefix": p, "k_max": k_max})
    if res.exact:
        return Verdict.refuted({"refutation": res.to_json()}, {"prefix": p, "k_max": k_max})
    return Verdict.bounded("against", {"prefix": p, "k_max": k_max},
                           {"refutation": res.to_json()})


def _prefix_of(A: LazySet, p: int, config: EvalConfig) -> tuple[int, ...]:
    known = A.elements()
    if len(known) < p:
        if A.finite:
            if not known:
                raise InputError("prefix of an empty set is undefined")
            return tuple(known)
        if A.pred is not None:
            A.extend_to(max(A.complete_below * 2, config.horizon), config)
            known = A.elements()
        if len(known) < p:
            raise PrecisionError(
                f"only {len(known)} elements of {A.describe_short()} are known; "
                f"cannot take a {p}-element prefix",
                required_horizon=max(A.complete_below * 2, config.horizon),
            )
    return tuple(known[:p])


def _try_level(A: LazySet, fam, B: LazySet, config: EvalConfig) -> FeRefutation | None:
    try:
        return fe_refute_level(A, B, config.horizon)
    except InapplicableError:
        return None


def _try_residue(A: LazySet, fam, B: LazySet, config: EvalConfig) -> FeRefutation | None:
    return fe_refute_residue(fam, B)


def me_check(A: LazySet, B: LazySet, m: int, H: int | None = None,
             k_max: int = 1_000_000, config: EvalConfig = DEFAULT_CONFIG) -> Verdict:
    """All m-subsets of A within the horizon embed into B."""
    if m < 1:
        raise InputError(f"subset cardinality must be >= 1, got {m}")
    horizon = config.horizon if H is None else H
    pool = A.complete_elements(horizon, config) if not A.finite else A.elements(horizon)
    if len(pool) < m:
        raise InputError(
            f"A has only {len(pool)} elements within horizon {horizon}, need {m}")
    if m == 1:
        return _me_divisibility(pool, B, horizon, k_max)
    total = 1
    for i in range(m):
        total = total * (len(pool) - i) // (i + 1)
    if total > config.subset_cap:
        raise ResourceError(
            f"{total} subsets of size {m} exceed the cap {config.subset_cap}; "
            f"rerun with a smaller horizon")
    worst: FeWitness | None = None
    exhausted: FeRefutation | None = None
    for sub in itertools.combinations(pool, m):
        res = fe_witness(sub, B, k_max)
        if isinstance(res, FeRefutation):
            if res.exact:
                return Verdict.refuted({"refutation": res.to_json()},
                                       {"horizon": horizon, "k_max": k_max, "m": m})
            cert = fe_refute_residue(sub, B)
            if cert is not None:
                return Verdict.refuted({"refutation": cert.to_json()},
                                       {"horizon": horizon, "k_max": k_max, "m": m})
            exhausted = exhausted or res
        elif worst is None or res.k > worst.k:
            worst = res
    if exhausted is not None:
        return Verdict.bounded("against", {"horizon": horizon, "k_max": k_max, "m": m},
                               {"refutation": exhausted.to_json()})
    return Verdict.proved({"subsets": total, "worst_witness": worst.to_json()},
                          {"horizon": horizon, "k_max": k_max, "m": m})


def _me_divisibility(pool, B: LazySet, horizon: int, k_max: int) -> Verdict:
    """Each single element must divide something in B (shadow of the closure test)."""
    table = {}
    for a in pool:
        if B.finite:
            hit = next((b for b in B.elements() if b % a == 0), None)
            if hit is None:
                return Verdict.refuted(
                    {"element": a, "reason": "no multiple in the finite target"},
                    {"horizon": horizon, "m": 1})
            table[a] = hit
            continue
        hit = next((a * k for k in range(1, k_max + 1) if B.contains(a * k) is True), None)
        if hit is None:
            if B.expr is not None and analysis.empty_meet_mult(B.expr, a) is True:
                return Verdict.refuted(
                    {"element": a, "reason": f"target provably misses every multiple of {a}"},
                    {"horizon": horizon, "m": 1})
            return Verdict.bounded("against", {"horizon": horizon, "m": 1, "k_max": k_max},
                                   {"element": a})
        table[a] = hit
    return Verdict.proved({"divides_into": table}, {"horizon": horizon, "m": 1})


def fe_refute_level(A: LazySet, B: LazySet, H: int | None = None,
                    config: EvalConfig = DEFAULT_CONFIG) -> FeRefutation | None:
    """Exact refutation from factor-count bookkeeping, for level-covered targets."""
    if B.expr is None:
        raise InapplicableError("target has no expression to analyze")
    cover = analysis.levels_of(B.expr)
    if cover is None:
        raise InapplicableError(
            f"target {B.describe_short()} is not covered by finitely many levels")
    deltas = analysis.level_deltas(cover)
    horizon = config.horizon if H is None else H
    elems = A.elements(horizon)
    by_level: dict[int, int] = {}
    for c in elems:
        o = arith.omega(c)
        if o not in by_level:
            by_level[o] = c
    levels = sorted(by_level)
    for i, oi in enumerate(levels):
        for oj in levels[i + 1:]:
            if oj - oi not in deltas:
                ci, cj = by_level[oi], by_level[oj]
                return FeRefutation(
                    "level-certificate", (ci, cj),
                    {"pair": [ci, cj], "delta": oj - oi,
                     "target_levels": sorted(cover),
                     "achievable_deltas": sorted(deltas)})
    return None


def fe_refute_residue(F, B: LazySet) -> FeRefutation | None:
    """Exact refutation when the target provably misses every multiple of some member."""
    fam = _check_family(F)
    if B.expr is None:
        return None
    for m in fam:
        if analysis.empty_meet_mult(B.expr, m) is True:
            return FeRefutation("residue-certificate", fam, {"modulus": m})
    return None


@dataclass(frozen=True)
class ChainResult:
    """Strictly shrinking levels, the pairs each level dodges, and the proofs."""

    levels: tuple[tuple[int, ...], ...]
    blocked: tuple[tuple[int, int], ...]
    refutations: tuple[FeRefutation, ...]
    extended: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {
            "levels": [list(l) for l in self.levels],
            "blocked_pairs": [list(p) for p in self.blocked],
            "refutations": [r.to_json() for r in self.refutations],
        }


def _colex_pairs(count: int) -> list[tuple[int, int]]:
    out = []
    top = 2
    while len(out) < count:
        for low in range(1, top):
            out.append((low, top))
            if len(out) == count:
                return out
        top += 1
    return out


def _embeds_into_finite(fam: tuple[int, ...], target: list[int], tset: set[int]) -> int | None:
    """Least dilation mapping fam into the finite target, or None."""
    if not target:
        return None
    bound = target[-1] // fam[0]
    fmin = fam[0]
    for b in target:
        if b % fmin:
            continue
        k = b // fmin
        if k > bound:
            break
        if all(k * f in tset for f in fam):
            return k
    return None


class _Level:
    """Memoized accepted-element stream for one chain level."""

    def __init__(self, it):
        self._it = it
        self.items: list[int] = []

    def get(self, i: int) -> int:
        while len(self.items) <= i:
            self.items.append(next(self._it))
        return self.items[i]


def decreasing_chain(depth: int, per_level: int, scan_cap: int = _CHAIN_SCAN_CAP) -> ChainResult:
    """Build the shrinking chain; every dodged pair is exactly refuted against the next level."""
    if per_level < 3:
        raise InputError(f"per_level must be >= 3, got {per_level}")
    if depth < 0:
        raise InputError(f"depth must be >= 0, got {depth}")
    pairs = _colex_pairs(depth) if depth else []
    levels: list[_Level] = [_Level(iter(itertools.count(1)))]
    for n in range(depth):
        parent = levels[n]
        a0, a1 = parent.get(0), parent.get(1)
        blocked = [pairs[i] for i in range(n + 1)] + [(a0, a1)]
        blocked = [tuple(sorted(set(p))) for p in blocked]

        def gen(parent=parent, blocked=blocked, a1=a1):
            accepted = [a1]
            aset = {a1}
            yield a1
            idx, scanned = 2, 0
            while True:
                x = parent.get(idx)
                idx += 1
                scanned += 1
                if scanned > scan_cap:
                    raise ResourceError(
                        f"chain level scanned {scan_cap} candidates without "
                        f"filling {per_level} slots")
                tail = accepted + [x]
                tset = aset | {x}
                if any(_embeds_into_finite(f, tail, tset) is not None for f in blocked):
                    continue
                accepted.append(x)
                aset.add(x)
                yield x

        levels.append(_Level(gen()))
    displayed = []
    for n, lvl in enumerate(levels):
        displayed.append(tuple(lvl.get(i) for i in range(per_level)))
    refutations = []
    for n in range(depth):
        target = nodes.Explicit(displayed[n + 1])
        tset = frozenset(displayed[n + 1])
        finite_view = LazySet(target, displayed[n + 1], max(displayed[n + 1]),
                              pred=tset.__contains__, finite=True)
        res = fe_witness(pairs[n], finite_view, 1)
        if not isinstance(res, FeRefutation):
            raise AssertionError(
                f"chain invariant broken: pair {pairs[n]} embeds into level {n + 1}")
        refutations.append(res)
    return ChainResult(
        tuple(displayed), tuple(pairs), tuple(refutations),
        tuple(tuple(lvl.items) for lvl in levels))


def mthick_check(A: LazySet, n: int, H: int | None = None,
                 config: EvalConfig = DEFAULT_CONFIG) -> Verdict:
    """Search a dilation k with k*{1..n} inside A, k*n within the horizon."""
    if n < 1:
        raise InputError(f"run length must be >= 1, got {n}")
    horizon = config.horizon if H is None else H
    k_top = horizon // n
    for k in range(1, k_top + 1):
        if all(A.contains(k * i) is True for i in range(1, n + 1)):
            return Verdict.proved({"k": k, "multiples": [k * i for i in range(1, n + 1)]},
                                  {"horizon": horizon, "n": n})
    return Verdict.bounded("against", {"horizon": horizon, "n": n},
                           {"exhausted_k": k_top})
