"""Evaluator: turns set expressions into LazySets under an evaluation config.

Completeness bounds propagate so that every verdict downstream can tell
verified facts from horizon artifacts: quotient divides the bound, shift
subtracts, dilation multiplies, unions and intersections take the weakest
child bound, and divisor closures of unbounded sets promise nothing.
"""

from __future__ import annotations

import bisect

from .. import arith
from ..errors import InputError, ResourceError
from . import nodes
from .lazyset import DEFAULT_CONFIG, EvalConfig, LazySet


def evaluate(expr: nodes.SetExpr, config: EvalConfig = DEFAULT_CONFIG) -> LazySet:
    """Evaluate a set expression to a LazySet honoring the config horizon."""
    if config.horizon < 1:
        raise InputError(f"horizon must be >= 1, got {config.horizon}")
    return _eval(expr, config)


def _capped(members, config: EvalConfig):
    if len(members) > config.max_elements:
        raise ResourceError(
            f"evaluation produced {len(members)} elements, over the cap "
            f"{config.max_elements}; lower the horizon"
        )
    return members


def _eval(expr: nodes.SetExpr, config: EvalConfig) -> LazySet:
    h = config.horizon
    if isinstance(expr, nodes.AllNat):
        return LazySet(expr, _capped(range(1, h + 1), config), h, pred=lambda n: True)
    if isinstance(expr, nodes.Primes):
        return LazySet(expr, arith.primes_upto(h), h, pred=arith.is_prime)
    if isinstance(expr, nodes.Level):
        om = arith.omega_upto(h)
        members = [i for i in range(1, h + 1) if om[i] == expr.n]
        pred = lambda m, k=expr.n: arith.omega(m) == k
        return LazySet(expr, _capped(members, config), h, pred=pred, finite=expr.n == 0)
    if isinstance(expr, nodes.Mult):
        k = expr.k
        return LazySet(expr, range(k, h + 1, k), h, pred=lambda n: n % k == 0)
    if isinstance(expr, nodes.Ap):
        a, d = expr.a, expr.d
        members = range(a, h + 1, d)
        return LazySet(expr, members, h, pred=lambda n: n >= a and (n - a) % d == 0)
    if isinstance(expr, nodes.Explicit):
        elems = frozenset(expr.elems)
        return LazySet(expr, expr.elems, max(expr.elems), pred=elems.__contains__, finite=True)
    if isinstance(expr, nodes.Union):
        return _eval_union(expr, config)
    if isinstance(expr, nodes.Inter):
        return _eval_inter(expr, config)
    if isinstance(expr, nodes.Compl):
        return _eval_compl(expr, config)
    if isinstance(expr, nodes.Dilate):
        kid = _eval(expr.arg, config)
        k = expr.k
        members = [k * m for m in kid.elements()]
        pred = None
        if kid.pred is not None:
            pred = lambda n, p=kid.pred: n % k == 0 and p(n // k)
        return LazySet(expr, members, k * kid.complete_below + k - 1, pred=pred, finite=kid.finite)
    if isinstance(expr, nodes.Quot):
        kid = _eval(expr.arg, config)
        n = expr.n
        members = [m // n for m in kid.elements() if m % n == 0]
        if kid.finite:
            pool = frozenset(members)
            return LazySet(expr, members, max(members, default=0), pred=pool.__contains__, finite=True)
        pred = None
        if kid.pred is not None:
            pred = lambda m, p=kid.pred: p(n * m)
        return LazySet(expr, members, kid.complete_below // n, pred=pred)
    if isinstance(expr, nodes.Shift):
        kid = _eval(expr.arg, config)
        t = expr.t
        members = [m - t for m in kid.elements() if m > t]
        if kid.finite:
            pool = frozenset(members)
            return LazySet(expr, members, max(members, default=0), pred=pool.__contains__, finite=True)
        pred = None
        if kid.pred is not None:
            pred = lambda m, p=kid.pred: p(m + t)
        return LazySet(expr, members, max(kid.complete_below - t, 0), pred=pred)
    if isinstance(expr, nodes.Up):
        return _eval_up(expr, config)
    if isinstance(expr, nodes.Down):
        return _eval_down(expr, config)
    if isinstance(expr, (nodes.Fs, nodes.Fp)):
        return _eval_fsfp(expr, config)
    if isinstance(expr, nodes.Pseudo):
        from .. import constructions

        kids = [_eval(c, config) for c in expr.chain]
        res = constructions.pseudointersection(kids, expr.count, config.horizon)
        pool = frozenset(res.values)
        bound = max(res.values) if res.values else 0
        return LazySet(expr, res.values, bound, pred=pool.__contains__, finite=True)
    if isinstance(expr, nodes.Construct):
        from .. import constructions

        if expr.name == "sidon_levels":
            if len(expr.params) != 2 or not all(isinstance(p, int) for p in expr.params):
                raise InputError("sidon_levels takes (count, side) with side 0 or 1")
            expanded = constructions.sidon_level_union_expr(expr.params[0], expr.params[1])
            return _eval(expanded, config)
        return constructions.build_fixture(expr.name, expr.params, config, expr)
    raise InputError(f"cannot evaluate node {type(expr).__name__}")


def _decision_bound(ls: LazySet) -> int | None:
    """Bound below which membership is decidable; None means everywhere."""
    return None if ls.pred is not None else ls.complete_below


def _eval_union(expr: nodes.Union, config: EvalConfig) -> LazySet:
    kids = [_eval(a, config) for a in expr.args]
    members = set()
    for kid in kids:
        members.update(kid.elements())
    members = _capped(sorted(members), config)
    if all(kid.finite for kid in kids):
        pool = frozenset(members)
        return LazySet(expr, members, max(members, default=0), pred=pool.__contains__, finite=True)
    pred = None
    if all(kid.pred is not None for kid in kids):
        preds = tuple(kid.pred for kid in kids)
        pred = lambda n: any(p(n) for p in preds)
    bound = min(kid.complete_below for kid in kids)
    return LazySet(expr, members, bound, pred=pred)


def _eval_inter(expr: nodes.Inter, config: EvalConfig) -> LazySet:
    kids = [_eval(a, config) for a in expr.args]
    finite_kids = [k for k in kids if k.finite]
    if finite_kids:
        base = min(finite_kids, key=lambda k: k.count_known())
    else:
        base = min(kids, key=lambda k: k.count_known())
    others = [k for k in kids if k is not base]
    real = [b for b in map(_decision_bound, kids) if b is not None]
    bound = min(real) if real else config.horizon
    base.extend_to(bound, config)
    members = []
    undecided = False
    for x in base.elements():
        verdicts = [o.contains(x) for o in others]
        if any(v is False for v in verdicts):
            continue
        if all(v is True for v in verdicts):
            members.append(x)
        else:
            undecided = True
    if base.finite and not undecided:
        pool = frozenset(members)
        return LazySet(expr, members, max(members, default=0), pred=pool.__contains__, finite=True)
    pred = None
    if all(kid.pred is not None for kid in kids):
        preds = tuple(kid.pred for kid in kids)
        pred = lambda n: all(p(n) for p in preds)
    return LazySet(expr, members, bound, pred=pred)


def _eval_compl(expr: nodes.Compl, config: EvalConfig) -> LazySet:
    kid = _eval(expr.arg, config)
    h = config.horizon
    if kid.pred is not None:
        p = kid.pred
        members = [n for n in range(1, h + 1) if not p(n)]
        return LazySet(expr, _capped(members, config), h, pred=lambda n: not p(n))
    bound = min(kid.complete_below, h)
    known = set(kid.elements(bound))
    members = [n for n in range(1, bound + 1) if n not in known]
    return LazySet(expr, _capped(members, config), bound)


def _eval_up(expr: nodes.Up, config: EvalConfig) -> LazySet:
    kid = _eval(expr.arg, config)
    h = config.horizon
    kid.extend_to(h, config)
    marks = bytearray(h + 1)
    for a in kid.elements():
        if a <= h:
            marks[a::a] = b"\x01" * (h // a)
    members = _capped([n for n in range(1, h + 1) if marks[n]], config)
    pred = None
    if kid.pred is not None:
        p = kid.pred
        pred = lambda n: any(p(d) for d in arith.divisors(n))
    return LazySet(expr, members, min(kid.complete_below, h), pred=pred)


def _eval_down(expr: nodes.Down, config: EvalConfig) -> LazySet:
    kid = _eval(expr.arg, config)
    divs = set()
    for m in kid.elements():
        divs.update(arith.divisors(m))
    members = _capped(sorted(divs), config)
    if kid.finite:
        pool = frozenset(members)
        return LazySet(expr, members, max(members, default=0), pred=pool.__contains__, finite=True)
    return LazySet(expr, members, 0)


def _eval_fsfp(expr, config: EvalConfig) -> LazySet:
    from .. import constructions

    additive = isinstance(expr, nodes.Fs)
    seq = expr.seq
    if isinstance(seq, nodes.ExplicitSeq):
        terms, pinned = list(seq.values), True
    else:
        terms, pinned = constructions.sequence_terms(seq.rule, seq.params, config.horizon)
    h = config.horizon
    if pinned:
        if len(terms) > config.fs_max_len or 2 ** len(terms) > config.subset_cap:
            raise ResourceError(
                f"closure of {len(terms)} pinned terms exceeds the subset cap "
                f"{config.subset_cap}; use an unpinned sequence or fewer terms"
            )
        closure = _sums_all(terms) if additive else _prods_all(terms)
        members = _capped(sorted(closure), config)
        pool = frozenset(members)
        return LazySet(expr, members, max(members, default=0), pred=pool.__contains__, finite=True)
    if additive:
        members = _sums_upto(terms, h)
    else:
        members = _prods_upto(terms, h, config.subset_cap)
    return LazySet(expr, _capped(members, config), h)


def _sums_all(terms) -> set[int]:
    sums = {0}
    for t in terms:
        sums |= {s + t for s in sums}
    sums.discard(0)
    return sums


def _prods_all(terms) -> set[int]:
    prods = {1}
    for t in terms:
        prods |= {p * t for p in prods}
    prods.discard(1)
    if 1 in terms:
        prods.add(1)
    return prods


def _sums_upto(terms, bound: int) -> list[int]:
    mask = (1 << (bound + 1)) - 1
    bits = 1
    for t in terms:
        if t > bound:
            break
        bits |= (bits << t) & mask
    bits &= ~1
    members = []
    while bits:
        low = bits & -bits
        members.append(low.bit_length() - 1)
        bits ^= low
    return members


def _prods_upto(terms, bound: int, cap: int) -> list[int]:
    prods = [1]
    seen = {1}
    for t in terms:
        if t > bound:
            break
        cut = bisect.bisect_right(prods, bound // t)
        fresh = []
        for p in prods[:cut]:
            v = p * t
            if v not in seen:
                seen.add(v)
                fresh.append(v)
        if fresh:
            if len(seen) > cap:
                raise ResourceError(
                    f"product closure exceeds the subset cap {cap}; lower the horizon"
                )
            prods = _merge(prods, fresh)
    if 1 not in terms:
        prods = prods[1:]
    return prods


def _merge(a: list[int], b: list[int]) -> list[int]:
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] <= b[j]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return out
