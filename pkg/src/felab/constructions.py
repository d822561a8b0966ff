"""Deterministic generators for the fixture catalog.

Every construction resolves its "pick any such ..." freedom to the minimal
admissible choice, so resolving the same parameters twice yields identical
output. Generators return plain ints/tuples; build_fixture wraps the results
into LazySets for the expression language.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from . import arith
from .errors import InputError, ResourceError
from .setlang import nodes
from .setlang.lazyset import DEFAULT_CONFIG, EvalConfig, LazySet

_COUNT_CAP = 10_000


def _check_count(count: int, what: str = "count") -> None:
    if count < 1:
        raise InputError(f"{what} must be >= 1, got {count}")
    if count > _COUNT_CAP:
        raise ResourceError(f"{what} {count} exceeds the generator cap {_COUNT_CAP}")


class _IncreasingStream:
    """Memoized view of a strictly increasing integer generator."""

    def __init__(self, it: Iterator[int]):
        self._it = it
        self._terms: list[int] = []
        self._set: set[int] = set()

    def _grow(self) -> int:
        t = next(self._it)
        self._terms.append(t)
        self._set.add(t)
        return t

    def take(self, count: int) -> list[int]:
        while len(self._terms) < count:
            self._grow()
        return self._terms[:count]

    def upto(self, bound: int) -> list[int]:
        """All terms <= bound; generates one term past the bound to be sure."""
        while not self._terms or self._terms[-1] <= bound:
            self._grow()
        return self._terms[:bisect.bisect_right(self._terms, bound)]

    def range_pred(self):
        """Total membership test for the full infinite range, extending on demand."""
        def pred(n: int) -> bool:
            while not self._terms or self._terms[-1] < n:
                self._grow()
            return n in self._set
        return pred


def _exgamma_stream() -> Iterator[int]:
    total, n = 0, 1
    while True:
        a = (total // n + 1) * n
        yield a
        total += a
        n += 1


def gen_exgamma(count: int) -> list[int]:
    """Minimal sequence with n | a_n and a_n strictly above the sum of all earlier terms."""
    _check_count(count)
    return _IncreasingStream(_exgamma_stream()).take(count)


def _fastgrowth_stream() -> Iterator[int]:
    total, n = 0, 1
    while True:
        a = 1 if n == 1 else n + total + 1
        yield a
        total += a
        n += 1


def gen_fastgrowth(count: int) -> list[int]:
    """Minimal sequence with a_1 = 1 and a_n = n + (sum of earlier terms) + 1."""
    _check_count(count)
    return _IncreasingStream(_fastgrowth_stream()).take(count)


def _sidon_stream() -> Iterator[int]:
    terms: list[int] = []
    diffs: set[int] = set()
    cand = 1
    while True:
        while any(cand - t in diffs for t in terms):
            cand += 1
        diffs.update(cand - t for t in terms)
        terms.append(cand)
        yield cand
        cand += 1


def sidon_sequence(length: int) -> list[int]:
    """Greedy minimal increasing sequence whose pairwise differences are all distinct."""
    _check_count(length)
    return _IncreasingStream(_sidon_stream()).take(length)


def gen_sidon_levels(count: int) -> list[int]:
    """Distinct-difference level indices for the interleaved level-union pair."""
    return sidon_sequence(count)


_SEQ_STREAMS = {
    "exgamma": _exgamma_stream,
    "fastgrowth": _fastgrowth_stream,
    "sidon": _sidon_stream,
}


def sequence_terms(rule: str, params: tuple, horizon: int) -> tuple[list[int], bool]:
    """Terms of a named sequence: (prefix of length count, True) or (terms <= horizon, False)."""
    if rule == "primeseq":
        if not params or params[0] not in ("all", "odd", "even"):
            raise InputError("primeseq needs a variant: all, odd or even")
        variant = params[0]
        rest = params[1:]
        if len(rest) > 1 or (rest and not isinstance(rest[0], int)):
            raise InputError(f"primeseq takes (variant) or (variant, count), got {params!r}")
        stride = 1 if variant == "all" else 2
        offset = 1 if variant == "even" else 0
        if rest:
            count = rest[0]
            _check_count(count)
            return arith.first_primes(stride * count)[offset::stride][:count], True
        return arith.primes_upto(horizon)[offset::stride], False
    if rule not in _SEQ_STREAMS:
        raise InputError(f"unknown sequence rule {rule!r}")
    if len(params) > 1 or (params and not isinstance(params[0], int)):
        raise InputError(f"sequence {rule} takes at most one count parameter, got {params!r}")
    stream = _IncreasingStream(_SEQ_STREAMS[rule]())
    if params:
        _check_count(params[0])
        return stream.take(params[0]), True
    return stream.upto(horizon), False


def sidon_level_union_expr(count: int, side: int) -> nodes.SetExpr:
    """Expression for the union of levels at even (side 0) or odd (side 1) positions."""
    if side not in (0, 1):
        raise InputError(f"side must be 0 or 1, got {side}")
    seq = sidon_sequence(count)
    chosen = seq[side::2]
    if not chosen:
        raise InputError(f"count {count} leaves side {side} empty")
    if len(chosen) == 1:
        return nodes.Level(chosen[0])
    return nodes.Union(tuple(nodes.Level(n) for n in chosen))


@dataclass(frozen=True)
class ThickFixture:
    """Blocks of consecutive runs plus the one dodged multiple of each run length."""

    blocks: tuple[tuple[int, ...], ...]
    avoided: tuple[int, ...]

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(x for block in self.blocks for x in block)


def thick_auto_nmax(horizon: int) -> int:
    """Largest n_max whose final block still fits below the horizon."""
    n_max = 1
    while gen_thick_nonmaxstar(n_max + 1).blocks[-1][-1] <= horizon:
        n_max += 1
    return n_max


def gen_thick_nonmaxstar(n_max: int) -> ThickFixture:
    """Runs of every length up to n_max, skipping one designated multiple of each n."""
    _check_count(n_max, "n_max")
    blocks: list[tuple[int, ...]] = []
    avoided: list[int] = []
    a = 1
    for n in range(1, n_max + 1):
        block = tuple(range(a + 1, a + n + 1))
        blocks.append(block)
        a = (block[-1] // n + 1) * n
        avoided.append(a)
    return ThickFixture(tuple(blocks), tuple(avoided))


def equal_exponent_pred(n: int) -> bool:
    """True when n >= 2 and every prime in its factorization carries the same exponent."""
    if n < 2:
        return False
    exps = {e for _, e in arith.factorize(n)}
    return len(exps) == 1


def gen_equal_exponent(H: int) -> list[int]:
    """All n <= H whose prime exponents are all equal."""
    if H < 2:
        raise InputError(f"horizon must be >= 2, got {H}")
    table = arith.ensure_sieve(H).table
    out: list[int] = []
    for n in range(2, H + 1):
        m = n
        first = 0
        ok = True
        while m > 1:
            p = table[m]
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if first == 0:
                first = e
            elif e != first:
                ok = False
                break
        if ok:
            out.append(n)
    return out


def gen_mj_funcs(h_max: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Function tables f(i) = p**2 * q and g(i) = p * q**2 over prime pairs (p_2i, p_2i+1)."""
    _check_count(h_max, "h_max")
    ps = arith.first_primes(2 * h_max + 1)
    f = tuple(ps[2 * i - 1] ** 2 * ps[2 * i] for i in range(1, h_max + 1))
    g = tuple(ps[2 * i - 1] * ps[2 * i] ** 2 for i in range(1, h_max + 1))
    return f, g


@dataclass(frozen=True)
class FpFixture:
    """Selected primes, the unselected complement, and the subset-product closure."""

    base: tuple[int, ...]
    complement: tuple[int, ...]
    members: tuple[int, ...]


def gen_fp_prime_subset(index_rule="odd", count: int | None = None,
                        config: EvalConfig = DEFAULT_CONFIG) -> FpFixture:
    """Subset-product closure of a prime subsequence chosen by index parity or explicit indices."""
    if isinstance(index_rule, (tuple, list)):
        sel = sorted(set(index_rule))
        if not sel:
            raise InputError("explicit index list must be nonempty")
        if sel[0] < 1:
            raise InputError(f"prime indices must be >= 1, got {sel[0]}")
    else:
        if count is None:
            raise InputError("count is required with a parity rule")
        _check_count(count)
        if index_rule == "odd":
            sel = [2 * i + 1 for i in range(count)]
        elif index_rule == "even":
            sel = [2 * i + 2 for i in range(count)]
        elif index_rule == "all":
            sel = [i + 1 for i in range(count)]
        else:
            raise InputError(f"index rule must be odd, even, all, or [i1,i2,...], got {index_rule!r}")
    k = len(sel)
    if (1 << k) - 1 > config.subset_cap:
        raise ResourceError(f"closure of {k} primes exceeds the subset cap {config.subset_cap}")
    ps = arith.first_primes(sel[-1] + 2 * k + 2)
    base = tuple(ps[i - 1] for i in sel)
    selset = set(sel)
    complement = tuple(ps[i - 1] for i in range(1, len(ps) + 1) if i not in selset)[:k]
    prods: set[int] = {1}
    for p in base:
        prods |= {q * p for q in prods}
    prods.discard(1)
    return FpFixture(base, complement, tuple(sorted(prods)))


def gen_prophier(prime_sets: Sequence[Sequence[int]], exponents: Sequence[int],
                 counts: Sequence[int], H: int) -> list[int]:
    """Products <= H of per-block distinct primes, block i contributing counts[i] primes at power exponents[i]."""
    if not prime_sets:
        raise InputError("at least one prime block is required")
    if not (len(prime_sets) == len(exponents) == len(counts)):
        raise InputError("prime_sets, exponents, and counts must have equal length")
    if H < 1:
        raise InputError(f"horizon must be >= 1, got {H}")
    blocks = []
    for s in prime_sets:
        blk = tuple(sorted(set(s)))
        if not blk:
            raise InputError("prime blocks must be nonempty")
        for p in blk:
            if not arith.is_prime(p):
                raise InputError(f"block element {p} is not prime")
        blocks.append(blk)
    for k in exponents:
        if k < 1:
            raise InputError(f"exponents must be >= 1, got {k}")
    for i, n in enumerate(counts):
        if n < 1:
            raise InputError(f"counts must be >= 1, got {n}")
        if n > len(blocks[i]):
            raise InputError(f"block {i + 1} holds {len(blocks[i])} primes but count {n} are requested")
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            si, sj = set(blocks[i]), set(blocks[j])
            if si & sj and si != sj:
                raise InputError("prime blocks must be pairwise disjoint or identical")

    out: set[int] = set()
    used: dict[frozenset, set[int]] = {frozenset(b): set() for b in blocks}

    def rec(i: int, val: int) -> None:
        if i == len(blocks):
            out.add(val)
            return
        key = frozenset(blocks[i])
        pool = [p for p in blocks[i] if p not in used[key]]
        for combo in itertools.combinations(pool, counts[i]):
            v = val
            for p in combo:
                v *= p ** exponents[i]
                if v > H:
                    break
            if v > H:
                continue
            used[key].update(combo)
            rec(i + 1, v)
            used[key].difference_update(combo)

    rec(0, 1)
    return sorted(out)


def gen_levelfix(positions: Sequence[int], primes: Sequence[int], n: int, H: int) -> list[int]:
    """Products <= H of n sorted primes whose positions[j]-th factor equals primes[j]."""
    positions = tuple(positions)
    primes = tuple(primes)
    if n < 1:
        raise InputError(f"factor count must be >= 1, got {n}")
    if H < 1:
        raise InputError(f"horizon must be >= 1, got {H}")
    if len(positions) != len(primes) or not positions:
        raise InputError("positions and primes must be nonempty and equally long")
    if list(positions) != sorted(set(positions)) or positions[0] < 1 or positions[-1] > n:
        raise InputError(f"positions must be strictly increasing within 1..{n}")
    if list(primes) != sorted(primes):
        raise InputError("pinned primes must be sorted ascending")
    for p in primes:
        if not arith.is_prime(p):
            raise InputError(f"pinned value {p} is not prime")
    fixed = dict(zip(positions, primes))
    pool = arith.primes_upto(H)
    out: list[int] = []

    def rec(idx: int, prev: int, val: int) -> None:
        if idx > n:
            out.append(val)
            return
        rest = n - idx
        if idx in fixed:
            q = fixed[idx]
            if q >= prev and val * q ** (rest + 1) <= H:
                rec(idx + 1, q, val * q)
            return
        for q in pool[bisect.bisect_left(pool, prev):]:
            if val * q ** (rest + 1) > H:
                break
            rec(idx + 1, q, val * q)

    rec(1, 2, 1)
    return sorted(out)


@dataclass(frozen=True)
class PseudoResult:
    """Greedy transversal of a decreasing chain; partial when the horizon ran out."""

    values: tuple[int, ...]
    partial: bool
    horizon: int


def pseudointersection(chain: Sequence[LazySet], count: int, H: int) -> PseudoResult:
    """Value n is the least element of the n-th chain set above all earlier values.

    The chain is verified decreasing on [1, H] first; the result leaves each
    chain set only finitely often by construction (the first n-1 values).
    """
    sets = list(chain)
    if not sets:
        raise InputError("pseudointersection needs at least one chain set")
    _check_count(count)
    if count > len(sets):
        raise InputError(f"chain provides {len(sets)} sets but {count} values were requested")
    for i in range(len(sets) - 1):
        for x in sets[i + 1].elements(H):
            if sets[i].contains(x) is False:
                raise InputError(
                    f"chain is not decreasing: {x} belongs to set {i + 2} but not to set {i + 1}")
    values: list[int] = []
    prev = 0
    for i in range(count):
        pool = sets[i].elements(H)
        idx = bisect.bisect_right(pool, prev)
        if idx == len(pool):
            return PseudoResult(tuple(values), True, H)
        values.append(pool[idx])
        prev = pool[idx]
    return PseudoResult(tuple(values), False, H)


CATALOG = {
    "exgamma": "construct(exgamma[,count]) - sum-dominating sequence with n dividing the n-th term",
    "fastgrowth": "construct(fastgrowth[,count]) - sum-dominating sequence for subset-sum sets",
    "sidon": "construct(sidon[,count]) - greedy distinct-difference sequence",
    "thick_nonmaxstar": "construct(thick_nonmaxstar[,n_max]) - runs of every length dodging one multiple of each n",
    "equal_exponent": "construct(equal_exponent) - numbers whose prime exponents are all equal",
    "fp_primes": "construct(fp_primes,odd|even|all,count) or construct(fp_primes,[i1,...]) - subset products of selected primes",
    "prophier": "construct(prophier,[p,...],k,n[,[p,...],k,n]...) - distinct-prime products, one power per block",
    "levelfix": "construct(levelfix,[pos,...],[prime,...],n) - sorted n-factor products with pinned factors",
    "sidon_levels": "construct(sidon_levels,count,side) - union of levels at alternating distinct-difference indices",
}


def catalog_lines() -> list[str]:
    return [CATALOG[name] for name in sorted(CATALOG)]


def _opt_count(params: tuple, name: str) -> int | None:
    if not params:
        return None
    if len(params) == 1 and isinstance(params[0], int):
        return params[0]
    raise InputError(f"bad parameters for {name}; usage: {CATALOG[name]}")


def _seq_fixture(stream_fn, params: tuple, name: str, config: EvalConfig, expr,
                 exact: bool) -> LazySet:
    count = _opt_count(params, name)
    stream = _IncreasingStream(stream_fn())
    if count is None:
        members = stream.upto(config.horizon)
        if exact:
            return LazySet(expr, members, config.horizon, pred=stream.range_pred())
        return LazySet(expr, members, config.horizon)
    _check_count(count)
    members = stream.take(count)
    mset = frozenset(members)
    return LazySet(expr, members, members[-1], pred=mset.__contains__, finite=True)


def _finite_exact(expr, members) -> LazySet:
    mset = frozenset(members)
    top = max(members) if mset else 0
    return LazySet(expr, members, top, pred=mset.__contains__, finite=True)


def _fx_exgamma(params, config, expr):
    return _seq_fixture(_exgamma_stream, params, "exgamma", config, expr, exact=True)


def _fx_fastgrowth(params, config, expr):
    return _seq_fixture(_fastgrowth_stream, params, "fastgrowth", config, expr, exact=True)


def _fx_sidon(params, config, expr):
    return _seq_fixture(_sidon_stream, params, "sidon", config, expr, exact=False)


def _fx_thick(params, config, expr):
    n_max = _opt_count(params, "thick_nonmaxstar")
    if n_max is None:
        n_max = thick_auto_nmax(config.horizon)
    fx = gen_thick_nonmaxstar(n_max)
    return _finite_exact(expr, fx.members)


def _fx_equal_exponent(params, config, expr):
    if params:
        raise InputError(f"bad parameters for equal_exponent; usage: {CATALOG['equal_exponent']}")
    members = gen_equal_exponent(config.horizon)
    return LazySet(expr, members, config.horizon, pred=equal_exponent_pred)


def _fx_fp_primes(params, config, expr):
    if len(params) == 1 and isinstance(params[0], tuple):
        fx = gen_fp_prime_subset(params[0], None, config)
    elif len(params) == 2 and isinstance(params[0], str) and isinstance(params[1], int):
        fx = gen_fp_prime_subset(params[0], params[1], config)
    else:
        raise InputError(f"bad parameters for fp_primes; usage: {CATALOG['fp_primes']}")
    return _finite_exact(expr, fx.members)


def _fx_prophier(params, config, expr):
    if not params or len(params) % 3 != 0:
        raise InputError(f"bad parameters for prophier; usage: {CATALOG['prophier']}")
    prime_sets, exps, counts = [], [], []
    for i in range(0, len(params), 3):
        blk, k, n = params[i], params[i + 1], params[i + 2]
        if not isinstance(blk, tuple) or not isinstance(k, int) or not isinstance(n, int):
            raise InputError(f"bad parameters for prophier; usage: {CATALOG['prophier']}")
        prime_sets.append(blk)
        exps.append(k)
        counts.append(n)
    members = gen_prophier(prime_sets, exps, counts, config.horizon)
    return _finite_exact(expr, members)


def _fx_levelfix(params, config, expr):
    if (len(params) != 3 or not isinstance(params[0], tuple)
            or not isinstance(params[1], tuple) or not isinstance(params[2], int)):
        raise InputError(f"bad parameters for levelfix; usage: {CATALOG['levelfix']}")
    members = gen_levelfix(params[0], params[1], params[2], config.horizon)
    return _finite_exact(expr, members)


_BUILDERS = {
    "exgamma": _fx_exgamma,
    "fastgrowth": _fx_fastgrowth,
    "sidon": _fx_sidon,
    "thick_nonmaxstar": _fx_thick,
    "equal_exponent": _fx_equal_exponent,
    "fp_primes": _fx_fp_primes,
    "prophier": _fx_prophier,
    "levelfix": _fx_levelfix,
}


def build_fixture(name: str, params: tuple, config: EvalConfig = DEFAULT_CONFIG,
                  expr=None) -> LazySet:
    """Resolve a construct(...) reference to its LazySet."""
    if name == "sidon_levels":
        raise InputError("sidon_levels denotes a level union; evaluate its expression instead")
    builder = _BUILDERS.get(name)
    if builder is None:
        raise InputError("unknown fixture %r; catalog:\n  %s" % (name, "\n  ".join(catalog_lines())))
    return builder(params, config, expr)
