"""Expression language: parsing, evaluation semantics, structural analyses."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from felab.errors import InputError, ParseError, PrecisionError
from felab.setlang import (EXACT, PREFIX, EvalConfig, evaluate, empty_meet_mult,
                           level_deltas, levels_of, parse, period_of, unparse)
from felab.setlang import nodes

CFG = EvalConfig(horizon=2000)


def ev(text, **kw):
    return evaluate(parse(text), EvalConfig(**kw) if kw else CFG)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def test_parse_primitives():
    assert parse("N") == nodes.AllNat()
    assert parse("primes") == nodes.Primes()
    assert parse("odd") == nodes.Ap(1, 2)
    assert parse("level(3)") == nodes.Level(3)
    assert parse("mult(7)") == nodes.Mult(7)
    assert parse("{1,2,30}") == nodes.Explicit((1, 2, 30))


def test_parse_combinators_and_whitespace():
    got = parse(" union( mult(2) , level(3) ) ")
    assert got == nodes.Union((nodes.Mult(2), nodes.Level(3)))
    assert parse("quot(shift(up({6}),2),3)") == nodes.Quot(
        nodes.Shift(nodes.Up(nodes.Explicit((6,))), 2), 3)
    assert parse("fs([1,4,9])") == nodes.Fs(nodes.ExplicitSeq((1, 4, 9)))
    assert parse("fp(primeseq(odd,6))") == nodes.Fp(
        nodes.NamedSeq("primeseq", ("odd", 6)))
    assert parse("pseudo(2,N,mult(2))") == nodes.Pseudo(
        2, (nodes.AllNat(), nodes.Mult(2)))
    assert parse("construct(fp_primes,odd,6)") == nodes.Construct(
        "fp_primes", ("odd", 6))


@pytest.mark.parametrize("bad", [
    "", "union(N)", "mult()", "mult(0)", "level(-1)", "{}",
    "oops(3)", "N extra", "ap(1)", "construct(unknown)", "fs({1,2})",
    "quot(N,0)", "pseudo(0,N)", "дилате(2,N)",
])
def test_parse_rejects(bad):
    with pytest.raises((ParseError, InputError)):
        parse(bad)


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as exc:
        parse("union(mult(2),")
    assert exc.value.line == 1


# unparse/parse round trip over random trees ---------------------------------

_scalars = st.integers(min_value=1, max_value=50)
_leaf = st.one_of(
    st.just(nodes.AllNat()),
    st.just(nodes.Primes()),
    st.builds(nodes.Level, st.integers(min_value=0, max_value=9)),
    st.builds(nodes.Mult, _scalars),
    st.builds(nodes.Ap, _scalars, _scalars),
    st.builds(nodes.Explicit, st.lists(
        st.integers(min_value=1, max_value=99), min_size=1, max_size=5,
        unique=True).map(lambda v: tuple(sorted(v)))),
    st.builds(nodes.Fs, st.builds(nodes.ExplicitSeq, st.lists(
        st.integers(min_value=1, max_value=40), min_size=1, max_size=4,
        unique=True).map(lambda v: tuple(sorted(v))))),
)


def _extend(children):
    pair = st.lists(children, min_size=2, max_size=3).map(tuple)
    return st.one_of(
        st.builds(nodes.Union, pair),
        st.builds(nodes.Inter, pair),
        st.builds(nodes.Compl, children),
        st.builds(nodes.Dilate, _scalars, children),
        st.builds(nodes.Quot, children, _scalars),
        st.builds(nodes.Shift, children, st.integers(min_value=0, max_value=20)),
        st.builds(nodes.Up, children),
        st.builds(nodes.Down, children),
    )


_tree = st.recursive(_leaf, _extend, max_leaves=8)


@given(_tree)
def test_unparse_parse_roundtrip(tree):
    assert parse(unparse(tree)) == tree


# ---------------------------------------------------------------------------
# evaluation semantics
# ---------------------------------------------------------------------------

def brute(text, H):
    """Definite members of the expression within [1, H], by direct semantics."""
    A = ev(text, horizon=max(H, 100))
    return [n for n in range(1, H + 1) if A.contains(n) is True]


def test_primitive_membership():
    N = ev("N")
    assert N.is_exact and N.contains(1) is True and N.contains(0) is False
    P = ev("primes")
    assert [n for n in range(1, 30) if P.contains(n) is True] == \
        [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert ev("level(2)").contains(6) is True
    assert ev("level(2)").contains(8) is False
    assert ev("mult(4)").contains(8) is True
    assert ev("ap(3,5)").contains(13) is True
    assert ev("ap(3,5)").contains(12) is False


def test_boolean_combinator_laws():
    H = 300
    assert brute("union(mult(2),mult(3))", H) == sorted(
        set(brute("mult(2)", H)) | set(brute("mult(3)", H)))
    assert brute("inter(mult(2),mult(3))", H) == brute("mult(6)", H)
    assert brute("compl(mult(2))", H) == brute("odd", H)
    assert brute("compl(compl(level(2)))", H) == brute("level(2)", H)


def test_dilate_quot_shift_up_down():
    H = 200
    assert brute("dilate(3,ap(1,2))", H) == [3 * k for k in brute("ap(1,2)", H) if 3 * k <= H]
    assert brute("quot(mult(6),2)", H) == brute("mult(3)", H)
    assert brute("shift(mult(5),2)", H) == [n for n in range(1, H + 1) if n % 5 == 3]
    assert brute("up({6,35})", 40) == [
        n for n in range(1, 41) if n % 6 == 0 or n % 35 == 0]
    assert brute("down({60})", 70) == [1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]


def test_quot_dilate_galois():
    # x in quot(A,n) iff n*x in A, for an exact A
    A = ev("union(mult(4),level(3))")
    Q = ev("quot(union(mult(4),level(3)),6)")
    for x in range(1, 200):
        assert Q.contains(x) == A.contains(6 * x)


def test_fs_fp_of_explicit_sequences():
    fs = ev("fs([1,4,9])")
    assert fs.elements() == [1, 4, 5, 9, 10, 13, 14]
    assert fs.is_exact and fs.finite
    fp = ev("fp([2,5,11])")
    assert fp.elements() == [2, 5, 10, 11, 22, 55, 110]
    assert fp.contains(110) is True and fp.contains(4) is False


def test_fs_of_named_rule_is_prefix_class():
    A = ev("fs(fastgrowth())", horizon=2000)
    assert A.exactness == PREFIX
    assert A.contains(1) is True
    assert A.contains(2) is False  # below the completeness bound, absent
    assert A.contains(A.complete_below + 1) in (True, None)
    with pytest.raises(PrecisionError):
        A.complete_elements(10**9, CFG)


def test_pseudo_chain_values():
    Y = ev("pseudo(3,N,mult(2),mult(6))")
    assert Y.elements() == [1, 2, 6]
    with pytest.raises(InputError):
        ev("pseudo(2,mult(2),N)")  # not decreasing


def test_exactness_flags():
    assert ev("N").exactness == EXACT
    assert ev("inter(compl(mult(2)),primes)").exactness == EXACT
    assert ev("construct(exgamma,10)").exactness == EXACT  # finite fixture is fully known
    assert ev("fs(fastgrowth())").exactness == PREFIX


def test_contains_below_completeness_is_decided():
    A = ev("fs(fastgrowth())", horizon=3000)
    for n in range(1, A.complete_below + 1):
        assert A.contains(n) is not None


def test_elements_monotone_in_bound():
    A = ev("union(primes,mult(10))")
    small = A.elements(100)
    big = A.elements(500)
    assert small == [x for x in big if x <= 100]


def test_finite_evaluation_is_exact_everywhere():
    A = ev("inter({2,4,8,16},mult(4))")
    assert A.finite and A.is_exact
    assert A.elements() == [4, 8, 16]
    assert A.contains(32) is False  # beyond extent but the set is fully known


def test_empty_intersection_is_legal_and_empty():
    A = ev("inter(mult(2),ap(1,2))")
    assert A.elements(500) == []


# ---------------------------------------------------------------------------
# structural analyses
# ---------------------------------------------------------------------------

def test_levels_of_covers():
    assert levels_of(parse("level(4)")) == frozenset({4})
    assert levels_of(parse("union(level(2),level(5))")) == frozenset({2, 5})
    assert levels_of(parse("primes")) == frozenset({1})
    assert levels_of(parse("{4,6,9}")) == frozenset({2})
    assert levels_of(parse("mult(2)")) is None
    assert levels_of(parse("N")) is None


def test_level_deltas():
    assert level_deltas(frozenset({2, 5})) == frozenset({-3, 0, 3})
    assert level_deltas(frozenset({1})) == frozenset({0})


def test_empty_meet_mult():
    assert empty_meet_mult(parse("odd"), 2) is True
    assert empty_meet_mult(parse("odd"), 3) is False
    assert empty_meet_mult(parse("mult(4)"), 2) is False
    assert empty_meet_mult(parse("compl(mult(3))"), 3) is True
    assert empty_meet_mult(parse("inter(primes,N)"), 6) is True
    assert empty_meet_mult(parse("fs(fastgrowth())"), 5) is None


def test_period_of():
    assert period_of(parse("mult(6)")) == (0, 6)
    assert period_of(parse("odd")) == (0, 2)
    assert period_of(parse("union(mult(2),mult(3))")) == (0, 6)
    assert period_of(parse("primes")) is None
    assert period_of(parse("compl(mult(5))")) == (0, 5)


def test_period_of_really_is_a_period():
    for text in ("mult(6)", "odd", "union(mult(4),ap(2,6))", "inter(mult(2),compl(mult(6)))"):
        res = period_of(parse(text))
        assert res is not None
        pre, per = res
        A = ev(text, horizon=3 * (pre + per) + 60)
        for n in range(pre + 1, pre + per + 30):
            assert A.contains(n) == A.contains(n + per)


# ---------------------------------------------------------------------------
# resource behavior
# ---------------------------------------------------------------------------

def test_member_cap_enforced():
    from felab.errors import ResourceError
    with pytest.raises(ResourceError):
        evaluate(parse("N"), EvalConfig(horizon=100, max_elements=10)).elements(100)


def test_fs_length_cap():
    from felab.errors import ResourceError
    seq = "[" + ",".join(str(10**k) for k in range(1, 30)) + "]"
    with pytest.raises((ResourceError, InputError)):
        evaluate(parse(f"fs({seq})"), EvalConfig(horizon=10**40))


@settings(max_examples=40, deadline=None)
@given(_tree, st.integers(min_value=1, max_value=120))
def test_membership_never_lies_below_bound(tree, n):
    """Random trees: definite answers below the completeness bound are final."""
    A = evaluate(tree, CFG)
    got = A.contains(n)
    if n <= A.complete_below:
        assert got is not None
        assert got == (n in set(A.elements(n)))
