"""AST for the set-expression language.

Nodes are frozen dataclasses so they hash, compare structurally, and survive
round-tripping through unparse/parse unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputError


class SetExpr:
    """Base class for set expressions."""

    __slots__ = ()


class SeqSpec:
    """Base class for sequence specifications used by fs/fp."""

    __slots__ = ()


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise InputError(msg)


@dataclass(frozen=True)
class AllNat(SetExpr):
    pass


@dataclass(frozen=True)
class Primes(SetExpr):
    pass


@dataclass(frozen=True)
class Level(SetExpr):
    n: int

    def __post_init__(self):
        _need(self.n >= 0, f"level index must be >= 0, got {self.n}")


@dataclass(frozen=True)
class Mult(SetExpr):
    k: int

    def __post_init__(self):
        _need(self.k >= 1, f"mult step must be >= 1, got {self.k}")


@dataclass(frozen=True)
class Ap(SetExpr):
    """Arithmetic progression {a, a+d, a+2d, ...}."""

    a: int
    d: int

    def __post_init__(self):
        _need(self.a >= 1, f"ap start must be >= 1, got {self.a}")
        _need(self.d >= 1, f"ap step must be >= 1, got {self.d}")


@dataclass(frozen=True)
class Explicit(SetExpr):
    elems: tuple[int, ...]

    def __post_init__(self):
        _need(len(self.elems) >= 1, "explicit set must be nonempty")
        _need(all(e >= 1 for e in self.elems), "explicit set elements must be >= 1")
        _need(list(self.elems) == sorted(set(self.elems)),
              "explicit set elements must be strictly increasing")


@dataclass(frozen=True)
class Union(SetExpr):
    args: tuple[SetExpr, ...]

    def __post_init__(self):
        _need(len(self.args) >= 2, "union needs at least two operands")


@dataclass(frozen=True)
class Inter(SetExpr):
    args: tuple[SetExpr, ...]

    def __post_init__(self):
        _need(len(self.args) >= 2, "inter needs at least two operands")


@dataclass(frozen=True)
class Compl(SetExpr):
    arg: SetExpr


@dataclass(frozen=True)
class Dilate(SetExpr):
    k: int
    arg: SetExpr

    def __post_init__(self):
        _need(self.k >= 1, f"dilate factor must be >= 1, got {self.k}")


@dataclass(frozen=True)
class Quot(SetExpr):
    arg: SetExpr
    n: int

    def __post_init__(self):
        _need(self.n >= 1, f"quot divisor must be >= 1, got {self.n}")


@dataclass(frozen=True)
class Shift(SetExpr):
    """Downward shift A - t (elements <= t vanish)."""

    arg: SetExpr
    t: int

    def __post_init__(self):
        _need(self.t >= 0, f"shift amount must be >= 0, got {self.t}")


@dataclass(frozen=True)
class Up(SetExpr):
    arg: SetExpr


@dataclass(frozen=True)
class Down(SetExpr):
    arg: SetExpr


@dataclass(frozen=True)
class ExplicitSeq(SeqSpec):
    values: tuple[int, ...]

    def __post_init__(self):
        _need(len(self.values) >= 1, "sequence must be nonempty")
        _need(all(v >= 1 for v in self.values), "sequence terms must be >= 1")
        _need(list(self.values) == sorted(set(self.values)),
              "sequence terms must be strictly increasing")


@dataclass(frozen=True)
class NamedSeq(SeqSpec):
    rule: str
    params: tuple

    def __post_init__(self):
        _need(self.rule in SEQUENCE_RULES, f"unknown sequence rule {self.rule!r}")


@dataclass(frozen=True)
class Fs(SetExpr):
    seq: SeqSpec


@dataclass(frozen=True)
class Fp(SetExpr):
    seq: SeqSpec


@dataclass(frozen=True)
class Pseudo(SetExpr):
    """Greedy pseudointersection: count elements drawn from a decreasing chain."""

    count: int
    chain: tuple[SetExpr, ...]

    def __post_init__(self):
        _need(self.count >= 1, f"pseudo count must be >= 1, got {self.count}")
        _need(len(self.chain) >= 1, "pseudo needs at least one chain member")


@dataclass(frozen=True)
class Construct(SetExpr):
    name: str
    params: tuple

    def __post_init__(self):
        _need(self.name in CONSTRUCT_NAMES, f"unknown fixture {self.name!r}")


# Names are validated here so the parser and evaluator agree on the catalog.
SEQUENCE_RULES = ("exgamma", "fastgrowth", "sidon", "primeseq")
CONSTRUCT_NAMES = (
    "exgamma", "fastgrowth", "sidon", "thick_nonmaxstar", "equal_exponent",
    "fp_primes", "prophier", "levelfix", "sidon_levels",
)


def unparse(node) -> str:
    """Canonical text for an AST; parse(unparse(t)) == t."""
    if isinstance(node, AllNat):
        return "N"
    if isinstance(node, Primes):
        return "primes"
    if isinstance(node, Level):
        return f"level({node.n})"
    if isinstance(node, Mult):
        return f"mult({node.k})"
    if isinstance(node, Ap):
        return f"ap({node.a},{node.d})"
    if isinstance(node, Explicit):
        return "{" + ",".join(str(e) for e in node.elems) + "}"
    if isinstance(node, Union):
        return "union(" + ",".join(unparse(a) for a in node.args) + ")"
    if isinstance(node, Inter):
        return "inter(" + ",".join(unparse(a) for a in node.args) + ")"
    if isinstance(node, Compl):
        return f"compl({unparse(node.arg)})"
    if isinstance(node, Dilate):
        return f"dilate({node.k},{unparse(node.arg)})"
    if isinstance(node, Quot):
        return f"quot({unparse(node.arg)},{node.n})"
    if isinstance(node, Shift):
        return f"shift({unparse(node.arg)},{node.t})"
    if isinstance(node, Up):
        return f"up({unparse(node.arg)})"
    if isinstance(node, Down):
        return f"down({unparse(node.arg)})"
    if isinstance(node, Fs):
        return f"fs({unparse(node.seq)})"
    if isinstance(node, Fp):
        return f"fp({unparse(node.seq)})"
    if isinstance(node, Pseudo):
        inner = ",".join(unparse(a) for a in node.chain)
        return f"pseudo({node.count},{inner})"
    if isinstance(node, Construct):
        if node.params:
            ps = ",".join(_unparse_param(p) for p in node.params)
            return f"construct({node.name},{ps})"
        return f"construct({node.name})"
    if isinstance(node, ExplicitSeq):
        return "[" + ",".join(str(v) for v in node.values) + "]"
    if isinstance(node, NamedSeq):
        if node.params:
            ps = ",".join(_unparse_param(p) for p in node.params)
            return f"{node.rule}({ps})"
        return f"{node.rule}()"
    raise InputError(f"cannot unparse {node!r}")


def _unparse_param(p) -> str:
    if isinstance(p, tuple):
        return "[" + ",".join(str(v) for v in p) + "]"
    return str(p)
