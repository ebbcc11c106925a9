"""Finite pointed algebras, terms over them, and relations.

Carriers are the integers ``0..size-1``.  Operation tables are stored flat in
row-major order with the last argument varying fastest, so the value of
``f(a_1, ..., a_k)`` sits at index ``sum(a_i * size**(k - i))``.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

DEFAULT_POWER_BOUND = 4096


class AlgebraError(ValueError):
    """Raised for malformed algebras, terms or relations."""


class BoundExceeded(AlgebraError):
    """Raised when an enumeration would exceed its configured size bound."""


def flat_index(args: Sequence[int], size: int) -> int:
    idx = 0
    for a in args:
        idx = idx * size + a
    return idx


@dataclass(frozen=True)
class Operation:
    name: str
    arity: int
    table: tuple[int, ...]


@dataclass(frozen=True)
class FiniteAlgebra:
    """A finite algebra with a designated base point ``zero``."""

    name: str
    size: int
    zero: int
    operations: tuple[Operation, ...] = ()

    def __post_init__(self):
        if self.size < 1:
            raise AlgebraError(f"{self.name}: size must be positive")
        if not 0 <= self.zero < self.size:
            raise AlgebraError(f"{self.name}: zero out of range")
        ops = tuple(
            op if isinstance(op, Operation) else Operation(op[0], op[1], tuple(op[2]))
            for op in self.operations
        )
        object.__setattr__(self, "operations", ops)
        names = [op.name for op in ops]
        if len(set(names)) != len(names):
            raise AlgebraError(f"{self.name}: duplicate operation names")
        for op in ops:
            if op.arity < 0:
                raise AlgebraError(f"{self.name}: operation {op.name!r} has negative arity")
            expected = self.size**op.arity
            if len(op.table) != expected:
                raise AlgebraError(
                    f"{self.name}: operation {op.name!r} expected {expected} entries, got {len(op.table)}"
                )
            for v in op.table:
                if not (isinstance(v, int) and 0 <= v < self.size):
                    raise AlgebraError(f"{self.name}: operation {op.name!r} entry {v!r} out of range")
            if op.arity == 0 and op.table[0] != self.zero:
                warnings.warn(
                    f"{self.name}: constant {op.name!r} = {op.table[0]} differs from zero = {self.zero}; "
                    "pointed checks use the designated zero",
                    stacklevel=2,
                )

    @property
    def carrier(self) -> range:
        return range(self.size)

    @property
    def signature(self) -> tuple[tuple[str, int], ...]:
        return tuple((op.name, op.arity) for op in self.operations)

    def op(self, name: str) -> Operation:
        for op in self.operations:
            if op.name == name:
                return op
        raise AlgebraError(f"{self.name}: unknown operation {name!r}")

    def apply(self, name: str, args: Sequence[int]) -> int:
        op = self.op(name)
        if len(args) != op.arity:
            raise AlgebraError(f"operation {name!r} has arity {op.arity}, got {len(args)} arguments")
        return op.table[flat_index(args, self.size)]

    def reduct(self, table: Sequence[int], name: str = "sub") -> "FiniteAlgebra":
        """The algebra (carrier, binary ``table``, zero)."""
        return FiniteAlgebra(f"{self.name}[{name}]", self.size, self.zero, (Operation(name, 2, tuple(table)),))


# --- terms -----------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    index: int

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class Zero:
    def __str__(self):
        return "0"


@dataclass(frozen=True)
class App:
    op: str
    args: tuple["Term", ...] = ()

    def __str__(self):
        return f"{self.op}({','.join(str(a) for a in self.args)})"


Term = Union[Var, Zero, App]


def term_depth(t: Term) -> int:
    if isinstance(t, App):
        return 1 + max((term_depth(a) for a in t.args), default=0)
    return 0


def term_vars(t: Term) -> set[int]:
    if isinstance(t, Var):
        return {t.index}
    if isinstance(t, App):
        return set().union(*(term_vars(a) for a in t.args)) if t.args else set()
    return set()


def substitute(t: Term, mapping: Mapping[int, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.index, t)
    if isinstance(t, App):
        return App(t.op, tuple(substitute(a, mapping) for a in t.args))
    return t


def eval_term(alg: FiniteAlgebra, t: Term, env: Sequence[int]) -> int:
    if isinstance(t, Zero):
        return alg.zero
    if isinstance(t, Var):
        if not 0 <= t.index < len(env):
            raise AlgebraError(f"variable x{t.index} outside environment of length {len(env)}")
        return env[t.index]
    if isinstance(t, App):
        return alg.apply(t.op, [eval_term(alg, a, env) for a in t.args])
    raise TypeError(f"not a term: {t!r}")


def parse_term(text: str) -> Term:
    """Parse the textual form produced by ``str(term)``, e.g. ``sub(x0,sub(0,x1))``."""
    s = text.replace(" ", "")
    pos = 0

    def parse() -> Term:
        nonlocal pos
        if s.startswith("0", pos) and (pos + 1 == len(s) or s[pos + 1] in ",)"):
            pos += 1
            return Zero()
        start = pos
        while pos < len(s) and s[pos] not in "(),":
            pos += 1
        ident = s[start:pos]
        if not ident:
            raise AlgebraError(f"bad term at offset {start}: {text!r}")
        if pos < len(s) and s[pos] == "(":
            pos += 1
            args = []
            if s[pos] != ")":
                while True:
                    args.append(parse())
                    if s[pos] == ",":
                        pos += 1
                        continue
                    break
            if s[pos] != ")":
                raise AlgebraError(f"expected ')' at offset {pos}: {text!r}")
            pos += 1
            return App(ident, tuple(args))
        if ident[0] == "x" and ident[1:].isdigit():
            return Var(int(ident[1:]))
        raise AlgebraError(f"unknown symbol {ident!r} in {text!r}")

    try:
        t = parse()
    except IndexError:
        raise AlgebraError(f"truncated term: {text!r}") from None
    if pos != len(s):
        raise AlgebraError(f"trailing input in term: {text!r}")
    return t


# --- relations -------------------------------------------------------------


@dataclass(frozen=True)
class Relation:
    arity: int
    tuples: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.arity < 1:
            raise AlgebraError("relation arity must be positive")
        ts = frozenset(tuple(t) for t in self.tuples)
        for t in ts:
            if len(t) != self.arity:
                raise AlgebraError(f"tuple {t} does not have arity {self.arity}")
        object.__setattr__(self, "tuples", ts)

    @classmethod
    def of(cls, tuples: Iterable[Sequence[int]], arity: int | None = None) -> "Relation":
        ts = [tuple(t) for t in tuples]
        if arity is None:
            if not ts:
                raise AlgebraError("cannot infer arity of an empty relation")
            arity = len(ts[0])
        return cls(arity, frozenset(ts))

    @classmethod
    def full(cls, size: int, arity: int) -> "Relation":
        return cls(arity, frozenset(itertools.product(range(size), repeat=arity)))

    def __contains__(self, t) -> bool:
        return tuple(t) in self.tuples

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self):
        return iter(sorted(self.tuples))

    def check_range(self, size: int) -> None:
        for t in self.tuples:
            if any(not 0 <= v < size for v in t):
                raise AlgebraError(f"tuple {t} has an entry outside 0..{size - 1}")


# --- elementary operations -------------------------------------------------


def subalgebra_closure(alg: FiniteAlgebra, generators: Iterable[int]) -> frozenset[int]:
    members = set(generators) | {alg.zero}
    for g in members:
        if not 0 <= g < alg.size:
            raise AlgebraError(f"generator {g} not in carrier")
    ops = alg.operations
    for op in ops:
        if op.arity == 0:
            members.add(op.table[0])
    frontier = set(members)
    while frontier:
        found = set()
        pool = sorted(members)
        for op in ops:
            if op.arity == 0:
                continue
            for args in itertools.product(pool, repeat=op.arity):
                if not frontier.intersection(args):
                    continue
                v = op.table[flat_index(args, alg.size)]
                if v not in members:
                    found.add(v)
        members |= found
        frontier = found
    return frozenset(members)


def encode_tuple(t: Sequence[int], size: int) -> int:
    return flat_index(t, size)


def decode_tuple(i: int, size: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        i, r = divmod(i, size)
        out.append(r)
    return tuple(reversed(out))


def power_algebra(alg: FiniteAlgebra, k: int, bound: int = DEFAULT_POWER_BOUND) -> FiniteAlgebra:
    """The power ``alg**k``; element ``i`` encodes the k-tuple ``decode_tuple(i, size, k)``."""
    if k < 1:
        raise AlgebraError("power exponent must be positive")
    n = alg.size
    N = n**k
    if N > bound:
        raise BoundExceeded(f"{alg.name}^{k} has {N} elements, bound is {bound}")
    for op in alg.operations:
        if N**op.arity > bound * bound:
            raise BoundExceeded(f"table of {op.name!r} on {alg.name}^{k} too large")
    elems = [decode_tuple(i, n, k) for i in range(N)]
    ops = []
    for op in alg.operations:
        table = []
        for args in itertools.product(elems, repeat=op.arity):
            comp = [op.table[flat_index(col, n)] for col in zip(*args)] if op.arity else [op.table[0]] * k
            table.append(flat_index(comp, n))
        ops.append(Operation(op.name, op.arity, tuple(table)))
    zero = flat_index([alg.zero] * k, n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return FiniteAlgebra(f"{alg.name}^{k}", N, zero, tuple(ops))


def is_compatible_relation(alg: FiniteAlgebra, R: Relation) -> bool:
    """True iff ``R`` is a subuniverse of ``alg**arity`` containing the zero tuple."""
    ts = R.tuples
    if (alg.zero,) * R.arity not in ts:
        return False
    pool = sorted(ts)
    for op in alg.operations:
        for args in itertools.product(pool, repeat=op.arity):
            if op.arity == 0:
                image = (op.table[0],) * R.arity
            else:
                image = tuple(op.table[flat_index(col, alg.size)] for col in zip(*args))
            if image not in ts:
                return False
    return True


def is_homomorphism(domain: FiniteAlgebra, codomain: FiniteAlgebra, f: Sequence[int] | Mapping[int, int]) -> bool:
    if domain.signature != codomain.signature:
        raise AlgebraError(f"signature mismatch: {domain.signature} vs {codomain.signature}")
    fm = [f[a] for a in range(domain.size)]
    if fm[domain.zero] != codomain.zero:
        return False
    for op, op2 in zip(domain.operations, codomain.operations):
        for args in itertools.product(range(domain.size), repeat=op.arity):
            lhs = fm[op.table[flat_index(args, domain.size)]]
            rhs = op2.table[flat_index([fm[a] for a in args], codomain.size)]
            if lhs != rhs:
                return False
    return True
