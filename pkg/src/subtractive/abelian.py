"""Group laws of subtraction operations, abelian group synthesis, additivity."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Sequence

from .algebra import AlgebraError, BoundExceeded, FiniteAlgebra, flat_index
from .clone import (
    DEFAULT_CAP,
    OperationTable,
    SubtractionWitness,
    find_subtraction_witnesses,
    is_homomorphic_operation,
    is_subtraction,
)


class LawCheck(NamedTuple):
    holds: bool
    counterexample: Optional[tuple] = None


@dataclass(frozen=True)
class AbelianStructure:
    plus: OperationTable
    neg: OperationTable
    zero: int


@dataclass
class AdditivityVerdict:
    answer: str  # "yes" | "no" | "unknown"
    witness: Optional[SubtractionWitness] = None
    complete: bool = True
    cap: int = DEFAULT_CAP
    note: str = ""


def _require_subtraction(alg: FiniteAlgebra, s: OperationTable):
    if s.arity != 2 or len(s.table) != alg.size**2 or not is_subtraction(alg, s):
        raise AlgebraError("operation does not satisfy s(x,0)=x and s(x,x)=0")


def check_exchange_law(alg: FiniteAlgebra, s: OperationTable) -> LawCheck:
    """Scan ``(x-y)-(z-t) = (x-z)-(y-t)``; the first failing quadruple is returned."""
    _require_subtraction(alg, s)
    result = LawCheck(True)
    for x, y, z, t in itertools.product(alg.carrier, repeat=4):
        if s(s(x, y), s(z, t)) != s(s(x, z), s(y, t)):
            result = LawCheck(False, (x, y, z, t))
            break
    if result.holds != is_homomorphic_operation(alg.reduct(s.table), s):
        raise RuntimeError("exchange law and homomorphism check disagree")
    return result


def check_group_law(alg: FiniteAlgebra, s: OperationTable) -> LawCheck:
    """Scan ``(x-y)-(z-y) = x-z``."""
    for x, y, z in itertools.product(alg.carrier, repeat=3):
        if s(s(x, y), s(z, y)) != s(x, z):
            return LawCheck(False, (x, y, z))
    return LawCheck(True)


def classify_group_law(alg: FiniteAlgebra, s: OperationTable) -> str:
    _require_subtraction(alg, s)
    group = check_group_law(alg, s).holds
    if check_exchange_law(alg, s).holds:
        if not group:
            raise RuntimeError("exchange law holds but group law fails")
        return "abelian-group"
    return "group" if group else "bare-subtraction"


def synthesize_abelian(alg: FiniteAlgebra, s: OperationTable) -> AbelianStructure:
    """``x + y = x - (0 - y)`` and ``-x = 0 - x``."""
    law = check_exchange_law(alg, s)
    if not law.holds:
        raise AlgebraError(f"exchange law fails at {law.counterexample}")
    z = alg.zero
    neg = OperationTable(1, tuple(s(z, x) for x in alg.carrier))
    plus = OperationTable(2, tuple(s(x, s(z, y)) for x in alg.carrier for y in alg.carrier))
    return AbelianStructure(plus, neg, z)


def verify_abelian_group(size: int, g: AbelianStructure, sub: Optional[OperationTable] = None) -> LawCheck:
    """Exhaustive axiom check; ``counterexample`` is ``(axiom, elements)`` on failure."""
    A = range(size)
    p, n, z = g.plus, g.neg, g.zero
    for a, b, c in itertools.product(A, repeat=3):
        if p(p(a, b), c) != p(a, p(b, c)):
            return LawCheck(False, ("associativity", (a, b, c)))
    for a, b in itertools.product(A, repeat=2):
        if p(a, b) != p(b, a):
            return LawCheck(False, ("commutativity", (a, b)))
    for a in A:
        if p(a, z) != a or p(z, a) != a:
            return LawCheck(False, ("unit", (a,)))
    for a in A:
        if p(a, n(a)) != z:
            return LawCheck(False, ("inverse", (a,)))
    if sub is not None:
        for a, b in itertools.product(A, repeat=2):
            if sub(a, b) != p(a, n(b)):
                return LawCheck(False, ("subtraction", (a, b)))
    return LawCheck(True)


def homomorphic_subtractions(
    size: int, zero: int, operations: Sequence[tuple[int, Sequence[int]]]
) -> Iterator[tuple[int, ...]]:
    """Yield every binary table ``t`` with ``t(a,0)=a``, ``t(a,a)=0`` commuting with ``operations``.

    ``operations`` are ``(arity, flat table)`` pairs.  Commuting with ``f`` of
    arity m means ``t(f(x), f(y)) = f(t(x1,y1), ..., t(xm,ym))``.  Each such
    identity is a constraint linking cells of ``t``; the search assigns cells
    one at a time and propagates forced values.
    """
    n = size
    cells = n * n
    constraints: list[tuple[int, tuple[int, ...], Sequence[int], int]] = []
    for arity, table in operations:
        for xs in itertools.product(range(n), repeat=arity):
            for ys in itertools.product(range(n), repeat=arity):
                lhs = table[flat_index(xs, n)] * n + table[flat_index(ys, n)]
                args = tuple(x * n + y for x, y in zip(xs, ys))
                constraints.append((lhs, args, table, arity))
    watch: list[list[int]] = [[] for _ in range(cells)]
    for ci, (lhs, args, _, _) in enumerate(constraints):
        for c in {lhs, *args}:
            watch[c].append(ci)

    def propagate(t: list, queue: list[int]) -> bool:
        while queue:
            cell = queue.pop()
            for ci in watch[cell]:
                lhs, args, table, arity = constraints[ci]
                vals = [t[a] for a in args]
                if any(v is None for v in vals):
                    continue
                want = table[flat_index(vals, n)] if arity else table[0]
                if t[lhs] is None:
                    t[lhs] = want
                    queue.append(lhs)
                elif t[lhs] != want:
                    return False
        return True

    start: list = [None] * cells
    for a in range(n):
        for c, v in ((a * n + zero, a), (a * n + a, zero)):
            if start[c] is not None and start[c] != v:
                return
            start[c] = v
    if not propagate(start, [c for c in range(cells) if start[c] is not None] + [c for c in range(cells)]):
        return

    def search(t: list) -> Iterator[tuple[int, ...]]:
        try:
            cell = t.index(None)
        except ValueError:
            yield tuple(t)
            return
        for v in range(n):
            t2 = list(t)
            t2[cell] = v
            if propagate(t2, [cell]):
                yield from search(t2)

    yield from search(start)


MAX_UNIQUENESS_SIZE = 6


def unique_homomorphic_subtraction(alg: FiniteAlgebra, s: OperationTable) -> bool:
    """True iff ``s`` is the only subtraction on ``(A, s, 0)`` that is a homomorphism of it."""
    if alg.size > MAX_UNIQUENESS_SIZE:
        raise BoundExceeded(f"uniqueness check limited to size {MAX_UNIQUENESS_SIZE}")
    law = check_exchange_law(alg, s)
    if not law.holds:
        raise AlgebraError(f"exchange law fails at {law.counterexample}")
    found = list(itertools.islice(homomorphic_subtractions(alg.size, alg.zero, [(2, s.table)]), 2))
    return found == [s.table]


def decide_additivity(alg: FiniteAlgebra, cap: int = DEFAULT_CAP) -> AdditivityVerdict:
    search = find_subtraction_witnesses(alg, cap)
    for w in search.witnesses:
        if w.homomorphic:
            return AdditivityVerdict("yes", w, search.complete, cap)
    if search.complete:
        note = "no subtraction term is homomorphic" if search.witnesses else "not subtractive"
        return AdditivityVerdict("no", None, True, cap, note=note)
    ops = [(op.arity, op.table) for op in alg.operations]
    if next(homomorphic_subtractions(alg.size, alg.zero, ops), None) is None:
        return AdditivityVerdict(
            "no", None, False, cap, note="no homomorphic subtraction operation exists on this algebra"
        )
    return AdditivityVerdict("unknown", None, False, cap, note=f"clone enumeration exceeded cap {cap}")
