"""Term operations of a finite algebra and searches for subtraction and Mal'tsev terms.

The k-ary term operations of an algebra ``A`` form the subalgebra of
``A**(A**k)`` generated by the projections and the constant zero.  It is
computed here breadth first: round ``d`` composes every basic operation with
tables already known, keeping the compositions that use at least one table
found in round ``d - 1``.  A table therefore always carries a term of minimal
depth, and within a depth tables are ordered lexicographically.

The same engine runs on a subset of the coordinates of ``A**k``.  Identities
such as ``s(x, 0) = x, s(x, x) = 0`` only constrain a few coordinates, and the
restricted closure is much smaller than the full clone; it is used to decide
existence of a witness when the full enumeration hits its cap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .algebra import AlgebraError, App, FiniteAlgebra, Term, Var, Zero, eval_term, flat_index

DEFAULT_CAP = 100_000


@dataclass(frozen=True)
class OperationTable:
    """A k-ary operation on the carrier, optionally with a term that denotes it."""

    arity: int
    table: tuple[int, ...]
    term: Optional[Term] = field(default=None, compare=False)

    def __post_init__(self):
        n = 1
        if self.arity:
            while n**self.arity < len(self.table):
                n += 1
            if n**self.arity != len(self.table):
                raise AlgebraError(f"table of length {len(self.table)} is not a {self.arity}-ary table")
        object.__setattr__(self, "_size", n)

    def __call__(self, *args: int) -> int:
        return self.table[flat_index(args, self._size)]

    @property
    def size(self) -> int:
        return self._size

    def term_text(self) -> str:
        return "" if self.term is None else str(self.term)


@dataclass(frozen=True)
class SubtractionWitness:
    op: OperationTable
    homomorphic: bool


@dataclass
class Clone:
    """Result of ``enumerate_term_operations``."""

    arity: int
    tables: list[OperationTable]
    complete: bool
    cap: int
    depth: int

    def __len__(self):
        return len(self.tables)

    def __iter__(self):
        return iter(self.tables)

    def table_set(self) -> set[tuple[int, ...]]:
        return {t.table for t in self.tables}


@dataclass
class WitnessSearch:
    """Witnesses found by a clone search, with completeness information.

    ``complete`` means the full clone was enumerated so ``witnesses`` lists
    every witness.  ``exists`` is the decided existence verdict, which may be
    known even when the full enumeration was cut off by the cap.
    """

    witnesses: list
    complete: bool
    exists: Optional[bool]
    cap: int
    clone_size: int
    note: str = ""

    @property
    def verdict(self) -> str:
        return {True: "yes", False: "no", None: "unknown"}[self.exists]

    def __len__(self):
        return len(self.witnesses)

    def __iter__(self):
        return iter(self.witnesses)


def _closure(alg: FiniteAlgebra, coords: np.ndarray, cap: int, target: Optional[bytes] = None):
    """Breadth-first closure of projections and zero evaluated at ``coords``.

    Returns ``(rows, terms, complete, max_depth)`` with rows in (depth, lex) order.
    ``cap <= 0`` disables the cap.  When ``target`` is given the search stops as
    soon as a row equal to it is found.
    """
    n = alg.size
    k = coords.shape[1]
    L = coords.shape[0]
    dtype = np.uint8 if n <= 256 else np.int32

    seen: dict[bytes, int] = {}
    rows: list[np.ndarray] = []
    terms: list[Term] = []

    def add(row: np.ndarray, term: Term) -> bool:
        key = row.tobytes()
        if key in seen:
            return False
        seen[key] = len(rows)
        rows.append(row)
        terms.append(term)
        return True

    seeds = [(coords[:, i].astype(dtype), Var(i)) for i in range(k)]
    seeds.append((np.full(L, alg.zero, dtype=dtype), Zero()))
    # projections win ties with zero; the surviving seeds are then sorted lexicographically
    uniq: dict[bytes, tuple[np.ndarray, Term]] = {}
    for row, term in seeds:
        uniq.setdefault(row.tobytes(), (row, term))
    for key in sorted(uniq):
        add(*uniq[key])

    if target is not None and target in seen:
        return rows, terms, False, 0
    ops = [(op, np.asarray(op.table, dtype=dtype).reshape((n,) * op.arity)) for op in alg.operations]
    frontier = 0
    depth = 0
    while frontier < len(rows):
        depth += 1
        known = np.stack(rows)
        N = len(rows)
        found: dict[bytes, tuple[np.ndarray, Term]] = {}

        def offer(batch: np.ndarray, make_term) -> bool:
            """Record unseen rows of ``batch``; return True to stop the round."""
            if batch.ndim == 1:
                batch = batch[None, :]
            flat = np.ascontiguousarray(batch).view(np.dtype((np.void, batch.shape[1] * batch.itemsize))).ravel()
            _, first = np.unique(flat, return_index=True)
            for i in np.sort(first):
                row = batch[i]
                key = row.tobytes()
                if key in seen or key in found:
                    continue
                found[key] = (row, make_term(int(i)))
                if target is not None and key == target:
                    return True
                if cap > 0 and len(seen) + len(found) > cap:
                    return True
            return False

        stop = False
        for op, table in ops:
            if stop:
                break
            m = op.arity
            if m == 0:
                if depth == 1:
                    stop = offer(np.full(L, op.table[0], dtype=dtype), lambda i, op=op: App(op.name, ()))
                continue
            if m == 1:
                stop = offer(table[known[frontier:]], lambda i, op=op: App(op.name, (terms[frontier + i],)))
                continue
            for prefix in itertools.product(range(N), repeat=m - 1):
                lo = 0 if any(p >= frontier for p in prefix) else frontier
                if lo >= N:
                    continue
                last = known[lo:]
                index = tuple(known[p][None, :] for p in prefix) + (last,)
                batch = table[index]
                stop = offer(
                    batch,
                    lambda i, op=op, prefix=prefix, lo=lo: App(
                        op.name, tuple(terms[p] for p in prefix) + (terms[lo + i],)
                    ),
                )
                if stop:
                    break
        frontier = N
        for key in sorted(found):
            add(*found[key])
        if stop:
            return rows, terms, False, depth
    return rows, terms, True, depth


def _all_coords(n: int, k: int) -> np.ndarray:
    return np.array(list(itertools.product(range(n), repeat=k)), dtype=np.int64).reshape(-1, k)


def enumerate_term_operations(alg: FiniteAlgebra, k: int, cap: int = DEFAULT_CAP) -> Clone:
    """All k-ary term operations of ``alg``; ``complete`` is False if ``cap`` was exceeded."""
    if k < 1:
        raise AlgebraError("arity must be positive")
    rows, terms, complete, depth = _closure(alg, _all_coords(alg.size, k), cap)
    if not complete:
        rows, terms = rows[: cap], terms[: cap]
    tables = [OperationTable(k, tuple(int(v) for v in row), term) for row, term in zip(rows, terms)]
    return Clone(k, tables, complete, cap, depth)


def _restricted_search(alg: FiniteAlgebra, k: int, pinned: dict, cap: int):
    """Look for a k-ary term taking prescribed values at the coordinates in ``pinned``.

    Returns ``(term or None, complete)``.  ``complete`` with no term proves that no
    term operation satisfies the constraints.
    """
    coords = sorted(pinned)
    arr = np.array(coords, dtype=np.int64).reshape(-1, k)
    dtype = np.uint8 if alg.size <= 256 else np.int32
    target = np.array([pinned[c] for c in coords], dtype=dtype).tobytes()
    rows, terms, complete, _ = _closure(alg, arr, cap, target=target)
    for row, term in zip(rows, terms):
        if row.tobytes() == target:
            return term, True
    return None, complete


def _table_of(alg: FiniteAlgebra, term: Term, k: int) -> OperationTable:
    table = tuple(eval_term(alg, term, env) for env in itertools.product(range(alg.size), repeat=k))
    return OperationTable(k, table, term)


def is_subtraction(alg: FiniteAlgebra, t: OperationTable) -> bool:
    z = alg.zero
    return all(t(a, z) == a and t(a, a) == z for a in alg.carrier)


def is_maltsev(alg: FiniteAlgebra, p: OperationTable) -> bool:
    return all(p(a, b, b) == a and p(b, b, a) == a for a in alg.carrier for b in alg.carrier)


def is_homomorphic_operation(alg: FiniteAlgebra, t: OperationTable) -> bool:
    """True iff ``t: alg**k -> alg`` commutes with every basic operation."""
    n, k = alg.size, t.arity
    points = list(itertools.product(range(n), repeat=k))
    for op in alg.operations:
        m = op.arity
        for args in itertools.product(points, repeat=m):
            # args are m points of A^k; apply op coordinatewise, then t
            if m == 0:
                lhs = t.table[flat_index([op.table[0]] * k, n)]
            else:
                lhs = t.table[flat_index([op.table[flat_index(col, n)] for col in zip(*args)], n)]
            rhs = op.table[flat_index([t.table[flat_index(p, n)] for p in args], n)]
            if lhs != rhs:
                return False
    return True


def _search(alg, k, cap, accept, pinned) -> WitnessSearch:
    clone = enumerate_term_operations(alg, k, cap)
    found = sorted((t for t in clone if accept(t)), key=lambda t: t.table)
    if clone.complete:
        return WitnessSearch(found, True, bool(found), cap, len(clone))
    if found:
        return WitnessSearch(found, False, True, cap, len(clone), note=f"clone enumeration exceeded cap {cap}")
    term, decided = _restricted_search(alg, k, pinned, cap)
    if term is not None:
        return WitnessSearch(
            [_table_of(alg, term, k)], False, True, cap, len(clone),
            note=f"clone enumeration exceeded cap {cap}; witness from restricted search",
        )
    if decided:
        return WitnessSearch([], False, False, cap, len(clone), note="restricted search complete")
    return WitnessSearch([], False, None, cap, len(clone), note=f"cap {cap} exceeded")


def find_subtraction_witnesses(alg: FiniteAlgebra, cap: int = DEFAULT_CAP) -> WitnessSearch:
    """Binary term operations ``s`` with ``s(a, 0) = a`` and ``s(a, a) = 0``."""
    z = alg.zero
    pinned = {(a, z): a for a in alg.carrier}
    pinned.update({(a, a): z for a in alg.carrier})
    search = _search(alg, 2, cap, lambda t: is_subtraction(alg, t), pinned)
    search.witnesses = [SubtractionWitness(t, is_homomorphic_operation(alg, t)) for t in search.witnesses]
    return search


def find_maltsev_witnesses(alg: FiniteAlgebra, cap: int = DEFAULT_CAP) -> WitnessSearch:
    """Ternary term operations ``p`` with ``p(a, b, b) = a = p(b, b, a)``."""
    pinned = {}
    for a in alg.carrier:
        for b in alg.carrier:
            pinned[(a, b, b)] = a
            pinned[(b, b, a)] = a
    return _search(alg, 3, cap, lambda t: is_maltsev(alg, t), pinned)


def maltsev_to_subtraction(p: OperationTable, alg: FiniteAlgebra) -> OperationTable:
    """``s(x, y) = p(x, y, 0)``."""
    if p.arity != 3 or not is_maltsev(alg, p):
        raise AlgebraError("not a Mal'tsev operation on this algebra")
    z = alg.zero
    table = tuple(p(a, b, z) for a in alg.carrier for b in alg.carrier)
    term = None
    if p.term is not None:
        from .algebra import substitute

        term = substitute(p.term, {2: Zero()})
    return OperationTable(2, table, term)
