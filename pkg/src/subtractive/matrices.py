"""Extended matrices of variables and 0, and closedness of relations under them.

A matrix is written in transposed form: each premise row and the conclusion
row is a pattern for one tuple of the relation.  A relation ``R`` is closed
under the matrix when every assignment of carrier elements to the variables
that puts all premise rows in ``R`` also puts the conclusion row in ``R``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .algebra import (
    AlgebraError,
    BoundExceeded,
    FiniteAlgebra,
    Relation,
    decode_tuple,
    flat_index,
    power_algebra,
)

ZERO = "0"
DEFAULT_SWEEP_BOUND = 256  # size**k; covers S3 with k = 3
DEFAULT_MAX_RELATIONS = 20_000


@dataclass(frozen=True)
class ExtMatrix:
    columns: int
    variables: tuple[str, ...]
    premise_rows: tuple[tuple[str, ...], ...]
    conclusion_row: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "premise_rows", tuple(tuple(r) for r in self.premise_rows))
        object.__setattr__(self, "conclusion_row", tuple(self.conclusion_row))
        if self.columns < 1:
            raise AlgebraError("matrix needs at least one column")
        if not self.premise_rows:
            raise AlgebraError("matrix needs at least one premise row")
        if ZERO in self.variables or len(set(self.variables)) != len(self.variables):
            raise AlgebraError(f"bad variable list {self.variables}")
        for row in self.premise_rows + (self.conclusion_row,):
            if len(row) != self.columns:
                raise AlgebraError(f"row {row} does not have {self.columns} entries")
            for e in row:
                if e != ZERO and e not in self.variables:
                    raise AlgebraError(f"undeclared matrix entry {e!r}")

    def interpret(self, assignment: dict[str, int], zero: int):
        """The premise tuples and conclusion tuple under ``assignment``."""
        val = lambda e: zero if e == ZERO else assignment[e]
        return [tuple(val(e) for e in row) for row in self.premise_rows], tuple(val(e) for e in self.conclusion_row)

    def __str__(self):
        lines = [" ".join(r) for r in self.premise_rows]
        lines.append("-" * max(len(lines[0]), 1))
        lines.append(" ".join(self.conclusion_row))
        return "\n".join(lines)


@dataclass(frozen=True)
class Counterexample:
    assignment: dict
    premises: tuple
    missing: tuple


@dataclass(frozen=True)
class ClosednessVerdict:
    closed: bool
    counterexample: Optional[Counterexample] = None

    def __bool__(self):
        return self.closed


_BUILTIN = {
    "diag": (("x",), (("x", "x"), ("x", ZERO)), (ZERO, "x")),
    "vars": (("x", "y"), (("x", "y"), ("x", ZERO)), (ZERO, "y")),
    "proof3": (("x", "y"), (("x", "y", "y"), (ZERO, ZERO, "y")), ("x", "y", ZERO)),
}


def builtin_matrix(tag: str) -> ExtMatrix:
    try:
        variables, premises, conclusion = _BUILTIN[tag]
    except KeyError:
        raise AlgebraError(f"unknown matrix {tag!r}; expected one of {', '.join(_BUILTIN)}") from None
    return ExtMatrix(len(conclusion), variables, premises, conclusion)


def _fresh(base: str, taken: Sequence[str]) -> str:
    if base not in taken:
        return base
    for i in itertools.count(1):
        if f"{base}{i}" not in taken:
            return f"{base}{i}"


def extend_matrix(M: ExtMatrix, kind: str) -> ExtMatrix:
    """Append a column ``(u, u | 0)`` (kind ``uu0``) or ``(v, 0 | v)`` (kind ``v0v``)."""
    if len(M.premise_rows) != 2:
        raise AlgebraError("column extensions need exactly two premise rows")
    if kind == "uu0":
        u = _fresh("u", M.variables)
        col, concl = (u, u), ZERO
    elif kind == "v0v":
        u = _fresh("v", M.variables)
        col, concl = (u, ZERO), u
    else:
        raise AlgebraError(f"unknown extension {kind!r}; expected uu0 or v0v")
    premises = tuple(row + (c,) for row, c in zip(M.premise_rows, col))
    return ExtMatrix(M.columns + 1, M.variables + (u,), premises, M.conclusion_row + (concl,))


def _check_arity(R: Relation, M: ExtMatrix):
    if R.arity != M.columns:
        raise AlgebraError(f"relation arity {R.arity} does not match {M.columns} matrix columns")


def is_closed(alg: FiniteAlgebra, R: Relation, M: ExtMatrix) -> ClosednessVerdict:
    _check_arity(R, M)
    ts = R.tuples
    for values in itertools.product(alg.carrier, repeat=len(M.variables)):
        assignment = dict(zip(M.variables, values))
        premises, conclusion = M.interpret(assignment, alg.zero)
        if all(p in ts for p in premises) and conclusion not in ts:
            return ClosednessVerdict(False, Counterexample(assignment, tuple(premises), conclusion))
    return ClosednessVerdict(True)


def m_closure(alg: FiniteAlgebra, R: Relation, M: ExtMatrix) -> Relation:
    """Least M-closed relation containing ``R``."""
    _check_arity(R, M)
    ts = set(R.tuples)
    assignments = [dict(zip(M.variables, v)) for v in itertools.product(alg.carrier, repeat=len(M.variables))]
    instances = [M.interpret(a, alg.zero) for a in assignments]
    changed = True
    while changed:
        changed = False
        for premises, conclusion in instances:
            if conclusion not in ts and all(p in ts for p in premises):
                ts.add(conclusion)
                changed = True
    return Relation(R.arity, frozenset(ts))


@functools.lru_cache(maxsize=64)
def subuniverses(
    alg: FiniteAlgebra, k: int, bound: int = DEFAULT_SWEEP_BOUND, max_relations: int = DEFAULT_MAX_RELATIONS
) -> tuple[frozenset, ...]:
    """All subuniverses of ``alg**k`` containing the zero tuple, as sets of k-tuples.

    Every subuniverse is reached from the least one by adjoining one element at a
    time, so a search over single-element extensions is exhaustive.
    """
    n = alg.size
    N = n**k
    if N > bound:
        raise BoundExceeded(f"{alg.name}^{k} has {N} elements, sweep bound is {bound}")
    P = power_algebra(alg, k, bound=max(bound, N))
    tables = []
    constants = set()
    for op in P.operations:
        if op.arity == 0:
            constants.add(op.table[0])
        else:
            tables.append(np.asarray(op.table, dtype=np.int64).reshape((N,) * op.arity))

    def close(mask: np.ndarray, new: np.ndarray) -> np.ndarray:
        mask = mask.copy()
        fresh_mask = np.zeros(N, bool)
        fresh_mask[new] = True
        fresh_mask &= ~mask
        mask |= fresh_mask
        while fresh_mask.any():
            members = np.flatnonzero(mask)
            old = np.flatnonzero(mask & ~fresh_mask)
            fr = np.flatnonzero(fresh_mask)
            fresh_mask = np.zeros(N, bool)
            for t in tables:
                m = t.ndim
                if m == 1:
                    fresh_mask[t[fr]] = True
                    continue
                # m-tuples of members whose first fresh entry sits at position pos
                for pos in range(m):
                    idx = [old] * pos + [fr] + [members] * (m - pos - 1)
                    fresh_mask[t[np.ix_(*idx)]] = True
            fresh_mask &= ~mask
            mask |= fresh_mask
        return mask

    # Each subuniverse T has a greedy generating sequence g1 < g2 < ... with
    # g_{i+1} = min(T minus closure(g1..gi)); extending S by e is kept only when
    # e is that greedy choice, so every T is produced exactly once.
    base = np.zeros(N, bool)
    start = close(base, np.array(sorted({P.zero} | constants), dtype=np.int64))
    principal = [close(start, np.array([e])) for e in range(N)]
    below = [np.arange(N) < e for e in range(N)]
    order = [start]
    queue = [(start, -1)]
    while queue:
        nxt = []
        for S, last in queue:
            for e in np.flatnonzero(~S):
                if e <= last or (principal[e] & ~S & below[e]).any():
                    continue
                T = close(S, np.array([e]))
                if np.flatnonzero(T & ~S)[0] != e:
                    continue
                if len(order) >= max_relations:
                    raise BoundExceeded(f"{alg.name}^{k} has more than {max_relations} subuniverses")
                order.append(T)
                nxt.append((T, int(e)))
        queue = nxt
    result = [frozenset(decode_tuple(int(i), n, k) for i in np.flatnonzero(S)) for S in order]
    result.sort(key=lambda s: (len(s), sorted(s)))
    return tuple(result)


def sweep_compatible_relations(
    alg: FiniteAlgebra,
    k: int,
    M: ExtMatrix,
    bound: int = DEFAULT_SWEEP_BOUND,
    max_relations: int = DEFAULT_MAX_RELATIONS,
) -> list[tuple[Relation, ClosednessVerdict]]:
    """Every compatible k-ary relation of ``alg`` with its closedness verdict for ``M``.

    Order is by relation size, then by the sorted tuple list.  Raises
    ``BoundExceeded`` when ``size**k > bound`` or the number of compatible
    relations passes ``max_relations``.
    """
    if k != M.columns:
        raise AlgebraError(f"arity {k} does not match {M.columns} matrix columns")
    out = []
    for S in subuniverses(alg, k, bound, max_relations):
        R = Relation(k, S)
        out.append((R, is_closed(alg, R, M)))
    return out
