"""Bundled example algebras."""

from __future__ import annotations

import itertools

from .algebra import FiniteAlgebra, Operation


def _binary(size, fn):
    return tuple(fn(a, b) for a in range(size) for b in range(size))


def cyclic(n: int) -> FiniteAlgebra:
    """Z_n presented with subtraction as its only operation."""
    return FiniteAlgebra(f"z{n}", n, 0, (Operation("sub", 2, _binary(n, lambda a, b: (a - b) % n)),))


def klein_four() -> FiniteAlgebra:
    # elements 0..3 are the bit pairs of Z2 x Z2
    return FiniteAlgebra("klein4", 4, 0, (Operation("sub", 2, _binary(4, lambda a, b: a ^ b)),))


def pointed_set(n: int) -> FiniteAlgebra:
    return FiniteAlgebra(f"pointed{n}", n, 0, ())


def trivial() -> FiniteAlgebra:
    return FiniteAlgebra("trivial", 1, 0, (Operation("sub", 2, (0,)),))


def symmetric3() -> FiniteAlgebra:
    """S3 with multiplication, inverse and identity; element 0 is the identity."""
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}

    def mul(a, b):
        p, q = perms[a], perms[b]
        return index[tuple(p[q[i]] for i in range(3))]

    def inv(a):
        p = perms[a]
        r = [0] * 3
        for i, v in enumerate(p):
            r[v] = i
        return index[tuple(r)]

    return FiniteAlgebra(
        "s3",
        6,
        0,
        (
            Operation("mul", 2, _binary(6, mul)),
            Operation("inv", 1, tuple(inv(a) for a in range(6))),
            Operation("e", 0, (0,)),
        ),
    )


def implication2() -> FiniteAlgebra:
    """The 2-element implication algebra; the base point is the top element 1."""
    return FiniteAlgebra("imp2", 2, 1, (Operation("imp", 2, _binary(2, lambda a, b: int(a <= b))),))


def meet_semilattice2() -> FiniteAlgebra:
    return FiniteAlgebra("meet2", 2, 0, (Operation("meet", 2, _binary(2, min)),))


CORPUS = {
    "trivial": trivial,
    "pointed2": lambda: pointed_set(2),
    "pointed3": lambda: pointed_set(3),
    "z2": lambda: cyclic(2),
    "z3": lambda: cyclic(3),
    "z4": lambda: cyclic(4),
    "klein4": klein_four,
    "s3": symmetric3,
    "imp2": implication2,
    "meet2": meet_semilattice2,
}

ABELIAN = ("z2", "z3", "z4", "klein4")


def load(name: str) -> FiniteAlgebra:
    try:
        return CORPUS[name]()
    except KeyError:
        raise KeyError(f"no bundled algebra named {name!r}; choose from {', '.join(CORPUS)}") from None


def all_algebras() -> list[FiniteAlgebra]:
    return [factory() for factory in CORPUS.values()]
