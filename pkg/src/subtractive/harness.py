"""Element-wise replay of the argument that subtractive + cosubtractive gives additive.

For a pointed algebra ``A`` the relation ``R`` is the image of ``A + A`` in
``A x A``, i.e. the subalgebra generated by the pairs ``(a, a)`` and
``(a, 0)``.  Given a subtraction operation ``s``, the replay checks that
``R`` is all of ``A x A`` by way of the ternary relation

    R' = {(a, b, c) : (b, c) in R and (a, s(b, c)) in R}

and its closedness under the matrix ``proof3``.  The coproduct itself is never
built; surjectivity of ``A + A -> A x A`` is recorded as ``R = A x A``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .algebra import (
    AlgebraError,
    FiniteAlgebra,
    Relation,
    decode_tuple,
    encode_tuple,
    is_homomorphism,
    power_algebra,
    subalgebra_closure,
)
from .clone import OperationTable, SubtractionWitness, is_subtraction
from .matrices import ClosednessVerdict, builtin_matrix, is_closed

STEPS = ("R = AxA", "s(a,a)=0, s(a,0)=a", "R' closed under proof3", "implication chain", "transport")
MAX_ENDOMORPHISM_MAPS = 4096


@dataclass(frozen=True)
class ChainStep:
    a: int
    b: int
    abb: bool  # (a, b, b) in R'
    zzb: bool  # (0, 0, b) in R'
    ab0: bool  # (a, b, 0) in R'
    ab: bool  # (a, s(b, 0)) = (a, b) in R

    @property
    def ok(self) -> bool:
        return self.abb and self.zzb and self.ab0 and self.ab


@dataclass
class ProofTranscript:
    R: Relation
    R_full: bool
    contains_generators: bool
    zero_column: bool  # (0, a) in R for every a
    s_partial_checks: dict = field(default_factory=dict)
    R_prime: Optional[Relation] = None
    R_prime_closed: Optional[ClosednessVerdict] = None
    chain_steps: Optional[list[ChainStep]] = None
    transport_checks: list = field(default_factory=list)
    breaking_step: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.breaking_step is None


def compute_R(alg: FiniteAlgebra) -> Relation:
    n = alg.size
    P = power_algebra(alg, 2)
    gens = {encode_tuple((a, a), n) for a in alg.carrier} | {encode_tuple((a, alg.zero), n) for a in alg.carrier}
    closure = subalgebra_closure(P, gens)
    return Relation(2, frozenset(decode_tuple(i, n, 2) for i in closure))


def compute_R_prime(alg: FiniteAlgebra, R: Relation, s: OperationTable) -> Relation:
    if R.arity != 2 or s.arity != 2:
        raise AlgebraError("R and s must both be binary")
    ts = R.tuples
    out = set()
    for a, b, c in itertools.product(alg.carrier, repeat=3):
        if (b, c) in ts and (a, s(b, c)) in ts:
            out.add((a, b, c))
    return Relation(3, frozenset(out))


def replay_proof(alg: FiniteAlgebra, s: Optional[SubtractionWitness | OperationTable]) -> ProofTranscript:
    """Recompute every step of the argument; ``s=None`` records the missing subtraction."""
    z = alg.zero
    A = alg.carrier
    R = compute_R(alg)
    ts = R.tuples
    full = len(ts) == alg.size**2
    tr = ProofTranscript(
        R=R,
        R_full=full,
        contains_generators=all((a, a) in ts and (a, z) in ts for a in A),
        zero_column=all((z, a) in ts for a in A),
    )
    if s is None:
        tr.breaking_step = STEPS[0] if not full else "no subtraction term"
        return tr
    op = s.op if isinstance(s, SubtractionWitness) else s
    tr.s_partial_checks = {
        "s(a,a)=0": all(op(a, a) == z for a in A if (a, a) in ts),
        "s(a,0)=a": all(op(a, z) == a for a in A if (a, z) in ts),
    }
    tr.R_prime = compute_R_prime(alg, R, op)
    tr.R_prime_closed = is_closed(alg, tr.R_prime, builtin_matrix("proof3"))
    if tr.R_prime_closed.closed:
        rp = tr.R_prime.tuples
        tr.chain_steps = [
            ChainStep(a, b, (a, b, b) in rp, (z, z, b) in rp, (a, b, z) in rp, (a, op(b, z)) in ts)
            for a in A
            for b in A
        ]
    if not all(tr.s_partial_checks.values()):
        tr.breaking_step = STEPS[1]
    elif not tr.R_prime_closed.closed:
        tr.breaking_step = STEPS[2]
    elif not all(c.ok for c in tr.chain_steps):
        tr.breaking_step = STEPS[3]
    elif not full:
        tr.breaking_step = STEPS[0]
    if is_subtraction(alg, op) and alg.size**alg.size <= MAX_ENDOMORPHISM_MAPS:
        for f in endomorphisms(alg):
            tr.transport_checks.append((f, transport_check(alg, alg, f, op, op)))
        if tr.breaking_step is None and not all(ok for _, ok in tr.transport_checks):
            tr.breaking_step = STEPS[4]
    return tr


def endomorphisms(alg: FiniteAlgebra) -> list[tuple[int, ...]]:
    return [f for f in itertools.product(alg.carrier, repeat=alg.size) if is_homomorphism(alg, alg, f)]


def transport_check(
    algA: FiniteAlgebra,
    algB: FiniteAlgebra,
    f: Sequence[int],
    sA: OperationTable,
    sB: OperationTable,
) -> bool:
    """``f(sA(a, b)) = sB(f(a), f(b))`` for all ``a, b``."""
    if not is_homomorphism(algA, algB, f):
        raise AlgebraError("map is not a homomorphism")
    if not (is_subtraction(algA, sA) and is_subtraction(algB, sB)):
        raise AlgebraError("transport needs subtraction operations on both sides")
    return all(f[sA(a, b)] == sB(f[a], f[b]) for a in algA.carrier for b in algA.carrier)
