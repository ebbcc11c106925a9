"""Acceptance gate.  Every test carries a ``criterion`` marker; conftest prints
one PASS/FAIL line per criterion at the end of the run."""

import io
import json
import random

import pytest

from subtractive import corpus
from subtractive.abelian import (
    check_exchange_law,
    decide_additivity,
    synthesize_abelian,
    unique_homomorphic_subtraction,
    verify_abelian_group,
)
from subtractive.algebra import Relation
from subtractive.cli import run_command
from subtractive.clone import (
    find_maltsev_witnesses,
    find_subtraction_witnesses,
    is_homomorphic_operation,
    is_subtraction,
    maltsev_to_subtraction,
)
from subtractive.harness import STEPS, replay_proof
from subtractive.matrices import builtin_matrix, extend_matrix, is_closed, m_closure, sweep_compatible_relations
from subtractive.report import TIMING_KEY, preferred_subtraction

from conftest import binary
from oracles import oracle_subtraction_tables

ABELIAN = ["z2", "z3", "z4", "klein4"]
SUBTRACTIVE = ["z2", "z3", "z4", "klein4", "s3", "imp2"]
GROUP_ADDITION = {
    "z2": binary(2, lambda a, b: (a + b) % 2),
    "z3": binary(3, lambda a, b: (a + b) % 3),
    "z4": binary(4, lambda a, b: (a + b) % 4),
    "klein4": binary(4, lambda a, b: a ^ b),
}


def cli(*argv):
    out = io.StringIO()
    code = run_command(list(argv), out=out)
    return code, out.getvalue()


def cli_json(*argv):
    code, text = cli("--format", "json", *argv)
    return code, json.loads(text)


@pytest.mark.criterion("A1")
@pytest.mark.parametrize("name", ABELIAN)
def test_a1_abelian_algebras_are_subtractive(name):
    code, doc = cli_json("subtractive", name)
    assert code == 0
    assert doc["verdict"] == "yes" and doc["complete"]
    assert doc["witnesses"] and doc["witnesses"][0]["homomorphic"]


@pytest.mark.criterion("A2")
@pytest.mark.parametrize("name", ["pointed2", "pointed3", "meet2"])
def test_a2_non_subtractive_matches_oracle(name):
    code, doc = cli_json("subtractive", name)
    assert code == 1
    assert doc["verdict"] == "no" and doc["complete"]
    assert oracle_subtraction_tables(corpus.load(name)) == []


@pytest.mark.criterion("A2")
def test_a2_implication_algebra_subtractive_not_maltsev():
    code, doc = cli_json("subtractive", "imp2")
    assert code == 0
    tables = [w["table"] for w in doc["witnesses"]]
    # s(x, y) = y -> x with 1 as the point
    assert [1, 0, 1, 1] in tables
    assert sorted(map(list, oracle_subtraction_tables(corpus.implication2()))) == sorted(tables)
    code, doc = cli_json("maltsev", "imp2")
    assert code == 1
    assert doc["verdict"] == "no" and doc["complete"]


@pytest.mark.criterion("A3")
@pytest.mark.parametrize("name", ABELIAN)
def test_a3_additive_yes_with_original_group(name):
    code, doc = cli_json("additive", name)
    assert code == 0 and doc["verdict"] == "yes"
    alg = corpus.load(name)
    v = decide_additivity(alg)
    g = synthesize_abelian(alg, v.witness.op)
    assert verify_abelian_group(alg.size, g, v.witness.op).holds
    assert g.plus.table == GROUP_ADDITION[name]
    assert g.neg.table == tuple((-a) % alg.size if name != "klein4" else a for a in alg.carrier)
    assert doc["abelian_structure"]["plus"] == list(GROUP_ADDITION[name])


@pytest.mark.criterion("A3")
@pytest.mark.parametrize("name", ["s3", "imp2"])
def test_a3_additive_no(name):
    code, doc = cli_json("additive", name)
    assert code == 1 and doc["verdict"] == "no"


@pytest.mark.criterion("A4")
@pytest.mark.parametrize("name", list(corpus.CORPUS))
def test_a4_exchange_law_iff_homomorphism(name):
    alg = corpus.load(name)
    for w in find_subtraction_witnesses(alg):
        law = check_exchange_law(alg, w.op)
        assert law.holds == is_homomorphic_operation(alg.reduct(w.op.table), w.op)
        assert law.holds == w.homomorphic


@pytest.mark.criterion("A5")
@pytest.mark.parametrize("name", SUBTRACTIVE)
def test_a5_replay_passes(name):
    alg = corpus.load(name)
    tr = replay_proof(alg, preferred_subtraction(find_subtraction_witnesses(alg)))
    assert tr.passed, tr.breaking_step
    assert tr.R_full and tr.R_prime_closed.closed
    assert len(tr.chain_steps) == alg.size**2 and all(c.ok for c in tr.chain_steps)


@pytest.mark.criterion("A5")
@pytest.mark.parametrize("name", ["pointed2", "pointed3"])
def test_a5_replay_breaks_on_pointed_sets(name):
    alg = corpus.load(name)
    tr = replay_proof(alg, preferred_subtraction(find_subtraction_witnesses(alg)))
    assert tr.breaking_step == STEPS[0]
    assert not tr.R_full


@pytest.mark.criterion("A6")
@pytest.mark.parametrize("name", SUBTRACTIVE)
@pytest.mark.parametrize(
    "k, tag, ext", [(2, "diag", None), (2, "vars", None), (3, "vars", "uu0"), (3, "vars", "v0v")]
)
def test_a6_sweeps_all_closed(name, k, tag, ext):
    alg = corpus.load(name)
    M = builtin_matrix(tag)
    if ext:
        M = extend_matrix(M, ext)
    swept = sweep_compatible_relations(alg, k, M, bound=alg.size**k)
    assert swept
    assert [R for R, v in swept if not v.closed] == []


@pytest.mark.criterion("A6")
def test_a6_pointed_set_counterexample():
    code, doc = cli_json("sweep", "pointed2", "--arity", "2", "--matrix", "diag")
    assert code == 1
    bad = [r for r in doc["relations"] if not r["closed"]]
    assert [r["relation"] for r in bad] == [[[0, 0], [1, 0], [1, 1]]]
    assert bad[0]["counterexample"]["assignment"] == {"x": 1}
    assert bad[0]["counterexample"]["missing"] == [0, 1]


def _closure_laws(alg, R, M):
    C = m_closure(alg, R, M)
    assert R.tuples <= C.tuples
    assert m_closure(alg, C, M) == C
    assert is_closed(alg, C, M).closed
    return C


@pytest.mark.criterion("A7")
@pytest.mark.parametrize("name", [n for n in corpus.CORPUS if corpus.load(n).size == 2])
@pytest.mark.parametrize("tag", ["diag", "vars", "proof3"])
def test_a7_closure_laws_exhaustive(name, tag):
    alg = corpus.load(name)
    M = builtin_matrix(tag)
    universe = sorted(Relation.full(2, M.columns).tuples)
    subsets = [frozenset(t for i, t in enumerate(universe) if mask >> i & 1) for mask in range(2 ** len(universe))]
    closures = {}
    for S in subsets:
        closures[S] = _closure_laws(alg, Relation(M.columns, S), M)
    for S in subsets:
        for T in subsets:
            if S <= T:
                assert closures[S].tuples <= closures[T].tuples


@pytest.mark.criterion("A7")
@pytest.mark.parametrize("name", [n for n in corpus.CORPUS if corpus.load(n).size in (3, 4)])
@pytest.mark.parametrize("tag", ["diag", "vars"])
def test_a7_closure_laws_random(name, tag):
    alg = corpus.load(name)
    M = builtin_matrix(tag)
    full = sorted(Relation.full(alg.size, 2).tuples)
    rng = random.Random(f"{name}-{tag}")
    for _ in range(200):
        S = frozenset(t for t in full if rng.random() < 0.3)
        extra = frozenset(t for t in full if rng.random() < 0.2)
        C = _closure_laws(alg, Relation(2, S), M)
        assert C.tuples <= m_closure(alg, Relation(2, S | extra), M).tuples


@pytest.mark.criterion("A8")
@pytest.mark.parametrize("name", ABELIAN)
def test_a8_unique_homomorphic_subtraction(name):
    alg = corpus.load(name)
    v = decide_additivity(alg)
    assert unique_homomorphic_subtraction(alg, v.witness.op)


@pytest.mark.criterion("A9")
@pytest.mark.parametrize("name", list(corpus.CORPUS))
def test_a9_maltsev_gives_listed_subtraction(name):
    alg = corpus.load(name)
    mal = find_maltsev_witnesses(alg)
    subs = {w.op.table for w in find_subtraction_witnesses(alg)}
    for p in mal:
        s = maltsev_to_subtraction(p, alg)
        assert is_subtraction(alg, s)
        assert s.table in subs


@pytest.mark.criterion("A10")
@pytest.mark.parametrize("name", list(corpus.CORPUS))
def test_a10_report_deterministic(name):
    runs = []
    for _ in range(2):
        code, doc = cli_json("report", name)
        assert code == 0
        doc.pop(TIMING_KEY)
        runs.append(json.dumps(doc, indent=2, sort_keys=True).encode())
    assert runs[0] == runs[1]
