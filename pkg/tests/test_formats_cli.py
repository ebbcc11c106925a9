import io
import json

import pytest

from subtractive import corpus
from subtractive.algebra import Relation, parse_term, eval_term
from subtractive.cli import run_command
from subtractive.formats import (
    FormatError,
    algebra_to_dict,
    parse_algebra_file,
    parse_relation_file,
)
from subtractive.report import TIMING_KEY

Z2_DOC = {"size": 2, "zero": 0, "operations": [{"name": "sub", "arity": 2, "table": [0, 1, 1, 0]}]}


@pytest.fixture
def write(tmp_path):
    def _write(name, doc):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)

    return _write


def run(argv):
    buf = io.StringIO()
    code = run_command(argv, out=buf)
    return code, buf.getvalue()


def test_parse_algebra(write):
    alg = parse_algebra_file(write("z2.json", Z2_DOC))
    assert alg.name == "z2" and alg.size == 2 and alg.zero == 0
    assert alg.op("sub").table == (0, 1, 1, 0)


@pytest.mark.parametrize(
    "doc, message",
    [
        ({**Z2_DOC, "zero": 2}, "zero out of range"),
        ({**Z2_DOC, "operations": [{"name": "sub", "arity": 2, "table": [0, 1, 1]}]}, "expected 4 entries"),
        ({**Z2_DOC, "operations": [{"name": "sub", "arity": 2, "table": [0, 1, 1, 7]}]}, r"table\[3\].*out of range"),
        ({"zero": 0}, "missing field 'size'"),
        ("{ not json", "malformed JSON"),
    ],
)
def test_parse_algebra_errors(write, doc, message):
    with pytest.raises(FormatError, match=message):
        parse_algebra_file(write("bad.json", doc))


def test_parse_relation(write):
    R = parse_relation_file(write("r.json", {"arity": 2, "tuples": [[0, 0], [1, 1], [1, 0]]}), 2)
    assert R == Relation.of([(0, 0), (1, 1), (1, 0)])
    with pytest.warns(UserWarning, match="duplicate"):
        R = parse_relation_file(write("d.json", {"arity": 2, "tuples": [[0, 0], [0, 0]]}), 2)
    assert len(R) == 1
    with pytest.raises(FormatError, match="out of range"):
        parse_relation_file(write("o.json", {"arity": 2, "tuples": [[0, 5]]}), 2)
    with pytest.raises(FormatError, match="ragged"):
        parse_relation_file(write("g.json", {"arity": 2, "tuples": [[0, 0], [1]]}), 2)


def test_algebra_dict_round_trip(write):
    for alg in corpus.all_algebras():
        again = parse_algebra_file(write(f"{alg.name}.json", algebra_to_dict(alg)))
        assert again == alg


def test_cli_subtractive(write):
    code, out = run(["subtractive", write("z2.json", Z2_DOC)])
    assert code == 0 and "sub(x0,x1)" in out
    code, out = run(["subtractive", "pointed3"])
    assert code == 1
    assert "clone = {0, x0, x1}; search complete" in out


def test_cli_closed(write):
    z2 = write("z2.json", Z2_DOC)
    rel = write("r.json", {"arity": 2, "tuples": [[0, 0], [1, 1], [1, 0]]})
    code, out = run(["closed", z2, "--relation", rel, "--matrix", "diag"])
    assert code == 1 and "x=1 missing (0,1)" in out
    code, out = run(["closed", z2, "--relation", rel, "--matrix", "diag", "--format", "json"])
    payload = json.loads(out)
    assert payload["counterexample"]["assignment"] == {"x": 1}
    assert payload["counterexample"]["missing"] == [0, 1]


def test_cli_closure_and_extend(write):
    rel = write("r.json", {"arity": 2, "tuples": [[0, 0], [1, 1], [1, 0]]})
    code, out = run(["closure", "z2", "--relation", rel, "--matrix", "diag", "--format", "json"])
    assert code == 0 and json.loads(out)["tuples"] == [[0, 0], [0, 1], [1, 0], [1, 1]]
    rel3 = write("r3.json", {"arity": 3, "tuples": [[0, 0, 0]]})
    code, _ = run(["closed", "z2", "--relation", rel3, "--matrix", "vars", "--extend", "uu0"])
    assert code == 0
    code, _ = run(["closed", "z2", "--relation", rel3, "--matrix", "vars", "--extend", "uu0", "--extend", "v0v"])
    assert code == 2  # arity 3 relation against a 4-column matrix


def test_cli_sweep_and_bounds():
    code, out = run(["sweep", "pointed2", "--arity", "2", "--matrix", "diag"])
    assert code == 1 and "x=1 missing (0,1)" in out
    code, _ = run(["sweep", "z2", "--arity", "3", "--matrix", "vars", "--extend", "v0v"])
    assert code == 0
    code, _ = run(["sweep", "s3", "--arity", "4", "--matrix", "vars", "--extend", "uu0", "--extend", "v0v"])
    assert code == 3


def test_cli_usage_errors(write):
    assert run(["subtractive", "no-such-algebra"])[0] == 2
    assert run(["frobnicate"])[0] == 2
    assert run([])[0] == 2
    assert run(["subtractive", write("bad.json", {"size": 2, "zero": 2})])[0] == 2


def test_cli_cap_unknown():
    code, out = run(["--cap", "5", "subtractive", "s3", "--format", "json"])
    assert code == 3
    payload = json.loads(out)
    assert payload["verdict"] == "unknown" and payload["cap"] == 5 and "cap 5" in payload["note"]
    code, out = run(["--cap", "40", "subtractive", "s3"])
    assert code == 0  # the restricted search still finds a witness
    code, out = run(["additive", "s3", "--cap", "5"])
    assert code == 1


def test_cli_corpus_listing():
    code, out = run(["--corpus"])
    assert code == 0
    for name in corpus.CORPUS:
        assert name in out


EXPECTED_EXITS = {
    "trivial": (0, 0, 0),
    "pointed2": (1, 1, 1),
    "pointed3": (1, 1, 1),
    "z2": (0, 0, 0),
    "z3": (0, 0, 0),
    "z4": (0, 0, 0),
    "klein4": (0, 0, 0),
    "s3": (0, 0, 1),
    "imp2": (0, 1, 1),
    "meet2": (1, 1, 1),
}


@pytest.mark.parametrize("name", list(corpus.CORPUS))
def test_exit_codes_match_verdicts(name):
    codes = tuple(run([cmd, name])[0] for cmd in ("subtractive", "maltsev", "additive"))
    assert codes == EXPECTED_EXITS[name]
    replay = run(["replay", name])[0]
    assert replay == (0 if codes[0] == 0 else 1)


@pytest.mark.parametrize("name", ["z3", "imp2", "pointed2", "s3"])
def test_json_report_round_trip(name):
    from subtractive.clone import find_subtraction_witnesses

    code, out = run(["report", name, "--format", "json"])
    assert code == 0
    report = json.loads(out)
    alg = corpus.load(name)
    again = find_subtraction_witnesses(alg, report["cap"])
    assert report["verdicts"]["subtractive"]["verdict"] == again.verdict
    assert [w["table"] for w in report["verdicts"]["subtractive"]["witnesses"]] == [list(w.op.table) for w in again]
    n = alg.size
    for w in report["verdicts"]["subtractive"]["witnesses"]:
        term = parse_term(w["term"])
        assert [eval_term(alg, term, (a, b)) for a in range(n) for b in range(n)] == w["table"]
    assert TIMING_KEY in report


def test_report_figures(tmp_path):
    code, out = run(["report", "z3", "--figures", str(tmp_path)])
    assert code == 0
    pngs = sorted(p.name for p in tmp_path.glob("*.png"))
    assert pngs == ["z3_relation_R.png", "z3_tables.png"]
    for p in tmp_path.glob("*.png"):
        assert p.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
