import pytest

from subtractive import corpus
from subtractive.algebra import FiniteAlgebra, Operation
from subtractive.clone import OperationTable


def binary(n, fn):
    return tuple(fn(a, b) for a in range(n) for b in range(n))


@pytest.fixture
def z2xor():
    return FiniteAlgebra("z2xor", 2, 0, (Operation("xor", 2, (0, 1, 1, 0)),))


@pytest.fixture
def z3():
    return corpus.cyclic(3)


@pytest.fixture
def z4():
    return corpus.cyclic(4)


@pytest.fixture
def s3():
    return corpus.symmetric3()


@pytest.fixture
def imp2():
    return corpus.implication2()


def sub_table(alg):
    return OperationTable(2, alg.op("sub").table)


def s3_right_division(s3):
    """x * y^-1 on S3."""
    mul, inv = s3.op("mul").table, s3.op("inv").table
    return OperationTable(2, binary(6, lambda a, b: mul[a * 6 + inv[b]]))


# acceptance summary: one line per criterion marker

_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id): acceptance criterion this test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            _criteria.setdefault(mark.args[0], {"ids": set(), "failed": 0, "passed": 0})["ids"].add(item.nodeid)


def pytest_runtest_logreport(report):
    for entry in _criteria.values():
        if report.nodeid in entry["ids"]:
            if report.failed:
                entry["failed"] += 1
            elif report.when == "call" and report.passed:
                entry["passed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_criteria, key=lambda c: int(c[1:])):
        e = _criteria[cid]
        ok = e["failed"] == 0 and e["passed"] == len(e["ids"])
        terminalreporter.write_line(f"{cid}: {'PASS' if ok else 'FAIL'} ({e['passed']}/{len(e['ids'])} tests)")
