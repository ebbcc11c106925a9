"""Assemble machine-readable analysis reports."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

from .abelian import (
    AdditivityVerdict,
    check_exchange_law,
    classify_group_law,
    decide_additivity,
    synthesize_abelian,
    unique_homomorphic_subtraction,
    verify_abelian_group,
)
from .algebra import AlgebraError, BoundExceeded, FiniteAlgebra
from .clone import (
    DEFAULT_CAP,
    OperationTable,
    SubtractionWitness,
    WitnessSearch,
    find_maltsev_witnesses,
    find_subtraction_witnesses,
    maltsev_to_subtraction,
)
from .harness import ProofTranscript, replay_proof
from .matrices import ClosednessVerdict, builtin_matrix, sweep_compatible_relations

TIMING_KEY = "wall_time_ms"


def table_dict(t: OperationTable) -> dict:
    return {"term": t.term_text(), "table": list(t.table)}


def closedness_dict(v: ClosednessVerdict) -> dict:
    out: dict[str, Any] = {"closed": v.closed}
    if v.counterexample is not None:
        ce = v.counterexample
        out["counterexample"] = {
            "assignment": dict(ce.assignment),
            "premises": [list(p) for p in ce.premises],
            "missing": list(ce.missing),
        }
    return out


def search_dict(search: WitnessSearch) -> dict:
    witnesses = []
    for w in search.witnesses:
        if isinstance(w, SubtractionWitness):
            witnesses.append(dict(table_dict(w.op), homomorphic=w.homomorphic))
        else:
            witnesses.append(table_dict(w))
    return {
        "verdict": search.verdict,
        "complete": search.complete,
        "cap": search.cap,
        "clone_size": search.clone_size,
        "note": search.note,
        "witnesses": witnesses,
    }


def additivity_dict(alg: FiniteAlgebra, v: AdditivityVerdict) -> dict:
    out: dict[str, Any] = {"verdict": v.answer, "complete": v.complete, "cap": v.cap, "note": v.note, "witness": None}
    if v.witness is not None:
        s = v.witness.op
        g = synthesize_abelian(alg, s)
        check = verify_abelian_group(alg.size, g, s)
        out["witness"] = table_dict(s)
        out["abelian_structure"] = {
            "plus": list(g.plus.table),
            "neg": list(g.neg.table),
            "zero": g.zero,
            "group_axioms": check.holds,
        }
        if alg.size <= 6:
            out["unique_homomorphic_subtraction"] = unique_homomorphic_subtraction(alg, s)
    return out


def transcript_dict(tr: ProofTranscript) -> dict:
    out: dict[str, Any] = {
        "passed": tr.passed,
        "breaking_step": tr.breaking_step,
        "R": [list(t) for t in sorted(tr.R.tuples)],
        "R_full": tr.R_full,
        "contains_generators": tr.contains_generators,
        "zero_column": tr.zero_column,
        "s_partial_checks": dict(tr.s_partial_checks),
    }
    if tr.R_prime is not None:
        out["R_prime_size"] = len(tr.R_prime)
        out["R_prime_closed"] = closedness_dict(tr.R_prime_closed)
    if tr.chain_steps is not None:
        failed = [asdict(c) for c in tr.chain_steps if not c.ok]
        out["chain"] = {"pairs": len(tr.chain_steps), "failed": failed}
    if tr.transport_checks:
        out["transport"] = {
            "endomorphisms": len(tr.transport_checks),
            "passed": sum(ok for _, ok in tr.transport_checks),
        }
    return out


def preferred_subtraction(search: WitnessSearch) -> Optional[SubtractionWitness]:
    """First homomorphic witness, else the first witness."""
    for w in search.witnesses:
        if w.homomorphic:
            return w
    return search.witnesses[0] if search.witnesses else None


@dataclass
class AnalysisReport:
    algebra: dict
    cap: int
    verdicts: dict
    proof: dict
    counterexamples: list = field(default_factory=list)
    completeness: dict = field(default_factory=dict)
    wall_time_ms: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def build_report(alg: FiniteAlgebra, cap: int = DEFAULT_CAP) -> AnalysisReport:
    t0 = time.perf_counter()
    sub = find_subtraction_witnesses(alg, cap)
    mal = find_maltsev_witnesses(alg, cap)
    add = decide_additivity(alg, cap)

    verdicts = {"subtractive": search_dict(sub), "maltsev": search_dict(mal), "additive": additivity_dict(alg, add)}
    laws = []
    for w in sub.witnesses:
        law = check_exchange_law(alg, w.op)
        laws.append(
            {
                "term": w.op.term_text(),
                "class": classify_group_law(alg, w.op),
                "exchange_law": law.holds,
                "exchange_counterexample": list(law.counterexample) if law.counterexample else None,
            }
        )
    verdicts["subtractive"]["group_laws"] = laws
    derived = []
    for p in mal.witnesses:
        s = maltsev_to_subtraction(p, alg)
        derived.append(dict(table_dict(s), in_subtraction_witnesses=any(w.op.table == s.table for w in sub)))
    verdicts["maltsev"]["derived_subtractions"] = derived

    tr = replay_proof(alg, preferred_subtraction(sub))
    counterexamples = []
    matrix_checks = {}
    for tag in ("diag", "vars"):
        try:
            swept = sweep_compatible_relations(alg, 2, builtin_matrix(tag))
        except BoundExceeded as exc:
            matrix_checks[tag] = {"skipped": str(exc)}
            continue
        bad = [(R, v) for R, v in swept if not v.closed]
        matrix_checks[tag] = {"relations": len(swept), "not_closed": len(bad)}
        if bad:
            R, v = bad[0]
            counterexamples.append(
                {"matrix": tag, "relation": [list(t) for t in sorted(R.tuples)], **closedness_dict(v)}
            )
    verdicts["matrix_sweep_binary"] = matrix_checks

    return AnalysisReport(
        algebra={
            "name": alg.name,
            "size": alg.size,
            "zero": alg.zero,
            "signature": [[name, arity] for name, arity in alg.signature],
        },
        cap=cap,
        verdicts=verdicts,
        proof=transcript_dict(tr),
        counterexamples=counterexamples,
        completeness={
            "subtraction_clone": sub.complete,
            "maltsev_clone": mal.complete,
            "additivity": add.complete,
            "unknown_cap": cap if "unknown" in (sub.verdict, mal.verdict, add.answer) else None,
        },
        wall_time_ms=round((time.perf_counter() - t0) * 1000, 3),
    )
