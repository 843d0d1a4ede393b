"""Bug cases, technique specs and corpus evaluation reports."""

from __future__ import annotations

import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import metrics
from .errors import FormulaUnavailable, InputError
from .hybrid import DEFAULT_FORMULA, DEFAULT_N, HybridConfig, hybrid_ranking
from .sbfl import get_formula, rank_spectrum
from .slicing import DependenceGraph, SliceRequest, approx_dynamic_slice, parse_graph, slice_ranking
from .spectra import CoverageSpectrum, StatementId, parse_spectrum

ERROR_TYPES = ("REAL", "ARTIFICIAL")


@dataclass(frozen=True)
class Technique:
    kind: str  # "formula" | "slice" | "hybrid"
    formula: str | None = None
    n: int | None = None

    @property
    def label(self) -> str:
        if self.kind == "formula":
            return self.formula
        if self.kind == "slice":
            return "slice"
        return f"hybrid-{self.n}-{self.formula}"


_HYBRID = re.compile(r"hybrid(?:[-:](\d+))?(?:[-:](.+))?$", re.IGNORECASE)


def parse_technique(spec: str, formula: str | None = None, n: int | None = None) -> Technique:
    """Parse a technique spec.

    Accepted: a formula name, ``formula`` (uses `formula`), ``slice``,
    ``hybrid``, ``hybrid-<N>`` and ``hybrid-<N>-<formula>``. Missing hybrid
    parts fall back to `formula`/`n`, then to the built-in defaults.
    """
    text = spec.strip()
    low = text.lower()
    if low == "slice":
        return Technique("slice")
    if low == "formula":
        return Technique("formula", get_formula(formula or DEFAULT_FORMULA).name)
    m = _HYBRID.match(text)
    if m:
        hn = int(m.group(1)) if m.group(1) is not None else (n if n is not None else DEFAULT_N)
        hf = m.group(2) or formula or DEFAULT_FORMULA
        HybridConfig(hn, hf)
        return Technique("hybrid", get_formula(hf).name, hn)
    return Technique("formula", get_formula(text).name)


@dataclass(frozen=True)
class BugCase:
    id: str
    spectrum: CoverageSpectrum
    graph: DependenceGraph | None
    criterion: StatementId | None
    fault_groups: tuple
    failing_test: str | None = None
    error_type: str | None = None

    @property
    def faulty(self) -> frozenset:
        return frozenset(s for g in self.fault_groups for s in g)

    @property
    def fault_count(self) -> int:
        return len(self.fault_groups)

    def slice_request(self) -> SliceRequest:
        if self.graph is None or self.criterion is None:
            raise InputError(f"case {self.id!r}: slicing needs a graph and a criterion")
        self.spectrum.require_failure()
        if self.failing_test is not None:
            run = self.spectrum.test(self.failing_test)
            if run.verdict.value != "FAIL":
                raise InputError(f"test {self.failing_test!r} is not a failing test")
        else:
            run = self.spectrum.failing_tests()[0]
        executed = run.covered & self.graph.nodes
        return SliceRequest(self.criterion, frozenset(executed), self.faulty)


def run_technique(tech: Technique, case: BugCase):
    """Return the ranking `tech` produces for `case`."""
    if tech.kind == "formula":
        case.spectrum.require_failure()
        return rank_spectrum(tech.formula, case.spectrum)
    req = case.slice_request()
    if tech.kind == "slice":
        return slice_ranking(approx_dynamic_slice(case.graph, req), case.spectrum.statements)
    return hybrid_ranking(HybridConfig(tech.n, tech.formula), case.spectrum, case.graph, req)


def _ids(values, where: str) -> list:
    if isinstance(values, str):
        values = [v for v in values.split(",") if v.strip()]
    if not isinstance(values, list):
        raise InputError(f"{where}: expected a list of statement ids")
    return [StatementId.parse(v) for v in values]


def load_case(entry: dict, base: Path) -> BugCase:
    if not isinstance(entry, dict) or "id" not in entry:
        raise InputError("each case needs an 'id'")
    cid = str(entry["id"])
    if "spectrum" not in entry:
        raise InputError(f"case {cid!r}: missing 'spectrum'")
    spectrum = parse_spectrum(base / entry["spectrum"])
    graph = parse_graph(base / entry["graph"]) if entry.get("graph") else None
    criterion = StatementId.parse(entry["criterion"]) if entry.get("criterion") else None
    if "fault_groups" in entry:
        groups = tuple(frozenset(_ids(g, f"case {cid!r} fault_groups")) for g in entry["fault_groups"])
    elif "faulty" in entry:
        groups = (frozenset(_ids(entry["faulty"], f"case {cid!r} faulty")),)
    else:
        raise InputError(f"case {cid!r}: needs 'faulty' or 'fault_groups'")
    if not groups or any(not g for g in groups):
        raise InputError(f"case {cid!r}: fault groups must be non-empty")
    for s in (s for g in groups for s in g):
        if s not in spectrum:
            raise InputError(f"case {cid!r}: faulty statement {s} not in the spectrum universe")
    error_type = entry.get("error_type")
    if error_type is not None:
        error_type = str(error_type).upper()
        if error_type not in ERROR_TYPES:
            raise InputError(f"case {cid!r}: error_type must be REAL or ARTIFICIAL")
    return BugCase(cid, spectrum, graph, criterion, groups, entry.get("failing_test"), error_type)


@dataclass
class Manifest:
    cases: list  # list of (case id, dict entry)
    techniques: list
    base: Path
    defaults: dict = field(default_factory=dict)


def load_manifest(path, formula: str | None = None, n: int | None = None) -> Manifest:
    """Read a JSON manifest. Flag values override manifest defaults."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed manifest: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError("manifest must be a JSON object")
    defaults = dict(doc.get("defaults") or {})
    if formula is not None:
        defaults["formula"] = formula
    if n is not None:
        defaults["n"] = n
    specs = doc.get("techniques") or []
    if not specs:
        raise InputError("manifest lists no techniques")
    techniques = [parse_technique(s, defaults.get("formula"), defaults.get("n")) for s in specs]
    labels = [t.label for t in techniques]
    if len(set(labels)) != len(labels):
        raise InputError(f"duplicate technique in manifest: {labels}")
    cases = doc.get("cases") or []
    if not cases:
        raise InputError("manifest lists no cases")
    ids = [str(c.get("id")) if isinstance(c, dict) else None for c in cases]
    if None in ids or len(set(ids)) != len(ids):
        raise InputError("case ids must be present and unique")
    return Manifest(list(zip(ids, cases)), techniques, path.parent, defaults)


def evaluate_case(cid: str, entry: dict, techniques: list, base: Path) -> list:
    try:
        case = load_case(entry, base)
    except InputError as exc:
        return [_failure(cid, t, None, None, f"input error: {exc}") for t in techniques]
    records = []
    universe = case.spectrum.statements
    for tech in techniques:
        try:
            ranking = run_technique(tech, case)
            score = metrics.score_from_ranking(ranking, case.faulty, universe)
        except (InputError, FormulaUnavailable) as exc:
            records.append(_failure(cid, tech, case.error_type, case.fault_count, str(exc)))
            continue
        rec = {
            "bug_id": cid,
            "technique": tech.label,
            "status": "ok",
            "inspected": score.inspected,
            "universe": score.universe,
            "score": score.value,
            "error_type": case.error_type,
            "fault_count": case.fault_count,
        }
        if case.fault_count > 1:
            expense, mult = metrics.expense_and_mult_score(ranking, case.fault_groups, universe)
            rec["expense"] = expense
            rec["score_mult"] = mult
        records.append(rec)
    return records


def _failure(cid, tech, error_type, fault_count, message) -> dict:
    return {"bug_id": cid, "technique": tech.label, "status": "error", "error": message,
            "error_type": error_type, "fault_count": fault_count}


def _mean(values):
    return sum(values) / len(values) if values else None


def _aggregate(records: list) -> dict:
    ok = [r for r in records if r["status"] == "ok"]
    out = {
        "cases": len(records),
        "ok": len(ok),
        "failed": len(records) - len(ok),
        "mean_score": _mean([r["score"] for r in ok]),
        "by_error_type": {},
        "by_fault_count": {},
        "cumulative": [list(p) for p in metrics.cumulative_frequency([r["inspected"] for r in ok])] if ok else [],
    }
    for et in ERROR_TYPES:
        vals = [r["score"] for r in ok if r["error_type"] == et]
        if vals:
            out["by_error_type"][et] = {"n": len(vals), "mean_score": _mean(vals)}
    for stratum, keep in (("single", lambda c: c == 1), ("multiple", lambda c: c > 1)):
        vals = [r for r in ok if keep(r["fault_count"])]
        if vals:
            block = {"n": len(vals), "mean_score": _mean([r["score"] for r in vals])}
            if stratum == "multiple":
                block["mean_expense"] = _mean([r["expense"] for r in vals])
                block["mean_score_mult"] = _mean([r["score_mult"] for r in vals])
            out["by_fault_count"][stratum] = block
    return out


def compare_records(records: list, a: str, b: str) -> dict:
    """Compare two techniques over the bugs both localized successfully."""
    labels = {r["technique"] for r in records}
    for t in (a, b):
        if t not in labels:
            raise InputError(f"technique {t!r} not in report (have: {', '.join(sorted(labels))})")
    by_a = {r["bug_id"]: r for r in records if r["technique"] == a and r["status"] == "ok"}
    by_b = {r["bug_id"]: r for r in records if r["technique"] == b and r["status"] == "ok"}
    common = [bid for bid in by_a if bid in by_b]
    if not common:
        raise InputError(f"no bug localized by both {a!r} and {b!r}")
    st = metrics.compare_inspected(
        [by_a[i]["inspected"] for i in common], [by_b[i]["inspected"] for i in common],
        [by_a[i]["score"] for i in common], [by_b[i]["score"] for i in common],
    )
    return {"a": a, "b": b, "bugs": len(common), "wins_a": st.wins_a, "wins_b": st.wins_b,
            "ties": st.ties, "odds_ratio": st.odds_ratio, "u": st.u, "p_value": st.u_p_value}


def evaluate(manifest: Manifest, jobs: int = 1) -> dict:
    def work(item):
        cid, entry = item
        return evaluate_case(cid, entry, manifest.techniques, manifest.base)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_case = list(pool.map(work, manifest.cases))
    else:
        per_case = [work(item) for item in manifest.cases]
    records = [r for recs in per_case for r in recs]

    labels = [t.label for t in manifest.techniques]
    aggregates = {lab: _aggregate([r for r in records if r["technique"] == lab]) for lab in labels}
    comparisons = []
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            try:
                comparisons.append(compare_records(records, a, b))
            except InputError as exc:
                comparisons.append({"a": a, "b": b, "error": str(exc)})
    return {
        "techniques": labels,
        "records": records,
        "aggregates": aggregates,
        "comparisons": comparisons,
    }
