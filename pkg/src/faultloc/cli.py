"""Command-line front end.

    faultloc localize --spectrum S [--graph G --criterion C] --technique T ...
    faultloc evaluate MANIFEST [--formula F] [--n N] [--format json|tsv]
    faultloc compare REPORT TECH_A TECH_B
    faultloc formats

Exit codes: 0 success, 2 input error, 3 formula unavailable.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import metrics
from .errors import FormulaUnavailable, InputError
from .evaluation import BugCase, compare_records, evaluate, load_manifest, parse_technique, run_technique
from .sbfl import score_spectrum
from .slicing import approx_dynamic_slice, parse_graph
from .spectra import StatementId, parse_spectrum

EXIT_OK, EXIT_INPUT, EXIT_UNAVAILABLE = 0, 2, 3

FORMATS_HELP = """\
Spectrum file (UTF-8 text; '#' starts a comment):
  statements <unit>:<line>[,<unit>:<line>...]
  test <id> <PASS|FAIL> [<unit>:<line>[,...]]
  A .json file is read as {"statements": [ids], "tests": [{"id", "verdict", "covered": [ids]}]}.

Dependence graph (DOT subset; edge a -> b means "a depends on b"):
  digraph name {
    "<unit>:<line>";
    "<unit>:<line>" -> "<unit>:<line>" [kind="data"|"control"];
  }
  A .json file is read as {"nodes": [ids], "edges": [{"from", "to", "kind"}]}.
  Every node must be declared; control self-loops are rejected.

Evaluation manifest (JSON, paths relative to the manifest):
  {"defaults": {"formula": "Kulczynski2", "n": 2},
   "techniques": ["tarantula", "slice", "hybrid-2"],
   "cases": [{"id", "spectrum", "graph", "criterion", "faulty": [ids] | "fault_groups": [[ids], ...],
              "failing_test"?, "error_type"?: "REAL"|"ARTIFICIAL"}]}

Technique specs: <formula>, formula, slice, hybrid, hybrid-<N>, hybrid-<N>-<formula>.

Ranking report (TSV): rank, unit, line, score.
"""


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, tuple):
        return ",".join(_fmt(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _jsonable(value):
    if isinstance(value, tuple):
        return list(value)
    return value


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_localize(args) -> int:
    spectrum = parse_spectrum(args.spectrum)
    tech = parse_technique(args.technique, args.formula, args.n)
    graph = parse_graph(args.graph) if args.graph else None
    criterion = StatementId.parse(args.criterion) if args.criterion else None
    faulty = [StatementId.parse(x) for x in args.faulty.split(",") if x.strip()] if args.faulty else []
    for s in faulty:
        if s not in spectrum:
            raise InputError(f"faulty statement {s} not in the spectrum universe")
    case = BugCase("cli", spectrum, graph, criterion, (frozenset(faulty),) if faulty else (),
                   args.failing_test)
    ranking = run_technique(tech, case)

    # per-row score column: formula score, or dependence distance for slice rows
    shown = {}
    if tech.kind != "slice":
        scores = score_spectrum(tech.formula, spectrum).scores
        head = ranking.order[:tech.n] if tech.kind == "hybrid" else ranking.order
        shown.update({s: scores[s] for s in head})
    if tech.kind != "formula":
        slc = approx_dynamic_slice(graph, case.slice_request())
        for s, d in slc.distance.items():
            shown.setdefault(s, d)

    result = None
    if faulty:
        result = metrics.score_from_ranking(ranking, faulty, spectrum.statements)

    if args.format == "json":
        doc = {
            "technique": tech.label,
            "policy": ranking.policy.value,
            "universe": len(spectrum),
            "ranking": [
                {"rank": ranking.rank[s], "unit": s.unit, "line": s.line, "score": _jsonable(shown.get(s))}
                for s in ranking.order
            ],
        }
        if result is not None:
            doc["inspected"] = result.inspected
            doc["score"] = result.value
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        lines = ["rank\tunit\tline\tscore"]
        lines += [f"{ranking.rank[s]}\t{s.unit}\t{s.line}\t{_fmt(shown.get(s))}" for s in ranking.order]
        if result is not None:
            lines.append(f"# inspected\t{result.inspected}")
            lines.append(f"# score\t{metrics.round_half_even(result.value)}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _pct(x) -> str:
    return "-" if x is None else str(metrics.round_half_even(x))


def report_tsv(report: dict) -> str:
    """Tabular mirror of an evaluation report; values rounded half-to-even."""
    lines = ["bug_id\ttechnique\tstatus\tinspected\tuniverse\tscore\texpense\tscore_mult"]
    for r in report["records"]:
        if r["status"] != "ok":
            lines.append(f"{r['bug_id']}\t{r['technique']}\terror\t-\t-\t-\t-\t-")
            continue
        lines.append("\t".join([
            r["bug_id"], r["technique"], "ok", str(r["inspected"]), str(r["universe"]),
            _pct(r["score"]), _pct(r.get("expense")), _pct(r.get("score_mult")),
        ]))
    lines.append("")
    lines.append("technique\tok\tfailed\tmean_score")
    for lab in report["techniques"]:
        agg = report["aggregates"][lab]
        lines.append(f"{lab}\t{agg['ok']}\t{agg['failed']}\t{_pct(agg['mean_score'])}")
    lines.append("")
    lines.append("technique\tinspected_max\tpercent_of_bugs")
    for lab in report["techniques"]:
        for count, pct in report["aggregates"][lab]["cumulative"]:
            lines.append(f"{lab}\t{count}\t{_pct(pct)}")
    if report["comparisons"]:
        lines.append("")
        lines.append("a\tb\twins_a\twins_b\tties\todds_ratio\tp_value")
        for c in report["comparisons"]:
            if "error" in c:
                lines.append(f"{c['a']}\t{c['b']}\t-\t-\t-\t-\t-")
            else:
                lines.append(f"{c['a']}\t{c['b']}\t{c['wins_a']}\t{c['wins_b']}\t{c['ties']}\t"
                             f"{_pct(c['odds_ratio'])}\t{_pct(c['p_value'])}")
    return "\n".join(lines) + "\n"


def cmd_evaluate(args) -> int:
    manifest = load_manifest(args.manifest, args.formula, args.n)
    report = evaluate(manifest, jobs=args.jobs)
    if args.format == "tsv":
        text = report_tsv(report)
    else:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    try:
        report = json.loads(Path(args.report).read_text(encoding="utf-8"))
        records = report["records"]
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read evaluation report {args.report}: {exc}") from None
    a = parse_technique(args.technique_a).label if args.technique_a not in {r["technique"] for r in records} else args.technique_a
    b = parse_technique(args.technique_b).label if args.technique_b not in {r["technique"] for r in records} else args.technique_b
    result = compare_records(records, a, b)
    if args.format == "json":
        text = json.dumps(result, indent=2, sort_keys=True) + "\n"
    else:
        keys = ["a", "b", "bugs", "wins_a", "wins_b", "ties", "odds_ratio", "u", "p_value"]
        text = "\t".join(keys) + "\n" + "\t".join(_fmt(result[k]) for k in keys) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_formats(args) -> int:
    sys.stdout.write(FORMATS_HELP)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="faultloc", description="Statistical, slicing and hybrid fault localization.")
    sub = parser.add_subparsers(dest="command", required=True)

    loc = sub.add_parser("localize", help="rank statements for one bug")
    loc.add_argument("--spectrum", required=True)
    loc.add_argument("--graph")
    loc.add_argument("--criterion", help="slicing criterion, <unit>:<line>")
    loc.add_argument("--failing-test", help="failing test whose coverage forms the executed set")
    loc.add_argument("--technique", default="formula", help="formula name, formula, slice or hybrid[-N[-formula]]")
    loc.add_argument("--formula")
    loc.add_argument("--n", type=int)
    loc.add_argument("--faulty", help="comma-separated faulty statement ids")
    loc.add_argument("--format", choices=["tsv", "json"], default="tsv")
    loc.add_argument("--out")
    loc.set_defaults(func=cmd_localize)

    ev = sub.add_parser("evaluate", help="score techniques over a corpus manifest")
    ev.add_argument("manifest")
    ev.add_argument("--formula")
    ev.add_argument("--n", type=int)
    ev.add_argument("--jobs", type=int, default=1)
    ev.add_argument("--format", choices=["tsv", "json"], default="json")
    ev.add_argument("--out")
    ev.set_defaults(func=cmd_evaluate)

    cmp_ = sub.add_parser("compare", help="odds ratio and U test between two techniques")
    cmp_.add_argument("report")
    cmp_.add_argument("technique_a")
    cmp_.add_argument("technique_b")
    cmp_.add_argument("--format", choices=["tsv", "json"], default="tsv")
    cmp_.add_argument("--out")
    cmp_.set_defaults(func=cmd_compare)

    fm = sub.add_parser("formats", help="print input/output format descriptions")
    fm.set_defaults(func=cmd_formats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormulaUnavailable as exc:
        print(f"faultloc: {exc}", file=sys.stderr)
        return EXIT_UNAVAILABLE
    except InputError as exc:
        print(f"faultloc: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
