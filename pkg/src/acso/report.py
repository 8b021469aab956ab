"""Rendering obstruction reports as JSON documents or terminal text.

The JSON form is byte-deterministic (sorted keys, fixed indentation,
coefficients as decimal strings); the text form is a compact summary that
names the classical result behind every row.
"""

from __future__ import annotations

import json
from typing import Optional

from .obstruct import (
    BundleData,
    ChernCandidate,
    ObstructionReport,
    SearchOutcome,
    Verdict,
)

REPORT_SCHEMA_VERSION = 1

_EXIT_BY_STATUS = {"clear": 0, "obstructed": 2, "inconclusive": 3}


def exit_code(report: ObstructionReport) -> int:
    return _EXIT_BY_STATUS[report.status]


def element_doc(x) -> dict:
    return {"degree": x.degree,
            "terms": {mon: str(c) for mon, c in sorted(x.terms().items())},
            "text": str(x)}


def verdict_doc(v: Optional[Verdict]) -> Optional[dict]:
    if v is None:
        return None
    return {"status": v.status,
            "witness": None if v.witness is None else element_doc(v.witness),
            "denominator": None if v.denominator is None else str(v.denominator),
            "note": v.note}


def candidate_doc(cand: ChernCandidate) -> dict:
    return {"c%d" % i: {mon: str(c) for mon, c in sorted(ci.terms().items())}
            for i, ci in enumerate(cand.classes, start=1)}


def _search_doc(search: Optional[SearchOutcome]) -> Optional[dict]:
    if search is None:
        return None
    records = []
    for r in search.records:
        records.append({
            "candidate": candidate_doc(r.candidate),
            "q": element_doc(r.q),
            "status": r.verdict.status,
            "pairing": None if r.pairing is None else str(r.pairing),
        })
    return {
        "bound": search.bound,
        "enumerated": search.enumerated,
        "admissible": search.admissible,
        "complete": search.complete,
        "no_lift_degree": search.no_lift_degree,
        "records": records,
        "vanishing": [candidate_doc(c) for c in search.vanishing],
    }


def report_doc(report: ObstructionReport, name: str = "") -> dict:
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "space": name,
        "rank": report.rank,
        "base_dimension": report.base_dimension,
        "status": report.status,
        "existence": report.existence,
        "exit_code": exit_code(report),
        "sole_obstruction": report.sole_obstruction,
        "wu": [{"m": c.m, "status": c.status, "note": c.note}
               for c in report.wu_checks],
        "first": verdict_doc(report.first),
        "ehresmann_w7": verdict_doc(report.ehresmann_w7),
        "theorem1": [{"k": k, "degree": 4 * k + 3, **verdict_doc(v)}
                     for k, v in report.theorem1],
        "final": verdict_doc(report.final),
        "final_rule": report.final_rule,
        "search": _search_doc(report.search),
        "gaps": list(report.gaps),
        "notes": list(report.notes),
    }


def render_json(report: ObstructionReport, name: str = "") -> str:
    return json.dumps(report_doc(report, name), indent=2, sort_keys=True) + "\n"


def _verdict_line(label: str, v: Verdict) -> str:
    parts = ["  [%s] %s" % (label, v.status)]
    if v.witness is not None and not v.witness.is_zero:
        parts.append("witness %s" % v.witness)
    if v.note:
        parts.append(v.note)
    return " -- ".join(parts)


def _candidate_text(cand: ChernCandidate) -> str:
    return ", ".join("c%d = %s" % (i, ci)
                     for i, ci in enumerate(cand.classes, start=1)) or "(none)"


def render_text(report: ObstructionReport, name: str = "") -> str:
    lines = []
    lines.append("almost complex structure report%s"
                 % (" for %s" % name if name else ""))
    dim = ("unknown" if report.base_dimension is None
           else str(report.base_dimension))
    lines.append("rank %d, base dimension %s" % (report.rank, dim))
    lines.append("status: %s (exit %d), existence: %s"
                 % (report.status, exit_code(report), report.existence))
    if report.wu_checks:
        bits = ["m=%d %s" % (c.m, c.status) for c in report.wu_checks]
        lines.append("Wu formula checks: " + ", ".join(bits))
    lines.append("obstructions:")
    lines.append(_verdict_line("degree 3, Ehresmann W3 = beta(w2)",
                               report.first))
    for k, v in report.theorem1:
        lines.append(_verdict_line(
            "degree %d, Massey Thm I, k=%d, l=%d"
            % (4 * k + 3, k, v.denominator), v))
    if report.final is not None:
        v = report.final
        prefix = "%s: " % report.final_rule
        if v.note.startswith(prefix):
            v = Verdict(v.status, v.witness, v.denominator,
                        v.note[len(prefix):])
        lines.append(_verdict_line("final, %s" % report.final_rule, v))
    search = report.search
    if search is not None:
        if search.no_lift_degree is not None:
            lines.append("search: w%d admits no integral lift"
                         % search.no_lift_degree)
        else:
            lines.append("search: bound %d, %d enumerated, %d admissible, "
                         "%d vanishing"
                         % (search.bound, search.enumerated, search.admissible,
                            len(search.vanishing)))
        for cand in search.vanishing:
            lines.append("  vanishing candidate: %s" % _candidate_text(cand))
    if report.gaps:
        lines.append("gaps:")
        for g in report.gaps:
            lines.append("  - %s" % g)
    if report.notes:
        lines.append("notes:")
        for n in report.notes:
            lines.append("  - %s" % n)
    return "\n".join(lines) + "\n"


def wu_pairing_table(data: BundleData, search: SearchOutcome) -> dict:
    """Map each rank-4 candidate's c1 coefficient to the pairing of its q.

    Only meaningful when the degree-2 integral piece has a single basis
    element and the bundle carries a pairing in the final degree.
    """
    table = {}
    for r in search.records:
        c1 = r.candidate.classes[0]
        if len(c1.coeffs) != 1 or r.pairing is None:
            raise ValueError("pairing table needs a 1-dimensional degree-2 "
                             "piece and a fundamental pairing")
        table[str(c1.coeffs[0])] = str(r.pairing)
    return table
