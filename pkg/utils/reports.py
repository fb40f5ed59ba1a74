"""
utils/reports.py
Tabular and textual rendering of invariants, obstruction tables and
Lemma 1 reports (CSV / JSON / text). All output is deterministic.
"""

from __future__ import annotations

import json
from typing import Optional

import pandas as pd

from utils.morse_algebra import CobordismInvariant, MorseDescriptor, Violation
from utils.numerical_lab import Lemma1Report
from utils.obstruction import ObstructionRow, Theorem4Report

OBSTRUCTION_COLUMNS = [
    "k",
    "family_counts",
    "family_invariant",
    "product_phi_top",
    "proof_formula_phi_top",
    "product_invariant_phis",
    "family_matches_base",
    "product_distinct",
]


def to_json(payload) -> str:
    return json.dumps(payload, indent=2)


def format_number_list(values) -> str:
    return "[" + ", ".join(str(v) for v in values) + "]"


# ── Morse algebra ──────────────────────────────────────────────────────────────
def invariant_text(inv: CobordismInvariant) -> str:
    lines = [
        f"dimension: {inv.m}",
        f"oriented: {str(inv.oriented).lower()}",
        f"token: {inv.token}",
        f"phis: {format_number_list(inv.phis)}",
    ]
    if inv.phis:
        lines.append(f"phi range: {inv.phi_start}..{inv.m}")
    if inv.z2 is not None:
        lines.append(f"z2: {inv.z2}")
    return "\n".join(lines)


def invariant_frame(inv: CobordismInvariant) -> pd.DataFrame:
    """One row per recorded phi_j (plus z2 when defined)."""
    rows = [{"component": f"phi_{j}", "value": v} for j, v in zip(range(inv.phi_start, inv.m + 1), inv.phis)]
    if inv.z2 is not None:
        rows.append({"component": "z2", "value": inv.z2})
    return pd.DataFrame(rows, columns=["component", "value"])


def violations_text(violations: list[Violation]) -> str:
    if not violations:
        return "valid"
    return "\n".join(f"violation [{v.invariant}]: {v.reason}" for v in violations)


def descriptor_frame(d: MorseDescriptor) -> pd.DataFrame:
    """Index-by-index view: C_j, b_j (if present) and phi_j."""
    frame = pd.DataFrame({"index": range(d.m + 1), "count": list(d.counts.counts)})
    if d.manifold.betti is not None and len(d.manifold.betti) == d.m + 1:
        frame["betti"] = list(d.manifold.betti)
    if len(d.counts.counts) == d.m + 1:
        frame["phi"] = [d.counts[j] - d.counts[d.m - j] for j in range(d.m + 1)]
    return frame


# ── Obstruction ────────────────────────────────────────────────────────────────
def obstruction_frame(rows: list[ObstructionRow]) -> pd.DataFrame:
    """
    Build the obstruction table.

    Returns:
        DataFrame with OBSTRUCTION_COLUMNS, one row per k.
    """
    base = rows[0].family_invariant if rows else None
    products = [r.product_invariant for r in rows]
    records = []
    for r in rows:
        records.append(
            {
                "k": r.k,
                "family_counts": format_number_list(r.family_counts),
                "family_invariant": r.family_invariant.describe(),
                "product_phi_top": r.product_phi_top,
                "proof_formula_phi_top": r.proof_formula_phi_top,
                "product_invariant_phis": format_number_list(r.product_invariant.phis),
                "family_matches_base": r.family_invariant == base,
                "product_distinct": products.count(r.product_invariant) == 1,
            }
        )
    return pd.DataFrame(records, columns=OBSTRUCTION_COLUMNS)


def checks_text(report: Theorem4Report) -> str:
    lines = [
        f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}"
        + (f" (k = {list(c.counterexample_ks)})" if c.counterexample_ks else "")
        for c in report.checks
    ]
    lines.append(
        f"spacing: first={report.first_spacing} steady={report.steady_spacing} "
        f"expected increment phi_m(f)={report.expected_increment}"
    )
    lines.append(f"verdict: {'pass' if report.passed else 'fail'}")
    return "\n".join(lines)


def render_obstruction(rows: list[ObstructionRow], report: Optional[Theorem4Report], fmt: str) -> str:
    if fmt == "json":
        payload = report.to_dict() if report is not None else {"rows": [r.to_dict() for r in rows]}
        return to_json(payload)
    frame = obstruction_frame(rows)
    if fmt == "csv":
        return frame.to_csv(index=False, lineterminator="\n").rstrip("\n")
    text = frame.to_string(index=False)
    if report is not None:
        text += "\n\n" + checks_text(report)
    return text


# ── Lemma 1 ────────────────────────────────────────────────────────────────────
def _fmt_coords(coords) -> str:
    return "(" + ", ".join(f"{c:.6f}" for c in coords) + ")"


def lemma1_frame(report: Lemma1Report) -> pd.DataFrame:
    """Summary table: point, chart, coordinates, index, matched pair."""
    records = []
    for n, match in enumerate(report.matches):
        p = match.point
        pair = "-"
        if match.first is not None and match.second is not None:
            i1 = report.first_points[match.first].index
            i2 = report.second_points[match.second].index
            pair = f"p1#{match.first}(i={i1}) x p2#{match.second}(i={i2})"
        records.append(
            {
                "point": n,
                "chart": p.chart_id,
                "coordinates": _fmt_coords(p.coordinates),
                "value": round(p.value, 9),
                "index": p.index,
                "matched_pair": pair,
                "index_ok": match.index_ok,
                "block_ok": match.block_ok,
            }
        )
    return pd.DataFrame(
        records,
        columns=["point", "chart", "coordinates", "value", "index", "matched_pair", "index_ok", "block_ok"],
    )


def render_lemma1(report: Lemma1Report, fmt: str) -> str:
    if fmt == "json":
        return to_json(report.to_dict())
    frame = lemma1_frame(report)
    if fmt == "csv":
        return frame.to_csv(index=False, lineterminator="\n").rstrip("\n")
    lines = [
        f"diagonal function of {report.f1_name} and {report.f2_name}, weights {report.weights}",
        frame.to_string(index=False),
        "",
        f"histogram: found {format_number_list(report.found_histogram)}, "
        f"convolution {format_number_list(report.expected_histogram)}",
        f"count: {len(report.product_points)} = {len(report.first_points)} x {len(report.second_points)}"
        if report.count_ok
        else f"count mismatch: {len(report.product_points)} points",
    ]
    lines.extend(f"failure: {f}" for f in report.failures)
    lines.append(f"verdict: {'pass' if report.passed else 'fail'}")
    return "\n".join(lines)
