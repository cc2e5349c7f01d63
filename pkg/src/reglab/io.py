"""Deterministic file emission: manifests, CSV curves and summaries.

Floats are written with ``repr`` (shortest round-trip form), no timestamps
or environment data ever enter an output file, so identical runs produce
byte-identical artifacts.
"""

from __future__ import annotations

import os
from typing import Iterable, Mapping, Sequence

from .regularize import ConvergenceReport
from .scenarios import ScenarioResult, SummaryRow

CURVES_HEADER = "member,eps,t,value"
SUMMARY_HEADER = "scenario,metric,value,target,threshold,verdict"
REPORT_HEADER = "report,eps,median_D,p90_D,exceed_frac"


def fmt(x) -> str:
    return repr(float(x))


def write_manifest(path: str, manifest: Mapping) -> None:
    lines = [f"{k} = {v}" for k, v in manifest.items()]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_curves_csv(path: str, rows: Iterable[tuple]) -> None:
    with open(path, "w") as fh:
        fh.write(CURVES_HEADER + "\n")
        for member, eps, t, value in rows:
            fh.write(f"{member},{fmt(eps)},{fmt(t)},{fmt(value)}\n")


def write_summary_csv(path: str, rows: Sequence[SummaryRow]) -> None:
    with open(path, "w") as fh:
        fh.write(SUMMARY_HEADER + "\n")
        for r in rows:
            fh.write(
                f"{r.scenario},{r.metric},{fmt(r.value)},{fmt(r.target)},"
                f"{fmt(r.threshold)},{r.verdict}\n"
            )


def write_report_csv(path: str, reports: Mapping[str, ConvergenceReport]) -> None:
    with open(path, "w") as fh:
        fh.write(REPORT_HEADER + "\n")
        for name, rep in reports.items():
            for e, med, p90, exc in zip(rep.eps, rep.median, rep.p90, rep.exceed):
                fh.write(f"{name},{fmt(e)},{fmt(med)},{fmt(p90)},{fmt(exc)}\n")


def write_scenario_result(out_dir: str, result: ScenarioResult) -> str:
    """Write manifest + curves + summary (+ ladder reports) for one scenario."""
    d = os.path.join(out_dir, result.scenario)
    os.makedirs(d, exist_ok=True)
    write_manifest(os.path.join(d, "manifest.txt"), result.manifest)
    write_curves_csv(os.path.join(d, "curves.csv"), result.curves)
    write_summary_csv(os.path.join(d, "summary.csv"), result.rows)
    if result.reports:
        write_report_csv(os.path.join(d, "report.csv"), result.reports)
    return d


def read_summary_csv(path: str) -> list[dict]:
    rows = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != SUMMARY_HEADER:
            raise ValueError(f"{path}: unexpected header {header!r}")
        for line in fh:
            scenario, metric, value, target, threshold, verdict = line.strip().split(",")
            rows.append(
                {
                    "scenario": scenario,
                    "metric": metric,
                    "value": float(value),
                    "target": float(target),
                    "threshold": float(threshold),
                    "verdict": verdict,
                }
            )
    return rows


def collect_summaries(out_dir: str) -> list[dict]:
    """All summary rows under out_dir/<scenario>/summary.csv, sorted."""
    if not os.path.isdir(out_dir):
        raise FileNotFoundError(f"no such output directory: {out_dir}")
    found = []
    for name in sorted(os.listdir(out_dir)):
        p = os.path.join(out_dir, name, "summary.csv")
        if os.path.isfile(p):
            found.extend(read_summary_csv(p))
    if not found:
        raise FileNotFoundError(
            f"no summary files found: expected {out_dir}/<scenario>/summary.csv"
        )
    return found


def render_markdown(rows: Sequence[Mapping]) -> str:
    """Markdown verdict table from collected summary rows."""
    out = [
        "| scenario | metric | value | target | threshold | verdict |",
        "| --- | --- | --- | --- | --- | --- |",
    ]
    for r in rows:
        out.append(
            f"| {r['scenario']} | {r['metric']} | {r['value']:.6g} "
            f"| {r['target']:.6g} | {r['threshold']:.6g} | {r['verdict']} |"
        )
    return "\n".join(out) + "\n"
