"""Report serialization: JSON for single runs, CSV for runs, sweeps, compares.

All floating-point values are printed with 6 significant digits, field order
is fixed, and serialization is pure, so identical reports give identical
bytes.
"""

from __future__ import annotations

import io
import json
import sys
from typing import Sequence

from .engine import RunReport

SWEEP_COLUMNS = (
    "seed",
    "pdr",
    "mean_delay",
    "reroutes",
    "sent",
    "delivered",
    "dropped",
    "jammed_peak",
)

COMPARE_COLUMNS = (
    "seed",
    "pdr_reroute",
    "pdr_baseline",
    "delta_pdr",
    "mean_delay_reroute",
    "mean_delay_baseline",
    "reroutes",
)


def fmt6(value: float) -> str:
    return f"{value:.6g}"


def round6(value: float) -> float:
    """The float whose repr is the 6-significant-digit rendering."""
    return float(fmt6(value))


def report_dict(report: RunReport) -> dict:
    """RunReport as a JSON-ready dict with fixed key order and rounded floats."""
    return {
        "seed": report.seed,
        "duration": report.duration,
        "sent": report.sent,
        "delivered": report.delivered,
        "dropped": report.dropped,
        "in_flight": report.in_flight,
        "pdr": round6(report.pdr),
        "mean_delay": round6(report.mean_delay),
        "reroutes": report.reroutes,
        "jammed_peak": report.jammed_peak,
        "energy_spent": {
            str(i): round6(v) for i, v in sorted(report.energy_spent.items())
        },
        "jammed_per_step": list(report.jammed_per_step),
        "searches": [
            {
                "step": s.step,
                "source": s.source,
                "found": s.found,
                "best_score": round6(s.best_score),
                "successes": s.successes,
            }
            for s in report.searches
        ],
        "trace": [list(row) for row in report.trace],
    }


def report_json_bytes(report: RunReport) -> bytes:
    return (json.dumps(report_dict(report), indent=2) + "\n").encode("utf-8")


def _run_row(report: RunReport) -> list[str]:
    return [
        str(report.seed),
        fmt6(report.pdr),
        fmt6(report.mean_delay),
        str(report.reroutes),
        str(report.sent),
        str(report.delivered),
        str(report.dropped),
        str(report.jammed_peak),
    ]


def report_csv_bytes(report: RunReport) -> bytes:
    lines = [",".join(SWEEP_COLUMNS), ",".join(_run_row(report))]
    return ("\n".join(lines) + "\n").encode("utf-8")


def sweep_csv_bytes(reports: Sequence[RunReport]) -> bytes:
    """One row per seed plus mean/min/max trailer rows (column-wise)."""
    if not reports:
        raise ValueError("no reports to summarize")
    lines = [",".join(SWEEP_COLUMNS)]
    for report in reports:
        lines.append(",".join(_run_row(report)))
    columns = [
        [float(getattr(r, name)) for r in reports] for name in SWEEP_COLUMNS[1:]
    ]
    for label, pick in (
        ("mean", lambda vs: sum(vs) / len(vs)),
        ("min", min),
        ("max", max),
    ):
        lines.append(",".join([label] + [fmt6(pick(vs)) for vs in columns]))
    return ("\n".join(lines) + "\n").encode("utf-8")


def compare_csv_bytes(pairs: Sequence[tuple[RunReport, RunReport]]) -> bytes:
    """Per-seed paired rows; each pair is (reroute enabled, baseline)."""
    if not pairs:
        raise ValueError("no report pairs to summarize")
    lines = [",".join(COMPARE_COLUMNS)]
    for enabled, baseline in pairs:
        if enabled.seed != baseline.seed:
            raise ValueError("paired reports must share a seed")
        lines.append(
            ",".join(
                [
                    str(enabled.seed),
                    fmt6(enabled.pdr),
                    fmt6(baseline.pdr),
                    fmt6(enabled.pdr - baseline.pdr),
                    fmt6(enabled.mean_delay),
                    fmt6(baseline.mean_delay),
                    str(enabled.reroutes),
                ]
            )
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


def emit_report(report: RunReport, fmt: str, destination: str | None = None) -> int:
    """Serialize one report to a file path or stdout; returns bytes written.

    fmt is "json" or "csv". destination None or "-" writes to stdout. I/O
    errors propagate as OSError for the caller to map to an exit status.
    """
    if fmt == "json":
        payload = report_json_bytes(report)
    elif fmt == "csv":
        payload = report_csv_bytes(report)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return write_bytes(payload, destination)


def write_bytes(payload: bytes, destination: str | None = None) -> int:
    if destination is None or destination == "-":
        stream = sys.stdout.buffer if hasattr(sys.stdout, "buffer") else sys.stdout
        if isinstance(stream, io.TextIOBase):
            stream.write(payload.decode("utf-8"))
        else:
            stream.write(payload)
        return len(payload)
    with open(destination, "wb") as fh:
        fh.write(payload)
    return len(payload)
