"""Report serialization: JSON (canonical), CSV (flat sweep rows) and aligned text."""
from __future__ import annotations

import csv
import io
import json
import math

from ..dsl import ResidualReport
from ..exotic import DeformationParams

__all__ = ["SCHEMA_VERSION", "report_dict", "emit_report", "emit_sweep", "CSV_COLUMNS"]

SCHEMA_VERSION = 1
CSV_COLUMNS = ("nu", "relation_label", "raw_norm", "masked_norm", "pass")


def _num(x: float):
    # JSON has no infinities; an unbounded tolerance is written as null
    return float(x) if math.isfinite(x) else None


def _jsonable(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, float):
        return _num(v)
    return v


def params_dict(params: DeformationParams | None) -> dict:
    if params is None:
        return {}
    return {
        "nu": params.nu, "sign": params.sign, "mu_omega": params.mu_omega, "lambda": params.lam,
        "chi_re": params.chi.real, "chi_im": params.chi.imag,
        "theta_re": params.theta.real, "theta_im": params.theta.imag,
        "eta_re": params.eta.real, "eta_im": params.eta.imag,
        "f_choice": params.f_choice,
    }


def report_dict(report: ResidualReport, params: DeformationParams | None = None) -> dict:
    meta = dict(report.metadata)
    binding = meta.pop("binding", {})
    return {
        "schema_version": SCHEMA_VERSION,
        "presentation": report.presentation,
        "params": params_dict(params),
        "relations": [
            {
                "label": r.label, "raw_norm": _num(r.raw_norm), "masked_norm": _num(r.masked_norm),
                "mask_levels": r.mask_levels, "tolerance": _num(r.tolerance), "pass": r.passed,
                "status": r.status,
            }
            for r in report.records
        ],
        "warnings": list(report.warnings),
        "overall_pass": report.overall_pass,
        "binding": _jsonable({"dim": report.dim, "lambda": report.lam, **binding, **meta}),
    }


def _text_table(report: ResidualReport, params: DeformationParams | None) -> str:
    head = f"{report.presentation}: D={report.dim} lambda={report.lam}"
    if params is not None:
        head += f" nu={params.nu!r} sign={params.sign:+d} f={params.f_choice}"
    rows = [("label", "raw_norm", "masked_norm", "mask", "tolerance", "status")]
    for r in report.records:
        rows.append((r.label, f"{r.raw_norm:.3e}", f"{r.masked_norm:.3e}", str(r.mask_levels),
                     f"{r.tolerance:.1e}", r.status))
    widths = [max(len(row[k]) for row in rows) for k in range(len(rows[0]))]
    lines = [head]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
    if report.warnings:
        lines.append("warnings: " + ", ".join(report.warnings))
    lines.append(f"overall: {'pass' if report.overall_pass else 'fail'}")
    return "\n".join(lines) + "\n"


def _csv_rows(points) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for nu, report in points:
        for r in sorted(report.records, key=lambda rec: rec.label):
            verdict = "" if r.passed is None else str(r.passed).lower()
            w.writerow((repr(float(nu)), r.label, repr(r.raw_norm), repr(r.masked_norm), verdict))
    return buf.getvalue()


def emit_report(report: ResidualReport, fmt: str = "json", params: DeformationParams | None = None) -> bytes:
    if fmt == "json":
        return (json.dumps(report_dict(report, params), indent=2, allow_nan=False) + "\n").encode()
    if fmt == "text":
        return _text_table(report, params).encode()
    if fmt == "csv":
        nu = params.nu if params is not None else math.nan
        return _csv_rows([(nu, report)]).encode()
    raise ValueError(f"unknown format {fmt!r}")


def emit_sweep(points, fmt: str = "csv", params_for=None) -> bytes:
    """``points`` is a list of (nu, report); ``params_for(nu)`` gives the parameters used there."""
    if fmt == "csv":
        return _csv_rows(points).encode()
    if fmt == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "presentation": points[0][1].presentation if points else None,
            "points": [report_dict(rep, params_for(nu) if params_for else None) for nu, rep in points],
            "overall_pass": all(rep.overall_pass for _, rep in points),
        }
        return (json.dumps(doc, indent=2, allow_nan=False) + "\n").encode()
    if fmt == "text":
        return "".join(_text_table(rep, params_for(nu) if params_for else None) for nu, rep in points).encode()
    raise ValueError(f"unknown format {fmt!r}")
