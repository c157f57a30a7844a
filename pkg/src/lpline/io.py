"""Point-set parsing and the JSON report schema.

CSV rows are ``x,y[,mult]``; JSON input is an array of ``{x, y, mult?}``
objects.  Multiplicities must be integers >= 1 (real-valued weights are
rejected), coordinates must be finite, and input order is preserved.

Reports serialise to plain JSON dictionaries.  Floats keep full round-trip
precision; values that the enumerative solvers computed exactly are carried
alongside as numerator/denominator strings (exact with respect to the
binary floating-point input values).
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from fractions import Fraction
from typing import IO, Union

from .errors import EmptyInput, ParseError
from .geometry import IndexDecomposition, Line, LineHesse, LineSI, Point, PointSet
from .report import (
    AllLinesThroughPoint,
    CandidateLine,
    FitReport,
    LineFamilies,
    LineFamily,
    LinfCertificate,
    ParameterPolytope,
    UniqueLine,
    VerticalDegenerate,
)

__all__ = ["parse_points", "report_to_dict", "report_from_dict", "dumps_report", "write_atomic"]


def _parse_float(token: str, line_no: int, field_no: int) -> float:
    try:
        v = float(token)
    except ValueError:
        raise ParseError(
            f"line {line_no}, field {field_no}: not a number: {token!r}",
            line=line_no, field=field_no,
        ) from None
    if not math.isfinite(v):
        raise ParseError(
            f"line {line_no}, field {field_no}: non-finite value {token!r}",
            line=line_no, field=field_no,
        )
    return v


def _parse_mult(token: str, line_no: int, field_no: int) -> int:
    try:
        m = int(token)
    except ValueError:
        raise ParseError(
            f"line {line_no}, field {field_no}: multiplicity must be an integer: {token!r}",
            line=line_no, field=field_no,
        ) from None
    if m < 1:
        raise ParseError(
            f"line {line_no}, field {field_no}: multiplicity must be >= 1, got {m}",
            line=line_no, field=field_no,
        )
    return m


def _parse_csv(text: str) -> PointSet:
    points = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = [f.strip() for f in stripped.split(",")]
        if len(fields) not in (2, 3):
            raise ParseError(
                f"line {line_no}: expected 2 or 3 fields, got {len(fields)}",
                line=line_no,
            )
        x = _parse_float(fields[0], line_no, 1)
        y = _parse_float(fields[1], line_no, 2)
        mult = _parse_mult(fields[2], line_no, 3) if len(fields) == 3 else 1
        points.append(Point(x, y, mult))
    if not points:
        raise EmptyInput()
    return PointSet(points)


def _parse_json(text: str) -> PointSet:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", line=exc.lineno) from None
    if not isinstance(data, list):
        raise ParseError("JSON input must be an array of point objects")
    points = []
    for i, item in enumerate(data, start=1):
        if not isinstance(item, dict) or "x" not in item or "y" not in item:
            raise ParseError(f"entry {i}: expected an object with x and y", line=i)
        x, y = item["x"], item["y"]
        for name, v in (("x", x), ("y", y)):
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ParseError(f"entry {i}: {name} must be a finite number", line=i)
        mult = item.get("mult", 1)
        if isinstance(mult, bool) or not isinstance(mult, int) or mult < 1:
            raise ParseError(f"entry {i}: mult must be an integer >= 1", line=i)
        points.append(Point(float(x), float(y), mult))
    if not points:
        raise EmptyInput()
    return PointSet(points)


def parse_points(source: Union[str, IO], format: str = "csv") -> PointSet:
    """Parse a point set from text or a readable stream."""
    text = source if isinstance(source, str) else source.read()
    if format == "csv":
        return _parse_csv(text)
    if format == "json":
        return _parse_json(text)
    raise ValueError(f"unknown input format {format!r}")


# ---------------------------------------------------------------------------
# report serialisation
# ---------------------------------------------------------------------------

def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _line_to_dict(line: Line) -> dict:
    if isinstance(line, LineSI):
        return {"type": "slope_intercept", "a": line.a, "b": line.b}
    return {"type": "hesse", "theta": line.theta, "c": line.c}


def _line_from_dict(d: dict) -> Line:
    if d["type"] == "slope_intercept":
        return LineSI(d["a"], d["b"])
    if d["type"] == "hesse":
        return LineHesse(d["theta"], d["c"])
    raise ParseError(f"unknown line type {d.get('type')!r}")


def _optimal_set_to_dict(opt) -> dict:
    if isinstance(opt, UniqueLine):
        return {"kind": "unique_line", "line": _line_to_dict(opt.line)}
    if isinstance(opt, ParameterPolytope):
        return {
            "kind": "parameter_polytope",
            "vertices": [list(v) for v in opt.vertices],
            "exact_vertices": (
                None if opt.exact_vertices is None
                else [[_frac_str(a), _frac_str(b)] for a, b in opt.exact_vertices]
            ),
            "at_tolerance": opt.at_tolerance,
        }
    if isinstance(opt, LineFamilies):
        return {
            "kind": "line_families",
            "families": [
                {"theta": f.theta, "c_lo": f.c_lo, "c_hi": f.c_hi} for f in opt.families
            ],
            "at_tolerance": opt.at_tolerance,
        }
    if isinstance(opt, AllLinesThroughPoint):
        return {"kind": "all_lines_through_point", "point": list(opt.point)}
    if isinstance(opt, VerticalDegenerate):
        return {"kind": "vertical_degenerate", "x0": opt.x0, "b_lo": opt.b_lo, "b_hi": opt.b_hi}
    raise TypeError(f"unknown optimal set {opt!r}")


def _optimal_set_from_dict(d: dict):
    kind = d["kind"]
    if kind == "unique_line":
        return UniqueLine(_line_from_dict(d["line"]))
    if kind == "parameter_polytope":
        exact = d.get("exact_vertices")
        return ParameterPolytope(
            tuple(tuple(v) for v in d["vertices"]),
            exact_vertices=(
                None if exact is None
                else tuple((Fraction(a), Fraction(b)) for a, b in exact)
            ),
            at_tolerance=d["at_tolerance"],
        )
    if kind == "line_families":
        return LineFamilies(
            tuple(LineFamily(f["theta"], f["c_lo"], f["c_hi"]) for f in d["families"]),
            at_tolerance=d["at_tolerance"],
        )
    if kind == "all_lines_through_point":
        return AllLinesThroughPoint(tuple(d["point"]))
    if kind == "vertical_degenerate":
        return VerticalDegenerate(d["x0"], d["b_lo"], d["b_hi"])
    raise ParseError(f"unknown optimal set kind {kind!r}")


def _decomposition_to_dict(dec: IndexDecomposition) -> dict:
    return {
        "plus": list(dec.j_plus),
        "zero": list(dec.j_zero),
        "minus": list(dec.j_minus),
        "w_plus": dec.w_plus,
        "w_zero": dec.w_zero,
        "w_minus": dec.w_minus,
    }


def _decomposition_from_dict(d: dict) -> IndexDecomposition:
    return IndexDecomposition(
        tuple(d["plus"]), tuple(d["zero"]), tuple(d["minus"]),
        d["w_plus"], d["w_zero"], d["w_minus"],
    )


def _exact_to_dict(exact):
    if exact is None:
        return None
    return {k: (_frac_str(v) if isinstance(v, Fraction) else v) for k, v in exact.items()}


def _exact_from_dict(d):
    if d is None:
        return None
    return {k: (Fraction(v) if isinstance(v, str) else v) for k, v in d.items()}


def _certificate_to_dict(cert) -> dict:
    if isinstance(cert, CandidateLine):
        return {
            "type": "candidate",
            "j": cert.j,
            "k": cert.k,
            "line": _line_to_dict(cert.line),
            "objective": cert.objective,
            "decomposition": _decomposition_to_dict(cert.decomposition),
            "certified": cert.certified,
            "exact": _exact_to_dict(cert.exact),
        }
    if isinstance(cert, LinfCertificate):
        return {
            "type": "equioscillation",
            "edge": list(cert.edge),
            "witness": cert.witness,
            "value": cert.value,
        }
    raise TypeError(f"unknown certificate {cert!r}")


def _certificate_from_dict(d: dict):
    if d["type"] == "candidate":
        return CandidateLine(
            d["j"], d["k"], _line_from_dict(d["line"]), d["objective"],
            _decomposition_from_dict(d["decomposition"]), d["certified"],
            _exact_from_dict(d.get("exact")),
        )
    if d["type"] == "equioscillation":
        return LinfCertificate(tuple(d["edge"]), d["witness"], d["value"])
    raise ParseError(f"unknown certificate type {d.get('type')!r}")


def _sanitize(value):
    """Make diagnostics JSON-safe: tuples to lists, fractions to strings."""
    if isinstance(value, Fraction):
        return _frac_str(value)
    if isinstance(value, dict):
        return {k: _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    if hasattr(value, "item"):  # numpy scalar
        return value.item()
    return value


def report_to_dict(report: FitReport, include_candidates: bool = False) -> dict:
    d = {
        "solver": report.solver,
        "norm": "inf" if report.norm == math.inf else report.norm,
        "distance": report.distance,
        "objective": report.objective,
        "objective_exact": None if report.objective_exact is None else _frac_str(report.objective_exact),
        "objective_sq_exact": None if report.objective_sq_exact is None else _frac_str(report.objective_sq_exact),
        "line": _line_to_dict(report.line),
        "optimal_set": _optimal_set_to_dict(report.optimal_set),
        "residuals": list(report.residuals),
        "decomposition": _decomposition_to_dict(report.decomposition),
        "certificates": [_certificate_to_dict(c) for c in report.certificates],
        "diagnostics": _sanitize(report.diagnostics),
    }
    if include_candidates:
        d["candidates"] = [_certificate_to_dict(c) for c in report.candidates]
    return d


def report_from_dict(d: dict) -> FitReport:
    return FitReport(
        solver=d["solver"],
        norm=math.inf if d["norm"] == "inf" else d["norm"],
        distance=d["distance"],
        objective=d["objective"],
        line=_line_from_dict(d["line"]),
        optimal_set=_optimal_set_from_dict(d["optimal_set"]),
        residuals=tuple(d["residuals"]),
        decomposition=_decomposition_from_dict(d["decomposition"]),
        certificates=tuple(_certificate_from_dict(c) for c in d["certificates"]),
        candidates=tuple(_certificate_from_dict(c) for c in d.get("candidates", [])),
        objective_exact=None if d["objective_exact"] is None else Fraction(d["objective_exact"]),
        objective_sq_exact=None if d["objective_sq_exact"] is None else Fraction(d["objective_sq_exact"]),
        diagnostics=d["diagnostics"],
    )


def dumps_report(d: dict) -> str:
    return json.dumps(d, indent=2, allow_nan=False)


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file and rename, so readers never see partials."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
