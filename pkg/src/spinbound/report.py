"""Machine-readable reports: deterministic JSON and CSV emission.

Floats are written with 17 significant digits (enough to round-trip IEEE
doubles), keys are sorted, and no timestamps are embedded unless timing is
explicitly requested, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import io

import numpy as np

SCHEMA_TAG = "spinbound-report/1"


def _format_float(value):
    if value != value:
        return "NaN"
    if value in (float("inf"), float("-inf")):
        return "Infinity" if value > 0 else "-Infinity"
    return "%.17g" % value


def _dump(value, out, indent):
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            out.write("{}")
            return
        out.write("{\n")
        items = sorted(value.items())
        for i, (k, v) in enumerate(items):
            out.write(pad + "  " + '"%s": ' % str(k))
            _dump(v, out, indent + 1)
            out.write(",\n" if i + 1 < len(items) else "\n")
        out.write(pad + "}")
    elif isinstance(value, (list, tuple)):
        if not value:
            out.write("[]")
            return
        out.write("[\n")
        for i, v in enumerate(value):
            out.write(pad + "  ")
            _dump(v, out, indent + 1)
            out.write(",\n" if i + 1 < len(value) else "\n")
        out.write(pad + "]")
    elif isinstance(value, bool) or isinstance(value, np.bool_):
        out.write("true" if value else "false")
    elif value is None:
        out.write("null")
    elif isinstance(value, (int, np.integer)):
        out.write(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        out.write(_format_float(float(value)))
    elif isinstance(value, (complex, np.complexfloating)):
        _dump({"re": float(value.real), "im": float(value.imag)}, out, indent)
    elif isinstance(value, np.ndarray):
        _dump(value.tolist(), out, indent)
    elif isinstance(value, str):
        out.write('"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"')
    else:
        raise TypeError("cannot serialize %r" % type(value))


def dump_json(document) -> str:
    out = io.StringIO()
    _dump(document, out, 0)
    out.write("\n")
    return out.getvalue()


def write_csv(path, header, rows):
    """Comma-separated table, LF endings, shortest round-trip float text."""
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(repr(float(c)) if isinstance(c, (float, np.floating))
                              else str(c) for c in row) + "\n")


# ---------------------------------------------------------------------------
# result-object converters


def threshold_section(thr):
    minset = thr.minset
    if hasattr(minset, "radius"):
        ms = {"kind": "circle", "center": list(minset.center),
              "radius": minset.radius}
    else:
        ms = {"kind": "point_cloud",
              "points": np.asarray(minset.points).tolist(),
              "tolerance": minset.tolerance}
    return {"kappa": thr.kappa, "minimum_set": ms}


def certificate_section(result):
    return {
        "N": result.N,
        "a_star": result.a_star,
        "lambda_max_Q": result.lambda_max_Q,
        "certified": result.certified,
        "certified_count": result.certified_count,
        "potential_form": result.potential_form,
        "points": np.asarray(result.points).tolist(),
        "fourier_precheck": {
            "lambda_max": result.prechecked_fourier_matrix.lambda_max,
            "negative_definite": result.prechecked_fourier_matrix.negative_definite,
        },
        "schedule": [
            {"a": s.a, "lambda_max_Q": s.lambda_max_Q,
             "negative_definite": s.negative_definite,
             "kinetic_diagonal": list(s.kinetic_diagonal)}
            for s in result.diagnostics
        ],
    }


def spectrum_section(result):
    return {
        "count_below": result.count_below,
        "marginal_count": result.marginal_count,
        "mode_count": result.mode_count,
        "kappa": result.kappa,
        "edge_tol": result.edge_tol,
        "eigenvalues_below": result.eigenvalues[
            result.eigenvalues < result.kappa - result.edge_tol].tolist(),
        "pairing": [{"index": i, "partner": j, "relative_gap": g}
                    for i, j, g in result.pairing],
    }


def sweep_section(sweep):
    return {
        "cutoffs": list(sweep.cutoffs),
        "counts_below": [r.count_below for r in sweep.results],
        "count_diffs": list(sweep.count_diffs),
        "stable": sweep.stable,
        "results": [spectrum_section(r) for r in sweep.results],
    }


def profile_section(profile):
    return {
        "direction_angle": profile.direction_angle,
        "fitted_slope": profile.fitted_slope,
        "classification": profile.classification,
        "radii": profile.radii.tolist(),
        "magnitudes": profile.magnitudes.tolist(),
    }
