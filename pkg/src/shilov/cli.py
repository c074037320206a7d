"""Command-line interface: finite, polytope, smooth, regmax and dim runs.

All structured output is canonical JSON (sorted keys, two-space indent,
trailing newline); point clouds are CSV with 17-significant-digit floats.
Identical configuration and seed reproduce identical bytes.

Exit codes: 0 success, 2 input validation failure, 3 oracle or invariant
failure.  Errors are mirrored as one-line JSON on stderr.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click
import numpy as np

from . import boxdim, finite, polytopes, regmax, smooth
from .cloud import PointCloud, cloud_from_csv, cloud_to_csv
from .errors import InputError, OracleViolation, ShilovError


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(out_dir: str, name: str, text: str) -> Path:
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    target = path / name
    target.write_text(text)
    return target


def _fail(exc: Exception, code: int) -> None:
    sys.stderr.write(_dump({"error": type(exc).__name__, "message": str(exc)}))
    sys.exit(code)


def _guard(fn):
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except OracleViolation as e:
            _fail(e, 3)
        except (InputError, ShilovError, FileNotFoundError, json.JSONDecodeError) as e:
            _fail(e, 2)

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("SHILOV_JOBS", "1")))
    except ValueError:
        return 1


@click.group()
def main():
    """Shilov-boundary computations for usc function families."""


@main.command("finite")
@click.option("--input", "input_path", required=True, type=click.Path(), help="family JSON")
@click.option("--out", "out_dir", default=".", show_default=True, help="output directory")
@_guard
def finite_cmd(input_path: str, out_dir: str):
    """Exact boundary report for a tabulated family on a finite space."""
    fam = finite.family_from_json(Path(input_path).read_text())
    report = finite.analyze(fam).to_json()
    text = _dump(report)
    _write(out_dir, "report.json", text)
    click.echo(text, nl=False)


def polytope_from_json(doc: dict) -> polytopes.Polytope:
    """Build a polytope from ``{"N", "vertices"}`` or ``{"product": [...]}``."""
    if "product" in doc:
        specs = doc["product"]
        if not isinstance(specs, list) or len(specs) < 2:
            raise InputError("product: need at least two factor specs")
        factors = []
        for i, s in enumerate(specs):
            if not isinstance(s, dict):
                raise InputError(f"product[{i}]: object required")
            kind = s.get("kind", "regular")
            if kind == "regular":
                factors.append(polytopes.regular_polygon(
                    int(s.get("k", 4)), float(s.get("radius", 1.0)),
                    tuple(s.get("center", (0.0, 0.0))),
                ))
            elif kind == "polygon":
                factors.append(polytopes.polygon(s["vertices"]))
            else:
                raise InputError(f"product[{i}].kind: 'regular' or 'polygon' expected")
        body = factors[0]
        for f in factors[1:]:
            body = polytopes.product(body, f)
        return body
    if "vertices" not in doc or "N" not in doc:
        raise InputError("polytope JSON needs either 'product' or 'N' + 'vertices'")
    return polytopes.build_polytope(doc["vertices"], int(doc["N"]))


@main.command("polytope")
@click.option("--input", "input_path", required=True, type=click.Path(), help="polytope JSON")
@click.option("--q", default=0, show_default=True, help="plurisubharmonicity level")
@click.option("--count", default=2048, show_default=True, help="cloud sample size")
@click.option("--seed", default=0, show_default=True)
@click.option("--trials", default=200, show_default=True, help="exposure oracle trials")
@click.option("--out", "out_dir", default=".", show_default=True)
@_guard
def polytope_cmd(input_path: str, q: int, count: int, seed: int, trials: int, out_dir: str):
    """Shilov face set of a convex polytope for the level-q family."""
    doc = json.loads(Path(input_path).read_text())
    poly = polytope_from_json(doc)
    result = polytopes.shilov_psh(poly, q, count=count, seed=seed)
    oracle = polytopes.linear_exposure_oracle(poly, q, result, trials=trials, seed=seed)
    payload = result.to_json()
    payload["oracle"] = {
        "trials": oracle.trials,
        "probes": oracle.probes,
        "violations": len(oracle.violations),
    }
    _write(out_dir, "result.json", _dump(payload))
    _write(out_dir, "cloud.csv", cloud_to_csv(result.cloud))
    click.echo(_dump(payload), nl=False)
    if not oracle.ok:
        raise OracleViolation(
            f"{len(oracle.violations)} exposure-oracle violations; first: "
            f"{oracle.violations[0]}"
        )


@main.command("smooth")
@click.option("--domain", required=True, help="ball | ellipsoid | quartic | nonparallel_quadric")
@click.option("--param", "params", multiple=True, help="k=v factory parameter (repeatable)")
@click.option("--q", default=0, show_default=True)
@click.option("--count", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--tol", "delta", default=None, type=float, help="strictness eigenvalue margin")
@click.option("--jobs", default=None, type=int, help="worker threads (env SHILOV_JOBS)")
@click.option("--out", "out_dir", default=".", show_default=True)
@_guard
def smooth_cmd(domain, params, q, count, seed, delta, jobs, out_dir):
    """Strictly q-pseudoconvex boundary flags from a defining function."""
    kwargs = {}
    for p in params:
        if "=" not in p:
            raise InputError(f"--param {p!r}: expected k=v")
        k, v = p.split("=", 1)
        try:
            kwargs[k] = json.loads(v)
        except json.JSONDecodeError:
            kwargs[k] = v
    dom = smooth.make_domain(domain, **kwargs)
    jobs = jobs if jobs is not None else _default_jobs()
    flagged = smooth.strict_q_set(dom, q, count=count, seed=seed, delta=delta, jobs=jobs)
    n = dom.n
    m = len(flagged.points)
    eigs = np.array([r.restricted.eigenvalues for r in flagged.reports]).reshape(m, n - 1)
    all_flags = {
        f"flag_q{qq}": np.array([r.strictly_q_pc(qq) for r in flagged.reports], dtype=int)
        for qq in range(n)
    }
    extra = {f"eig{i+1}": eigs[:, i] for i in range(n - 1)}
    extra.update(all_flags)
    extra["closure"] = flagged.closure.astype(int)
    csv_text = cloud_to_csv(PointCloud(points=flagged.points, provenance=f"smooth:{domain}"), extra)
    hist, edges = np.histogram(eigs.flatten(), bins=20) if eigs.size else (np.zeros(0), np.zeros(0))
    summary = {
        "domain": domain,
        "q": q,
        "count_requested": count,
        "count_accepted": m,
        "seed": seed,
        "delta": flagged.reports[0].delta if flagged.reports else None,
        "flag_fractions": {
            str(qq): float(np.mean(all_flags[f"flag_q{qq}"])) if m else None for qq in range(n)
        },
        "spectrum_histogram": {
            "counts": [int(c) for c in hist],
            "edges": [float(e) for e in edges],
        },
    }
    _write(out_dir, "cloud.csv", csv_text)
    _write(out_dir, "summary.json", _dump(summary))
    click.echo(_dump(summary), nl=False)


@main.command("regmax")
@click.option("-t", "tvals", required=True, help="comma-separated arguments")
@click.option("-e", "epsilons", required=True, help="comma-separated smoothing widths")
@click.option("--nodes", default=32, show_default=True)
@_guard
def regmax_cmd(tvals: str, epsilons: str, nodes: int):
    """Regularized maximum of a tuple; prints a plain decimal."""
    try:
        t = [float(v) for v in tvals.split(",") if v]
        eps = [float(v) for v in epsilons.split(",") if v]
    except ValueError as e:
        raise InputError(f"bad numeric list: {e}") from e
    params = regmax.RegMaxParams(epsilons=tuple(eps), nodes=nodes)
    click.echo(format(regmax.reg_max(t, params), ".17g"))


@main.command("dim")
@click.option("--cloud", "cloud_path", required=True, type=click.Path())
@click.option("--scales", required=True, help="comma-separated box sides")
@click.option("--out", "out_dir", default=".", show_default=True)
@_guard
def dim_cmd(cloud_path: str, scales: str, out_dir: str):
    """Box-counting dimension estimate for a point-cloud CSV."""
    cloud = cloud_from_csv(Path(cloud_path).read_text())
    try:
        scale_list = [float(s) for s in scales.split(",") if s]
    except ValueError as e:
        raise InputError(f"bad scales list: {e}") from e
    est = boxdim.box_dimension(cloud, scale_list)
    text = _dump(est.to_json())
    _write(out_dir, "estimate.json", text)
    click.echo(text, nl=False)


if __name__ == "__main__":
    main()
