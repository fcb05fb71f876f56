"""Command-line front end.

Settings come from a JSON or YAML config file (``--config`` or the
``DEHNFLOER_CONFIG`` environment variable), then flags override them.
Exit codes: 0 ok, 1 a check failed, 2 bad usage or config, 3 a topological
hypothesis is violated, 4 a numerical tolerance was not met.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any

import click
import yaml

from . import BACKEND, __version__
from .errors import DomainError, NumericError, ShapeError
from .floer import hf_space
from .indexcalc import (
    OrbitKind,
    SectionIndexData,
    Topology,
    check_monotonicity,
    cz,
    force_zero_wrapping,
    fredholm_index,
)
from .surface import SurfaceSpec, TwistCurveSpec, complement, homology

CONFIG_ENV = "DEHNFLOER_CONFIG"
FLOAT_DIGITS = 12

EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERIC = 1, 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    genus: int = 2
    boundary: int = 0
    curve: str = "nonsep"
    split: tuple[int, int, int, int] | None = None
    m: int = 2
    n: int = 3
    p: int | None = None
    bound: int = 10
    tolerance: float = 1e-9
    workers: int = 1
    output: str | None = None
    certificate: str = "nocrossing_certificate.json"

    def validate(self) -> "RunConfig":
        if self.curve not in ("nonsep", "sep"):
            raise ShapeError("curve must be 'nonsep' or 'sep'")
        if self.curve == "sep" and (self.split is None or len(self.split) != 4):
            raise ShapeError("a separating curve needs split = [g1, b1, g2, b2]")
        if self.genus < 0 or self.boundary < 0:
            raise ShapeError("genus and boundary must be nonnegative")
        if self.m < 1 or self.n < 1 or (self.p is not None and self.p < 1):
            raise ShapeError("powers m, n, p must be positive")
        if self.bound < 1 or self.workers < 1 or self.tolerance <= 0:
            raise ShapeError("bound and workers must be positive, tolerance > 0")
        return self

    @property
    def surface(self) -> SurfaceSpec:
        return SurfaceSpec(self.genus, self.boundary)

    @property
    def twist_curve(self) -> TwistCurveSpec:
        if self.curve == "sep":
            return TwistCurveSpec.separating(*self.split)
        return TwistCurveSpec.nonseparating()


_NESTED = {
    ("surface", "genus"): "genus",
    ("surface", "boundary"): "boundary",
    ("curve", "kind"): "curve",
    ("curve", "split"): "split",
    ("powers", "m"): "m",
    ("powers", "n"): "n",
    ("powers", "p"): "p",
}


def load_config(path: str | None) -> RunConfig:
    """Read a config file; nested ``surface``/``curve``/``powers`` sections are flattened."""
    if not path:
        return RunConfig()
    try:
        text = Path(path).read_text()
        raw = json.loads(text) if path.endswith(".json") else yaml.safe_load(text)
    except (OSError, ValueError, yaml.YAMLError) as exc:
        raise ShapeError(f"cannot read config {path}: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ShapeError("config must be a mapping")
    flat: dict[str, Any] = {}
    for key, val in raw.items():
        if isinstance(val, dict):
            for sub, v in val.items():
                if (key, sub) not in _NESTED:
                    raise ShapeError(f"unknown config key {key}.{sub}")
                flat[_NESTED[key, sub]] = v
        else:
            flat[key] = val
    if flat.get("curve") in ("nonseparating", "separating"):
        flat["curve"] = "sep" if flat["curve"] == "separating" else "nonsep"
    if flat.get("split") is not None:
        flat["split"] = tuple(int(x) for x in flat["split"])
    known = set(RunConfig.__dataclass_fields__)
    unknown = sorted(set(flat) - known)
    if unknown:
        raise ShapeError(f"unknown config keys {unknown}")
    try:
        return RunConfig(**flat)
    except TypeError as exc:
        raise ShapeError(str(exc)) from exc


def _clean(obj: Any) -> Any:
    """Round floats so identical runs print identical bytes."""
    if isinstance(obj, float):
        return float(f"{obj:.{FLOAT_DIGITS}g}")
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        click.echo(text, nl=False)


def _header(cfg: RunConfig) -> dict:
    return {
        "surface": {"genus": cfg.genus, "boundary": cfg.boundary},
        "curve": cfg.twist_curve.to_json(),
    }


class _Group(click.Group):
    """Maps library errors onto exit codes."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except DomainError as exc:
            click.echo(f"domain error: {exc}", err=True)
            ctx.exit(EXIT_DOMAIN)
        except NumericError as exc:
            click.echo(f"numeric error: {exc}", err=True)
            ctx.exit(EXIT_NUMERIC)
        except ShapeError as exc:
            click.echo(f"usage error: {exc}", err=True)
            ctx.exit(EXIT_USAGE)


_OVERRIDES = [
    click.option("--genus", type=int),
    click.option("--boundary", type=int),
    click.option("--curve", type=click.Choice(["nonsep", "sep"])),
    click.option("--split", help="g1,b1,g2,b2 for a separating curve"),
    click.option("-m", "m", type=int),
    click.option("-n", "n", type=int),
    click.option("-p", "p", type=int),
    click.option("--bound", type=int, help="enumeration bound Q"),
    click.option("--tolerance", type=float),
    click.option("--workers", type=int),
    click.option("--output", "-o", help="write to this file instead of stdout"),
]


def with_overrides(fn):
    for opt in reversed(_OVERRIDES):
        fn = opt(fn)
    return fn


def _config(ctx: click.Context, overrides: dict) -> RunConfig:
    cfg: RunConfig = ctx.obj
    if overrides.get("split"):
        try:
            overrides["split"] = tuple(int(x) for x in overrides["split"].split(","))
        except ValueError as exc:
            raise ShapeError("--split takes four comma-separated integers") from exc
    changes = {k: v for k, v in overrides.items() if v is not None}
    return replace(cfg, **changes).validate()


@click.group(cls=_Group)
@click.option("--config", "config_path", envvar=CONFIG_ENV, help="JSON or YAML config file")
@click.version_option(__version__)
@click.pass_context
def main(ctx: click.Context, config_path: str | None) -> None:
    """Floer homology of iterated Dehn twists, its product and coproduct, and the checks behind them."""
    ctx.obj = load_config(config_path)


@main.command("homology")
@with_overrides
@click.pass_context
def homology_cmd(ctx, **kw):
    """Basis and dimensions of the homology of the cut surface."""
    cfg = _config(ctx, kw)
    cs = complement(cfg.surface, cfg.twist_curve)
    H = homology(cs)
    comps = [{"genus": c.genus, "boundary": c.boundary_count, "tags": [list(t) for t in c.tags]} for c in cs.components]
    _emit(cfg, dumps({**_header(cfg), "components": comps, "dims_by_degree": list(H.dims_by_degree()),
                      "basis": H.to_json()}))


@main.command("hf")
@with_overrides
@click.pass_context
def hf_cmd(ctx, **kw):
    """HF of the m-th power: homology of the cut surface plus twist generators."""
    cfg = _config(ctx, kw)
    fs = hf_space(cfg.surface, cfg.twist_curve, cfg.m)
    _emit(cfg, dumps({**_header(cfg), "hf": fs.to_json(), "twist_part": [str(g) for g in fs.twist_part]}))


@main.command("product")
@with_overrides
@click.pass_context
def product_cmd(ctx, **kw):
    """Product matrix HF(m) x HF(n) -> HF(m+n), with an associativity check when -p is given."""
    from .structmaps import check_associativity, product_map

    cfg = _config(ctx, kw)
    mu = product_map(cfg.surface, cfg.twist_curve, cfg.m, cfg.n)
    checks = []
    if cfg.p:
        checks = [c.to_json() for c in check_associativity(cfg.surface, cfg.twist_curve, cfg.m, cfg.n, cfg.p).identity_checks]
    _emit(cfg, dumps({**_header(cfg), "m": cfg.m, "n": cfg.n, "map": mu.to_json(), "checks": checks}))
    if not all(c["pass"] for c in checks):
        ctx.exit(EXIT_FAIL)


@main.command("coproduct")
@with_overrides
@click.pass_context
def coproduct_cmd(ctx, **kw):
    """Coproduct matrix HF(m+n) -> HF(m) x HF(n), with cocommutativity and (with -p) coassociativity."""
    from .structmaps import check_coassociativity, check_cocommutativity, coproduct_map

    cfg = _config(ctx, kw)
    s, c = cfg.surface, cfg.twist_curve
    delta = coproduct_map(s, c, cfg.m, cfg.n)
    reports = [check_cocommutativity(s, c, cfg.m, cfg.n)]
    if cfg.p:
        reports.append(check_coassociativity(s, c, cfg.m, cfg.n, cfg.p))
    checks = [chk.to_json() for r in reports for chk in r.identity_checks]
    rows = {str(lab): [[str(x) for x in t] for t in delta.image(lab)]
            for lab in delta.source.labels if not hasattr(lab, "component")}
    _emit(cfg, dumps({**_header(cfg), "m": cfg.m, "n": cfg.n, "twist_rows": rows, "map": delta.to_json(),
                      "checks": checks}))
    if not all(ch["pass"] for ch in checks):
        ctx.exit(EXIT_FAIL)


@main.command("verify-nocrossing")
@with_overrides
@click.option("--mode", "modes", multiple=True, type=click.Choice(["product", "coproduct", "cylinder"]))
@click.option("--relaxed", is_flag=True, help="use the non-strict energy inequalities (control run)")
@click.option("--certificate", help="where to write the certificate JSON")
@click.pass_context
def nocross_cmd(ctx, modes, relaxed, certificate, **kw):
    """Enumerate crossing configurations up to the bound and write a certificate."""
    from .nocross import verify_grid

    cfg = _config(ctx, kw)
    modes = modes or ("product", "coproduct")
    results = verify_grid(modes, [cfg.m], [cfg.n], cfg.bound, not relaxed, cfg.workers)
    summary = []
    cert = []
    for r in results:
        sc = r.scenario
        summary.append({"mode": sc.mode, "m": sc.m, "n": sc.n, "bound": sc.bound, "strict": sc.strict,
                        "searched": r.searched, "feasible": len(r.feasible), "empty": r.empty})
        cert.append({"mode": sc.mode, "m": sc.m, "n": sc.n, "bound": sc.bound, "strict": sc.strict,
                     "entries": [e.to_json() for e in r.certificate],
                     "feasible": [f.to_json() for f in r.feasible]})
    path = certificate or cfg.certificate
    Path(path).write_text(dumps(cert))
    _emit(cfg, dumps({"results": summary, "certificate": path}))
    if not relaxed and not all(r.empty for r in results):
        ctx.exit(EXIT_FAIL)


@main.command("index")
@with_overrides
@click.pass_context
def index_cmd(ctx, **kw):
    """Conley-Zehnder values, twist-region index, monotonicity and wrapping verdicts."""
    cfg = _config(ctx, kw)
    s, c = cfg.surface, cfg.twist_curve
    verdict = check_monotonicity(s, c)
    topo = Topology.from_surface(s, c)
    free = SectionIndexData((OrbitKind.HYPERBOLIC,), (OrbitKind.ELLIPTIC, OrbitKind.ELLIPTIC), topology=topo,
                            wrapping=(0,) * len(topo.genera))
    pinned = replace(free, fixed_ends=1)
    _emit(cfg, dumps({
        **_header(cfg),
        "cz": {k.value: cz(k) for k in OrbitKind},
        "twist_region_index": {"free": fredholm_index(free), "one_end_fixed": fredholm_index(pinned)},
        "monotonicity": verdict.to_json(),
        "wrapping": force_zero_wrapping(topo, 0).to_json(),
        "topology": topo.to_json(),
    }))


@main.command("ode")
@with_overrides
@click.option("--k", "k", type=int, required=True, help="slice index on the chosen end")
@click.option("--end", type=click.Choice(["inf", "1", "2"]), default="inf")
@click.option("--c", "c", type=float, help="end constant; default is the shot value for inf, c_inf+1 otherwise")
@click.option("--span", type=float, default=30.0)
@click.option("--samples", type=int, default=301)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.pass_context
def ode_cmd(ctx, k, end, c, span, samples, fmt, **kw):
    """Sample an end trajectory x(s) as CSV (s, x), or a JSON summary with c_inf."""
    from .moduli import NEGATIVE, POSITIVE, OdeProblem, c_star, solve_end_ode

    cfg = _config(ctx, kw)
    coeff = {"inf": cfg.m + cfg.n, "1": cfg.m, "2": cfg.n}[end]
    p = OdeProblem(coeff, k, POSITIVE if end == "inf" else NEGATIVE, tolerance=cfg.tolerance)
    if c is None:
        if end == "inf":
            c = c_star(p)
        else:
            k_inf = min(k + (cfg.n if end == "1" else cfg.m), cfg.m + cfg.n)
            c = c_star(OdeProblem(cfg.m + cfg.n, k_inf)) + 1.0
    traj = solve_end_ode(p, c, span, samples)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "x"])
        for s_val, x_val in traj.to_rows():
            w.writerow([f"{s_val:.{FLOAT_DIGITS}g}", f"{x_val:.{FLOAT_DIGITS}g}"])
        _emit(cfg, buf.getvalue())
    else:
        _emit(cfg, dumps({"end": end, "coeff": coeff, "k": k, "c": c, "limit": p.limit,
                          "x_far": float(traj.x[-1]), "max_residual": traj.max_residual}))


@main.command("cascades")
@with_overrides
@click.pass_context
def cascades_cmd(ctx, **kw):
    """Cascade counts for every end triple, and the comparison with the coproduct formula."""
    from .gf2 import restrict_source
    from .moduli import CascadeSpec, coproduct_from_cascades, count_cascades, moduli_descriptor
    from .structmaps import coproduct_map

    cfg = _config(ctx, kw)
    m, n = cfg.m, cfg.n
    rows = []
    for k_inf in range(1, m + n):
        for k1 in range(max(0, k_inf - n), min(m, k_inf) + 1):
            desc = moduli_descriptor(m, n, k_inf, k1, k_inf - k1)
            counts = {end: count_cascades(CascadeSpec(m, n, k_inf, k1, k_inf - k1, end)) for end in ("inf", "1", "2")}
            rows.append({"k_inf": k_inf, "k1": k1, "k2": k_inf - k1, "moduli": desc.kind, "counts": counts})
    cas = coproduct_from_cascades(m, n, cfg.surface, cfg.twist_curve)
    block = restrict_source(coproduct_map(cfg.surface, cfg.twist_curve, m, n), cas.source.labels)
    agree = block.matrix == cas.matrix
    _emit(cfg, dumps({**_header(cfg), "m": m, "n": n, "cascades": rows, "matches_coproduct": agree}))
    if not agree:
        ctx.exit(EXIT_FAIL)


@main.command("check-all")
@click.option("--workers", type=int, default=4)
@click.option("--output", "-o")
@click.pass_context
def check_all_cmd(ctx, workers, output):
    """Run every acceptance check; exit 1 if any fails."""
    from .acceptance import CRITERIA, criterion_5

    results = [criterion_5(workers) if f is criterion_5 else f() for f in CRITERIA]
    for r in results:
        click.echo(r.line(), err=True)
    text = dumps({"backend": BACKEND, "criteria": [r.to_json() for r in results]})
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)
    if not all(r.ok for r in results):
        ctx.exit(EXIT_FAIL)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
