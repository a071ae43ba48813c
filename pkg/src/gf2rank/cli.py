"""Command-line entry point: thresholds, curves, sampling, rank/core analysis,
exact formulas, Monte Carlo experiments, and the verification suites.

Exit codes: 0 success, 2 parse/parameter error, 3 verification failure,
4 numerical-precision failure.
"""

from __future__ import annotations

import functools
import json
import os
import sys
from dataclasses import dataclass

import click
import mpmath as mp

from . import __version__, thresholds, verification
from .errors import (
    InvalidDistribution,
    InvalidParam,
    NoConvergence,
    NumericalResidue,
    ParseError,
    PrecisionLoss,
    TruncationTooSmall,
)
from .exact import (
    ParitySpec,
    expected_null_count,
    gfq_dense_survival,
    multinomial_parity,
    pi_multinomial,
    poissonization_check,
    prob_A_general,
)
from .experiments import ExperimentConfig, run_experiment, write_records_csv
from .gf2 import GF2Matrix, corank, enumerate_null_vectors, is_one_null, matrix_from_text, matrix_to_text
from .peeling import Hypergraph, check_E, peel_2core
from .sampling import SampleConfig, derive_stream_seed, run_Tn, sample_matrix
from .thresholds import _psi as psi_extended, core_theory, g_star, h_psi, threshold_report
from .weights import WeightDist, parse_rho


@dataclass
class CliInvocation:
    """Resolved invocation, logged into every output header."""

    subcommand: str
    params: dict


def _envelope(inv: CliInvocation, result) -> dict:
    return {
        "tool": "gf2rank",
        "version": __version__,
        "command": inv.subcommand,
        "config": inv.params,
        "result": result,
    }


def _num(x) -> dict:
    """Full-precision decimal string plus a rounded double convenience field."""
    if isinstance(x, mp.mpf):
        return {"decimal": mp.nstr(x, 40), "double": float(x)}
    return {"decimal": f"{float(x):.17g}", "double": float(x)}


def _json_default(o):
    if isinstance(o, mp.mpf):
        return mp.nstr(o, 40)
    if hasattr(o, "numerator") and hasattr(o, "denominator"):
        return f"{o.numerator}/{o.denominator}"
    if isinstance(o, WeightDist):
        return json.loads(o.to_json())
    raise TypeError(f"cannot serialize {type(o)}")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text)


def _emit_json(inv: CliInvocation, result, out: str | None) -> None:
    _emit(json.dumps(_envelope(inv, result), indent=2, default=_json_default), out)


def _guard(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ParseError, InvalidDistribution, InvalidParam) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except (PrecisionLoss, NumericalResidue, TruncationTooSmall, NoConvergence) as exc:
            click.echo(f"numerical error: {exc}", err=True)
            sys.exit(4)
    return wrapper


@click.group()
@click.version_option(__version__)
def main():
    """Sparse random GF(2) matrices: thresholds, 2-cores, and exact formulas."""


# --- thresholds -------------------------------------------------------------

@main.command("thresholds")
@click.option("--rho", "rho_spec", default=None, help="Weight spec, e.g. 'r=3' or '0.9:3,0.1:24'.")
@click.option("--alpha", type=float, default=None, help="Witness alpha for gamma0/beta0.")
@click.option("--scan-step", type=float, default=thresholds.ALPHA_BAR_STEP,
              show_default=True, help="alpha scan step for the alpha_bar sign change.")
@click.option("--table1", "table1", is_flag=True, help="Emit the fixed-weight table for r=1..8.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guard
def cmd_thresholds(rho_spec, alpha, scan_step, table1, fmt, out):
    """Compute alpha_sharp, alpha_star, alpha_bar, and the g_star jump set."""
    if table1:
        rows = []
        for r in range(1, 9):
            dist = WeightDist.fixed(r)
            sharp, _ = thresholds.alpha_sharp(dist)
            star = thresholds.alpha_star(dist)
            bar = thresholds.alpha_bar(dist) if r >= 3 else None
            rows.append({"r": r, "alpha_sharp": _num(sharp), "alpha_star": _num(star),
                         "alpha_bar": _num(bar) if bar is not None else None})
        inv = CliInvocation("thresholds", {"table1": True, "format": fmt})
        if fmt == "text":
            lines = [f"{'r':>2} {'alpha_sharp':>12} {'alpha_star':>12} {'alpha_bar':>12}"]
            for row in rows:
                bar = row["alpha_bar"]
                lines.append(f"{row['r']:>2} {row['alpha_sharp']['double']:>12.6f} "
                             f"{row['alpha_star']['double']:>12.6f} "
                             f"{bar['double'] if bar else float('nan'):>12.6f}"
                             .replace("nan", "     —"))
            _emit("\n".join(lines), out)
        else:
            _emit_json(inv, {"table": rows}, out)
        return
    if rho_spec is None:
        raise ParseError("--rho is required unless --table1 is given")
    dist = parse_rho(rho_spec)
    report = threshold_report(dist, witness_alpha=alpha, scan_step=scan_step)
    inv = CliInvocation("thresholds", {"rho": rho_spec, "alpha": alpha,
                                       "scan_step": scan_step, "format": fmt})
    payload = {
        "alpha_sharp": _num(report.alpha_sharp),
        "alpha_star": _num(report.alpha_star),
        "alpha_bar": _num(report.alpha_bar) if report.alpha_bar is not None else None,
        "x_star": _num(report.x_star) if report.x_star is not None else None,
        "x_star_is_psi_root": report.x_star_is_psi_root,
        "bar_crossing_transversal": report.bar_crossing_transversal,
        "discontinuities": [
            {"alpha": _num(a), "g_left": _num(l), "g_right": _num(r)}
            for a, l, r in report.discontinuities
        ],
        "gamma0": _num(report.gamma0) if report.gamma0 is not None else None,
        "beta0": _num(report.beta0) if report.beta0 is not None else None,
        "witness_alpha": report.witness_alpha,
        "tolerances": report.tolerances,
    }
    if fmt == "text":
        lines = [f"alpha_sharp = {report.alpha_sharp:.9f}",
                 f"alpha_star  = {report.alpha_star:.9f}"]
        if report.alpha_bar is not None:
            lines.append(f"alpha_bar   = {report.alpha_bar:.9f}")
            lines.append(f"x_star      = {report.x_star:.9f}")
        else:
            lines.append("alpha_bar   = —  (undefined for min weight < 3)")
        for a, l, r in report.discontinuities:
            lines.append(f"g_star jump at alpha={a:.9f}: {l:.6f} -> {r:.6f}")
        _emit("\n".join(lines), out)
    else:
        _emit_json(inv, payload, out)


@main.command("curves")
@click.option("--rho", "rho_spec", required=True)
@click.option("--what", default="h,psi",
              help="Comma list: h,psi (over x) or gstar,psi_of_gstar (over alpha).")
@click.option("--grid", type=int, default=2000, show_default=True)
@click.option("--lo", type=float, default=None, help="Lower end of the grid.")
@click.option("--hi", type=float, default=None, help="Upper end of the grid.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guard
def cmd_curves(rho_spec, what, grid, lo, hi, out):
    """Emit curve data as CSV for figure reproduction."""
    dist = parse_rho(rho_spec)
    names = tuple(w.strip() for w in what.split(","))
    x_kind = set(names) <= {"h", "psi"}
    a_kind = set(names) <= {"gstar", "psi_of_gstar"}
    if not (x_kind or a_kind):
        raise ParseError(f"--what must be a subset of h,psi or of gstar,psi_of_gstar; got {names}")
    lines = [f"# tool=gf2rank version={__version__} rho={rho_spec} what={what}"]
    if x_kind:
        lo = 1e-6 if lo is None else lo
        hi = 1.0 - 1e-9 if hi is None else hi
        lines.append("x," + ",".join(names))
        for i in range(grid + 1):
            x = lo + (hi - lo) * i / grid
            hv, pv, _, _ = h_psi(dist, x)
            vals = {"h": hv, "psi": pv}
            lines.append(f"{x:.12g}," + ",".join(f"{vals[n]:.12g}" for n in names))
    else:
        sharp, minima = thresholds.alpha_sharp(dist)
        lo = sharp if lo is None else lo
        hi = 1.02 if hi is None else hi
        jumps = thresholds.discontinuities(dist)
        lines.append("alpha," + ",".join(names))

        def row(a, g):
            vals = {"gstar": g, "psi_of_gstar": psi_extended(dist, g)}
            return f"{a:.12g}," + ",".join(f"{vals[n]:.12g}" for n in names)

        for i in range(grid + 1):
            a = lo + (hi - lo) * i / grid
            lines.append(row(a, g_star(dist, a, minima)))
        for a, g_left, g_right in jumps:
            if lo <= a <= hi:
                lines.append(row(a, g_left))
                lines.append(row(a, g_right))
    _emit("\n".join(lines), out)


# --- sampling and matrix analysis -------------------------------------------

@main.command("sample")
@click.option("--rho", "rho_spec", required=True)
@click.option("-n", "n", type=int, required=True)
@click.option("-m", "m", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--model", type=click.Choice(["exact", "binomial"]), default="exact")
@click.option("--format", "fmt", type=click.Choice(["sparse", "dense"]), default="sparse")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guard
def cmd_sample(rho_spec, n, m, seed, model, fmt, out):
    """Sample M(n, m) and print it in the sparse or dense text format."""
    cfg = SampleConfig(n=n, m=m, dist=parse_rho(rho_spec), model=model, seed=seed)
    text = f"# tool=gf2rank version={__version__} rho={rho_spec} n={n} m={m} seed={seed} model={model}\n"
    _emit(text + matrix_to_text(sample_matrix(cfg), fmt), out)


def _read_matrix(path: str | None, n: int | None) -> GF2Matrix:
    text = sys.stdin.read() if path in (None, "-") else open(path, encoding="utf-8").read()
    return matrix_from_text(text, n_cols=n)


@main.command("rank")
@click.option("--in", "path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Matrix file (sparse or dense text); stdin if omitted.")
@click.option("-n", "n", type=int, default=None, help="Column count (inferred if omitted).")
@click.option("--enumerate", "enum", is_flag=True, help="Also enumerate null vectors (m <= 24).")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guard
def cmd_rank(path, n, enum, out):
    """GF(2) rank, corank, and the all-ones-null flag of a matrix."""
    mat = _read_matrix(path, n)
    sigma = corank(mat)
    result = {
        "n_cols": mat.n_cols,
        "m": mat.m,
        "rank": mat.m - sigma,
        "corank": sigma,
        "log2_null_count": sigma,
        "is_one_null": is_one_null(mat),
    }
    if enum:
        vectors, profile = enumerate_null_vectors(mat)
        result["null_vectors"] = [f"{v:0{mat.m}b}"[::-1] for v in vectors]
        result["weight_profile"] = profile
    _emit_json(CliInvocation("rank", {"in": path, "n": n}), result, out)


@main.command("core")
@click.option("--in", "path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--rho", "rho_spec", default=None, help="Sample a matrix instead of reading one.")
@click.option("-n", "n", type=int, default=None)
@click.option("-m", "m", type=int, default=None)
@click.option("--seed", type=int, default=0)
@click.option("--model", type=click.Choice(["exact", "binomial"]), default="exact")
@click.option("--eps", type=float, default=0.05, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guard
def cmd_core(path, rho_spec, n, m, seed, model, eps, out):
    """Peel to the 2-core; report stats next to the limit-law predictions."""
    if rho_spec is not None:
        if n is None or m is None:
            raise ParseError("--rho sampling needs -n and -m")
        dist = parse_rho(rho_spec)
        mat = sample_matrix(SampleConfig(n=n, m=m, dist=dist, model=model, seed=seed))
    else:
        mat = _read_matrix(path, n)
        dist = None
    stats = peel_2core(Hypergraph.from_matrix(mat))
    result = {
        "n": mat.n_cols,
        "m": mat.m,
        "core_rows": stats.core_rows,
        "occupied_cols": stats.occupied_cols,
        "incidences": stats.incidences,
        "rows_by_weight": stats.rows_by_weight,
        "cols_by_degree": stats.cols_by_degree,
        "eps_max": stats.core_rows / mat.n_cols,
        "E_event": check_E(stats, mat.n_cols, eps),
    }
    if dist is not None and dist.min_weight >= 3:
        th = core_theory(dist, mat.m / mat.n_cols)
        result["theory"] = {
            "g_star": th.g_star,
            "core_row_frac": th.core_row_frac,
            "occupied_col_frac": th.occupied_col_frac,
            "incidence_frac": th.incidence_frac,
            "aspect_sign": th.aspect_sign,
        }
    inv = CliInvocation("core", {"in": path, "rho": rho_spec, "n": n, "m": m,
                                 "seed": seed, "model": model, "eps": eps})
    _emit_json(inv, result, out)


@main.command("tn")
@click.option("--rho", "rho_spec", required=True)
@click.option("-n", "n", type=int, required=True)
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--model", type=click.Choice(["exact", "binomial"]), default="exact")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guard
def cmd_tn(rho_spec, n, trials, seed, model, out):
    """First-dependency times: CSV with columns trial,seed,T_n,n,T_n/n."""
    dist = parse_rho(rho_spec)
    lines = [f"# tool=gf2rank version={__version__} rho={rho_spec} n={n} trials={trials} seed={seed} model={model}",
             "trial,seed,T_n,n,T_n/n"]
    for t in range(trials):
        s = derive_stream_seed(seed, t)
        tn = run_Tn(SampleConfig(n=n, m=0, dist=dist, model=model, seed=s))
        lines.append(f"{t},{s},{tn},{n},{tn / n:.8f}")
    _emit("\n".join(lines), out)


# --- exact formulas -----------------------------------------------------------

@main.command("exact")
@click.option("--what", type=click.Choice(["pi", "pa", "en", "poisson", "parity", "gfq"]),
              required=True)
@click.option("--rho", "rho_spec", default=None)
@click.option("-n", "n", type=int, default=None)
@click.option("-m", "m", type=int, default=None)
@click.option("--model", type=click.Choice(["exact", "binomial"]), default="exact")
@click.option("--precision", type=int, default=256, show_default=True, help="Bits.")
@click.option("--mu", type=float, default=1.0, help="Poissonization rate.")
@click.option("--truncation", type=int, default=None)
@click.option("--q", type=int, default=2)
@click.option("--r", type=int, default=None, help="Offset for gfq survival.")
@click.option("--k", "k", type=int, default=1, help="Tracked events for parity.")
@click.option("--modulus", type=int, default=2, help="Congruence modulus for parity.")
@click.option("--targets", default="0", help="Comma-separated residues, length k.")
@click.option("--cell-probs", default=None, help="Comma-separated 2^k cell probabilities.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guard
def cmd_exact(what, rho_spec, n, m, model, precision, mu, truncation, q, r, k,
              modulus, targets, cell_probs, out):
    """Evaluate one of the exactly computable probabilities."""
    params = {"what": what, "rho": rho_spec, "n": n, "m": m, "model": model,
              "precision": precision}
    if what == "pi":
        dist = parse_rho(rho_spec or "r=1")
        val = pi_multinomial(n, m, dist, precision=precision)
        result = {"pi": _num(val)}
    elif what == "pa":
        dist = parse_rho(rho_spec)
        val = prob_A_general(n, m, dist.per_n_law_exact(n), precision=precision)
        result = {"prob_A": _num(val)}
    elif what == "en":
        dist = parse_rho(rho_spec)
        total, profile = expected_null_count(n, m, dist, model=model, precision=precision)
        result = {"expected_null_count": _num(total),
                  "profile": {str(l): _num(v) for l, v in profile.items()}}
    elif what == "poisson":
        params.update({"mu": mu, "truncation": truncation})
        lhs, rhs = poissonization_check(n, m, mu, truncation=truncation, precision=precision)
        result = {"lhs": _num(lhs), "rhs": _num(rhs), "abs_diff": _num(abs(lhs - rhs))}
    elif what == "parity":
        t = tuple(int(x) for x in targets.split(","))
        if cell_probs is None:
            raise ParseError("--cell-probs is required for --what parity")
        probs = tuple(float(x) for x in cell_probs.split(","))
        spec = ParitySpec(k=k, r=modulus, targets=t, cell_probs=probs)
        params.update({"k": k, "modulus": modulus, "targets": targets,
                       "cell_probs": cell_probs})
        result = {"probability": _num(multinomial_parity(spec, n))}
    else:  # gfq
        params.update({"q": q, "r": r})
        if r is None:
            raise ParseError("--r is required for --what gfq")
        result = {"survival": _num(gfq_dense_survival(q, r, n))}
    _emit_json(CliInvocation("exact", params), result, out)


# --- experiments ---------------------------------------------------------------

@main.command("simulate")
@click.option("--exp", "exp_id",
              type=click.Choice(["tn", "core", "null-growth", "classical", "profile", "dense"]),
              required=True)
@click.option("--rho", "rho_spec", default=None)
@click.option("-n", "n_values", type=int, multiple=True, required=True)
@click.option("--alpha", type=float, default=0.95, show_default=True)
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--model", type=click.Choice(["exact", "binomial"]), default="exact")
@click.option("--eps", type=float, default=0.05, show_default=True)
@click.option("--window-eps", type=float, default=0.02, show_default=True)
@click.option("--z", type=float, default=1.0, show_default=True)
@click.option("--r-values", default="1,2,3,4,5", show_default=True)
@click.option("--threads", type=int, default=None, help="Trial fan-out (default: cores).")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None,
              help="Write per-trial records here.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guard
def cmd_simulate(exp_id, rho_spec, n_values, alpha, trials, seed, model, eps,
                 window_eps, z, r_values, threads, csv_path, out):
    """Run one Monte Carlo experiment; JSON summary plus optional CSV records."""
    dist = parse_rho(rho_spec) if rho_spec else None
    if exp_id != "dense" and dist is None:
        raise ParseError(f"--rho is required for --exp {exp_id}")
    cfg = ExperimentConfig(
        experiment=exp_id,
        dist=dist,
        n_values=tuple(n_values),
        trials=trials,
        seed=seed,
        alpha=alpha,
        model=model,
        eps=eps,
        window_eps=window_eps,
        z=z,
        r_values=tuple(int(x) for x in r_values.split(",")),
        threads=threads if threads is not None else (os.cpu_count() or 1),
    )
    res = run_experiment(cfg)
    if csv_path:
        write_records_csv(csv_path, res.records,
                          meta={"tool": "gf2rank", "version": __version__, **res.config})
    _emit_json(CliInvocation("simulate", res.config), res.summary, out)


@main.command("verify")
@click.argument("suite", type=click.Choice(list(verification.SUITES)))
@_guard
def cmd_verify(suite):
    """Run a named verification suite; exit 3 if any check fails."""
    checks = verification.run_suite(suite)
    failed = 0
    for c in checks:
        click.echo(c.line())
        failed += 0 if c.passed else 1
    click.echo(f"{len(checks) - failed}/{len(checks)} checks passed")
    if failed:
        sys.exit(3)


if __name__ == "__main__":
    main()
