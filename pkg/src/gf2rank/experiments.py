"""Monte Carlo harness confronting simulation with the analytic limits.

Every experiment is reproducible from (experiment id, seed, config): trial t
draws its stream from PCG64 seeded with ``seed XOR t``, so fan-out order does
not matter and parallel and serial runs aggregate identically.
"""

from __future__ import annotations

import csv
import math

import mpmath as mp
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .errors import InvalidParam
from .exact import expected_null_count, gfq_dense_survival
from .gf2 import RankState, corank, enumerate_null_vectors
from .peeling import Hypergraph, peel_2core
from .sampling import SampleConfig, derive_stream_seed, make_rng, run_Tn, sample_matrix
from .thresholds import (
    F_of_alpha,
    alpha_bar,
    alpha_star,
    core_theory,
)
from .weights import WeightDist

EXPERIMENTS = ("tn", "core", "null-growth", "classical", "profile", "dense")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    dist: WeightDist | None
    n_values: tuple
    trials: int
    seed: int
    alpha: float = 0.95
    model: str = "exact"
    eps: float = 0.05         # core-size threshold in E(n, m; eps)
    window_eps: float = 0.02  # slack around [alpha_star, alpha_bar] for T_n
    z: float = 1.0            # tail point for the classical r=1,2 limits
    r_values: tuple = (1, 2, 3, 4, 5)  # dense-model survival offsets
    threads: int = 1

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise InvalidParam(f"experiment {self.experiment!r} not in {EXPERIMENTS}")
        if self.trials < 1:
            raise InvalidParam(f"trials {self.trials} < 1")


@dataclass
class ExperimentResult:
    experiment: str
    config: dict
    records: list
    summary: dict


def _ci95(p: float, n: int) -> float:
    return 1.96 * math.sqrt(max(p * (1.0 - p), 0.0) / n)


def _config_dict(cfg: ExperimentConfig) -> dict:
    d = asdict(cfg)
    d["dist"] = cfg.dist.to_json() if cfg.dist is not None else None
    return d


def _map_trials(worker, payloads, threads: int):
    if threads <= 1 or len(payloads) < 2:
        return [worker(p) for p in payloads]
    chunk = max(1, len(payloads) // (threads * 4))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, payloads, chunksize=chunk))


# --- workers (module level so the process pool can pickle them) -----------

def _tn_trial(payload):
    atoms, model, n, stream_seed = payload
    cfg = SampleConfig(n=n, m=0, dist=WeightDist(atoms), model=model, seed=stream_seed)
    return run_Tn(cfg)


def _core_trial(payload):
    atoms, model, n, m, stream_seed, check_corank = payload
    cfg = SampleConfig(n=n, m=m, dist=WeightDist(atoms), model=model, seed=stream_seed)
    mat = sample_matrix(cfg)
    stats = peel_2core(Hypergraph.from_matrix(mat))
    rec = {
        "n": n,
        "m": m,
        "seed": stream_seed,
        "core_rows": stats.core_rows,
        "occupied_cols": stats.occupied_cols,
        "incidences": stats.incidences,
        "eps_max": stats.core_rows / n,
        "more_rows": int(stats.core_rows > stats.occupied_cols),
    }
    if check_corank:
        state = RankState(n)
        dependent = any(state.absorb(r) for r in mat.rows)
        rec["has_null"] = int(dependent)
    return rec


def _corank_trial(payload):
    atoms, model, n, m, stream_seed = payload
    cfg = SampleConfig(n=n, m=m, dist=WeightDist(atoms), model=model, seed=stream_seed)
    return corank(sample_matrix(cfg))


def _profile_trial(payload):
    atoms, model, n, m, stream_seed = payload
    cfg = SampleConfig(n=n, m=m, dist=WeightDist(atoms), model=model, seed=stream_seed)
    _, profile = enumerate_null_vectors(sample_matrix(cfg), max_m=m)
    return profile


def _dense_trial(payload):
    n, stream_seed = payload
    rng = make_rng(stream_seed)
    state = RankState(n)
    m = 0
    top = (1 << n) - 1
    while True:
        m += 1
        row = int(rng.integers(1, top, endpoint=True))
        if state.absorb(row):
            return m


# --- experiments ------------------------------------------------------------

def exp_tn_window(cfg: ExperimentConfig) -> ExperimentResult:
    """Empirical law of T_n/n against the window [alpha_star - eps, alpha_bar + eps].

    The mean of T_n/n is reported as-is; it is observed to settle near
    alpha_bar but no assertion is attached to that.
    """
    dist = cfg.dist
    if dist.min_weight < 3:
        raise InvalidParam("T_n window experiment requires min_weight >= 3")
    a_star = alpha_star(dist)
    a_bar = alpha_bar(dist)
    lo, hi = a_star - cfg.window_eps, a_bar + cfg.window_eps
    records = []
    per_n = {}
    for ni, n in enumerate(cfg.n_values):
        payloads = [(dist.atoms, cfg.model, n, derive_stream_seed(cfg.seed, ni * cfg.trials + t))
                    for t in range(cfg.trials)]
        ts = _map_trials(_tn_trial, payloads, cfg.threads)
        ratios = [t / n for t in ts]
        inside = sum(1 for x in ratios if lo <= x <= hi) / cfg.trials
        for t, (payload, tn) in enumerate(zip(payloads, ts)):
            records.append({"experiment": "tn", "n": n, "trial": t,
                            "seed": payload[3], "T_n": tn, "ratio": tn / n})
        per_n[n] = {
            "in_window": inside,
            "in_window_ci95": _ci95(inside, cfg.trials),
            "mean_ratio": sum(ratios) / cfg.trials,
            "max_T": max(ts),
            "all_le_n_plus_1": all(t <= n + 1 for t in ts),
        }
    summary = {"alpha_star": a_star, "alpha_bar": a_bar,
               "window": [lo, hi], "per_n": per_n}
    return ExperimentResult("tn", _config_dict(cfg), records, summary)


def exp_core_vs_theory(cfg: ExperimentConfig, check_corank: bool | None = None) -> ExperimentResult:
    """Mean core fractions against the limit law, plus the aspect-ratio sign.

    When check_corank is enabled (default at n <= 5000), trials whose core has
    more rows than occupied columns also verify corank >= 1 directly, the
    pigeonhole consequence of a hypercycle.
    """
    dist = cfg.dist
    theory = {n: core_theory(dist, cfg.alpha) for n in cfg.n_values}
    records = []
    per_n = {}
    for ni, n in enumerate(cfg.n_values):
        check = check_corank if check_corank is not None else n <= 5000
        m = round(cfg.alpha * n)
        payloads = [(dist.atoms, cfg.model, n, m, derive_stream_seed(cfg.seed, ni * cfg.trials + t), check)
                    for t in range(cfg.trials)]
        recs = _map_trials(_core_trial, payloads, cfg.threads)
        records.extend(recs)
        th = theory[n]
        mean = lambda k: sum(r[k] for r in recs) / (cfg.trials * n)
        rows_frac, cols_frac, inc_frac = mean("core_rows"), mean("occupied_cols"), mean("incidences")
        e_freq = sum(_check_E_record(r, n, cfg.eps) for r in recs) / cfg.trials
        entry = {
            "m": m,
            "rows_frac": rows_frac,
            "cols_frac": cols_frac,
            "inc_frac": inc_frac,
            "theory_rows": th.core_row_frac,
            "theory_cols": th.occupied_col_frac,
            "theory_inc": th.incidence_frac,
            "aspect_sign_theory": th.aspect_sign,
            "more_rows_freq": sum(r["more_rows"] for r in recs) / cfg.trials,
            "E_freq": e_freq,
        }
        if check:
            viol = sum(1 for r in recs if r["more_rows"] and not r.get("has_null", 0))
            entry["hypercycle_violations"] = viol
        per_n[n] = entry
    summary = {"alpha": cfg.alpha, "per_n": per_n}
    return ExperimentResult("core", _config_dict(cfg), records, summary)


def _check_E_record(rec: dict, n: int, eps: float) -> bool:
    return rec["core_rows"] >= eps * n and rec["core_rows"] > rec["occupied_cols"]


def exp_null_growth(cfg: ExperimentConfig) -> ExperimentResult:
    """Null-count growth on either side of alpha_star.

    Below alpha_star: Monte Carlo over coranks; reports
    n^(r0-2) (mean(2^sigma) - 1) per n, which should stay bounded in n.
    At or above alpha_star: exact (1/n) log E[N] per n against F(alpha).
    """
    dist = cfg.dist
    a_star = alpha_star(dist)
    records = []
    per_n = {}
    if cfg.alpha < a_star:
        r0 = dist.min_weight
        for ni, n in enumerate(cfg.n_values):
            m = round(cfg.alpha * n)
            payloads = [(dist.atoms, cfg.model, n, m, derive_stream_seed(cfg.seed, ni * cfg.trials + t))
                        for t in range(cfg.trials)]
            sigmas = _map_trials(_corank_trial, payloads, cfg.threads)
            mean_count = sum(2**s for s in sigmas) / cfg.trials
            stat = n ** (r0 - 2) * (mean_count - 1.0)
            for t, s in enumerate(sigmas):
                records.append({"experiment": "null-growth", "n": n, "trial": t,
                                "seed": payloads[t][4], "corank": s})
            per_n[n] = {"m": m, "mean_null_count": mean_count, "scaled_excess": stat}
        summary = {"alpha": cfg.alpha, "alpha_star": a_star, "branch": "below",
                   "r0": r0, "per_n": per_n}
    else:
        f_alpha = F_of_alpha(dist, cfg.alpha)[0]
        for n in cfg.n_values:
            m = round(cfg.alpha * n)
            total, _ = expected_null_count(n, m, dist, model=cfg.model)
            rate = float(mp.log(total)) / n
            per_n[n] = {"m": m, "log_EN_over_n": rate, "F_alpha": f_alpha}
        summary = {"alpha": cfg.alpha, "alpha_star": a_star, "branch": "above",
                   "per_n": per_n}
    return ExperimentResult("null-growth", _config_dict(cfg), records, summary)


def exp_classical_limits(cfg: ExperimentConfig) -> ExperimentResult:
    """Tails of T_n for the classical fixed weights r = 1 and r = 2.

    r = 1: P[T_n > z sqrt(n)] -> exp(-z^2/2)  (birthday problem).
    r = 2: the classical first-cycle law of the distinct-edge graph process is
    (1-z)^(1/2) exp(z/2 + z^2/4), reported as ``limit_tail``.  Rows here are
    i.i.d., so a duplicate weight-2 row (probability Theta(1) by time z n/2)
    is itself a dependency; summing Poisson cycle counts over lengths k >= 2
    instead of k >= 3 multiplies the tail by exp(-z^2/4), reported as
    ``limit_tail_iid``.  Empirically T_n/n follows the iid value.
    """
    dist = cfg.dist
    if dist.atoms not in (((1, 1),), ((2, 1),)):
        raise InvalidParam("classical limits are for the fixed weights r=1 or r=2")
    r = dist.min_weight
    z = cfg.z
    records = []
    per_n = {}
    for ni, n in enumerate(cfg.n_values):
        cut = z * math.sqrt(n) if r == 1 else z * n / 2.0
        limit = (math.exp(-z * z / 2.0) if r == 1
                 else math.sqrt(1.0 - z) * math.exp(z / 2.0 + z * z / 4.0))
        payloads = [(dist.atoms, cfg.model, n, derive_stream_seed(cfg.seed, ni * cfg.trials + t))
                    for t in range(cfg.trials)]
        ts = _map_trials(_tn_trial, payloads, cfg.threads)
        emp = sum(1 for t in ts if t > cut) / cfg.trials
        for t, tn in enumerate(ts):
            records.append({"experiment": "classical", "n": n, "trial": t,
                            "seed": payloads[t][3], "T_n": tn})
        entry = {"z": z, "empirical_tail": emp, "limit_tail": limit,
                 "ci95": _ci95(emp, cfg.trials), "abs_error": abs(emp - limit)}
        if r == 2:
            iid_limit = math.sqrt(1.0 - z) * math.exp(z / 2.0)
            entry["limit_tail_iid"] = iid_limit
            entry["abs_error_iid"] = abs(emp - iid_limit)
        per_n[n] = entry
    summary = {"r": r, "per_n": per_n}
    return ExperimentResult("classical", _config_dict(cfg), records, summary)


def exp_dense_survival(cfg: ExperimentConfig) -> ExperimentResult:
    """Uniform nonzero GF(2) rows: empirical P[T_n > n+1-r] against the exact
    finite-n product, for each offset r in cfg.r_values."""
    records = []
    per_n = {}
    for ni, n in enumerate(cfg.n_values):
        if n > 62:
            raise InvalidParam(f"dense survival sampler holds a row in one word; n={n} > 62")
        payloads = [(n, derive_stream_seed(cfg.seed, ni * cfg.trials + t)) for t in range(cfg.trials)]
        ts = _map_trials(_dense_trial, payloads, cfg.threads)
        for t, tn in enumerate(ts):
            records.append({"experiment": "dense", "n": n, "trial": t,
                            "seed": payloads[t][1], "T_n": tn})
        tails = {}
        for r in cfg.r_values:
            emp = sum(1 for t in ts if t > n + 1 - r) / cfg.trials
            exact_val = gfq_dense_survival(2, r, n)
            tails[r] = {"empirical": emp, "exact": exact_val,
                        "ci95": _ci95(emp, cfg.trials), "abs_error": abs(emp - exact_val)}
        per_n[n] = tails
    summary = {"q": 2, "per_n": per_n}
    return ExperimentResult("dense", _config_dict(cfg), records, summary)


def exp_weight_profile(cfg: ExperimentConfig) -> ExperimentResult:
    """Exact weight profile of the null space versus the empirical histogram
    of enumerated null vectors (small n, m <= 24)."""
    dist = cfg.dist
    records = []
    per_n = {}
    for ni, n in enumerate(cfg.n_values):
        m = round(cfg.alpha * n)
        total, profile = expected_null_count(n, m, dist, model=cfg.model)
        exact_profile = {l: float(v / total) for l, v in profile.items()}
        payloads = [(dist.atoms, cfg.model, n, m, derive_stream_seed(cfg.seed, ni * cfg.trials + t))
                    for t in range(cfg.trials)]
        profs = _map_trials(_profile_trial, payloads, cfg.threads)
        counts: dict = {}
        grand = 0
        for t, prof in enumerate(profs):
            for l, c in prof.items():
                counts[l] = counts.get(l, 0) + c
                grand += c
            records.append({"experiment": "profile", "n": n, "trial": t,
                            "seed": payloads[t][4],
                            "null_vectors": sum(prof.values())})
        empirical = {l: c / grand for l, c in counts.items()}
        tv = 0.5 * sum(abs(exact_profile.get(l, 0.0) - empirical.get(l, 0.0))
                       for l in set(exact_profile) | set(empirical))
        per_n[n] = {"m": m, "tv_distance": tv,
                    "exact_profile": exact_profile, "empirical_profile": empirical}
    summary = {"alpha": cfg.alpha, "per_n": per_n}
    return ExperimentResult("profile", _config_dict(cfg), records, summary)


_RUNNERS = {
    "tn": exp_tn_window,
    "core": exp_core_vs_theory,
    "null-growth": exp_null_growth,
    "classical": exp_classical_limits,
    "profile": exp_weight_profile,
    "dense": exp_dense_survival,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    return _RUNNERS[cfg.experiment](cfg)


def write_records_csv(path: str, records: list, meta: dict | None = None) -> None:
    """Per-trial records as CSV; resolved config rides along in '#' comment lines."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if meta:
            for k in sorted(meta):
                fh.write(f"# {k}={meta[k]}\n")
        if not records:
            return
        writer = csv.DictWriter(fh, fieldnames=list(records[0].keys()))
        writer.writeheader()
        writer.writerows(records)
