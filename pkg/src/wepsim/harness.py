"""Experiment drivers, hypothesis checkers, and CSV reporting.

Each experiment fixes one observation stream per master seed, derives an
independent generator per replication from (master_seed, stage, index,
replication), and collects results in submission order, so output is
byte-identical for a given seed and configuration regardless of the worker
pool size.  Floats are serialized with 17 significant digits.
"""
from __future__ import annotations

import json
import math
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .bracketing import DyadicEntropyProfile, dyadic_profile, entropy_integral_bound
from .dirichlet import (
    DEFAULT_STICK_TOL,
    DpParams,
    posterior_params,
    sample_dp,
    sample_stick_weights,
)
from .local_empirical import (
    LocalConfig,
    NormalDensity,
    UniformDensity,
    grid_window_probabilities,
    simulate_t_process,
)
from .measures import (
    DiracFamily,
    DiscreteMeasure,
    GeometricFamily,
    UniformFamily,
    WeightSeq,
    ZetaFamily,
    lr_norm,
    tv_distance,
)
from .processes import bridge_sup_norm, sample_bridge
from .rng import derive_rng

# stream-derivation stage tags
_D_DATA = 0
_D_GC = 1
_D_BVM_POST = 2
_D_BVM_BRIDGE = 3
_D_LOCAL = 4
_D_COND = 5

_CHUNK = 32  # replications per pool job; fixed so job boundaries never move


class ConfigError(ValueError):
    """Invalid experiment configuration."""


class HypothesisGateError(RuntimeError):
    """An experiment refused to run because its hypotheses fail."""


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------
_FAMILIES = {
    "geometric": ("ratio",),
    "zeta": ("exponent",),
    "uniform": ("size",),
    "dirac": ("atom",),
}


def make_family(spec: dict):
    """Family object from {'family': name, ...params}."""
    name = spec.get("family")
    if name not in _FAMILIES:
        raise ConfigError(f"unknown measure family {name!r}; choose from {sorted(_FAMILIES)}")
    kwargs = {k: spec[k] for k in _FAMILIES[name] if k in spec}
    cls = {
        "geometric": GeometricFamily,
        "zeta": ZetaFamily,
        "uniform": UniformFamily,
        "dirac": DiracFamily,
    }[name]
    try:
        return cls(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class MeasureSpec:
    """Named family plus truncation tolerance."""

    family: str
    params: dict = field(default_factory=dict)
    tail_tol: float = 1e-15

    @classmethod
    def from_dict(cls, d: dict) -> "MeasureSpec":
        d = dict(d)
        fam = d.pop("family", None)
        if fam is None:
            raise ConfigError("measure spec needs a 'family' key")
        tail = d.pop("tail_tol", 1e-15)
        d.pop("concentration", None)
        return cls(family=fam, params=d, tail_tol=tail)

    def family_obj(self):
        return make_family({"family": self.family, **self.params})

    def build(self) -> DiscreteMeasure:
        return self.family_obj().truncate(self.tail_tol)


@dataclass(frozen=True)
class LocalSettings:
    center: float = 0.0
    window: tuple[float, float] = (-1.0, 1.0)
    density: dict = field(default_factory=lambda: {"name": "normal"})
    h_schedule: tuple[float, ...] = (0.4, 0.2, 0.1, 0.05)
    nh_product: float = 2000.0
    grid_size: int = 5

    def density_obj(self):
        d = dict(self.density)
        name = d.pop("name", "normal")
        if name == "normal":
            return NormalDensity(**d)
        if name == "uniform":
            return UniformDensity(**d)
        raise ConfigError(f"unknown density {name!r}")

    def t_grid(self) -> tuple[float, ...]:
        lo, hi = self.window
        g = self.grid_size
        # clamp the last point: lo + (hi - lo) can overshoot hi by one ulp
        return tuple(min(lo + (hi - lo) * (i + 1) / g, hi) for i in range(g))

    def config_for(self, h: float) -> LocalConfig:
        return LocalConfig(
            center=self.center,
            bandwidth=h,
            s_lo=self.window[0],
            s_hi=self.window[1],
            density=self.density_obj(),
            t_grid=self.t_grid(),
        )


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run needs: schedules, seeds, measure specs, output path."""

    experiment: str
    master_seed: int
    n_schedule: tuple[int, ...] = (50, 200, 800, 3200)
    replications: int = 200
    workers: int = 1
    stick_tol: float = DEFAULT_STICK_TOL
    base_measure: MeasureSpec = field(
        default_factory=lambda: MeasureSpec("geometric", {"ratio": 0.5})
    )
    prior: MeasureSpec = field(
        default_factory=lambda: MeasureSpec("geometric", {"ratio": 0.65})
    )
    prior_concentration: float = 1.0
    local: LocalSettings = field(default_factory=LocalSettings)
    bracketing_levels: int = 12
    conditions_sampler: str = "dp_posterior"
    conditions_power: float = 2.0
    out: str | None = None

    def __post_init__(self):
        if self.experiment not in {"gc", "bvm", "bracketing", "local-ep", "conditions"}:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.replications < 1:
            raise ConfigError("replications must be at least 1")
        if not self.n_schedule or any(
            b <= a for a, b in zip(self.n_schedule, self.n_schedule[1:])
        ):
            raise ConfigError("n_schedule must be non-empty and strictly increasing")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if not 0.0 < self.stick_tol < 1.0:
            raise ConfigError("stick_tol must lie in (0, 1)")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        if "experiment" not in d or "master_seed" not in d:
            raise ConfigError("config requires 'experiment' and 'master_seed'")
        prior_d = d.pop("prior", {"family": "geometric", "ratio": 0.65})
        prior_conc = float(prior_d.get("concentration", 1.0))
        local_d = d.pop("local", {})
        if "window" in local_d:
            local_d["window"] = tuple(local_d["window"])
        if "h_schedule" in local_d:
            local_d["h_schedule"] = tuple(local_d["h_schedule"])
        cond_d = d.pop("conditions", {})
        brack_d = d.pop("bracketing", {})
        known = {
            "experiment": d["experiment"],
            "master_seed": int(d["master_seed"]),
            "n_schedule": tuple(int(n) for n in d.get("n_schedule", (50, 200, 800, 3200))),
            "replications": int(d.get("replications", 200)),
            "workers": int(d.get("workers", 1)),
            "stick_tol": float(d.get("stick_tol", DEFAULT_STICK_TOL)),
            "base_measure": MeasureSpec.from_dict(
                d.get("base_measure", {"family": "geometric", "ratio": 0.5})
            ),
            "prior": MeasureSpec.from_dict(prior_d),
            "prior_concentration": prior_conc,
            "local": LocalSettings(**local_d),
            "bracketing_levels": int(brack_d.get("levels", 12)),
            "conditions_sampler": cond_d.get("sampler", "dp_posterior"),
            "conditions_power": float(cond_d.get("power", 2.0)),
            "out": d.get("out"),
        }
        return cls(**known)

    @classmethod
    def from_json(cls, path: str | Path) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# CSV writing
# ---------------------------------------------------------------------------
def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def write_csv(path: str | Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


# ---------------------------------------------------------------------------
# replication pool
# ---------------------------------------------------------------------------
def _map_jobs(fn: Callable, jobs: list, workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as ex:
        return list(ex.map(fn, jobs))


def _chunked(total: int) -> list[range]:
    return [range(lo, min(lo + _CHUNK, total)) for lo in range(0, total, _CHUNK)]


def _draw_data_stream(base: DiscreteMeasure, n: int, master_seed: int) -> np.ndarray:
    rng = derive_rng(master_seed, _D_DATA)
    cum = base.cumulative()
    u = rng.random(n) * cum[-1]
    return base.ids[np.minimum(np.searchsorted(cum, u, side="right"), cum.size - 1)]


# ---------------------------------------------------------------------------
# two-sample statistic and square-root-mass check
# ---------------------------------------------------------------------------
def ks_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Two-sample Kolmogorov-Smirnov distance, sup |F_a - F_b| in [0, 1]."""
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise ValueError("ks_distance requires non-empty samples")
    return float(kernels.ks_statistic(a, b))


@dataclass(frozen=True)
class DdbRow:
    count: int
    partial_sum: float
    increment: float
    entropy_bound: float


@dataclass(frozen=True)
class DdbReport:
    rows: tuple[DdbRow, ...]
    convergent: bool
    limit_estimate: float | None


def check_ddb(
    family, schedule: Sequence[int] | None = None, *, increment_tol: float = 1e-6
) -> DdbReport:
    """Classify sum_y sqrt(mass_y) as convergent or divergent on truncations.

    Partial sums are evaluated along a doubling support schedule; the family
    is convergent when the last doubling adds less than ``increment_tol``.
    The entropy-integral majorant on the same truncations is reported as a
    cross check: it stabilizes exactly when the square-root sums do.
    """
    if schedule is None:
        schedule = [1 << k for k in range(4, 21)]
    rows = []
    prev = 0.0
    for count in schedule:
        masses = family.masses(int(count))
        partial = float(np.sqrt(masses).sum())
        # fast-decaying families underflow to exact zeros far into the tail;
        # zero atoms carry nothing and are not storable
        live = masses > 0.0
        trunc = DiscreteMeasure(np.arange(masses.size, dtype=np.int64)[live], masses[live])
        bound = entropy_integral_bound(trunc, 2.0)
        rows.append(DdbRow(int(count), partial, partial - prev, bound))
        prev = partial
    convergent = rows[-1].increment < increment_tol
    return DdbReport(
        rows=tuple(rows),
        convergent=convergent,
        limit_estimate=rows[-1].partial_sum if convergent else None,
    )


# ---------------------------------------------------------------------------
# theorem-condition checker
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ConditionRow:
    n: int
    l1_median: float
    l1_q95: float
    l2_median: float
    l2_q95: float
    l4_median: float
    l4_q95: float
    linf_median: float
    linf_q95: float
    product_median: float
    product_q95: float
    envelope_moment: float
    entropy_bound: float


@dataclass(frozen=True)
class ConditionReport:
    rows: tuple[ConditionRow, ...]
    l2_to_zero: bool
    l1_bounded: bool


def check_weight_norm_conditions(
    sampler: str | Callable[[int, np.random.Generator], "object"],
    baseline: DiscreteMeasure,
    n_schedule: Sequence[int],
    replications: int,
    master_seed: int,
    *,
    power: float = 2.0,
    prior_concentration: float = 1.0,
    stick_tol: float = DEFAULT_STICK_TOL,
) -> ConditionReport:
    """Monte Carlo norm diagnostics for the uniform-law hypotheses.

    For each n of the schedule, medians and 95% quantiles of |w|_1, |w|_2,
    |w|_4, |w|_inf and |w|_1 * |w|_inf^(power-1) over the replications.
    Named samplers: 'empirical' (w_i = 1/n), 'dp_posterior' (stick weights
    at concentration M + n), 'constant' (w_i = 1).  The envelope moment is
    identically 0 for indicator classes truncated at height >= 1; the
    entropy column is the dyadic majorant of the baseline at full scale.
    """
    if isinstance(sampler, str):
        if sampler == "empirical":

            def draw(n, rng):
                return WeightSeq(np.full(n, 1.0 / n))

        elif sampler == "constant":

            def draw(n, rng):
                return WeightSeq(np.ones(n))

        elif sampler == "dp_posterior":

            def draw(n, rng):
                return sample_stick_weights(prior_concentration + n, stick_tol, rng)

        else:
            raise ConfigError(f"unknown weight sampler {sampler!r}")
    else:
        draw = sampler
    entropy = entropy_integral_bound(baseline, 1.0)
    rows = []
    for ni, n in enumerate(n_schedule):
        stats = np.empty((replications, 5))
        for r in range(replications):
            w = draw(int(n), derive_rng(master_seed, _D_COND, ni, r))
            l1 = lr_norm(w, 1.0)
            linf = lr_norm(w, math.inf)
            stats[r] = (
                l1,
                lr_norm(w, 2.0),
                lr_norm(w, 4.0),
                linf,
                l1 * linf ** (power - 1.0),
            )
        med = np.median(stats, axis=0)
        q95 = np.quantile(stats, 0.95, axis=0)
        rows.append(
            ConditionRow(
                int(n),
                float(med[0]),
                float(q95[0]),
                float(med[1]),
                float(q95[1]),
                float(med[2]),
                float(q95[2]),
                float(med[3]),
                float(q95[3]),
                float(med[4]),
                float(q95[4]),
                0.0,
                entropy,
            )
        )
    l2 = [row.l2_median for row in rows]
    decreasing = all(b < a for a, b in zip(l2, l2[1:]))
    l2_to_zero = decreasing and len(l2) >= 2 and l2[-1] <= 0.5 * l2[0]
    l1s = [row.l1_median for row in rows]
    l1_bounded = max(l1s) <= 1.25 * l1s[0]
    return ConditionReport(rows=tuple(rows), l2_to_zero=l2_to_zero, l1_bounded=l1_bounded)


# ---------------------------------------------------------------------------
# posterior-consistency experiment
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class GcRow:
    n: int
    theta: float
    q10: float
    q25: float
    median: float
    q75: float
    q90: float
    mean: float
    max_remainder: float


@dataclass(frozen=True)
class GcResult:
    rows: tuple[GcRow, ...]
    csv_path: str | None


def _gc_chunk(args):
    (master, ni, reps, base_ids, base_masses, conc, emp_ids, emp_masses, tol) = args
    post = DpParams(
        DiscreteMeasure(base_ids, base_masses, is_probability=True), conc
    )
    emp = DiscreteMeasure(emp_ids, emp_masses, is_probability=True)
    out = []
    for r in reps:
        draw = sample_dp(post, tol, derive_rng(master, _D_GC, ni, r))
        out.append((tv_distance(draw, emp), 1.0 - draw.total_mass()))
    return out


def run_gc_experiment(cfg: ExperimentConfig) -> GcResult:
    """Posterior draws against the empirical measure along the n schedule.

    One observation stream is fixed by the master seed; for each n the
    experiment reports quantiles over replications of the total variation
    distance between a posterior draw and the empirical measure of the
    first n observations.
    """
    base = cfg.base_measure.build()
    alpha = cfg.prior.build()
    big_n = int(cfg.n_schedule[-1])
    xs = _draw_data_stream(base, big_n, cfg.master_seed)
    rows = []
    for ni, n in enumerate(cfg.n_schedule):
        sample = xs[:n]
        emp = DiscreteMeasure.empirical(sample)
        post = posterior_params(DpParams(alpha, cfg.prior_concentration), sample)
        jobs = [
            (
                cfg.master_seed,
                ni,
                list(reps),
                post.base.ids,
                post.base.masses,
                post.concentration,
                emp.ids,
                emp.masses,
                cfg.stick_tol,
            )
            for reps in _chunked(cfg.replications)
        ]
        pairs = [p for chunk in _map_jobs(_gc_chunk, jobs, cfg.workers) for p in chunk]
        tvs = np.array([p[0] for p in pairs])
        rems = np.array([p[1] for p in pairs])
        q10, q25, q50, q75, q90 = np.quantile(tvs, [0.1, 0.25, 0.5, 0.75, 0.9])
        rows.append(
            GcRow(
                int(n),
                cfg.prior_concentration / (cfg.prior_concentration + n),
                float(q10),
                float(q25),
                float(q50),
                float(q75),
                float(q90),
                float(tvs.mean()),
                float(rems.max()),
            )
        )
    path = cfg.out
    if path is not None:
        write_csv(
            path,
            ["n", "theta", "tv_q10", "tv_q25", "tv_median", "tv_q75", "tv_q90", "tv_mean", "max_remainder"],
            [
                (r.n, r.theta, r.q10, r.q25, r.median, r.q75, r.q90, r.mean, r.max_remainder)
                for r in rows
            ],
        )
    return GcResult(rows=tuple(rows), csv_path=path)


# ---------------------------------------------------------------------------
# posterior-fluctuation experiment
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class BvmSamples:
    n: int
    posterior: np.ndarray
    bridge: np.ndarray
    ks: float


@dataclass(frozen=True)
class BvmResult:
    per_n: tuple[BvmSamples, ...]
    csv_path: str | None


def _bvm_post_chunk(args):
    (master, ni, reps, base_ids, base_masses, conc, emp_ids, emp_masses, tol, n) = args
    post = DpParams(DiscreteMeasure(base_ids, base_masses, is_probability=True), conc)
    emp = DiscreteMeasure(emp_ids, emp_masses, is_probability=True)
    root_n = math.sqrt(n)
    return [
        root_n
        * tv_distance(sample_dp(post, tol, derive_rng(master, _D_BVM_POST, ni, r)), emp)
        for r in reps
    ]


def _bvm_bridge_chunk(args):
    (master, ni, reps, emp_ids, emp_masses) = args
    emp = DiscreteMeasure(emp_ids, emp_masses, is_probability=True)
    return [
        bridge_sup_norm(sample_bridge(emp, derive_rng(master, _D_BVM_BRIDGE, ni, r)))
        for r in reps
    ]


def run_bvm_experiment(cfg: ExperimentConfig) -> BvmResult:
    """Rescaled posterior total-variation fluctuations against bridge sups.

    Refuses to run unless both the observation law and the prior mean pass
    the square-root-mass convergence check, mirroring the hypotheses of the
    limit it verifies.  For each n: sample A holds sqrt(n) times the TV
    distance between a posterior draw and the empirical measure; sample B
    holds sup-norms of bridge draws over the empirical measure; their
    two-sample KS distance measures the match of the two laws.
    """
    for label, spec in (("base measure", cfg.base_measure), ("prior mean", cfg.prior)):
        report = check_ddb(spec.family_obj())
        if not report.convergent:
            raise HypothesisGateError(
                f"{label} family {spec.family!r} fails the square-root-mass "
                f"convergence check (last doubling increment "
                f"{report.rows[-1].increment:.3g}); refusing the run"
            )
    base = cfg.base_measure.build()
    alpha = cfg.prior.build()
    xs = _draw_data_stream(base, int(cfg.n_schedule[-1]), cfg.master_seed)
    results = []
    for ni, n in enumerate(cfg.n_schedule):
        sample = xs[:n]
        emp = DiscreteMeasure.empirical(sample)
        post = posterior_params(DpParams(alpha, cfg.prior_concentration), sample)
        jobs_a = [
            (
                cfg.master_seed,
                ni,
                list(reps),
                post.base.ids,
                post.base.masses,
                post.concentration,
                emp.ids,
                emp.masses,
                cfg.stick_tol,
                int(n),
            )
            for reps in _chunked(cfg.replications)
        ]
        jobs_b = [
            (cfg.master_seed, ni, list(reps), emp.ids, emp.masses)
            for reps in _chunked(cfg.replications)
        ]
        a = np.array([v for c in _map_jobs(_bvm_post_chunk, jobs_a, cfg.workers) for v in c])
        b = np.array([v for c in _map_jobs(_bvm_bridge_chunk, jobs_b, cfg.workers) for v in c])
        results.append(BvmSamples(int(n), a, b, ks_distance(a, b)))
    path = cfg.out
    if path is not None:
        rows = []
        for res in results:
            rows.extend(("posterior", res.n, i, v) for i, v in enumerate(res.posterior))
            rows.extend(("bridge", res.n, i, v) for i, v in enumerate(res.bridge))
            rows.append(("ks", res.n, 0, res.ks))
        write_csv(path, ["kind", "n", "rep", "value"], rows)
    return BvmResult(per_n=tuple(results), csv_path=path)


# ---------------------------------------------------------------------------
# bracketing profile
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class BracketingResult:
    profile: DyadicEntropyProfile
    csv_path: str | None


def run_bracketing_profile(cfg: ExperimentConfig) -> BracketingResult:
    """Dyadic entropy profile of the configured base measure."""
    measure = cfg.base_measure.build()
    profile = dyadic_profile(measure, cfg.bracketing_levels)
    path = cfg.out
    if path is not None:
        write_csv(
            path,
            ["k", "jk", "mk", "count_bound", "entropy_partial", "tail_sqrt_sum"],
            [
                (r.level, r.jk, r.mk, r.count_bound, r.entropy_partial, r.tail_sqrt_sum)
                for r in profile.rows
            ],
        )
    return BracketingResult(profile=profile, csv_path=path)


# ---------------------------------------------------------------------------
# local process experiment
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class LocalHResult:
    h: float
    n: int
    t_grid: tuple[float, ...]
    means: np.ndarray
    variances: np.ndarray
    covariance: np.ndarray
    norm_covariance: np.ndarray
    target_covariance: np.ndarray
    covariance_se: np.ndarray


@dataclass(frozen=True)
class LocalEpResult:
    per_h: tuple[LocalHResult, ...]
    csv_path: str | None


def _local_chunk(args):
    (master, hi, reps, cfg_local, h, n, probs) = args
    lc = cfg_local.config_for(h)
    return [
        simulate_t_process(lc, n, derive_rng(master, _D_LOCAL, hi, r), probs).t_values
        for r in reps
    ]


def run_local_ep_experiment(cfg: ExperimentConfig) -> LocalEpResult:
    """Local process moments along the bandwidth schedule.

    Per bandwidth h the sample size keeps n * h at the configured product.
    Covariances of the grid values are normalized by window length times
    density height at the center and compared against the nested-window
    limit (min(t, t') - s_lo) / window length.
    """
    settings = cfg.local
    density = settings.density_obj()
    f_center = density.pdf(settings.center)
    lam = settings.window[1] - settings.window[0]
    if f_center <= 0.0:
        raise ConfigError("density must be positive at the center")
    grid = np.asarray(settings.t_grid())
    target = (np.minimum.outer(grid, grid) - settings.window[0]) / lam
    out_rows = []
    per_h = []
    for hi, h in enumerate(settings.h_schedule):
        n = int(round(settings.nh_product / h))
        lc = settings.config_for(h)
        probs = grid_window_probabilities(lc)
        jobs = [
            (cfg.master_seed, hi, list(reps), settings, h, n, probs)
            for reps in _chunked(cfg.replications)
        ]
        values = np.array(
            [v for chunk in _map_jobs(_local_chunk, jobs, cfg.workers) for v in chunk]
        )
        means = values.mean(axis=0)
        centered = values - means
        cov = centered.T @ centered / (values.shape[0] - 1)
        m22 = (centered[:, :, None] ** 2 * centered[:, None, :] ** 2).mean(axis=0)
        cov_se = np.sqrt(np.maximum(m22 - cov**2, 0.0) / values.shape[0])
        norm_cov = cov / (lam * f_center)
        per_h.append(
            LocalHResult(
                h=float(h),
                n=n,
                t_grid=tuple(float(t) for t in grid),
                means=means,
                variances=np.diag(cov).copy(),
                covariance=cov,
                norm_covariance=norm_cov,
                target_covariance=target,
                covariance_se=cov_se / (lam * f_center),
            )
        )
        for ti, t in enumerate(grid):
            out_rows.append(
                (
                    float(h),
                    float(t),
                    float(means[ti]),
                    float(cov[ti, ti]),
                    float(f_center * (t - settings.window[0])),
                )
            )
    path = cfg.out
    if path is not None:
        write_csv(path, ["h", "t", "mean", "variance", "target"], out_rows)
    return LocalEpResult(per_h=tuple(per_h), csv_path=path)


# ---------------------------------------------------------------------------
# conditions experiment
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ConditionsResult:
    report: ConditionReport
    csv_path: str | None


def run_conditions_experiment(cfg: ExperimentConfig) -> ConditionsResult:
    baseline = cfg.base_measure.build()
    report = check_weight_norm_conditions(
        cfg.conditions_sampler,
        baseline,
        cfg.n_schedule,
        cfg.replications,
        cfg.master_seed,
        power=cfg.conditions_power,
        prior_concentration=cfg.prior_concentration,
        stick_tol=cfg.stick_tol,
    )
    path = cfg.out
    if path is not None:
        write_csv(
            path,
            [
                "n",
                "l1_median",
                "l1_q95",
                "l2_median",
                "l2_q95",
                "l4_median",
                "l4_q95",
                "linf_median",
                "linf_q95",
                "product_median",
                "product_q95",
                "envelope_moment",
                "entropy_bound",
            ],
            [
                (
                    r.n,
                    r.l1_median,
                    r.l1_q95,
                    r.l2_median,
                    r.l2_q95,
                    r.l4_median,
                    r.l4_q95,
                    r.linf_median,
                    r.linf_q95,
                    r.product_median,
                    r.product_q95,
                    r.envelope_moment,
                    r.entropy_bound,
                )
                for r in report.rows
            ],
        )
    return ConditionsResult(report=report, csv_path=path)


_RUNNERS = {
    "gc": run_gc_experiment,
    "bvm": run_bvm_experiment,
    "bracketing": run_bracketing_profile,
    "local-ep": run_local_ep_experiment,
    "conditions": run_conditions_experiment,
}


def run_experiment(cfg: ExperimentConfig):
    """Dispatch a configured experiment to its runner."""
    return _RUNNERS[cfg.experiment](cfg)
