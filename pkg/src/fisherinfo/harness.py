"""Seeded numerical checks of superadditivity, affinity and the kinetic-energy properties.

Each suite draws its inputs from a per-trial random stream derived from
``(master_seed, suite, trial index)``, evaluates one or more named *gaps*
and compares them against per-gap tolerances. A gap is oriented so that the
predicted inequality reads ``gap >= 0``; identities are recorded as
``gap = -|error|``. Gaps that are compared against ``1 + |value|``-scaled
tolerances are divided by that scale before being stored.

A check passes when ``gap >= -tolerance``; a tolerance of exactly ``0``
means the inequality is strict (``gap > 0``).
"""
from __future__ import annotations

import hashlib
import json
import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .density import (
    Density,
    GridSpec,
    MixingMeasure,
    gaussian_density,
    marginal,
    mixture_product_density,
    random_density,
)
from .errors import ConfigError
from .quantum import (
    eigendecompose,
    hoffmann_ostenhof_chain,
    monomial_trace,
    reduced_density_matrix,
    split_identity_check,
)
from .spectral import (
    KineticSpec,
    WaveFunction,
    block_energy,
    calibrate_limit_constant,
    calibrate_singular_constant,
    fisher_info,
    kinetic_form,
    singular_form,
    sqrt_density,
)

SUITES = (
    "superadd",
    "monotone",
    "affinity",
    "diamagnetic",
    "convexity",
    "split",
    "hoffmann",
    "monomial",
    "bbm",
    "method-agreement",
)

DEFAULT_TRIALS = {
    "superadd": 120,
    "monotone": 40,
    "affinity": 4,
    "diamagnetic": 1000,
    "convexity": 1000,
    "split": 20,
    "hoffmann": 20,
    "monomial": 20,
    "bbm": 5,
    "method-agreement": 5,
}

PERIOD = 16.0
#: grid points per axis used for N-particle random trials
GRID_POINTS = {1: 64, 2: 32, 3: 32, 4: 16}


# -- the quantities ------------------------------------------------------------


def info(mu: Density, spec: KineticSpec) -> float:
    return fisher_info(mu, spec, symmetric=True).value


def superadditivity_gap(mu: Density, n: int, spec: KineticSpec) -> float:
    """``I_s[mu] - I_s[mu^(n)] - I_s[mu^(N-n)]``; predicted nonnegative."""
    N = mu.n_particles
    if not 1 <= n < N:
        raise ConfigError(f"need 1 <= n < {N}, got {n}")
    return info(mu, spec) - info(marginal(mu, n), spec) - info(marginal(mu, N - n), spec)


def normalized_monotonicity_check(mu: Density, n: int, spec: KineticSpec) -> float:
    """``I_s[mu]/N - I_s[mu^(n)]/n`` for ``n`` dividing ``N``; predicted nonnegative."""
    N = mu.n_particles
    if not 1 <= n < N or N % n:
        raise ConfigError(f"n={n} must be a proper divisor of N={N}")
    return info(mu, spec) / N - info(marginal(mu, n), spec) / n


def affine_value(P: MixingMeasure, spec: KineticSpec) -> float:
    """``sum_i w_i I_s[rho_i]``."""
    return math.fsum(w * info(rho, spec) for w, rho in P)


def mean_info_sequence(P: MixingMeasure, spec: KineticSpec, n_max: int) -> list[tuple[int, float]]:
    """``[(n, I_s[mu^(n)] / n) for n = 1..n_max]`` with ``mu^(n) = sum w_i rho_i^(x)n``."""
    if n_max < 1:
        raise ConfigError(f"n_max must be >= 1, got {n_max}")
    return [(n, info(mixture_product_density(P, n), spec) / n) for n in range(1, n_max + 1)]


def affinity_defect(P: MixingMeasure, spec: KineticSpec, n: int) -> float:
    """``sum_i w_i I_s[rho_i] - I_s[mu^(n)] / n``; nonnegative, shrinking with ``n``."""
    return affine_value(P, spec) - info(mixture_product_density(P, n), spec) / n


def diamagnetic_test(u: WaveFunction, spec: KineticSpec) -> float:
    """``<u, H u> - <|u|, H |u|>``; predicted nonnegative."""
    full = kinetic_form(u, spec)
    return full - kinetic_form(u.modulus(), spec)


def convexity_test(rho1: Density, rho2: Density, t: float, spec: KineticSpec) -> float:
    """``t I[rho1] + (1-t) I[rho2] - I[t rho1 + (1-t) rho2]``; predicted nonnegative."""
    if rho1.grid != rho2.grid:
        raise ConfigError("convexity_test needs densities on a shared grid")
    if not 0 <= t <= 1:
        raise ConfigError(f"t must lie in [0, 1], got {t}")
    mix = t * rho1.values + (1 - t) * rho2.values
    mixed = Density(rho1.grid, mix / (mix.sum() * rho1.grid.cell_volume))
    return t * info(rho1, spec) + (1 - t) * info(rho2, spec) - info(mixed, spec)


def separated_pair(grid_1p: GridSpec, sigma_fraction: float = 0.1) -> MixingMeasure:
    """Equal-weight Gaussians at ``L/4`` and ``3L/4`` with ``sigma = sigma_fraction * L``."""
    L = grid_1p.period
    sigma2 = (sigma_fraction * L) ** 2
    return MixingMeasure(
        (0.5, 0.5),
        (gaussian_density(grid_1p, L / 4, sigma2), gaussian_density(grid_1p, 3 * L / 4, sigma2)),
    )


def structured_mixture(grid: GridSpec) -> Density:
    """Two-particle state ``(rho1^(x)2 + rho2^(x)2) / 2`` built from :func:`separated_pair`."""
    return mixture_product_density(separated_pair(grid.single()), 2)


# -- reports ------------------------------------------------------------------


@dataclass
class TrialRecord:
    index: int
    seed: int
    digest: str
    gaps: dict[str, float]
    params: dict = field(default_factory=dict)
    error: str | None = None


@dataclass
class SuiteReport:
    name: str
    trials: int
    records: list[TrialRecord]
    tolerances: dict[str, float]
    runtime: float = 0.0
    config: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)

    def _gaps(self) -> list[float]:
        return [g for r in self.records for g in r.gaps.values()]

    @property
    def min_gap(self) -> float | None:
        gaps = self._gaps()
        return min(gaps) if gaps else None

    @property
    def max_gap(self) -> float | None:
        gaps = self._gaps()
        return max(gaps) if gaps else None

    @property
    def mean_gap(self) -> float | None:
        gaps = self._gaps()
        return math.fsum(gaps) / len(gaps) if gaps else None

    def failures(self) -> list[tuple[int, str]]:
        out = []
        for r in self.records:
            if r.error is not None:
                out.append((r.index, "error"))
            for key, gap in r.gaps.items():
                if not check_passes(gap, self.tolerances[key]):
                    out.append((r.index, key))
        return out

    @property
    def passed(self) -> bool:
        return not self.failures()

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "trials": self.trials,
            "passed": self.passed,
            "tolerances": self.tolerances,
            "min_gap": self.min_gap,
            "max_gap": self.max_gap,
            "mean_gap": self.mean_gap,
            "runtime": self.runtime,
            "config": self.config,
            "summary": self.summary,
            "digest": self.digest(),
            "records": [asdict(r) for r in self.records],
        }

    def digest(self) -> str:
        """Hash of everything except wall time; identical for identical configs."""
        payload = {
            "suite": self.name,
            "config": self.config,
            "tolerances": self.tolerances,
            "summary": self.summary,
            "records": [asdict(r) for r in self.records],
        }
        blob = json.dumps(payload, sort_keys=True, default=float).encode()
        return hashlib.sha256(blob).hexdigest()

    def write(self, out_dir) -> tuple[Path, Path]:
        """Write ``<name>.json`` and a one-line-per-trial ``<name>.csv``."""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        json_path = out_dir / f"{self.name}.json"
        csv_path = out_dir / f"{self.name}.csv"
        json_path.write_text(json.dumps(self.to_dict(), indent=2, default=float) + "\n")
        keys = sorted({k for r in self.records for k in r.gaps})
        lines = [",".join(["index", "seed", "digest", *keys, "error"])]
        for r in self.records:
            cells = [str(r.index), str(r.seed), r.digest]
            cells += [repr(r.gaps[k]) if k in r.gaps else "" for k in keys]
            cells.append((r.error or "").replace(",", ";").replace("\n", " "))
            lines.append(",".join(cells))
        csv_path.write_text("\n".join(lines) + "\n")
        return json_path, csv_path


def check_passes(gap: float, tolerance: float) -> bool:
    if tolerance == 0:
        return gap > 0
    return gap >= -tolerance


def density_digest(*densities: Density) -> str:
    h = hashlib.sha256()
    for mu in densities:
        h.update(np.ascontiguousarray(mu.values).tobytes())
    return h.hexdigest()[:16]


@dataclass
class SuiteConfig:
    master_seed: int = 0
    trials: int | None = None
    workers: int = 1
    period: float = PERIOD
    n_max: int = 6
    #: order used by the method-agreement suite
    agreement_s: float = 0.5
    #: discretization of the kinetic operator in the proof-chain suite
    chain_method: str = "lattice"

    def trials_for(self, name: str) -> int:
        return DEFAULT_TRIALS[name] if self.trials is None else int(self.trials)


def trial_seed(master_seed: int, suite: str, index: int) -> int:
    key = zlib.crc32(suite.encode())
    return int(np.random.SeedSequence([master_seed, key, index]).generate_state(1)[0])


# -- trial inputs ---------------------------------------------------------------


def _grid(N: int, period: float, m: int | None = None) -> GridSpec:
    return GridSpec(1, N, m or GRID_POINTS[N], period)


def _random_input(rng: np.random.Generator, grid: GridSpec) -> Density:
    return random_density(
        grid,
        int(rng.integers(2**31)),
        smoothness=float(rng.uniform(0.8, 1.5)),
        amplitude=float(rng.uniform(0.4, 1.0)),
    )


def _random_atom(rng: np.random.Generator, grid_1p: GridSpec) -> Density:
    if rng.random() < 0.5:
        L = grid_1p.period
        sigma = float(rng.uniform(0.07, 0.125)) * L
        return gaussian_density(grid_1p, float(rng.uniform(0, L)), sigma**2)
    return _random_input(rng, grid_1p)


def _random_mixture(rng: np.random.Generator, grid_1p: GridSpec) -> MixingMeasure:
    k = int(rng.integers(2, 4))
    w = rng.dirichlet(np.ones(k))
    w = w / math.fsum(w)
    w[-1] = 1.0 - math.fsum(w[:-1])
    return MixingMeasure(tuple(w), tuple(_random_atom(rng, grid_1p) for _ in range(k)))


def _symmetric_input(rng: np.random.Generator, grid: GridSpec, kind: str) -> Density:
    if kind == "random":
        return _random_input(rng, grid)
    return mixture_product_density(_random_mixture(rng, grid.single()), grid.n_particles)


# -- suites -----------------------------------------------------------------------

TrialFn = Callable[[np.random.Generator, int, SuiteConfig], tuple[dict, dict, str]]


def _trial_superadd(rng, i, cfg):
    N = int(rng.choice([2, 3, 4]))
    n = int(rng.integers(1, N))
    s = float(rng.choice([0.5, 1.0]))
    kind = "random" if i % 2 == 0 else "mixture"
    mu = _symmetric_input(rng, _grid(N, cfg.period), kind)
    spec = KineticSpec(s)
    total = info(mu, spec)
    gap = superadditivity_gap(mu, n, spec)
    return {"superadd": gap / (1 + total)}, {"N": N, "n": n, "s": s, "kind": kind, "I": total}, density_digest(mu)


def _trial_monotone(rng, i, cfg):
    N, n = [(2, 1), (3, 1), (4, 1), (4, 2)][i % 4]
    s = [0.5, 1.0][(i // 4) % 2]
    kind = "random" if (i // 8) % 2 == 0 else "mixture"
    mu = _symmetric_input(rng, _grid(N, cfg.period), kind)
    spec = KineticSpec(s)
    total = info(mu, spec)
    gap = normalized_monotonicity_check(mu, n, spec)
    return {"monotone": gap / (1 + total)}, {"N": N, "n": n, "s": s, "kind": kind}, density_digest(mu)


def _random_pair(rng: np.random.Generator, grid_1p: GridSpec) -> MixingMeasure:
    L = grid_1p.period
    sigma = float(rng.uniform(0.08, 0.125)) * L
    c = float(rng.uniform(0, L))
    sep = float(rng.uniform(0.3, 0.5)) * L
    w = float(rng.uniform(0.3, 0.7))
    return MixingMeasure(
        (w, 1 - w),
        (gaussian_density(grid_1p, c, sigma**2), gaussian_density(grid_1p, (c + sep) % L, sigma**2)),
    )


def _trial_affinity(rng, i, cfg):
    grid_1p = GridSpec(1, 1, 16, cfg.period)
    s = [0.5, 1.0][i % 2]
    P = separated_pair(grid_1p) if i < 2 else _random_pair(rng, grid_1p)
    spec = KineticSpec(s)
    affine = affine_value(P, spec)
    seq = dict(mean_info_sequence(P, spec, cfg.n_max))
    scale = 1 + abs(affine)
    gaps = {f"upper_bound_n{n}": (affine - g) / scale for n, g in seq.items()}
    for a, b in ((1, 2), (2, 4)):
        if b in seq:
            gaps[f"doubling_{a}_{b}"] = (seq[b] - seq[a]) / scale
    if 2 in seq and 6 in seq:
        gaps["defect_decrease_2_6"] = ((affine - seq[2]) - (affine - seq[6])) / scale
    params = {"s": s, "fixture": "separated" if i < 2 else "random-pair", "affine": affine,
              "g": {str(n): g for n, g in seq.items()}}
    return gaps, params, density_digest(*P.atoms)


def _smooth_phase(rng: np.random.Generator, grid: GridSpec) -> np.ndarray:
    k = np.fft.fftfreq(grid.m, 1.0 / grid.m)
    coeffs = np.exp(-0.8 * np.abs(k)) * (rng.standard_normal(grid.m) + 1j * rng.standard_normal(grid.m))
    coeffs[0] = 0
    phase = np.fft.ifft(coeffs).real
    return float(rng.uniform(0.5, 3.0)) * phase / phase.std()


def _trial_diamagnetic(rng, i, cfg):
    grid = _grid(1, cfg.period)
    s = [0.5, 1.0][i % 2]
    rho = _random_input(rng, grid)
    u = WaveFunction(grid, np.sqrt(rho.values) * np.exp(1j * _smooth_phase(rng, grid)))
    spec = KineticSpec(s)
    value = kinetic_form(u, spec)
    gap = diamagnetic_test(u, spec)
    return {"diamagnetic": gap / (1 + value)}, {"s": s}, density_digest(rho)


def _trial_convexity(rng, i, cfg):
    grid = _grid(1, cfg.period)
    s = [0.5, 1.0][i % 2]
    t = float(rng.uniform(0, 1))
    if (i // 2) % 2 == 0:
        rho1, rho2 = _random_input(rng, grid), _random_input(rng, grid)
        kind = "random"
    else:
        L = grid.period
        c = float(rng.uniform(0, L))
        sigma2 = (float(rng.uniform(0.05, 0.1)) * L) ** 2
        rho1 = gaussian_density(grid, c, sigma2)
        rho2 = gaussian_density(grid, (c + L / 2) % L, sigma2)
        kind = "separated-bumps"
    spec = KineticSpec(s)
    scale = 1 + t * info(rho1, spec) + (1 - t) * info(rho2, spec)
    gap = convexity_test(rho1, rho2, t, spec)
    return {"convexity": gap / scale}, {"s": s, "t": t, "kind": kind}, density_digest(rho1, rho2)


def _trial_split(rng, i, cfg):
    N = [2, 3][i % 2]
    s = [0.5, 1.0][(i // 2) % 2]
    kind = "random" if (i // 4) % 2 == 0 else "mixture"
    mu = _symmetric_input(rng, _grid(N, cfg.period, 32 if N == 2 else 16), kind)
    lhs, rhs = split_identity_check(mu, 1, KineticSpec(s))
    return {"split": -abs(lhs - rhs) / abs(lhs)}, {"N": N, "s": s, "kind": kind}, density_digest(mu)


def _trial_hoffmann(rng, i, cfg):
    N = [2, 3][i % 2]
    s = [0.5, 1.0][(i // 2) % 2]
    kind = "random" if (i // 4) % 2 == 0 else "mixture"
    mu = _symmetric_input(rng, _grid(N, cfg.period, 32 if N == 2 else 16), kind)
    spec = KineticSpec(s, method=cfg.chain_method)
    total = info(mu, spec)
    scale = 1 + total
    gaps = {}
    chain_total = 0.0
    for n in sorted({1, N - 1}):
        c = hoffmann_ostenhof_chain(mu, n, spec)
        gaps[f"ho_identity_n{n}"] = -c.ho_error
        gaps[f"diamagnetic_n{n}"] = c.diamagnetic_gap / scale
        gaps[f"convexity_n{n}"] = c.convexity_gap / scale
        weight = 2 if N - n == n else 1
        chain_total += weight * (c.trace - c.marginal_info)
    gap = superadditivity_gap(mu, 1, spec)
    gaps["accounting"] = -abs(chain_total - gap) / scale
    return gaps, {"N": N, "s": s, "kind": kind, "method": cfg.chain_method}, density_digest(mu)


def _trial_monomial(rng, i, cfg):
    grid = _grid(2, cfg.period)
    mu = _symmetric_input(rng, grid, "random" if i % 2 == 0 else "mixture")
    phi = rng.uniform(-1, 1, size=(grid.m,))
    gamma = reduced_density_matrix(sqrt_density(mu), 1)
    lhs = monomial_trace(gamma, phi)
    rhs = marginal(mu, 1).integrate(phi)
    return {"monomial": -abs(lhs - rhs)}, {}, density_digest(mu)


def _held_out(rng: np.random.Generator, grid_1p: GridSpec, i: int) -> Density:
    if i % 2 == 0:
        return random_density(grid_1p, int(rng.integers(2**31)), smoothness=float(rng.uniform(0.9, 1.3)),
                              amplitude=float(rng.uniform(0.5, 1.0)))
    L = grid_1p.period
    return gaussian_density(grid_1p, float(rng.uniform(0, L)), (float(rng.uniform(0.05, 0.1)) * L) ** 2)


def _trial_bbm(rng, i, cfg):
    grid = _grid(1, cfg.period)
    mu = _held_out(rng, grid, i)
    s = 0.99
    i1 = info(mu, KineticSpec(1.0))
    spectral = info(mu, KineticSpec(s))
    limit = calibrate_limit_constant(grid, s) * (1 - s) * singular_form(mu, s)
    gaps = {
        "spectral_continuity": -abs(spectral - i1) / i1,
        "calibrated_limit": -abs(limit - i1) / i1,
    }
    return gaps, {"I1": i1, "I_0.99": spectral, "limit_estimate": limit}, density_digest(mu)


def _agreement_errors(mu: Density, s: float) -> dict[str, float]:
    spectral = info(mu, KineticSpec(s))
    out = {}
    for offset in ("s", "2s"):
        C = calibrate_singular_constant(mu.grid.single(), s, offset)
        out[offset] = abs(C * singular_form(mu, s, offset) - spectral) / spectral
    return out


def _trial_method_agreement(rng, i, cfg):
    grid = _grid(1, cfg.period)
    mu = _held_out(rng, grid, i)
    errors = _agreement_errors(mu, cfg.agreement_s)
    gaps = {f"singular_offset_{k}": -v for k, v in errors.items()}
    if i % 2 == 1:
        i1 = info(mu, KineticSpec(1.0))
        gradient = fisher_info(mu, KineticSpec(1.0, method="gradient")).value
        gaps["gradient_vs_spectral"] = -abs(gradient - i1) / i1
    return gaps, {"s": cfg.agreement_s, "errors": errors}, density_digest(mu)


_TRIALS: dict[str, tuple[TrialFn, dict[str, float]]] = {
    "superadd": (_trial_superadd, {"superadd": 1e-9}),
    "monotone": (_trial_monotone, {"monotone": 1e-9}),
    "affinity": (_trial_affinity, {}),
    "diamagnetic": (_trial_diamagnetic, {"diamagnetic": 1e-10}),
    "convexity": (_trial_convexity, {"convexity": 1e-10}),
    "split": (_trial_split, {"split": 1e-9}),
    "hoffmann": (_trial_hoffmann, {}),
    "monomial": (_trial_monomial, {"monomial": 1e-10}),
    "bbm": (_trial_bbm, {"spectral_continuity": 0.02, "calibrated_limit": 0.05}),
    "method-agreement": (_trial_method_agreement, {"gradient_vs_spectral": 0.01}),
}


def _tolerance_for(suite: str, key: str) -> float:
    fixed = _TRIALS[suite][1]
    if key in fixed:
        return fixed[key]
    if suite == "affinity":
        return 0.0 if key.startswith("defect_decrease") else 1e-9
    if suite == "hoffmann":
        return 1e-10 if key.startswith("ho_identity") else 1e-9
    if suite == "method-agreement":
        # only the selected offset is held to the 1% bound; see _select_offset
        return math.inf
    raise KeyError(key)


def _select_offset(report: SuiteReport) -> None:
    """Record which exponent offset keeps the calibrated singular form within 1%."""
    within = {}
    for offset in ("s", "2s"):
        key = f"singular_offset_{offset}"
        errs = [-r.gaps[key] for r in report.records if key in r.gaps]
        within[offset] = bool(errs) and max(errs) <= 0.01
    chosen = [k for k, ok in within.items() if ok]
    report.summary["offsets_within_1pct"] = chosen
    report.summary["selected_offset"] = chosen[0] if len(chosen) == 1 else None
    if report.records:
        if len(chosen) == 1:
            report.tolerances[f"singular_offset_{chosen[0]}"] = 0.01
        else:
            # neither or both offsets pass: hold both to 1% and a uniqueness flag
            report.tolerances["singular_offset_s"] = 0.01
            report.tolerances["singular_offset_2s"] = 0.01
            report.records[0].gaps["unique_offset"] = -1.0
            report.tolerances["unique_offset"] = 0.0


def run_suite(name: str, config: SuiteConfig | None = None) -> SuiteReport:
    """Run one suite. Deterministic in ``config``; trial errors are recorded, not raised."""
    if name not in _TRIALS:
        raise ConfigError(f"unknown suite {name!r}; choose from {SUITES}")
    cfg = config or SuiteConfig()
    fn, _ = _TRIALS[name]
    n_trials = cfg.trials_for(name)
    start = time.perf_counter()

    def one(i: int) -> TrialRecord:
        seed = trial_seed(cfg.master_seed, name, i)
        rng = np.random.default_rng(seed)
        try:
            gaps, params, digest = fn(rng, i, cfg)
        except Exception as exc:  # recorded; a single bad trial must not abort the suite
            return TrialRecord(i, seed, "", {}, {}, f"{type(exc).__name__}: {exc}")
        return TrialRecord(i, seed, digest, {k: float(v) for k, v in gaps.items()}, params)

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(one, range(n_trials)))
    else:
        records = [one(i) for i in range(n_trials)]

    keys = sorted({k for r in records for k in r.gaps})
    tolerances = {k: _tolerance_for(name, k) for k in keys}
    report = SuiteReport(
        name=name,
        trials=n_trials,
        records=records,
        tolerances=tolerances,
        config={"master_seed": cfg.master_seed, "trials": n_trials, "period": cfg.period,
                "n_max": cfg.n_max, "agreement_s": cfg.agreement_s, "chain_method": cfg.chain_method},
    )
    if name == "method-agreement":
        _select_offset(report)
    report.runtime = time.perf_counter() - start
    return report


def check_density(mu: Density, s: float = 1.0) -> SuiteReport:
    """Superadditivity and normalized monotonicity on one given density."""
    start = time.perf_counter()
    spec = KineticSpec(s)
    N = mu.n_particles
    total = info(mu, spec)
    gaps = {}
    for n in range(1, N):
        gaps[f"superadd_n{n}"] = superadditivity_gap(mu, n, spec) / (1 + total)
        if N % n == 0:
            gaps[f"monotone_n{n}"] = normalized_monotonicity_check(mu, n, spec) / (1 + total)
    record = TrialRecord(0, 0, density_digest(mu), gaps, {"s": s, "N": N, "I": total})
    report = SuiteReport("input-density", 1, [record], {k: 1e-9 for k in gaps},
                         config={"s": s, "grid": mu.grid.to_dict()})
    report.runtime = time.perf_counter() - start
    return report


def run_all(suites=SUITES, config: SuiteConfig | None = None) -> dict[str, SuiteReport]:
    return {name: run_suite(name, config) for name in suites}
