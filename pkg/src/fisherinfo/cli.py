"""Command-line entry point: ``compute``, ``verify``, ``scan`` and ``calibrate``.

Standard output carries only JSON (``compute``, ``verify``, ``calibrate``) or
CSV (``scan``); diagnostics go to standard error. Exit codes:

    0  success
    1  a verification suite failed (reports are still written)
    2  invalid configuration
    3  unreadable or malformed density file
    4  refused by the memory budget

Settings are merged as command-line flags > ``--config`` JSON file > defaults.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from . import harness
from .budget import check_budget, memory_cap
from .density import (
    Density,
    GridSpec,
    MixingMeasure,
    gaussian_density,
    load_density,
    mixture_product_density,
    product_density,
    random_density,
    save_density,
    uniform_density,
)
from .errors import BudgetError, ConfigError, FormatError
from .spectral import (
    METHODS,
    OFFSETS,
    KineticSpec,
    bbm_scan,
    calibrate_limit_constant,
    calibrate_singular_constant,
    fisher_info,
    salem_variant_info,
    singular_form,
)

log = logging.getLogger("fisherinfo")

EXIT_OK, EXIT_SUITE, EXIT_CONFIG, EXIT_FORMAT, EXIT_BUDGET = 0, 1, 2, 3, 4
BUILDERS = ("gaussian", "uniform", "product", "mixture", "random")
SCANS = ("bbm", "mean-info")
DEFAULT_S_VALUES = (0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99)
DEFAULT_CACHE = "fisherinfo-calibration.json"


@dataclass
class RunConfig:
    command: str = "compute"
    d: int = 1
    particles: int = 1
    m: int = 64
    period: float = 16.0
    s: float = 1.0
    method: str = "spectral"
    gamma: float | None = None
    exponent_offset: str = "2s"
    seed: int = 0
    trials: int | None = None
    n_max: int = 6
    in_path: str | None = None
    out: str | None = None
    mem_cap_bytes: int | None = None
    suites: str | None = None
    workers: int = 1
    # builders
    build: str | None = None
    mean: float | None = None
    sigma2: float = 1.0
    atoms: str | None = None
    smoothness: float = 1.0
    amplitude: float = 1.0
    save: str | None = None
    # command specific
    variant: str = "standard"
    scan: str = "bbm"
    s_values: str | None = None
    cache: str = DEFAULT_CACHE

    def validate(self) -> None:
        """Range checks that need no allocation; raise with the offending field named."""
        def need(ok, field, msg):
            if not ok:
                raise ConfigError(f"{field}: {msg}")

        need(self.d >= 1, "d", f"must be >= 1, got {self.d}")
        need(self.particles >= 1, "particles", f"must be >= 1, got {self.particles}")
        need(self.m >= 2, "m", f"must be >= 2, got {self.m}")
        need(self.period > 0, "period", f"must be positive, got {self.period}")
        need(0 < self.s <= 1, "s", f"must lie in (0, 1], got {self.s}")
        need(self.method in METHODS, "method", f"must be one of {METHODS}")
        need(self.exponent_offset in OFFSETS, "exponent_offset", f"must be one of {OFFSETS}")
        need(self.gamma is None or self.gamma < 0, "gamma", f"must be negative, got {self.gamma}")
        need(self.trials is None or self.trials >= 0, "trials", f"must be >= 0, got {self.trials}")
        need(self.n_max >= 1, "n_max", f"must be >= 1, got {self.n_max}")
        need(self.workers >= 1, "workers", f"must be >= 1, got {self.workers}")
        need(self.mem_cap_bytes is None or self.mem_cap_bytes > 0, "mem_cap_bytes", "must be positive")
        need(self.build is None or self.build in BUILDERS, "build", f"must be one of {BUILDERS}")
        need(self.sigma2 > 0, "sigma2", f"must be positive, got {self.sigma2}")
        need(self.variant in ("standard", "salem"), "variant", "must be 'standard' or 'salem'")
        need(self.scan in SCANS, "scan", f"must be one of {SCANS}")
        if self.suites:
            unknown = [x for x in self.suite_list() if x not in harness.SUITES]
            need(not unknown, "suites", f"unknown suite(s) {unknown}; choose from {harness.SUITES}")
        # method/order compatibility is checked by KineticSpec
        self.spec()

    def grid(self) -> GridSpec:
        return GridSpec(self.d, self.particles, self.m, self.period)

    def spec(self) -> KineticSpec:
        return KineticSpec(self.s, self.gamma, self.method, self.exponent_offset)

    def suite_list(self) -> list[str]:
        if not self.suites:
            return list(harness.SUITES)
        return [x.strip() for x in self.suites.split(",") if x.strip()]

    def s_list(self) -> list[float]:
        if not self.s_values:
            return list(DEFAULT_S_VALUES)
        try:
            return [float(x) for x in self.s_values.split(",")]
        except ValueError as exc:
            raise ConfigError(f"s_values: {exc}") from None


_FIELDS = {f.name for f in fields(RunConfig)}


def _parse_atoms(text: str) -> list[tuple[float, float, float]]:
    """``"w:mean:sigma2,w:mean:sigma2"`` -> list of triples."""
    out = []
    for item in text.split(","):
        parts = item.split(":")
        if len(parts) != 3:
            raise ConfigError(f"atoms: expected weight:mean:sigma2, got {item!r}")
        try:
            out.append(tuple(float(p) for p in parts))
        except ValueError:
            raise ConfigError(f"atoms: non-numeric entry in {item!r}") from None
    return out


def mixing_measure(cfg: RunConfig) -> MixingMeasure:
    grid_1p = cfg.grid().single()
    if cfg.atoms:
        triples = _parse_atoms(cfg.atoms)
        return MixingMeasure(
            tuple(w for w, _, _ in triples),
            tuple(gaussian_density(grid_1p, mu, s2) for _, mu, s2 in triples),
        )
    mean = cfg.period / 2 if cfg.mean is None else cfg.mean
    return MixingMeasure((1.0,), (gaussian_density(grid_1p, mean, cfg.sigma2),))


def build_density(cfg: RunConfig) -> Density:
    """The input density: ``--in`` file if given, otherwise the inline builder."""
    if cfg.in_path:
        return load_density(cfg.in_path)
    grid = cfg.grid()
    check_budget(grid.size, what="density")
    kind = cfg.build or "gaussian"
    mean = cfg.period / 2 if cfg.mean is None else cfg.mean
    if kind == "uniform":
        return uniform_density(grid)
    if kind == "random":
        return random_density(grid, cfg.seed, cfg.smoothness, cfg.amplitude)
    if kind == "mixture":
        return mixture_product_density(mixing_measure(cfg), cfg.particles)
    rho = gaussian_density(grid.single(), mean, cfg.sigma2)
    return rho if cfg.particles == 1 else product_density(rho, cfg.particles)


# -- commands -------------------------------------------------------------------


def cmd_compute(cfg: RunConfig) -> int:
    spec = cfg.spec()
    mu = build_density(cfg)
    if cfg.save:
        save_density(mu, cfg.save)
    start = time.perf_counter()
    if cfg.variant == "salem":
        value = salem_variant_info(mu, cfg.s, cfg.exponent_offset)
        record = {"value": value, "s": cfg.s, "method": "salem", "grid": mu.grid.to_dict(),
                  "per_axis": [value / mu.n_particles] * mu.n_particles}
    else:
        record = fisher_info(mu, spec).to_dict()
    record["wall_time"] = time.perf_counter() - start
    _emit_json(record)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    out_dir = Path(cfg.out or "reports")
    suite_cfg = harness.SuiteConfig(
        master_seed=cfg.seed, trials=cfg.trials, workers=cfg.workers,
        period=cfg.period, n_max=cfg.n_max,
    )
    reports = []
    if cfg.in_path:
        reports.append(harness.check_density(load_density(cfg.in_path), cfg.s))
    for name in cfg.suite_list():
        log.info("running suite %s", name)
        reports.append(harness.run_suite(name, suite_cfg))
    summary = {}
    for report in reports:
        report.write(out_dir)
        summary[report.name] = {
            "passed": report.passed,
            "trials": report.trials,
            "min_gap": report.min_gap,
            "failures": len(report.failures()),
            "digest": report.digest(),
            "runtime": report.runtime,
        }
        if not report.passed:
            print(f"suite {report.name} failed: {report.failures()[:5]}", file=sys.stderr)
    all_passed = all(r.passed for r in reports)
    _emit_json({"passed": all_passed, "out": str(out_dir), "suites": summary})
    return EXIT_OK if all_passed else EXIT_SUITE


def cmd_scan(cfg: RunConfig) -> int:
    """``bbm``: s, spectral, scaled_singular, limit_estimate.
    ``mean-info``: n, mean_info, affine, defect."""
    writer = csv.writer(sys.stdout, lineterminator="\n")
    if cfg.scan == "bbm":
        mu = build_density(cfg)
        rows = bbm_scan(mu, cfg.s_list(), cfg.exponent_offset)
        C = calibrate_limit_constant(mu.grid.single(), exponent_offset=cfg.exponent_offset)
        writer.writerow(["s", "spectral", "scaled_singular", "limit_estimate"])
        for r in rows:
            cells = (r.s, r.spectral, r.scaled_singular, C * r.scaled_singular)
            writer.writerow([repr(float(x)) for x in cells])
        return EXIT_OK
    P = mixing_measure(cfg)
    spec = KineticSpec(cfg.s)
    check_budget(cfg.m ** (cfg.d * cfg.n_max), what=f"{cfg.n_max}-particle density")
    affine = harness.affine_value(P, spec)
    writer.writerow(["n", "mean_info", "affine", "defect"])
    for n, g in harness.mean_info_sequence(P, spec, cfg.n_max):
        writer.writerow([n, repr(float(g)), repr(float(affine)), repr(float(affine - g))])
    return EXIT_OK


def _cache_key(cfg: RunConfig) -> str:
    return f"d={cfg.d};m={cfg.m};L={cfg.period!r};s={cfg.s!r};offset={cfg.exponent_offset}"


def cmd_calibrate(cfg: RunConfig) -> int:
    if not 0 < cfg.s < 1:
        raise ConfigError(f"s: calibration needs 0 < s < 1, got {cfg.s}")
    cache_path = Path(cfg.cache)
    cache = {}
    if cache_path.exists():
        try:
            cache = json.loads(cache_path.read_text())
        except json.JSONDecodeError:
            log.warning("ignoring unreadable calibration cache %s", cache_path)
    key = _cache_key(cfg)
    if key in cache:
        record = dict(cache[key], cache_hit=True)
        _emit_json(record)
        return EXIT_OK
    grid_1p = GridSpec(cfg.d, 1, cfg.m, cfg.period)
    check_budget(grid_1p.size**2, what="pairwise kernel")
    C = calibrate_singular_constant(grid_1p, cfg.s, cfg.exponent_offset)
    held_out = random_density(grid_1p, cfg.seed)
    spectral = fisher_info(held_out, KineticSpec(cfg.s)).value
    rel = abs(C * singular_form(held_out, cfg.s, cfg.exponent_offset) - spectral) / spectral
    record = {
        "C": float(C),
        "d": cfg.d,
        "s": cfg.s,
        "exponent_offset": cfg.exponent_offset,
        "grid": grid_1p.to_dict(),
        "held_out": {"seed": cfg.seed, "relative_error": float(rel), "within_1pct": bool(rel <= 0.01)},
    }
    cache[key] = record
    cache_path.write_text(json.dumps(cache, indent=2, sort_keys=True) + "\n")
    _emit_json(dict(record, cache_hit=False))
    return EXIT_OK


COMMANDS = {"compute": cmd_compute, "verify": cmd_verify, "scan": cmd_scan, "calibrate": cmd_calibrate}


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, default=float) + "\n")


# -- argument handling ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    g = common.add_argument_group("grid and functional")
    g.add_argument("--d", type=int, help="spatial dimension per particle (default 1)")
    g.add_argument("--particles", type=int, help="number of particles N (default 1)")
    g.add_argument("--m", type=int, help="grid points per axis (default 64)")
    g.add_argument("--period", type=float, help="torus side length L (default 16)")
    g.add_argument("--s", type=float, help="order s in (0, 1] (default 1)")
    g.add_argument("--method", choices=METHODS, help="evaluation method (default spectral)")
    g.add_argument("--gamma", type=float, help="negative cutoff exponent for the cutoff variant")
    g.add_argument("--exponent-offset", dest="exponent_offset", choices=OFFSETS,
                   help="singular kernel exponent d + offset (default 2s)")
    r = common.add_argument_group("runs and files")
    r.add_argument("--seed", type=int, help="master seed (default 0)")
    r.add_argument("--trials", type=int, help="trials per suite (default: per-suite)")
    r.add_argument("--n-max", dest="n_max", type=int, help="largest marginal order (default 6)")
    r.add_argument("--in", dest="in_path", help="density file (.fkh header or .fkd payload)")
    r.add_argument("--out", help="output directory for reports (verify)")
    r.add_argument("--config", help="JSON file with any of these settings")
    r.add_argument("--mem-cap-bytes", dest="mem_cap_bytes", type=int, help="allocation cap")
    r.add_argument("--suites", help=f"comma-separated subset of {','.join(harness.SUITES)}")
    r.add_argument("--workers", type=int, help="threads for suite trials (default 1)")
    r.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    b = common.add_argument_group("inline density builders")
    b.add_argument("--build", choices=BUILDERS, help="builder used when --in is absent (default gaussian)")
    b.add_argument("--mean", type=float, help="Gaussian centre (default L/2)")
    b.add_argument("--sigma2", type=float, help="Gaussian variance (default 1)")
    b.add_argument("--atoms", help="mixture atoms as weight:mean:sigma2,...")
    b.add_argument("--smoothness", type=float, help="random builder spectral decay (default 1)")
    b.add_argument("--amplitude", type=float, help="random builder log-amplitude (default 1)")

    parser = argparse.ArgumentParser(
        prog="fisherinfo",
        description="Fisher informations of symmetric densities on periodic grids.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  fisherinfo compute --build gaussian --m 64 --period 16 --sigma2 1 --s 1
  fisherinfo verify --out reports --seed 0
  fisherinfo scan --scan bbm --build random --seed 3
  fisherinfo calibrate --s 0.5 --m 64
""",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    quiet = {"parents": [common], "argument_default": argparse.SUPPRESS}
    p = sub.add_parser("compute", **quiet, help="evaluate one functional, print JSON")
    p.add_argument("--variant", choices=("standard", "salem"), help="salem: log-difference variant")
    p.add_argument("--save", help="also write the built density to this path")
    sub.add_parser("verify", **quiet, help="run verification suites, write reports")
    p = sub.add_parser(
        "scan", **quiet, help="print a CSV table",
        description="bbm columns: s, spectral, scaled_singular ((1-s) * singular form), "
                    "limit_estimate (scaled_singular times the calibrated limit constant). "
                    "mean-info columns: n, mean_info (I_s of the n-fold mixture / n), "
                    "affine (weighted single-particle average), defect (affine - mean_info).",
    )
    p.add_argument("--scan", choices=SCANS, help="table to produce (default bbm)")
    p.add_argument("--s-values", dest="s_values", help="comma-separated ascending orders < 1")
    p = sub.add_parser("calibrate", **quiet, help="calibrate the singular-form constant")
    p.add_argument("--cache", help=f"calibration cache file (default {DEFAULT_CACHE})")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, the ``--config`` file and explicit flags, in that order."""
    values = asdict(RunConfig())
    given = vars(args).copy()
    config_path = given.pop("config", None)
    given.pop("verbose", None)
    if config_path:
        try:
            loaded = json.loads(Path(config_path).read_text())
        except FileNotFoundError:
            raise ConfigError(f"config: file {config_path} not found") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: {config_path} is not valid JSON ({exc})") from None
        if not isinstance(loaded, dict):
            raise ConfigError("config: top level must be a JSON object")
        loaded = {k.replace("-", "_"): v for k, v in loaded.items()}
        unknown = sorted(set(loaded) - _FIELDS)
        if unknown:
            raise ConfigError(f"config: unknown key(s) {unknown}")
        values.update(loaded)
    values.update(given)
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(f"config: {exc}") from None


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = resolve_config(args)
        cfg.validate()
        if cfg.mem_cap_bytes is not None:
            with memory_cap(cfg.mem_cap_bytes):
                return COMMANDS[cfg.command](cfg)
        return COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except BudgetError as exc:
        print(f"budget refusal: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
