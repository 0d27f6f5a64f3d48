"""One test per acceptance criterion, each at its stated tolerance."""
import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from fisherinfo import harness
from fisherinfo.density import GridSpec, gaussian_density, product_density, random_density
from fisherinfo.harness import SuiteConfig, run_suite, superadditivity_gap
from fisherinfo.spectral import KineticSpec, fisher_info


def _suite(name):
    start = time.perf_counter()
    report = run_suite(name, SuiteConfig())
    return report, time.perf_counter() - start


def _gaps(report, prefix):
    return [g for r in report.records for k, g in r.gaps.items() if k.startswith(prefix)]


def test_criterion_1_gaussian_closed_form(verdict):
    start = time.perf_counter()
    mu = gaussian_density(GridSpec(1, 1, 64, 16.0), 8.0, 1.0)
    one = fisher_info(mu, KineticSpec(1.0)).value
    half = fisher_info(mu, KineticSpec(0.5)).value
    elapsed = time.perf_counter() - start
    err1 = abs(one - 0.25) / 0.25
    err_half = abs(half - 1 / math.sqrt(2 * math.pi)) / (1 / math.sqrt(2 * math.pi))
    ok = err1 <= 1e-6 and err_half <= 1e-4 and elapsed < 1.0
    verdict("criterion 1", ok, f"s=1 rel err {err1:.2e} (tol 1e-6); s=1/2 rel err {err_half:.2e} (tol 1e-4); {elapsed:.3f}s")
    assert err1 <= 1e-6
    assert err_half <= 1e-4
    assert elapsed < 1.0


def test_criterion_2_tensorization(verdict):
    start = time.perf_counter()
    worst = 0.0
    g = GridSpec(1, 1, 16, 8.0)
    for seed in range(10):
        rho = random_density(g, 1000 + seed)
        for s in (0.5, 1.0):
            one = fisher_info(rho, KineticSpec(s)).value
            for n in (2, 3, 4):
                many = fisher_info(product_density(rho, n), KineticSpec(s)).value
                worst = max(worst, abs(many - n * one) / (n * one))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 10
    verdict("criterion 2", ok, f"worst relative defect {worst:.2e} (tol 1e-10); {elapsed:.2f}s")
    assert ok


def test_criterion_3_superadditivity(verdict):
    report, elapsed = _suite("superadd")
    min_gap = report.min_gap
    Ns = {r.params["N"] for r in report.records}
    structured = []
    for s in (0.5, 1.0):
        mu = harness.structured_mixture(GridSpec(1, 2, 32, 16.0))
        spec = KineticSpec(s)
        structured.append(superadditivity_gap(mu, 1, spec) / fisher_info(mu, spec).value)
    ok = (
        report.trials >= 100
        and report.passed
        and min_gap >= -1e-9
        and max(Ns) <= 4
        and min(structured) > 0.01
        and elapsed < 120
    )
    verdict(
        "criterion 3", ok,
        f"{report.trials} trials, N in {sorted(Ns)}, min gap/(1+I) {min_gap:.2e}; "
        f"structured gap/I {structured[0]:.3f} (s=1/2), {structured[1]:.3f} (s=1); {elapsed:.1f}s",
    )
    assert ok


def test_criterion_4_proof_chain(verdict):
    split, t1 = _suite("split")
    chain, t2 = _suite("hoffmann")
    split_err = -min(_gaps(split, "split"))
    ho_err = -min(_gaps(chain, "ho_identity"))
    chain_min = min(_gaps(chain, "diamagnetic") + _gaps(chain, "convexity"))
    accounting = -min(_gaps(chain, "accounting"))
    Ns = {r.params["N"] for r in chain.records}
    ok = (
        split_err <= 1e-9
        and ho_err <= 1e-10
        and chain_min >= -1e-9
        and accounting <= 1e-9
        and split.trials == chain.trials == 20
        and Ns == {2, 3}
        and t1 + t2 < 120
    )
    verdict(
        "criterion 4", ok,
        f"split rel err {split_err:.1e}; HO max err {ho_err:.1e}; min chain gap {chain_min:.2e}; "
        f"accounting {accounting:.1e}; {t1 + t2:.1f}s",
    )
    assert ok


def test_criterion_5_affinity(verdict):
    report, elapsed = _suite("affinity")
    fixture = [r for r in report.records if r.params["fixture"] == "separated"]
    assert {r.params["s"] for r in fixture} == {0.5, 1.0}
    details = []
    ok = elapsed < 300
    for r in fixture:
        g = {int(k): v for k, v in r.params["g"].items()}
        affine = r.params["affine"]
        a = all(v <= affine + 1e-9 for v in g.values())
        b = g[1] <= g[2] + 1e-9 and g[2] <= g[4] + 1e-9
        c = (affine - g[6]) < (affine - g[2])
        ok = ok and a and b and c
        details.append(f"s={r.params['s']}: defect n=2 {affine - g[2]:.2e}, n=6 {affine - g[6]:.2e}")
    ok = ok and report.passed
    verdict("criterion 5", ok, "; ".join(details) + f"; {elapsed:.1f}s")
    assert ok


def test_criterion_6_kinetic_properties(verdict):
    dia, t1 = _suite("diamagnetic")
    conv, t2 = _suite("convexity")
    s_values = {r.params["s"] for r in dia.records} | {r.params["s"] for r in conv.records}
    ok = (
        dia.trials == conv.trials == 1000
        and dia.min_gap >= -1e-10
        and conv.min_gap >= -1e-10
        and s_values == {0.5, 1.0}
        and t1 + t2 < 60
    )
    verdict("criterion 6", ok, f"min diamagnetic gap {dia.min_gap:.2e}; min convexity gap {conv.min_gap:.2e}; {t1 + t2:.1f}s")
    assert ok


def test_criterion_7_method_agreement_and_bbm(verdict):
    agree, t1 = _suite("method-agreement")
    bbm, t2 = _suite("bbm")
    selected = agree.summary["offsets_within_1pct"]
    continuity = -min(_gaps(bbm, "spectral_continuity"))
    limit = -min(_gaps(bbm, "calibrated_limit"))
    ok = len(selected) == 1 and continuity <= 0.02 and limit <= 0.05 and agree.passed and bbm.passed and t1 + t2 < 120
    errs = {o: max(-g for g in _gaps(agree, f"singular_offset_{o}")) for o in ("s", "2s")}
    verdict(
        "criterion 7", ok,
        f"offsets within 1%: {selected} (max err s={errs['s']:.2e}, 2s={errs['2s']:.2e}); "
        f"|I_0.99 - I_1|/I_1 <= {continuity:.2e}; calibrated limit err <= {limit:.2e}; {t1 + t2:.1f}s",
    )
    assert ok


def test_criterion_8_monomial(verdict):
    report, elapsed = _suite("monomial")
    worst = -report.min_gap
    ok = report.trials == 20 and worst <= 1e-10 and elapsed < 30
    verdict("criterion 8", ok, f"max |tr(phi G) - int phi mu1| {worst:.1e}; {elapsed:.2f}s")
    assert ok


def _cli(*argv):
    proc = subprocess.run(
        [sys.executable, "-m", "fisherinfo.cli", *argv], capture_output=True, text=True, timeout=900
    )
    return proc.returncode, proc.stdout, proc.stderr


def _without_time(out):
    record = json.loads(out)
    record.pop("wall_time", None)
    return record


def test_criterion_9_cli_contract(verdict, tmp_path):
    start = time.perf_counter()
    stored = tmp_path / "gauss"
    code, _, _ = _cli("compute", "--build", "gaussian", "--d", "1", "--m", "64", "--period", "16",
                      "--sigma2", "1", "--save", str(stored))
    assert code == 0
    examples = [
        ("compute", "--in", str(stored) + ".fkh", "--s", "1"),
        ("compute", "--build", "uniform"),
        ("compute", "--method", "gradient", "--s", "0.5"),
    ]
    runs = [[_cli(*argv) for argv in examples] for _ in range(2)]
    codes = [r[0] for r in runs[0]]
    same = all(
        a[0] == b[0] and (a[0] != 0 or _without_time(a[1]) == _without_time(b[1]))
        for a, b in zip(*runs)
    )
    gauss = json.loads(runs[0][0][1])["value"]
    uniform = json.loads(runs[0][1][1])["value"]
    code, out, err = _cli("verify", "--out", str(tmp_path / "reports"))
    summary = json.loads(out)
    passed = [k for k, v in summary["suites"].items() if v["passed"]]
    elapsed = time.perf_counter() - start
    ok = (
        codes == [0, 0, 2]
        and same
        and abs(gauss - 0.25) / 0.25 <= 1e-6
        and uniform == 0.0
        and code == 0
        and len(passed) == 10
        and elapsed < 900
    )
    verdict(
        "criterion 9", ok,
        f"exit codes {codes}, repeat identical {same}, Gaussian {gauss!r}, uniform {uniform!r}; "
        f"verify exit {code} with {len(passed)}/10 suites passing; {elapsed:.1f}s",
    )
    assert ok
