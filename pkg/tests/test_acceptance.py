"""Acceptance suite: every headline contract at its stated tolerance.

Each test prints one ``ACCEPTANCE PASS`` line on success; a failing
criterion surfaces as an ordinary pytest failure. Run with::

    pytest tests/test_acceptance.py -v -s
"""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from adcfkit import (
    COST_PRESETS,
    ClassDistribution,
    CostModel,
    PairedScores,
    DualScoreSet,
    ScoreSet,
    adcf_default,
    adcf_norm_at,
    generate_single,
    min_adcf,
    min_tdcf,
    sasv_eer,
    spf_eer,
    sv_eer,
    tandem_rates_analytic,
    tdcf_constrained,
    tdcf_unconstrained,
    constrained_coeffs,
)
from adcfkit.cli import main as cli_main
from conftest import random_cost_model, random_scoreset
from oracles import brute_eer, brute_min_adcf, brute_min_dcf_two_class

GOLDEN = Path(__file__).parent / "golden"

DYADIC_PRIORS = [(0.5, 0.5), (0.75, 0.25), (0.25, 0.75), (0.875, 0.125), (0.625, 0.375)]


def report(name: str) -> None:
    print(f"ACCEPTANCE PASS: {name}")


def test_c01_table3_presets():
    assert COST_PRESETS["adcf1"].as_dict() == {
        "pi_tar": 0.94, "pi_non": 0.01, "pi_spf": 0.05,
        "c_miss": 1.0, "c_fa_non": 10.0, "c_fa_spf": 10.0,
    }
    assert COST_PRESETS["adcf2"].as_dict() == {
        "pi_tar": 0.98, "pi_non": 0.01, "pi_spf": 0.01,
        "c_miss": 1.0, "c_fa_non": 10.0, "c_fa_spf": 10.0,
    }
    assert adcf_default(COST_PRESETS["adcf1"]) == 0.6
    assert adcf_default(COST_PRESETS["adcf2"]) == 0.2
    report("built-in cost presets match the published table; "
           "default costs exactly 0.6 / 0.2")


def test_c02_dcf_degeneracy_is_exact():
    rng = np.random.default_rng(20240901)
    start = time.perf_counter()
    for i in range(50):
        pi_tar, pi_non = DYADIC_PRIORS[i % len(DYADIC_PRIORS)]
        m = CostModel(pi_tar=pi_tar, pi_non=pi_non, pi_spf=0.0,
                      c_miss=float(rng.uniform(0.5, 5.0)),
                      c_fa_non=float(rng.uniform(0.5, 5.0)),
                      c_fa_spf=float(rng.uniform(0.5, 5.0)))
        s = random_scoreset(rng)
        got = min_adcf(m, s).min_norm_adcf
        want = brute_min_dcf_two_class(m.c_miss, m.c_fa_non, m.pi_tar,
                                       s.tar.tolist(), s.non.tolist())
        assert got - want == 0.0
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    report(f"weightless spoof prior reduces to the two-class minimum cost, "
           f"difference exactly 0 on 50 datasets ({elapsed:.2f}s)")


def test_c03_tdcf_collapse_with_dummy_cm():
    rng = np.random.default_rng(20240902)
    start = time.perf_counter()
    for _ in range(50):
        n = rng.integers(5, 60, size=3)
        d = DualScoreSet(
            tar=PairedScores(rng.normal(1.5, 1.0, n[0]), np.full(n[0], 1e6)),
            non=PairedScores(rng.normal(0.0, 1.0, n[1]), np.full(n[1], 1e6)),
            spf=PairedScores(rng.normal(0.5, 1.0, n[2]), np.full(n[2], 1e6)),
        )
        m = random_cost_model(rng)
        tdcf = min_tdcf(m, d).min_norm_tdcf
        adcf = min_adcf(m, ScoreSet(d.tar.asv, d.non.asv, d.spf.asv)).min_norm_adcf
        assert abs(tdcf - adcf) <= 1e-12
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    report(f"dummy spoof detector collapses the tandem cost to the "
           f"single-score cost within 1e-12 on 50 datasets ({elapsed:.2f}s)")


def test_c04_constrained_equals_unconstrained():
    rng = np.random.default_rng(20240903)
    grid = [(float(a), float(b))
            for a in np.linspace(0.0, 1.0, 10) for b in np.linspace(0.0, 1.0, 10)]
    for _ in range(20):
        m = random_cost_model(rng)
        for _ in range(20):
            frozen = tuple(float(x) for x in rng.random(3))
            coeffs = constrained_coeffs(m, frozen)
            for p_miss_cm, p_fa_cm in grid:
                via_coeffs = tdcf_constrained(coeffs, p_miss_cm, p_fa_cm)
                via_rates = tdcf_unconstrained(
                    m, tandem_rates_analytic(frozen, (p_miss_cm, p_fa_cm)))
                assert abs(via_coeffs - via_rates) <= 1e-12
    report("frozen-ASV coefficient form equals the composed tandem cost "
           "within 1e-12 on 20 models x 20 operating points x 100 rate pairs")


def test_c05_brute_force_oracle():
    rng = np.random.default_rng(20240904)
    start = time.perf_counter()
    for i in range(200):
        n = rng.integers(5, 161, size=3)  # at most ~480 trials
        s = ScoreSet(
            tar=rng.normal(1.0, 1.0, n[0]),
            non=rng.normal(0.0, 1.0, n[1]),
            spf=rng.normal(-0.5, 1.2, n[2]),
        )
        m = random_cost_model(rng) if i % 2 else COST_PRESETS["adcf1"]
        got = min_adcf(m, s)
        want, _ = brute_min_adcf(m, s.tar.tolist(), s.non.tolist(), s.spf.tolist())
        assert got.min_norm_adcf == want

        pooled = np.concatenate([s.non, s.spf]).tolist()
        for res, pos, neg in (
            (sv_eer(s), s.tar.tolist(), s.non.tolist()),
            (spf_eer(s), s.tar.tolist(), s.spf.tolist()),
            (sasv_eer(s), s.tar.tolist(), pooled),
        ):
            want_eer, _ = brute_eer(pos, neg)
            assert abs(res.eer - want_eer) <= 1e-12
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    report(f"minimum cost matches the exhaustive midpoint oracle exactly and "
           f"EERs match the interpolation oracle within 1e-12 on 200 datasets "
           f"({elapsed:.2f}s)")


def test_c06_boundedness_and_edges():
    rng = np.random.default_rng(20240905)
    for _ in range(1000):
        s = random_scoreset(rng, max_per_class=15)
        m = random_cost_model(rng)
        v = min_adcf(m, s).min_norm_adcf
        assert 0.0 <= v <= 1.0
        edge = min(adcf_norm_at(m, (0.0, 1.0, 1.0)), adcf_norm_at(m, (1.0, 0.0, 0.0)))
        assert edge == 1.0
    report("minimum normalized cost lies in [0, 1] on 1000 datasets and the "
           "cheaper default edge normalizes to exactly 1")


def _increasing_transforms(rng):
    makers = [
        lambda a, b: (lambda x: a * x + b),
        lambda a, b: (lambda x: a * np.power(x, 3) + b),
        lambda a, b: (lambda x: a * np.arctan(x) + b),
        lambda a, b: (lambda x: a * np.exp(x / 4.0) + b),
        lambda a, b: (lambda x: a * np.sinh(x / 3.0) + b),
    ]
    out = []
    for i in range(10):
        a = float(rng.uniform(0.5, 3.0))
        b = float(rng.uniform(-2.0, 2.0))
        out.append(makers[i % len(makers)](a, b))
    return out


def test_c07_monotone_transform_invariance():
    rng = np.random.default_rng(20240906)
    for _ in range(20):
        s = random_scoreset(rng)
        m = random_cost_model(rng)
        base = (
            min_adcf(m, s).min_norm_adcf,
            sv_eer(s).eer,
            spf_eer(s).eer,
            sasv_eer(s).eer,
        )
        for f in _increasing_transforms(rng):
            mapped = ScoreSet(tar=f(s.tar), non=f(s.non), spf=f(s.spf))
            got = (
                min_adcf(m, mapped).min_norm_adcf,
                sv_eer(mapped).eer,
                spf_eer(mapped).eer,
                sasv_eer(mapped).eer,
            )
            assert got == base
    report("minimum cost and all EERs are exactly invariant under 10 random "
           "strictly increasing score transforms per dataset")


def test_c08_sasv_eer_prior_dependence():
    tar, non, spf = [1.0, 2.0, 3.0], [2.0], [2.0, 4.0]
    base = ScoreSet(tar=tar, non=non, spf=spf)
    dup = ScoreSet(tar=tar, non=non, spf=spf * 5)
    sasv_delta = sasv_eer(dup).eer - sasv_eer(base).eer
    assert sasv_delta != 0.0
    assert sv_eer(dup).eer - sv_eer(base).eer == 0.0
    assert spf_eer(dup).eer - spf_eer(base).eer == 0.0
    report(f"5-fold spoof duplication moves the pooled-negatives EER by "
           f"{sasv_delta:+.4f} while the two-class EERs move by exactly 0")


def _timed_min_adcf(model, s, repeats=3):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        min_adcf(model, s)
        best = min(best, time.perf_counter() - t0)
    return best


def _synth_scores(n_total, seed):
    n_tar = (2 * n_total) // 5
    n_rest = (n_total - n_tar) // 2
    return generate_single(
        seed,
        ClassDistribution(1.5, 1.0, n_tar),
        ClassDistribution(0.0, 1.0, n_rest),
        ClassDistribution(-0.5, 1.2, n_total - n_tar - n_rest),
    )


def test_c09_performance_and_complexity():
    m = COST_PRESETS["adcf1"]
    big = _synth_scores(1_000_000, seed=55)
    t_full = _timed_min_adcf(m, big)
    assert t_full < 1.0

    t_quarter = _timed_min_adcf(m, _synth_scores(250_000, seed=55))
    t_half = _timed_min_adcf(m, _synth_scores(500_000, seed=55))
    assert t_half / t_quarter < 2.4
    assert t_full / t_half < 2.4
    report(f"one million trials in {t_full * 1000:.0f} ms single-threaded; "
           f"doubling ratios {t_half / t_quarter:.2f} and {t_full / t_half:.2f} "
           f"stay below 2.4")


def _run_cli(argv, capsys):
    code = cli_main(argv)
    out, err = capsys.readouterr()
    return code, out


def test_c10_cli_golden_determinism(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(GOLDEN)
    code, out = _run_cli(["evaluate", "--keys", "single.keys", "--scores",
                          "single.scores", "--include-sasv-eer", "--format", "json"],
                         capsys)
    assert code == 0 and out == (GOLDEN / "evaluate.json").read_text()
    code, out = _run_cli(["evaluate", "--keys", "single.keys", "--scores",
                          "single.scores", "--include-sasv-eer", "--format", "csv"],
                         capsys)
    assert code == 0 and out == (GOLDEN / "evaluate.csv").read_text()
    code, out = _run_cli(["tandem-eval", "--keys", "dual.keys", "--dual-scores",
                          "dual.dualscores", "--format", "json"], capsys)
    assert code == 0 and out == (GOLDEN / "tandem_grid.json").read_text()
    code, out = _run_cli(["tandem-eval", "--keys", "dual.keys", "--dual-scores",
                          "dual.dualscores", "--mode", "frozen-asv", "--t-asv", "0.0",
                          "--format", "json"], capsys)
    assert code == 0 and out == (GOLDEN / "tandem_frozen.json").read_text()

    prefix = tmp_path / "sweep"
    code, _ = _run_cli(["sweep", "--keys", "single.keys", "--scores", "single.scores",
                        "--config", "adcf1", "--out", str(prefix)], capsys)
    assert code == 0
    assert (tmp_path / "sweep_rates.csv").read_bytes() == \
        (GOLDEN / "sweep_rates.csv").read_bytes()
    assert (tmp_path / "sweep_cost.csv").read_bytes() == \
        (GOLDEN / "sweep_cost.csv").read_bytes()

    gated = tmp_path / "gated.scores"
    code, _ = _run_cli(["gate", "--dual-scores", "dual.dualscores", "--order",
                        "cm-first", "--t-gate", "0.3", "--out", str(gated)], capsys)
    assert code == 0
    assert gated.read_bytes() == (GOLDEN / "gated.scores").read_bytes()
    report("all four machine outputs are byte-identical to the committed "
           "golden files")
