"""Acceptance criteria, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL`` line with the measured
worst residual, so the outcome is visible without ``-s``.
"""

import cmath
import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import random_basis, random_complex, random_diagonalizable, random_two_level
from nonherm.antilinear import (
    AntilinearOp,
    adjoint,
    compose_aa,
    rank_one_selfadjoint_example,
    v_squared_orthogonality_check,
)
from nonherm.biortho import build_system, flat_adjoint, invariant_report, sharp_adjoint
from nonherm.dynamics import EvolutionSpec, closed_form, trace
from nonherm.errors import DegenerateSpectrumError
from nonherm.intertwine import (
    build_derived,
    build_v_ops,
    check_antilinear_intertwining,
    check_isospectrality,
    check_linear_intertwining,
    check_metric_selfadjointness,
    no_selfadjoint_similarity_demo,
)
from nonherm.numerics import frobenius_residual, general_eig, scalar_product
from nonherm.two_level import (
    DasGreenwoodParams,
    Regime,
    TwoLevelParams,
    build_h,
    classify_regime,
    closed_form_hphiphi,
    closed_form_metrics,
    closed_form_system,
    das_greenwood_h,
    map_das_greenwood,
    pipeline_system,
)

ROOT = Path(__file__).resolve().parent.parent


def announce(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")


@pytest.fixture(scope="module")
def random_systems():
    rng = np.random.default_rng(1)
    out = []
    for _ in range(200):
        n = int(rng.integers(2, 11))
        h, _ = random_diagonalizable(rng, n)
        out.append(h)
    return out


def test_criterion_1_biorthogonal_construction(capsys, random_systems):
    start = time.perf_counter()
    worst = 0.0
    for h in random_systems:
        worst = max(worst, invariant_report(build_system(h)).worst)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 10.0
    announce(capsys, 1, ok, f"200 systems, worst residual {worst:.2e} < 1e-9, {elapsed:.2f} s < 10 s")
    assert ok


def test_criterion_2_antilinear_algebra(capsys, random_systems):
    rng = np.random.default_rng(2)
    worst = 0.0
    for h in random_systems[:50]:
        sys_ = build_system(h)
        n = sys_.dim
        v_phi, v_psi = build_v_ops(sys_)
        worst = max(worst, frobenius_residual(compose_aa(v_phi, v_phi), np.eye(n)))
        worst = max(worst, frobenius_residual(compose_aa(v_psi, v_psi), np.eye(n)))
        worst = max(worst, frobenius_residual(adjoint(v_phi).m, v_psi.m))
    for _ in range(20):
        n = int(rng.integers(2, 9))
        v1, v2 = AntilinearOp(random_complex(rng, n, n)), AntilinearOp(random_complex(rng, n, n))
        lhs = compose_aa(v1, v2).conj().T
        rhs = compose_aa(adjoint(v2), adjoint(v1))
        worst = max(worst, frobenius_residual(lhs, rhs))
        vd = adjoint(v1)
        for _ in range(100):
            phi, chi = random_complex(rng, n), random_complex(rng, n)
            a, b = scalar_product(vd(phi), chi), scalar_product(v1(chi), phi)
            worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    ok = worst < 1e-10
    announce(capsys, 2, ok, f"V^2 = 1, V_phi^+ = V_psi, adjoint contract, product rule: worst {worst:.2e} < 1e-10")
    assert ok


def _two_level_samples():
    rng = np.random.default_rng(3)
    params = [TwoLevelParams(1, 1, 1 + 1j, 1 - 1j), TwoLevelParams(1, 1, 2, 1)]
    params += [random_two_level(rng, regime) for regime in ("ur", "br") for _ in range(10)]
    return [(build_h(p), closed_form_system(p)) for p in params]


def test_criterion_3_intertwining(capsys, random_systems):
    cases = [(h, build_system(h)) for h in random_systems] + _two_level_samples()
    worst_rel, worst_iso, worst_onb = 0.0, 0.0, 0.0
    for h, sys_ in cases:
        d = build_derived(h, sys_)
        for rep in (
            check_antilinear_intertwining(d, sys_),
            check_linear_intertwining(d, sys_, h),
            check_metric_selfadjointness(d, sys_),
        ):
            worst_rel = max(worst_rel, rep.worst)
        worst_iso = max(worst_iso, check_isospectrality(d, sys_).worst)
        worst_onb = max(worst_onb, frobenius_residual(d.e_basis.conj().T @ d.e_basis, np.eye(sys_.dim)))
    ok = worst_rel < 1e-9 and worst_iso < 1e-9 and worst_onb < 1e-10
    announce(
        capsys, 3, ok,
        f"{len(cases)} systems: relations {worst_rel:.2e} < 1e-9, eigenpairs {worst_iso:.2e} < 1e-9, "
        f"e-basis {worst_onb:.2e} < 1e-10",
    )
    assert ok


def test_criterion_4_real_spectrum(capsys):
    rng = np.random.default_rng(4)
    cases = []
    for _ in range(50):
        h, _ = random_diagonalizable(rng, int(rng.integers(2, 9)), real=True)
        cases.append(h)
    cases += [build_h(random_two_level(rng, "ur")) for _ in range(20)]
    worst = 0.0
    for h in cases:
        sys_ = build_system(h)
        hd = h.conj().T
        d = build_derived(h, sys_)
        scale = max(1.0, np.abs(h).max())
        worst = max(
            worst,
            frobenius_residual(sys_.s_psi @ h, hd @ sys_.s_psi),
            frobenius_residual(sys_.s_phi @ hd, h @ sys_.s_phi),
            frobenius_residual(sharp_adjoint(h, sys_), h),
            frobenius_residual(flat_adjoint(hd, sys_), hd),
            np.abs(d.h_phiphi - h).max() / scale,
        )
    ok = worst < 1e-10
    announce(capsys, 4, ok, f"{len(cases)} real-spectrum H: worst {worst:.2e} < 1e-10")
    assert ok


def test_criterion_5_two_level_closed_forms(capsys):
    rng = np.random.default_rng(5)
    worst = 0.0
    for regime in ("ur", "br"):
        for _ in range(100):
            p = random_two_level(rng, regime)
            num = pipeline_system(p)
            ref = closed_form_system(p)
            s_phi, s_psi = closed_form_metrics(p)
            hpp = build_derived(build_h(p), num).h_phiphi
            for a, b in ((num.phi, ref.phi), (num.psi, ref.psi), (num.s_phi, s_phi), (num.s_psi, s_psi),
                         (hpp, closed_form_hphiphi(p))):
                worst = max(worst, np.abs(a - b).max() / max(1.0, np.abs(b).max()))
    ok = worst < 1e-10
    announce(capsys, 5, ok, f"200 draws, closed form vs pipeline worst {worst:.2e} < 1e-10")
    assert ok


def test_criterion_6_das_greenwood(capsys):
    rng = np.random.default_rng(6)
    worst = 0.0
    draws = 0
    while draws < 100:
        dg = DasGreenwoodParams(rng.uniform(0.1, 3), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0, 2 * math.pi))
        if dg.discriminant <= 1e-3:
            continue
        draws += 1
        for branch in "+-":
            worst = max(worst, np.abs(build_h(map_das_greenwood(dg, branch)) - das_greenwood_h(dg)).max())

    mismatches = 0
    for r in np.linspace(0, 2, 101):
        for theta in np.linspace(0, math.pi, 101):
            dg = DasGreenwoodParams(r, 1, 1, theta)
            regime = classify_regime(dg)
            h = das_greenwood_h(dg)
            try:
                vals = general_eig(h).eigenvalues
            except DegenerateSpectrumError:
                mismatches += regime is not Regime.EXCEPTIONAL
                continue
            if regime is Regime.EXCEPTIONAL:
                mismatches += abs(vals[0] - vals[1]) > 1e-6
            else:
                broken = np.abs(vals.imag).max() > 1e-8
                mismatches += broken != (regime is Regime.BROKEN)
    ok = worst < 1e-10 and mismatches == 0
    announce(capsys, 6, ok, f"round trip worst {worst:.2e} < 1e-10; {mismatches} misclassified of 101x101")
    assert ok


def test_criterion_7_dynamics(capsys):
    rng = np.random.default_rng(7)
    start = time.perf_counter()
    worst = 0.0
    for regime in ("ur", "br"):
        for _ in range(50):
            p = random_two_level(rng, regime)
            spec = EvolutionSpec(tuple(random_complex(rng, 2)), tuple(random_complex(rng, 2)), 0.0, 20.0, 2000)
            tr = trace(build_h(p), closed_form_system(p), spec)
            worst = max(worst, np.abs(closed_form(p, spec, tr.times)[2] - tr.probs).max())

    bench = EvolutionSpec((1, 1), (1, 0), 0.0, 10.0, 1001)
    ur = TwoLevelParams(1, 1, 2, 1)
    period = 2 * math.pi / (ur.e1 - ur.e2).real
    t = np.linspace(0, 15, 500)
    drift = np.abs(closed_form(ur, bench, t + period)[2] - closed_form(ur, bench, t)[2]).max()
    p_up = trace(build_h(TwoLevelParams(1, 1, 1 + 1j, 1 - 1j)), closed_form_system(TwoLevelParams(1, 1, 1 + 1j, 1 - 1j)), bench)
    down = TwoLevelParams(1, 1, 1 - 1j, 1 + 1j)
    p_down = trace(build_h(down), closed_form_system(down), bench)
    elapsed = time.perf_counter() - start

    ok = (worst < 1e-9 and drift < 1e-10 and abs(p_up.probs[-1] - 0.1) < 1e-6
          and p_down.probs[-1] < 1e-8 and elapsed < 5.0)
    announce(
        capsys, 7, ok,
        f"closed vs spectral {worst:.2e} < 1e-9, period drift {drift:.2e} < 1e-10, "
        f"P(10) = {p_up.probs[-1]:.10f} (I=1), {p_down.probs[-1]:.2e} (I=-1), {elapsed:.2f} s < 5 s",
    )
    assert ok


def test_criterion_8_similarity_witness(capsys):
    rng = np.random.default_rng(8)
    worst = 0.0
    retains = True
    models = [TwoLevelParams(1, 1, 1 + 1j, 1 - 1j)] + [random_two_level(rng, "br") for _ in range(5)]
    for p in models:
        h = build_h(p)
        samples = [build_system(h).s_psi_sqrt] + [random_basis(rng, 2, 100) for _ in range(50)]
        w = no_selfadjoint_similarity_demo(h, samples)
        worst = max(worst, w.max_mismatch)
        retains &= w.all_retain_nonreal and w.none_selfadjoint
    ok = worst < 1e-8 and retains
    announce(capsys, 8, ok, f"51 X per model, spectrum mismatch {worst:.2e} < 1e-8, non-real eigenvalue retained: {retains}")
    assert ok


def _selfadjoint_eigenpairs(rng, n):
    a = random_complex(rng, n, n)
    v = AntilinearOp(a + a.T)
    lam, u = np.linalg.eigh(compose_aa(v, v))
    pairs = []
    for k in range(n):
        vec = u[:, k]
        j = int(np.argmax(np.abs(vec)))
        pairs.append((vec, v(vec)[j] / vec[j]))
    return v, pairs


def test_criterion_9_antilinear_pathologies(capsys):
    alpha = 0.8 + 0.6j
    psi = np.array([1.0, 1.0j]) / math.sqrt(2)
    v = rank_one_selfadjoint_example(psi, alpha)
    eig_err = np.abs(v(psi) - alpha * psi).max()
    z1, z2 = cmath.exp(1j * math.pi / 4), cmath.exp(1j * math.pi / 3)
    a1, a2 = -1j * alpha, -alpha / 2 * (1 + 1j * math.sqrt(3))
    eig_err = max(eig_err, np.abs(v(z1 * psi) - a1 * z1 * psi).max(), np.abs(v(z2 * psi) - a2 * z2 * psi).max())
    report = v_squared_orthogonality_check(v, [(z1 * psi, a1), (z2 * psi, a2)])
    overlap_err = abs(report.pairs[0][3] - cmath.exp(1j * math.pi / 12))

    rng = np.random.default_rng(9)
    required = 0
    v2_ok = True
    for _ in range(50):
        w, pairs = _selfadjoint_eigenpairs(rng, int(rng.integers(2, 7)))
        rep = v_squared_orthogonality_check(w, pairs)
        required += sum(p[2] for p in rep.pairs)
        v2_ok &= rep.ok

    ok = v.is_self_adjoint() and eig_err < 1e-12 and overlap_err < 1e-12 and report.ok and v2_ok and required > 0
    announce(
        capsys, 9, ok,
        f"eigen-equations {eig_err:.1e}, overlap vs e^(i pi/12) {overlap_err:.1e} < 1e-12, "
        f"{required} distinct-modulus pairs orthogonal: {v2_ok}",
    )
    assert ok


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "nonherm", *args], capture_output=True, text=True, cwd=ROOT)


def test_criterion_10_cli(capsys, tmp_path):
    good = _cli("verify", "--full", "--config", "fixtures/two_level_br.json").returncode
    bad = _cli("verify", "--full", "--config", "fixtures/two_level_br_corrupted.json").returncode
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    _cli("evolve", "--config", "fixtures/two_level_br.json", "--out", str(a))
    _cli("evolve", "--config", "fixtures/two_level_br.json", "--out", str(b))
    identical = a.read_bytes() == b.read_bytes() and a.stat().st_size > 0
    ok = good == 0 and bad == 1 and identical
    announce(capsys, 10, ok, f"verify exit {good} (BR), {bad} (corrupted); evolve CSV byte-identical: {identical}")
    assert ok
