"""Acceptance criteria 1-11; one PASS/FAIL line per criterion is printed in the summary."""

import importlib
import json

import numpy as np
import pytest

from painlab import cli
from painlab.errors import RealityViolated
from painlab.linpair import p5_alt_reduce, p6_fuchsian_reduce, zero_curvature_residual
from painlab.monodromy import (
    LoopSpec,
    eigenvalue_mismatch,
    isomonodromy_drift,
    local_exponents,
    monodromy_matrix,
)
from painlab.numkit import ComplexPath, RationalMatrix, flow_derivative, integrate_path, local_samples
from painlab.parametrize import (
    WaveSolution,
    chain_w_derivative,
    coords_gauge_field,
    p6_w_field,
    pde_residual_3wri,
    reality_check,
    similarity_assemble,
    w_from_coords_flat,
)
from painlab.systems import (
    FormalMonodromies,
    coordinate_field,
    first_integrals,
    p4_to_canonical,
    painleve_coefficients,
    painleve_residual,
    painleve_rhs,
    reduced_field,
    sigma_p4_from_yz,
    sigma_p5_from_yz,
    sigma_residual,
)
from painlab.transforms import BranchChoice, TransformTag, gromak_roots, verify_on_trajectory

from conftest import TIGHT, ZC_VARIANTS, crandom, zc_sample
from test_parametrize import W0, constrained_p5, physical_p5_field, similarity_cases


def _show(n, value, bound):
    print(f"criterion {n}: max {value:.3e} (bound {bound:.0e}) {'PASS' if value < bound else 'FAIL'}")
    assert value < bound


def test_criterion_01_zero_curvature():
    rng = np.random.default_rng(101)
    worst = 0.0
    for v in ZC_VARIANTS:
        for _ in range(100):
            state, params, t, lam = zc_sample(v, rng)
            worst = max(worst, zero_curvature_residual(v, state, None, params, t, lam))
    _show(1, worst, 1e-11)


def test_criterion_02_conservation():
    worst = 0.0
    for kind, params, t0 in (("P5", FormalMonodromies.p5(0.3, 0.2, 0.4), 1.0),
                             ("P4", FormalMonodromies.p4(0.3, 0.4), 0.0),
                             ("P3", FormalMonodromies.p3(0.3, 0.4, 0.5), 1.0)):
        s0 = [1.0] * 6
        fin = integrate_path(reduced_field(kind, params), s0, ComplexPath([t0, t0 + 1]), TIGHT).final
        a, b = dict(first_integrals(kind, s0, params)), dict(first_integrals(kind, list(fin), params))
        worst = max(worst, max(abs(b[k] - a[k]) / max(1.0, abs(a[k])) for k in a))
    _show(2, worst, 1e-8)


def test_criterion_03_parametrization_chains():
    seed = [0.7 + 0.2j, 0.4 - 0.3j, 1.1, 0.9 + 0.1j]
    cases = [
        ("P5", FormalMonodromies.p5(0.3 + 0.1j, -0.2 + 0.4j, 0.5 - 0.3j), 1.0, 1.5, seed, 1e-8),
        ("P4", FormalMonodromies.p4(0.3 + 0.1j, -0.2 + 0.4j, 0.2), 0.0, 0.5, seed, 1e-7),
        ("P3", FormalMonodromies.p3(0.3 + 0.1j, -0.2 + 0.4j, 0.8), 1.0, 1.5, seed, 1e-7),
        ("P6", FormalMonodromies.p6(0.3 + 0.1j, -0.2 + 0.4j, 0.25, 0.35 - 0.1j), 0.4 + 0.2j, 0.5 + 0.3j,
         [0.6 - 0.1j, 0.3 + 0.2j, 1.1, 0.9 + 0.1j], 1e-7),
    ]
    ratio = 0.0
    for kind, params, t0, t1, s0, tol in cases:
        traj = integrate_path(coords_gauge_field(kind, params), s0, ComplexPath([t0, t1]), TIGHT)
        wf = p6_w_field(params) if kind == "P6" else reduced_field(kind, params)
        for t, s in traj.samples:
            w, dw = chain_w_derivative(kind, params, t, list(s))
            r = np.max(np.abs(np.array(wf(t, w)) - np.array(dw))) / max(1, np.max(np.abs(dw)))
            ratio = max(ratio, r / tol)
    _show(3, ratio, 1.0)


def _jet2(variant, params, t, s):
    return flow_derivative(lambda tt, ss: ss[0], t, s, coordinate_field(variant, params), order=2)


def test_criterion_04_painleve_residuals():
    p5 = FormalMonodromies.p5(0.3 + 0.1j, -0.2 + 0.4j, 0.5 - 0.3j)
    p4 = FormalMonodromies.p4(0.3 + 0.1j, -0.2 + 0.4j)
    p3 = FormalMonodromies.p3(0.3 + 0.1j, -0.2 + 0.4j, 0.8)
    ratio = 0.0
    for variant, p, s0, path, tol in (("C40-P5", p5, [0.7 + 0.2j, 0.4 - 0.3j, 1.0], [1.0, 1.5], 1e-9),
                                      ("YZ-P4", p4, [0.7 + 0.2j, 0.4 - 0.3j], [0.0, 0.5], 1e-7),
                                      ("YZW-P3", p3, [0.7 + 0.2j, 0.4 - 0.3j, 1.0], [1.0, 1.5], 1e-7)):
        co = painleve_coefficients(p)
        for t, s in integrate_path(coordinate_field(variant, p), s0, ComplexPath(path), TIGHT).samples:
            y, y1, y2 = _jet2(variant, p, t, list(s))
            if variant == "YZ-P4":
                t, y, y1, y2 = p4_to_canonical(p, t, y, y1, y2)
            kind = "P" + variant[-1]
            ratio = max(ratio, abs(painleve_residual(kind, co, t, y, y1, y2)) / tol)
    _show(4, ratio, 1.0)


def test_criterion_05_okamoto():
    th = FormalMonodromies.p5(0.3 + 0.1j, -0.2, 0.7j)
    path = ComplexPath(list(np.linspace(1.0, 1.5, 200)))
    traj = integrate_path(coordinate_field("C40-P5", th), [0.7 + 0.1j, 0.3 - 0.2j, 1.0], path, TIGHT)
    rep = verify_on_trajectory("OKAMOTO", traj, th, 1e-10)
    assert rep.samples >= 200
    _show(5, rep.max_residual, 1e-10)


def test_criterion_06_gromak():
    th = FormalMonodromies.p5(0.3 + 0.1j, -0.2, 0.7j)
    co = painleve_coefficients(th)
    f = lambda t, s: [s[1], painleve_rhs("P5", co, t, s[0], s[1])]
    smp = local_samples(f, [0.7 + 0.1j, 0.3 - 0.2j], 1.2, 1e-4, n=5)
    branches = BranchChoice.all()[::8]
    assert len({b.as_tuple() for b in branches}) == 4
    worst = max(verify_on_trajectory(TransformTag.gromak(b), smp, th, 1e-5).max_residual for b in branches)
    b = BranchChoice()
    r = gromak_roots(th, b)
    bad = verify_on_trajectory(TransformTag.gromak(b), smp, th, 1e-5, coeff_roots=(-r[0], r[1], r[2]))
    assert bad.status == "FAIL"
    _show(6, worst, 1e-5)


def test_criterion_07_sigma():
    worst = 0.0
    p5 = FormalMonodromies.p5(0.3 + 0.1j, -0.2 + 0.4j, 0.5 - 0.3j)
    f5 = coordinate_field("C40-P5", p5)
    for t, s in integrate_path(f5, [0.7 + 0.2j, 0.4 - 0.3j, 1.0], ComplexPath([1.0, 1.5]), TIGHT).samples:
        s = list(s)
        sg, s1, s2 = flow_derivative(lambda tt, ss: sigma_p5_from_yz(p5, tt, ss[0], ss[1]), t, s, f5, order=2)
        worst = max(worst, abs(s1 + s[1]), abs(sigma_residual("P5", p5, sg, s1, s2, t)))
    p4 = FormalMonodromies.p4(0.3 + 0.1j, -0.2 + 0.4j, 0.2)
    f4 = coordinate_field("YZ-P4", p4)
    for tau, s in integrate_path(f4, [0.7 + 0.2j, 0.4 - 0.3j], ComplexPath([0, 0.5]), TIGHT).samples:
        s = list(s)
        sg, s1, s2 = flow_derivative(lambda tt, ss: sigma_p4_from_yz(p4, tt, ss[0], ss[1]), tau, s, f4, order=2)
        worst = max(worst, abs(s1 + 2 * s[1]), abs(sigma_residual("P4", p4, sg, s1, s2, tau)))
    _show(7, worst, 1e-8)


def test_criterion_08_p5_structure():
    rng = np.random.default_rng(808)
    det_b, worst = 0.0, 0.0
    for _ in range(50):
        w, p = constrained_p5(rng, 1.0)
        t = crandom(rng) * 2
        chain, _, _, rep = p5_alt_reduce(w, p, t, d_ratio=crandom(rng))
        det_b = max(det_b, rep["det_B"])
        worst = max(worst, *(rep[k] for k in ("trace_A0", "trace_A1", "det_A0", "det_A1", "diag_sum")),
                    abs(chain.mu1 + chain.mu2 - (p.m + p.mt - t / 2)))
    assert det_b < 1e-12
    _show(8, worst, 1e-10)


def test_criterion_09_monodromy():
    worst = 0.0
    R = RationalMatrix([], [(0, 1, np.diag([1 / 3, 0]))])
    assert eigenvalue_mismatch(monodromy_matrix(R, LoopSpec(0, 1))) < 1e-8
    assert np.max(np.abs(monodromy_matrix(R, LoopSpec(3, 1)).matrix - np.eye(2))) < 1e-9
    p6 = FormalMonodromies.p6(0.5, 0.2 + 0.1j, -0.3 + 0.2j, 0.4)
    t0 = 0.4 + 0.5j
    s = w_from_coords_flat("P6", p6, t0, 0.3 + 0.1j, 0.2, 1.1, 0.9)
    r = p6_fuchsian_reduce(s, p6, [t0, t0 + 1e-3])
    for loc, th in ((0, p6.theta1), (r.t, p6.theta2), (1, p6.theta3)):
        ev = local_exponents(r.pair, loc)
        worst = max(worst, min(abs(ev - th)), min(abs(ev)))
    loops = [LoopSpec(0, 0.25, -0.25j), LoopSpec(1, 0.25, 1 - 0.25j)]
    full = list(r.w) + list(r.G.ravel())
    worst = max(worst, isomonodromy_drift("P6-JM", full, p6, r.t, r.t + 0.1, loops, base=0.5 - 0.8j).drift)
    p5 = FormalMonodromies.p5(0.3, 0.2 + 0.1j, 0.4)
    loops = [LoopSpec(0, 0.4, -0.4j), LoopSpec(1, 0.4, 1 - 0.4j)]
    d = isomonodromy_drift("JM-P5", [0.7 + 0.1j, 0.3 - 0.2j, 1.0], p5, 1.0, 1.1, loops, base=0.5 - 0.8j)
    worst = max(worst, d.drift)
    _show(9, worst, 1e-6)


def test_criterion_10_three_wave():
    rng = np.random.default_rng(1010)
    worst = 0.0
    for kind, p, t0, pts in similarity_cases(rng, 50):
        F = similarity_assemble(kind, WaveSolution(kind, p, t0, W0), p)
        for x in pts:
            r, rs = pde_residual_3wri(F, x)
            worst = max(worst, max(map(abs, r + rs)))
    _, _, F = physical_p5_field()
    rep = reality_check("P5", F, np.linspace(1.0, 1.5, 6), tol=1e-8)
    assert rep.ok
    with pytest.raises(RealityViolated):
        reality_check("P5", F, [1.0], params=FormalMonodromies.p5(0.3 + 1j, 0.5j, 0.3j))
    _show(10, worst, 1e-8)


def test_criterion_11_cli(tmp_path):
    cfg = {"scenario": "integrate", "kind": "P5",
           "parameters": {"theta0": [0.3, 0.0], "theta1": [0.2, 0.0], "thetainf": [0.4, 0.0]},
           "initial": [[1.0, 0.0]] * 6, "t0": [1.0, 0.0], "t1": [2.0, 0.0],
           "output": {"path": str(tmp_path / "rep.json"), "trajectory": str(tmp_path / "traj.csv")}}
    (tmp_path / "cfg.json").write_text(json.dumps(cfg))
    assert cli.run(str(tmp_path / "cfg.json")) == 0
    text = (tmp_path / "traj.csv").read_text()
    samples = cli.read_trajectory_csv(text)
    assert cli.trajectory_csv(samples) == text
    again = json.dumps(cli.report_from_samples(cli.RunConfig(cfg), samples), indent=1) + "\n"
    assert again == (tmp_path / "rep.json").read_text()
    entries = cli.export_concordance()["entries"]
    for e in entries:
        mod, *attrs = e["operation"].split(".")
        obj = importlib.import_module(f"painlab.{mod}")
        for a in attrs:
            obj = getattr(obj, a)
    print(f"criterion 11: {len(entries)} concordance entries, round trip identical")
    assert len({e["label"] for e in entries}) >= 60
