import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from painlab.errors import DegenerateBranch, SingularEvaluation
from painlab.numkit import (
    ComplexPath,
    Jet,
    finite_difference_derivative,
    flow_derivative,
    integrate_path,
    local_samples,
)
from painlab.systems import (
    CoordState,
    FormalMonodromies,
    PainleveCoefficients,
    WaveState,
    coordinate_field,
    coordinate_rhs,
    first_integrals,
    p3_to_degenerate_p5,
    p4_to_canonical,
    p4_y_from_sigma,
    painleve_coefficients,
    painleve_residual,
    reduced_field,
    reduced_rhs,
    sigma_p4_from_yz,
    sigma_p5_from_w,
    sigma_p5_from_yz,
    sigma_residual,
    sym_p4_to_p4,
)

from conftest import TIGHT, crandom

seeds = st.integers(0, 2 ** 32 - 1)


def _p5(rng):
    return FormalMonodromies.p5(crandom(rng, 0.5), crandom(rng, 0.5), crandom(rng, 0.5))


# ------------------------------------------------------------ Painleve residual

def test_p5_constant_solution_with_zero_coefficients():
    assert painleve_residual("P5", PainleveCoefficients(0, 0, 0, 0), 1.3, 2.5, 0, 0) == 0


def test_p5_constant_with_delta():
    r = painleve_residual("P5", PainleveCoefficients(0, 0, 0, -0.5), 1.0, 2.0, 0, 0)
    assert abs(r - 3) < 1e-15


@pytest.mark.parametrize("kind, y", [("P5", 0.0), ("P5", 1.0), ("P3", 0.0), ("P6", 0.5)])
def test_painleve_singular_points(kind, y):
    t = 0.5 if kind == "P6" else 1.0
    with pytest.raises(SingularEvaluation):
        painleve_residual(kind, PainleveCoefficients(1, 1, 1, 1), t, y, 0, 0)


# -------------------------------------------------------------- reduced systems

def test_p5_reduced_rhs_all_ones():
    p = FormalMonodromies.p5(0.3, 0.1, 0.0, m=0.0)
    d = reduced_rhs("P5", p, WaveState.from_flat([1] * 6, 1.0))
    assert d.w == (1, -1, -2) and d.w_star[2] == 2


def test_p4_reduced_rhs_all_ones():
    p = FormalMonodromies.p4(0.2, 0.0, rho=0.0)
    d = reduced_rhs("P4", p, WaveState.from_flat([1] * 6, 0.0))
    assert d.w[2] == -2 and d.w_star[2] == 2


def test_p3_reduced_rhs_all_ones():
    p = FormalMonodromies.p3(0.2, 0.0, 1.0)
    d = reduced_rhs("P3", p, WaveState.from_flat([1] * 6, 1.0))
    assert d.w[2] == 2


@pytest.mark.parametrize("kind, t", [("P5", 0), ("P3", 0), ("P6", 0), ("P6", 1)])
def test_reduced_rhs_singular_times(kind, t):
    params = {"P5": FormalMonodromies.p5(0.1, 0.2, 0.3), "P3": FormalMonodromies.p3(0.1, 0.2, 0.3),
              "P6": FormalMonodromies.p6(0.1, 0.2, 0.3, 0.4)}[kind]
    with pytest.raises(SingularEvaluation):
        reduced_rhs(kind, params, WaveState.from_flat([1] * 6, t))


def test_parameter_relations_are_enforced():
    with pytest.raises(ValueError):
        FormalMonodromies("P5", theta0=0, theta1=0, thetainf=1, m=0, mt=0)
    p6 = FormalMonodromies.p6(0.1, 0.2, 0.3, 0.4)
    assert abs(p6.rho1 + p6.rho2 + p6.rho3) < 1e-15
    ny = FormalMonodromies.sym_p4(0.2, 0.5, 0.1)
    assert abs(ny.alpha0 + ny.alpha1 + ny.alpha2 - 1) < 1e-15


# ------------------------------------------------------------ coordinate systems

def test_c40_substitution():
    p = FormalMonodromies.p5(0, 0, 0)
    d = coordinate_rhs("C40-P5", p, CoordState("C40-P5", {"y": 2, "z": 1, "u": 1}), 1.0)
    assert abs(d["y"]) < 1e-15 and abs(d["z"] - 1.5) < 1e-15


def test_true_jm_substitution():
    p = FormalMonodromies.p5(0.3, 0.2, 0.0)
    t = 0.7 + 0.1j
    d = coordinate_rhs("TRUE-JM-P5", p, CoordState("TRUE-JM-P5", {"y": 1, "z": 0.4, "u": 1}), t)
    assert abs(t * d["y"] - t) < 1e-15


def test_two_printed_y_equations_agree(rng):
    for _ in range(100):
        p = _p5(rng)
        t, y, z = crandom(rng), crandom(rng), crandom(rng)
        a = coordinate_field("JM-P5", p)(t, [y, z, 1.0])
        b = coordinate_field("C40-P5", p)(t, [y, z, 1.0])
        assert max(abs(x - w) for x, w in zip(a, b)) < 1e-13 * max(1, max(map(abs, a)))


# -------------------------------------------------------------- first integrals

def test_first_integrals_p5_all_ones():
    p = FormalMonodromies.p5(2, 4, 0, m=0)
    fi = dict(first_integrals("P5", [1] * 6, p))
    assert fi["theta0"] == 2 and fi["quartic"] == 3
    assert abs(fi["theta1"] ** 2 - 16) < 1e-14


def test_first_integrals_p4_all_ones():
    fi = dict(first_integrals("P4", [1] * 6, FormalMonodromies.p4(0, 0)))
    assert fi["2i*theta0"] == 0 and fi["2i*theta_inf"] == 3


def test_first_integrals_p3_all_ones():
    fi = dict(first_integrals("P3", [1] * 6, FormalMonodromies.p3(0, 0, 2)))
    assert fi["c1"] == 2 and fi["theta0/2"] == 0


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from(["P5", "P4", "P3"]))
def test_first_integrals_are_exactly_conserved(seed, kind):
    r = np.random.default_rng(seed)
    params = {"P5": lambda: _p5(r), "P4": lambda: FormalMonodromies.p4(crandom(r), crandom(r)),
              "P3": lambda: FormalMonodromies.p3(crandom(r), crandom(r), crandom(r))}[kind]()
    s = [crandom(r) for _ in range(6)]
    t = crandom(r) + 2
    f = reduced_field(kind, params)
    for name, _ in first_integrals(kind, s, params):
        if name in ("theta1", "m", "theta_inf"):
            continue
        d = flow_derivative(lambda tt, ss: dict(first_integrals(kind, ss, params))[name], t, s, f)[1]
        assert abs(d) < 1e-12 * (1 + np.max(np.abs(s))) ** 4


@pytest.mark.parametrize("kind, params, t0", [
    ("P5", FormalMonodromies.p5(0.3, 0.2, 0.4), 1.0),
    ("P4", FormalMonodromies.p4(0.3, 0.4), 0.0),
    ("P3", FormalMonodromies.p3(0.3, 0.4, 0.5), 1.0),
])
def test_first_integrals_drift_under_integration(kind, params, t0):
    s0 = [1.0] * 6
    fin = integrate_path(reduced_field(kind, params), s0, ComplexPath([t0, t0 + 1]), TIGHT).final
    a = dict(first_integrals(kind, s0, params))
    b = dict(first_integrals(kind, list(fin), params))
    for k in a:
        assert abs(b[k] - a[k]) <= 1e-8 * max(1.0, abs(a[k]))


# ---------------------------------------------------- eliminating z: Painleve ODEs

def _jet2(variant, params, t, s, name_index=0):
    f = coordinate_field(variant, params)
    return flow_derivative(lambda tt, ss: ss[name_index], t, s, f, order=2)


def test_c40_y_solves_p5(p5_theta, c40_trajectory):
    co = painleve_coefficients(p5_theta)
    for t, s in c40_trajectory.samples:
        y, y1, y2 = _jet2("C40-P5", p5_theta, t, list(s))
        assert abs(painleve_residual("P5", co, t, y, y1, y2)) < 1e-9


def test_true_jm_y_solves_p5_with_its_coefficients(rng):
    p = _p5(rng)
    co = painleve_coefficients(p, variant="TRUE-JM-P5")
    for _ in range(20):
        t, y, z = crandom(rng) + 1.5, crandom(rng) + 2, crandom(rng)
        yy, y1, y2 = _jet2("TRUE-JM-P5", p, t, [y, z, 1.0])
        assert abs(painleve_residual("P5", co, t, yy, y1, y2)) < 1e-9 * (1 + abs(y2))


def test_p4_map_to_canonical(rng):
    p = FormalMonodromies.p4(crandom(rng, 0.5), crandom(rng, 0.5))
    co = painleve_coefficients(p)
    assert co.alpha == 2 * p.thetainf - 1 and co.beta == -8 * p.theta0 ** 2
    for _ in range(20):
        tau, y, z = crandom(rng), crandom(rng) + 1, crandom(rng)
        yy, y1, y2 = _jet2("YZ-P4", p, tau, [y, z])
        t, Y, Y1, Y2 = p4_to_canonical(p, tau, yy, y1, y2)
        assert abs(painleve_residual("P4", co, t, Y, Y1, Y2)) < 1e-7


def test_p3_y_solves_p3(rng):
    p = FormalMonodromies.p3(crandom(rng, 0.5), crandom(rng, 0.5), crandom(rng, 0.5))
    co = painleve_coefficients(p)
    assert co.as_tuple() == (4 * p.theta0, 4 * (1 - p.thetainf), 4 * p.c1 ** 2, -4)
    for _ in range(20):
        t, y, z = crandom(rng) + 2, crandom(rng) + 1, crandom(rng)
        yy, y1, y2 = _jet2("YZW-P3", p, t, [y, z, 1.0])
        assert abs(painleve_residual("P3", co, t, yy, y1, y2)) < 1e-7


def test_symmetric_p4_labels_solve_p4(rng):
    p = FormalMonodromies.sym_p4(crandom(rng, 0.5), crandom(rng, 0.5), crandom(rng, 0.5))
    f = reduced_field("symP4", p)
    z = crandom(rng)
    f0, f1 = crandom(rng), crandom(rng)
    s = [f0, f1, z - f0 - f1]
    for k in range(3):
        fk = flow_derivative(lambda tt, ss: ss[k], z, s, f, order=2)
        t, yk, co = sym_p4_to_p4(p, z, s)[k]
        scale = 1j * 2 ** 0.5
        # y_k = sqrt(-2) f_k, t = z / sqrt(-2): d/dt = sqrt(-2) d/dz
        r = painleve_residual("P4", co, t, yk, scale ** 2 * fk[1], scale ** 3 * fk[2])
        assert abs(r) < 1e-10 * (1 + abs(fk[2]))


# ----------------------------------------------------------------------- sigma

def test_sigma_zero_jet():
    assert sigma_residual("P5", FormalMonodromies.p5(0, 0, 0), 0, 0, 0, 1.0) == 0


def test_p5_sigma_along_trajectory(p5_theta, c40_trajectory):
    f = coordinate_field("C40-P5", p5_theta)
    sig = lambda t, s: sigma_p5_from_yz(p5_theta, t, s[0], s[1])
    for t, s in c40_trajectory.samples:
        s = list(s)
        sg, s1, s2 = flow_derivative(sig, t, s, f, order=2)
        z, z1 = s[1], f(t, s)[1]
        assert abs(s1 + z) < 1e-9
        assert abs(s2 + z1) < 1e-9
        assert abs(sigma_residual("P5", p5_theta, sg, -z, -z1, t)) < 1e-8


def test_p5_sigma_from_amplitudes_is_conserved_form(rng):
    # sigma computed from amplitudes obeys sigma' = -z with z = w2 w~2 - theta0
    w = [crandom(rng, 0.7) for _ in range(6)]
    thi = crandom(rng, 0.5)
    th0 = w[0] * w[3] + w[1] * w[4]
    q = w[0] * w[1] * w[2] + w[3] * w[4] * w[5] + w[2] * w[5] + thi / 2 * (w[1] * w[4] - w[0] * w[3])
    p = FormalMonodromies.p5(th0, cmath.sqrt(4 * q + th0 ** 2 + thi ** 2), thi)
    t = 1.2 + 0.3j
    _, s1 = flow_derivative(lambda tt, ss: sigma_p5_from_w(ss, p, tt), t, w, reduced_field("P5", p))
    z = w[1] * w[4] - th0
    assert abs(s1 + z) < 1e-12


def test_p4_sigma_along_trajectory():
    p = FormalMonodromies.p4(0.3 + 0.1j, -0.2 + 0.4j, 0.2)
    f = coordinate_field("YZ-P4", p)
    traj = integrate_path(f, [0.7 + 0.2j, 0.4 - 0.3j], ComplexPath([0, 0.5]), TIGHT)
    sig = lambda tau, s: sigma_p4_from_yz(p, tau, s[0], s[1])
    for tau, s in traj.samples:
        s = list(s)
        sg, s1, s2 = flow_derivative(sig, tau, s, f, order=2)
        assert abs(s1 + 2 * s[1]) < 1e-8
        assert abs(sigma_residual("P4", p, sg, s1, s2, tau)) < 1e-8


def test_p4_sigma_consistency_factor(rng):
    for _ in range(100):
        p = FormalMonodromies.p4(crandom(rng, 0.5), crandom(rng, 0.5))
        tau, sg, s1, s2 = (crandom(rng) for _ in range(4))
        y, inv_y = p4_y_from_sigma(p, tau, sg, s1, s2)
        th0, thi = p.theta0, p.thetainf
        D = s1 * (s1 + 4j * th0) * (s1 + 2j * th0 + 2j * thi)
        sd = sigma_residual("P4", p, sg, s1, s2, tau)
        assert abs((y * inv_y - 1) * (-4 * D) - sd) < 1e-11 * (1 + abs(sd) + abs(D))


# ------------------------------------------------------ P3 to degenerate P5

def test_p3_degenerate_p5_inversion():
    p = FormalMonodromies.p3(0.0, 0.0, 1.0)
    Y, T, co = p3_to_degenerate_p5(CoordState("Z-P3", {"z": 0.5}), p, 1.0)
    assert Y == -1 and T == 1
    assert co.as_tuple() == (0, 0, 2, 0)


def test_p3_degenerate_p5_branch_and_c1_zero():
    with pytest.raises(DegenerateBranch):
        p3_to_degenerate_p5(CoordState("Z-P3", {"z": 1.0}), FormalMonodromies.p3(0.1, 0.2, 1.0), 1.0)
    p = FormalMonodromies.p3(0.3, 0.2, 0.0)
    Y, T, co = p3_to_degenerate_p5(CoordState("Z-P3", {"z": 1.0}), p, 2.0)
    assert Y is None and T == 4
    assert co.as_tuple() == (-8, 2 * 0.3 * 0.2, 0, -(0.3 ** 2))


def _degenerate_p5_residual(p, t, z, z1, z2):
    """Map a z-jet in t to the Y-jet in tau = t^2 and evaluate degenerate P5."""
    tj = Jet(Jet(t, 1.0), Jet(1.0, 0.0))
    zj = Jet(Jet(z, z1), Jet(z1, z2))
    Yj, _, co = p3_to_degenerate_p5(zj, p, tj)
    Y, Yt, Ytt = Yj.v.v, Yj.d.v, Yj.d.d
    Ytau = Yt / (2 * t)
    Ytautau = (Ytt - Yt / t) / (4 * t * t)
    return painleve_residual("P5", co, t * t, Y, Ytau, Ytautau)


def test_p3_degenerate_p5_along_trajectory():
    p = FormalMonodromies.p3(0.3 + 0.1j, -0.2 + 0.2j, 0.8)
    f = coordinate_field("Z-P3", p)
    traj = integrate_path(f, [0.5 + 0.2j, 0.1 - 0.3j], ComplexPath([1.0, 1.4]), TIGHT)
    for t, s in traj.samples[:: max(1, len(traj.samples) // 10)]:
        z, z1 = s
        z2 = f(t, list(s))[1]
        assert abs(_degenerate_p5_residual(p, t, z, z1, z2)) < 1e-9
        smp = local_samples(f, list(s), t, 1e-3)
        z2_fd = finite_difference_derivative([(a, b[1]) for a, b in smp], 1)
        assert abs(_degenerate_p5_residual(p, t, z, z1, z2_fd)) < 1e-7
