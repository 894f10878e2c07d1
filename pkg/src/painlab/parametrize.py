"""Maps between amplitude states and Painleve coordinates, gauge-factor flows,
three-wave similarity fields and physical-case reality checks."""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import BranchCutCrossing, RealityViolated, SingularParametrization, nonzero
from .numkit import IntegratorConfig, Jet, integrate_to, jexp, jpow, value
from .systems import (
    CoordState,
    FormalMonodromies,
    WaveState,
    coordinate_field,
    painleve_coefficients,
    painleve_rhs,
    reduced_field,
)

I = 1j


@dataclass(frozen=True)
class GaugeFactors:
    f: complex
    g: complex
    t0: complex = 0j


def _nz(x, name):
    return nonzero(x, name, SingularParametrization)


# ---------------------------------------------------------------------------
# amplitudes -> coordinates
# ---------------------------------------------------------------------------


def coords_from_w(kind, state, params: FormalMonodromies, t=None) -> CoordState:
    """Painleve coordinates ``(y, z, u)`` (P5), ``(y~, z~)`` (P4), ``(y, z, w)`` (P3)."""
    s = state.flat() if isinstance(state, WaveState) else list(state)
    if t is None:
        t = state.t
    w1, w2, w3, u1, u2, u3 = s
    if kind == "P5":
        th0, th1, thi = params.theta0, params.theta1, params.thetainf
        n = w2 * u2
        den = _nz((n - (th0 + th1 - thi) / 2) * _nz(w1 * w2, "w1 w2"),
                  "w2 w~2 - (theta0+theta1-thetainf)/2")
        return CoordState("C40-P5", {"y": n * (u3 + w1 * w2) / den, "z": n - th0,
                                     "u": -w1 / _nz(u2, "w~2")})
    if kind == "P4":
        return CoordState("YZ-P4", {"y": -2 * w1 * w2 / _nz(u3, "w~3"), "z": w1 * u1})
    if kind == "P3":
        return CoordState("YZW-P3", {"y": u3 / _nz(t * w1 * w2, "t W1 W2"), "z": t * w1 * u1,
                                     "w": w1 * w2})
    raise ValueError(f"no inverse parametrization for {kind}")


# ---------------------------------------------------------------------------
# coordinates -> amplitudes
# ---------------------------------------------------------------------------


def _w_p5(p, t, y, z, f, g):
    th0 = p.theta0
    _nz(z, "z")
    _nz(z + th0, "z + theta0")
    _nz(y, "y")
    X3 = y * (z + p.a2) - (z + th0)
    Y3 = (z + p.a1) / y - z
    return [-f * z * (z + th0), 1 / (g * z), (g / f) * Y3,
            1 / (f * (z + th0)), g * z * (z + th0), -(f / g) * X3]


def _w_p4(p, tau, y, z, f, g):
    th0, thi = p.theta0, p.thetainf
    _nz(y, "y")
    _nz(z, "z")
    return [-f * y * z / 2, 1 / (g * z), -(2 * g / f) * (z - I * th0 - I * thi),
            -2 / (f * y), g * z * (z - 2 * I * th0), f / g]


def _w_p3(p, t, y, z, f, g):
    th0, thi, c1 = p.theta0, p.thetainf, p.c1
    d = _nz(c1 * t - z, "c1 t - z")
    _nz(z, "z")
    _nz(t, "t")
    return [z * f / d, g * d / z,
            (y * z * d - thi * z + (th0 + c1 * thi) * t / 2) / (t * f * g),
            d / (t * f), z / (t * g), t * f * g * y]


def _w_p6(p, t, y, y1, f, g):
    th1, th2, th3, thi = p.theta1, p.theta2, p.theta3, p.thetainf
    _nz(y, "y")
    _nz(y - 1, "y - 1")
    _nz(y - t, "y - t")
    _nz(t, "t")
    _nz(t - 1, "t - 1")
    w1 = f * (((t - 1) * y1 - th1 * (y - 1)) / (2 * y) + (th3 * (t - 1) + (thi - 1) * (y - 1)) / (2 * t))
    u1 = (-(th3 * y - t * y1) / (2 * (y - 1)) + (th1 * t + (thi - 1) * y) / (2 * (t - 1))) / f
    w2 = g / f * (-(th2 * y + t * y1) / (2 * (y - t)) - (th1 + thi * y) / (2 * (t - 1))
                  + y * (y - 1) / (2 * (t - 1) * (y - t)))
    u2 = f / g * ((t * (t - 1) * y1 - th1 * (y - t)) / (2 * y)
                  - (th2 * (t - 1) - thi * (y - t) + y - 1) / 2)
    w3 = (-(th3 * (y - t) + t * (t - 1) * y1) / (2 * (y - 1)) + (th2 * t - thi * (y - t) + y) / 2) / g
    u3 = g * (-((t - 1) * y1 + th2 * (y - 1)) / (2 * (y - t)) + (th3 - thi * (y - 1)) / (2 * t)
              + y * (y - 1) / (2 * t * (y - t)))
    return [w1, w2, w3, u1, u2, u3]


_W_FROM = {"P5": (_w_p5, ("y", "z")), "P4": (_w_p4, ("y", "z")), "P3": (_w_p3, ("y", "z")),
           "P6": (_w_p6, ("y", "y1"))}


def w_from_coords(kind, coords: CoordState, gauge: GaugeFactors, params, t) -> WaveState:
    """Six amplitudes from Painleve coordinates and gauge factors ``f, g``.

    For P6 the coordinates must hold ``y`` and ``y1 = y'``.
    """
    fn, names = _W_FROM[kind]
    a, b = (coords[n] for n in names)
    return WaveState.from_flat(fn(params, t, a, b, gauge.f, gauge.g), t)


def w_from_coords_flat(kind, params, t, a, b, f, g):
    return _W_FROM[kind][0](params, t, a, b, f, g)


# ---------------------------------------------------------------------------
# gauge factor flows
# ---------------------------------------------------------------------------


def _gauge_p5(p, t, y, z, z1=None):
    th0 = p.theta0
    if z1 is None:
        z1 = coordinate_field("C40-P5", p)(t, [y, z, 1.0])[1]
    _nz(z, "z")
    _nz(z + th0, "z + theta0")
    X3 = y * (z + p.a2) - (z + th0)
    Y3 = (z + p.a1) / y - z
    tlf = -t * z1 / (z + th0) - t * z1 / (2 * z) + X3 / 2 + (z + th0) / (2 * z) * Y3
    tlg = -t * z1 / z - t * z1 / (2 * (z + th0)) - z / (2 * (z + th0)) * X3 - Y3 / 2
    return tlf / t, tlg / t


def gauge_rhs_p5_sigma(params, t, z, z1, sig, sig1):
    """Sigma form of the P5 gauge flow.

    The combination entering both lines is ``sigma - (t+thetainf) sigma'``.
    """
    th0, thi = params.theta0, params.thetainf
    S = sig - (t + thi) * sig1
    tlf = -t * z1 / (z + th0) - t * z1 / (2 * z) + S / (2 * z)
    tlg = -t * z1 / z - t * z1 / (2 * (z + th0)) - S / (2 * (z + th0))
    return tlf / t, tlg / t


def _gauge_p4(p, tau, y, z, z1=None, y1=None):
    th0, thi = p.theta0, p.thetainf
    if z1 is None or y1 is None:
        y1, z1 = coordinate_field("YZ-P4", p)(tau, [y, z])
    _nz(y, "y")
    _nz(z, "z")
    _nz(z - 2 * I * th0, "z - 2i theta0")
    c = z - I * th0 - I * thi
    lf = -y1 / y - 0.5 * (z1 / z - y * c / z + 2 * (z - 2 * I * th0) / y)
    lg = -z1 / z - 0.5 * (z1 / (z - 2 * I * th0) + y * c / (z - 2 * I * th0) - 2 * z / y)
    return lf, lg


def _gauge_p3(p, t, y, z, z1=None):
    c1 = p.c1
    if z1 is None:
        z1 = coordinate_field("YZW-P3", p)(t, [y, z, 1.0])[1]
    d = _nz(c1 * t - z, "c1 t - z")
    _nz(z, "z")
    dlog_ratio = z1 / z - (c1 - z1) / d  # d/dt log(z/(c1 t - z))
    tlf = 2 * y * d - t * dlog_ratio
    tlg = -2 * y * z + t * dlog_ratio
    return tlf / t, tlg / t


def _gauge_p6(p, t, y, y1):
    th1, th2, th3 = p.theta1, p.theta2, p.theta3
    lf = (-y1 / (2 * y * (y - 1)) - (1 + th1 - th2 + th3) / (2 * t * (t - 1))
          + th1 / (2 * (t - 1) * y) + th3 / (2 * t * (y - 1)))
    lg = ((y1 - 1) / (2 * (y - t)) - y1 / (2 * (y - 1)) + (1 - th1 + th2 - th3) / (2 * t)
          + th2 * (1 / (t - 1) + 1 / (2 * (y - t)))
          + th3 * (-1 / (t * (t - 1)) + 1 / (2 * t * (y - 1))))
    return lf, lg


def gauge_rhs(kind, coords: CoordState, params, t, z1=None):
    """Logarithmic derivatives ``(f'/f, g'/g)`` with respect to the kind's variable."""
    if kind == "P5":
        return _gauge_p5(params, t, coords["y"], coords["z"], z1)
    if kind == "P4":
        return _gauge_p4(params, t, coords["y"], coords["z"], z1)
    if kind == "P3":
        return _gauge_p3(params, t, coords["y"], coords["z"], z1)
    if kind == "P6":
        return _gauge_p6(params, t, coords["y"], coords["y1"])
    raise ValueError(kind)


def coords_gauge_field(kind, params):
    """Vector field for ``[a, b, f, g]``: the coordinate pair plus gauge factors.

    The pair is ``(y, z)`` for P3/P4/P5 and ``(y, y')`` for P6.
    """
    if kind == "P5":
        base = coordinate_field("C40-P5", params)

        def fld(t, s):
            y, z, f, g = s
            dy, dz, _ = base(t, [y, z, 1.0])
            lf, lg = _gauge_p5(params, t, y, z, dz)
            return [dy, dz, f * lf, g * lg]
    elif kind == "P4":
        base = coordinate_field("YZ-P4", params)

        def fld(t, s):
            y, z, f, g = s
            dy, dz = base(t, [y, z])
            lf, lg = _gauge_p4(params, t, y, z, dz, dy)
            return [dy, dz, f * lf, g * lg]
    elif kind == "P3":
        base = coordinate_field("YZW-P3", params)

        def fld(t, s):
            y, z, f, g = s
            dy, dz, _ = base(t, [y, z, 1.0])
            lf, lg = _gauge_p3(params, t, y, z, dz)
            return [dy, dz, f * lf, g * lg]
    elif kind == "P6":
        co = painleve_coefficients(params)

        def fld(t, s):
            y, y1, f, g = s
            lf, lg = _gauge_p6(params, t, y, y1)
            return [y1, painleve_rhs("P6", co, t, y, y1), f * lf, g * lg]
    else:
        raise ValueError(kind)
    return fld


def chain_w_derivative(kind, params, t, s):
    """Amplitudes and their exact derivative induced by the coordinate-plus-gauge flow."""
    fld = coords_gauge_field(kind, params)
    ds = fld(t, s)
    tj = Jet(t, 1.0)
    sj = [Jet(a, b) for a, b in zip(s, ds)]
    w = w_from_coords_flat(kind, params, tj, *sj)
    return [value(x) for x in w], [x.d for x in w]


# ---------------------------------------------------------------------------
# correspondences between w and v variables
# ---------------------------------------------------------------------------


def _rho(kind, params):
    if kind in ("P5", "P3"):
        return I * params.thetainf
    if kind == "P4":
        return params.rho
    raise ValueError(kind)


def param_from_tau(kind, tau):
    """Painleve variable as a function of the similarity variable."""
    if kind == "P5":
        return -I * tau
    if kind == "P3":
        return jpow(tau, 0.5)
    return tau


def tau_from_param(kind, t):
    if kind == "P5":
        return I * t
    if kind == "P3":
        return t * t
    return t


def v_from_w(kind, params, t, w):
    """Three-wave amplitudes ``(v, v*)`` from the reduced-system amplitudes."""
    w1, w2, w3, u1, u2, u3 = w
    if kind == "P5":
        rho = _rho(kind, params)
        tau = I * t
        a = jpow(tau, -I * rho) * jexp(-I * tau)
        b = jpow(tau, I * rho) * jexp(I * tau)
        return [-w1, -I * w2, I * a * w3, I * u1, u2, I * b * u3]
    if kind == "P4":
        T = t + params.rho
        return [2 * I * w1, -I * w2, -I * jexp(-I * T * T) * w3,
                -I * u1, 2 * I * u2, -I * jexp(I * T * T) * u3]
    if kind == "P3":
        rho = _rho(kind, params)
        return [-I * w1, -I * w2, -I * jpow(t, -2 * I * rho) * w3,
                I * u1, I * u2, I * jpow(t, 2 * I * rho) * u3]
    if kind == "P6":
        r2, r3 = I * params.rho2, I * params.rho3
        return [-I * w1, I * jpow(t, -r2) * w2, -I * jpow(t - 1, -r3) * w3,
                -I * u1, I * jpow(t, r2) * u2, -I * jpow(t - 1, r3) * u3]
    raise ValueError(kind)


def w_from_v(kind, params, t, v):
    """Inverse of :func:`v_from_w`."""
    v1, v2, v3, s1, s2, s3 = v
    if kind == "P6":
        r2, r3 = I * params.rho2, I * params.rho3
        return [I * v1, -I * jpow(t, r2) * v2, I * jpow(t - 1, r3) * v3,
                I * s1, -I * jpow(t, -r2) * s2, I * jpow(t - 1, -r3) * s3]
    if kind == "P5":
        rho = _rho(kind, params)
        tau = I * t
        a = jpow(tau, -I * rho) * jexp(-I * tau)
        b = jpow(tau, I * rho) * jexp(I * tau)
        return [-v1, I * v2, -I * v3 / a, -I * s1, s2, -I * s3 / b]
    if kind == "P4":
        T = t + params.rho
        return [v1 / (2 * I), I * v2, I * v3 / jexp(-I * T * T),
                I * s1, s2 / (2 * I), I * s3 / jexp(I * T * T)]
    if kind == "P3":
        rho = _rho(kind, params)
        return [I * v1, I * v2, I * v3 / jpow(t, -2 * I * rho),
                -I * s1, -I * s2, -I * s3 / jpow(t, 2 * I * rho)]
    raise ValueError(kind)


def p6_w_field(params):
    """P6 amplitude flow in ``w`` variables, pulled back from the ``v`` system."""
    vf = reduced_field("P6", params)

    def fld(t, w):
        v = v_from_w("P6", params, t, w)
        dv = vf(t, v)
        tj = Jet(t, 1.0)
        out = w_from_v("P6", params, tj, [Jet(a, b) for a, b in zip(v, dv)])
        return [x.d for x in out]

    return fld


def w_field(kind, params):
    """Amplitude flow in the variables used by the coordinate maps."""
    if kind == "P6":
        return p6_w_field(params)
    return reduced_field(kind, params)


# ---------------------------------------------------------------------------
# Similarity solutions of the three-wave system
# ---------------------------------------------------------------------------


class WaveSolution:
    """Amplitude solution evaluated on demand by integration from an anchor.

    Parameters
    ----------
    kind : str
    params : FormalMonodromies
    t0 : complex
        Anchor value of the equation's variable.
    state0 : sequence of 6 complex
        ``w`` amplitudes at ``t0``.
    """

    def __init__(self, kind, params, t0, state0, cfg=None):
        self.kind = kind
        self.params = params
        self.t0 = complex(t0)
        self.state0 = np.asarray(state0, dtype=complex)
        self.cfg = cfg or IntegratorConfig(rel_tol=1e-13, abs_tol=1e-15)
        self.field = w_field(kind, params)
        self._cache = {}

    def __call__(self, t):
        t = complex(t)
        if t not in self._cache:
            self._cache[t] = integrate_to(self.field, self.state0, self.t0, t, self.cfg)
        w = self._cache[t]
        return w, np.asarray(self.field(t, list(w)), dtype=complex)


class ZeroSolution:
    kind = None

    def __call__(self, t):
        return np.zeros(6, dtype=complex), np.zeros(6, dtype=complex)


def _ansatz(kind, params, x, v_of_tau):
    """Return ``(u, u*)`` triples at ``x`` given ``v_of_tau(tau) -> v6``."""
    x1, x2, x3 = x
    if kind == "P6":
        tau = (x1 - x3) / (x2 - x3)
        v = v_of_tau(tau)
        r = (I * params.rho1, I * params.rho2, I * params.rho3)
        base = (x2 - x3, x1 - x3, x1 - x2)
        u = [jpow(base[k], -1 + r[k]) * v[k] for k in range(3)]
        us = [jpow(base[k], -1 - r[k]) * v[3 + k] for k in range(3)]
        return u, us
    if kind == "P5":
        rho = _rho(kind, params)
        tau = (x1 - x2) * x3
        v = v_of_tau(tau)
        p = jpow(x3, I * rho / 2)
        pm = jpow(x3, -I * rho / 2)
        u = [jexp(-I * x2 * x3) * p * v[0], jexp(I * x3 * x1) * p * v[1],
             jpow(x1 - x2, -1 + I * rho) * v[2]]
        us = [jexp(I * x2 * x3) * pm * v[3], jexp(-I * x3 * x1) * pm * v[4],
              jpow(x1 - x2, -1 - I * rho) * v[5]]
        return u, us
    if kind == "P4":
        rho = params.rho
        tau = x1 + x2 + x3
        v = v_of_tau(tau)
        ph = [rho * x3 + x3 * x3 / 2 + 2 * x2 * x3 + rho * rho / 2,
              rho * x3 + x3 * x3 / 2 + 2 * x3 * x1 + rho * rho / 2,
              2 * rho * (x1 + x2) + (x1 + x2) ** 2]
        u = [jexp(I * ph[k]) * v[k] for k in range(3)]
        us = [jexp(-I * ph[k]) * v[3 + k] for k in range(3)]
        return u, us
    if kind == "P3":
        rho = _rho(kind, params)
        tau = (x1 - x2) * jexp(x3)
        v = v_of_tau(tau)
        e = jexp(x3 / 2 + I * rho * x3 / 2)
        em = jexp(x3 / 2 - I * rho * x3 / 2)
        u = [e * v[0], e * v[1], jpow(x1 - x2, -1 + I * rho) * v[2]]
        us = [em * v[3], em * v[4], jpow(x1 - x2, -1 - I * rho) * v[5]]
        return u, us
    raise ValueError(kind)


def similarity_tau(kind, x):
    x1, x2, x3 = x
    if kind == "P6":
        return (x1 - x3) / (x2 - x3)
    if kind == "P5":
        return (x1 - x2) * x3
    if kind == "P4":
        return x1 + x2 + x3
    if kind == "P3":
        return (x1 - x2) * cmath.exp(x3)
    raise ValueError(kind)


class SimilarityField:
    """Three-wave field assembled from a reduced-system solution.

    ``solution(t)`` must return ``(w, w')`` at the equation's variable
    ``t``; the field converts to ``(v, v*)`` over the similarity
    variable ``tau`` and applies the similarity ansatz.
    """

    def __init__(self, kind, params, solution):
        self.kind = kind
        self.params = params
        self.solution = solution

    def v(self, tau):
        """``(v, v')`` at ``tau``; accepts a jet and returns jets."""
        tj = tau if isinstance(tau, Jet) else Jet(tau, 1.0)
        t = param_from_tau(self.kind, tj)
        w, dw = self.solution(value(t))
        wj = [Jet(a, b * t.d) for a, b in zip(w, dw)]
        vj = v_from_w(self.kind, self.params, t, wj)
        if isinstance(tau, Jet):
            return vj
        return [x.v for x in vj], [x.d for x in vj]

    def _v_of_tau(self, tau):
        if isinstance(tau, Jet):
            vj = self.v(Jet(tau.v, 1.0))
            return [Jet(x.v, x.d * tau.d) for x in vj]
        vj = self.v(Jet(tau, 1.0))
        return [x.v for x in vj]

    def _check_branch(self, x):
        tau = similarity_tau(self.kind, x)
        t = value(param_from_tau(self.kind, tau))
        bad = []
        if self.kind == "P6":
            bad = [tau, tau - 1]
        elif self.kind == "P5":
            bad = [I * t]
        elif self.kind == "P3":
            bad = [t]
        for b in bad:
            if abs(complex(b).imag) < 1e-300 and complex(b).real < 0:
                raise BranchCutCrossing(f"power evaluated on the negative real axis at x={x}")

    def u(self, x):
        """``(u, u*)`` at the point ``x = (x1, x2, x3)``."""
        self._check_branch(x)
        return _ansatz(self.kind, self.params, x, self._v_of_tau)

    def derivatives(self, x):
        """Diagonal derivatives ``d u_j / d x_j`` and ``d u*_j / d x_j``."""
        du, dus = [], []
        for j in range(3):
            xj = [complex(c) for c in x]
            xj[j] = Jet(xj[j], 1.0)
            u, us = _ansatz(self.kind, self.params, xj, self._v_of_tau)
            du.append(u[j].d if isinstance(u[j], Jet) else 0j)
            dus.append(us[j].d if isinstance(us[j], Jet) else 0j)
        return du, dus


def similarity_assemble(kind, solution, params) -> SimilarityField:
    """Build the similarity field of ``kind`` from a solution callback ``t -> (w, w')``."""
    return SimilarityField(kind, params, solution)


def pde_residual_3wri(field: SimilarityField, point):
    """Residuals of the three-wave equations at ``point``.

    Returns ``(r, r*)`` with ``r_j = du_j/dx_j - i u*_m u*_n`` and
    ``r*_j = du*_j/dx_j + i u_m u_n`` over cyclic ``(j, m, n)``.
    """
    field._check_branch(point)
    u, us = field.u(point)
    du, dus = field.derivatives(point)
    r, rs = [], []
    for j in range(3):
        m, n = (j + 1) % 3, (j + 2) % 3
        r.append(du[j] - I * us[m] * us[n])
        rs.append(dus[j] + I * u[m] * u[n])
    return r, rs


def pde_residual_fd(field: SimilarityField, point, h=1e-5):
    """Same residual with fourth-order central differences in ``x_j``."""
    u, us = field.u(point)
    r, rs = [], []
    for j in range(3):
        vals, svals = [], []
        for k in (-2, -1, 1, 2):
            x = list(point)
            x[j] = x[j] + k * h
            a, b = field.u(x)
            vals.append(a[j])
            svals.append(b[j])
        d = (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h)
        ds = (svals[0] - 8 * svals[1] + 8 * svals[2] - svals[3]) / (12 * h)
        m, n = (j + 1) % 3, (j + 2) % 3
        r.append(d - I * us[m] * us[n])
        rs.append(ds + I * u[m] * u[n])
    return r, rs


# ---------------------------------------------------------------------------
# Physical case
# ---------------------------------------------------------------------------


@dataclass
class RealityReport:
    ok: bool
    max_defect: float
    samples: int
    clauses: list


def reality_check(kind, field: SimilarityField, taus, tol=1e-8, params=None, raise_on_fail=True):
    """Check ``v*_j = conj(v_j)`` along real ``tau`` samples plus sign conditions.

    Parameters
    ----------
    kind : str
    field : SimilarityField
    taus : iterable of real
    tol : float
    params : FormalMonodromies, optional
        Defaults to ``field.params``; parameter clauses are checked first.

    Raises
    ------
    RealityViolated
        On the first failing clause, unless ``raise_on_fail`` is false.
    """
    params = params or field.params
    clauses = []

    def fail(msg):
        clauses.append(msg)
        if raise_on_fail:
            raise RealityViolated(msg)

    if kind == "P5":
        for name in ("theta0", "theta1", "thetainf"):
            if abs(getattr(params, name).real) > tol:
                fail(f"{name} must be purely imaginary")
    elif kind == "P4":
        if abs(params.rho.imag) > tol:
            fail("rho must be real")
        for name in ("theta0", "thetainf"):
            if abs(getattr(params, name).real) > tol:
                fail(f"{name} must be purely imaginary")
    elif kind == "P3":
        if abs(params.c1.imag) > tol:
            fail("c1 must be real")
        for name in ("theta0", "thetainf"):
            if abs(getattr(params, name).real) > tol:
                fail(f"{name} must be purely imaginary")
    elif kind == "P6":
        for name in ("theta1", "theta2", "theta3"):
            if abs(getattr(params, name).real) > tol:
                fail(f"{name} must be purely imaginary")
    worst = 0.0
    n = 0
    for tau in taus:
        v, _ = field.v(float(tau))
        d = max(abs(v[3 + k] - complex(v[k]).conjugate()) for k in range(3))
        scale = max(1.0, max(abs(c) for c in v))
        worst = max(worst, d / scale)
        n += 1
        if d > tol * scale:
            fail(f"v* != conj(v) at tau={tau}: defect {d:.3e}")
            break
    return RealityReport(ok=not clauses, max_defect=worst, samples=n, clauses=clauses)


def p5_sign_conditions(params, z, tol=0.0):
    """``e^{i pi/2} z > 0`` and ``e^{-i pi/2}(z + theta0) > 0``; returns failing clauses."""
    out = []
    a = I * z
    b = -I * (z + params.theta0)
    if not (abs(a.imag) <= 1e-9 * max(1, abs(a)) and a.real > tol):
        out.append("e^{i pi/2} z > 0")
    if not (abs(b.imag) <= 1e-9 * max(1, abs(b)) and b.real > tol):
        out.append("e^{-i pi/2}(z+theta0) > 0")
    return out


def p6_sign_conditions(t, y):
    out = []
    if not (0 < t.real < 1 and abs(t.imag) < 1e-12):
        out.append("0 < t < 1")
    if not (t.real < y.real < 1 and abs(y.imag) < 1e-12):
        out.append("t < y < 1")
    return out


def p6_validate_c1(params, c1, tol=1e-14):
    """A nonzero constant ``c1`` is admissible only when ``theta1 = theta3 = 0``."""
    if abs(c1) > tol and (abs(params.theta1) > tol or abs(params.theta3) > tol):
        raise RealityViolated("c1 != 0 requires theta1 = theta3 = 0")


def p4_sign_conditions(params, z):
    out = []
    if not (abs(z.imag) < 1e-12 and z.real > 0):
        out.append("z~ > 0")
    d = z - 2 * I * params.theta0
    if not (abs(d.imag) < 1e-12 and d.real > 0):
        out.append("z~ > 2i theta0")
    return out


def p3_sign_conditions(params, t, z):
    r = z / t
    if not (abs(r.imag) < 1e-12 and 0 < r.real < params.c1.real):
        return ["0 < z/t < c1"]
    return []


def p5_physical_seed(params, tau0, sig, sig1, sign=1.0, f_phase=0.0, g_phase=0.0):
    """Seed ``(t0, y, z, f, g)`` for the P5 physical case from a real sigma jet.

    ``sigma~(tau) = sigma(t)`` with ``t = -i tau``; the real pair
    ``(sigma~, sigma~')`` fixes ``z = -sigma' = -i sigma~'`` and the sigma
    equation fixes ``sigma~''`` up to ``sign``.  The gauge factors use the
    principal square roots
    ``w~1 = sqrt(e^{i pi/2} z) e^{i f_phase}`` and
    ``w2 = sqrt(e^{-i pi/2}(z+theta0)) e^{i g_phase}``.
    """
    t0 = -I * tau0
    s1 = I * sig1  # d sigma / dt
    th0, thi = params.theta0, params.thetainf
    K = sig - (thi + 2 * th0 + t0) * s1 + 2 * s1 * s1
    rhs = K * K - 4 * s1 * (s1 - th0) * (s1 - params.a1) * (s1 - params.a2)
    s2 = sign * cmath.sqrt(rhs / (t0 * t0))
    # keep sigma~'' = -d^2 sigma/dt^2 real
    if abs((-s2).imag) > 1e-9 * max(1.0, abs(s2)):
        raise RealityViolated("sigma jet is not real for this seed")
    y = 2 * (s1 - th0) * (s1 - params.a1) / (t0 * s2 + K)
    z = -s1
    w1t = cmath.sqrt(I * z) * cmath.exp(I * f_phase)
    w2 = cmath.sqrt(-I * (z + th0)) * cmath.exp(I * g_phase)
    f = 1 / (w1t * (z + th0))
    g = 1 / (w2 * z)
    return t0, y, z, f, g


__all__ = [
    "GaugeFactors", "coords_from_w", "w_from_coords", "w_from_coords_flat", "gauge_rhs",
    "gauge_rhs_p5_sigma", "coords_gauge_field", "chain_w_derivative", "v_from_w", "w_from_v",
    "p6_w_field", "w_field", "WaveSolution", "ZeroSolution", "SimilarityField",
    "similarity_assemble", "similarity_tau", "pde_residual_3wri", "pde_residual_fd",
    "reality_check", "RealityReport", "p5_sign_conditions", "p6_sign_conditions",
    "p6_validate_c1", "p4_sign_conditions", "p3_sign_conditions", "p5_physical_seed",
    "param_from_tau", "tau_from_param",
]
