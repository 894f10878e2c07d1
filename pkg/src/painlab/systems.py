"""Nonlinear ODE systems: Painleve residuals, reduced amplitude systems,
coordinate systems, first integrals and sigma functions.

All right-hand sides use plain arithmetic so they accept jets as well as
complex numbers.  Six-component amplitude states are ordered
``(w1, w2, w3, w~1, w~2, w~3)``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

from .errors import DegenerateBranch, SingularEvaluation, nonzero
from .numkit import jpow, value

KINDS = ("P3", "P4", "P5", "P6")

_KEYS = {
    "P5": ("theta0", "theta1", "thetainf", "m", "mt"),
    "P4": ("theta0", "thetainf", "rho"),
    "P3": ("theta0", "thetainf", "c1"),
    "P6": ("theta1", "theta2", "theta3", "thetainf", "rho1", "rho2", "rho3"),
    "symP4": ("v1", "v2", "v3", "alpha0", "alpha1", "alpha2"),
}


class FormalMonodromies:
    """Exponent parameters of one equation kind.

    Use the kind-specific constructors :meth:`p5`, :meth:`p4`, :meth:`p3`,
    :meth:`p6` and :meth:`sym_p4`, which fill in derived entries and check
    the defining relations.
    """

    __slots__ = ("kind", "_v")

    def __init__(self, kind, **vals):
        if kind not in _KEYS:
            raise ValueError(f"unknown kind {kind!r}")
        missing = [k for k in _KEYS[kind] if k not in vals]
        if missing:
            raise ValueError(f"missing parameters {missing}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "_v", {k: complex(vals[k]) for k in _KEYS[kind]})
        self._check()

    def __getattr__(self, name):
        try:
            return self._v[name]
        except KeyError:
            raise AttributeError(name) from None

    def __setattr__(self, name, v):
        raise AttributeError("FormalMonodromies is immutable")

    def __repr__(self):
        inner = ", ".join(f"{k}={v!r}" for k, v in self._v.items())
        return f"FormalMonodromies({self.kind}, {inner})"

    def as_dict(self):
        return dict(self._v)

    def replace(self, **kw):
        d = dict(self._v)
        d.update(kw)
        return FormalMonodromies(self.kind, **d)

    def _check(self):
        v = self._v
        tol = 1e-12
        if self.kind == "P5" and abs(v["mt"] - v["m"] - v["thetainf"]) > tol * (1 + abs(v["thetainf"])):
            raise ValueError("m~ - m must equal theta_inf")
        if self.kind == "P6" and abs(v["rho1"] + v["rho2"] + v["rho3"]) > tol:
            raise ValueError("rho1 + rho2 + rho3 must vanish")
        if self.kind == "symP4" and abs(v["alpha0"] + v["alpha1"] + v["alpha2"] - 1) > tol:
            raise ValueError("alpha0 + alpha1 + alpha2 must equal 1")

    # constructors -------------------------------------------------------
    @classmethod
    def p5(cls, theta0, theta1, thetainf, m=None):
        """P5 exponents; ``m`` defaults to ``-(theta0+theta1+thetainf)/2``."""
        if m is None:
            m = -(theta0 + theta1 + thetainf) / 2
        return cls("P5", theta0=theta0, theta1=theta1, thetainf=thetainf, m=m, mt=m + thetainf)

    @classmethod
    def p4(cls, theta0, thetainf, rho=None):
        """P4 exponents; ``rho`` defaults to ``i*thetainf``."""
        if rho is None:
            rho = 1j * thetainf
        return cls("P4", theta0=theta0, thetainf=thetainf, rho=rho)

    @classmethod
    def p3(cls, theta0, thetainf, c1):
        return cls("P3", theta0=theta0, thetainf=thetainf, c1=c1)

    @classmethod
    def p6(cls, theta1, theta2, theta3, thetainf):
        """P6 exponents with ``i rho1 = th1-th3``, ``i rho2 = th2-th1``, ``i rho3 = th3-th2``."""
        return cls("P6", theta1=theta1, theta2=theta2, theta3=theta3, thetainf=thetainf,
                   rho1=-1j * (theta1 - theta3), rho2=-1j * (theta2 - theta1),
                   rho3=-1j * (theta3 - theta2))

    @classmethod
    def sym_p4(cls, v1, v2, v3):
        return cls("symP4", v1=v1, v2=v2, v3=v3, alpha0=1 + v3 - v1, alpha1=v1 - v2,
                   alpha2=v2 - v3)

    @property
    def a1(self):
        """``(theta0+theta1+thetainf)/2`` for P5."""
        return (self.theta0 + self.theta1 + self.thetainf) / 2

    @property
    def a2(self):
        """``(theta0-theta1+thetainf)/2`` for P5."""
        return (self.theta0 - self.theta1 + self.thetainf) / 2


@dataclass(frozen=True)
class PainleveCoefficients:
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    def as_tuple(self):
        return (self.alpha, self.beta, self.gamma, self.delta)


@dataclass(frozen=True)
class WaveState:
    """Six amplitudes at parameter ``t``; ``w_star`` holds w~ or v*."""

    w: tuple
    w_star: tuple
    t: complex

    @classmethod
    def from_flat(cls, flat, t):
        flat = list(flat)
        return cls(tuple(flat[:3]), tuple(flat[3:]), t)

    def flat(self):
        return list(self.w) + list(self.w_star)


@dataclass(frozen=True)
class CoordState:
    """Painleve coordinates of one variant; ``values`` maps names to numbers."""

    variant: str
    values: dict = field(default_factory=dict)

    def __getitem__(self, k):
        return self.values[k]

    def get(self, k, default=None):
        return self.values.get(k, default)


def painleve_coefficients(params: FormalMonodromies, variant=None) -> PainleveCoefficients:
    """Painleve coefficients associated with a parameter set.

    ``variant='TRUE-JM-P5'`` selects the alternative P5 parametrization.
    """
    k = params.kind
    if k == "P5":
        th0, th1, thi = params.theta0, params.theta1, params.thetainf
        if variant == "TRUE-JM-P5":
            return PainleveCoefficients(th1 ** 2 / 2, -th0 ** 2 / 2, 1 + thi, -0.5)
        return PainleveCoefficients(((th0 - th1 + thi) / 2) ** 2 / 2,
                                    -((th0 - th1 - thi) / 2) ** 2 / 2, 1 - th0 - th1, -0.5)
    if k == "P4":
        return PainleveCoefficients(2 * params.thetainf - 1, -8 * params.theta0 ** 2, 0, 0)
    if k == "P3":
        return PainleveCoefficients(4 * params.theta0, 4 * (1 - params.thetainf),
                                    4 * params.c1 ** 2, -4)
    if k == "P6":
        return PainleveCoefficients((params.thetainf - 1) ** 2 / 2, -params.theta1 ** 2 / 2,
                                    params.theta3 ** 2 / 2, (1 - params.theta2 ** 2) / 2)
    if k == "symP4":
        raise ValueError("use sym_p4_to_p4 for the symmetric form")
    raise ValueError(k)


# ---------------------------------------------------------------------------
# Painleve equations
# ---------------------------------------------------------------------------


def painleve_rhs(kind, coeffs: PainleveCoefficients, t, y, y1):
    """Right-hand side ``y''`` of the canonical equation."""
    a, b, g, d = coeffs.as_tuple()
    if kind == "P3":
        nonzero(t, "t")
        nonzero(y, "y")
        return y1 * y1 / y - y1 / t + (a * y * y + b) / t + g * y ** 3 + d / y
    if kind == "P4":
        nonzero(y, "y")
        return y1 * y1 / (2 * y) + 1.5 * y ** 3 + 4 * t * y * y + 2 * (t * t - a) * y + b / y
    if kind == "P5":
        nonzero(t, "t")
        nonzero(y, "y")
        nonzero(y - 1, "y-1")
        return ((1 / (2 * y) + 1 / (y - 1)) * y1 * y1 - y1 / t
                + (y - 1) ** 2 / (t * t) * (a * y + b / y) + g * y / t
                + d * y * (y + 1) / (y - 1))
    if kind == "P6":
        nonzero(t, "t")
        nonzero(t - 1, "t-1")
        nonzero(y, "y")
        nonzero(y - 1, "y-1")
        nonzero(y - t, "y-t")
        return (0.5 * (1 / y + 1 / (y - 1) + 1 / (y - t)) * y1 * y1
                - (1 / t + 1 / (t - 1) + 1 / (y - t)) * y1
                + y * (y - 1) * (y - t) / (t * t * (t - 1) ** 2)
                * (a + b * t / (y * y) + g * (t - 1) / (y - 1) ** 2
                   + d * t * (t - 1) / (y - t) ** 2))
    raise ValueError(kind)


def painleve_residual(kind, coeffs: PainleveCoefficients, t, y, y1, y2):
    """``y2 - RHS(t, y, y1)``; zero exactly on solution jets."""
    return y2 - painleve_rhs(kind, coeffs, t, y, y1)


# ---------------------------------------------------------------------------
# Reduced amplitude systems
# ---------------------------------------------------------------------------


def _p5_rhs(p, t, s):
    w1, w2, w3, u1, u2, u3 = s
    nonzero(t, "t")
    c = t - (p.m - p.mt)
    return [u2 * u3 / t, -u1 * u3 / t, -c * w3 / t - u1 * u2,
            -w2 * w3 / t, w1 * w3 / t, c * u3 / t + w1 * w2]


def _p4_rhs(p, tau, s):
    w1, w2, w3, u1, u2, u3 = s
    T = tau + p.rho
    return [u2 * u3, u1 * u3, 2j * T * w3 - 2 * u1 * u2,
            -w2 * w3, -w1 * w3, -2j * T * u3 + 2 * w1 * w2]


def _p3_rhs(p, t, s):
    W1, W2, W3, U1, U2, U3 = s
    nonzero(t, "t")
    thi = p.thetainf
    return [2 * U2 * U3 / t, -2 * U1 * U3 / t, (-2 * thi * W3 + 2 * t * t * U1 * U2) / t,
            2 * W2 * W3 / t, -2 * W1 * W3 / t, (2 * thi * U3 + 2 * t * t * W1 * W2) / t]


def _p6_rhs(p, tau, s):
    v1, v2, v3, s1, s2, s3 = s
    nonzero(tau, "tau")
    nonzero(tau - 1, "tau-1")
    i = 1j
    r2, r3 = i * p.rho2, i * p.rho3
    a = jpow(tau, r2)
    b = jpow(tau - 1, r3)
    ai = jpow(tau, -r2)
    bi = jpow(tau - 1, -r3)
    return [i * s2 * s3 / (tau * a * (tau - 1) * b),
            -i * s3 * s1 / (a * (tau - 1) * b),
            i * s1 * s2 / (tau * a * b),
            -i * v2 * v3 / (tau * ai * (tau - 1) * bi),
            i * v3 * v1 / (ai * (tau - 1) * bi),
            -i * v1 * v2 / (tau * ai * bi)]


def _sym_p4_rhs(p, z, s):
    f0, f1, f2 = s
    return [f0 * (f1 - f2) + p.alpha0, f1 * (f2 - f0) + p.alpha1, f2 * (f0 - f1) + p.alpha2]


_REDUCED = {"P5": _p5_rhs, "P4": _p4_rhs, "P3": _p3_rhs, "P6": _p6_rhs, "symP4": _sym_p4_rhs}


def reduced_field(kind, params):
    """Vector field ``f(t, state)`` of the reduced system for ``kind``.

    P3 is in ``(W, t)`` form, P4 in ``tau``, P5 in ``t``, P6 in
    ``(v, v*)`` variables over ``tau``; ``symP4`` takes ``(f0, f1, f2)``.
    """
    fn = _REDUCED[kind]
    return lambda t, s: fn(params, t, s)


def reduced_rhs(kind, params: FormalMonodromies, state: WaveState) -> WaveState:
    """Derivative of a wave state under the reduced system."""
    d = _REDUCED[kind](params, state.t, state.flat())
    return WaveState.from_flat(d, state.t)


# ---------------------------------------------------------------------------
# First integrals
# ---------------------------------------------------------------------------


def first_integrals(kind, state, params: FormalMonodromies):
    """Conserved combinations of the reduced system.

    Returns a list of ``(name, value)``.  For P5 the entry ``theta1`` is
    the principal square root of the recovered ``theta1**2``; the sign is
    free (``theta1 -> -theta1`` is a symmetry).
    """
    s = state.flat() if isinstance(state, WaveState) else list(state)
    w1, w2, w3, u1, u2, u3 = s
    if kind == "P5":
        thi = params.mt - params.m
        th0 = w1 * u1 + w2 * u2
        q = w1 * w2 * w3 + u1 * u2 * u3 + w3 * u3 + thi / 2 * (w2 * u2 - w1 * u1)
        th1sq = 4 * q + th0 ** 2 + thi ** 2
        return [("m", params.m), ("theta_inf", thi), ("theta0", th0), ("quartic", q),
                ("theta1", cmath.sqrt(value(th1sq)))]
    if kind == "P4":
        return [("2i*theta0", w1 * u1 - w2 * u2), ("2i*theta_inf", w1 * u1 + w2 * u2 + w3 * u3)]
    if kind == "P3":
        thi = params.thetainf
        return [("c1", w1 * u1 + w2 * u2),
                ("theta0/2", w1 * w2 * w3 - u1 * u2 * u3 + thi / 2 * (w1 * u1 - w2 * u2))]
    raise ValueError(f"no printed first integrals for {kind}")


def conserved_names(kind):
    return {"P5": ("theta0", "quartic"), "P4": ("2i*theta0", "2i*theta_inf"),
            "P3": ("c1", "theta0/2")}[kind]


# ---------------------------------------------------------------------------
# Coordinate systems
# ---------------------------------------------------------------------------

COORD_VARIANTS = ("JM-P5", "C40-P5", "TRUE-JM-P5", "YZ-P4", "YZW-P3", "Z-P3", "P6-Y")
COORD_NAMES = {
    "JM-P5": ("y", "z", "u"), "C40-P5": ("y", "z", "u"), "TRUE-JM-P5": ("y", "z", "u"),
    "YZ-P4": ("y", "z"), "YZW-P3": ("y", "z", "w"), "Z-P3": ("z", "z1"), "P6-Y": ("y", "y1"),
}


def _c40(p, t, s):
    y, z, u = s
    nonzero(t, "t")
    nonzero(y, "y")
    th0, th1 = p.theta0, p.theta1
    a1, a2 = p.a1, p.a2
    dy = (t * y - 2 * z * (y - 1) ** 2 - a2 * (y - 1) ** 2 + (th0 + th1) * (y - 1)) / t
    dz = (y * z * (z + a2) - (z + th0) * (z + a1) / y) / t
    dlu = (-2 * z - th0 + y * (z + a2) + (z + a1) / y) / t
    return [dy, dz, u * dlu]


def _ids(p, t, s):
    y, z, u = s
    nonzero(t, "t")
    nonzero(y, "y")
    th0, th1, thi = p.theta0, p.theta1, p.thetainf
    a1, a2 = p.a1, p.a2
    dy = (t * y - 2 * z * (y - 1) ** 2 - (y - 1) * (a2 * y - (3 * th0 + th1 + thi) / 2)) / t
    dz = (y * z * (z + a2) - (z + th0) * (z + a1) / y) / t
    dlu = (-2 * z - th0 + y * (z + a2) + (z + a1) / y) / t
    return [dy, dz, u * dlu]


def _true_jm(p, t, s):
    y, z, u = s
    nonzero(t, "t")
    nonzero(y, "y")
    th0, th1, thi = p.theta0, p.theta1, p.thetainf
    dy = (t * y - 2 * z * (y - 1) ** 2 - thi * (y - 1)) / t
    dz = (y * (z * z - th1 ** 2 / 4) - ((z - thi / 2) ** 2 - th0 ** 2 / 4) / y) / t
    dlu = 2 * (z - thi / 2) * (1 / y - 1) / t
    return [dy, dz, u * dlu]


def _yz_p4(p, tau, s):
    y, z = s
    nonzero(y, "y")
    th0, thi = p.theta0, p.thetainf
    T = tau + p.rho
    i = 1j
    dy = -4 * z + y * y + 2 * i * T * y + 4 * i * th0
    dz = -y * (z - i * (th0 + thi)) - 2 * z * (z - 2 * i * th0) / y
    return [dy, dz]


def _yzw_p3(p, t, s):
    y, z, w = s
    nonzero(t, "t")
    th0, thi, c1 = p.theta0, p.thetainf, p.c1
    dy = (2 * (2 * z - c1 * t) * y * y + (2 * thi - 1) * y + 2 * t) / t
    dz = (4 * z * (c1 * t - z) * y - (2 * thi - 1) * z + (th0 + c1 * thi) * t) / t
    dlw = 2 * (c1 * t - 2 * z) * y / t
    return [dy, dz, w * dlw]


def z_p3_rhs(p, t, z, z1):
    """Second derivative of ``z`` from the second-order P3 z-equation."""
    th0, thi, c1 = p.theta0, p.thetainf, p.c1
    nonzero(t, "t")
    nonzero(z, "z")
    d = nonzero(c1 * t - z, "c1*t - z")
    return ((c1 * t - 2 * z) / (2 * z * d) * z1 * z1 + z / (t * d) * z1 + 8 * z * d / t
            + (c1 + 4 * th0 * thi) / (2 * t) + ((th0 - c1 * thi) ** 2 - c1 * c1) / (2 * d)
            - (th0 + c1 * thi) ** 2 / (2 * z))


def z_p3_residual(p, t, z, z1, z2):
    return z2 - z_p3_rhs(p, t, z, z1)


def _z_p3(p, t, s):
    z, z1 = s
    return [z1, z_p3_rhs(p, t, z, z1)]


def _p6_y(p, t, s):
    y, y1 = s
    return [y1, painleve_rhs("P6", painleve_coefficients(p), t, y, y1)]


_COORD = {"C40-P5": _c40, "JM-P5": _ids, "TRUE-JM-P5": _true_jm, "YZ-P4": _yz_p4,
          "YZW-P3": _yzw_p3, "Z-P3": _z_p3, "P6-Y": _p6_y}


def coordinate_field(variant, params):
    """Vector field ``f(t, [coords...])`` in the order of ``COORD_NAMES[variant]``."""
    fn = _COORD[variant]
    return lambda t, s: fn(params, t, s)


def coordinate_rhs(variant, params, state: CoordState, t) -> CoordState:
    names = COORD_NAMES[variant]
    d = _COORD[variant](params, t, [state.values[n] for n in names])
    return CoordState(variant, dict(zip(names, d)))


# ---------------------------------------------------------------------------
# Sigma functions
# ---------------------------------------------------------------------------


def sigma_p5_from_w(state, params, t=None):
    """``w3 w~3 + t w1 w~1 + ((theta0+thetainf)^2 - theta1^2)/4``."""
    s = state.flat() if isinstance(state, WaveState) else list(state)
    if t is None:
        t = state.t
    w1, w2, w3, u1, u2, u3 = s
    th0, th1, thi = params.theta0, params.theta1, params.thetainf
    return w3 * u3 + t * w1 * u1 + ((th0 + thi) ** 2 - th1 ** 2) / 4


def sigma_p5_from_yz(params, t, y, z):
    """Sigma expressed through the C.40 coordinates."""
    th0, th1, thi = params.theta0, params.theta1, params.thetainf
    X3 = y * (z + params.a2) - (z + th0)
    Y3 = (z + params.a1) / y - z
    return -X3 * Y3 - t * z + ((th0 + thi) ** 2 - th1 ** 2) / 4


def sigma_p4_from_yz(params, tau, y, z):
    """``sigma~`` from ``i sigma~ = -y(z - i th0 - i thinf) + 2z(z-2i th0)/y - 2i(tau+rho) z``."""
    th0, thi = params.theta0, params.thetainf
    T = tau + params.rho
    i = 1j
    nonzero(y, "y")
    return (-y * (z - i * th0 - i * thi) + 2 * z * (z - 2 * i * th0) / y - 2 * i * T * z) / i


def sigma_residual(kind, params, sig, sig1, sig2, t):
    """Left minus right side of the second-order second-degree sigma equation."""
    if kind == "P5":
        th0, thi = params.theta0, params.thetainf
        nonzero(t, "t")
        K = sig - (thi + 2 * th0 + t) * sig1 + 2 * sig1 * sig1
        return (t * t * sig2 * sig2 - K * K
                + 4 * sig1 * (sig1 - th0) * (sig1 - params.a1) * (sig1 - params.a2))
    if kind == "P4":
        th0, thi = params.theta0, params.thetainf
        T = t + params.rho
        i = 1j
        return (sig2 * sig2 + 4 * (T * sig1 - sig) ** 2
                + 4 * sig1 * (sig1 + 4 * i * th0) * (sig1 + 2 * i * th0 + 2 * i * thi))
    raise ValueError(kind)


def p5_y_from_sigma(params, t, sig, sig1, sig2):
    """``y`` from ``t sigma'' + K = 2(sigma'-theta0)(sigma'-a1)/y``."""
    th0, thi = params.theta0, params.thetainf
    K = sig - (thi + 2 * th0 + t) * sig1 + 2 * sig1 * sig1
    return 2 * (sig1 - th0) * (sig1 - params.a1) / nonzero(t * sig2 + K, "t*sigma''+K")


def p5_y_from_sigma_alt(params, t, sig, sig1, sig2):
    """``y`` from ``t sigma'' - K = -2 sigma' y (sigma' - a2)``."""
    th0, thi = params.theta0, params.thetainf
    K = sig - (thi + 2 * th0 + t) * sig1 + 2 * sig1 * sig1
    return -(t * sig2 - K) / nonzero(2 * sig1 * (sig1 - params.a2), "2 sigma'(sigma'-a2)")


def p4_y_from_sigma(params, tau, sig, sig1, sig2):
    """Both expressions for ``y~`` implied by the sigma definition.

    Returns ``(y, 1/y)`` computed independently; their product equals 1
    exactly when the sigma equation holds.
    """
    th0, thi = params.theta0, params.thetainf
    T = tau + params.rho
    i = 1j
    z = -sig1 / 2
    z1 = -sig2 / 2
    y = -(z1 + i * sig + 2 * i * T * z) / (2 * nonzero(z - i * th0 - i * thi, "z - i(th0+thinf)"))
    inv_y = -(z1 - i * sig - 2 * i * T * z) / (4 * nonzero(z * (z - 2 * i * th0), "z(z-2i th0)"))
    return y, inv_y


# ---------------------------------------------------------------------------
# P4 and P3 maps to canonical forms
# ---------------------------------------------------------------------------

_E4 = cmath.exp(1j * cmath.pi / 4)


def p4_to_canonical(params, tau, y, y1, y2):
    """Map a ``y~`` jet in ``tau`` to a P4 jet: ``t = e^{i pi/4}(tau+rho)``, ``y = e^{-i pi/4} y~``."""
    T = tau + params.rho
    t = _E4 * T
    # d/dt = e^{-i pi/4} d/dT
    return t, y / _E4, y1 / _E4 ** 2, y2 / _E4 ** 3


def sym_p4_to_p4(params, z, f):
    """Map a symmetric-P4 point to canonical P4 data for each of the three labels.

    Requires ``f0+f1+f2 = z``.  Returns a list of
    ``(t, y_k, PainleveCoefficients)`` with ``y_k = sqrt(-2) f_k``,
    ``t = z/sqrt(-2)``, ``alpha = alpha_{k+1}-alpha_{k+2}``,
    ``beta = -2 alpha_k^2``.
    """
    s = 1j * 2 ** 0.5
    al = (params.alpha0, params.alpha1, params.alpha2)
    out = []
    for k in range(3):
        out.append((z / s, s * f[k],
                    PainleveCoefficients(al[(k + 1) % 3] - al[(k + 2) % 3], -2 * al[k] ** 2, 0, 0)))
    return out


def p3_to_degenerate_p5(state: CoordState, params: FormalMonodromies, t):
    """Map ``z`` of the P3 system to the degenerate P5 variable.

    Returns ``(Y, T, coefficients)`` with ``Y = z/(z - c1 t)`` and
    ``T = t^2``.  For ``c1 = 0`` the degenerate P3 coefficient set is
    returned with ``Y = None``.
    """
    th0, thi, c1 = params.theta0, params.thetainf, params.c1
    z = state["z"] if isinstance(state, CoordState) else state
    if c1 == 0:
        return None, t * t, PainleveCoefficients(-8, 2 * th0 * thi, 0, -th0 ** 2)
    if abs(z - c1 * t) == 0:
        raise DegenerateBranch("z = c1 t")
    Y = z / (z - c1 * t)
    co = PainleveCoefficients((th0 - c1 * thi) ** 2 / (8 * c1 * c1),
                              -(th0 + c1 * thi) ** 2 / (8 * c1 * c1), 2 * c1, 0)
    return Y, t * t, co


__all__ = [
    "KINDS", "FormalMonodromies", "PainleveCoefficients", "WaveState", "CoordState",
    "painleve_coefficients", "painleve_rhs", "painleve_residual", "reduced_field", "reduced_rhs",
    "first_integrals", "conserved_names", "COORD_VARIANTS", "COORD_NAMES", "coordinate_field",
    "coordinate_rhs", "z_p3_rhs", "z_p3_residual", "sigma_p5_from_w", "sigma_p5_from_yz",
    "sigma_p4_from_yz", "sigma_residual", "p5_y_from_sigma", "p5_y_from_sigma_alt",
    "p4_y_from_sigma", "p4_to_canonical", "sym_p4_to_p4", "p3_to_degenerate_p5",
    "SingularEvaluation",
]
