"""Fuchs-Garnier (Lax) pairs, the zero-curvature residual and the reduction
chains from 3x3 pairs to 2x2 pairs.

A pair is ``Y_lam = A(lam) Y`` and ``Y_t = B(lam) Y`` where ``t`` is the
variable of the reduced amplitude system (``t`` for P5, P6 and the P3
W-form, ``tau`` for P4, ``z`` for the symmetric P4 system).  Compatibility
is measured by ``dA/dt - dB/dlam + [A, B]``.  Builders use generic
arithmetic so that jets pass through and ``dA/dt`` is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateEigenvalues,
    NonGenericState,
    NonSingularRhs,
    SingularEvaluation,
    ZeroColumnViolation,
    nonzero,
)
from .numkit import (
    ComplexPath,
    IntegratorConfig,
    Jet,
    RationalMatrix,
    eig_small,
    integrate_path,
    jsqrt,
    value,
)
from .parametrize import p6_w_field
from .systems import COORD_NAMES, CoordState, WaveState, coordinate_field, reduced_field

I = 1j


# ---------------------------------------------------------------------------
# generic small-matrix helpers (object arrays so jets survive)
# ---------------------------------------------------------------------------


def _m(rows):
    return np.array(rows, dtype=object)


def _diag(*d):
    n = len(d)
    out = np.zeros((n, n), dtype=object)
    out[:] = 0.0
    for k, x in enumerate(d):
        out[k, k] = x
    return out


def _eye(n):
    return _diag(*([1.0] * n))


def _zeros(n):
    out = np.empty((n, n), dtype=object)
    out[:] = 0.0
    return out


def _numeric(M):
    try:
        return np.array(M, dtype=complex)
    except TypeError:
        return M


def _vpart(M):
    return np.array([[value(x) for x in row] for row in M], dtype=complex)


def _first(x):
    return x.v if isinstance(x, Jet) else x


def _dpart(x):
    return x.d if isinstance(x, Jet) else 0.0


def _split(M):
    """Split a jet matrix into value and derivative matrices (one jet layer)."""
    M = np.asarray(M, dtype=object)
    v = np.array([[_first(x) for x in row] for row in M], dtype=object)
    d = np.array([[_dpart(x) for x in row] for row in M], dtype=object)
    return _numeric(v), _numeric(d)


def _dot(a, b):
    return np.dot(np.asarray(a, dtype=object), np.asarray(b, dtype=object))


def _det3(M):
    return (M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
            - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
            + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0]))


def _inv3(M):
    d = nonzero(_det3(M), "det")
    adj = _zeros(3)
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != j]
            c = [k for k in range(3) if k != i]
            minor = M[r[0], c[0]] * M[r[1], c[1]] - M[r[0], c[1]] * M[r[1], c[0]]
            adj[i, j] = (-1) ** (i + j) * minor / d
    return adj


def _inv2(M):
    d = nonzero(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0], "det")
    return _m([[M[1, 1] / d, -M[0, 1] / d], [-M[1, 0] / d, M[0, 0] / d]])


def _E(k, n=3):
    d = [0.0] * n
    d[k] = 1.0
    return _diag(*d)


SIGMA3 = _diag(1.0, -1.0)


def _fro(M):
    return float(np.linalg.norm(np.asarray(M, dtype=complex)))


# ---------------------------------------------------------------------------
# LinearPair
# ---------------------------------------------------------------------------


def _evaluate(poly, poles, lam, n):
    out = _zeros(n)
    for c in reversed(poly):
        out = out * lam + c
    for p, k, c in poles:
        d = nonzero(lam - p, "lambda - pole")
        out = out + c / d ** k
    return _numeric(out)


@dataclass(frozen=True, eq=False)
class LinearPair:
    """Pair ``lead * Y_lam = A(lam) Y``, ``Y_t = B(lam) Y``.

    Both parts are rational in ``lam``: ascending polynomial coefficients
    plus ``(location, order, matrix)`` pole terms.  ``lead`` is ``None``
    for the identity; the singular-leading 3x3 P3 pair stores its
    elimination matrix in ``extras["N"]``.
    """

    variant: str
    dimension: int
    lam_poly: tuple
    lam_poles: tuple
    t_poly: tuple
    t_poles: tuple = ()
    lead: object = None
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, poles in (("lambda", self.lam_poles), ("t", self.t_poles)):
            seen = []
            for p, k, _ in poles:
                key = (value(p), k)
                if key in seen:
                    raise ValueError(f"duplicate pole term in {name} part")
                seen.append(key)
        for M in list(self.lam_poly) + [c for _, _, c in self.lam_poles]:
            vals = np.array([[complex(value(x)) for x in row] for row in np.asarray(M)])
            if not np.all(np.isfinite(vals)):
                raise SingularEvaluation("non-finite coefficient matrix")

    def A(self, lam):
        return _evaluate(self.lam_poly, self.lam_poles, lam, self.dimension)

    def B(self, lam):
        return _evaluate(self.t_poly, self.t_poles, lam, self.dimension)

    def singularities(self):
        """Finite singular points of the spectral equation."""
        out = []
        for p, _, _ in self.lam_poles:
            if value(p) not in [value(q) for q in out]:
                out.append(p)
        return out

    def residue(self, loc):
        for p, k, c in self.lam_poles:
            if k == 1 and value(p) == value(loc):
                return _numeric(c)
        return np.zeros((self.dimension, self.dimension), dtype=complex)

    def lambda_rational(self) -> RationalMatrix:
        """Numeric spectral coefficient for the transport kernel."""
        return RationalMatrix([_vpart(c) for c in self.lam_poly],
                              [(value(p), k, _vpart(c)) for p, k, c in self.lam_poles],
                              dim=self.dimension)

    def t_rational(self) -> RationalMatrix:
        return RationalMatrix([_vpart(c) for c in self.t_poly] or [np.zeros((self.dimension,) * 2)],
                              [(value(p), k, _vpart(c)) for p, k, c in self.t_poles],
                              dim=self.dimension)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def _p6_matrices(s, p, t):
    w1, w2, w3, u1, u2, u3 = s[:6]
    nonzero(t, "t")
    nonzero(t - 1, "t - 1")
    B0 = _m([[-p.theta2, u3, w2], [w3, -p.theta3, u1], [u2, w1, -p.theta1]])
    M0 = _m([[0.0, u3 / (t - 1), w2 / t], [w3 / (t - 1), 0.0, 0.0], [u2 / t, 0.0, 0.0]])
    return B0, M0


def _p6_3x3(s, p, t):
    B0, M0 = _p6_matrices(s, p, t)
    B1 = _diag(t, 1.0, 0.0)
    M1 = _diag(1.0, 0.0, 0.0)
    return LinearPair("P6-3x3", 3, (B1,), ((0.0, 1, B0 - _eye(3)),), (M0, M1),
                      extras={"B1": B1, "B0": B0, "M1": M1, "M0": M0})


def _p5_3x3(s, p, t):
    w1, w2, w3, u1, u2, u3 = s
    nonzero(t, "t")
    m, mt = p.m, p.mt
    B1 = _m([[mt, u3, w2], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    B2 = _m([[0.0, 0.0, 0.0], [w3, m, u1], [0.0, 0.0, 0.0]])
    B3 = _m([[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [u2 / 2, w1 / 2, -0.5]])
    Minf = _m([[0.5, -u3 / t, 0.0], [-w3 / t, -0.5, 0.0], [u2 / 2, -w1 / 2, 0.0]])
    B = B1 + B2 + t * B3
    extras = {"B1": B1, "B2": B2, "B3": B3, "Minf": Minf, "B": B, "M": Minf - B3,
              "J0": _diag(1.0, 1.0, 0.0), "J": _diag(1.0, -1.0, 1.0)}
    return LinearPair("P5-3x3", 3, (_eye(3) / 2 + B3,), ((-t, 1, B1), (t, 1, B2)),
                      (Minf,), ((-t, 1, B1), (t, 1, -B2)), extras=extras)


def p5_linear_form_defect(pair: LinearPair, lam, t):
    """Defect of the linear-in-``lam`` rewriting of the 3x3 P5 pair.

    Returns the Frobenius norms of
    ``(lam J0 + t J) A - (1/2 (lam J0 + t J) + B)`` and
    ``(lam J0 + t J) B_t - ((lam J0 + t J) M + J B)``.
    """
    x = pair.extras
    L = _numeric(lam * x["J0"] + t * x["J"])
    J = _numeric(x["J"])
    B = _numeric(x["B"])
    M = _numeric(x["M"])
    e1 = L @ pair.A(lam) - (L / 2 + B)
    e2 = L @ pair.B(lam) - (L @ M + J @ B)
    return _fro(e1), _fro(e2)


def _p4_3x3(s, p, tau):
    w1, w2, w3, u1, u2, u3 = s
    T = tau + p.rho
    B1 = _diag(-I, I, 0.0)
    M1 = _diag(-I, -I, 0.0)
    B0 = _m([[-I * T, u3, w2], [w3, -I * T, u1], [u2, w1, 0.0]])
    M0 = _m([[-I * T, 0.0, w2], [0.0, I * T, -u1], [u2, -w1, 0.0]])
    return LinearPair("P4-3x3", 3, (B0, B1), (), (M0, M1),
                      extras={"B1": B1, "B0": B0, "M1": M1, "M0": M0})


def _p3_3x3(s, p, t):
    W1, W2, W3, U1, U2, U3 = s
    nonzero(t, "t")
    tau = t * t
    thi = p.thetainf
    C0 = _m([[-thi / 2, -U3, -W2], [W3, thi / 2, -U1], [U2, W1, 0.0]])
    Ad = _diag(tau / 2, -tau / 2, -1.0)
    Mt = _m([[0.0, -U3, 0.0], [W3, 0.0, 0.0], [tau * U2 / 2, -tau * W1 / 2, 0.0]]) / tau
    Bl = _diag(0.5, -0.5, 0.0)
    # deformation in t with tau = t^2: B_t = 2 t B_tau
    E = _diag(1.0, 1.0, 0.0)

    def N(lam):
        return _m([[1.0, 0.0], [0.0, 1.0], [U2 / lam, W1 / lam]])

    return LinearPair("P3-3x3", 3, (Ad,), ((0.0, 1, C0),), (2 * t * Mt, 2 * t * Bl), lead=E,
                      extras={"N": N, "tau": tau, "residue": C0, "B_tau": (Mt, Bl)})


def _jm_p5(s, p, t):
    y, z, u = s
    nonzero(t, "t")
    nonzero(u, "u")
    nonzero(y, "y")
    th0, thi = p.theta0, p.thetainf
    a1, a2 = p.a1, p.a2
    A0 = _m([[z + th0 / 2, -u * (z + th0)], [z / u, -z - th0 / 2]])
    A1 = _m([[-z - (th0 + thi) / 2, u * y * (z + a2)],
             [-(z + a1) / (u * y), z + (th0 + thi) / 2]])
    return _jm_form("JM-P5", A0, A1, thi, t)


def _jm_form(name, A0, A1, thi, t):
    return LinearPair(name, 2, (t / 2 * SIGMA3,), ((0.0, 1, A0), (1.0, 1, A1)),
                      ((A0 + A1 + thi / 2 * SIGMA3) / t, SIGMA3 / 2),
                      extras={"A0": A0, "A1": A1})


def _true_jm_p5(s, p, t):
    y, z, u = s
    nonzero(t, "t")
    nonzero(u, "u")
    nonzero(y, "y")
    th0, th1, thi = p.theta0, p.theta1, p.thetainf
    A0 = _m([[z - thi / 2, -u * ((z - thi / 2) ** 2 - th0 ** 2 / 4)], [1 / u, -z + thi / 2]])
    A1 = _m([[-z, u * y * (z * z - th1 ** 2 / 4)], [-1 / (u * y), z]])
    return _jm_form("TRUE-JM-P5", A0, A1, thi, t)


def _ny(s, p, z):
    f0, f1, f2 = s
    Am = _m([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [f0, 1.0, 0.0]])
    Bm = _m([[p.v1, f1, 1.0], [0.0, p.v2, f2], [0.0, 0.0, p.v3]])
    P = _m([[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    Q = _m([[z / 3 - f2, 1.0, 0.0], [0.0, z / 3 - f0, 1.0], [0.0, 0.0, z / 3 - f1]])
    return LinearPair("NY", 3, (-Am,), ((0.0, 1, -Bm),), (-Q, -P),
                      extras={"Am": Am, "Bm": Bm, "P": P, "Q": Q})


def _p5_2x2(s, p, t, traceless=False):
    w1, w2, w3, u1, u2, u3 = s
    nonzero(t, "t")
    m, mt = p.m, p.mt
    R0 = _m([[w2 * u2, w1 * w2], [u1 * u2, w1 * u1]])
    R1 = _m([[w2 * u2 + mt + 1, u3 + w1 * w2], [w3 + u1 * u2, w1 * u1 + m + 1]])
    Bc = _m([[0.0, -u3], [-w3, 0.0]]) / t
    a = (R0[0, 0] + R0[1, 1]) / 2
    b = -(R1[0, 0] + R1[1, 1]) / 2
    extras = {"R0": R0, "R1": R1, "gauge_exponents": (a, b)}
    if traceless:
        # Y_old = x^a (x-1)^b Y_new removes the residue traces
        return LinearPair("P5-2x2-traceless", 2, (t / 2 * SIGMA3,),
                          ((0.0, 1, R0 - a * _eye(2)), (1.0, 1, -R1 - b * _eye(2))),
                          (Bc, SIGMA3 / 2), extras=extras)
    return LinearPair("P5-2x2", 2, (t / 2 * SIGMA3,), ((0.0, 1, R0), (1.0, 1, -R1)),
                      (Bc, SIGMA3 / 2), extras=extras)


def _p4_jm(s, p, tau):
    w1, w2, w3, u1, u2, u3 = s
    T = tau + p.rho
    A1 = _m([[T, I * u3], [-I * w3, -T]])
    A0 = I * _m([[w2 * u2, w1 * w2], [-u1 * u2, -w1 * u1]])
    Bc = _m([[0.0, -u3], [w3, 0.0]])
    return LinearPair("P4-JM", 2, (A1, -I * SIGMA3), ((0.0, 1, A0),), (Bc, SIGMA3),
                      extras={"A0": A0, "A1": A1})


def _p4_jm_printed(s, p, tau):
    w1, w2, w3, u1, u2, u3 = s
    T = tau + p.rho
    A0 = _m([[-w2 * u2, -w2 * w1], [u2 * u1, w1 * u1]])
    A1 = _m([[I * T, -u3], [w3, -I * T]])
    return LinearPair("P4-JM-printed", 2, (A1, SIGMA3), ((0.0, 1, A0),),
                      (A1 - I * T * SIGMA3, SIGMA3), extras={"A0": A0, "A1": A1})


def _p3_jm(s, p, t):
    W1, W2, W3, U1, U2, U3 = s
    nonzero(t, "t")
    tau = t * t
    thi = p.thetainf
    C = _m([[-thi / 2, -U3], [W3, thi / 2]])
    D = _m([[W2 * U2, W1 * W2], [U1 * U2, W1 * U1]])
    Bc = _m([[0.0, -U3], [W3, 0.0]]) / tau
    return LinearPair("P3-JM", 2, (tau / 2 * SIGMA3,), ((0.0, 1, C), (0.0, 2, -D)),
                      (2 * t * Bc, t * SIGMA3), extras={"tau": tau})


def _ny_2x2(s, p, z):
    f0, f1, f2 = s
    shift = 1.0 - p.v1
    v2, v3 = p.v2 + shift, p.v3 + shift
    X1 = _m([[0.0, 0.0], [-f1, -1.0]])
    X0 = _m([[f1, 1.0], [f0 * f1 + v2 - 1, f0 + f2]])
    Xm = _m([[1 - v2, -f2], [0.0, 1 - v3]])
    Z1 = _m([[0.0, 0.0], [f1, 1.0]])
    Z0 = _m([[f0 - z / 3, -1.0], [0.0, f1 - z / 3]])
    return LinearPair("NY-2x2", 2, (X0, X1), ((0.0, 1, Xm),), (Z0, Z1),
                      extras={"v": (1.0, v2, v3), "z_operator_printed": (Z0, -Z1)})


def _p6_gauged(s, p, t):
    B0, _ = _p6_matrices(s, p, t)
    G = _m(np.array(s[6:15], dtype=object).reshape(3, 3))
    Gi = _inv3(G)
    A0 = -_dot(Gi, _dot(_dot(_E(2), B0), G))
    At = -_dot(Gi, _dot(_dot(_E(0), B0), G))
    A1 = -_dot(Gi, _dot(_dot(_E(1), B0), G))
    return A0, At, A1, G, Gi, B0


def _p6_fuchsian(s, p, t):
    A0, At, A1, G, Gi, B0 = _p6_gauged(s, p, t)
    return LinearPair("P6-Fuchsian", 3, (), ((0.0, 1, A0), (t, 1, At), (1.0, 1, A1)),
                      (), ((t, 1, -At),), extras={"A0": A0, "At": At, "A1": A1,
                                                  "B0_hat": _dot(Gi, _dot(B0, G))})


def _p6_jm(s, p, t):
    A0, At, A1, *_ = _p6_gauged(s, p, t)
    a0, at, a1 = A0[:2, :2], At[:2, :2], A1[:2, :2]
    return LinearPair("P6-JM", 2, (), ((0.0, 1, a0), (t, 1, at), (1.0, 1, a1)),
                      (), ((t, 1, -at),), extras={"A0": a0, "At": at, "A1": a1})


def _p6_frame_field(params):
    wf = p6_w_field(params)

    def fld(t, s):
        dw = wf(t, list(s[:6]))
        _, M0 = _p6_matrices(s, params, t)
        G = np.array(s[6:15], dtype=object).reshape(3, 3)
        dG = _dot(M0, G)
        return list(dw) + list(dG.ravel())

    return fld


def _coord_field(variant):
    return lambda params: coordinate_field(variant, params)


def _reduced(kind):
    return lambda params: reduced_field(kind, params)


@dataclass(frozen=True)
class _Variant:
    build: object
    field: object
    state: str  # "wave", "coords:<variant>", "sym", "wave+frame"


VARIANTS = {
    "P6-3x3": _Variant(_p6_3x3, p6_w_field, "wave"),
    "P5-3x3": _Variant(_p5_3x3, _reduced("P5"), "wave"),
    "P4-3x3": _Variant(_p4_3x3, _reduced("P4"), "wave"),
    "P3-3x3": _Variant(_p3_3x3, _reduced("P3"), "wave"),
    "JM-P5": _Variant(_jm_p5, _coord_field("JM-P5"), "coords:JM-P5"),
    "TRUE-JM-P5": _Variant(_true_jm_p5, _coord_field("TRUE-JM-P5"), "coords:TRUE-JM-P5"),
    "NY": _Variant(_ny, _reduced("symP4"), "sym"),
    "P5-2x2": _Variant(_p5_2x2, _reduced("P5"), "wave"),
    "P5-2x2-traceless": _Variant(lambda s, p, t: _p5_2x2(s, p, t, True), _reduced("P5"), "wave"),
    "P4-JM": _Variant(_p4_jm, _reduced("P4"), "wave"),
    "P4-JM-printed": _Variant(_p4_jm_printed, _reduced("P4"), "wave"),
    "P3-JM": _Variant(_p3_jm, _reduced("P3"), "wave"),
    "NY-2x2": _Variant(_ny_2x2, _reduced("symP4"), "sym"),
    "P6-Fuchsian": _Variant(_p6_fuchsian, _p6_frame_field, "wave+frame"),
    "P6-JM": _Variant(_p6_jm, _p6_frame_field, "wave+frame"),
}

#: Variants whose compatibility reproduces their nonlinear system.
COMPATIBLE_VARIANTS = tuple(v for v in VARIANTS if v != "P4-JM-printed")


def _flat_state(variant, state):
    spec = VARIANTS[variant]
    if isinstance(state, WaveState):
        return state.flat()
    if isinstance(state, CoordState):
        names = COORD_NAMES[spec.state.split(":", 1)[1]]
        return [state.values[n] for n in names]
    if spec.state == "wave+frame" and isinstance(state, tuple) and len(state) == 2:
        w, G = state
        return list(w) + list(np.asarray(G, dtype=complex).ravel())
    return list(state)


def build_pair(variant, state, params, t) -> LinearPair:
    """Coefficient matrices of the pair ``variant`` at one point.

    Parameters
    ----------
    variant : str
        A key of :data:`VARIANTS`.
    state : WaveState, CoordState or sequence
        Amplitudes ``(w1, w2, w3, w~1, w~2, w~3)``; Painleve coordinates for
        the Jimbo-Miwa variants; ``(f0, f1, f2)`` for the symmetric P4
        variants; amplitudes followed by the 9 entries of the gauge frame
        for the gauged P6 variants.
    params : FormalMonodromies
    t : complex
        Deformation variable of the matching reduced system.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown pair variant {variant!r}")
    return VARIANTS[variant].build(_flat_state(variant, state), params, t)


def state_field(variant, params):
    """Flow ``f(t, s)`` of the state consumed by ``variant``."""
    return VARIANTS[variant].field(params)


def zero_curvature_matrix(variant, state, deriv, params, t, lam):
    """``dA/dt - dB/dlam + [A, B]`` at one point.

    ``deriv`` is the state derivative; ``None`` takes it from the matching
    flow.  For the singular-leading 3x3 P3 pair the residual is
    ``(dA/dt + A B - E dB/dlam - E B E A) N`` with ``N`` the elimination
    of the third component.
    """
    s = _flat_state(variant, state)
    d = state_field(variant, params)(t, s) if deriv is None else _flat_state(variant, deriv)
    spec = VARIANTS[variant]
    pj = spec.build([Jet(a, b) for a, b in zip(s, d)], params, Jet(t, 1.0))
    _, dA = _split(pj.A(lam))
    pair = spec.build(s, params, t)
    A = pair.A(lam)
    Bj = pair.B(Jet(lam, 1.0))
    B, dB = _split(Bj)
    if pair.lead is None:
        return dA - dB + A @ B - B @ A
    E = _numeric(pair.lead)
    N = _numeric(pair.extras["N"](lam))
    return (dA + A @ B - E @ dB - E @ B @ E @ A) @ N


def zero_curvature_residual(variant, state, deriv, params, t, lam) -> float:
    """Frobenius norm of :func:`zero_curvature_matrix`."""
    return _fro(zero_curvature_matrix(variant, state, deriv, params, t, lam))


# ---------------------------------------------------------------------------
# Laplace-image reductions
# ---------------------------------------------------------------------------

_LAPLACE = {"P5": "P5-2x2", "P4": "P4-JM", "P3": "P3-JM", "NY": "NY-2x2"}


def laplace_reduce(variant, state, params, t, traceless=False) -> LinearPair:
    """2x2 pair obtained by eliminating the third Laplace-image component.

    ``traceless`` (P5 only) applies the scalar gauge that removes the
    residue traces; the gauge exponents are in ``extras``.
    """
    if variant not in _LAPLACE:
        raise ValueError(f"no Laplace reduction for {variant!r}")
    name = _LAPLACE[variant]
    if variant == "P5" and traceless:
        name = "P5-2x2-traceless"
    return build_pair(name, state, params, t)


# ---------------------------------------------------------------------------
# P6: eigen-gauge to a Fuchsian system
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FuchsianReduction:
    t: complex
    w: np.ndarray
    G: np.ndarray
    B0_hat: np.ndarray
    eigenvalues: np.ndarray
    invariance_error: float
    third_column_max: float
    fuchsian: LinearPair
    pair: LinearPair


def p6_initial_frame(state, params, t0):
    """Eigenvector frame of ``B0`` with the zero eigenvalue last and unit determinant."""
    s = _flat_state("P6-3x3", state)[:6]
    B0, _ = _p6_matrices(s, params, t0)
    vals, V = eig_small(_numeric(B0), zero_last=True)
    scale = max(1.0, float(np.max(np.abs(vals))))
    if abs(vals[2]) > 1e-8 * scale:
        raise NonGenericState("B0 has no zero eigenvalue")
    d = np.linalg.det(V)
    return vals, V / d ** (1.0 / 3.0)


def p6_fuchsian_reduce(state, params, t_path, cfg=None, G0=None, tol=1e-10) -> FuchsianReduction:
    """Gauge the P6 Laplace-image system to Fuchsian form and truncate to 2x2.

    Parameters
    ----------
    state : WaveState or sequence of 6
        Amplitudes at the first vertex of ``t_path``; ``B0`` must have a
        zero eigenvalue there.
    t_path : ComplexPath or sequence of vertices
        Path in ``t`` avoiding 0 and 1.
    G0 : (3, 3) array, optional
        Initial frame; defaults to :func:`p6_initial_frame`.

    Raises
    ------
    DefectiveMatrix
        ``B0`` is not diagonalizable at the anchor.
    ZeroColumnViolation
        The third columns of the gauged residues exceed ``tol``.
    """
    path = t_path if isinstance(t_path, ComplexPath) else ComplexPath(list(t_path))
    t0 = path.vertices[0]
    s = _flat_state("P6-3x3", state)[:6]
    if G0 is None:
        vals, G0 = p6_initial_frame(s, params, t0)
    else:
        G0 = np.asarray(G0, dtype=complex)
        B0, _ = _p6_matrices(s, params, t0)
        vals = np.diag(np.linalg.solve(G0, _numeric(B0) @ G0))
    cfg = cfg or IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14)
    init = np.concatenate([np.asarray(s, dtype=complex), G0.ravel()])
    if len(path.vertices) > 1:
        traj = integrate_path(_p6_frame_field(params), init, path, cfg)
        fin = traj.final
    else:
        fin = init
    t1 = path.vertices[-1]
    full = list(fin)
    fuchs = _p6_fuchsian(full, params, t1)
    pair = _p6_jm(full, params, t1)
    Bh = _numeric(fuchs.extras["B0_hat"])
    inv_err = float(np.max(np.abs(Bh - np.diag(vals))))
    third = max(float(np.max(np.abs(_numeric(fuchs.extras[k])[:, 2]))) for k in ("A0", "At", "A1"))
    if third > tol:
        raise ZeroColumnViolation(f"third column of gauged residues is {third:.3e}")
    return FuchsianReduction(t1, np.asarray(fin[:6]), np.asarray(fin[6:]).reshape(3, 3), Bh,
                             np.asarray(vals), inv_err, third, fuchs, pair)


# ---------------------------------------------------------------------------
# P5: eigen-gauge chain and Okamoto kernel
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GaugeChain:
    G: np.ndarray
    H: np.ndarray
    D: np.ndarray
    mu1: complex
    mu2: complex
    m: complex
    mt: complex


def _mu_roots(s, p):
    """Roots of ``mu^2 - s mu - p``; the first has the larger real part."""
    d = jsqrt(s * s + 4 * p)
    r1, r2 = (s + d) / 2, (s - d) / 2
    a, b = value(r1), value(r2)
    if (a.real, a.imag) < (b.real, b.imag):
        r1, r2 = r2, r1
    return r1, r2


def _p5_chain(s, p, t):
    """Generic-arithmetic pieces of the eigen-gauge chain."""
    w1, w2, w3, u1, u2, u3 = s
    m, mt, th0 = p.m, p.mt, p.theta0
    sm = m + mt - t / 2
    pr = w3 * u3 + t / 2 * (m + mt + th0) - m * mt
    mu1, mu2 = _mu_roots(sm, pr)
    c1 = m * w2 - u1 * u3
    c2 = mt * u1 - w2 * w3
    G = _m([[c1 - w2 * mu1, c1 - w2 * mu2, c1],
            [c2 - u1 * mu1, c2 - u1 * mu2, c2],
            [-t / 2 * (mu2 + th0 + t / 2), -t / 2 * (mu1 + th0 + t / 2),
             -(mu1 + t / 2) * (mu2 + t / 2) - t / 2 * th0]])
    nonzero(mu1, "mu1", NonGenericState)
    nonzero(mu2, "mu2", NonGenericState)
    H = _m([[1.0, -mu2 / mu1],
            [-(2 * mu2 + t + 2 * th0) * mu1
             / (nonzero(2 * mu1 + t + 2 * th0, "2 mu1 + t + 2 theta0") * mu2), 1.0]])
    return mu1, mu2, G, H


def _p5_hats(s, p, t):
    mu1, mu2, G, H = _p5_chain(s, p, t)
    pair = _p5_3x3(s, p, t)
    B = pair.extras["B"]
    Gi = _inv3(G)
    At = [_dot(Gi, _dot(_dot(_E(0), B), G)), _dot(Gi, _dot(_dot(_E(1), B), G)),
          _dot(Gi, _dot(_dot(_E(2), B), G)) / t]
    Minf = pair.extras["Minf"]
    return mu1, mu2, G, Gi, H, B, At, Minf


def p5_d_log_ratio(state, params, t):
    """``d/dt log(D11/D22)`` of the diagonal gauge factor, and the largest
    off-diagonal entry of the diagonal connection (zero in theory).

    Derivatives of ``G`` and ``H`` come from jets along the P5 amplitude
    flow.
    """
    s = _flat_state("P5-3x3", state)
    d = reduced_field("P5", params)(t, s)
    sj = [Jet(a, b) for a, b in zip(s, d)]
    tj = Jet(t, 1.0)
    _, _, Gj, Hj = _p5_chain(sj, params, tj)
    G, dG = _split(Gj)
    H, dH = _split(Hj)
    mu1, mu2, G, Gi, H, B, At, Minf = [_numeric(x) if isinstance(x, np.ndarray) else x
                                       for x in _p5_hats(s, params, t)]
    Gi = _numeric(Gi)
    Mt = Gi @ (_numeric(Minf) @ G - dG)
    Mh = Mt[:2, :2]
    Hi = np.linalg.inv(H)
    Dinf = Hi @ (Mh @ H - dH)
    A1c = Hi @ _numeric(At[0])[:2, :2] @ H
    A2c = Hi @ _numeric(At[1])[:2, :2] @ H
    S = A1c + A2c
    rate = (Dinf[0, 0] - Dinf[1, 1]) + (S[0, 0] - S[1, 1]) / t - 0.5
    off = max(abs(Dinf[0, 1]), abs(Dinf[1, 0]))
    return complex(rate), float(off)


def p5_alt_reduce(state, params, t, d_ratio=1.0, det_tol=1e-10):
    """Eigen-gauge reduction of the 3x3 P5 pair to Jimbo-Miwa form.

    Parameters
    ----------
    state : WaveState or sequence of 6
    params : FormalMonodromies
        P5 parameters; ``m`` must make ``det B`` vanish, normally
        ``m = -(theta0 + theta1 + thetainf)/2``.
    d_ratio : complex
        ``D11/D22``; the only part of the diagonal gauge that matters.

    Returns
    -------
    chain : GaugeChain
    A0, A1 : (2, 2) arrays
    report : dict
        Residuals of the trace, determinant, diagonal-sum, eigenvalue-sum
        and block-structure identities.
    """
    s = [complex(x) for x in _flat_state("P5-3x3", state)]
    m, mt = params.m, params.mt
    mu1, mu2, G, Gi, H, B, At, _ = _p5_hats(s, params, t)
    G, Gi, H, B = _numeric(G), _numeric(Gi), _numeric(H), _numeric(B)
    scale = max(1.0, abs(mu1), abs(mu2))
    if abs(mu1 - mu2) < 1e-12 * scale:
        raise DegenerateEigenvalues("mu1 == mu2")
    nonzero(2 * mu1 + t + 2 * params.theta0, "2 mu1 + t + 2 theta0", DegenerateEigenvalues)
    gn = np.linalg.norm(G)
    if abs(np.linalg.det(G)) < det_tol * gn ** 3:
        raise NonGenericState("diagonalizing matrix is singular")
    At = [_numeric(a) for a in At]
    Ah = [a[:2, :2] for a in At]
    Hi = np.linalg.inv(H)
    D = np.diag([d_ratio, 1.0]).astype(complex)
    Di = np.linalg.inv(D)
    cA1 = Hi @ Ah[0] @ H
    cA2 = Hi @ Ah[1] @ H
    A0 = Di @ cA1 @ D - mt / 2 * np.eye(2)
    A1 = Di @ cA2 @ D - m / 2 * np.eye(2)
    th0, th1 = params.theta0, params.theta1
    w1, w2, w3, u1, u2, u3 = s
    den = (m - mt) * w2 * u1 + w2 ** 2 * w3 - u1 ** 2 * u3
    Hcheck = Hi @ (np.eye(2) / 2 + Ah[2]) @ H - np.diag([0.5, 0.0])
    sumform = Di @ Hi @ np.diag([mu1, mu2]) @ H @ D + np.diag([0.0, t / 2]) - (m + mt) / 2 * np.eye(2)
    printed_sum = np.array([[(th0 - th1) / 2, -mu2 * (2 * mu1 + 2 * th0 + t) / (2 * d_ratio * mu1)],
                            [d_ratio * mu1 * (2 * mu2 + 2 * th0 + t) / (2 * mu2), -(th0 - th1) / 2]])
    report = {
        "det_B": abs(np.linalg.det(B)),
        "mu_sum": abs(mu1 + mu2 - (m + mt - t / 2)),
        "det_G_formula": abs(np.linalg.det(G) - den * (mu2 - mu1) * mu1 * mu2),
        "diagonalization": float(np.max(np.abs(Gi @ B @ G - np.diag([mu1, mu2, 0.0])))),
        "third_columns": max(float(np.max(np.abs(a[:2, 2]))) for a in At),
        "H_diagonalizes": float(np.max(np.abs(Hcheck))),
        "det_H_formula": abs(np.linalg.det(H) - 2 * (mu1 - mu2) / (2 * mu1 + t + 2 * th0)),
        "trace_A0": abs(np.trace(A0)),
        "trace_A1": abs(np.trace(A1)),
        "det_A0": abs(np.linalg.det(A0) + mt ** 2 / 4),
        "det_A1": abs(np.linalg.det(A1) + m ** 2 / 4),
        "diag_sum": float(np.max(np.abs(np.diag(A0 + A1) + (th1 - th0) / 2 * np.array([1, -1])))),
        "sum_formula": float(np.max(np.abs(A0 + A1 - sumform))),
        "printed_sum_formula": float(np.max(np.abs(A0 + A1 - printed_sum))),
    }
    chain = GaugeChain(G, H, D, mu1, mu2, m, mt)
    return chain, A0, A1, report


@dataclass(frozen=True, eq=False)
class OkamotoKernel:
    P: np.ndarray
    Q: np.ndarray
    Dmu: np.ndarray
    hat_u: complex
    report: dict


def okamoto_kernel(state, params, t, d_ratio=1.0):
    """Kernel matrices ``P``, ``Q``, ``D_mu`` of the integral transform between
    the two 2x2 P5 pairs.

    ``P`` uses the denominator ``(m - m~) w~1 w2 + w2^2 w3 - w~1^2 w~3``,
    the value for which ``P = H^{-1} F`` holds.  ``report`` compares the
    explicit forms with their definitions.
    """
    s = [complex(x) for x in _flat_state("P5-3x3", state)]
    chain, _, _, _ = p5_alt_reduce(s, params, t, d_ratio)
    mu1, mu2, G, H = chain.mu1, chain.mu2, chain.G, chain.H
    m, mt, th0, th1 = params.m, params.mt, params.theta0, params.theta1
    w1, w2, w3, u1, u2, u3 = s
    Gi = np.linalg.inv(G)
    Hi = np.linalg.inv(H)
    F = Gi[:2, :2]
    fcol = Gi[:2, 2]
    B = _numeric(_p5_3x3(s, params, t).extras["B"])
    P_def = Hi @ F
    Q_def = Hi @ np.outer(fcol, [2 / t * B[2, 0], 2 / t * B[2, 1]])
    Dmu = np.diag([(mu2 + th1) / mu1, 1 / mu2]) / (mu1 - mu2)

    def P_of(den):
        return Dmu @ np.array([
            [-(mt * u1 - w2 * w3) / den, (m * w2 - u1 * u3) / den],
            [(mt * (th0 + m) * u1 - th0 * w2 * w3 - u1 * w3 * u3) / den,
             -(m * (th0 + mt) * w2 - th0 * u1 * u3 - w2 * w3 * u3) / den]])

    den = nonzero((m - mt) * u1 * w2 + w2 ** 2 * w3 - u1 ** 2 * u3, "denominator")
    den_printed = (m - mt) * u1 * w2 + w2 ** 2 - u1 ** 2 * u3
    P = P_of(den)
    Q = Dmu @ np.array([[0.0, 0.0], [u2, w1]])
    zz = -(mt * u1 - w2 * w3)
    y_den = mt * (th0 + m) * u1 - th0 * w2 * w3 - u1 * w3 * u3
    hat_u = -(mu2 * (mu2 + th1)) / (d_ratio * mu1) * zz / y_den
    report = {
        "P_definition": float(np.max(np.abs(P - P_def))),
        "P_printed_denominator": float(np.max(np.abs(P_of(den_printed) - P_def)))
        if den_printed != 0 else float("inf"),
        "Q_definition": float(np.max(np.abs(Q - Q_def))),
        "HP_equals_F": float(np.max(np.abs(H @ P - F))),
        "det_Dmu": abs(np.linalg.det(Dmu) - (mu2 + th1) / ((mu1 - mu2) ** 2 * mu1 * mu2)),
    }
    return OkamotoKernel(P, Q, Dmu, hat_u, report)


# ---------------------------------------------------------------------------
# P3: alternate eigen-gauge reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class P3AltReduction:
    tau: complex
    rhs: np.ndarray
    determinant: complex
    G: np.ndarray
    eigenvalues: np.ndarray
    A_hat: dict
    third_column_max: float

    def lead(self, x):
        """Diagonal matrix multiplying ``dY/dx``."""
        return np.diag([x - self.tau / 2, x + self.tau / 2, 1.0]).astype(complex)


def p3_alt_matrix(state, params):
    W1, W2, W3, U1, U2, U3 = _flat_state("P3-3x3", state)
    thi = params.thetainf
    return np.array([[1 - thi / 2, -U3, -W2], [W3, 1 + thi / 2, -U1], [U2, W1, 0.0]],
                    dtype=complex)


def p3_alt_eigenreduce(state, params, t, tol=1e-11, zero_tol=1e-9) -> P3AltReduction:
    """Diagonal-lead Laplace image of the 3x3 P3 pair and its eigen-gauge.

    The image reads ``diag(x - tau/2, x + tau/2, 1) Y' = -C Y`` with
    ``tau = t^2``; ``det C = c1 - theta0/2`` in terms of the two first
    integrals, so it is singular exactly when ``c1 = theta0/2``.

    Raises
    ------
    NonSingularRhs
        ``|det C|`` exceeds ``tol`` (relative to the matrix scale).
    """
    C = p3_alt_matrix(state, params)
    det = np.linalg.det(C)
    scale = max(1.0, float(np.max(np.abs(C)))) ** 3
    if abs(det) > tol * scale:
        raise NonSingularRhs(f"det C = {det:.3e} is not zero")
    vals, G = eig_small(C, zero_last=True)
    Gi = np.linalg.inv(G)
    A_hat = {"1": -Gi @ np.diag([1.0, 0, 0]) @ C @ G,
             "0": -Gi @ np.diag([0, 1.0, 0]) @ C @ G,
             "2": -Gi @ np.diag([0, 0, 1.0]) @ C @ G}
    third = max(float(np.max(np.abs(a[:, 2]))) for a in A_hat.values())
    if third > zero_tol:
        raise ZeroColumnViolation(f"third column of gauged matrices is {third:.3e}")
    return P3AltReduction(t * t, -C, det, G, vals, A_hat, third)


def p5_d_ratio_path(state, params, t_path, anchor=1.0, cfg=None):
    """Continue ``D11/D22`` from ``anchor`` along ``t_path`` together with the
    amplitudes; returns ``(ratio, amplitudes)`` at the last vertex."""
    path = t_path if isinstance(t_path, ComplexPath) else ComplexPath(list(t_path))
    fld = reduced_field("P5", params)

    def f(t, y):
        s = list(y[:6])
        rate, _ = p5_d_log_ratio(s, params, t)
        return list(fld(t, s)) + [rate]

    s0 = [complex(x) for x in _flat_state("P5-3x3", state)]
    init = np.array(s0 + [np.log(complex(anchor))], dtype=complex)
    fin = integrate_path(f, init, path, cfg or IntegratorConfig()).final
    return complex(np.exp(fin[6])), np.asarray(fin[:6])
