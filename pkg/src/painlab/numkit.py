"""Complex-path ODE integration, dual-number jets and small dense linear algebra."""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DefectiveMatrix,
    DegenerateLeadingCoefficient,
    InsufficientSamples,
    NonFiniteRhs,
    NonUniformSpacing,
    PoleEncountered,
    StepLimitExceeded,
)

# ---------------------------------------------------------------------------
# Dual numbers
# ---------------------------------------------------------------------------


class Jet:
    """First-order dual number ``v + d*eps`` with ``eps**2 = 0``.

    Components may themselves be jets, which gives higher derivatives by
    nesting.  All arithmetic is exact, so derivatives of rational
    expressions carry no truncation error.
    """

    __slots__ = ("v", "d")
    __array_priority__ = 1000

    def __init__(self, v, d=0):
        self.v = v
        self.d = d

    def __repr__(self):
        return f"Jet({self.v!r}, {self.d!r})"

    def __add__(self, o):
        if isinstance(o, np.ndarray):
            return _each(o, lambda x: self + x)
        if isinstance(o, Jet):
            return Jet(self.v + o.v, self.d + o.d)
        return Jet(self.v + o, self.d)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.v, -self.d)

    def __pos__(self):
        return self

    def __sub__(self, o):
        if isinstance(o, np.ndarray):
            return _each(o, lambda x: self - x)
        if isinstance(o, Jet):
            return Jet(self.v - o.v, self.d - o.d)
        return Jet(self.v - o, self.d)

    def __rsub__(self, o):
        if isinstance(o, np.ndarray):
            return _each(o, lambda x: x - self)
        return Jet(o - self.v, -self.d)

    def __mul__(self, o):
        if isinstance(o, np.ndarray):
            return _each(o, lambda x: self * x)
        if isinstance(o, Jet):
            return Jet(self.v * o.v, self.v * o.d + self.d * o.v)
        return Jet(self.v * o, self.d * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, np.ndarray):
            return _each(o, lambda x: self / x)
        if isinstance(o, Jet):
            q = self.v / o.v
            return Jet(q, (self.d - q * o.d) / o.v)
        return Jet(self.v / o, self.d / o)

    def __rtruediv__(self, o):
        if isinstance(o, np.ndarray):
            return _each(o, lambda x: x / self)
        q = o / self.v
        return Jet(q, -q * self.d / self.v)

    def __pow__(self, p):
        if isinstance(p, Jet):
            return jexp(p * jlog(self))
        if isinstance(p, int) and p >= 0:
            if p == 0:
                return Jet(1.0, 0.0)
            out = self
            for _ in range(p - 1):
                out = out * self
            return out
        return Jet(jpow(self.v, p), p * jpow(self.v, p - 1) * self.d)

    def __rpow__(self, base):
        return jexp(self * cmath.log(base))

    def __abs__(self):
        return abs(value(self))

    def conjugate(self):
        return Jet(jconj(self.v), jconj(self.d))


def _each(arr, fn):
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(arr.shape):
        out[idx] = fn(arr[idx])
    return out


def value(x):
    """Strip all jet layers and return the plain number."""
    while isinstance(x, Jet):
        x = x.v
    return x


def deriv(x):
    """First derivative stored in a jet; zero for constants."""
    return x.d if isinstance(x, Jet) else 0.0


def jconj(x):
    if isinstance(x, Jet):
        return x.conjugate()
    return complex(x).conjugate()


def jexp(x):
    if isinstance(x, Jet):
        e = jexp(x.v)
        return Jet(e, e * x.d)
    return cmath.exp(x)


def jlog(x):
    if isinstance(x, Jet):
        return Jet(jlog(x.v), x.d / x.v)
    return cmath.log(x)


def jpow(x, p):
    """Principal-branch power ``exp(p Log x)``; integer powers are exact."""
    if isinstance(x, Jet):
        return x ** p
    if isinstance(p, int):
        return x ** p
    if x == 0:
        return 0.0 if complex(p).real > 0 else complex("nan")
    return cmath.exp(p * cmath.log(x))


def jsqrt(x):
    if isinstance(x, Jet):
        s = jsqrt(x.v)
        return Jet(s, x.d / (2 * s))
    return cmath.sqrt(x)


def flow_derivative(func, t, state, rhs, order=1):
    """Derivatives of ``func(t, state)`` along the flow ``state' = rhs(t, state)``.

    Returns ``[f, f', ...]`` up to ``order`` (1 or 2) using nested jets;
    ``rhs`` and ``func`` must be written with generic arithmetic.
    """
    state = list(state)
    if order == 1:
        ds = rhs(t, state)
        out = func(Jet(t, 1.0), [Jet(s, d) for s, d in zip(state, ds)])
        return [value(out), out.d if isinstance(out, Jet) else 0.0]

    def first(tt, ss):
        ds = rhs(tt, ss)
        out = func(Jet(tt, 1.0), [Jet(s, d) for s, d in zip(ss, ds)])
        return out.d if isinstance(out, Jet) else 0.0 * tt

    ds = rhs(t, state)
    j = first(Jet(t, 1.0), [Jet(s, d) for s, d in zip(state, ds)])
    f0 = func(t, state)
    if isinstance(j, Jet):
        return [f0, j.v, j.d]
    return [f0, j, 0.0]


# ---------------------------------------------------------------------------
# Paths, configuration, trajectories
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexPath:
    """Polyline in the complex plane."""

    vertices: tuple
    closed: bool = False

    def __init__(self, vertices, closed=False):
        vs = [complex(v) for v in vertices]
        if closed and (len(vs) < 2 or vs[0] != vs[-1]):
            vs.append(vs[0])
        if len(vs) < 2:
            raise ValueError("a path needs at least 2 vertices")
        for a, b in zip(vs, vs[1:]):
            if a == b:
                raise ValueError("consecutive vertices must be distinct")
        object.__setattr__(self, "vertices", tuple(vs))
        object.__setattr__(self, "closed", bool(closed))

    @classmethod
    def segment(cls, a, b):
        return cls([a, b])

    @classmethod
    def circle(cls, center, radius, segments=32, start_angle=0.0):
        """Closed polygon inscribed in a circle, starting at ``start_angle``."""
        if segments < 3:
            raise ValueError("need at least 3 segments")
        pts = [complex(center) + radius * cmath.exp(1j * (start_angle + 2 * math.pi * k / segments))
               for k in range(segments)]
        return cls(pts, closed=True)

    def reversed(self):
        return ComplexPath(self.vertices[::-1], closed=self.closed)

    def length(self):
        return sum(abs(b - a) for a, b in zip(self.vertices, self.vertices[1:]))


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    pole_guard: float = 1e8
    max_steps: int = 200000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.max_step > 0):
            raise ValueError("tolerances and max_step must be positive")
        if not self.pole_guard > 1:
            raise ValueError("pole_guard must exceed 1")
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")


@dataclass
class Trajectory:
    samples: list = field(default_factory=list)
    accepted_steps: int = 0
    rejected_steps: int = 0

    @property
    def params(self):
        return np.array([s[0] for s in self.samples])

    @property
    def states(self):
        return np.array([s[1] for s in self.samples])

    @property
    def final(self):
        return self.samples[-1][1]


# ---------------------------------------------------------------------------
# Dormand-Prince 5(4)
# ---------------------------------------------------------------------------

_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_E = (
    71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40,
)

SAFETY = 0.9
FAC_MIN = 0.2
FAC_MAX = 5.0
_ALPHA = 0.7 / 5
_BETA = 0.4 / 5


def _safe_eval(f, x, y):
    try:
        k = np.asarray(f(x, y), dtype=complex)
    except (ZeroDivisionError, OverflowError, ArithmeticError):
        return None
    if not np.all(np.isfinite(k)):
        return None
    return k


def _dopri(f, y0, vertices, rtol, atol, max_step, pole_guard, max_steps, record=None):
    """Integrate ``dy/dx = f(x, y)`` along the polyline ``vertices``.

    Returns ``(y, accepted, rejected)``; if ``record`` is a list, every
    accepted ``(x, y)`` is appended.
    """
    y = np.array(y0, dtype=complex)
    shape = y.shape
    k1 = _safe_eval(f, vertices[0], y)
    if k1 is None:
        raise NonFiniteRhs(f"non-finite right-hand side at {vertices[0]}")
    accepted = rejected = 0
    h = None
    err_old = 1e-4
    if record is not None:
        record.append((complex(vertices[0]), y.copy()))
    for a, b in zip(vertices[:-1], vertices[1:]):
        a = complex(a)
        b = complex(b)
        L = abs(b - a)
        u = (b - a) / L
        k1 = _safe_eval(f, a, y)
        if k1 is None:
            raise NonFiniteRhs(f"non-finite right-hand side at {a}")
        k1 = k1 * u
        if h is None:
            sc = atol + rtol * np.abs(y)
            d0 = math.sqrt(np.mean(np.abs(y / sc) ** 2))
            d1 = math.sqrt(np.mean(np.abs(k1 / sc) ** 2))
            h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
            h0 = min(h0, L, max_step)
            k2 = _safe_eval(f, a + h0 * u, y + h0 * k1)
            if k2 is None:
                h = h0 * 0.1
            else:
                d2 = math.sqrt(np.mean(np.abs((k2 * u - k1) / sc) ** 2)) / h0
                dm = max(d1, d2)
                h1 = max(1e-6, h0 * 1e-3) if dm <= 1e-15 else (0.01 / dm) ** 0.2
                h = min(100 * h0, h1)
        s = 0.0
        while s < L:
            if accepted + rejected >= max_steps:
                raise StepLimitExceeded(f"step limit {max_steps} reached at {a + s * u}")
            h = min(h, max_step)
            last = False
            if s + h >= L * (1 - 1e-14):
                h = L - s
                last = True
            x = a + s * u
            ks = [k1]
            ok = True
            for i in range(1, 7):
                yi = y.copy()
                for j, aij in enumerate(_A[i]):
                    if aij:
                        yi = yi + (h * aij) * ks[j]
                kk = _safe_eval(f, x + _C[i] * h * u, yi)
                if kk is None:
                    ok = False
                    break
                ks.append(kk * u)
            if not ok:
                rejected += 1
                h *= FAC_MIN
                if h < 1e-15 * max(L, 1.0):
                    raise NonFiniteRhs(f"right-hand side not finite near {x}")
                continue
            ynew = yi  # stage 7 argument equals the 5th-order solution
            errv = sum((h * e) * k for e, k in zip(_E, ks) if e)
            sc = atol + rtol * np.maximum(np.abs(y), np.abs(ynew))
            err = math.sqrt(np.mean(np.abs(errv / sc) ** 2))
            if not math.isfinite(err):
                rejected += 1
                h *= FAC_MIN
                continue
            if err <= 1.0:
                accepted += 1
                s = L if last else s + h
                y = ynew
                k1 = ks[6]
                if np.max(np.abs(y)) > pole_guard:
                    raise PoleEncountered(f"state magnitude exceeded {pole_guard:g} near {a + s * u}")
                if record is not None:
                    record.append((a + s * u if not last else b, y.copy()))
                err = max(err, 1e-10)
                fac = SAFETY * err ** (-_ALPHA) * err_old ** _BETA
                fac = min(FAC_MAX, max(FAC_MIN, fac))
                err_old = err
                if not last:
                    h *= fac
            else:
                rejected += 1
                fac = max(FAC_MIN, SAFETY * err ** (-0.2))
                h *= fac
                if h < 1e-15 * max(L, 1.0):
                    raise StepLimitExceeded(f"step size underflow near {x}")
    return y.reshape(shape), accepted, rejected


def integrate_path(rhs: Callable, initial, path: ComplexPath, cfg: IntegratorConfig | None = None) -> Trajectory:
    """Adaptive Dormand-Prince 5(4) integration of ``y' = rhs(t, y)`` along ``path``.

    Parameters
    ----------
    rhs : callable
        ``rhs(t, y)`` returning a sequence of complex derivatives.
    initial : sequence of complex
        State at the first vertex.
    path : ComplexPath
    cfg : IntegratorConfig, optional

    Returns
    -------
    Trajectory
        One sample per accepted step, including the initial point.
    """
    cfg = cfg or IntegratorConfig()
    rec = []
    y0 = np.asarray(initial, dtype=complex)
    if np.max(np.abs(y0)) > cfg.pole_guard:
        raise PoleEncountered("initial state exceeds pole guard")
    _, acc, rej = _dopri(rhs, y0, path.vertices, cfg.rel_tol, cfg.abs_tol, cfg.max_step,
                         cfg.pole_guard, cfg.max_steps, rec)
    return Trajectory(samples=rec, accepted_steps=acc, rejected_steps=rej)


def integrate_to(rhs, initial, t0, t1, cfg=None):
    """State at ``t1`` obtained by integrating along the straight segment."""
    if t1 == t0:
        return np.asarray(initial, dtype=complex).copy()
    cfg = cfg or IntegratorConfig()
    y, _, _ = _dopri(rhs, np.asarray(initial, dtype=complex), (complex(t0), complex(t1)),
                     cfg.rel_tol, cfg.abs_tol, cfg.max_step, cfg.pole_guard, cfg.max_steps)
    return y


def rk4_steps(rhs, initial, t0, h, n):
    """``n`` classical RK4 steps of size ``h``; returns the list of states."""
    y = np.asarray(initial, dtype=complex)
    out = [y.copy()]
    t = t0
    for _ in range(n):
        k1 = np.asarray(rhs(t, y), dtype=complex)
        k2 = np.asarray(rhs(t + h / 2, y + h / 2 * k1), dtype=complex)
        k3 = np.asarray(rhs(t + h / 2, y + h / 2 * k2), dtype=complex)
        k4 = np.asarray(rhs(t + h, y + h * k3), dtype=complex)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t + h
        out.append(y.copy())
    return out


def local_samples(rhs, state, t, h, n=2, stepper="dopri"):
    """States at ``t + k h`` for ``k = -n..n`` using fixed single steps from ``t``.

    Fixed tiny steps keep integration noise far below finite-difference
    truncation error, which is what derivative checks need.
    """
    fwd = _fixed_steps(rhs, state, t, h, n)
    bwd = _fixed_steps(rhs, state, t, -h, n)
    params = [t + k * h for k in range(-n, n + 1)]
    states = bwd[::-1] + fwd[1:]
    return list(zip(params, states))


def _fixed_steps(rhs, state, t, h, n):
    y = np.asarray(state, dtype=complex)
    out = [y.copy()]
    tt = t
    for _ in range(n):
        ks = [np.asarray(rhs(tt, y), dtype=complex)]
        for i in range(1, 6):
            yi = y + h * sum(aij * ks[j] for j, aij in enumerate(_A[i]) if aij)
            ks.append(np.asarray(rhs(tt + _C[i] * h, yi), dtype=complex))
        y = y + h * sum(b * k for b, k in zip(_B, ks) if b)
        tt = tt + h
        out.append(y.copy())
    return out


# ---------------------------------------------------------------------------
# Rational matrix functions and linear transport
# ---------------------------------------------------------------------------


class RationalMatrix:
    """``A(x) = sum_k P_k x^k + sum_j C_j / (x - p_j)^{n_j}``.

    Parameters
    ----------
    poly : sequence of square matrices
        Polynomial coefficients in ascending powers.
    poles : sequence of ``(location, order, coefficient)``
    """

    def __init__(self, poly=(), poles=(), dim=None):
        mats = [np.asarray(p, dtype=complex) for p in poly]
        pl = [(complex(p), int(n), np.asarray(c, dtype=complex)) for p, n, c in poles]
        if dim is None:
            dim = (mats[0] if mats else pl[0][2]).shape[0]
        self.dim = dim
        self.poly = mats
        self.poles = pl
        seen = set()
        for p, n, _ in pl:
            if (p, n) in seen:
                raise ValueError("duplicate pole term")
            seen.add((p, n))

    def __call__(self, x):
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for c in reversed(self.poly):
            out = out * x + c
        for p, n, c in self.poles:
            out = out + c / (x - p) ** n
        return out

    def residue(self, p):
        """Coefficient of ``1/(x - p)``; zero if absent."""
        for q, n, c in self.poles:
            if q == p and n == 1:
                return c
        return np.zeros((self.dim, self.dim), dtype=complex)

    def pole_locations(self):
        return sorted({p for p, _, _ in self.poles}, key=lambda z: (z.real, z.imag))

    def packed(self):
        n = self.dim
        poly = np.array(self.poly if self.poly else [np.zeros((n, n))], dtype=complex).reshape(-1, n, n)
        if self.poles:
            loc = np.array([p for p, _, _ in self.poles], dtype=complex)
            order = np.array([k for _, k, _ in self.poles], dtype=np.int64)
            coef = np.array([c for _, _, c in self.poles], dtype=complex).reshape(-1, n, n)
        else:
            loc = np.zeros(0, dtype=complex)
            order = np.zeros(0, dtype=np.int64)
            coef = np.zeros((0, n, n), dtype=complex)
        return poly, loc, order, coef


def _select_kernel():
    if os.environ.get("PAINLAB_PURE", "") not in ("", "0"):
        from . import _transport_py as mod
        return mod, "python"
    try:
        from . import _transport as mod  # compiled
        return mod, "compiled"
    except ImportError:
        from . import _transport_py as mod
        return mod, "python"


_kernel, KERNEL = _select_kernel()

_STATUS = {1: PoleEncountered, 2: StepLimitExceeded, 3: NonFiniteRhs}


def transport_rational(A: RationalMatrix, frame, path: ComplexPath, cfg: IntegratorConfig, kernel=None):
    """Transport through the rational-coefficient kernel (compiled if available)."""
    k = kernel or _kernel
    poly, loc, order, coef = A.packed()
    verts = np.array(path.vertices, dtype=complex)
    fr = np.ascontiguousarray(np.asarray(frame, dtype=complex))
    out, acc, rej, status = k.transport_rational(
        verts, poly, loc, order, coef, fr, float(cfg.rel_tol), float(cfg.abs_tol),
        float(min(cfg.max_step, 1e300)), float(cfg.pole_guard), int(cfg.max_steps))
    if status:
        raise _STATUS[status](f"transport failed with status {status}")
    return np.asarray(out)


def linear_transport(coeff, frame, path: ComplexPath, cfg: IntegratorConfig | None = None):
    """Transport a fundamental frame along ``path`` for ``Y' = A(s) Y``.

    Parameters
    ----------
    coeff : RationalMatrix or callable
        Coefficient matrix.  Rational matrices use the fast kernel.
    frame : (n, n) complex array
        Frame at the first vertex.

    Returns
    -------
    ndarray
        Frame at the last vertex.  With ``frame = I`` this is the
        connection matrix ``T``; a general frame ``F`` is mapped to ``T F``.
    """
    cfg = cfg or IntegratorConfig()
    frame = np.asarray(frame, dtype=complex)
    if isinstance(coeff, RationalMatrix):
        for p in coeff.pole_locations():
            if _dist_to_path(p, path.vertices) < 1e-12:
                raise PoleEncountered(f"path passes through singularity {p}")
        return transport_rational(coeff, frame, path, cfg)
    n = frame.shape[0]

    def f(x, y):
        return (np.asarray(coeff(x), dtype=complex) @ y.reshape(n, -1)).ravel()

    y, _, _ = _dopri(f, frame.ravel(), path.vertices, cfg.rel_tol, cfg.abs_tol, cfg.max_step,
                     cfg.pole_guard, cfg.max_steps)
    return y.reshape(frame.shape)


def _dist_to_path(p, verts):
    best = math.inf
    for a, b in zip(verts[:-1], verts[1:]):
        d = b - a
        s = ((p - a) * d.conjugate()).real / abs(d) ** 2
        s = min(1.0, max(0.0, s))
        best = min(best, abs(a + s * d - p))
    return best


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------

_FD1 = {5: ([1, -8, 0, 8, -1], 12)}
_FD2 = {5: ([-1, 16, -30, 16, -1], 12), 3: ([1, -2, 1], 1)}


def finite_difference_derivative(samples: Sequence, order: int = 1):
    """Central-difference derivative at the middle sample.

    Parameters
    ----------
    samples : sequence of ``(parameter, value)``
        At least five equally spaced samples; the centre is the middle one.
    order : {1, 2}

    Notes
    -----
    The five-point stencils are used for both orders; the first-order
    stencil is O(h^4), the second-order one is at least O(h^2).
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if len(samples) < 5:
        raise InsufficientSamples("at least 5 samples are required")
    mid = len(samples) // 2
    pts = samples[mid - 2: mid + 3]
    ts = [complex(p) for p, _ in pts]
    h = ts[1] - ts[0]
    for a, b in zip(ts, ts[1:]):
        if abs((b - a) - h) > 1e-12 * max(abs(h), 1e-300) + 1e-12 * abs(b):
            raise NonUniformSpacing("samples are not equally spaced")
    vals = [np.asarray(v, dtype=complex) for _, v in pts]
    w, den = (_FD1 if order == 1 else _FD2)[5]
    acc = sum(c * v for c, v in zip(w, vals))
    out = acc / (den * h ** order)
    return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Small dense linear algebra
# ---------------------------------------------------------------------------


def polyroot_quadratic(a, b, c):
    """Roots of ``a x^2 + b x + c`` in cancellation-free form.

    ``root1`` has the larger real part (ties: larger imaginary part).
    """
    a, b, c = complex(a), complex(b), complex(c)
    if a == 0:
        raise DegenerateLeadingCoefficient("leading coefficient vanishes")
    d = cmath.sqrt(b * b - 4 * a * c)
    if (b.conjugate() * d).real < 0:
        d = -d
    q = -(b + d) / 2
    if q == 0:
        r1 = r2 = 0j
    else:
        r1, r2 = q / a, c / q
    return tuple(sorted((r1, r2), key=lambda z: (-z.real, -z.imag)))


def _cubic_roots(c2, c1, c0):
    """Roots of ``x^3 + c2 x^2 + c1 x + c0`` with one Newton polish each."""
    p = c1 - c2 * c2 / 3
    q = 2 * c2 ** 3 / 27 - c2 * c1 / 3 + c0
    disc = (q / 2) ** 2 + (p / 3) ** 3
    sd = cmath.sqrt(disc)
    u3 = -q / 2 + sd
    if abs(-q / 2 - sd) > abs(u3):
        u3 = -q / 2 - sd
    if u3 == 0:
        roots = [0j, 0j, 0j]
    else:
        u = u3 ** (1 / 3)
        w = cmath.exp(2j * math.pi / 3)
        roots = []
        for k in range(3):
            uk = u * w ** k
            roots.append(uk - p / (3 * uk))
    out = []
    for r in roots:
        x = r - c2 / 3
        for _ in range(3):
            fx = ((x + c2) * x + c1) * x + c0
            dfx = (3 * x + 2 * c2) * x + c1
            if dfx == 0:
                break
            step = fx / dfx
            if not cmath.isfinite(step):
                break
            x -= step
        out.append(x)
    return out


def _order(vals, zero_last):
    idx = sorted(range(len(vals)), key=lambda k: (-vals[k].real, -vals[k].imag))
    if zero_last:
        z = min(range(len(vals)), key=lambda k: abs(vals[k]))
        idx.remove(z)
        idx.append(z)
    return idx


def _null_vector(M):
    """Unit-max null vector of a (numerically) singular small matrix."""
    _, _, vh = np.linalg.svd(M)
    v = vh[-1].conj()
    return v / v[np.argmax(np.abs(v))]


def eig_small(M, zero_last: bool = False):
    """Eigen-decomposition of a 2x2 or 3x3 complex matrix.

    Eigenvalues come from the closed-form characteristic polynomial roots,
    sorted by descending real part then descending imaginary part; with
    ``zero_last`` the eigenvalue closest to zero is placed last.
    Eigenvectors (columns) are scaled so their largest entry is 1.

    Raises
    ------
    DefectiveMatrix
        If the eigenvector matrix has condition number above 1e12.
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    if M.shape != (n, n) or n not in (2, 3):
        raise ValueError("eig_small expects a 2x2 or 3x3 matrix")
    if n == 2:
        tr = M[0, 0] + M[1, 1]
        det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        vals = list(polyroot_quadratic(1, -tr, det))
    else:
        tr = np.trace(M)
        c1 = (M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0] + M[0, 0] * M[2, 2] - M[0, 2] * M[2, 0]
              + M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
        det = np.linalg.det(M)
        vals = _cubic_roots(-tr, c1, -det)
    idx = _order(vals, zero_last)
    vals = np.array([vals[k] for k in idx])
    V = np.empty((n, n), dtype=complex)
    for k, lam in enumerate(vals):
        V[:, k] = _null_vector(M - lam * np.eye(n))
    if np.linalg.cond(V) > 1e12 or not np.all(np.isfinite(V)):
        raise DefectiveMatrix("eigenvector matrix is ill-conditioned")
    return vals, V


__all__ = [
    "Jet", "value", "deriv", "jexp", "jlog", "jpow", "jsqrt", "jconj", "flow_derivative",
    "ComplexPath", "IntegratorConfig", "Trajectory", "integrate_path", "integrate_to",
    "local_samples", "rk4_steps", "RationalMatrix", "linear_transport", "transport_rational",
    "finite_difference_derivative", "polyroot_quadratic", "eig_small", "KERNEL",
]
