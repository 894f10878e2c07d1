"""Numerical monodromy of 2x2 pairs around regular singular points and
isomonodromy checks under deformation of the parameter.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    IllConditionedTransport,
    MovingPoleCollision,
    NotFirstOrderPole,
)
from .linpair import build_pair, state_field
from .numkit import ComplexPath, IntegratorConfig, RationalMatrix, eig_small, integrate_path, linear_transport

DEFAULT_CFG = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14)


@dataclass(frozen=True)
class LoopSpec:
    """Counter-clockwise polygonal circle starting and ending at ``base_point``."""

    center: complex
    radius: float
    base_point: complex | None = None
    segments: int = 32

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.segments < 8:
            raise ValueError("a loop needs at least 8 segments")
        if self.base_point is None:
            object.__setattr__(self, "base_point", self.center + self.radius)
        bp = complex(self.base_point)
        if abs(abs(bp - self.center) - self.radius) > 1e-12 * max(1.0, self.radius):
            raise ValueError("base point must lie on the circle")
        object.__setattr__(self, "base_point", bp)

    def path(self) -> ComplexPath:
        ang = cmath.phase(self.base_point - self.center)
        c = ComplexPath.circle(self.center, self.radius, self.segments, ang)
        return ComplexPath((self.base_point,) + c.vertices[1:-1] + (self.base_point,))

    def encloses(self, p):
        # inscribed polygon: the inner radius is what is guaranteed enclosed
        return abs(complex(p) - self.center) < self.radius * math.cos(math.pi / self.segments)

    def near(self, p):
        return abs(abs(complex(p) - self.center) - self.radius) <= self.radius * (1 - math.cos(math.pi / self.segments)) + 1e-12


@dataclass
class MonodromyReport:
    matrix: np.ndarray
    eigenvalues: np.ndarray
    trace: complex
    loop: LoopSpec
    condition: float
    resonant: bool = False
    expected: np.ndarray | None = None


def _coefficient(pair):
    if isinstance(pair, RationalMatrix):
        return pair
    return pair.lambda_rational()


def _singular_points(pair):
    if isinstance(pair, RationalMatrix):
        return pair.pole_locations()
    return [complex(np.real_if_close(p)) if not hasattr(p, "v") else complex(p.v)
            for p in pair.singularities()]


def _residue(pair, loc):
    if isinstance(pair, RationalMatrix):
        return pair.residue(loc)
    return np.asarray(pair.residue(loc), dtype=complex)


def _check_loop(pair, loop):
    inside = []
    for p in _singular_points(pair):
        if loop.near(p):
            raise ValueError(f"singularity {p} lies on the loop")
        if loop.encloses(p):
            inside.append(p)
    return inside


def lasso(loop: LoopSpec, base=None) -> ComplexPath:
    """Loop path, optionally preceded and followed by a straight leg from ``base``."""
    core = loop.path()
    if base is None or complex(base) == loop.base_point:
        return core
    return ComplexPath((complex(base),) + core.vertices + (complex(base),))


def local_exponents(pair, singularity):
    """Eigenvalues of the residue matrix at a first-order pole.

    Raises
    ------
    NotFirstOrderPole
        The pole at ``singularity`` has a higher-order term.
    """
    loc = complex(singularity)
    poles = pair.poles if isinstance(pair, RationalMatrix) else [
        (complex(getattr(p, "v", p)), k, c) for p, k, c in pair.lam_poles]
    for p, k, _ in poles:
        if p == loc and k > 1:
            raise NotFirstOrderPole(f"pole of order {k} at {loc}")
    return eig_small(_residue(pair, loc))[0]


def _resonant(ev, tol=1e-8):
    ev = list(ev)
    for i in range(len(ev)):
        for j in range(i + 1, len(ev)):
            d = ev[i] - ev[j]
            if abs(d.imag) < tol and abs(d.real - round(d.real)) < tol:
                return True
    return False


def monodromy_matrix(pair, loop: LoopSpec, cfg: IntegratorConfig | None = None, base=None,
                     cond_limit=1e10) -> MonodromyReport:
    """Transport the identity frame once around ``loop``.

    Parameters
    ----------
    pair : LinearPair or RationalMatrix
        Spectral coefficient ``A(x)``.
    loop : LoopSpec
    cfg : IntegratorConfig, optional
    base : complex, optional
        Common base point; the loop is then traversed as a lasso.

    Returns
    -------
    MonodromyReport
        ``expected`` holds ``exp(2 pi i spec(R))`` when exactly one first-order
        pole with a non-resonant residue ``R`` is enclosed.

    Raises
    ------
    IllConditionedTransport
        Condition number of the result exceeds ``cond_limit``.
    """
    cfg = cfg or DEFAULT_CFG
    inside = _check_loop(pair, loop)
    n = pair.dim if isinstance(pair, RationalMatrix) else pair.dimension
    M = linear_transport(_coefficient(pair), np.eye(n, dtype=complex), lasso(loop, base), cfg)
    cond = float(np.linalg.cond(M))
    if not np.isfinite(cond) or cond > cond_limit:
        raise IllConditionedTransport(f"monodromy condition number {cond:.3e}")
    ev = eig_small(M)[0]
    expected, resonant = None, False
    if len(inside) == 1:
        try:
            r = local_exponents(pair, inside[0])
        except NotFirstOrderPole:
            r = None
        if r is not None:
            resonant = _resonant(r)
            if not resonant:
                expected = np.exp(2j * np.pi * np.asarray(r))
    return MonodromyReport(M, np.asarray(ev), complex(np.trace(M)), loop, cond, resonant, expected)


def eigenvalue_mismatch(report: MonodromyReport):
    """Distance between computed and expected monodromy eigenvalues; ``None`` when skipped."""
    if report.expected is None:
        return None
    a = sorted(report.eigenvalues, key=lambda z: (round(z.real, 6), z.imag))
    rest = list(report.expected)
    err = 0.0
    for z in a:
        k = int(np.argmin([abs(z - w) for w in rest]))
        err = max(err, abs(z - rest.pop(k)))
    return err


def order_loops(loops, base):
    """Sort loops by the direction of their centres seen from ``base``.

    For a base point outside the convex hull of the centres, traversing
    the lassos in this order is homotopic to one counter-clockwise loop
    around all of them.
    """
    base = complex(base)
    mid = sum(lp.center for lp in loops) / len(loops)
    ref = cmath.phase(mid - base)
    return sorted(loops, key=lambda lp: (cmath.phase(lp.center - base) - ref + math.pi) % (2 * math.pi))


def product_monodromy(pair, loops, base, cfg=None):
    """``M_k ... M_1`` for lassos traversed in the given order from ``base``."""
    n = pair.dim if isinstance(pair, RationalMatrix) else pair.dimension
    P = np.eye(n, dtype=complex)
    for lp in loops:
        P = monodromy_matrix(pair, lp, cfg, base).matrix @ P
    return P


def infinity_monodromy(pair, base, radius, cfg=None, segments=64):
    """Monodromy around infinity: a clockwise circle about 0 through ``base``."""
    cfg = cfg or DEFAULT_CFG
    for p in _singular_points(pair):
        if abs(p) >= radius * math.cos(math.pi / segments):
            raise ValueError("radius does not enclose every finite singularity")
    loop = LoopSpec(0.0, radius, radius * cmath.exp(1j * cmath.phase(base)), segments)
    n = pair.dim if isinstance(pair, RationalMatrix) else pair.dimension
    return linear_transport(_coefficient(pair), np.eye(n, dtype=complex),
                            lasso(loop, base).reversed(), cfg)


def formal_exponents_infinity(pair):
    """Eigenvalues of ``-(sum of residues)`` for a Fuchsian coefficient.

    The loop around infinity then has eigenvalues ``exp(2 pi i e)``.
    """
    if not isinstance(pair, RationalMatrix):
        pair = pair.lambda_rational()
    if any(np.any(np.abs(c) > 0) for c in pair.poly):
        raise ValueError("coefficient has a polynomial part; infinity is irregular")
    S = sum((c for _, k, c in pair.poles if k == 1), np.zeros((pair.dim, pair.dim), dtype=complex))
    return eig_small(-S)[0]


def loop_traces(pair, loops, base, cfg=None):
    """Traces of each loop monodromy and of all pairwise products."""
    mats = [monodromy_matrix(pair, lp, cfg, base).matrix for lp in loops]
    out = [complex(np.trace(M)) for M in mats]
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            out.append(complex(np.trace(mats[j] @ mats[i])))
    return np.array(out)


@dataclass
class DriftReport:
    drift: float
    traces_start: np.ndarray
    traces_end: np.ndarray
    t0: complex
    t1: complex


def isomonodromy_drift(variant, state, params, t0, t1, loops, base=None, cfg=None,
                       state_cfg=None, frozen=False):
    """Largest change of loop trace functionals between ``t0`` and ``t1``.

    Parameters
    ----------
    variant : str
        Pair variant whose state flow is integrated from ``t0`` to ``t1``.
    state : sequence
        State consumed by :func:`painlab.linpair.build_pair` at ``t0``.
    loops : list of LoopSpec
        Fixed loops; they must avoid moving poles over the whole range.
    base : complex, optional
        Common base point; defaults to the first loop's base point.
    frozen : bool
        Keep both state and ``t`` fixed at the start; the drift then
        measures transport error only.

    Raises
    ------
    MovingPoleCollision
        A moving pole enters a loop region or crosses a loop.
    """
    cfg = cfg or DEFAULT_CFG
    state_cfg = state_cfg or IntegratorConfig(rel_tol=1e-13, abs_tol=1e-15)
    base = loops[0].base_point if base is None else base
    s0 = np.asarray(state, dtype=complex)
    if frozen or t1 == t0:
        s1 = s0
    else:
        s1 = integrate_path(state_field(variant, params), s0, ComplexPath([t0, t1]), state_cfg).final
    fixed = None
    ends = []
    for t, s in ((t0, s0), (t0 if frozen else t1, s1)):
        pair = build_pair(variant, list(s), params, t)
        pts = _singular_points(pair)
        if fixed is None:
            fixed = pts
        for p in pts:
            for lp in loops:
                if lp.near(p):
                    raise MovingPoleCollision(f"pole {p} lies on a loop")
        ends.append(pair)
    for p0, p1 in zip(_singular_points(ends[0]), _singular_points(ends[1])):
        for lp in loops:
            lo = _segment_distance(lp.center, p0, p1)
            hi = max(abs(p0 - lp.center), abs(p1 - lp.center))
            if lo <= lp.radius + 1e-12 and hi >= lp.radius * math.cos(math.pi / lp.segments) - 1e-12:
                raise MovingPoleCollision(f"pole path {p0} -> {p1} meets a loop")
    a = loop_traces(ends[0], loops, base, cfg)
    b = loop_traces(ends[1], loops, base, cfg)
    return DriftReport(float(np.max(np.abs(a - b))), a, b, complex(t0), complex(t1))


def _segment_distance(c, a, b):
    d = b - a
    if d == 0:
        return abs(c - a)
    s = min(1.0, max(0.0, ((c - a) * d.conjugate()).real / abs(d) ** 2))
    return abs(a + s * d - c)
