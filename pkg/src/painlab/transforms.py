"""Backlund lattice of the fifth Painleve equation.

Gromak's transformation with explicit branch choices, the theta-level
lattice and its decomposition into generators, the Okamoto-type map,
reflections, Schlesinger shifts, and trajectory verification harnesses.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DegenerateBranch, DegenerateDenominator, ZeroDelta, nonzero
from .numkit import Jet, finite_difference_derivative, jexp, value
from .systems import (
    CoordState,
    FormalMonodromies,
    PainleveCoefficients,
    coordinate_field,
    painleve_coefficients,
    painleve_residual,
)

# ---------------------------------------------------------------------------
# Tags
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BranchChoice:
    """Signs ``(eps, eps1, eps2, eps1_hat, eps2_hat)`` fixing the square roots."""

    eps: int = 1
    eps1: int = 1
    eps2: int = 1
    eps1_hat: int = 1
    eps2_hat: int = 1

    def __post_init__(self):
        for name in ("eps", "eps1", "eps2", "eps1_hat", "eps2_hat"):
            if getattr(self, name) not in (1, -1):
                raise ValueError(f"{name} must be +1 or -1")

    def as_tuple(self):
        return (self.eps, self.eps1, self.eps2, self.eps1_hat, self.eps2_hat)

    @classmethod
    def all(cls):
        """All 32 sign tuples."""
        return [cls(*s) for s in itertools.product((1, -1), repeat=5)]


SIMPLE_TAGS = ("OKAMOTO", "R0", "R1", "RINF", "R01", "S_PP", "S_PM", "S_MP", "S_MM")
REFLECTIONS = ("R0", "R1", "RINF", "R01")
SCHLESINGER = ("S_PP", "S_PM", "S_MP", "S_MM")


@dataclass(frozen=True)
class TransformTag:
    """One lattice element; ``branch`` is set only for ``GROMAK``."""

    name: str
    branch: BranchChoice | None = None

    def __post_init__(self):
        if self.name == "GROMAK":
            if not isinstance(self.branch, BranchChoice):
                raise ValueError("GROMAK needs a BranchChoice")
        elif self.name not in SIMPLE_TAGS:
            raise ValueError(f"unknown transform {self.name!r}")
        elif self.branch is not None:
            raise ValueError(f"{self.name} takes no branch")

    @classmethod
    def gromak(cls, branch):
        return cls("GROMAK", branch)


# ---------------------------------------------------------------------------
# Gromak transformation
# ---------------------------------------------------------------------------


def _check_root(r, sq, name, tol=1e-10):
    if abs(complex(r) ** 2 - complex(sq)) > tol * (1 + abs(complex(sq))):
        raise DegenerateBranch(f"{name} is not a square root of {sq}")


def gromak_roots(theta: FormalMonodromies, branch: BranchChoice):
    """Root values ``(sqrt(2 alpha), sqrt(-2 beta), sqrt(-2 delta))`` fixed by the branch signs."""
    th0, th1, thi = theta.theta0, theta.theta1, theta.thetainf
    return (branch.eps1 * (th0 - th1 + thi) / 2, branch.eps2 * (th0 - th1 - thi) / 2,
            complex(branch.eps))


def _hat_coefficients(gamma, roots):
    A, B, E = roots
    nonzero(E, "sqrt(-2 delta)", ZeroDelta)
    ah = (gamma / E + 1 - B - A) / 2
    bh = (gamma / E - 1 + B + A) / 2
    return PainleveCoefficients(ah * ah / 2, -bh * bh / 2, E * (B - A), -E * E / 2)


def gromak_backlund(t, y, y1, coeffs: PainleveCoefficients, roots, coeff_roots=None):
    """Gromak's Backlund transformation of P5.

    Parameters
    ----------
    t, y, y1 : complex or Jet
        Point and first derivative of a P5 solution.
    coeffs : PainleveCoefficients
    roots : (A, B, E)
        Chosen values of ``sqrt(2 alpha)``, ``sqrt(-2 beta)``, ``sqrt(-2 delta)``;
        used verbatim in both the solution map and the coefficient map.
    coeff_roots : (A, B, E), optional
        Roots for the coefficient map only.  Supplying values that differ
        from ``roots`` breaks the same-branch requirement on purpose.

    Returns
    -------
    (y_hat, PainleveCoefficients)
    """
    a, b, g, d = coeffs.as_tuple()
    if d == 0:
        raise ZeroDelta("delta must be nonzero")
    A, B, E = roots
    cr = roots if coeff_roots is None else coeff_roots
    for rr in {tuple(roots), tuple(cr)}:
        _check_root(rr[0], 2 * a, "sqrt(2 alpha)")
        _check_root(rr[1], -2 * b, "sqrt(-2 beta)")
        _check_root(rr[2], -2 * d, "sqrt(-2 delta)")
    den = t * y1 - A * y * y + (A - B + t * E) * y + B
    nonzero(den, "t y' - A y^2 + (A - B + t E) y + B", DegenerateDenominator)
    y_hat = 1 - 2 * E * t * y / den
    return y_hat, _hat_coefficients(g, cr)


# ---------------------------------------------------------------------------
# Theta-level maps as exact affine transformations
# ---------------------------------------------------------------------------

_F = Fraction
_H = Fraction(1, 2)


def _aff(rows, shift=(0, 0, 0)):
    return (tuple(tuple(_F(x) for x in r) for r in rows), tuple(_F(x) for x in shift))


_ID = ((1, 0, 0), (0, 1, 0), (0, 0, 1))

GENERATORS = {
    "S_PP": _aff(_ID, (1, 0, 1)),
    "S_PM": _aff(_ID, (-1, 0, 1)),
    "S_MP": _aff(_ID, (1, 0, -1)),
    "S_MM": _aff(_ID, (-1, 0, -1)),
    "R0": _aff(((-1, 0, 0), (0, 1, 0), (0, 0, 1))),
    "R1": _aff(((1, 0, 0), (0, -1, 0), (0, 0, 1))),
    "RINF": _aff(((1, 0, 0), (0, 1, 0), (0, 0, -1))),
    "R01": _aff(((0, 1, 0), (1, 0, 0), (0, 0, 1))),
    "OKAMOTO": _aff(((_H, _H, -_H), (_H, _H, _H), (-1, 1, 0))),
}
"""Affine maps ``theta -> L theta + c`` on ``(theta0, theta1, thetainf)``.

``S_ab`` shifts ``thetainf`` by ``a`` and ``theta0`` by ``b``.
"""


def compose(f, g):
    """Affine map ``f o g`` (``g`` first)."""
    (Lf, cf), (Lg, cg) = f, g
    L = tuple(tuple(sum(Lf[i][k] * Lg[k][j] for k in range(3)) for j in range(3)) for i in range(3))
    c = tuple(sum(Lf[i][k] * cg[k] for k in range(3)) + cf[i] for i in range(3))
    return (L, c)


def word_map(word):
    """Affine map of a word; ``word[0]`` acts first."""
    m = _aff(_ID)
    for name in word:
        m = compose(GENERATORS[name], m)
    return m


def apply_affine(m, theta):
    L, c = m
    v = [theta.theta0, theta.theta1, theta.thetainf]
    out = [sum(complex(L[i][k]) * v[k] for k in range(3)) + complex(c[i]) for i in range(3)]
    return FormalMonodromies.p5(*out)


def apply_word(word, theta):
    return apply_affine(word_map(word), theta)


def lattice_affine(branch: BranchChoice):
    """Exact affine map of the theta lattice for one branch tuple."""
    e, e1, e2, h1, h2 = (Fraction(x) for x in branch.as_tuple())
    # bracket 1 - (e1+e2)/2 (th0-th1) - (e1-e2)/2 thinf, and gamma = 1 - th0 - th1
    br = ((-(e1 + e2) / 2, (e1 + e2) / 2, -(e1 - e2) / 2), 1)
    gm = ((-1, -1, 0), 1)

    def lin(a, u, b, v):
        return (tuple(a * u[0][k] + b * v[0][k] for k in range(3)), a * u[1] + b * v[1])

    inf = lin(e * (h1 - h2) / 2, gm, (h1 + h2) / 2, br)
    dif = lin(e * (h1 + h2) / 2, gm, (h1 - h2) / 2, br)
    sm = ((e * (e1 - e2) / 2, -e * (e1 - e2) / 2, e * (e1 + e2) / 2), 1)
    th0 = (tuple((sm[0][k] + dif[0][k]) / 2 for k in range(3)), (sm[1] + dif[1]) / 2)
    th1 = (tuple((sm[0][k] - dif[0][k]) / 2 for k in range(3)), (sm[1] - dif[1]) / 2)
    rows = (th0[0], th1[0], inf[0])
    return (tuple(tuple(_F(x) for x in r) for r in rows), (_F(th0[1]), _F(th1[1]), _F(inf[1])))


def affine_det(m):
    L = m[0]
    return (L[0][0] * (L[1][1] * L[2][2] - L[1][2] * L[2][1])
            - L[0][1] * (L[1][0] * L[2][2] - L[1][2] * L[2][0])
            + L[0][2] * (L[1][0] * L[2][1] - L[1][1] * L[2][0]))


def theta_lattice(theta: FormalMonodromies, branch: BranchChoice) -> FormalMonodromies:
    """Hatted exponents induced by Gromak's map for one branch tuple."""
    th0, th1, thi = theta.theta0, theta.theta1, theta.thetainf
    e, e1, e2, h1, h2 = branch.as_tuple()
    gam = 1 - th0 - th1
    br = 1 - (e1 + e2) / 2 * (th0 - th1) - (e1 - e2) / 2 * thi
    inf = e * (h1 - h2) / 2 * gam + (h1 + h2) / 2 * br
    dif = e * (h1 + h2) / 2 * gam + (h1 - h2) / 2 * br
    sm = 1 + e * ((e1 - e2) / 2 * (th0 - th1) + (e1 + e2) / 2 * thi)
    return FormalMonodromies.p5((sm + dif) / 2, (sm - dif) / 2, inf)


def schlesinger_theta(tag, theta: FormalMonodromies) -> FormalMonodromies:
    """Schlesinger shift of ``thetainf`` and ``theta0`` by one unit each."""
    if tag not in SCHLESINGER:
        raise ValueError(f"not a Schlesinger tag: {tag!r}")
    return apply_word((tag,), theta)


_LINEAR = ("R0", "R1", "RINF", "R01", "OKAMOTO")


@lru_cache(maxsize=1)
def _linear_words():
    """Shortest word for every element of the finite linear group."""
    start = _aff(_ID)
    seen = {start: ()}
    queue = deque([start])
    while queue:
        m = queue.popleft()
        for n in _LINEAR:
            nm = compose(GENERATORS[n], m)
            if nm not in seen:
                seen[nm] = seen[m] + (n,)
                queue.append(nm)
    return seen


@lru_cache(maxsize=1)
def _translation_words(bound=3):
    """Shortest words for pure translations, built from conjugated shifts."""
    lin = _linear_words()
    moves = {}
    for m, w in lin.items():
        inv = next(v for k, v in lin.items() if compose(k, m)[0] == _aff(_ID)[0])
        for s in SCHLESINGER:
            word = w + (s,) + inv
            c = word_map(word)[1]
            if c not in moves or len(word) < len(moves[c]):
                moves[c] = word
    zero = (_F(0),) * 3
    seen = {zero: ()}
    queue = deque([zero])
    while queue:
        c = queue.popleft()
        for d, w in moves.items():
            nc = tuple(a + b for a, b in zip(c, d))
            if nc in seen or max(abs(x) for x in nc) > bound:
                continue
            seen[nc] = seen[c] + w
            queue.append(nc)
    return seen


def decompose(target):
    """Generator word realizing an affine theta map.

    ``target`` is a :class:`BranchChoice` or an affine map.  Returns a
    tuple of generator names, first-acting first: a word for the linear
    part followed by conjugated Schlesinger shifts for the translation.

    Raises
    ------
    LookupError
        If the linear part is outside the group or the translation is
        out of reach.
    """
    m = lattice_affine(target) if isinstance(target, BranchChoice) else target
    lin = _linear_words()
    key = (m[0], (_F(0),) * 3)
    if key not in lin:
        raise LookupError("linear part is not generated by the reflections")
    tr = _translation_words()
    if m[1] not in tr:
        raise LookupError("translation out of reach")
    return lin[key] + tr[m[1]]


# ---------------------------------------------------------------------------
# Nonlinear actions on (y, z, u)
# ---------------------------------------------------------------------------


def _yzu(coords):
    v = coords.values if isinstance(coords, CoordState) else coords
    return v["y"], v["z"], v.get("u")


def okamoto_p5(coords, theta: FormalMonodromies, t, dlogu=None):
    """Okamoto-type transformation of the (y, z, u) system.

    Parameters
    ----------
    coords : CoordState or mapping with ``y`` and ``z``
    theta : FormalMonodromies
    t : complex
    dlogu : complex, optional
        ``d log u / dt``; defaults to the value implied by the flow.

    Returns
    -------
    (CoordState, FormalMonodromies, PainleveCoefficients)
        The state carries ``y``, ``z`` and ``dlogu``, the logarithmic
        derivative of the transformed ``u``.
    """
    y, z, _ = _yzu(coords)
    a1, a2 = theta.a1, theta.a2
    d = nonzero(z + a1, "z + (theta0+theta1+thetainf)/2", DegenerateDenominator)
    if dlogu is None:
        nonzero(t, "t")
        nonzero(y, "y")
        dlogu = (-2 * z - theta.theta0 + y * (z + a2) + (z + a1) / y) / t
    nonzero(t, "t")
    out = {"y": y * z / d, "z": z + a2, "dlogu": dlogu - a2 * (y + 1) / t}
    th = FormalMonodromies.p5((theta.theta0 + theta.theta1 - theta.thetainf) / 2,
                              -(theta.theta0 + theta.theta1 + theta.thetainf) / 2,
                              theta.theta1 - theta.theta0)
    return CoordState("C40-P5", out), th, painleve_coefficients(th)


def reflection(tag, coords, theta: FormalMonodromies, t):
    """Nonlinear action of ``R0``, ``R1``, ``RINF`` or ``R01``.

    Returns ``(CoordState, FormalMonodromies, t_hat)``; ``u`` is mapped
    when present in ``coords``.
    """
    y, z, u = _yzu(coords)
    th0, th1, thi = theta.theta0, theta.theta1, theta.thetainf
    a1, a2 = theta.a1, theta.a2
    if tag == "R0":
        d = nonzero(z + th0, "z + theta0", DegenerateDenominator)
        out = {"y": y * z / d, "z": d}
        if u is not None:
            out["u"] = u * d / nonzero(z, "z", DegenerateDenominator)
        return CoordState("C40-P5", out), FormalMonodromies.p5(-th0, th1, thi), t
    if tag == "R1":
        d = nonzero(z + a1, "z + (theta0+theta1+thetainf)/2", DegenerateDenominator)
        out = {"y": y * (z + a2) / d, "z": z}
        if u is not None:
            out["u"] = u
        return CoordState("C40-P5", out), FormalMonodromies.p5(th0, -th1, thi), t
    if tag == "RINF":
        out = {"y": 1 / nonzero(y, "y", DegenerateDenominator), "z": -z - th0}
        if u is not None:
            out["u"] = 1 / nonzero(u, "u", DegenerateDenominator)
        return CoordState("C40-P5", out), FormalMonodromies.p5(th0, th1, -thi), -t
    if tag == "R01":
        out = {"y": 1 / nonzero(y, "y", DegenerateDenominator), "z": -z - a1}
        if u is not None:
            out["u"] = jexp(-t) * y * u
        return CoordState("C40-P5", out), FormalMonodromies.p5(th1, th0, thi), -t
    raise ValueError(f"not a reflection: {tag!r}")


# ---------------------------------------------------------------------------
# Verification along trajectories
# ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    transform: str
    residuals: list = field(default_factory=list)
    tolerance: float = 0.0
    samples: int = 0

    @property
    def max_residual(self):
        return max(self.residuals) if self.residuals else 0.0

    @property
    def mean_residual(self):
        return float(np.mean(self.residuals)) if self.residuals else 0.0

    @property
    def passed(self):
        return bool(self.residuals) and self.max_residual <= self.tolerance

    @property
    def status(self):
        return "PASS" if self.passed else "FAIL"


def _c40_rhs(theta, t, s):
    return coordinate_field("C40-P5", theta)(t, s)


def _yzu_residual(tag, theta, t, y, z, u):
    """Chain-rule residual of one transformed (y, z, u) sample."""
    f = _c40_rhs(theta, t, [y, z, u])
    tj = Jet(t, 1.0)
    yj, zj, uj = Jet(y, f[0]), Jet(z, f[1]), Jet(u, f[2])
    st = {"y": yj, "z": zj, "u": uj}
    if tag is None:
        hat, th_h, s = CoordState("C40-P5", st), theta, 1
    elif tag == "OKAMOTO":
        hat, th_h, _ = okamoto_p5(st, theta, tj, Jet(f[2] / u, 0.0))
        s = 1
    else:
        hat, th_h, th_t = reflection(tag, st, theta, tj)
        s = -1 if tag in ("RINF", "R01") else 1
    yh, zh = hat["y"], hat["z"]
    g = _c40_rhs(th_h, s * t, [value(yh), value(zh), 1.0])
    res = [s * yh.d - g[0], s * zh.d - g[1]]
    if tag == "OKAMOTO":
        res.append(value(hat["dlogu"]) - g[2])
    elif "u" in hat.values:
        uh = hat["u"]
        res.append(s * uh.d / uh.v - g[2])
    return max(abs(complex(r)) for r in res)


def _samples(trajectory):
    if hasattr(trajectory, "samples"):
        return list(trajectory.samples)
    return list(trajectory)


def verify_on_trajectory(transform, trajectory, theta: FormalMonodromies, tolerance,
                         coeff_roots=None):
    """Residual of the target equation for a transformed trajectory.

    Parameters
    ----------
    transform : TransformTag, tag name or None
        ``None`` is the identity.  ``GROMAK`` acts on P5 samples
        ``(t, (y, y'))`` that must be equally spaced; its residual is a
        five-point finite-difference P5 residual.  All other tags act on
        ``(t, (y, z, u))`` samples of the (y, z, u) system and use exact
        chain-rule derivatives.
    trajectory : Trajectory or sequence of ``(t, state)``
    theta : FormalMonodromies
    tolerance : float
    coeff_roots : (A, B, E), optional
        Passed to :func:`gromak_backlund` for the coefficient map.
    """
    if isinstance(transform, str):
        transform = TransformTag(transform)
    samples = _samples(trajectory)
    name = "IDENTITY" if transform is None else transform.name
    rep = VerificationReport(name, tolerance=tolerance, samples=len(samples))
    if name == "GROMAK":
        br = transform.branch
        roots = gromak_roots(theta, br)
        coeffs = painleve_coefficients(theta)
        vals, chat = [], None
        for t, s in samples:
            yh, chat = gromak_backlund(t, s[0], s[1], coeffs, roots, coeff_roots)
            vals.append((t, yh))
        for k in range(2, len(vals) - 2):
            win = vals[k - 2:k + 3]
            d1 = finite_difference_derivative(win, 1)
            d2 = finite_difference_derivative(win, 2)
            t, yh = vals[k]
            r = painleve_residual("P5", chat, t, yh, d1, d2)
            rep.residuals.append(abs(r))
        return rep
    if name in SCHLESINGER:
        raise ValueError("Schlesinger shifts act on exponents only")
    tag = None if transform is None else name
    for t, s in samples:
        y, z, u = (complex(x) for x in s[:3])
        rep.residuals.append(_yzu_residual(tag, theta, complex(t), y, z, u))
    return rep
