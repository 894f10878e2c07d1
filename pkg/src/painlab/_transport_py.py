"""Pure numpy transport of ``Y' = A(x) Y`` for rational ``A``; fallback for the compiled kernel."""

from .errors import NonFiniteRhs, PoleEncountered, StepLimitExceeded


def _coeff(x, poly, loc, order, coef):
    out = poly[-1].copy()
    for k in range(poly.shape[0] - 2, -1, -1):
        out = out * x + poly[k]
    for j in range(loc.shape[0]):
        d = x - loc[j]
        if d == 0:
            raise ZeroDivisionError
        out = out + coef[j] / d ** int(order[j])
    return out


def transport_rational(vertices, poly, loc, order, coef, frame, rtol, atol, max_step,
                       pole_guard, max_steps):
    """Return ``(frame_out, accepted, rejected, status)``.

    Status codes: 0 success, 1 pole guard, 2 step limit, 3 non-finite.
    """
    from .numkit import _dopri

    n = frame.shape[0]

    def f(x, y):
        return (_coeff(x, poly, loc, order, coef) @ y.reshape(n, n)).ravel()

    try:
        y, acc, rej = _dopri(f, frame.ravel(), tuple(vertices), rtol, atol, max_step,
                             pole_guard, max_steps)
    except PoleEncountered:
        return frame, 0, 0, 1
    except StepLimitExceeded:
        return frame, 0, 0, 2
    except NonFiniteRhs:
        return frame, 0, 0, 3
    return y.reshape(n, n), acc, rej, 0
