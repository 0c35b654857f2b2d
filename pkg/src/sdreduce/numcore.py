"""Grids, numerical differentiation, quadrature, root finding and ODE stepping.

Everything here works in 64-bit floating point (complex values as pairs of
doubles).  Evaluators are treated as immutable and safe for concurrent reads;
ODE stepping is sequential by contract.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BadGrid, BlowUp, NoBracket, NonFiniteSample

__all__ = [
    "Grid1",
    "Grid2",
    "DiffEstimate",
    "ScalarField2",
    "central_diff",
    "richardson",
    "rk4",
    "solve_scalar",
    "trapezoid_integrate",
]

#: default step factor for numeric differentiation of O(1) fields
DEFAULT_H0 = 1e-4
#: default number of Richardson extrapolation levels
DEFAULT_LEVELS = 2


@dataclass(frozen=True)
class Grid1:
    """Uniform 1-D grid with inclusive endpoints.

    Attributes
    ----------
    lo, hi : float
        Interval endpoints, lo < hi.
    n : int
        Number of sample points, n >= 2.
    """

    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if not (self.lo < self.hi):
            raise ValueError(f"Grid1 requires lo < hi, got [{self.lo}, {self.hi}]")
        if self.n < 2:
            raise ValueError(f"Grid1 requires n >= 2, got {self.n}")

    @property
    def h(self) -> float:
        return (self.hi - self.lo) / (self.n - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)

    def describe(self) -> str:
        return f"{self.lo}:{self.hi}:{self.n}"


@dataclass(frozen=True)
class Grid2:
    """Tensor grid built from two Grid1 axes."""

    axis1: Grid1
    axis2: Grid1

    def describe(self) -> str:
        return f"{self.axis1.describe()};{self.axis2.describe()}"


@dataclass(frozen=True)
class DiffEstimate:
    """A derivative value together with a nonnegative error bound."""

    value: object
    error_bound: float


def _eval_checked(f, u, v):
    try:
        val = f(u, v)
    except (ZeroDivisionError, OverflowError, FloatingPointError) as exc:
        raise NonFiniteSample(f"non-finite evaluation at {(u, v)}: {exc}") from exc
    if not np.all(np.isfinite(np.asarray(val))):
        raise NonFiniteSample(f"non-finite evaluation at {(u, v)}")
    return val


def _stencil(f, at, which, h):
    """Second-order central stencil for a first/second/mixed partial.

    ``which`` is one of "1", "2", "11", "22", "12", "21".  Values may be
    scalars or numpy arrays; arrays are combined entry-wise.
    """
    u, v = at
    if which == "1":
        return (_eval_checked(f, u + h, v) - _eval_checked(f, u - h, v)) / (2.0 * h)
    if which == "2":
        return (_eval_checked(f, u, v + h) - _eval_checked(f, u, v - h)) / (2.0 * h)
    if which == "11":
        return (_eval_checked(f, u + h, v) - 2.0 * _eval_checked(f, u, v)
                + _eval_checked(f, u - h, v)) / (h * h)
    if which == "22":
        return (_eval_checked(f, u, v + h) - 2.0 * _eval_checked(f, u, v)
                + _eval_checked(f, u, v - h)) / (h * h)
    if which in ("12", "21"):
        return (_eval_checked(f, u + h, v + h) - _eval_checked(f, u + h, v - h)
                - _eval_checked(f, u - h, v + h)
                + _eval_checked(f, u - h, v - h)) / (4.0 * h * h)
    raise ValueError(f"unknown partial index {which!r}")


def _max_abs(x) -> float:
    return float(np.max(np.abs(np.asarray(x))))


def central_diff(f, at, which, h) -> DiffEstimate:
    """Central-difference estimate of a partial derivative of ``f(u, v)``.

    Parameters
    ----------
    f : callable
        Evaluator of two real variables; may return scalars or arrays.
    at : (float, float)
        Evaluation point.
    which : str
        Partial index: "1", "2", "11", "22", "12" (or "21").
    h : float
        Step size, h > 0.

    Returns
    -------
    DiffEstimate
        The stencil value at step ``h`` with a Richardson-style error bound
        obtained from one extra evaluation at ``h/2``.
    """
    if not h > 0:
        raise ValueError("central_diff requires h > 0")
    d_h = _stencil(f, at, which, h)
    d_h2 = _stencil(f, at, which, h / 2.0)
    # D(h) - D(h/2) = (3/4) C h^2 for an O(h^2) stencil; the factor 2 cushions
    # the higher-order terms the two-step estimate cannot see.
    bound = 2.0 * _max_abs(np.asarray(d_h) - np.asarray(d_h2))
    return DiffEstimate(d_h, bound)


def richardson(f, at, which, h0, levels) -> DiffEstimate:
    """Richardson-extrapolated central difference.

    Builds the triangular extrapolation table on steps h0, h0/2, ...,
    h0/2**levels (error series in even powers of h, ratio 4 per level) and
    returns the highest-order entry.  The error bound is the difference
    between the last two extrapolation orders.
    """
    if levels < 1:
        raise ValueError("richardson requires levels >= 1")
    if not np.all(np.asarray(h0) > 0):
        raise ValueError("richardson requires h0 > 0")
    row = [np.asarray(_stencil(f, at, which, h0 / 2.0**k)) for k in range(levels + 1)]
    prev_best = row[0]
    for j in range(1, levels + 1):
        fac = 4.0**j
        row = [(fac * row[k + 1] - row[k]) / (fac - 1.0) for k in range(len(row) - 1)]
        if j == levels:
            bound = _max_abs(row[0] - prev_best)
            value = row[0]
        else:
            prev_best = row[0]
    value = value if value.ndim else value[()]
    return DiffEstimate(value, bound)


def rk4(rhs, t0, state0, t1, steps):
    """Classical fixed-step fourth-order Runge-Kutta integration.

    Parameters
    ----------
    rhs : callable
        Derivative function ``rhs(t, state) -> state``-like.
    t0, t1 : float
        Time span (t1 may be smaller than t0).
    state0 : array-like
        Initial state.
    steps : int
        Number of equal steps, >= 1.

    Returns
    -------
    list of (t, state)
        Trajectory including both endpoints; states are fresh arrays.

    Raises
    ------
    BlowUp
        If the state turns non-finite; carries the last finite (t, state).
    """
    if steps < 1:
        raise ValueError("rk4 requires steps >= 1")
    y = np.array(state0, dtype=np.result_type(np.asarray(state0), 1.0))
    ts = np.linspace(t0, t1, steps + 1)
    out = [(float(ts[0]), y.copy())]
    for i in range(steps):
        t = ts[i]
        h = ts[i + 1] - ts[i]
        with np.errstate(over="ignore", invalid="ignore"):
            k1 = np.asarray(rhs(t, y))
            k2 = np.asarray(rhs(t + 0.5 * h, y + 0.5 * h * k1))
            k3 = np.asarray(rhs(t + 0.5 * h, y + 0.5 * h * k2))
            k4 = np.asarray(rhs(t + h, y + h * k3))
            y_new = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y_new)):
            raise BlowUp(
                f"state turned non-finite between t={t} and t={ts[i + 1]}",
                t_last=float(t),
                state_last=y.copy(),
            )
        y = y_new
        out.append((float(ts[i + 1]), y.copy()))
    return out


def solve_scalar(g, bracket, tol, dg=None, max_iter=200) -> float:
    """Root of a scalar function inside a bracket.

    Bisection, accelerated by Newton steps when ``dg`` is supplied; every
    Newton trial is safeguarded by the current bracket so the iterate can
    never escape it.  Terminates when |g(x)| <= tol or the bracket width
    drops below tol.
    """
    a, b = float(bracket[0]), float(bracket[1])
    fa = float(g(a))
    fb = float(g(b))
    if not (np.isfinite(fa) and np.isfinite(fb)):
        raise NonFiniteSample(f"non-finite bracket values g({a})={fa}, g({b})={fb}")
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise NoBracket(f"no sign change on [{a}, {b}]: g={fa:.3g},{fb:.3g}")
    x = 0.5 * (a + b)
    for _ in range(max_iter):
        fx = float(g(x))
        if not np.isfinite(fx):
            raise NonFiniteSample(f"non-finite evaluation at {x}")
        if abs(fx) <= tol or (b - a) <= tol:
            return x
        if fa * fx <= 0.0:
            b = x
        else:
            a, fa = x, fx
        x_next = None
        if dg is not None:
            slope = float(dg(x))
            if np.isfinite(slope) and slope != 0.0:
                trial = x - fx / slope
                if a < trial < b:
                    x_next = trial
        x = x_next if x_next is not None else 0.5 * (a + b)
    return x


def trapezoid_integrate(samples) -> np.ndarray:
    """Cumulative trapezoid antiderivative of sampled values.

    ``samples`` is a sequence of (abscissa, value) pairs with strictly
    increasing abscissae.  Returns the cumulative sums aligned with the
    input, first entry exactly 0.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("samples must be a sequence of (abscissa, value) pairs")
    xs = arr[:, 0]
    fs = arr[:, 1]
    if np.any(np.diff(xs) <= 0.0):
        raise BadGrid("abscissae must be strictly increasing")
    inc = 0.5 * (fs[1:] + fs[:-1]) * np.diff(xs)
    return np.concatenate([[0.0], np.cumsum(inc)])


class ScalarField2:
    """Real- or complex-valued field of two real variables with partials to order 2.

    Backed either by closed-form partial evaluators ("exact" mode, mixed
    partials symmetric by construction) or by Richardson-extrapolated central
    differences of the value evaluator ("numeric" mode).  Instances are
    immutable after construction and safe for concurrent reads.
    """

    def __init__(self, f, *, d1=None, d2=None, d11=None, d12=None, d22=None,
                 h0=DEFAULT_H0, richardson_levels=DEFAULT_LEVELS):
        self._f = f
        exact = {"1": d1, "2": d2, "11": d11, "12": d12, "22": d22}
        have = [k for k, fn in exact.items() if fn is not None]
        if have and len(have) != 5:
            raise ValueError("exact mode needs all of d1, d2, d11, d12, d22")
        self._exact = exact if have else None
        self.h0 = float(h0)
        self.richardson_levels = int(richardson_levels)
        self.deriv_mode = "exact" if self._exact else "numeric"

    @classmethod
    def exact(cls, f, d1, d2, d11, d12, d22):
        return cls(f, d1=d1, d2=d2, d11=d11, d12=d12, d22=d22)

    @classmethod
    def numeric(cls, f, h0=DEFAULT_H0, richardson_levels=DEFAULT_LEVELS):
        return cls(f, h0=h0, richardson_levels=richardson_levels)

    def __call__(self, u, v):
        return self._f(u, v)

    value = __call__

    def _step(self, which, u, v):
        if which in ("1", "11"):
            scale = np.maximum(1.0, np.abs(u))
        elif which in ("2", "22"):
            scale = np.maximum(1.0, np.abs(v))
        else:
            scale = np.maximum(1.0, np.maximum(np.abs(u), np.abs(v)))
        h = self.h0 * scale
        # Second-order stencils divide by h^2; keep the finest extrapolation
        # step at h0 itself so roundoff stays below truncation.
        if which not in ("1", "2"):
            h = h * 2.0**self.richardson_levels
        return h

    def estimate(self, which, u, v) -> DiffEstimate:
        """Derivative with an error bound (meaningful in numeric mode)."""
        if self._exact is not None:
            key = "12" if which == "21" else which
            return DiffEstimate(self._exact[key](u, v), 0.0)
        return richardson(self._f, (u, v), which, self._step(which, u, v),
                          self.richardson_levels)

    def partial(self, which, u, v):
        return self.estimate(which, u, v).value

    def d1(self, u, v):
        return self.partial("1", u, v)

    def d2(self, u, v):
        return self.partial("2", u, v)

    def d11(self, u, v):
        return self.partial("11", u, v)

    def d12(self, u, v):
        return self.partial("12", u, v)

    def d21(self, u, v):
        return self.partial("21", u, v)

    def d22(self, u, v):
        return self.partial("22", u, v)
