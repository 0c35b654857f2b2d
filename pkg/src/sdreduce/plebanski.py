"""The Plebanski (second heavenly) equation on the 4-D complex chart and its
spherically symmetric scalar reduction.

The full equation for a scalar P(y, ybar, z, zbar) is

    P_yyb + P_zzb = P_yy P_zz - P_yz^2 .

The spherical substitution P = ybar^{-2} p(x, t) with

    x = y*ybar + ((z + zbar)/2)^2 ,   t = (z - zbar)/(2i)

collapses it to a scalar equation for p(x, t); shifting p by x^2/2 turns that
into a nonhomogeneous Monge-Ampere equation.  The module provides residual
evaluators for all three equations, the lift, and a least-squares oracle for
the proportionality constant between the full and reduced residuals.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import AnsatzSingular
from .numcore import ScalarField2, richardson
from .testfields import random_scalar_field2

__all__ = [
    "Point4C",
    "PlebanskiField",
    "plebanski_residual",
    "lift_p_to_P",
    "reduced_plebanski_residual",
    "monge_ampere_residual",
    "shift_map",
    "unshift_map",
    "flux_potential",
    "fit_lift_constant",
]

#: proportionality constant in the lift identity
#: plebanski_residual(lift(p)) = LIFT_CONSTANT * ybar^{-2} * reduced_residual(p)
LIFT_CONSTANT = 0.25

#: step factor for numeric differentiation on the 4-D chart (coarser than the
#: 2-D default: second derivatives of O(1) fields hit roundoff sooner)
WIRTINGER_H0 = 1e-3


@dataclass(frozen=True)
class Point4C:
    """A point of the complex (y, z) chart on the real slice.

    ybar and zbar are the honest complex conjugates; the derived invariants
    are x = |y|^2 + (Re z)^2 >= 0, r = sqrt(x) and t = Im z.
    """

    y: complex
    z: complex

    @property
    def ybar(self) -> complex:
        return complex(self.y).conjugate()

    @property
    def zbar(self) -> complex:
        return complex(self.z).conjugate()

    @property
    def x(self) -> float:
        return abs(self.y) ** 2 + complex(self.z).real ** 2

    @property
    def r(self) -> float:
        return float(np.sqrt(self.x))

    @property
    def t(self) -> float:
        return complex(self.z).imag


#: Wirtinger partials carried by a 4-D field
PARTIAL_NAMES = ("y", "yb", "z", "zb", "yy", "zz", "yz", "yyb", "zzb")


def _wirtinger_numeric(f, at: Point4C, name, h0, levels):
    """One Wirtinger partial of f(y, z) from real-coordinate stencils.

    Uses d/dy = (d/dy1 - i d/dy2)/2 on the real slice; second derivatives are
    assembled from plane stencils, mixed y-z partials from four cross
    stencils.  ``f`` may return scalars or numpy arrays.
    """
    y, z = at.y, at.z
    hy = h0 * max(1.0, abs(y))
    hz = h0 * max(1.0, abs(z))
    bump = 2.0**levels  # keep second-order stencils at or above h0

    def ric(g, which, h):
        if which not in ("1", "2"):
            h = h * bump
        return np.asarray(richardson(g, (0.0, 0.0), which, h, levels).value)

    if name in ("y", "yb", "yy", "yyb"):
        g = lambda u, v: f(y + u + 1j * v, z)
        if name == "y":
            return 0.5 * (ric(g, "1", hy) - 1j * ric(g, "2", hy))
        if name == "yb":
            return 0.5 * (ric(g, "1", hy) + 1j * ric(g, "2", hy))
        if name == "yy":
            return 0.25 * (ric(g, "11", hy) - ric(g, "22", hy) - 2j * ric(g, "12", hy))
        return 0.25 * (ric(g, "11", hy) + ric(g, "22", hy))
    if name in ("z", "zb", "zz", "zzb"):
        g = lambda u, v: f(y, z + u + 1j * v)
        if name == "z":
            return 0.5 * (ric(g, "1", hz) - 1j * ric(g, "2", hz))
        if name == "zb":
            return 0.5 * (ric(g, "1", hz) + 1j * ric(g, "2", hz))
        if name == "zz":
            return 0.25 * (ric(g, "11", hz) - ric(g, "22", hz) - 2j * ric(g, "12", hz))
        return 0.25 * (ric(g, "11", hz) + ric(g, "22", hz))
    if name == "yz":
        h = 0.5 * (hy + hz)
        r11 = ric(lambda u, v: f(y + u, z + v), "12", h)
        r22 = ric(lambda u, v: f(y + 1j * u, z + 1j * v), "12", h)
        r12 = ric(lambda u, v: f(y + u, z + 1j * v), "12", h)
        r21 = ric(lambda u, v: f(y + 1j * u, z + v), "12", h)
        return 0.25 * (r11 - r22 - 1j * (r12 + r21))
    raise ValueError(f"unknown Wirtinger partial {name!r}")


class PlebanskiField:
    """Complex scalar field on the (y, z) chart with Wirtinger partials.

    Exact mode supplies closed-form partial evaluators (Point4C -> complex);
    numeric mode derives them from the value evaluator alone.
    """

    def __init__(self, f, partials=None, h0=WIRTINGER_H0, levels=2):
        self._f = f
        self._partials = dict(partials) if partials else None
        if self._partials is not None:
            missing = set(PARTIAL_NAMES) - set(self._partials)
            if missing:
                raise ValueError(f"missing partials: {sorted(missing)}")
        self.h0 = float(h0)
        self.levels = int(levels)
        self.deriv_mode = "exact" if self._partials else "numeric"

    @classmethod
    def from_eval(cls, f, h0=WIRTINGER_H0, levels=2):
        return cls(f, h0=h0, levels=levels)

    def value(self, at: Point4C) -> complex:
        return self._f(at.y, at.z)

    def partial(self, name, at: Point4C) -> complex:
        if self._partials is not None:
            return self._partials[name](at)
        return complex(_wirtinger_numeric(self._f, at, name, self.h0, self.levels))


def plebanski_residual(P: PlebanskiField, at: Point4C) -> complex:
    """P_yyb + P_zzb - (P_yy P_zz - P_yz^2) at a point."""
    yy = P.partial("yy", at)
    zz = P.partial("zz", at)
    yz = P.partial("yz", at)
    return P.partial("yyb", at) + P.partial("zzb", at) - (yy * zz - yz * yz)


def _lift_value(p, y, z):
    if y == 0:
        raise AnsatzSingular("lifted field evaluated at y = 0")
    yb = complex(y).conjugate()
    x = abs(y) ** 2 + complex(z).real ** 2
    t = complex(z).imag
    return p(x, t) / (yb * yb)


def lift_p_to_P(p: ScalarField2, mode="exact", h0=WIRTINGER_H0, levels=2) -> PlebanskiField:
    """Lift a reduced scalar p(x, t) to the 4-D field ybar^{-2} p(x, t).

    Exact mode chains p's partials through x = |y|^2 + (Re z)^2, t = Im z;
    numeric mode differentiates the lifted values directly.
    """
    f = lambda y, z: _lift_value(p, y, z)
    if mode == "numeric":
        return PlebanskiField.from_eval(f, h0=h0, levels=levels)
    if mode != "exact":
        raise ValueError(f"unknown lift mode {mode!r}")

    def parts(at: Point4C):
        y = at.y
        if y == 0:
            raise AnsatzSingular("lifted field evaluated at y = 0")
        yb = at.ybar
        s = complex(at.z).real  # (z + zbar)/2 on the real slice
        x, t = at.x, at.t
        return y, yb, s, x, t

    def d_y(at):
        y, yb, s, x, t = parts(at)
        return p.d1(x, t) / yb

    def d_yb(at):
        y, yb, s, x, t = parts(at)
        return (-2.0 * p(x, t) / yb + y * p.d1(x, t)) / (yb * yb)

    def d_z(at):
        y, yb, s, x, t = parts(at)
        return (p.d1(x, t) * s + p.d2(x, t) / 2j) / (yb * yb)

    def d_zb(at):
        y, yb, s, x, t = parts(at)
        return (p.d1(x, t) * s - p.d2(x, t) / 2j) / (yb * yb)

    def d_yy(at):
        y, yb, s, x, t = parts(at)
        return p.d11(x, t)

    def d_yyb(at):
        y, yb, s, x, t = parts(at)
        return (y * yb * p.d11(x, t) - p.d1(x, t)) / (yb * yb)

    def d_zz(at):
        y, yb, s, x, t = parts(at)
        return (p.d11(x, t) * s * s + p.d12(x, t) * s / 1j
                + 0.5 * p.d1(x, t) - 0.25 * p.d22(x, t)) / (yb * yb)

    def d_zzb(at):
        y, yb, s, x, t = parts(at)
        return (p.d11(x, t) * s * s + 0.5 * p.d1(x, t) + 0.25 * p.d22(x, t)) / (yb * yb)

    def d_yz(at):
        y, yb, s, x, t = parts(at)
        return (p.d11(x, t) * s + p.d12(x, t) / 2j) / yb

    return PlebanskiField(f, partials={
        "y": d_y, "yb": d_yb, "z": d_z, "zb": d_zb, "yy": d_yy,
        "zz": d_zz, "yz": d_yz, "yyb": d_yyb, "zzb": d_zzb,
    })


def reduced_plebanski_residual(p: ScalarField2, x, t) -> float:
    """Residual of the raw reduced equation,

    p_xx p_tt - p_xt^2 = 2 p_x p_xx + 2 p_x - p_tt - 4 x p_xx .
    """
    px = p.d1(x, t)
    pxx = p.d11(x, t)
    pxt = p.d12(x, t)
    ptt = p.d22(x, t)
    return pxx * ptt - pxt * pxt - (2.0 * px * pxx + 2.0 * px - ptt - 4.0 * x * pxx)


def monge_ampere_residual(p: ScalarField2, x, t) -> float:
    """Residual of the shifted (Monge-Ampere) form,

    p_xx p_tt - p_xt^2 = 2 p_x p_xx - 6 x p_xx + 4 x .
    """
    px = p.d1(x, t)
    pxx = p.d11(x, t)
    pxt = p.d12(x, t)
    ptt = p.d22(x, t)
    return pxx * ptt - pxt * pxt - (2.0 * px * pxx - 6.0 * x * pxx + 4.0 * x)


def _shifted(p: ScalarField2, sign) -> ScalarField2:
    # p -> p + sign * x^2/2 with partials adjusted accordingly
    if p.deriv_mode == "exact":
        return ScalarField2.exact(
            lambda u, v: p(u, v) + sign * 0.5 * u * u,
            lambda u, v: p.d1(u, v) + sign * u,
            p.d2,
            lambda u, v: p.d11(u, v) + sign,
            p.d12,
            p.d22,
        )
    return ScalarField2.numeric(lambda u, v: p(u, v) + sign * 0.5 * u * u,
                                h0=p.h0, richardson_levels=p.richardson_levels)


def shift_map(p: ScalarField2) -> ScalarField2:
    """p -> p - x^2/2; maps Monge-Ampere solutions to reduced-equation solutions."""
    return _shifted(p, -1.0)


def unshift_map(p: ScalarField2) -> ScalarField2:
    """Inverse of shift_map."""
    return _shifted(p, +1.0)


def flux_potential(p: ScalarField2, x, t) -> float:
    """p_x^2 - 6 (x p_x - p) + 2 x^2: x-antiderivative of the Monge-Ampere source."""
    px = p.d1(x, t)
    return px * px - 6.0 * (x * px - p(x, t)) + 2.0 * x * x


def fit_lift_constant(trials, seed, points_per_field=3, h0=WIRTINGER_H0, levels=2):
    """Least-squares estimate of the lift proportionality constant.

    Draws ``trials`` random smooth reduced fields, lifts each one numerically
    (value-only evaluator, so the full-equation side is independent of the
    chain rule) and fits k in

        plebanski_residual(lift(p)) = k * ybar^{-2} * reduced_residual(p)

    over all sampled points.  Returns (k, samples) where samples is the
    number of contributing points.
    """
    if trials < 1:
        raise ValueError("fit_lift_constant requires trials >= 1")
    rng = np.random.default_rng(seed)
    num = 0.0 + 0.0j
    den = 0.0
    count = 0
    for _ in range(trials):
        p = random_scalar_field2(rng)
        lifted = lift_p_to_P(p, mode="numeric", h0=h0, levels=levels)
        for _ in range(points_per_field):
            rad = rng.uniform(0.6, 1.4)
            ang = rng.uniform(-np.pi, np.pi)
            y = rad * cmath.exp(1j * ang)
            z = complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
            at = Point4C(y, z)
            full = plebanski_residual(lifted, at)
            w = reduced_plebanski_residual(p, at.x, at.t) / (at.ybar ** 2)
            num += w.conjugate() * full
            den += abs(w) ** 2
            count += 1
    return num / den, count
