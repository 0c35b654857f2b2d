"""The self-dual Yang-Mills half: matrix fields, the 4-D equation, the
spherical ansatz M = ybar^{-1} m(r, t), and the reduced 2-D equations.

Matrix fields take values in the traceless complex N x N matrices (N = 2 by
default); the commutator [a, b] = ab - ba is the Lie bracket throughout.
The reduced equation is kept with a configurable commutator coefficient
kappa(r) = scale / r:

    m_rr + m_tt - kappa(r) [m_t, m_r] = 0

because the coefficient printed in the source derivation (scale = 1/(2i))
disagrees with the chain rule; the CANONICAL preset (scale = i) is the one
validated by the lift-identity oracle, and the discrepancy is reported, not
silently corrected.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import AnsatzSingular, PoleCollision
from .numcore import richardson
from .plebanski import Point4C, _wirtinger_numeric, WIRTINGER_H0
from .testfields import random_matrix_field2

__all__ = [
    "SIGMA1",
    "SIGMA2",
    "SIGMA3",
    "commutator",
    "MatrixField2",
    "MatrixField4",
    "CommutatorCoefficient",
    "sdym_residual",
    "lift_m_to_M",
    "reduced_sdym_residual",
    "chiral_residual",
    "scale_field",
    "derivative_table_check",
    "fit_lift_constants",
    "fit_chiral_equivalence",
]

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def commutator(a, b):
    return a @ b - b @ a


class MatrixField2:
    """Matrix-valued field of two real variables with partials up to order 2.

    Exact mode is assembled from scalar coefficient fields against constant
    matrices; numeric mode differentiates the matrix evaluator entry-wise
    (the stencils combine whole matrices, which is the same thing).
    """

    def __init__(self, f, *, d1=None, d2=None, d11=None, d12=None, d22=None,
                 h0=1e-4, richardson_levels=2):
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
    def from_basis(cls, pairs):
        """Field sum_k f_k(u, v) * H_k from (ScalarField2, matrix) pairs."""
        pairs = [(f, np.asarray(H, dtype=complex)) for f, H in pairs]

        def combine(getter):
            def g(u, v):
                total = 0.0
                for f, H in pairs:
                    total = total + getter(f)(u, v) * H
                return total
            return g

        return cls(
            combine(lambda f: f.value),
            d1=combine(lambda f: f.d1),
            d2=combine(lambda f: f.d2),
            d11=combine(lambda f: f.d11),
            d12=combine(lambda f: f.d12),
            d22=combine(lambda f: f.d22),
        )

    @classmethod
    def numeric(cls, f, h0=1e-4, richardson_levels=2):
        return cls(f, h0=h0, richardson_levels=richardson_levels)

    def __call__(self, u, v):
        return np.asarray(self._f(u, v), dtype=complex)

    value = __call__

    def partial(self, which, u, v):
        if self._exact is not None:
            key = "12" if which == "21" else which
            return np.asarray(self._exact[key](u, v), dtype=complex)
        h = self.h0 * max(1.0, abs(u), abs(v))
        if which not in ("1", "2"):
            h = h * 2.0**self.richardson_levels
        est = richardson(self._f, (u, v), which, h, self.richardson_levels)
        return np.asarray(est.value, dtype=complex)

    def d1(self, u, v):
        return self.partial("1", u, v)

    def d2(self, u, v):
        return self.partial("2", u, v)

    def d11(self, u, v):
        return self.partial("11", u, v)

    def d12(self, u, v):
        return self.partial("12", u, v)

    def d22(self, u, v):
        return self.partial("22", u, v)


class MatrixField4:
    """Matrix-valued field on the (y, z) chart with Wirtinger partials."""

    def __init__(self, f, partials=None, h0=WIRTINGER_H0, levels=2):
        self._f = f
        self._partials = dict(partials) if partials else None
        self.h0 = float(h0)
        self.levels = int(levels)
        self.deriv_mode = "exact" if self._partials else "numeric"

    @classmethod
    def from_eval(cls, f, h0=WIRTINGER_H0, levels=2):
        return cls(f, h0=h0, levels=levels)

    def value(self, at: Point4C):
        return np.asarray(self._f(at.y, at.z), dtype=complex)

    def partial(self, name, at: Point4C):
        if self._partials is not None:
            return np.asarray(self._partials[name](at), dtype=complex)
        return np.asarray(_wirtinger_numeric(self._f, at, name, self.h0, self.levels),
                          dtype=complex)


@dataclass(frozen=True)
class CommutatorCoefficient:
    """Coefficient of the commutator in the reduced equation, kappa(r) = value / r."""

    value: complex

    def __post_init__(self):
        if self.value == 0:
            raise ValueError("commutator coefficient must be nonzero")

    def at(self, r) -> complex:
        return self.value / r

    @classmethod
    def paper(cls):
        """The coefficient exactly as printed: kappa = 1/(2 i r)."""
        return cls(1.0 / 2.0j)

    @classmethod
    def canonical(cls):
        """The coefficient the lift identity actually produces: kappa = i / r."""
        return cls(1.0j)


#: prefactor in the matrix lift identity
#: sdym_residual(lift(m)) = LIFT_PREFACTOR * ybar^{-1} * (m_rr + m_tt - (i/r)[m_t, m_r])
LIFT_PREFACTOR = 0.25


def sdym_residual(M: MatrixField4, at: Point4C):
    """M_yyb + M_zzb - [M_y, M_z] at a point."""
    return (M.partial("yyb", at) + M.partial("zzb", at)
            - commutator(M.partial("y", at), M.partial("z", at)))


def _lift_m_value(m, y, z):
    if y == 0:
        raise AnsatzSingular("lifted field evaluated at y = 0")
    yb = complex(y).conjugate()
    r = np.sqrt(abs(y) ** 2 + complex(z).real ** 2)
    if r == 0:
        raise AnsatzSingular("lifted field evaluated at r = 0")
    return np.asarray(m(r, complex(z).imag), dtype=complex) / yb


def lift_m_to_M(m: MatrixField2, mode="exact", h0=WIRTINGER_H0, levels=2) -> MatrixField4:
    """Lift m(r, t) to the 4-D field ybar^{-1} m(r, t).

    Chain rule through r = sqrt(|y|^2 + (Re z)^2), t = Im z in exact mode;
    numeric Wirtinger differences of the lifted values otherwise.
    """
    f = lambda y, z: _lift_m_value(m, y, z)
    if mode == "numeric":
        return MatrixField4.from_eval(f, h0=h0, levels=levels)
    if mode != "exact":
        raise ValueError(f"unknown lift mode {mode!r}")

    def parts(at: Point4C):
        if at.y == 0:
            raise AnsatzSingular("lifted field evaluated at y = 0")
        r = at.r
        if r == 0:
            raise AnsatzSingular("lifted field evaluated at r = 0")
        return at.y, at.ybar, complex(at.z).real, r, at.t

    def d_y(at):
        y, yb, s, r, t = parts(at)
        return m.d1(r, t) / (2.0 * r)

    def d_yb(at):
        y, yb, s, r, t = parts(at)
        return -m(r, t) / (yb * yb) + (y / (2.0 * r * yb)) * m.d1(r, t)

    def d_z(at):
        y, yb, s, r, t = parts(at)
        return (m.d1(r, t) * s / (2.0 * r) + m.d2(r, t) / 2j) / yb

    def d_zb(at):
        y, yb, s, r, t = parts(at)
        return (m.d1(r, t) * s / (2.0 * r) - m.d2(r, t) / 2j) / yb

    def d_yyb(at):
        y, yb, s, r, t = parts(at)
        return y * (m.d11(r, t) / (4.0 * r * r) - m.d1(r, t) / (4.0 * r**3))

    def d_zzb(at):
        y, yb, s, r, t = parts(at)
        return (m.d11(r, t) * s * s / (4.0 * r * r)
                + m.d1(r, t) * (y * yb) / (4.0 * r**3)
                + m.d22(r, t) / 4.0) / yb

    def d_yy(at):
        y, yb, s, r, t = parts(at)
        # d/dy of m_r/(2r) along r_y = yb/(2r)
        return (yb / (2.0 * r)) * (m.d11(r, t) / (2.0 * r) - m.d1(r, t) / (2.0 * r * r))

    def d_zz(at):
        y, yb, s, r, t = parts(at)
        mr, mt = m.d1(r, t), m.d2(r, t)
        mrr, mrt, mtt = m.d11(r, t), m.d12(r, t), m.d22(r, t)
        d_r = s / (2.0 * r)  # r_z on the real slice
        term = (mrr * d_r + mrt / 2j) * s / (2.0 * r) \
            + mr * (0.25 / r - s * d_r / (2.0 * r * r)) \
            + (mrt * d_r + mtt / 2j) / 2j
        return term / yb

    def d_yz(at):
        y, yb, s, r, t = parts(at)
        d_r = s / (2.0 * r)
        return (m.d11(r, t) * d_r + m.d12(r, t) / 2j) / (2.0 * r) \
            - m.d1(r, t) * d_r / (2.0 * r * r)

    return MatrixField4(f, partials={
        "y": d_y, "yb": d_yb, "z": d_z, "zb": d_zb, "yy": d_yy,
        "zz": d_zz, "yz": d_yz, "yyb": d_yyb, "zzb": d_zzb,
    })


def reduced_sdym_residual(m: MatrixField2, r, t, kappa: CommutatorCoefficient):
    """m_rr + m_tt - kappa(r) [m_t, m_r]."""
    if r <= 0:
        raise AnsatzSingular(f"reduced equation needs r > 0, got {r}")
    return (m.d11(r, t) + m.d22(r, t)
            - kappa.at(r) * commutator(m.d2(r, t), m.d1(r, t)))


def chiral_residual(m: MatrixField2, x, t):
    """(xi - xibar) m_{xi xibar} - [m_xi, m_xibar] with xi = t + i x.

    Wirtinger derivatives in the (xi, xibar) pair: d_xi = (d_t - i d_x)/2,
    d_xibar = (d_t + i d_x)/2, so xi - xibar = 2 i x.
    """
    if x == 0:
        raise PoleCollision("chiral form needs x > 0 (xi != xibar)")
    mx = m.d1(x, t)
    mt = m.d2(x, t)
    m_xi = 0.5 * (mt - 1j * mx)
    m_xib = 0.5 * (mt + 1j * mx)
    m_xixib = 0.25 * (m.d22(x, t) + m.d11(x, t))
    return 2j * x * m_xixib - commutator(m_xi, m_xib)


def scale_field(m: MatrixField2, lam) -> MatrixField2:
    """lam * m; maps solutions for coefficient kappa to solutions for kappa/lam."""
    if lam == 0:
        raise ValueError("scale_field requires lam != 0")
    if m.deriv_mode == "exact":
        return MatrixField2(
            lambda u, v: lam * m(u, v),
            d1=lambda u, v: lam * m.d1(u, v),
            d2=lambda u, v: lam * m.d2(u, v),
            d11=lambda u, v: lam * m.d11(u, v),
            d12=lambda u, v: lam * m.d12(u, v),
            d22=lambda u, v: lam * m.d22(u, v),
        )
    return MatrixField2.numeric(lambda u, v: lam * m(u, v), h0=m.h0,
                                richardson_levels=m.richardson_levels)


def derivative_table_check(m: MatrixField2, at: Point4C, h0=WIRTINGER_H0, levels=2):
    """Compare the two candidate closed forms of M_yyb against numerics.

    Returns a dict with the printed form (y/4)(m_r/r)_r, the chain-rule form
    (y/(4r))(m_r/r)_r, and the numeric Wirtinger value of the lifted field.
    """
    y, r, t = at.y, at.r, at.t
    mr_over_r_r = m.d11(r, t) / r - m.d1(r, t) / (r * r)
    printed = (y / 4.0) * mr_over_r_r
    chain = (y / (4.0 * r)) * mr_over_r_r
    lifted = lift_m_to_M(m, mode="numeric", h0=h0, levels=levels)
    numeric = lifted.partial("yyb", at)
    return {"printed": printed, "chain": chain, "numeric": numeric}


def _sample_points(rng, count):
    pts = []
    for _ in range(count):
        rad = rng.uniform(0.6, 1.4)
        ang = rng.uniform(-np.pi, np.pi)
        y = rad * cmath.exp(1j * ang)
        z = complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
        pts.append(Point4C(y, z))
    return pts


def fit_lift_constants(trials, seed, points_per_field=3, n=2, h0=WIRTINGER_H0, levels=2):
    """Joint least-squares fit of the matrix lift identity.

    Model: ybar * sdym_residual(lift(m)) = a * (m_rr + m_tt) + b * [m_t, m_r]/r
    over random fields and points; the full side is numeric (value-only lift)
    so the fit is independent of the chain rule.  Returns (a, kappa_scale)
    with kappa_scale = -b/a, the point-independent part of kappa(r) = scale/r.
    """
    if trials < 1:
        raise ValueError("fit_lift_constants requires trials >= 1")
    rng = np.random.default_rng(seed)
    rows = []
    rhs = []
    n_fields = max(2, -(-trials // max(1, points_per_field)))
    for _ in range(n_fields):
        m = MatrixField2.from_basis(random_matrix_field2(rng, n=n))
        lifted = lift_m_to_M(m, mode="numeric", h0=h0, levels=levels)
        for at in _sample_points(rng, points_per_field):
            r, t = at.r, at.t
            lap = m.d11(r, t) + m.d22(r, t)
            comm = commutator(m.d2(r, t), m.d1(r, t)) / r
            full = at.ybar * sdym_residual(lifted, at)
            rows.append(np.stack([lap.ravel(), comm.ravel()], axis=1))
            rhs.append(full.ravel())
    A = np.concatenate(rows, axis=0)
    bvec = np.concatenate(rhs, axis=0)
    coeffs, *_ = np.linalg.lstsq(A, bvec, rcond=None)
    a, b = coeffs
    return a, -b / a


def fit_chiral_equivalence(trials, seed, n=2):
    """Fit mu, kappa_eff in chiral_residual = mu * (m_xx + m_tt - kappa_eff [m_t,m_x]).

    The fit runs at a fixed random point per field; mu depends on the point
    (mu = i x / 2) so the result is reported per point and averaged over the
    normalized values mu/(i x/2) and kappa_eff * x, both expected to be 1.
    """
    rng = np.random.default_rng(seed)
    mus = []
    kappas = []
    for _ in range(max(2, trials)):
        m = MatrixField2.from_basis(random_matrix_field2(rng, n=n))
        x = rng.uniform(0.5, 1.5)
        t = rng.uniform(-1.0, 1.0)
        lap = m.d11(x, t) + m.d22(x, t)
        comm = commutator(m.d2(x, t), m.d1(x, t))
        full = chiral_residual(m, x, t)
        A = np.stack([lap.ravel(), comm.ravel()], axis=1)
        coeffs, *_ = np.linalg.lstsq(A, full.ravel(), rcond=None)
        mu, b = coeffs
        mus.append(mu / (0.5j * x))
        kappas.append((-b / mu) * x)
    return np.mean(mus), np.mean(kappas)
