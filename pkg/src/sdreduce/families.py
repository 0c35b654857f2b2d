"""Closed-form solution families of the reduced alpha equation

    alpha_tt + (alpha^2/2)_yy = -8 + 6 alpha_y

and of its self-similar profile ODE, plus the symmetry transforms connecting
them and the polynomial-ansatz ODE system with its conserved first integral.

Dual "paper vs corrected" evaluations (the closed-form x-coefficient, the
sign of the forcing in the B equation) default to the corrected variant; the
printed variant stays available behind a flag and shows up as a discrepancy
entry in reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    NegativeRadicand,
    OracleAmbiguous,
    PoleAtNu2,
    TimeZero,
)
from .numcore import ScalarField2, rk4

__all__ = [
    "Profile1",
    "LinearFamilyParams",
    "TravelingWaveParams",
    "AutomodelParams",
    "PolyAnsatzState",
    "linear_alpha_field",
    "eval_linear",
    "poly_exact_alpha_field",
    "traveling_wave_profile",
    "eval_traveling_wave",
    "traveling_alpha_field",
    "traveling_ode_residual",
    "traveling_first_integral_residual",
    "nu_implicit_relation",
    "nu_parabolic",
    "nu_linear",
    "nu_sqrt",
    "nu_general",
    "nu_residual",
    "nu_shifted_residual",
    "nu_invariant_residual",
    "q_shift_transform",
    "resolve_shift_variant",
    "rescale_profile",
    "ff_transform",
    "alpha_from_nu",
    "selfsim_alpha_field",
    "closed_form_alpha",
    "closed_form_alpha_field",
    "closed_form_x_coefficient",
    "transform_alpha",
    "poly_ansatz_rhs",
    "integrate_poly_ansatz",
    "poly_alpha_residual_max",
    "select_poly_sign",
    "weierstrass_A",
    "weierstrass_trajectory",
    "first_integral",
]


class Profile1:
    """Scalar profile of one variable with exact first and second derivatives."""

    def __init__(self, f, d1, d2):
        self._f = f
        self._d1 = d1
        self._d2 = d2

    def __call__(self, xi):
        return self._f(xi)

    def d1(self, xi):
        return self._d1(xi)

    def d2(self, xi):
        return self._d2(xi)


# ---------------------------------------------------------------------------
# exact alpha(y, t) families

@dataclass(frozen=True)
class LinearFamilyParams:
    """alpha = a*y + b*t + c with slope a a root of a^2 - 6a + 8 = 0."""

    a: float
    b: float = 0.0
    c: float = 0.0

    def __post_init__(self):
        if abs(self.a * self.a - 6.0 * self.a + 8.0) > 1e-12:
            raise ValueError(f"linear family needs a in {{2, 4}}, got {self.a}")


def eval_linear(params: LinearFamilyParams, y, t):
    return params.a * y + params.b * t + params.c


def linear_alpha_field(params: LinearFamilyParams) -> ScalarField2:
    a, b, c = params.a, params.b, params.c
    zero = lambda y, t: np.zeros_like(np.asarray(y, dtype=float) + np.asarray(t, dtype=float))
    return ScalarField2.exact(
        lambda y, t: a * y + b * t + c,
        lambda y, t: a + zero(y, t),
        lambda y, t: b + zero(y, t),
        zero, zero, zero,
    )


def poly_exact_alpha_field(c1=0.0, c2=0.0) -> ScalarField2:
    """alpha = -y^2/t^2 + 2y + c1*t^2 + c2/t (exact solution, t != 0)."""

    def guard(t):
        if np.any(np.asarray(t) == 0.0):
            raise TimeZero("poly-exact family evaluated at t = 0")

    def val(y, t):
        guard(t)
        return -y * y / (t * t) + 2.0 * y + c1 * t * t + c2 / t

    def d1(y, t):
        guard(t)
        return -2.0 * y / (t * t) + 2.0

    def d2(y, t):
        guard(t)
        return 2.0 * y * y / t**3 + 2.0 * c1 * t - c2 / (t * t)

    def d11(y, t):
        guard(t)
        return -2.0 / (t * t) + 0.0 * y

    def d12(y, t):
        guard(t)
        return 4.0 * y / t**3

    def d22(y, t):
        guard(t)
        return -6.0 * y * y / t**4 + 2.0 * c1 + 2.0 * c2 / t**3

    return ScalarField2.exact(val, d1, d2, d11, d12, d22)


# ---------------------------------------------------------------------------
# traveling waves

@dataclass(frozen=True)
class TravelingWaveParams:
    """alpha = alpha(x + v t) with speed v and integration constants c1, c2."""

    v: float
    c1: float = 0.0
    c2: float = 0.0
    branch: str = "+"

    def __post_init__(self):
        if self.branch not in ("+", "-"):
            raise ValueError(f"branch must be '+' or '-', got {self.branch!r}")

    @property
    def c1tilde(self) -> float:
        return self.c2 + 8.0 * self.c1


def traveling_wave_profile(params: TravelingWaveParams) -> Profile1:
    """The wave profile as a function of xi = x + v t,

    alpha(xi) = -v^2 + [(8 xi + c1t) +- sqrt(c2 (8 xi + c1t))]/2,  c1t = c2 + 8 c1.
    """
    v2 = params.v * params.v
    c2 = params.c2
    ct = params.c1tilde
    sgn = 1.0 if params.branch == "+" else -1.0

    def rad(xi):
        s = 8.0 * xi + ct
        q = c2 * s
        if np.any(np.asarray(q) < 0.0):
            raise NegativeRadicand(f"c2*(8 xi + c1tilde) < 0 at xi={xi}")
        return s, q

    def val(xi):
        s, q = rad(xi)
        return -v2 + 0.5 * (s + sgn * np.sqrt(q))

    def d1(xi):
        s, q = rad(xi)
        if c2 == 0.0:
            return 4.0 + 0.0 * np.asarray(xi)
        return 4.0 + sgn * 2.0 * c2 / np.sqrt(q)

    def d2(xi):
        s, q = rad(xi)
        if c2 == 0.0:
            return 0.0 * np.asarray(xi)
        return -sgn * 8.0 * c2 * c2 / q**1.5

    return Profile1(val, d1, d2)


def eval_traveling_wave(params: TravelingWaveParams, x, t):
    return traveling_wave_profile(params)(x + params.v * t)


def traveling_alpha_field(params: TravelingWaveParams) -> ScalarField2:
    w = traveling_wave_profile(params)
    v = params.v
    return ScalarField2.exact(
        lambda y, t: w(y + v * t),
        lambda y, t: w.d1(y + v * t),
        lambda y, t: v * w.d1(y + v * t),
        lambda y, t: w.d2(y + v * t),
        lambda y, t: v * w.d2(y + v * t),
        lambda y, t: v * v * w.d2(y + v * t),
    )


def traveling_ode_residual(profile: Profile1, v, xi):
    """(alpha + v^2) alpha'' + alpha'^2 + 8 - 6 alpha' for a profile of xi."""
    a = profile(xi)
    a1 = profile.d1(xi)
    a2 = profile.d2(xi)
    return (a + v * v) * a2 + a1 * a1 + 8.0 - 6.0 * a1


def traveling_first_integral_residual(profile: Profile1, v, c1, xi):
    """at*at' + 8(xi + c1) - 6*at with at = alpha + v^2 (first integral)."""
    at = profile(xi) + v * v
    at1 = profile.d1(xi)
    return at * at1 + 8.0 * (xi + c1) - 6.0 * at


def nu_implicit_relation(nu, xi, c2):
    """(nu - 4)^2 xi / (nu - 2) - c2, the implicit traveling-wave relation."""
    if np.any(np.abs(np.asarray(nu) - 2.0) < 1e-14):
        raise PoleAtNu2("implicit relation has a pole at nu = 2")
    return (nu - 4.0) ** 2 * xi / (nu - 2.0) - c2


# ---------------------------------------------------------------------------
# self-similar profiles nu(xi), xi = y / t^2

def _sqrt_guard(u, what):
    if np.any(np.asarray(u) < 0.0):
        raise NegativeRadicand(f"{what} < 0")
    return np.sqrt(u)


def nu_parabolic(c) -> Profile1:
    """nu = -xi^2 + 2 xi + c."""
    return Profile1(
        lambda xi: -xi * xi + 2.0 * xi + c,
        lambda xi: -2.0 * xi + 2.0,
        lambda xi: -2.0 + 0.0 * np.asarray(xi),
    )


def nu_linear(c) -> Profile1:
    """nu = c xi - (c - 2)(c - 4)/2."""
    const = -(c - 2.0) * (c - 4.0) / 2.0
    return Profile1(
        lambda xi: c * xi + const,
        lambda xi: c + 0.0 * np.asarray(xi),
        lambda xi: 0.0 * np.asarray(xi),
    )


def nu_sqrt(c) -> Profile1:
    """nu = 4 xi + c sqrt(xi), xi > 0."""

    def val(xi):
        return 4.0 * xi + c * _sqrt_guard(xi, "xi")

    def d1(xi):
        rt = _sqrt_guard(xi, "xi")
        return 4.0 + 0.5 * c / rt

    def d2(xi):
        rt = _sqrt_guard(xi, "xi")
        return -0.25 * c / rt**3

    return Profile1(val, d1, d2)


def nu_general(c, lam) -> Profile1:
    """The two-parameter family obtained by transporting the sqrt family
    through the full symmetry; collapses to 4 xi + c sqrt(xi) at lam = 1.
    """
    if lam == 0:
        raise ValueError("nu_general requires lam != 0")

    def u_of(xi):
        return lam * (xi + 1.0 / 3.0) - 1.0 / 3.0

    def val(xi):
        u = u_of(xi)
        rt = _sqrt_guard(u, "lam*(xi + 1/3) - 1/3")
        inner = 4.0 * u + c * rt - (8.0 / 3.0) * lam * (xi + 1.0 / 3.0) + 4.0 / 9.0
        return inner / (lam * lam) + (8.0 / 3.0) * (xi + 1.0 / 3.0) - 4.0 / 9.0

    def d1(xi):
        u = u_of(xi)
        rt = _sqrt_guard(u, "lam*(xi + 1/3) - 1/3")
        return (4.0 / 3.0) / lam + 0.5 * c / (lam * rt) + 8.0 / 3.0

    def d2(xi):
        u = u_of(xi)
        rt = _sqrt_guard(u, "lam*(xi + 1/3) - 1/3")
        return -0.25 * c / rt**3

    return Profile1(val, d1, d2)


def nu_residual(profile: Profile1, xi):
    """-2(xi nu' - nu) + 4 xi^2 nu'' + nu nu'' + (nu' - 2)(nu' - 4)."""
    n = profile(xi)
    n1 = profile.d1(xi)
    n2 = profile.d2(xi)
    return -2.0 * (xi * n1 - n) + 4.0 * xi * xi * n2 + n * n2 + (n1 - 2.0) * (n1 - 4.0)


def nu_shifted_residual(profile: Profile1, xi, q):
    """Residual of the profile ODE transported by the shift with parameter q:

    -2(xi n' - n) + 4 xi^2 n'' + n n'' + n'^2 - (6 + 18 q) n'
        + (2 + 8q)(4 + 8q) + 8 q^2 .

    Reduces to nu_residual at q = 0 and to nu_invariant_residual at q = -1/3.
    """
    n = profile(xi)
    n1 = profile.d1(xi)
    n2 = profile.d2(xi)
    return (-2.0 * (xi * n1 - n) + 4.0 * xi * xi * n2 + n * n2 + n1 * n1
            - (6.0 + 18.0 * q) * n1 + (2.0 + 8.0 * q) * (4.0 + 8.0 * q) + 8.0 * q * q)


def nu_invariant_residual(profile: Profile1, xi):
    """-2(xi n' - n) + 4 xi^2 n'' + n n'' + n'^2: the scale-invariant form."""
    n = profile(xi)
    n1 = profile.d1(xi)
    n2 = profile.d2(xi)
    return -2.0 * (xi * n1 - n) + 4.0 * xi * xi * n2 + n * n2 + n1 * n1


def _shift_variant_profile(profile: Profile1, q, s1, s2) -> Profile1:
    return Profile1(
        lambda xi: profile(xi + q) + s1 * 8.0 * q * xi + s2 * 4.0 * q * q,
        lambda xi: profile.d1(xi + q) + s1 * 8.0 * q,
        lambda xi: profile.d2(xi + q),
    )


_SHIFT_VARIANT_CACHE = {}


def resolve_shift_variant(q=0.37, tol=1e-8):
    """Select the affine tail signs of the shift transform by oracle.

    Among the four candidates nu~(xi) = nu(xi + q) +- 8 q xi +- 4 q^2, exactly
    one must map profile-ODE solutions to profiles annihilated by the shifted
    residual with the same q; that variant is returned (and cached).
    """
    if q == 0:
        raise ValueError("variant probe needs q != 0 (all variants coincide)")
    key = "variant"
    if key in _SHIFT_VARIANT_CACHE:
        return _SHIFT_VARIANT_CACHE[key]
    probes = [nu_parabolic(1.0), nu_linear(3.0)]
    xis = np.linspace(0.4, 3.0, 40)
    winners = []
    for s1 in (+1.0, -1.0):
        for s2 in (+1.0, -1.0):
            worst = 0.0
            for nu in probes:
                shifted = _shift_variant_profile(nu, q, s1, s2)
                worst = max(worst, max(abs(nu_shifted_residual(shifted, x, q)) for x in xis))
            if worst <= tol:
                winners.append((s1, s2))
    if len(winners) != 1:
        raise OracleAmbiguous(f"shift-variant oracle found {len(winners)} admissible sign pairs")
    _SHIFT_VARIANT_CACHE[key] = winners[0]
    return winners[0]


def q_shift_transform(profile: Profile1, q) -> Profile1:
    """The oracle-selected shift: solutions of the profile ODE map to
    solutions of the q-shifted equation; q = -1/3 lands on the invariant form.
    """
    if q == 0:
        return profile
    s1, s2 = resolve_shift_variant()
    return _shift_variant_profile(profile, q, s1, s2)


def rescale_profile(profile: Profile1, lam) -> Profile1:
    """nu(xi) -> lam^{-2} nu(lam xi), the symmetry of the invariant form."""
    if lam == 0:
        raise ValueError("rescale_profile requires lam != 0")
    return Profile1(
        lambda xi: profile(lam * xi) / (lam * lam),
        lambda xi: profile.d1(lam * xi) / lam,
        lambda xi: profile.d2(lam * xi),
    )


def ff_transform(profile: Profile1, lam) -> Profile1:
    """Full symmetry of the profile ODE: shift to the invariant form, rescale
    by lam, shift back."""
    return q_shift_transform(rescale_profile(q_shift_transform(profile, -1.0 / 3.0), lam),
                             1.0 / 3.0)


def alpha_from_nu(profile: Profile1, x, t):
    """alpha(x, t) = t^2 nu(x / t^2)."""
    if np.any(np.asarray(t) == 0.0):
        raise TimeZero("self-similar lift evaluated at t = 0")
    return t * t * profile(x / (t * t))


def selfsim_alpha_field(profile: Profile1) -> ScalarField2:
    """alpha(y, t) = t^2 nu(y/t^2) with chain-rule partials."""

    def guard(t):
        if np.any(np.asarray(t) == 0.0):
            raise TimeZero("self-similar lift evaluated at t = 0")

    def val(y, t):
        guard(t)
        return t * t * profile(y / (t * t))

    def d1(y, t):
        guard(t)
        return profile.d1(y / (t * t))

    def d2(y, t):
        guard(t)
        xi = y / (t * t)
        return 2.0 * t * (profile(xi) - xi * profile.d1(xi))

    def d11(y, t):
        guard(t)
        return profile.d2(y / (t * t)) / (t * t)

    def d12(y, t):
        guard(t)
        xi = y / (t * t)
        return -2.0 * xi * profile.d2(xi) / t

    def d22(y, t):
        guard(t)
        xi = y / (t * t)
        return (2.0 * profile(xi) - 2.0 * xi * profile.d1(xi)
                + 4.0 * xi * xi * profile.d2(xi))

    return ScalarField2.exact(val, d1, d2, d11, d12, d22)


# ---------------------------------------------------------------------------
# the two-parameter closed form in (x, t) and its printed variant

@dataclass(frozen=True)
class AutomodelParams:
    """Self-similar family selector: kind in {parabolic, linear, sqrt, general}."""

    kind: str
    c: float = 0.0
    lam: float = 1.0

    def __post_init__(self):
        if self.kind not in ("parabolic", "linear", "sqrt", "general"):
            raise ValueError(f"unknown automodel kind {self.kind!r}")
        if self.lam == 0:
            raise ValueError("scaling parameter lam must be nonzero")

    def profile(self) -> Profile1:
        if self.kind == "parabolic":
            return nu_parabolic(self.c)
        if self.kind == "linear":
            return nu_linear(self.c)
        if self.kind == "sqrt":
            return nu_sqrt(self.c)
        return nu_general(self.c, self.lam)


def closed_form_x_coefficient(lam, variant="corrected"):
    """The x-coefficient of the closed-form alpha; the printed variant has
    8/9 where the derivation gives 8/3."""
    if variant == "corrected":
        return 4.0 / (3.0 * lam) + 8.0 / 3.0
    if variant == "paper":
        return 4.0 / (3.0 * lam) + 8.0 / 9.0
    raise ValueError(f"unknown variant {variant!r}")


def closed_form_alpha_field(c, lam, variant="corrected") -> ScalarField2:
    """alpha = a x + d t^2 + (c/lam^2) t sqrt(lam x + (lam - 1) t^2 / 3).

    The corrected variant is the closed form of the self-similar lift of the
    general profile family (a = 4/(3 lam) + 8/3); the paper variant keeps the
    printed a = 4/(3 lam) + 8/9.
    """
    if lam == 0:
        raise ValueError("closed form requires lam != 0")
    a = closed_form_x_coefficient(lam, variant)
    d = 4.0 * (lam - 1.0) * (lam + 2.0) / (9.0 * lam * lam)
    cc = c / (lam * lam)

    def rad(x, t):
        R = lam * x + (lam - 1.0) * t * t / 3.0
        if np.any(np.asarray(R) < 0.0):
            raise NegativeRadicand("lam*x + (lam-1)*t^2/3 < 0")
        return R

    def val(x, t):
        R = rad(x, t)
        return a * x + d * t * t + cc * t * np.sqrt(R)

    def d1(x, t):
        R = rad(x, t)
        if c == 0.0:
            return a + 0.0 * np.asarray(x)
        return a + 0.5 * cc * lam * t / np.sqrt(R)

    def d2(x, t):
        R = rad(x, t)
        if c == 0.0:
            return 2.0 * d * t + 0.0 * np.asarray(x)
        rt = np.sqrt(R)
        return 2.0 * d * t + cc * (rt + (lam - 1.0) * t * t / (3.0 * rt))

    def d11(x, t):
        R = rad(x, t)
        if c == 0.0:
            return 0.0 * np.asarray(x)
        return -0.25 * cc * lam * lam * t / R**1.5

    def d12(x, t):
        R = rad(x, t)
        if c == 0.0:
            return 0.0 * np.asarray(x)
        rt = np.sqrt(R)
        return 0.5 * cc * lam * (1.0 / rt - (lam - 1.0) * t * t / (3.0 * R * rt))

    def d22(x, t):
        R = rad(x, t)
        if c == 0.0:
            return 2.0 * d + 0.0 * np.asarray(x)
        rt = np.sqrt(R)
        return 2.0 * d + cc * ((lam - 1.0) * t / rt
                               - (lam - 1.0) ** 2 * t**3 / (9.0 * R * rt))

    return ScalarField2.exact(val, d1, d2, d11, d12, d22)


def closed_form_alpha(c, lam, x, t, variant="corrected"):
    return closed_form_alpha_field(c, lam, variant)(x, t)


def transform_alpha(alpha: ScalarField2, lam) -> ScalarField2:
    """Scaling symmetry of the alpha equation: lam^{-1} alpha(lam y, sqrt(lam) t)."""
    if lam <= 0:
        raise ValueError("scaling symmetry needs lam > 0")
    rt = math.sqrt(lam)
    return ScalarField2.exact(
        lambda y, t: alpha(lam * y, rt * t) / lam,
        lambda y, t: alpha.d1(lam * y, rt * t),
        lambda y, t: alpha.d2(lam * y, rt * t) * rt / lam,
        lambda y, t: alpha.d11(lam * y, rt * t) * lam,
        lambda y, t: alpha.d12(lam * y, rt * t) * rt,
        lambda y, t: alpha.d22(lam * y, rt * t),
    )


# ---------------------------------------------------------------------------
# polynomial ansatz alpha = y^2 A(t) + y B(t) + C(t)

@dataclass(frozen=True)
class PolyAnsatzState:
    """ODE state (A, Adot, B, Bdot, C, Cdot) of the polynomial ansatz."""

    A: float
    Adot: float
    B: float
    Bdot: float
    C: float
    Cdot: float

    def as_vector(self) -> np.ndarray:
        return np.array([self.A, self.Adot, self.B, self.Bdot, self.C, self.Cdot])

    @classmethod
    def from_vector(cls, v):
        return cls(*map(float, v))

    @property
    def energy(self) -> float:
        """Conserved first integral of the A equation, E = Adot^2 + 4 A^3."""
        return self.Adot**2 + 4.0 * self.A**3


def poly_ansatz_rhs(state, t, sign12=+1):
    """Right-hand side of the coefficient ODE system:

        A'' = -6 A^2
        B'' = sign12 * 12 A - 6 A B
        C'' = -(B - 2)(B - 4) - 2 A C

    ``sign12`` selects the sign of the forcing term in the B equation (the
    printed source has -12 A; the residual oracle selects +).
    """
    A, Adot, B, Bdot, C, Cdot = state
    return np.array([
        Adot,
        -6.0 * A * A,
        Bdot,
        sign12 * 12.0 * A - 6.0 * A * B,
        Cdot,
        -(B - 2.0) * (B - 4.0) - 2.0 * A * C,
    ])


def integrate_poly_ansatz(state0, t0, t1, steps, sign12=+1):
    """Fixed-step trajectory of the coefficient system; state0 is a
    PolyAnsatzState or a 6-vector."""
    vec = state0.as_vector() if isinstance(state0, PolyAnsatzState) else np.asarray(state0, float)
    return rk4(lambda t, s: poly_ansatz_rhs(s, t, sign12), t0, vec, t1, steps)


def poly_alpha_residual_max(traj, y_lo, y_hi, ny=21):
    """Max |alpha-equation residual| of alpha = y^2 A + y B + C along a trajectory.

    The t-second-derivatives of (A, B, C) are taken from the stored trajectory
    by Richardson-extrapolated central differences (independent of whichever
    right-hand side produced it); the y-derivatives are exact.
    """
    ts = np.array([t for t, _ in traj])
    states = np.stack([s for _, s in traj])
    dt = ts[1] - ts[0]
    abc = states[:, [0, 2, 4]]
    ys = np.linspace(y_lo, y_hi, ny)
    worst = 0.0
    for k in range(2, len(ts) - 2):
        d1 = (abc[k + 1] - 2.0 * abc[k] + abc[k - 1]) / dt**2
        d2 = (abc[k + 2] - 2.0 * abc[k] + abc[k - 2]) / (2.0 * dt) ** 2
        att = (4.0 * d1 - d2) / 3.0  # h^2-term eliminated
        A, B, C = abc[k]
        alpha = ys * ys * A + ys * B + C
        alpha_y = 2.0 * A * ys + B
        alpha_tt = ys * ys * att[0] + ys * att[1] + att[2]
        resid = alpha_tt + (alpha_y**2 + alpha * 2.0 * A) + 8.0 - 6.0 * alpha_y
        worst = max(worst, float(np.max(np.abs(resid))))
    return worst


def select_poly_sign(t0=0.0, t1=0.5, steps=2000, eps=1e-3, tol=1e-6):
    """Residual oracle for the forcing sign in the B equation.

    Integrates both sign choices from a neighborhood of the degenerate
    closed-form orbit (A = -1/(t-1)^2, B = 2 + eps, C = 0) and keeps the one
    whose trajectory satisfies the alpha equation to differentiation-error
    level; raises OracleAmbiguous unless exactly one qualifies.
    """
    state0 = np.array([-1.0, -2.0, 2.0 + eps, 0.0, 0.0, 0.0])
    winners = []
    resids = {}
    for sign in (+1, -1):
        traj = integrate_poly_ansatz(state0, t0, t1, steps, sign12=sign)
        resids[sign] = poly_alpha_residual_max(traj, 0.0, 1.0)
        if resids[sign] <= tol:
            winners.append(sign)
    if len(winners) != 1:
        raise OracleAmbiguous(f"sign oracle residuals {resids} admit {len(winners)} choices")
    return winners[0]


def first_integral(A, Adot):
    return Adot * Adot + 4.0 * A**3


def weierstrass_trajectory(t1, E, A0, Adot0, steps=4000, t0=0.0):
    """Trajectory of A'' = -6 A^2 with consistency check Adot0^2 + 4 A0^3 = E."""
    if abs(first_integral(A0, Adot0) - E) > 1e-9 * max(1.0, abs(E)):
        raise ValueError("initial data inconsistent with the first integral")
    return rk4(lambda t, s: np.array([s[1], -6.0 * s[0] ** 2]), t0,
               np.array([A0, Adot0]), t1, steps)


def weierstrass_A(t, E, A0, Adot0, steps=4000):
    """A(t) on the equianharmonic orbit with first-integral constant E."""
    if t == 0.0:
        return A0
    traj = weierstrass_trajectory(t, E, A0, Adot0, steps=steps)
    return float(traj[-1][1][0])
