"""Registries mapping CLI identifiers to families and equations.

A family entry may expose an exact alpha(y, t) field, a profile nu(xi), or
both; an equation entry declares which surface it sweeps and how.  Aliases
keep older/alternate spellings working.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import families as fam
from .alphachain import alpha_residual
from .errors import UnknownId, UsageError
from .numcore import ScalarField2
from .report import Discrepancy

__all__ = ["FamilyEntry", "build_family", "equation_info", "FAMILY_IDS", "EQUATION_IDS"]

FAMILY_ALIASES = {
    "f34": "automodel-closed",
    "automodel-parabolic": "ps-parabolic",
    "automodel-linear": "ps-linear",
    "automodel-sqrt": "ps-sqrt",
}

EQUATION_ALIASES = {
    "bbb1": "alpha",
    "nuf": "nu-invariant",
    "rv": "traveling-ode",
    "rv-first-integral": "traveling-first-integral",
    "nus": "traveling-implicit",
}


@dataclass
class FamilyEntry:
    id: str
    params: dict
    variant: str = "corrected"
    alpha: ScalarField2 = None
    profile: object = None
    traveling: object = None  # TravelingWaveParams when applicable
    discrepancies: list = field(default_factory=list)

    def describe(self) -> dict:
        return {"id": self.id, "params": dict(sorted(self.params.items())),
                "variant": self.variant}


def _take(params, names, defaults):
    out = {}
    for name in names:
        out[name] = float(params.pop(name)) if name in params else defaults[name]
    if params:
        raise UsageError(f"unknown parameters for this family: {sorted(params)}")
    return out


_X_COEFF_DISCREPANCY = Discrepancy(
    name="closed-form-x-coefficient",
    paper_value="4/(3*lam) + 8/9",
    derived_value="4/(3*lam) + 8/3",
)


def build_family(family_id, params=None, variant="corrected") -> FamilyEntry:
    """Construct a registered family from its id and a parameter dict."""
    params = dict(params or {})
    fid = FAMILY_ALIASES.get(family_id, family_id)

    if fid == "linear":
        p = _take(params, ("a", "b", "c"), {"a": 2.0, "b": 0.0, "c": 0.0})
        lp = fam.LinearFamilyParams(**p)
        return FamilyEntry(fid, p, variant, alpha=fam.linear_alpha_field(lp))
    if fid == "traveling":
        branch = str(params.pop("branch", "+"))
        p = _take(params, ("v", "c1", "c2"), {"v": 1.0, "c1": 0.0, "c2": 0.0})
        tw = fam.TravelingWaveParams(branch=branch, **p)
        return FamilyEntry(fid, {**p, "branch": branch}, variant,
                           alpha=fam.traveling_alpha_field(tw),
                           profile=fam.traveling_wave_profile(tw),
                           traveling=tw)
    if fid == "poly-exact":
        p = _take(params, ("c1", "c2"), {"c1": 0.0, "c2": 0.0})
        return FamilyEntry(fid, p, variant,
                           alpha=fam.poly_exact_alpha_field(p["c1"], p["c2"]))
    if fid in ("ps-parabolic", "ps-linear", "ps-sqrt"):
        p = _take(params, ("c",), {"c": 0.0})
        maker = {"ps-parabolic": fam.nu_parabolic, "ps-linear": fam.nu_linear,
                 "ps-sqrt": fam.nu_sqrt}[fid]
        profile = maker(p["c"])
        return FamilyEntry(fid, p, variant, profile=profile,
                           alpha=fam.selfsim_alpha_field(profile))
    if fid == "automodel-general":
        p = _take(params, ("c", "lam"), {"c": 0.0, "lam": 1.0})
        profile = fam.nu_general(p["c"], p["lam"])
        return FamilyEntry(fid, p, variant, profile=profile,
                           alpha=fam.selfsim_alpha_field(profile))
    if fid == "automodel-closed":
        p = _take(params, ("c", "lam"), {"c": 0.0, "lam": 1.0})
        alpha = fam.closed_form_alpha_field(p["c"], p["lam"], variant)
        return FamilyEntry(fid, p, variant, alpha=alpha,
                           discrepancies=[_X_COEFF_DISCREPANCY])
    raise UnknownId(f"unknown family id {family_id!r}")


FAMILY_IDS = ("linear", "traveling", "poly-exact", "ps-parabolic", "ps-linear",
              "ps-sqrt", "automodel-general", "automodel-closed")

#: equation id -> (surface, axis names); surfaces: "alpha" sweeps a 2-D
#: (y, t) field, "nu"/"nu-invariant" sweep a profile on xi,
#: "traveling-*" sweep traveling-wave families on xi = x + v t
EQUATION_IDS = {
    "alpha": ("alpha", ("y", "t")),
    "nu": ("nu", ("xi",)),
    "nu-invariant": ("nu-invariant", ("xi",)),
    "traveling-ode": ("traveling", ("xi",)),
    "traveling-first-integral": ("traveling", ("xi",)),
    "traveling-implicit": ("traveling", ("xi",)),
}


def equation_info(equation_id):
    eq = EQUATION_ALIASES.get(equation_id, equation_id)
    if eq not in EQUATION_IDS:
        raise UnknownId(f"unknown equation id {equation_id!r}")
    return eq, EQUATION_IDS[eq]


def residual_fn(eq, entry: FamilyEntry):
    """Point-wise residual evaluator for (equation, family)."""
    if eq == "alpha":
        if entry.alpha is None:
            raise UsageError(f"family {entry.id!r} has no alpha(y,t) surface")
        return lambda y, t: alpha_residual(entry.alpha, y, t)
    if eq == "nu":
        if entry.profile is None:
            raise UsageError(f"family {entry.id!r} has no profile surface")
        return lambda xi: fam.nu_residual(entry.profile, xi)
    if eq == "nu-invariant":
        if entry.profile is None:
            raise UsageError(f"family {entry.id!r} has no profile surface")
        return lambda xi: fam.nu_invariant_residual(entry.profile, xi)
    if entry.traveling is None:
        raise UsageError(f"equation requires a traveling-wave family, got {entry.id!r}")
    tw = entry.traveling
    profile = entry.profile
    if eq == "traveling-ode":
        return lambda xi: fam.traveling_ode_residual(profile, tw.v, xi)
    if eq == "traveling-first-integral":
        return lambda xi: fam.traveling_first_integral_residual(profile, tw.v, tw.c1, xi)
    if eq == "traveling-implicit":
        def implicit(xi):
            zeta = xi + tw.c1
            nu = (profile(xi) + tw.v**2) / zeta
            return fam.nu_implicit_relation(nu, zeta, tw.c2)
        return implicit
    raise UnknownId(f"unknown equation id {eq!r}")


def numeric_twin(entry: FamilyEntry, h0=1e-4, levels=2) -> FamilyEntry:
    """Same family with value-only numeric differentiation on the alpha side."""
    if entry.alpha is None:
        raise UsageError(f"family {entry.id!r} has no alpha(y,t) surface")
    twin = FamilyEntry(entry.id, entry.params, entry.variant,
                       alpha=ScalarField2.numeric(entry.alpha.value, h0=h0,
                                                  richardson_levels=levels),
                       profile=entry.profile, traveling=entry.traveling,
                       discrepancies=list(entry.discrepancies))
    return twin
