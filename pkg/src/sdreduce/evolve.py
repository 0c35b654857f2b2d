"""Direct time integration of the reduced alpha equation as a second-order
evolution,

    alpha_tt = -(alpha^2/2)_yy + 6 alpha_y - 8 ,

with leapfrog time stepping, second-order central space differences, a
Taylor-seeded first step and Dirichlet boundary values sampled from an exact
family.  Evolution is restricted to the wave-like regime alpha < 0; the run
is truncated and flagged if that is ever lost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BlowUp, HyperbolicityLost
from .numcore import Grid1, ScalarField2

__all__ = ["EvolutionConfig", "EvolutionResult", "step", "evolve", "convergence_study"]


@dataclass
class EvolutionConfig:
    """Run parameters; dt defaults to the CFL-limited value.

    ``family`` supplies initial data (values and time derivative at t0) and,
    unless ``boundary_family`` overrides it, the Dirichlet edge values.
    """

    y_grid: Grid1
    t0: float
    t1: float
    family: ScalarField2
    dt: float = None
    cfl_target: float = 0.5
    boundary_family: ScalarField2 = None
    strict_cfl: bool = True
    initial_noise: float = 0.0
    noise_seed: int = 0
    initial_perturbation: np.ndarray = None

    def __post_init__(self):
        if self.boundary_family is None:
            self.boundary_family = self.family
        ys = self.y_grid.points()
        a0 = np.asarray(self.family(ys, self.t0), dtype=float)
        if np.max(a0) >= 0.0:
            raise HyperbolicityLost(
                f"initial slice has max(alpha) = {np.max(a0):.3g} >= 0")
        self.wave_speed = math.sqrt(np.max(np.abs(a0)))
        cfl_dt = self.cfl_target * self.y_grid.h / self.wave_speed
        if self.dt is None:
            self.dt = cfl_dt
        elif self.dt > cfl_dt and self.strict_cfl:
            raise ValueError(
                f"dt={self.dt:.3g} violates the CFL bound {cfl_dt:.3g} "
                "(pass strict_cfl=False to run anyway)")


@dataclass
class EvolutionResult:
    times: list
    snapshots: list
    error_vs_exact: list
    blowup_t: float = None
    blowup_last: np.ndarray = None
    hyperbolicity_lost_at: float = None

    @property
    def truncated(self) -> bool:
        return self.blowup_t is not None or self.hyperbolicity_lost_at is not None


def _rhs(row, h):
    """-D2(row^2/2) + 6 D1(row) - 8 on interior points."""
    sq = 0.5 * row * row
    d2 = (sq[2:] - 2.0 * sq[1:-1] + sq[:-2]) / (h * h)
    d1 = (row[2:] - row[:-2]) / (2.0 * h)
    return -d2 + 6.0 * d1 - 8.0


def step(prev, curr, config: EvolutionConfig, t_next):
    """One leapfrog step: next = 2 curr - prev + dt^2 * rhs(curr), with the
    two edge points overwritten from the boundary family at t_next."""
    h = config.y_grid.h
    dt = config.dt
    ys = config.y_grid.points()
    nxt = np.empty_like(curr)
    nxt[1:-1] = 2.0 * curr[1:-1] - prev[1:-1] + dt * dt * _rhs(curr, h)
    nxt[0] = config.boundary_family(ys[0], t_next)
    nxt[-1] = config.boundary_family(ys[-1], t_next)
    if not np.all(np.isfinite(nxt)):
        raise BlowUp("evolution row turned non-finite", t_last=t_next - dt,
                     state_last=curr.copy())
    return nxt


def evolve(config: EvolutionConfig, snapshot_every=None) -> EvolutionResult:
    """Leapfrog run from t0 to t1; the first step is seeded by the Taylor
    expansion alpha(t0+dt) = alpha + dt alpha_t + dt^2/2 alpha_tt with
    alpha_tt supplied by the equation itself."""
    ys = config.y_grid.points()
    h = config.y_grid.h
    dt = config.dt
    steps = max(1, int(round((config.t1 - config.t0) / dt)))
    dt = (config.t1 - config.t0) / steps
    config.dt = dt
    if snapshot_every is None:
        snapshot_every = max(1, steps // 10)

    curr = np.asarray(config.family(ys, config.t0), dtype=float).copy()
    if config.initial_noise:
        rng = np.random.default_rng(config.noise_seed)
        curr[1:-1] += config.initial_noise * rng.uniform(-1.0, 1.0, len(ys) - 2)
    if config.initial_perturbation is not None:
        curr = curr + np.asarray(config.initial_perturbation, dtype=float)
    vel = np.asarray(config.family.d2(ys, config.t0), dtype=float)

    result = EvolutionResult(times=[config.t0], snapshots=[curr.copy()],
                             error_vs_exact=[0.0])

    def record(t, row):
        result.times.append(t)
        result.snapshots.append(row.copy())
        exact = np.asarray(config.family(ys, t), dtype=float)
        result.error_vs_exact.append(float(np.max(np.abs(row - exact))))

    # Taylor seed
    nxt = np.empty_like(curr)
    nxt[1:-1] = curr[1:-1] + dt * vel[1:-1] + 0.5 * dt * dt * _rhs(curr, h)
    nxt[0] = config.boundary_family(ys[0], config.t0 + dt)
    nxt[-1] = config.boundary_family(ys[-1], config.t0 + dt)
    prev, curr = curr, nxt
    t = config.t0 + dt
    if 1 % snapshot_every == 0 or steps == 1:
        record(t, curr)

    for k in range(2, steps + 1):
        t = config.t0 + k * dt
        try:
            prev, curr = curr, step(prev, curr, config, t)
        except BlowUp as exc:
            result.blowup_t = exc.t_last
            result.blowup_last = exc.state_last
            return result
        if np.max(curr) >= 0.0:
            result.hyperbolicity_lost_at = t
            record(t, curr)
            return result
        if k % snapshot_every == 0 or k == steps:
            record(t, curr)
    return result


def convergence_study(family_builder, y_lo, y_hi, t0, t1, resolutions,
                      cfl_target=0.5):
    """Observed convergence orders against the exact family at t1.

    ``resolutions`` must be point counts that successively halve the spacing
    (e.g. 65, 129, 257; dt scales with h through the shared CFL target).
    Returns (errors, orders); an order entry is math.nan when both errors sit
    at roundoff level (discretely exact families).
    """
    if len(resolutions) < 3:
        raise ValueError("need at least 3 resolutions")
    errors = []
    for n in resolutions:
        cfg = EvolutionConfig(y_grid=Grid1(y_lo, y_hi, int(n)), t0=t0, t1=t1,
                              family=family_builder(), cfl_target=cfl_target)
        res = evolve(cfg, snapshot_every=10**9)
        if res.truncated:
            raise BlowUp(f"convergence run truncated at n={n}",
                         t_last=res.blowup_t, state_last=res.blowup_last)
        errors.append(res.error_vs_exact[-1])
    orders = []
    for e0, e1 in zip(errors, errors[1:]):
        if e0 < 1e-13 and e1 < 1e-13:
            orders.append(math.nan)
        else:
            orders.append(math.log2(e0 / e1))
    return errors, orders
