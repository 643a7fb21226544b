"""Stochastic processes that move the hidden optimal control values between shots.

The optimum stays fixed during a shot and advances once per shot.  Each
control parameter drifts independently; ``DriftState.eta_opt`` is a vector
over parameters and is updated in place.

Supported processes:

- ``random_walk``: eta_opt += q * step with q = +/-1 equiprobable.
- ``ornstein_uhlenbeck``: eta_opt <- eta_opt * exp(-reversion) +
  volatility * eps, eps ~ N(0, 1).  Stationary variance is
  volatility^2 / (1 - exp(-2 * reversion)).
- ``jump``: the Ornstein-Uhlenbeck process plus a one-time shift of
  ``jump_size`` at shot ``jump_at``.
- ``one_over_f``: scale * sum of ``n_components`` independent OU components
  with reversion[i] = 10 * (1/4)**i and volatility[i] =
  2**i * (1 - exp(-2 * reversion[i])), i = 1..n; octave-spaced correlation
  times give an approximately 1/f spectrum.
- ``composite``: sum of independent sub-processes.
- ``none``: frozen optimum.

Batch helpers advance a whole (n_traj, m) ensemble in lockstep; they share
the per-parameter laws above but draw from a single ensemble stream.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.random import Generator

KINDS = ("none", "random_walk", "ornstein_uhlenbeck", "jump", "one_over_f", "composite")


@dataclass(frozen=True)
class DriftSpec:
    kind: str = "none"
    step: float = 0.0           # random-walk step magnitude
    reversion: float = 1e-4     # OU mean-reversion rate
    volatility: float = 1e-3    # OU per-step noise scale
    jump_at: int = 1000         # shot index of the jump (1-based: fires on that step)
    jump_size: float = 0.15
    scale: float = 1e-3         # 1/f overall scale
    n_components: int = 7
    parts: tuple["DriftSpec", ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown drift kind {self.kind!r}")
        if self.step < 0 or self.volatility < 0 or self.reversion < 0:
            raise ValueError("drift magnitudes must be nonnegative")
        if self.n_components < 1:
            raise ValueError("n_components must be >= 1")
        if self.kind == "composite" and not self.parts:
            raise ValueError("composite drift needs at least one part")


def one_over_f_coefficients(n_components: int = 7) -> tuple[np.ndarray, np.ndarray]:
    """Per-component (reversion, volatility) arrays for the 1/f construction."""
    i = np.arange(1, n_components + 1, dtype=float)
    reversion = 10.0 * 0.25**i
    volatility = 2.0**i * (1.0 - np.exp(-2.0 * reversion))
    return reversion, volatility


@dataclass
class DriftState:
    eta_opt: np.ndarray
    t: int = 0
    components: np.ndarray | None = None          # (m, n_components) for one_over_f
    sub: list["DriftState"] = field(default_factory=list)


def drift_init(spec: DriftSpec, eta_opt0: np.ndarray | list[float] | float) -> DriftState:
    eta0 = np.atleast_1d(np.asarray(eta_opt0, dtype=float)).copy()
    m = len(eta0)
    if spec.kind == "one_over_f":
        return DriftState(eta_opt=eta0, components=np.zeros((m, spec.n_components)))
    if spec.kind == "composite":
        subs = [drift_init(p, np.zeros(m)) for p in spec.parts]
        return DriftState(eta_opt=eta0, sub=subs)
    return DriftState(eta_opt=eta0)


def drift_step(state: DriftState, spec: DriftSpec, rng: Generator) -> DriftState:
    """Advance the optimum by one shot; mutates and returns ``state``."""
    m = len(state.eta_opt)
    state.t += 1
    if spec.kind == "none":
        return state
    if spec.kind == "random_walk":
        signs = rng.integers(0, 2, size=m) * 2 - 1
        state.eta_opt += spec.step * signs
        return state
    if spec.kind in ("ornstein_uhlenbeck", "jump"):
        eps = rng.standard_normal(m)
        state.eta_opt *= np.exp(-spec.reversion)
        state.eta_opt += spec.volatility * eps
        if spec.kind == "jump" and state.t == spec.jump_at:
            state.eta_opt += spec.jump_size
        return state
    if spec.kind == "one_over_f":
        rev, vol = one_over_f_coefficients(spec.n_components)
        eps = rng.standard_normal((m, spec.n_components))
        state.components *= np.exp(-rev)
        state.components += vol * eps
        state.eta_opt[:] = spec.scale * state.components.sum(axis=1)
        return state
    # composite
    total = np.zeros(m)
    for sub_state, sub_spec in zip(state.sub, spec.parts):
        drift_step(sub_state, sub_spec, rng)
        total += sub_state.eta_opt
    state.eta_opt[:] = total
    return state


# ---------------------------------------------------------------------------
# lockstep batch variants for vectorized ensembles
# ---------------------------------------------------------------------------

@dataclass
class DriftBatch:
    """Drift state for an (n_traj, m) ensemble advanced in lockstep."""

    spec: DriftSpec
    eta_opt: np.ndarray                        # (n_traj, m)
    t: int = 0
    components: np.ndarray | None = None       # (n_traj, m, n_components)
    sub: list["DriftBatch"] = field(default_factory=list)

    @classmethod
    def init(cls, spec: DriftSpec, n_traj: int, m: int, eta_opt0: float | np.ndarray = 0.0) -> "DriftBatch":
        eta = np.zeros((n_traj, m)) + eta_opt0
        comp = None
        sub = []
        if spec.kind == "one_over_f":
            comp = np.zeros((n_traj, m, spec.n_components))
        elif spec.kind == "composite":
            sub = [cls.init(p, n_traj, m, 0.0) for p in spec.parts]
        return cls(spec=spec, eta_opt=eta, components=comp, sub=sub)

    def step(self, rng: Generator) -> None:
        spec = self.spec
        self.t += 1
        if spec.kind == "none":
            return
        shape = self.eta_opt.shape
        if spec.kind == "random_walk":
            self.eta_opt += spec.step * (rng.integers(0, 2, size=shape) * 2 - 1)
        elif spec.kind in ("ornstein_uhlenbeck", "jump"):
            self.eta_opt *= np.exp(-spec.reversion)
            self.eta_opt += spec.volatility * rng.standard_normal(shape)
            if spec.kind == "jump" and self.t == spec.jump_at:
                self.eta_opt += spec.jump_size
        elif spec.kind == "one_over_f":
            rev, vol = one_over_f_coefficients(spec.n_components)
            self.components *= np.exp(-rev)
            self.components += vol * rng.standard_normal(self.components.shape)
            self.eta_opt[:] = spec.scale * self.components.sum(axis=2)
        else:  # composite
            total = np.zeros(shape)
            for sb in self.sub:
                sb.step(rng)
                total += sb.eta_opt
            self.eta_opt[:] = total
