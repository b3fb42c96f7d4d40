"""Analytic evaluation of the p-limacon choreography.

The shared orbit is a(cos t, sin t) + b(cos pt, sin pt); body k runs
the same curve with its parameter advanced by 2*pi*k/N.  Positions,
velocities and accelerations are exact trigonometric expressions, and
the equations-of-motion residual measures how well a given coupling
vector reproduces those accelerations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from limachor.coefficients import CouplingVector

# Beyond this magnitude, trig arguments are reduced mod 2*pi first so
# long integrations do not lose phase accuracy.
_REDUCE_ABOVE = 1e6


@dataclass(frozen=True)
class CurveParams:
    """The p-limacon a(cos t, sin t) + b(cos pt, sin pt), a*b != 0."""

    a: float
    b: float
    p: int

    def __post_init__(self):
        if self.a == 0 or self.b == 0:
            raise ValueError("curve requires a != 0 and b != 0")
        if self.p in (-1, 0, 1):
            raise ValueError(f"p={self.p} degenerates the curve; need |p| >= 2")


@dataclass(frozen=True)
class ChoreoConfig:
    """A curve plus the number of bodies sharing it.

    Admissibility of (p, N) is enforced at solver entry, not here, so
    inadmissible configurations can still be inspected.
    """

    curve: CurveParams
    N: int

    def __post_init__(self):
        if self.N < 4:
            raise ValueError(f"need at least 4 bodies, got N={self.N}")


def make_config(N: int, p: int, a: float = 1.2, b: float = 1.0) -> ChoreoConfig:
    """Convenience constructor for a choreography configuration."""
    return ChoreoConfig(CurveParams(a, b, p), N)


@dataclass(frozen=True)
class SystemState:
    """Positions and velocities of all bodies at one instant."""

    t: float
    positions: np.ndarray   # shape (N, 2)
    velocities: np.ndarray  # shape (N, 2)

    @property
    def n_bodies(self) -> int:
        return self.positions.shape[0]


@dataclass(frozen=True)
class Trajectory:
    """Ordered states at strictly increasing times.

    ``config`` is the analytic configuration the samples came from, or
    None for integrator output that is no longer tied to the curve.
    """

    samples: list[SystemState]
    config: ChoreoConfig | None = None

    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])


def _angle(theta: float) -> float:
    if abs(theta) > _REDUCE_ABOVE:
        return math.remainder(theta, math.tau)
    return theta


def _derivatives(curve: CurveParams, theta: float):
    """Position, velocity, acceleration of the curve at parameter theta."""
    a, b, p = curve.a, curve.b, curve.p
    t1 = _angle(theta)
    tp = _angle(p * theta)
    c1, s1 = math.cos(t1), math.sin(t1)
    cp, sp = math.cos(tp), math.sin(tp)
    pos = np.array([a * c1 + b * cp, a * s1 + b * sp])
    vel = np.array([-a * s1 - p * b * sp, a * c1 + p * b * cp])
    acc = np.array([-a * c1 - p * p * b * cp, -a * s1 - p * p * b * sp])
    return pos, vel, acc


def _phase(t: float, k: int, N: int) -> float:
    # Same operation order on every path, so the k-shift identity holds
    # bit-for-bit.
    return t + (math.tau * k) / N


def curve_point(curve: CurveParams, t: float) -> np.ndarray:
    """Point of the curve at parameter t."""
    return _derivatives(curve, t)[0]


def body_state(config: ChoreoConfig, k: int, t: float):
    """Position and velocity of body k at time t.

    Raises:
        IndexError: If k is not in [0, N).
    """
    if not 0 <= k < config.N:
        raise IndexError(f"body index {k} outside [0, {config.N})")
    pos, vel, _ = _derivatives(config.curve, _phase(t, k, config.N))
    return pos, vel


def analytic_accel(config: ChoreoConfig, k: int, t: float) -> np.ndarray:
    """Exact acceleration of body k at time t.

    Raises:
        IndexError: If k is not in [0, N).
    """
    if not 0 <= k < config.N:
        raise IndexError(f"body index {k} outside [0, {config.N})")
    return _derivatives(config.curve, _phase(t, k, config.N))[2]


def _full_state(config: ChoreoConfig, t: float):
    """Stacked positions, velocities and accelerations of all bodies."""
    n = config.N
    pos = np.empty((n, 2))
    vel = np.empty((n, 2))
    acc = np.empty((n, 2))
    for k in range(n):
        pos[k], vel[k], acc[k] = _derivatives(config.curve, _phase(t, k, n))
    return pos, vel, acc


def state_at(config: ChoreoConfig, t: float) -> SystemState:
    """Analytic state of the whole system at time t."""
    pos, vel, _ = _full_state(config, t)
    return SystemState(t, pos, vel)


def initial_state(config: ChoreoConfig) -> SystemState:
    """Analytic state at t = 0."""
    return state_at(config, 0.0)


def certification_grid(count: int = 64) -> np.ndarray:
    """Uniform grid on [0, 2*pi), the default residual-certification grid.

    The residual is a low-degree trigonometric polynomial, so 64 points
    vastly oversample it.
    """
    return np.linspace(0.0, math.tau, count, endpoint=False)


def eom_residual(config: ChoreoConfig, couplings: CouplingVector,
                 t_grid=None) -> float:
    """Worst equations-of-motion defect of the analytic choreography.

    For each grid time and each body, compares the exact acceleration
    against the coupling force sum over all partners; returns the
    largest Euclidean mismatch.  Zero (to roundoff) certifies the
    couplings as a solution.

    Args:
        config: Curve and body count.
        couplings: Candidate coupling vector, sized for config.N.
        t_grid: Times to check; defaults to 64 uniform points on
            [0, 2*pi).

    Raises:
        ValueError: If the coupling vector does not match config.N.
    """
    if couplings.N != config.N:
        raise ValueError(
            f"couplings sized for N={couplings.N}, config has N={config.N}"
        )
    grid = certification_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    kmat = couplings.pair_matrix()
    row_sum = kmat.sum(axis=1)
    worst = 0.0
    for t in grid:
        pos, _, acc = _full_state(config, float(t))
        force = kmat @ pos - row_sum[:, None] * pos
        worst = max(worst, float(np.max(np.linalg.norm(acc - force, axis=1))))
    return worst


def sample_trajectory(config: ChoreoConfig, t0: float, t1: float,
                      count: int, include_end: bool = True) -> Trajectory:
    """Uniform analytic samples of the choreography on [t0, t1].

    The grid is closed on the left; ``include_end`` controls whether t1
    itself is sampled (default) or left open.

    Raises:
        ValueError: If t1 <= t0 or count < 2.
    """
    if t1 <= t0:
        raise ValueError(f"bad range: t1={t1} must exceed t0={t0}")
    if count < 2:
        raise ValueError(f"need at least 2 samples, got {count}")
    if include_end:
        times = np.linspace(t0, t1, count)
    else:
        times = t0 + (t1 - t0) * np.arange(count) / count
    return Trajectory([state_at(config, float(t)) for t in times], config)


def trajectory_csv(traj: Trajectory) -> str:
    """Render a trajectory as CSV: t,body,x,y,vx,vy.

    One row per (sample, body), sorted by t then body.  Floats use the
    shortest representation that round-trips exactly.
    """
    lines = ["t,body,x,y,vx,vy"]
    for state in traj.samples:
        for k in range(state.n_bodies):
            row = (float(state.t), float(state.positions[k, 0]),
                   float(state.positions[k, 1]), float(state.velocities[k, 0]),
                   float(state.velocities[k, 1]))
            lines.append(f"{row[0]!r},{k},{row[1]!r},{row[2]!r},{row[3]!r},{row[4]!r}")
    return "\n".join(lines) + "\n"
