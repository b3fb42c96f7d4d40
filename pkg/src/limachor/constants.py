"""Conserved quantities of the choreography and their closed forms.

On a solved system the first moment of mass vanishes and the angular
momentum, moment of inertia, kinetic and potential energies are all
constant, with simple closed forms in a, b, p, N.  The cyclic symmetry
yields further constants: the per-separation parts of the potential,
and for composite N = m*n, conserved sub-sums over each Z_m subgroup
orbit of the body indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from limachor.admissibility import is_admissible
from limachor.coefficients import CouplingVector
from limachor.kinematics import ChoreoConfig, SystemState, Trajectory, state_at


@dataclass(frozen=True)
class ConservedReport:
    """Snapshot of the conserved quantities, optionally with drifts.

    Angular momentum is signed, positive counterclockwise.  ``drift``
    maps quantity keys (g, c, I, K, V, E) to the largest absolute
    excursion from the first sample, when measured over a trajectory.
    """

    first_moment: np.ndarray  # (2,)
    angular_momentum: float
    moment_of_inertia: float
    kinetic: float
    potential: float
    drift: dict[str, float] | None = None

    def to_json_dict(self) -> dict:
        out = {
            "g": [float(self.first_moment[0]), float(self.first_moment[1])],
            "c": self.angular_momentum,
            "I": self.moment_of_inertia,
            "K": self.kinetic,
            "V": self.potential,
        }
        if self.drift is not None:
            out["drift"] = dict(self.drift)
        return out


@dataclass(frozen=True)
class PotentialParts:
    """Separation-ell parts of the potential: sums of |q_k -+ q_{k+ell}|^2.

    The minus part weighted by kappa_ell builds the potential; plus and
    minus always sum to four times the moment of inertia.
    """

    ell: int
    v_minus: float
    v_plus: float


@dataclass(frozen=True)
class PartialSumReport:
    """Sub-sums over one Z_m subgroup orbit of the body indices, N = m*n.

    The orbit is {ell + k*n : k = 0..m-1}.  Measured values come from
    the analytic state at the requested time; predicted values are set
    only in the integer-gated regimes where they are actually constant:
    the sub-sums of inertia, angular momentum and kinetic energy are
    constant when n*(p - 1) != 0 mod N, and the sub-moment has modulus
    |b|*m when n*p == 0 mod N and vanishes otherwise.
    ``pair_sq_sum`` is the sum of squared separations within the orbit.
    """

    m: int
    n: int
    ell: int
    t: float
    first_moment: np.ndarray
    moment_of_inertia: float
    angular_momentum: float
    kinetic: float
    pair_sq_sum: float
    subgroup_constant: bool          # n*(p-1) == 0 mod N fails => constant sums
    first_moment_full: bool          # n*p == 0 mod N => |g| = |b|*m
    predicted: dict[str, float] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "ell": self.ell,
            "t": self.t,
            "g": [float(self.first_moment[0]), float(self.first_moment[1])],
            "I": self.moment_of_inertia,
            "c": self.angular_momentum,
            "K": self.kinetic,
            "pair_sq_sum": self.pair_sq_sum,
            "subgroup_constant": self.subgroup_constant,
            "first_moment_full": self.first_moment_full,
            "predicted": dict(self.predicted),
        }


def _potential_energy(positions: np.ndarray, pair: np.ndarray) -> float:
    diff = positions[:, None, :] - positions[None, :, :]
    sq = np.einsum("jlc,jlc->jl", diff, diff)
    # Each unordered pair appears twice in the full double sum.
    return 0.25 * float(np.einsum("jl,jl->", pair, sq))


def measure(state: SystemState, couplings: CouplingVector) -> ConservedReport:
    """Evaluate all conserved quantities on a single state.

    Raises:
        ValueError: If the coupling vector does not match the state size.
    """
    if couplings.N != state.n_bodies:
        raise ValueError(
            f"couplings sized for N={couplings.N}, state has {state.n_bodies}"
        )
    pos, vel = state.positions, state.velocities
    g = pos.sum(axis=0)
    c = float(np.sum(pos[:, 0] * vel[:, 1] - pos[:, 1] * vel[:, 0]))
    inertia = float(np.sum(pos * pos))
    kinetic = 0.5 * float(np.sum(vel * vel))
    potential = _potential_energy(pos, couplings.pair_matrix())
    return ConservedReport(g, c, inertia, kinetic, potential)


def closed_form_constants(config: ChoreoConfig) -> ConservedReport:
    """Predicted constants of a solved system, with zero drift.

    g = 0, I = (a^2 + b^2) N, c = (a^2 + p b^2) N (signed through p),
    and K = V = (a^2 + p^2 b^2) N / 2.

    Raises:
        ValueError: If (p, N) is inadmissible.
    """
    curve, n = config.curve, config.N
    decision = is_admissible(curve.p, n)
    if not decision.admissible:
        raise ValueError(
            f"(p={curve.p}, N={n}) is not admissible: "
            f"{', '.join(decision.violated_conditions)}"
        )
    a2, b2, p = curve.a ** 2, curve.b ** 2, curve.p
    energy = 0.5 * (a2 + p * p * b2) * n
    zero = {key: 0.0 for key in ("g", "c", "I", "K", "V", "E")}
    return ConservedReport(
        first_moment=np.zeros(2),
        angular_momentum=(a2 + p * b2) * n,
        moment_of_inertia=(a2 + b2) * n,
        kinetic=energy,
        potential=energy,
        drift=zero,
    )


def potential_parts(config: ChoreoConfig, ell: int) -> PotentialParts:
    """Closed-form separation-ell parts of the potential.

    v_-+ = 2N (a^2 (1 -+ cos(2 pi ell / N)) + b^2 (1 -+ cos(2 pi p ell / N))).

    Raises:
        IndexError: If ell is outside [1, floor(N/2)].
    """
    n_half = config.N // 2
    if not 1 <= ell <= n_half:
        raise IndexError(f"separation {ell} outside [1, {n_half}]")
    a2, b2 = config.curve.a ** 2, config.curve.b ** 2
    ca = math.cos(math.tau * ell / config.N)
    cb = math.cos(math.tau * config.curve.p * ell / config.N)
    v_minus = 2.0 * config.N * (a2 * (1.0 - ca) + b2 * (1.0 - cb))
    v_plus = 2.0 * config.N * (a2 * (1.0 + ca) + b2 * (1.0 + cb))
    return PotentialParts(ell, v_minus, v_plus)


def potential_from_parts(config: ChoreoConfig, couplings: CouplingVector) -> float:
    """Assemble the potential from its per-separation closed forms.

    The diametral part of even N is halved, since each such bond exists
    only once.
    """
    if couplings.N != config.N:
        raise ValueError(
            f"couplings sized for N={couplings.N}, config has N={config.N}"
        )
    n_half = config.N // 2
    total = 0.0
    for ell in range(1, n_half + 1):
        part = potential_parts(config, ell).v_minus
        if config.N % 2 == 0 and ell == n_half:
            part *= 0.5
        total += couplings.kappa(ell) * part
    return 0.5 * total


def partial_sums(config: ChoreoConfig, m: int, n: int, ell: int,
                 t: float) -> PartialSumReport:
    """Sub-sums over the body-index orbit {ell + k*n} at time t.

    Requires N = m*n with m, n >= 2.  The constancy gates are decided
    in integer arithmetic, never inferred from floats.

    Raises:
        ValueError: If m*n != N or a factor is < 2.
        IndexError: If ell is outside [0, n).
    """
    if m < 2 or n < 2 or m * n != config.N:
        raise ValueError(
            f"need N = m*n with m, n >= 2; got m={m}, n={n}, N={config.N}"
        )
    if not 0 <= ell < n:
        raise IndexError(f"orbit label {ell} outside [0, {n})")
    p = config.curve.p
    state = state_at(config, t)
    idx = ell + n * np.arange(m)
    pos, vel = state.positions[idx], state.velocities[idx]

    g = pos.sum(axis=0)
    inertia = float(np.sum(pos * pos))
    ang = float(np.sum(pos[:, 0] * vel[:, 1] - pos[:, 1] * vel[:, 0]))
    kin = 0.5 * float(np.sum(vel * vel))
    diff = pos[:, None, :] - pos[None, :, :]
    pair_sq = 0.5 * float(np.einsum("jlc,jlc->", diff, diff))

    first_moment_full = (n * p) % config.N == 0
    subgroup_constant = (n * (p - 1)) % config.N != 0

    a2, b2 = config.curve.a ** 2, config.curve.b ** 2
    predicted: dict[str, float] = {
        "g_abs": abs(config.curve.b) * m if first_moment_full else 0.0,
    }
    if subgroup_constant:
        predicted["I"] = m * (a2 + b2)
        predicted["c"] = m * (a2 + p * b2)
        predicted["K"] = 0.5 * m * (a2 + p * p * b2)
        predicted["pair_sq_sum"] = (
            m * m * a2 if first_moment_full else m * m * (a2 + b2)
        )
    return PartialSumReport(
        m=m, n=n, ell=ell, t=t,
        first_moment=g,
        moment_of_inertia=inertia,
        angular_momentum=ang,
        kinetic=kin,
        pair_sq_sum=pair_sq,
        subgroup_constant=subgroup_constant,
        first_moment_full=first_moment_full,
        predicted=predicted,
    )


def drift_report(traj: Trajectory, couplings: CouplingVector) -> ConservedReport:
    """Largest excursion of each conserved quantity along a trajectory.

    Drift is measured against the first sample, not against closed
    forms, so the same machinery certifies solved and perturbed systems
    alike.  Total energy drift is reported under key "E".

    Raises:
        ValueError: If the trajectory is empty or sizes disagree.
    """
    if not traj.samples:
        raise ValueError("cannot measure drift of an empty trajectory")
    n = traj.samples[0].n_bodies
    if couplings.N != n:
        raise ValueError(
            f"couplings sized for N={couplings.N}, trajectory has {n} bodies"
        )
    pos = np.stack([s.positions for s in traj.samples])   # (S, N, 2)
    vel = np.stack([s.velocities for s in traj.samples])
    pair = couplings.pair_matrix()

    g = pos.sum(axis=1)
    c = np.einsum("sk,sk->s", pos[:, :, 0], vel[:, :, 1]) \
        - np.einsum("sk,sk->s", pos[:, :, 1], vel[:, :, 0])
    inertia = np.einsum("skc,skc->s", pos, pos)
    kinetic = 0.5 * np.einsum("skc,skc->s", vel, vel)
    diff = pos[:, :, None, :] - pos[:, None, :, :]
    sq = np.einsum("sjlc,sjlc->sjl", diff, diff)
    potential = 0.25 * np.einsum("sjl,jl->s", sq, pair)
    energy = kinetic + potential

    drift = {
        "g": float(np.max(np.linalg.norm(g - g[0], axis=1))),
        "c": float(np.max(np.abs(c - c[0]))),
        "I": float(np.max(np.abs(inertia - inertia[0]))),
        "K": float(np.max(np.abs(kinetic - kinetic[0]))),
        "V": float(np.max(np.abs(potential - potential[0]))),
        "E": float(np.max(np.abs(energy - energy[0]))),
    }
    return ConservedReport(g[0], float(c[0]), float(inertia[0]),
                           float(kinetic[0]), float(potential[0]), drift)


def inertia_rate_max(traj: Trajectory) -> float:
    """Largest centered-difference time derivative of the moment of inertia.

    A solved choreography keeps this at integrator-noise level despite
    not being a relative equilibrium.
    """
    if len(traj.samples) < 3:
        raise ValueError("need at least 3 samples for a centered difference")
    times = traj.times()
    inertia = np.array([float(np.sum(s.positions * s.positions))
                        for s in traj.samples])
    rates = (inertia[2:] - inertia[:-2]) / (times[2:] - times[:-2])
    return float(np.max(np.abs(rates)))
