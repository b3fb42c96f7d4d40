"""Independent verification engines for the coupled linear system.

The force network is circulant over the body index, so the motion
splits into discrete Fourier modes whose stiffnesses are set by the
couplings.  Two engines exercise that system without reference to the
analytic orbit: a classical fixed-step RK4 integrator driven by direct
O(N^2) pairwise forces, and an exact spectral propagator in the real
circulant eigenbasis.  The two share no force code, which is what makes
their agreement a meaningful oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from limachor.coefficients import CouplingVector
from limachor.kinematics import SystemState, Trajectory


@dataclass(frozen=True)
class InteractionSpec:
    """A coupling network with its precomputed spectral data.

    ``mode_stiffness[m]`` is the restoring stiffness of Fourier mode m
    over the body index; mode 0 (rigid translation) always has
    stiffness exactly zero, and mode m mirrors mode N - m.  The dense
    ``pair_matrix`` drives the direct force path; ``mode_basis`` is an
    orthonormal real cos/sin eigenbasis with ``basis_stiffness`` giving
    the stiffness of each basis column.
    """

    N: int
    couplings: CouplingVector
    mode_stiffness: np.ndarray    # (N,)
    pair_matrix: np.ndarray       # (N, N)
    pair_row_sum: np.ndarray      # (N,)
    mode_basis: np.ndarray        # (N, N), orthonormal columns
    basis_stiffness: np.ndarray   # (N,), stiffness per basis column


def _stiffness_spectrum(N: int, kappas: np.ndarray) -> np.ndarray:
    n = N // 2
    lam = np.zeros(N)
    for m in range(n + 1):
        total = 0.0
        for ell in range(1, n + 1):
            # The diametral bond of even N has no mirror partner, so it
            # enters once instead of twice.
            weight = 1.0 if (N % 2 == 0 and ell == n) else 2.0
            total += kappas[ell - 1] * weight * (1.0 - math.cos(math.tau * ell * m / N))
        lam[m] = total
        if 0 < m < N - m:
            lam[N - m] = total
    return lam


def _real_mode_basis(N: int, lam: np.ndarray):
    """Orthonormal cos/sin eigenbasis of any symmetric circulant on Z_N."""
    basis = np.empty((N, N))
    stiff = np.empty(N)
    k = np.arange(N)
    basis[:, 0] = 1.0 / math.sqrt(N)
    stiff[0] = lam[0]
    col = 1
    for m in range(1, (N - 1) // 2 + 1):
        ang = math.tau * m * k / N
        basis[:, col] = math.sqrt(2.0 / N) * np.cos(ang)
        basis[:, col + 1] = math.sqrt(2.0 / N) * np.sin(ang)
        stiff[col] = stiff[col + 1] = lam[m]
        col += 2
    if N % 2 == 0:
        basis[:, N - 1] = np.where(k % 2 == 0, 1.0, -1.0) / math.sqrt(N)
        stiff[N - 1] = lam[N // 2]
    return basis, stiff


def build_interaction(N: int, couplings: CouplingVector) -> InteractionSpec:
    """Precompute force and spectral data for a coupling network.

    For couplings solved on an admissible (N, p), the spectrum pins
    mode 1 to stiffness 1 and mode p mod N to stiffness p^2; that is
    the mode-space restatement of the balance condition.

    Raises:
        ValueError: If the coupling vector is not sized for N.
    """
    if couplings.N != N:
        raise ValueError(
            f"couplings sized for N={couplings.N}, expected N={N}"
        )
    lam = _stiffness_spectrum(N, couplings.kappas)
    pair = couplings.pair_matrix()
    basis, stiff = _real_mode_basis(N, lam)
    return InteractionSpec(N, couplings, lam, pair, pair.sum(axis=1), basis, stiff)


def accel(state: SystemState, spec: InteractionSpec) -> np.ndarray:
    """Direct pairwise force sum: sum over partners of kappa * (q_l - q_j).

    This is the O(N^2) reference path; the spectral engine never calls it.

    Raises:
        ValueError: If state and spec disagree on the body count.
    """
    if state.n_bodies != spec.N:
        raise ValueError(
            f"state has {state.n_bodies} bodies, spec expects {spec.N}"
        )
    pos = state.positions
    return spec.pair_matrix @ pos - spec.pair_row_sum[:, None] * pos


def rk4_integrate(initial: SystemState, spec: InteractionSpec,
                  dt: float, steps: int) -> Trajectory:
    """Classical fixed-step 4th-order Runge-Kutta integration.

    Deterministic for fixed inputs; the returned trajectory includes the
    initial state and one sample per step.

    Raises:
        ValueError: If dt <= 0 or steps < 1, or on a dimension mismatch.
    """
    if dt <= 0:
        raise ValueError(f"step size must be positive, got dt={dt}")
    if steps < 1:
        raise ValueError(f"need at least one step, got {steps}")
    if initial.n_bodies != spec.N:
        raise ValueError(
            f"state has {initial.n_bodies} bodies, spec expects {spec.N}"
        )
    kmat = spec.pair_matrix
    row_sum = spec.pair_row_sum[:, None]

    def force(q):
        return kmat @ q - row_sum * q

    pos = initial.positions.copy()
    vel = initial.velocities.copy()
    t = initial.t
    samples = [SystemState(t, pos.copy(), vel.copy())]
    for i in range(1, steps + 1):
        k1p = vel
        k1v = force(pos)
        k2p = vel + 0.5 * dt * k1v
        k2v = force(pos + 0.5 * dt * k1p)
        k3p = vel + 0.5 * dt * k2v
        k3v = force(pos + 0.5 * dt * k2p)
        k4p = vel + dt * k3v
        k4v = force(pos + dt * k3p)
        pos = pos + (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        vel = vel + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        t = initial.t + i * dt
        samples.append(SystemState(t, pos, vel))
    return Trajectory(samples)


def spectral_propagate(initial: SystemState, spec: InteractionSpec,
                       t: float) -> SystemState:
    """Exact propagation by time t through the circulant eigenbasis.

    Each mode evolves in closed form: harmonically for positive
    stiffness, linearly for zero, hyperbolically for negative (free
    coupling tails can produce unstable modes; the choreography never
    excites them, but perturbed states may).  Exact for every t up to
    roundoff.

    Raises:
        ValueError: On a dimension mismatch.
    """
    if initial.n_bodies != spec.N:
        raise ValueError(
            f"state has {initial.n_bodies} bodies, spec expects {spec.N}"
        )
    if t == 0.0:
        return SystemState(initial.t, initial.positions.copy(),
                           initial.velocities.copy())
    basis = spec.mode_basis
    lam = spec.basis_stiffness
    # Mode amplitudes of each coordinate.
    aq = basis.T @ initial.positions
    av = basis.T @ initial.velocities
    # q(t) = C q0 + S v0, v(t) = -lam S q0 + C v0 in every branch.
    cos_f = np.empty_like(lam)
    sin_f = np.empty_like(lam)
    for i, lm in enumerate(lam):
        if lm > 0.0:
            w = math.sqrt(lm)
            cos_f[i] = math.cos(w * t)
            sin_f[i] = math.sin(w * t) / w
        elif lm < 0.0:
            mu = math.sqrt(-lm)
            cos_f[i] = math.cosh(mu * t)
            sin_f[i] = math.sinh(mu * t) / mu
        else:
            cos_f[i] = 1.0
            sin_f[i] = t
    new_aq = cos_f[:, None] * aq + sin_f[:, None] * av
    new_av = (-lam * sin_f)[:, None] * aq + cos_f[:, None] * av
    return SystemState(initial.t + t, basis @ new_aq, basis @ new_av)
