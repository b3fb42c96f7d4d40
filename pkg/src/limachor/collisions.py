"""Collision analysis for choreographies on a p-limacon.

Bodies 0 and k stay at squared distance
A^2 + B^2 + 2AB cos((p - 1)t + phase) with A = 2|a| sin(pi k / N) and
B = 2|b sin(pi p k / N)|, so the pair can meet exactly when A = B, and
only at the |p - 1| instants per period where the two rotating terms
anti-align.  The analytic predicate built on that condition is
cross-checked by a numeric minimum-distance oracle that knows nothing
about it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from limachor.kinematics import ChoreoConfig, body_state

# A configuration this close to the ratio locus is examined by the
# refined oracle; it is certified as colliding only below CERTIFY_TOL,
# otherwise flagged as suspect.
SUSPECT_TOL = 1e-8
CERTIFY_TOL = 1e-10

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class CollisionRatio:
    """One dangerous value of a/b, tagged by the separation that causes it."""

    k: int
    ratio: float


@dataclass(frozen=True)
class CollisionWitness:
    """A concrete collision event: who meets whom, when, and where."""

    k: int
    t_star: float
    bodies: tuple[int, int]
    point: np.ndarray  # (2,)
    min_distance: float

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "t": self.t_star,
            "bodies": [self.bodies[0], self.bodies[1]],
            "point": [float(self.point[0]), float(self.point[1])],
            "distance": self.min_distance,
        }


@dataclass(frozen=True)
class CollisionReport:
    """Collision verdict with witnesses sorted by separation then time.

    ``suspects`` lists separations that sit within SUSPECT_TOL of the
    collision locus without being certified by the oracle.
    """

    collides: bool
    witnesses: list[CollisionWitness]
    suspects: list[int] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "collides": self.collides,
            "witnesses": [w.to_json_dict() for w in self.witnesses],
            "suspects": list(self.suspects),
        }


@dataclass(frozen=True)
class PairMinimum:
    """Numeric minimum of |q_0(t) - q_k(t)| over one period."""

    min_distance: float
    argmin_t: float


def collision_ratios(N: int, p: int) -> list[CollisionRatio]:
    """All a/b values at which some body pair can collide.

    For each separation k the dangerous quotient is
    +- sin(pi p k / N) / sin(pi k / N); exact zeros are excluded (they
    would require a = 0) and values repeated across separations are
    deduplicated, keeping the smallest k.  At most 2(N - 1) values.
    """
    if N < 4:
        raise ValueError(f"need N >= 4, got {N}")
    if p in (-1, 0, 1):
        raise ValueError(f"p={p} does not define a limacon; need |p| >= 2")
    found: list[CollisionRatio] = []
    for k in range(1, N):
        if (p * k) % N == 0:
            continue  # sine vanishes exactly: no finite a/b
        magnitude = abs(math.sin(math.pi * p * k / N) / math.sin(math.pi * k / N))
        for value in (magnitude, -magnitude):
            if not any(abs(value - r.ratio) <= 1e-12 for r in found):
                found.append(CollisionRatio(k, value))
    return sorted(found, key=lambda r: (r.k, r.ratio))


def _pair_amplitudes(config: ChoreoConfig, k: int) -> tuple[float, float]:
    """Signed phasor amplitudes of q_0 - q_k: (a sin(pi k/N), b sin(pi p k/N)).

    The second sine is zeroed exactly when p*k is a multiple of N.
    """
    curve, n = config.curve, config.N
    first = curve.a * math.sin(math.pi * k / n)
    if (curve.p * k) % n == 0:
        second = 0.0
    else:
        second = curve.b * math.sin(math.pi * curve.p * k / n)
    return first, second


def _pair_sq_dist(config: ChoreoConfig, k: int, ts: np.ndarray) -> np.ndarray:
    """Squared distance between bodies 0 and k, straight from the curve."""
    a, b, p = config.curve.a, config.curve.b, config.curve.p
    shift = math.tau * k / config.N
    dx = (a * (np.cos(ts) - np.cos(ts + shift))
          + b * (np.cos(p * ts) - np.cos(p * (ts + shift))))
    dy = (a * (np.sin(ts) - np.sin(ts + shift))
          + b * (np.sin(p * ts) - np.sin(p * (ts + shift))))
    return dx * dx + dy * dy


def min_pair_distance(config: ChoreoConfig, k: int,
                      grid_size: int = 1024) -> PairMinimum:
    """Numeric minimum of |q_0(t) - q_k(t)| over t in [0, 2*pi).

    Dense sampling followed by golden-section refinement of the squared
    distance, to 1e-12 in t.  This oracle is independent of the
    analytic collision predicate.

    Raises:
        ValueError: If grid_size < 8.
        IndexError: If k is outside [1, N-1].
    """
    if grid_size < 8:
        raise ValueError(f"grid_size must be at least 8, got {grid_size}")
    if not 1 <= k <= config.N - 1:
        raise IndexError(f"separation {k} outside [1, {config.N - 1}]")
    ts = np.linspace(0.0, math.tau, grid_size, endpoint=False)
    sq = _pair_sq_dist(config, k, ts)
    best = int(np.argmin(sq))
    h = math.tau / grid_size
    lo, hi = ts[best] - h, ts[best] + h

    def f(t: float) -> float:
        return float(_pair_sq_dist(config, k, np.array([t]))[0])

    while hi - lo > 1e-12:
        c = hi - _GOLDEN * (hi - lo)
        d = lo + _GOLDEN * (hi - lo)
        if f(c) < f(d):
            hi = d
        else:
            lo = c
    t_min = 0.5 * (lo + hi)
    return PairMinimum(math.sqrt(max(f(t_min), 0.0)), t_min % math.tau)


def _witnesses_for(config: ChoreoConfig, k: int) -> list[CollisionWitness]:
    """All collision events with separation k, assuming the locus is hit."""
    n, p = config.N, config.curve.p
    first, second = _pair_amplitudes(config, k)
    # Bodies 0 and k meet when the two rotating terms of their
    # difference anti-align: (p-1) t + pi (p-1) k / N = phase0 mod 2*pi.
    phase0 = math.pi if first * second > 0 else 0.0
    base = (phase0 - math.pi * (p - 1) * k / n) / (p - 1)
    events = []
    for r in range(abs(p - 1)):
        t_root = (base + math.tau * r / (p - 1)) % math.tau
        for j in range(n):
            t_j = (t_root - math.tau * j / n) % math.tau
            pair = (j, (j + k) % n)
            pos_1, _ = body_state(config, pair[0], t_j)
            pos_2, _ = body_state(config, pair[1], t_j)
            events.append(CollisionWitness(
                k=k,
                t_star=t_j,
                bodies=pair,
                point=0.5 * (pos_1 + pos_2),
                min_distance=float(np.linalg.norm(pos_1 - pos_2)),
            ))
    return events


def has_collision(config: ChoreoConfig,
                  suspect_tol: float = SUSPECT_TOL,
                  certify_tol: float = CERTIFY_TOL) -> CollisionReport:
    """Decide whether the choreography collides, with explicit witnesses.

    A separation k is a candidate when the two phasor magnitudes of
    q_0 - q_k agree to within ``suspect_tol``; candidates are certified
    by the refined numeric oracle at ``certify_tol`` and expanded into
    the full set of colliding body pairs.  Candidates the oracle cannot
    certify are reported as suspects.
    """
    witnesses: list[CollisionWitness] = []
    suspects: list[int] = []
    for k in range(1, config.N):
        first, second = _pair_amplitudes(config, k)
        gap = abs(2.0 * abs(first) - 2.0 * abs(second))
        if gap > suspect_tol or second == 0.0:
            continue
        oracle = min_pair_distance(config, k)
        if oracle.min_distance <= certify_tol:
            witnesses.extend(_witnesses_for(config, k))
        else:
            suspects.append(k)
    witnesses.sort(key=lambda w: (w.k, w.t_star, w.bodies))
    return CollisionReport(bool(witnesses), witnesses, suspects)
