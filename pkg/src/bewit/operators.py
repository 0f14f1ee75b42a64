"""Measurement families and detection operators.

Alice's vectors |A_p> = a|0> - b v_p and Bob's basis |B_p> = (|0> + sqrt(d-1) v_p)/sqrt(d)
are both built from the simplex frame {v_p}.  The chart uses a in (0, 1] and
b = sqrt(1 - a^2) >= 0 throughout; Alice's frame carries a relative minus sign,
which is the same thing as relabeling v_p -> -v_p and keeps nonnegative b on
the branch where the family's correlation inequalities can be violated.
Flipping the sign of b would double-cover the setting space, so it is never
exposed.

Operators are assembled from rank-1 outer products only, so every matrix is
symmetric to the last bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .simplex import simplex_frame


@dataclass(frozen=True)
class MeasurementSetting:
    """A measurement direction a in (0, 1] for dimension d (b is derived)."""

    d: int
    a: float
    b: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", math.sqrt(max(0.0, 1.0 - self.a * self.a)))


def make_setting(d: int, a: float) -> MeasurementSetting:
    if not isinstance(d, (int, np.integer)) or d < 3:
        raise ValueError(f"dimension must be an integer >= 3, got {d!r}")
    a = float(a)
    if not 0.0 < a <= 1.0:
        raise ValueError(f"measurement direction a must lie in (0, 1], got {a}")
    return MeasurementSetting(int(d), a)


@dataclass(frozen=True)
class SteeringSetting:
    setting: MeasurementSetting
    s: float

    def __post_init__(self) -> None:
        if not 0.0 < self.s < 1.0:
            raise ValueError(f"steering weight s must lie in (0, 1), got {self.s}")


@dataclass(frozen=True)
class WitnessSetting:
    setting: MeasurementSetting
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")
        if self.beta < 0.0:
            raise ValueError(f"beta must be nonnegative, got {self.beta}")


def alice_basis(setting: MeasurementSetting, frame: np.ndarray | None = None) -> np.ndarray:
    """Rows |A_p> = a|0> - b v_p; Gram(p != q) = a^2 - b^2/(d-1)."""
    d = setting.d
    if frame is None:
        frame = simplex_frame(d)
    vecs = -setting.b * frame
    vecs[:, 0] += setting.a
    return vecs


def bob_basis(d: int, frame: np.ndarray | None = None) -> np.ndarray:
    """Rows |B_p> = (|0> + sqrt(d-1) v_p)/sqrt(d); an orthonormal basis."""
    if frame is None:
        frame = simplex_frame(d)
    vecs = math.sqrt(d - 1) * frame
    vecs[:, 0] += 1.0
    return vecs / math.sqrt(d)


def _projectors(vectors: np.ndarray) -> list[np.ndarray]:
    return [np.outer(v, v) for v in vectors]


def _p0(d: int) -> np.ndarray:
    p = np.zeros((d, d))
    p[0, 0] = 1.0
    return p


def _p0_bar(d: int) -> np.ndarray:
    p = np.eye(d)
    p[0, 0] = 0.0
    return p


def bell_operator(setting: MeasurementSetting) -> np.ndarray:
    """A_0 (x) P0  -  sum_{p>=1} (I - A_p) (x) P0  -  sum_p A_p (x) B_p."""
    d = setting.d
    frame = simplex_frame(d)
    aproj = _projectors(alice_basis(setting, frame))
    bproj = _projectors(bob_basis(d, frame))
    p0 = _p0(d)
    eye = np.eye(d)
    w = np.kron(aproj[0], p0)
    for p in range(1, d):
        w -= np.kron(eye - aproj[p], p0)
    for p in range(d):
        w -= np.kron(aproj[p], bproj[p])
    return w


@dataclass(frozen=True)
class SteeringBlocks:
    """The single-qudit blocks of the steering operator."""

    z_dd: np.ndarray  # (1-s) a^2 P0
    z_d0: np.ndarray  # (1/s - 1) b^2 (I - P0)
    z_d1: np.ndarray  # equals z_dd
    z_pd: tuple[np.ndarray, ...]  # Alice projectors


def z_operators(steering: SteeringSetting) -> SteeringBlocks:
    """Blocks satisfying max-eig(z_dd - z_dtau - z_pd[p]) <= 0 for all p, tau."""
    st = steering.setting
    d, s = st.d, steering.s
    z_dd = (1.0 - s) * st.a**2 * _p0(d)
    z_d0 = (1.0 / s - 1.0) * st.b**2 * _p0_bar(d)
    z_pd = tuple(_projectors(alice_basis(st)))
    return SteeringBlocks(z_dd=z_dd, z_d0=z_d0, z_d1=z_dd.copy(), z_pd=z_pd)


def steering_operator(steering: SteeringSetting) -> np.ndarray:
    """z_dd (x) P0  -  z_d0 (x) P0  -  sum_p z_pd[p] (x) B_p."""
    d = steering.setting.d
    frame = simplex_frame(d)
    blocks = z_operators(steering)
    bproj = _projectors(bob_basis(d, frame))
    p0 = _p0(d)
    w = np.kron(blocks.z_dd - blocks.z_d0, p0)
    for p in range(d):
        w -= np.kron(blocks.z_pd[p], bproj[p])
    return w


def witness_operator(witness: WitnessSetting) -> np.ndarray:
    """(1-alpha) a^2 P0 (x) P0  -  beta b^2 (I-P0) (x) P0  -  sum_p A_p (x) B_p."""
    st = witness.setting
    d = st.d
    frame = simplex_frame(d)
    aproj = _projectors(alice_basis(st, frame))
    bproj = _projectors(bob_basis(d, frame))
    p0 = _p0(d)
    w = (1.0 - witness.alpha) * st.a**2 * np.kron(p0, p0)
    w -= witness.beta * st.b**2 * np.kron(_p0_bar(d), p0)
    for p in range(d):
        w -= np.kron(aproj[p], bproj[p])
    return w


def witness_from_bell(setting: MeasurementSetting) -> tuple[float, float]:
    """(alpha, beta) for which the witness operator coincides with the Bell one."""
    d, a2, b2 = setting.d, setting.a**2, setting.b**2
    return (d - 1) * b2 / a2, (d - 1) / b2 - d / (d - 1)


def witness_from_steering(steering: SteeringSetting) -> tuple[float, float]:
    """(alpha, beta) for which the witness operator coincides with the steering one."""
    return steering.s, 1.0 / steering.s - 1.0
