"""A two-parameter family of two-qudit states invariant under partial transpose.

For dimension d >= 3 the family is parametrized by (x, y) in the open domain

    D = { x > 0,  y > 0,  delta > 0 },     delta = z^2/(d-2) - x*y,

with z = sqrt(1 - x^2 - y^2).  The (unnormalized) density matrix is assembled
from three mutually orthogonal groups of vectors,

    |Psi>    = sum_i |i, i>                                  (norm^2 = d)
    |psi_ij> = |i, j> - |j, i>,  i > j >= 1                  (norm^2 = 2)
    |psi_k>  = x|0, k> + y|k, 0> + z|phi_k>,  k = 1..d-1     (norm^2 = 1)

where |phi_k> = (d-1)^{3/2} / (d sqrt(d-2)) * sum_p |v_p, v_p><v_p|k> is built
from the simplex frame, and

    rho = (x*y |Psi><Psi| + delta * sum |psi_ij><psi_ij| + sum |psi_k><psi_k|) / R,
    R   = d*x*y + (d-1)(d-2)*delta + (d-1).

The partial transpose on the first qudit maps rho to itself entrywise, so the
state is PPT by construction; its nonzero spectrum is {d*x*y/R} once,
{2*delta/R} with multiplicity (d-1)(d-2)/2 and {1/R} with multiplicity d-1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import min_eigenvalue, partial_transpose_first
from .simplex import simplex_frame

#: Largest dimension for which d^2 x d^2 matrices are materialized densely.
MAX_DENSE_DIM = 24


class OutsideDomain(ValueError):
    """Parameters fall outside the open domain D of the family."""


@dataclass(frozen=True)
class StateParams:
    """Family parameters with derived quantities filled in.

    Direct construction does not enforce membership in the open domain (this
    is deliberate: boundary probes with delta == 0 are legitimate for region
    diagnostics).  Use make_params for validated construction.
    """

    d: int
    x: float
    y: float
    z: float = field(init=False)
    ztilde: float = field(init=False)
    delta: float = field(init=False)
    big_r: float = field(init=False)

    def __post_init__(self) -> None:
        d, x, y = self.d, self.x, self.y
        z2 = 1.0 - x * x - y * y
        z = math.sqrt(z2) if z2 > 0.0 else 0.0
        delta = z2 / (d - 2) - x * y
        big_r = d * x * y + (d - 1) * (d - 2) * delta + (d - 1)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "ztilde", z * math.sqrt(d - 2))
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "big_r", big_r)

    def margins(self) -> dict[str, float]:
        """Signed slack of each domain constraint (positive = satisfied)."""
        return {
            "x": self.x,
            "y": self.y,
            "unit_disc": 1.0 - self.x * self.x - self.y * self.y,
            "delta": self.delta,
        }


def make_params(d: int, x: float, y: float) -> StateParams:
    """Validated construction of StateParams; raises OutsideDomain off D."""
    if not isinstance(d, (int, np.integer)) or d < 3:
        raise ValueError(f"dimension must be an integer >= 3, got {d!r}")
    x = float(x)
    y = float(y)
    params = StateParams(int(d), x, y)
    margins = params.margins()
    for name, slack in margins.items():
        if not slack > 0.0:
            raise OutsideDomain(
                f"constraint {name} violated (slack {slack:.3e}) at d={d}, x={x}, y={y}"
            )
    return params


@dataclass(frozen=True)
class StateBundle:
    """The assembled state together with every vector that builds it."""

    params: StateParams
    frame: np.ndarray  # simplex frame rows used throughout
    psi: np.ndarray  # maximally entangled direction, norm^2 = d
    pair_vectors: tuple[np.ndarray, ...]  # antisymmetric |psi_ij>, i > j >= 1
    phi_vectors: tuple[np.ndarray, ...]  # |phi_k>, unit norm
    cross_vectors: tuple[np.ndarray, ...]  # |psi_k>, unit norm
    rho: np.ndarray


def build_state(params: StateParams) -> StateBundle:
    """Materialize rho (dense, d^2 x d^2) and its constituent vectors."""
    d = params.d
    if d > MAX_DENSE_DIM:
        raise ValueError(
            f"dense construction is capped at d <= {MAX_DENSE_DIM} (matrix side {MAX_DENSE_DIM**2}); got d={d}"
        )
    x, y, z = params.x, params.y, params.z
    frame = simplex_frame(d)

    psi = np.eye(d).reshape(-1)  # sum_i e_i (x) e_i

    pair_vectors = []
    for i in range(2, d):
        for j in range(1, i):
            v = np.zeros(d * d)
            v[i * d + j] = 1.0
            v[j * d + i] = -1.0
            pair_vectors.append(v)

    # phi_k[(i,j)] = coef * sum_p v_p[i] v_p[j] v_p[k]
    coef = (d - 1) ** 1.5 / (d * math.sqrt(d - 2))
    third_moment = np.einsum("pi,pj,pk->ijk", frame, frame, frame)
    phi_vectors = [coef * third_moment[:, :, k].reshape(-1) for k in range(1, d)]

    cross_vectors = []
    for k in range(1, d):
        v = z * phi_vectors[k - 1].copy()
        v[0 * d + k] += x
        v[k * d + 0] += y
        cross_vectors.append(v)

    rho = (params.x * params.y / params.big_r) * np.outer(psi, psi)
    for v in pair_vectors:
        rho += (params.delta / params.big_r) * np.outer(v, v)
    for v in cross_vectors:
        rho += (1.0 / params.big_r) * np.outer(v, v)

    return StateBundle(
        params=params,
        frame=frame,
        psi=psi,
        pair_vectors=tuple(pair_vectors),
        phi_vectors=tuple(phi_vectors),
        cross_vectors=tuple(cross_vectors),
        rho=rho,
    )


def expected_spectrum(params: StateParams) -> np.ndarray:
    """Full expected spectrum (ascending, zeros included)."""
    d = params.d
    nonzero = (
        [d * params.x * params.y / params.big_r]
        + [2.0 * params.delta / params.big_r] * ((d - 1) * (d - 2) // 2)
        + [1.0 / params.big_r] * (d - 1)
    )
    full = np.zeros(d * d)
    full[-len(nonzero) :] = sorted(nonzero)
    return np.sort(full)


def check_ppt(bundle: StateBundle) -> tuple[float, float]:
    """(min eigenvalue of the partial transpose, max |rho^PT - rho|)."""
    d = bundle.params.d
    pt = partial_transpose_first(bundle.rho, d)
    residual = float(np.max(np.abs(pt - bundle.rho)))
    return min_eigenvalue(pt), residual


def swap_qudits(bundle: StateBundle) -> np.ndarray:
    """rho with the two qudits exchanged; equals the state built at (y, x)."""
    d = bundle.params.d
    perm = np.arange(d * d).reshape(d, d).T.reshape(-1)
    return bundle.rho[np.ix_(perm, perm)]


def sample_domain(d: int, n: int, rng: np.random.Generator, min_delta: float = 0.0) -> list[tuple[float, float]]:
    """Rejection-sample n parameter pairs uniformly from D inside (0,1)^2."""
    out: list[tuple[float, float]] = []
    while len(out) < n:
        x = float(rng.uniform())
        y = float(rng.uniform())
        z2 = 1.0 - x * x - y * y
        if x <= 0.0 or y <= 0.0 or z2 <= 0.0:
            continue
        if z2 / (d - 2) - x * y > min_delta:
            out.append((x, y))
    return out
