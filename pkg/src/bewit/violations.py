"""Violation functionals: closed 2x2 reductions, direct traces, and optimizers.

For every detection operator W in this package (Bell, steering, witness) the
expectation on a family state reduces exactly to

    Tr(rho W) = -(d-1)/R * (a, -b) M (a, -b)^T,      b = sqrt(1 - a^2),

with a kind-dependent symmetric 2x2 matrix M whose off-diagonal is always
x(2y + ztilde)/sqrt(d-1) > 0.  A violation (positive expectation) therefore
exists iff det M < 0, the best direction is the eigenvector of the negative
eigenvalue lambda_-, and the maximal value is (d-1) |lambda_-| / R.

The evaluation chart keeps b nonnegative; the (a, -b) contraction above is
the reduced-side image of Alice's frame sign convention (see operators).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .regions import bounds
from .states import StateParams, make_params

KIND_BELL = "bell"
KIND_STEER = "steer"
KIND_WITNESS = "witness"
KINDS = (KIND_BELL, KIND_STEER, KIND_WITNESS)

#: Open-interval guard for the steering weight search.
S_EDGE = 1e-9

#: Deterministic multistart grid (fractions of the bounding triangle).
X_START_FRACTIONS = (0.30, 0.45, 0.60, 0.75, 0.90)
Y_START_FRACTIONS = (0.10, 0.25, 0.45, 0.65, 0.85)

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class NoViolation(RuntimeError):
    """det M >= 0: the state does not violate this functional at (x, y)."""


@dataclass(frozen=True)
class ReducedForm:
    """The closed 2x2 reduction of Tr(rho W) for one functional kind."""

    kind: str
    params: StateParams
    m: np.ndarray  # symmetric 2x2
    extra: float | tuple[float, float] | None  # s for steer, (alpha, beta) for witness


@dataclass(frozen=True)
class ViolationReport:
    d: int
    kind: str
    x: float
    y: float
    a: float
    s: float | None
    value: float
    restarts: int
    iterations: int
    converged: bool

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "kind": self.kind,
            "x": self.x,
            "y": self.y,
            "a": self.a,
            "s": self.s,
            "value": self.value,
            "restarts": self.restarts,
            "converged": self.converged,
        }


def reduced_entries(
    kind: str, d: int, x: float, y: float, ztilde: float, extra
) -> tuple[float, float, float]:
    """(m00, m01, m11) from raw coordinates; no domain validation.

    The raw form is shared with boundary probes where delta == 0 exactly.
    """
    m01 = x * (2.0 * y + ztilde) / math.sqrt(d - 1)
    if kind == KIND_BELL:
        m00 = x * x + (d - 1) * y * y
        m11 = (2.0 * y * ztilde + ztilde * ztilde) / (d - 1) + 2.0 * x * y + (d - 2) * y * y
    elif kind == KIND_STEER:
        s = float(extra)
        m00 = x * x + s * x * y / (d - 1)
        m11 = (y + ztilde) ** 2 / (d - 1) + x * y + (1.0 - s) / s * y * y
    elif kind == KIND_WITNESS:
        alpha, beta = extra
        m00 = x * x + alpha * x * y / (d - 1)
        m11 = (y + ztilde) ** 2 / (d - 1) + x * y + beta * y * y
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return m00, m01, m11


def m_matrix(kind: str, params: StateParams, extra=None) -> ReducedForm:
    if kind == KIND_STEER and not (extra and 0.0 < float(extra) < 1.0):
        raise ValueError(f"steer kind needs s in (0, 1), got {extra!r}")
    if kind == KIND_WITNESS and (extra is None or len(extra) != 2):
        raise ValueError("witness kind needs extra=(alpha, beta)")
    m00, m01, m11 = reduced_entries(kind, params.d, params.x, params.y, params.ztilde, extra)
    return ReducedForm(kind=kind, params=params, m=np.array([[m00, m01], [m01, m11]]), extra=extra)


def lambda_minus(m00: float, m01: float, m11: float) -> float:
    """Smaller eigenvalue of [[m00, m01], [m01, m11]], stable for tiny det."""
    det = m00 * m11 - m01 * m01
    tr = m00 + m11
    disc = math.sqrt(max(tr * tr - 4.0 * det, 0.0))
    return 2.0 * det / (tr + disc)


def expectation_reduced(rf: ReducedForm, a: float) -> float:
    """Tr(rho W) at measurement direction a (b = sqrt(1-a^2) in the chart)."""
    if not 0.0 < a <= 1.0:
        raise ValueError(f"measurement direction a must lie in (0, 1], got {a}")
    b = math.sqrt(max(0.0, 1.0 - a * a))
    m = rf.m
    quad = a * a * m[0, 0] - 2.0 * a * b * m[0, 1] + b * b * m[1, 1]
    p = rf.params
    return -(p.d - 1) / p.big_r * quad


def expectation_direct(operator: np.ndarray, rho: np.ndarray) -> float:
    """Tr(operator @ rho) for matching dense matrices."""
    operator = np.asarray(operator, dtype=float)
    rho = np.asarray(rho, dtype=float)
    if operator.shape != rho.shape:
        raise ValueError(f"shape mismatch: {operator.shape} vs {rho.shape}")
    return float(np.einsum("ij,ji->", operator, rho))


def optimal_direction(rf: ReducedForm) -> tuple[float, float, float]:
    """(a, b, value) of the best measurement direction.

    (a, b) is the unit eigenvector of M for its negative eigenvalue with
    a >= 0 (the b component comes out negative since the off-diagonal of M is
    positive); value = (d-1) |lambda_-| / R = expectation_reduced(rf, a).
    """
    m = rf.m
    lam = lambda_minus(m[0, 0], m[0, 1], m[1, 1])
    if lam >= 0.0:
        raise NoViolation(
            f"no violating direction for kind={rf.kind} at "
            f"(x, y) = ({rf.params.x}, {rf.params.y}): det M = {np.linalg.det(m):.3e} >= 0"
        )
    vec = np.array([m[0, 1], lam - m[0, 0]])
    vec /= math.hypot(vec[0], vec[1])
    if vec[0] < 0.0 or (vec[0] == 0.0 and vec[1] < 0.0):
        vec = -vec
    p = rf.params
    value = (p.d - 1) * (-lam) / p.big_r
    return float(vec[0]), float(vec[1]), value


# ---------------------------------------------------------------------------
# closed-form scans used by optimizers and region diagnostics


def bell_det(d: int, x: float, y: float) -> float:
    """det M for the Bell functional from raw (x, y); x^2 + y^2 < 1 assumed."""
    ztilde = math.sqrt(max(0.0, (d - 2) * (1.0 - x * x - y * y)))
    m00, m01, m11 = reduced_entries(KIND_BELL, d, x, y, ztilde, None)
    return m00 * m11 - m01 * m01


def steer_det_min(d: int, x: float, y: float) -> tuple[float, float]:
    """(s, det) minimizing det M over the steering weight s in (0, 1).

    det(s) = x^2 L + x^2 y^2 / s + s x y L / (d-1) + x y^3/(d-1) - m01^2 is
    convex in s with interior stationary point s* = sqrt((d-1) x y / L); if
    s* >= 1 the infimum sits at the open right edge.
    """
    z2 = 1.0 - x * x - y * y
    ztilde = math.sqrt(max(0.0, (d - 2) * z2))
    ell = (y + ztilde) ** 2 / (d - 1) + x * y - y * y
    if ell <= 0.0:
        s = 1.0 - S_EDGE
    else:
        s = math.sqrt((d - 1) * x * y / ell)
        s = min(max(s, S_EDGE), 1.0 - S_EDGE)
    m00, m01, m11 = reduced_entries(KIND_STEER, d, x, y, ztilde, s)
    return s, m00 * m11 - m01 * m01


def steer_lambda_min(d: int, x: float, y: float) -> tuple[float, float]:
    """(s, lambda_-) minimizing the smaller eigenvalue of M over s in (0, 1).

    Golden-section over the full open interval; the closed-form det minimizer
    s* seeds one extra candidate so the result never loses to it.
    """
    ztilde = math.sqrt(max(0.0, (d - 2) * (1.0 - x * x - y * y)))

    def lam_at(s: float) -> float:
        m00, m01, m11 = reduced_entries(KIND_STEER, d, x, y, ztilde, s)
        return lambda_minus(m00, m01, m11)

    lo, hi = S_EDGE, 1.0 - S_EDGE
    c = hi - _GOLDEN * (hi - lo)
    e = lo + _GOLDEN * (hi - lo)
    fc, fe = lam_at(c), lam_at(e)
    for _ in range(70):
        if fc < fe:
            hi, e, fe = e, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = lam_at(c)
        else:
            lo, c, fc = c, e, fe
            e = lo + _GOLDEN * (hi - lo)
            fe = lam_at(e)
    s_best, lam_best = (c, fc) if fc < fe else (e, fe)
    s_star, _ = steer_det_min(d, x, y)
    lam_star = lam_at(s_star)
    if lam_star < lam_best:
        return s_star, lam_star
    return s_best, lam_best


# ---------------------------------------------------------------------------
# analytic parametrization of the Bell-violating set


def _slope_terms(d: int) -> tuple[float, float]:
    """(dtilde_plus, dtilde_minus): bounding slopes in lambda = x/(y sqrt(d-1))."""
    b = bounds(d)
    root = math.sqrt(d - 1)
    return b.ratio_plus / root, b.ratio_minus / root


def bell_parametrization(d: int, lam: float, theta: float) -> StateParams:
    """Map (lam, theta) with lam > dtilde_plus, theta in (0, pi) into the
    Bell-violating set; det M there equals -y^4 Gamma^2 sin^2(theta)."""
    dt_plus, dt_minus = _slope_terms(d)
    if not lam > dt_plus:
        raise ValueError(f"need lam > {dt_plus}, got {lam}")
    if not 0.0 < theta < math.pi:
        raise ValueError(f"need theta in (0, pi), got {theta}")
    gamma2 = (1.0 + lam * lam) * (lam - dt_plus) * (lam + dt_minus)
    gamma = math.sqrt(gamma2)
    y = 1.0 / math.sqrt(
        (lam * lam - 1.0 - gamma * math.cos(theta)) ** 2 / (d - 2)
        + (d - 1) * lam * lam
        + 1.0
    )
    x = y * lam * math.sqrt(d - 1)
    return make_params(d, x, y)


def bell_gamma2(d: int, lam: float) -> float:
    """Gamma^2 = (1 + lam^2)(lam - dtilde_plus)(lam + dtilde_minus)."""
    dt_plus, dt_minus = _slope_terms(d)
    return (1.0 + lam * lam) * (lam - dt_plus) * (lam + dt_minus)


# ---------------------------------------------------------------------------
# classical bounds by strategy enumeration

_MAX_ENUM_D = 12


def lhv_bound(d: int) -> float:
    """Exact maximum of the correlation functional over deterministic strategies.

    Alice holds one bit per setting (does A_p fire or not); Bob holds one
    d-valued outcome for B and one bit for B'.  The functional is
    P(A_0 B'_0) - sum_{p>=1} P(Abar_p B'_0) - sum_p P(A_p B_p).
    """
    if not 3 <= d <= _MAX_ENUM_D:
        raise ValueError(f"enumeration supports 3 <= d <= {_MAX_ENUM_D}, got {d}")
    best = -(d + 1)
    for bits in itertools.product((0, 1), repeat=d):
        misses = sum(bits[1:])  # settings p >= 1 whose complement fires
        for q in range(d):
            hit = 1 if bits[q] == 0 else 0
            # Bob's bit b' = 0 activates the primed terms; b' = 1 removes them.
            v_active = (1 if bits[0] == 0 else 0) - misses - hit
            v_inactive = -hit
            v = v_active if v_active > v_inactive else v_inactive
            if v > best:
                best = v
    return float(best)


def hardy_check(d: int, relaxed: bool = False) -> bool:
    """True iff no deterministic strategy satisfies the ladder conditions.

    Conditions on a strategy: P(A_p B_p) = 0 for all p; P(Abar_p B'_0) = 0 for
    all p != 0 (with relaxed=True: for p = 0 only); P(A_0 B'_0) > 0.
    """
    if not 3 <= d <= _MAX_ENUM_D:
        raise ValueError(f"enumeration supports 3 <= d <= {_MAX_ENUM_D}, got {d}")
    miss_range = (0,) if relaxed else tuple(range(1, d))
    for bits in itertools.product((0, 1), repeat=d):
        if bits[0] != 0:
            continue  # P(A_0 B'_0) > 0 needs A_0 to fire and b' = 0
        if any(bits[p] == 1 for p in miss_range):
            continue  # a firing complement would make P(Abar_p B'_0) > 0
        for q in range(d):
            if bits[q] == 1:  # P(A_q B_q) = 0 satisfied, all other p give B != p
                return False
    return True


# ---------------------------------------------------------------------------
# asymptotic laws and optimizers


def asymptotic_laws(d: int) -> dict:
    """Leading-order optima of both functionals for large d."""
    d = float(d)
    return {
        "bell": {
            "x": (2.0 / 3.0) / math.sqrt(d),
            "y": (4.0 / 27.0) * d**-2.5,
            "a": 1.0 - 2.0 / (9.0 * d),
            "value": (8.0 / 729.0) * d**-4,
        },
        "steer": {
            "x": 1.0 / math.sqrt(d),
            "y": 0.25 / math.sqrt(d),
            "s": 0.5,
            "a": 1.0 - 1.0 / (2.0 * d),
            "value": 1.0 / (32.0 * d * d),
        },
    }


def _multistart_minimize(starts, objective, workers: int):
    from .util import parallel_map

    def solve(x0):
        return optimize.minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000, "maxfev": 8000},
        )

    return parallel_map(solve, starts, workers)


def _pick_best(results) -> tuple[optimize.OptimizeResult, int]:
    """Lowest objective wins; ties break toward lexicographically smallest x."""
    best = None
    total_iter = 0
    for res in results:
        total_iter += int(res.nit)
        key = (res.fun, tuple(res.x))
        if best is None or key < best[0]:
            best = (key, res)
    return best[1], total_iter


def maximize_bell(d: int, workers: int = 1) -> ViolationReport:
    """Global maximum of the Bell violation over the family domain.

    Deterministic multistart Nelder-Mead in (log x, log y), seeded on a fixed
    grid inside the bounding triangle {x < x_bell_max, x > ratio_plus * y};
    the objective is the signed (d-1) lambda_-(M)/R normalized by the
    asymptotic law, so values are O(1) for every d.
    """
    b = bounds(d)
    scale = asymptotic_laws(d)["bell"]["value"]
    x_cap, slope = b.bell_x_max, b.ratio_plus
    log_cap, log_slope = math.log(x_cap), math.log(slope)

    def objective(uv) -> float:
        u, v = float(uv[0]), float(uv[1])
        pen = 0.0
        if u >= log_cap:
            pen += u - log_cap
        if v >= u - log_slope:  # y >= x / ratio_plus
            pen += v - (u - log_slope)
        if pen > 0.0:
            return 10.0 + pen
        x, y = math.exp(u), math.exp(v)
        z2 = 1.0 - x * x - y * y
        if z2 / (d - 2) - x * y <= 0.0:
            return 10.0
        ztilde = math.sqrt((d - 2) * z2)
        m00, m01, m11 = reduced_entries(KIND_BELL, d, x, y, ztilde, None)
        big_r = d * x * y + (d - 1) * (z2 - (d - 2) * x * y) + (d - 1)
        return (d - 1) * lambda_minus(m00, m01, m11) / (big_r * scale)

    starts = [
        (math.log(fx * x_cap), math.log(fy * fx * x_cap / slope))
        for fx in X_START_FRACTIONS
        for fy in Y_START_FRACTIONS
    ]
    results = _multistart_minimize(starts, objective, workers)
    best, total_iter = _pick_best(results)
    x, y = math.exp(best.x[0]), math.exp(best.x[1])
    rf = m_matrix(KIND_BELL, make_params(d, x, y))
    a, _, value = optimal_direction(rf)
    return ViolationReport(
        d=d,
        kind=KIND_BELL,
        x=x,
        y=y,
        a=a,
        s=None,
        value=value,
        restarts=len(starts),
        iterations=total_iter,
        converged=bool(best.success),
    )


def maximize_steering(d: int, workers: int = 1) -> ViolationReport:
    """Global maximum of the steering violation over domain and weight s.

    Outer multistart Nelder-Mead in (log x, log y) inside {y < x < x_steer_max};
    inner golden-section over s (see steer_lambda_min).
    """
    b = bounds(d)
    scale = asymptotic_laws(d)["steer"]["value"]
    x_cap = b.steer_x_max
    log_cap = math.log(x_cap)

    def objective(uv) -> float:
        u, v = float(uv[0]), float(uv[1])
        pen = 0.0
        if u >= log_cap:
            pen += u - log_cap
        if v >= u:  # y >= x
            pen += v - u
        if pen > 0.0:
            return 10.0 + pen
        x, y = math.exp(u), math.exp(v)
        z2 = 1.0 - x * x - y * y
        if z2 / (d - 2) - x * y <= 0.0:
            return 10.0
        _, lam = steer_lambda_min(d, x, y)
        big_r = d * x * y + (d - 1) * (z2 - (d - 2) * x * y) + (d - 1)
        return (d - 1) * lam / (big_r * scale)

    starts = [
        (math.log(fx * x_cap), math.log(fy * fx * x_cap))
        for fx in X_START_FRACTIONS
        for fy in Y_START_FRACTIONS
    ]
    results = _multistart_minimize(starts, objective, workers)
    best, total_iter = _pick_best(results)
    x, y = math.exp(best.x[0]), math.exp(best.x[1])
    s, _ = steer_lambda_min(d, x, y)
    rf = m_matrix(KIND_STEER, make_params(d, x, y), s)
    a, _, value = optimal_direction(rf)
    return ViolationReport(
        d=d,
        kind=KIND_STEER,
        x=x,
        y=y,
        a=a,
        s=s,
        value=value,
        restarts=len(starts),
        iterations=total_iter,
        converged=bool(best.success),
    )
