"""Symmetric unit-vector frames with constant pairwise overlap -1/(d-1).

For each d >= 2 the frame consists of d unit vectors living in the coordinate
subspace spanned by |1>, ..., |d-1> (the |0> slot is identically zero);
geometrically they are the vertices of a regular (d-1)-simplex centred at the
origin.  The frame is grown recursively, one dimension at a time:

    size 2:  +|1>, -|1>
    size m:  v_p -> (sqrt(m(m-2)) v_p - |m-1>)/(m-1)   for the m-1 old vectors,
             plus the new vector |m-1>.

The growth step preserves unit norms and the -1/(m-1) overlaps, which is
checked by the identity tests alongside this module.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FrameDiagnostics:
    """Residuals of the two exact frame identities."""

    sum_residual: float  # max |sum_p v_p|
    resolution_residual: float  # max |sum_p v_p v_p^T - d/(d-1) (I - P0)|


def simplex_frame(d: int) -> np.ndarray:
    """The d frame vectors as rows of a (d, d) array, |0> slot zero."""
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise ValueError(f"frame size must be an integer >= 2, got {d!r}")
    vecs = np.zeros((2, d))
    vecs[0, 1] = 1.0
    vecs[1, 1] = -1.0
    for m in range(3, d + 1):
        grown = np.zeros((m, d))
        grown[: m - 1] = (math.sqrt(m * (m - 2)) / (m - 1)) * vecs
        grown[: m - 1, m - 1] -= 1.0 / (m - 1)
        grown[m - 1, m - 1] = 1.0
        vecs = grown
    return vecs


def frame_gram(vectors: np.ndarray) -> np.ndarray:
    vectors = np.asarray(vectors, dtype=float)
    return vectors @ vectors.T


def frame_identities(vectors: np.ndarray) -> FrameDiagnostics:
    """Residuals of sum_p v_p = 0 and sum_p v_p v_p^T = d/(d-1) (I - P0)."""
    vectors = np.asarray(vectors, dtype=float)
    d = vectors.shape[0]
    sum_res = float(np.max(np.abs(vectors.sum(axis=0))))
    resolution = np.einsum("pi,pj->ij", vectors, vectors)
    target = (d / (d - 1)) * np.eye(d)
    target[0, 0] = 0.0
    res_res = float(np.max(np.abs(resolution - target)))
    return FrameDiagnostics(sum_residual=sum_res, resolution_residual=res_res)
