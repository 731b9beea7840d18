"""Finite-difference differential geometry of sampled surfaces.

Everything here uses only point evaluations ``surface.evaluate(s, t)``; it
never looks at frames or marching-scale partials, so it serves as an
independent check of the closed-form normal and of the asymptotic
conditions.

A surface is any object with ``evaluate(s, t)``, ``s_range`` and
``t_range``.  The curve-related checks also need ``curve`` and ``t0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .curve import Curve

STEP = 1e-4
DEGENERATE_METRIC = 1e-14
N_PROBE = 200

# Stencils share the layout (offsets, first-derivative weights, second-derivative
# weights) with the evaluation point at index 0.  All are second order.
_CENTRAL = ((0.0, -1.0, 1.0, 0.0), (0.0, -0.5, 0.5, 0.0), (-2.0, 1.0, 1.0, 0.0))
_FORWARD = ((0.0, 1.0, 2.0, 3.0), (-1.5, 2.0, -0.5, 0.0), (2.0, -5.0, 4.0, -1.0))
_BACKWARD = ((0.0, -1.0, -2.0, -3.0), (1.5, -2.0, 0.5, 0.0), (2.0, -5.0, 4.0, -1.0))


@dataclass(frozen=True)
class FunctionSurface:
    """A surface given by a vectorised callable ``func(s, t) -> (..., 3)``."""

    func: Callable
    s_range: tuple[float, float]
    t_range: tuple[float, float]
    t0: float = 0.0
    curve: Curve | None = None

    def evaluate(self, s, t):
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        return np.asarray(self.func(s, t), dtype=float)


class FundamentalForms(NamedTuple):
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    L: np.ndarray
    M: np.ndarray
    N2: np.ndarray
    K: np.ndarray
    normal: np.ndarray
    degenerate: np.ndarray


def _stencils(x, h, lo, hi):
    """Per-point offsets and weights, falling back to one-sided near the edges."""
    x = np.asarray(x, dtype=float)
    pick = np.where(x - h < lo - 1e-15, 1, np.where(x + h > hi + 1e-15, 2, 0))
    tables = np.array([_CENTRAL, _FORWARD, _BACKWARD])
    # -> (3 [offsets, w1, w2], *x.shape, 4)
    return np.moveaxis(tables[pick], -2, 0)


def _dot(x, y):
    return np.einsum("...i,...i->...", x, y)


def surface_derivatives(surface, s, t, h: float = STEP):
    """``P_s, P_t, P_ss, P_st, P_tt`` at ``(s, t)`` by finite differences."""
    s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
    off_s, w1_s, w2_s = _stencils(s, h, *surface.s_range)
    off_t, w1_t, w2_t = _stencils(t, h, *surface.t_range)
    # vals[..., k, l, :] = P(s + off_s[k] h, t + off_t[l] h)
    S = s[..., None, None] + h * off_s[..., :, None]
    T = t[..., None, None] + h * off_t[..., None, :]
    vals = surface.evaluate(*np.broadcast_arrays(S, T))
    P_s = np.einsum("...k,...ki->...i", w1_s / h, vals[..., :, 0, :])
    P_ss = np.einsum("...k,...ki->...i", w2_s / h**2, vals[..., :, 0, :])
    P_t = np.einsum("...l,...li->...i", w1_t / h, vals[..., 0, :, :])
    P_tt = np.einsum("...l,...li->...i", w2_t / h**2, vals[..., 0, :, :])
    P_st = np.einsum("...k,...l,...kli->...i", w1_s / h, w1_t / h, vals)
    return P_s, P_t, P_ss, P_st, P_tt


def fundamental_forms(surface, s, t, h: float = STEP) -> FundamentalForms:
    """First and second fundamental forms and Gaussian curvature.

    Samples with ``EG - F^2 < 1e-14`` are flagged in ``degenerate``; their
    ``K`` and normal are NaN.
    """
    P_s, P_t, P_ss, P_st, P_tt = surface_derivatives(surface, s, t, h)
    E, F, G = _dot(P_s, P_s), _dot(P_s, P_t), _dot(P_t, P_t)
    metric = E * G - F * F
    degenerate = metric < DEGENERATE_METRIC
    n = np.cross(P_s, P_t)
    with np.errstate(all="ignore"):
        unit = n / np.linalg.norm(n, axis=-1, keepdims=True)
        unit = np.where(degenerate[..., None], np.nan, unit)
        L, M, N2 = _dot(P_ss, unit), _dot(P_st, unit), _dot(P_tt, unit)
        K = (L * N2 - M * M) / metric
    return FundamentalForms(E, F, G, L, M, N2, K, unit, degenerate)


def numerical_normal(surface, s, t, h: float = STEP) -> np.ndarray:
    """Unnormalised ``P_s x P_t`` from central (or one-sided) differences."""
    P_s, P_t, *_ = surface_derivatives(surface, s, t, h)
    return np.cross(P_s, P_t)


class NormalCurvature(NamedTuple):
    max_abs: float
    values: np.ndarray
    s: np.ndarray
    degenerate: np.ndarray


def normal_curvature_profile(surface, n_probe: int = N_PROBE, h: float = STEP) -> NormalCurvature:
    """``k_n(s) = n(s, t0)·r''(s)`` along the embedded curve.

    Degenerate probes get NaN and are left out of ``max_abs``.
    """
    s = np.linspace(*surface.s_range, n_probe)
    forms = fundamental_forms(surface, s, np.full_like(s, surface.t0), h)
    kn = _dot(forms.normal, surface.curve.derivative(s, 2))
    finite = kn[~forms.degenerate]
    worst = float(np.max(np.abs(finite))) if finite.size else float("nan")
    return NormalCurvature(worst, kn, s, forms.degenerate)


def normal_curvature_along_curve(surface, n_probe: int = N_PROBE, h: float = STEP) -> float:
    """Maximum ``|k_n|`` over the probes on ``t = t0``."""
    return normal_curvature_profile(surface, n_probe, h).max_abs


class CurvatureGrid(NamedTuple):
    K: np.ndarray
    degenerate: np.ndarray
    s: np.ndarray
    t: np.ndarray


def interior_grid(surface, ns: int, nt: int):
    """``ns x nt`` parameter grid strictly inside the rectangle."""
    s = np.linspace(*surface.s_range, ns + 2)[1:-1]
    t = np.linspace(*surface.t_range, nt + 2)[1:-1]
    return np.meshgrid(s, t, indexing="ij")


def gaussian_curvature_grid(surface, ns: int = 20, nt: int = 20, h: float = STEP) -> CurvatureGrid:
    S, T = interior_grid(surface, ns, nt)
    forms = fundamental_forms(surface, S, T, h)
    return CurvatureGrid(forms.K, forms.degenerate, S, T)


def angle_between(u, v) -> np.ndarray:
    """Angle between (unnormalised) vectors, robust near 0."""
    return np.arctan2(np.linalg.norm(np.cross(u, v), axis=-1), _dot(u, v))


__all__ = [
    "CurvatureGrid",
    "FunctionSurface",
    "FundamentalForms",
    "angle_between",
    "fundamental_forms",
    "gaussian_curvature_grid",
    "interior_grid",
    "normal_curvature_along_curve",
    "normal_curvature_profile",
    "numerical_normal",
    "surface_derivatives",
]
