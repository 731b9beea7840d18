"""Ruled members of the pencil.

The ruled member with ruling coefficient ``g(s)`` is

    P(s, t) = r(s) + (t - t0) d(s),   d = g T - cos(theta) U + sin(theta) V,

i.e. the marching scale ``a = (t - t0) g``, ``b = (t0 - t) cos(theta)``,
``c = (t - t0) sin(theta)``.  It is developable exactly when
``det(r', d, d') = 0``, and that determinant equals the torsion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import expr as ex
from .curve import curvature_torsion
from .pencil import (
    DEGENERATE_NORMAL,
    MarchingScale,
    ScaleTerm,
    SurfacePatch,
    closed_form_normal,
)

PLANAR_TOL = 1e-7
DEVELOPABLE_TOL = 1e-6
PLANE_TOL = 1e-6


@dataclass(frozen=True)
class RuledPatch(SurfacePatch):
    g: ex.Expr = ex.ZERO

    @property
    def g_prime(self) -> ex.Expr:
        return ex.differentiate(self.g, "s")


def ruled_scale(g, t0: float, t_range) -> MarchingScale:
    g = ex.as_expr(g)
    if "t" in ex.free_variables(g):
        raise ValueError("ruling coefficient g must depend on s only")
    offset = ex.sub(ex.Var("t"), ex.num(t0))
    return MarchingScale(
        (ScaleTerm(ex.mul(offset, g)),),
        (ScaleTerm(ex.neg(offset), "cos"),),
        (ScaleTerm(offset, "sin"),),
        t0,
        t_range,
    )


def build_ruled(curve, frame, g, t0: float, t_range, ns=200, nt=50, s_range=None, name="") -> RuledPatch:
    """Ruled pencil member through ``curve`` at ``t = t0``."""
    g = ex.as_expr(g)
    if not frame.has_theta:
        raise ValueError("frame field carries no rotation angle")
    scale = ruled_scale(g, t0, t_range)
    return RuledPatch(curve, frame, scale, s_range or curve.interval, ns, nt, name, g=g)


class _Pieces(NamedTuple):
    g: np.ndarray
    dg: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    theta: np.ndarray


def _pieces(patch: RuledPatch, s) -> _Pieces:
    s = np.asarray(s, dtype=float)
    kappa, tau, _ = curvature_torsion(patch.curve, s)
    return _Pieces(
        ex.evaluate(patch.g, s, 0.0),
        ex.evaluate(patch.g_prime, s, 0.0),
        np.asarray(kappa),
        np.asarray(tau),
        np.asarray(patch.frame.theta_at(s)),
    )


def director_components(patch: RuledPatch, s) -> np.ndarray:
    """``d`` in the ``(T, U, V)`` basis."""
    p = _pieces(patch, s)
    return np.stack(np.broadcast_arrays(p.g, -np.cos(p.theta), np.sin(p.theta)), axis=-1)


def director_derivative_components(patch: RuledPatch, s) -> np.ndarray:
    """``d'`` in the ``(T, U, V)`` basis."""
    p = _pieces(patch, s)
    c, sn = np.cos(p.theta), np.sin(p.theta)
    return np.stack(
        np.broadcast_arrays(
            p.dg + p.kappa,
            p.g * p.kappa * c - p.tau * sn,
            -(p.g * p.kappa * sn + p.tau * c),
        ),
        axis=-1,
    )


def _to_world(patch, s, comps):
    T, U, V = patch.frame.frame_at(np.asarray(s, dtype=float))
    return comps[..., :1] * T + comps[..., 1:2] * U + comps[..., 2:] * V


def director(patch: RuledPatch, s) -> np.ndarray:
    return _to_world(patch, s, director_components(patch, s))


def director_derivative(patch: RuledPatch, s) -> np.ndarray:
    return _to_world(patch, s, director_derivative_components(patch, s))


def developability_determinant(patch: RuledPatch, s):
    """``det(r', d, d')`` assembled in the orthonormal ``(T, U, V)`` basis."""
    d = director_components(patch, s)
    dd = director_derivative_components(patch, s)
    tangent = np.zeros_like(d)
    tangent[..., 0] = 1.0
    det = np.linalg.det(np.stack([tangent, d, dd], axis=-2))
    return float(det) if np.ndim(det) == 0 else det


class Classification(NamedTuple):
    planar_curve: bool
    developable: bool
    plane: bool


def classify(patch: RuledPatch, n_probe: int = 200) -> Classification:
    s = np.linspace(*patch.s_range, n_probe)
    tau = curvature_torsion(patch.curve, s).tau
    planar = bool(np.max(np.abs(tau)) <= PLANAR_TOL)
    developable = bool(np.max(np.abs(developability_determinant(patch, s))) <= DEVELOPABLE_TOL)
    plane = False
    if developable:
        S, T = patch.parameter_grid()
        n = closed_form_normal(patch, S, T).reshape(-1, 3)
        norm = np.linalg.norm(n, axis=1)
        n = n[norm >= DEGENERATE_NORMAL] / norm[norm >= DEGENERATE_NORMAL, None]
        if len(n):
            # parallel to the first regular normal; sign flips across singular rulings are allowed
            plane = bool(np.max(np.linalg.norm(np.cross(n, n[0]), axis=1)) <= PLANE_TOL)
    return Classification(planar, developable, plane)


__all__ = [
    "Classification",
    "RuledPatch",
    "build_ruled",
    "classify",
    "developability_determinant",
    "director",
    "director_derivative",
    "ruled_scale",
]
