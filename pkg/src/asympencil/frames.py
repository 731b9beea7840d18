"""Rotation-minimizing frames along a unit-speed curve.

Two independent constructions:

* :func:`rmf_by_theta` integrates the rotation angle ``theta' = -tau`` with
  classical RK4 and rotates the Frenet normal/binormal by it.
* :func:`rmf_double_reflection` transports an initial normal vector by two
  reflections per grid step.  It never touches the Frenet frame, so it also
  works where the curvature vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._core import double_reflection
from .curve import KAPPA_MIN, Curve, FrenetUndefined, curvature_torsion, frenet

DEFAULT_N = 512
ORTHO_TOL = 1e-9


class FrameError(ValueError):
    pass


@dataclass(frozen=True)
class FrameField:
    """Frames ``{T, U, V}`` sampled on a uniform grid of the curve interval.

    ``theta`` is the unwrapped angle from ``N`` to ``U``; it is NaN at
    samples where the Frenet frame does not exist.
    """

    curve: Curve
    s: np.ndarray
    T: np.ndarray
    U: np.ndarray
    V: np.ndarray
    theta: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    method: str = "theta"

    @property
    def n(self) -> int:
        return len(self.s) - 1

    @property
    def step(self) -> float:
        return float(self.s[1] - self.s[0])

    @property
    def has_theta(self) -> bool:
        return bool(np.all(np.isfinite(self.theta)))

    def theta_at(self, s):
        """Linearly interpolated (and, past the ends, extrapolated) angle."""
        if not self.has_theta:
            raise FrenetUndefined("frame field has no rotation angle where curvature vanishes")
        return _interp(s, self.s, self.theta)

    def frame_at(self, s):
        """``(T, U, V)`` at arbitrary ``s``.

        With a rotation angle available the Frenet frame is evaluated exactly
        and rotated by the interpolated angle.  Otherwise ``U`` is
        interpolated linearly and re-orthonormalised against the exact
        tangent.
        """
        s = np.asarray(s, dtype=float)
        if self.has_theta:
            fr = frenet(self.curve, s)
            theta = self.theta_at(s)
            c = np.cos(theta)[..., None]
            sn = np.sin(theta)[..., None]
            return fr.T, c * fr.N + sn * fr.B, -sn * fr.N + c * fr.B
        T = self.curve.derivative(s, 1)
        U = np.stack([_interp(s, self.s, self.U[:, k]) for k in range(3)], axis=-1)
        U = U - np.einsum("...i,...i->...", U, T)[..., None] * T
        U /= np.linalg.norm(U, axis=-1, keepdims=True)
        return T, U, np.cross(T, U)


def _interp(x, xp, fp):
    x = np.asarray(x, dtype=float)
    i = np.clip(np.searchsorted(xp, x) - 1, 0, len(xp) - 2)
    w = (x - xp[i]) / (xp[i + 1] - xp[i])
    out = fp[i] + w * (fp[i + 1] - fp[i])
    return float(out) if out.ndim == 0 else out


def _rk4_angle(curve: Curve, theta0: float, s: np.ndarray) -> np.ndarray:
    """RK4 for ``theta' = -tau(s)``.

    The right-hand side does not depend on ``theta``, so the four stages of
    every step can be evaluated for all steps at once; the accumulation is
    the usual ``h/6 (k1 + 2 k2 + 2 k3 + k4)``.
    """
    h = np.diff(s)
    mid = s[:-1] + 0.5 * h
    ct_nodes = curvature_torsion(curve, s)
    ct_mid = curvature_torsion(curve, mid)
    if np.any(ct_nodes.degenerate) or np.any(ct_mid.degenerate):
        bad = np.concatenate([s[ct_nodes.degenerate], mid[ct_mid.degenerate]])
        raise FrenetUndefined(f"curvature vanishes at s = {bad.min():.6g}; use double reflection")
    k1 = -ct_nodes.tau[:-1]
    k2 = k3 = -ct_mid.tau
    k4 = -ct_nodes.tau[1:]
    increments = h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return theta0 + np.concatenate([[0.0], np.cumsum(increments)])


def rmf_by_theta(curve: Curve, theta0: float = 0.0, n: int = DEFAULT_N) -> FrameField:
    """RMF from the Frenet frame and ``theta(s_min) = theta0``.

    Raises:
        FrenetUndefined: if the curvature vanishes anywhere on the grid.
    """
    if n < 2:
        raise ValueError("need at least 2 grid steps")
    s = curve.grid(n)
    theta = _rk4_angle(curve, float(theta0), s)
    fr = frenet(curve, s)
    c = np.cos(theta)[:, None]
    sn = np.sin(theta)[:, None]
    U = c * fr.N + sn * fr.B
    V = -sn * fr.N + c * fr.B
    return FrameField(curve, s, fr.T, U, V, theta, fr.kappa, fr.tau, "theta")


def rmf_double_reflection(curve: Curve, u0, n: int = DEFAULT_N) -> FrameField:
    """RMF by double-reflection transport of ``u0`` from ``s_min``.

    Raises:
        FrameError: if ``u0`` is not a unit vector orthogonal to ``T(s_min)``.
    """
    if n < 2:
        raise ValueError("need at least 2 grid steps")
    u0 = np.asarray(u0, dtype=float)
    s = curve.grid(n)
    points = curve.derivative(s, 0)
    T = curve.derivative(s, 1)
    if abs(np.linalg.norm(u0) - 1.0) > ORTHO_TOL:
        raise FrameError("initial normal vector must have unit length")
    if abs(float(u0 @ T[0])) > ORTHO_TOL:
        raise FrameError("initial normal vector is not orthogonal to the tangent")
    U = double_reflection(points, T, u0)
    V = np.cross(T, U)
    kappa, tau, degenerate = curvature_torsion(curve, s)
    theta = np.full(len(s), np.nan)
    ok = ~degenerate
    if np.any(ok):
        d2 = curve.derivative(s[ok], 2)
        N = d2 / np.linalg.norm(d2, axis=-1, keepdims=True)
        B = np.cross(T[ok], N)
        raw = np.arctan2(np.einsum("ij,ij->i", U[ok], B), np.einsum("ij,ij->i", U[ok], N))
        theta[ok] = np.unwrap(raw)
    return FrameField(curve, s, T, U, V, theta, kappa, tau, "double-reflection")


def frenet_field(curve: Curve, n: int = DEFAULT_N) -> FrameField:
    """The Frenet frame sampled as a frame field with ``(U, V) = (N, B)``."""
    s = curve.grid(n)
    fr = frenet(curve, s)
    return FrameField(curve, s, fr.T, fr.N, fr.B, np.zeros(len(s)), fr.kappa, fr.tau, "frenet")


def _grid_derivative(values: np.ndarray, h: float) -> tuple[np.ndarray, slice]:
    """Central differences along axis 0; fourth order when 5+ samples exist."""
    m = len(values)
    if m >= 5:
        d = (values[:-4] - 8 * values[1:-3] + 8 * values[3:-1] - values[4:]) / (12 * h)
        return d, slice(2, m - 2)
    if m >= 3:
        return (values[2:] - values[:-2]) / (2 * h), slice(1, m - 1)
    raise ValueError("need at least 3 samples")


def rmf_residual_profile(field: FrameField) -> np.ndarray:
    """Per-sample ``|U'·V| + |V'·U|``; end samples copy their nearest interior value."""
    dU, inner = _grid_derivative(field.U, field.step)
    dV, _ = _grid_derivative(field.V, field.step)
    r = np.abs(np.einsum("ij,ij->i", dU, field.V[inner])) + np.abs(
        np.einsum("ij,ij->i", dV, field.U[inner])
    )
    out = np.empty(len(field.s))
    out[inner] = r
    out[: inner.start] = r[0]
    out[inner.stop :] = r[-1]
    return out


def rmf_residual(field: FrameField) -> float:
    """Maximum over interior samples of ``|U'·V| + |V'·U|`` (zero for an exact RMF)."""
    return float(np.max(rmf_residual_profile(field)))


def theta_residual(field: FrameField) -> float:
    """Maximum of ``|theta' + tau|`` on interior samples."""
    if not field.has_theta:
        raise FrenetUndefined("frame field has no rotation angle")
    d, inner = _grid_derivative(field.theta, field.step)
    return float(np.max(np.abs(d + field.tau[inner])))


def is_orthonormal(field: FrameField, tol: float = ORTHO_TOL) -> bool:
    T, U, V = field.T, field.U, field.V
    dots = [np.einsum("ij,ij->i", a, b) for a, b in ((T, U), (T, V), (U, V))]
    norms = [np.linalg.norm(a, axis=1) - 1.0 for a in (T, U, V)]
    handed = np.linalg.norm(np.cross(T, U) - V, axis=1)
    return all(np.max(np.abs(x)) <= tol for x in dots + norms) and np.max(handed) <= tol


__all__ = [
    "DEFAULT_N",
    "FrameError",
    "FrameField",
    "KAPPA_MIN",
    "frenet_field",
    "is_orthonormal",
    "rmf_by_theta",
    "rmf_double_reflection",
    "rmf_residual",
    "rmf_residual_profile",
    "theta_residual",
]
