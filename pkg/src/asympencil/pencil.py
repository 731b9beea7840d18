"""Surface pencils through a curve.

A pencil member is

    P(s, t) = r(s) + a(s, t) T(s) + b(s, t) U(s) + c(s, t) V(s)

with ``{T, U, V}`` a rotation-minimizing frame.  The marching scale
``(a, b, c)`` is given by expressions; a coefficient may additionally carry a
factor ``cos(theta(s))`` or ``sin(theta(s))`` of the frame's rotation angle,
which is only known numerically on the frame grid.

The curve ``t = t0`` is isoparametric when ``a, b, c`` vanish there, and
asymptotic when additionally

    kappa cos(theta) c_t + kappa sin(theta) b_t = 0   and   theta' = -tau.

``kappa cos(theta)`` and ``kappa sin(theta)`` are evaluated as ``r''·U`` and
``-r''·V``, which needs no Frenet frame and stays valid where the curvature
vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import expr as ex
from .curve import KAPPA_MIN, Curve, curvature_torsion
from .frames import FrameField, rmf_residual, theta_residual

ISO_TOL = 1e-8
ASYM_TOL = 1e-7
RMF_TOL = 1e-4
THETA_TOL = 1e-6
PRECONDITION_TOL = 1e-9
DEGENERATE_NORMAL = 1e-12
N_PROBE = 200
WEIGHTS = ("1", "cos", "sin")


class IsoparametricViolated(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


@dataclass(frozen=True)
class ScaleTerm:
    """``expr(s, t) * w(theta(s))`` with ``w`` one of 1, cos, sin."""

    expr: ex.Expr
    weight: str = "1"
    d_s: ex.Expr = field(init=False, repr=False, compare=False)
    d_t: ex.Expr = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.weight not in WEIGHTS:
            raise ValueError(f"weight must be one of {WEIGHTS}")
        e = ex.as_expr(self.expr)
        object.__setattr__(self, "expr", e)
        object.__setattr__(self, "d_s", ex.differentiate(e, "s"))
        object.__setattr__(self, "d_t", ex.differentiate(e, "t"))

    def evaluate(self, s, t, theta, dtheta):
        """Value and the two partials at ``(s, t)``."""
        v = ex.evaluate(self.expr, s, t)
        vs = ex.evaluate(self.d_s, s, t)
        vt = ex.evaluate(self.d_t, s, t)
        if self.weight == "1":
            return v, vs, vt
        if self.weight == "cos":
            w, ws = np.cos(theta), -np.sin(theta) * dtheta
        else:
            w, ws = np.sin(theta), np.cos(theta) * dtheta
        return v * w, vs * w + v * ws, vt * w

    def __str__(self):
        text = ex.to_string(self.expr)
        return text if self.weight == "1" else f"({text})*{self.weight}(theta)"


def _coefficient(value) -> tuple[ScaleTerm, ...]:
    if isinstance(value, ScaleTerm):
        return (value,)
    if isinstance(value, tuple) and all(isinstance(v, ScaleTerm) for v in value):
        return value
    return (ScaleTerm(ex.as_expr(value)),)


class ScaleValues(NamedTuple):
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    a_s: np.ndarray
    a_t: np.ndarray
    b_s: np.ndarray
    b_t: np.ndarray
    c_s: np.ndarray
    c_t: np.ndarray


@dataclass(frozen=True)
class MarchingScale:
    a: tuple
    b: tuple
    c: tuple
    t0: float
    t_range: tuple[float, float]

    def __post_init__(self):
        for name in "abc":
            object.__setattr__(self, name, _coefficient(getattr(self, name)))
        lo, hi = (float(x) for x in self.t_range)
        object.__setattr__(self, "t_range", (lo, hi))
        object.__setattr__(self, "t0", float(self.t0))
        if not hi > lo:
            raise ValueError("empty t-interval")
        if not lo <= self.t0 <= hi:
            raise ValueError(f"t0 = {self.t0} lies outside [{lo}, {hi}]")

    @classmethod
    def from_exprs(cls, a, b, c, t0, t_range) -> "MarchingScale":
        return cls(_coefficient(a), _coefficient(b), _coefficient(c), t0, t_range)

    @property
    def needs_theta(self) -> bool:
        return any(term.weight != "1" for coef in (self.a, self.b, self.c) for term in coef)

    def evaluate(self, s, t, theta=None, dtheta=None) -> ScaleValues:
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        out = []
        for coef in (self.a, self.b, self.c):
            total = [np.zeros(s.shape) for _ in range(3)]
            for term in coef:
                for acc, part in zip(total, term.evaluate(s, t, theta, dtheta)):
                    acc += part
            out.append(total)
        (a, a_s, a_t), (b, b_s, b_t), (c, c_s, c_t) = out
        return ScaleValues(a, b, c, a_s, a_t, b_s, b_t, c_s, c_t)


class LocalGeometry(NamedTuple):
    r: np.ndarray
    r2: np.ndarray
    T: np.ndarray
    U: np.ndarray
    V: np.ndarray
    kappa: np.ndarray
    kc: np.ndarray  # kappa cos(theta) = r''·U
    ks: np.ndarray  # kappa sin(theta) = -r''·V
    scale: ScaleValues


def _dot(x, y):
    return np.einsum("...i,...i->...", x, y)


@dataclass(frozen=True)
class SurfacePatch:
    """A pencil member on the rectangle ``s_range x t_range``."""

    curve: Curve
    frame: FrameField
    scale: MarchingScale
    s_range: tuple[float, float]
    ns: int = 200
    nt: int = 50
    name: str = ""

    def __post_init__(self):
        if self.ns < 2 or self.nt < 2:
            raise ValueError("grid needs at least 2 samples per direction")
        lo, hi = (float(x) for x in self.s_range)
        if not hi > lo:
            raise ValueError("empty s-interval")
        object.__setattr__(self, "s_range", (lo, hi))

    @property
    def t0(self) -> float:
        return self.scale.t0

    @property
    def t_range(self) -> tuple[float, float]:
        return self.scale.t_range

    def local(self, s, t) -> LocalGeometry:
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        T, U, V = self.frame.frame_at(s)
        r = self.curve.derivative(s, 0)
        r2 = self.curve.derivative(s, 2)
        kappa = np.linalg.norm(r2, axis=-1)
        theta = dtheta = None
        if self.scale.needs_theta:
            theta = self.frame.theta_at(s)
            dtheta = -curvature_torsion(self.curve, s).tau
        values = self.scale.evaluate(s, t, theta, dtheta)
        return LocalGeometry(r, r2, T, U, V, kappa, _dot(r2, U), -_dot(r2, V), values)

    def evaluate(self, s, t) -> np.ndarray:
        g = self.local(s, t)
        v = g.scale
        return g.r + v.a[..., None] * g.T + v.b[..., None] * g.U + v.c[..., None] * g.V

    def parameter_grid(self, ns=None, nt=None):
        s = np.linspace(*self.s_range, ns or self.ns)
        t = np.linspace(*self.t_range, nt or self.nt)
        return np.meshgrid(s, t, indexing="ij")

    def grid(self, ns=None, nt=None) -> np.ndarray:
        """Points on the ``ns x nt`` parameter grid, shape ``(ns, nt, 3)``."""
        S, T = self.parameter_grid(ns, nt)
        return self.evaluate(S, T)


def eval_surface(patch: SurfacePatch, s, t) -> np.ndarray:
    return patch.evaluate(s, t)


def _components(g: LocalGeometry) -> np.ndarray:
    v = g.scale
    along_t = 1.0 + v.a_s - v.b * g.kc + v.c * g.ks
    along_u = v.b_s + v.a * g.kc
    along_v = v.c_s - v.a * g.ks
    n_t = v.c_t * along_u - v.b_t * along_v
    n_u = v.a_t * along_v - v.c_t * along_t
    n_v = v.b_t * along_t - v.a_t * along_u
    return np.stack([n_t, n_u, n_v], axis=-1)


def normal_components(patch: SurfacePatch, s, t) -> np.ndarray:
    """Components of ``P_s x P_t`` along ``(T, U, V)``, stacked on the last axis."""
    return _components(patch.local(s, t))


def closed_form_normal(patch: SurfacePatch, s, t) -> np.ndarray:
    """Unnormalised surface normal from the frame expansion (no differencing)."""
    g = patch.local(s, t)
    comps = _components(g)
    return comps[..., :1] * g.T + comps[..., 1:2] * g.U + comps[..., 2:] * g.V


def unit_normal(patch: SurfacePatch, s, t):
    """Unit closed-form normal and a mask of degenerate points (``‖n‖ < 1e-12``)."""
    n = closed_form_normal(patch, s, t)
    norm = np.linalg.norm(n, axis=-1)
    degenerate = norm < DEGENERATE_NORMAL
    with np.errstate(all="ignore"):
        unit = n / np.where(degenerate, 1.0, norm)[..., None]
    return unit, degenerate


class PhiTriple(NamedTuple):
    phi1: np.ndarray
    phi2: np.ndarray
    phi3: np.ndarray


def iso_residual_at(patch: SurfacePatch, s) -> np.ndarray:
    v = patch.local(s, patch.t0).scale
    return np.max(np.abs(np.stack([v.a, v.b, v.c])), axis=0)


def phi_components(patch: SurfacePatch, s) -> PhiTriple:
    """Normal components along ``T, U, V`` on the curve ``t = t0``.

    Raises:
        IsoparametricViolated: if ``a, b, c`` do not vanish at ``t0``.
    """
    res = iso_residual_at(patch, s)
    if np.max(res) > ISO_TOL:
        raise IsoparametricViolated(
            f"marching scale does not vanish at t0 (max residual {np.max(res):.3g})"
        )
    comps = normal_components(patch, s, patch.t0)
    phi = PhiTriple(comps[..., 0], comps[..., 1], comps[..., 2])
    if np.ndim(s) == 0:
        return PhiTriple(*(float(x) for x in phi))
    return phi


@dataclass
class ConditionReport:
    isoparametric: bool
    asymptotic: bool
    iso_residual: float
    asym_residual: float
    rmf_residual: float
    theta_residual: float | None
    degenerate_probes: int
    vacuous_probes: int
    probes: int

    @property
    def ok(self) -> bool:
        return self.isoparametric and self.asymptotic

    @property
    def max_residuals(self) -> dict:
        return {
            "iso": self.iso_residual,
            "asym": self.asym_residual,
            "rmf": self.rmf_residual,
            "theta": self.theta_residual,
        }

    def lines(self) -> list[str]:
        mark = {True: "yes", False: "NO"}
        out = [
            f"isoparametric: {mark[self.isoparametric]}  (max |a|,|b|,|c| at t0 = {self.iso_residual:.3e})",
            f"asymptotic:    {mark[self.asymptotic]}  (max |k cos(th) c_t + k sin(th) b_t| = {self.asym_residual:.3e})",
            f"rmf residual:  {self.rmf_residual:.3e}",
        ]
        if self.theta_residual is not None:
            out.append(f"theta' + tau:  {self.theta_residual:.3e}")
        if self.degenerate_probes:
            out.append(f"degenerate normal at {self.degenerate_probes} of {self.probes} probes")
        if self.vacuous_probes:
            out.append(f"vacuous condition (zero curvature) at {self.vacuous_probes} probes")
        return out


def asymptotic_residual_at(patch: SurfacePatch, s) -> np.ndarray:
    g = patch.local(s, patch.t0)
    return np.abs(g.kc * g.scale.c_t + g.ks * g.scale.b_t)


def check_conditions(
    patch: SurfacePatch,
    tol_iso: float = ISO_TOL,
    tol_asym: float = ASYM_TOL,
    n_probe: int = N_PROBE,
) -> ConditionReport:
    """Decide whether ``t = t0`` is an isoparametric and asymptotic curve."""
    s = np.linspace(*patch.s_range, n_probe)
    g = patch.local(s, patch.t0)
    v = g.scale
    iso = float(np.max(np.abs(np.stack([v.a, v.b, v.c]))))
    asym = float(np.max(np.abs(g.kc * v.c_t + g.ks * v.b_t)))
    rmf = rmf_residual(patch.frame)
    theta_res = theta_residual(patch.frame) if patch.frame.has_theta else None
    frame_ok = rmf <= RMF_TOL and (theta_res is None or theta_res <= THETA_TOL)
    n_norm = np.linalg.norm(normal_components(patch, s, patch.t0), axis=-1)
    return ConditionReport(
        isoparametric=iso <= tol_iso,
        asymptotic=iso <= tol_iso and asym <= tol_asym and frame_ok,
        iso_residual=iso,
        asym_residual=asym,
        rmf_residual=rmf,
        theta_residual=theta_res,
        degenerate_probes=int(np.sum(n_norm < DEGENERATE_NORMAL)),
        vacuous_probes=int(np.sum(g.kappa < KAPPA_MIN)),
        probes=n_probe,
    )


def build_sufficient(f, a, frame: FrameField, t0: float, t_range) -> MarchingScale:
    """Marching scale ``b = -f cos(theta)``, ``c = f sin(theta)``.

    Raises:
        PreconditionViolated: if ``f(s, t0)`` or ``a(s, t0)`` is not zero.
    """
    f = ex.as_expr(f)
    a = ex.as_expr(a)
    if not frame.has_theta:
        raise PreconditionViolated("frame field carries no rotation angle")
    s = frame.curve.probe(N_PROBE)
    for label, e in (("f", f), ("a", a)):
        worst = float(np.max(np.abs(ex.evaluate(e, s, t0))))
        if worst > PRECONDITION_TOL:
            raise PreconditionViolated(f"{label}(s, t0) is not identically zero (max {worst:.3g})")
    b = (ScaleTerm(ex.neg(f), "cos"),)
    c = (ScaleTerm(f, "sin"),)
    return MarchingScale(_coefficient(a), b, c, t0, t_range)


def make_patch(curve, frame, scale, ns=200, nt=50, s_range=None, name="") -> SurfacePatch:
    return SurfacePatch(curve, frame, scale, s_range or curve.interval, ns, nt, name)


__all__ = [
    "ASYM_TOL",
    "ISO_TOL",
    "ConditionReport",
    "IsoparametricViolated",
    "MarchingScale",
    "PhiTriple",
    "PreconditionViolated",
    "ScaleTerm",
    "SurfacePatch",
    "asymptotic_residual_at",
    "build_sufficient",
    "check_conditions",
    "closed_form_normal",
    "eval_surface",
    "iso_residual_at",
    "make_patch",
    "normal_components",
    "phi_components",
    "unit_normal",
]
