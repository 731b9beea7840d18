"""Unit-speed space curves and their Frenet apparatus.

A :class:`Curve` is three coordinate expressions in ``s`` on an arc-length
interval ``[s_min, s_max]``.  Derivatives up to third order are symbolic.
Every function here accepts a scalar ``s`` or an array of parameter values;
vector quantities come back with a trailing axis of length 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import expr as ex

KAPPA_MIN = 1e-9
UNIT_SPEED_TOL = 1e-6
REGULAR_TOL = 1e-9
DEFAULT_PROBES = 1000


class CurveError(ValueError):
    pass


class FrenetUndefined(ArithmeticError):
    """Curvature vanished, so the principal normal does not exist."""


@dataclass(frozen=True)
class Curve:
    x: ex.Expr
    y: ex.Expr
    z: ex.Expr
    s_min: float
    s_max: float
    name: str = ""
    _derivs: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        coords = []
        for label, e in zip("xyz", (self.x, self.y, self.z)):
            e = ex.as_expr(e)
            if "t" in ex.free_variables(e):
                raise CurveError(f"coordinate {label} depends on t")
            coords.append(e)
        object.__setattr__(self, "x", coords[0])
        object.__setattr__(self, "y", coords[1])
        object.__setattr__(self, "z", coords[2])
        object.__setattr__(self, "s_min", float(self.s_min))
        object.__setattr__(self, "s_max", float(self.s_max))
        if not self.s_max > self.s_min:
            raise CurveError("empty parameter interval")
        derivs = [tuple(coords)]
        for _ in range(3):
            derivs.append(tuple(ex.differentiate(e, "s") for e in derivs[-1]))
        object.__setattr__(self, "_derivs", tuple(derivs))

    @classmethod
    def from_text(cls, x, y, z, s_min, s_max, name="", check=True) -> "Curve":
        """Build a curve and, unless ``check`` is false, insist on unit speed."""
        curve = cls(ex.as_expr(x), ex.as_expr(y), ex.as_expr(z), s_min, s_max, name)
        if check:
            curve.validate()
        return curve

    @property
    def interval(self) -> tuple[float, float]:
        return (self.s_min, self.s_max)

    @property
    def length(self) -> float:
        return self.s_max - self.s_min

    def grid(self, n: int) -> np.ndarray:
        """``n + 1`` uniform samples of the parameter interval."""
        return np.linspace(self.s_min, self.s_max, n + 1)

    def probe(self, count: int = DEFAULT_PROBES) -> np.ndarray:
        return np.linspace(self.s_min, self.s_max, count)

    def derivative(self, s, order: int = 0) -> np.ndarray:
        """``order``-th derivative (0 gives the point itself) at ``s``."""
        if not 0 <= order <= 3:
            raise ValueError("derivative order must be in 0..3")
        s = np.asarray(s, dtype=float)
        return np.stack([ex.evaluate(e, s, 0.0) for e in self._derivs[order]], axis=-1)

    def __call__(self, s) -> np.ndarray:
        return self.derivative(s, 0)

    def validate(self, count: int = DEFAULT_PROBES) -> None:
        speed = np.linalg.norm(self.derivative(self.probe(count), 1), axis=-1)
        if np.min(speed) < REGULAR_TOL:
            raise CurveError("curve is not regular (r'(s) vanishes)")
        err = float(np.max(np.abs(speed - 1.0)))
        if err > UNIT_SPEED_TOL:
            raise CurveError(
                f"curve is not parameterised by arc length (max |‖r'‖ - 1| = {err:.3g})"
            )


def derivatives(curve: Curve, s, order: int) -> list[np.ndarray]:
    """First ``order`` derivatives ``[r', r'', ...]`` of ``curve`` at ``s``."""
    if not 1 <= order <= 3:
        raise ValueError("order must be 1, 2 or 3")
    return [curve.derivative(s, k) for k in range(1, order + 1)]


class UnitSpeedReport(NamedTuple):
    max_speed_error: float
    ok: bool


def check_unit_speed(curve: Curve, count: int = DEFAULT_PROBES) -> UnitSpeedReport:
    speed = np.linalg.norm(curve.derivative(curve.probe(count), 1), axis=-1)
    err = float(np.max(np.abs(speed - 1.0)))
    return UnitSpeedReport(err, err <= UNIT_SPEED_TOL)


class CurvatureTorsion(NamedTuple):
    kappa: np.ndarray
    tau: np.ndarray
    degenerate: np.ndarray  # True where kappa < KAPPA_MIN; tau reported as 0 there


def curvature_torsion(curve: Curve, s) -> CurvatureTorsion:
    """Curvature ``‖r''‖`` and torsion ``(r' × r'')·r''' / ‖r' × r''‖²``."""
    d1, d2, d3 = derivatives(curve, s, 3)
    kappa = np.linalg.norm(d2, axis=-1)
    cross = np.cross(d1, d2)
    denom = np.einsum("...i,...i->...", cross, cross)
    degenerate = kappa < KAPPA_MIN
    with np.errstate(all="ignore"):
        tau = np.einsum("...i,...i->...", cross, d3) / denom
    tau = np.where(degenerate, 0.0, tau)
    if np.ndim(s) == 0:
        return CurvatureTorsion(float(kappa), float(tau), bool(degenerate))
    return CurvatureTorsion(kappa, tau, degenerate)


@dataclass(frozen=True)
class FrenetFrame:
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray


def frenet(curve: Curve, s) -> FrenetFrame:
    """Frenet frame at ``s``.

    Raises:
        FrenetUndefined: if the curvature is below ``KAPPA_MIN`` at any ``s``.
    """
    d1, d2, _ = derivatives(curve, s, 3)
    kappa, tau, degenerate = curvature_torsion(curve, s)
    if np.any(degenerate):
        where = np.asarray(s)[np.asarray(degenerate)] if np.ndim(s) else s
        raise FrenetUndefined(f"curvature vanishes at s = {np.ravel(where)[0]:.6g}")
    T = d1
    N = d2 / np.linalg.norm(d2, axis=-1, keepdims=True)
    B = np.cross(T, N)
    return FrenetFrame(T, N, B, kappa, tau)


# --------------------------------------------------------------------------
# built-in curves used by the worked examples

BUILTIN_CURVES = {
    "circle": ("cos(s)", "sin(s)", "0", 0.0, 2 * np.pi),
    "helix": ("3/5*sin(s)", "3/5*cos(s)", "4/5*s", -np.pi, 0.0),
    "slant": ("sqrt(3)/2*sin(s)", "s/2", "sqrt(3)/2*cos(s)", -2.0 + 1e-6, 2.0),
}


def builtin(name: str, s_min=None, s_max=None) -> Curve:
    """One of the built-in curves, optionally on a different interval."""
    try:
        x, y, z, lo, hi = BUILTIN_CURVES[name]
    except KeyError:
        raise CurveError(f"unknown built-in curve {name!r}") from None
    lo = lo if s_min is None else s_min
    hi = hi if s_max is None else s_max
    return Curve.from_text(x, y, z, lo, hi, name=name)


# --------------------------------------------------------------------------
# key = value definition files


def read_definition(path) -> dict[str, str]:
    """Read a ``key = value`` file; ``#`` starts a comment."""
    entries = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip() or not value.strip():
            raise CurveError(f"{path}:{lineno}: expected 'key = value'")
        entries[key.strip()] = value.strip()
    return entries


def constant(text: str) -> float:
    """Evaluate a constant expression such as ``pi/2`` or ``-2 + 1e-6``."""
    e = ex.parse(text)
    if not ex.is_constant(e):
        raise ex.ExprError(f"expected a constant, got {text!r}")
    return float(ex.evaluate(e))


def curve_from_definition(entries: dict[str, str], probes: int = DEFAULT_PROBES) -> Curve:
    """Curve from definition keys: ``x, y, z, s_min, s_max`` or ``curve = <built-in>``."""
    if "curve" in entries:
        lo = constant(entries["s_min"]) if "s_min" in entries else None
        hi = constant(entries["s_max"]) if "s_max" in entries else None
        curve = builtin(entries["curve"], lo, hi)
        curve.validate(probes)
        return curve
    missing = [k for k in ("x", "y", "z", "s_min", "s_max") if k not in entries]
    if missing:
        raise CurveError(f"curve definition lacks {', '.join(missing)}")
    curve = Curve.from_text(
        entries["x"],
        entries["y"],
        entries["z"],
        constant(entries["s_min"]),
        constant(entries["s_max"]),
        check=False,
    )
    curve.validate(probes)
    return curve


def load_curve(path) -> Curve:
    return curve_from_definition(read_definition(path))
