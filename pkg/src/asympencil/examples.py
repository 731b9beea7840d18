"""The six worked example surfaces P1..P6.

Each fixture rebuilds the surface from its curve, initial angle, marching
scale and parameter rectangle, and carries an independent closed-form
parameterisation of the same surface for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curve import builtin
from .frames import DEFAULT_N, rmf_by_theta
from .pencil import MarchingScale, SurfacePatch
from .ruled import build_ruled

SQ3 = np.sqrt(3.0)


def _p1(s, t):
    return np.stack(
        [np.cos(s) * (np.cos(t) + 1), np.sin(s) * (np.cos(t) + 1), np.sin(t) - 1], axis=-1
    )


def _helix_u(s):
    return np.stack(
        [
            -np.sin(9 * s / 5) / 10 - 9 * np.sin(s / 5) / 10,
            -np.cos(9 * s / 5) / 10 - 9 * np.cos(s / 5) / 10,
            -3 / 5 * np.sin(4 * s / 5),
        ],
        axis=-1,
    )


def _helix_v(s):
    return np.stack(
        [
            9 * np.cos(s / 5) / 10 - np.cos(9 * s / 5) / 10,
            np.sin(9 * s / 5) / 10 - 9 * np.sin(s / 5) / 10,
            -3 / 5 * np.cos(4 * s / 5),
        ],
        axis=-1,
    )


def _slant_u(s):
    return np.stack(
        [
            -np.sin(3 * s / 2) / 4 - 3 * np.sin(s / 2) / 4,
            -SQ3 / 2 * np.sin(s / 2),
            -np.cos(3 * s / 2) / 4 - 3 * np.cos(s / 2) / 4,
        ],
        axis=-1,
    )


def _slant_v(s):
    return np.stack(
        [
            np.cos(3 * s / 2) / 4 - 3 * np.cos(s / 2) / 4,
            SQ3 / 2 * np.cos(s / 2),
            3 * np.sin(s / 2) / 4 - np.sin(3 * s / 2) / 4,
        ],
        axis=-1,
    )


def _p2(s, t):
    c4, s4 = np.cos(4 * s / 5), np.sin(4 * s / 5)
    x = 3 / 5 * np.sin(s) + np.exp(s) * t * (
        c4 * (-np.sin(9 * s / 5) / 10 - 9 * np.sin(s / 5) / 10)
        - s4 * (-np.cos(9 * s / 5) / 10 + 9 * np.cos(s / 5) / 10)
    )
    y = 3 / 5 * np.cos(s) + np.exp(s) * t * (
        c4 * (-np.cos(9 * s / 5) / 10 - 9 * np.cos(s / 5) / 10)
        - s4 * (-9 * np.sin(s / 5) / 10 + np.sin(9 * s / 5) / 10)
    )
    return np.stack(np.broadcast_arrays(x, y, 4 / 5 * s), axis=-1)


def _p3(s, t):
    c4, s4 = np.cos(4 * s / 5), np.sin(4 * s / 5)
    x = 3 / 5 * np.sin(s) + t / 10 * (
        c4 * (np.sin(9 * s / 5) + 9 * np.sin(s / 5)) + s4 * (9 * np.cos(s / 5) - np.cos(9 * s / 5))
    )
    y = 3 / 5 * np.cos(s) + t / 10 * (
        c4 * (np.cos(9 * s / 5) + 9 * np.cos(s / 5)) + s4 * (np.sin(9 * s / 5) - 9 * np.sin(s / 5))
    )
    return np.stack(np.broadcast_arrays(x, y, 4 / 5 * s), axis=-1)


def _p4(s, t):
    h, h3, th = s / 2, 3 * s / 2, np.tan(s / 2)
    q = s**2 * t
    # x: the bracket's last term is -3 cos(s/2); r + bU + cV requires the minus sign
    x = SQ3 / 2 * np.sin(s) - q / 4 * (
        np.sin(h3) + 3 * np.sin(h) - th * (np.cos(h3) - 3 * np.cos(h))
    )
    y = s / 2 - q * (SQ3 / 2 * np.sin(h) - SQ3 / 2 * th * np.cos(h))
    z = SQ3 / 2 * np.cos(s) - q / 4 * (
        np.cos(h3) + 3 * np.cos(h) - th * (-np.sin(h3) + 3 * np.sin(h))
    )
    return np.stack(np.broadcast_arrays(x, y, z), axis=-1)


def _slant_ruled(g):
    def surface(s, t):
        h, h3 = s / 2, 3 * s / 2
        gs = g(s)
        x = SQ3 / 2 * np.sin(s) + t * (
            SQ3 / 2 * np.cos(s) * gs
            + np.sin(h3) * np.cos(h) / 4
            + 3 / 2 * np.sin(h) * np.cos(h)
            - np.cos(h3) * np.sin(h) / 4
        )
        y = s / 2 + t * (gs / 2)
        z = SQ3 / 2 * np.cos(s) + t * (
            -SQ3 / 2 * np.sin(s) * gs
            + np.cos(h3) * np.cos(h) / 4
            + np.sin(h3) * np.sin(h) / 4
            + 3 / 4 * np.cos(s)
        )
        return np.stack(np.broadcast_arrays(x, y, z), axis=-1)

    return surface


_p5 = _slant_ruled(np.cos)
# like p5, the x-component carries g(s) * sqrt(3)/2 cos(s)
_p6 = _slant_ruled(lambda s: np.cos(s) * np.sin(s))


@dataclass(frozen=True)
class Example:
    name: str
    curve: str
    theta_start: Callable[[float], float]
    t0: float
    t_range: tuple[float, float]
    reference: Callable
    a: str = "0"
    b: str | None = None
    c: str | None = None
    g: str | None = None
    description: str = ""

    @property
    def ruled(self) -> bool:
        return self.g is not None

    def build(self, ns: int = 200, nt: int = 50, frame_n: int = DEFAULT_N) -> SurfacePatch:
        curve = builtin(self.curve)
        frame = rmf_by_theta(curve, self.theta_start(curve.s_min), frame_n)
        if self.ruled:
            return build_ruled(curve, frame, self.g, self.t0, self.t_range, ns, nt, name=self.name)
        scale = MarchingScale.from_exprs(self.a, self.b, self.c, self.t0, self.t_range)
        return SurfacePatch(curve, frame, scale, curve.interval, ns, nt, self.name)


EXAMPLES = {
    "p1": Example(
        "p1", "circle", lambda s0: np.pi / 2, np.pi / 2, (0.0, 2 * np.pi), _p1,
        b="sin(t) - 1", c="cos(t)",
        description="circle, b = sin t - 1, c = cos t, t0 = pi/2",
    ),
    "p2": Example(
        "p2", "helix", lambda s0: 4 * s0 / 5, 0.0, (-1.0, 0.5), _p2,
        b="exp(s)*t*cos(4*s/5)", c="-exp(s)*t*sin(4*s/5)",
        description="helix, b = e^s t cos(4s/5), c = -e^s t sin(4s/5), t0 = 0",
    ),
    "p3": Example(
        "p3", "helix", lambda s0: 4 * s0 / 5, 0.0, (-1.0, 0.5), _p3, g="0",
        description="helix, ruled with g = 0, t0 = 0",
    ),
    "p4": Example(
        "p4", "slant", lambda s0: -s0 / 2, 0.0, (-1.0, 1.0), _p4,
        b="s^2*t", c="s^2*t*tan(s/2)",
        description="slant helix, b = s^2 t, c = s^2 t tan(s/2), t0 = 0",
    ),
    "p5": Example(
        "p5", "slant", lambda s0: -s0 / 2, 0.0, (-1.0, 1.0), _p5, g="cos(s)",
        description="slant helix, ruled with g = cos s",
    ),
    "p6": Example(
        "p6", "slant", lambda s0: -s0 / 2, 0.0, (-1.0, 1.0), _p6, g="cos(s)*sin(s)",
        description="slant helix, ruled with g = cos s sin s",
    ),
}

# closed-form RMF normal vectors of the helix and slant-helix examples
CLOSED_FORM_FRAMES = {"helix": (_helix_u, _helix_v), "slant": (_slant_u, _slant_v)}


def get(name: str) -> Example:
    try:
        return EXAMPLES[name.lower()]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}") from None
