"""Surface pencils through a prescribed asymptotic curve."""

from ._core import BACKEND
from .curve import Curve, builtin, curvature_torsion, frenet
from .expr import differentiate, evaluate, parse, to_string
from .frames import FrameField, rmf_by_theta, rmf_double_reflection
from .pencil import MarchingScale, SurfacePatch, build_sufficient, check_conditions
from .ruled import RuledPatch, build_ruled, classify

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Curve",
    "FrameField",
    "MarchingScale",
    "RuledPatch",
    "SurfacePatch",
    "build_ruled",
    "build_sufficient",
    "builtin",
    "check_conditions",
    "classify",
    "curvature_torsion",
    "differentiate",
    "evaluate",
    "frenet",
    "parse",
    "rmf_by_theta",
    "rmf_double_reflection",
    "to_string",
]
