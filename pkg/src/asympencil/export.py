"""OBJ meshes and per-probe diagnostics CSV."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import verify
from .curve import curvature_torsion
from .frames import rmf_residual_profile
from .pencil import SurfacePatch, asymptotic_residual_at, iso_residual_at
from .ruled import RuledPatch, developability_determinant

CSV_COLUMNS = (
    "s",
    "kappa",
    "tau",
    "theta",
    "rmf_residual",
    "iso_residual",
    "asym_residual",
    "normal_curvature",
    "ruled_det",
)


class ExportError(RuntimeError):
    pass


def export_obj(points: np.ndarray, path, params=None) -> None:
    """Write an ``(ns, nt, 3)`` grid as an OBJ quad mesh.

    Vertices are s-major with 9 significant digits; faces are 1-based quads
    ``(i, j), (i, j+1), (i+1, j+1), (i+1, j)``.  ``params`` (the parameter
    grids) only serve to name the offending node when a coordinate is NaN.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 3 or points.shape[2] != 3:
        raise ValueError("expected an (ns, nt, 3) grid of points")
    ns, nt, _ = points.shape
    if ns < 2 or nt < 2:
        raise ValueError("grid needs at least 2 x 2 nodes")
    bad = np.argwhere(~np.isfinite(points).all(axis=2))
    if len(bad):
        i, j = bad[0]
        where = f"grid node ({i}, {j})"
        if params is not None:
            where = f"(s, t) = ({params[0][i, j]:.9g}, {params[1][i, j]:.9g})"
        raise ExportError(f"non-finite coordinate at {where}")
    lines = [f"# {ns} x {nt} grid, s-major"]
    lines += [f"v {x:.9g} {y:.9g} {z:.9g}" for x, y, z in points.reshape(-1, 3)]
    for i in range(ns - 1):
        for j in range(nt - 1):
            a = i * nt + j + 1
            lines.append(f"f {a} {a + 1} {a + nt + 1} {a + nt}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_obj(path) -> tuple[np.ndarray, list[tuple[int, ...]]]:
    """Vertices and (1-based) faces of an OBJ file; other records are ignored."""
    verts, faces = [], []
    for line in Path(path).read_text().splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            faces.append(tuple(int(p.split("/")[0]) for p in parts[1:]))
    return np.array(verts, dtype=float).reshape(-1, 3), faces


@dataclass
class DiagnosticsRow:
    s: float
    kappa: float
    tau: float
    theta: float | None
    rmf_residual: float
    iso_residual: float
    asym_residual: float
    normal_curvature: float | None
    ruled_det: float | None = None


def diagnostics(patch: SurfacePatch, n_probe: int = 200) -> list[DiagnosticsRow]:
    """One row per probe of ``t = t0``."""
    s = np.linspace(*patch.s_range, n_probe)
    ct = curvature_torsion(patch.curve, s)
    frame = patch.frame
    theta = frame.theta_at(s) if frame.has_theta else np.full(n_probe, np.nan)
    rmf = np.interp(s, frame.s, rmf_residual_profile(frame))
    iso = iso_residual_at(patch, s)
    asym = asymptotic_residual_at(patch, s)
    kn = verify.normal_curvature_profile(patch, n_probe).values
    det = developability_determinant(patch, s) if isinstance(patch, RuledPatch) else None

    def opt(x):
        x = float(x)
        return None if np.isnan(x) else x

    return [
        DiagnosticsRow(
            float(s[i]),
            float(ct.kappa[i]),
            float(ct.tau[i]),
            opt(theta[i]),
            float(rmf[i]),
            float(iso[i]),
            float(asym[i]),
            opt(kn[i]),
            None if det is None else float(det[i]),
        )
        for i in range(n_probe)
    ]


def _cell(value) -> str:
    return "" if value is None else f"{value:.12g}"


def export_csv(rows: list[DiagnosticsRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([_cell(getattr(row, n)) for n in CSV_COLUMNS])


def read_csv(path) -> dict[str, np.ndarray]:
    """Columns of a diagnostics CSV; empty cells become NaN."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        data = {k: [] for k in reader.fieldnames}
        for row in reader:
            for k, v in row.items():
                data[k].append(float(v) if v != "" else np.nan)
    return {k: np.array(v) for k, v in data.items()}
