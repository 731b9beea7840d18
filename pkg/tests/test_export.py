import math

import numpy as np
import pytest

from asympencil import examples
from asympencil.export import (
    CSV_COLUMNS,
    ExportError,
    diagnostics,
    export_csv,
    export_obj,
    read_csv,
    read_obj,
)


@pytest.fixture(scope="module")
def p1():
    return examples.get("p1").build(200, 50)


def test_smallest_mesh(tmp_path):
    path = tmp_path / "quad.obj"
    export_obj(np.arange(12.0).reshape(2, 2, 3), path)
    lines = path.read_text().splitlines()
    assert [l for l in lines if l.startswith("v ")] == ["v 0 1 2", "v 3 4 5", "v 6 7 8", "v 9 10 11"]
    assert [l for l in lines if l.startswith("f ")] == ["f 1 2 4 3"]


def test_counts_and_round_trip(tmp_path, p1):
    path = tmp_path / "p1.obj"
    points = p1.grid()
    export_obj(points, path)
    verts, faces = read_obj(path)
    assert len(verts) == 200 * 50
    assert len(faces) == 199 * 49
    assert max(max(f) for f in faces) == len(verts)
    flat = points.reshape(-1, 3)
    # the reader recovers exactly what was written ...
    written = np.vectorize(lambda x: float(f"{x:.9g}"))(flat)
    np.testing.assert_array_equal(verts, written)
    # ... which is the geometry rounded to 9 significant digits
    assert np.all(np.abs(verts - flat) <= 5e-9 * np.abs(flat) + 1e-300)
    # and exporting the reloaded mesh again changes nothing
    again = tmp_path / "again.obj"
    export_obj(verts.reshape(points.shape), again)
    assert again.read_bytes() == path.read_bytes()


def test_non_finite_point_names_the_node(tmp_path):
    points = np.zeros((3, 2, 3))
    points[2, 1, 0] = np.nan
    S, T = np.meshgrid([0.0, 0.5, 1.0], [0.0, 2.0], indexing="ij")
    with pytest.raises(ExportError, match=r"\(s, t\) = \(1, 2\)"):
        export_obj(points, tmp_path / "bad.obj", params=(S, T))


def test_bad_shape(tmp_path):
    with pytest.raises(ValueError):
        export_obj(np.zeros((1, 4, 3)), tmp_path / "x.obj")


def test_csv_layout(tmp_path):
    path = tmp_path / "p2.csv"
    export_csv(diagnostics(examples.get("p2").build(40, 10)), path)
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 201
    assert lines[1].endswith(",")  # no ruled determinant for this member
    data = read_csv(path)
    np.testing.assert_allclose(data["kappa"], 0.6, atol=1e-12)
    np.testing.assert_allclose(data["tau"], -0.8, atol=1e-12)
    assert np.isnan(data["ruled_det"]).all()


def test_circle_angle_column(tmp_path, p1):
    path = tmp_path / "p1.csv"
    export_csv(diagnostics(p1), path)
    np.testing.assert_allclose(read_csv(path)["theta"], math.pi / 2, atol=1e-12)


def test_ruled_determinant_column(tmp_path):
    path = tmp_path / "p5.csv"
    export_csv(diagnostics(examples.get("p5").build(40, 10)), path)
    data = read_csv(path)
    np.testing.assert_allclose(data["ruled_det"], 0.5, atol=1e-6)
    assert np.max(data["iso_residual"]) <= 1e-8
    assert np.max(data["asym_residual"]) <= 1e-7
    assert np.nanmax(np.abs(data["normal_curvature"])) <= 1e-5


def test_outputs_are_deterministic(tmp_path):
    outputs = []
    for k in range(2):
        patch = examples.get("p6").build(30, 8)
        obj, csv = tmp_path / f"{k}.obj", tmp_path / f"{k}.csv"
        export_obj(patch.grid(), obj)
        export_csv(diagnostics(patch), csv)
        outputs.append((obj.read_bytes(), csv.read_bytes()))
    assert outputs[0] == outputs[1]
