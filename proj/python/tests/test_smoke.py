import json
import os
import pathlib

import numpy as np
import pytest

import wakegait

CONFIG_DIR = pathlib.Path(os.environ.get(
    "WAKEGAIT_CONFIG_DIR", pathlib.Path(__file__).resolve().parents[2] / "configs"))

SMALL = {
    "wing": {"n_elements_per_side": 4},
    "simulation": {"dt_per_cycle": 60, "n_cycles": 2, "n_warmup": 1},
    "grid": {"dims": [8, 6, 6], "slice_x": [0.3], "slice_dims": [7, 7]},
    "optimizer": {"budget": 8},
}


def test_version_and_exit_codes():
    assert wakegait.__version__
    assert (wakegait.EXIT_OK, wakegait.EXIT_CONFIG, wakegait.EXIT_NUMERIC, wakegait.EXIT_CHECK) == (0, 2, 3, 4)


def test_wagner_phi():
    phi = wakegait.wagner_phi(np.array([0.0, 1.0, 1e4]))
    assert phi[0] == pytest.approx(0.5)
    assert np.all(np.diff(phi) > 0)
    assert phi[-1] == pytest.approx(1.0)


def test_build_wing():
    w = wakegait.build_wing(n_elements_per_side=8)
    assert len(w["s"]) == 16
    assert sum(w["width"]) == pytest.approx(0.34)
    assert np.all(np.diff(w["theta"]) < 0)


def test_config_defaults_and_errors():
    cfg = wakegait.load_config({"simulation": {}})
    assert cfg["simulation"]["dt_per_cycle"] == 200
    assert cfg["simulation"]["n_keep_cycles"] == 3
    baseline = wakegait.load_config(CONFIG_DIR / "paper_baseline.json")
    assert baseline["flight"]["forward_speed"] == 1.0
    with pytest.raises(wakegait.ConfigError, match="chord_proximal"):
        wakegait.load_config({"wing": {"chord_proximal": -0.1}})
    with pytest.raises(wakegait.ConfigError, match="line"):
        wakegait.load_config('{"wing": }')


def test_simulate_small():
    r = wakegait.simulate(SMALL)
    assert r["feasible"]
    wake = r["wake"]
    assert wake["vertices"].shape == ((wake["rows"] + 1) * (wake["strips"] + 1), 3)
    assert r["gamma"].shape == (len(r["times"]), 8)
    assert r["invariants"]["kelvin"]
    assert r["invariants"]["mirror_error"] <= 1e-10
    again = wakegait.simulate(SMALL)
    assert np.array_equal(again["wake"]["vertices"], wake["vertices"])


def test_export_and_vtk_roundtrip(tmp_path):
    paths = wakegait.export(SMALL, tmp_path, with_field=True)
    names = {pathlib.Path(p).name for p in paths}
    assert {"wake.vtk", "circulation.csv", "slices.csv", "manifest.json", "vorticity.vtk"} <= names
    wake = wakegait.read_wake_vtk(tmp_path / "wake.vtk")
    direct = wakegait.simulate(SMALL)["wake"]
    assert np.array_equal(wake["vertices"], direct["vertices"])
    assert wakegait.wake_distance(wake["vertices"], direct["vertices"]) == 0.0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["feasible"]


def test_field_vtk_parses_with_meshio(tmp_path):
    meshio = pytest.importorskip("meshio")
    wakegait.export(SMALL, tmp_path, with_field=True)
    mesh = meshio.read(tmp_path / "vorticity.vtk")
    assert len(mesh.points) == 8 * 6 * 6
    assert mesh.point_data["omega_x"].size == 8 * 6 * 6
    assert mesh.point_data["velocity"].shape == (8 * 6 * 6, 3)


def test_wake_vtk_parses_with_vtk(tmp_path):
    vtk = pytest.importorskip("vtk")
    wakegait.export(SMALL, tmp_path)
    reader = vtk.vtkPolyDataReader()
    reader.SetFileName(str(tmp_path / "wake.vtk"))
    reader.Update()
    poly = reader.GetOutput()
    direct = wakegait.simulate(SMALL)["wake"]
    assert poly.GetNumberOfPoints() == len(direct["vertices"])
    assert poly.GetNumberOfPolys() == direct["rows"] * direct["strips"]
    assert poly.GetPointData().GetArray("phase") is not None


def test_wake_vtk_legacy_layout(tmp_path):
    wakegait.export(SMALL, tmp_path)
    lines = (tmp_path / "wake.vtk").read_text().splitlines()
    assert lines[0] == "# vtk DataFile Version 3.0"
    assert lines[2] == "ASCII"
    assert lines[3] == "DATASET POLYDATA"
    direct = wakegait.simulate(SMALL)["wake"]
    n_pts = len(direct["vertices"])
    n_faces = direct["rows"] * direct["strips"]
    assert lines[4] == f"POINTS {n_pts} double"
    header = lines[5 + n_pts].split()
    assert header == ["POLYGONS", str(n_faces), str(5 * n_faces)]
    for line in lines[6 + n_pts:6 + n_pts + n_faces]:
        idx = [int(t) for t in line.split()]
        assert idx[0] == 4 and all(0 <= i < n_pts for i in idx[1:])
    rest = lines[6 + n_pts + n_faces:]
    assert rest[0] == f"POINT_DATA {n_pts}"
    assert rest[1] == "SCALARS phase double 1"
    assert rest[2] == "LOOKUP_TABLE default"


def test_mesh_mismatch():
    a = np.zeros((4, 3))
    b = np.zeros((5, 3))
    with pytest.raises(wakegait.MeshMismatch):
        wakegait.wake_distance(a, b)


def test_optimize_small(tmp_path):
    wakegait.export(SMALL, tmp_path)
    r = wakegait.optimize(SMALL, tmp_path / "wake.vtk", x0=[0.16, 0.02], budget=8)
    assert r["evaluations"] <= 8
    assert all(b <= a for a, b in zip(r["best_so_far"], r["best_so_far"][1:]))
    assert r["fields"] == ["chord_proximal", "sweep_distal"]


def test_check_suite():
    results = wakegait.check()
    assert results
    assert all(r["passed"] for r in results)
