import json
import math
import re

import numpy as np
import pytest

from weylrbm import io, rootsys
from weylrbm.sim import PathConfig, estimate_Y, simulate_reflected


@pytest.fixture
def b2_path():
    rs = rootsys.build_root_system("B2")
    gd = rootsys.gram_data(rs)
    p = simulate_reflected(rs, PathConfig(dt=1e-3, seed=0))
    return rs, p, estimate_Y(p, gd, 0.2)


def test_columns():
    assert io.path_columns(2) == ["t", "theta_1", "theta_2", "pi_1", "pi_2", "Y_1", "Y_2", "wall_distance"]


def test_path_csv_round_trip(tmp_path, b2_path):
    rs, p, est = b2_path
    f = io.write_path_csv(tmp_path / "p.csv", p, est)
    header, data = io.read_path_csv(f)
    assert header == io.path_columns(2)
    np.testing.assert_array_equal(data[:, 3:5], p.pi_theta)
    np.testing.assert_array_equal(data[:, 5:7], est.y_curves)


def test_json_plain(tmp_path):
    f = io.write_json(tmp_path / "r.json", {"a": np.float64(1.5), "b": np.arange(3), "c": math.nan,
                                            "d": math.inf, "e": np.bool_(True)}, kind="test")
    doc = json.loads(f.read_text())
    assert doc == {"schema_version": io.SCHEMA_VERSION, "kind": "test", "a": 1.5, "b": [0, 1, 2],
                   "c": None, "d": "inf", "e": True}


def test_report_csv_union_columns(tmp_path):
    f = io.write_report_csv(tmp_path / "r.csv", [{"a": 1}, {"a": 2, "b": 3}])
    assert f.read_text().splitlines() == ["a,b", "1,", "2,3"]


def test_svg_walls_at_chamber_angles(b2_path):
    rs, p, _ = b2_path
    svg = io.chamber_svg(p.pi_theta, rs.simple_span)
    walls = re.findall(r'<line class="wall" x1="([\d.]+)" y1="([\d.]+)" x2="([\d.]+)" y2="([\d.]+)"', svg)
    assert len(walls) == 2 and svg.count('class="path"') == 1
    dirs = [np.array([float(x2) - float(x1), float(y1) - float(y2)]) for x1, y1, x2, y2 in walls]
    cos = dirs[0] @ dirs[1] / np.linalg.norm(dirs[0]) / np.linalg.norm(dirs[1])
    assert math.acos(np.clip(cos, -1, 1)) == pytest.approx(math.pi / 4, abs=1e-3)
    # both walls orthogonal to a simple root
    for d in dirs:
        assert min(abs(d @ s) / np.linalg.norm(d) / np.linalg.norm(s) for s in rs.simple_span) < 1e-3


def test_svg_rejects_rank3():
    with pytest.raises(ValueError):
        io.chamber_svg(np.zeros((3, 3)), np.eye(3))
