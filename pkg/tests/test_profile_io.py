import numpy as np
import pytest
from numpy.testing import assert_allclose

from reflectsim.antenna import Band
from reflectsim.metrics import PowerProfile
from reflectsim.profile_io import (
    ProfileFormatError,
    export_profile,
    import_measured,
    read_profile_json,
)


def tiny_profile(label="28ghz_flat"):
    return PowerProfile(
        positions_m=np.array([0.0, 0.001]),
        power_db=np.array([-54.123456789, -60.0]),
        band=Band.GHZ28,
        reflector_kind="flat",
        label=label,
    )


def test_csv_export_layout(tmp_path):
    path = tmp_path / "p.csv"
    export_profile(tiny_profile(), "csv", path)
    lines = path.read_text().splitlines()
    assert len(lines) == 3
    assert lines[0] == "position_m,power_db"
    assert lines[1].startswith("0.0,")


def test_csv_round_trip_lossless(tmp_path):
    path = tmp_path / "p.csv"
    profile = tiny_profile()
    export_profile(profile, "csv", path)
    back = import_measured(path)
    assert np.array_equal(back.positions_m, profile.positions_m)
    assert np.array_equal(back.power_db, profile.power_db)
    assert back.label == "p"


def test_csv_round_trip_with_minus_inf(tmp_path):
    profile = PowerProfile(np.array([0.0, 0.5, 1.0]),
                           np.array([-60.0, -np.inf, -70.0]),
                           Band.GHZ39, "convex", "x")
    path = tmp_path / "inf.csv"
    export_profile(profile, "csv", path)
    back = import_measured(path)
    assert np.array_equal(back.power_db, profile.power_db)


def test_json_export_schema(tmp_path):
    import json

    path = tmp_path / "p.json"
    export_profile(tiny_profile(), "json", path)
    doc = json.loads(path.read_text())
    assert doc["meta"]["schema_version"] == "1"
    assert doc["meta"]["band"] == "28ghz"
    assert doc["meta"]["kind"] == "flat"
    assert doc["meta"]["label"] == "28ghz_flat"
    assert len(doc["positions_m"]) == len(doc["power_db"]) == 2


def test_json_round_trip_lossless(tmp_path):
    path = tmp_path / "p.json"
    profile = tiny_profile()
    export_profile(profile, "json", path)
    back = read_profile_json(path)
    assert np.array_equal(back.positions_m, profile.positions_m)
    assert np.array_equal(back.power_db, profile.power_db)
    assert back.band is Band.GHZ28


def test_unknown_format_rejected(tmp_path):
    with pytest.raises(ValueError, match="format"):
        export_profile(tiny_profile(), "xml", tmp_path / "p.xml")


def test_export_is_byte_stable(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    export_profile(tiny_profile(), "csv", a)
    export_profile(tiny_profile(), "csv", b)
    assert a.read_bytes() == b.read_bytes()
    ja, jb = tmp_path / "a.json", tmp_path / "b.json"
    export_profile(tiny_profile(), "json", ja)
    export_profile(tiny_profile(), "json", jb)
    assert ja.read_bytes() == jb.read_bytes()


def test_import_ignores_extra_columns(tmp_path):
    path = tmp_path / "extra.csv"
    path.write_text("position_m,power_db,notes\n0.0,-54.0,calibration\n0.001,-60.0,ok\n")
    profile = import_measured(path)
    assert_allclose(profile.power_db, [-54.0, -60.0])


def test_import_rejects_out_of_order_positions(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("position_m,power_db\n0.0,-54.0\n0.002,-55.0\n0.001,-56.0\n")
    with pytest.raises(ProfileFormatError, match="row 4"):
        import_measured(path)


def test_import_rejects_malformed_row(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("position_m,power_db\n0.0,-54.0\nabc,-55.0\n")
    with pytest.raises(ProfileFormatError, match="row 3"):
        import_measured(path)


def test_import_requires_schema_columns(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,y\n0,1\n")
    with pytest.raises(ProfileFormatError, match="position_m"):
        import_measured(path)


def test_import_rejects_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(ProfileFormatError, match="empty"):
        import_measured(path)


def test_import_band_tag_from_filename(tmp_path):
    path = tmp_path / "sweep_120ghz_convex.csv"
    path.write_text("position_m,power_db\n0.0,-54.0\n0.001,-55.0\n")
    assert import_measured(path).band is Band.GHZ120
