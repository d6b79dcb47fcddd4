import json
import pandas as pd
import pytest
from app.core.errors import DomainError, InputError
from app.models.sets import CoverSpec
from app.services import pointset
from app.services.constructions import integers_window
from app.services.document_service import DocumentService

document_service = DocumentService()


def test_load_column_file(tmp_path):
    path = tmp_path / "points.txt"
    path.write_text("# integers\n3\n1  # one\n\n2\n")
    w = document_service.load_points(path)
    assert w.points == (1.0, 2.0, 3.0)


def test_load_json_points_sorts_and_keeps_flags(tmp_path):
    path = tmp_path / "points.json"
    path.write_text(json.dumps({"points": [5, -1, 2], "window_certified": True}))
    w = document_service.load_points(path)
    assert w.points == (-1.0, 2.0, 5.0)
    assert w.window_certified


def test_load_descriptor_document(tmp_path):
    path = tmp_path / "cubes.json"
    path.write_text(json.dumps({"kind": "power", "exponent": 3, "n_max": 4}))
    w = document_service.load_points(path)
    assert w.points == (-64.0, -27.0, -8.0, -1.0, 0.0, 1.0, 8.0, 27.0, 64.0)


def test_bad_point_documents(tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing here\n")
    with pytest.raises(InputError):
        document_service.load_points(empty)

    garbage = tmp_path / "garbage.txt"
    garbage.write_text("1\nabc\n")
    with pytest.raises(InputError) as exc:
        document_service.load_points(garbage)
    assert ":2:" in exc.value.message

    broken = tmp_path / "broken.json"
    broken.write_text("{\"points\": [1, 2")
    with pytest.raises(InputError):
        document_service.load_points(broken)

    with pytest.raises(InputError):
        document_service.load_points(tmp_path / "missing.json")
    with pytest.raises(InputError):
        document_service.points_from_document({"kind": "integers", "lo": "x"})
    with pytest.raises(InputError):
        document_service.points_from_document({"values": [1]})
    with pytest.raises(InputError):
        document_service.points_from_values([1, float("inf")])


def test_duplicate_points_are_a_domain_error():
    with pytest.raises(DomainError):
        document_service.points_from_values([1, 2, 2])


def test_cover_documents():
    cover = document_service.cover_from_document({"kind": "hkw", "n_max": 3})
    assert cover.centers == (0.0, 0.5, 1 / 3)
    explicit = document_service.cover_from_document({"lengths": [0.1, 0.05], "alpha": 0.5})
    assert explicit == CoverSpec(lengths=(0.1, 0.05), alpha=0.5)
    with pytest.raises(InputError):
        document_service.cover_from_document({"lengths": [0.1, 0.2], "alpha": 0.5})


def test_set_documents():
    u = document_service.set_from_document({"intervals": [[0.5, 0.75], [0.0, 0.25]]})
    assert u.intervals == ((0.0, 0.25), (0.5, 0.75))
    assert document_service.set_from_document([[0.9, 0.1]]).measure == pytest.approx(0.2)
    with pytest.raises(InputError):
        document_service.set_from_document({"interval": []})


def test_inline_values_and_config(tmp_path):
    assert document_service.load_inline_or_file("[1, [0, 2]]") == [1, [0, 2]]
    path = tmp_path / "coeffs.json"
    path.write_text("[1, 2]")
    assert document_service.load_inline_or_file(str(path)) == [1, 2]
    assert document_service.load_config(None) == {}
    with pytest.raises(InputError):
        document_service.load_config(path)


def test_write_report(tmp_path):
    profile = pointset.discreteness_profile(integers_window(0, 10), 1)
    out = tmp_path / "nested" / "profile.json"
    text = document_service.write(profile, out)
    assert json.loads(out.read_text()) == json.loads(text) == {"h": 1, "sup_count": 3, "inf_count": 2}


def test_density_csv(tmp_path):
    report = pointset.density_estimate(integers_window(-50, 50), 1.0, [1.0, 5.0, 25.0])
    path = tmp_path / "density.csv"
    document_service.write_density_csv(report, path)
    frame = pd.read_csv(path, float_precision="round_trip")
    assert list(frame.columns) == ["h", "sup", "inf", "sup_ratio", "inf_ratio"]
    assert frame["sup"].tolist() == report.sup_counts
    assert frame["sup_ratio"].tolist() == report.sup_curve


if __name__ == "__main__":
    pytest.main([__file__])
