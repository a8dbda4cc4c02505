import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from beq import BlaschkeProduct, CircleConfiguration, LineConfiguration, SignedAtomicMeasure
from beq import io as bio
from beq.errors import SchemaError

finite = st.floats(-10, 10, allow_nan=False)
inside = st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)), st.floats(0, 0.99), st.floats(0, 6.28))


def round_trip(obj):
    return bio.from_document(bio.loads(bio.dumps(bio.to_document(obj))))


@settings(max_examples=40, deadline=None)
@given(st.lists(inside, min_size=1, max_size=6), st.floats(0, 6.28))
def test_blaschke_round_trip(zeros, phase):
    B = BlaschkeProduct(zeros, complex(math.cos(phase), math.sin(phase)))
    assert round_trip(B) == B


@settings(max_examples=40, deadline=None)
@given(st.lists(finite, min_size=1, max_size=6))
def test_circle_configuration_round_trip(angles):
    got = round_trip(CircleConfiguration(angles))
    assert isinstance(got, CircleConfiguration)
    assert np.array_equal(got.angles, np.asarray(angles))


def test_line_configuration_round_trip_with_infinity():
    got = round_trip(LineConfiguration([0.25, math.inf, -3.0]))
    assert isinstance(got, LineConfiguration)
    assert got.infinite_index == 1 and got.points[0] == 0.25


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(finite, finite, finite), min_size=0, max_size=5, unique_by=lambda a: (a[0], a[1])))
def test_measure_round_trip(atoms):
    mu = SignedAtomicMeasure([complex(a, b) for a, b, _ in atoms], [w for _, _, w in atoms])
    got = round_trip(mu)
    assert np.array_equal(got.locations, mu.locations)
    assert np.array_equal(got.weights, mu.weights)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=6))
def test_points_round_trip(pairs):
    z = np.array([complex(a, b) for a, b in pairs])
    assert np.array_equal(round_trip(z), z)


def test_points_from_angles():
    doc = bio.parse_document({"kind": "points", "payload": {"angles": [0.0, math.pi / 2]}})
    assert np.allclose(bio.from_document(doc), [1, 1j])


def test_metadata_is_kept():
    doc = bio.to_document(BlaschkeProduct([0.1]), {"note": "x"})
    assert bio.loads(bio.dumps(doc)).metadata == {"note": "x"}


@pytest.mark.parametrize("data, field", [
    ({"kind": "nope", "payload": {}}, "kind"),
    ({"kind": "blaschke"}, "payload"),
    ({"kind": "blaschke", "payload": {"zeros": [[0.1, 0.2], [0.3]]}}, "payload.zeros[1]"),
    ({"kind": "blaschke", "payload": {"zeros": [[0.1, "a"]]}}, "payload.zeros[0][1]"),
    ({"kind": "blaschke", "payload": {"zeros": [[1.5, 0]]}}, "payload.zeros[0]"),
    ({"kind": "blaschke", "payload": {"zeros": [[0.1, 0]], "leading_coefficient": [2, 0]}},
     "payload.leading_coefficient"),
    ({"kind": "configuration", "payload": {"domain": "torus", "angles": []}}, "payload.domain"),
    ({"kind": "configuration", "payload": {"angles": [0.1, None]}}, "payload.angles[1]"),
    ({"kind": "measure", "payload": {"atoms": [{"location": [0, 1]}]}}, "payload.atoms[0]"),
    ({"kind": "points", "payload": {}}, "payload.angles"),
])
def test_schema_errors_name_the_field(data, field):
    with pytest.raises(SchemaError) as info:
        bio.parse_document(data)
    assert str(info.value).startswith(field)


def test_invalid_json():
    with pytest.raises(SchemaError):
        bio.loads("{not json")


def test_csv_full_precision(tmp_path):
    x = 0.1 + 0.2
    path = tmp_path / "a.csv"
    bio.write_csv(path, ["a", "b"], [(x, math.inf)])
    text = path.read_text()
    assert text == "a,b\n0.30000000000000004,inf\n"
    header, rows = bio.read_csv(path)
    assert header == ["a", "b"] and rows[0, 0] == x


def test_to_jsonable_handles_numpy():
    out = bio.to_jsonable({"z": np.array([1 + 2j]), "f": np.float64(1.5), "i": np.int64(3), "b": np.bool_(True)})
    assert json.loads(json.dumps(out)) == {"z": [[1.0, 2.0]], "f": 1.5, "i": 3, "b": True}
