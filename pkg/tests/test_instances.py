import json

import numpy as np
import pytest

from corrwork import instances
from corrwork.errors import InvalidArgument, InvalidState


def test_fixture_lookup():
    assert instances.fixture("fix-q").mean_energy == pytest.approx(0.25)
    with pytest.raises(InvalidArgument, match="FIX-Q"):
        instances.fixture("nope")


def test_random_instance_is_deterministic():
    a = instances.dumps_instance(instances.random_instance(1, 2))
    b = instances.dumps_instance(instances.random_instance(1, 2))
    assert a == b
    assert a != instances.dumps_instance(instances.random_instance(2, 2))


def test_random_instance_shape():
    inst = instances.random_instance(7, 40)
    e = np.array(inst["energies"])
    assert e[0] == 0.0 and np.all(np.diff(e) >= 0) and e[-1] <= 1.0
    s = instances.system_from_instance(inst)
    assert s.rank == 40


def test_rotated_mode_shares_spectrum():
    d = instances.random_system(7, 40, "diagonal")
    r = instances.random_system(7, 40, "rotated")
    assert np.allclose(d.lam, r.lam, atol=1e-12)
    assert np.array_equal(d.h.levels, r.h.levels)
    assert np.max(np.abs(r.rho - np.diag(np.diag(r.rho)))) > 1e-3


def test_random_unitary_is_unitary(rng):
    u = instances.random_unitary(rng, 5)
    assert np.allclose(u.conj().T @ u, np.eye(5), atol=1e-12)


def test_round_trip_file(tmp_path):
    inst = instances.random_instance(3, 4, "rotated")
    path = tmp_path / "inst.json"
    instances.write_instance(path, inst)
    assert json.loads(path.read_text()) == inst
    s = instances.read_instance(path)
    again = instances.instance_from_system(s)
    assert np.allclose(np.array(again["rho"]), np.array(inst["rho"]))
    assert instances.load_system(str(path)).d == 4
    assert instances.load_system("fixture:FIX-3").d == 3


@pytest.mark.parametrize(
    "patch, field",
    [
        ({"dimension": 1}, "dimension"),
        ({"energies": [0.0, 2.0, 1.0]}, "energies"),
        ({"energies": [0.0]}, "energies"),
        ({"rho": [[[1, 0]]]}, "rho"),
    ],
)
def test_invalid_instance_names_field(patch, field):
    inst = instances.random_instance(0, 3)
    inst.update(patch)
    with pytest.raises(InvalidArgument, match=field):
        instances.system_from_instance(inst)


def test_invalid_rho_state():
    inst = instances.random_instance(0, 2)
    inst["rho"] = [[[0.6, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.6, 0.0]]]
    with pytest.raises(InvalidState, match="rho"):
        instances.system_from_instance(inst)


def test_missing_field():
    with pytest.raises(InvalidArgument, match="energies"):
        instances.system_from_instance({"dimension": 2, "rho": []})


def test_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(InvalidArgument):
        instances.read_instance(p)
