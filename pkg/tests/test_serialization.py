import json
import math

import numpy as np
import pytest

from oracles import random_density
from timebin_cphase.serialization import (
    check_density_matrix,
    csv_text,
    density_from_dict,
    density_to_dict,
    dumps,
    state_from_dict,
    state_to_dict,
)


class TestDensityJson:
    def test_round_trip_is_exact(self, rng):
        rho = random_density(rng)
        back = density_from_dict(json.loads(dumps(density_to_dict(rho))))
        assert np.array_equal(back, rho)

    def test_basis_labels(self):
        d = density_to_dict(np.eye(4) / 4)
        assert d["basis"] == ["t1t1", "t1t2", "t2t1", "t2t2"] and d["dim"] == 4

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            density_from_dict({"dim": 4, "re": np.eye(2).tolist(), "im": np.zeros((2, 2)).tolist()})

    def test_foreign_basis_rejected(self):
        d = density_to_dict(np.eye(4) / 4)
        d["basis"] = ["t2t2", "t2t1", "t1t2", "t1t1"]
        with pytest.raises(ValueError, match="basis"):
            density_from_dict(d)


class TestCheck:
    def test_accepts_physical(self, rng):
        check_density_matrix(random_density(rng))

    @pytest.mark.parametrize("rho,msg", [
        (np.eye(4) / 2, "trace"),
        (np.diag([1.5, -0.5, 0, 0]), "negative"),
        (np.array([[0.5, 0.1], [0.2, 0.5]]), "Hermitian"),
        (np.eye(3) / 3, "2x2 or 4x4"),
    ])
    def test_rejects(self, rho, msg):
        with pytest.raises(ValueError, match=msg):
            check_density_matrix(rho)


def test_state_round_trip(rng):
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    assert np.array_equal(state_from_dict(json.loads(dumps(state_to_dict(v)))), v)


def test_dumps_handles_numpy_and_nan():
    text = dumps({"a": np.float64(0.1), "b": np.int64(3), "c": np.bool_(True), "d": math.nan,
                  "e": np.arange(2)})
    assert json.loads(text) == {"a": 0.1, "b": 3, "c": True, "d": None, "e": [0, 1]}
    assert text.endswith("\n")


def test_csv_seventeen_digits():
    text = csv_text(["x", "n"], [(1 / 3, 2), (np.float64(0.1), 5)])
    lines = text.splitlines()
    assert lines[0] == "x,n"
    assert lines[1] == "0.33333333333333331,2"
    assert float(lines[2].split(",")[0]) == 0.1
