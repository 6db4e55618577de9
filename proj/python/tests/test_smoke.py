import math

import numpy as np
import pytest

import bipara


def test_root_haar_coefficients():
    doc = bipara.haar_forward(np.array([1.0, 0.0]))
    assert doc["mean"] == pytest.approx(0.5)
    assert doc["entries"] == [{"lx": 0, "kx": 0, "value": 0.5}]


def test_roundtrip_2d():
    rng = np.random.default_rng(3)
    f = rng.standard_normal((8, 4))
    back = bipara.haar_inverse(bipara.haar_forward(f))
    assert back.shape == (8, 4)
    assert np.max(np.abs(back - f)) < 1e-12


def test_pi2_with_constant_symbol_projects():
    rng = np.random.default_rng(4)
    f = rng.standard_normal((4, 4))
    out = bipara.apply("pi2", np.ones((4, 4)), f)
    cc = f - f.mean(axis=0, keepdims=True) - f.mean(axis=1, keepdims=True) + f.mean()
    assert np.max(np.abs(out - cc)) < 1e-12


def test_norms():
    assert bipara.norm(np.ones(8), "lp", 3.0) == pytest.approx(1.0)
    h = np.array([1.0, -1.0])
    assert bipara.norm(h, "bmo") == pytest.approx(1.0)


def test_hadamard_matrix_bound():
    for n in (2, 4):
        g = bipara.construct("hadamard", n)
        assert bipara.pi4_matrix_bound(g) == pytest.approx(math.sqrt(n), abs=1e-9)


def test_opnorm_rank_one():
    g = np.zeros((4, 4))
    g[:2, :2] = [[1, -1], [-1, 1]]
    g *= 2.0  # h of the square [0,1/2)^2
    rep = bipara.opnorm_l2("pi1", g)
    assert rep["value"] == pytest.approx(2.0, rel=1e-8)
    assert rep["bound_type"] == "two_sided"
    search = bipara.opnorm_search("pi2", np.ones((4, 4)), restarts=1, iterations=20)
    assert search["value"] == pytest.approx(1.0, rel=1e-9)


def test_sparse_family():
    fam = {"resolution": [2, 2], "rects": [{"lx": 0, "kx": 0, "ly": 0, "ky": 0}, {"lx": 1, "kx": 0, "ly": 0, "ky": 0}]}
    assert bipara.carleson_constant(fam) == pytest.approx(1.5)
    sf = bipara.sparse_extract(fam)
    assert sf["verified"] is True


def test_errors_raise_value_error():
    with pytest.raises(ValueError):
        bipara.apply("pi9", np.ones((2, 2)), np.ones((2, 2)))
    with pytest.raises(ValueError):
        bipara.norm(np.ones(3))
