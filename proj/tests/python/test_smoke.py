import math

import numpy as np
import pytest

import gxr


def test_model_constants():
    m = gxr.DiskModel(0.5, 1.0)
    assert m.kappa == 0.5 and m.radius == 1.0
    assert m.c == pytest.approx(4 * math.pi / 0.5)
    assert gxr.singular_value(m, 3) == pytest.approx(math.sqrt(m.c / 4))
    assert m == gxr.DiskModel(0.5, 1.0)


def test_invalid_models_raise():
    with pytest.raises(gxr.SimplicityViolation):
        gxr.DiskModel(1.0, 1.0)
    with pytest.raises(gxr.NonpositiveRadius):
        gxr.DiskModel(0.0, -1.0)
    with pytest.raises(gxr.GxrError):
        gxr.DiskModel(0.0, 0.0)


def test_constant_phantom_projection():
    m = gxr.DiskModel(0.0, 1.0)
    s = gxr.project(m, "const:1", n_beta=8, n_alpha=16, nodes_per_ray=64)
    assert s.shape == (8, 16) and s.dtype == np.complex128
    _, alpha = gxr.sinogram_grid(m, 8, 16)
    np.testing.assert_allclose(s, np.broadcast_to(2 * np.cos(alpha), s.shape), atol=1e-10)


def test_round_trip_gaussian():
    m = gxr.DiskModel(0.0, 1.0)
    s = gxr.project(m, "gaussian:0,0,0.3,1", n_beta=64, n_alpha=64)
    rec = gxr.reconstruct(m, s, degree=16, method="svd")
    assert rec.degree == 16
    assert rec.coefficients.shape == ((16 + 1) * (16 + 2) // 2,)
    z = np.array([0.0, 0.3 + 0.2j, -0.5j])
    np.testing.assert_allclose(rec.evaluate(z), gxr.phantom(m, "gaussian:0,0,0.3,1", z), atol=1e-4)


def test_methods_agree_without_noise():
    m = gxr.DiskModel(-0.5, 1.0)
    s = gxr.project(m, "wzernike:2,1,1,0", n_beta=32, n_alpha=32)
    a = gxr.reconstruct(m, s, degree=6, method="alpha:0.5").coefficients
    b = gxr.reconstruct(m, s, degree=6, method="svd").coefficients
    np.testing.assert_allclose(a, b, atol=1e-9)
    with pytest.raises(gxr.GxrError):
        gxr.reconstruct(m, s, degree=6, method="bogus")


def test_sinogram_io(tmp_path):
    m = gxr.DiskModel(0.3, 1.5)
    s = gxr.project(m, "ring", n_beta=8, n_alpha=8, noise=0.01, seed=7)
    for name in ("s.gxr", "s.csv"):
        path = str(tmp_path / name)
        gxr.write_sinogram(path, m, s, {"phantom": "ring"})
        model, back, meta = gxr.read_sinogram(path)
        assert model == m and meta["phantom"] == "ring"
        np.testing.assert_array_equal(back, s)
    with pytest.raises(gxr.IoError):
        gxr.read_sinogram(str(tmp_path / "missing.gxr"))


def test_noise_is_seeded():
    m = gxr.DiskModel(0.0, 1.0)
    a = gxr.project(m, "const", n_beta=4, n_alpha=4, noise=0.1, seed=3)
    b = gxr.project(m, "const", n_beta=4, n_alpha=4, noise=0.1, seed=3)
    np.testing.assert_array_equal(a, b)


def test_verify_report():
    report = gxr.verify(models=[(0.0, 1.0)], only=["svd", "range"])
    assert report["passed"]
    assert [c["name"] for c in report["checks"]] == ["svd", "range"]
    assert "end_to_end" in gxr.check_names()


def test_thread_cap():
    gxr.set_max_threads(1)
    assert gxr.max_threads() == 1
    gxr.set_max_threads(0)
    assert gxr.max_threads() >= 1
