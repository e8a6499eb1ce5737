"""Smoke tests for the python module: a tiny end-to-end pipeline."""

import math
import os
import sys
import tempfile

import osm2d


def approx(a, b, tol=1e-12):
    return abs(a - b) <= tol


def test_specfun():
    assert osm2d.bessel_j0(0.0) == 1.0
    assert abs(osm2d.bessel_j0(2.404825557695773)) < 1e-10
    h = osm2d.hankel1_0(1.0)
    assert approx(h.real, osm2d.bessel_j0(1.0))
    assert approx(h.imag, osm2d.bessel_y0(1.0))


def test_geometry():
    kite = osm2d.catalogue("kite")
    assert kite.eval(-0.3, 0.0) == 0.5 + 0.1j
    assert kite.eval(5.0, 5.0) == 0
    x1, x2 = osm2d.kite_boundary(0.0)
    assert approx(x1, 0.5) and approx(x2, 0.0)

    sc = osm2d.catalogue("square_cavity")
    assert sc.eval(0.0, 0.0) == 0  # inside the cavity
    assert sc.eval(0.4, 0.4) == 1.0

    shape = osm2d.parse_shape("disk(0,0,0.4) + rect(1,0,0.2,0.2)")
    assert osm2d.shape_contains(shape, 0.0, 0.0)
    assert osm2d.shape_contains(shape, 1.0, 0.0)
    assert not osm2d.shape_contains(shape, 0.6, 0.6)


def test_pipeline():
    medium = osm2d.contrast_map("disk(0,0,0.4)", 0.5 + 0.0j)
    grid = osm2d.VolumeGrid(-1.2, 1.2, 24)
    circle = osm2d.MeasurementCircle(3.0, 12)
    directions = osm2d.DirectionSet.uniform(8)
    ds = osm2d.synthesize(medium, 4.0, circle, directions, grid)
    assert ds.n_receivers == 12 and ds.n_directions == 8
    assert ds.has_normal_derivative

    noisy = osm2d.add_noise(ds, 0.3, 7)
    # the Frobenius noise level is exact by construction
    num = den = 0.0
    for j in range(12):
        for l in range(8):
            num += abs(noisy.u(j, l) - ds.u(j, l)) ** 2
            den += abs(ds.u(j, l)) ** 2
    assert abs(math.sqrt(num / den) - 0.3) < 1e-12

    sampling = osm2d.SamplingGrid(-2, 2, -2, 2, 16, 16)
    image = osm2d.normalize(osm2d.imaging_I(noisy, sampling))
    assert image.normalized and approx(image.max_value(), 1.0)
    assert all(0.0 <= v <= 1.0 for v in image.values)
    i1, i2 = image.argmax()
    assert math.hypot(sampling.x1(i1), sampling.x2(i2)) < 0.75

    image2 = osm2d.imaging_I2(noisy, sampling)
    assert all(v >= 0.0 for v in image2.values)

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "ds.osmd")
        osm2d.save_dataset(ds, path)
        back = osm2d.load_dataset(path)
        assert back.u(3, 1) == ds.u(3, 1)
        osm2d.export_image_csv(image, os.path.join(tmp, "img.csv"))
        assert os.path.getsize(os.path.join(tmp, "img.csv")) > 0


def test_presets_and_run():
    cfg = osm2d.preset("fig1_kite")
    assert cfg.k == 8.0 and cfg.n_receivers == 64
    assert "fig4_square_cavity" in osm2d.preset_names()

    with tempfile.TemporaryDirectory() as tmp:
        cfg = osm2d.ExperimentConfig()
        cfg.medium = "kite"
        cfg.k = 2.0
        cfg.solver_m = 24
        cfg.sample_n1 = cfg.sample_n2 = 12
        cfg.n_receivers = 8
        cfg.n_directions = 4
        cfg.delta = 0.3
        cfg.functionals = ["I", "I2_far"]
        cfg.output_dir = os.path.join(tmp, "run")
        report = osm2d.run(cfg)
        assert [img["functional"] for img in report["images"]] == ["I", "I2_far"]
        assert abs(report["noise"]["achieved_u"] - 0.3) < 1e-12
        assert os.path.exists(os.path.join(tmp, "run", "report.json"))


def main():
    tests = [test_specfun, test_geometry, test_pipeline, test_presets_and_run]
    for test in tests:
        test()
        print(f"[python-smoke] {test.__name__}: PASS")
    print(f"[python-smoke] {len(tests)} tests passed")


if __name__ == "__main__":
    sys.exit(main())
