from dataclasses import replace

import numpy as np
import pandas as pd
import pytest
from scipy import integrate

from expendist.core.errors import GridMismatch, InvalidBandwidth, InvalidParams, MissingClassMeans
from expendist.grouped import ExpenditureClass, GroupedSample
from expendist.kde import (
    KdeCurve,
    default_grid,
    grouped_kde,
    kde_series,
    log_density_function,
    log_sigma,
    pool_national,
    pooled_bandwidth,
    silverman_bandwidth,
    write_curve,
)


def _without_means(sample: GroupedSample) -> GroupedSample:
    classes = [
        ExpenditureClass(c.lower, c.upper, None, c.freq_households, c.freq_persons)
        for c in sample.classes
    ]
    return replace(sample, classes=tuple(classes), round_label="2004-05")


def test_silverman_bandwidth() -> None:
    assert silverman_bandwidth(0.5, 1000) == pytest.approx(0.9 * 0.5 * 1000**-0.2)
    assert silverman_bandwidth(0.5, 1000) == pytest.approx(0.11303, abs=1e-5)
    with pytest.raises(InvalidBandwidth):
        silverman_bandwidth(0.0, 1000)
    with pytest.raises(InvalidBandwidth):
        silverman_bandwidth(0.5, 1)


def test_pooled_bandwidth_of_one_table(rural: GroupedSample) -> None:
    assert pooled_bandwidth([rural]) == pytest.approx(silverman_bandwidth(log_sigma(rural), 1000))
    with pytest.raises(InvalidBandwidth):
        pooled_bandwidth([])


@pytest.mark.parametrize("unit", ["household", "person"])
def test_log_density_integrates_to_one(rural: GroupedSample, unit: str) -> None:
    curve = grouped_kde(rural, unit)
    assert curve.scale == "log"
    assert curve.label == "2006-07"
    assert len(curve.grid) == 512
    assert np.all(np.diff(curve.grid) > 0)
    assert np.all(curve.density >= 0)
    assert curve.mass() == pytest.approx(1.0, abs=1e-3)
    assert curve.to_level().mass() == pytest.approx(1.0, abs=2e-3)


def test_truncated_kernels_keep_class_shares(urban: GroupedSample) -> None:
    h = 0.15
    density = log_density_function(urban, "household", h, truncated=True)
    with np.errstate(divide="ignore"):
        lo = np.log(urban.limits[:-1])
    hi = np.log(urban.limits[1:])
    shares = urban.proportions()
    for a, b, share in zip(lo, hi, shares, strict=True):
        mass, _ = integrate.quad(lambda g: float(density(g)[0]), a, b, epsabs=1e-12)
        assert mass == pytest.approx(share, abs=1e-7)


def test_truncated_curve_integrates_to_one(urban: GroupedSample) -> None:
    curve = grouped_kde(urban, bandwidth=0.15, truncated=True, points=20_000)
    assert curve.mass() == pytest.approx(1.0, abs=5e-3)


def _rescaled(sample: GroupedSample, freq: np.ndarray) -> GroupedSample:
    classes = [
        ExpenditureClass(c.lower, c.upper, c.class_mean, f, f)
        for c, f in zip(sample.classes, 1000.0 * freq / freq.sum(), strict=True)
    ]
    return sample.with_classes(classes)


@pytest.mark.parametrize("truncated", [False, True])
def test_kde_is_linear_in_frequencies(rural: GroupedSample, truncated: bool) -> None:
    a = _rescaled(rural, rural.frequencies("household"))
    b = _rescaled(rural, rural.frequencies("person"))
    mixed = _rescaled(rural, 0.3 * a.frequencies() + 0.7 * b.frequencies())
    grid = np.linspace(4.5, 8.5, 301)

    def density(sample: GroupedSample) -> np.ndarray:
        return grouped_kde(sample, bandwidth=0.15, grid=grid, truncated=truncated).density

    np.testing.assert_allclose(
        density(mixed), 0.3 * density(a) + 0.7 * density(b), rtol=1e-10, atol=1e-14
    )


@pytest.mark.parametrize("truncated", [False, True])
@pytest.mark.parametrize("h", [0.02, 0.01, 0.005])
def test_small_bandwidth_concentrates_mass(
    rural: GroupedSample, h: float, truncated: bool
) -> None:
    grid = np.linspace(4.5, 8.5, 200_001)
    density = log_density_function(rural, "household", h, truncated)(grid)
    centres = np.log(rural.class_means)
    near = np.any(np.abs(grid[:, None] - centres[None, :]) <= 3 * h, axis=1)
    share = integrate.trapezoid(density * near, grid) / integrate.trapezoid(density, grid)
    assert share > 0.995


def test_truncation_depends_on_bandwidth(rural: GroupedSample) -> None:
    def relative_gap(h: float) -> float:
        plain = grouped_kde(rural, bandwidth=h)
        cut = grouped_kde(rural, bandwidth=h, grid=plain.grid, truncated=True)
        return float(np.max(np.abs(cut.density - plain.density)) / plain.density.max())

    # every rural class mean sits at least 0.049 in log from its limits, about 5h here
    assert relative_gap(0.01) < 0.05
    # at the Silverman bandwidth the kernels are as wide as the classes
    silverman = silverman_bandwidth(log_sigma(rural), 1000)
    assert silverman == pytest.approx(0.116, abs=0.005)
    assert 0.05 < relative_gap(silverman) < 0.5


def test_explicit_grid(rural: GroupedSample) -> None:
    grid = np.linspace(4.0, 9.0, 101)
    curve = grouped_kde(rural, bandwidth=0.2, grid=grid)
    np.testing.assert_array_equal(curve.grid, grid)
    assert curve.bandwidth == 0.2
    assert int(np.argmax(curve.density)) > 0


def test_default_grid_bounds(rural: GroupedSample) -> None:
    grid = default_grid([rural], 0.1, points=50)
    assert len(grid) == 50
    assert grid[0] == pytest.approx(np.log(197.45) - 0.3)
    assert grid[-1] == pytest.approx(np.log(2 * 1757.60) + 0.3)


def test_kde_errors(rural: GroupedSample) -> None:
    with pytest.raises(InvalidBandwidth):
        grouped_kde(rural, bandwidth=-0.1)
    with pytest.raises(MissingClassMeans):
        grouped_kde(_without_means(rural))
    with pytest.raises(GridMismatch):
        KdeCurve(np.zeros(3), np.zeros(4), 0.1)
    with pytest.raises(InvalidParams):
        KdeCurve(np.zeros(3), np.zeros(3), 0.1, scale="sqrt")


def test_kde_series_shares_grid(rural: GroupedSample, urban: GroupedSample) -> None:
    urban = replace(urban, round_label="2006-07 urban")
    curves = kde_series([rural, _without_means(rural), urban])
    assert list(curves) == ["2006-07", "2006-07 urban"]
    first, second = curves.values()
    np.testing.assert_array_equal(first.grid, second.grid)
    assert first.bandwidth == second.bandwidth == pytest.approx(pooled_bandwidth([rural, urban]))
    with pytest.raises(MissingClassMeans):
        kde_series([_without_means(rural)])


def test_pool_national(rural: GroupedSample, urban: GroupedSample) -> None:
    curves = kde_series([rural, replace(urban, round_label="urban")])
    r, u = curves["2006-07"], curves["urban"]
    np.testing.assert_allclose(pool_national(r, u, 1.0).density, r.density)
    pooled = pool_national(r, u, 0.7)
    assert pooled.label == "national"
    np.testing.assert_allclose(pooled.density, 0.7 * r.density + 0.3 * u.density)
    assert pooled.mass() == pytest.approx(0.7 * r.mass() + 0.3 * u.mass())

    with pytest.raises(InvalidParams):
        pool_national(r, u, 1.2)
    with pytest.raises(GridMismatch):
        pool_national(r, grouped_kde(urban, points=64), 0.5)
    with pytest.raises(GridMismatch):
        pool_national(r, u.to_level(), 0.5)


def test_write_curve(tmp_path, rural: GroupedSample) -> None:  # type: ignore[no-untyped-def]
    curve = grouped_kde(rural, points=64)
    frame = pd.read_csv(write_curve(curve, tmp_path / "kde.csv"))
    assert list(frame.columns) == ["x", "density"]
    np.testing.assert_allclose(frame["x"], np.exp(curve.grid), rtol=1e-9)

    frame = pd.read_csv(write_curve(curve, tmp_path / "kde_log.csv", scale="log"))
    np.testing.assert_allclose(frame["density"], curve.density, rtol=1e-9)
    with pytest.raises(InvalidParams):
        write_curve(curve, tmp_path / "x.csv", scale="sqrt")


def test_level_and_log_are_inverse(rural: GroupedSample) -> None:
    curve = grouped_kde(rural, points=32)
    back = curve.to_level().to_log()
    np.testing.assert_allclose(back.grid, curve.grid)
    np.testing.assert_allclose(back.density, curve.density)
