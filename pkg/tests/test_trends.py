import numpy as np
import pytest
from scipy import stats

from expendist.core.errors import (
    DegenerateDesign,
    InvalidParams,
    LengthMismatch,
    MalformedRow,
    MixedFamilies,
)
from expendist.data import fixture_path
from expendist.distributions import Lognormal, Mixture
from expendist.estimation import FitResult
from expendist.trends import (
    MIXTURE_PARAMETERS,
    gini_trend_inputs,
    linear_trend,
    load_gini_series,
    load_parameter_table,
    parameter_series,
    trend_frame,
    trend_report,
    trend_table,
)

POPULATIONS = {
    "urban_household": ("urban", "household"),
    "rural_household": ("rural", "household"),
    "urban_person": ("urban", "person"),
    "rural_person": ("rural", "person"),
}

# (sign, significant at 5%) of each parameter's time trend, by population
TREND_CALLS = {
    "x_M": {p: (1, True) for p in POPULATIONS},
    "sigma2": {
        "urban_household": (-1, False),
        "rural_household": (-1, True),
        "urban_person": (1, False),
        "rural_person": (-1, True),
    },
    "nu": {
        "urban_household": (-1, True),
        "rural_household": (-1, False),
        "urban_person": (-1, True),
        "rural_person": (-1, False),
    },
    "x0": {p: (1, True) for p in POPULATIONS},
    "pi": {
        "urban_household": (1, False),
        "rural_household": (1, True),
        "urban_person": (1, False),
        "rural_person": (1, True),
    },
}
PUBLISHED_X_M_SLOPES = {
    "urban_household": 32.6635,
    "rural_household": 17.9736,
    "urban_person": 29.9158,
    "rural_person": 17.0320,
}


@pytest.fixture
def published_series() -> dict[str, list[tuple[float, Mixture]]]:
    tables = {s: load_parameter_table(fixture_path(f"mixture_{s}.csv")) for s in ("urban", "rural")}
    return {
        population: parameter_series(tables[sector], unit)
        for population, (sector, unit) in POPULATIONS.items()
    }


def test_perfect_line() -> None:
    t = np.arange(1983.0, 2007.0)
    result = linear_trend(t, 3.0 + 2.0 * t)
    assert result.slope == pytest.approx(2.0)
    assert result.intercept == pytest.approx(3.0, abs=1e-3)
    assert result.r2 == pytest.approx(1.0)
    assert result.slope_p_value < 1e-10
    assert result.significant
    assert result.sign == 1
    assert result.n == 24


def test_noisy_line() -> None:
    rng = np.random.default_rng(0)
    t = np.linspace(0.0, 10.0, 40)
    y = 1.0 - 0.5 * t + rng.normal(0.0, 0.3, size=t.size)
    result = linear_trend(t, y)
    assert result.ci95[0] < -0.5 < result.ci95[1]
    assert result.ci95[0] < result.slope < result.ci95[1]
    assert result.error_variance == pytest.approx(0.09, rel=0.5)
    assert result.f_stat > 100
    assert set(result.to_dict()) >= {"slope", "slope_p_value", "ci95", "error_variance"}


def test_f_is_t_squared() -> None:
    rng = np.random.default_rng(4)
    t = np.linspace(1983.0, 2007.0, 9)
    result = linear_trend(t, 0.3 + 0.01 * t + rng.normal(0.0, 0.05, size=t.size))
    se = (result.ci95[1] - result.ci95[0]) / (2 * stats.t.ppf(0.975, result.n - 2))
    assert result.f_stat == pytest.approx((result.slope / se) ** 2, rel=1e-9)
    assert result.f_stat == pytest.approx(
        result.r2 * (result.n - 2) / (1 - result.r2), rel=1e-9
    )


def test_shift_equivariance() -> None:
    rng = np.random.default_rng(1)
    t = np.arange(10.0)
    y = rng.normal(size=10)
    base = linear_trend(t, y)
    assert linear_trend(t + 1990.0, y).slope == pytest.approx(base.slope)
    shifted = linear_trend(t, y + 5.0)
    assert shifted.slope == pytest.approx(base.slope)
    assert shifted.slope_p_value == pytest.approx(base.slope_p_value)
    assert linear_trend(t, 3.0 * y).slope == pytest.approx(3.0 * base.slope)


def test_constant_series() -> None:
    result = linear_trend([1.0, 2.0, 3.0, 4.0], [5.0, 5.0, 5.0, 5.0])
    assert result.slope == 0.0
    assert result.slope_p_value == 1.0
    assert result.intercept == 5.0
    assert not result.significant


def test_quadratic_variant() -> None:
    t = np.arange(1.0, 8.0)
    c = t - t.mean()
    result = linear_trend(t, 1.0 + 2.0 * c + 3.0 * c**2, degree=2)
    assert result.degree == 2
    assert result.intercept == pytest.approx(1.0)
    assert result.slope == pytest.approx(2.0)
    assert result.curvature == pytest.approx(3.0)


def test_linear_trend_errors() -> None:
    with pytest.raises(InvalidParams):
        linear_trend([1, 2, 3], [1, 2, 3], degree=3)
    with pytest.raises(LengthMismatch):
        linear_trend([1, 2, 3], [1, 2])
    with pytest.raises(DegenerateDesign):
        linear_trend([1, 2], [1, 2])
    with pytest.raises(DegenerateDesign):
        linear_trend([1, 2, 3], [1, 2, 3], degree=2)
    with pytest.raises(DegenerateDesign):
        linear_trend([2, 2, 2], [1, 2, 3])
    with pytest.raises(InvalidParams):
        linear_trend([1, 2, 3], [1, float("nan"), 3])


def test_parameter_series(published_series) -> None:  # type: ignore[no-untyped-def]
    series = published_series["urban_household"]
    assert len(series) == 16
    times = [t for t, _ in series]
    assert times == sorted(times)
    assert times[0] == 1983.5
    assert times[-1] == 2006.5
    assert series[-1][1] == Mixture(991.283, 0.268, 1.4, 1732.138, 0.169)

    table = load_parameter_table(fixture_path("mixture_urban.csv"))
    assert parameter_series(table, "household", encoding="start")[0][0] == 1983.0


def test_trend_signs_and_significance(published_series) -> None:  # type: ignore[no-untyped-def]
    table = trend_table(published_series)
    assert list(table) == list(MIXTURE_PARAMETERS)
    for parameter, calls in TREND_CALLS.items():
        for population, (sign, significant) in calls.items():
            result = table[parameter][population]
            assert result.sign == sign, (parameter, population)
            assert result.significant == significant, (parameter, population)


def test_median_growth(published_series) -> None:  # type: ignore[no-untyped-def]
    ours = {
        "urban_household": 37.18,
        "rural_household": 20.56,
        "urban_person": 34.09,
        "rural_person": 19.44,
    }
    for population, published in PUBLISHED_X_M_SLOPES.items():
        slope = trend_report(published_series[population], "x_M").slope
        assert slope == pytest.approx(ours[population], abs=0.05)
        assert slope == pytest.approx(published, rel=0.15)


def test_trend_frame(published_series) -> None:  # type: ignore[no-untyped-def]
    frame = trend_frame(trend_table(published_series))
    assert len(frame) == 20
    assert {"parameter", "population", "slope", "slope_p_value"} <= set(frame.columns)


def test_trend_report_checks_inputs() -> None:
    mixture = Mixture(500.0, 0.2, 1.5, 900.0, 0.2)
    with pytest.raises(MixedFamilies):
        trend_report([(1.0, mixture), (2.0, Lognormal(500.0, 0.2)), (3.0, mixture)], "x_M")

    def fit(unit: str) -> FitResult:
        return FitResult(mixture, 3.6, 12, 5, 67, True, unit=unit)

    with pytest.raises(MixedFamilies):
        trend_report([(1.0, fit("household")), (2.0, fit("person")), (3.0, fit("household"))], "pi")
    with pytest.raises(InvalidParams):
        trend_report([(1.0, mixture), (2.0, mixture), (3.0, mixture)], "rate")
    flat = trend_report([(1.0, fit("person")), (2.0, fit("person")), (3.0, fit("person"))], "pi")
    assert flat.slope == 0.0


def test_gini_trends_are_flat() -> None:
    table = load_gini_series(fixture_path("gini_series.csv"))
    for population in ("urban_household", "rural_household", "urban_person", "rural_person"):
        times, values = gini_trend_inputs(table, population)
        assert len(times) == 14
        assert 1999.5 in times
        result = linear_trend(times, values)
        assert abs(result.slope) < 0.1
        assert result.slope_p_value > 0.4
    with pytest.raises(InvalidParams):
        gini_trend_inputs(table, "national")


def test_malformed_tables(tmp_path) -> None:  # type: ignore[no-untyped-def]
    header = "round_label,unit,x_M,sigma2,nu,x0,pi\n"
    cases = {
        "header.csv": "round,unit,x_M,sigma2,nu,x0,pi\n1983,household,1,1,1,1,0.1\n",
        "unit.csv": header + "1983,village,1,1,1,1,0.1\n",
        "value.csv": header + "1983,household,abc,1,1,1,0.1\n",
    }
    for name, text in cases.items():
        path = tmp_path / name
        path.write_text(text)
        with pytest.raises(MalformedRow):
            load_parameter_table(path)
