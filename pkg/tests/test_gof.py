import numpy as np
import pytest

from conftest import CASES, PUBLISHED_KS
from expendist.core.errors import InvalidParams
from expendist.distributions import Lognormal
from expendist.estimation import class_masses, fit_chi2
from expendist.gof import GofReport, bin_sample, ks_from_counts, ks_grouped, mc_pvalue
from expendist.grouped import ExpenditureClass, GroupedSample


def test_bin_sample() -> None:
    counts = bin_sample([0.5, 1.0, 1.5, 2.5, 10.0], [0.0, 1.0, 2.0, np.inf])
    np.testing.assert_array_equal(counts, [1, 2, 2])
    # the first and last limits do not clip
    counts = bin_sample([-3.0, 50.0], [0.0, 1.0, 2.0, 5.0])
    np.testing.assert_array_equal(counts, [1, 0, 1])


def test_ks_from_counts() -> None:
    assert ks_from_counts([500, 500], [0.5, 0.5], 1000) == 0.0
    assert ks_from_counts([300, 200, 500], [0.2, 0.3, 0.5], 1000) == pytest.approx(0.1)


@pytest.mark.parametrize("case", CASES)
def test_ks_at_published_parameters(  # type: ignore[no-untyped-def]
    case, table, published
) -> None:
    sector, unit = case
    value = ks_grouped(table(sector, unit), published(sector, unit))
    assert value == pytest.approx(PUBLISHED_KS[case], abs=3e-3)


def test_mc_pvalue_is_reproducible(table, published) -> None:  # type: ignore[no-untyped-def]
    sample, spec = table("rural", "person"), published("rural", "person")
    first = mc_pvalue(sample, spec, replicates=200, seed=9, threads=1)
    again = mc_pvalue(sample, spec, replicates=200, seed=9, threads=4)
    assert first == again
    assert isinstance(first, GofReport)
    assert first.to_dict()["replicates"] == 200
    assert first.statistic_name == "ks"
    assert first.observed_value == pytest.approx(ks_grouped(sample, spec))
    assert "p = " in first.summary()


@pytest.mark.parametrize("case", CASES)
def test_published_fit_is_not_rejected(  # type: ignore[no-untyped-def]
    case, table, published
) -> None:
    sector, unit = case
    report = mc_pvalue(table(sector, unit), published(sector, unit), replicates=200, seed=1)
    assert report.p_value > 0.5


def test_chi2_statistic_variant(table, published) -> None:  # type: ignore[no-untyped-def]
    report = mc_pvalue(
        table("urban", "household"),
        published("urban", "household"),
        statistic_name="chi2",
        replicates=100,
        seed=2,
    )
    assert report.statistic_name == "chi2"
    assert report.observed_value == pytest.approx(3.6169, rel=0.05)
    assert 0.0 <= report.p_value <= 1.0


def test_wrong_model_is_rejected(rural: GroupedSample) -> None:
    report = mc_pvalue(rural, Lognormal(x_M=900.0, sigma2=0.1), replicates=100, seed=4)
    assert report.p_value == 0.0


@pytest.mark.parametrize("statistic_name", ["ks", "chi2"])
def test_exact_table_has_p_one(rural: GroupedSample, statistic_name: str) -> None:
    spec = Lognormal(x_M=550.0, sigma2=0.2)
    counts = 1000.0 * class_masses(spec, rural.limits)
    table = GroupedSample(
        classes=tuple(
            ExpenditureClass(lo, hi, None, c, c)
            for lo, hi, c in zip(rural.limits[:-1], rural.limits[1:], counts, strict=True)
        )
    )
    report = mc_pvalue(
        table, spec, statistic_name=statistic_name, replicates=100, seed=6, threads=1
    )
    assert report.observed_value == pytest.approx(0.0, abs=1e-12)
    assert report.p_value == 1.0


def test_double_pareto_fit_then_gof(urban: GroupedSample) -> None:
    fit = fit_chi2(urban, "double_pareto", seed=2)
    assert fit.family == "double_pareto"
    report = mc_pvalue(urban, fit.spec, replicates=100, seed=2)
    assert report.observed_value == pytest.approx(ks_grouped(urban, fit.spec))
    assert 0.0 <= report.p_value <= 1.0


def test_invalid_arguments(rural: GroupedSample) -> None:
    spec = Lognormal(550.0, 0.2)
    with pytest.raises(InvalidParams):
        mc_pvalue(rural, spec, statistic_name="ad", replicates=10)
    with pytest.raises(InvalidParams):
        mc_pvalue(rural, spec, replicates=0)


@pytest.mark.slow
def test_pvalues_are_uniform_under_the_null(rural: GroupedSample) -> None:
    spec = Lognormal(x_M=580.0, sigma2=0.2)
    limits = rural.limits
    p_values = []
    for i in range(200):
        counts = bin_sample(spec.sample(1000, seed=[77, i]), limits)
        table = GroupedSample(
            classes=tuple(
                ExpenditureClass(lo, hi, None, c, c)
                for lo, hi, c in zip(limits[:-1], limits[1:], counts, strict=True)
            ),
            rounding_slack=0,
        )
        p_values.append(mc_pvalue(table, spec, replicates=200, seed=i).p_value)
    p = np.array(p_values)
    assert p.mean() == pytest.approx(0.5, abs=0.12)
    assert 0.04 <= np.mean(p < 0.1) <= 0.18
