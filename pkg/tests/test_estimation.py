import math

import numpy as np
import pytest

from conftest import CASES, PUBLISHED_CHI2
from expendist.core.errors import (
    DegeneratePrediction,
    InvalidParams,
    LengthMismatch,
    MissingClassMeans,
    TooFewClasses,
)
from expendist.distributions import Lognormal, Mixture, Weibull
from expendist.estimation import (
    SPARSE_THRESHOLD,
    boundary_params,
    chi2_at,
    chi2_statistic,
    class_masses,
    compare_families,
    expected_class_counts,
    fit_chi2,
    fit_weibull_grid,
    from_unconstrained,
    merge_sparse,
    starting_points,
    to_unconstrained,
)
from expendist.grouped import ExpenditureClass, GroupedSample


def _expected_table(spec, limits, means=None) -> GroupedSample:  # type: ignore[no-untyped-def]
    """Table whose frequencies are exactly the counts ``spec`` predicts."""
    counts = 1000 * class_masses(spec, limits)
    means = means if means is not None else [None] * len(counts)
    return GroupedSample(
        classes=tuple(
            ExpenditureClass(lo, hi, m, c, c)
            for lo, hi, m, c in zip(limits[:-1], limits[1:], means, counts, strict=True)
        )
    )


def test_chi2_statistic() -> None:
    assert chi2_statistic([12, 8], [10, 10]) == pytest.approx(0.8)
    assert chi2_statistic([10, 10], [10, 10]) == 0.0
    with pytest.raises(LengthMismatch):
        chi2_statistic([1, 2, 3], [1, 2])


def test_chi2_is_permutation_invariant() -> None:
    rng = np.random.default_rng(3)
    observed = rng.integers(5, 200, size=12).astype(float)
    predicted = rng.uniform(5.0, 200.0, size=12)
    value = chi2_statistic(observed, predicted)
    for _ in range(10):
        order = rng.permutation(12)
        assert chi2_statistic(observed[order], predicted[order]) == pytest.approx(value, rel=1e-12)


def test_merge_sparse() -> None:
    obs, pred = merge_sparse([1, 4, 5], [1e-9, 5, 5])
    np.testing.assert_allclose(obs, [5, 5])
    np.testing.assert_allclose(pred, [5 + 1e-9, 5])

    obs, pred = merge_sparse([3, 1, 6], [5, 1e-9, 8])
    np.testing.assert_allclose(obs, [3, 7])

    obs, pred = merge_sparse([3, 4, 2], [5, 4, 1e-9])
    np.testing.assert_allclose(obs, [3, 6])

    # small but non-empty predictions stay separate classes
    obs, pred = merge_sparse([1, 2, 997], [0.5, 3.0, 996.5])
    assert len(pred) == 3
    assert SPARSE_THRESHOLD == 1e-6


def test_merge_sparse_degenerate() -> None:
    with pytest.raises(DegeneratePrediction):
        merge_sparse([1, 2, 3], [1e-9, 1e-9, 10], min_classes=2)
    with pytest.raises(DegeneratePrediction):
        merge_sparse([1, 2], [0.0, 0.0])


def test_class_masses_cover_everything(rural: GroupedSample) -> None:
    spec = Mixture(553.355, 0.143, 1.76, 849.414, 0.169)
    masses = class_masses(spec, rural.limits)
    assert len(masses) == 12
    assert masses.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(masses >= 0)
    assert expected_class_counts(spec, rural).sum() == pytest.approx(1000.0)
    # z_0 and z_k do not matter
    shifted = rural.limits.copy()
    shifted[0], shifted[-1] = 10.0, 1e9
    np.testing.assert_allclose(class_masses(spec, shifted), masses)


@pytest.mark.parametrize("case", CASES)
def test_chi2_at_published_parameters(  # type: ignore[no-untyped-def]
    case, table, published
) -> None:
    sector, unit = case
    value = chi2_at(published(sector, unit), table(sector, unit))
    assert value == pytest.approx(PUBLISHED_CHI2[case], rel=0.05)


def test_unconstrained_round_trip() -> None:
    spec = Mixture(553.355, 0.143, 1.76, 849.414, 0.169)
    back = from_unconstrained("mixture", to_unconstrained(spec))
    np.testing.assert_allclose(back.to_vector(), spec.to_vector(), rtol=1e-12)


def test_boundary_params() -> None:
    assert boundary_params(Mixture(553.0, 0.143, 1.76, 849.0, 0.9995)) == ("pi",)
    assert boundary_params(Mixture(553.0, 0.0005, 1.76, 849.0, 0.0)) == ("sigma2", "pi")
    assert boundary_params(Lognormal(553.0, 0.143)) == ()


def test_starting_points(rural: GroupedSample) -> None:
    mixture = starting_points(rural, "mixture", "household", seed=1)
    assert len(mixture) == 11 * 3 * 2
    assert {s.x0 for s in mixture} == set(rural.interior_limits)

    lognormal = starting_points(rural, "lognormal", "household", seed=1)
    assert len(lognormal) == 6
    assert [s.to_vector().tolist() for s in lognormal] == [
        s.to_vector().tolist() for s in starting_points(rural, "lognormal", "household", seed=1)
    ]
    with pytest.raises(InvalidParams):
        starting_points(rural, "cauchy", "household")


def test_fit_recovers_lognormal(rural: GroupedSample) -> None:
    truth = Lognormal(x_M=500.0, sigma2=0.2)
    result = fit_chi2(_expected_table(truth, rural.limits), "lognormal", seed=0)
    assert result.chi2 < 1e-6
    assert result.spec.x_M == pytest.approx(500.0, rel=1e-3)
    assert result.spec.sigma2 == pytest.approx(0.2, rel=1e-3)
    assert result.dof == 12 - 2 - 1
    assert result.to_dict()["family"] == "lognormal"


@pytest.mark.parametrize("case", CASES)
def test_refit_from_published_start(  # type: ignore[no-untyped-def]
    case, table, published
) -> None:
    sector, unit = case
    sample, spec = table(sector, unit), published(sector, unit)
    result = fit_chi2(sample, "mixture", starts=[spec])
    assert result.chi2 <= chi2_at(spec, sample) * (1 + 1e-9)


@pytest.mark.slow
def test_fit_recovers_mixture(rural: GroupedSample) -> None:
    truth = Mixture(x_M=553.355, sigma2=0.143, nu=1.76, x0=849.414, pi=0.169)
    result = fit_chi2(_expected_table(truth, rural.limits), "mixture", seed=0)
    assert result.chi2 < 1e-4
    np.testing.assert_allclose(result.spec.to_vector(), truth.to_vector(), rtol=0.02)


def test_fit_is_deterministic(rural: GroupedSample) -> None:
    first = fit_chi2(rural, "gamma", seed=5)
    second = fit_chi2(rural, "gamma", seed=5, threads=3)
    assert first.to_dict() == second.to_dict()


def test_fit_rejects_small_tables() -> None:
    small = GroupedSample(
        classes=(
            ExpenditureClass(0, 100, None, 300, 300),
            ExpenditureClass(100, 200, None, 400, 400),
            ExpenditureClass(200, math.inf, None, 300, 300),
        )
    )
    with pytest.raises(TooFewClasses):
        fit_chi2(small, "mixture")
    with pytest.raises(InvalidParams):
        fit_chi2(small, "cauchy")
    with pytest.raises(InvalidParams):
        fit_chi2(small, "lognormal", starts=[Weibull(2.0, 100.0)])


def test_compare_families_sorted(rural: GroupedSample) -> None:
    results = compare_families(rural, ("lognormal", "exponential", "gamma"), seed=0)
    assert {r.family for r in results} == {"lognormal", "exponential", "gamma"}
    chi2 = [r.chi2 for r in results]
    assert chi2 == sorted(chi2)


@pytest.mark.slow
@pytest.mark.parametrize("case", CASES)
def test_mixture_fit_beats_published(  # type: ignore[no-untyped-def]
    case, table, published
) -> None:
    sector, unit = case
    sample = table(sector, unit)
    result = fit_chi2(sample, "mixture", seed=20100601)
    assert result.chi2 <= chi2_at(published(sector, unit), sample) + 1e-3
    assert result.n_params == 5


@pytest.mark.slow
@pytest.mark.parametrize("case", CASES)
def test_mixture_dominates_nested_families(case, table) -> None:  # type: ignore[no-untyped-def]
    sample = table(*case)
    mixture = fit_chi2(sample, "mixture", seed=3)
    for family in ("lognormal", "pareto"):
        assert mixture.chi2 <= fit_chi2(sample, family, seed=3).chi2 + 1e-6, family


# --- Weibull grid regression -------------------------------------------------------------


def _weibull_table(k: float = 2.0, lam: float = 1000.0) -> GroupedSample:
    density = Weibull(k, lam)
    lower = np.arange(0.0, 2001.0, 100.0)
    mids = lower[:-1] + 50.0
    freq = 1000.0 * density.pdf(mids) * 100.0
    top = 1000.0 - freq.sum()
    classes = [
        ExpenditureClass(lo, lo + 100.0, mid, f, f)
        for lo, mid, f in zip(lower[:-1], mids, freq, strict=True)
    ]
    classes.append(ExpenditureClass(2000.0, math.inf, 2400.0, top, top))
    return GroupedSample(classes=tuple(classes))


@pytest.mark.parametrize("tie_shape", [False, True])
def test_weibull_grid_recovers_shape(tie_shape: bool) -> None:
    fit = fit_weibull_grid(_weibull_table(), tie_shape=tie_shape)
    assert fit.k == pytest.approx(2.0)
    assert fit.lam == pytest.approx(1000.0, rel=1e-4)
    assert fit.r2 == pytest.approx(1.0, abs=1e-9)
    assert len(fit.r2_by_k) == 41
    k, lam, r2 = fit
    assert (k, lam, r2) == (fit.k, fit.lam, fit.r2)


def test_weibull_grid_high_shape() -> None:
    # class means up to 1950, so the raw x^k column reaches ~1e14
    fit = fit_weibull_grid(_weibull_table(k=4.5, lam=1500.0))
    assert fit.k == pytest.approx(4.5)
    assert fit.lam == pytest.approx(1500.0, rel=1e-4)
    assert fit.r2 == pytest.approx(1.0, abs=1e-9)


def test_weibull_grid_on_fixture(urban: GroupedSample) -> None:
    fit = fit_weibull_grid(urban)
    assert 1.0 <= fit.k <= 5.0
    assert fit.lam > 0
    assert 0.0 < fit.r2 <= 1.0


def test_weibull_grid_errors(rural: GroupedSample) -> None:
    with pytest.raises(InvalidParams):
        fit_weibull_grid(rural, k_grid=[])
    with pytest.raises(InvalidParams):
        fit_weibull_grid(rural, k_grid=[0.5, 2.0])
    truth = Lognormal(500.0, 0.2)
    with pytest.raises(MissingClassMeans):
        fit_weibull_grid(_expected_table(truth, rural.limits))
