import pytest

from expendist.core.errors import InputError
from expendist.timeutils import round_years, survey_midpoint, timer


@pytest.mark.parametrize(
    "label, years",
    [
        ("2006-07", (2006, 2007)),
        ("1999-00", (1999, 2000)),
        ("1983", (1983, 1983)),
        ("1993/1994", (1993, 1994)),
    ],
)
def test_round_years(label: str, years: tuple[int, int]) -> None:
    assert round_years(label) == years


def test_round_years_rejects_garbage() -> None:
    with pytest.raises(InputError):
        round_years("sixty-first")


def test_survey_midpoint() -> None:
    assert survey_midpoint("2006-07") == 2006.5
    assert survey_midpoint("1983") == 1983.5
    assert survey_midpoint("2006-07", "start") == 2006.0
    with pytest.raises(InputError):
        survey_midpoint("2006-07", "end")


def test_timer_reports_above_threshold() -> None:
    messages: list[str] = []

    @timer("work", reporter=messages.append, threshold=0.0)
    def work(x: int) -> int:
        return x * 2

    assert work(3) == 6
    assert len(messages) == 1
    assert messages[0].startswith("[work] took")


def test_timer_silent_below_threshold() -> None:
    messages: list[str] = []

    @timer("work", reporter=messages.append, threshold=60.0)
    def work() -> None:
        return None

    work()
    assert messages == []
