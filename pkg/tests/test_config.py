import pytest

from expendist.config import Config, config, read_yaml, write_yaml
from expendist.core.errors import InvalidConfig


def test_defaults() -> None:
    cfg = Config()
    assert cfg.replicates == 1000
    assert cfg.mc_sample_size == 1000
    assert cfg.rounding_slack == "published"
    assert cfg.time_encoding == "midpoint"


def test_k_grid_is_stop_inclusive() -> None:
    grid = Config().k_grid()
    assert len(grid) == 41
    assert grid[0] == 1.0
    assert grid[-1] == 5.0
    assert grid[10] == 2.0


@pytest.mark.parametrize(
    "changes",
    [
        {"threads": 0},
        {"replicates": 0},
        {"kde_grid_points": 1},
        {"rounding_slack": "loose"},
        {"rounding_slack": -1},
        {"weibull_k_grid": [1.0, 5.0]},
        {"time_encoding": "end"},
        {"log_level": "verbose"},
    ],
)
def test_invalid_fields(changes: dict) -> None:
    with pytest.raises(InvalidConfig):
        Config(**changes)


def test_replace_skips_none() -> None:
    cfg = Config().replace(seed=7, replicates=None)
    assert cfg.seed == 7
    assert cfg.replicates == 1000


def test_user_file_overrides(tmp_path) -> None:  # type: ignore[no-untyped-def]
    path = tmp_path / "expendist.yaml"
    write_yaml(path, {"seed": 11, "threads": 4, "colour": "blue"})
    assert read_yaml(path)["seed"] == 11

    cfg = config(path)
    assert cfg.seed == 11
    assert cfg.threads == 4
    assert cfg.replicates == 1000


def test_invalid_user_file_falls_back(tmp_path) -> None:  # type: ignore[no-untyped-def]
    path = tmp_path / "expendist.yaml"
    write_yaml(path, {"threads": 0})
    assert config(path).threads == Config().threads


def test_missing_explicit_file(tmp_path) -> None:  # type: ignore[no-untyped-def]
    cfg = config(tmp_path / "absent.yaml")
    assert cfg == config(tmp_path / "also_absent.yaml")
    assert not (tmp_path / "absent.yaml").exists()


def test_env_var(tmp_path, monkeypatch) -> None:  # type: ignore[no-untyped-def]
    path = tmp_path / "env.yaml"
    write_yaml(path, {"replicates": 250})
    monkeypatch.setenv("EXPENDIST_CONFIG", str(path))
    assert config().replicates == 250
