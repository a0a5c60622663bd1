from dataclasses import asdict, dataclass, field, fields
import importlib.resources
import os
from pathlib import Path
from typing import Any

import numpy as np
from yaml import Loader, dump, load, safe_dump, safe_load

from expendist.core import Logger, OutputError, handle_path, level_number
from expendist.core.errors import InvalidConfig
from expendist.types import PathLike

log = Logger("expendist.config")
PATH: Path = Path.home() / ".config" / "expendist.yaml"
ENV_VAR = "EXPENDIST_CONFIG"
TIME_ENCODINGS = ("midpoint", "start")


def read_pkg_yaml(
    config_name: str, package: str = "expendist", encoding: str = "utf8", safe: bool = True
) -> Any:
    """
    Read a YAML file from a package and return its contents.

    Args:
        config_name: Path to the YAML file relative to the package root.
        package: Package name where the YAML file is located.
        encoding: File encoding (default: utf8).
        safe: Use safe_load (recommended) vs load.

    Raises:
        FileNotFoundError: If resource not found.
        ValueError: If YAML parsing fails.

    Time Complexity: O(n) where n is the file size.
    """
    ref = importlib.resources.files(package) / config_name
    with importlib.resources.as_file(ref) as resource_path:
        if not resource_path.exists():
            raise FileNotFoundError(f"YAML file '{config_name}' not found in package '{package}'")
        try:
            with open(resource_path, encoding=encoding) as file:
                return safe_load(file) if safe else load(file, Loader=Loader)
        except Exception as exc:
            log.error("Failed to parse YAML file '%s': %s", config_name, exc)
            raise ValueError(f"Cannot parse YAML: {config_name}") from exc


def read_yaml(path: PathLike, encoding: str = "utf8", safe: bool = True) -> Any:
    """
    Read a YAML file from filesystem and return its contents.

    Raises:
        FileNotFoundError: If file does not exist.
        ValueError: If YAML parsing fails.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"YAML file not found: {path}")

    try:
        with open(path, encoding=encoding) as file:
            return safe_load(file) if safe else load(file, Loader=Loader)
    except Exception as exc:
        log.error("Failed to parse YAML file '%s': %s", path, exc)
        raise ValueError(f"Cannot parse YAML: {path}") from exc


def write_yaml(path: PathLike, data: Any, safe: bool = True, encoding: str = "utf8") -> None:
    """
    Write data to a YAML file.

    Raises:
        OutputError: If file cannot be written.
    """
    try:
        target = handle_path(path)
        with open(target, "w", encoding=encoding) as file:
            file.write(safe_dump(data, sort_keys=False) if safe else dump(data))
    except OSError as exc:
        log.error("Failed to write YAML file '%s': %s", path, exc)
        raise OutputError(f"Cannot write YAML file {path}: {exc}") from exc


@dataclass
class Config:
    """
    Run-wide settings for expendist.

    Attributes:
        seed: master seed for every random stream
        replicates: Monte-Carlo replicates per goodness-of-fit test
        mc_sample_size: observations drawn per Monte-Carlo replicate
        threads: worker threads for optimizer starts and replicates
        rounding_slack: allowed |Σ freq − 1000|; "published" means floor(k/2) for k classes
        kde_grid_points: points on the default KDE grid
        weibull_k_grid: (start, stop, step) of the Weibull shape grid, stop inclusive
        time_encoding: "midpoint" (2006-07 -> 2006.5) or "start" (2006-07 -> 2006.0)
        log_level: level applied to the package loggers
    """

    seed: int = 20100601
    replicates: int = 1000
    mc_sample_size: int = 1000
    threads: int = 1
    rounding_slack: int | str = "published"
    kde_grid_points: int = 512
    weibull_k_grid: list[float] = field(default_factory=lambda: [1.0, 5.0, 0.1])
    time_encoding: str = "midpoint"
    log_level: str = "info"

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        """
        Raises:
            InvalidConfig: a field is out of range
        """
        if self.replicates < 1 or self.mc_sample_size < 1:
            raise InvalidConfig("replicates and mc_sample_size must be positive")
        if self.threads < 1:
            raise InvalidConfig(f"threads must be >= 1, got {self.threads}")
        if self.kde_grid_points < 2:
            raise InvalidConfig(f"kde_grid_points must be >= 2, got {self.kde_grid_points}")
        if isinstance(self.rounding_slack, str):
            if self.rounding_slack != "published":
                raise InvalidConfig(
                    f"rounding_slack must be 'published' or an integer, got {self.rounding_slack!r}"
                )
        elif self.rounding_slack < 0:
            raise InvalidConfig("rounding_slack cannot be negative")
        if len(self.weibull_k_grid) != 3 or self.weibull_k_grid[2] <= 0:
            raise InvalidConfig("weibull_k_grid must be [start, stop, step] with step > 0")
        if self.time_encoding not in TIME_ENCODINGS:
            raise InvalidConfig(
                f"time_encoding must be one of {TIME_ENCODINGS}, got {self.time_encoding!r}"
            )
        level_number(self.log_level)

    def k_grid(self) -> np.ndarray:
        """Weibull shape values, stop inclusive."""
        start, stop, step = self.weibull_k_grid
        count = int(round((stop - start) / step)) + 1
        return np.round(start + step * np.arange(count), 10)

    def replace(self, **changes: Any) -> "Config":
        """Copy with the non-None ``changes`` applied."""
        values = asdict(self)
        values.update({k: v for k, v in changes.items() if v is not None})
        return Config(**values)


def _merge(cfg: Config, overrides: dict[str, Any], source: PathLike) -> Config:
    known = {f.name for f in fields(Config)}
    unknown = sorted(set(overrides) - known)
    if unknown:
        log.warning("Ignoring unknown config keys in %s: %s", source, ", ".join(unknown))
    return cfg.replace(**{k: v for k, v in overrides.items() if k in known})


def config(path: PathLike | None = None) -> Config:
    """
    Load the expendist configuration.

    Package defaults come from ``expendist/config/defaults.yaml``; user overrides are read
    from ``path``, else ``$EXPENDIST_CONFIG``, else ``~/.config/expendist.yaml`` and merged
    field by field. The home file is created with the defaults when missing.

    Time Complexity: O(n) where n is the config file size.
    """
    cfg = Config()
    try:
        cfg = _merge(cfg, read_pkg_yaml("config/defaults.yaml") or {}, "defaults.yaml")
    except (FileNotFoundError, ValueError) as exc:
        log.warning("Package defaults unavailable, using built-in values: %s", exc)

    explicit = path or os.environ.get(ENV_VAR)
    user_path = Path(explicit) if explicit else PATH

    if not user_path.exists():
        if not explicit:
            try:
                write_yaml(user_path, asdict(cfg))
                log.debug("Created expendist config file at: %s", user_path)
            except OutputError:
                pass
        else:
            log.warning("Config file %s not found, using defaults", user_path)
        return cfg

    try:
        user_config = read_yaml(user_path)
        if user_config:
            cfg = _merge(cfg, user_config, user_path)
    except (FileNotFoundError, ValueError, OSError, InvalidConfig) as exc:
        log.warning("Failed to load config, using defaults: %s", exc)

    return cfg


CONFIG = config()
