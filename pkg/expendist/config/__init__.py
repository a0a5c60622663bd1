"""Configuration management module for expendist."""

from .api import (
    CONFIG,
    ENV_VAR,
    Config,
    config,
    read_pkg_yaml,
    read_yaml,
    write_yaml,
)

__all__ = [
    "CONFIG",
    "ENV_VAR",
    "Config",
    "config",
    "read_pkg_yaml",
    "read_yaml",
    "write_yaml",
]
