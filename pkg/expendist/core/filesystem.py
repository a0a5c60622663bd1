"""Filesystem utilities for expendist."""

from collections.abc import Callable
import hashlib
import json
from pathlib import Path
from typing import Any

import pandas as pd

from expendist.core.errors import MalformedRow, OutputError
from expendist.core.log import Logger
from expendist.types import PathLike

log = Logger("expendist.core.filesystem")


def handle_path(path: PathLike) -> Path:
    """
    Resolve a path and create its parent directories.

    Args:
        path: Path to process

    Returns:
        Path: Resolved absolute path
    """
    resolved_path = Path(path).expanduser().resolve()
    resolved_path.parent.mkdir(parents=True, exist_ok=True)
    return resolved_path


READERS: dict[str, dict[str, Callable[..., pd.DataFrame | str]]] = {
    "pandas": {
        ".csv": pd.read_csv,
    },
    "base": {
        ".csv": lambda path, **kwargs: Path(path).read_text(encoding="utf-8", **kwargs),
        ".json": lambda path, **kwargs: Path(path).read_text(encoding="utf-8", **kwargs),
    },
}


def load_data(file_path: PathLike, engine: str = "pandas", **kwargs: Any) -> pd.DataFrame | str:
    """
    Read a file with the reader registered for its suffix.

    Args:
        file_path: file to read
        engine: "pandas" (DataFrame) or "base" (text)
        **kwargs: forwarded to the reader (sep, dtype, ...)
    """
    path = Path(file_path)
    ext = path.suffix.lower()

    if engine not in READERS:
        raise ValueError(f"Unsupported engine: {engine}. Available options: {list(READERS.keys())}")

    engine_readers = READERS[engine]
    if ext in engine_readers:
        return engine_readers[ext](str(path), **kwargs)

    raise ValueError(f"engine '{engine}' does not support file format: {ext}")


def read_file(path: PathLike, engine: str = "pandas", **kwargs: Any) -> pd.DataFrame | str:
    """
    Read file content.

    Raises:
        FileNotFoundError: the file does not exist
        ValueError: unsupported suffix or engine
        RuntimeError: the reader failed
    """
    if not Path(path).exists():
        raise FileNotFoundError(f"File not found: {path}")

    try:
        return load_data(file_path=path, engine=engine, **kwargs)
    except ValueError:
        raise
    except Exception as e:
        raise RuntimeError(f"Failed to read {path} using {engine}: {e}") from e


def read_table(path: PathLike, **kwargs: Any) -> pd.DataFrame:
    """
    Read a CSV table as a DataFrame with all cells kept as strings.

    Raises:
        FileNotFoundError: the file does not exist
        MalformedRow: ragged rows, an empty file, or undecodable bytes
    """
    try:
        frame = read_file(path, engine="pandas", dtype=str, keep_default_na=False, **kwargs)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise MalformedRow(f"{path}: {exc}") from exc
    except RuntimeError as exc:
        raise MalformedRow(str(exc)) from exc
    if not isinstance(frame, pd.DataFrame):
        raise TypeError(f"Expected a table from {path}, got {type(frame).__name__}")
    return frame


def file_digest(path: PathLike) -> str:
    """SHA-256 of the file content, hex encoded."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_text(path: PathLike, text: str) -> Path:
    """
    Write text to ``path``, creating parent directories.

    Raises:
        OutputError: the file cannot be written
    """
    try:
        target = handle_path(path)
        target.write_text(text, encoding="utf-8")
    except OSError as exc:
        log.error("Failed to write '%s': %s", path, exc)
        raise OutputError(f"Cannot write {path}: {exc}") from exc
    log.debug("Wrote %s", target)
    return target


def write_frame(path: PathLike, frame: pd.DataFrame, float_format: str = "%.10g") -> Path:
    """Write a DataFrame as CSV without the index."""
    text = frame.to_csv(index=False, float_format=float_format, lineterminator="\n")
    return write_text(path, text)


def dump_json(data: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + "\n"
