"""Core utilities for expendist.

This module provides fundamental utilities for:
- Filesystem operations
- Logging
- Command-line interface
- The exception hierarchy
"""

from .cli import CLI, CLIError
from .errors import (
    EXIT_INPUT,
    EXIT_IO,
    EXIT_NUMERIC,
    ExpendistError,
    InputError,
    NumericError,
    OutputError,
)
from .filesystem import (
    READERS,
    dump_json,
    file_digest,
    handle_path,
    load_data,
    read_file,
    read_table,
    write_frame,
    write_text,
)
from .log import (
    LOG_LEVELS,
    Logger,
    level_number,
    set_package_level,
    start_run_log,
    stop_run_log,
)

__all__ = [
    # CLI
    "CLI",
    "CLIError",
    # Errors
    "EXIT_INPUT",
    "EXIT_IO",
    "EXIT_NUMERIC",
    "ExpendistError",
    "InputError",
    "NumericError",
    "OutputError",
    # Filesystem
    "READERS",
    "dump_json",
    "file_digest",
    "handle_path",
    "load_data",
    "read_file",
    "read_table",
    "write_frame",
    "write_text",
    # Log
    "LOG_LEVELS",
    "Logger",
    "level_number",
    "set_package_level",
    "start_run_log",
    "stop_run_log",
]
