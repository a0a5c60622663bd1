import hashlib
import json
import logging

import pytest

from expendist.core import (
    CLI,
    EXIT_INPUT,
    EXIT_IO,
    EXIT_NUMERIC,
    READERS,
    CLIError,
    InputError,
    Logger,
    NumericError,
    OutputError,
    dump_json,
    file_digest,
    handle_path,
    level_number,
    read_file,
    read_table,
    set_package_level,
    start_run_log,
    stop_run_log,
    write_frame,
    write_text,
)
from expendist.core.errors import (
    FrequencySumMismatch,
    InsufficientTail,
    InvalidConfig,
    InvalidParams,
    MalformedRow,
)


def test_error_codes() -> None:
    assert InputError("x").error_code == EXIT_INPUT
    assert NumericError("x").error_code == EXIT_NUMERIC
    assert OutputError("x").error_code == EXIT_IO
    assert FrequencySumMismatch("x").error_code == EXIT_INPUT
    assert InsufficientTail("x").error_code == EXIT_NUMERIC
    assert isinstance(InvalidParams("bad"), ValueError)


def test_error_str() -> None:
    err = FrequencySumMismatch("sums to 1050")
    assert str(err) == "[Error 1] FrequencySumMismatch: sums to 1050"
    assert InputError("x", error_code=7).error_code == 7


def test_cli_commands() -> None:
    cli = CLI(prog="demo")
    fit = cli.command("fit", help="fit")
    fit.add("inputs", nargs="*")
    fit.add("--family", default="mixture")
    fit.add("-v", "--verbose", action="store_true")

    args = cli.get(["fit", "a.csv", "b.csv", "--family", "gamma", "-v"])
    assert args["command"] == "fit"
    assert args["inputs"] == ["a.csv", "b.csv"]
    assert args["family"] == "gamma"
    assert args["verbose"] is True


def test_cli_errors() -> None:
    cli = CLI(prog="demo")
    cli.command("fit").add("--n", type=int)
    with pytest.raises(CLIError):
        cli.get(["fit", "--n", "abc"])
    with pytest.raises(CLIError):
        cli.get(["nope"])
    assert cli.get(["fit"], allow_unknown=True)["unknown"] == []


def test_logger_singleton_and_handlers() -> None:
    log = Logger("expendist.tests.core")
    assert Logger("expendist.tests.core") is log

    records: list[logging.LogRecord] = []

    class Capture(logging.Handler):
        def emit(self, record: logging.LogRecord) -> None:
            records.append(record)

    log.add_handler("capture", Capture())
    with pytest.raises(ValueError):
        log.add_handler("capture", Capture())

    log.set_level("warning")
    log.info("hidden")
    log.warning("shown %d", 1)
    assert [r.getMessage() for r in records] == ["shown 1"]

    log.remove_handler("capture")
    with pytest.raises(KeyError):
        log.remove_handler("capture")


def test_logger_rejects_unknown_level() -> None:
    log = Logger("expendist.tests.core")
    with pytest.raises(InvalidConfig):
        log.set_level("loud")
    with pytest.raises(InvalidConfig):
        set_package_level("trace")
    assert level_number("WARNING") == logging.WARNING


def test_run_log_mirrors_package_loggers(tmp_path) -> None:  # type: ignore[no-untyped-def]
    log = Logger("expendist.tests.core")
    log.set_level("info")
    target = start_run_log(tmp_path / "logs" / "run.log")
    log.info("fitted %s", "mixture")
    stop_run_log()
    log.info("after close")
    text = target.read_text()
    assert "[expendist.tests.core][INFO] fitted mixture" in text
    assert "after close" not in text
    assert not log.has_handler("run_log")


def test_write_and_read(tmp_path) -> None:  # type: ignore[no-untyped-def]
    target = tmp_path / "nested" / "table.csv"
    write_text(target, "a,b\n1,x\n")
    frame = read_table(target)
    assert list(frame.columns) == ["a", "b"]
    assert frame.iloc[0]["a"] == "1"
    assert read_file(target, engine="base") == "a,b\n1,x\n"
    assert file_digest(target) == hashlib.sha256(b"a,b\n1,x\n").hexdigest()

    with pytest.raises(FileNotFoundError):
        read_file(tmp_path / "missing.csv")
    with pytest.raises(ValueError):
        read_file(target, engine="polars")
    with pytest.raises(ValueError):
        read_file(write_text(tmp_path / "notes.txt", "x"))
    assert set(READERS["pandas"]) == {".csv"}

    ragged = write_text(tmp_path / "ragged.csv", "a,b\n1,2\n3,4,5,6\n")
    with pytest.raises(MalformedRow, match="ragged.csv"):
        read_table(ragged)
    with pytest.raises(MalformedRow):
        read_table(write_text(tmp_path / "empty.csv", ""))


def test_write_frame(tmp_path) -> None:  # type: ignore[no-untyped-def]
    import pandas as pd

    path = write_frame(tmp_path / "out.csv", pd.DataFrame({"P": [0.0, 0.5], "Q": [0.0, 0.25]}))
    assert path.read_text() == "P,Q\n0,0\n0.5,0.25\n"


def test_write_text_failure(tmp_path) -> None:  # type: ignore[no-untyped-def]
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OutputError):
        write_text(blocker / "child.txt", "y")


def test_handle_path_creates_parent(tmp_path) -> None:  # type: ignore[no-untyped-def]
    resolved = handle_path(tmp_path / "a" / "b" / "c.txt")
    assert resolved.parent.is_dir()


def test_dump_json() -> None:
    text = dump_json({"b": 1, "a": [1.5, None]})
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": [1.5, None], "b": 1}
    with pytest.raises(ValueError):
        dump_json({"x": float("nan")})
