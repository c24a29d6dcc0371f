from __future__ import annotations

import contextlib
import logging
from collections.abc import Iterator
from pathlib import Path

from rich.logging import RichHandler

from .config import settings

SERVICE_LOGGERS = [
    "survlab.nn",
    "survlab.basis",
    "survlab.models",
    "survlab.estimation",
    "survlab.synthetic",
    "survlab.evaluation",
]


def log_level() -> int:
    return getattr(logging, settings.survlab_log_level.upper(), logging.INFO)


def setup_logging() -> None:
    """Console logging for the CLI; run.log handlers are attached per run."""
    # markup off: messages carry file paths and data values
    console = RichHandler(
        rich_tracebacks=True, markup=False, show_path=settings.survlab_verbose
    )
    logging.basicConfig(level=log_level(), format="%(message)s", handlers=[console])


@contextlib.contextmanager
def run_file_logger(log_path: Path) -> Iterator[None]:
    """Attach a FileHandler for one CLI run (best-effort)."""
    handler: logging.Handler | None = None
    try:
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handler = logging.FileHandler(log_path, encoding="utf-8")
        handler.setLevel(log_level())
        handler.setFormatter(
            logging.Formatter(
                fmt=settings.survlab_run_log_format,
                datefmt=settings.survlab_run_log_datefmt,
            )
        )
        logging.getLogger().addHandler(handler)
    except Exception:
        # Logging should never break a run.
        handler = None
    try:
        yield
    finally:
        if handler is not None:
            logging.getLogger().removeHandler(handler)
            handler.close()


@contextlib.contextmanager
def quiet_service_loggers() -> Iterator[None]:
    """Temporarily raise library loggers to WARNING for cleaner CLI output."""
    if settings.survlab_verbose:
        yield
        return

    originals = {}
    for name in SERVICE_LOGGERS:
        lg = logging.getLogger(name)
        originals[name] = lg.level
        lg.setLevel(logging.WARNING)
    try:
        yield
    finally:
        for name, level in originals.items():
            logging.getLogger(name).setLevel(level)
