# 2026-10-19 | v0.3.0 | CSV directory -> encoded Database
"""
csv_loader.py

One relation per `<name>.csv` in a directory. The header row names the
columns; every value is read as a string and dictionary-encoded.

Provides:
- Directory ingestion
- Answer-row CSV output
"""

from __future__ import annotations

import csv
import io
import logging
from pathlib import Path
from typing import Iterable, Sequence

import pandas as pd

from config import CSV_DELIMITER
from core.database import Database, encode_database
from core.errors import IngestError

log = logging.getLogger(__name__)


def read_table(path: Path, delimiter: str = CSV_DELIMITER) -> tuple[str, tuple[str, ...], list[tuple[str, ...]]]:
    name = path.stem
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, sep=delimiter)
    except pd.errors.EmptyDataError:
        raise IngestError(name, 0, "empty file, a header row is required") from None
    except pd.errors.ParserError as exc:
        raise IngestError(name, 0, str(exc)) from None
    if not name.isidentifier():
        raise IngestError(name, 0, f"table name {name!r} is not a query identifier")
    columns = tuple(str(c) for c in df.columns)
    rows = list(df.itertuples(index=False, name=None))
    log.debug("[Ingest] %s: %d rows x %d columns", name, len(rows), len(columns))
    return name, columns, rows


def load_database(directory: str | Path, delimiter: str = CSV_DELIMITER) -> Database:
    directory = Path(directory)
    if not directory.is_dir():
        raise IngestError(str(directory), 0, "not a directory")
    paths = sorted(directory.glob("*.csv"))
    if not paths:
        raise IngestError(str(directory), 0, "no .csv files")
    return encode_database(read_table(p, delimiter) for p in paths)


def answers_csv(header: Sequence[str], rows: Iterable[Sequence[str]], delimiter: str = CSV_DELIMITER) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, delimiter=delimiter, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()
