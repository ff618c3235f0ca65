"""
SQLite storage behind the run ledger

One connection per (thread, ledger file). Statements run inside a
transaction that commits on success and rolls back on any sqlite error,
which is re-raised as DataIOError.
"""

import sqlite3
import threading
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Mapping, Sequence

from ..utils.logging import database_logger
from ..utils.exceptions import DataIOError


class LedgerStore:
    """Thread-local SQLite connections keyed by ledger file"""

    def __init__(self):
        self._local = threading.local()
        self._registry: Dict[int, Dict[str, sqlite3.Connection]] = {}
        self._lock = threading.Lock()

    def _open(self, db_path: Path) -> sqlite3.Connection:
        pool = getattr(self._local, "pool", None)
        if pool is None:
            pool = self._local.pool = {}
            with self._lock:
                self._registry[threading.get_ident()] = pool

        key = str(Path(db_path).resolve())
        if key not in pool:
            try:
                Path(db_path).parent.mkdir(parents=True, exist_ok=True)
                conn = sqlite3.connect(key, timeout=30.0, check_same_thread=False)
            except (sqlite3.Error, OSError) as e:
                database_logger.error(f"Cannot open ledger {db_path}: {e}")
                raise DataIOError(f"Cannot open ledger database {db_path}: {e}")
            conn.row_factory = sqlite3.Row
            pool[key] = conn
            database_logger.debug(f"Opened ledger {key}")
        return pool[key]

    @contextmanager
    def transaction(self, db_path: Path) -> Iterator[sqlite3.Connection]:
        conn = self._open(db_path)
        try:
            yield conn
            conn.commit()
        except sqlite3.Error as e:
            conn.rollback()
            database_logger.error(f"Ledger statement failed on {db_path}: {e}")
            raise DataIOError(f"Ledger statement failed: {e}")

    def ensure_table(self, db_path: Path, ddl: str) -> None:
        with self.transaction(db_path) as conn:
            conn.executescript(ddl)

    def insert_row(self, db_path: Path, table: str, row: Mapping[str, Any]) -> int:
        """Insert one row given as column -> value; returns its rowid"""
        columns = list(row)
        statement = (f"INSERT INTO {table} ({', '.join(columns)}) "
                     f"VALUES ({', '.join('?' for _ in columns)})")
        with self.transaction(db_path) as conn:
            cursor = conn.execute(statement, [row[c] for c in columns])
            return int(cursor.lastrowid)

    def fetch(self, db_path: Path, query: str, params: Sequence[Any] = ()) -> List[Dict[str, Any]]:
        with self.transaction(db_path) as conn:
            rows = conn.execute(query, tuple(params)).fetchall()
        database_logger.debug(f"Ledger query returned {len(rows)} rows")
        return [dict(row) for row in rows]

    def table_exists(self, db_path: Path, table: str) -> bool:
        try:
            rows = self.fetch(db_path, "SELECT name FROM sqlite_master WHERE type = 'table' AND name = ?",
                              (table,))
        except DataIOError:
            return False
        return bool(rows)

    def close_connections(self) -> None:
        """Close the connections of every thread"""
        with self._lock:
            pools = list(self._registry.values())
            self._registry.clear()
        for pool in pools:
            for conn in pool.values():
                try:
                    conn.close()
                except sqlite3.Error:
                    pass
            pool.clear()
        self._local = threading.local()


# Global ledger store
db_manager = LedgerStore()
