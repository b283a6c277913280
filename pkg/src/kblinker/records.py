"""Item records, the type closure, and the on-disk record store.

The store is a single SQLite database inside the output directory. SQLite
gives us the contract we need for cheap: exclusive writers, snapshot-consistent
readers, bounded-memory streaming, and atomic single-item upserts. The schema
is internal and guarded by a format marker plus a version number in the meta
table; a monotonically increasing revision counter marks downstream artifacts
(dictionary, language model, PageRank, classifier) as stale after upserts.
"""

from __future__ import annotations

import json
import re
import sqlite3
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

STORE_FILENAME = "records.sqlite"
STORE_FORMAT = "kblinker-store"
STORE_FORMAT_VERSION = 1

_QID_RE = re.compile(r"^Q([1-9][0-9]*)$")


class StoreError(Exception):
    """Record store unusable: missing, wrong format, or wrong version."""


def qid(item_id: int) -> str:
    """Canonical string form of an item id, e.g. 40469 -> ``Q40469``."""
    return f"Q{item_id}"


def item_id_from_qid(text: str) -> int:
    """Parse the canonical ``Q<digits>`` form back to the numeric id."""
    m = _QID_RE.match(text)
    if m is None:
        raise ValueError(f"not a canonical item id: {text!r}")
    return int(m.group(1))


@dataclass(frozen=True, slots=True)
class ItemRecord:
    """One knowledge-base item, reduced to what the linker needs.

    out_links are the item-valued statement main values plus item-valued
    qualifier values, deduplicated and sorted. ``types`` holds the values of
    the instance-of property.
    """

    id: int
    labels: dict[str, str] = field(default_factory=dict)
    aliases: dict[str, tuple[str, ...]] = field(default_factory=dict)
    out_links: tuple[int, ...] = ()
    n_statements: int = 0
    n_sitelinks: int = 0
    types: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.id <= 0:
            raise ValueError(f"item id must be positive, got {self.id}")
        if self.n_statements < 0 or self.n_sitelinks < 0:
            raise ValueError("statement and sitelink counts must be >= 0")

    @property
    def qid(self) -> str:
        return qid(self.id)

    def surface_forms(self, languages: set[str] | None = None) -> Iterator[str]:
        """Labels and aliases, restricted to ``languages`` when given."""
        for lang, label in self.labels.items():
            if languages is None or lang in languages:
                yield label
        for lang, forms in self.aliases.items():
            if languages is None or lang in languages:
                yield from forms

    def to_json(self) -> str:
        doc = {
            "id": self.id,
            "labels": self.labels,
            "aliases": {lang: list(forms) for lang, forms in self.aliases.items()},
            "out": list(self.out_links),
            "ns": self.n_statements,
            "nsl": self.n_sitelinks,
            "types": list(self.types),
        }
        return json.dumps(doc, ensure_ascii=False, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "ItemRecord":
        doc = json.loads(text)
        return cls(
            id=doc["id"],
            labels=doc["labels"],
            aliases={lang: tuple(forms) for lang, forms in doc["aliases"].items()},
            out_links=tuple(doc["out"]),
            n_statements=doc["ns"],
            n_sitelinks=doc["nsl"],
            types=tuple(doc["types"]),
        )


@dataclass(frozen=True, slots=True)
class TypeClosure:
    """Reflexive-transitive closure of a set of root types under subclass-of."""

    roots: frozenset[int]
    members: frozenset[int]

    def __contains__(self, item_id: int) -> bool:
        return item_id in self.members


def build_type_closure(
    subclass_edges: Iterable[tuple[int, int]], roots: Iterable[int]
) -> TypeClosure:
    """All types reachable from ``roots`` by following subclass edges backwards.

    A (child, parent) edge means child is a subclass of parent; the closure
    collects every type with a chain up to some root, the roots included.
    Cycles are fine, result is independent of edge order.
    """
    root_set = frozenset(roots)
    if not root_set:
        raise ValueError("at least one root type is required")
    children: dict[int, list[int]] = {}
    for child, parent in subclass_edges:
        children.setdefault(parent, []).append(child)
    members = set(root_set)
    queue = deque(root_set)
    while queue:
        parent = queue.popleft()
        for child in children.get(parent, ()):
            if child not in members:
                members.add(child)
                queue.append(child)
    return TypeClosure(roots=root_set, members=frozenset(members))


def filter_item(rec: ItemRecord, closure: TypeClosure) -> bool:
    """True when any instance-of value of the record lies in the closure."""
    return any(t in closure.members for t in rec.types)


class RecordStore:
    """SQLite-backed store of ItemRecords plus the persisted type closure.

    Records for *all* parsed items are kept (the link graph spans the whole
    dump); the closure decides which ones are in scope for surface indexing.
    """

    def __init__(self, conn: sqlite3.Connection, path: Path):
        self._conn = conn
        self._path = path

    # -- lifecycle ---------------------------------------------------------

    @classmethod
    def create(cls, directory: str | Path) -> "RecordStore":
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        db_path = directory / STORE_FILENAME
        if db_path.exists():
            db_path.unlink()
        conn = sqlite3.connect(db_path)
        conn.executescript(
            """
            CREATE TABLE meta (key TEXT PRIMARY KEY, value TEXT NOT NULL);
            CREATE TABLE items (
                id INTEGER PRIMARY KEY,
                record TEXT NOT NULL,
                in_scope INTEGER NOT NULL DEFAULT 0
            );
            CREATE TABLE closure (id INTEGER PRIMARY KEY, is_root INTEGER NOT NULL);
            """
        )
        conn.execute("INSERT INTO meta VALUES ('format', ?)", (STORE_FORMAT,))
        conn.execute(
            "INSERT INTO meta VALUES ('format_version', ?)", (str(STORE_FORMAT_VERSION),)
        )
        conn.execute("INSERT INTO meta VALUES ('revision', '0')")
        conn.commit()
        return cls(conn, directory)

    @classmethod
    def open(cls, directory: str | Path) -> "RecordStore":
        directory = Path(directory)
        db_path = directory / STORE_FILENAME
        if not db_path.exists():
            raise StoreError(f"no record store at {directory}")
        conn = sqlite3.connect(db_path)
        store = cls(conn, directory)
        if store._meta("format") != STORE_FORMAT:
            raise StoreError(f"{db_path} is not a kblinker record store")
        version = int(store._meta("format_version") or -1)
        if version != STORE_FORMAT_VERSION:
            raise StoreError(
                f"record store format version {version} unsupported "
                f"(expected {STORE_FORMAT_VERSION})"
            )
        return store

    def close(self) -> None:
        self._conn.close()

    def __enter__(self) -> "RecordStore":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    @property
    def path(self) -> Path:
        return self._path

    # -- meta ---------------------------------------------------------------

    def _meta(self, key: str) -> str | None:
        row = self._conn.execute("SELECT value FROM meta WHERE key = ?", (key,)).fetchone()
        return None if row is None else row[0]

    def _set_meta(self, key: str, value: str) -> None:
        self._conn.execute(
            "INSERT INTO meta VALUES (?, ?) "
            "ON CONFLICT(key) DO UPDATE SET value = excluded.value",
            (key, value),
        )

    @property
    def revision(self) -> int:
        return int(self._meta("revision") or 0)

    def _bump_revision(self) -> None:
        self._set_meta("revision", str(self.revision + 1))

    # -- records -------------------------------------------------------------

    def __len__(self) -> int:
        return self._conn.execute("SELECT COUNT(*) FROM items").fetchone()[0]

    def n_in_scope(self) -> int:
        return self._conn.execute(
            "SELECT COUNT(*) FROM items WHERE in_scope = 1"
        ).fetchone()[0]

    def get(self, item_id: int) -> ItemRecord | None:
        row = self._conn.execute(
            "SELECT record FROM items WHERE id = ?", (item_id,)
        ).fetchone()
        return None if row is None else ItemRecord.from_json(row[0])

    def __contains__(self, item_id: int) -> bool:
        return (
            self._conn.execute(
                "SELECT 1 FROM items WHERE id = ?", (item_id,)
            ).fetchone()
            is not None
        )

    def iter_records(self, in_scope_only: bool = False) -> Iterator[ItemRecord]:
        sql = "SELECT record FROM items"
        if in_scope_only:
            sql += " WHERE in_scope = 1"
        sql += " ORDER BY id"
        for (blob,) in self._conn.execute(sql):
            yield ItemRecord.from_json(blob)

    def bulk_insert(self, records: Iterable[ItemRecord], batch_size: int = 2000) -> int:
        """Initial load path: inserts without revision bumps, in batches."""
        n = 0
        batch: list[tuple[int, str]] = []
        for rec in records:
            batch.append((rec.id, rec.to_json()))
            if len(batch) >= batch_size:
                self._conn.executemany(
                    "INSERT OR REPLACE INTO items (id, record) VALUES (?, ?)", batch
                )
                n += len(batch)
                batch.clear()
        if batch:
            self._conn.executemany(
                "INSERT OR REPLACE INTO items (id, record) VALUES (?, ?)", batch
            )
            n += len(batch)
        self._conn.commit()
        return n

    def apply_upsert(self, rec: ItemRecord) -> bool:
        """Replace the stored record for rec.id.

        Returns True when the store content changed. Re-applying an identical
        record is a no-op, so the revision counter (which marks downstream
        artifacts stale) only moves on real changes.
        """
        blob = rec.to_json()
        existing = self._conn.execute(
            "SELECT record FROM items WHERE id = ?", (rec.id,)
        ).fetchone()
        if existing is not None and existing[0] == blob:
            return False
        closure = self.load_closure()
        in_scope = int(closure is not None and filter_item(rec, closure))
        self._conn.execute(
            "INSERT OR REPLACE INTO items (id, record, in_scope) VALUES (?, ?, ?)",
            (rec.id, blob, in_scope),
        )
        self._bump_revision()
        self._conn.commit()
        return True

    # -- closure -------------------------------------------------------------

    def set_closure(self, closure: TypeClosure) -> None:
        """Persist the closure and recompute every record's in_scope flag."""
        self._conn.execute("DELETE FROM closure")
        self._conn.executemany(
            "INSERT INTO closure (id, is_root) VALUES (?, ?)",
            [(m, int(m in closure.roots)) for m in sorted(closure.members)],
        )
        updates = []
        for item_id, blob in self._conn.execute("SELECT id, record FROM items ORDER BY id"):
            rec = ItemRecord.from_json(blob)
            updates.append((int(filter_item(rec, closure)), item_id))
        self._conn.executemany("UPDATE items SET in_scope = ? WHERE id = ?", updates)
        self._conn.commit()

    def load_closure(self) -> TypeClosure | None:
        rows = self._conn.execute("SELECT id, is_root FROM closure").fetchall()
        if not rows:
            return None
        return TypeClosure(
            roots=frozenset(i for i, is_root in rows if is_root),
            members=frozenset(i for i, _ in rows),
        )
