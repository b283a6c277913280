"""Streaming dump ingestion.

Reads a Wikidata-style JSON entity dump (one entity per line, tolerating the
surrounding array brackets and trailing commas, optionally gzip/bz2
compressed), extracts compact ItemRecords, and loads them into a RecordStore
in bounded memory. Subclass-of edges are collected during the same pass so the
type closure of the configured roots can be persisted alongside the records.

Malformed lines are recoverable: the reader reports them with their byte
offset and the stream continues.
"""

from __future__ import annotations

import bz2
import gzip
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Callable, Iterable, Iterator

from kblinker.records import (
    ItemRecord,
    RecordStore,
    build_type_closure,
    item_id_from_qid,
)

log = logging.getLogger(__name__)

INSTANCE_OF = "P31"
SUBCLASS_OF = "P279"

# human, organization, geographical object
DEFAULT_ROOT_TYPES = (5, 43229, 618123)


class DumpParseError(Exception):
    """A damaged dump line; carries the byte offset of the line start."""

    def __init__(self, offset: int, message: str):
        super().__init__(f"byte {offset}: {message}")
        self.offset = offset


class ItemParseError(ValueError):
    """Entity record structurally unusable (bad id, wrong field shapes)."""


def _open_dump(path: str | Path) -> BinaryIO:
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rb")
    if path.suffix == ".bz2":
        return bz2.open(path, "rb")
    return open(path, "rb")


def iter_dump(
    path: str | Path,
    on_error: Callable[[DumpParseError], None] | None = None,
) -> Iterator[tuple[int, dict]]:
    """Yields (byte_offset, raw_entity) per well-formed dump line.

    Offsets refer to the uncompressed byte stream. Lines holding only array
    brackets or commas are skipped. Damaged lines raise DumpParseError, or are
    passed to ``on_error`` and skipped when a handler is given.
    """
    offset = 0
    with _open_dump(path) as fh:
        for raw_line in fh:
            line_offset = offset
            offset += len(raw_line)
            stripped = raw_line.strip().strip(b",")
            if stripped in (b"", b"[", b"]"):
                continue
            try:
                entity = json.loads(stripped)
                if not isinstance(entity, dict):
                    raise ItemParseError("entity record is not a JSON object")
            except (ValueError, UnicodeDecodeError) as exc:
                err = DumpParseError(line_offset, str(exc))
                if on_error is None:
                    raise err from exc
                on_error(err)
                continue
            yield line_offset, entity


def _snak_item_value(snak: dict) -> int | None:
    """Numeric item id of a snak, or None when it holds no item value."""
    if snak.get("snaktype") != "value":
        return None
    datavalue = snak.get("datavalue")
    if not isinstance(datavalue, dict) or datavalue.get("type") != "wikibase-entityid":
        return None
    value = datavalue.get("value")
    if not isinstance(value, dict):
        return None
    if value.get("entity-type") not in (None, "item"):
        return None
    numeric = value.get("numeric-id")
    if isinstance(numeric, int) and numeric > 0:
        return numeric
    raw_id = value.get("id")
    if isinstance(raw_id, str):
        try:
            return item_id_from_qid(raw_id)
        except ValueError:
            return None
    return None


def _statement_values(raw_item: dict, prop: str) -> list[int]:
    """Main item values of all statements of one property."""
    values = []
    for statement in raw_item.get("claims", {}).get(prop, ()):
        value = _snak_item_value(statement.get("mainsnak", {}))
        if value is not None:
            values.append(value)
    return values


def parse_item(raw_item: dict, languages: set[str] | None = None) -> ItemRecord:
    """Reduce one raw dump entity to an ItemRecord.

    out_links gathers the item values of every statement plus the item values
    of every qualifier; n_statements counts all statements regardless of
    datatype. Labels and aliases are restricted to ``languages`` when given.
    """
    raw_id = raw_item.get("id")
    if not isinstance(raw_id, str):
        raise ItemParseError("entity has no id")
    try:
        item_id = item_id_from_qid(raw_id)
    except ValueError as exc:
        raise ItemParseError(str(exc)) from exc

    raw_labels = raw_item.get("labels", {})
    raw_aliases = raw_item.get("aliases", {})
    raw_sitelinks = raw_item.get("sitelinks", {})
    for name, field_value in (
        ("labels", raw_labels),
        ("aliases", raw_aliases),
        ("sitelinks", raw_sitelinks),
    ):
        if not isinstance(field_value, dict):
            raise ItemParseError(f"{name} field is not an object")

    labels: dict[str, str] = {}
    for lang, entry in raw_labels.items():
        if languages is not None and lang not in languages:
            continue
        if isinstance(entry, dict) and isinstance(entry.get("value"), str):
            labels[lang] = entry["value"]

    aliases: dict[str, tuple[str, ...]] = {}
    for lang, entries in raw_aliases.items():
        if languages is not None and lang not in languages:
            continue
        if not isinstance(entries, list):
            raise ItemParseError(f"alias group {lang} is not a list")
        seen: dict[str, None] = {}
        for entry in entries:
            if isinstance(entry, dict) and isinstance(entry.get("value"), str):
                seen.setdefault(entry["value"])
        if seen:
            aliases[lang] = tuple(seen)

    n_statements = 0
    out_links: set[int] = set()
    types: set[int] = set()
    claims = raw_item.get("claims", {})
    if not isinstance(claims, dict):
        raise ItemParseError("claims field is not an object")
    for prop, statements in claims.items():
        if not isinstance(statements, list):
            raise ItemParseError(f"statement group {prop} is not a list")
        n_statements += len(statements)
        for statement in statements:
            if not isinstance(statement, dict):
                raise ItemParseError(f"statement of {prop} is not an object")
            value = _snak_item_value(statement.get("mainsnak", {}))
            if value is not None:
                out_links.add(value)
                if prop == INSTANCE_OF:
                    types.add(value)
            qualifiers = statement.get("qualifiers", {})
            if not isinstance(qualifiers, dict):
                raise ItemParseError(f"qualifiers of {prop} are not an object")
            for snaks in qualifiers.values():
                if not isinstance(snaks, list):
                    raise ItemParseError(f"qualifier group of {prop} is not a list")
                for snak in snaks:
                    qualifier_value = _snak_item_value(snak)
                    if qualifier_value is not None:
                        out_links.add(qualifier_value)

    return ItemRecord(
        id=item_id,
        labels=labels,
        aliases=aliases,
        out_links=tuple(sorted(out_links)),
        n_statements=n_statements,
        n_sitelinks=len(raw_sitelinks),
        types=tuple(sorted(types)),
    )


@dataclass
class IndexStats:
    n_items: int = 0
    n_in_scope: int = 0
    n_skipped: int = 0
    n_malformed: int = 0


def index_dump(
    dump_path: str | Path,
    out_dir: str | Path,
    languages: set[str] | None = None,
    root_types: Iterable[int] = DEFAULT_ROOT_TYPES,
) -> IndexStats:
    """Stream a dump into a fresh record store under ``out_dir``.

    Single pass: records go straight to SQLite (bounded memory), subclass
    edges accumulate on the side, and the type closure is persisted at the
    end so in-scope flags and later upserts can use it.
    """
    stats = IndexStats()
    subclass_edges: list[tuple[int, int]] = []

    def note_error(err: DumpParseError) -> None:
        stats.n_malformed += 1
        log.warning("skipping malformed dump line: %s", err)

    def parsed_records() -> Iterator[ItemRecord]:
        for offset, raw in iter_dump(dump_path, on_error=note_error):
            raw_id = raw.get("id")
            if not (isinstance(raw_id, str) and raw_id.startswith("Q")):
                stats.n_skipped += 1
                continue
            try:
                rec = parse_item(raw, languages=languages)
            except ItemParseError as exc:
                note_error(DumpParseError(offset, str(exc)))
                continue
            for parent in _statement_values(raw, SUBCLASS_OF):
                subclass_edges.append((rec.id, parent))
            stats.n_items += 1
            yield rec

    store = RecordStore.create(out_dir)
    try:
        store.bulk_insert(parsed_records())
        closure = build_type_closure(subclass_edges, root_types)
        store.set_closure(closure)
        if languages is not None:
            store._set_meta("languages", ",".join(sorted(languages)))
        stats.n_in_scope = store.n_in_scope()
        store._conn.commit()
    finally:
        store.close()
    return stats
