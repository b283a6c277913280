"""Single-file binary container for derived artifacts.

Every artifact the pipeline produces (PageRank table, language model, surface
dictionary, classifier model) is written as:

    magic "KBLA" | uint32 header length | header JSON (utf-8) | payload bytes

The header carries the artifact kind, a format version, and free-form
metadata, always including the record-store revision the artifact was built
from so staleness is detectable at load time.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

MAGIC = b"KBLA"
FORMAT_VERSION = 1


class ArtifactError(Exception):
    """Artifact file missing, corrupt, of the wrong kind, or wrong version."""


def write_artifact(
    path: str | Path, kind: str, meta: dict, payload: bytes = b""
) -> None:
    header = {"kind": kind, "format_version": FORMAT_VERSION, "meta": meta}
    header_bytes = json.dumps(header, ensure_ascii=False, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(header_bytes)))
        fh.write(header_bytes)
        fh.write(payload)


def read_artifact(path: str | Path, expected_kind: str) -> tuple[dict, bytes]:
    """Returns (meta, payload); validates magic, kind and format version."""
    path = Path(path)
    if not path.exists():
        raise ArtifactError(f"artifact not found: {path}")
    data = path.read_bytes()
    if len(data) < 8 or data[:4] != MAGIC:
        raise ArtifactError(f"{path} is not a kblinker artifact")
    (header_len,) = struct.unpack("<I", data[4:8])
    if len(data) < 8 + header_len:
        raise ArtifactError(f"{path} is truncated")
    try:
        header = json.loads(data[8 : 8 + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ArtifactError(f"{path} has a corrupt header: {exc}") from exc
    if header.get("kind") != expected_kind:
        raise ArtifactError(
            f"{path} holds a {header.get('kind')!r} artifact, expected {expected_kind!r}"
        )
    if header.get("format_version") != FORMAT_VERSION:
        raise ArtifactError(
            f"{path} has format version {header.get('format_version')}, "
            f"expected {FORMAT_VERSION}"
        )
    return header["meta"], data[8 + header_len :]
