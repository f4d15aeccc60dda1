"""On-disk catalog: one JSON file per design plus an ``index.json``."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .blockset import Design, validate_symmetric_design
from .io import canonical_dumps, design_from_dict, design_to_dict

INDEX = "index.json"


@dataclass
class CatalogEntry:
    id: str
    parameters: tuple[int, int | None, int | None]
    tags: list[str] = field(default_factory=list)
    provenance: str = ""


def design_id(design: Design) -> str:
    """Content digest of the canonical JSON form."""
    return hashlib.sha256(canonical_dumps(design_to_dict(design)).encode()).hexdigest()[:20]


class Catalog:
    def __init__(self, root: str | Path):
        self.root = Path(root)

    def _index_path(self) -> Path:
        return self.root / INDEX

    def entries(self) -> list[CatalogEntry]:
        path = self._index_path()
        if not path.exists():
            return []
        raw = json.loads(path.read_text(encoding="utf-8"))
        return [CatalogEntry(e["id"], tuple(e["parameters"]), e["tags"], e["provenance"]) for e in raw]

    def _write_index(self, entries: list[CatalogEntry]) -> None:
        entries = sorted(entries, key=lambda e: e.id)
        payload = [dict(asdict(e), parameters=list(e.parameters)) for e in entries]
        self._index_path().write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")

    def add(self, design: Design, tags=(), provenance: str = "") -> CatalogEntry:
        """Store ``design``; re-adding merges tags and keeps the first provenance."""
        self.root.mkdir(parents=True, exist_ok=True)
        did = design_id(design)
        (self.root / f"{did}.json").write_text(canonical_dumps(design_to_dict(design)) + "\n", encoding="utf-8")
        entries = {e.id: e for e in self.entries()}
        if did in entries:
            entry = entries[did]
            entry.tags = sorted(set(entry.tags) | set(tags))
        else:
            rep = validate_symmetric_design(design)
            entry = CatalogEntry(did, rep.parameters, sorted(set(tags)), provenance)
            entries[did] = entry
        self._write_index(list(entries.values()))
        return entry

    def load(self, did: str) -> Design:
        return design_from_dict(json.loads((self.root / f"{did}.json").read_text(encoding="utf-8")), did)

    def find(self, tag: str | None = None) -> list[CatalogEntry]:
        return [e for e in self.entries() if tag is None or tag in e.tags]
