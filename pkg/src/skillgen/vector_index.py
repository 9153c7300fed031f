"""Exact cosine top-k index over embedding vectors, with a versioned,
diff-able text persistence format.

Vectors are L2-normalized once at insert (and per query); similarity is
then a plain dot product.  Search is a full scan: at corpus sizes of a
few hundred chunks, exactness beats any approximate structure and keeps
the brute-force oracle comparison trivial.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (DimensionMismatch, DuplicateId, EmptyIndex, IndexFormatError,
                     ZeroVector)

FORMAT_HEADER = "index.v1"


@dataclass(frozen=True)
class EmbeddingRecord:
    id: str
    chunk_text: str
    vector: tuple[float, ...]
    insert_ordinal: int


@dataclass(frozen=True)
class SearchHit:
    id: str
    score: float
    rank: int


def cosine_similarity(a, b) -> float:
    """dot(a,b) / (|a||b|) in 64-bit arithmetic."""
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.shape != vb.shape or va.ndim != 1:
        raise DimensionMismatch(f"shapes {va.shape} and {vb.shape} differ")
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("cosine similarity is undefined for the zero vector")
    return float(np.dot(va, vb)) / (na * nb)


class VectorIndex:
    """Single-writer build phase; freeze() before concurrent queries."""

    def __init__(self, model_id: str = ""):
        self.model_id = model_id
        self.dimension: int | None = None
        self._records: list[EmbeddingRecord] = []
        self._ids: set[str] = set()
        self._matrix: np.ndarray | None = None
        self._frozen = False

    def __len__(self) -> int:
        return len(self._records)

    @property
    def records(self) -> list[EmbeddingRecord]:
        return list(self._records)

    def insert(self, record_id: str, chunk_text: str, vector) -> None:
        if self._frozen:
            raise RuntimeError("index is frozen")
        v = np.asarray(vector, dtype=np.float64)
        if v.ndim != 1 or v.size == 0:
            raise DimensionMismatch("vector must be a non-empty 1-D sequence")
        if self.dimension is None:
            self.dimension = int(v.size)
        elif v.size != self.dimension:
            raise DimensionMismatch(
                f"vector has dimension {v.size}, index has {self.dimension}")
        if float(np.linalg.norm(v)) == 0.0:
            raise ZeroVector(f"refusing to insert zero vector for {record_id!r}")
        if record_id in self._ids:
            raise DuplicateId(record_id)
        self._records.append(EmbeddingRecord(
            id=record_id, chunk_text=chunk_text,
            vector=tuple(float(x) for x in v),
            insert_ordinal=len(self._records)))
        self._ids.add(record_id)
        self._matrix = None

    def freeze(self) -> None:
        self._ensure_matrix()
        self._frozen = True

    @property
    def frozen(self) -> bool:
        return self._frozen

    def _ensure_matrix(self) -> None:
        if self._matrix is None:
            rows = np.array([r.vector for r in self._records], dtype=np.float64)
            norms = np.linalg.norm(rows, axis=1, keepdims=True)
            self._matrix = rows / norms

    def top_k(self, query, k: int) -> list[SearchHit]:
        """The k records with greatest cosine similarity; ties broken by
        smaller insert ordinal."""
        if k < 1:
            raise ValueError("k must be >= 1")
        if not self._records:
            raise EmptyIndex("top_k on an empty index")
        q = np.asarray(query, dtype=np.float64)
        if q.ndim != 1 or q.size != self.dimension:
            raise DimensionMismatch(
                f"query has dimension {q.size}, index has {self.dimension}")
        norm = float(np.linalg.norm(q))
        if norm == 0.0:
            raise ZeroVector("query must be non-zero")
        self._ensure_matrix()
        scores = self._matrix @ (q / norm)
        order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
        return [SearchHit(id=self._records[i].id, score=float(scores[i]), rank=rank)
                for rank, i in enumerate(order[:min(k, len(order))], start=1)]

    # -- persistence -------------------------------------------------------

    def save(self, path: str | Path) -> None:
        lines = [
            FORMAT_HEADER,
            f"model {self.model_id}",
            f"dimension {self.dimension or 0}",
            f"count {len(self._records)}",
        ]
        for r in self._records:
            lines.append(f"record {r.insert_ordinal} {json.dumps(r.id, ensure_ascii=True)} "
                         f"{json.dumps(r.chunk_text, ensure_ascii=True)}")
            lines.append(" ".join(repr(x) for x in r.vector))
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path, expected_model_id: str | None = None) -> "VectorIndex":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError:
            raise
        lines = text.splitlines()
        if not lines or lines[0] != FORMAT_HEADER:
            raise IndexFormatError(f"unrecognized header in {path}")
        try:
            model_id = lines[1].split(" ", 1)[1] if " " in lines[1] else ""
            dimension = int(lines[2].split(" ", 1)[1])
            count = int(lines[3].split(" ", 1)[1])
        except (IndexError, ValueError) as exc:
            raise IndexFormatError(f"malformed header in {path}") from exc
        if expected_model_id is not None and model_id != expected_model_id:
            raise IndexFormatError(
                f"index was built with model {model_id!r}, expected {expected_model_id!r}")
        index = cls(model_id=model_id)
        cursor = 4
        for _ in range(count):
            try:
                header = lines[cursor]
                vector_line = lines[cursor + 1]
            except IndexError as exc:
                raise IndexFormatError("truncated index file") from exc
            if not header.startswith("record "):
                raise IndexFormatError(f"expected record header, got {header[:40]!r}")
            try:
                decoder = json.JSONDecoder()
                rest = header[len("record "):]
                ordinal_str, rest = rest.split(" ", 1)
                record_id, end = decoder.raw_decode(rest)
                chunk_text, _ = decoder.raw_decode(rest[end + 1:])
                vector = [float(x) for x in vector_line.split()]
            except (ValueError, json.JSONDecodeError) as exc:
                raise IndexFormatError(f"malformed record at line {cursor + 1}") from exc
            if len(vector) != dimension:
                raise IndexFormatError(
                    f"record {record_id!r} has dimension {len(vector)}, header says {dimension}")
            index.insert(record_id, chunk_text, vector)
            cursor += 2
        if len(index) != count:
            raise IndexFormatError("record count does not match header")
        index.freeze()
        return index
