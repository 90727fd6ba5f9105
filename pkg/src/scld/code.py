"""Codes, evidence vectors, descendants and the covering relation.

Each position set of an evidence vector is a bitmask over the alphabet
(bit ``s`` set iff symbol ``s`` is present). A whole evidence vector is also
available as one packed integer with ``q`` bits per position, and every
codeword has the matching packed one-hot form, so ``covers`` is the single
test ``(c & d) == c`` and descendants are plain ORs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import combinations
from math import comb
from operator import or_
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CodeFormatError, ShapeError, ValidationError

Coalition = tuple[int, ...]


def _pack(word: Sequence[int], q: int) -> int:
    v = 0
    for i, s in enumerate(word):
        v |= 1 << (i * q + s)
    return v


@dataclass(frozen=True, eq=False)
class Code:
    """An ``(n, M, q)`` code: ``M`` distinct length-``n`` words over ``0..q-1``."""

    q: int
    n: int
    codewords: tuple[tuple[int, ...], ...]
    provenance: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        words = tuple(tuple(int(s) for s in w) for w in self.codewords)
        object.__setattr__(self, "codewords", words)
        if self.q < 2:
            raise ValidationError("alphabet size q must be >= 2")
        if self.n < 1:
            raise ValidationError("length n must be >= 1")
        if not words:
            raise ValidationError("code must contain at least one codeword")
        for w in words:
            if len(w) != self.n:
                raise ValidationError(f"codeword length {len(w)} != n={self.n}")
            for s in w:
                if not 0 <= s < self.q:
                    raise ValidationError(f"symbol {s} outside alphabet [0, {self.q})")
        if len(set(words)) != len(words):
            raise ValidationError("duplicate codeword")

    def __eq__(self, other):
        if not isinstance(other, Code):
            return NotImplemented
        return (self.q, self.n, self.codewords) == (other.q, other.n, other.codewords)

    def __hash__(self):
        return hash((self.q, self.n, self.codewords))

    def __len__(self) -> int:
        return len(self.codewords)

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.codewords[i]

    @property
    def M(self) -> int:
        return len(self.codewords)

    @property
    def rate(self) -> float:
        return float(np.log(self.M) / np.log(self.q) / self.n)

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.codewords, dtype=np.int64).reshape(self.M, self.n)

    @cached_property
    def packed(self) -> tuple[int, ...]:
        return tuple(_pack(w, self.q) for w in self.codewords)

    def subcode(self, indices: Iterable[int]) -> Code:
        return Code(self.q, self.n, tuple(self.codewords[i] for i in indices))


@dataclass(frozen=True)
class EvidenceVector:
    """Length-``n`` sequence of nonempty symbol sets, each stored as a bitmask."""

    q: int
    n: int
    sets: tuple[int, ...]

    def __post_init__(self):
        sets = tuple(int(m) for m in self.sets)
        object.__setattr__(self, "sets", sets)
        if len(sets) != self.n:
            raise ValidationError(f"evidence has {len(sets)} positions, expected n={self.n}")
        full = (1 << self.q) - 1
        for m in sets:
            if m == 0:
                raise ValidationError("empty position set")
            if m & ~full:
                raise ValidationError(f"position set outside alphabet [0, {self.q})")

    @classmethod
    def from_sets(cls, q: int, sets: Sequence[Iterable[int]]) -> EvidenceVector:
        masks = []
        for s in sets:
            m = 0
            for sym in s:
                if not 0 <= sym < q:
                    raise ValidationError(f"symbol {sym} outside alphabet [0, {q})")
                m |= 1 << sym
            masks.append(m)
        return cls(q, len(masks), tuple(masks))

    @classmethod
    def from_packed(cls, q: int, n: int, packed: int) -> EvidenceVector:
        full = (1 << q) - 1
        return cls(q, n, tuple((packed >> (i * q)) & full for i in range(n)))

    def as_sets(self) -> list[list[int]]:
        return [[s for s in range(self.q) if m >> s & 1] for m in self.sets]

    @cached_property
    def packed(self) -> int:
        v = 0
        for i, m in enumerate(self.sets):
            v |= m << (i * self.q)
        return v

    @property
    def masks(self) -> np.ndarray:
        """Position masks as ``uint64`` (only meaningful for ``q <= 64``)."""
        return np.asarray(self.sets, dtype=np.uint64)

    def __repr__(self) -> str:
        body = ", ".join("{" + ",".join(map(str, s)) + "}" for s in self.as_sets())
        return f"EvidenceVector(q={self.q}, ({body}))"


def normalize_coalition(code: Code, coalition: Iterable[int]) -> Coalition:
    idx = tuple(sorted(set(int(i) for i in coalition)))
    if not idx:
        raise ShapeError("empty coalition")
    if idx[0] < 0 or idx[-1] >= code.M:
        raise ShapeError(f"coalition index out of range [0, {code.M})")
    return idx


def desc(code: Code, coalition: Iterable[int]) -> EvidenceVector:
    """Descendant (evidence vector) of the codewords indexed by ``coalition``."""
    idx = normalize_coalition(code, coalition)
    packed = code.packed
    return EvidenceVector.from_packed(code.q, code.n, reduce(or_, (packed[i] for i in idx)))


def covers(word: Sequence[int], d: EvidenceVector) -> bool:
    """True iff ``word[i]`` lies in ``d[i]`` for every position."""
    if len(word) != d.n:
        raise ShapeError("shape error: word length differs from evidence length")
    for s, m in zip(word, d.sets):
        if not 0 <= s < d.q:
            raise ShapeError("shape error: symbol outside evidence alphabet")
        if not m >> s & 1:
            return False
    return True


def _check_shape(code: Code, d: EvidenceVector) -> None:
    if code.n != d.n or code.q != d.q:
        raise ShapeError(f"shape error: code (n={code.n}, q={code.q}) vs evidence (n={d.n}, q={d.q})")


def residual(code: Code, d: EvidenceVector) -> Coalition:
    """Indices of every codeword covered by ``d``, ascending."""
    _check_shape(code, d)
    from ._backend import kernels

    return tuple(int(i) for i in kernels.residual(code, d))


def enumerate_coalitions(code_or_m: Code | int, t: int) -> Iterator[Coalition]:
    """All index subsets of size 1..t, sizes ascending, lexicographic within a size."""
    m = code_or_m.M if isinstance(code_or_m, Code) else int(code_or_m)
    if not 1 <= t <= m:
        raise ShapeError(f"need 1 <= t <= M (t={t}, M={m})")
    for s in range(1, t + 1):
        yield from combinations(range(m), s)


def count_coalitions(m: int, t: int, exact: bool = False) -> int:
    if exact:
        return comb(m, t)
    return sum(comb(m, s) for s in range(1, t + 1))


# -- JSON I/O ----------------------------------------------------------------

def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False) + "\n"


def code_to_json(code: Code) -> str:
    obj = {"q": code.q, "n": code.n, "codewords": [list(w) for w in code.codewords]}
    if code.provenance is not None:
        obj["provenance"] = code.provenance
    return _dumps(obj)


def evidence_to_json(d: EvidenceVector) -> str:
    return _dumps({"q": d.q, "n": d.n, "sets": d.as_sets()})


def _parse(text: str, source: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CodeFormatError(f"{source}: parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise CodeFormatError(f"{source}: top-level value must be an object")
    return obj


def _int_field(obj: dict, key: str, source: str) -> int:
    v = obj.get(key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise CodeFormatError(f"{source}: field {key!r} must be an integer")
    return v


def _int_rows(rows, key: str, source: str) -> list[list[int]]:
    if not isinstance(rows, list):
        raise CodeFormatError(f"{source}: field {key!r} must be an array")
    for r, row in enumerate(rows):
        if not isinstance(row, list) or not all(isinstance(s, int) and not isinstance(s, bool) for s in row):
            raise CodeFormatError(f"{source}: {key}[{r}] must be an array of integers")
    return rows


def code_from_json(text: str, source: str = "<string>") -> Code:
    obj = _parse(text, source)
    q, n = _int_field(obj, "q", source), _int_field(obj, "n", source)
    rows = _int_rows(obj.get("codewords"), "codewords", source)
    try:
        return Code(q, n, tuple(tuple(r) for r in rows), provenance=obj.get("provenance"))
    except ValidationError as exc:
        raise ValidationError(f"{source}: {exc}") from None


def evidence_from_json(text: str, source: str = "<string>") -> EvidenceVector:
    obj = _parse(text, source)
    q, n = _int_field(obj, "q", source), _int_field(obj, "n", source)
    rows = _int_rows(obj.get("sets"), "sets", source)
    try:
        d = EvidenceVector.from_sets(q, rows)
    except ValidationError as exc:
        raise ValidationError(f"{source}: {exc}") from None
    if d.n != n:
        raise ValidationError(f"{source}: evidence has {d.n} positions, expected n={n}")
    return d


def save(obj: Code | EvidenceVector, path: str | Path) -> None:
    text = code_to_json(obj) if isinstance(obj, Code) else evidence_to_json(obj)
    Path(path).write_bytes(text.encode("utf-8"))


def load_code(path: str | Path) -> Code:
    return code_from_json(Path(path).read_text(encoding="utf-8"), str(path))


def load_evidence(path: str | Path) -> EvidenceVector:
    return evidence_from_json(Path(path).read_text(encoding="utf-8"), str(path))


def load(path: str | Path) -> Code | EvidenceVector:
    """Load whichever object the file holds (``codewords`` vs ``sets`` key)."""
    text = Path(path).read_text(encoding="utf-8")
    obj = _parse(text, str(path))
    if "codewords" in obj:
        return code_from_json(text, str(path))
    return evidence_from_json(text, str(path))
