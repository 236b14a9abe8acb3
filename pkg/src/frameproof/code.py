"""Codes, codewords and the plain-text code file format.

A code file looks like::

    # optional comments
    N n q
    c_1 c_2 ... c_N
    ...            (n rows)

Symbols are 0-based, i.e. drawn from ``{0, ..., q-1}``.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import BinaryIO, Iterable, NamedTuple, Sequence, TextIO, Union

Codeword = tuple[int, ...]


class CodeError(ValueError):
    """Raised when a code violates its structural invariants."""


class CodeFormatError(CodeError):
    """Raised when a code file cannot be parsed."""


class PositionSymbol(NamedTuple):
    position: int
    symbol: int


@dataclass(frozen=True)
class Code:
    """An ``(N, n, q)`` code: ``n`` distinct words of length ``N`` over ``{0..q-1}``.

    Word order is preserved; every index reported by the verifier and the
    pattern routines refers to it.
    """

    N: int
    q: int
    words: tuple[Codeword, ...]

    def __post_init__(self) -> None:
        words = tuple(tuple(int(s) for s in w) for w in self.words)
        object.__setattr__(self, "words", words)
        if self.N < 1:
            raise CodeError(f"code length must be positive, got N={self.N}")
        if self.q < 2:
            raise CodeError(f"alphabet size must be at least 2, got q={self.q}")
        if not words:
            raise CodeError("a code needs at least one codeword")
        seen: dict[Codeword, int] = {}
        for j, w in enumerate(words):
            if len(w) != self.N:
                raise CodeError(f"codeword {j} has length {len(w)}, expected {self.N}")
            for s in w:
                if not 0 <= s < self.q:
                    raise CodeError(f"codeword {j} has symbol {s} outside [0, {self.q - 1}]")
            if w in seen:
                raise CodeError(f"duplicate codeword: rows {seen[w]} and {j} are both {w}")
            seen[w] = j

    @classmethod
    def from_words(cls, words: Iterable[Sequence[int]], q: int | None = None) -> "Code":
        """Build a code from rows, inferring ``N`` (and ``q`` if omitted)."""
        words = [tuple(w) for w in words]
        if not words:
            raise CodeError("a code needs at least one codeword")
        if q is None:
            q = max(2, max(max(w) for w in words) + 1)
        return cls(N=len(words[0]), q=q, words=tuple(words))

    @property
    def n(self) -> int:
        return len(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def __getitem__(self, j: int) -> Codeword:
        return self.words[j]

    def __iter__(self):
        return iter(self.words)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Each word's corresponding set packed as bits ``i*q + c_i``."""
        q = self.q
        return tuple(sum(1 << (i * q + s) for i, s in enumerate(w)) for w in self.words)


def corresponding_set(word: Sequence[int]) -> frozenset[PositionSymbol]:
    """Return ``{(i, c_i)}`` for a codeword; always has exactly ``len(word)`` elements."""
    return frozenset(PositionSymbol(i, int(s)) for i, s in enumerate(word))


def union_size(code: Code) -> int:
    """Number of distinct (position, symbol) pairs used by the whole code."""
    acc = 0
    for m in code.masks:
        acc |= m
    return acc.bit_count()


# --- file format -----------------------------------------------------------

def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise CodeFormatError(f"line {lineno}: non-integer token in {line!r}") from None


def parse_code(text: str) -> Code:
    lines = list(_content_lines(text))
    if not lines:
        raise CodeFormatError("missing header line 'N n q'")
    lineno, header = lines[0]
    fields = _ints(header, lineno)
    if len(fields) != 3 or min(fields) < 1:
        raise CodeFormatError(f"line {lineno}: malformed header {header!r}, expected 'N n q'")
    N, n, q = fields
    rows = lines[1:]
    if len(rows) != n:
        raise CodeFormatError(f"header declares n={n} codewords but {len(rows)} rows follow")
    words = []
    for lineno, line in rows:
        row = _ints(line, lineno)
        if len(row) != N:
            raise CodeFormatError(f"line {lineno}: row has {len(row)} symbols, expected N={N}")
        for s in row:
            if not 0 <= s < q:
                raise CodeFormatError(f"line {lineno}: symbol {s} outside [0, {q - 1}]")
        words.append(tuple(row))
    try:
        return Code(N=N, q=q, words=tuple(words))
    except CodeFormatError:
        raise
    except CodeError as exc:
        raise CodeFormatError(str(exc)) from None


def load_code(source: Union[bytes, str, BinaryIO, TextIO]) -> Code:
    """Parse a code from UTF-8 bytes, a string, or an open (binary or text) stream."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CodeFormatError(f"input is not UTF-8: {exc}") from None
    return parse_code(source)


def format_code(code: Code, comments: Iterable[str] = ()) -> str:
    out = io.StringIO()
    for c in comments:
        out.write(f"# {c}\n")
    out.write(f"{code.N} {code.n} {code.q}\n")
    for w in code.words:
        out.write(" ".join(map(str, w)))
        out.write("\n")
    return out.getvalue()


def save_code(code: Code) -> bytes:
    """Canonical serialization: header, rows in stored order, no comments."""
    return format_code(code).encode("utf-8")


def read_code_file(path: Union[str, Path]) -> Code:
    return load_code(Path(path).read_bytes())


def write_code_file(path: Union[str, Path], code: Code, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(format_code(code, comments), encoding="utf-8")
