"""Exact frameproof verification.

A code is w-frameproof when no coalition ``D`` of at most ``w`` codewords can
assemble, position by position, a codeword outside ``D``.  Equivalently the
distance ``d(c, D)``, the number of positions where ``c_i`` is missing from
``{d_i : d in D}``, is positive for every admissible pair.

Each codeword is held as a bitmask over (position, symbol) pairs (see
``Code.masks``), so a coalition is a bitwise OR and ``d(c, D)`` is a popcount.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .code import Code, Codeword

Coalition = tuple[int, ...]


@dataclass(frozen=True)
class FrameproofReport:
    is_frameproof: bool
    w: int
    witness: Optional[tuple[int, Coalition]] = None

    def __post_init__(self) -> None:
        if self.is_frameproof != (self.witness is None):
            raise ValueError("a witness must be present exactly when the verdict is negative")

    def __bool__(self) -> bool:
        return self.is_frameproof


def coalition(code: Code, members: Iterable[int]) -> Coalition:
    """Normalize ``members`` into a sorted coalition of valid, distinct indices."""
    out = tuple(sorted(set(int(j) for j in members)))
    if not out:
        raise ValueError("a coalition must have at least one member")
    if out[0] < 0 or out[-1] >= code.n:
        raise IndexError(f"coalition {out} has indices outside [0, {code.n - 1}]")
    return out


def descendant_symbols(code: Code, D: Iterable[int], i: int) -> frozenset[int]:
    if not 0 <= i < code.N:
        raise IndexError(f"position {i} outside [0, {code.N - 1}]")
    return frozenset(code.words[j][i] for j in coalition(code, D))


def descendant_count(code: Code, D: Iterable[int]) -> int:
    """``|desc(D)|`` as an exact integer (the product of column-set sizes)."""
    D = coalition(code, D)
    return math.prod(len({code.words[j][i] for j in D}) for i in range(code.N))


def descendants(code: Code, D: Iterable[int]) -> Iterator[Codeword]:
    """Materialize every descendant of ``D``. Exponential in ``N``; small codes only."""
    D = coalition(code, D)
    columns = [sorted({code.words[j][i] for j in D}) for i in range(code.N)]
    return itertools.product(*columns)


def distance(code: Code, c: int, D: Iterable[int]) -> int:
    """Number of positions where word ``c`` carries a symbol no member of ``D`` has."""
    D = coalition(code, D)
    if not 0 <= c < code.n:
        raise IndexError(f"codeword index {c} outside [0, {code.n - 1}]")
    word = code.words[c]
    return sum(
        1 for i, s in enumerate(word)
        if all(code.words[j][i] != s for j in D)
    )


def mask_distance(code: Code, c: int, D: Sequence[int]) -> int:
    """Bitmask form of :func:`distance`; no validation, used on hot paths."""
    masks = code.masks
    union = 0
    for j in D:
        union |= masks[j]
    return (masks[c] & ~union).bit_count()


def _least_cover(target: int, others: Sequence[int], masks: Sequence[int], k: int) -> Optional[Coalition]:
    """Lexicographically least k-subset of ``others`` whose masks cover ``target``.

    Depth-first search in lexicographic order; a branch is cut as soon as the
    still-uncovered bits cannot be hit by any remaining candidate.
    """
    m = len(others)
    if k > m:
        return None
    cand = [masks[j] & target for j in others]
    suffix = [0] * (m + 1)
    for j in range(m - 1, -1, -1):
        suffix[j] = suffix[j + 1] | cand[j]
    if target & ~suffix[0]:
        return None

    chosen: list[int] = []

    def search(start: int, uncovered: int) -> Optional[list[int]]:
        depth = len(chosen)
        if not uncovered:
            need = k - depth
            return chosen + list(range(start, start + need)) if m - start >= need else None
        if depth == k:
            return None
        for j in range(start, m - (k - depth) + 1):
            if uncovered & ~suffix[j]:
                # suffix unions only shrink, so no later j can succeed either
                return None
            chosen.append(j)
            hit = search(j + 1, uncovered & ~cand[j])
            chosen.pop()
            if hit is not None:
                return hit
        return None

    hit = search(0, target)
    return None if hit is None else tuple(others[j] for j in hit)


def framing_coalition(code: Code, c: int, k: int) -> Optional[Coalition]:
    """Least coalition of size ``k`` (not containing ``c``) at distance 0 from ``c``."""
    others = [j for j in range(code.n) if j != c]
    return _least_cover(code.masks[c], others, code.masks, k)


def _scan(code: Code, k: int, framed: Sequence[int]) -> Optional[tuple[int, Coalition]]:
    for c in framed:
        D = framing_coalition(code, c, k)
        if D is not None:
            return c, D
    return None


def is_frameproof(code: Code, w: int, workers: int = 1) -> FrameproofReport:
    """Exhaustively decide whether ``code`` is w-frameproof.

    Only coalitions of size ``min(w, n-1)`` are examined: enlarging a coalition
    can only lower the distance, so nothing is lost.  On failure the witness is
    the least framed index together with its least coalition (sorted-tuple
    order); this does not depend on ``workers``.
    """
    if w < 1:
        raise ValueError(f"w must be at least 1, got {w}")
    k = min(w, code.n - 1)
    if k == 0:
        return FrameproofReport(True, w)
    framed = range(code.n)
    if workers > 1 and code.n > 1:
        chunks = [list(framed[i::workers]) for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            found = [r for r in pool.map(_scan, itertools.repeat(code), itertools.repeat(k), chunks) if r]
        witness = min(found) if found else None
    else:
        witness = _scan(code, k, framed)
    return FrameproofReport(witness is None, w, witness)
