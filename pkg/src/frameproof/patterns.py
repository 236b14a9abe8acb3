"""t-patterns, the own-pattern partition, and checks of the two counting lemmas.

A t-pattern of ``c`` is its restriction to ``t`` positions; it is *own* when no
other codeword agrees with ``c`` on all of them.  ``C_t`` collects the words
that have an own t-pattern and ``H_t`` the rest.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

from .code import Code, PositionSymbol
from .verifier import is_frameproof, mask_distance

Pattern = frozenset[PositionSymbol]


class NotFrameproofError(ValueError):
    pass


@dataclass(frozen=True)
class PatternPartition:
    t: int
    own_indices: frozenset[int]
    rest_indices: frozenset[int]


def _check_t(code: Code, t: int) -> None:
    if not 1 <= t <= code.N:
        raise ValueError(f"pattern size t={t} outside [1, N={code.N}]")


def _agreement_masks(code: Code, c: int) -> list[int]:
    """For each other word, the bitmask of positions where it agrees with ``c``."""
    word = code.words[c]
    out = []
    for j, other in enumerate(code.words):
        if j != c:
            out.append(sum(1 << i for i in range(code.N) if other[i] == word[i]))
    return out


def has_own_pattern(code: Code, c: int, t: int, exhaustive: bool = False) -> Optional[Pattern]:
    """Return the least own t-pattern of word ``c`` (by sorted positions), or ``None``.

    With ``exhaustive=True`` every pattern is compared against every other word
    with no early exit and without the agreement-mask shortcut; this is the
    slow reference used by the tests.
    """
    _check_t(code, t)
    word = code.words[c]
    if exhaustive:
        found = []
        for S in itertools.combinations(range(code.N), t):
            shared = [
                all(other[i] == word[i] for i in S)
                for j, other in enumerate(code.words) if j != c
            ]
            if not any(shared):
                found.append(S)
        if not found:
            return None
        return frozenset(PositionSymbol(i, word[i]) for i in found[0])

    agree = _agreement_masks(code, c)
    for S in itertools.combinations(range(code.N), t):
        smask = sum(1 << i for i in S)
        if all(smask & ~a for a in agree):
            return frozenset(PositionSymbol(i, word[i]) for i in S)
    return None


def partition(code: Code, t: int, exhaustive: bool = False) -> PatternPartition:
    _check_t(code, t)
    own = frozenset(
        c for c in range(code.n) if has_own_pattern(code, c, t, exhaustive) is not None
    )
    return PatternPartition(t, own, frozenset(range(code.n)) - own)


def own_pattern_bound(N: int, q: int, t: int) -> int:
    return math.comb(N, t) * q ** t


def check_lemma4(code: Code, t: int) -> bool:
    """``|C_t| <= C(N, t) q^t``. Always true; ``False`` means a bug."""
    return len(partition(code, t).own_indices) <= own_pattern_bound(code.N, code.q, t)


def check_lemma5(code: Code, w: int, t: int, verified: bool = False) -> bool:
    """Exhaustively confirm ``d(c, D) >= (w - |D|) t + 1`` for ``c`` in ``H_t``, ``|D| <= w``.

    Requires a w-frameproof code; that is checked here unless the caller
    passes ``verified=True``.  Enumerates O(n^w) coalitions per word, so keep
    the inputs desk-sized.
    """
    _check_t(code, t)
    if not verified and not is_frameproof(code, w):
        raise NotFrameproofError(f"code is not {w}-frameproof")
    rest = partition(code, t).rest_indices
    for c in sorted(rest):
        others = [j for j in range(code.n) if j != c]
        for j in range(1, w + 1):
            floor = (w - j) * t + 1
            for D in itertools.combinations(others, j):
                if mask_distance(code, c, D) < floor:
                    return False
    return True


def large_t_threshold(N: int, q: int, w: int) -> float:
    """Beyond this pattern size a w-frameproof code has ``|H_t| <= w``."""
    return (N * (q - 1) - w) / math.comb(w, 2)
