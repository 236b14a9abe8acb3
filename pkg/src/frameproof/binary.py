"""Binary frameproof codes: standard form, equivalence, and exhaustive extremal searches."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .code import Code, Codeword
from .constructions import affine_plane_code, next_prime
from .verifier import is_frameproof

DEFAULT_MAX_N = 16


class FeasibilityError(ValueError):
    """The requested exhaustive search is beyond the configured size guard."""


def _require_binary(code: Code) -> None:
    if code.q != 2:
        raise ValueError(f"binary code required, got q={code.q}")


@dataclass(frozen=True)
class RepresentationMatrix:
    """``N x n`` matrix whose column ``j`` is codeword ``j``."""

    bits: tuple[tuple[int, ...], ...]

    @property
    def rows(self) -> int:
        return len(self.bits)

    @property
    def cols(self) -> int:
        return len(self.bits[0]) if self.bits else 0

    @classmethod
    def of(cls, code: Code) -> "RepresentationMatrix":
        _require_binary(code)
        return cls(tuple(zip(*code.words)))

    def row_weights(self) -> list[int]:
        return [sum(r) for r in self.bits]

    def col_weights(self) -> list[int]:
        return [sum(c) for c in zip(*self.bits)]


def complement_rows(code: Code, flip: Sequence[bool]) -> Code:
    """Apply a per-row symbol permutation (identity or 0<->1) to a binary code."""
    _require_binary(code)
    if len(flip) != code.N:
        raise ValueError(f"need one flag per row ({code.N}), got {len(flip)}")
    words = tuple(tuple(s ^ int(bool(f)) for s, f in zip(w, flip)) for w in code.words)
    return Code(N=code.N, q=2, words=words)


def to_standard_form(code: Code) -> Code:
    """Complement every row holding more than ``n/2`` ones; rows at exactly ``n/2`` stay."""
    _require_binary(code)
    weights = RepresentationMatrix.of(code).row_weights()
    return complement_rows(code, [2 * wt > code.n for wt in weights])


def frameproofness_is_equivalence_invariant(code: Code, w: int, flip: Sequence[bool]) -> bool:
    """Do ``code`` and its row-complemented image get the same w-frameproof verdict?"""
    return bool(is_frameproof(code, w)) == bool(is_frameproof(complement_rows(code, flip), w))


def is_permutation_matrix_form(code: Code) -> bool:
    """``n == N`` and the standard-form matrix has a single 1 in every row and column."""
    _require_binary(code)
    if code.n != code.N:
        return False
    m = RepresentationMatrix.of(to_standard_form(code))
    return all(x == 1 for x in m.row_weights()) and all(x == 1 for x in m.col_weights())


# --- exhaustive search -----------------------------------------------------------

def _word(x: int, N: int) -> Codeword:
    # most significant bit first, so integer order is lexicographic order
    return tuple((x >> (N - 1 - i)) & 1 for i in range(N))


def _guard(N: int, max_N: int) -> None:
    if N > max_N:
        raise FeasibilityError(
            f"exhaustive search over binary words of length {N} exceeds the guard N <= {max_N}"
        )


def find_frameproof_code(N: int, n: int, w: int) -> Optional[Code]:
    """Lexicographically least binary w-frameproof code of length ``N`` with ``n`` words
    that contains the all-zero word, or ``None``.

    Containing the zero word loses nothing: complementing the rows where any
    chosen codeword has a 1 maps it to zero without changing frameproofness.
    Sub-codes of frameproof codes are frameproof, so partial sets are pruned
    on their first violation.
    """
    total = 1 << N
    if n > total:
        return None
    chosen: list[Codeword] = [_word(0, N)]

    def extend(nxt: int) -> Optional[Code]:
        if len(chosen) == n:
            return Code(N=N, q=2, words=tuple(chosen))
        for x in range(nxt, total - (n - len(chosen)) + 1):
            chosen.append(_word(x, N))
            if is_frameproof(Code(N=N, q=2, words=tuple(chosen)), w):
                hit = extend(x + 1)
                if hit is not None:
                    return hit
            chosen.pop()
        return None

    return extend(1)


def check_theorem8(w: int, N: int, max_N: int = DEFAULT_MAX_N) -> bool:
    """Confirm by exhaustion that no binary w-frameproof code of length ``N`` has ``N + 1`` words.

    Requires ``2 <= N < C(w+1, 2)``.  ``N = 1`` is excluded because any two
    distinct words form a trivially frameproof code.
    """
    if w < 2:
        raise ValueError(f"w must be at least 2, got {w}")
    if not 2 <= N < math.comb(w + 1, 2):
        raise ValueError(f"need 2 <= N < C(w+1, 2) = {math.comb(w + 1, 2)}, got N={N}")
    _guard(N, max_N)
    return find_frameproof_code(N, N + 1, w) is None


def search_nw(w: int, N_max: int, max_N: int = DEFAULT_MAX_N) -> Optional[tuple[int, Code]]:
    """Least ``N <= N_max`` with a binary w-frameproof code of ``N + 1`` words, plus a witness.

    Lengths start at 2 (see :func:`check_theorem8`).  The witness is verified
    before it is returned.
    """
    if w < 2:
        raise ValueError(f"w must be at least 2, got {w}")
    _guard(N_max, max_N)
    for N in range(2, N_max + 1):
        code = find_frameproof_code(N, N + 1, w)
        if code is not None:
            assert is_frameproof(code, w) and code.n == N + 1
            return N, code
    return None


def corollary10_window(w: int, verify: bool = False) -> tuple[int, int]:
    """Finite bracket ``(C(w+1, 2), r^2)`` for ``N(w)``, ``r`` the least prime ``>= w + 1``.

    With ``verify=True`` the affine-plane code of order ``r`` is built and
    checked to be w-frameproof.
    """
    if w < 2:
        raise ValueError(f"w must be at least 2, got {w}")
    r = next_prime(w + 1)
    if verify:
        code = affine_plane_code(r)
        if not (code.n > code.N and is_frameproof(code, w)):
            raise AssertionError(f"affine-plane code of order {r} is not {w}-frameproof")
    return math.comb(w + 1, 2), r * r
