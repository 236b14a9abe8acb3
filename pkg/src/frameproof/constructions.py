"""Code constructions: affine-plane incidence codes and the random deletion method."""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .bounds import deletion_budget, success_probability, biased_distribution
from .code import Code, Codeword
from .verifier import is_frameproof

log = logging.getLogger(__name__)

# Identity of the sampler; part of the reproducibility contract for emitted files.
GENERATOR_NAME = "python-random-mt19937"
SEED_MASK = (1 << 64) - 1


class UnsupportedOrderError(ValueError):
    pass


class BudgetError(ValueError):
    pass


class ConstructionError(RuntimeError):
    def __init__(self, msg: str, best: Optional["DeletionOutcome"] = None):
        super().__init__(msg)
        self.best = best


def is_prime(r: int) -> bool:
    if r < 2:
        return False
    return all(r % p for p in range(2, int(r ** 0.5) + 1))


def next_prime(r: int) -> int:
    while not is_prime(r):
        r += 1
    return r


# --- affine planes -----------------------------------------------------------

@dataclass(frozen=True)
class AffinePlane:
    """AG(2, r) over the integers mod a prime ``r``.

    Point ``(x, y)`` has index ``x*r + y``.  Lines ``y = m x + b`` come first,
    ordered by ``(m, b)``, followed by the verticals ``x = c``.
    """

    order: int
    points: tuple[tuple[int, int], ...]
    lines: tuple[frozenset[int], ...]

    def check(self) -> None:
        r = self.order
        assert len(self.points) == r * r and len(self.lines) == r * r + r
        assert all(len(line) == r for line in self.lines)
        for P, Q in itertools.combinations(range(len(self.points)), 2):
            through = sum(1 for line in self.lines if P in line and Q in line)
            assert through == 1, f"points {P}, {Q} share {through} lines"


def affine_plane(order: int) -> AffinePlane:
    r = order
    if not is_prime(r):
        raise UnsupportedOrderError(f"only prime orders are supported, got {r}")
    points = tuple((x, y) for x in range(r) for y in range(r))
    lines = [
        frozenset(x * r + (m * x + b) % r for x in range(r))
        for m in range(r) for b in range(r)
    ]
    lines += [frozenset(c * r + y for y in range(r)) for c in range(r)]
    plane = AffinePlane(r, points, tuple(lines))
    plane.check()
    return plane


def affine_plane_code(order: int) -> Code:
    """The ``(r^2, r^2 + r, 2)`` code whose codewords are the lines' incidence vectors.

    Two lines meet in at most one point, so ``r - 1`` lines never cover the
    ``r`` ones of a third: the code is ``(r-1)``-frameproof.
    """
    plane = affine_plane(order)
    N = len(plane.points)
    words = tuple(tuple(1 if P in line else 0 for P in range(N)) for line in plane.lines)
    return Code(N=N, q=2, words=words)


# --- random codes and deletion ---------------------------------------------------

@dataclass(frozen=True)
class RandomCodeParams:
    N: int
    q: int
    w: int
    M: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.N < 1 or self.q < 2 or self.w < 1:
            raise ValueError(f"invalid parameters N={self.N} q={self.q} w={self.w}")
        if self.q > self.w + 1:
            raise ValueError(f"biased sampling needs q <= w+1 (q={self.q}, w={self.w})")
        if self.M < 1:
            raise ValueError(f"M must be positive, got {self.M}")
        if not 0 <= self.seed <= SEED_MASK:
            raise ValueError("seed must be an unsigned 64-bit integer")
        budget = self.budget
        if not self.M < budget:
            raise BudgetError(
                f"M={self.M} violates the budget M < 2^(-(w+1)/w) P^(-N/w) = {float(budget):.6g}"
            )

    @property
    def probabilities(self) -> tuple[Fraction, Fraction]:
        return biased_distribution(self.q, self.w)

    @property
    def budget(self):
        lam, mu = self.probabilities
        return deletion_budget(self.N, success_probability(lam, mu, self.q, self.w), self.w)


@dataclass(frozen=True)
class RandomFamily:
    """``2M`` independently sampled vectors; may contain repeats."""

    params: RandomCodeParams
    vectors: tuple[Codeword, ...]


def _sample_symbol(rng: random.Random, q: int, lam: float, mu: float) -> int:
    u = rng.random()
    if u < lam:
        return q - 1
    return min(int((u - lam) / mu), q - 2)


def random_code(params: RandomCodeParams) -> RandomFamily:
    """Draw ``2M`` vectors; each symbol is ``q-1`` with probability ``lam`` and any other with ``mu``."""
    lam, mu = (float(p) for p in params.probabilities)
    rng = random.Random(params.seed)
    vectors = tuple(
        tuple(_sample_symbol(rng, params.q, lam, mu) for _ in range(params.N))
        for _ in range(2 * params.M)
    )
    return RandomFamily(params, vectors)


@dataclass(frozen=True)
class DeletionOutcome:
    code: Optional[Code]
    seed: int
    attempts: int
    sampled: int
    violating_pairs: int
    deleted: frozenset[int]

    @property
    def size(self) -> int:
        return 0 if self.code is None else self.code.n


def violating_pairs(family: RandomFamily) -> tuple[int, frozenset[int]]:
    """Count pairs ``(c, D)`` with ``|D| = w``, ``c`` not in ``D`` and ``d(c, D) = 0``.

    Returns the count and the set of framed indices.  Enumerates every pair,
    O((2M)^(w+1)) work.
    """
    q, w = family.params.q, family.params.w
    vecs = family.vectors
    masks = [sum(1 << (i * q + s) for i, s in enumerate(v)) for v in vecs]
    k = min(w, len(vecs) - 1)
    count = 0
    framed = set()
    for c in range(len(vecs)):
        target = masks[c]
        others = [j for j in range(len(vecs)) if j != c]
        for D in itertools.combinations(others, k):
            union = 0
            for j in D:
                union |= masks[j]
            if not target & ~union:
                count += 1
                framed.add(c)
    return count, frozenset(framed)


def _delete_once(params: RandomCodeParams, workers: int) -> DeletionOutcome:
    family = random_code(params)
    count, framed = violating_pairs(family)
    kept: list[Codeword] = []
    for j, v in enumerate(family.vectors):
        if j not in framed and v not in kept:
            kept.append(v)
    code = None
    if kept:
        code = Code(N=params.N, q=params.q, words=tuple(kept))
        report = is_frameproof(code, params.w, workers=workers)
        if not report:
            raise ConstructionError(f"deletion left a non-frameproof code: witness {report.witness}")
    return DeletionOutcome(code, params.seed, 1, len(family.vectors), count, framed)


def deletion_method(params: RandomCodeParams, retries: int = 10, workers: int = 1) -> DeletionOutcome:
    """Sample ``2M`` vectors, delete every framed one, keep the rest.

    A vector framed by several coalitions is deleted once.  If fewer than
    ``M`` words survive, the draw is repeated with ``seed + 1`` up to
    ``retries`` more times.  The returned code has already passed the
    exhaustive verifier.
    """
    best: Optional[DeletionOutcome] = None
    for attempt in range(retries + 1):
        p = replace(params, seed=(params.seed + attempt) & SEED_MASK)
        out = _delete_once(p, workers)
        out = replace(out, attempts=attempt + 1)
        log.debug("seed %d: %d pairs, %d survivors", p.seed, out.violating_pairs, out.size)
        if out.size >= params.M:
            return out
        if best is None or out.size > best.size:
            best = out
    raise ConstructionError(
        f"fewer than M={params.M} survivors after {retries + 1} attempts "
        f"(best: {best.size} at seed {best.seed})",
        best,
    )


# --- distribution choice -----------------------------------------------------------

@dataclass(frozen=True)
class DistributionChoice:
    lam: Fraction
    mu: Fraction
    P: Fraction
    objective: float
    grid_lam: float
    grid_objective: float

    @property
    def gap(self) -> float:
        """How far the grid optimum beats the returned choice (``>= 0`` up to rounding)."""
        return self.grid_objective - self.objective

    def matches_grid(self, tol: float = 1e-6) -> bool:
        return self.gap <= tol


def spread_objective(lam: float, q: int, w: int) -> float:
    """``sum_j p_j (1 - p_j)^w`` for one symbol at ``lam`` and the rest sharing ``1 - lam``."""
    mu = (1 - lam) / (q - 1)
    return lam * (1 - lam) ** w + (q - 1) * mu * (1 - mu) ** w


def optimize_distribution(q: int, w: int, step: float = 1e-4) -> DistributionChoice:
    """Closed-form symbol distribution for the deletion method, cross-checked on a grid.

    Uses ``(1 - (q-1)/(w+1), 1/(w+1))`` when ``q <= w+1`` and uniform
    otherwise.  The grid scans the distinguished symbol's probability over
    ``[0, 1]`` in steps of ``step``; the result records the best grid point so
    callers can inspect :attr:`DistributionChoice.gap`.
    """
    if q < 2 or w < 2:
        raise ValueError(f"need q >= 2 and w >= 2 (q={q}, w={w})")
    if q <= w + 1:
        lam, mu = biased_distribution(q, w)
    else:
        lam = mu = Fraction(1, q)
    P = success_probability(lam, mu, q, w)
    steps = round(1 / step)
    grid_lam, grid_obj = max(
        ((i / steps, spread_objective(i / steps, q, w)) for i in range(steps + 1)),
        key=lambda t: t[1],
    )
    return DistributionChoice(lam, mu, P, float(1 - P), grid_lam, grid_obj)
