"""Upper and lower bounds on the size of w-frameproof codes, and the
comparisons between them.

Bound *values* are ``mpmath.mpf`` numbers computed at ``PRECISION`` decimal
digits (they overflow doubles quickly).  Every comparison predicate that is
rational is decided with ``fractions.Fraction`` so golden tests cannot flip on
rounding; the one that involves ``e`` and logarithms is decided at high
precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Union

import mpmath

PRECISION = 50

Real = Union[int, float, Fraction, mpmath.mpf]

# Minimal w per q reported for the two comparisons, kept for side-by-side output.
PUBLISHED_TABLE1 = {2: 25, 3: 33, 4: 42, 5: 51, 6: 51, 7: 60, 8: 68, 9: 77,
                    10: 94, 11: 102, 12: 110, 13: 118}
PUBLISHED_TABLE2 = {2: 5, 3: 7, 4: 8, 5: 8, 40: 49, 41: 50}


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _mpf(x: Real) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


# --- bound formulas --------------------------------------------------------

def blackburn_upper_leading(N: int, q: int, w: int) -> Optional[mpmath.mpf]:
    """Leading term ``N / (N - (t-1) ceil(N/w)) * q^ceil(N/w)`` with ``t = N mod w`` in ``1..w``.

    The lower-order ``O(q^(ceil(N/w)-1))`` correction is unknown and left out.
    Returns ``None`` if the denominator is not positive.
    """
    _require(N >= 1 and w >= 1 and q >= 2, f"invalid query N={N} q={q} w={w}")
    t = N % w or w
    k = _ceil_div(N, w)
    denom = N - (t - 1) * k
    if denom <= 0:
        return None
    with mpmath.workdps(PRECISION):
        return +(mpmath.mpf(N) / denom * mpmath.mpf(q) ** k)


def new_upper_exponent(N: int, q: int, w: int) -> int:
    return _ceil_div(N * (q - 1), math.comb(w, 2))


def new_upper(N: int, q: int, w: int, route: str = "power") -> mpmath.mpf:
    """``q^(k log_q B) + w`` with ``k = ceil(N(q-1)/C(w,2))`` and ``B = e q C(w,2)/(q-1)``.

    ``route="base"`` evaluates the same number as ``B^k + w``.
    """
    _require(N >= 1 and q >= 2 and w >= 2, f"invalid query N={N} q={q} w={w}")
    pairs = math.comb(w, 2)
    k = new_upper_exponent(N, q, w)
    with mpmath.workdps(PRECISION):
        base = mpmath.e * q * pairs / (q - 1)
        if route == "power":
            val = mpmath.power(q, k * mpmath.log(base, q))
        elif route == "base":
            val = base ** k
        else:
            raise ValueError(f"unknown route {route!r}")
        return +(val + w)


def st08_base(q: int, w: int) -> Fraction:
    """``q^w / (q^w - (q-1)^w)``."""
    return Fraction(q ** w, q ** w - (q - 1) ** w)


def st08_lower(N: int, q: int, w: int) -> mpmath.mpf:
    """``(1 - 1/w!) * (q^w / (q^w - (q-1)^w))^(N/w)``."""
    _require(N >= 1 and q >= 2 and w >= 2, f"invalid query N={N} q={q} w={w}")
    coeff = 1 - Fraction(1, math.factorial(w))
    with mpmath.workdps(PRECISION):
        return +(_mpf(coeff) * _mpf(st08_base(q, w)) ** (mpmath.mpf(N) / w))


def biased_distribution(q: int, w: int) -> tuple[Fraction, Fraction]:
    """Symbol probabilities ``(lam, mu)``: ``lam`` for the distinguished symbol, ``mu`` for each other."""
    return 1 - Fraction(q - 1, w + 1), Fraction(1, w + 1)


def success_probability(lam: Real, mu: Real, q: int, w: int):
    """Probability that a random symbol lands in the column set of ``w`` random symbols.

    ``lam (1 - (1-lam)^w) + (q-1) mu (1 - (1-mu)^w)``.  Exact when the inputs
    are ``int``/``Fraction``.
    """
    _require(q >= 2 and w >= 1, f"invalid q={q} w={w}")
    total = lam + (q - 1) * mu
    _require(abs(total - 1) <= 1e-12, f"lam + (q-1) mu = {total}, expected 1")
    _require(0 <= lam <= 1 and 0 <= mu <= 1, f"probabilities out of range: lam={lam} mu={mu}")
    return lam * (1 - (1 - lam) ** w) + (q - 1) * mu * (1 - (1 - mu) ** w)


def biased_success_probability(q: int, w: int) -> Fraction:
    lam, mu = biased_distribution(q, w)
    return success_probability(lam, mu, q, w)


def new_lower(N: int, q: int, w: int) -> Optional[mpmath.mpf]:
    """``2^(-(w+1)/w) * P^(-N/w)`` for the biased distribution; ``None`` if ``q > w+1``."""
    _require(N >= 1 and q >= 2 and w >= 2, f"invalid query N={N} q={q} w={w}")
    if q > w + 1:
        return None
    P = biased_success_probability(q, w)
    with mpmath.workdps(PRECISION):
        return +(mpmath.power(2, -mpmath.mpf(w + 1) / w) * (1 / _mpf(P)) ** (mpmath.mpf(N) / w))


def deletion_budget(N: int, P: Real, w: int) -> mpmath.mpf:
    """Largest (exclusive) ``M`` for which ``2M`` samples have fewer than ``M`` expected bad pairs."""
    with mpmath.workdps(PRECISION):
        return +(mpmath.power(2, -mpmath.mpf(w + 1) / w) * _mpf(P) ** (-mpmath.mpf(N) / w))


@dataclass(frozen=True)
class BoundReport:
    N: int
    q: int
    w: int
    blackburn_upper: Optional[mpmath.mpf]
    new_upper: mpmath.mpf
    st08_lower: mpmath.mpf
    new_lower: Optional[mpmath.mpf]
    notes: dict = field(default_factory=dict)

    @property
    def applicable(self) -> dict[str, bool]:
        return {
            "blackburn_upper": self.blackburn_upper is not None,
            "new_upper": True,
            "st08_lower": True,
            "new_lower": self.new_lower is not None,
        }


def bound_report(N: int, q: int, w: int) -> BoundReport:
    _require(N >= 1 and q >= 2 and w >= 2, f"invalid query N={N} q={q} w={w}")
    notes = {"blackburn_upper": "leading term only; O(q^(ceil(N/w)-1)) omitted"}
    nl = new_lower(N, q, w)
    if nl is None:
        notes["new_lower"] = f"inapplicable: requires q <= w+1 (q={q}, w={w})"
    return BoundReport(
        N=N, q=q, w=w,
        blackburn_upper=blackburn_upper_leading(N, q, w),
        new_upper=new_upper(N, q, w),
        st08_lower=st08_lower(N, q, w),
        new_lower=nl,
        notes=notes,
    )


# --- comparison predicates ----------------------------------------------------

def table2_lhs(q: int, w: int) -> Fraction:
    """``1 - P`` for the biased distribution (the quantity compared with ``((q-1)/q)^w``)."""
    a = Fraction(q - 1, w + 1)
    return (1 - a) * a ** w + a * Fraction(w, w + 1) ** w


def table2_predicate(q: int, w: int) -> bool:
    """Does the biased distribution give a better rate than the uniform one?"""
    _require(q >= 2 and w >= 2 and q <= w + 1, f"need 2 <= q <= w+1 and w >= 2 (q={q}, w={w})")
    return table2_lhs(q, w) > Fraction(q - 1, q) ** w


def _rate_terms(q: int, w: int):
    pairs = math.comb(w, 2)
    return mpmath.log(mpmath.e * q * pairs / (q - 1), q), pairs


def table1_rate_predicate(q: int, w: int) -> bool:
    """N-free comparison: ``(q-1)/C(w,2) * log_q(e q C(w,2)/(q-1)) < 1/w``."""
    _require(q >= 2 and w >= 2, f"need q >= 2 and w >= 2 (q={q}, w={w})")
    with mpmath.workdps(PRECISION):
        logb, pairs = _rate_terms(q, w)
        return (q - 1) * w * logb < pairs


def table1_ceiling_predicate(q: int, w: int, N: int) -> bool:
    """Finite-N comparison of exponents: ``ceil(N(q-1)/C(w,2)) log_q B < ceil(N/w)``."""
    _require(q >= 2 and w >= 2 and N >= 1, f"invalid q={q} w={w} N={N}")
    with mpmath.workdps(PRECISION):
        logb, _ = _rate_terms(q, w)
        return new_upper_exponent(N, q, w) * logb < _ceil_div(N, w)


def appendix_inequality(q: int, w: int) -> bool:
    """``(q-1)/(w+1) * (w/(w+1))^w > ((q-1)/q)^w``, decided in integers.

    Defined for ``w >= 8`` and ``2 <= q <= w/2 + 1``.
    """
    _require(w >= 8 and 2 <= q and 2 * q <= w + 2, f"need w >= 8 and 2 <= q <= w/2+1 (q={q}, w={w})")
    # cross-multiplied: (q-1) w^w q^w > (q-1)^w (w+1)^(w+1)
    return (q - 1) * w ** w * q ** w > (q - 1) ** w * (w + 1) ** (w + 1)


def _table2_or_false(q: int, w: int) -> bool:
    return q <= w + 1 and table2_predicate(q, w)


PREDICATES: dict[str, Callable[[int, int], bool]] = {
    "table1": table1_rate_predicate,
    "table2": _table2_or_false,
}


def find_min_w(q: int, predicate: Union[str, Callable[[int, int], bool]], w_max: int) -> Optional[int]:
    """Start of the final run of ``w`` values (up to ``w_max``) where ``predicate(q, w)`` holds.

    Reports the onset of the all-true suffix rather than the first true ``w``,
    since neither comparison is known to be monotone in ``w``.  ``None`` when
    the predicate fails at ``w_max``.
    """
    _require(q >= 2 and w_max >= 2, f"need q >= 2 and w_max >= 2 (q={q}, w_max={w_max})")
    pred = PREDICATES[predicate] if isinstance(predicate, str) else predicate
    threshold = None
    for w in range(w_max, 1, -1):
        if not pred(q, w):
            break
        threshold = w
    return threshold


def first_true_w(q: int, predicate: Union[str, Callable[[int, int], bool]], w_max: int) -> Optional[int]:
    """Smallest ``w`` in ``[2, w_max]`` where the predicate holds, stable or not."""
    pred = PREDICATES[predicate] if isinstance(predicate, str) else predicate
    return next((w for w in range(2, w_max + 1) if pred(q, w)), None)
