import math
from fractions import Fraction

import mpmath
import pytest

from frameproof.bounds import (
    PUBLISHED_TABLE1,
    PUBLISHED_TABLE2,
    appendix_inequality,
    blackburn_upper_leading,
    bound_report,
    find_min_w,
    first_true_w,
    new_lower,
    new_upper,
    st08_lower,
    success_probability,
    table1_ceiling_predicate,
    table1_rate_predicate,
    table2_lhs,
    table2_predicate,
    biased_distribution,
    biased_success_probability,
)

E = mpmath.e


def rel(a, b):
    return abs(a - b) / abs(b)


# --- Blackburn leading term ------------------------------------------------------

@pytest.mark.parametrize("w, q", [(2, 2), (3, 5), (7, 3)])
def test_blackburn_length_equal_w(w, q):
    assert blackburn_upper_leading(w, q, w) == w * q


@pytest.mark.parametrize("N, w, q", [(1, 3, 2), (7, 3, 4), (9, 4, 3), (11, 2, 5)])
def test_blackburn_residue_one(N, w, q):
    assert blackburn_upper_leading(N, q, w) == q ** math.ceil(N / w)


def test_blackburn_even_length_w2():
    # t = 2, ceil(4/2) = 2, denominator 4 - 1*2 = 2
    assert blackburn_upper_leading(4, 3, 2) == 18


def test_blackburn_denominator_never_vanishes():
    for w in range(1, 40):
        for N in range(1, 400):
            assert blackburn_upper_leading(N, 2, w) is not None


# --- new upper bound ---------------------------------------------------------------

def test_new_upper_reference_values():
    with mpmath.workdps(40):
        assert rel(new_upper(300, 2, 25), 2 * E * 300 + 25) < 1e-30
        assert rel(new_upper(3, 2, 3), 2 * E * 3 + 3) < 1e-30
    assert abs(float(new_upper(300, 2, 25)) - 1655.97) < 0.005
    assert abs(float(new_upper(3, 2, 3)) - 19.31) < 0.005


def test_new_upper_routes_agree():
    for N in (1, 7, 50, 300, 2000):
        for q in (2, 3, 5, 13):
            for w in (2, 3, 10, 40):
                a, b = new_upper(N, q, w, "power"), new_upper(N, q, w, "base")
                assert rel(a, b) < 1e-9


def test_new_upper_bad_route():
    with pytest.raises(ValueError):
        new_upper(3, 2, 3, route="nope")


# --- ST08 and biased lower bounds --------------------------------------------------

@pytest.mark.parametrize("N, expected", [(2, Fraction(2, 3)), (4, Fraction(8, 9))])
def test_st08_exact(N, expected):
    with mpmath.workdps(50):
        assert rel(st08_lower(N, 2, 2), mpmath.mpf(expected.numerator) / expected.denominator) < 1e-40


def test_st08_rejects_zero_length():
    with pytest.raises(ValueError):
        st08_lower(0, 2, 2)


def test_new_lower_values():
    P = Fraction(2, 3) * Fraction(8, 9) + Fraction(1, 3) * Fraction(5, 9)
    assert P == Fraction(7, 9) == biased_success_probability(2, 2)
    assert abs(float(new_lower(2, 2, 2)) - 2 ** -1.5 * 9 / 7) < 1e-15
    assert abs(float(new_lower(2, 2, 2)) - 0.4546) < 5e-5
    assert abs(float(new_lower(20, 2, 2)) - 2 ** -1.5 * (9 / 7) ** 10) < 1e-12
    assert abs(float(new_lower(20, 2, 2)) - 4.36) < 5e-3


def test_new_lower_inapplicable():
    assert new_lower(10, 4, 2) is None
    rep = bound_report(10, 5, 3)
    assert rep.new_lower is None and not rep.applicable["new_lower"]
    assert "inapplicable" in rep.notes["new_lower"]


def test_biased_closed_form_matches_probability():
    for q in range(2, 9):
        for w in range(q - 1, 15):
            if w < 2:
                continue
            a = Fraction(q - 1, w + 1)
            closed = 1 - (1 - a) * a ** w - a * Fraction(w, w + 1) ** w
            assert biased_success_probability(q, w) == closed == 1 - table2_lhs(q, w)


# --- success probability -------------------------------------------------------------

def test_success_probability_examples():
    assert success_probability(Fraction(2, 3), Fraction(1, 3), 2, 2) == Fraction(7, 9)
    assert success_probability(1, 0, 3, 4) == 1
    assert success_probability(Fraction(1, 2), Fraction(1, 2), 2, 2) == Fraction(3, 4)


def test_success_probability_constraint():
    with pytest.raises(ValueError):
        success_probability(0.5, 0.4, 2, 2)
    with pytest.raises(ValueError):
        success_probability(Fraction(3, 2), Fraction(-1, 2), 2, 2)
    success_probability(0.5 + 1e-13, 0.5, 2, 2)


def test_uniform_reproduces_st08_base():
    for q in range(2, 6):
        for w in range(1, 21):
            u = Fraction(1, q)
            assert success_probability(u, u, q, w) == 1 - Fraction(q - 1, q) ** w


def test_biased_beats_uniform_exactly_when_table2_holds():
    for w in range(2, 60):
        for q in range(2, w + 2):
            u = Fraction(1, q)
            better = biased_success_probability(q, w) < success_probability(u, u, q, w)
            assert better == table2_predicate(q, w)


def test_biased_beats_uniform_when_q_at_most_half_w():
    for w in range(8, 80):
        for q in range(2, w // 2 + 2):
            u = Fraction(1, q)
            assert biased_success_probability(q, w) < success_probability(u, u, q, w)


# --- comparison predicates ---------------------------------------------------------------

def test_table2_examples():
    assert table2_lhs(2, 5) == Fraction(3130, 46656)
    assert table2_predicate(2, 5)
    assert table2_lhs(2, 3) == Fraction(30, 256)
    assert not table2_predicate(2, 3)
    assert table2_predicate(3, 7)


def test_table2_preconditions():
    for q, w in [(1, 3), (2, 1), (5, 3)]:
        with pytest.raises(ValueError):
            table2_predicate(q, w)


@pytest.mark.parametrize("q, w", sorted(PUBLISHED_TABLE2.items()))
def test_table2_holds_at_published_minima(q, w):
    assert table2_predicate(q, w)


def test_table1_examples():
    assert table1_rate_predicate(14, 196)
    assert table1_rate_predicate(2, 25)
    assert not table1_rate_predicate(2, 10)
    assert abs(math.log2(2 * math.e * 45) / 45 - 0.176) < 1e-3


@pytest.mark.parametrize("q, w", sorted(PUBLISHED_TABLE1.items()))
def test_table1_holds_at_published_minima(q, w):
    assert table1_rate_predicate(q, w)


def test_table1_ceiling_form():
    # N a multiple of both C(w,2) and w removes the ceilings
    N = 300 * 25
    assert table1_ceiling_predicate(2, 25, N)
    assert not table1_ceiling_predicate(2, 10, 45 * 10)
    # short codes: one block on each side, and log_q B > 1
    assert not table1_ceiling_predicate(2, 25, 25)


def test_half_w_inequality_examples():
    assert appendix_inequality(5, 8)
    assert appendix_inequality(2, 8)
    assert appendix_inequality(51, 100)


def test_half_w_inequality_preconditions():
    for q, w in [(2, 7), (6, 8), (1, 9)]:
        with pytest.raises(ValueError):
            appendix_inequality(q, w)


def test_half_w_inequality_matches_fraction_form():
    for w in range(8, 40):
        for q in range(2, w // 2 + 2):
            lhs = Fraction(q - 1, w + 1) * Fraction(w, w + 1) ** w
            assert appendix_inequality(q, w) == (lhs > Fraction(q - 1, q) ** w)


# --- threshold scans ------------------------------------------------------------------------

def test_find_min_w_examples():
    assert find_min_w(2, "table2", 100) <= 5
    assert find_min_w(40, "table2", 200) <= 49
    assert find_min_w(5, "table1", 200) <= 51


def test_find_min_w_reports_stable_onset():
    pattern = {2: False, 3: True, 4: False}
    pred = lambda q, w: pattern.get(w, True)  # noqa: E731
    assert find_min_w(2, pred, 10) == 5
    assert first_true_w(2, pred, 10) == 3
    assert find_min_w(2, lambda q, w: w != 10, 10) is None


def test_find_min_w_threshold_is_suffix():
    for q in (2, 3, 7):
        w0 = find_min_w(q, "table2", 120)
        assert all(table2_predicate(q, w) for w in range(w0, 121))
        assert w0 == 2 or not (q <= w0 and table2_predicate(q, w0 - 1))


def test_biased_distribution_sums_to_one():
    for q in range(2, 10):
        lam, mu = biased_distribution(q, 12)
        assert lam + (q - 1) * mu == 1
