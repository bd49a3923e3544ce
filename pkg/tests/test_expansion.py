"""Tests for expansion profiles, bound checks, and the greedy parser.

Expected expansion values come from independent oracles: base-b digit sums
for the place family, a closed-form recurrence for the double-log towers,
and direct coin counting for small finite families.
"""

import math

import pytest
from hypothesis import given, settings, strategies as st

from macrolab.expansion import (
    ExpansionValue,
    HalvingFailure,
    SphereBudgetError,
    expansion_function,
    expansion_profile,
    find_halving_macro,
    fit_parse_constant,
    gprime_length_free_lazy,
    halving_check,
    letters_of_str,
    quasi_exponential_upper_report,
    recursive_parse_free,
    sampled_rates,
    smallest_linear_slope,
    verify_bounds,
    word_str,
)
from macrolab.families import FamilySpec, LazyFreeMacroSet, build_macro_family
from macrolab.monoid import Macro, MacroSet, Word, abelian, free


def digit_sum(value: int, base: int) -> int:
    total = 0
    while value:
        total += value % base
        value //= base
    return total


def place_expansion_oracle(base: int, s: int) -> int:
    """Largest r with digit_sum(m) <= s for every m <= r."""
    r = 0
    while digit_sum(r + 1, base) <= s:
        r += 1
    return r


def tower_budget_oracle(b: int, k: int) -> int:
    """Tokens needed for b**(b**k) - 1 over towers below it, via the recurrence
    T_0 = b - 1, T_k = (b**(b**(k-1) * (b-1)) - 1) + T_{k-1}."""
    t = b - 1
    for j in range(1, k + 1):
        t += b ** (b ** (j - 1) * (b - 1)) - 1
    return t


# --- expansion values ---


def test_expansion_without_macros_is_the_radius():
    M = build_macro_family(FamilySpec.finite([], monoid=abelian(1)))
    v = expansion_function(M, 5, r_max=20)
    assert v == ExpansionValue(5, True)
    assert str(v) == "5"


def test_expansion_place_base_two_matches_digit_sums():
    M = build_macro_family(FamilySpec.place_notation(b=2, n=1, r_max=100))
    profile = expansion_profile(M, range(1, 5), r_max=100)
    values = [profile[s].value for s in range(1, 5)]
    assert values == [place_expansion_oracle(2, s) for s in range(1, 5)]
    assert values == [2, 6, 14, 30]
    assert all(profile[s].exact for s in range(1, 5))


def test_expansion_place_base_ten_matches_digit_sums():
    M = build_macro_family(FamilySpec.place_notation(b=10, n=1, r_max=2000))
    profile = expansion_profile(M, [9, 10, 18], r_max=2000)
    for s in (9, 10, 18):
        assert profile[s].value == place_expansion_oracle(10, s)
    assert profile[9].value == 18
    assert profile[10].value == 28
    assert profile[18].value == 198


def test_expansion_double_log_profile():
    M = build_macro_family(FamilySpec.double_log(b=2, r_max=300))
    profile = expansion_profile(M, range(1, 6), r_max=300)
    assert [profile[s].value for s in range(1, 6)] == [2, 6, 10, 14, 30]


def test_expansion_double_log_tower_budgets():
    from macrolab.monoid import gprime_length

    M = build_macro_family(FamilySpec.double_log(b=2, r_max=70000))
    for k in range(1, 5):
        w = Word.from_multiplicities((2 ** (2**k) - 1,))
        assert gprime_length(w, M) == tower_budget_oracle(2, k)
    assert [tower_budget_oracle(2, k) for k in range(5)] == [1, 2, 5, 20, 275]


def test_expansion_waring_exact_then_certified():
    M = build_macro_family(FamilySpec.waring(k=2, n=1, r_max=2000))
    profile = expansion_profile(M, [3, 4], r_max=2000)
    assert profile[3] == ExpansionValue(6, True)
    # Every integer is a sum of four squares, so the scan exhausts r_max.
    assert profile[4] == ExpansionValue(2000, False)
    assert str(profile[4]) == ">=2000"


def test_expansion_finite_coin_family():
    M = build_macro_family(FamilySpec.finite([Word.from_multiplicities((5,))]))
    assert expansion_function(M, 4, r_max=300).value == 8
    assert expansion_function(M, 50, r_max=300).value == 238


def test_expansion_poly_lex_is_the_identity_early():
    M = build_macro_family(FamilySpec.poly_density_free(c=1.0, p=1.0, n=2, r_max=12))
    profile = expansion_profile(M, range(1, 5), r_max=12)
    assert [profile[s].value for s in range(1, 5)] == [1, 2, 3, 4]


def test_expansion_profile_rejects_bad_inputs():
    M = build_macro_family(FamilySpec.finite([], monoid=abelian(1)))
    with pytest.raises(ValueError):
        expansion_profile(M, [0], r_max=10)
    with pytest.raises(ValueError):
        expansion_profile(M, [], r_max=10)


def test_expansion_is_monotone_in_s():
    M = build_macro_family(FamilySpec.place_notation(b=3, n=2, r_max=90))
    profile = expansion_profile(M, range(1, 9), r_max=90)
    values = [profile[s].value for s in range(1, 9)]
    assert values == sorted(values)


def test_expansion_grows_under_macro_addition():
    small = build_macro_family(
        FamilySpec.finite([Word.from_multiplicities((5,))], r_max=60)
    )
    large = build_macro_family(
        FamilySpec.finite(
            [Word.from_multiplicities((5,)), Word.from_multiplicities((25,))], r_max=60
        )
    )
    for s in range(1, 8):
        assert (
            expansion_function(small, s, r_max=400).value
            <= expansion_function(large, s, r_max=400).value
        )


def test_sphere_budget_error_reports_progress():
    M = build_macro_family(FamilySpec.poly_density_free(c=1.0, p=1.0, n=2, r_max=12))
    with pytest.raises(SphereBudgetError) as err:
        expansion_profile(M, [6], r_max=12, word_budget=40)
    assert err.value.budget == 40
    assert 0 <= err.value.largest_completed < 12


# --- bound reports ---


def test_verify_bounds_place():
    spec = FamilySpec.place_notation(b=2, n=1, r_max=100)
    profile = expansion_profile(build_macro_family(spec), range(1, 5), r_max=100, spec=spec)
    report = verify_bounds(profile)
    assert report.all_passed
    row = next(r for r in report.rows if r.s == 3)
    assert row.lower == pytest.approx(4.0)
    assert row.upper == pytest.approx(16.0)
    assert row.measured.value == 14


def test_verify_bounds_waring_certified_row():
    spec = FamilySpec.waring(k=2, n=1, r_max=2000)
    profile = expansion_profile(build_macro_family(spec), [3, 4], r_max=2000, spec=spec)
    report = verify_bounds(profile)
    assert report.all_passed
    assert report.constants["unbounded_from_s"] == 4.0
    row = next(r for r in report.rows if r.s == 4)
    assert not row.measured.exact
    assert "unbounded" in row.note


def test_verify_bounds_finite():
    spec = FamilySpec.finite([Word.from_multiplicities((5,))], r_max=60)
    profile = expansion_profile(build_macro_family(spec), [4], r_max=300, spec=spec)
    report = verify_bounds(profile)
    assert report.all_passed
    row = report.rows[0]
    assert row.lower == 4.0
    assert row.measured.value == 8
    assert row.upper == 20.0
    assert report.constants["max_macro_length"] == 5.0


def test_verify_bounds_double_log_fits_constants():
    spec = FamilySpec.double_log(b=2, r_max=300)
    profile = expansion_profile(build_macro_family(spec), range(1, 6), r_max=300, spec=spec)
    report = verify_bounds(profile)
    assert report.all_passed
    assert report.constants["exponent_low"] == pytest.approx(2.0)
    assert report.constants["exponent_high"] == pytest.approx(3.0)
    assert 0.0 < report.constants["c1"] <= report.constants["c2"]


def test_verify_bounds_poly_stays_linear():
    spec = FamilySpec.poly_density_free(c=1.0, p=1.0, n=2, r_max=12)
    profile = expansion_profile(build_macro_family(spec), range(1, 5), r_max=12, spec=spec)
    report = verify_bounds(profile)
    assert report.all_passed
    assert report.constants["d"] == 13.0


def test_verify_bounds_rejects_sampling_regimes():
    spec = FamilySpec.probabilistic_free(big_b=8.0, big_c=4.0, n=2, r_max=50, seed=0)
    M = build_macro_family(spec)
    profile = None
    with pytest.raises(ValueError):
        profile = verify_bounds(
            expansion_profile(
                build_macro_family(FamilySpec.finite([], monoid=free(2))), [1], r_max=3
            ),
            spec=spec,
        )
    assert profile is None
    assert isinstance(M, LazyFreeMacroSet)


def test_smallest_linear_slope_value():
    assert smallest_linear_slope(2, 1.0, 1.0) == 13
    assert smallest_linear_slope(2, 1.0, 2.0) >= 13


def test_quasi_exponential_report_passes_on_slow_profiles():
    spec = FamilySpec.poly_density_free(c=1.0, p=1.0, n=2, r_max=12)
    profile = expansion_profile(build_macro_family(spec), range(2, 5), r_max=12, spec=spec)
    report = quasi_exponential_upper_report(profile, q=1.0, n=2)
    assert report.all_passed
    assert report.constants["K"] >= report.constants["K_floor"]
    assert report.constants["K_floor"] == pytest.approx(1.0)


# --- greedy parsing and halving ---


def lazy_set(seed=0):
    return LazyFreeMacroSet(free(2), big_b=8.0, big_c=4.0, seed=seed)


def test_word_str_round_trip():
    assert word_str((0, 1, 1, 0)) == "abba"
    assert letters_of_str("abba") == (0, 1, 1, 0)


def test_parse_of_a_macro_is_one_token():
    M = lazy_set()
    letters = tuple([0, 1] * 32)
    assert M.contains_letters(letters)
    tokens, count = recursive_parse_free(letters, M)
    assert tokens == [word_str(letters)]
    assert count == 1


def test_parse_spells_out_short_macro_free_words():
    M = MacroSet(free(2))
    tokens, count = recursive_parse_free((0, 1, 1), M, C=4.0)
    assert tokens == ["a", "b", "b"]
    assert count == 3


def test_parse_fails_without_halving_macros():
    M = MacroSet(free(2))
    long_word = tuple([0] * 100)
    assert not halving_check(long_word, M, C=4.0)
    with pytest.raises(HalvingFailure):
        recursive_parse_free(long_word, M, C=4.0)


def test_find_halving_macro_picks_first_window_start():
    macro_def = (1, 0, 1, 1)
    M = MacroSet(free(2), [Macro("m", Word.from_letters(macro_def, n=2))])
    word = (0, 1, 0, 1, 1, 0)
    hit = find_halving_macro(word, M, C=1.0)
    assert hit == (2, 4)
    tokens, count = recursive_parse_free(word, M, C=1.0)
    assert tokens == ["a", "babb", "a"]
    assert count == 3


def test_materialized_sets_need_an_explicit_window_constant():
    M = MacroSet(free(2))
    with pytest.raises(ValueError):
        find_halving_macro((0, 1, 0, 1), M)


@settings(deadline=None, max_examples=60)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=60), st.integers(0, 5))
def test_parse_tokens_reassemble_the_word(letters, seed):
    M = lazy_set(seed=seed)
    tokens, count = recursive_parse_free(tuple(letters), M)
    assert "".join(tokens) == word_str(tuple(letters))
    assert count == len(tokens)


@settings(deadline=None, max_examples=40)
@given(st.lists(st.integers(0, 1), min_size=2, max_size=12), st.integers(0, 3))
def test_parse_never_beats_the_exact_token_count(letters, seed):
    M = lazy_set(seed=seed)
    exact = gprime_length_free_lazy(tuple(letters), M)
    _, count = recursive_parse_free(tuple(letters), M)
    assert count >= exact


def slow_lazy_min_tokens(letters, M):
    """Oracle: best segmentation where any contained substring is one token."""
    cache: dict[int, int] = {}

    def search(i):
        if i == len(letters):
            return 0
        if i in cache:
            return cache[i]
        best = 1 + search(i + 1)
        for end in range(i + 2, len(letters) + 1):
            if M.contains_letters(letters[i:end]):
                best = min(best, 1 + search(end))
        cache[i] = best
        return best

    return search(0)


@settings(deadline=None, max_examples=40)
@given(st.lists(st.integers(0, 1), max_size=12), st.integers(0, 3))
def test_exact_lazy_tokens_match_oracle(letters, seed):
    M = lazy_set(seed=seed)
    letters = tuple(letters)
    assert gprime_length_free_lazy(letters, M) == slow_lazy_min_tokens(letters, M)


def test_sampled_rates_are_deterministic():
    M = lazy_set(seed=7)
    a = sampled_rates(M, r=64, trials=50, seed=7)
    b = sampled_rates(M, r=64, trials=50, seed=7)
    assert a.halving_successes == b.halving_successes
    assert a.parse_counts == b.parse_counts
    assert a.trials == 50
    assert a.parse_failures == 0
    assert 0.0 <= a.halving_rate <= 1.0


def test_fit_parse_constant_covers_every_observation():
    M = lazy_set(seed=7)
    rates = [sampled_rates(M, r, trials=30, seed=7) for r in (32, 64)]
    K = fit_parse_constant(rates)
    for sr in rates:
        for count in sr.parse_counts:
            assert count <= K * math.log(sr.r) ** 2 + 1e-9
