from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import SIGMA, small_lts
from ltsfit.fixtures import toy_product, toy_system
from ltsfit.model import Alphabet, FitnessTuple, Lts, make_label_counter, make_length_counter
from ltsfit.oracle import (
    DepthCapExceeded,
    alpha_beta_bruteforce,
    apply_fitness,
    avgrate_direct,
    cardinality,
    fitness_image,
    image,
    image_fitness,
    maxrate_direct,
    minrate_direct,
    psi_rate_check,
    unfold_paths,
    xsum,
)

DOLLAR = Alphabet(("0", "$"))
RATE = FitnessTuple((make_label_counter(DOLLAR, ["$"]), make_length_counter(DOLLAR)))


def _rate_for(alphabet):
    first = next(iter(alphabet))
    return FitnessTuple((make_label_counter(alphabet, [first]), make_length_counter(alphabet)))


def test_single_dollar_loop():
    m = Lts(DOLLAR, ("q",), ("q",), (("q", "$", "q"),))
    assert unfold_paths(m, 5) == Counter({tuple("$$$$$"): 1})
    img = image_fitness(RATE, unfold_paths(m, 5))
    assert avgrate_direct(img) == 1


def test_toy_unfolding_sizes():
    m, _ = toy_system()
    assert cardinality(unfold_paths(m, 3)) == 5
    assert cardinality(unfold_paths(m, 4)) == 8
    assert unfold_paths(m, 0) == Counter({(): 1})


def test_no_initial_states():
    m = Lts(DOLLAR, ("q",), (), (("q", "$", "q"),))
    assert unfold_paths(m, 3) == Counter()


def test_depth_cap():
    m = Lts(DOLLAR, ("q",), ("q",), ())
    with pytest.raises(DepthCapExceeded):
        unfold_paths(m, 15)
    assert unfold_paths(m, 15, cap=20) == Counter()


def test_apply_fitness():
    assert apply_fitness(RATE, tuple("$0$$0")) == (3, 5)
    assert apply_fitness(RATE, ()) == (0, 0)
    with pytest.raises(ValueError):
        apply_fitness(RATE, ("x",))


def test_image_merges_collisions():
    xs = Counter({2: 1, -2: 1, 3: 3})
    assert image(lambda x: x * x, xs) == Counter({4: 2, 9: 3})
    assert image(lambda x: x, Counter()) == Counter()


def test_xsum():
    x = Counter({(1, 2): 2, (3, 4): 1})
    assert xsum(x, 2) == 8
    assert xsum(x, 1) == 5
    assert xsum(Counter(), 1) == 0
    with pytest.raises(IndexError):
        xsum(x, 3)


def test_rates():
    x = Counter({(1, 3): 2, (2, 3): 1})
    assert avgrate_direct(x) == Fraction(4, 9)
    assert maxrate_direct(x) == Fraction(2, 3)
    assert minrate_direct(x) == Fraction(1, 3)
    assert maxrate_direct(Counter({(3, 6): 1, (2, 6): 1, (4, 6): 1})) == Fraction(2, 3)
    assert avgrate_direct(Counter({(0, 5): 1})) == 0
    assert avgrate_direct(Counter({(7, 7): 1})) == 1
    with pytest.raises(ValueError):
        avgrate_direct(Counter())
    with pytest.raises(ZeroDivisionError):
        avgrate_direct(Counter({(1, 0): 1}))


def test_psi_rate():
    assert psi_rate_check(Counter({(1, 3): 1, (2, 3): 1}))
    assert not psi_rate_check(Counter({(1, 3): 1, (2, 4): 1}))


def test_toy_alpha_beta():
    p = toy_product()
    s0, s1 = 0, 1
    assert alpha_beta_bruteforce(p, 3)[2][s0] == 3
    assert alpha_beta_bruteforce(p, 4)[2][s1] == 3
    _, a1, _ = alpha_beta_bruteforce(p, 1)
    assert (a1[s0], a1[s1]) == (0, 1)
    assert alpha_beta_bruteforce(p, 3)[1][s0] == 2
    assert alpha_beta_bruteforce(p, 0) == (0, [0, 0], [1, 0])


def test_oscillating_trace_prefix_rates():
    # a single pathological trace whose $-rate keeps swinging between 1/2 and 3/4
    rows = [
        ("0$", (1, 1), Fraction(1, 2)),
        ("0$$$", (3, 1), Fraction(3, 4)),
        ("0$$$00", (3, 3), Fraction(1, 2)),
        ("0$$$00" + "$" * 6, (9, 3), Fraction(3, 4)),
        ("0$$$00" + "$" * 6 + "0" * 6, (9, 9), Fraction(1, 2)),
        ("0$$$00" + "$" * 6 + "0" * 6 + "$" * 18, (27, 9), Fraction(3, 4)),
    ]
    dollars = make_label_counter(DOLLAR, ["$"])
    zeros = make_label_counter(DOLLAR, ["0"])
    for prefix, counts, rate in rows:
        assert (dollars.count(prefix), zeros.count(prefix)) == counts
        img = image_fitness(RATE, Counter({tuple(prefix): 1}))
        assert avgrate_direct(img) == rate


@given(small_lts(), st.integers(0, 8))
@settings(max_examples=50, deadline=None)
def test_rate_image_satisfies_psi_rate(m, n):
    img = image_fitness(_rate_for(SIGMA), unfold_paths(m, n))
    assert psi_rate_check(img)
    assert cardinality(img) == cardinality(unfold_paths(m, n))


@given(small_lts(), st.integers(1, 8))
@settings(max_examples=50, deadline=None)
def test_unfolding_is_prefix_sound(m, n):
    shorter = [unfold_paths(m, k) for k in range(n)]
    for w, c in unfold_paths(m, n).items():
        assert c > 0
        for k in range(n):
            assert shorter[k][w[:k]] > 0


@given(small_lts(), st.integers(0, 7))
@settings(max_examples=50, deadline=None)
def test_unfolding_grows_by_out_degree(m, n):
    counts = Counter()
    frontier = Counter({q: 1 for q in m.initial})
    for _ in range(n):
        nxt = Counter()
        for q, c in frontier.items():
            for _, r in m.successors(q):
                nxt[r] += c
        frontier = nxt
    counts = frontier
    expected = sum(m.out_degree(q) * c for q, c in counts.items())
    assert cardinality(unfold_paths(m, n + 1)) == expected


@given(small_lts(), st.integers(0, 8))
@settings(max_examples=50, deadline=None)
def test_merged_unfolding_matches_word_enumeration(m, n):
    f = FitnessTuple((make_label_counter(SIGMA, ["a"]), make_length_counter(SIGMA)))
    assert fitness_image(m, f, n) == image_fitness(f, unfold_paths(m, n))


@given(
    st.integers(1, 9).flatmap(
        lambda q: st.lists(st.tuples(st.integers(0, q), st.just(q)), min_size=1, max_size=8)
    ),
    st.lists(st.integers(1, 4), min_size=8, max_size=8),
)
@settings(max_examples=100, deadline=None)
def test_avgrate_equals_sum_ratio_under_psi_rate(pairs, mults):
    x = Counter()
    for v, c in zip(pairs, mults):
        x[v] += c
    assert psi_rate_check(x)
    assert avgrate_direct(x) == Fraction(xsum(x, 1), xsum(x, 2))
