import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from gf2rank import oracles
from gf2rank.errors import InvalidParam, TruncationTooSmall
from gf2rank.exact import (
    ParitySpec,
    expected_null_count,
    gfq_dense_survival,
    gfq_survival_lower_bound,
    hypergeometric_even_overlap,
    multinomial_parity,
    pi_multinomial,
    poissonization_check,
    prob_A_general,
)
from gf2rank.sampling import derive_stream_seed
from gf2rank.weights import WeightDist

W1 = WeightDist.fixed(1)
W2 = WeightDist.fixed(2)
W3 = WeightDist.fixed(3)


def test_pi_two_balls_two_urns():
    assert pi_multinomial(2, 2, W1, exact=True) == Fraction(1, 2)
    assert abs(float(pi_multinomial(2, 2, W1)) - 0.5) < 1e-15


def test_pi_odd_m_is_zero():
    assert pi_multinomial(5, 3, W1, exact=True) == 0
    assert pi_multinomial(5, 7, W3, exact=True) == 0
    assert float(pi_multinomial(5, 3, W1)) == 0.0


def test_pi_against_ball_enumeration():
    for dist, n, m in ((W1, 2, 2), (W2, 3, 2), (W3, 3, 2), (W2, 2, 3)):
        assert pi_multinomial(n, m, dist, exact=True) == \
            oracles.pi_multinomial_enumerated(n, m, dist)


def test_hypergeometric_even_overlap_values():
    assert hypergeometric_even_overlap(4, 0, 2) == 1
    assert hypergeometric_even_overlap(4, 1, 4) == 0  # all columns hit: overlap 1
    # r=0 rows overlap nothing, always even
    assert hypergeometric_even_overlap(5, 3, 0) == 1


def test_prob_A_two_weight2_rows():
    assert prob_A_general(3, 2, [(2, 1)], exact=True) == Fraction(1, 3)


def test_prob_A_single_row_zero():
    assert prob_A_general(3, 1, [(2, 1)], exact=True) == 0


def test_prob_A_matches_enumeration_w3():
    got = prob_A_general(6, 3, [(3, 1)], exact=True)
    want = oracles.prob_A_enumerated(6, 3, [(3, 1)])
    assert got == want


def test_prob_A_mixture_law_matches_enumeration():
    law = [(1, Fraction(1, 4)), (2, Fraction(3, 4))]
    for m in range(4):
        assert prob_A_general(4, m, law, exact=True) == \
            oracles.prob_A_enumerated(4, m, law)


def test_prob_A_float_path_matches_exact():
    # odd m with mixed weight parity exercises the alternating-sign branch
    law = [(2, Fraction(1, 2)), (3, Fraction(1, 2))]
    want = prob_A_general(40, 7, law, exact=True)
    got = prob_A_general(40, 7, law)
    assert want != 0
    assert abs(float((got - want) / want)) < 1e-14


def test_prob_A_structural_zero_all_odd():
    assert prob_A_general(40, 7, [(3, 1)], exact=True) == 0
    assert float(prob_A_general(40, 7, [(3, 1)])) == 0.0


def test_prob_A_rejects_bad_support():
    with pytest.raises(InvalidParam):
        prob_A_general(3, 1, [(4, 1)])
    with pytest.raises(InvalidParam):
        prob_A_general(3, 1, [])


def test_expected_null_count_empty():
    total, profile = expected_null_count(5, 0, W3, exact=True)
    assert total == 1
    assert profile == {0: 1}


def test_expected_null_count_small():
    total, profile = expected_null_count(3, 2, W2, exact=True)
    assert total == Fraction(4, 3)
    assert profile[0] == 1 and profile[1] == 0 and profile[2] == Fraction(1, 3)


def test_expected_null_count_matches_corank_enumeration():
    for m in range(4):
        want = oracles.mean_null_count_enumerated(4, m, [(2, 1)])
        got, _ = expected_null_count(4, m, W2, exact=True)
        assert got == want


def test_pair_weight_profile_identity():
    # two rows cancel iff identical: E[N(n,m;2)] = C(m,2) / C(n,r)
    for n, m, r in ((6, 4, 3), (8, 5, 3), (7, 4, 2)):
        dist = WeightDist.fixed(r)
        _, profile = expected_null_count(n, m, dist, exact=True)
        assert profile[2] == Fraction(math.comb(m, 2), math.comb(n, r))


def test_expected_null_count_near_rate_function():
    from gf2rank.thresholds import F_of_alpha
    total, _ = expected_null_count(60, 54, W3)
    rate = float(mp.log(total)) / 60
    f = F_of_alpha(W3, 0.9)[0]
    assert abs(rate - f) <= 0.05


def test_poissonization_identity():
    lhs, rhs = poissonization_check(4, 4, 1.0)
    assert abs(lhs - rhs) <= 1e-12
    lhs, rhs = poissonization_check(2, 2, 0.5)
    assert abs(lhs - 0.5) <= 1e-12
    lhs, rhs = poissonization_check(6, 3, 0.7)
    assert lhs == 0 and rhs == 0


def test_poissonization_truncation_guard():
    with pytest.raises(TruncationTooSmall):
        poissonization_check(4, 4, 30.0, truncation=35)


def test_parity_binomial_closed_form():
    spec = ParitySpec(k=1, r=2, targets=(0,), cell_probs=(0.3, 0.7))
    for n in (0, 1, 5, 12):
        want = (1 + (1 - 2 * 0.7) ** n) / 2
        assert abs(multinomial_parity(spec, n) - want) < 1e-12


@settings(max_examples=200, deadline=None)
@given(p=st.floats(0.01, 0.99), n=st.integers(0, 60))
def test_parity_binomial_closed_form_property(p, n):
    spec = ParitySpec(k=1, r=2, targets=(0,), cell_probs=(1 - p, p))
    want = (1 + (1 - 2 * p) ** n) / 2
    assert abs(multinomial_parity(spec, n) - want) < 1e-11


def test_parity_n0():
    spec = ParitySpec(k=2, r=3, targets=(0, 0), cell_probs=(0.25,) * 4)
    assert multinomial_parity(spec, 0) == pytest.approx(1.0, abs=1e-12)
    spec = ParitySpec(k=2, r=3, targets=(1, 0), cell_probs=(0.25,) * 4)
    assert multinomial_parity(spec, 0) == pytest.approx(0.0, abs=1e-12)
    # the exact path has no such residue
    exact_spec = ParitySpec(k=2, r=3, targets=(1, 0),
                            cell_probs=(Fraction(1, 4),) * 4)
    assert multinomial_parity(exact_spec, 0, exact=True) == 0


def test_parity_exact_matches_paths():
    probs = (Fraction(1, 5), Fraction(2, 5), Fraction(1, 5), Fraction(1, 5))
    for r in (2, 3):
        for t in ((0, 0), (1, r - 1)):
            spec = ParitySpec(k=2, r=r, targets=t, cell_probs=probs)
            for n in range(5):
                assert multinomial_parity(spec, n, exact=True) == \
                    oracles.parity_paths(spec, n)


def test_parity_exact_higher_modulus():
    # cyclotomic reduction for a non-prime modulus
    probs = (Fraction(1, 2), Fraction(1, 2))
    spec = ParitySpec(k=1, r=4, targets=(2,), cell_probs=probs)
    for n in range(6):
        assert multinomial_parity(spec, n, exact=True) == oracles.parity_paths(spec, n)
        f = multinomial_parity(spec, n)
        assert abs(f - float(oracles.parity_paths(spec, n))) < 1e-12


def test_parity_spec_validation():
    with pytest.raises(InvalidParam):
        ParitySpec(k=1, r=9, targets=(0,), cell_probs=(1, 0))
    with pytest.raises(InvalidParam):
        ParitySpec(k=11, r=2, targets=(0,) * 11, cell_probs=(1,) * (1 << 11))
    with pytest.raises(InvalidParam):
        ParitySpec(k=1, r=2, targets=(2,), cell_probs=(0.5, 0.5))
    with pytest.raises(InvalidParam):
        ParitySpec(k=1, r=2, targets=(0,), cell_probs=(0.4, 0.4))


def test_gfq_limits():
    assert gfq_dense_survival(2, 0) == 0.0
    want = 1.0
    for j in range(3, 80):
        want *= 1 - 2.0**-j
    assert abs(gfq_dense_survival(2, 3) - want) < 1e-14


def test_gfq_finite_n_monotone_to_limit():
    # finite-n survival decreases to the limit from above (monotone for n >= r)
    lim = gfq_dense_survival(2, 2)
    prev = 1.0
    for n in (5, 10, 20, 40):
        val = gfq_dense_survival(2, 2, n)
        assert lim - 1e-15 <= val <= prev + 1e-15
        prev = val
    assert abs(gfq_dense_survival(2, 2, 60) - lim) < 1e-12


def test_gfq_lower_bounds_hold():
    for q in (2, 3, 4, 5):
        for r in (1, 2, 3, 6):
            lb = gfq_survival_lower_bound(q, r)
            assert gfq_dense_survival(q, r, 40) >= lb - 1e-12


def test_gfq_validation():
    with pytest.raises(InvalidParam):
        gfq_dense_survival(6, 1)  # not a prime power
    with pytest.raises(InvalidParam):
        gfq_dense_survival(2, -1)
    with pytest.raises(InvalidParam):
        gfq_dense_survival(2, 5, 4)


def test_gfq_against_simulation():
    # small. the full-precision version is in the acceptance suite
    n, trials = 20, 4000
    dist = WeightDist.fixed(1)  # placeholder; dense rows sampled directly
    from gf2rank.gf2 import RankState
    from gf2rank.sampling import make_rng
    hits = {r: 0 for r in (1, 2, 3)}
    for t in range(trials):
        rng = make_rng(derive_stream_seed(99, t))
        state = RankState(n)
        m = 0
        while True:
            m += 1
            if state.absorb(int(rng.integers(1, (1 << n) - 1, endpoint=True))):
                break
        for r in hits:
            hits[r] += m > n + 1 - r
    for r, c in hits.items():
        assert abs(c / trials - gfq_dense_survival(2, r, n)) <= 0.03
