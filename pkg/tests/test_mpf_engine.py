import logging
from fractions import Fraction

import numpy as np
import pytest

from src.models.sequence import ExpectationRecord, ExponentSequence, WeightVector, format_fraction
from src.services.hamiltonians import build_ising, magnetization, product_state
from src.services.mpf_engine import (
    amplified_error_bound,
    combine_expectations,
    condition_number,
    constraint_residuals,
    default_threshold,
    expectation_records,
    mpf_expectation,
    mpf_operator,
    scale_sequence,
    search_sequences,
    solve_weights,
)
from src.services.noise_lab import inject_perturbation
from src.services.operator_core import spectral_distance
from src.services.propagators import Propagator, empirical_order, exact_unitary, pf_steps
from src.utils.errors import CapacityError, InvalidInputError

F = Fraction

PUBLISHED_WEIGHTS = [
    ((1, 2), [F(-1), F(2)], F(3)),
    ((1, 3), [F(-1, 2), F(3, 2)], F(2)),
    ((2, 4), [F(-1), F(2)], F(3)),
    ((2, 5), [F(-2, 3), F(5, 3)], F(7, 3)),
    ((1, 2, 6), [F(1, 5), F(-1), F(9, 5)], F(3)),
    ((1, 2, 7), [F(1, 6), F(-4, 5), F(49, 30)], F(13, 5)),
    ((6, 7), [F(-6), F(7)], F(13)),
    ((3, 4, 5, 6, 7), [F(27, 8), F(-128, 3), F(625, 4), F(-216), F(2401, 24)], F(1555, 3)),
    (
        (1, 2, 3, 4, 5, 6, 7),
        [F(1, 720), F(-8, 15), F(243, 16), F(-1024, 9), F(15625, 48), F(-1944, 5), F(117649, 720)],
        None,
    ),
]

WELL_CONDITIONED = [(1, 2), (1, 3), (2, 4), (2, 5), (1, 2, 6), (1, 2, 7)]


def _richardson(ks, power=1):
    """a_j = prod_{i != j} k_j^p / (k_j^p - k_i^p)"""
    weights = []
    for j, kj in enumerate(ks):
        a = F(1)
        for i, ki in enumerate(ks):
            if i != j:
                a *= F(kj ** power, kj ** power - ki ** power)
        weights.append(a)
    return weights


@pytest.mark.parametrize("k,weights,norm1", PUBLISHED_WEIGHTS)
def test_published_s1_weights(k, weights, norm1):
    w = solve_weights(ExponentSequence(k))
    assert list(w.weights) == weights
    if norm1 is not None:
        assert w.norm1_exact == norm1
    assert all(r == 0 for r in constraint_residuals(w.sequence, w.weights))


def test_seven_point_norm():
    w = solve_weights(ExponentSequence(tuple(range(1, 8))))
    assert w.norm1 == pytest.approx(1007.2222, abs=1e-3)
    assert condition_number(w) == w.norm1


@pytest.mark.parametrize("k", [(1, 4), (2, 3, 9), (1, 3, 5, 8), (2, 4, 6, 10, 11)])
def test_solver_matches_closed_form(k):
    assert list(solve_weights(ExponentSequence(k, 1)).weights) == _richardson(k, 1)
    assert list(solve_weights(ExponentSequence(k, 2)).weights) == _richardson(k, 2)


def test_higher_order_and_asymmetric_bases_satisfy_constraints():
    for seq in [ExponentSequence((1, 2, 3), 4), ExponentSequence((1, 2, 5), 2, symmetric=False)]:
        w = solve_weights(seq)
        assert all(r == 0 for r in constraint_residuals(seq, w.weights))
        assert sum(w.weights) == 1
    assert ExponentSequence((1, 2, 3), 4).error_exponents() == [4, 6]
    assert ExponentSequence((1, 2, 3), 2, symmetric=False).error_exponents() == [2, 3]


def test_single_point_sequence_is_the_product_formula():
    w = solve_weights(ExponentSequence((5,)))
    assert w.weights == (F(1),)


@pytest.mark.parametrize("base_chi", [1, 2])
def test_consecutive_exponents_grow_ill_conditioned(base_chi):
    norms = [solve_weights(ExponentSequence(tuple(range(1, l + 1)), base_chi)).norm1 for l in range(2, 8)]
    assert all(b > a for a, b in zip(norms, norms[1:]))
    if base_chi == 1:
        assert norms[-1] > 100
    else:
        assert norms[1] > default_threshold(2)


def test_weight_vector_document():
    document = solve_weights(ExponentSequence((1, 2, 7))).to_dict()
    assert document["weights"] == ["1/6", "-4/5", "49/30"]
    assert document["norm1"] == "13/5"
    assert document["norm1_float"] == pytest.approx(2.6)
    assert format_fraction(F(4, 2)) == "2"


def test_sequence_validation():
    with pytest.raises(InvalidInputError):
        ExponentSequence((2, 2))
    with pytest.raises(InvalidInputError):
        ExponentSequence((0, 1))
    with pytest.raises(InvalidInputError):
        ExponentSequence(())
    with pytest.raises(InvalidInputError):
        ExponentSequence((1, 2), 3)
    with pytest.raises(InvalidInputError):
        ExponentSequence((1, 2), 1, symmetric=True)
    with pytest.raises(InvalidInputError):
        WeightVector(ExponentSequence((1, 2)), (F(1),))


def test_search_ranks_by_norm():
    result = search_sequences(2, 1, None, (1, 5), threshold=3)
    assert result.evaluated == 10
    assert result.accepted == 6
    assert [c.sequence.k for c in result.candidates] == [(1, 5), (1, 4), (1, 3), (2, 5), (1, 2), (2, 4)]
    assert [c.rank for c in result.candidates] == [1, 2, 3, 4, 5, 6]
    assert result.best.weights.norm1_exact == F(3, 2)


def test_search_ranks_by_depth():
    result = search_sequences(2, 1, None, (1, 5), threshold=3, objective="min-depth")
    assert [c.sequence.k for c in result.candidates] == [(1, 2), (1, 3), (1, 4), (2, 4), (1, 5), (2, 5)]


def test_search_is_independent_of_worker_count():
    serial = search_sequences(3, 1, None, (1, 8), threshold=3, workers=1)
    parallel = search_sequences(3, 1, None, (1, 8), threshold=3, workers=4)
    assert [c.sequence.k for c in serial.candidates] == [c.sequence.k for c in parallel.candidates]


def test_search_limit_and_default_threshold():
    result = search_sequences(2, 1, None, (1, 5), threshold=None, limit=2)
    assert len(result.candidates) == 2
    assert result.accepted == 6


def test_search_reports_empty_range(caplog):
    caplog.set_level(logging.WARNING)
    result = search_sequences(2, 1, None, (6, 7), threshold=3)
    assert result.empty
    assert result.best is None
    assert "[6, 7]" in result.diagnostic
    assert "Sequence search empty" in caplog.text


def test_search_rejects_bad_requests():
    with pytest.raises(InvalidInputError):
        search_sequences(3, 1, None, (1, 2))
    with pytest.raises(InvalidInputError):
        search_sequences(2, 1, None, (1, 5), objective="fastest")
    with pytest.raises(CapacityError):
        search_sequences(10, 1, None, (1, 40))


def test_combine_and_bounds():
    w = solve_weights(ExponentSequence((1, 2)))
    records = [ExpectationRecord(2, 0.5), ExpectationRecord(1, 0.4)]
    assert combine_expectations(w, records) == pytest.approx(-0.4 + 1.0)
    assert amplified_error_bound(w, 1e-3) == pytest.approx(3e-3)
    with pytest.raises(InvalidInputError):
        combine_expectations(w, records[:1])
    with pytest.raises(InvalidInputError):
        combine_expectations(w, [ExpectationRecord(1, 0.4), ExpectationRecord(1, 0.4)])
    with pytest.raises(InvalidInputError):
        combine_expectations(w, [ExpectationRecord(1, 0.4), ExpectationRecord(3, 0.4)])
    with pytest.raises(InvalidInputError):
        amplified_error_bound(w, -1.0)


def test_sign_aligned_injection_reaches_the_bound(rng):
    w = solve_weights(ExponentSequence((3, 4, 5, 6, 7)))
    values = list(rng.uniform(-1, 1, size=5))
    clean = combine_expectations(w, [ExpectationRecord(k, v) for k, v in zip(w.sequence.k, values)])
    aligned = combine_expectations(w, [
        ExpectationRecord(k, inject_perturbation(v, float(a), 1e-3), epsilon_prime=1e-3)
        for a, k, v in zip(w.weights, w.sequence.k, values)
    ])
    assert abs(aligned - clean) == pytest.approx(amplified_error_bound(w, 1e-3), rel=1e-9)

    signs = rng.choice([-1.0, 1.0], size=5)
    random = combine_expectations(w, [
        ExpectationRecord(k, v + s * 1e-3) for k, v, s in zip(w.sequence.k, values, signs)
    ])
    assert abs(random - clean) <= amplified_error_bound(w, 1e-3) * (1 + 1e-9)


def test_scale_sequence():
    assert scale_sequence(ExponentSequence((1, 2)), 2.5).k == (3, 5)
    assert scale_sequence(ExponentSequence((1, 2, 7)), 1.0).k == (1, 2, 7)
    with pytest.raises(InvalidInputError):
        scale_sequence(ExponentSequence((1, 2)), 0.1)
    with pytest.raises(InvalidInputError):
        scale_sequence(ExponentSequence((1, 2)), 0.0)


def _pf_errors(setup, ks):
    propagator, psi, observable, exact = setup
    return {k: abs(propagator.pf_expectation(0.5, k, 1, psi, observable) - exact) for k in ks}


def _mpf_error(setup, k, eps=0.0):
    propagator, psi, observable, exact = setup
    w = solve_weights(ExponentSequence(k))
    records = [
        ExpectationRecord(r.k, inject_perturbation(r.value, float(a), eps), epsilon_prime=eps)
        for a, r in zip(w.weights, expectation_records(propagator, 0.5, w.sequence, psi, observable))
    ]
    return abs(combine_expectations(w, records) - exact)


def test_magnetization_study_first_order_decay(ising5_setup):
    errors = _pf_errors(ising5_setup, range(1, 11))
    exact = ising5_setup[3]
    relative = [errors[k] / abs(exact) for k in range(1, 11)]
    assert empirical_order(list(range(1, 11)), relative) == pytest.approx(-1.0, abs=0.15)


def test_well_conditioned_mpfs_beat_deepest_product_formula(ising5_setup):
    pf_10 = _pf_errors(ising5_setup, [10])[10]
    for k in WELL_CONDITIONED:
        assert _mpf_error(ising5_setup, k) < pf_10


def test_perturbed_mpfs_follow_their_conditioning(ising5_setup):
    pf = _pf_errors(ising5_setup, [2, 4, 6, 7, 8])
    # [2, 4] stays below the product formula with twice its depth
    assert _mpf_error(ising5_setup, (2, 4), 1e-3) < pf[8]
    assert _mpf_error(ising5_setup, (2, 4)) < pf[4]
    # the ill-conditioned pair is worse than either member
    ill = _mpf_error(ising5_setup, (6, 7), 1e-3)
    assert ill > pf[7]
    assert ill > pf[6]


def test_all_zeros_state_cancels_first_order_error(ising5):
    propagator = Propagator(ising5)
    psi = product_state(5, 0.0)
    observable = magnetization(5, 0)
    exact = propagator.exact_expectation(0.5, psi, observable)
    ks = list(range(1, 11))
    errors = [abs(propagator.pf_expectation(0.5, k, 1, psi, observable) - exact) for k in ks]
    assert empirical_order(ks, errors) == pytest.approx(-2.0, abs=0.15)


def test_mpf_operator_boosts_order(ising2):
    ms = [2, 4, 8, 16]
    exact = exact_unitary(ising2, 1.0).matrix
    pf_errors = [spectral_distance(pf_steps(ising2, 1.0, m, 1).matrix, exact) for m in ms]
    mpf_errors = [
        spectral_distance(mpf_operator(ising2, 1.0, solve_weights(ExponentSequence((m, 2 * m)))).matrix, exact)
        for m in ms
    ]
    assert empirical_order(ms, pf_errors) == pytest.approx(-1.0, abs=0.15)
    assert empirical_order(ms, mpf_errors) <= empirical_order(ms, pf_errors) - 1.0


def test_expectation_combination_matches_operator_order(ising2):
    ms = [2, 4, 8, 16]
    psi = product_state(2, 1.8)
    observable = magnetization(2, 0)
    exact_value = Propagator(ising2).exact_expectation(1.0, psi, observable)
    exact = exact_unitary(ising2, 1.0).matrix
    expectation_errors, operator_errors = [], []
    for m in ms:
        w = solve_weights(ExponentSequence((m, 2 * m)))
        expectation_errors.append(abs(mpf_expectation(ising2, 1.0, w, psi, observable) - exact_value))
        operator_errors.append(spectral_distance(mpf_operator(ising2, 1.0, w).matrix, exact))
    expectation_slope = empirical_order(ms, expectation_errors)
    operator_slope = empirical_order(ms, operator_errors)
    assert expectation_slope == pytest.approx(operator_slope, abs=0.3)
    assert expectation_slope < -1.7


def test_commuting_chain_needs_no_extrapolation():
    H = build_ising(3, 0.0, 1.0)
    psi = product_state(3, 0.7)
    observable = magnetization(3, 0)
    w = solve_weights(ExponentSequence((1, 2, 7)))
    exact = Propagator(H).exact_expectation(0.8, psi, observable)
    assert mpf_expectation(H, 0.8, w, psi, observable) == pytest.approx(exact, abs=1e-12)
    assert np.isclose(sum(w.floats), 1.0)
