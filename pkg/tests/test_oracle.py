from fractions import Fraction

import pytest

from pqschurer.oracle import (
    ORACLE_MAX_DEGREE,
    as_rational,
    oracle_evaluate,
    oracle_evaluate_unnormalized,
    oracle_moment_identity_check,
    oracle_moments_closed_form,
    oracle_pq_integer,
)

F = Fraction


def test_pq_integer_examples():
    assert oracle_pq_integer(3, 1, F(1, 2)) == F(7, 4)
    assert oracle_pq_integer(0, F(9, 10), F(4, 5)) == 0
    assert oracle_pq_integer(4, F(1, 2), F(1, 4)) == F(15, 64)
    assert F(1, 8) + F(1, 16) + F(1, 32) + F(1, 64) == F(15, 64)


def test_params_validated():
    with pytest.raises(ValueError):
        oracle_pq_integer(3, F(1, 2), F(1, 2))
    with pytest.raises(TypeError):
        as_rational(0.5)
    assert as_rational("9/10") == F(9, 10)


def test_evaluate_e0_is_one():
    for m, ell in [(1, 0), (2, 3), (5, 1)]:
        for x in (F(0), F(1, 3), F(1)):
            assert oracle_evaluate(m, ell, F(9, 10), F(4, 5), [1], x) == 1


def test_evaluate_e1_example():
    p, q = F(9, 10), F(4, 5)
    expected = oracle_pq_integer(3, p, q) / oracle_pq_integer(2, p, q) * F(1, 2)
    assert oracle_evaluate(2, 1, p, q, [0, 1], F(1, 2)) == expected
    assert expected == F(217, 170) * F(1, 2)


def test_evaluate_e2_example():
    assert oracle_evaluate(1, 0, 1, F(1, 2), [0, 0, 1], F(1, 2)) == F(1, 2)


def test_ceiling_and_domain():
    with pytest.raises(ValueError):
        oracle_evaluate(ORACLE_MAX_DEGREE, 1, 1, F(1, 2), [1], F(1, 2))
    with pytest.raises(ValueError):
        oracle_evaluate(2, 0, 1, F(1, 2), [1], F(3, 2))


@pytest.mark.parametrize("m,ell,p,q", [
    (1, 0, F(9, 10), F(4, 5)),
    (3, 2, F(9, 10), F(4, 5)),
    (5, 1, 1, F(1, 2)),
    (4, 4, F(99, 100), F(49, 50)),
])
def test_identity_check_all_hold(m, ell, p, q):
    results = oracle_moment_identity_check(m, ell, p, q)
    assert results and all(results.values()), results


def test_p_equal_one_matches_q_schurer_moments():
    # q-Schurer moments written independently: e1 = [n]_q x/[m]_q,
    # e2 = [n]_q x/[m]_q^2 + q [n]_q [n-1]_q x^2/[m]_q^2
    m, ell, q = 5, 1, F(1, 2)
    qi = lambda j: sum(q**i for i in range(j))  # noqa: E731
    for x in (F(1, 4), F(2, 3)):
        assert oracle_evaluate(m, ell, 1, q, [0, 1], x) == qi(6) * x / qi(5)
        e2 = qi(6) * x / qi(5) ** 2 + q * qi(6) * qi(5) * x**2 / qi(5) ** 2
        assert oracle_evaluate(m, ell, 1, q, [0, 0, 1], x) == e2


def test_delta_squared_is_not_bias_plus_central2():
    """The closed-form radius squared is the second central moment itself;
    it differs from central1^2 + central2 whenever the bias term is nonzero."""
    cf = oracle_moments_closed_form(2, 1, F(9, 10), F(4, 5), F(1, 2))
    assert cf["delta_squared"] == cf["central2"]
    assert cf["delta_squared"] != cf["central1"] ** 2 + cf["central2"]


def test_unnormalized_defect():
    value = oracle_evaluate_unnormalized(3, 0, F(1, 2), F(1, 4), [1], F(1, 2))
    assert value != 1
    # p = 1 gives the q-operator, which reproduces constants
    assert oracle_evaluate_unnormalized(3, 2, 1, F(1, 4), [1], F(1, 2)) == 1
    # at x = 1 only the top term survives and its coefficient is 1
    assert oracle_evaluate_unnormalized(2, 1, F(9, 10), F(4, 5), [1], 1) == 1


def test_unnormalized_variant_rules():
    with pytest.raises(ValueError):
        oracle_evaluate_unnormalized(3, 1, F(1, 2), F(1, 4), [1], F(1, 2), "bernstein_eq4")
    with pytest.raises(ValueError):
        oracle_evaluate_unnormalized(3, 0, F(1, 2), F(1, 4), [1], F(1, 2), "nope")
