"""Brute-force oracles: skew-form ranks, Jacobians, invariance under the action."""

import logging
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orbitdiag.core import (
    LinearForm,
    Pair,
    QuotientAlgebra,
    counter_rand,
    random_form,
    validate_pattern_ideal,
)
from orbitdiag.diagram import build_diagram, max_orbit_dim
from orbitdiag.invariants import build_invariants
from orbitdiag.oracle import (
    SkewMatrix,
    exact_rank,
    generic_jacobian_rank,
    index_oracle,
    invariance_oracle,
    jacobian_rank,
    skew_form_matrix,
)
from orbitdiag.polyring import Polynomial

UT3 = validate_pattern_ideal(3, [])
UT4 = validate_pattern_ideal(4, [])
EXAMPLE7 = validate_pattern_ideal(7, [(5, 1), (6, 1), (7, 1), (7, 2)])


def y(row, col):
    return Polynomial.variable(Pair(row, col))


def form(ideal, values):
    algebra = QuotientAlgebra.from_ideal(ideal)
    return LinearForm.from_dict(
        algebra, {Pair(*k): Fraction(v) for k, v in values.items()}
    )


# --- the pairing table --------------------------------------------------------


def test_skew_matrix_on_the_heisenberg_algebra():
    f = form(UT3, {(3, 1): 1})
    m = skew_form_matrix(f, UT3)
    assert m.dim == 3
    # basis order (3,1), (2,1), (3,2); only [y21, y32] = -y31 pairs nontrivially
    assert m.entries == (
        (Fraction(0), Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(0), Fraction(-1)),
        (Fraction(0), Fraction(1), Fraction(0)),
    )
    assert exact_rank(m) == 2


def test_skew_matrix_is_skew():
    f = random_form(QuotientAlgebra.from_ideal(EXAMPLE7), 50, 9)
    m = skew_form_matrix(f, EXAMPLE7)
    for a in range(m.dim):
        for b in range(m.dim):
            assert m.entries[a][b] == -m.entries[b][a]


# --- exact rank ------------------------------------------------------------------


def test_rank_basics():
    assert exact_rank([[0, 1], [-1, 0]]) == 2
    assert exact_rank([[0, 0], [0, 0]]) == 0
    assert exact_rank([]) == 0
    assert exact_rank([[1, 2, 3], [2, 4, 6]]) == 1
    assert exact_rank([[1, 2], [3, 4], [5, 6]]) == 2


def test_rank_clears_denominators():
    rows = [
        [Fraction(1, 2), Fraction(1, 3)],
        [Fraction(2, 3), Fraction(4, 9)],
    ]
    assert exact_rank(rows) == 1
    assert exact_rank([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 5), Fraction(1, 7)]]) == 2


def naive_rank(rows):
    rows = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    for col in range(len(rows[0]) if rows else 0):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            factor = rows[r][col] / lead
            rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


@st.composite
def int_matrices(draw):
    height = draw(st.integers(1, 5))
    width = draw(st.integers(1, 5))
    return [
        [draw(st.integers(-9, 9)) for _ in range(width)] for _ in range(height)
    ]


@given(int_matrices())
def test_rank_matches_plain_elimination(rows):
    assert exact_rank(rows) == naive_rank(rows)


def test_skew_rank_is_even():
    for ideal, seed in [(UT3, 0), (UT4, 1), (EXAMPLE7, 2)]:
        algebra = QuotientAlgebra.from_ideal(ideal)
        for trial in range(5):
            f = random_form(algebra, 20, counter_rand(seed, trial))
            assert exact_rank(skew_form_matrix(f, ideal)) % 2 == 0


# --- the index oracle ---------------------------------------------------------------


def test_index_oracle_frozen_values():
    assert index_oracle(EXAMPLE7, 5, 1000, 42) == (5, 12)
    assert index_oracle(UT3, 3, 100, 0) == (1, 2)
    full = validate_pattern_ideal(3, [(2, 1), (3, 1), (3, 2)])
    assert index_oracle(full, 1, 10, 0) == (0, 0)


def test_index_oracle_is_deterministic():
    assert index_oracle(UT4, 4, 50, 17) == index_oracle(UT4, 4, 50, 17)


def test_index_oracle_rejects_zero_trials():
    with pytest.raises(ValueError):
        index_oracle(UT3, 0, 10, 0)


def test_sampled_rank_never_exceeds_the_diagram_bound():
    for ideal in [UT4, EXAMPLE7, validate_pattern_ideal(5, [(5, 1), (4, 1)])]:
        top = max_orbit_dim(build_diagram(ideal))
        algebra = QuotientAlgebra.from_ideal(ideal)
        for trial in range(8):
            f = random_form(algebra, 30, counter_rand(5, trial))
            assert exact_rank(skew_form_matrix(f, ideal)) <= top


# --- Jacobians ---------------------------------------------------------------------


def test_jacobian_rank_by_hand():
    zs = build_invariants(build_diagram(UT4))
    f = form(UT4, {(2, 1): 7, (3, 1): 2, (3, 2): 5, (4, 1): 1, (4, 2): 3, (4, 3): 11})
    assert jacobian_rank(zs, f) == 2


def test_jacobian_rank_of_a_single_linear_invariant():
    f = form(UT3, {(2, 1): 0, (3, 1): 0, (3, 2): 0})
    assert jacobian_rank([y(3, 1)], f) == 1
    assert jacobian_rank([], f) == 0


def test_generic_jacobian_matches_the_index():
    zs = build_invariants(build_diagram(EXAMPLE7))
    assert generic_jacobian_rank(zs, EXAMPLE7, 7) == 5


def test_generic_jacobian_logs_nothing_on_success(caplog):
    zs = build_invariants(build_diagram(UT4))
    with caplog.at_level(logging.WARNING, logger="orbitdiag.oracle"):
        assert generic_jacobian_rank(zs, UT4, 0) == 2
    assert not caplog.records


def test_generic_jacobian_retries_and_logs_on_dependence(caplog):
    dependent = [y(2, 1), y(2, 1) * y(2, 1)]
    with caplog.at_level(logging.WARNING, logger="orbitdiag.oracle"):
        assert generic_jacobian_rank(dependent, UT3, 0, bound=10, retries=2) == 1
    assert len(caplog.records) == 3
    assert all("resampling" in record.getMessage() for record in caplog.records)


# --- invariance ----------------------------------------------------------------------


def test_invariance_of_constructed_invariants():
    zs4 = build_invariants(build_diagram(UT4))
    assert invariance_oracle(zs4, UT4, 20, 3)
    zs7 = build_invariants(build_diagram(EXAMPLE7))
    assert invariance_oracle(zs7, EXAMPLE7, 20, 11)


def test_invariance_rejects_a_moving_coordinate():
    assert not invariance_oracle([y(2, 1)], UT3, 20, 0)


def test_invariance_of_nothing_is_vacuous():
    assert invariance_oracle([], UT3, 5, 0)
