import io
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from golden import TABLE_1, kernel_entry
from gpiq.errors import DomainError
from gpiq.exact import HalfInt, PiMonomial, gamma_exact
from gpiq.realprob import (
    asymptotic_log,
    build_kernel,
    det_bareiss,
    leading_minors,
    prefactor,
    prob_all_real,
    probability_table,
    ratio_statistic,
    write_table_csv,
)


def cofactor_det(m):
    """Laplace expansion along the first row; independent of elimination."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(m[0][0])
    total = Fraction(0)
    for c in range(n):
        if m[0][c] == 0:
            continue
        minor = [row[:c] + row[c + 1 :] for row in m[1:]]
        total += (-1) ** c * Fraction(m[0][c]) * cofactor_det(minor)
    return total


def random_rational_matrix(rng, n, zero_rate=0.0):
    return [
        [
            Fraction(0) if rng.random() < zero_rate
            else Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            for _ in range(n)
        ]
        for _ in range(n)
    ]


# -- prefactor and kernel ---------------------------------------------------


def test_prefactor_examples():
    assert prefactor(1) == PiMonomial(1, -2)
    assert prefactor(2) == PiMonomial(1, -2)
    oracle = PiMonomial(1)
    for x in ("1/2", 1, "3/2", 2):
        oracle = oracle / gamma_exact(HalfInt.of(x)) ** 2
    assert prefactor(4) == oracle == PiMonomial(4, -4)


@pytest.mark.parametrize("n", range(1, 30))
def test_prefactor_exponent(n):
    assert prefactor(n).half_pi_exponent == -2 * math.ceil(n / 2)


def test_build_kernel_n2():
    k = build_kernel(2)
    assert k.dim == 1
    assert k.entries == ((PiMonomial(Fraction(1, 4), 4),),)


def test_build_kernel_n3():
    k = build_kernel(3)
    assert k.dim == 2
    assert [row[0] for row in k.entries] == [
        PiMonomial(kernel_entry(1, 1), 4),
        PiMonomial(kernel_entry(2, 1), 4),
    ]
    assert [row[1] for row in k.entries] == [PiMonomial(1, 2), PiMonomial(Fraction(1, 4), 2)]
    assert k.column_pi_exponents == (4, 2)


def test_build_kernel_n4():
    k = build_kernel(4)
    expected = [[PiMonomial(kernel_entry(j, c), 4) for c in (1, 2)] for j in (1, 2)]
    assert [list(row) for row in k.entries] == expected


def test_build_kernel_rejects_small_n():
    with pytest.raises(DomainError):
        build_kernel(1)


# -- determinants -------------------------------------------------------------


def test_det_examples():
    eye = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    assert det_bareiss(eye) == 1
    assert det_bareiss([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 5)]]) == Fraction(1, 60)


def test_det_needs_pivoting():
    assert det_bareiss([[0, 1], [1, 0]]) == -1
    assert det_bareiss([[0, 0, 1], [0, 2, 0], [3, 0, 0]]) == -6


def test_det_singular():
    assert det_bareiss([[1, 2], [2, 4]]) == 0
    assert det_bareiss([[0, 0], [0, 5]]) == 0


def test_det_random_6x6_against_cofactor():
    rng = random.Random(6)
    m = random_rational_matrix(rng, 6)
    assert det_bareiss(m) == cofactor_det(m)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6).flatmap(
    lambda n: st.lists(
        st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=n, max_size=n),
        min_size=n, max_size=n,
    )
))
def test_det_property_against_cofactor(m):
    assert det_bareiss(m) == cofactor_det(m)


def test_leading_minors_match_individual_dets():
    rng = random.Random(11)
    for _ in range(50):
        n = rng.randint(1, 6)
        m = random_rational_matrix(rng, n, zero_rate=0.3)
        expected = [cofactor_det([row[: k + 1] for row in m[: k + 1]]) for k in range(n)]
        assert leading_minors(m) == expected


# -- probabilities ---------------------------------------------------------------


@pytest.mark.parametrize("n", sorted(TABLE_1))
def test_table_1_exact(n):
    num, e, pi_power, printed, _ = TABLE_1[n]
    p = prob_all_real(n)
    assert p.value == PiMonomial(Fraction(num, 2**e), 2 * pi_power)


@pytest.mark.parametrize("n", [2, 5, 8])
def test_prob_examples_float(n):
    printed = float(TABLE_1[n][3])
    assert f"{prob_all_real(n).float_value:.5e}" == TABLE_1[n][3]
    assert prob_all_real(n).float_value == pytest.approx(printed, rel=1e-5)


def test_prob_n1_is_one():
    p = prob_all_real(1)
    assert p.value == PiMonomial(1) and p.float_value == 1.0


def test_prob_rejects_bad_n():
    with pytest.raises(DomainError):
        prob_all_real(0)


def test_pi_power_and_bounds_up_to_40():
    rows = probability_table(40)
    for row in rows:
        p = row.probability
        assert p.value.half_pi_exponent == 2 * (row.n // 2)
        assert 0 < p.decimal_value <= 1
    for a, b in zip(rows, rows[1:]):
        assert b.probability.decimal_value < a.probability.decimal_value


def test_table_matches_single_evaluation():
    for row in probability_table(16):
        assert row.probability.value == prob_all_real(row.n).value


def test_asymptotic_log():
    ln = math.log(math.pi / 4)
    assert asymptotic_log(2) == pytest.approx(2 * ln)
    assert asymptotic_log(2) == pytest.approx(-0.4831290, abs=1e-7)
    assert asymptotic_log(1) == 0.5 * ln
    assert asymptotic_log(100) == pytest.approx(5000 * ln)
    assert asymptotic_log(100) == pytest.approx(-1207.82238, abs=1e-5)


@pytest.mark.parametrize("n", range(2, 12))
def test_ratio_statistic_printed(n):
    assert f"{ratio_statistic(n):.5f}" == TABLE_1[n][4]


def test_ratio_approaches_one_from_above():
    ratios = [row.ratio for row in probability_table(30)[1:]]
    assert all(r > 1 for r in ratios)
    assert ratios[-1] < ratios[0]
    assert ratios[-1] - 1 < 1e-3


def test_table_csv_round_trip():
    rows = probability_table(11)
    buf = io.StringIO()
    write_table_csv(rows, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "N,exact,float,ratio"
    assert lines[1] == "1,1/1 * pi^0,1.00000e+00,"
    assert lines[2] == "2,1/4 * pi^1,7.85398e-01,1.01321"
    for line, row in zip(lines[1:], rows):
        n, exact, flt, ratio = line.split(",")
        assert PiMonomial.parse(exact) == row.probability.value
        assert flt == (TABLE_1[row.n][3] if row.n > 1 else "1.00000e+00")
        assert ratio == (TABLE_1[row.n][4] or "")


def test_table_float_column_below_double_range():
    row = probability_table(100)[-1]
    buf = io.StringIO()
    write_table_csv([row], buf, header=False)
    n, exact, flt, _ = buf.getvalue().strip().split(",")
    assert PiMonomial.parse(exact) == row.probability.value
    mantissa, exponent = flt.split("e")
    assert int(exponent) == math.floor(row.probability.log10)
    assert 1 <= float(mantissa) < 10
