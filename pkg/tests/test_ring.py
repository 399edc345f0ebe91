import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthoplex.arithmetic import J_CHANGE_OF_VARIABLES
from orthoplex.config import G_SIGMA_F, Q_F
from orthoplex.groups import APOLLONIAN, DUAL_APOLLONIAN, PLATONIC
from orthoplex.inversive import Q_SIGMA, Q_WILKER
from orthoplex.ring import (
    Mat, QSqrt2, SQRT2, SingularMatrixError, format_qsqrt2, mat_det,
    mat_inverse, mat_mul, parse_qsqrt2, qadd, qinv, qmul, qneg,
)

from conftest import random_qsqrt2


def test_difference_of_squares():
    one_plus = QSqrt2(1, 1)
    one_minus = QSqrt2(1, -1)
    assert qmul(one_plus, one_minus) == QSqrt2(-1)


def test_inverse_of_sqrt2():
    assert qinv(SQRT2) == QSqrt2(0, Fraction(1, 2))


def test_half_plus_half():
    h = QSqrt2(Fraction(1, 2))
    assert qadd(h, h) == QSqrt2(1)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        qinv(QSqrt2(0))


def test_field_axioms_bulk():
    # 10^4 random triples: associativity, distributivity, inverse round-trip
    r = random.Random(20240811)
    for _ in range(10_000):
        a, b, c = (random_qsqrt2(r) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a
        if a:
            assert a * a.inverse() == QSqrt2(1)
            assert a.inverse().inverse() == a


@st.composite
def qsqrt2s(draw):
    f = st.fractions(min_value=-50, max_value=50, max_denominator=12)
    return QSqrt2(draw(f), draw(f))


@given(qsqrt2s(), qsqrt2s(), qsqrt2s())
@settings(max_examples=500)
def test_distributivity_property(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(qsqrt2s())
@settings(max_examples=500)
def test_negation_involutive(a):
    assert qneg(qneg(a)) == a


def test_ordering_matches_embedding():
    assert SQRT2 > QSqrt2(Fraction(14142, 10000))
    assert SQRT2 < QSqrt2(Fraction(14143, 10000))
    assert QSqrt2(1, -1) < QSqrt2(0)  # 1 - sqrt2 < 0
    assert QSqrt2(-1, 1) > QSqrt2(0)  # sqrt2 - 1 > 0
    assert abs(QSqrt2(1, -1)) == QSqrt2(-1, 1)


def test_wilker_is_twice_inverse_sigma():
    half = QSqrt2(Fraction(1, 2))
    assert mat_mul(Q_SIGMA, Q_WILKER.scale(half)) == Mat.identity(5)
    assert Q_WILKER == Q_SIGMA.inverse().scale(QSqrt2(2))


def test_qf_is_twice_inverse_gramian():
    assert G_SIGMA_F.inverse().scale(QSqrt2(2)) == Q_F


def test_identity_det():
    assert mat_det(Mat.identity(5)) == QSqrt2(1)


def test_inverse_round_trip_on_core_matrices():
    mats = [Q_SIGMA, Q_F, G_SIGMA_F, J_CHANGE_OF_VARIABLES]
    for table in (PLATONIC, APOLLONIAN, DUAL_APOLLONIAN):
        mats.extend(Mat.from_rows(m) for m in table.values())
    for m in mats:
        assert mat_mul(m, mat_inverse(m)) == Mat.identity(5)
        assert mat_mul(mat_inverse(m), m) == Mat.identity(5)


def test_j_inverse_round_trip():
    j = J_CHANGE_OF_VARIABLES
    assert mat_mul(mat_inverse(j), j) == Mat.identity(5)


def test_singular_matrix_error_carries_matrix():
    m = Mat.from_rows([[1, 1], [1, 1]])
    with pytest.raises(SingularMatrixError) as exc:
        m.inverse()
    assert exc.value.matrix is m
    assert mat_det(m) == QSqrt2(0)


def test_shape_errors():
    a = Mat.from_rows([[1, 2, 3]])
    with pytest.raises(ValueError):
        mat_mul(a, a)
    with pytest.raises(ValueError):
        a.det()


def test_serialization_forms():
    cases = {
        QSqrt2(0): "0",
        QSqrt2(1): "1",
        QSqrt2(Fraction(1, 2)): "1/2",
        QSqrt2(0, 1): "1*sqrt2",
        QSqrt2(0, -2): "-2*sqrt2",
        QSqrt2(1, Fraction(-1, 2)): "1-1/2*sqrt2",
        QSqrt2(Fraction(-3, 4), 2): "-3/4+2*sqrt2",
    }
    for value, text in cases.items():
        assert format_qsqrt2(value) == text
        assert parse_qsqrt2(text) == value
    assert parse_qsqrt2("sqrt2") == SQRT2
    assert parse_qsqrt2("-sqrt2") == -SQRT2
    assert parse_qsqrt2(" 2 + 3/2*sqrt2 ") == QSqrt2(2, Fraction(3, 2))


def test_serialization_round_trip_random():
    r = random.Random(77)
    for _ in range(500):
        x = random_qsqrt2(r)
        assert parse_qsqrt2(format_qsqrt2(x)) == x


def test_parse_rejects_garbage():
    for bad in ("", "sqrt3", "1+", "1 1", "--2", "2**sqrt2"):
        with pytest.raises(ValueError):
            parse_qsqrt2(bad)
