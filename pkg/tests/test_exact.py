import math

import numpy as np
import pytest

from mebkit.exact import (
    DEFAULT_TOL,
    ExponentMatrix,
    RootExponent,
    Tolerance,
    complex_matrix,
    complex_vector,
    is_unitary,
    is_zeilinger,
    root_value,
    to_complex,
)
from mebkit.chargroup import Decomposition, dft_generator, zeilinger_generator


def test_root_value_quarter_turns_exact():
    assert root_value(4, 1) == 1j
    assert root_value(2, 1) == -1
    assert root_value(6, 6) == 1
    assert root_value(4, 3) == -1j
    assert root_value(8, 2) == 1j


def test_root_value_reduces_exponent():
    assert root_value(3, 5) == root_value(3, 2)
    assert root_value(5, -1) == root_value(5, 4)


def test_root_value_rejects_zero_order():
    with pytest.raises(ValueError):
        root_value(0, 1)


def test_root_value_multiplicativity():
    # omega^a * omega^b == omega^(a+b) for every order up to 64
    for order in range(1, 65):
        for a in range(order):
            for b in range(order):
                lhs = root_value(order, a) * root_value(order, b)
                rhs = root_value(order, a + b)
                assert abs(lhs - rhs) < 1e-12


def test_root_exponent_algebra():
    x = RootExponent(6, 2)
    y = RootExponent(6, 5)
    assert (x * y).exponent == 1
    assert x.inverse().exponent == 4
    assert RootExponent(6, 0).inverse().exponent == 0
    assert abs(x.value - root_value(6, 2)) == 0
    assert RootExponent(7, 9).exponent == 2


def test_root_exponent_rejects_mixed_orders():
    with pytest.raises(ValueError):
        RootExponent(4, 1) * RootExponent(6, 1)


def test_root_exponent_rejects_bad_order():
    with pytest.raises(ValueError):
        RootExponent(0, 0)


def test_tolerance_bounds():
    assert Tolerance().eps == 1e-9
    assert Tolerance(9e-4).eps == 9e-4
    for bad in (0.0, -1e-9, 1e-3, 1.0):
        with pytest.raises(ValueError):
            Tolerance(bad)


def test_exponent_matrix_reduces_and_validates():
    m = ExponentMatrix.from_rows([[0, 5], [2, 7]])
    assert m.d == 2
    assert m.entries == ((0, 1), (0, 1))
    with pytest.raises(ValueError):
        ExponentMatrix(2, ((0, 0, 0), (0, 0)))
    with pytest.raises(ValueError):
        ExponentMatrix(0, ())


def test_to_complex_dft2_is_exact():
    got = to_complex(dft_generator(2))
    s = 1.0 / math.sqrt(2.0)
    expected = np.array([[s, s], [s, -s]])
    assert np.array_equal(got, expected)


def test_to_complex_degenerate_dimension():
    assert np.array_equal(to_complex(ExponentMatrix.from_rows([[0]])), np.array([[1.0 + 0j]]))


def test_to_complex_d3_matches_direct_evaluation():
    grid = [[0, 0, 0], [0, 1, 2], [0, 2, 1]]
    got = to_complex(ExponentMatrix.from_rows(grid))
    expected = np.exp(2j * np.pi * np.array(grid) / 3) / np.sqrt(3)
    assert np.max(np.abs(got - expected)) < 1e-15
    assert np.max(np.abs(np.abs(got) - 1 / np.sqrt(3))) < 1e-15


def test_to_complex_separates_distinct_grids():
    # single-entry differences stay well above 1e-6 up to d = 32
    for d in (2, 7, 32):
        base = dft_generator(d)
        bumped = [list(r) for r in base.entries]
        bumped[d // 2][d - 1] = (bumped[d // 2][d - 1] + 1) % d
        gap = np.max(np.abs(to_complex(base) - to_complex(ExponentMatrix.from_rows(bumped))))
        assert gap > 1e-6
    rng = np.random.default_rng(11)
    for _ in range(25):
        d = int(rng.integers(2, 13))
        a = rng.integers(0, d, size=(d, d))
        b = a.copy()
        i, j = rng.integers(0, d, size=2)
        b[i, j] = (b[i, j] + int(rng.integers(1, d))) % d
        gap = np.max(
            np.abs(to_complex(ExponentMatrix.from_rows(a.tolist())) - to_complex(ExponentMatrix.from_rows(b.tolist())))
        )
        assert gap > 1e-6


def test_is_unitary():
    assert is_unitary(np.eye(3))
    assert is_unitary(to_complex(dft_generator(2)))
    assert not is_unitary(np.ones((2, 2)))
    with pytest.raises(ValueError):
        is_unitary(np.ones((2, 3)))


def test_is_zeilinger():
    assert is_zeilinger(to_complex(zeilinger_generator(Decomposition((2, 2)))))
    assert is_zeilinger(to_complex(dft_generator(5)))
    assert not is_zeilinger(np.eye(2))
    with pytest.raises(ValueError):
        is_zeilinger(np.ones((2, 3)))


def test_complex_containers_reject_nonfinite():
    assert complex_matrix([[1, 2], [3, 4]]).dtype == complex
    with pytest.raises(ValueError):
        complex_matrix([[np.nan, 0], [0, 0]])
    with pytest.raises(ValueError):
        complex_matrix([1, 2, 3])
    assert complex_vector([1j, 2]).shape == (2,)
    with pytest.raises(ValueError):
        complex_vector([np.inf, 0])
