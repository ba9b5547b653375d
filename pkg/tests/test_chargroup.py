import numpy as np
import pytest

from mebkit.chargroup import (
    Decomposition,
    char_exponent,
    character,
    decompositions,
    dft_generator,
    digits_j,
    digits_n,
    hadamard_generator,
    zeilinger_generator,
)
from mebkit.exact import is_zeilinger, root_value, to_complex

D23 = Decomposition((2, 3))
D22 = Decomposition((2, 2))


def test_decomposition_validation():
    with pytest.raises(ValueError):
        Decomposition(())
    with pytest.raises(ValueError):
        Decomposition((1,))
    with pytest.raises(ValueError):
        Decomposition((2, 1, 3))
    assert Decomposition((6,)).d == 6
    assert str(Decomposition((2, 2, 3))) == "[2,2,3]"


def test_decomposition_weights():
    assert D23.j_weights == (1, 2)
    assert D23.n_weights == (3, 1)
    d234 = Decomposition((2, 3, 4))
    assert d234.j_weights == (1, 2, 6)
    assert d234.n_weights == (12, 4, 1)
    # the j-weights satisfy delta_i = d / prod(factors[i:])
    for dec in decompositions(24):
        for i, w in enumerate(dec.j_weights):
            assert w * np.prod(dec.factors[i:]) == dec.d


def test_decompositions_prime_is_trivial_only():
    assert [dec.factors for dec in decompositions(5)] == [(5,)]
    assert [dec.factors for dec in decompositions(7)] == [(7,)]


def test_decompositions_small_cases():
    assert [dec.factors for dec in decompositions(4)] == [(4,), (2, 2)]
    got12 = [dec.factors for dec in decompositions(12)]
    assert len(got12) == 8
    assert set(got12) == {
        (12,),
        (2, 6),
        (6, 2),
        (3, 4),
        (4, 3),
        (2, 2, 3),
        (2, 3, 2),
        (3, 2, 2),
    }
    # deterministic order: trivial first, then lexicographic
    assert got12[0] == (12,)
    assert got12[1:] == sorted(got12[1:])


def test_decompositions_rejects_small_d():
    for bad in (1, 0, -3):
        with pytest.raises(ValueError):
            decompositions(bad)


def test_digits_examples():
    assert digits_j(0, D23) == (0, 0)
    assert digits_j(5, D23) == (1, 2)
    assert digits_j(1, D22) == (1, 0)
    assert digits_n(0, D23) == (0, 0)
    assert digits_n(4, D23) == (1, 1)
    assert digits_n(1, D22) == (0, 1)


def test_digits_out_of_range():
    for bad in (-1, 6):
        with pytest.raises(ValueError):
            digits_j(bad, D23)
        with pytest.raises(ValueError):
            digits_n(bad, D23)


def test_digit_maps_are_bijections():
    for d in range(2, 33):
        for dec in decompositions(d):
            for idx in range(d):
                ms = digits_j(idx, dec)
                assert all(0 <= m < f for m, f in zip(ms, dec.factors))
                assert sum(m * w for m, w in zip(ms, dec.j_weights)) == idx
                ns = digits_n(idx, dec)
                assert all(0 <= n < f for n, f in zip(ns, dec.factors))
                assert sum(n * w for n, w in zip(ns, dec.n_weights)) == idx


def test_char_exponent_examples():
    assert all(char_exponent(0, j, D23) == 0 for j in range(6))
    assert char_exponent(4, 3, D23) == 5
    assert char_exponent(1, 1, D22) == 0


def test_character_examples():
    dec3 = Decomposition((3,))
    assert character(0, 2, D23).exponent == 0
    assert character(4, 3, D23) == __import__("mebkit").RootExponent(6, 5)
    assert character(2, 2, dec3).exponent == 1
    assert character(2, 2, dec3).order == 3


def test_character_orthogonality():
    # sum_j chi_n(j) * conj(chi_m(j)) = d * delta_nm
    for d in range(2, 13):
        for dec in decompositions(d):
            for n in range(d):
                for m in range(d):
                    total = sum(
                        root_value(d, char_exponent(n, j, dec))
                        * root_value(d, char_exponent(m, j, dec)).conjugate()
                        for j in range(d)
                    )
                    expected = d if n == m else 0.0
                    assert abs(total - expected) < 1e-9


def test_zeilinger_generator_trivial_equals_dft():
    assert zeilinger_generator(Decomposition((2,))).entries == dft_generator(2).entries
    for d in range(2, 33):
        assert zeilinger_generator(Decomposition((d,))).entries == dft_generator(d).entries


def test_zeilinger_generator_22_grid():
    got = zeilinger_generator(D22)
    assert got.entries == ((0, 0, 0, 0), (0, 0, 2, 2), (0, 2, 0, 2), (0, 2, 2, 0))
    # column j = 1 carries the {0,0,2,2} exponent pattern, column 2 the {0,2,0,2} one
    assert tuple(got.entries[k][1] for k in range(4)) == (0, 0, 2, 2)
    assert tuple(got.entries[k][2] for k in range(4)) == (0, 2, 0, 2)


def test_zeilinger_generator_columns_are_characters():
    for dec in (D23, Decomposition((2, 2, 2))):
        got = zeilinger_generator(dec)
        for j in range(dec.d):
            for k in range(dec.d):
                assert got.entries[k][j] == char_exponent(j, k, dec)


def test_dft_generator_examples():
    assert dft_generator(1).entries == ((0,),)
    assert dft_generator(2).entries == ((0, 0), (0, 1))
    assert dft_generator(4).entries == (
        (0, 0, 0, 0),
        (0, 1, 2, 3),
        (0, 2, 0, 2),
        (0, 3, 2, 1),
    )
    with pytest.raises(ValueError):
        dft_generator(0)


def test_hadamard_generator_small():
    assert hadamard_generator(1).entries == ((0, 0), (0, 1))
    assert hadamard_generator(2).entries == (
        (0, 0, 0, 0),
        (0, 2, 0, 2),
        (0, 0, 2, 2),
        (0, 2, 2, 0),
    )
    with pytest.raises(ValueError):
        hadamard_generator(0)


def test_hadamard_generator_matches_bit_parity():
    # independent check: entry (j, k) = (d/2) * parity of popcount(j & k)
    for n in range(1, 5):
        d = 2**n
        got = hadamard_generator(n)
        for j in range(d):
            for k in range(d):
                assert got.entries[j][k] == (d // 2) * (bin(j & k).count("1") % 2)


def test_hadamard_differs_from_character_grid_entrywise():
    h = hadamard_generator(2)
    z = zeilinger_generator(D22)
    assert h.entries[1][1] == 2
    assert z.entries[1][1] == 0
    assert h.entries != z.entries


def test_all_generators_are_zeilinger():
    for d in range(2, 13):
        for dec in decompositions(d):
            assert is_zeilinger(to_complex(zeilinger_generator(dec)))
    for d in range(1, 13):
        assert is_zeilinger(to_complex(dft_generator(d)))
    for n in range(1, 4):
        assert is_zeilinger(to_complex(hadamard_generator(n)))
