import cmath

import pytest

from bspec import Field, char_eval, field_new
from bspec.errors import DivisionByZero, NonPrimeModulus


@pytest.mark.parametrize("q", [2, 3, 5, 101])
def test_prime_moduli_accepted(q):
    assert field_new(q).q == q


@pytest.mark.parametrize("q", [0, 1, 4, 9, 15, 91])
def test_composite_moduli_rejected(q):
    with pytest.raises(NonPrimeModulus):
        Field(q)


def test_arith_examples():
    f5 = Field(5)
    assert f5.arith(3, 4, "add") == 2
    assert f5.arith(2, None, "inv") == 3
    assert Field(3).arith(1, None, "neg") == 2
    assert f5.mul(4, 4) == 1
    with pytest.raises(ValueError):
        f5.arith(1, 1, "pow")


def test_inverse_of_zero():
    with pytest.raises(DivisionByZero):
        Field(7).inv(0)
    with pytest.raises(ZeroDivisionError):
        Field(7).arith(0, None, "inv")


@pytest.mark.parametrize("q", [2, 3, 5, 7, 11, 13, 31, 97, 101])
def test_inverse_involution_exhaustive(q):
    f = Field(q)
    for a in range(1, q):
        assert f.mul(a, f.inv(a)) == 1
        assert f.inv(f.inv(a)) == a


@pytest.mark.parametrize("q", [2, 3, 5, 7, 11, 13])
def test_ring_axioms_exhaustive(q):
    f = Field(q)
    els = range(q)
    for a in els:
        assert f.add(a, f.neg(a)) == 0
        for b in els:
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            for c in els:
                assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
                assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


def test_character_examples():
    assert char_eval(5, 0) == 1 + 0j
    assert abs(char_eval(2, 1) - (-1 + 0j)) < 1e-12
    assert abs(sum(char_eval(5, 2 * t) for t in range(5))) < 1e-9


@pytest.mark.parametrize("q", [2, 3, 5, 7, 13, 23])
def test_character_unit_modulus_and_homomorphism(q):
    for a in range(q):
        assert abs(abs(char_eval(q, a)) - 1) < 1e-12
        for b in range(q):
            assert abs(char_eval(q, a) * char_eval(q, b) - char_eval(q, (a + b) % q)) < 1e-12


def test_char_table_matches_scalar_evaluation():
    f = Field(11)
    for t in range(11):
        assert abs(f.char_table[t] - cmath.exp(2j * cmath.pi * t / 11)) < 1e-12
        assert f.char(t) == char_eval(11, t)
