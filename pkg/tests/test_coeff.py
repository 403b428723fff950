from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pbwk.coeff import QQ, ZZ, NotInvertible, Residue, Ring, first_non_invertible, invertible


def test_invertible_examples():
    assert invertible(QQ, 720)
    assert invertible(Ring.parse("Z/3"), 2)
    assert not invertible(Ring.parse("Z/6"), 3)
    assert not invertible(ZZ, 2)
    with pytest.raises(ValueError):
        invertible(QQ, 0)


def test_inverse_examples():
    assert QQ.inv(Fraction(-1, 2)) == -2
    z3 = Ring.parse("Z/3")
    assert z3.inv(z3(2)) == z3(2)
    with pytest.raises(NotInvertible) as e:
        ZZ.inv(2)
    assert e.value.value == 2


def test_parse_and_str():
    for text in ("Q", "Z", "Z/7"):
        assert str(Ring.parse(text)) == text
    assert Ring.parse("QQ") == QQ
    with pytest.raises(ValueError):
        Ring.parse("R")
    with pytest.raises(ValueError):
        Ring.parse("Z/1")


def test_default_ring_from_env(monkeypatch):
    assert Ring.default() == QQ
    monkeypatch.setenv("PBWK_DEFAULT_RING", "Z/5")
    assert Ring.default() == Ring.parse("Z/5")


def test_coerce_fraction_into_residues():
    z3 = Ring.parse("Z/3")
    assert z3.coerce(Fraction(-1, 2)) == Residue(1, 3)
    assert z3.coerce("1/2") == Residue(2, 3)
    with pytest.raises(NotInvertible) as e:
        ZZ.coerce(Fraction(1, 6))
    assert e.value.value == 2
    with pytest.raises(NotInvertible) as e:
        Ring.parse("Z/9").coerce(Fraction(1, 6))
    assert e.value.value == 3


def test_residue_canonical_and_immutable():
    r = Residue(-1, 5)
    assert r.value == 4
    assert r == 9 and r == Residue(14, 5)
    with pytest.raises(AttributeError):
        r.value = 2
    with pytest.raises(ValueError):
        _ = Residue(1, 5) + Residue(1, 7)


def test_first_non_invertible():
    assert first_non_invertible(QQ, 100) is None
    assert first_non_invertible(ZZ, 5) == 2
    assert first_non_invertible(Ring.parse("Z/5"), 4) is None
    assert first_non_invertible(Ring.parse("Z/5"), 6) == 5


RINGS = [QQ, ZZ, Ring.parse("Z/7"), Ring.parse("Z/12")]


@st.composite
def ring_and_scalars(draw):
    ring = draw(st.sampled_from(RINGS))
    if ring == QQ:
        vals = st.fractions(min_value=-20, max_value=20, max_denominator=9)
    else:
        vals = st.integers(-50, 50)
    return ring, [ring.coerce(draw(vals)) for _ in range(3)]


@given(ring_and_scalars())
def test_ring_axioms(data):
    ring, (x, y, z) = data
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    assert (x - y == 0) == (x == y)
    assert x + ring.zero == x and x * ring.one == x


@given(ring_and_scalars())
def test_inverse_when_it_exists(data):
    ring, (x, _, _) = data
    if ring.is_unit(x):
        assert ring.inv(x) * x == ring.one
    else:
        with pytest.raises(NotInvertible):
            ring.inv(x)
