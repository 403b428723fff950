from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from pbwk.coeff import QQ, ZZ, NotInvertible, Ring
from pbwk.envelope import (
    PBW,
    EnvElement,
    adjoint,
    compatibility_check,
    conjugation_check,
    env_coproduct,
    hypothesis_obstruction,
    inversion_check,
    left_mul,
    normal_form,
    pbw_series,
    power_check,
    right_mul,
    strong_pbw_automorphism,
    strong_pbw_derivations,
    strong_pbw_filtration,
    symbol,
    symmetrization_formula_check,
    symmetrize,
)
from pbwk.superlie import free_nilpotent, heisenberg, odd_line, sl2, standard_automorphisms, super_example
from pbwk.symcoalg import SymElement

from oracles import symbol_degree2, symbol_degree3, two_nilpotent_beta

F = Fraction
Z3, Z5 = Ring.parse("Z/3"), Ring.parse("Z/5")
ids = lambda a: f"{a.name}/{a.ring}"

Q_ALGEBRAS = [heisenberg(), sl2(), super_example(), super_example(e_square=2), free_nilpotent(2, 3)]
ALL_ALGEBRAS = Q_ALGEBRAS + [free_nilpotent(2, 3, Z5), free_nilpotent(3, 2, Z3)]


def j(alg, label):
    return EnvElement.j((alg, label))


# -- normal form -----------------------------------------------------------------


def test_normal_form_examples():
    H = heisenberg()
    assert str(j(H, "y") * j(H, "x")) == "j(x)*j(y) - j(z)"
    assert j(H, "z") * j(H, "x") == j(H, "x") * j(H, "z")
    S = super_example(e_square=2)
    assert j(S, "e") * j(S, "e") == j(S, "h")
    S0 = super_example()
    assert (j(S0, "e") * j(S0, "e")).is_zero()
    assert j(S0, "f") * j(S0, "e") == -(j(S0, "e") * j(S0, "f")) + j(S0, "h")


def test_odd_square_needs_one_half():
    line = odd_line(ZZ)
    with pytest.raises(NotInvertible) as info:
        j(line, "e") * j(line, "e")
    assert info.value.value == 2
    line = odd_line(QQ)
    assert (j(line, "e") * j(line, "e")).is_zero()


def test_normal_words_are_fixed():
    S = sl2()
    for w in [(), (0,), (0, 1), (0, 0, 2), (0, 1, 2)]:
        assert normal_form(S, w) == {w: 1}


def _words(alg, max_len):
    return st.lists(st.integers(0, alg.dim - 1), max_size=max_len).map(tuple)


@pytest.mark.parametrize("alg", ALL_ALGEBRAS, ids=ids)
@given(data=st.data())
def test_multiplication_is_associative(alg, data):
    u, v, w = (EnvElement(alg, {data.draw(_words(alg, 3)): 1}) for _ in range(3))
    assert (u * v) * w == u * (v * w)


@pytest.mark.parametrize("alg", Q_ALGEBRAS, ids=ids)
def test_defining_relation(alg):
    P = alg.parities
    for a, b in product(range(alg.dim), repeat=2):
        ja, jb = EnvElement.j(alg.basis(a)), EnvElement.j(alg.basis(b))
        s = -1 if P[a] and P[b] else 1
        br = EnvElement.j(alg.element(alg.bracket_basis(a, b)))
        assert ja * jb - (jb * ja).scale(s) == br


# -- coproduct --------------------------------------------------------------------


def test_env_coproduct_examples():
    H = heisenberg()
    x, y = j(H, "x"), j(H, "y")
    assert str(env_coproduct(x)) == "1 (x) j(x) + j(x) (x) 1"
    assert str(env_coproduct(EnvElement.one(H))) == "1 (x) 1"
    d = env_coproduct(x * y).terms
    assert d == {((0, 1), ()): 1, ((0,), (1,)): 1, ((1,), (0,)): 1, ((), (0, 1)): 1}


def test_env_coproduct_is_multiplicative():
    H = heisenberg()
    u = j(H, "y") * j(H, "x")
    # Delta'(j(y) j(x)) computed in U (x) U by hand
    lhs = env_coproduct(u).terms
    assert lhs == {((0, 1), ()): 1, ((0,), (1,)): 1, ((1,), (0,)): 1, ((), (0, 1)): 1, ((2,), ()): -1, ((), (2,)): -1}


# -- symbol map ---------------------------------------------------------------------


def _s(alg, v):
    return SymElement.from_vec(alg, v)


EXAMPLE_ALGEBRAS = [free_nilpotent(3, 3), sl2(), super_example(), super_example(e_square=2)]


@pytest.mark.parametrize("alg", EXAMPLE_ALGEBRAS, ids=ids)
def test_symbol_low_degrees(alg):
    pbw = PBW(alg)
    assert pbw.symbol(EnvElement.one(alg)) == SymElement.one(alg)
    for a in range(alg.dim):
        assert pbw.symbol(EnvElement(alg, {(a,): 1})) == _s(alg, {a: 1})
    for a1, a2 in product(range(alg.dim), repeat=2):
        u = EnvElement(alg, {(a1, a2): 1})
        assert pbw.symbol(u) == symbol_degree2(alg, a1, a2)


@pytest.mark.parametrize("alg", EXAMPLE_ALGEBRAS, ids=ids)
def test_symbol_degree_three(alg):
    pbw = PBW(alg)
    for a1, a2, a3 in product(range(alg.dim), repeat=3):
        u = EnvElement(alg, {(a1, a2, a3): 1})
        assert str(pbw.symbol(u)) == str(symbol_degree3(alg, a1, a2, a3)), (a1, a2, a3)


def test_symbol_heisenberg():
    H = heisenberg()
    assert str(symbol(j(H, "x") * j(H, "y"))) == "x*y + 1/2*z"
    assert str(symbol(j(H, "y") * j(H, "x"))) == "x*y - 1/2*z"


# -- symmetrization ------------------------------------------------------------------


def test_beta_of_powers():
    for alg in (sl2(), heisenberg(), free_nilpotent(2, 3), free_nilpotent(2, 3, Z5)):
        pbw = PBW(alg, degree=5)
        for a in range(alg.dim):
            for n in range(6):
                assert pbw.beta_mono((a,) * n) == {(a,) * n: 1}


def test_z3_two_nilpotent_example():
    g = free_nilpotent(3, 2, Z3)
    pbw = PBW(g, degree=3)
    assert pbw.phi.cap == 1
    for n in (1, 2, 3):
        for factors in product(range(g.dim), repeat=n):
            m = SymElement.one(g)
            for a in factors:
                m = m * _s(g, {a: 1})
            assert pbw.symmetrize(m) == two_nilpotent_beta(g, factors), factors
    for a1, a2 in product(range(g.dim), repeat=2):
        assert pbw.symbol(EnvElement(g, {(a1, a2): 1})) == symbol_degree2(g, a1, a2)


def test_symmetrize_heisenberg():
    H = heisenberg()
    w = SymElement.monomial(H, ["x", "y"])
    assert str(symmetrize(w)) == "j(x)*j(y) - 1/2*j(z)"


# -- inversion and strong PBW -----------------------------------------------------------


@pytest.mark.parametrize("alg", ALL_ALGEBRAS, ids=ids)
def test_sigma_beta_inverse(alg):
    assert inversion_check(alg, 4) == {}


@pytest.mark.parametrize("alg", ALL_ALGEBRAS, ids=ids)
def test_strong_pbw(alg):
    pbw = PBW(alg, degree=4)
    assert strong_pbw_filtration(alg, 4, pbw) == {}
    assert strong_pbw_derivations(alg, 3, pbw) == {}
    for name, f in standard_automorphisms(alg):
        assert strong_pbw_automorphism(f, 3, pbw) == {}, name


@pytest.mark.parametrize("alg", ALL_ALGEBRAS, ids=ids)
def test_coproduct_compatibility(alg):
    assert compatibility_check(alg, 3) == {}


@pytest.mark.parametrize("alg", Q_ALGEBRAS, ids=ids)
def test_symmetrization_formula(alg):
    assert symmetrization_formula_check(alg, 3) == {}


@pytest.mark.parametrize("alg", ALL_ALGEBRAS, ids=ids)
def test_powers_of_even_generators(alg):
    assert power_check(alg, 5) == {}


# -- conjugated actions -----------------------------------------------------------------


def test_regular_action_examples():
    H = heisenberg()
    x, y = H.basis("x"), H.basis("y")
    one = EnvElement.one(H)
    assert adjoint(x, j(H, "y")) == j(H, "z")
    assert left_mul(x, one) == j(H, "x")
    assert right_mul(x, one) == j(H, "x")
    S = super_example()
    e = S.basis("e")
    # odd right multiplication picks up a sign against an odd word
    assert right_mul(e, j(S, "f")) == -(j(S, "f") * j(S, "e"))
    assert adjoint(e, j(S, "f")) == j(S, "h")


@pytest.mark.parametrize("alg", ALL_ALGEBRAS, ids=ids)
@pytest.mark.parametrize("kind", ["adjoint", "left", "right"])
def test_conjugation(alg, kind):
    pbw = PBW(alg, degree=4)
    for a in range(alg.dim):
        assert conjugation_check(kind, a, alg, 3, pbw) == {}


def test_conjugation_detects_a_non_representation():
    S = sl2()
    with pytest.raises(ValueError):
        conjugation_check("swap", 0, S, 2)
    from pbwk.series import TruncSeries

    bad = PBW(S, phi=TruncSeries(QQ, [1, 0, 0, 0]))
    assert any(conjugation_check("left", a, S, 2, bad) for a in range(S.dim))


# -- hypothesis ------------------------------------------------------------------------


def test_hypothesis_routes():
    assert pbw_series(free_nilpotent(2, 3, Z5), 4).cap == 2
    assert pbw_series(free_nilpotent(3, 2, Z3), 4).cap == 1
    with pytest.raises(NotInvertible) as info:
        pbw_series(free_nilpotent(2, 3, ZZ), 4)
    assert info.value.value == 2
    with pytest.raises(NotInvertible) as info:
        pbw_series(free_nilpotent(2, 3, Z3), 4)
    assert info.value.value == 3
    with pytest.raises(NotInvertible):
        pbw_series(sl2(Z5), 4)
    assert hypothesis_obstruction(heisenberg(ZZ)) == 2
    assert hypothesis_obstruction(heisenberg()) is None
