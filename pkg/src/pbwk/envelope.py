"""The universal enveloping algebra U(g) in PBW normal form.

Elements are sparse maps from nondecreasing index words to scalars.  Products
are brought to normal form by the rewriting rules

    x_j x_i -> (-1)^{p_i p_j} x_i x_j + [x_j, x_i]      (j > i)
    e e     -> 1/2 [e, e]                               (e odd)

The symbol map ``sigma(u) = Phi(u)(1)`` into S(g) and its inverse ``beta``
(computed by triangular back-substitution) connect U(g) with
:mod:`pbwk.symcoalg`.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Mapping, Sequence

from .coeff import NotInvertible, QQ, first_non_invertible
from .series import TruncSeries, phi_0, phi_c
from .superlie import LieElement, LieMorphism, SuperLieAlgebra, Vec, koszul_sign, nilpotency_class, vec_iadd
from .symcoalg import (
    SymElement,
    SymTensor,
    _cache,
    basis_coderivation,
    coproduct_mono,
    format_terms,
    lift_morphism,
    mono_parity,
    monomials_upto,
)

Word = tuple


class EnvElement:
    """Element of U(g) in normal form: ``word -> scalar``."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: SuperLieAlgebra, terms: Mapping[Word, object] | None = None, normalize: bool = True):
        self.algebra = algebra
        ring = algebra.ring
        out: dict = {}
        for w, c in (terms or {}).items():
            c = ring.coerce(c)
            if c == 0:
                continue
            if normalize:
                vec_iadd(out, normal_form(algebra, tuple(w)), c)
            else:
                vec_iadd(out, {tuple(w): c})
        self.terms = out

    @classmethod
    def one(cls, alg: SuperLieAlgebra) -> "EnvElement":
        return cls(alg, {(): 1})

    @classmethod
    def j(cls, a) -> "EnvElement":
        """The image ``j(a)`` of a Lie element (or ``(algebra, label)``)."""
        if isinstance(a, LieElement):
            return cls(a.algebra, {(k,): c for k, c in a.coords.items()})
        alg, label = a
        return cls(alg, {(alg.index(label),): 1})

    @classmethod
    def word(cls, alg: SuperLieAlgebra, word: Sequence, c=1) -> "EnvElement":
        """``c * j(w_1) ... j(w_n)``, straightened."""
        idx = tuple(alg.index(w) if isinstance(w, str) else w for w in word)
        return cls(alg, {idx: c})

    def _wrap(self, terms: dict) -> "EnvElement":
        out = EnvElement.__new__(EnvElement)
        out.algebra = self.algebra
        out.terms = {w: c for w, c in terms.items() if c != 0}
        return out

    def _same(self, other):
        if other.algebra is not self.algebra:
            raise ValueError("elements of different enveloping algebras")

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        vec_iadd(out, other.terms)
        return self._wrap(out)

    def __sub__(self, other):
        self._same(other)
        out = dict(self.terms)
        vec_iadd(out, other.terms, -1)
        return self._wrap(out)

    def __neg__(self):
        return self._wrap({w: -c for w, c in self.terms.items()})

    def scale(self, c) -> "EnvElement":
        c = self.algebra.ring.coerce(c)
        return self._wrap({w: c * x for w, x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, EnvElement):
            return self.scale(other)
        self._same(other)
        return self._wrap(env_mul_terms(self.algebra, self.terms, other.terms))

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, EnvElement):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Filtration degree (longest normal-form word)."""
        return max((len(w) for w in self.terms), default=-1)

    def component(self, n: int) -> "EnvElement":
        return self._wrap({w: c for w, c in self.terms.items() if len(w) == n})

    def __str__(self):
        return format_terms(self.algebra, self.terms, fmt_mono=lambda w: format_word(self.algebra, w))

    def __repr__(self):
        return f"EnvElement({str(self)!r})"


def format_word(alg: SuperLieAlgebra, w: Word) -> str:
    if not w:
        return "1"
    return "*".join(f"j({alg.labels[i]})" for i in w)


def normal_form(alg: SuperLieAlgebra, word: Word) -> dict:
    """Straighten an arbitrary word of basis indices; memoised per algebra."""
    cache = _cache(alg, "normal_form")
    hit = cache.get(word)
    if hit is not None:
        return hit
    P = alg.parities
    ring = alg.ring
    out: dict = {}
    for k in range(len(word) - 1):
        j, i = word[k], word[k + 1]
        if j > i:
            head, tail = word[:k], word[k + 2:]
            s = -1 if P[i] and P[j] else 1
            vec_iadd(out, normal_form(alg, head + (i, j) + tail), s)
            for l, c in alg.bracket_basis(j, i).items():
                vec_iadd(out, normal_form(alg, head + (l,) + tail), c)
            break
        if j == i and P[i]:
            # e*e = [e, e]/2 needs 1/2 even when [e, e] = 0
            half = ring.coerce(Fraction(1, 2))
            head, tail = word[:k], word[k + 2:]
            for l, c in alg.bracket_basis(i, i).items():
                vec_iadd(out, normal_form(alg, head + (l,) + tail), half * c)
            break
    else:
        out = {word: ring.one}
    out = {w: c for w, c in out.items() if c != 0}
    cache[word] = out
    return out


def env_mul_terms(alg: SuperLieAlgebra, u: Mapping, v: Mapping) -> dict:
    out: dict = {}
    for w1, a in u.items():
        for w2, b in v.items():
            vec_iadd(out, normal_form(alg, w1 + w2), a * b)
    return out


def env_mul(u: EnvElement, v: EnvElement) -> EnvElement:
    return u * v


class EnvTensor(SymTensor):
    def __str__(self):
        if not self.terms:
            return "0"
        alg = self.algebra
        return format_terms(
            alg,
            self.terms,
            fmt_mono=lambda key: " (x) ".join(format_word(alg, w) for w in key),
        ).replace("*1 (x)", " (x)")

    __repr__ = __str__


def env_coproduct(u: EnvElement) -> EnvTensor:
    """``Delta'``: the algebra morphism with ``j(a)`` primitive.

    On a normal-form word it is the signed sum over subwords, exactly as in
    S(g); subwords of a normal word are already normal.
    """
    alg = u.algebra
    out: dict = {}
    for w, c in u.terms.items():
        for key, k in coproduct_mono(alg, w).items():
            vec_iadd(out, {key: c}, k)
    return EnvTensor(alg, out)


# ---------------------------------------------------------------------------
# the representation used for sigma


def pbw_series(alg: SuperLieAlgebra, degree: int, c=1) -> TruncSeries:
    """``phi_c`` truncated as far as needed on ``alg`` for words of length <= degree + 1.

    Over a ring containing Q this is ``phi_c`` to cap ``degree + 1``.  Otherwise
    the algebra must be N-nilpotent with ``1/2, ..., 1/N`` invertible, and the
    cap is ``N - 1`` (higher coefficients never contribute).  Raises
    :class:`NotInvertible` naming the first integer that blocks both routes.
    """
    ring = alg.ring
    if ring == QQ:
        return phi_c(c, degree + 1, ring)
    N = nilpotency_class(alg)
    if N is None:
        k = first_non_invertible(ring, max(degree + 2, 2))
        if k is None:
            return phi_c(c, degree + 1, ring)
        raise NotInvertible(k, ring)
    k = first_non_invertible(ring, max(N, 2))
    if k is not None and N >= 2:
        raise NotInvertible(k, ring)
    return phi_c(c, max(N - 1, 0), ring)


def hypothesis_obstruction(alg: SuperLieAlgebra) -> int | None:
    """The integer whose missing inverse rules out the PBW construction, if any."""
    try:
        pbw_series(alg, 1)
    except NotInvertible as e:
        return e.value
    if any(alg.parities) and not alg.ring.invertible(2):
        return 2
    return None


class PBW:
    """Symbol map and symmetrization for a fixed algebra and series.

    >>> from pbwk.superlie import heisenberg
    >>> pbw = PBW(heisenberg())
    >>> str(pbw.symbol(EnvElement.word(pbw.algebra, "xy")))
    'x*y + 1/2*z'
    """

    def __init__(self, alg: SuperLieAlgebra, phi: TruncSeries | None = None, degree: int = 4):
        self.algebra = alg
        self.phi = phi if phi is not None else pbw_series(alg, degree)
        self._sigma: dict = {}
        self._beta: dict = {}

    # sigma ---------------------------------------------------------------

    def sigma_word(self, w: Word) -> dict:
        hit = self._sigma.get(w)
        if hit is not None:
            return hit
        if not w:
            out = {(): self.algebra.ring.one}
        else:
            out = basis_coderivation(self.phi, self.algebra, w[0]).apply_terms(self.sigma_word(w[1:]))
        self._sigma[w] = out
        return out

    def symbol(self, u: EnvElement) -> SymElement:
        out: dict = {}
        for w, c in u.terms.items():
            vec_iadd(out, self.sigma_word(w), c)
        return SymElement(self.algebra, out)

    # beta ----------------------------------------------------------------

    def beta_mono(self, m: tuple) -> dict:
        """``beta(m) = j(m) - beta(sigma(j(m)) - m)``; the bracket has lower degree."""
        hit = self._beta.get(m)
        if hit is not None:
            return hit
        out = {m: self.algebra.ring.one}
        rest = dict(self.sigma_word(m))
        vec_iadd(rest, {m: 1}, -1)
        if rest and max(len(x) for x in rest) >= len(m):
            raise ArithmeticError(f"symbol of {m} is not unitriangular")
        for x, c in rest.items():
            vec_iadd(out, self.beta_mono(x), -c)
        self._beta[m] = out
        return out

    def symmetrize(self, w: SymElement) -> EnvElement:
        out: dict = {}
        for m, c in w.terms.items():
            vec_iadd(out, self.beta_mono(m), c)
        return EnvElement(self.algebra, out, normalize=False)

    def beta_terms(self, terms: Mapping) -> dict:
        out: dict = {}
        for m, c in terms.items():
            vec_iadd(out, self.beta_mono(m), c)
        return out

    def sigma_terms(self, terms: Mapping) -> dict:
        out: dict = {}
        for w, c in terms.items():
            vec_iadd(out, self.sigma_word(w), c)
        return out


def symbol(u: EnvElement, phi: TruncSeries | None = None) -> SymElement:
    return PBW(u.algebra, phi, max(u.degree, 1)).symbol(u)


def symmetrize(w: SymElement, phi: TruncSeries | None = None) -> EnvElement:
    return PBW(w.algebra, phi, max(w.degree, 1)).symmetrize(w)


# ---------------------------------------------------------------------------
# regular actions


def _word_parity(alg, w):
    return mono_parity(alg, w)


def left_mul(a: LieElement, u: EnvElement) -> EnvElement:
    return EnvElement.j(a) * u


def right_mul(a: LieElement, u: EnvElement) -> EnvElement:
    """``a^R(u) = (-1)^{p(a) p(u)} u j(a)``, applied per homogeneous word."""
    alg = u.algebra
    pa = a.parity
    if pa is None:
        raise ValueError("right multiplication by a non-homogeneous element")
    ja = EnvElement.j(a).terms
    out: dict = {}
    for w, c in u.terms.items():
        s = -1 if pa and _word_parity(alg, w) else 1
        vec_iadd(out, env_mul_terms(alg, {w: c}, ja), s)
    return u._wrap(out)


def adjoint(a: LieElement, u: EnvElement) -> EnvElement:
    """``ad j(a) = j(a)^L - j(a)^R``."""
    return left_mul(a, u) - right_mul(a, u)


ACTIONS = {"adjoint": adjoint, "left": left_mul, "right": right_mul}


# ---------------------------------------------------------------------------
# checks


def conjugation_check(kind: str, a: int, alg: SuperLieAlgebra, D: int = 3, pbw: PBW | None = None) -> dict:
    """Failures of ``sigma o action o beta = Phi`` on monomials of degree <= D.

    ``adjoint`` is compared with ``Phi_0``, ``left`` with ``Phi_1`` and
    ``right`` with ``-Phi_{-1}``.
    """
    pbw = pbw or PBW(alg, degree=D + 1)
    if kind == "adjoint":
        Phi, sign = basis_coderivation(phi_0(D + 1, alg.ring), alg, a), 1
    elif kind == "left":
        Phi, sign = basis_coderivation(pbw.phi, alg, a), 1
    elif kind == "right":
        Phi, sign = basis_coderivation(_same_cap(pbw.phi, -1, alg), alg, a), -1
    else:
        raise ValueError(f"unknown action {kind!r}")
    act = ACTIONS[kind]
    x = alg.basis(a)
    bad = {}
    one = alg.ring.one
    for m in monomials_upto(alg, D):
        u = EnvElement(alg, pbw.beta_mono(m), normalize=False)
        lhs = pbw.sigma_terms(act(x, u).terms)
        vec_iadd(lhs, Phi.on_mono(m), -sign)
        if lhs:
            bad[m] = SymElement(alg, lhs)
    return bad


def _same_cap(phi: TruncSeries, c, alg) -> TruncSeries:
    return phi_c(c, phi.cap, alg.ring)


def compatibility_check(alg: SuperLieAlgebra, D: int = 3, pbw: PBW | None = None) -> dict:
    """Failures of ``Delta' o beta = (beta (x) beta) o Delta`` on monomials of degree <= D."""
    pbw = pbw or PBW(alg, degree=D)
    bad = {}
    for m in monomials_upto(alg, D):
        lhs = env_coproduct(EnvElement(alg, pbw.beta_mono(m), normalize=False)).terms
        rhs: dict = {}
        for (m1, m2), k in coproduct_mono(alg, m).items():
            for w1, c1 in pbw.beta_mono(m1).items():
                for w2, c2 in pbw.beta_mono(m2).items():
                    vec_iadd(rhs, {(w1, w2): c1 * c2}, k)
        diff = dict(lhs)
        vec_iadd(diff, rhs, -1)
        if diff:
            bad[m] = EnvTensor(alg, diff)
    return bad


def inversion_check(alg: SuperLieAlgebra, D: int = 4, pbw: PBW | None = None) -> dict:
    """Failures of ``sigma o beta = id`` on S^{<=D} and ``beta o sigma = id`` on
    normal words of length <= D, keyed by ``("sigma_beta" | "beta_sigma", m)``."""
    pbw = pbw or PBW(alg, degree=D)
    one = alg.ring.one
    bad = {}
    for m in monomials_upto(alg, D):
        back = pbw.sigma_terms(pbw.beta_mono(m))
        if back != {m: one}:
            bad[("sigma_beta", m)] = SymElement(alg, back)
        # normal words and monomials share their index tuples
        again = pbw.beta_terms(pbw.sigma_word(m))
        if again != {m: one}:
            bad[("beta_sigma", m)] = EnvElement(alg, again, normalize=False)
    return bad


def strong_pbw_filtration(alg, D=4, pbw=None) -> dict:
    """(i) ``beta(S^n)`` lies in ``U_n``; (ii) its top part is the word itself."""
    pbw = pbw or PBW(alg, degree=D)
    one = alg.ring.one
    bad = {}
    for m in monomials_upto(alg, D):
        b = pbw.beta_mono(m)
        if any(len(w) > len(m) for w in b):
            bad[("filtration", m)] = EnvElement(alg, b, normalize=False)
        top = {w: c for w, c in b.items() if len(w) == len(m)}
        if top != {m: one}:
            bad[("graded", m)] = EnvElement(alg, top, normalize=False)
    return bad


def _derivation_sym(alg, a: int, terms: Mapping) -> dict:
    # extension of ad x_a to S(g) as a derivation
    P = alg.parities
    out: dict = {}
    for m, c in terms.items():
        odd_before = 0
        for k, x in enumerate(m):
            s = -1 if P[a] and odd_before % 2 else 1
            for l, y in alg.bracket_basis(a, x).items():
                part = SymElement.monomial(alg, m[:k] + (l,) + m[k + 1:], y).terms
                vec_iadd(out, part, s * c)
            odd_before += P[x]
    return out


def strong_pbw_derivations(alg, D=4, pbw=None) -> dict:
    """(iii) ``beta o ad_S(a) = ad j(a) o beta`` for every basis element ``a``."""
    pbw = pbw or PBW(alg, degree=D)
    bad = {}
    for a in range(alg.dim):
        x = alg.basis(a)
        for m in monomials_upto(alg, D):
            lhs = pbw.beta_terms(_derivation_sym(alg, a, {m: 1}))
            rhs = adjoint(x, EnvElement(alg, pbw.beta_mono(m), normalize=False)).terms
            diff = dict(lhs)
            vec_iadd(diff, rhs, -1)
            if diff:
                bad[(a, m)] = EnvElement(alg, diff, normalize=False)
    return bad


def lift_morphism_env(f: LieMorphism, terms: Mapping) -> dict:
    """``f-bar`` on U: multiply the images of the letters and straighten."""
    T = f.target
    out: dict = {}
    for w, c in terms.items():
        acc = {(): T.ring.one}
        for i in w:
            acc = env_mul_terms(T, acc, {(k,): y for k, y in f.images[i].items()})
        vec_iadd(out, acc, c)
    return out


def strong_pbw_automorphism(f: LieMorphism, D=4, pbw=None, pbw_target=None) -> dict:
    """(iii) ``beta o f~ = f-bar o beta`` on monomials of degree <= D."""
    S, T = f.source, f.target
    pbw = pbw or PBW(S, degree=D)
    pbw_t = pbw_target or (pbw if T is S else PBW(T, degree=D))
    ft = lift_morphism(f)
    one = S.ring.one
    bad = {}
    for m in monomials_upto(S, D):
        lhs = pbw_t.beta_terms(ft({m: one}))
        rhs = lift_morphism_env(f, pbw.beta_mono(m))
        diff = dict(lhs)
        vec_iadd(diff, rhs, -1)
        if diff:
            bad[m] = EnvElement(T, diff, normalize=False)
    return bad


def symmetrization_formula_check(alg: SuperLieAlgebra, D: int = 3, pbw=None) -> dict:
    """``n! beta(a_1...a_n) = sum_s alpha(a_s) j(a_s(1))...j(a_s(n))`` (rings containing Q)."""
    pbw = pbw or PBW(alg, degree=D)
    bad = {}
    P = alg.parities
    for m in monomials_upto(alg, D):
        n = len(m)
        lhs = {w: factorial(n) * c for w, c in pbw.beta_mono(m).items()}
        rhs: dict = {}
        for perm in permutations(range(n)):
            s = koszul_sign([P[i] for i in m], perm)
            vec_iadd(rhs, normal_form(alg, tuple(m[k] for k in perm)), s)
        diff = dict(lhs)
        vec_iadd(diff, rhs, -1)
        if diff:
            bad[m] = EnvElement(alg, diff, normalize=False)
    return bad


def power_check(alg: SuperLieAlgebra, n_max: int = 5, phi: TruncSeries | None = None) -> dict:
    """``(Phi_1^a)^n(1) = a^n`` for every even basis element ``a`` and ``n <= n_max``."""
    phi = phi or pbw_series(alg, n_max)
    one = alg.ring.one
    bad = {}
    for a in range(alg.dim):
        if alg.parities[a]:
            continue
        Phi = basis_coderivation(phi, alg, a)
        acc = {(): one}
        for n in range(1, n_max + 1):
            acc = Phi.apply_terms(acc)
            if acc != {(a,) * n: one}:
                bad[(a, n)] = SymElement(alg, acc)
    return bad
