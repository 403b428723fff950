"""The symmetric algebra S(g) as a supercommutative Hopf algebra, the vector
fields ``phi(ad x)(a)`` and ``(rho(t,u) : [a, b])_x`` on it, and the
coderivations ``Phi^a = id * phi^a``.

Monomials are sorted tuples of basis indices (odd indices at most once).
All Koszul signs come from :func:`pbwk.superlie.koszul_sign` or from the
equivalent shuffle count in :func:`coproduct_mono`.

Values are memoised per algebra.  The caches only ever receive a value that
is a pure function of its key, so concurrent fills with identical inputs
store equal values.
"""
from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Callable, Iterable, Mapping, Sequence

from .coeff import Ring
from .series import BiTruncSeries, TruncSeries, divided_difference
from .superlie import LieElement, LieMorphism, SuperLieAlgebra, Vec, vec_iadd

Mono = tuple


class DegreeBeyondCap(ValueError):
    """A series coefficient beyond its cap was needed (and did not drop out)."""


def _cache(alg: SuperLieAlgebra, name: str) -> dict:
    caches = alg.__dict__.setdefault("_sym_caches", {})
    return caches.setdefault(name, {})


def mono_parity(alg: SuperLieAlgebra, m: Mono) -> int:
    P = alg.parities
    return sum(P[i] for i in m) % 2


def mono_mul(alg: SuperLieAlgebra, m1: Mono, m2: Mono) -> tuple[int, Mono]:
    """``m1 * m2 = sign * m``; sign 0 when an odd factor repeats."""
    P = alg.parities
    sign = 1
    for x in m1:
        if P[x]:
            for y in m2:
                if P[y] and y < x:
                    sign = -sign
                elif P[y] and y == x:
                    return 0, ()
    return sign, tuple(sorted(m1 + m2))


def mono_from_word(alg: SuperLieAlgebra, word: Sequence[int]) -> tuple[int, Mono]:
    """Sort a word of basis indices into a monomial, with its sign."""
    order = sorted(range(len(word)), key=lambda k: word[k])
    m = tuple(word[k] for k in order)
    P = alg.parities
    for a, b in zip(m, m[1:]):
        if a == b and P[a]:
            return 0, ()
    odd = [k for k in order if P[word[k]]]
    inv = sum(1 for i in range(len(odd)) for j in range(i + 1, len(odd)) if odd[i] > odd[j])
    return (-1 if inv % 2 else 1), m


def coproduct_mono(alg: SuperLieAlgebra, m: Mono) -> dict:
    """``Delta(m) = sum alpha(X_p, X_rest) X_p (x) X_rest`` over position subsets.

    Integer coefficients (binomials appear for repeated even factors).
    """
    cache = _cache(alg, "coproduct")
    hit = cache.get(m)
    if hit is not None:
        return hit
    P = alg.parities
    n = len(m)
    out: dict = {}
    for mask in range(1 << n):
        left, right = [], []
        sign = 1
        odd_right_so_far = 0
        for k in range(n):
            if mask >> k & 1:
                left.append(m[k])
                if P[m[k]] and odd_right_so_far % 2:
                    sign = -sign
            else:
                right.append(m[k])
                if P[m[k]]:
                    odd_right_so_far += 1
        key = (tuple(left), tuple(right))
        out[key] = out.get(key, 0) + sign
    out = {k: v for k, v in out.items() if v}
    cache[m] = out
    return out


def monomials(alg: SuperLieAlgebra, degree: int) -> list[Mono]:
    """All basis monomials of the given degree (odd indices at most once)."""
    P = alg.parities
    out = []
    for m in combinations_with_replacement(range(alg.dim), degree):
        if any(a == b and P[a] for a, b in zip(m, m[1:])):
            continue
        out.append(m)
    return out


def monomials_upto(alg: SuperLieAlgebra, degree: int) -> list[Mono]:
    return [m for d in range(degree + 1) for m in monomials(alg, d)]


# ---------------------------------------------------------------------------
# elements


class SymElement:
    """Element of S(g): sparse ``monomial -> scalar``."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: SuperLieAlgebra, terms: Mapping[Mono, object] | None = None):
        self.algebra = algebra
        ring = algebra.ring
        self.terms = {}
        for m, c in (terms or {}).items():
            c = ring.coerce(c)
            if c != 0:
                self.terms[tuple(m)] = c

    @classmethod
    def one(cls, alg: SuperLieAlgebra) -> "SymElement":
        return cls(alg, {(): 1})

    @classmethod
    def from_vec(cls, alg: SuperLieAlgebra, v: Vec) -> "SymElement":
        return cls(alg, {(k,): c for k, c in v.items()})

    @classmethod
    def from_lie(cls, a: LieElement) -> "SymElement":
        return cls.from_vec(a.algebra, a.coords)

    @classmethod
    def monomial(cls, alg: SuperLieAlgebra, word: Sequence, c=1) -> "SymElement":
        word = [alg.index(w) if isinstance(w, str) else w for w in word]
        s, m = mono_from_word(alg, word)
        return cls(alg, {m: alg.ring.coerce(c) * s} if s else {})

    def _wrap(self, terms: dict) -> "SymElement":
        out = SymElement.__new__(SymElement)
        out.algebra = self.algebra
        out.terms = {m: c for m, c in terms.items() if c != 0}
        return out

    def _same(self, other: "SymElement"):
        if other.algebra is not self.algebra:
            raise ValueError("elements of different symmetric algebras")

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
        return self._wrap({m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "SymElement":
        c = self.algebra.ring.coerce(c)
        return self._wrap({m: c * x for m, x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SymElement):
            return self.scale(other)
        self._same(other)
        return self._wrap(sym_mul_terms(self.algebra, self.terms, other.terms))

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, SymElement):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    def component(self, n: int) -> "SymElement":
        return self._wrap({m: c for m, c in self.terms.items() if len(m) == n})

    def lower(self, n: int) -> "SymElement":
        """Part of degree < n."""
        return self._wrap({m: c for m, c in self.terms.items() if len(m) < n})

    def __str__(self):
        return format_terms(self.algebra, self.terms)

    def __repr__(self):
        return f"SymElement({str(self)!r})"


def format_mono(alg: SuperLieAlgebra, m: Mono) -> str:
    if not m:
        return "1"
    parts = []
    i = 0
    while i < len(m):
        k = m[i]
        e = 1
        while i + e < len(m) and m[i + e] == k:
            e += 1
        parts.append(alg.labels[k] if e == 1 else f"{alg.labels[k]}^{e}")
        i += e
    return "*".join(parts)


def format_terms(alg: SuperLieAlgebra, terms: Mapping, fmt_mono=None) -> str:
    fmt_mono = fmt_mono or (lambda m: format_mono(alg, m))
    if not terms:
        return "0"
    out = []
    for m in sorted(terms, key=lambda m: (-len(m), m)):
        c = terms[m]
        s = str(c)
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        mono = fmt_mono(m)
        if mono == "1":
            body = s
        elif s == "1":
            body = mono
        else:
            body = f"{s}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


def sym_mul_terms(alg: SuperLieAlgebra, u: Mapping, v: Mapping) -> dict:
    out: dict = {}
    for m1, a in u.items():
        for m2, b in v.items():
            s, m = mono_mul(alg, m1, m2)
            if s:
                vec_iadd(out, {m: a * b}, s)
    return out


def sym_mul(u: SymElement, v: SymElement) -> SymElement:
    return u * v


# ---------------------------------------------------------------------------
# coalgebra structure


class SymTensor:
    """Element of S(g)^{(x) k}: sparse ``(m_1, ..., m_k) -> scalar``."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: SuperLieAlgebra, terms: Mapping):
        self.algebra = algebra
        self.terms = {k: c for k, c in terms.items() if c != 0}

    def __eq__(self, other):
        if not isinstance(other, SymTensor):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        vec_iadd(out, other.terms)
        return SymTensor(self.algebra, out)

    def __sub__(self, other):
        out = dict(self.terms)
        vec_iadd(out, other.terms, -1)
        return SymTensor(self.algebra, out)

    def is_zero(self):
        return not self.terms

    def __str__(self):
        if not self.terms:
            return "0"
        alg = self.algebra
        return format_terms(
            alg,
            self.terms,
            fmt_mono=lambda key: " (x) ".join(format_mono(alg, m) for m in key),
        ).replace("*1 (x)", " (x)")

    __repr__ = __str__


def coproduct(w: SymElement) -> SymTensor:
    alg = w.algebra
    out: dict = {}
    for m, c in w.terms.items():
        for key, k in coproduct_mono(alg, m).items():
            vec_iadd(out, {key: c}, k)
    return SymTensor(alg, out)


def counit(w: SymElement):
    return w.terms.get((), w.algebra.ring.zero)


def antipode(w: SymElement) -> SymElement:
    """The algebra morphism ``X -> -X``: degree n picks up ``(-1)^n``."""
    return w._wrap({m: (c if len(m) % 2 == 0 else -c) for m, c in w.terms.items()})


# Linear maps out of S(g) are represented as callables ``mono -> terms dict``
# together with their parity.


class SymMap:
    """A homogeneous linear map ``S(g) -> S(g)`` given on monomials."""

    def __init__(self, alg: SuperLieAlgebra, fn: Callable[[Mono], dict], parity: int = 0, memo: bool = True):
        self.algebra = alg
        self._fn = fn
        self.parity = parity % 2
        self._memo: dict | None = {} if memo else None

    def on_mono(self, m: Mono) -> dict:
        if self._memo is None:
            return self._fn(m)
        hit = self._memo.get(m)
        if hit is None:
            hit = self._fn(m)
            self._memo[m] = hit
        return hit

    def __call__(self, w: SymElement) -> SymElement:
        out: dict = {}
        for m, c in w.terms.items():
            vec_iadd(out, self.on_mono(m), c)
        return w._wrap(out)

    def apply_terms(self, terms: Mapping) -> dict:
        out: dict = {}
        for m, c in terms.items():
            vec_iadd(out, self.on_mono(m), c)
        return out


def identity_map(alg: SuperLieAlgebra) -> SymMap:
    return SymMap(alg, lambda m: {m: alg.ring.one}, 0, memo=False)


def antipode_map(alg: SuperLieAlgebra) -> SymMap:
    one = alg.ring.one
    return SymMap(alg, lambda m: {m: one if len(m) % 2 == 0 else -one}, 0, memo=False)


def counit_map(alg: SuperLieAlgebra) -> SymMap:
    one = alg.ring.one
    return SymMap(alg, lambda m: {(): one} if not m else {}, 0, memo=False)


def convolve(F: SymMap, G: SymMap) -> SymMap:
    """``F * G = Mult o (F (x) G) o Delta``."""
    alg = F.algebra

    def fn(m):
        out: dict = {}
        for (m1, m2), k in coproduct_mono(alg, m).items():
            s = -1 if (G.parity and mono_parity(alg, m1)) else 1
            part = sym_mul_terms(alg, F.on_mono(m1), G.on_mono(m2))
            vec_iadd(out, part, s * k)
        return out

    return SymMap(alg, fn, F.parity + G.parity)


# ---------------------------------------------------------------------------
# vector fields


def adsum(alg: SuperLieAlgebra, m: Mono, a: int) -> Vec:
    """``sum_s alpha(X_s) ad X_s(1) o ... o ad X_s(n) (x_a)`` over all orderings
    of the factors of ``m`` (with multiplicity)."""
    cache = _cache(alg, "adsum")
    key = (m, a)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if not m:
        out = {a: alg.ring.one}
    else:
        P = alg.parities
        out = {}
        odd_before = 0
        i = 0
        while i < len(m):
            k = m[i]
            mult = 1
            while i + mult < len(m) and m[i + mult] == k:
                mult += 1
            # moving m[i] to the front passes the odd factors before it
            s = -1 if (P[k] and odd_before % 2) else 1
            rest = m[:i] + m[i + 1:]
            inner = adsum(alg, rest, a)
            if inner:
                vec_iadd(out, alg.ad_vec(k, inner), s * mult)
            odd_before += mult if P[k] else 0
            i += mult
    cache[key] = out
    return out


class VectorField:
    """A homogeneous map ``S(g) -> g`` evaluated lazily on monomials."""

    parity: int = 0

    def __init__(self, alg: SuperLieAlgebra, parity: int):
        self.algebra = alg
        self.parity = parity % 2
        self._memo: dict = {}

    def _eval(self, m: Mono) -> Vec:
        raise NotImplementedError

    def on_mono(self, m: Mono) -> Vec:
        hit = self._memo.get(m)
        if hit is None:
            hit = self._eval(m)
            self._memo[m] = hit
        return hit

    def __call__(self, w: SymElement) -> SymElement:
        out: dict = {}
        for m, c in w.terms.items():
            vec_iadd(out, self.on_mono(m), c)
        return SymElement.from_vec(self.algebra, out)

    def as_map(self) -> SymMap:
        """The same field viewed as a map into S(g) (landing in degree 1)."""
        return SymMap(self.algebra, lambda m: {(k,): c for k, c in self.on_mono(m).items()}, self.parity)


class GenericField(VectorField):
    """``phi(ad x)(x_a)`` for a basis index ``a``:

    ``X_1...X_n -> c_n (-1)^{p(a) p(X)} sum_s alpha(X_s) ad X_s(1) ... ad X_s(n) (x_a)``.
    """

    def __init__(self, phi: TruncSeries, alg: SuperLieAlgebra, a: int):
        super().__init__(alg, alg.parities[a])
        if phi.ring != alg.ring:
            raise ValueError(f"series over {phi.ring} but algebra over {alg.ring}")
        self.phi = phi
        self.a = a

    def _eval(self, m: Mono) -> Vec:
        alg = self.algebra
        n = len(m)
        v = adsum(alg, m, self.a)
        if not v:
            return {}
        if n > self.phi.cap:
            raise DegreeBeyondCap(f"needs the t^{n} coefficient; series cap is {self.phi.cap}")
        c = self.phi[n]
        if alg.parities[self.a] and mono_parity(alg, m):
            c = -c
        return {k: c * x for k, x in v.items() if c * x != 0}


class PairingField(VectorField):
    """``(rho(t, u) : [x_a, x_b])_x`` for basis indices ``a, b``."""

    def __init__(self, rho: BiTruncSeries, alg: SuperLieAlgebra, a: int, b: int):
        super().__init__(alg, alg.parities[a] + alg.parities[b])
        self.rho = rho
        self.a = a
        self.b = b

    def _eval(self, m: Mono) -> Vec:
        alg = self.algebra
        P = alg.parities
        out: Vec = {}
        pb = P[self.b] * mono_parity(alg, m)
        for (m1, m2), k in coproduct_mono(alg, m).items():
            left = adsum(alg, m1, self.a)
            if not left:
                continue
            right = adsum(alg, m2, self.b)
            if not right:
                continue
            br = alg.bracket_vec(left, right)
            if not br:
                continue
            r, q = len(m1), len(m2)
            if r + q > self.rho.cap:
                raise DegreeBeyondCap(f"needs the t^{r} u^{q} coefficient; series cap is {self.rho.cap}")
            d = self.rho.coeff(r, q)
            if d == 0:
                continue
            s = -1 if (pb + P[self.a] * mono_parity(alg, m1)) % 2 else 1
            vec_iadd(out, br, s * k * d)
        return out


class SumField(VectorField):
    def __init__(self, fields: Sequence[VectorField], coeffs: Sequence | None = None):
        alg = fields[0].algebra
        ps = {f.parity for f in fields}
        if len(ps) != 1:
            raise ValueError("summands must have equal parity")
        super().__init__(alg, ps.pop())
        self.fields = list(fields)
        self.coeffs = [alg.ring.coerce(c) for c in (coeffs or [1] * len(fields))]

    def _eval(self, m):
        out: Vec = {}
        for f, c in zip(self.fields, self.coeffs):
            vec_iadd(out, f.on_mono(m), c)
        return out


def _homogeneous_parts(alg: SuperLieAlgebra, a) -> list[tuple[int, object]]:
    if isinstance(a, LieElement):
        coords = a.coords
    elif isinstance(a, int):
        coords = {a: alg.ring.one}
    elif isinstance(a, str):
        coords = {alg.index(a): alg.ring.one}
    else:
        coords = dict(a)
    return sorted(coords.items())


def generic_field(phi: TruncSeries, a: LieElement) -> VectorField:
    alg = a.algebra
    parts = [GenericField(phi, alg, i) for i, _ in _homogeneous_parts(alg, a)]
    if not parts:
        return SumField([GenericField(phi, alg, 0)], [0])
    return SumField(parts, [c for _, c in _homogeneous_parts(alg, a)])


def pairing_field(rho: BiTruncSeries, a: LieElement, b: LieElement) -> VectorField:
    alg = a.algebra
    fields, coeffs = [], []
    for i, x in _homogeneous_parts(alg, a):
        for j, y in _homogeneous_parts(alg, b):
            fields.append(PairingField(rho, alg, i, j))
            coeffs.append(x * y)
    if not fields:
        return SumField([PairingField(rho, alg, 0, 0)], [0])
    by_parity: dict = {}
    for f, c in zip(fields, coeffs):
        by_parity.setdefault(f.parity, ([], []))
        by_parity[f.parity][0].append(f)
        by_parity[f.parity][1].append(c)
    if len(by_parity) > 1:
        raise ValueError("pairing of non-homogeneous elements")
    fs, cs = by_parity.popitem()[1]
    return SumField(fs, cs)


# ---------------------------------------------------------------------------
# coderivations


class Coderivation:
    """``Phi = id * phi`` for a sum of homogeneous vector fields ``phi``.

    ``Phi(X_1...X_n) = sum a(X, p) X_p1...X_pj . phi(rest)``, i.e. the
    convolution of the identity with ``phi`` over the coproduct.
    """

    def __init__(self, fields: Sequence[VectorField], coeffs: Sequence | None = None):
        if not fields:
            raise ValueError("need at least one field")
        self.algebra = fields[0].algebra
        ring = self.algebra.ring
        self.fields = list(fields)
        self.coeffs = [ring.coerce(c) for c in (coeffs or [1] * len(fields))]
        self._memo: dict = {}

    @classmethod
    def of(cls, field: VectorField) -> "Coderivation":
        return cls([field])

    @property
    def parity(self) -> int | None:
        ps = {f.parity for f, c in zip(self.fields, self.coeffs) if c != 0}
        return ps.pop() if len(ps) == 1 else (0 if not ps else None)

    def on_mono(self, m: Mono) -> dict:
        hit = self._memo.get(m)
        if hit is not None:
            return hit
        alg = self.algebra
        out: dict = {}
        for f, c in zip(self.fields, self.coeffs):
            if c == 0:
                continue
            for (m1, m2), k in coproduct_mono(alg, m).items():
                v = f.on_mono(m2)
                if not v:
                    continue
                s = -1 if (f.parity and mono_parity(alg, m1)) else 1
                for idx, x in v.items():
                    sg, mm = mono_mul(alg, m1, (idx,))
                    if sg:
                        y = out.get(mm, 0) + c * s * k * sg * x
                        if y == 0:
                            out.pop(mm, None)
                        else:
                            out[mm] = y
        self._memo[m] = out
        return out

    def apply_terms(self, terms: Mapping) -> dict:
        out: dict = {}
        for m, c in terms.items():
            vec_iadd(out, self.on_mono(m), c)
        return out

    def __call__(self, w: SymElement) -> SymElement:
        return w._wrap(self.apply_terms(w.terms))

    def apply(self, w: SymElement) -> SymElement:
        return self(w)

    def as_map(self) -> SymMap:
        p = self.parity
        return SymMap(self.algebra, self.on_mono, 0 if p is None else p, memo=False)


def coderivation(phi: TruncSeries, a: LieElement) -> Coderivation:
    alg = a.algebra
    parts = _homogeneous_parts(alg, a)
    if not parts:
        return Coderivation([GenericField(phi, alg, 0)], [0])
    return Coderivation([basis_field(phi, alg, i) for i, _ in parts], [c for _, c in parts])


def basis_field(phi: TruncSeries, alg: SuperLieAlgebra, i: int) -> GenericField:
    cache = _cache(alg, "fields")
    key = (phi, i)
    hit = cache.get(key)
    if hit is None:
        hit = GenericField(phi, alg, i)
        cache[key] = hit
    return hit


def basis_coderivation(phi: TruncSeries, alg: SuperLieAlgebra, i: int) -> Coderivation:
    """Memoised ``Phi^{x_i}``."""
    cache = _cache(alg, "coderivations")
    key = (phi, i)
    hit = cache.get(key)
    if hit is None:
        hit = Coderivation([basis_field(phi, alg, i)])
        cache[key] = hit
    return hit


def compose(*maps) -> Callable[[dict], dict]:
    """Right-to-left composition of maps acting on terms dicts."""

    def run(terms):
        for f in reversed(maps):
            terms = f.apply_terms(terms)
        return terms

    return run


# ---------------------------------------------------------------------------
# checks


def commutator_terms(F, G, pF: int, pG: int, terms: Mapping) -> dict:
    """``[F, G] = F G - (-1)^{pF pG} G F`` on a terms dict."""
    out = F.apply_terms(G.apply_terms(terms))
    vec_iadd(out, G.apply_terms(F.apply_terms(terms)), -1 if not (pF and pG) else 1)
    return out


def _lambda_bracket(lam: TruncSeries, alg: SuperLieAlgebra, a: int, b: int):
    br = alg.bracket_basis(a, b)
    if not br:
        return None
    return Coderivation([basis_field(lam, alg, k) for k in sorted(br)], [br[k] for k in sorted(br)])


def commutator_defect(
    phi: TruncSeries,
    psi: TruncSeries,
    lam: TruncSeries,
    a: int,
    b: int,
    alg: SuperLieAlgebra,
    D: int = 4,
) -> dict:
    """Nonzero values of ``[Phi^a, Psi^b] - Lambda^{[a,b]}`` on basis monomials
    of degree ``<= D``; an empty dict means the identity holds to degree D.
    ``a``, ``b`` are basis indices."""
    Phi = basis_coderivation(phi, alg, a)
    Psi = basis_coderivation(psi, alg, b)
    Lam = _lambda_bracket(lam, alg, a, b)
    P = alg.parities
    bad = {}
    one = alg.ring.one
    for m in monomials_upto(alg, D):
        terms = {m: one}
        out = commutator_terms(Phi, Psi, P[a], P[b], terms)
        if Lam is not None:
            vec_iadd(out, Lam.apply_terms(terms), -1)
        if out:
            bad[m] = SymElement(alg, out)
    return bad


def representation_defects(phi, psi, lam, alg: SuperLieAlgebra, D: int = 4):
    """Run :func:`commutator_defect` for every ordered basis pair."""
    out = {}
    for a in range(alg.dim):
        for b in range(alg.dim):
            bad = commutator_defect(phi, psi, lam, a, b, alg, D)
            if bad:
                out[(a, b)] = bad
    return out


def lift_morphism(f: LieMorphism) -> Callable[[dict], dict]:
    """The algebra morphism ``S(g) -> S(h)`` induced by ``f``, on terms dicts."""
    T = f.target

    def on_mono(m):
        acc = {(): T.ring.one}
        for i in m:
            acc = sym_mul_terms(T, acc, {(k,): c for k, c in f.images[i].items()})
        return acc

    def run(terms):
        out: dict = {}
        for m, c in terms.items():
            vec_iadd(out, on_mono(m), c)
        return out

    return run


def functoriality_check(f: LieMorphism, phi: TruncSeries, D: int = 3, phi_target: TruncSeries | None = None) -> dict:
    """Failures of ``f~ o Phi^a = Phi^{f(a)} o f~`` on monomials of degree <= D,
    keyed by ``(a, monomial)``."""
    S, T = f.source, f.target
    phi_t = phi_target or phi
    ft = lift_morphism(f)
    bad = {}
    one = S.ring.one
    for a in range(S.dim):
        Phi = basis_coderivation(phi, S, a)
        fa = f.images[a]
        PhiT = Coderivation([basis_field(phi_t, T, k) for k in sorted(fa)], [fa[k] for k in sorted(fa)]) if fa else None
        for m in monomials_upto(S, D):
            lhs = ft(Phi.on_mono(m))
            rhs = PhiT.apply_terms(ft({m: one})) if PhiT else {}
            diff = dict(lhs)
            vec_iadd(diff, rhs, -1)
            if diff:
                bad[(a, m)] = SymElement(T, diff)
    return bad


def derivative_formula_check(q: TruncSeries, Y: int, Z: int, alg: SuperLieAlgebra, D: int = 3) -> dict:
    """Failures of ``d(Y)(q(ad x)(Z)) = ((q(t+u)-q(u))/t : [Y, Z])_x`` on
    monomials of degree <= D, where ``d(Y) f = (-1)^{p(f)p(Y)} f o Y^L``."""
    P = alg.parities
    f = basis_field(q, alg, Z)
    rhs_field = PairingField(divided_difference(q, "by_t"), alg, Y, Z)
    bad = {}
    for m in monomials_upto(alg, D):
        sg, ym = mono_mul(alg, (Y,), m)
        lhs: Vec = {}
        if sg:
            s = sg * (-1 if P[Y] * P[Z] else 1)
            for k, x in f.on_mono(ym).items():
                lhs[k] = s * x
        diff = dict(lhs)
        vec_iadd(diff, rhs_field.on_mono(m), -1)
        if diff:
            bad[m] = SymElement.from_vec(alg, diff)
    return bad


def rescale_map(alg: SuperLieAlgebra, c, inverse: bool = False) -> SymMap:
    """``f_c``: multiply degree n by ``c^n``."""
    ring = alg.ring
    c = ring.coerce(c)
    if inverse:
        c = ring.inv(c)
    return SymMap(alg, lambda m: {m: c ** len(m) if len(m) else ring.one}, 0)


class _CombinedMap(SymMap):
    def __init__(self, maps: Sequence[SymMap], coeffs: Sequence):
        alg = maps[0].algebra
        self._parts = list(zip(maps, [alg.ring.coerce(c) for c in coeffs]))

        def fn(m):
            out: dict = {}
            for f, c in self._parts:
                vec_iadd(out, f.on_mono(m), c)
            return out

        super().__init__(alg, fn, maps[0].parity)


def composition_formula_check(
    phi: TruncSeries,
    psi: TruncSeries,
    a: int,
    b: int,
    alg: SuperLieAlgebra,
    D: int = 3,
    variable: str = "u",
) -> dict:
    """Failures of
    ``Phi^a o Psi^b = id * (phi^a * psi^b - ((phi(t+u)-phi(t))/u psi(v) : [a,b])_x)``
    on monomials of degree <= D, where ``v`` is ``u`` or ``t``.

    The series are purely even, so the sign in front of the pairing is +1.
    """
    if variable not in ("t", "u"):
        raise ValueError("variable must be 't' or 'u'")
    dd = divided_difference(phi, "by_u")
    p = psi.truncate(dd.cap)
    rho = dd * (p.in_u() if variable == "u" else p.in_t())
    fa = basis_field(phi, alg, a).as_map()
    gb = basis_field(psi, alg, b).as_map()
    pair = PairingField(rho, alg, a, b).as_map()
    inner = _CombinedMap([convolve(fa, gb), pair], [1, -1])
    rhs = convolve(identity_map(alg), inner)
    Phi = basis_coderivation(phi, alg, a)
    Psi = basis_coderivation(psi, alg, b)
    bad = {}
    one = alg.ring.one
    for m in monomials_upto(alg, D):
        diff = Phi.apply_terms(Psi.on_mono(m))
        vec_iadd(diff, rhs.on_mono(m), -1)
        if diff:
            bad[m] = SymElement(alg, diff)
    return bad


def vector_rank(vectors: Sequence[Vec]) -> int:
    """Rank of sparse vectors over a field (exact Gaussian elimination)."""
    rows = [dict(v) for v in vectors if v]
    rank = 0
    while rows:
        pivot_row = rows.pop()
        if not pivot_row:
            continue
        k, c = min(pivot_row.items())
        rank += 1
        new = []
        for r in rows:
            x = r.get(k)
            if x:
                f = x / c
                r = dict(r)
                vec_iadd(r, pivot_row, -f)
            if r:
                new.append(r)
        rows = new
    return rank


def pairing_vectors(alg: SuperLieAlgebra, alpha: int, beta: int, xs: Sequence[int]) -> list[Vec]:
    """``(t^i u^{p-i} : [alpha, beta])_x (X_1...X_p)`` for ``i = 0..p`` (``p = len(xs)``)."""
    p = len(xs)
    s, m = mono_from_word(alg, list(xs))
    if not s:
        return [{} for _ in range(p + 1)]
    out = []
    for i in range(p + 1):
        rho = BiTruncSeries.from_dict(alg.ring, p, {(i, p - i): 1})
        v = PairingField(rho, alg, alpha, beta).on_mono(m)
        out.append({k: s * c for k, c in v.items()})
    return out
