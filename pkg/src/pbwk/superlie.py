"""Finite-rank Lie superalgebras given by structure constants.

Vectors are sparse ``dict[int, scalar]`` keyed by basis index; the thin
:class:`LieElement` wrapper carries the algebra along for user-facing code.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .coeff import QQ, Ring

Vec = dict  # basis index -> nonzero scalar


class AlgebraMismatch(ValueError):
    pass


class Unsupported(NotImplementedError):
    pass


# ---------------------------------------------------------------------------
# sparse vector helpers


def vec_add(u: Vec, v: Vec, c=1) -> Vec:
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if y == 0:
            out.pop(k, None)
        else:
            out[k] = y
    return out


def vec_iadd(acc: Vec, v: Mapping, c=1) -> None:
    for k, x in v.items():
        y = acc.get(k, 0) + c * x
        if y == 0:
            acc.pop(k, None)
        else:
            acc[k] = y


def vec_scale(v: Vec, c) -> Vec:
    if c == 0:
        return {}
    out = {}
    for k, x in v.items():
        y = c * x
        if y != 0:
            out[k] = y
    return out


# ---------------------------------------------------------------------------


def koszul_sign(parities: Sequence[int], permutation: Sequence[int]) -> int:
    """Sign ``alpha`` with ``X_{s(0)} ... X_{s(n-1)} = alpha X_0 ... X_{n-1}``
    in a supercommutative algebra: ``-1`` per inverted pair of odd factors."""
    n = len(permutation)
    if sorted(permutation) != list(range(n)):
        raise ValueError("not a permutation")
    odd = [permutation[k] for k in range(n) if parities[permutation[k]] % 2]
    inv = 0
    for i in range(len(odd)):
        for j in range(i + 1, len(odd)):
            if odd[i] > odd[j]:
                inv += 1
    return -1 if inv % 2 else 1


class SuperLieAlgebra:
    """Basis labels, parities and a bracket table ``(i, j) -> vector``.

    The table may be given for every ordered pair, or only for ``i <= j`` with
    ``fill_antisymmetry=True``, in which case ``[x_j, x_i]`` is filled in as
    ``-(-1)^{p_i p_j} [x_i, x_j]``.  Missing pairs are zero.
    """

    def __init__(
        self,
        ring: Ring,
        labels: Sequence[str],
        parities: Sequence[int],
        brackets: Mapping[tuple[int, int], Mapping[int, object]],
        fill_antisymmetry: bool = False,
        name: str | None = None,
    ):
        if len(labels) != len(parities):
            raise ValueError("labels and parities differ in length")
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate basis labels")
        self.ring = ring
        self.labels = tuple(labels)
        self.parities = tuple(int(p) % 2 for p in parities)
        self.name = name
        self._index = {l: i for i, l in enumerate(self.labels)}
        table: dict[tuple[int, int], Vec] = {}
        for (i, j), v in brackets.items():
            vv = {k: ring.coerce(c) for k, c in v.items()}
            vv = {k: c for k, c in vv.items() if c != 0}
            if vv:
                table[(i, j)] = vv
        if fill_antisymmetry:
            for (i, j), v in list(table.items()):
                if i < j and (j, i) not in table:
                    s = 1 if self.parities[i] * self.parities[j] else -1
                    table[(j, i)] = vec_scale(v, s)
        self.table = table

    # -- basics -----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"no basis element {label!r}") from None

    def basis(self, label_or_index) -> "LieElement":
        i = label_or_index if isinstance(label_or_index, int) else self.index(label_or_index)
        return LieElement(self, {i: self.ring.one})

    def element(self, coords: Mapping) -> "LieElement":
        return LieElement(self, {(k if isinstance(k, int) else self.index(k)): self.ring.coerce(c) for k, c in coords.items()})

    def parity_of(self, v: Vec) -> int | None:
        ps = {self.parities[k] for k in v}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def bracket_basis(self, i: int, j: int) -> Vec:
        return self.table.get((i, j), {})

    def bracket_vec(self, u: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for i, a in u.items():
            for j, b in v.items():
                w = self.table.get((i, j))
                if w:
                    vec_iadd(out, w, a * b)
        return out

    def ad_vec(self, i: int, v: Vec) -> Vec:
        """``ad x_i`` applied to a vector."""
        out: Vec = {}
        for j, b in v.items():
            w = self.table.get((i, j))
            if w:
                vec_iadd(out, w, b)
        return out

    def bracket(self, a: "LieElement", b: "LieElement") -> "LieElement":
        if a.algebra is not self or b.algebra is not self:
            raise AlgebraMismatch("elements belong to different algebras")
        return LieElement(self, self.bracket_vec(a.coords, b.coords))

    def ad_power(self, xs: Sequence["LieElement"], a: "LieElement") -> "LieElement":
        """``ad X_1 o ... o ad X_r (a)`` (``X_r`` acts first)."""
        v = a.coords
        for x in reversed(xs):
            if x.algebra is not self:
                raise AlgebraMismatch("elements belong to different algebras")
            v = self.bracket_vec(x.coords, v)
        return LieElement(self, v)

    def is_abelian(self) -> bool:
        return not self.table

    def format_vec(self, v: Vec) -> str:
        from .symcoalg import SymElement

        return str(SymElement(self, {(k,): c for k, c in v.items()}))

    def with_ring(self, ring: Ring) -> "SuperLieAlgebra":
        """Base change (structure constants must coerce into ``ring``)."""
        return SuperLieAlgebra(
            ring,
            self.labels,
            self.parities,
            {k: {i: ring.coerce(_lift(c)) for i, c in v.items()} for k, v in self.table.items()},
            name=self.name,
        )

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"<SuperLieAlgebra{nm} over {self.ring}: {', '.join(self.labels)}>"

    # -- file format --------------------------------------------------------

    def to_json(self) -> dict:
        brackets = []
        for (i, j), v in sorted(self.table.items()):
            if i > j:
                continue
            brackets.append(
                {
                    "left": self.labels[i],
                    "right": self.labels[j],
                    "value": [{"basis": self.labels[k], "coeff": str(c)} for k, c in sorted(v.items())],
                }
            )
        return {
            "ring": str(self.ring),
            "basis": [{"label": l, "parity": p} for l, p in zip(self.labels, self.parities)],
            "brackets": brackets,
        }

    @classmethod
    def from_json(cls, data: dict, ring: Ring | None = None) -> "SuperLieAlgebra":
        ring = ring or Ring.parse(data.get("ring", str(Ring.default())))
        labels = [b["label"] for b in data["basis"]]
        parities = [int(b.get("parity", 0)) for b in data["basis"]]
        index = {l: i for i, l in enumerate(labels)}
        table: dict = {}
        for entry in data.get("brackets", []):
            try:
                i, j = index[entry["left"]], index[entry["right"]]
            except KeyError as e:
                raise ValueError(f"unknown basis label {e.args[0]!r} in brackets") from None
            if i > j:
                raise ValueError(
                    f"bracket [{entry['left']},{entry['right']}] must be listed with left index <= right index"
                )
            if (i, j) in table:
                raise ValueError(f"bracket [{entry['left']},{entry['right']}] listed twice")
            vec = {}
            for term in entry.get("value", []):
                if term["basis"] not in index:
                    raise ValueError(f"unknown basis label {term['basis']!r}")
                k = index[term["basis"]]
                vec[k] = vec.get(k, 0) + Fraction(str(term.get("coeff", "1")))
            table[(i, j)] = vec
        return cls(ring, labels, parities, table, fill_antisymmetry=True, name=data.get("name"))

    @classmethod
    def load(cls, path, ring: Ring | None = None) -> "SuperLieAlgebra":
        with open(path) as fh:
            return cls.from_json(json.load(fh), ring)

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)
            fh.write("\n")


def _lift(c):
    # Residues and ints pass through coerce unchanged in value.
    return c.value if hasattr(c, "modulus") else c


@dataclass(frozen=True)
class LieElement:
    algebra: SuperLieAlgebra
    coords: dict = field(hash=False)

    def __add__(self, other: "LieElement") -> "LieElement":
        self._same(other)
        return LieElement(self.algebra, vec_add(self.coords, other.coords))

    def __sub__(self, other: "LieElement") -> "LieElement":
        self._same(other)
        return LieElement(self.algebra, vec_add(self.coords, other.coords, -1))

    def __neg__(self):
        return LieElement(self.algebra, vec_scale(self.coords, -1))

    def __rmul__(self, c):
        return LieElement(self.algebra, vec_scale(self.coords, self.algebra.ring.coerce(c)))

    def _same(self, other):
        if other.algebra is not self.algebra:
            raise AlgebraMismatch("elements belong to different algebras")

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.algebra is other.algebra and self.coords == other.coords

    def __hash__(self):
        return hash(frozenset(self.coords.items()))

    @property
    def parity(self) -> int | None:
        return self.algebra.parity_of(self.coords)

    def is_zero(self) -> bool:
        return not self.coords

    def __str__(self):
        return self.algebra.format_vec(self.coords)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    detail: str = ""

    def __str__(self):
        return f"{self.axiom}: witness {self.witness}" + (f" ({self.detail})" if self.detail else "")


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


def _random_homogeneous(alg: SuperLieAlgebra, parity: int, rng: random.Random) -> Vec:
    idx = [i for i, p in enumerate(alg.parities) if p == parity]
    v: Vec = {}
    for i in idx:
        c = alg.ring.random(rng)
        if c != 0:
            v[i] = c
    return v


def validate(alg: SuperLieAlgebra, samples: int = 100, seed: int = 0) -> ValidationReport:
    """Check antisymmetry, ``[X,X] = 0`` (X even), Jacobi and ``[Y,[Y,Y]] = 0``
    (Y odd), plus parity homogeneity of the table.

    The two squaring axioms follow from the others when 2 (resp. 3) is a
    unit; otherwise they are additionally tested on ``samples`` random
    homogeneous combinations.
    """
    rep = ValidationReport()
    n, P, L = alg.dim, alg.parities, alg.labels

    for (i, j), v in alg.table.items():
        bad = [k for k in v if P[k] != (P[i] + P[j]) % 2]
        if bad:
            rep.violations.append(Violation("parity", (L[i], L[j]), f"component {L[bad[0]]} has the wrong parity"))

    for i in range(n):
        for j in range(i, n):
            s = -1 if P[i] * P[j] else 1
            lhs = alg.bracket_basis(i, j)
            rhs = vec_scale(alg.bracket_basis(j, i), -s)
            if lhs != rhs:
                rep.violations.append(Violation("antisymmetry", (L[i], L[j])))

    for i in range(n):
        if P[i] == 0 and alg.bracket_basis(i, i):
            rep.violations.append(Violation("even square", (L[i],)))

    for i in range(n):
        for j in range(n):
            xy = alg.bracket_basis(i, j)
            for k in range(n):
                lhs = alg.bracket_vec(xy, {k: 1})
                rhs = alg.ad_vec(i, alg.bracket_basis(j, k))
                s = -1 if P[i] * P[j] else 1
                rhs = vec_add(rhs, alg.ad_vec(j, alg.bracket_basis(i, k)), -s)
                if lhs != rhs:
                    rep.violations.append(Violation("jacobi", (L[i], L[j], L[k])))

    for i in range(n):
        if P[i] == 1:
            if alg.ad_vec(i, alg.bracket_basis(i, i)):
                rep.violations.append(Violation("odd cube", (L[i],)))

    rng = random.Random(seed)
    ring = alg.ring
    if not ring.invertible(2) and any(p == 0 for p in P):
        for _ in range(samples):
            x = _random_homogeneous(alg, 0, rng)
            if alg.bracket_vec(x, x):
                rep.violations.append(Violation("even square", (alg.format_vec(x),)))
                break
    if not ring.invertible(3) and any(p == 1 for p in P):
        for _ in range(samples):
            y = _random_homogeneous(alg, 1, rng)
            if alg.bracket_vec(y, alg.bracket_vec(y, y)):
                rep.violations.append(Violation("odd cube", (alg.format_vec(y),)))
                break
    return rep


def is_nilpotent(alg: SuperLieAlgebra, N: int) -> bool:
    """Whether every composition ``ad X_1 o ... o ad X_N`` vanishes.

    By multilinearity it suffices to take basis elements throughout.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    layer = {frozenset({k: alg.ring.one}.items()) for k in range(alg.dim)}
    for _ in range(N):
        nxt = set()
        for fv in layer:
            v = dict(fv)
            for i in range(alg.dim):
                w = alg.ad_vec(i, v)
                if w:
                    nxt.add(frozenset(w.items()))
        if not nxt:
            return True
        layer = nxt
    return False


def nilpotency_class(alg: SuperLieAlgebra, max_class: int = 12) -> int | None:
    """Smallest N with ``is_nilpotent(alg, N)``, or None if above ``max_class``."""
    for N in range(1, max_class + 1):
        if is_nilpotent(alg, N):
            return N
    return None


# ---------------------------------------------------------------------------
# morphisms


class LieMorphism:
    """Linear map given on basis elements: ``images[i]`` is a target vector."""

    def __init__(self, source: SuperLieAlgebra, target: SuperLieAlgebra, images: Mapping[int, Mapping]):
        self.source = source
        self.target = target
        self.images = {
            i: {k: target.ring.coerce(c) for k, c in images.get(i, {}).items() if c != 0}
            for i in range(source.dim)
        }
        self.images = {i: {k: c for k, c in v.items() if c != 0} for i, v in self.images.items()}

    @classmethod
    def from_labels(cls, source, target, images: Mapping[str, Mapping[str, object]]) -> "LieMorphism":
        return cls(
            source,
            target,
            {source.index(a): {target.index(b): c for b, c in v.items()} for a, v in images.items()},
        )

    @classmethod
    def identity(cls, alg: SuperLieAlgebra) -> "LieMorphism":
        return cls(alg, alg, {i: {i: 1} for i in range(alg.dim)})

    def apply_vec(self, v: Vec) -> Vec:
        out: Vec = {}
        for i, c in v.items():
            vec_iadd(out, self.images[i], c)
        return out

    def __call__(self, a: LieElement) -> LieElement:
        if a.algebra is not self.source:
            raise AlgebraMismatch("element is not in the source algebra")
        return LieElement(self.target, self.apply_vec(a.coords))

    def check(self) -> ValidationReport:
        """Parity preservation and ``f[x_i, x_j] = [f x_i, f x_j]`` on all basis pairs."""
        rep = ValidationReport()
        S, T = self.source, self.target
        for i, v in self.images.items():
            if any(T.parities[k] != S.parities[i] for k in v):
                rep.violations.append(Violation("parity", (S.labels[i],)))
        for i in range(S.dim):
            for j in range(S.dim):
                lhs = self.apply_vec(S.bracket_basis(i, j))
                rhs = T.bracket_vec(self.images[i], self.images[j])
                if lhs != rhs:
                    rep.violations.append(Violation("bracket", (S.labels[i], S.labels[j])))
        return rep

    def to_json(self) -> dict:
        return {
            "images": {
                self.source.labels[i]: [{"basis": self.target.labels[k], "coeff": str(c)} for k, c in sorted(v.items())]
                for i, v in self.images.items()
            }
        }

    @classmethod
    def from_json(cls, data: dict, source, target) -> "LieMorphism":
        imgs = {}
        for a, terms in data["images"].items():
            imgs[a] = {}
            for t in terms:
                imgs[a][t["basis"]] = Fraction(str(t.get("coeff", "1")))
        return cls.from_labels(source, target, imgs)


def apply_morphism(f: LieMorphism, a: LieElement) -> LieElement:
    return f(a)


# ---------------------------------------------------------------------------
# free nilpotent algebras


def lyndon_words(k: int, n: int) -> list[tuple[int, ...]]:
    """Lyndon words over ``0..k-1`` of length ``<= n`` in lexicographic order (Duval)."""
    out = []
    if k <= 0 or n <= 0:
        return out
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


def standard_factorization(w: tuple[int, ...]) -> tuple[tuple, tuple]:
    """``w = u v`` with ``v`` the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        v = w[i:]
        if _is_lyndon(v):
            return w[:i], v
    raise ValueError("a letter has no standard factorization")


def _is_lyndon(w: tuple) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w))) and all(w < w[i:] for i in range(1, len(w)))


# noncommutative polynomials over Z: dict word -> int


def _np_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            w = u + v
            s = out.get(w, 0) + x * y
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    return out


def _np_bracket(a: dict, b: dict) -> dict:
    ab, ba = _np_mul(a, b), _np_mul(b, a)
    out = dict(ab)
    for w, y in ba.items():
        s = out.get(w, 0) - y
        if s:
            out[w] = s
        else:
            out.pop(w, None)
    return out


def lyndon_word_count(k: int, n: int) -> int:
    """Witt's formula: number of Lyndon words of length exactly n on k letters."""
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _mobius(d) * k ** (n // d)
    return total // n


def _mobius(n: int) -> int:
    res, p, m = 1, 2, n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            res = -res
        p += 1
    if m > 1:
        res = -res
    return res


def free_nilpotent(generators, N: int, ring: Ring = QQ) -> SuperLieAlgebra:
    """The free N-nilpotent Lie algebra on even generators, in the Lyndon basis.

    ``generators`` is a count or a list of labels, or of ``(label, parity)``
    pairs.  Basis: Lyndon words of length <= N in lexicographic order
    (generator order as given), each standing for its standard bracketing;
    brackets of total length > N are zero.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if isinstance(generators, int):
        gens = [chr(ord("a") + i) for i in range(generators)] if generators <= 26 else [f"g{i}" for i in range(generators)]
        gens = [(g, 0) for g in gens]
    else:
        gens = [(g, 0) if isinstance(g, str) else (g[0], int(g[1])) for g in generators]
    if any(p % 2 for _, p in gens):
        raise Unsupported("free nilpotent algebras with odd generators are not supported")
    k = len(gens)
    names = [g for g, _ in gens]
    words = lyndon_words(k, N)
    sep = "" if all(len(g) == 1 for g in names) else "_"
    labels = [sep.join(names[c] for c in w) for w in words]
    index = {w: i for i, w in enumerate(words)}

    poly: dict[tuple, dict] = {}
    for w in sorted(words, key=len):
        if len(w) == 1:
            poly[w] = {w: 1}
        else:
            u, v = standard_factorization(w)
            poly[w] = _np_bracket(poly[u], poly[v])

    def decompose(p: dict) -> dict:
        # The smallest word of a Lie polynomial's support is Lyndon and is the
        # leading word of its basis polynomial (with coefficient 1).
        p = dict(p)
        out: dict = {}
        while p:
            w = min(p)
            c = p[w]
            if w not in index:
                raise AssertionError(f"leading word {w} is not a Lyndon basis word")
            out[index[w]] = out.get(index[w], 0) + c
            for x, y in poly[w].items():
                s = p.get(x, 0) - c * y
                if s:
                    p[x] = s
                else:
                    p.pop(x, None)
        return out

    table = {}
    for i, wi in enumerate(words):
        for j, wj in enumerate(words):
            if i >= j or len(wi) + len(wj) > N:
                continue
            table[(i, j)] = decompose(_np_bracket(poly[wi], poly[wj]))
    return SuperLieAlgebra(
        ring,
        labels,
        [0] * len(words),
        table,
        fill_antisymmetry=True,
        name=f"free_nilpotent({k},{N})",
    )


# ---------------------------------------------------------------------------
# built-in examples


def abelian(labels: Sequence[str] = ("x", "y"), ring: Ring = QQ, parities=None) -> SuperLieAlgebra:
    return SuperLieAlgebra(ring, labels, parities or [0] * len(labels), {}, name="abelian")


def heisenberg(ring: Ring = QQ) -> SuperLieAlgebra:
    """``{x, y, z | [x, y] = z}``, basis order x < y < z."""
    return SuperLieAlgebra(ring, "xyz", [0, 0, 0], {(0, 1): {2: 1}}, fill_antisymmetry=True, name="heisenberg")


def sl2(ring: Ring = QQ) -> SuperLieAlgebra:
    """``{e, f, h | [e, f] = h, [h, e] = 2e, [h, f] = -2f}``."""
    return SuperLieAlgebra(
        ring,
        ("e", "f", "h"),
        [0, 0, 0],
        {(0, 1): {2: 1}, (0, 2): {0: -2}, (1, 2): {1: 2}},
        fill_antisymmetry=True,
        name="sl2",
    )


def super_example(ring: Ring = QQ, e_square=0) -> SuperLieAlgebra:
    """gl(1|1)-style: even ``h``; odd ``e, f``; ``[e, f] = h``, ``h`` central.

    ``e_square`` sets ``[e, e] = e_square * h``.
    """
    table = {(1, 2): {0: 1}}
    if e_square:
        table[(1, 1)] = {0: e_square}
    return SuperLieAlgebra(ring, ("h", "e", "f"), [0, 1, 1], table, fill_antisymmetry=True, name="super_example")


def odd_line(ring: Ring) -> SuperLieAlgebra:
    """One odd generator ``e`` with ``[e, e] = 0``."""
    return SuperLieAlgebra(ring, ("e",), [1], {}, name="odd_line")


BUILTINS = {
    "heisenberg": heisenberg,
    "sl2": sl2,
    "super": super_example,
}


def _extend_generators(alg: SuperLieAlgebra, gen_images: Mapping[int, Vec]) -> LieMorphism:
    # Basis labels of a free nilpotent algebra spell their Lyndon word.
    gens = [i for i, l in enumerate(alg.labels) if len(l) == 1]
    letter = {alg.labels[i]: n for n, i in enumerate(gens)}
    images: dict[int, Vec] = {}

    def image(word: tuple) -> Vec:
        if len(word) == 1:
            return gen_images[gens[word[0]]]
        u, v = standard_factorization(word)
        return alg.bracket_vec(image(u), image(v))

    for i, l in enumerate(alg.labels):
        images[i] = image(tuple(letter[ch] for ch in l))
    return LieMorphism(alg, alg, images)


def standard_automorphisms(alg: SuperLieAlgebra) -> list[tuple[str, LieMorphism]]:
    """A rescaling and a permutation automorphism for the built-in algebras."""
    name = (alg.name or "").split("(")[0]
    if name == "heisenberg":
        return [
            ("rescale", LieMorphism(alg, alg, {0: {0: 2}, 1: {1: 3}, 2: {2: 6}})),
            ("swap", LieMorphism(alg, alg, {0: {1: 1}, 1: {0: 1}, 2: {2: -1}})),
        ]
    if name == "sl2":
        out = [("swap", LieMorphism(alg, alg, {0: {1: 1}, 1: {0: 1}, 2: {2: -1}}))]
        if alg.ring.invertible(2):
            out.insert(0, ("rescale", LieMorphism(alg, alg, {0: {0: 2}, 1: {1: Fraction(1, 2)}, 2: {2: 1}})))
        return out
    if name == "super_example":
        return [
            ("rescale", LieMorphism(alg, alg, {0: {0: 2}, 1: {1: 2}, 2: {2: 1}})),
            ("swap", LieMorphism(alg, alg, {0: {0: 1}, 1: {2: 1}, 2: {1: 1}})),
        ]
    if name == "free_nilpotent":
        gens = [i for i, l in enumerate(alg.labels) if len(l) == 1]
        one = alg.ring.one
        out = [("rescale", _extend_generators(alg, {g: {g: (2 if n == 0 else 1) * one} for n, g in enumerate(gens)}))]
        if len(gens) >= 2:
            perm = {gens[0]: {gens[1]: one}, gens[1]: {gens[0]: one}}
            perm.update({g: {g: one} for g in gens[2:]})
            out.append(("swap", _extend_generators(alg, perm)))
        return out
    return []
