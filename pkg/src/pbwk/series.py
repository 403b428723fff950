"""Truncated power series in ``t`` and in ``(t, u)``, and the functional
equations the coderivation representations are governed by.

A :class:`TruncSeries` of cap ``D`` knows its coefficients of degree
``0..D`` and nothing above; a :class:`BiTruncSeries` of cap ``D`` knows the
coefficients of ``t^i u^j`` for ``i + j <= D``.  Caps never get mixed
silently: combining two series of different caps is an error, and every
operation that loses precision (derivative, divided difference) lowers the
cap of its result accordingly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

from .coeff import QQ, NotInvertible, Ring, first_non_invertible


class CapMismatch(ValueError):
    pass


def _check_same(a, b):
    if a.ring != b.ring:
        raise ValueError(f"ring mismatch: {a.ring} vs {b.ring}")
    if a.cap != b.cap:
        raise CapMismatch(f"cap mismatch: {a.cap} vs {b.cap}")


class TruncSeries:
    """``c_0 + c_1 t + ... + c_D t^D  (mod t^(D+1))`` over an exact ring."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: Ring, coeffs: Iterable, cap: int | None = None):
        cs = [ring.coerce(c) for c in coeffs]
        if cap is not None:
            if cap < 0:
                raise ValueError("cap must be >= 0")
            cs = (cs + [ring.zero] * (cap + 1))[: cap + 1]
        if not cs:
            raise ValueError("a series needs at least the constant coefficient")
        self.ring = ring
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, ring: Ring, cap: int) -> "TruncSeries":
        return cls(ring, [], cap)

    @classmethod
    def constant(cls, ring: Ring, c, cap: int) -> "TruncSeries":
        return cls(ring, [c], cap)

    @classmethod
    def monomial(cls, ring: Ring, k: int, cap: int, c=1) -> "TruncSeries":
        return cls(ring, [0] * k + [c], cap)

    @property
    def cap(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        if k < 0:
            raise IndexError(k)
        if k > self.cap:
            raise IndexError(f"degree {k} is beyond the cap {self.cap}")
        return self.coeffs[k]

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.constant(self.ring, other, self.cap)
        _check_same(self, other)
        return TruncSeries(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.ring, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        _check_same(self, other)
        D = self.cap
        a, b = self.coeffs, other.coeffs
        zero = self.ring.zero
        out = []
        for n in range(D + 1):
            s = zero
            for i in range(n + 1):
                s = s + a[i] * b[n - i]
            out.append(s)
        return TruncSeries(self.ring, out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "TruncSeries":
        c = self.ring.coerce(c)
        return TruncSeries(self.ring, [c * a for a in self.coeffs])

    def truncate(self, cap: int) -> "TruncSeries":
        if cap > self.cap:
            raise CapMismatch(f"cannot raise cap {self.cap} to {cap}")
        return TruncSeries(self.ring, self.coeffs[: cap + 1])

    def derivative(self) -> "TruncSeries":
        """d/dt; the result has cap one less (cap 0 stays 0)."""
        if self.cap == 0:
            return TruncSeries.zero(self.ring, 0)
        return TruncSeries(self.ring, [k * self.coeffs[k] for k in range(1, self.cap + 1)])

    def inverse(self) -> "TruncSeries":
        """Multiplicative inverse; needs an invertible constant term."""
        c0inv = self.ring.inv(self.coeffs[0])
        zero = self.ring.zero
        out = [c0inv]
        for n in range(1, self.cap + 1):
            s = zero
            for i in range(1, n + 1):
                s = s + self.coeffs[i] * out[n - i]
            out.append(-c0inv * s)
        return TruncSeries(self.ring, out)

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return self * other.inverse()
        return self.scale(self.ring.inv(self.ring.coerce(other)))

    def mul_t(self) -> "TruncSeries":
        """Multiply by ``t`` keeping the cap (the top coefficient falls off)."""
        return TruncSeries(self.ring, (self.ring.zero,) + self.coeffs[:-1])

    def rescale(self, a) -> "TruncSeries":
        """``t -> a t``."""
        a = self.ring.coerce(a)
        out, p = [], self.ring.one
        for c in self.coeffs:
            out.append(c * p)
            p = p * a
        return TruncSeries(self.ring, out)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def compose_shift(self) -> "BiTruncSeries":
        """``q(t + u)`` as a bivariate series of the same cap."""
        D = self.cap
        table = BiTruncSeries.zero(self.ring, D).rows()
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            for i in range(k + 1):
                table[i][k - i] = table[i][k - i] + c * comb(k, i)
        return BiTruncSeries(self.ring, table)

    def in_t(self) -> "BiTruncSeries":
        """``q(t)`` viewed in two variables."""
        rows = BiTruncSeries.zero(self.ring, self.cap).rows()
        for i, c in enumerate(self.coeffs):
            rows[i][0] = c
        return BiTruncSeries(self.ring, rows)

    def in_u(self) -> "BiTruncSeries":
        """``q(u)`` viewed in two variables."""
        rows = BiTruncSeries.zero(self.ring, self.cap).rows()
        for j, c in enumerate(self.coeffs):
            rows[0][j] = c
        return BiTruncSeries(self.ring, rows)

    def __repr__(self):
        return f"TruncSeries({self.ring}, {format_series(self)!r}, cap={self.cap})"

    def __str__(self):
        return format_series(self)


def _term(c, mono: str) -> tuple[str, str]:
    s = str(c)
    neg = s.startswith("-")
    if neg:
        s = s[1:]
    if mono:
        body = mono if s == "1" else f"{s}*{mono}"
    else:
        body = s
    return ("-" if neg else "+"), body


def _join(terms: list[tuple[str, str]]) -> str:
    if not terms:
        return "0"
    sign, body = terms[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def format_series(s: TruncSeries, var: str = "t") -> str:
    terms = []
    for k, c in enumerate(s.coeffs):
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        terms.append(_term(c, mono))
    return _join(terms)


class BiTruncSeries:
    """``sum c[i][j] t^i u^j`` over ``i + j <= cap``."""

    __slots__ = ("ring", "table")

    def __init__(self, ring: Ring, table: Sequence[Sequence]):
        cap = len(table) - 1
        rows = []
        for i, row in enumerate(table):
            if len(row) != cap - i + 1:
                raise ValueError("triangular table has the wrong shape")
            rows.append(tuple(row))
        self.ring = ring
        self.table = tuple(rows)

    @classmethod
    def zero(cls, ring: Ring, cap: int) -> "BiTruncSeries":
        z = ring.zero
        return cls(ring, [[z] * (cap - i + 1) for i in range(cap + 1)])

    @classmethod
    def from_dict(cls, ring: Ring, cap: int, coeffs: dict) -> "BiTruncSeries":
        rows = cls.zero(ring, cap).rows()
        for (i, j), c in coeffs.items():
            if i + j <= cap:
                rows[i][j] = rows[i][j] + ring.coerce(c)
        return cls(ring, rows)

    @property
    def cap(self) -> int:
        return len(self.table) - 1

    def rows(self) -> list[list]:
        return [list(r) for r in self.table]

    def coeff(self, i: int, j: int):
        if i + j > self.cap:
            raise IndexError(f"t^{i} u^{j} is beyond the cap {self.cap}")
        return self.table[i][j]

    def items(self):
        for i, row in enumerate(self.table):
            for j, c in enumerate(row):
                yield (i, j), c

    def nonzero(self) -> dict:
        return {k: c for k, c in self.items() if c != 0}

    def is_zero(self) -> bool:
        return all(c == 0 for _, c in self.items())

    def __eq__(self, other):
        if not isinstance(other, BiTruncSeries):
            return NotImplemented
        return self.ring == other.ring and self.table == other.table

    def __hash__(self):
        return hash((self.ring, self.table))

    def __add__(self, other):
        _check_same(self, other)
        return BiTruncSeries(
            self.ring,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.table, other.table)],
        )

    def __neg__(self):
        return BiTruncSeries(self.ring, [[-a for a in r] for r in self.table])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "BiTruncSeries":
        c = self.ring.coerce(c)
        return BiTruncSeries(self.ring, [[c * a for a in r] for r in self.table])

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, BiTruncSeries):
            return self.scale(other)
        _check_same(self, other)
        D = self.cap
        out = BiTruncSeries.zero(self.ring, D).rows()
        a_nz = self.nonzero()
        b_nz = other.nonzero()
        for (i1, j1), a in a_nz.items():
            for (i2, j2), b in b_nz.items():
                i, j = i1 + i2, j1 + j2
                if i + j <= D:
                    out[i][j] = out[i][j] + a * b
        return BiTruncSeries(self.ring, out)

    def truncate(self, cap: int) -> "BiTruncSeries":
        if cap > self.cap:
            raise CapMismatch(f"cannot raise cap {self.cap} to {cap}")
        return BiTruncSeries(self.ring, [r[: cap - i + 1] for i, r in enumerate(self.table[: cap + 1])])

    def shift(self, di: int, dj: int) -> "BiTruncSeries":
        """Multiply by the monomial ``t^di u^dj``; the cap grows by ``di + dj``."""
        cap = self.cap + di + dj
        out = BiTruncSeries.zero(self.ring, cap).rows()
        for (i, j), c in self.items():
            out[i + di][j + dj] = c
        return BiTruncSeries(self.ring, out)

    def swap(self) -> "BiTruncSeries":
        """``t <-> u``."""
        out = BiTruncSeries.zero(self.ring, self.cap).rows()
        for (i, j), c in self.items():
            out[j][i] = c
        return BiTruncSeries(self.ring, out)

    def diagonal_u(self) -> TruncSeries:
        """The ``t = 0`` specialisation, as a series in ``u``."""
        return TruncSeries(self.ring, [self.table[0][j] for j in range(self.cap + 1)])

    def __repr__(self):
        return f"BiTruncSeries({self.ring}, {str(self)!r}, cap={self.cap})"

    def __str__(self):
        terms = []
        for n in range(self.cap + 1):
            for i in range(n, -1, -1):
                c = self.table[i][n - i]
                if c == 0:
                    continue
                parts = []
                if i:
                    parts.append("t" if i == 1 else f"t^{i}")
                if n - i:
                    parts.append("u" if n - i == 1 else f"u^{n - i}")
                terms.append(_term(c, "*".join(parts)))
        return _join(terms)


def min_cap(*xs: BiTruncSeries) -> int:
    return min(x.cap for x in xs)


def _trunc_sum(*xs: BiTruncSeries) -> BiTruncSeries:
    D = min_cap(*xs)
    out = xs[0].truncate(D)
    for x in xs[1:]:
        out = out + x.truncate(D)
    return out


def _trunc_mul(a: BiTruncSeries, b: BiTruncSeries) -> BiTruncSeries:
    D = min(a.cap, b.cap)
    return a.truncate(D) * b.truncate(D)


# ---------------------------------------------------------------------------
# divided differences


def divided_difference(q: TruncSeries, which: str = "by_t") -> BiTruncSeries:
    """``(q(t+u) - q(u)) / t`` (``by_t``) or ``(q(t+u) - q(t)) / u`` (``by_u``).

    The numerator vanishes on ``t = 0`` (resp. ``u = 0``), so the division is
    exact; the result has cap ``q.cap - 1``.
    """
    if q.cap < 1:
        raise ValueError("divided_difference needs cap >= 1")
    D = q.cap - 1
    rows = BiTruncSeries.zero(q.ring, D).rows()
    for k, c in enumerate(q.coeffs):
        if c == 0 or k == 0:
            continue
        # (t+u)^k - u^k = sum_{i>=1} C(k,i) t^i u^(k-i); divide by t
        for i in range(1, k + 1):
            rows[i - 1][k - i] = rows[i - 1][k - i] + c * comb(k, i)
    out = BiTruncSeries(q.ring, rows)
    if which == "by_t":
        return out
    if which == "by_u":
        return out.swap()
    raise ValueError(f"which must be 'by_t' or 'by_u', not {which!r}")


# ---------------------------------------------------------------------------
# named series


def bernoulli_numbers(n: int) -> list[Fraction]:
    """``b_0 .. b_n`` with ``sum b_k z^k / k! = z / (e^z - 1)`` (so ``b_1 = -1/2``).

    Computed by inverting ``(e^z - 1)/z = sum z^k/(k+1)!`` as a series.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    denom = TruncSeries(QQ, [Fraction(1, factorial(k + 1)) for k in range(n + 1)])
    gen = denom.inverse()
    return [gen[k] * factorial(k) for k in range(n + 1)]


def _require_units(ring: Ring, upto: int):
    k = first_non_invertible(ring, upto)
    if k is not None:
        raise NotInvertible(k, ring)


def phi_c(c, cap: int, ring: Ring = QQ) -> TruncSeries:
    """``t / (e^(t/c) - 1)`` truncated at ``cap``: coefficient ``b_k / (k! c^(k-1))``.

    Needs ``c`` and ``2 .. cap+1`` invertible in ``ring``.
    """
    c = ring.coerce(c)
    cinv = ring.inv(c)
    _require_units(ring, cap + 1)
    # (e^(t/c) - 1)/t = sum_k t^k / ((k+1)! c^(k+1)); invert it.
    out, p = [], cinv
    for k in range(cap + 1):
        out.append(ring.coerce(Fraction(1, factorial(k + 1))) * p)
        p = p * cinv
    return TruncSeries(ring, out).inverse()


def phi_0(cap: int, ring: Ring = QQ) -> TruncSeries:
    """``-t``, the series of the adjoint representation."""
    return TruncSeries(ring, [0, -1], cap) if cap >= 1 else TruncSeries.zero(ring, cap)


def theta_c(c, cap: int, ring: Ring = QQ) -> TruncSeries:
    """``sqrt(c) t coth(sqrt(c) t)`` without square roots.

    The even solution of ``-psi''/2 = psi' (psi - 1)/u - psi (psi - 1)/u^2``
    with ``psi = 1 + (c/3) t^2 + ...``; comparing coefficients of ``u^m``
    gives ``m(m+3)/2 * c_{m+2} = -sum_{k+j=m+2, k,j>=2} (k-1) c_k c_j``.
    """
    c = ring.coerce(c)
    cs = [ring.one, ring.zero]
    if cap >= 2:
        cs.append(c * ring.coerce(Fraction(1, 3)))
    for m in range(1, cap - 1):
        s = ring.zero
        for k in range(2, m + 1):
            j = m + 2 - k
            if j >= 2:
                s = s + (k - 1) * cs[k] * cs[j]
        cs.append(-ring.coerce(Fraction(2, m * (m + 3))) * s)
    return TruncSeries(ring, cs[: cap + 1], cap)


# ---------------------------------------------------------------------------
# functional equations


def defect_general(phi: TruncSeries, psi: TruncSeries, rho: TruncSeries) -> BiTruncSeries:
    """``phi(t)(psi(t+u)-psi(u))/t + (phi(t+u)-phi(t))/u psi(u) - rho(t+u)``.

    Zero exactly when the triple solves the two-series equation up to total
    degree ``cap - 1`` (the highest degree the inputs determine).
    """
    _check_same(phi, psi)
    _check_same(phi, rho)
    if phi.cap < 1:
        raise ValueError("the defect of cap-0 series is empty; need cap >= 1")
    D = phi.cap - 1
    lhs = _trunc_mul(phi.in_t(), divided_difference(psi, "by_t"))
    lhs = lhs + _trunc_mul(divided_difference(phi, "by_u"), psi.in_u())
    return lhs - rho.compose_shift().truncate(D)


def defect_rep(phi: TruncSeries) -> BiTruncSeries:
    """LHS minus RHS of the representation equation

    ``-(phi(t+u)-phi(t))/u phi(u) - phi(t)(phi(t+u)-phi(u))/t = phi(t+u)``.
    """
    return -defect_general(phi, phi, -phi)


def commuting_defect(g: TruncSeries, h: TruncSeries) -> BiTruncSeries:
    """Defect of ``(g, h, 0)``; zero iff the two representations commute."""
    return defect_general(g, h, TruncSeries.zero(g.ring, g.cap))


def solve_rep(c0, cap: int, ring: Ring = QQ) -> TruncSeries:
    """Solve the representation equation degree by degree with ``phi(0) = c0``.

    At total degree ``n - 1`` the new unknown ``c_n`` enters with the
    coefficient vector ``c0 * C(n+1, i+1)``; the ``t^0`` entry ``(n+1) c0``
    is used to solve, the remaining entries are checked for consistency.
    Raises :class:`NotInvertible` naming the first integer that blocks.
    """
    c0 = ring.coerce(c0)
    c0inv = ring.inv(c0)
    cs = [c0] + [ring.zero] * cap
    for n in range(1, cap + 1):
        if not ring.invertible(n + 1):
            raise NotInvertible(n + 1, ring)
        trial = TruncSeries(ring, cs[: n + 1])
        d = defect_rep(trial)  # cap n - 1; degree n - 1 part is affine in c_n
        # with c_n = 0 the degree n-1 part equals the known remainder
        rem = [d.coeff(i, n - 1 - i) for i in range(n)]
        # defect_rep = -(genL defect), so d/dc_n of entry i is -c0*C(n+1, i+1)
        cn = rem[0] * ring.inv(ring.coerce(n + 1)) * c0inv
        cs[n] = cn
        for i in range(n):
            if rem[i] - c0 * comb(n + 1, i + 1) * cn != 0:
                raise ArithmeticError(f"inconsistent equations at degree {n - 1}")
    return TruncSeries(ring, cs)


@dataclass(frozen=True)
class RepSolution:
    """A solution family: ``series`` with the coefficients at ``free`` degrees
    left as arbitrary parameters (set to zero in ``series``)."""

    series: TruncSeries
    free: tuple[int, ...] = ()


def solve_rep_all(c0, cap: int, ring: Ring = QQ) -> list[RepSolution]:
    """Every solution of the truncated representation equation with ``phi(0) = c0``.

    For invertible ``c0`` this is the single :func:`solve_rep` answer.  For
    ``c0 = 0`` (over a field) the degree ``d`` equation fixes ``c_d``: it is
    quadratic for ``d = 1`` and affine afterwards; the top coefficient is
    never constrained at this truncation.
    """
    c0 = ring.coerce(c0)
    if ring.is_unit(c0):
        return [RepSolution(solve_rep(c0, cap, ring))]
    if c0 != 0:
        raise NotInvertible(c0, ring)
    if ring.kind != "rational":
        raise ValueError("the phi(0) = 0 branch is only solved over Q")
    if cap == 0:
        return [RepSolution(TruncSeries.zero(ring, 0))]

    def entries(cs: list, d: int) -> list:
        dd = defect_rep(TruncSeries(ring, cs + [0] * (cap + 1 - len(cs))))
        return [dd.coeff(i, d - i) for i in range(d + 1)]

    branches: list[tuple[list, tuple]] = [([c0], ())]
    for d in range(1, cap):
        new = []
        for cs, free in branches:
            if d == 1:
                # entries are a*c1^2 + b*c1 + e, recovered by interpolation
                e0 = entries(cs + [0], 1)
                e1 = entries(cs + [1], 1)
                em = entries(cs + [-1], 1)
                roots = None
                for v0, v1, vm in zip(e0, e1, em):
                    a = (v1 + vm) / 2 - v0
                    b = (v1 - vm) / 2
                    r = _rational_roots(a, b, v0)
                    roots = r if roots is None else (roots & r if r is not None else roots)
                if roots is None:
                    new.append((cs + [0], free + (1,)))
                else:
                    new.extend((cs + [r], free) for r in sorted(roots))
                continue
            b_ = entries(cs + [0], d)
            a_ = [x - y for x, y in zip(entries(cs + [1], d), b_)]
            sol, ok = None, True
            for a, b in zip(a_, b_):
                if a == 0:
                    ok = ok and b == 0
                    continue
                v = -b / a
                if sol is None:
                    sol = v
                elif sol != v:
                    ok = False
            if not ok:
                continue
            if sol is None:
                new.append((cs + [0], free + (d,)))
            else:
                new.append((cs + [sol], free))
        branches = new
    out = []
    for cs, free in branches:
        cs = cs + [0] * (cap + 1 - len(cs))
        out.append(RepSolution(TruncSeries(ring, cs), free + (cap,)))
    return out


def _rational_roots(a, b, c):
    """Roots in Q of ``a x^2 + b x + c``; None when every x is a root."""
    if a == 0:
        if b == 0:
            return None if c == 0 else set()
        return {-c / b}
    disc = b * b - 4 * a * c
    if disc < 0:
        return set()
    num, den = disc.numerator, disc.denominator
    rn, rd = _isqrt_exact(num), _isqrt_exact(den)
    if rn is None or rd is None:
        return set()
    s = Fraction(rn, rd)
    return {(-b + s) / (2 * a), (-b - s) / (2 * a)}


def _isqrt_exact(n: int):
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


def exp_reduction(phi: TruncSeries) -> TruncSeries:
    """``f = (phi + t) / phi``; turns the representation equation into
    ``f(t) f(u) = f(t+u)``."""
    t = TruncSeries.monomial(phi.ring, 1, phi.cap) if phi.cap >= 1 else TruncSeries.zero(phi.ring, 0)
    return (phi + t) * phi.inverse()


def exp_defect(f: TruncSeries) -> BiTruncSeries:
    """``f(t) f(u) - f(t+u)``."""
    return f.in_t() * f.in_u() - f.compose_shift()


# ---------------------------------------------------------------------------
# Laurent slots and the pair equation


@dataclass(frozen=True)
class LaurentSlot:
    """``principal / t + regular(t)`` -- a pole of order at most one."""

    principal: object
    regular: TruncSeries

    @classmethod
    def over_t(cls, phi: TruncSeries) -> "LaurentSlot":
        """``phi(t) / t``; the regular part has cap ``phi.cap - 1``."""
        if phi.cap < 1:
            raise ValueError("need cap >= 1")
        return cls(phi[0], TruncSeries(phi.ring, phi.coeffs[1:]))

    @property
    def ring(self) -> Ring:
        return self.regular.ring

    @property
    def cap(self) -> int:
        return self.regular.cap


def impl_defect(p: LaurentSlot, q: LaurentSlot) -> BiTruncSeries:
    """``q'(u){p(t+u) - p(t)} - p'(t){q(t+u) - q(u)}`` with denominators cleared.

    With ``p = P/t + a``, ``q = Q/t + b`` the ``PQ / (t u (t+u))`` pieces of
    the two products cancel, and what remains is a power series once
    multiplied by ``t^2 u^2 (t+u)``; that cleared expression is returned.
    It vanishes iff the pair solves the equation.
    """
    if p.ring != q.ring or p.cap != q.cap:
        raise CapMismatch("p and q need the same ring and cap")
    ring = p.ring
    P, Q = ring.coerce(p.principal), ring.coerce(q.principal)
    a, b = p.regular, q.regular
    A = a.compose_shift() - a.in_t()  # a(t+u) - a(t)
    B = b.compose_shift() - b.in_u()  # b(t+u) - b(u)
    da, db = a.derivative(), b.derivative()
    da_t, db_u = da.in_t(), db.in_u()

    def t_plus_u(x: BiTruncSeries) -> BiTruncSeries:
        return x.shift(1, 0) + x.shift(0, 1)

    terms = [
        t_plus_u(A.shift(2, 0)).scale(-Q),        # -Q t^2 (t+u) A
        t_plus_u(B.shift(0, 2)).scale(P),         # +P u^2 (t+u) B
        db_u.shift(1, 3).scale(-P),               # -P t u^3 b'(u)
        da_t.shift(3, 1).scale(Q),                # +Q t^3 u a'(t)
        t_plus_u(_trunc_mul(db_u, A).shift(2, 2)),
        -t_plus_u(_trunc_mul(da_t, B).shift(2, 2)),
    ]
    return _trunc_sum(*terms)
