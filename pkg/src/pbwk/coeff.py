"""Exact coefficient rings: the rationals, the integers and Z/nZ.

Scalars are plain Python objects so that the rest of the package can use
ordinary operators on them:

* ``Q``   -> :class:`fractions.Fraction`
* ``Z``   -> :class:`int`
* ``Z/n`` -> :class:`Residue`

Every constant that enters a computation goes through :meth:`Ring.coerce`,
which is where missing inverses (``1/2`` over ``Z``, say) are detected.
"""
from __future__ import annotations

import os
import re
from fractions import Fraction
from math import gcd
from typing import Union

Number = Union[int, Fraction, "Residue"]

DEFAULT_RING_ENV = "PBWK_DEFAULT_RING"


class NotInvertible(ArithmeticError):
    """Raised when an element without a multiplicative inverse is inverted.

    ``value`` is the offending element; for integer obstructions it is the
    plain integer (e.g. ``2`` when one half is needed over ``Z``).
    """

    def __init__(self, value, ring: "Ring | None" = None):
        self.value = value
        self.ring = ring
        where = f" in {ring}" if ring is not None else ""
        super().__init__(f"{value} not invertible{where}")


class Residue:
    """Residue class modulo ``modulus``, stored canonically in ``[0, modulus)``."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "value", value % modulus)

    def __setattr__(self, name, value):
        raise AttributeError("Residue is immutable")

    def _other(self, other) -> int | None:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ValueError(f"modulus mismatch: {self.modulus} vs {other.modulus}")
            return other.value
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Residue(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Residue(self.value - o, self.modulus)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Residue(o - self.value, self.modulus)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Residue(self.value * o, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Residue(pow(self.value, k, self.modulus), self.modulus)

    def inverse(self) -> "Residue":
        if gcd(self.value, self.modulus) != 1:
            raise NotInvertible(self.value, Ring("mod", self.modulus))
        return Residue(pow(self.value, -1, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return (self.value - other) % self.modulus == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Residue({self.value}, {self.modulus})"

    def __str__(self):
        return str(self.value)


_RING_RE = re.compile(r"^\s*(?:(Q|QQ)|(Z|ZZ)|Z/(\d+)(?:Z)?)\s*$")


class Ring:
    """An exact, purely even coefficient ring.

    >>> Ring.parse("Z/3").coerce(Fraction(-1, 2))
    Residue(1, 3)
    """

    __slots__ = ("kind", "modulus")

    def __init__(self, kind: str, modulus: int | None = None):
        if kind not in ("rational", "integer", "mod"):
            raise ValueError(f"unknown ring kind {kind!r}")
        if kind == "mod":
            if modulus is None or modulus < 2:
                raise ValueError("Z/nZ needs a modulus n >= 2")
        else:
            modulus = None
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, name, value):
        raise AttributeError("Ring is immutable")

    @classmethod
    def parse(cls, text: str) -> "Ring":
        m = _RING_RE.match(text)
        if not m:
            raise ValueError(f"bad ring designation {text!r}; expected Q, Z or Z/<n>")
        if m.group(1):
            return cls("rational")
        if m.group(2):
            return cls("integer")
        return cls("mod", int(m.group(3)))

    @classmethod
    def default(cls) -> "Ring":
        return cls.parse(os.environ.get(DEFAULT_RING_ENV, "Q"))

    def __eq__(self, other):
        return isinstance(other, Ring) and (self.kind, self.modulus) == (other.kind, other.modulus)

    def __hash__(self):
        return hash((self.kind, self.modulus))

    def __str__(self):
        return {"rational": "Q", "integer": "Z"}.get(self.kind) or f"Z/{self.modulus}"

    def __repr__(self):
        return f"Ring.parse({str(self)!r})"

    # -- elements ---------------------------------------------------------

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def __call__(self, x) -> Number:
        return self.coerce(x)

    def coerce(self, x) -> Number:
        """Map an int, Fraction, rational string or ring element into this ring."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Residue):
            if self.kind != "mod" or x.modulus != self.modulus:
                raise ValueError(f"{x!r} is not an element of {self}")
            return x
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, Fraction) and x.denominator == 1:
            x = x.numerator
        if self.kind == "rational":
            return Fraction(x)
        if isinstance(x, int):
            return x if self.kind == "integer" else Residue(x, self.modulus)
        if isinstance(x, Fraction):
            den = x.denominator
            if not self.invertible(den):
                raise NotInvertible(self._blocking_factor(den), self)
            return self.coerce(x.numerator) * self.inv(self.coerce(den))
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    def _blocking_factor(self, den: int) -> int:
        # Smallest divisor of den that is not invertible, which names the obstruction.
        for d in range(2, den + 1):
            if den % d == 0 and not self.invertible(d):
                return d
        return den

    def invertible(self, k: int) -> bool:
        """Whether the integer ``k`` is a unit of this ring."""
        if self.kind == "rational":
            return k != 0
        if self.kind == "integer":
            return k in (1, -1)
        return gcd(k, self.modulus) == 1

    def is_unit(self, x: Number) -> bool:
        if self.kind == "rational":
            return x != 0
        if self.kind == "integer":
            return x in (1, -1)
        return gcd(x.value, self.modulus) == 1

    def inv(self, x: Number) -> Number:
        if not self.is_unit(x):
            raise NotInvertible(x, self)
        if self.kind == "rational":
            return 1 / Fraction(x)
        if self.kind == "integer":
            return x
        return x.inverse()

    def is_zero(self, x: Number) -> bool:
        return x == 0

    def random(self, rng, bound: int = 5) -> Number:
        """A small random element, used by the randomized axiom checks."""
        if self.kind == "rational":
            return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        return self.coerce(rng.randint(-bound, bound))


QQ = Ring("rational")
ZZ = Ring("integer")


def invertible(ring: Ring, k: int) -> bool:
    if k < 1:
        raise ValueError("k must be a positive integer")
    return ring.invertible(k)


def first_non_invertible(ring: Ring, upto: int, start: int = 2) -> int | None:
    """First integer in ``start..upto`` without an inverse, or None."""
    for k in range(start, upto + 1):
        if not ring.invertible(k):
            return k
    return None


def fmt(x: Number) -> str:
    return str(x)
