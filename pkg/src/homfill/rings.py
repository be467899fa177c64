"""Coefficient rings: the integers, the rationals, Z/pZ and (1/q)Z.

Elements are plain Python numbers: ``int`` for Z and Z/pZ (reduced into
``range(p)``), ``Fraction`` for Q and (1/q)Z.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

INTEGERS_KIND = "Z"
RATIONALS_KIND = "Q"
MODP_KIND = "mod"
SCALED_KIND = "scaled"


class RingError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Ring:
    kind: str
    param: int = 0

    def __post_init__(self):
        if self.kind == MODP_KIND:
            if not is_prime(self.param):
                raise RingError(f"Z/{self.param}Z: modulus must be prime")
        elif self.kind == SCALED_KIND:
            if self.param < 2:
                # scaled(1) is Z; use Ring.scaled() which normalizes it
                raise RingError("scaled ring needs q >= 2")
        elif self.kind in (INTEGERS_KIND, RATIONALS_KIND):
            if self.param != 0:
                raise RingError(f"{self.kind} takes no parameter")
        else:
            raise RingError(f"unknown ring kind {self.kind!r}")

    # constructors ---------------------------------------------------------

    @classmethod
    def integers(cls) -> "Ring":
        return cls(INTEGERS_KIND)

    @classmethod
    def rationals(cls) -> "Ring":
        return cls(RATIONALS_KIND)

    @classmethod
    def mod(cls, p: int) -> "Ring":
        return cls(MODP_KIND, int(p))

    @classmethod
    def scaled(cls, q: int) -> "Ring":
        q = int(q)
        if q < 1:
            raise RingError("scaled ring needs q >= 1")
        if q == 1:
            return cls(INTEGERS_KIND)
        return cls(SCALED_KIND, q)

    @classmethod
    def parse(cls, text: str) -> "Ring":
        """Parse ``Z``, ``Q``, ``mod:p`` or ``scaled:q``."""
        t = text.strip()
        if t == "Z":
            return cls.integers()
        if t == "Q":
            return cls.rationals()
        head, sep, tail = t.partition(":")
        if sep and head in (MODP_KIND, SCALED_KIND):
            try:
                n = int(tail)
            except ValueError:
                raise RingError(f"bad ring parameter in {text!r}") from None
            return cls.mod(n) if head == MODP_KIND else cls.scaled(n)
        raise RingError(f"unknown ring {text!r}; expected Z, Q, mod:p or scaled:q")

    def __str__(self) -> str:
        if self.kind in (INTEGERS_KIND, RATIONALS_KIND):
            return self.kind
        return f"{self.kind}:{self.param}"

    # properties -----------------------------------------------------------

    @property
    def is_field(self) -> bool:
        return self.kind in (RATIONALS_KIND, MODP_KIND)

    @property
    def is_finite(self) -> bool:
        return self.kind == MODP_KIND

    @property
    def characteristic(self) -> int:
        return self.param if self.kind == MODP_KIND else 0

    @property
    def denominator(self) -> int:
        """Common denominator of all elements (1 for Z and Z/pZ, q for (1/q)Z)."""
        if self.kind == SCALED_KIND:
            return self.param
        return 1

    # elements -------------------------------------------------------------

    def coerce(self, value) -> int | Fraction:
        """Return ``value`` as a canonical element, or raise RingError."""
        if self.kind == MODP_KIND:
            if isinstance(value, Rational) and Fraction(value).denominator == 1:
                return int(value) % self.param
            raise RingError(f"{value!r} is not an element of {self}")
        if self.kind == INTEGERS_KIND:
            if isinstance(value, Rational) and Fraction(value).denominator == 1:
                return int(value)
            raise RingError(f"{value!r} is not an integer")
        if not isinstance(value, Rational):
            raise RingError(f"{value!r} is not rational")
        f = Fraction(value)
        if self.kind == SCALED_KIND and (f * self.param).denominator != 1:
            raise RingError(f"{value!r} is not in (1/{self.param})Z")
        return f

    def contains(self, value) -> bool:
        try:
            self.coerce(value)
        except RingError:
            return False
        return True

    def zero(self):
        return 0 if self.kind in (INTEGERS_KIND, MODP_KIND) else Fraction(0)

    def norm(self, value) -> int | Fraction:
        """Mass contribution of one coefficient."""
        if self.kind == MODP_KIND:
            return 0 if value % self.param == 0 else 1
        return abs(value)

    def format(self, value) -> str:
        if self.kind == MODP_KIND:
            return f"{value % self.param} mod {self.param}"
        f = Fraction(value)
        if f.denominator == 1:
            return str(f.numerator)
        return f"{f.numerator}/{f.denominator}"

    def parse_element(self, text: str):
        t = text.strip()
        if self.kind == MODP_KIND:
            num, sep, mod = t.partition(" mod ")
            if not sep or int(mod) != self.param:
                raise RingError(f"expected 'k mod {self.param}', got {text!r}")
            return self.coerce(int(num))
        try:
            return self.coerce(Fraction(t))
        except (ValueError, ZeroDivisionError):
            raise RingError(f"bad coefficient {text!r}") from None


Z = Ring.integers()
Q = Ring.rationals()


def mod(p: int) -> Ring:
    return Ring.mod(p)


def scaled(q: int) -> Ring:
    return Ring.scaled(q)


def has_canonical_map(source: Ring, target: Ring) -> bool:
    """True when a coefficient homomorphism ``source -> target`` is defined."""
    if source == target:
        return True
    if source.kind == INTEGERS_KIND:
        return True
    if source.kind == SCALED_KIND:
        if target.kind == RATIONALS_KIND:
            return True
        return target.kind == SCALED_KIND and target.param % source.param == 0
    return False
