"""Exact coefficient rings: the integers, the rationals, Z/m and F_p."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import re

from sympy import isprime

__all__ = ["BaseRing", "ZZ", "QQ", "RingError"]


class RingError(ValueError):
    pass


_KINDS = ("Integers", "Rationals", "IntegersMod", "PrimeField")


@dataclass(frozen=True)
class BaseRing:
    """A computable commutative ring with exact arithmetic.

    Elements are plain Python ``int`` (Z, Z/m, F_p, always normalized into
    ``[0, m)`` for the quotient rings) or ``fractions.Fraction`` (Q).
    """

    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise RingError(f"unknown ring kind {self.kind!r}")
        if self.kind in ("IntegersMod", "PrimeField"):
            if self.modulus is None or self.modulus < 2:
                raise RingError("modulus must be at least 2")
            if self.kind == "PrimeField" and not isprime(self.modulus):
                raise RingError(f"{self.modulus} is not prime")
        elif self.modulus is not None:
            raise RingError(f"{self.kind} takes no modulus")

    @classmethod
    def integers(cls) -> "BaseRing":
        return cls("Integers")

    @classmethod
    def rationals(cls) -> "BaseRing":
        return cls("Rationals")

    @classmethod
    def integers_mod(cls, m: int) -> "BaseRing":
        return cls("IntegersMod", m)

    @classmethod
    def prime_field(cls, p: int) -> "BaseRing":
        return cls("PrimeField", p)

    # -- predicates -----------------------------------------------------
    @property
    def is_field(self) -> bool:
        if self.kind in ("Rationals", "PrimeField"):
            return True
        return self.kind == "IntegersMod" and isprime(self.modulus)

    @property
    def is_quotient(self) -> bool:
        return self.kind in ("IntegersMod", "PrimeField")

    # -- arithmetic -----------------------------------------------------
    def __call__(self, x) -> int | Fraction:
        if self.kind == "Rationals":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                if not self.is_quotient:
                    raise RingError(f"{x} is not an integer")
                return (x.numerator * pow(x.denominator, -1, self.modulus)) % self.modulus
            x = x.numerator
        x = int(x)
        return x % self.modulus if self.is_quotient else x

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def is_unit(self, x) -> bool:
        x = self(x)
        if self.kind == "Integers":
            return x in (1, -1)
        if self.kind == "Rationals":
            return x != 0
        from math import gcd

        return gcd(x, self.modulus) == 1

    def inverse(self, x):
        x = self(x)
        if not self.is_unit(x):
            raise RingError(f"{x} is not a unit in {self}")
        if self.kind == "Integers":
            return x
        if self.kind == "Rationals":
            return 1 / x
        return pow(x, -1, self.modulus)

    def lift(self, x) -> int | Fraction:
        """Representative in Z (or Q) of an element."""
        return self(x)

    # -- text ----------------------------------------------------------
    def parse(self, text) -> int | Fraction:
        if isinstance(text, (int, Fraction)):
            return self(text)
        text = str(text).strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
            raise RingError(f"not an exact ring literal: {text!r}")
        return self(Fraction(text))

    def format(self, x) -> str:
        return str(self(x))

    @property
    def name(self) -> str:
        return {
            "Integers": "Z",
            "Rationals": "Q",
            "IntegersMod": f"Z/{self.modulus}",
            "PrimeField": f"GF({self.modulus})",
        }[self.kind]

    @classmethod
    def from_name(cls, name: str) -> "BaseRing":
        name = name.strip().replace(" ", "")
        if name in ("Z", "ZZ"):
            return cls.integers()
        if name in ("Q", "QQ"):
            return cls.rationals()
        m = re.fullmatch(r"Z/(\d+)", name)
        if m:
            return cls.integers_mod(int(m.group(1)))
        m = re.fullmatch(r"(?:GF|F)\(?(\d+)\)?", name)
        if m:
            return cls.prime_field(int(m.group(1)))
        raise RingError(f"unknown ring {name!r}")

    def __str__(self) -> str:
        return self.name


ZZ = BaseRing.integers()
QQ = BaseRing.rationals()
