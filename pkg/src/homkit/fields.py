"""
Exact coefficient fields: the rationals and prime fields GF(p).

Rationals are stored as Fraction (always reduced, positive denominator);
prime-field elements as ints in [0, p).
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from sympy import isprime

from errors import FieldError

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class CoefficientField:
    """QQ when characteristic is 0, otherwise GF(characteristic)."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p < 0 or (p != 0 and not isprime(p)):
            raise FieldError(f"GF({p}) is not a field: {p} is not prime")

    # ── Constructors ────────────────────────────────────────────

    @classmethod
    def rationals(cls) -> "CoefficientField":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "CoefficientField":
        return cls(p)

    @property
    def is_prime_field(self) -> bool:
        return self.characteristic != 0

    @property
    def name(self) -> str:
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"

    def __str__(self) -> str:
        return self.name

    # ── Elements ────────────────────────────────────────────────

    def __call__(self, value) -> Scalar:
        """Canonical element for an int, Fraction or 'a/b' string."""
        if isinstance(value, str):
            value = Fraction(value)
        if self.characteristic == 0:
            return Fraction(value)
        p = self.characteristic
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise FieldError(f"{value} has no image in GF({p})")
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p

    def zero(self) -> Scalar:
        return self(0)

    def one(self) -> Scalar:
        return self(1)

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        if self.characteristic:
            return (a + b) % self.characteristic
        return a + b

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        if self.characteristic:
            return (a - b) % self.characteristic
        return a - b

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        if self.characteristic:
            return (a * b) % self.characteristic
        return a * b

    def neg(self, a: Scalar) -> Scalar:
        if self.characteristic:
            return (-a) % self.characteristic
        return -a

    def inv(self, a: Scalar) -> Scalar:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.characteristic:
            return pow(a, -1, self.characteristic)
        return 1 / a

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def power(self, a: Scalar, n: int) -> Scalar:
        if self.characteristic:
            return pow(a, n, self.characteristic)
        return a ** n

    def random_element(self, rng: random.Random, bound: int = 50) -> Scalar:
        """Uniform over GF(p); small random rationals num/den over QQ."""
        if self.characteristic:
            return rng.randrange(self.characteristic)
        return Fraction(rng.randint(-bound, bound), rng.randint(1, 10))

    def random_nonzero(self, rng: random.Random, bound: int = 50) -> Scalar:
        while True:
            c = self.random_element(rng, bound)
            if c != 0:
                return c

    def format(self, a: Scalar) -> str:
        if isinstance(a, Fraction) and a.denominator != 1:
            return f"{a.numerator}/{a.denominator}"
        return str(int(a))

    def to_json(self, a: Scalar):
        """ints stay ints; non-integral rationals become 'a/b' strings."""
        if isinstance(a, Fraction) and a.denominator != 1:
            return f"{a.numerator}/{a.denominator}"
        return int(a)


QQ = CoefficientField.rationals()
