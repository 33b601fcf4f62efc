"""Exact coefficient fields: the rationals and prime fields GF(p).

Coefficients are stored as plain ``Fraction`` values (over QQ) or ints in
``[0, p)`` (over GF(p)); the field object supplies the arithmetic.  No
floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError


class Field:
    """Exact field arithmetic used by the polynomial layer."""

    char: int
    key: str

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def coerce(self, x):
        raise NotImplementedError

    def to_str(self, a) -> str:
        raise NotImplementedError

    def random_element(self, rng, nonzero=False):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return self.key


class RationalField(Field):
    char = 0
    key = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise InputError(f"cannot coerce {x!r} into QQ")

    def to_str(self, a) -> str:
        return str(a)

    def random_element(self, rng, nonzero=False):
        lo = 1 if nonzero else -3
        return Fraction(rng.randint(lo, 3) or 1) if nonzero else Fraction(rng.randint(lo, 3))


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or p >= 2**31 or not _is_prime(p):
            raise InputError(f"GF({p}): modulus must be a prime below 2^31")
        self.p = p
        self.char = p
        self.key = f"GF({p})"
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def coerce(self, x):
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise InputError(f"denominator of {x} vanishes in {self.key}")
            return (x.numerator % self.p) * self.inv(den) % self.p
        raise InputError(f"cannot coerce {x!r} into {self.key}")

    def to_str(self, a) -> str:
        return str(a % self.p)

    def random_element(self, rng, nonzero=False):
        if nonzero:
            return rng.randint(1, self.p - 1)
        return rng.randint(0, self.p - 1)


def _is_prime(n: int) -> bool:
    if n < 4:
        return n in (2, 3)
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


QQ = RationalField()

_gf_cache: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _gf_cache:
        _gf_cache[p] = PrimeField(p)
    return _gf_cache[p]


def field_from_key(key: str) -> Field:
    """Inverse of ``Field.key``: "QQ" or "GF(p)"."""
    if key == "QQ":
        return QQ
    if key.startswith("GF(") and key.endswith(")"):
        return GF(int(key[3:-1]))
    raise InputError(f"unknown field {key!r}")
