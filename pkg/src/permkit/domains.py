"""Scalar domains the permanent engines operate over.

One interface, five instantiations: complex and real floating point, exact
integers, exact rationals, and prime fields.  Floating domains get Kahan
compensation in the engines; exact domains use plain accumulation because
their arithmetic never loses information.
"""

from fractions import Fraction

import numpy as np


class ScalarDomain:
    """Ring operations plus the exactness flag engines dispatch on."""

    name = "abstract"
    exact = False

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def coerce(self, value):
        """Bring an external scalar into the domain's representation."""
        raise NotImplementedError

    def div_pow2(self, x, k: int):
        """x / 2^k, required by Glynn's formula; raises if unsupported."""
        raise NotImplementedError(f"{self.name} does not support halving")

    def magnitude(self, x) -> float:
        return abs(x)

    def __repr__(self):
        return f"<domain {self.name}>"


class ComplexDomain(ScalarDomain):
    name = "complex"
    dtype = np.complex128

    def zero(self):
        return complex(0.0)

    def one(self):
        return complex(1.0)

    def coerce(self, value):
        return complex(value)

    def conjugate(self, x):
        return x.conjugate()

    def div_pow2(self, x, k):
        return x * (2.0 ** -k)


class RealDomain(ScalarDomain):
    name = "real"
    dtype = np.float64

    def zero(self):
        return 0.0

    def one(self):
        return 1.0

    def coerce(self, value):
        return float(value)

    def div_pow2(self, x, k):
        return x * (2.0 ** -k)


class IntegerDomain(ScalarDomain):
    name = "integer"
    exact = True

    def zero(self):
        return 0

    def one(self):
        return 1

    def coerce(self, value):
        return int(value)


class RationalDomain(ScalarDomain):
    name = "rational"
    exact = True

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, value):
        return Fraction(value)

    def div_pow2(self, x, k):
        return Fraction(x) / (1 << k)


class PrimeField(ScalarDomain):
    """Z/pZ for a prime p < 2^62; elements are ints in [0, p)."""

    exact = True

    def __init__(self, p: int):
        if p < 2 or p >= (1 << 62):
            raise ValueError("modulus must be a prime in [2, 2^62)")
        self.p = p
        self.name = f"gf({p})"

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

    def add(self, x, y):
        s = x + y
        return s - self.p if s >= self.p else s

    def sub(self, x, y):
        d = x - y
        return d + self.p if d < 0 else d

    def mul(self, x, y):
        return (x * y) % self.p

    def neg(self, x):
        return (self.p - x) % self.p

    def coerce(self, value):
        return int(value) % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError("no inverse of 0")
        return pow(x, self.p - 2, self.p)

    def div_pow2(self, x, k):
        if self.p == 2:
            raise ValueError("division by two unavailable in GF(2)")
        return (x * self.inv(pow(2, k, self.p))) % self.p

    def magnitude(self, x) -> float:
        return float(x % self.p)


COMPLEX = ComplexDomain()
REAL = RealDomain()
INTEGER = IntegerDomain()
RATIONAL = RationalDomain()


def infer_domain(a: np.ndarray) -> ScalarDomain:
    """Map an ndarray dtype to its natural domain."""
    if np.issubdtype(a.dtype, np.complexfloating):
        return COMPLEX
    if np.issubdtype(a.dtype, np.floating):
        return REAL
    if np.issubdtype(a.dtype, np.integer):
        return INTEGER
    if a.dtype == object:
        flat = a.ravel()
        if len(flat) and isinstance(flat[0], Fraction):
            return RATIONAL
        return INTEGER
    raise TypeError(f"cannot infer a scalar domain for dtype {a.dtype}")


def domain_by_name(name: str, p: int | None = None) -> ScalarDomain:
    table = {"complex": COMPLEX, "real": REAL, "integer": INTEGER,
             "rational": RATIONAL}
    if name in table:
        return table[name]
    if name == "prime":
        if p is None:
            raise ValueError("prime domain needs a modulus")
        return PrimeField(p)
    raise ValueError(f"unknown domain {name!r}")
