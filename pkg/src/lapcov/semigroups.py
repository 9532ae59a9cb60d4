"""The three built-in commutative semigroups and their character evaluations.

Elements and character points are plain hashable Python values:

===========  =========================  ==============================
family       element                    character point
===========  =========================  ==============================
nat_add      tuple of ints, length d    tuple of complex, length d
nat_mult     positive int               tuple of complex, length L
half_line    float >= 0                 1-tuple (z,) with Re z >= 0
===========  =========================  ==============================

Characters are evaluated with the convention 0**0 = 1, so every character
takes the value 1 at the identity.
"""

import cmath
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import GridTooLarge, PrimeOutOfRange

NAT_ADD = "nat_add"
NAT_MULT = "nat_mult"
HALF_LINE = "half_line"

# nat_mult elements beyond this are rejected instead of silently growing.
_INT_LIMIT = 2**62

# slack when checking Re z >= 0 on the half-line
_HALF_PLANE_TOL = 1e-12


@dataclass(frozen=True)
class Semigroup:
    """A semigroup family tag plus its size parameter.

    ``dim`` is the multi-index length for ``nat_add``, the number of retained
    primes for ``nat_mult``, and is fixed to 1 for ``half_line``.
    """

    family: str
    dim: int = 1

    def __post_init__(self):
        if self.family not in (NAT_ADD, NAT_MULT, HALF_LINE):
            raise ValueError(f"unknown semigroup family {self.family!r}")
        if self.dim < 1:
            raise ValueError("semigroup dimension must be >= 1")
        if self.family == HALF_LINE and self.dim != 1:
            raise ValueError("half_line has no dimension parameter")

    @classmethod
    def nat_add(cls, d: int) -> "Semigroup":
        return cls(NAT_ADD, d)

    @classmethod
    def nat_mult(cls, primes: int) -> "Semigroup":
        return cls(NAT_MULT, primes)

    @classmethod
    def half_line(cls) -> "Semigroup":
        return cls(HALF_LINE, 1)

    @property
    def point_dim(self) -> int:
        """Length of a character-point vector."""
        return self.dim


@lru_cache(maxsize=None)
def first_primes(count: int) -> tuple:
    """The first ``count`` primes, by trial division (desk scale)."""
    primes = []
    n = 2
    while len(primes) < count:
        if all(n % p for p in primes):
            primes.append(n)
        n += 1
    return tuple(primes)


def identity(semigroup: Semigroup):
    """Neutral element of the semigroup."""
    if semigroup.family == NAT_ADD:
        return (0,) * semigroup.dim
    if semigroup.family == NAT_MULT:
        return 1
    return 0.0


def combine(semigroup: Semigroup, a, b):
    """Semigroup operation: componentwise sum, integer product, or real sum."""
    if semigroup.family == NAT_ADD:
        return tuple(x + y for x, y in zip(a, b))
    if semigroup.family == NAT_MULT:
        product = a * b
        if product > _INT_LIMIT:
            raise GridTooLarge(f"product {a}*{b} exceeds the supported range")
        return product
    return a + b


def kappa(n: int, retained_primes: int) -> tuple:
    """Prime-exponent vector of ``n`` over the first ``retained_primes`` primes.

    Raises PrimeOutOfRange when ``n`` has a prime factor beyond the retained
    list (including factors larger than the last retained prime).
    """
    if n < 1:
        raise ValueError("nat_mult elements are positive integers")
    exponents = []
    remainder = n
    for p in first_primes(retained_primes):
        e = 0
        while remainder % p == 0:
            remainder //= p
            e += 1
        exponents.append(e)
    if remainder != 1:
        raise PrimeOutOfRange(
            f"{n} has prime factor(s) outside the first {retained_primes} primes"
        )
    return tuple(exponents)


def _monomial(point, exponents) -> complex:
    # 0**0 == 1 is guaranteed by Python's complex power.
    value = 1 + 0j
    for z, e in zip(point, exponents):
        value *= complex(z) ** int(e)
    return value


def char_eval(semigroup: Semigroup, point, element) -> complex:
    """Value at ``element`` of the character labelled by ``point``."""
    if semigroup.family == NAT_ADD:
        return _monomial(point, element)
    if semigroup.family == NAT_MULT:
        return _monomial(point, kappa(element, semigroup.dim))
    return cmath.exp(-element * complex(point[0]))


def character_matrix(semigroup: Semigroup, points, elements) -> np.ndarray:
    """Matrix of character values, shape (len(points), len(elements)).

    Single source of truth for every transform in the package: entry (k, j)
    is ``char_eval(semigroup, points[k], elements[j])``.
    """
    out = np.empty((len(points), len(elements)), dtype=complex)
    for k, z in enumerate(points):
        for j, s in enumerate(elements):
            out[k, j] = char_eval(semigroup, z, s)
    return out


def validate_element(semigroup: Semigroup, element):
    """Normalize and check one element; returns the canonical representation."""
    if semigroup.family == NAT_ADD:
        el = tuple(int(x) for x in element)
        if len(el) != semigroup.dim:
            raise ValueError(f"expected multi-index of length {semigroup.dim}")
        if any(x < 0 for x in el):
            raise ValueError("multi-index components must be nonnegative")
        return el
    if semigroup.family == NAT_MULT:
        el = int(element)
        kappa(el, semigroup.dim)  # raises on bad factorization
        return el
    el = float(element)
    if el < 0:
        raise ValueError("half-line elements are nonnegative reals")
    return el


def validate_point(semigroup: Semigroup, point) -> tuple:
    """Normalize a character point to a tuple of complex of the right length."""
    pt = tuple(complex(z) for z in point)
    if len(pt) != semigroup.point_dim:
        raise ValueError(
            f"expected character point of length {semigroup.point_dim}, got {len(pt)}"
        )
    if semigroup.family == HALF_LINE and pt[0].real < -_HALF_PLANE_TOL:
        raise ValueError("half-line character points need Re z >= 0")
    return pt
