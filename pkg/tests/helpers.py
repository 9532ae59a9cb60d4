"""Independent oracles and random-instance generators shared by the tests.

The oracles deliberately avoid the package's code paths: powers are repeated
multiplications, factorizations are re-derived by trial division, and all
sums are plain Python loops over atoms.
"""

import cmath
import math

import numpy as np

from lapcov import AtomicMeasure, Semigroup, Symbol


# ---------------------------------------------------------------- oracles


def slow_power(z: complex, exponent: int) -> complex:
    value = 1 + 0j
    for _ in range(int(exponent)):
        value *= z
    return value


def slow_exponents(n: int, count: int) -> list:
    primes = []
    x = 2
    while len(primes) < count:
        if all(x % p for p in primes):
            primes.append(x)
        x += 1
    exponents = []
    for p in primes:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        exponents.append(e)
    assert n == 1, "element had a prime factor beyond the retained list"
    return exponents


def slow_char(semigroup: Semigroup, point, element) -> complex:
    if semigroup.family == "nat_add":
        value = 1 + 0j
        for z, e in zip(point, element):
            value *= slow_power(complex(z), e)
        return value
    if semigroup.family == "nat_mult":
        value = 1 + 0j
        for z, e in zip(point, slow_exponents(element, len(point))):
            value *= slow_power(complex(z), e)
        return value
    return cmath.exp(-element * complex(point[0]))


def slow_laplace(semigroup, atoms, f_values, s, t) -> complex:
    """sum_k w_k F_k rho_k(s) conj(rho_k(t)) by direct looping."""
    total = 0j
    for (point, weight), f in zip(atoms, f_values):
        total += weight * f * slow_char(semigroup, point, s) * slow_char(semigroup, point, t).conjugate()
    return total


def slow_covariance_residual(semigroup, atoms, f_values, s, t) -> complex:
    e = {"nat_add": (0,) * len(atoms[0][0]), "nat_mult": 1, "half_line": 0.0}[semigroup.family]
    mass = sum(w for _, w in atoms)
    quad = slow_laplace(semigroup, atoms, [abs(f) ** 2 for f in f_values], s, t)
    left = slow_laplace(semigroup, atoms, f_values, s, e)
    right = slow_laplace(semigroup, atoms, [f.conjugate() for f in f_values], e, t)
    return mass * quad - left * right


def slow_moment(disc_atoms, j: int, k: int) -> complex:
    """sum_i m_i a_i^j conj(a_i)^k by direct looping."""
    total = 0j
    for a, m in disc_atoms:
        total += m * slow_power(complex(a), j) * slow_power(complex(a).conjugate(), k)
    return total


def slow_moment_table(disc_atoms, rows: int, cols: int) -> np.ndarray:
    return np.array([[slow_moment(disc_atoms, j, k) for k in range(cols)] for j in range(rows)])


# ------------------------------------------------- random instance makers


def random_unit_disc(rng, radius: float = 1.0) -> complex:
    r = radius * math.sqrt(rng.uniform())
    theta = rng.uniform(0.0, 2.0 * math.pi)
    return r * cmath.exp(1j * theta)


def random_phase(rng) -> complex:
    return cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi))


def random_point(rng, dim: int, radius: float = 1.0) -> tuple:
    return tuple(random_unit_disc(rng, radius) for _ in range(dim))


def random_character_point(rng, semigroup) -> tuple:
    """A random point valid for the semigroup (half-line needs Re z >= 0)."""
    if semigroup.family == "half_line":
        return (complex(rng.uniform(0.0, 2.0), rng.uniform(-2.0, 2.0)),)
    return random_point(rng, semigroup.point_dim)


def random_polynomial_symbol(rng, dim: int, at_point=None, min_value: float = 0.1) -> Symbol:
    """Random polynomial of total degree <= 2, resampled until |F(at_point)| >= min_value."""
    indices = [
        m
        for m in _multi_indices(dim, 2)
        if sum(m) <= 2
    ]
    while True:
        coefficients = {m: random_unit_disc(rng) for m in indices}
        symbol = Symbol.polynomial(coefficients)
        if at_point is None or abs(symbol.at(at_point)) >= min_value:
            return symbol


def _multi_indices(dim: int, max_component: int) -> list:
    import itertools

    return list(itertools.product(range(max_component + 1), repeat=dim))


def separated_points(rng, dim: int, count: int, separation: float = 0.1, radius: float = 1.0) -> list:
    while True:
        points = [random_point(rng, dim, radius) for _ in range(count)]
        ok = all(
            math.sqrt(sum(abs(a - b) ** 2 for a, b in zip(p, q))) >= separation
            for i, p in enumerate(points)
            for q in points[i + 1 :]
        )
        if ok:
            return points


def random_point_mass(rng, dim: int):
    """(measure, point, weight) with |weight| in [0.1, 10] and |point_i| <= 1."""
    point = random_point(rng, dim)
    weight = rng.uniform(0.1, 10.0) * random_phase(rng)
    mu = AtomicMeasure(Semigroup.nat_add(dim), ((point, weight),))
    return mu, point, weight


def random_multi_atom(rng, dim: int, count: int):
    """Measure with ``count`` separated atoms, |w|>=0.1, |mass| >= 0.05 sum|w|."""
    points = separated_points(rng, dim, count)
    while True:
        weights = [rng.uniform(0.1, 2.0) * random_phase(rng) for _ in range(count)]
        if abs(sum(weights)) >= 0.05 * sum(abs(w) for w in weights):
            break
    return AtomicMeasure(Semigroup.nat_add(dim), tuple(zip(points, weights)))


def random_nonnegative_measure(rng, dim: int, count: int) -> AtomicMeasure:
    points = separated_points(rng, dim, count)
    weights = [rng.uniform(0.1, 2.0) for _ in range(count)]
    return AtomicMeasure(Semigroup.nat_add(dim), tuple(zip(points, weights)))
