import cmath
import itertools

import numpy as np
import pytest

from lapcov import (
    AtomicMeasure,
    EvaluationGrid,
    MissingGridValue,
    Semigroup,
    Symbol,
    Tolerances,
    covariance_residual,
    decide_covariance,
    default_grid,
    degenerate_check,
    factorization_residual,
    halfplane_transform,
    laplace_transform,
    multiplicativity_defect,
    pair_function_from_measure,
    recover_point_mass,
    total_mass,
    total_variation,
)
from lapcov.errors import FMuIntegralZero
from lapcov.laplace import (
    DEGENERATE,
    F_MU_ZERO,
    MASS_ZERO_ANALYTIC,
    MASS_ZERO_NEITHER,
    NOT_POINT_MASS,
    POINT_MASS,
)

from helpers import (
    random_multi_atom,
    random_nonnegative_measure,
    random_point_mass,
    random_polynomial_symbol,
    slow_covariance_residual,
    slow_laplace,
)

SG1 = Semigroup.nat_add(1)


def measure(*atoms, sg=SG1):
    return AtomicMeasure(sg, tuple(((complex(p),), complex(w)) for p, w in atoms))


# ------------------------------------------------------------- transforms


def test_laplace_transform_examples():
    mu = measure((0.5, 1))
    assert laplace_transform(mu, None, (1,), (1,)) == 0.25

    mu = measure((0.3, 2 - 1j), (0.8j, 0.5))
    assert laplace_transform(mu, None, (0,), (0,)) == total_mass(mu)

    mu = measure((1, 0.5), (-1, 0.5))
    # oracle: 0.5*1 + 0.5*(-1) = 0
    oracle = slow_laplace(SG1, mu.atoms, [1, 1], (1,), (0,))
    assert oracle == 0
    assert laplace_transform(mu, None, (1,), (0,)) == 0


def test_halfplane_transform_agrees_bit_for_bit():
    sg = Semigroup.half_line()
    mu = AtomicMeasure(sg, (((0.7 + 1.3j,), 2 - 1j), ((0.1 + 0j,), 0.5j)))
    f = Symbol.polynomial({(1,): 1, (0,): 0.5})
    for s, t in [(0.0, 0.0), (0.5, 0.25), (1.75, 0.0), (2.0, 2.0)]:
        assert halfplane_transform(mu, f, s, t) == laplace_transform(mu, f, s, t)


def test_halfplane_transform_examples():
    import math

    sg = Semigroup.half_line()
    mu = AtomicMeasure(sg, (((1 + 0j,), 1.0),))
    assert abs(halfplane_transform(mu, None, math.log(2), 0.0) - 0.5) < 1e-15
    mu_i = AtomicMeasure(sg, (((1j,), 1.0),))
    value = halfplane_transform(mu_i, None, math.pi, math.pi)
    # exp(-i pi) * exp(i pi) = 1
    assert abs(value - 1.0) < 1e-12
    assert halfplane_transform(mu, None, 0.0, 0.0) == total_mass(mu)


def test_halfplane_transform_rejects_other_semigroups():
    with pytest.raises(ValueError):
        halfplane_transform(measure((0.5, 1)), None, 0.0, 0.0)


# --------------------------------------------------------------- residual


def test_covariance_residual_point_mass_is_zero():
    mu = measure((0.4 + 0.2j, 3 - 2j))
    f = Symbol.polynomial({(0,): 1, (1,): 0.5})
    for s, t in [((0,), (0,)), ((1,), (2,)), ((3,), (1,))]:
        assert abs(covariance_residual(mu, f, s, t)) < 1e-13


def test_covariance_residual_frozen_examples():
    mu = measure((1, 0.5), (-1, 0.5))
    # oracle: 1*(1/2+1/2) - 0*0 = 1
    assert slow_covariance_residual(SG1, mu.atoms, [1, 1], (1,), (1,)) == 1
    assert covariance_residual(mu, None, (1,), (1,)) == 1

    mu = measure((1, 1), (-1, -1))
    # oracle: 0*mu|F|^2(1,1) - 2*2 = -4
    assert slow_covariance_residual(SG1, mu.atoms, [1, 1], (1,), (1,)) == -4
    assert covariance_residual(mu, None, (1,), (1,)) == -4


def test_residual_quadratic_scaling():
    mu = measure((0.6, 1 - 0.5j), (-0.2j, 0.75), (0.9, -1.1))
    f = Symbol.polynomial({(0,): 0.3, (2,): 1})
    base = covariance_residual(mu, f, (2,), (1,))
    for lam in (2.0, 1j):
        scaled = AtomicMeasure(SG1, tuple((p, lam * w) for p, w in mu.atoms))
        value = covariance_residual(scaled, f, (2,), (1,))
        assert abs(value - lam**2 * base) <= 1e-12 * abs(base)


def test_residual_hermitian_symmetry_for_nonnegative_measures(rng):
    for _ in range(10):
        mu = random_nonnegative_measure(rng, 1, 3)
        f = random_polynomial_symbol(rng, 1)
        for s, t in [((1,), (2,)), ((0,), (3,)), ((2,), (2,))]:
            lhs = covariance_residual(mu, f, t, s)
            rhs = covariance_residual(mu, f, s, t).conjugate()
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


# ------------------------------------------------------------- degenerate


def test_degenerate_neither_side_vanishes():
    mu = measure((1, 1), (-1, -1))
    grid = default_grid(SG1)
    assert degenerate_check(mu, None, grid) == MASS_ZERO_NEITHER
    # oracle at s=1: 1*1 + (-1)*(-1) = 2 != 0
    assert slow_laplace(SG1, mu.atoms, [1, 1], (1,), (0,)) == 2


def test_degenerate_symbol_vanishing_on_support():
    # F(z) = z(z - 0.5) vanishes at both atoms; both sides vanish and the
    # analytic case is reported
    mu = measure((0, 1), (0.5, -1))
    f = Symbol.polynomial({(1,): -0.5, (2,): 1})
    grid = default_grid(SG1)
    assert degenerate_check(mu, f, grid) == MASS_ZERO_ANALYTIC


def test_degenerate_affine_symbol():
    mu = measure((1, 1), (-1, -1))
    f = Symbol.polynomial({(0,): 1, (1,): 1})
    # oracle at s=0 (atoms sorted, -1 first): (1-1)*(-1) + (1+1)*1 = 2 != 0
    f_sorted = [f.at(p) for p in mu.points]
    assert slow_laplace(SG1, mu.atoms, f_sorted, (0,), (0,)) == 2
    assert degenerate_check(mu, f, default_grid(SG1)) == MASS_ZERO_NEITHER


# ----------------------------------------------------------------- recover


def test_recover_point_mass_examples():
    grid = default_grid(SG1)
    mass, table = recover_point_mass(measure((0.2, 3)), None, grid)
    assert mass == 3
    assert abs(table[(1,)] - 0.2) < 1e-15
    assert abs(table[(2,)] - 0.04) < 1e-15
    assert table[(0,)] == 1

    mass, table = recover_point_mass(measure((1, 0.5), (-1, 0.5)), None, grid)
    assert mass == 1
    assert table[(1,)] == 0
    assert table[(2,)] == 1


def test_recover_identity_is_one(rng):
    for _ in range(10):
        mu, _, _ = random_point_mass(rng, 2)
        f = random_polynomial_symbol(rng, 2, at_point=mu.points[0])
        _, table = recover_point_mass(mu, f, default_grid(mu.semigroup))
        assert table[(0, 0)] == 1


def test_recover_raises_when_f_mu_vanishes():
    mu = measure((0.5, 2))
    with pytest.raises(FMuIntegralZero):
        recover_point_mass(mu, Symbol.constant(0), default_grid(SG1))


# ------------------------------------------------ multiplicativity defect


def test_multiplicativity_defect_examples():
    grid = default_grid(SG1, order=1)  # elements (0,), (1,); closure adds (2,)
    point_mass_table = {(0,): 1 + 0j, (1,): 0.5 + 0.5j, (2,): (0.5 + 0.5j) ** 2}
    assert multiplicativity_defect(point_mass_table, grid) <= 1e-12

    # from the two-atom measure: gamma = {0: 1, 1: 0, 2: 1}
    assert multiplicativity_defect({(0,): 1, (1,): 0, (2,): 1}, grid) == 1

    assert multiplicativity_defect({(0,): 1, (1,): 1, (2,): 1}, grid) == 0


def test_multiplicativity_defect_missing_value():
    grid = default_grid(SG1, order=1)
    with pytest.raises(MissingGridValue):
        multiplicativity_defect({(0,): 1, (1,): 1}, grid)


# ---------------------------------------------------------- factorization


def test_factorization_residual_examples():
    grid = default_grid(SG1, order=2)
    # exactly factorized pair function from a point mass
    mu = measure((0.5 + 0.1j, 2.5))
    f = pair_function_from_measure(mu, grid)
    for s, t in itertools.product(grid.elements, repeat=2):
        assert abs(factorization_residual(f, s, t)) < 1e-12

    two = pair_function_from_measure(measure((1, 0.5), (-1, 0.5)), grid)
    assert abs(factorization_residual(two, (1,), (1,)) - 1) < 1e-15

    from lapcov import PairFunction

    zero = PairFunction(grid, {pair: 0j for pair in itertools.product(grid.pairs_closure, repeat=2)})
    assert factorization_residual(zero, (1,), (2,)) == 0


def test_factorization_vanishes_iff_point_mass(rng):
    grid = default_grid(SG1)
    for _ in range(5):
        mu, _, _ = random_point_mass(rng, 1)
        f = pair_function_from_measure(mu, grid)
        top = max(
            abs(factorization_residual(f, s, t))
            for s, t in itertools.product(grid.elements, repeat=2)
        )
        scale = max(abs(v) for v in f.values.values()) ** 2
        assert top <= 1e-12 * scale
        assert decide_covariance(mu, None, grid).kind == POINT_MASS
    for _ in range(5):
        mu = random_multi_atom(rng, 1, 3)
        f = pair_function_from_measure(mu, grid)
        top = max(
            abs(factorization_residual(f, s, t))
            for s, t in itertools.product(grid.elements, repeat=2)
        )
        assert top > 1e-6
        assert decide_covariance(mu, None, grid).kind == NOT_POINT_MASS


# ----------------------------------------------------------------- decide


def test_decide_point_mass_example():
    sg = Semigroup.nat_add(2)
    mu = AtomicMeasure(sg, (((0.3, -0.1j), 2.0),))
    verdict = decide_covariance(mu)
    assert verdict.kind == POINT_MASS
    assert verdict.mass == 2
    assert verdict.point_resolved
    assert abs(verdict.point[0] - 0.3) < 1e-14
    assert abs(verdict.point[1] + 0.1j) < 1e-14
    assert verdict.character_defect <= 1e-12


def test_decide_two_atoms_example():
    mu = measure((1, 0.5), (-1, 0.5))
    verdict = decide_covariance(mu)
    assert verdict.kind == NOT_POINT_MASS
    assert verdict.witness == ((1,), (1,))
    assert verdict.witness_residual == 1
    # normalized: |R| / (sum |w|^2 * max|rho|^2) = 1 / 0.5
    assert verdict.max_residual == 2.0


def test_decide_mass_on_symbol_zero_set():
    # Extra mass where F vanishes breaks the equation: the total-mass factor
    # inflates the left side only.  Brute force: R(e,e) = 7*2 - 2*2 = 10.
    zeta, xi = 0.5 + 0j, -0.7 + 0j
    mu = measure((zeta, 2), (xi, 5))
    f = Symbol.table({(zeta,): 1.0, (xi,): 0.0})
    oracle = slow_covariance_residual(SG1, mu.atoms, [0.0, 1.0], (0,), (0,))
    assert oracle == 10  # atoms are sorted: xi < zeta
    verdict = decide_covariance(mu, f)
    assert verdict.kind == NOT_POINT_MASS
    assert verdict.witness == ((0,), (0,))
    assert verdict.witness_residual == 10
    assert verdict.symbol_vanishes_on_atom


def test_decide_degenerate_gate():
    verdict = decide_covariance(measure((1, 1), (-1, -1)))
    assert verdict.kind == DEGENERATE
    assert verdict.degenerate_case == MASS_ZERO_NEITHER


def test_decide_f_mu_zero():
    verdict = decide_covariance(measure((0.5, 2)), Symbol.constant(0))
    assert verdict.kind == DEGENERATE
    assert verdict.degenerate_case == F_MU_ZERO
    assert verdict.symbol_vanishes_on_atom


def test_verdict_equivalence_with_total_variation(rng):
    for _ in range(10):
        mu, _, _ = random_point_mass(rng, 1)
        assert (
            decide_covariance(mu).kind
            == decide_covariance(total_variation(mu)).kind
            == POINT_MASS
        )
    for _ in range(10):
        mu = random_multi_atom(rng, 2, 3)
        assert (
            decide_covariance(mu).kind
            == decide_covariance(total_variation(mu)).kind
            == NOT_POINT_MASS
        )


def test_gram_matrix_is_psd_for_nonnegative_measures(rng):
    for _ in range(10):
        mu = random_nonnegative_measure(rng, 1, int(rng.integers(1, 5)))
        grid = default_grid(SG1)
        gram = np.array(
            [
                [laplace_transform(mu, None, s, t) for t in grid.elements]
                for s in grid.elements
            ]
        )
        eigenvalues = np.linalg.eigvalsh((gram + gram.conj().T) / 2)
        assert eigenvalues.min() >= -1e-10 * abs(np.trace(gram).real)


def test_nat_mult_decision_and_point():
    sg = Semigroup.nat_mult(2)
    mu = AtomicMeasure(sg, (((0.5 + 0.25j, -0.4j), 1 + 1j),))
    verdict = decide_covariance(mu)
    assert verdict.kind == POINT_MASS
    assert verdict.point_resolved
    assert abs(verdict.point[0] - (0.5 + 0.25j)) < 1e-14
    assert abs(verdict.point[1] - (-0.4j)) < 1e-14


def test_half_line_decision_and_point():
    sg = Semigroup.half_line()
    mu = AtomicMeasure(sg, (((0.8 + 1.1j,), 2.0),))
    verdict = decide_covariance(mu)
    assert verdict.kind == POINT_MASS
    assert verdict.point_resolved
    assert abs(verdict.point[0] - (0.8 + 1.1j)) < 1e-12
    two = AtomicMeasure(sg, (((0.5 + 0j,), 1.0), ((1.5 + 0j,), 1.0)))
    assert decide_covariance(two).kind == NOT_POINT_MASS


def test_half_line_aliased_branch_still_consistent():
    # Im parts differing by 2*pi/0.25 are indistinguishable on the default
    # grid; the resolved point must still reproduce the character table.
    import math

    sg = Semigroup.half_line()
    z = 0.5 + (0.3 + 8 * math.pi) * 1j
    mu = AtomicMeasure(sg, (((z,), 1.0),))
    verdict = decide_covariance(mu)
    assert verdict.kind == POINT_MASS
    assert verdict.point_resolved
    zhat = verdict.point[0]
    for s in default_grid(sg).elements:
        assert abs(verdict.character[s] - cmath.exp(-s * zhat)) < 1e-9


def test_grid_closure_and_identity_insertion():
    grid = EvaluationGrid(SG1, ((2,), (1,)))
    assert grid.elements == ((0,), (1,), (2,))
    assert (4,) in grid.pairs_closure


def test_tolerances_validation():
    with pytest.raises(ValueError):
        Tolerances(mass=-1.0)
