"""Disc measures, moment / Toeplitz matrices, numerical rank, and pencil recovery.

Every probe element s of a measure mu induces a measure on the closed disc of
radius 1/2: the atom z_k moves to rho_{z_k}(s) / (2 (1 + sup-norm)) with weight
|F(z_k)|^2 w_k.  When mu satisfies the covariance equation these disc measures
are single Dirac masses, which is checked two ways: a second-singular-value
test on the induced Toeplitz matrix, and explicit atom recovery from the
moment-matrix pencil.  Recovered atoms convert back to character values via
``character_value_from_atom``, the independent cross-check of the transform
route.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import RankDeficientPencil
from .measures import AtomicMeasure, Symbol, sup_norm, symbol_values
from .semigroups import character_matrix

DISC_RADIUS = 0.5
_DISC_TOL = 1e-12
_MERGE_TOL = 1e-12

DEFAULT_MATRIX_ORDER = 12
DEFAULT_RANK_TOL = 1e-8


@dataclass(frozen=True)
class DiscMeasure:
    """Atomic measure supported in the closed disc of radius 1/2.

    Coincident positions (within 1e-12) are merged with summed weights;
    positions outside the disc are rejected.
    """

    atoms: tuple

    def __post_init__(self):
        merged = []
        for a, m in self.atoms:
            a = complex(a)
            m = complex(m)
            if abs(a) > DISC_RADIUS + _DISC_TOL:
                raise ValueError(f"disc atom {a} lies outside radius {DISC_RADIUS}")
            for i, (b, v) in enumerate(merged):
                if abs(a - b) <= _MERGE_TOL:
                    merged[i] = (b, v + m)
                    break
            else:
                merged.append((a, m))
        merged.sort(key=lambda atom: (atom[0].real, atom[0].imag))
        object.__setattr__(self, "atoms", tuple(merged))

    @property
    def positions(self) -> tuple:
        return tuple(a for a, _ in self.atoms)

    @property
    def weights(self) -> tuple:
        return tuple(m for _, m in self.atoms)

    @property
    def mass(self) -> complex:
        return complex(sum(self.weights))


def disc_measure(mu: AtomicMeasure, symbol: Symbol, s) -> DiscMeasure:
    """The disc measure induced by probing mu at element s."""
    scale = 2.0 * (1.0 + sup_norm(mu, s))
    values = character_matrix(mu.semigroup, mu.points, (s,))[:, 0]
    fv = symbol_values(symbol, mu.points)
    atoms = tuple(
        (values[k] / scale, (abs(fv[k]) ** 2) * mu.weights[k]) for k in range(len(values))
    )
    return DiscMeasure(atoms)


def _power_columns(positions, rows: int) -> np.ndarray:
    """Vandermonde-style matrix V[j, i] = positions[i] ** j, shape (rows, n)."""
    n = len(positions)
    V = np.ones((rows, n), dtype=complex)
    for j in range(1, rows):
        V[j] = V[j - 1] * np.asarray(positions, dtype=complex)
    return V


def moment_matrix(nu: DiscMeasure, order: int, rows: int = None) -> np.ndarray:
    """Matrix of mixed moments M[j, k] = sum_i m_i a_i^j conj(a_i)^k.

    ``rows`` (default ``order``) allows the extra shifted row needed by the
    pencil recovery; columns always number ``order``.
    """
    if order < 1:
        raise ValueError("matrix order must be >= 1")
    rows = order if rows is None else rows
    V = _power_columns(nu.positions, rows)
    W = _power_columns(nu.positions, order)
    return (V * np.asarray(nu.weights, dtype=complex)) @ W.conj().T


def toeplitz_matrix(nu: DiscMeasure, order: int) -> np.ndarray:
    """Matrix of the induced Bergman-space Toeplitz operator.

    In the orthonormal monomial basis e_j = sqrt((j+1)/pi) z^j the entries are
    T[j, k] = sqrt((j+1)(k+1))/pi * sum_i m_i a_i^k conj(a_i)^j, so
    T[0, 0] = nu(disc) / pi.
    """
    M = moment_matrix(nu, order)
    j = np.arange(1, order + 1, dtype=float)
    return np.sqrt(np.outer(j, j)) / math.pi * M.T


def numerical_rank(matrix: np.ndarray, rel_tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of singular values above rel_tol times the largest (0 for the zero matrix)."""
    sigma = np.linalg.svd(np.asarray(matrix, dtype=complex), compute_uv=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    return int(np.count_nonzero(sigma > rel_tol * sigma[0]))


class LueckingResult(NamedTuple):
    rank: int
    atom_count: int
    agree: bool


def luecking_check(
    nu: DiscMeasure, order: int = DEFAULT_MATRIX_ORDER, rel_tol: float = DEFAULT_RANK_TOL
) -> LueckingResult:
    """Finite-rank check: moment-matrix rank vs. number of charged atoms.

    Luecking's theorem says the two agree for any finitely supported disc
    measure once the matrix order exceeds the support size.  Clustered atoms
    degrade the rank estimate; the caller sees the disagreement rather than a
    silently adjusted count.
    """
    rank = numerical_rank(moment_matrix(nu, order), rel_tol)
    atom_count = sum(1 for m in nu.weights if m != 0)
    return LueckingResult(rank, atom_count, rank == atom_count)


def rank_one_check(mu: AtomicMeasure, symbol: Symbol, s, order: int = DEFAULT_MATRIX_ORDER) -> float:
    """sigma_2 / sigma_1 of the induced Toeplitz matrix at probe element s.

    Measures satisfying the covariance equation give (numerically) rank-one
    operators, so the ratio is ~0; it is defined as 0 when sigma_1 = 0.
    """
    sigma = np.linalg.svd(toeplitz_matrix(disc_measure(mu, symbol, s), order), compute_uv=False)
    if sigma[0] == 0.0:
        return 0.0
    if sigma.size < 2:
        return 0.0
    return float(sigma[1] / sigma[0])


class PronyResult(NamedTuple):
    atoms: tuple            # ((position, weight), ...)
    residual: float         # relative Frobenius reconstruction error
    rank: int


def prony_recover(nu, k_max: int = None, rel_tol: float = DEFAULT_RANK_TOL) -> PronyResult:
    """Recover atoms of a disc measure from its moment matrix by a matrix pencil.

    Accepts a DiscMeasure (moments are then computed exactly) or a complex
    moment matrix with at least one more row than columns, laid out as
    M[j, k] = sum_i m_i a_i^j conj(a_i)^k.  The estimated rank r is the
    numerical rank of the unshifted block; positions are the generalized
    eigenvalues of the row-shifted pencil restricted to the dominant
    r-dimensional singular subspace, and weights follow by least squares
    against the full moment table.

    Raises RankDeficientPencil when the restricted pencil is singular beyond
    tolerance (possible for user-supplied moment tables of inconsistent rank).
    """
    if isinstance(nu, DiscMeasure):
        if k_max is None:
            k_max = max(len(nu.atoms) + 2, 4)
        table = moment_matrix(nu, k_max, rows=k_max + 1)
    else:
        table = np.asarray(nu, dtype=complex)
        if table.ndim != 2 or table.shape[0] < table.shape[1] + 1 or table.shape[1] < 1:
            raise ValueError("moment table must have shape (n+1, n) or larger")
        if k_max is not None and k_max + 1 <= table.shape[0] - 1 and k_max <= table.shape[1]:
            table = table[: k_max + 1, :k_max]

    unshifted = table[:-1, :]
    shifted = table[1:, :]
    rank = numerical_rank(unshifted, rel_tol)
    if rank == 0:
        return PronyResult((), 0.0, 0)

    U, sigma, Vh = np.linalg.svd(unshifted)
    Ur = U[:, :rank]
    Vr = Vh[:rank, :].conj().T
    pencil_a = Ur.conj().T @ shifted @ Vr
    pencil_b = Ur.conj().T @ unshifted @ Vr
    b_sigma = np.linalg.svd(pencil_b, compute_uv=False)
    if b_sigma[-1] <= 1e-13 * b_sigma[0]:
        raise RankDeficientPencil("restricted moment pencil is numerically singular")
    positions = scipy.linalg.eig(pencil_a, pencil_b, right=False)
    if not np.all(np.isfinite(positions)):
        raise RankDeficientPencil("pencil eigenvalues are not finite")

    rows, cols = table.shape
    V = _power_columns(positions, rows)
    W = _power_columns(positions, cols)
    design = np.stack([np.outer(V[:, i], W[:, i].conj()).ravel() for i in range(rank)], axis=1)
    weights, *_ = np.linalg.lstsq(design, table.ravel(), rcond=None)
    table_norm = float(np.linalg.norm(table))
    misfit = float(np.linalg.norm(design @ weights - table.ravel()))
    residual = misfit / table_norm if table_norm > 0 else 0.0

    atoms = sorted(zip(positions, weights), key=lambda am: (am[0].real, am[0].imag))
    return PronyResult(tuple((complex(a), complex(m)) for a, m in atoms), residual, rank)


def character_value_from_atom(mu: AtomicMeasure, s, position: complex) -> complex:
    """Undo the disc rescaling: candidate character value 2 (1 + sup-norm) * position."""
    return 2.0 * (1.0 + sup_norm(mu, s)) * position
