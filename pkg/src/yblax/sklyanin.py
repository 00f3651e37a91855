"""Poisson structures and their verification machinery.

The quadratic bracket on pencil coefficients induces, coordinatewise, an
antisymmetric structure matrix over the matrix entries. This module builds
those structure matrices for the 2x2 and 3x3 cases, generic product and
canonical structures, and the finite-difference checks (Casimir residuals,
Poisson-map residuals, Jacobi identity) used throughout the test suite.

All brackets are holomorphic: gradients are taken with real steps and no
conjugation anywhere.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import StepTooLarge
from .matrix_core import norm_inf


@dataclass(frozen=True)
class PoissonStructure:
    """Point-dependent antisymmetric structure matrix."""

    dim: int
    matrix: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    name: str = ""

    def __call__(self, p) -> np.ndarray:
        return self.matrix(np.asarray(p, dtype=complex))


def _mirror(upper: np.ndarray) -> np.ndarray:
    # Exact antisymmetry: the lower triangle is the bitwise negation of the
    # upper one, never recomputed.
    return upper - upper.T


def sklyanin_2x2(A) -> PoissonStructure:
    """Quadratic structure on 2x2 matrix entries with leading matrix A.

    Coordinates are (x1, x2, x3, x4), the row-major entries of X. The six
    independent entries are bilinear in (x, a) with a the row-major entries
    of A.
    """
    A = np.asarray(A, dtype=complex)
    a1, a2, a3, a4 = A.ravel()

    def matrix(p):
        x1, x2, x3, x4 = p
        upper = np.zeros((4, 4), dtype=complex)
        upper[0, 1] = -x2 * a1 + x1 * a2
        upper[0, 2] = x3 * a1 - x1 * a3
        upper[0, 3] = x3 * a2 - x2 * a3
        upper[1, 2] = x4 * a1 - x1 * a4
        upper[1, 3] = x4 * a2 - x2 * a4
        upper[2, 3] = -x4 * a3 + x3 * a4
        return _mirror(upper)

    return PoissonStructure(4, matrix, "sklyanin2x2")


def entry_bracket_3x3(X, i, j, k, l) -> complex:
    """Bracket of matrix entries x_ij and x_kl for the identity leading matrix.

    Zero-based indices; the value is x_kj when i = l, minus x_il when k = j,
    summed.
    """
    value = 0.0 + 0.0j
    if i == l:
        value += X[k, j]
    if k == j:
        value -= X[i, l]
    return value


def sklyanin_3x3_identity() -> PoissonStructure:
    """Coordinate Poisson structure on 3x3 matrix entries, leading matrix I.

    Coordinates are the nine entries (x11, x12, ..., x33) row-major; the
    structure matrix is indexed the same way and is exactly antisymmetric.
    """

    def matrix(p):
        X = np.asarray(p, dtype=complex).reshape(3, 3)
        upper = np.zeros((9, 9), dtype=complex)
        for r in range(9):
            for s in range(r + 1, 9):
                upper[r, s] = entry_bracket_3x3(X, r // 3, r % 3, s // 3, s % 3)
        return _mirror(upper)

    return PoissonStructure(9, matrix, "sklyanin3x3")


def bracket_table_3x3(X) -> np.ndarray:
    """Pair-bracket table in Kronecker arrangement.

    Row index 3*i + k and column index 3*j + l (zero-based) hold the bracket
    of x_(i+1)(j+1) with x_(k+1)(l+1). This is the arrangement the 6x6 minor
    analysis operates on; unlike the coordinate structure matrix it is not
    antisymmetric.
    """
    X = np.asarray(X, dtype=complex).reshape(3, 3)
    table = np.zeros((9, 9), dtype=complex)
    for i in range(3):
        for k in range(3):
            for j in range(3):
                for l in range(3):
                    table[3 * i + k, 3 * j + l] = entry_bracket_3x3(X, i, j, k, l)
    return table


def pair_structure(fn: Callable[[np.ndarray], complex], name: str = "") -> PoissonStructure:
    """Two-coordinate structure with bracket {p1, p2} = fn(p)."""

    def matrix(p):
        upper = np.zeros((2, 2), dtype=complex)
        upper[0, 1] = fn(p)
        return _mirror(upper)

    return PoissonStructure(2, matrix, name)


def constant_pair_structure(value: complex, name: str = "") -> PoissonStructure:
    """Two-coordinate structure with a constant bracket value."""
    return pair_structure(lambda p: value, name or "constant-pair")


def canonical_structure(pairs: int) -> PoissonStructure:
    """Canonical structure on (q_1..q_k, p_1..p_k) with {q_i, p_j} = delta_ij."""
    dim = 2 * pairs
    eye = np.eye(pairs, dtype=complex)
    block = np.zeros((dim, dim), dtype=complex)
    block[:pairs, pairs:] = eye
    block[pairs:, :pairs] = -eye

    def matrix(p):
        return block.copy()

    return PoissonStructure(dim, matrix, f"canonical{pairs}")


def product_structure(*factors: PoissonStructure) -> PoissonStructure:
    """Block-diagonal structure; cross-factor brackets vanish exactly."""
    dim = sum(f.dim for f in factors)

    def matrix(p):
        out = np.zeros((dim, dim), dtype=complex)
        pos = 0
        for f in factors:
            out[pos : pos + f.dim, pos : pos + f.dim] = f(p[pos : pos + f.dim])
            pos += f.dim
        return out

    return PoissonStructure(dim, matrix, "x".join(f.name or "?" for f in factors))


@dataclass(frozen=True)
class Observable:
    """Scalar function of a point, with an optional exact gradient."""

    dim: int
    fn: Callable = field(repr=False)
    grad: Optional[Callable] = field(default=None, repr=False)
    name: str = ""

    def __call__(self, p) -> complex:
        return complex(self.fn(np.asarray(p, dtype=complex)))

    def gradient(self, p, h_scale: float = 1e-6) -> np.ndarray:
        p = np.asarray(p, dtype=complex)
        if self.grad is not None:
            return np.asarray(self.grad(p), dtype=complex)
        return grad_central(self.fn, p, h_scale)


def coordinate_observable(dim: int, k: int) -> Observable:
    grad = np.zeros(dim, dtype=complex)
    grad[k] = 1.0
    return Observable(dim, lambda p: p[k], lambda p: grad.copy(), f"x{k + 1}")


def grad_central(fn, p, h_scale: float = 1e-6) -> np.ndarray:
    """Central-difference gradient with per-coordinate real steps."""
    p = np.asarray(p, dtype=complex)
    out = np.zeros_like(p)
    for k in range(p.size):
        h = h_scale * (1.0 + abs(p[k]))
        step = np.zeros_like(p)
        step[k] = h
        out[k] = (complex(fn(p + step)) - complex(fn(p - step))) / (2.0 * h)
    return out


def jacobian_central(F, p, h_scale: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of a vector map."""
    p = np.asarray(p, dtype=complex)
    base = np.asarray(F(p), dtype=complex)
    out = np.zeros((base.size, p.size), dtype=complex)
    for k in range(p.size):
        h = h_scale * (1.0 + abs(p[k]))
        step = np.zeros_like(p)
        step[k] = h
        plus = np.asarray(F(p + step), dtype=complex)
        minus = np.asarray(F(p - step), dtype=complex)
        out[:, k] = (plus - minus) / (2.0 * h)
    return out


def bracket(J: PoissonStructure, f: Observable, g: Observable, p) -> complex:
    """Evaluate {f, g} at a point via gradient contraction."""
    p = np.asarray(p, dtype=complex)
    gf = f.gradient(p)
    gg = g.gradient(p)
    return complex(gf @ J(p) @ gg)


def casimir_check(
    J: PoissonStructure,
    f: Observable,
    samples: int,
    seed: int = 0,
    point_sampler=None,
) -> float:
    """Max bracket magnitude of f against every coordinate at random points."""
    rng = np.random.default_rng(seed)
    if point_sampler is None:
        def point_sampler(r):
            return r.uniform(-1, 1, J.dim) + 1j * r.uniform(-1, 1, J.dim)

    coords = [coordinate_observable(J.dim, k) for k in range(J.dim)]
    worst = 0.0
    for _ in range(samples):
        p = np.asarray(point_sampler(rng), dtype=complex)
        gf = f.gradient(p)
        row = gf @ J(p)
        for c in coords:
            worst = max(worst, abs(complex(row @ c.gradient(p))))
    return worst


def _map_residual(F, J_source, J_target, p, h) -> float:
    DF = jacobian_central(F, p, h)
    image = np.asarray(F(p), dtype=complex)
    lhs = DF @ J_source(p) @ DF.T
    return norm_inf(lhs - J_target(image))


def poisson_map_check(
    F,
    J_source: PoissonStructure,
    J_target: PoissonStructure,
    p,
    h: float = 1e-6,
) -> float:
    """Finite-difference Poisson-map residual with step-halving guard.

    Returns the larger of the residuals at steps h and h/2. If the two
    disagree by more than a factor of ten (and are not both at noise floor),
    the step is unreliable and StepTooLarge is raised.
    """
    p = np.asarray(p, dtype=complex)
    r1 = _map_residual(F, J_source, J_target, p, h)
    r2 = _map_residual(F, J_source, J_target, p, h / 2.0)
    floor = 1e-12 * (1.0 + norm_inf(J_target(np.asarray(F(p), dtype=complex))))
    if max(r1, r2) <= floor:
        return max(r1, r2)
    ratio = max(r1, r2) / max(min(r1, r2), 1e-300)
    if ratio > 10.0:
        raise StepTooLarge(
            f"residual moved from {r1:.3e} to {r2:.3e} under step halving"
        )
    return max(r1, r2)


def jacobi_residual(J: PoissonStructure, p, h_scale: float = 1e-6) -> float:
    """Max cyclic-sum residual of the Jacobi identity at a point.

    Structure-matrix derivatives are taken by central differences; the
    residual is the worst value over all index triples i < j < k.
    """
    p = np.asarray(p, dtype=complex)
    dim = J.dim
    partials = np.zeros((dim, dim, dim), dtype=complex)
    for m in range(dim):
        h = h_scale * (1.0 + abs(p[m]))
        step = np.zeros_like(p)
        step[m] = h
        partials[m] = (J(p + step) - J(p - step)) / (2.0 * h)
    base = J(p)
    worst = 0.0
    for i in range(dim):
        for j in range(i + 1, dim):
            for k in range(j + 1, dim):
                total = 0.0 + 0.0j
                for m in range(dim):
                    total += (
                        base[i, m] * partials[m, j, k]
                        + base[j, m] * partials[m, k, i]
                        + base[k, m] * partials[m, i, j]
                    )
                worst = max(worst, abs(total))
    return worst
