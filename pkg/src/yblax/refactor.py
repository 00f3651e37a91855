"""Re-factorization of products of binomial pencils.

Given pencils built from (X, A) and (Y, B), the solvers produce (U, V) with

    (U - zeta*A)(V - zeta*B) = (Y - zeta*B)(X - zeta*A)   for all zeta,

keeping the determinant-polynomial coefficients of each factor fixed. The
2x2 path uses the closed form; the general path runs the power recursion
that expresses U through its own characteristic identity. Both verify their
output on construction.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .errors import (
    DegenerateDenominator,
    DegeneratePi,
    DegenerateSimilarity,
    NonCommuting,
    ToleranceExceeded,
)
from .matrix_core import (
    BinomialPencil,
    ZETA_SAMPLES,
    char_poly_coeffs,
    inverse,
    norm_inf,
)

DEFAULT_TOL_LAX = 1e-9
DEFAULT_TOL_CAS = 1e-9


@dataclass(frozen=True)
class RefactorResult:
    """Solved factors with their verification residuals.

    lax_residual is the raw max-entry residual of the product identity over
    the sampled zeta values; casimir_drift is the max relative change of any
    determinant-polynomial coefficient between input and output factors.
    """

    U: np.ndarray
    V: np.ndarray
    lax_residual: float
    casimir_drift: float


def lax_product_residual(U, V, X, Y, A, B, zeta_samples=ZETA_SAMPLES) -> float:
    """Max-entry residual of the factorization identity at sampled zeta."""
    worst = 0.0
    for z in zeta_samples:
        lhs = (U - z * A) @ (V - z * B)
        rhs = (Y - z * B) @ (X - z * A)
        worst = max(worst, norm_inf(lhs - rhs))
    return worst


def casimir_drift(U, V, X, Y, A, B) -> float:
    """Max relative coefficient change between (X,A)->(U,A) and (Y,B)->(V,B)."""
    worst = 0.0
    for new, old, lead in ((U, X, A), (V, Y, B)):
        f_new = char_poly_coeffs(BinomialPencil(new, lead)).coeffs
        f_old = char_poly_coeffs(BinomialPencil(old, lead)).coeffs
        for a, b in zip(f_new, f_old):
            worst = max(worst, abs(a - b) / (1.0 + abs(b)))
    return worst


def _scalar_product(A, B):
    # Fixed-order scalar arithmetic: commutativity of IEEE multiply and add
    # makes this product order-symmetric for exactly commuting pairs, which
    # BLAS kernels do not guarantee.
    n = A.shape[0]
    out = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            acc = 0j
            for k in range(n):
                acc = acc + complex(A[i, k]) * complex(B[k, j])
            out[i, j] = acc
    return out


def commutator_gap(A, B) -> float:
    """Max-entry norm of AB - BA, evaluated with order-symmetric arithmetic."""
    return norm_inf(_scalar_product(A, B) - _scalar_product(B, A))


def _require_commuting(A, B, comm_tol):
    gap = commutator_gap(A, B)
    if gap > comm_tol:
        raise NonCommuting(f"leading matrices do not commute, gap {gap:.3e}")


def _checked_result(U, V, X, Y, A, B, zeta_samples, tol_lax, tol_cas):
    res = lax_product_residual(U, V, X, Y, A, B, zeta_samples)
    drift = casimir_drift(U, V, X, Y, A, B)
    scale = 1.0 + norm_inf(X) * norm_inf(Y) + norm_inf(A) * norm_inf(B)
    if res > tol_lax * scale or drift > tol_cas:
        raise ToleranceExceeded(
            f"factorization residuals out of tolerance: "
            f"lax {res:.3e} (scale {scale:.3e}), drift {drift:.3e}"
        )
    return RefactorResult(U, V, res, drift)


def pi_matrices(X, Y, A, B):
    """The two 2x2 solution matrices built from coefficient combinations."""
    f0, f1, f2 = char_poly_coeffs(BinomialPencil(X, A)).coeffs
    first = f2 * (Y @ A + B @ X) - f1 * (A @ B)
    second = f2 * (Y @ X) - f0 * (A @ B)
    return first, second


def refactor_2x2(
    X,
    Y,
    A,
    B,
    zeta_samples=ZETA_SAMPLES,
    tol_lax=DEFAULT_TOL_LAX,
    tol_cas=DEFAULT_TOL_CAS,
    comm_tol=0.0,
):
    """Closed-form 2x2 re-factorization.

    Requires invertible, commuting A and B and a nonsingular first solution
    matrix. Raises DegeneratePi when the latter degenerates rather than
    picking a branch.
    """
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    _require_commuting(A, B, comm_tol)
    a_inv = inverse(A)
    inverse(B)  # invertibility gate only
    first, second = pi_matrices(X, Y, A, B)
    d = complex(np.linalg.det(first))
    if abs(d) < 1e-12 * max(norm_inf(first), 1e-30) ** 2:
        raise DegeneratePi(f"|det| of the denominator matrix is {abs(d):.3e}")
    U = second @ np.linalg.inv(first) @ A
    V = a_inv @ (Y @ A + B @ X - U @ B)
    return _checked_result(U, V, X, Y, A, B, zeta_samples, tol_lax, tol_cas)


def power_recursion_matrices(X, Y, K_alpha, K_beta):
    """Matrices (M_i, N_i) expressing powers of the unknown factor.

    Returns lists [M_0..M_{n-1}], [N_0..N_{n-1}] with M_0 = I, N_0 = 0 and
    M_1, N_1 the product data; each later pair is given by the recursion
    M_i = M_1 M_{i-1} + N_{i-1}, N_i = N_1 M_{i-1}.
    """
    n = X.shape[0]
    kb_inv = inverse(K_beta)
    ka_inv = inverse(K_alpha)
    m_list = [np.eye(n, dtype=complex)]
    n_list = [np.zeros((n, n), dtype=complex)]
    if n == 1:
        return m_list, n_list
    m1 = (Y @ K_alpha + K_beta @ X) @ kb_inv @ ka_inv
    n1 = -Y @ X @ kb_inv @ ka_inv
    m_list.append(m1)
    n_list.append(n1)
    for _ in range(2, n):
        m_list.append(m1 @ m_list[-1] + n_list[-1])
        n_list.append(n1 @ m_list[-2])
    return m_list, n_list


def refactor_nxn(
    X,
    Y,
    K_alpha,
    K_beta,
    zeta_samples=ZETA_SAMPLES,
    tol_lax=DEFAULT_TOL_LAX,
    tol_cas=DEFAULT_TOL_CAS,
    comm_tol=0.0,
):
    """General n x n re-factorization via the power recursion.

    The unknown factor satisfies its own characteristic identity with the
    coefficients of the (X, K_alpha) pencil; substituting the recursion
    turns that into one linear solve. Raises DegenerateDenominator when the
    solve matrix is singular.
    """
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    K_alpha = np.asarray(K_alpha, dtype=complex)
    K_beta = np.asarray(K_beta, dtype=complex)
    n = X.shape[0]
    _require_commuting(K_alpha, K_beta, comm_tol)
    ka_inv = inverse(K_alpha)
    inverse(K_beta)  # invertibility gate only
    f = char_poly_coeffs(BinomialPencil(X, K_alpha)).coeffs
    m_list, n_list = power_recursion_matrices(X, Y, K_alpha, K_beta)
    eye = np.eye(n, dtype=complex)
    numerator = -f[0] * eye
    denominator = np.zeros((n, n), dtype=complex)
    for i in range(1, n + 1):
        sign = (-1.0) ** i
        numerator -= sign * f[i] * n_list[i - 1]
        denominator += sign * f[i] * m_list[i - 1]
    d = complex(np.linalg.det(denominator))
    if abs(d) < 1e-12 * max(norm_inf(denominator), 1e-30) ** n:
        raise DegenerateDenominator(
            f"|det| of the denominator matrix is {abs(d):.3e}"
        )
    U = numerator @ np.linalg.inv(denominator) @ K_alpha
    V = ka_inv @ (Y @ K_alpha + K_beta @ X - U @ K_beta)
    return _checked_result(
        U, V, X, Y, K_alpha, K_beta, zeta_samples, tol_lax, tol_cas
    )


def similarity_check(U, V, X, Y, K_alpha, K_beta, tol=1e-9) -> bool:
    """Spectral consistency of a candidate factor pair.

    True when the coefficient vectors of U*K_alpha^-1 match K_alpha^-1*X and
    those of K_beta^-1*V match Y*K_beta^-1, which certifies both similarity
    relations. The criterion needs U*K_beta - Y*K_alpha to be nonsingular;
    otherwise DegenerateSimilarity is raised.
    """
    U = np.asarray(U, dtype=complex)
    V = np.asarray(V, dtype=complex)
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    n = U.shape[0]
    pivot = U @ K_beta - Y @ K_alpha
    d = complex(np.linalg.det(pivot))
    if abs(d) < 1e-12 * max(norm_inf(pivot), 1e-30) ** n:
        raise DegenerateSimilarity(
            f"|det(U*K_beta - Y*K_alpha)| = {abs(d):.3e} is below threshold"
        )
    ka_inv = inverse(K_alpha)
    kb_inv = inverse(K_beta)
    eye = np.eye(n, dtype=complex)
    pairs = (
        (U @ ka_inv, ka_inv @ X),
        (kb_inv @ V, Y @ kb_inv),
    )
    for left, right in pairs:
        f_left = char_poly_coeffs(BinomialPencil(left, eye)).coeffs
        f_right = char_poly_coeffs(BinomialPencil(right, eye)).coeffs
        for a, b in zip(f_left, f_right):
            if abs(a - b) > tol * (1.0 + abs(b)):
                return False
    return True


@dataclass(frozen=True)
class UniquenessReport:
    """Outcome of the local-uniqueness probe."""

    initial_distance: float
    final_distance: float
    initial_objective: float
    final_objective: float


def _pack(coords_triple):
    flat = np.concatenate([np.asarray(c, dtype=complex).ravel() for c in coords_triple])
    return np.concatenate([flat.real, flat.imag]), [len(c) for c in coords_triple]


def _unpack(vec, sizes):
    half = vec.size // 2
    flat = vec[:half] + 1j * vec[half:]
    out, pos = [], 0
    for s in sizes:
        out.append(tuple(flat[pos : pos + s]))
        pos += s
    return out


def triple_uniqueness_probe(
    lax_builder,
    coords_triple,
    params_triple,
    perturbation_scale=1e-3,
    zeta_samples=ZETA_SAMPLES,
    seed=0,
):
    """Check that a triple Lax product pins its leaf coordinates locally.

    lax_builder(coords, params) must return a BinomialPencil whose
    coefficients depend only on params, so coordinate perturbations stay on
    the level set. The probe perturbs all three coordinate tuples, then
    minimizes the sampled-zeta product mismatch and reports how far the
    minimizer sits from the original coordinates. A distance near zero is
    evidence that the product determines the triple.
    """
    rng = np.random.default_rng(seed)
    target = {}
    pencils = [lax_builder(c, p) for c, p in zip(coords_triple, params_triple)]
    for z in zeta_samples:
        target[z] = pencils[0](z) @ pencils[1](z) @ pencils[2](z)

    x0, sizes = _pack(coords_triple)

    def objective(vec):
        triples = _unpack(vec, sizes)
        blocks = []
        trial = [lax_builder(c, p) for c, p in zip(triples, params_triple)]
        for z in zeta_samples:
            diff = trial[0](z) @ trial[1](z) @ trial[2](z) - target[z]
            blocks.append(diff.ravel().real)
            blocks.append(diff.ravel().imag)
        return np.concatenate(blocks)

    noise = rng.uniform(-1, 1, size=x0.shape) * perturbation_scale
    start = x0 + noise
    initial_distance = float(np.abs(noise).max())
    initial_objective = float(np.abs(objective(start)).max())
    if perturbation_scale == 0.0:
        return UniquenessReport(0.0, 0.0, initial_objective, initial_objective)
    fit = least_squares(
        objective, start, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000
    )
    final_distance = float(np.abs(fit.x - x0).max())
    final_objective = float(np.abs(fit.fun).max())
    return UniquenessReport(
        initial_distance, final_distance, initial_objective, final_objective
    )
