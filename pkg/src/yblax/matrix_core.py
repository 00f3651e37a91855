"""Dense complex matrix plumbing for small spectral-parameter pencils.

Everything operates on plain numpy arrays of dtype complex128. A "pencil"
is the first-degree matrix polynomial point - zeta*leading; its determinant
is a degree-n polynomial in zeta whose coefficients, in the sign convention

    det(point - zeta*leading) = sum_i (-1)^i f_i zeta^i,

are the conserved quantities everything downstream cares about. That
convention (f_0 = det point, f_n = det leading) is fixed globally here and
asserted by the test suite.
"""

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import SingularMatrix, SingularParameter

# Default spectral-parameter sample set for residual checks. Six points are
# enough to pin a degree-2 matrix identity with margin.
ZETA_SAMPLES = (0.0, 1.0, -1.0, 1j, -1j, 2.0)

# |det| below SINGULARITY_RTOL * norm^n counts as singular.
SINGULARITY_RTOL = 1e-12


def as_square_matrix(m) -> np.ndarray:
    """Validate and convert to a square complex128 ndarray."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.view(float))):
        raise ValueError("matrix entries must be finite")
    return arr


def norm_inf(m) -> float:
    """Largest entry magnitude; the norm used for all residuals."""
    arr = np.asarray(m)
    return float(np.abs(arr).max()) if arr.size else 0.0


def det(m) -> complex:
    """Determinant of a square matrix."""
    return complex(np.linalg.det(as_square_matrix(m)))


def inverse(m) -> np.ndarray:
    """Matrix inverse, guarded by the relative singularity threshold."""
    arr = as_square_matrix(m)
    scale = norm_inf(arr)
    d = complex(np.linalg.det(arr))
    if scale == 0.0 or abs(d) < SINGULARITY_RTOL * scale ** arr.shape[0]:
        raise SingularMatrix(
            f"matrix with |det|={abs(d):.3e} at norm {scale:.3e} is not invertible"
        )
    return np.linalg.inv(arr)


def matrix_to_json(m) -> dict:
    """Serialize to the shared {'rows','cols','re','im'} row-major format."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise ValueError("only 2-d arrays serialize to matrix JSON")
    flat = arr.reshape(-1)
    return {
        "rows": arr.shape[0],
        "cols": arr.shape[1],
        "re": [float(v) for v in flat.real],
        "im": [float(v) for v in flat.imag],
    }


def matrix_from_json(doc: dict) -> np.ndarray:
    """Inverse of matrix_to_json."""
    rows, cols = int(doc["rows"]), int(doc["cols"])
    re = np.asarray(doc["re"], dtype=float)
    im = np.asarray(doc["im"], dtype=float)
    if re.size != rows * cols or im.size != rows * cols:
        raise ValueError("matrix JSON entry count does not match rows*cols")
    return (re + 1j * im).reshape(rows, cols)


@dataclass(frozen=True)
class BinomialPencil:
    """First-degree matrix polynomial point - zeta*leading."""

    point: np.ndarray
    leading: np.ndarray

    def __post_init__(self):
        point = as_square_matrix(self.point)
        leading = as_square_matrix(self.leading)
        if point.shape != leading.shape:
            raise ValueError("point and leading matrices must share a shape")
        object.__setattr__(self, "point", point)
        object.__setattr__(self, "leading", leading)

    @property
    def dim(self) -> int:
        return self.point.shape[0]

    def __call__(self, zeta: complex) -> np.ndarray:
        return pencil_eval(self, zeta)


def pencil_eval(p: BinomialPencil, zeta: complex) -> np.ndarray:
    """Evaluate the pencil at a spectral-parameter value."""
    return p.point - zeta * p.leading


@dataclass(frozen=True)
class CharPolyCoeffs:
    """Coefficients (f_0, ..., f_n) of det(point - zeta*leading).

    Signs follow the global convention: the determinant equals
    sum_i (-1)^i f_i zeta^i, so f_0 = det(point) and f_n = det(leading).
    """

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))

    def __getitem__(self, i: int) -> complex:
        return self.coeffs[i]

    def __len__(self) -> int:
        return len(self.coeffs)

    def evaluate_det(self, zeta: complex) -> complex:
        """Value of the determinant polynomial at zeta."""
        return sum(
            (-1) ** i * f * zeta ** i for i, f in enumerate(self.coeffs)
        )


def _det2(m) -> complex:
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def _det3(m) -> complex:
    return (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def _mixed_column_sum(point, leading, k, det_fn):
    # Sum of determinants with the columns in each k-subset drawn from the
    # leading matrix and the rest from the point matrix.
    from itertools import combinations

    n = point.shape[0]
    total = 0.0 + 0.0j
    for subset in combinations(range(n), k):
        cols = point.copy()
        cols[:, list(subset)] = leading[:, list(subset)]
        total += det_fn(cols)
    return total


def _leverrier_monic_coeffs(b: np.ndarray) -> np.ndarray:
    # Coefficients c of det(mu*I - b) = mu^n + c[n-1] mu^(n-1) + ... + c[0],
    # returned as [c0, ..., c(n-1), 1].
    n = b.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[n] = 1.0
    work = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        work = b @ work
        c = -np.trace(work) / k
        coeffs[n - k] = c
        work = work + c * np.eye(n, dtype=complex)
    return coeffs


def char_poly_coeffs(p: BinomialPencil) -> CharPolyCoeffs:
    """Determinant-polynomial coefficients of a pencil.

    Closed cofactor forms handle n <= 3 exactly. Larger pencils use the
    trace recursion on leading^-1 * point when the leading matrix is
    invertible, and otherwise evaluation at n+1 roots of unity followed by
    the inverse discrete Fourier transform, which is exact for the degree-n
    determinant polynomial.
    """
    point, leading = p.point, p.leading
    n = p.dim
    if n == 1:
        return CharPolyCoeffs((point[0, 0], leading[0, 0]))
    if n == 2:
        f1 = (
            leading[1, 1] * point[0, 0]
            - leading[1, 0] * point[0, 1]
            - leading[0, 1] * point[1, 0]
            + leading[0, 0] * point[1, 1]
        )
        return CharPolyCoeffs((_det2(point), f1, _det2(leading)))
    if n == 3:
        return CharPolyCoeffs(
            (
                _det3(point),
                _mixed_column_sum(point, leading, 1, _det3),
                _mixed_column_sum(point, leading, 2, _det3),
                _det3(leading),
            )
        )
    lead_det = complex(np.linalg.det(leading))
    if abs(lead_det) > SINGULARITY_RTOL * max(norm_inf(leading), 1.0) ** n:
        monic = _leverrier_monic_coeffs(np.linalg.solve(leading, point))
        signs = np.array([(-1.0) ** (n - k) for k in range(n + 1)])
        return CharPolyCoeffs(tuple(lead_det * signs * monic))
    nodes = np.exp(2j * np.pi * np.arange(n + 1) / (n + 1))
    values = np.array([np.linalg.det(point - z * leading) for z in nodes])
    poly = np.fft.ifft(values)
    signs = np.array([(-1.0) ** k for k in range(n + 1)])
    return CharPolyCoeffs(tuple(signs * poly))


@dataclass(frozen=True)
class CommutingFamily:
    """A one-parameter-vector family of mutually commuting matrices."""

    kind: str
    dimension: int
    builder: Callable[[Sequence[complex]], np.ndarray] = field(repr=False)
    domain_det: Callable[[Sequence[complex]], complex] = field(repr=False)


def _diagonal_family(alpha):
    a1, a2 = alpha
    return np.array([[a1, 0.0], [0.0, a2]], dtype=complex)


def _jordan_family(alpha):
    a1, a2 = alpha
    return np.array([[a1, a2], [0.0, a1]], dtype=complex)


def _rotation_family(alpha):
    a1, a2 = alpha
    return np.array([[a1, -a2], [a2, a1]], dtype=complex)


DIAGONAL_I = CommutingFamily(
    "DiagonalI", 2, _diagonal_family, lambda a: a[0] * a[1]
)
JORDAN_II = CommutingFamily(
    "JordanII", 2, _jordan_family, lambda a: a[0] * a[0]
)
ROTATION_III = CommutingFamily(
    "RotationIII", 2, _rotation_family, lambda a: a[0] * a[0] + a[1] * a[1]
)

FAMILIES = {f.kind: f for f in (DIAGONAL_I, JORDAN_II, ROTATION_III)}


def family_eval(fam: CommutingFamily, alpha) -> np.ndarray:
    """Evaluate a commuting family at a parameter vector."""
    alpha = tuple(complex(a) for a in alpha)
    if len(alpha) != 2:
        raise ValueError(f"{fam.kind} takes two parameters, got {len(alpha)}")
    d = complex(fam.domain_det(alpha))
    scale = max(max(abs(a) for a in alpha), 1.0)
    if abs(d) < SINGULARITY_RTOL * scale ** fam.dimension:
        raise SingularParameter(
            f"{fam.kind} parameters {alpha} violate the determinant condition"
        )
    return fam.builder(alpha)


def random_matrix(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    """Matrix with independent entries uniform on the complex square."""
    re = rng.uniform(-scale, scale, size=(n, n))
    im = rng.uniform(-scale, scale, size=(n, n))
    return re + 1j * im


def random_complex(rng: np.random.Generator, scale: float = 1.0) -> complex:
    """Scalar uniform on the complex square of half-width scale."""
    return complex(rng.uniform(-scale, scale) + 1j * rng.uniform(-scale, scale))
