"""Concrete Yang-Baxter maps with 2x2 Lax pencils.

Two families of symplectic-leaf maps (diagonal and Jordan parameter
families) are realized exactly as defined: embed the two leaf coordinates
into a full matrix on fixed coefficient levels, re-factorize, and read the
new leaf coordinates off the first rows. The third map is the closed-form
degenerate-limit map generalizing the Adler-Yamilov map, shipped with its
strong Lax matrix and the evidence probe for the limit construction.

Parameter conventions: the leaf families carry params (a1, a2, a3, a4),
with (a1, a2) the invertible-family parameters and (a3, a4) the two
coefficient levels. The degenerate-limit map carries params (a1, a2, a3).
"""

from dataclasses import dataclass

import cmath

import numpy as np

from .errors import BranchCut, DomainError, PoleError
from .matrix_core import (
    BinomialPencil,
    DIAGONAL_I,
    JORDAN_II,
    ZETA_SAMPLES,
    family_eval,
    norm_inf,
    random_complex,
)
from .refactor import refactor_2x2
from .registry import MapDescriptor, register
from .sklyanin import constant_pair_structure, pair_structure


@dataclass(frozen=True)
class LeafPoint2:
    """Two leaf coordinates plus the four-component parameter vector."""

    coords: tuple
    params: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(complex(c) for c in self.coords))
        object.__setattr__(self, "params", tuple(complex(a) for a in self.params))
        if len(self.coords) != 2:
            raise ValueError("expected two leaf coordinates")


def case1_embed(x1, x2, alpha) -> np.ndarray:
    """Embed diagonal-family leaf coordinates into a full 2x2 matrix.

    Row one is (x1, x2); row two is determined by holding the two
    coefficient levels at (a3, a4). Requires a1 != 0 and x2 != 0.
    """
    a1, a2, a3, a4 = (complex(a) for a in alpha)
    x1, x2 = complex(x1), complex(x2)
    if a1 == 0 or x2 == 0:
        raise DomainError("diagonal-family embedding needs a1 != 0 and x2 != 0")
    lower_left = (x1 * (a4 - a2 * x1) - a1 * a3) / (a1 * x2)
    lower_right = (a4 - a2 * x1) / a1
    return np.array([[x1, x2], [lower_left, lower_right]], dtype=complex)


def case2_embed(x1, x2, alpha) -> np.ndarray:
    """Embed Jordan-family leaf coordinates into a full 2x2 matrix.

    Requires a1*x2 - a2*x1 != 0; the coefficient levels (a3, a4) are held
    exactly by construction.
    """
    a1, a2, a3, a4 = (complex(a) for a in alpha)
    x1, x2 = complex(x1), complex(x2)
    denom = a1 * x2 - a2 * x1
    if denom == 0:
        raise DomainError("Jordan-family embedding needs a1*x2 - a2*x1 != 0")
    lower_left = (a4 * x1 - a1 * (x1 * x1 + a3)) / denom
    lower_right = (a2 * a3 - a4 * x2 + a1 * x1 * x2) / (-denom)
    return np.array([[x1, x2], [lower_left, lower_right]], dtype=complex)


_CASES = {
    "I": (case1_embed, DIAGONAL_I),
    "II": (case2_embed, JORDAN_II),
}


def _case_pieces(case):
    try:
        return _CASES[str(case).upper()]
    except KeyError:
        raise ValueError(f"unknown case {case!r}; expected 'I' or 'II'") from None


def case_lax(case, coords, params) -> BinomialPencil:
    """Strong Lax pencil at a leaf point: embedded matrix minus zeta*K."""
    embed, family = _case_pieces(case)
    x1, x2 = coords
    return BinomialPencil(
        embed(x1, x2, params), family_eval(family, params[:2])
    )


def case_map(case, x, y):
    """Apply the leaf map: embed, re-factorize, project to first rows.

    x and y are (coords, params) pairs; the result keeps each parameter
    vector with its factor.
    """
    (x_coords, alpha), (y_coords, beta) = x, y
    embed, family = _case_pieces(case)
    X = embed(x_coords[0], x_coords[1], alpha)
    Y = embed(y_coords[0], y_coords[1], beta)
    K_alpha = family_eval(family, alpha[:2])
    K_beta = family_eval(family, beta[:2])
    result = refactor_2x2(X, Y, K_alpha, K_beta)
    u = (complex(result.U[0, 0]), complex(result.U[0, 1]))
    v = (complex(result.V[0, 0]), complex(result.V[0, 1]))
    return (u, alpha), (v, beta)


def lax_inversion_2x2(case, u, alpha, y, beta):
    """Recover (v, x) from (u, y) through the factored-pencil identities.

    Demonstrates that the Lax equation determines the map: the two
    conjugation identities below solve the factorization backwards. Needs
    the pivot difference matrix to be invertible.
    """
    embed, family = _case_pieces(case)
    L_u = embed(u[0], u[1], alpha)
    L_y = embed(y[0], y[1], beta)
    K_alpha = family_eval(family, alpha[:2])
    K_beta = family_eval(family, beta[:2])
    pivot = L_u @ K_beta - L_y @ K_alpha
    if abs(np.linalg.det(pivot)) < 1e-12 * max(norm_inf(pivot), 1e-30) ** 2:
        raise DomainError("inversion pivot matrix is singular")
    pivot_inv = np.linalg.inv(pivot)
    kb_inv = np.linalg.inv(K_beta)
    ka_inv = np.linalg.inv(K_alpha)
    L_v = K_beta @ pivot_inv @ L_y @ kb_inv @ pivot
    L_x = K_alpha @ (-pivot_inv) @ L_u @ ka_inv @ (-pivot)
    v = (complex(L_v[0, 0]), complex(L_v[0, 1]))
    x = (complex(L_x[0, 0]), complex(L_x[0, 1]))
    return v, x


def adler_yamilov_general(x, alpha, y, beta):
    """Closed-form degenerate-limit map generalizing the Adler-Yamilov map.

    Params are (a1, a2, a3) per factor with a1, a3 nonzero. The published
    closed form carries a sign slip in the last component; the version here
    (plus sign) is the one that satisfies the Lax and Yang-Baxter
    identities, cross-checked against the finite-parameter re-factorization
    limit in the test suite.
    """
    a1, a2, a3 = (complex(a) for a in alpha)
    b1, b2, b3 = (complex(b) for b in beta)
    x1, x2 = (complex(c) for c in x)
    y1, y2 = (complex(c) for c in y)
    for value, label in ((a1, "a1"), (a3, "a3"), (b1, "b1"), (b3, "b3")):
        if value == 0:
            raise PoleError(f"parameter {label} must be nonzero")
    denom = a3 * b3 + a1 * b1 * x1 * y2
    if denom == 0:
        raise PoleError("map evaluated on the pole locus a3*b3 + a1*b1*x1*y2 = 0")
    q = a1 * b1 * (a2 * b3 - a3 * b2) / denom
    u = (b1 / (a1 * b3) * (a3 * y1 - q * x1), a1 / b1 * y2)
    v = (b1 / a1 * x1, a1 / (b1 * a3) * (b3 * x2 + q * y2))
    return u, v


def ay_lax(coords, alpha) -> BinomialPencil:
    """Strong Lax pencil of the degenerate-limit map.

    The leading matrix diag(a1, 0) is intentionally singular; coefficient
    extraction handles that case.
    """
    a1, a2, a3 = (complex(a) for a in alpha)
    if a1 == 0 or a3 == 0:
        raise PoleError("Lax pencil needs a1 != 0 and a3 != 0")
    x1, x2 = (complex(c) for c in coords)
    point = np.array(
        [[a1 / a3 * (a2 + x1 * x2), x1], [x2, a3 / a1]], dtype=complex
    )
    leading = np.array([[a1, 0.0], [0.0, 0.0]], dtype=complex)
    return BinomialPencil(point, leading)


def finite_parameter_lax(x1, x2, alpha, eps) -> BinomialPencil:
    """Pre-limit Lax pencil with leading matrix diag(a1, eps).

    The diagonal entries solve the two coefficient-level equations with the
    principal square root. BranchCut is raised when the radicand falls on
    the principal branch cut (a nonpositive real), where the root choice
    is ambiguous.
    """
    a1, a2, a3 = (complex(a) for a in alpha)
    eps = complex(eps)
    if a1 == 0 or eps == 0:
        raise DomainError("finite-parameter pencil needs a1 != 0 and eps != 0")
    radicand = a3 * a3 - 4.0 * a1 * eps * (a2 + x1 * x2)
    if radicand.imag == 0.0 and radicand.real <= 0.0:
        raise BranchCut(
            f"radicand {radicand} lies on the principal square-root branch cut"
        )
    root = cmath.sqrt(radicand)
    point = np.array(
        [
            [(a3 - root) / (2.0 * eps), x1],
            [x2, (a3 + root) / (2.0 * a1)],
        ],
        dtype=complex,
    )
    leading = np.array([[a1, 0.0], [0.0, eps]], dtype=complex)
    return BinomialPencil(point, leading)


def ay_limit_probe(x1, x2, alpha, eps, zeta_samples=ZETA_SAMPLES) -> float:
    """Distance between the pre-limit pencil and its closed-form limit.

    Max-entry distance over the sampled spectral parameters; decreases
    linearly in eps wherever the principal root tracks the limit branch.
    """
    finite = finite_parameter_lax(x1, x2, alpha, eps)
    limit = ay_lax((x1, x2), alpha)
    return max(norm_inf(finite(z) - limit(z)) for z in zeta_samples)


def _sample_unit(rng):
    return random_complex(rng)


def _sample_away_from_zero(rng, floor):
    while True:
        z = random_complex(rng)
        if abs(z) >= floor:
            return z


def _case1_sample_coords(rng):
    return (_sample_unit(rng), _sample_away_from_zero(rng, 0.25))


def _case_sample_params(rng):
    return (
        _sample_away_from_zero(rng, 0.4),
        _sample_unit(rng),
        _sample_unit(rng),
        _sample_unit(rng),
    )


def _case2_sample_coords(rng):
    return (_sample_unit(rng), _sample_unit(rng))


def _ay_sample_coords(rng):
    return (_sample_unit(rng), _sample_unit(rng))


def _ay_sample_params(rng):
    return (
        _sample_away_from_zero(rng, 0.4),
        _sample_unit(rng),
        _sample_away_from_zero(rng, 0.4),
    )


def _case_apply(case):
    def apply(x_coords, x_params, y_coords, y_params):
        (u, _), (v, _) = case_map(case, (x_coords, x_params), (y_coords, y_params))
        return u, v

    return apply


register(
    MapDescriptor(
        name="case1",
        coord_len=2,
        param_len=4,
        apply=_case_apply("I"),
        sample_coords=_case1_sample_coords,
        sample_params=_case_sample_params,
        lax=lambda coords, params: case_lax("I", coords, params),
        reduced_structure=lambda params: pair_structure(
            lambda p: -complex(params[0]) * p[1], "case1-reduced"
        ),
    )
)

register(
    MapDescriptor(
        name="case2",
        coord_len=2,
        param_len=4,
        apply=_case_apply("II"),
        sample_coords=_case2_sample_coords,
        sample_params=_case_sample_params,
        lax=lambda coords, params: case_lax("II", coords, params),
        reduced_structure=lambda params: pair_structure(
            lambda p: complex(params[1]) * p[0] - complex(params[0]) * p[1],
            "case2-reduced",
        ),
    )
)

register(
    MapDescriptor(
        name="ay",
        coord_len=2,
        param_len=3,
        apply=lambda xc, xp, yc, yp: adler_yamilov_general(xc, xp, yc, yp),
        sample_coords=_ay_sample_coords,
        sample_params=_ay_sample_params,
        lax=ay_lax,
        reduced_structure=lambda params: constant_pair_structure(
            complex(params[2]), "ay-reduced"
        ),
    )
)
