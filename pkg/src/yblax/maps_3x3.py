"""The 3x3 leaf family and its Yang-Baxter maps.

The quadratic bracket on 3x3 matrices drops rank, from six to four, on the
locus where three particular sixth-order minors vanish. That locus admits a
rational completion (three entries solved in terms of the other six), and
on it the coefficient functions restrict to closed forms whose levels sit
on a discriminant surface. Canonical coordinates (x1, x2, X1, X2) on the
leaf give a polynomial matrix realization, a closed-form symplectic
Yang-Baxter map with two parameters, and two named one-parameter
specializations. The second specialization is equivalent to a map on pairs
of projective vectors; both directions of that equivalence are shipped.
"""

from dataclasses import dataclass

import cmath

import numpy as np

from .errors import DomainError, PoleError
from .matrix_core import BinomialPencil, random_complex
from .registry import MapDescriptor, register
from .sklyanin import bracket_table_3x3, canonical_structure


def leaf_constants_from_levels(level_f1, level_f2, branch=1):
    """Invert the level equations 3*(c1**2 - c2**2) = f1, 3*c1 = f2.

    branch selects the sign of the square root defining c2; +1 is the
    principal branch.
    """
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    f1, f2 = complex(level_f1), complex(level_f2)
    c1 = f2 / 3.0
    c2 = branch * cmath.sqrt(f2 * f2 - 3.0 * f1) / 3.0
    return c1, c2


def minors_solution(x12, x13, x21, x22, x23, x33):
    """Solve the three vanishing-minor constraints for x11, x31, x32.

    The solution is unique for x13 != 0, x23 != 0.
    """
    x12, x13, x21, x22, x23, x33 = (
        complex(v) for v in (x12, x13, x21, x22, x23, x33)
    )
    if x13 == 0 or x23 == 0:
        raise DomainError("minors solution needs x13 != 0 and x23 != 0")
    x11 = x13 * x21 / x23 + x22 - x12 * x23 / x13
    shared = x12 * x23 + x13 * (x33 - x22)
    x31 = x21 * shared / (x13 * x23)
    x32 = x12 * shared / (x13 * x13)
    return x11, x31, x32


def complete_matrix(x12, x13, x21, x22, x23, x33) -> np.ndarray:
    """Assemble the full 3x3 matrix on the rank-drop locus."""
    x11, x31, x32 = minors_solution(x12, x13, x21, x22, x23, x33)
    return np.array(
        [[x11, x12, x13], [x21, x22, x23], [x31, x32, x33]], dtype=complex
    )


def minor_products(X):
    """The three rank-six obstruction minors in factored closed form.

    Transcribed once; the test suite cross-checks them against direct 6x6
    determinants of the bracket-value table.
    """
    X = np.asarray(X, dtype=complex)
    x11, x12, x13 = X[0]
    x21, x22, x23 = X[1]
    x31, x32, x33 = X[2]
    m1 = -((x21 * x13 * x13 - x11 * x23 * x13 + x22 * x23 * x13 - x12 * x23 * x23) ** 2)
    m2 = -((x23 * x12 * x12 - x13 * x22 * x12 + x13 * x33 * x12 - x13 * x13 * x32) ** 2)
    m3 = -((x12 * x23 * x31 - x13 * x21 * x32) ** 2)
    return m1, m2, m3


# 1-based (rows, cols) of the 6x6 submatrices of the bracket-value table
# whose determinants the factored forms above reproduce.
MINOR_INDEX_SETS = (
    ((1, 2, 3, 4, 5, 6), (3, 4, 6, 7, 8, 9)),
    ((1, 2, 3, 4, 6, 7), (3, 4, 5, 6, 8, 9)),
    ((1, 2, 3, 5, 6, 9), (1, 2, 3, 5, 6, 9)),
)


def minor_from_table(X, which) -> complex:
    """Direct 6x6 determinant from the bracket-value table, for cross-checks."""
    rows, cols = MINOR_INDEX_SETS[which]
    table = bracket_table_3x3(X)
    sub = table[np.ix_([r - 1 for r in rows], [c - 1 for c in cols])]
    return complex(np.linalg.det(sub))


def constrained_casimirs(X):
    """Casimir levels (f0, f1, f2) restricted to the rank-drop locus."""
    X = np.asarray(X, dtype=complex)
    x11, x12, x13 = X[0]
    x21, x22, x23 = X[1]
    x31, x32, x33 = X[2]
    if x13 == 0 or x23 == 0:
        raise DomainError("constrained Casimirs need x13 != 0 and x23 != 0")
    lead = x13 * x22 - x12 * x23
    f0 = (
        lead
        * lead
        * (x21 * x13 * x13 + x23 * x33 * x13 + x12 * x23 * x23)
        / (x13 ** 3 * x23)
    )
    f1 = (
        lead
        * (2.0 * x21 * x13 * x13 + x23 * (x22 + 2.0 * x33) * x13 + x12 * x23 * x23)
        / (x13 * x13 * x23)
    )
    f2 = x13 * x21 / x23 + 2.0 * x22 - x12 * x23 / x13 + x33
    return f0, f1, f2


def discriminant_surface(f0, f1, f2) -> complex:
    """Defining polynomial of the surface swept by the constrained levels."""
    a0, a1, a2 = complex(f0), complex(f1), complex(f2)
    return (
        4.0 * a0 * a2 ** 3
        - a1 * a1 * a2 * a2
        + 4.0 * a1 ** 3
        - 18.0 * a0 * a1 * a2
        + 27.0 * a0 * a0
    )


def discriminant_surface_residual(f0, f1, f2) -> float:
    """Relative residual: |polynomial| over one plus the largest term."""
    a0, a1, a2 = complex(f0), complex(f1), complex(f2)
    terms = (
        4.0 * a0 * a2 ** 3,
        a1 * a1 * a2 * a2,
        4.0 * a1 ** 3,
        18.0 * a0 * a1 * a2,
        27.0 * a0 * a0,
    )
    scale = 1.0 + max(abs(t) for t in terms)
    return abs(discriminant_surface(f0, f1, f2)) / scale


@dataclass(frozen=True)
class LeafPoint3:
    """Canonical leaf coordinates (x1, x2, X1, X2) with constants (c1, c2)."""

    coords: tuple
    params: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(complex(c) for c in self.coords))
        object.__setattr__(self, "params", tuple(complex(a) for a in self.params))
        if len(self.coords) != 4:
            raise ValueError("expected coords (x1, x2, X1, X2)")
        if len(self.params) != 2:
            raise ValueError("expected params (c1, c2)")
        if self.coords[2] == 0 or self.coords[3] == 0:
            raise DomainError("leaf coordinates need X1 != 0 and X2 != 0")


def leaf_embed_3x3(p: LeafPoint3) -> np.ndarray:
    """Polynomial matrix realization of a leaf point.

    Lies on the rank-drop locus by construction; its Casimir levels depend
    only on (c1, c2).
    """
    x1, x2, X1, X2 = p.coords
    c1, c2 = p.params
    w = x1 * X1 + x2 * X2
    return np.array(
        [
            [c1 + c2 - x1 * X1, -x2 * X1, X1],
            [-x1 * X2, c1 + c2 - x2 * X2, X2],
            [-x1 * (w - 3.0 * c2), -x2 * (w - 3.0 * c2), c1 - 2.0 * c2 + w],
        ],
        dtype=complex,
    )


def leaf_lax_3x3(p: LeafPoint3) -> BinomialPencil:
    """Strong Lax pencil at a leaf point: embedded matrix minus zeta*I."""
    return BinomialPencil(leaf_embed_3x3(p), np.eye(3, dtype=complex))


def leaf_casimirs(c1, c2):
    """Casimir levels of the embedded matrix as functions of the constants."""
    c1, c2 = complex(c1), complex(c2)
    return (
        (c1 - 2.0 * c2) * (c1 + c2) ** 2,
        3.0 * (c1 * c1 - c2 * c2),
        3.0 * c1,
    )


def extract_leaf_coords(M) -> tuple:
    """Read canonical coordinates off a matrix on the rank-drop locus."""
    M = np.asarray(M, dtype=complex)
    if M[0, 2] == 0 or M[1, 2] == 0:
        raise DomainError("coordinate extraction needs nonzero (1,3) and (2,3) entries")
    return (
        complex(-M[1, 0] / M[1, 2]),
        complex(-M[0, 1] / M[0, 2]),
        complex(M[0, 2]),
        complex(M[1, 2]),
    )


def map_3x3(x_coords, alpha, y_coords, beta):
    """Closed-form symplectic Yang-Baxter map on pairs of leaf points.

    Matches the generic re-factorization solver; the published denominator
    of the u-side scalar is corrected here (it carries the second factor's
    momenta), which the cross-oracle test pins down.
    """
    x1, x2, X1, X2 = (complex(c) for c in x_coords)
    y1, y2, Y1, Y2 = (complex(c) for c in y_coords)
    a1, a2 = (complex(a) for a in alpha)
    b1, b2 = (complex(b) for b in beta)
    num_u = a1 - b1 - 2.0 * (a2 - b2)
    num_v = a1 - b1 + a2 - b2
    if num_u == 0 and num_v == 0:
        return (y1, y2, Y1, Y2), (x1, x2, X1, X2)
    base = 2.0 * a2 - a1 + b1 + b2
    denom_u = base + (x1 - y1) * Y1 + (x2 - y2) * Y2
    denom_v = base + (y1 - x1) * X1 + (y2 - x2) * X2
    if denom_u == 0 or denom_v == 0:
        raise PoleError("map evaluated where a scalar denominator vanishes")
    cu = num_u / denom_u
    cv = num_v / denom_v
    u1 = y1 - cu * (x1 - y1)
    u2 = y2 - cu * (x2 - y2)
    v1 = x1 + cv * (x1 - y1)
    v2 = x2 + cv * (x2 - y2)
    out_u, out_v = [u1, u2], [v1, v2]
    for xi, yi, ui, vi, Xi, Yi in (
        (x1, y1, u1, v1, X1, Y1),
        (x2, y2, u2, v2, X2, Y2),
    ):
        gap = ui - vi
        if gap == 0:
            raise PoleError("map evaluated where a momentum quotient degenerates")
        out_u.append(((xi - vi) * Xi + (yi - vi) * Yi) / gap)
        out_v.append(-((xi - ui) * Xi + (yi - ui) * Yi) / gap)
    return tuple(out_u), tuple(out_v)


def boussinesq_map(x_coords, alpha, y_coords, beta):
    """One-parameter specialization at constants (a, 0)."""
    a, b = complex(alpha), complex(beta)
    return map_3x3(x_coords, (a, 0.0), y_coords, (b, 0.0))


def gv_map(x_coords, alpha, y_coords, beta):
    """One-parameter specialization at constants (a/3, 2a/3)."""
    a, b = complex(alpha), complex(beta)
    return map_3x3(x_coords, (a / 3.0, 2.0 * a / 3.0), y_coords, (b / 3.0, 2.0 * b / 3.0))


def boussinesq_lax(coords, alpha) -> BinomialPencil:
    return leaf_lax_3x3(LeafPoint3(coords, (complex(alpha), 0.0)))


def gv_lax(coords, alpha) -> BinomialPencil:
    a = complex(alpha)
    return leaf_lax_3x3(LeafPoint3(coords, (a / 3.0, 2.0 * a / 3.0)))


@dataclass(frozen=True)
class GVVector:
    """A pair of projective vectors in the affine chart, with parameter lam.

    xi and eta are 3-vectors whose third coordinate is 1; the bilinear
    pairing (xi, eta) must not vanish.
    """

    xi: tuple
    eta: tuple
    lam: complex

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(complex(c) for c in self.xi))
        object.__setattr__(self, "eta", tuple(complex(c) for c in self.eta))
        object.__setattr__(self, "lam", complex(self.lam))
        if len(self.xi) != 3 or len(self.eta) != 3:
            raise ValueError("xi and eta must be 3-vectors")
        if self.xi[2] != 1 or self.eta[2] != 1:
            raise DomainError("affine chart requires third coordinate 1")
        if vector_pairing(self.xi, self.eta) == 0:
            raise DomainError("pairing (xi, eta) must not vanish")


def vector_pairing(xi, eta) -> complex:
    """Bilinear pairing sum(xi_i * eta_i), no conjugation."""
    return sum(complex(a) * complex(b) for a, b in zip(xi, eta))


def gv_lax_A(xi, eta, lam, zeta) -> np.ndarray:
    """Rank-one perturbation of the identity with a simple pole at zeta=lam.

    Invariant under independent rescaling of xi and eta; accepts arbitrary
    3-vectors, not just the affine chart.
    """
    lam, zeta = complex(lam), complex(zeta)
    if zeta == lam:
        raise DomainError("spectral parameter sits on the pole zeta = lam")
    pairing = vector_pairing(xi, eta)
    if pairing == 0:
        raise DomainError("pairing (xi, eta) must not vanish")
    xi_col = np.array(xi, dtype=complex).reshape(3, 1)
    eta_row = np.array(eta, dtype=complex).reshape(1, 3)
    return np.eye(3, dtype=complex) + (2.0 * lam / (zeta - lam)) * (xi_col @ eta_row) / pairing


def gv_lax_B(xi, eta, lam, zeta) -> np.ndarray:
    """Polynomial companion of gv_lax_A, linear in zeta."""
    lam, zeta = complex(lam), complex(zeta)
    pairing = vector_pairing(xi, eta)
    if pairing == 0:
        raise DomainError("pairing (xi, eta) must not vanish")
    xi_col = np.array(xi, dtype=complex).reshape(3, 1)
    eta_row = np.array(eta, dtype=complex).reshape(1, 3)
    return lam * (2.0 * (xi_col @ eta_row) / pairing - np.eye(3)) - zeta * np.eye(3)


def gv_vector_pencil(coords, lam) -> BinomialPencil:
    """gv_lax_B as a binomial pencil in the affine chart."""
    xi1, xi2, eta1, eta2 = (complex(c) for c in coords)
    point = gv_lax_B((xi1, xi2, 1.0), (eta1, eta2, 1.0), lam, 0.0)
    return BinomialPencil(point, np.eye(3, dtype=complex))


def gv_transform(g: GVVector) -> LeafPoint3:
    """Projective-vector data to leaf coordinates.

    The polynomial Lax matrix of the vector pair equals the leaf pencil at
    parameter -lam, so the leaf constants are (-lam/3, -2*lam/3).
    """
    s = vector_pairing(g.xi, g.eta)
    lam = g.lam
    coords = (
        -g.eta[0],
        -g.eta[1],
        2.0 * lam * g.xi[0] / s,
        2.0 * lam * g.xi[1] / s,
    )
    return LeafPoint3(coords, (-lam / 3.0, -2.0 * lam / 3.0))


def gv_inverse_transform(coords, lam) -> GVVector:
    """Leaf coordinates back to a projective-vector pair."""
    x1, x2, X1, X2 = (complex(c) for c in coords)
    lam = complex(lam)
    denom = 2.0 * lam + x1 * X1 + x2 * X2
    if denom == 0:
        raise DomainError("inverse transform needs 2*lam + x1*X1 + x2*X2 != 0")
    return GVVector((X1 / denom, X2 / denom, 1.0), (-x1, -x2, 1.0), lam)


def gv_vector_map(g1: GVVector, g2: GVVector):
    """Yang-Baxter map on projective-vector pairs.

    Conjugation of the leaf specialization at parameters (-lam, -mu) by the
    coordinate transform; each output keeps its factor's parameter.
    """
    p1 = gv_transform(g1)
    p2 = gv_transform(g2)
    u_coords, v_coords = gv_map(p1.coords, -g1.lam, p2.coords, -g2.lam)
    return (
        gv_inverse_transform(u_coords, g1.lam),
        gv_inverse_transform(v_coords, g2.lam),
    )


def _sample_away_from_zero(rng, floor):
    while True:
        z = random_complex(rng)
        if abs(z) >= floor:
            return z


def _leaf_sample_coords(rng):
    return (
        random_complex(rng),
        random_complex(rng),
        _sample_away_from_zero(rng, 0.25),
        _sample_away_from_zero(rng, 0.25),
    )


def _leaf_sample_params(rng):
    return (random_complex(rng), random_complex(rng))


def _single_param(rng):
    return (_sample_away_from_zero(rng, 0.4),)


def _gv_vector_sample_coords(rng):
    while True:
        xi1, xi2, eta1, eta2 = (random_complex(rng) for _ in range(4))
        if abs(xi1 * eta1 + xi2 * eta2 + 1.0) >= 0.2:
            return (xi1, xi2, eta1, eta2)


def _gv_vector_apply(x_coords, x_params, y_coords, y_params):
    g1 = GVVector((x_coords[0], x_coords[1], 1.0), (x_coords[2], x_coords[3], 1.0), x_params[0])
    g2 = GVVector((y_coords[0], y_coords[1], 1.0), (y_coords[2], y_coords[3], 1.0), y_params[0])
    gu, gv = gv_vector_map(g1, g2)
    return (
        (gu.xi[0], gu.xi[1], gu.eta[0], gu.eta[1]),
        (gv.xi[0], gv.xi[1], gv.eta[0], gv.eta[1]),
    )


register(
    MapDescriptor(
        name="yb3",
        coord_len=4,
        param_len=2,
        apply=lambda xc, xp, yc, yp: map_3x3(xc, xp, yc, yp),
        sample_coords=_leaf_sample_coords,
        sample_params=_leaf_sample_params,
        lax=lambda coords, params: leaf_lax_3x3(LeafPoint3(coords, params)),
        reduced_structure=lambda params: canonical_structure(2),
    )
)

register(
    MapDescriptor(
        name="boussinesq",
        coord_len=4,
        param_len=1,
        apply=lambda xc, xp, yc, yp: boussinesq_map(xc, xp[0], yc, yp[0]),
        sample_coords=_leaf_sample_coords,
        sample_params=_single_param,
        lax=lambda coords, params: boussinesq_lax(coords, params[0]),
        reduced_structure=lambda params: canonical_structure(2),
    )
)

register(
    MapDescriptor(
        name="gv",
        coord_len=4,
        param_len=1,
        apply=lambda xc, xp, yc, yp: gv_map(xc, xp[0], yc, yp[0]),
        sample_coords=_leaf_sample_coords,
        sample_params=_single_param,
        lax=lambda coords, params: gv_lax(coords, params[0]),
        reduced_structure=lambda params: canonical_structure(2),
    )
)

register(
    MapDescriptor(
        name="gv-vector",
        coord_len=4,
        param_len=1,
        apply=_gv_vector_apply,
        sample_coords=_gv_vector_sample_coords,
        sample_params=_single_param,
        lax=lambda coords, params: gv_vector_pencil(coords, params[0]),
        reduced_structure=None,
    )
)
