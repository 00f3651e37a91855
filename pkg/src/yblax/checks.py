"""Randomized verification suites over the registered maps.

Each suite draws admissible inputs by rejection sampling (map errors and
runaway outputs reject the draw), applies one structural identity, and
reports the worst relative residual. The CLI's verify command and the
acceptance tests both run on these.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import YBLaxError
from .matrix_core import ZETA_SAMPLES, char_poly_coeffs, norm_inf
from .registry import MapDescriptor, get_map
from .sklyanin import poisson_map_check, product_structure

DEFAULT_TOLERANCES = {
    "yang_baxter": 1e-9,
    "lax": 1e-9,
    "poisson": 1e-6,
    "casimir": 1e-10,
    "involution": 1e-9,
}

OUTPUT_CAP_FACTOR = 20.0
MAX_REJECTIONS = 500


def _coord_scale(*coord_tuples) -> float:
    return max(abs(c) for coords in coord_tuples for c in coords)


def _bounded(outputs, scale) -> bool:
    return _coord_scale(*outputs) <= OUTPUT_CAP_FACTOR * (1.0 + scale)


def sample_pair(desc: MapDescriptor, rng):
    """One admissible ((x, alpha), (y, beta)): the map evaluates and stays bounded."""
    for _ in range(MAX_REJECTIONS):
        xc, yc = desc.sample_coords(rng), desc.sample_coords(rng)
        xp, yp = desc.sample_params(rng), desc.sample_params(rng)
        try:
            u, v = desc.apply(xc, xp, yc, yp)
        except YBLaxError:
            continue
        if _bounded((u, v), _coord_scale(xc, yc)):
            return (xc, xp), (yc, yp)
    raise RuntimeError(f"could not sample an admissible pair for {desc.name!r}")


def _apply_at(desc, triple, i, j):
    lst = list(triple)
    u, v = desc.apply(lst[i][0], lst[i][1], lst[j][0], lst[j][1])
    lst[i] = (u, lst[i][1])
    lst[j] = (v, lst[j][1])
    return tuple(lst)


def _yb_sides(desc, triple):
    lhs = _apply_at(desc, _apply_at(desc, _apply_at(desc, triple, 1, 2), 0, 2), 0, 1)
    rhs = _apply_at(desc, _apply_at(desc, _apply_at(desc, triple, 0, 1), 0, 2), 1, 2)
    return lhs, rhs


def sample_triple(desc: MapDescriptor, rng):
    """An admissible triple: both composition orders evaluate and stay bounded."""
    for _ in range(MAX_REJECTIONS):
        triple = tuple(
            (desc.sample_coords(rng), desc.sample_params(rng)) for _ in range(3)
        )
        scale = _coord_scale(*(coords for coords, _ in triple))
        try:
            lhs, rhs = _yb_sides(desc, triple)
        except YBLaxError:
            continue
        if _bounded([coords for coords, _ in lhs + rhs], scale):
            return triple
    raise RuntimeError(f"could not sample an admissible triple for {desc.name!r}")


def yang_baxter_residual(desc: MapDescriptor, triple) -> float:
    """Relative defect of the two composition orders on one triple."""
    lhs, rhs = _yb_sides(desc, triple)
    scale = 1.0 + _coord_scale(*(coords for coords, _ in triple))
    gap = max(
        abs(a - b)
        for (lc, _), (rc, _) in zip(lhs, rhs)
        for a, b in zip(lc, rc)
    )
    return gap / scale


def yang_baxter_suite(desc: MapDescriptor, samples: int, rng) -> float:
    return max(
        yang_baxter_residual(desc, sample_triple(desc, rng)) for _ in range(samples)
    )


def lax_equation_residual(desc: MapDescriptor, pair) -> float:
    """Relative Lax-equation defect L(u)L(v) = L(y)L(x) over the sampled zetas."""
    (xc, xp), (yc, yp) = pair
    u, v = desc.apply(xc, xp, yc, yp)
    L_x, L_y = desc.lax(xc, xp), desc.lax(yc, yp)
    L_u, L_v = desc.lax(u, xp), desc.lax(v, yp)
    raw = max(
        norm_inf(L_u(z) @ L_v(z) - L_y(z) @ L_x(z)) for z in ZETA_SAMPLES
    )
    scale = 1.0 + norm_inf(L_x.point) * norm_inf(L_y.point)
    return raw / scale


def lax_suite(desc: MapDescriptor, samples: int, rng) -> Optional[float]:
    if desc.lax is None:
        return None
    return max(
        lax_equation_residual(desc, sample_pair(desc, rng)) for _ in range(samples)
    )


def casimir_drift_residual(desc: MapDescriptor, pair) -> float:
    """Relative drift of the pencil coefficients along the map, both factors."""
    (xc, xp), (yc, yp) = pair
    u, v = desc.apply(xc, xp, yc, yp)
    worst = 0.0
    for before, after, params in ((xc, u, xp), (yc, v, yp)):
        f_before = char_poly_coeffs(desc.lax(before, params))
        f_after = char_poly_coeffs(desc.lax(after, params))
        worst = max(
            worst,
            max(
                abs(a - b) / (1.0 + abs(b))
                for a, b in zip(f_after.coeffs, f_before.coeffs)
            ),
        )
    return worst


def casimir_suite(desc: MapDescriptor, samples: int, rng) -> Optional[float]:
    if desc.lax is None:
        return None
    return max(
        casimir_drift_residual(desc, sample_pair(desc, rng)) for _ in range(samples)
    )


def _pair_structures(desc, xp, yp):
    Jx = desc.reduced_structure(xp)
    Jy = desc.reduced_structure(yp)
    return product_structure(Jx, Jy)


def poisson_residual(desc: MapDescriptor, pair, h: float = 1e-6) -> float:
    """Finite-difference check that the map preserves the product structure."""
    (xc, xp), (yc, yp) = pair
    J = _pair_structures(desc, xp, yp)

    def F(p):
        half = len(p) // 2
        u, v = desc.apply(tuple(p[:half]), xp, tuple(p[half:]), yp)
        return np.array(u + v, dtype=complex)

    point = np.array(xc + yc, dtype=complex)
    return poisson_map_check(F, J, J, point, h=h)


# Finite differences only make sense where the map is smooth; a large
# Jacobian flags a nearby pole, where truncation error swamps the identity.
JACOBIAN_BOUND = 10.0


def poisson_suite(desc: MapDescriptor, samples: int, rng) -> Optional[float]:
    if desc.reduced_structure is None:
        return None
    from .sklyanin import jacobian_central

    worst = 0.0
    done = 0
    attempts = 0
    while done < samples:
        attempts += 1
        if attempts > MAX_REJECTIONS + samples:
            raise RuntimeError(f"could not finish Poisson sampling for {desc.name!r}")
        (xc, xp), (yc, yp) = sample_pair(desc, rng)

        def F(p):
            half = len(p) // 2
            u, v = desc.apply(tuple(p[:half]), xp, tuple(p[half:]), yp)
            return np.array(u + v, dtype=complex)

        point = np.array(xc + yc, dtype=complex)
        try:
            if np.max(np.abs(jacobian_central(F, point, 1e-6))) > JACOBIAN_BOUND:
                continue
            J = _pair_structures(desc, xp, yp)
            worst = max(worst, poisson_map_check(F, J, J, point, h=1e-6))
        except YBLaxError:
            continue
        done += 1
    return worst


def involution_suite(samples: int, rng) -> float:
    """Max |{J1, J2}| for the degenerate-limit integrals, random data."""
    from .lattice import integrals_ay
    from .sklyanin import Observable, bracket, constant_pair_structure

    def rc(floor=0.0):
        while True:
            z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            if abs(z) >= floor:
                return z

    worst = 0.0
    for _ in range(samples):
        alpha = (rc(0.4), rc(), rc(0.4))
        beta = (rc(0.4), rc(), rc(0.4))
        J = product_structure(
            constant_pair_structure(alpha[2]), constant_pair_structure(beta[2])
        )
        f1 = Observable(
            4, lambda p: integrals_ay(p[0], p[1], p[2], p[3], alpha, beta)[0]
        )
        f2 = Observable(
            4, lambda p: integrals_ay(p[0], p[1], p[2], p[3], alpha, beta)[1]
        )
        point = np.array([rc() for _ in range(4)])
        worst = max(worst, abs(bracket(J, f1, f2, point)))
    return worst


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_residual: Optional[float]
    tolerance: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.max_residual is None or self.max_residual <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "samples": self.samples,
            "passed": self.passed,
            "skipped": self.max_residual is None,
        }


def verify_map(
    map_id: str,
    samples: int = 1000,
    seed: int = 0,
    tolerances: Optional[dict] = None,
    poisson_samples: Optional[int] = None,
) -> dict:
    """Run every applicable suite for one map id; returns a report fragment."""
    desc = get_map(map_id)
    tol = dict(DEFAULT_TOLERANCES)
    if tolerances:
        tol.update(tolerances)
    if poisson_samples is None:
        poisson_samples = min(samples, 100)
    rng = np.random.default_rng(seed)

    results = [
        CheckResult("yang_baxter", yang_baxter_suite(desc, samples, rng), tol["yang_baxter"], samples),
        CheckResult("lax", lax_suite(desc, samples, rng), tol["lax"], samples),
        CheckResult("casimir", casimir_suite(desc, samples, rng), tol["casimir"], samples),
        CheckResult("poisson", poisson_suite(desc, poisson_samples, rng), tol["poisson"], poisson_samples),
    ]
    if map_id == "ay":
        results.append(
            CheckResult("involution", involution_suite(min(samples, 200), rng), tol["involution"], min(samples, 200))
        )
    return {
        "map": map_id,
        "samples": samples,
        "seed": seed,
        "tolerances": {r.name: r.tolerance for r in results},
        "checks": {r.name: r.as_dict() for r in results},
        "passed": all(r.passed for r in results),
    }
