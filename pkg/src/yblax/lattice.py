"""Transfer dynamics on periodic staircase data.

A staircase state holds 2m sites, alternating between the two factor types
of a registered map. One transfer step applies the map to every adjacent
(x, y) pair and shifts the second factor by one period slot. The ordered
product of site Lax matrices is a polynomial monodromy whose spectral data
the transfer step preserves; the evolve driver measures the actual drift.
For the degenerate-limit 2x2 map the two closed-form integrals and their
involution are available as well.
"""

import csv

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, PoleEncountered, YBLaxError
from .matrix_core import BinomialPencil, char_poly_coeffs
from .registry import get_map

MONODROMY_ZETAS = (0.0, 1.0, -1.0, 1j, -1j)
TRAJECTORY_CAP = 10_000


@dataclass(frozen=True)
class StaircaseState:
    """Periodic staircase data for one registered map.

    sites alternate x-type and y-type, so the length is twice the period.
    Each site is a (coords, params) pair shaped for the map.
    """

    map_id: str
    sites: tuple

    def __post_init__(self):
        desc = get_map(self.map_id)
        sites = tuple(
            (tuple(complex(c) for c in coords), tuple(complex(a) for a in params))
            for coords, params in self.sites
        )
        object.__setattr__(self, "sites", sites)
        if len(sites) < 2 or len(sites) % 2 != 0:
            raise ValueError("sites must alternate x and y types (even count >= 2)")
        for coords, params in sites:
            if len(coords) != desc.coord_len or len(params) != desc.param_len:
                raise ValueError(
                    f"site shape mismatch for map {self.map_id!r}: "
                    f"expected {desc.coord_len} coords and {desc.param_len} params"
                )

    @property
    def period(self) -> int:
        return len(self.sites) // 2

    def x_sites(self) -> tuple:
        return self.sites[0::2]

    def y_sites(self) -> tuple:
        return self.sites[1::2]


def monodromy(state: StaircaseState, zeta) -> np.ndarray:
    """Ordered product of site Lax matrices; the first site sits rightmost."""
    desc = get_map(state.map_id)
    if desc.lax is None:
        raise DomainError(f"map {state.map_id!r} has no Lax pencil")
    product = None
    for coords, params in state.sites:
        factor = desc.lax(coords, params)(zeta)
        product = factor if product is None else factor @ product
    return product


def monodromy_coefficients(state: StaircaseState, zetas=MONODROMY_ZETAS):
    """Spectral data: char-poly coefficients of the monodromy at each zeta."""
    rows = []
    for z in zetas:
        T = monodromy(state, z)
        eye = np.eye(T.shape[0], dtype=complex)
        coeffs = char_poly_coeffs(BinomialPencil(T, eye))
        rows.append(tuple(coeffs[i] for i in range(T.shape[0])))
    return tuple(rows)


def transfer_step(state: StaircaseState) -> StaircaseState:
    """One transfer-map step: map every (x_k, y_k) pair, shift the y row."""
    desc = get_map(state.map_id)
    m = state.period
    xs, ys = state.x_sites(), state.y_sites()
    new_x, new_y = [None] * m, [None] * m
    for k in range(m):
        (x_coords, alpha), (y_coords, beta) = xs[k], ys[k]
        u, v = desc.apply(x_coords, alpha, y_coords, beta)
        new_x[k] = (u, alpha)
        new_y[(k + 1) % m] = (v, beta)
    sites = []
    for k in range(m):
        sites.append(new_x[k])
        sites.append(new_y[k])
    return StaircaseState(state.map_id, tuple(sites))


def integrals_ay(x1, x2, y1, y2, alpha, beta):
    """The two polynomial integrals of the degenerate-limit transfer dynamics."""
    a1, a2, a3 = (complex(a) for a in alpha)
    b1, b2, b3 = (complex(b) for b in beta)
    if a3 == 0 or b3 == 0:
        raise DomainError("integrals need a3 != 0 and b3 != 0")
    x1, x2, y1, y2 = (complex(c) for c in (x1, x2, y1, y2))
    j1 = a1 * b1 / a3 * x1 * x2 + a1 * b1 / b3 * y1 * y2
    j2 = x2 * y1 + x1 * y2 + a1 * b1 / (a3 * b3) * (a2 + x1 * x2) * (b2 + y1 * y2)
    return j1, j2


def _ay_integrals_of(state: StaircaseState):
    (x_coords, alpha), (y_coords, beta) = state.sites[0], state.sites[1]
    return integrals_ay(x_coords[0], x_coords[1], y_coords[0], y_coords[1], alpha, beta)


def _relative_gap(now, ref) -> float:
    return max(abs(a - b) / (1.0 + abs(b)) for a, b in zip(now, ref))


@dataclass(frozen=True)
class TransferReport:
    """Trajectory (capped) plus invariant-drift statistics."""

    map_id: str
    steps: int
    states: tuple
    truncated: bool
    coeff_drift_series: tuple
    max_coeff_drift: float
    j1_drift_series: Optional[tuple]
    j2_drift_series: Optional[tuple]
    j1_drift: Optional[float]
    j2_drift: Optional[float]

    def drift_summary(self) -> dict:
        return {
            "max_coeff_drift": self.max_coeff_drift,
            "j1_drift": self.j1_drift,
            "j2_drift": self.j2_drift,
            "steps": self.steps,
        }


def transfer_evolve(
    state: StaircaseState,
    steps: int,
    zetas=MONODROMY_ZETAS,
    trajectory_cap: int = TRAJECTORY_CAP,
) -> TransferReport:
    """Iterate the transfer map, tracking spectral and integral drift.

    Drift is relative to the initial state. Stored states are capped;
    statistics always cover the full run. A site hitting a pole of the map
    raises PoleEncountered with the failing step index.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    ref_coeffs = monodromy_coefficients(state, zetas)
    track_j = state.map_id == "ay" and state.period == 1
    ref_j = _ay_integrals_of(state) if track_j else None

    states = [state]
    truncated = False
    coeff_series = []
    j1_series = [] if track_j else None
    j2_series = [] if track_j else None
    current = state
    for k in range(steps):
        try:
            current = transfer_step(current)
        except YBLaxError as exc:
            raise PoleEncountered(k, str(exc)) from exc
        if len(states) <= trajectory_cap:
            states.append(current)
        else:
            truncated = True
        now = monodromy_coefficients(current, zetas)
        coeff_series.append(
            max(_relative_gap(row, ref) for row, ref in zip(now, ref_coeffs))
        )
        if track_j:
            j1, j2 = _ay_integrals_of(current)
            j1_series.append(abs(j1 - ref_j[0]) / (1.0 + abs(ref_j[0])))
            j2_series.append(abs(j2 - ref_j[1]) / (1.0 + abs(ref_j[1])))
    return TransferReport(
        map_id=state.map_id,
        steps=steps,
        states=tuple(states),
        truncated=truncated,
        coeff_drift_series=tuple(coeff_series),
        max_coeff_drift=max(coeff_series, default=0.0),
        j1_drift_series=tuple(j1_series) if track_j else None,
        j2_drift_series=tuple(j2_series) if track_j else None,
        j1_drift=max(j1_series, default=0.0) if track_j else None,
        j2_drift=max(j2_series, default=0.0) if track_j else None,
    )


def _site_coord_names(site_index: int, coord_len: int):
    prefix = "x" if site_index % 2 == 0 else "y"
    return [f"{prefix}{k + 1}" for k in range(coord_len)]


def write_trajectory_csv(report: TransferReport, path) -> None:
    """Trajectory rows as (step, site, coord name, re, im)."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["step", "site", "coord", "re", "im"])
        for step, state in enumerate(report.states):
            for site_index, (coords, _params) in enumerate(state.sites):
                names = _site_coord_names(site_index, len(coords))
                for name, value in zip(names, coords):
                    writer.writerow(
                        [step, site_index + 1, name, repr(value.real), repr(value.imag)]
                    )
