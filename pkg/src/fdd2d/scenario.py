"""Node geometry and radio settings to NetworkParams.

Path gain: free-space Friis constant at 1 m for the carrier, then a power
law, ``phi(d) = (c / (4 pi f d0))**2 * (d / d0)**-n`` with d0 = 1 m.

RSI units: ``RadioConfig.beta`` is read relative to the receiver noise by
default (``beta_unit="noise"``), i.e. ``RSI / sigma2 = beta (p_C / sigma2)**lam``,
which is ``beta_mW = beta * sigma2**(1 - lam)`` in absolute terms. With
``beta_unit="mW"`` the value is used as given.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidGeometry
from .model import NetworkParams
from .units import dbm_to_mw, noise_power_mw

SPEED_OF_LIGHT = 299_792_458.0
REF_DISTANCE = 1.0

Point = tuple[float, float]


def _dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


@dataclass(frozen=True)
class CellLayout:
    """Placement constraints from the simulation setup."""

    cell_radius: float = 200.0
    min_bs_distance: float = 30.0
    d2d_min: float = 150.0
    d2d_max: float = 300.0
    pathloss_exponent: float = 3.8

    def __post_init__(self):
        if not 0 < self.min_bs_distance <= self.cell_radius:
            raise InvalidGeometry("need 0 < min_bs_distance <= cell_radius")
        if not 0 < self.d2d_min <= self.d2d_max:
            raise InvalidGeometry("need 0 < d2d_min <= d2d_max")
        if not self.pathloss_exponent > 2:
            raise InvalidGeometry("pathloss exponent must exceed 2")


@dataclass(frozen=True)
class Geometry:
    B: Point
    C: Point
    S: Point
    D: Point
    cell_radius: float = 200.0
    min_bs_distance: float = 30.0
    pathloss_exponent: float = 3.8
    d2d_distance: float = field(default=float("nan"))

    def __post_init__(self):
        if not self.pathloss_exponent > 2:
            raise InvalidGeometry("pathloss exponent must exceed 2")
        d_sd = _dist(self.S, self.D)
        if math.isnan(self.d2d_distance):
            object.__setattr__(self, "d2d_distance", d_sd)
        elif not math.isclose(self.d2d_distance, d_sd, rel_tol=1e-9):
            raise InvalidGeometry(f"d2d_distance {self.d2d_distance} != |S - D| = {d_sd}")
        tol = 1e-9 * self.cell_radius
        for name in ("C", "S", "D"):
            r = _dist(getattr(self, name), self.B)
            if r < self.min_bs_distance - tol:
                raise InvalidGeometry(f"{name} is {r:.3f} m from the BS, below {self.min_bs_distance}")

    def distances(self) -> dict[str, float]:
        return {"SB": _dist(self.S, self.B), "SC": _dist(self.S, self.C),
                "CB": _dist(self.C, self.B), "CD": _dist(self.C, self.D)}


@dataclass(frozen=True)
class RadioConfig:
    carrier_Hz: float = 2e9
    bandwidth_Hz: float = 180e3
    noise_density_dBm_per_Hz: float = -174.0
    P_S_dBm: float = 23.0
    P_C_dBm: float = 23.0
    theta_dBm: float = -92.0
    beta: float = 1.0
    lam: float = 0.1
    beta_unit: str = "noise"

    def __post_init__(self):
        if self.beta_unit not in ("noise", "mW"):
            raise ValueError("beta_unit must be 'noise' or 'mW'")

    @property
    def sigma2_mW(self) -> float:
        return noise_power_mw(self.noise_density_dBm_per_Hz, self.bandwidth_Hz)

    @property
    def beta_mW(self) -> float:
        if self.beta_unit == "mW":
            return self.beta
        return beta_from_noise_units(self.beta, self.lam, self.sigma2_mW)


def beta_from_noise_units(beta: float, lam: float, sigma2: float) -> float:
    return beta * sigma2 ** (1.0 - lam)


def path_gain(d, exponent: float = 3.8, carrier_Hz: float = 2e9):
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise InvalidGeometry("zero link distance")
    k = (SPEED_OF_LIGHT / (4 * math.pi * carrier_Hz * REF_DISTANCE)) ** 2
    g = k * (d / REF_DISTANCE) ** -exponent
    return float(g) if g.ndim == 0 else g


def build_params(geom: Geometry, radio: RadioConfig) -> NetworkParams:
    d = geom.distances()
    for k, v in d.items():
        if v == 0:
            raise InvalidGeometry(f"nodes of link {k} coincide")
    phi = {k: path_gain(v, geom.pathloss_exponent, radio.carrier_Hz) for k, v in d.items()}
    sig = radio.sigma2_mW
    return NetworkParams(
        phi_SB=phi["SB"], phi_SC=phi["SC"], phi_CB=phi["CB"], phi_CD=phi["CD"],
        sigma2_B=sig, sigma2_C=sig, sigma2_D=sig,
        beta=radio.beta_mW, lam=radio.lam,
        theta=float(dbm_to_mw(radio.theta_dBm)),
        P_S=float(dbm_to_mw(radio.P_S_dBm)), P_C=float(dbm_to_mw(radio.P_C_dBm)),
    )


def reference_geometry(layout: CellLayout = CellLayout()) -> Geometry:
    """Collinear drop: DT at the minimum BS distance, DR at the minimum D2D
    distance beyond it, CU at the midpoint of the D2D pair."""
    s = layout.min_bs_distance
    S = (s, 0.0)
    D = (s + layout.d2d_min, 0.0)
    C = (s + 0.5 * layout.d2d_min, 0.0)
    return Geometry((0.0, 0.0), C, S, D, layout.cell_radius, layout.min_bs_distance,
                    layout.pathloss_exponent)


def _in_cell(p: Point, layout: CellLayout) -> bool:
    r = math.hypot(*p)
    return layout.min_bs_distance <= r <= layout.cell_radius


def random_drop(layout: CellLayout, seed: int, max_attempts: int = 10_000) -> Geometry:
    """Uniform drop: DT uniform over the cell annulus, DR at a uniform
    distance in [d2d_min, d2d_max] and uniform bearing from the DT, CU uniform
    in the disc having DT-DR as diameter. Rejection sampling until every node
    lies in the annulus; InvalidGeometry after ``max_attempts``."""
    rng = np.random.default_rng(seed)
    r0, R = layout.min_bs_distance, layout.cell_radius
    for _ in range(max_attempts):
        r = math.sqrt(rng.uniform(r0 * r0, R * R))
        t = rng.uniform(0, 2 * math.pi)
        S = (r * math.cos(t), r * math.sin(t))
        d = rng.uniform(layout.d2d_min, layout.d2d_max)
        b = rng.uniform(0, 2 * math.pi)
        D = (S[0] + d * math.cos(b), S[1] + d * math.sin(b))
        rc = 0.5 * d * math.sqrt(rng.uniform())
        tc = rng.uniform(0, 2 * math.pi)
        C = (0.5 * (S[0] + D[0]) + rc * math.cos(tc), 0.5 * (S[1] + D[1]) + rc * math.sin(tc))
        if _in_cell(D, layout) and _in_cell(C, layout):
            return Geometry((0.0, 0.0), C, S, D, R, r0, layout.pathloss_exponent)
    raise InvalidGeometry(f"no admissible drop in {max_attempts} attempts")
