"""Coherent facet-sum engine for flat and convex reflector received power."""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass

import numpy as np

from .antenna import AntennaPattern
from .scene import (
    ConvexReflectorSpec,
    FlatReflectorSpec,
    GeometryError,
    RayPath,
    Scenario,
    convex_ray_paths,
    facetize_flat,
    path_geometry_batch,
    vec3,
)

FOUR_PI = 4.0 * math.pi

# Sentinel for "no capturable field at this RX position".
NO_POWER_DB = float("-inf")


class SumMode(enum.Enum):
    """How per-ray terms are formed and combined.

    PHYSICAL: per-ray field amplitudes sqrt(P*G_T*G_R*alpha*eta) * lambda/(4*pi*d),
    averaged over the ray set so that a single in-phase ray reproduces the
    Friis link budget; reported as |sum|^2 in dBm (TX power in mW).

    LITERAL: the textbook facet-sum form with a sqrt(N) prefactor and
    P/(4*pi*d)^2 * sqrt(G_T*G_R) * lambda^2 terms, reported as 10*log10|sum|.
    Its absolute level is not a calibrated power; use it on a relative scale.
    """

    PHYSICAL = "physical"
    LITERAL = "literal"

    @classmethod
    def parse(cls, text: str) -> "SumMode":
        key = str(text).strip().lower()
        for mode in cls:
            if mode.value == key:
                return mode
        raise ValueError(f"unknown sum mode {text!r}; expected 'physical' or 'literal'")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class AttenuationFactors:
    """Power attenuation from beam-footprint mismatch (flat) plus the extra
    divergence of a convex surface (curved < flat for any finite radius)."""

    flat: float
    curved: float

    def __post_init__(self) -> None:
        if not (0.0 < self.flat <= 1.0):
            raise ValueError("flat attenuation factor must be in (0, 1]")
        if not (0.0 < self.curved <= 1.0):
            raise ValueError("curved attenuation factor must be in (0, 1]")


@dataclass(frozen=True)
class RayContribution:
    """One ray's resolved path, per-plane gain factors, and complex amplitude."""

    distance_m: float
    gains: tuple[float, float, float, float]  # TX az/el, RX az/el (linear)
    phase_rad: float
    amplitude: complex


def _reflector_area_m2(scenario: Scenario) -> float:
    spec = scenario.reflector
    if isinstance(spec, ConvexReflectorSpec):
        return spec.chord_width_m * spec.height_m
    return spec.width_m * spec.height_m


def alpha_flat(scenario: Scenario) -> float:
    """Fraction of the TX main-lobe footprint intercepted by the plate.

    The footprint is the ellipse cut by the TX HPBW cone on the reflector
    plane at the reflector range; the plate area is foreshortened by the
    incidence angle. Clamped at 1 when the plate out-sizes the footprint.
    """
    if scenario.alpha_flat_override is not None:
        return scenario.alpha_flat_override
    g = scenario.geometry
    d_tx = float(np.linalg.norm(g.tx_position - g.reflector_center))
    cos_inc = math.cos(math.radians(g.incidence_angle_deg))
    semi_az = d_tx * math.tan(math.radians(scenario.tx_pattern.hpbw_az_deg) / 2.0)
    semi_el = d_tx * math.tan(math.radians(scenario.tx_pattern.hpbw_el_deg) / 2.0) / cos_inc
    footprint = math.pi * semi_az * semi_el
    if footprint <= 0.0:
        raise GeometryError("beam footprint on the reflector plane is degenerate")
    return min(1.0, _reflector_area_m2(scenario) * cos_inc / footprint)


def alpha_curved(scenario: Scenario) -> float:
    """Convex-mirror divergence factor applied on top of the flat attenuation.

    A convex mirror of radius R spreads the reflected bundle as if it came
    from a virtual focus at R/2 behind the surface, scaling captured power by
    R / (R + 2*d) over the reflector-to-RX leg. Strictly below alpha_flat for
    every finite radius.
    """
    if scenario.alpha_curved_override is not None:
        return scenario.alpha_curved_override
    if not isinstance(scenario.reflector, ConvexReflectorSpec):
        raise ValueError("alpha_curved requires a convex reflector spec")
    r = scenario.reflector.radius_of_curvature_m
    d_rx = scenario.rx_range_m
    return alpha_flat(scenario) * r / (r + 2.0 * d_rx)


def attenuation_factors(scenario: Scenario) -> AttenuationFactors:
    return AttenuationFactors(flat=alpha_flat(scenario), curved=alpha_curved(scenario))


def _amplitudes(
    tx_pattern: AntennaPattern,
    rx_pattern: AntennaPattern,
    distance_m,
    tx_az,
    tx_el,
    rx_az,
    rx_el,
    wavelength_m: float,
    d_ref_m: float,
    alpha: float,
    efficiency: float,
    tx_power_mw: float,
    mode: SumMode,
    normalization: float,
):
    """Complex per-ray terms for either sum mode (vectorized)."""
    d = np.asarray(distance_m, dtype=float)
    gain_tx = tx_pattern.gain(tx_az, tx_el)
    gain_rx = rx_pattern.gain(rx_az, rx_el)
    phase = -2.0 * math.pi * (d - d_ref_m) / wavelength_m
    phasor = np.exp(1j * phase)
    if mode is SumMode.PHYSICAL:
        amp = (
            normalization
            * np.sqrt(tx_power_mw * gain_tx * gain_rx * alpha * efficiency)
            * (wavelength_m / (FOUR_PI * d))
        )
    else:
        amp = (
            tx_power_mw / (FOUR_PI * d) ** 2
            * np.sqrt(gain_tx * gain_rx)
            * wavelength_m ** 2
            * alpha
        )
    return amp * phasor, phase


def contribution(
    tx_pattern: AntennaPattern,
    rx_pattern: AntennaPattern,
    path: RayPath,
    wavelength_m: float,
    d_ref_m: float,
    alpha: float,
    efficiency: float,
    mode: SumMode,
    tx_power_mw: float = 1.0,
    normalization: float = 1.0,
) -> RayContribution:
    """Resolve one ray path into its complex amplitude term.

    `normalization` carries the 1/N ray-set averaging factor in PHYSICAL mode
    (the caller knows the set size); it is ignored by LITERAL mode.
    """
    if path.distance_m <= 0.0:
        raise GeometryError("ray with non-positive path length is degenerate")
    amp, phase = _amplitudes(
        tx_pattern,
        rx_pattern,
        path.distance_m,
        path.tx_az_deg,
        path.tx_el_deg,
        path.rx_az_deg,
        path.rx_el_deg,
        wavelength_m,
        d_ref_m,
        alpha,
        efficiency,
        tx_power_mw,
        mode,
        normalization,
    )
    floor = -tx_pattern.sidelobe_floor_db
    gains = (
        float(10.0 ** (-min(12.0 * (path.tx_az_deg / tx_pattern.hpbw_az_deg) ** 2, floor) / 10.0)),
        float(10.0 ** (-min(12.0 * (path.tx_el_deg / tx_pattern.hpbw_el_deg) ** 2, floor) / 10.0)),
        float(10.0 ** (-min(12.0 * (path.rx_az_deg / rx_pattern.hpbw_az_deg) ** 2,
                            -rx_pattern.sidelobe_floor_db) / 10.0)),
        float(10.0 ** (-min(12.0 * (path.rx_el_deg / rx_pattern.hpbw_el_deg) ** 2,
                            -rx_pattern.sidelobe_floor_db) / 10.0)),
    )
    return RayContribution(
        distance_m=path.distance_m,
        gains=gains,
        phase_rad=float(phase),
        amplitude=complex(amp),
    )


def _power_db_from_sum(total: np.ndarray, mode: SumMode) -> np.ndarray:
    mag = np.abs(np.atleast_1d(total))
    out = np.full(mag.shape, NO_POWER_DB)
    nz = mag > 0.0
    if mode is SumMode.PHYSICAL:
        out[nz] = 20.0 * np.log10(mag[nz])  # |sum|^2 in dB
    else:
        out[nz] = 10.0 * np.log10(mag[nz])
    return out


def flat_sweep_power(scenario: Scenario, rx_points: np.ndarray, mode: SumMode) -> np.ndarray:
    """Received power (dB) at each RX point for a flat-reflector scenario.

    PHYSICAL mode sums field amplitudes over the facet grid with 1/N
    averaging (dBm); LITERAL mode additionally includes the center reference
    ray and the sqrt(N) prefactor. Facet order is row-major and fixed, so
    results are bit-reproducible.
    """
    spec = scenario.reflector
    if not isinstance(spec, FlatReflectorSpec):
        raise ValueError("flat_sweep_power requires a flat reflector spec")
    facets, center_ray = facetize_flat(spec, scenario.geometry)
    rays = [center_ray] + facets if mode is SumMode.LITERAL else facets
    launches = np.array([ray.launch_point for ray in rays])

    rx = np.atleast_2d(np.asarray(rx_points, dtype=float))
    d, tx_az, tx_el, rx_az, rx_el = path_geometry_batch(
        scenario.geometry.tx_position,
        launches,
        rx,
        scenario.tx_boresight,
        scenario.rx_boresight,
    )
    alpha = alpha_flat(scenario)
    tx_power_mw = 10.0 ** (scenario.tx_power_dbm / 10.0)
    amp, _ = _amplitudes(
        scenario.tx_pattern,
        scenario.rx_pattern,
        d,
        tx_az,
        tx_el,
        rx_az,
        rx_el,
        scenario.wavelength_m,
        scenario.reference_path_m,
        alpha,
        spec.reflection_efficiency,
        tx_power_mw,
        mode,
        normalization=1.0 / spec.facet_count,
    )
    total = amp.sum(axis=1)
    if mode is SumMode.LITERAL:
        total = math.sqrt(spec.facet_count) * total
    return _power_db_from_sum(total, mode)


def flat_received_power(scenario: Scenario, rx: np.ndarray, mode: SumMode) -> float:
    """Received power (dB) at one RX point for a flat-reflector scenario."""
    return float(flat_sweep_power(scenario, np.asarray(rx, dtype=float)[None, :], mode)[0])


def convex_received_power(scenario: Scenario, rx: np.ndarray, mode: SumMode) -> float:
    """Received power (dB) at one RX point for a convex-reflector scenario.

    Sums captured rays over height sections and azimuth intercepts with the
    curved-surface attenuation factor. Each ray is evaluated along its
    specular path from the TX over the arc to its intercept on the RX
    capture segment (the bundle the antenna aperture actually collects), so
    the divergence of the curved surface dephases the bundle physically.
    PHYSICAL mode averages over the captured-ray count; LITERAL applies the
    sqrt(N_el * N_az) prefactor. Returns -inf when no ray is capturable.
    """
    spec = scenario.reflector
    if not isinstance(spec, ConvexReflectorSpec):
        raise ValueError("convex_received_power requires a convex reflector spec")
    if spec.is_planar_limit:
        return flat_received_power(_planar_limit_scenario(scenario), rx, mode)
    paths = convex_ray_paths(
        spec,
        scenario.geometry,
        vec3(rx),
        scenario.rx_pattern,
        scenario.capture_range_m,
        scenario.tx_boresight,
        scenario.rx_boresight,
    )
    if paths is None:
        return NO_POWER_DB
    n_rays = paths.distance_m.size
    alpha = alpha_curved(scenario)
    tx_power_mw = 10.0 ** (scenario.tx_power_dbm / 10.0)
    amp, _ = _amplitudes(
        scenario.tx_pattern,
        scenario.rx_pattern,
        paths.distance_m,
        paths.tx_az_deg,
        paths.tx_el_deg,
        paths.rx_az_deg,
        paths.rx_el_deg,
        scenario.wavelength_m,
        scenario.reference_path_m,
        alpha,
        spec.reflection_efficiency,
        tx_power_mw,
        mode,
        normalization=1.0 / n_rays,
    )
    total = amp.sum()
    if mode is SumMode.LITERAL:
        total = math.sqrt(paths.n_sections * paths.n_az_nominal) * total
    return float(_power_db_from_sum(np.array([total]), mode)[0])


def _planar_limit_scenario(scenario: Scenario) -> Scenario:
    """Flat-reflector equivalent used above the planar-limit radius flag.

    The azimuth discretization follows the height-section count (square
    grid), and the curved attenuation factor carries over (it converges to
    the flat factor in this limit).
    """
    spec = scenario.reflector
    flat_equiv = FlatReflectorSpec(
        width_m=spec.chord_width_m,
        height_m=spec.height_m,
        facets_per_side=spec.n_height_sections,
        reflection_efficiency=spec.reflection_efficiency,
    )
    return dataclasses.replace(
        scenario,
        reflector=flat_equiv,
        alpha_flat_override=alpha_curved(scenario),
    )


def convex_sweep_power(scenario: Scenario, rx_points: np.ndarray, mode: SumMode) -> np.ndarray:
    """Received power (dB) at each RX point for a convex-reflector scenario."""
    rx = np.atleast_2d(np.asarray(rx_points, dtype=float))
    spec = scenario.reflector
    if isinstance(spec, ConvexReflectorSpec) and spec.is_planar_limit:
        return flat_sweep_power(_planar_limit_scenario(scenario), rx, mode)
    return np.array([convex_received_power(scenario, p, mode) for p in rx])


def received_power(scenario: Scenario, rx: np.ndarray, mode: SumMode) -> float:
    """Dispatch to the flat or convex evaluator based on the reflector spec."""
    if scenario.is_convex:
        return convex_received_power(scenario, rx, mode)
    return flat_received_power(scenario, rx, mode)
