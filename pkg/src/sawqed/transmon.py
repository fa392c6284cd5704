"""Transmon spectrum and flux tuning for a symmetric-SQUID device.

Energies are expressed as ordinary frequencies (Hz). The ladder is truncated
at leading anharmonic order, f_{j,j+1} = f01 - j*EC/h, which reproduces the
measured anharmonicity without higher-order Duffing corrections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .device import TransmonParams
from .errors import TransmonRegimeError, UnreachableFrequencyError

FLUX_SOLVER_TOL_HZ = 1.0


@dataclass(frozen=True)
class FluxBias:
    """External flux through the SQUID loop in units of Phi_0."""

    phi_over_phi0: float


@dataclass(frozen=True)
class LevelStructure:
    """Transition frequencies of the lowest transmon levels (Hz)."""

    f01: float
    f12: float
    anharmonicity: float  # f12 - f01, negative for a transmon
    f02_half: float  # two-phonon transition position f02/2
    f03_third: float  # three-phonon transition position f03/3


def _phi(phi: FluxBias | float) -> float:
    return phi.phi_over_phi0 if isinstance(phi, FluxBias) else float(phi)


def josephson_energy(phi: FluxBias | float, ej0: float) -> float:
    """Flux-tuned Josephson energy EJ,0*|cos(pi*Phi/Phi_0)| in Hz."""
    if not ej0 > 0:
        raise ValueError("ej0 must be > 0")
    return ej0 * abs(math.cos(math.pi * _phi(phi)))


def _f01_from_ej(ej: float, ec: float) -> float:
    if ej <= ec:
        raise TransmonRegimeError(
            f"EJ(flux) = {ej:.4g} Hz is not above EC = {ec:.4g} Hz; "
            "spectrum undefined outside the transmon regime")
    return math.sqrt(8.0 * ej * ec) - ec


def transition_f01(phi: FluxBias | float, t: TransmonParams) -> float:
    """0-1 transition frequency sqrt(8*EJ(Phi)*EC) - EC in Hz."""
    return _f01_from_ej(josephson_energy(phi, t.ej0), t.ec)


def level_structure(phi: FluxBias | float, t: TransmonParams) -> LevelStructure:
    """Ladder positions at leading anharmonic order for the given flux."""
    f01 = transition_f01(phi, t)
    return LevelStructure(
        f01=f01,
        f12=f01 - t.ec,
        anharmonicity=-t.ec,
        f02_half=f01 - t.ec / 2.0,
        f03_third=f01 - t.ec,
    )


def max_f01(t: TransmonParams) -> float:
    """Maximum 0-1 frequency, reached at zero flux."""
    return transition_f01(FluxBias(0.0), t)


def _regime_edge(t: TransmonParams) -> float:
    """Largest flux (in [0, 0.5)) still inside the transmon regime."""
    return math.acos(t.ec / t.ej0) / math.pi


def flux_for_frequency(target_f01: float, t: TransmonParams) -> FluxBias:
    """Invert the flux tuning curve on the branch Phi/Phi_0 in [0, 0.5).

    Bisection on the monotone branch; the result reproduces ``target_f01``
    to within 1 Hz. Raises ``UnreachableFrequencyError`` for targets above
    the zero-flux maximum or below the transmon-regime edge.
    """
    if not target_f01 > 0:
        raise UnreachableFrequencyError("target frequency must be > 0")
    f_max = max_f01(t)
    if target_f01 > f_max:
        raise UnreachableFrequencyError(
            f"target {target_f01:.6g} Hz exceeds f01,max = {f_max:.6g} Hz")
    hi = _regime_edge(t) * (1.0 - 1e-12)
    f_min = transition_f01(hi, t)
    if target_f01 < f_min:
        raise UnreachableFrequencyError(
            f"target {target_f01:.6g} Hz lies below the transmon-regime "
            f"edge at {f_min:.6g} Hz")
    lo = 0.0
    # f01 is strictly decreasing on [0, regime edge)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = transition_f01(mid, t)
        if abs(f_mid - target_f01) <= FLUX_SOLVER_TOL_HZ:
            return FluxBias(mid)
        if f_mid > target_f01:
            lo = mid
        else:
            hi = mid
    return FluxBias(0.5 * (lo + hi))
