"""Interdigital transducer response in the delta-function model.

Each unit cell radiates as a point source, so the frequency response is the
array factor sin(N*pi*x)/(N*sin(pi*x)) with x = (f - f0)/f0, normalized to
the insertion loss at the center frequency. Split-finger electrode geometry
suppresses internal mechanical reflections, which is what justifies dropping
P-matrix / coupling-of-modes corrections at this level of modeling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .device import IdtParams


@dataclass(frozen=True)
class IdtResponse:
    """Complex amplitude response sampled on a frequency grid."""

    frequencies: np.ndarray  # Hz
    amplitude: np.ndarray  # dimensionless, |amplitude| <= insertion loss


def bandwidth(f0: float, periods: int) -> float:
    """Fractional-bandwidth rule 0.9*f0/N_p for an N_p-cell transducer."""
    if periods < 1:
        raise ValueError("periods must be >= 1")
    return 0.9 * f0 / periods


def wavelength(v0: float, f0: float) -> float:
    """Acoustic wavelength v0/f0."""
    if not f0 > 0:
        raise ValueError("f0 must be > 0")
    return v0 / f0


def acoustic_coupling(fq: float, k2: float, periods: int) -> float:
    """Qubit relaxation rate into the SAW channel, 0.5*fq*K^2*N_p (Hz)."""
    return 0.5 * fq * k2 * periods


def array_factor(x: np.ndarray | float, periods: int) -> np.ndarray:
    """sin(N*pi*x)/(N*sin(pi*x)) with its limit values at integer x."""
    x = np.asarray(x, dtype=float)
    s = np.sin(np.pi * x)
    near_integer = np.isclose(s, 0.0, atol=1e-12)
    safe = np.where(near_integer, 1.0, s)
    out = np.sin(periods * np.pi * x) / (periods * safe)
    if np.any(near_integer):
        m = np.rint(x)
        # limit of the ratio as x -> m: (-1)^(m*(N-1))
        limit = np.where((m.astype(np.int64) * (periods - 1)) % 2 == 0, 1.0, -1.0)
        out = np.where(near_integer, limit, out)
    return out


def response(params: IdtParams, frequencies: np.ndarray) -> IdtResponse:
    """Amplitude response on the given frequency grid.

    Real and even about the center frequency; peak value equals the
    insertion loss.
    """
    f = np.asarray(frequencies, dtype=float)
    if f.size == 0:
        raise ValueError("frequency grid must be non-empty")
    x = (f - params.center_frequency) / params.center_frequency
    amp = params.insertion_loss * array_factor(x, params.periods)
    return IdtResponse(frequencies=f, amplitude=amp.astype(complex))
