"""One-dimensional acoustic channel between the transducers.

Signals are complex baseband envelopes referenced to the channel frequency
f_Q; the GHz carrier is tracked implicitly so that nanosecond sampling is
sufficient. Propagation is lossless. Transducer filtering uses the
delta-function (array-factor) response from ``idt``, realized as a zero-phase
filter so that transit times are set purely by the configured distances.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .device import IdtParams
from .errors import GateWindowError, SamplingError
from . import idt as _idt


@dataclass(frozen=True)
class Signal:
    """Complex envelope on a uniform time grid (seconds)."""

    t_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t_grid, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if t.ndim != 1 or t.size < 2:
            raise ValueError("t_grid must be 1D with at least two samples")
        if v.shape != t.shape:
            raise ValueError("values must match t_grid")
        steps = np.diff(t)
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise ValueError("t_grid must be uniform")
        if not np.all(np.isfinite(v.view(float))):
            raise ValueError("values must be finite")
        object.__setattr__(self, "t_grid", t)
        object.__setattr__(self, "values", v)

    @property
    def dt(self) -> float:
        return float(self.t_grid[1] - self.t_grid[0])

    def energy(self) -> float:
        """Sum of |v|^2 * dt."""
        return float(np.sum(np.abs(self.values) ** 2) * self.dt)


@dataclass(frozen=True)
class Spectrum:
    """Complex response (e.g. S21) on a uniform frequency grid (Hz)."""

    f_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.f_grid, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if f.ndim != 1 or f.size < 2:
            raise ValueError("f_grid must be 1D with at least two samples")
        if v.shape != f.shape:
            raise ValueError("values must match f_grid")
        steps = np.diff(f)
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise ValueError("f_grid must be uniform")
        object.__setattr__(self, "f_grid", f)
        object.__setattr__(self, "values", v)

    @property
    def df(self) -> float:
        return float(self.f_grid[1] - self.f_grid[0])


def transit_delay(d: float, v0: float) -> float:
    """Propagation time d/v0 over a distance d."""
    if d < 0 or not v0 > 0:
        raise ValueError("need d >= 0 and v0 > 0")
    return d / v0


def delay(sig: Signal, tau: float) -> Signal:
    """Shift a signal later by tau, rounded to whole samples.

    Zero-fills at the start; samples pushed past the end of the grid are
    dropped. A delay longer than the trace returns an all-zero signal with
    a warning.
    """
    if tau < 0:
        raise ValueError("tau must be >= 0")
    m = int(round(tau / sig.dt))
    n = sig.values.size
    if m >= n:
        warnings.warn("delay exceeds trace duration; returning zeros",
                      stacklevel=2)
        return Signal(sig.t_grid, np.zeros(n, dtype=complex))
    if m == 0:
        return sig
    out = np.zeros(n, dtype=complex)
    out[m:] = sig.values[: n - m]
    return Signal(sig.t_grid, out)


def apply_idt_filter(sig: Signal, params: IdtParams) -> Signal:
    """Band-filter a signal through a transducer.

    The baseband transfer function is the array factor evaluated at
    f0 + offset, which is real and even: a zero-phase realization whose
    impulse response is the transducer's tap comb centered on zero delay.
    Per-tone gain never exceeds the insertion loss.
    """
    bw = _idt.bandwidth(params.center_frequency, params.periods)
    if sig.dt > 1.0 / (10.0 * bw):
        raise SamplingError(
            f"dt = {sig.dt:.3e} s too coarse for a {bw:.3e} Hz band; "
            f"need dt <= {1.0 / (10.0 * bw):.3e} s")
    n = sig.values.size
    # pad by the comb duration to keep the circular convolution linear
    n_pad = int(np.ceil(params.periods / params.center_frequency / sig.dt)) + 2
    m = n + 2 * n_pad
    nu = np.fft.fftfreq(m, d=sig.dt)
    h = _idt.response(params, params.center_frequency + nu).amplitude
    spec = np.fft.fft(sig.values, n=m)
    out = np.fft.ifft(spec * h)[:n]
    return Signal(sig.t_grid, out)


def multi_transit(sig: Signal, loop_gain: float, tau_rt: float,
                  n_max: int) -> Signal:
    """Geometric echo train sum_n loop_gain^n * sig(t - n*tau_rt).

    Models field bouncing in the section between transducer B and the
    qubit; each round trip costs one qubit re-reflection and one transducer
    re-launch, lumped into ``loop_gain``.
    """
    if not 0.0 <= loop_gain < 1.0:
        raise ValueError("loop_gain must lie in [0, 1)")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    m = int(round(tau_rt / sig.dt))
    n = sig.values.size
    out = sig.values.copy()
    gain = 1.0
    for k in range(1, n_max + 1):
        shift = k * m
        if shift >= n:
            break
        gain *= loop_gain
        out[shift:] += gain * sig.values[: n - shift]
    return Signal(sig.t_grid, out)


def _tukey_window(positions: np.ndarray, taper: float) -> np.ndarray:
    """Tukey profile on normalized positions in [0, 1]; 0 outside."""
    w = np.zeros_like(positions)
    inside = (positions >= 0.0) & (positions <= 1.0)
    if taper <= 0.0:
        w[inside] = 1.0
        return w
    u = positions[inside]
    half = taper / 2.0
    head = u < half
    tail = u > 1.0 - half
    win = np.ones_like(u)
    win[head] = 0.5 * (1.0 + np.cos(np.pi * (u[head] / half - 1.0)))
    win[tail] = 0.5 * (1.0 + np.cos(np.pi * ((u[tail] - 1.0) / half + 1.0)))
    w[inside] = win
    return w


def time_gate(spec: Spectrum, gate_start: float, gate_stop: float,
              taper: float = 0.1) -> Spectrum:
    """Isolate one propagation path by windowing in the time domain.

    Inverse-transforms the spectrum, multiplies by a Tukey window (taper
    given as a fraction of the gate length) supported on
    [gate_start, gate_stop], and transforms back. The gate must lie inside
    the unambiguous range 1/df of the frequency grid. Linear and
    deterministic.
    """
    n = spec.values.size
    t_max = 1.0 / spec.df
    if not (0.0 <= gate_start < gate_stop <= t_max):
        raise GateWindowError(
            f"gate [{gate_start:.3e}, {gate_stop:.3e}] s outside the "
            f"unambiguous range [0, {t_max:.3e}] s")
    impulse = np.fft.ifft(spec.values)
    t = np.arange(n) * (t_max / n)
    window = _tukey_window((t - gate_start) / (gate_stop - gate_start), taper)
    return Spectrum(spec.f_grid, np.fft.fft(impulse * window))
