"""Two-transmon phonon trap: catch a weak SAW pulse, release it on demand.

Each transmon is a time-tunable linear scatterer (the low-excitation limit of
the two-level response), exchanging fields over a lossless delay line. With
amplitudes in sqrt(quanta/s) the dipole of transmon j obeys

    d beta_j/dt = (i*Delta_j(t) - g) * beta_j + i*sqrt(G/2) * in_j(t)

with Delta_j the transmon frequency minus the pulse carrier, G the acoustic
relaxation rate, g = G/2 + Gphi, and in_j the sum of fields arriving from
both sides. Each dipole re-emits i*sqrt(G/2)*beta_j symmetrically. For
Gphi = 0 this scatterer is exactly lossless, so total emitted energy equals
the input pulse energy; that balance is the model's correctness oracle.

The coupled delay differential equations are integrated with fixed-step RK4
on the shared grid of the input pulse, reading delayed terms from the
already-computed history (linear interpolation at stage midpoints).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .channel import Signal
from .dynamics import Rates
from .errors import SamplingError, WeakFieldError

# grid must resolve the fastest rate in the problem by this factor
MIN_SAMPLES_PER_PERIOD = 20


@dataclass(frozen=True)
class TrapSchedule:
    """Input pulse and per-transmon detuning programs on a shared grid.

    Detunings are transmon frequency minus pulse carrier, in Hz; transmon 1
    is the upstream (left) scatterer, at whose plane the input pulse is
    referenced. ``release_direction`` records which side the schedule is
    designed to release toward.
    """

    input_pulse: Signal
    transmon1_detuning: np.ndarray
    transmon2_detuning: np.ndarray
    separation: float  # m
    release_direction: str = "left"

    def __post_init__(self):
        d1 = np.asarray(self.transmon1_detuning, dtype=float)
        d2 = np.asarray(self.transmon2_detuning, dtype=float)
        n = self.input_pulse.t_grid.size
        if d1.shape != (n,) or d2.shape != (n,):
            raise ValueError("detuning schedules must match the pulse grid")
        if not self.separation > 0:
            raise ValueError("separation must be > 0")
        if self.release_direction not in ("left", "right"):
            raise ValueError("release_direction must be 'left' or 'right'")
        object.__setattr__(self, "transmon1_detuning", d1)
        object.__setattr__(self, "transmon2_detuning", d2)


@dataclass(frozen=True)
class TrapResult:
    """Outgoing fields on both sides and the stored energy between the
    transmons (in-flight field plus dipole excitation, in quanta)."""

    left_out: Signal
    right_out: Signal
    cavity_energy: np.ndarray


def piecewise_linear(t_grid: np.ndarray, points: list[tuple[float, float]]
                     ) -> np.ndarray:
    """Sample a piecewise-linear detuning program onto a grid.

    ``points`` are (time, value) knots in increasing time order. Repeated
    times encode an instantaneous jump, which is allowed but flagged since
    real flux tuning is slow.
    """
    times = [p[0] for p in points]
    values = [p[1] for p in points]
    if any(t1 < t0 for t0, t1 in zip(times, times[1:])):
        raise ValueError("knot times must be non-decreasing")
    if any(t1 == t0 for t0, t1 in zip(times, times[1:])):
        warnings.warn("instantaneous detuning jump in schedule", stacklevel=2)
    return np.interp(t_grid, times, values)


def simulate_trap(schedule: TrapSchedule, rates: Rates,
                  sound_velocity: float = 2864.0) -> TrapResult:
    """Integrate the two-scatterer delay-line model over a schedule.

    Raises ``WeakFieldError`` when the peak drive leaves the linear regime
    (peak Rabi rate above gamma01/10) and ``SamplingError`` when the shared
    grid is too coarse for the detunings or rates in play.
    """
    pulse = schedule.input_pulse
    a = pulse.values
    t = pulse.t_grid
    dt = pulse.dt
    n = t.size
    gamma = rates.gamma01
    g_tot = rates.gamma_total

    peak_rabi = math.sqrt(2.0 * gamma) * float(np.max(np.abs(a)))
    if peak_rabi > gamma / 10.0:
        raise WeakFieldError(
            f"peak Rabi rate {peak_rabi:.3e} Hz exceeds gamma01/10; the "
            "linear-scatterer model is not valid at this drive strength")

    fastest = max(gamma, g_tot,
                  float(np.max(np.abs(schedule.transmon1_detuning))),
                  float(np.max(np.abs(schedule.transmon2_detuning))))
    if dt > 1.0 / (MIN_SAMPLES_PER_PERIOD * fastest):
        raise SamplingError(
            f"dt = {dt:.3e} s too coarse for rates up to {fastest:.3e} Hz")

    tau = schedule.separation / sound_velocity
    m = int(round(tau / dt))
    if m < 1:
        raise SamplingError("transmon separation shorter than one sample")

    coup = 1j * math.sqrt(gamma / 2.0)
    c1 = 1j * schedule.transmon1_detuning - g_tot
    c2 = 1j * schedule.transmon2_detuning - g_tot
    c1_mid = 0.5 * (c1[:-1] + c1[1:])
    c2_mid = 0.5 * (c2[:-1] + c2[1:])
    a_mid = 0.5 * (a[:-1] + a[1:])

    f1 = np.zeros(n, dtype=complex)
    f2 = np.zeros(n, dtype=complex)
    beta1_arr = np.zeros(n, dtype=complex)
    beta2_arr = np.zeros(n, dtype=complex)
    beta1 = 0.0 + 0.0j
    beta2 = 0.0 + 0.0j
    h = dt

    def _hist(arr, idx):
        return arr[idx] if idx >= 0 else 0.0 + 0.0j

    for i in range(n - 1):
        j = i - m
        # fields arriving during this step (start, midpoint, end)
        f2_0, f2_1 = _hist(f2, j), _hist(f2, j + 1)
        f1_0, f1_1 = _hist(f1, j), _hist(f1, j + 1)
        a_0 = _hist(a, j)
        a_1 = _hist(a, j + 1)
        in1_0 = a[i] + f2_0
        in1_m = a_mid[i] + 0.5 * (f2_0 + f2_1)
        in1_1 = a[i + 1] + f2_1
        in2_0 = a_0 + f1_0
        in2_m = 0.5 * (a_0 + a_1) + 0.5 * (f1_0 + f1_1)
        in2_1 = a_1 + f1_1

        k1 = c1[i] * beta1 + coup * in1_0
        k2 = c1_mid[i] * (beta1 + 0.5 * h * k1) + coup * in1_m
        k3 = c1_mid[i] * (beta1 + 0.5 * h * k2) + coup * in1_m
        k4 = c1[i + 1] * (beta1 + h * k3) + coup * in1_1
        beta1 = beta1 + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        k1 = c2[i] * beta2 + coup * in2_0
        k2 = c2_mid[i] * (beta2 + 0.5 * h * k1) + coup * in2_m
        k3 = c2_mid[i] * (beta2 + 0.5 * h * k2) + coup * in2_m
        k4 = c2[i + 1] * (beta2 + h * k3) + coup * in2_1
        beta2 = beta2 + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        f1[i + 1] = coup * beta1
        f2[i + 1] = coup * beta2
        beta1_arr[i + 1] = beta1
        beta2_arr[i + 1] = beta2

    # outgoing fields referenced at the outer planes
    f1_del = np.zeros(n, dtype=complex)
    f2_del = np.zeros(n, dtype=complex)
    a_del = np.zeros(n, dtype=complex)
    f1_del[m:] = f1[: n - m]
    f2_del[m:] = f2[: n - m]
    a_del[m:] = a[: n - m]
    left_out = f1 + f2_del
    right_out = a_del + f1_del + f2

    # stored energy: dipoles plus field in flight between the transmons
    right_mover = np.abs(a + f1) ** 2
    left_mover = np.abs(f2) ** 2
    cs = np.cumsum(right_mover + left_mover) * dt
    in_flight = cs - np.concatenate([np.zeros(m), cs[: n - m]])
    cavity = np.abs(beta1_arr) ** 2 + np.abs(beta2_arr) ** 2 + in_flight

    return TrapResult(left_out=Signal(t, left_out),
                      right_out=Signal(t, right_out),
                      cavity_energy=cavity)


@dataclass(frozen=True)
class TrapSummary:
    input_energy: float
    left_energy: float
    right_energy: float
    released_left_fraction: float
    released_right_fraction: float
    energy_balance_error: float  # relative, at the end of the trace


def summarize(schedule: TrapSchedule, result: TrapResult,
              release_time: float) -> TrapSummary:
    """Energy bookkeeping and release-direction selectivity."""
    t = schedule.input_pulse.t_grid
    dt = schedule.input_pulse.dt
    e_in = schedule.input_pulse.energy()
    p_left = np.abs(result.left_out.values) ** 2
    p_right = np.abs(result.right_out.values) ** 2
    e_left = float(np.sum(p_left) * dt)
    e_right = float(np.sum(p_right) * dt)
    after = t >= release_time
    rel_left = float(np.sum(p_left[after]) * dt)
    rel_right = float(np.sum(p_right[after]) * dt)
    released = rel_left + rel_right
    balance = abs(e_left + e_right + float(result.cavity_energy[-1]) - e_in)
    return TrapSummary(
        input_energy=e_in,
        left_energy=e_left,
        right_energy=e_right,
        released_left_fraction=rel_left / released if released else 0.0,
        released_right_fraction=rel_right / released if released else 0.0,
        energy_balance_error=balance / e_in if e_in else 0.0,
    )


def catch_release_schedule(gamma01: float, *, sound_velocity: float = 2864.0,
                           release_direction: str = "left",
                           pulse_lifetimes: float = 5.0,
                           transit_lifetimes: float = 8.0,
                           off_detuning: float | None = None,
                           peak_rabi: float | None = None,
                           ramp_lifetimes: float = 1.0,
                           catch_lifetimes: float = 8.0,
                           release_lifetimes: float = 31.0,
                           duration_lifetimes: float = 54.0,
                           samples_per_lifetime: int = 700
                           ) -> tuple[TrapSchedule, float]:
    """The documented catch-and-release program, in units of 1/gamma01.

    A raised-cosine pulse of length ``pulse_lifetimes``/gamma01 enters with
    the upstream transmon far detuned and the downstream one resonant; the
    upstream transmon is tuned into resonance after the pulse has passed
    (the catch), and the transmon on the release side is detuned again at
    the release time, while the trapped pulse travels toward it. Returns
    the schedule and the release time in seconds.
    """
    life = 1.0 / gamma01
    dt = life / samples_per_lifetime
    n = int(round(duration_lifetimes * life / dt)) + 1
    t = np.arange(n) * dt
    delta_off = 25.0 * gamma01 if off_detuning is None else off_detuning
    amp_peak = (gamma01 / 10.0 if peak_rabi is None else peak_rabi) \
        / math.sqrt(2.0 * gamma01)

    t0 = 1.0 * life
    t_pulse = pulse_lifetimes * life
    phase = (t - t0) / t_pulse
    pulse = np.where((phase >= 0.0) & (phase <= 1.0),
                     amp_peak * np.sin(np.pi * np.clip(phase, 0.0, 1.0)) ** 2,
                     0.0).astype(complex)

    ramp = ramp_lifetimes * life
    t_catch = catch_lifetimes * life
    t_release = release_lifetimes * life
    upstream = piecewise_linear(t, [(0.0, delta_off),
                                    (t_catch, delta_off),
                                    (t_catch + ramp, 0.0)])
    downstream = np.zeros(n)
    if release_direction == "left":
        upstream = np.where(
            t >= t_release,
            np.minimum(delta_off, (t - t_release) / ramp * delta_off),
            upstream)
    else:
        downstream = piecewise_linear(t, [(0.0, 0.0), (t_release, 0.0),
                                          (t_release + ramp, delta_off)])

    schedule = TrapSchedule(
        input_pulse=Signal(t, pulse),
        transmon1_detuning=upstream,
        transmon2_detuning=downstream,
        separation=transit_lifetimes * life * sound_velocity,
        release_direction=release_direction,
    )
    return schedule, t_release
