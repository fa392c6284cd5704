"""Time-domain Lindblad dynamics of the driven transmon and field extraction.

The master equation is integrated in the frame rotating with the drives:

    H = -dp|1><1| - (dp+dc)|2><2| + (Op/2)(|0><1| + h.c.) + (Oc/2)(|1><2| + h.c.)

with collapse channels |1>->|0> at G01, |2>->|1> at G21 = 2*G01 (ladder
matrix elements), and pure dephasing Gphi on each excited level. Outgoing
fields follow from input-output theory:

    incident(t)    = Op(t)/sqrt(2*G01)
    reflected(t)   = i*sqrt(G01/2) * <0|rho(t)|1>
    transmitted(t) = incident(t) + reflected(t)

whose constant-drive steady state reproduces the closed-form reflection of
``scattering`` exactly; that equivalence is the correctness oracle for both
modules.

Convention: rates and frequencies quoted in Hz are used directly as inverse
seconds (a population prepared in |1> decays to 1/e after 1/G01). All
dimensionless steady-state results are identical in any single consistent
convention; the time axis follows this one throughout the package.

The integrator is fixed-step RK4 with dt <= 1/(100 * fastest rate), applied
to the vectorized density matrix. Within intervals where both drive
envelopes are constant the RK4 update is a fixed linear map, which is
precomputed and reused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .device import DeviceConfig
from .errors import ScheduleError, StepSizeError
from . import channel as _channel
from . import scattering as _scattering

STEP_TRACE_TOL = 1e-7  # allowed trace drift in a single RK4 step
DEFAULT_LOOP_GAIN = 0.55  # transducer-B re-reflection x qubit off-state echo
SUBSTEPS_PER_FASTEST_PERIOD = 100


@dataclass(frozen=True)
class Rates:
    """Decoherence rates in Hz. ``gamma21`` defaults to 2*gamma01."""

    gamma01: float
    gamma_phi: float = 0.0
    gamma21: float | None = None

    def __post_init__(self):
        if not self.gamma01 > 0:
            raise ValueError("gamma01 must be > 0")
        if self.gamma_phi < 0:
            raise ValueError("gamma_phi must be >= 0")

    @property
    def g21(self) -> float:
        return 2.0 * self.gamma01 if self.gamma21 is None else self.gamma21

    @property
    def gamma_total(self) -> float:
        """0-1 decoherence rate gamma01/2 + gamma_phi."""
        return self.gamma01 / 2.0 + self.gamma_phi


@dataclass(frozen=True)
class DensityMatrix:
    """N-level state (N = 2 or 3) with physicality checks."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 3):
            raise ValueError("matrix must be square with dim 2 or 3")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def validate(self, trace_tol: float = 1e-9, herm_tol: float = 1e-9,
                 eig_floor: float = -1e-9) -> None:
        m = self.matrix
        if abs(np.trace(m).real - 1.0) > trace_tol or abs(np.trace(m).imag) > trace_tol:
            raise ValueError(f"trace deviates from 1 by {np.trace(m) - 1.0}")
        if np.max(np.abs(m - m.conj().T)) > herm_tol:
            raise ValueError("matrix is not Hermitian within tolerance")
        if np.min(np.linalg.eigvalsh(0.5 * (m + m.conj().T))) < eig_floor:
            raise ValueError("matrix has a negative eigenvalue beyond tolerance")

    @classmethod
    def ground(cls, dim: int) -> "DensityMatrix":
        m = np.zeros((dim, dim), dtype=complex)
        m[0, 0] = 1.0
        return cls(m)


@dataclass(frozen=True)
class DriveSchedule:
    """Probe and control envelopes on a uniform time grid.

    Envelopes are Rabi rates in Hz, non-negative; detunings are constant
    (probe relative to f01, control relative to f12).
    """

    t_grid: np.ndarray
    probe_rabi: np.ndarray
    control_rabi: np.ndarray
    probe_detuning: float = 0.0
    control_detuning: float = 0.0

    def __post_init__(self):
        t = np.asarray(self.t_grid, dtype=float)
        op = np.asarray(self.probe_rabi, dtype=float)
        oc = np.asarray(self.control_rabi, dtype=float)
        if t.ndim != 1 or t.size < 2:
            raise ScheduleError("t_grid must be 1D with at least two samples")
        steps = np.diff(t)
        if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise ScheduleError("t_grid must be strictly increasing and uniform")
        if op.shape != t.shape or oc.shape != t.shape:
            raise ScheduleError("envelopes must match t_grid")
        if np.any(op < 0) or np.any(oc < 0):
            raise ScheduleError("envelopes must be non-negative")
        object.__setattr__(self, "t_grid", t)
        object.__setattr__(self, "probe_rabi", op)
        object.__setattr__(self, "control_rabi", oc)

    @property
    def dt(self) -> float:
        return float(self.t_grid[1] - self.t_grid[0])

    @classmethod
    def constant(cls, duration: float, dt: float, probe_rabi: float,
                 probe_detuning: float = 0.0, control_rabi: float = 0.0,
                 control_detuning: float = 0.0) -> "DriveSchedule":
        n = max(2, int(round(duration / dt)) + 1)
        t = np.arange(n) * dt
        return cls(t_grid=t,
                   probe_rabi=np.full(n, probe_rabi),
                   control_rabi=np.full(n, control_rabi),
                   probe_detuning=probe_detuning,
                   control_detuning=control_detuning)


@dataclass(frozen=True)
class FieldTrace:
    """Complex field amplitudes, units sqrt(quanta/s), on a uniform grid."""

    t_grid: np.ndarray
    incident: np.ndarray
    reflected: np.ndarray
    transmitted: np.ndarray


@dataclass(frozen=True)
class IntegrityReport:
    """Conservation diagnostics accumulated along a trajectory."""

    max_trace_drift: float
    min_eigenvalue: float
    max_hermiticity_error: float


@dataclass(frozen=True)
class EvolveResult:
    states: np.ndarray  # (n, dim, dim)
    fields: FieldTrace
    integrity: IntegrityReport


def hamiltonian(dim: int, probe_rabi: float, probe_detuning: float,
                control_rabi: float = 0.0,
                control_detuning: float = 0.0) -> np.ndarray:
    """Rotating-frame Hamiltonian matrix (values in Hz used as 1/s)."""
    h = np.zeros((dim, dim), dtype=complex)
    h[1, 1] = -probe_detuning
    h[0, 1] = h[1, 0] = probe_rabi / 2.0
    if dim == 3:
        h[2, 2] = -(probe_detuning + control_detuning)
        h[1, 2] = h[2, 1] = control_rabi / 2.0
    return h


def collapse_operators(dim: int, rates: Rates) -> list[np.ndarray]:
    """Decay and pure-dephasing collapse operators for the N-level ladder."""
    ops = []
    c = np.zeros((dim, dim), dtype=complex)
    c[0, 1] = math.sqrt(rates.gamma01)
    ops.append(c)
    if rates.gamma_phi > 0:
        d1 = np.zeros((dim, dim), dtype=complex)
        d1[1, 1] = math.sqrt(2.0 * rates.gamma_phi)
        ops.append(d1)
    if dim == 3:
        c2 = np.zeros((dim, dim), dtype=complex)
        c2[1, 2] = math.sqrt(rates.g21)
        ops.append(c2)
        if rates.gamma_phi > 0:
            d2 = np.zeros((dim, dim), dtype=complex)
            d2[2, 2] = math.sqrt(2.0 * rates.gamma_phi)
            ops.append(d2)
    return ops


def _lindblad_rhs(rho: np.ndarray, h: np.ndarray,
                  collapse: list[np.ndarray]) -> np.ndarray:
    out = -1j * (h @ rho - rho @ h)
    for c in collapse:
        cd = c.conj().T
        cdc = cd @ c
        out += c @ rho @ cd - 0.5 * (cdc @ rho + rho @ cdc)
    return out


def lindblad_step(rho: DensityMatrix, h: np.ndarray,
                  collapse: list[np.ndarray], dt: float) -> DensityMatrix:
    """One fixed-step RK4 update of the Lindblad equation.

    Raises ``StepSizeError`` if a single step drifts the trace by more than
    ``STEP_TRACE_TOL``.
    """
    m = rho.matrix
    k1 = _lindblad_rhs(m, h, collapse)
    k2 = _lindblad_rhs(m + 0.5 * dt * k1, h, collapse)
    k3 = _lindblad_rhs(m + 0.5 * dt * k2, h, collapse)
    k4 = _lindblad_rhs(m + dt * k3, h, collapse)
    out = m + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    drift = abs(np.trace(out) - np.trace(m))
    if drift > STEP_TRACE_TOL:
        raise StepSizeError(
            f"trace drifted by {drift:.3e} in one step; reduce dt")
    return DensityMatrix(out)


# ---------------------------------------------------------------------------
# vectorized (superoperator) machinery used by evolve
# ---------------------------------------------------------------------------

def _commutator_superop(h: np.ndarray) -> np.ndarray:
    d = h.shape[0]
    eye = np.eye(d)
    return -1j * (np.kron(h, eye) - np.kron(eye, h.T))


def _dissipator_superop(c: np.ndarray) -> np.ndarray:
    d = c.shape[0]
    eye = np.eye(d)
    cdc = c.conj().T @ c
    return (np.kron(c, c.conj())
            - 0.5 * (np.kron(cdc, eye) + np.kron(eye, cdc.T)))


def _liouvillian_parts(dim: int, rates: Rates, probe_detuning: float,
                       control_detuning: float):
    """Static Liouvillian plus the parts linear in each drive envelope."""
    h0 = hamiltonian(dim, 0.0, probe_detuning, 0.0, control_detuning)
    l_static = _commutator_superop(h0)
    for c in collapse_operators(dim, rates):
        l_static += _dissipator_superop(c)
    hp = np.zeros((dim, dim), dtype=complex)
    hp[0, 1] = hp[1, 0] = 0.5
    l_probe = _commutator_superop(hp)
    l_control = np.zeros_like(l_static)
    if dim == 3:
        hc = np.zeros((dim, dim), dtype=complex)
        hc[1, 2] = hc[2, 1] = 0.5
        l_control = _commutator_superop(hc)
    return l_static, l_probe, l_control


def _rk4_step_matrix(lio: np.ndarray, h: float) -> np.ndarray:
    """Exact RK4 one-step map for a constant generator: sum (hL)^j/j!, j<=4."""
    d2 = lio.shape[0]
    a = h * lio
    m = np.eye(d2, dtype=complex) + a
    term = a
    for j in (2, 3, 4):
        term = term @ a / j
        m = m + term
    return m


def _max_rate(schedule: DriveSchedule, rates: Rates, dim: int) -> float:
    m = max(float(np.max(schedule.probe_rabi)),
            float(np.max(schedule.control_rabi)),
            rates.gamma01, rates.gamma_total,
            abs(schedule.probe_detuning),
            abs(schedule.probe_detuning + schedule.control_detuning))
    if dim == 3:
        m = max(m, rates.g21)
    duration = schedule.t_grid[-1] - schedule.t_grid[0]
    return max(m, 1.0 / duration)


def evolve(schedule: DriveSchedule, rates: Rates, dim: int,
           rho0: DensityMatrix | None = None) -> EvolveResult:
    """Integrate the master equation over a drive schedule.

    Returns the state at every grid point, the input-output field trace and
    an integrity report (trace drift, minimum eigenvalue, hermiticity).
    A nonzero control envelope requires ``dim = 3``.
    """
    if dim not in (2, 3):
        raise ScheduleError("dim must be 2 or 3")
    if dim == 2 and np.any(schedule.control_rabi != 0):
        raise ScheduleError("control drive requires dim = 3")
    if rho0 is None:
        rho0 = DensityMatrix.ground(dim)
    if rho0.dim != dim:
        raise ScheduleError("rho0 dimension does not match dim")

    l_static, l_probe, l_control = _liouvillian_parts(
        dim, rates, schedule.probe_detuning, schedule.control_detuning)
    dt_max = 1.0 / (SUBSTEPS_PER_FASTEST_PERIOD * _max_rate(schedule, rates, dim))

    t = schedule.t_grid
    op = schedule.probe_rabi
    oc = schedule.control_rabi
    n = t.size
    d2 = dim * dim
    diag_idx = np.arange(dim) * (dim + 1)

    y = rho0.matrix.reshape(-1).astype(complex)
    states = np.empty((n, dim, dim), dtype=complex)
    states[0] = rho0.matrix
    max_drift = abs(float(y[diag_idx].real.sum()) - 1.0)

    step_cache: dict[tuple[float, float, float, int], np.ndarray] = {}

    for i in range(n - 1):
        h_grid = t[i + 1] - t[i]
        n_sub = max(1, int(math.ceil(h_grid / dt_max)))
        h = h_grid / n_sub
        op0, op1 = op[i], op[i + 1]
        oc0, oc1 = oc[i], oc[i + 1]
        if op0 == op1 and oc0 == oc1:
            key = (float(op0), float(oc0), float(h), n_sub)
            m_step = step_cache.get(key)
            if m_step is None:
                lio = l_static + op0 * l_probe
                if oc0 != 0.0:
                    lio = lio + oc0 * l_control
                m_step = _rk4_step_matrix(lio, h)
                step_cache[key] = m_step
            for _ in range(n_sub):
                y = m_step @ y
                drift = abs(float(y[diag_idx].real.sum()) - 1.0)
                if drift > max_drift:
                    max_drift = drift
        else:
            for j in range(n_sub):
                f0 = j / n_sub
                fm = (j + 0.5) / n_sub
                f1 = (j + 1) / n_sub
                lio_a = l_static + (op0 + (op1 - op0) * f0) * l_probe \
                    + (oc0 + (oc1 - oc0) * f0) * l_control
                lio_m = l_static + (op0 + (op1 - op0) * fm) * l_probe \
                    + (oc0 + (oc1 - oc0) * fm) * l_control
                lio_b = l_static + (op0 + (op1 - op0) * f1) * l_probe \
                    + (oc0 + (oc1 - oc0) * f1) * l_control
                k1 = lio_a @ y
                k2 = lio_m @ (y + 0.5 * h * k1)
                k3 = lio_m @ (y + 0.5 * h * k2)
                k4 = lio_b @ (y + h * k3)
                y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                drift = abs(float(y[diag_idx].real.sum()) - 1.0)
                if drift > max_drift:
                    max_drift = drift
        states[i + 1] = y.reshape(dim, dim)

    herm_err = float(np.max(np.abs(states - states.conj().transpose(0, 2, 1))))
    min_eig = float(np.min(np.linalg.eigvalsh(
        0.5 * (states + states.conj().transpose(0, 2, 1)))))
    integrity = IntegrityReport(max_trace_drift=max_drift,
                                min_eigenvalue=min_eig,
                                max_hermiticity_error=herm_err)

    incident = op.astype(complex) / math.sqrt(2.0 * rates.gamma01)
    reflected = 1j * math.sqrt(rates.gamma01 / 2.0) * states[:, 0, 1]
    fields = FieldTrace(t_grid=t, incident=incident, reflected=reflected,
                        transmitted=incident + reflected)
    return EvolveResult(states=states, fields=fields, integrity=integrity)


def steady_state(probe_rabi: float, probe_detuning: float, rates: Rates,
                 dim: int = 2, control_rabi: float = 0.0,
                 control_detuning: float = 0.0) -> tuple[np.ndarray, complex]:
    """Exact steady state from the Liouvillian null space.

    Returns ``(rho, r)`` with r the coherent reflection amplitude. Fast path
    for spectra; the time-domain route is ``steady_state_by_evolution``.
    """
    if dim == 2 and control_rabi != 0.0:
        raise ScheduleError("control drive requires dim = 3")
    l_static, l_probe, l_control = _liouvillian_parts(
        dim, rates, probe_detuning, control_detuning)
    lio = l_static + probe_rabi * l_probe + control_rabi * l_control
    w, v = np.linalg.eig(lio)
    rho = v[:, np.argmin(np.abs(w))].reshape(dim, dim)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    r = _reflection_from_state(rho, probe_rabi, rates)
    return rho, r


def _reflection_from_state(rho: np.ndarray, probe_rabi: float,
                           rates: Rates) -> complex:
    if probe_rabi == 0.0:
        return 0.0 + 0.0j
    return 1j * rates.gamma01 * rho[0, 1] / probe_rabi


def steady_state_by_evolution(probe_rabi: float, probe_detuning: float,
                              rates: Rates, dim: int = 2,
                              control_rabi: float = 0.0,
                              control_detuning: float = 0.0,
                              tol: float = 1e-9,
                              max_chunks: int = 80
                              ) -> tuple[complex, IntegrityReport]:
    """Drive the time-domain integrator to its steady state.

    Evolves in chunks of several lifetimes of the slowest decay channel
    until the extracted reflection amplitude stops changing by more than
    ``tol`` between chunks.
    """
    slow = min(rates.gamma01, rates.gamma_total)
    chunk = 8.0 / slow
    dt_grid = chunk / 64.0
    rho = DensityMatrix.ground(dim)
    r_prev = None
    worst = IntegrityReport(0.0, 0.0, 0.0)
    for _ in range(max_chunks):
        sched = DriveSchedule.constant(chunk, dt_grid, probe_rabi,
                                       probe_detuning, control_rabi,
                                       control_detuning)
        res = evolve(sched, rates, dim, rho0=rho)
        rho = DensityMatrix(res.states[-1])
        worst = IntegrityReport(
            max_trace_drift=max(worst.max_trace_drift,
                                res.integrity.max_trace_drift),
            min_eigenvalue=min(worst.min_eigenvalue,
                               res.integrity.min_eigenvalue),
            max_hermiticity_error=max(worst.max_hermiticity_error,
                                      res.integrity.max_hermiticity_error))
        r = _reflection_from_state(rho.matrix, probe_rabi, rates)
        if r_prev is not None and abs(r - r_prev) < tol:
            return r, worst
        r_prev = r
    return r_prev, worst


def autler_townes_transmission(probe_detunings, control_rabi: float,
                               probe_rabi: float, rates: Rates,
                               control_detuning: float = 0.0) -> np.ndarray:
    """Steady transmittance |t|^2 versus probe detuning under a control tone.

    Dips sit at the dressed-state positions, +-control_rabi/2 for a strong
    resonant control.
    """
    out = np.empty(len(probe_detunings))
    for i, dp in enumerate(probe_detunings):
        _, r = steady_state(probe_rabi, float(dp), rates, dim=3,
                            control_rabi=control_rabi,
                            control_detuning=control_detuning)
        out[i] = abs(1.0 + r) ** 2
    return out


# ---------------------------------------------------------------------------
# routing compositions (dynamics + channel)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RouteResult:
    """Routed trace at transducer B plus 10-90% switching times."""

    trace: FieldTrace
    rise_time: float
    fall_time: float
    pulse_on: float
    pulse_off: float


def _gated_echo_train(scattered: np.ndarray, gate: np.ndarray,
                      loop_gain: float, lag_samples: int,
                      n_max: int) -> np.ndarray:
    """Echo train with the loop gain gated per transit.

    Each round trip delays the circulating field by ``lag_samples`` and
    multiplies it by ``loop_gain`` times the qubit's reflectivity ``gate``
    (normalized to its static reflective value) at the moment of
    re-scattering, half a round trip before arrival. With ``gate = 1``
    throughout this reduces exactly to the fixed-gain geometric train of
    ``channel.multi_transit``; with the qubit driven transparent the loop
    opens and echoes die.
    """
    n = scattered.size
    half = lag_samples // 2
    kappa = np.zeros(n, dtype=complex)
    kappa[half:] = loop_gain * gate[: n - half]
    out = scattered.copy()
    term = scattered
    for _ in range(n_max):
        shifted = np.zeros(n, dtype=complex)
        shifted[lag_samples:] = term[: n - lag_samples]
        term = kappa * shifted
        if not np.any(term):
            break
        out += term
    return out


def _rise_fall_times(t: np.ndarray, power: np.ndarray, t_on: float,
                     t_off: float) -> tuple[float, float]:
    """10-90% rise and fall times of a routed power trace.

    Plateaus are medians over windows before the pulse, late in the pulse
    and at the end of the trace; crossing times are first crossings.
    """
    dt = t[1] - t[0]
    guard = 20 * dt
    base = float(np.median(power[(t > t_on - 60 * guard) & (t < t_on - guard)]))
    high = float(np.median(power[(t > t_off - 8 * guard) & (t < t_off - guard)]))
    final = float(np.median(power[t > t[-1] - 40 * guard]))

    rise_window = (t >= t_on - 6 * guard) & (t <= t_off)
    tr = t[rise_window]
    pr = power[rise_window]
    up = high - base
    t10 = tr[np.argmax(pr >= base + 0.1 * up)]
    t90 = tr[np.argmax(pr >= base + 0.9 * up)]

    fall_window = t >= t_off - 6 * guard
    tf = t[fall_window]
    pf = power[fall_window]
    down = high - final
    t_hi = tf[np.argmax(pf <= final + 0.9 * down)]
    t_lo = tf[np.argmax(pf <= final + 0.1 * down)]
    return float(t90 - t10), float(t_lo - t_hi)


def route_pulse(cfg: DeviceConfig, control_pulse_length: float,
                control_rabi: float, *, probe_rabi: float | None = None,
                loop_gain: float = DEFAULT_LOOP_GAIN, n_max: int = 40,
                dt: float = 1e-9) -> RouteResult:
    """Route a continuous SAW probe with a control pulse on the 1-2 transition.

    The three-level dynamics give the field scattered by the qubit; echoes
    between transducer B and the qubit are added with the loop gain gated by
    the qubit's instantaneous reflectivity, and the result is band-filtered
    by the detection transducer. Reports 10-90% rise and fall times of the
    transmitted power.
    """
    if not control_pulse_length > 0:
        raise ValueError("control_pulse_length must be > 0")
    t_params = cfg.transmon
    rates = Rates(gamma01=t_params.acoustic_coupling,
                  gamma_phi=t_params.dephasing_rate)
    omega_p = rates.gamma01 / 20.0 if probe_rabi is None else probe_rabi
    tau_rt = 2.0 * cfg.geometry.dist_idtB_qubit / cfg.material.sound_velocity

    settle = max(25.0 / rates.gamma_total, (n_max // 3) * tau_rt)
    t_on = math.ceil(settle / dt) * dt
    t_off = t_on + math.ceil(control_pulse_length / dt) * dt
    t_end = t_off + settle
    n = int(round(t_end / dt)) + 1
    t = np.arange(n) * dt
    control = np.where((t >= t_on) & (t < t_off), control_rabi, 0.0)
    schedule = DriveSchedule(t_grid=t, probe_rabi=np.full(n, omega_p),
                             control_rabi=control)
    res = evolve(schedule, rates, dim=3)

    incident = res.fields.incident
    scattered = res.fields.reflected
    r_off = complex(_scattering.reflection_amplitude(
        0.0, omega_p, rates.gamma01, rates.gamma_phi))
    s_ref = r_off * incident[0]
    gate = scattered / s_ref
    mag = np.abs(gate)
    gate = np.where(mag > 1.0, gate / np.maximum(mag, 1e-300), gate)

    lag = max(1, int(round(tau_rt / dt)))
    looped = _gated_echo_train(scattered, gate, loop_gain, lag, n_max)

    transmitted = _channel.apply_idt_filter(
        _channel.Signal(t, incident + looped), cfg.idt_b).values
    reflected = _channel.apply_idt_filter(
        _channel.Signal(t, scattered), cfg.idt_a).values
    incident_f = incident * cfg.idt_a.insertion_loss

    trace = FieldTrace(t_grid=t, incident=incident_f, reflected=reflected,
                       transmitted=transmitted)
    rise, fall = _rise_fall_times(t, np.abs(transmitted) ** 2, t_on, t_off)
    return RouteResult(trace=trace, rise_time=rise, fall_time=fall,
                       pulse_on=t_on, pulse_off=t_off)


@dataclass(frozen=True)
class SawPulseResult:
    """A SAW pulse scattered by the (possibly detuned) qubit."""

    trace: FieldTrace  # transmitted referenced at transducer B
    launch_centroid: float
    arrival_centroid: float
    incident_energy: float
    transmitted_energy: float


def saw_pulse(cfg: DeviceConfig, pulse_length: float, detuning: float, *,
              peak_rabi: float | None = None, dt: float = 2.5e-10,
              loop_gain: float = DEFAULT_LOOP_GAIN, n_max: int = 40,
              pulse_start: float = 1e-7) -> SawPulseResult:
    """Launch a SAW pulse at transducer A and detect it at transducer B.

    The drive burst is band-limited by the launch transducer, propagates to
    the qubit, scatters, and the transmitted field (with gated echoes)
    propagates on and is filtered by the detection transducer. Both
    centroids are of |amplitude|^2.
    """
    t_params = cfg.transmon
    rates = Rates(gamma01=t_params.acoustic_coupling,
                  gamma_phi=t_params.dephasing_rate)
    omega_peak = rates.gamma01 / 10.0 if peak_rabi is None else peak_rabi
    v0 = cfg.material.sound_velocity
    tau_a = cfg.geometry.dist_idtA_qubit / v0
    tau_b = cfg.geometry.dist_idtB_qubit / v0
    tau_rt = 2.0 * tau_b

    ring = 8.0 / rates.gamma_total + (n_max // 4) * tau_rt
    t_end = pulse_start + pulse_length + tau_a + tau_b + ring
    n = int(round(t_end / dt)) + 1
    t = np.arange(n) * dt

    burst = np.where((t >= pulse_start) & (t < pulse_start + pulse_length),
                     omega_peak, 0.0)
    launched = _channel.apply_idt_filter(
        _channel.Signal(t, burst.astype(complex)), cfg.idt_a)
    # the array-factor comb is non-negative, so the envelope stays real
    at_qubit = _channel.delay(launched, tau_a)
    omega_env = np.clip(at_qubit.values.real, 0.0, None)

    schedule = DriveSchedule(t_grid=t, probe_rabi=omega_env,
                             control_rabi=np.zeros(n),
                             probe_detuning=detuning)
    res = evolve(schedule, rates, dim=2)
    incident = res.fields.incident
    scattered = res.fields.reflected

    # static reflectivity sets the echo loop gain at this tuning
    r_here = abs(complex(_scattering.reflection_amplitude(
        detuning, 0.0, rates.gamma01, rates.gamma_phi)))
    r_max = _scattering.max_reflection(rates.gamma01, rates.gamma_phi)
    gain_eff = loop_gain * r_here / r_max
    looped = _channel.multi_transit(_channel.Signal(t, scattered), gain_eff,
                                    tau_rt, n_max)

    at_b = _channel.delay(_channel.Signal(t, incident + looped.values), tau_b)
    transmitted = _channel.apply_idt_filter(at_b, cfg.idt_b).values

    p_launch = np.abs(burst) ** 2
    p_arrive = np.abs(transmitted) ** 2
    launch_centroid = float(np.sum(t * p_launch) / np.sum(p_launch))
    arrival_centroid = float(np.sum(t * p_arrive) / np.sum(p_arrive))
    trace = FieldTrace(t_grid=t, incident=incident, reflected=scattered,
                       transmitted=transmitted)
    return SawPulseResult(
        trace=trace,
        launch_centroid=launch_centroid,
        arrival_centroid=arrival_centroid,
        incident_energy=float(np.sum(np.abs(incident) ** 2) * dt),
        transmitted_energy=float(np.sum(p_arrive) * dt),
    )
