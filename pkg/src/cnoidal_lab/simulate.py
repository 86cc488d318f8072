"""Full (zeta, tau) integration of the coupled resonant system.

Marches the field envelopes in zeta with classical 4th-order stages while
the atomic amplitudes are integrated in tau by classical 4th-order one-step
(RK4) integration at every zeta station.  Because the atomic subsystem is
linear in C at frozen fields, the RK4 update over one tau step is itself a
matrix; all step matrices are built in a single vectorized pass and combined
by logarithmic prefix products, which reproduces the sequential RK4
trajectory exactly (up to rounding) at array speed.

Perturbations of the fields are convectively amplified as they sweep the
prepared coherence, at a rate close to mu_e times the tau-window span, so
discretization error grows exponentially along zeta.  Fourth-order stages
in both directions keep the seed small enough that runs over several pulse
widths stay at the 1e-6 level on the default grid.

Initial fields and the tau-inflow atomic state are pinned to the analytic
traveling profile, which presupposes the prepared coherence the solutions
require; the run is thus a consistency test of shape preservation rather
than an initial-value experiment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnstableRun
from .profiles import channel_values, fundamental_period
from .solvers import SolutionCoefficients

_C_ORDER = ("Ci", "Ce", "Cf", "Cv")
_DRIFT_ACCEPT = 1e-4


@dataclass(frozen=True)
class SimGrid:
    """Retarded-time window and propagation ladder for one run."""

    tau_min: float
    tau_max: float
    n_tau: int
    zeta_max: float
    n_zeta: int
    n_snapshots: int = 9

    def __post_init__(self):
        if self.n_tau < 256:
            raise ValueError("n_tau must be at least 256")
        if self.n_zeta < 16:
            raise ValueError("n_zeta must be at least 16")
        if not self.tau_max > self.tau_min:
            raise ValueError("empty tau window")
        if not self.zeta_max > 0.0:
            raise ValueError("zeta_max must be positive")
        if self.n_snapshots < 2:
            raise ValueError("need at least the first and last snapshot")

    def taus(self) -> np.ndarray:
        """Half-open tau grid, so the window is an exact period multiple."""
        step = (self.tau_max - self.tau_min) / self.n_tau
        return self.tau_min + step * np.arange(self.n_tau)


def default_sim_grid(coeffs: SolutionCoefficients, *, periods: float = 4.0,
                     n_tau: int = 2048, pulse_widths: float = 5.0,
                     n_zeta: int = 256, n_snapshots: int = 9) -> SimGrid:
    """Window of 4 pattern periods; propagation over 5 spatial pulse widths.

    A pulse of duration 1/Gamma traveling at the group velocity
    v = 1/(1/c + q/Gamma) occupies the length v/Gamma = 1/(Gamma + q)
    (c = 1), so ``pulse_widths`` of them give
    zeta_max = pulse_widths / (Gamma + q).
    """
    t_period = fundamental_period(coeffs) / coeffs.gamma
    if coeffs.q <= 0.0:
        raise ValueError("coefficients carry a nonpositive spatial rate")
    return SimGrid(tau_min=0.0, tau_max=periods * t_period, n_tau=n_tau,
                   zeta_max=pulse_widths / (coeffs.gamma + coeffs.q),
                   n_zeta=n_zeta, n_snapshots=n_snapshots)


@dataclass(frozen=True)
class SimHistory:
    """Saved snapshots of a run plus its norm-conservation certificate."""

    zetas: np.ndarray
    taus: np.ndarray
    c_hist: dict[str, np.ndarray]
    omega_hist: dict[str, np.ndarray]
    norm_drift: float
    coeffs: SolutionCoefficients
    grid: SimGrid


def _analytic_channels(coeffs: SolutionCoefficients, zeta: float,
                       taus: np.ndarray) -> dict[str, np.ndarray]:
    return channel_values(coeffs, coeffs.q * zeta - coeffs.gamma * taus)


def _interp_midpoints(f: np.ndarray) -> np.ndarray:
    """4th-order midpoint values between consecutive samples of f."""
    n = f.shape[0]
    mids = np.empty(n - 1, dtype=f.dtype)
    mids[1:-1] = (-f[:-3] + 9.0 * f[1:-2] + 9.0 * f[2:-1] - f[3:]) / 16.0
    mids[0] = (5.0 * f[0] + 15.0 * f[1] - 5.0 * f[2] + f[3]) / 16.0
    mids[-1] = (f[-4] - 5.0 * f[-3] + 15.0 * f[-2] + 5.0 * f[-1]) / 16.0
    return mids


def _coupling_matrices(omega: dict[str, np.ndarray], dim: int) -> np.ndarray:
    """A(tau) = (i/2) H(tau) with H the Hermitian Rabi coupling matrix."""
    n = omega["OmegaE"].shape[0]
    a = np.zeros((n, dim, dim), dtype=complex)
    half_i = 0.5j
    a[:, 1, 0] = half_i * omega["OmegaE"]
    a[:, 0, 1] = half_i * np.conj(omega["OmegaE"])
    a[:, 1, 2] = half_i * omega["OmegaF"]
    a[:, 2, 1] = half_i * np.conj(omega["OmegaF"])
    if dim == 4:
        a[:, 3, 0] = half_i * omega["OmegaV"]
        a[:, 0, 3] = half_i * np.conj(omega["OmegaV"])
    return a


def _rk4_step_matrices(omega: dict[str, np.ndarray], dim: int,
                       h: float) -> np.ndarray:
    """Exact matrix of one classical RK4 step, for every tau interval."""
    a_node = _coupling_matrices(omega, dim)
    omega_mid = {name: _interp_midpoints(vals) for name, vals in omega.items()}
    a_mid = _coupling_matrices(omega_mid, dim)
    a_lo, a_hi = a_node[:-1], a_node[1:]
    eye = np.eye(dim, dtype=complex)
    k1 = a_lo
    k2 = a_mid @ (eye + 0.5 * h * k1)
    k3 = a_mid @ (eye + 0.5 * h * k2)
    k4 = a_hi @ (eye + h * k3)
    return eye + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _prefix_products(steps: np.ndarray) -> np.ndarray:
    """P[k] = U_k U_{k-1} ... U_0 by doubling; matches the sequential order."""
    prods = steps.copy()
    span = 1
    n = prods.shape[0]
    while span < n:
        prods[span:] = prods[span:] @ prods[:-span]
        span *= 2
    return prods


def _sweep_states(omega: dict[str, np.ndarray], state0: np.ndarray,
                  dim: int, h: float) -> np.ndarray:
    """Integrate the atomic subsystem across the tau grid from the inflow."""
    steps = _rk4_step_matrices(omega, dim, h)
    prods = _prefix_products(steps)
    states = np.empty((omega["OmegaE"].shape[0], dim), dtype=complex)
    states[0] = state0
    states[1:] = prods @ state0
    return states


def _maxwell_rhs(states: np.ndarray, coeffs: SolutionCoefficients,
                 dim: int) -> dict[str, np.ndarray]:
    med = coeffs.medium
    c_i, c_e, c_f = states[:, 0], states[:, 1], states[:, 2]
    rhs = {
        "OmegaE": 1j * med.mu_e * c_e * np.conj(c_i),
        "OmegaF": 1j * med.mu_f * c_e * np.conj(c_f),
    }
    if dim == 4:
        rhs["OmegaV"] = 1j * med.mu_v * states[:, 3] * np.conj(c_i)
    return rhs


def simulate(coeffs: SolutionCoefficients, grid: SimGrid | None = None,
             *, initial_fields: dict[str, np.ndarray] | None = None,
             boundary_state=None) -> SimHistory:
    """March the coupled system and record snapshots plus norm drift.

    ``initial_fields`` and ``boundary_state`` (a callable zeta -> state
    vector) default to the analytic traveling profile; overriding them
    turns the run into a free experiment.  Raises UnstableRun when the
    population-sum drift exceeds 1e-4.
    """
    if grid is None:
        grid = default_sim_grid(coeffs)
    span = grid.tau_max - grid.tau_min
    t_period = fundamental_period(coeffs) / coeffs.gamma
    if span < 2.0 * t_period - 1e-12:
        raise ValueError("tau window must span at least two pattern periods")
    taus = grid.taus()
    h = float(taus[1] - taus[0])
    dim = 4 if coeffs.has_v else 3
    names_c = [n for n in _C_ORDER if dim == 4 or n != "Cv"]
    names_o = ["OmegaE", "OmegaF"] + (["OmegaV"] if dim == 4 else [])

    if initial_fields is None:
        analytic0 = _analytic_channels(coeffs, 0.0, taus)
        omega = {n: analytic0[n].astype(complex) for n in names_o}
    else:
        omega = {n: np.asarray(initial_fields[n], dtype=complex).copy()
                 for n in names_o}
    if boundary_state is None:
        def boundary_state(zeta):
            vals = _analytic_channels(coeffs, zeta,
                                      np.asarray([grid.tau_min]))
            return np.array([vals[n][0] for n in names_c], dtype=complex)

    dz = grid.zeta_max / grid.n_zeta
    snap_idx = np.unique(np.linspace(0, grid.n_zeta,
                                     grid.n_snapshots).round().astype(int))
    zetas_saved = []
    c_hist = {n: [] for n in names_c}
    o_hist = {n: [] for n in names_o}
    drift = 0.0

    states = _sweep_states(omega, boundary_state(0.0), dim, h)
    for step in range(grid.n_zeta + 1):
        zeta = step * dz
        norms = np.abs(states) ** 2
        drift = max(drift, float(np.max(np.abs(norms.sum(axis=1) - 1.0))))
        if step in snap_idx:
            zetas_saved.append(zeta)
            for j, n in enumerate(names_c):
                c_hist[n].append(states[:, j].copy())
            for n in names_o:
                o_hist[n].append(omega[n].copy())
        if step == grid.n_zeta:
            break
        bc_half = boundary_state(zeta + 0.5 * dz)
        bc_full = boundary_state(zeta + dz)
        f1 = _maxwell_rhs(states, coeffs, dim)
        stage = {n: omega[n] + 0.5 * dz * f1[n] for n in names_o}
        f2 = _maxwell_rhs(_sweep_states(stage, bc_half, dim, h), coeffs, dim)
        stage = {n: omega[n] + 0.5 * dz * f2[n] for n in names_o}
        f3 = _maxwell_rhs(_sweep_states(stage, bc_half, dim, h), coeffs, dim)
        stage = {n: omega[n] + dz * f3[n] for n in names_o}
        f4 = _maxwell_rhs(_sweep_states(stage, bc_full, dim, h), coeffs, dim)
        omega = {n: omega[n] + (dz / 6.0) * (f1[n] + 2.0 * f2[n]
                                             + 2.0 * f3[n] + f4[n])
                 for n in names_o}
        states = _sweep_states(omega, bc_full, dim, h)

    if drift > _DRIFT_ACCEPT:
        raise UnstableRun(
            f"norm drift {drift:.3e} exceeds {_DRIFT_ACCEPT:.0e}; "
            f"refine the grid")
    return SimHistory(
        zetas=np.asarray(zetas_saved), taus=taus,
        c_hist={n: np.asarray(v) for n, v in c_hist.items()},
        omega_hist={n: np.asarray(v) for n, v in o_hist.items()},
        norm_drift=drift, coeffs=coeffs, grid=grid)


def shape_preservation_error(history: SimHistory,
                             coeffs: SolutionCoefficients) -> float:
    """Relative L2 distance of the final fields from the traveling profile.

    Zero for a perfectly shape-preserving run; at finite resolution the
    value measures pure discretization error, dominated by the
    second-order zeta ladder.
    """
    zeta_end = float(history.zetas[-1])
    analytic = _analytic_channels(coeffs, zeta_end, history.taus)
    worst = 0.0
    for name, snaps in history.omega_hist.items():
        ref = analytic[name]
        denom = math.sqrt(float(np.sum(np.abs(ref) ** 2)))
        if denom == 0.0:
            continue
        err = math.sqrt(float(np.sum(np.abs(snaps[-1] - ref) ** 2))) / denom
        worst = max(worst, err)
    return worst


def measured_velocity(history: SimHistory, host_speed: float = 1.0) -> float:
    """Pulse-train velocity measured from the simulated snapshots.

    Tracks the phase of the pattern-fundamental Fourier mode of the
    sn-riding field channel across snapshots, unwraps it, and converts the
    fitted delay rate d(tau)/d(zeta) into 1/v = 1/c + rate.  The tau
    window should span an integer number of pattern periods (the default
    grid does).
    """
    coeffs = history.coeffs
    span = history.taus[-1] - history.taus[0] + (history.taus[1] - history.taus[0])
    t_period = fundamental_period(coeffs) / coeffs.gamma
    k_bin = int(round(span / t_period))
    if k_bin < 1:
        raise ValueError("tau window shorter than one pattern period")
    signal = history.omega_hist["OmegaF"]
    spectrum = np.fft.fft(signal, axis=1)[:, k_bin]
    phases = np.unwrap(np.angle(spectrum))
    delays = -phases * span / (2.0 * math.pi * k_bin)
    slope = np.polyfit(history.zetas, delays, 1)[0]
    return 1.0 / (1.0 / host_speed + slope)
