"""Target-qubit dynamics: closed forms, master-equation integration, exact
repeated collisions, bath preparation and scaling sweeps.

The target qubit lives in the fixed basis ``(|e>, |g>)`` so entry (0, 0) of
its density matrix is the excited population.  With the drive and squeezing
channels off, the populations relax exponentially with characteristic time
``t_q = 1 / (mu (r_e + r_d))`` towards ``diag(r_e, r_d) / (r_e + r_d)``; the
coherence decays with ``2 t_q``.  Temperatures are reported in units of
``hbar*omega0/k_B`` and entropies in units of ``k_B``.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .baths import validate_bath
from .collective import build_collective_ops, dicke_ladder_transform
from .errors import NumericError, ValidationError
from .linalg import kron, matrix_exp, partial_trace_bath, validate_density_matrix
from .master_equation import (
    PROJ_E,
    PROJ_G,
    SIGMA_MINUS,
    SIGMA_PLUS,
    coefficients_dicke,
    coefficients_product_mixed,
    coefficients_thermal_hec,
    lindblad_rhs,
)
from .utils import fmt_float

#: Residual coherence above which trajectory temperatures are flagged.
COHERENCE_FLAG_TOL = 1e-6

#: Exact-propagator collision chains are limited to this many bath qubits.
MAX_EXACT_QUBITS = 10

TRAJECTORY_CSV_HEADER = "t,mu_t,rho_ee,rho_gg,re_rho_eg,im_rho_eg,temperature,entropy"
SWEEP_CSV_HEADER = "N,k,r_e,r_d,t_q,T_q"


# ---------------------------------------------------------------------------
# qubit states


def qubit_state(rho_ee, rho_eg=0.0j):
    """Validated 2x2 target-qubit state with the given populations/coherence."""
    rho = np.array(
        [[rho_ee, rho_eg], [np.conj(rho_eg), 1.0 - rho_ee]], dtype=complex
    )
    return validate_density_matrix(rho, name="qubit state")


def ground_state():
    return np.diag([0.0, 1.0]).astype(complex)


def excited_state():
    return np.diag([1.0, 0.0]).astype(complex)


# ---------------------------------------------------------------------------
# closed-form laws


def thermalization_time(c):
    """Characteristic relaxation time 1 / (mu (r_e + r_d)); infinite when the
    bath does not couple (both rates zero, or zero coupling strength)."""
    rate = c.mu * (c.r_e + c.r_d)
    if rate <= 0.0:
        return math.inf
    return 1.0 / rate


def steady_state(c):
    """Fixed point diag(r_e, r_d) / (r_e + r_d) of the thermal channel."""
    total = c.r_e + c.r_d
    if total <= 0.0:
        raise ValidationError("steady_state: r_e + r_d must be positive")
    return np.diag([c.r_e / total, c.r_d / total]).astype(complex)


def temperature_from_populations(p_e, p_g):
    """Temperature (units hbar*omega0/k_B) of a diagonal two-level state.

    Sentinels: 0 for an unpopulated excited level, -0.0 for an unpopulated
    ground level (fully inverted) and +inf at equal populations.  Negative
    values signal population inversion.
    """
    if p_e <= 0.0:
        return 0.0
    if p_g <= 0.0:
        return -0.0
    if p_e == p_g:
        return math.inf
    return 1.0 / math.log(p_g / p_e)


def steady_temperature(c):
    """Steady-state temperature -1/ln(r_e/r_d) in units of hbar*omega0/k_B."""
    return temperature_from_populations(c.r_e, c.r_d)


def dicke_temperature(N, k):
    """Steady temperature against a symmetric k-excitation bath,
    ``-1 / ln[k(N-k+1) / ((k+1)(N-k))]``.

    Positive only below the inversion bound ``k <= ceil(N/2) - 1`` (more
    bath qubits in the ground state); see :func:`dicke_max_noninverted_k`.
    Returns +inf at the balanced point and negative values when inverted.
    """
    if not 0 <= k <= N:
        raise ValidationError(f"k: must be in 0..{N}, got {k}")
    return temperature_from_populations(float(k * (N - k + 1)), float((k + 1) * (N - k)))


def dicke_max_noninverted_k(N):
    """Largest excitation count with a positive steady temperature."""
    return (N + 1) // 2 - 1


def entropy(rho):
    """Von Neumann entropy (units k_B) with the 0 ln 0 := 0 convention."""
    w = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    w = np.clip(w.real, 0.0, 1.0)
    w = w[w > 0.0]
    return float(-np.sum(w * np.log(w)))


# ---------------------------------------------------------------------------
# analytic evolution (thermal channel only)


def _require_thermal_only(c):
    if not c.thermal_only:
        raise ValidationError(
            "analytic evolution requires lambda = epsilon = 0; use "
            "integrate_master for driven or squeezed channels"
        )


def evolve_analytic(rho0, c, t):
    """Closed-form target state at time ``t`` for the thermal-only channel.

    ``rho_ee(t) = (r_e + c0 exp(-t/t_q)) / (r_e + r_d)`` with
    ``c0 = r_d rho_ee(0) - r_e rho_gg(0)``; the coherence decays with twice
    the thermalization time.
    """
    _require_thermal_only(c)
    rho0 = np.asarray(rho0, dtype=complex)
    total = c.r_e + c.r_d
    if c.mu * total <= 0.0:
        return rho0.copy()
    t_q = 1.0 / (c.mu * total)
    ee0 = rho0[0, 0].real
    gg0 = rho0[1, 1].real
    c0 = c.r_d * ee0 - c.r_e * gg0
    ee = (c.r_e + c0 * math.exp(-t / t_q)) / total
    eg = rho0[0, 1] * math.exp(-t / (2.0 * t_q))
    return np.array([[ee, eg], [np.conj(eg), 1.0 - ee]], dtype=complex)


def temperature_trajectory(c, t_grid):
    """Time-dependent temperature for ground-state initialization.

    Equals ``1 / ln(rho_gg(t) / rho_ee(t))`` with the analytic populations,
    i.e. ``[ln((1 + r_d/r_e)/(1 - exp(-t/t_q)) - 1)]**-1``; 0 at t = 0 and
    approaching the steady temperature for long times.
    """
    _require_thermal_only(c)
    if c.r_e <= 0.0:
        raise ValidationError("temperature_trajectory: r_e must be positive")
    total = c.r_e + c.r_d
    if c.mu <= 0.0:
        return np.zeros(np.asarray(t_grid, dtype=float).shape)
    t_q = 1.0 / (c.mu * total)
    t_grid = np.asarray(t_grid, dtype=float)
    out = np.empty(t_grid.shape, dtype=float)
    for idx, t in np.ndenumerate(t_grid):
        ee = c.r_e * (1.0 - math.exp(-t / t_q)) / total
        out[idx] = temperature_from_populations(ee, 1.0 - ee)
    return out


# ---------------------------------------------------------------------------
# trajectories


@dataclass(eq=False)
class Trajectory:
    """Recorded time evolution of the target qubit.

    ``temperature`` is computed from the populations only; records with
    residual coherence above :data:`COHERENCE_FLAG_TOL` set
    ``has_coherence``.
    """

    times: np.ndarray
    mu: float
    states: np.ndarray
    excited_pop: np.ndarray
    temperature: np.ndarray
    entropy: np.ndarray
    has_coherence: bool

    @classmethod
    def from_states(cls, times, states, mu):
        times = np.asarray(times, dtype=float)
        states = np.asarray(states, dtype=complex)
        if states.size == 0:
            states = states.reshape(0, 2, 2)
        if states.shape != (len(times), 2, 2):
            raise ValidationError(
                f"Trajectory: states shape {states.shape} does not match "
                f"{len(times)} records"
            )
        if len(times) > 1 and not np.all(np.diff(times) > 0.0):
            raise ValidationError("Trajectory: times must be strictly increasing")
        ee = states[:, 0, 0].real
        gg = states[:, 1, 1].real
        temps = np.array(
            [temperature_from_populations(e, g) for e, g in zip(ee, gg)]
        )
        ents = np.array([entropy(s) for s in states])
        flagged = bool(np.any(np.abs(states[:, 0, 1]) > COHERENCE_FLAG_TOL))
        return cls(times, float(mu), states, ee, temps, ents, flagged)

    @property
    def scaled_times(self):
        return self.mu * self.times

    def __len__(self):
        return len(self.times)

    def to_csv(self):
        lines = [TRAJECTORY_CSV_HEADER]
        for t, state, temp, ent in zip(
            self.times, self.states, self.temperature, self.entropy
        ):
            eg = state[0, 1]
            lines.append(
                ",".join(
                    fmt_float(x)
                    for x in (
                        t,
                        self.mu * t,
                        state[0, 0].real,
                        state[1, 1].real,
                        eg.real,
                        eg.imag,
                        temp,
                        ent,
                    )
                )
            )
        return "\n".join(lines) + "\n"


def analytic_trajectory(rho0, c, times):
    """Trajectory of :func:`evolve_analytic` states on the given grid."""
    states = [evolve_analytic(rho0, c, t) for t in np.asarray(times, dtype=float)]
    return Trajectory.from_states(times, states, c.mu)


def _record_indices(n_steps, n_records):
    if n_records is None:
        return list(range(n_steps + 1))
    if n_records <= 0:
        return []
    if n_records == 1:
        return [0]
    idx = np.unique(np.round(np.linspace(0, n_steps, n_records)).astype(int))
    return idx.tolist()


def integrate_master(rho0, c, t_end, dt, n_records=None):
    """Fixed-step 4th-order integration of the full master equation.

    Unlike the analytic path this supports nonzero drive and squeezing
    coefficients.  Every recorded state is checked for trace drift beyond
    1e-8 (the generator is traceless, so drift indicates a numeric problem).
    """
    if dt <= 0.0:
        raise ValidationError(f"dt: must be positive, got {dt}")
    if t_end < 0.0:
        raise ValidationError(f"t_end: must be >= 0, got {t_end}")
    t_q = thermalization_time(c)
    if math.isfinite(t_q) and dt > t_q / 20.0:
        warnings.warn(
            f"dt = {dt:.3g} exceeds t_q/20 = {t_q / 20.0:.3g}; accuracy advisory",
            stacklevel=2,
        )
    rho = np.asarray(rho0, dtype=complex).copy()
    n_steps = int(math.floor(t_end / dt + 1e-9))
    record = set(_record_indices(n_steps, n_records))
    times, states = [], []
    for step in range(n_steps + 1):
        if step in record:
            drift = abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag)
            if drift > 1e-8:
                raise NumericError(
                    f"integrate_master: trace drift {drift:.3e} at step {step}"
                )
            times.append(step * dt)
            states.append(rho.copy())
        if step == n_steps:
            break
        k1 = lindblad_rhs(rho, c)
        k2 = lindblad_rhs(rho + 0.5 * dt * k1, c)
        k3 = lindblad_rhs(rho + 0.5 * dt * k2, c)
        k4 = lindblad_rhs(rho + dt * k3, c)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return Trajectory.from_states(np.array(times), states, c.mu)


# ---------------------------------------------------------------------------
# exact repeated collisions


def collision_superoperator(bath, params, mode="exact", max_exact_qubits=MAX_EXACT_QUBITS):
    """4x4 superoperator of one collision, acting on the row-major vectorized
    target state: ``vec(rho') = Phi @ vec(rho)``.

    ``mode='exact'`` uses the full propagator ``exp(-i g tau (J+ s- + J- s+))``;
    ``mode='second_order'`` uses its (non-unitary) truncation at second order
    in ``g*tau``.  The map is linear in the target state, so applying it to
    the four basis matrices materializes it once per (bath, params) pair.
    """
    mode = mode.replace("-", "_")
    if mode not in ("exact", "second_order"):
        raise ValidationError(f"mode: must be 'exact' or 'second_order', got {mode!r}")
    rho_b = validate_bath(bath)
    N = bath.N
    if mode == "exact" and N > max_exact_qubits:
        raise ValidationError(
            f"N: exact propagator limited to N <= {max_exact_qubits}, got {N}"
        )
    ops = build_collective_ops(N)
    gt = params.g_tau
    V = kron(SIGMA_MINUS, ops.J_plus) + kron(SIGMA_PLUS, ops.J_minus)
    if mode == "exact":
        U = matrix_exp(-1j * gt * V)
    else:
        W = kron(PROJ_G, ops.J_plus_J_minus) + kron(PROJ_E, ops.J_minus_J_plus)
        U = np.eye(V.shape[0], dtype=complex) - 1j * gt * V - 0.5 * gt**2 * W
    U_dag = U.conj().T
    dim_b = 2**N
    phi = np.zeros((4, 4), dtype=complex)
    for a in range(2):
        for b in range(2):
            basis_mat = np.zeros((2, 2), dtype=complex)
            basis_mat[a, b] = 1.0
            joint = np.kron(basis_mat, rho_b)
            out = partial_trace_bath(U @ joint @ U_dag, 2, dim_b)
            phi[:, 2 * a + b] = out.ravel()
    return phi


def collision_chain(
    rho0,
    bath,
    params,
    t_end,
    dt,
    mode="exact",
    scheme="deterministic",
    seed=0,
    n_trajectories=1000,
    n_records=None,
):
    """Simulate repeated random collisions of the target with fresh clusters.

    Each time step of length ``dt`` applies a collision with probability
    ``p*dt``.  The deterministic scheme applies the convex mixture
    ``(1 - p dt) rho + p dt Phi(rho)`` every step; the stochastic scheme
    draws a Bernoulli sample per step and averages ``n_trajectories``
    realizations, each driven by a counter-based stream keyed by
    ``(seed, trajectory index)`` so results are reproducible regardless of
    scheduling.
    """
    if dt <= 0.0:
        raise ValidationError(f"dt: must be positive, got {dt}")
    if t_end < 0.0:
        raise ValidationError(f"t_end: must be >= 0, got {t_end}")
    p_dt = params.p * dt
    if p_dt > 1.0:
        raise ValidationError(
            f"p*dt: collision probability per step is {p_dt:.3g} > 1; reduce dt"
        )
    if scheme not in ("deterministic", "stochastic"):
        raise ValidationError(
            f"scheme: must be 'deterministic' or 'stochastic', got {scheme!r}"
        )
    phi = collision_superoperator(bath, params, mode=mode)
    n_steps = int(math.floor(t_end / dt + 1e-9))
    record = _record_indices(n_steps, n_records)
    times = np.array([dt * i for i in record])
    vec0 = np.asarray(rho0, dtype=complex).ravel().copy()

    if scheme == "deterministic":
        step_mat = (1.0 - p_dt) * np.eye(4, dtype=complex) + p_dt * phi
        recorded = _run_chain(vec0, step_mat=step_mat, n_steps=n_steps, record=record)
    else:
        if n_trajectories < 1:
            raise ValidationError("n_trajectories: must be >= 1")
        total = np.zeros((len(record), 4), dtype=complex)
        for traj in range(n_trajectories):
            key = np.array([int(seed) % 2**64, traj], dtype=np.uint64)
            rng = np.random.Generator(np.random.Philox(key=key))
            collide = rng.random(n_steps) < p_dt
            total += _run_chain(
                vec0, phi=phi, collide=collide, n_steps=n_steps, record=record
            )
        recorded = total / n_trajectories

    states = recorded.reshape(len(record), 2, 2)
    return Trajectory.from_states(times, states, params.mu)


def _run_chain(vec0, *, n_steps, record, step_mat=None, phi=None, collide=None):
    recorded = np.zeros((len(record), 4), dtype=complex)
    record_set = {idx: pos for pos, idx in enumerate(record)}
    vec = vec0.copy()
    for step in range(n_steps + 1):
        pos = record_set.get(step)
        if pos is not None:
            recorded[pos] = vec
        if step == n_steps:
            break
        if step_mat is not None:
            vec = step_mat @ vec
        elif collide[step]:
            vec = phi @ vec
    return recorded


# ---------------------------------------------------------------------------
# thermal preparation of the collective bath


@dataclass(frozen=True, eq=False)
class LadderState:
    """Populations of the fully symmetric ladder states, indexed by the
    excitation count ``k = 0..N`` (``m = k - N/2``)."""

    N: int
    populations: np.ndarray

    def __post_init__(self):
        pops = np.asarray(self.populations, dtype=float)
        if pops.shape != (self.N + 1,):
            raise ValidationError(
                f"LadderState: expected {self.N + 1} populations, got shape "
                f"{pops.shape}"
            )
        if pops.min() < -1e-10:
            raise ValidationError(
                f"LadderState: negative population {pops.min():.3e}"
            )
        if abs(pops.sum() - 1.0) > 1e-8:
            raise ValidationError(
                f"LadderState: populations sum to {pops.sum():.12g}, not 1"
            )
        pops = pops.copy()
        pops.setflags(write=False)
        object.__setattr__(self, "populations", pops)


def _ladder_generator(N, n_bar, gamma0):
    """Rate matrix of the ladder populations under collective emission and
    absorption: down rate ``gamma0 (n+1) k(N-k+1)``, up rate
    ``gamma0 n (k+1)(N-k)``."""
    gen = np.zeros((N + 1, N + 1))
    for k in range(N + 1):
        if k >= 1:
            down = gamma0 * (n_bar + 1.0) * k * (N - k + 1)
            gen[k - 1, k] += down
            gen[k, k] -= down
        if k <= N - 1:
            up = gamma0 * n_bar * (k + 1) * (N - k)
            gen[k + 1, k] += up
            gen[k, k] -= up
    return gen


def ladder_history(N, n_bar, gamma0, t_end, dt, n_records=None):
    """Integrate the ladder rate equations from the collective ground state.

    Returns ``(times, populations)`` with one row per record.  Raises
    :class:`NumericError` on population negativity (step too large) or
    normalization drift.
    """
    if N < 1:
        raise ValidationError(f"N: must be >= 1, got {N}")
    if n_bar < 0.0:
        raise ValidationError(f"n_bar: must be >= 0, got {n_bar}")
    if gamma0 <= 0.0:
        raise ValidationError(f"gamma0: must be positive, got {gamma0}")
    if dt <= 0.0:
        raise ValidationError(f"dt: must be positive, got {dt}")
    if t_end < 0.0:
        raise ValidationError(f"t_end: must be >= 0, got {t_end}")
    gen = _ladder_generator(N, n_bar, gamma0)
    pops = np.zeros(N + 1)
    pops[0] = 1.0
    n_steps = int(math.floor(t_end / dt + 1e-9))
    record = set(_record_indices(n_steps, n_records))
    times, history = [], []
    for step in range(n_steps + 1):
        if step in record:
            if pops.min() < -1e-10:
                raise NumericError(
                    f"ladder integration: population negativity "
                    f"{pops.min():.3e} at step {step}; reduce dt"
                )
            if abs(pops.sum() - 1.0) > 1e-8:
                raise NumericError(
                    f"ladder integration: normalization drift "
                    f"{pops.sum() - 1.0:.3e} at step {step}"
                )
            times.append(step * dt)
            history.append(pops.copy())
        if step == n_steps:
            break
        k1 = gen @ pops
        k2 = gen @ (pops + 0.5 * dt * k1)
        k3 = gen @ (pops + 0.5 * dt * k2)
        k4 = gen @ (pops + dt * k3)
        pops = pops + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return np.array(times), np.array(history)


def prepare_thermal_dicke(N, n_bar, gamma0, t_end, dt):
    """Thermalize the collective ladder and map it to the product basis.

    Starting from ``|g...g>`` the dynamics stays inside the fully symmetric
    ladder, so an (N+1)-dimensional rate equation suffices.  For
    ``t_end >> 1/gamma0`` consecutive populations approach the Gibbs ratio
    ``n_bar/(n_bar+1)`` and the product-basis image coincides with
    :func:`qollide.baths.thermal_hec_state`.

    Returns ``(LadderState, rho_product)``.
    """
    _, history = ladder_history(N, n_bar, gamma0, t_end, dt, n_records=None)
    pops = np.clip(history[-1], 0.0, None)
    ladder = LadderState(N, pops)
    V = dicke_ladder_transform(N)
    rho = (V * ladder.populations) @ V.conj().T
    return ladder, rho


# ---------------------------------------------------------------------------
# scaling sweeps


@dataclass(frozen=True)
class SweepRow:
    N: int
    k: int
    r_e: float
    r_d: float
    t_q: float
    T_q: float


@dataclass(frozen=True, eq=False)
class SweepResult:
    family: str
    k_rule: str
    rows: tuple
    slope_t_q: float
    slope_T_q: float

    def to_csv(self):
        lines = [SWEEP_CSV_HEADER]
        for row in self.rows:
            k_field = "" if row.k is None else str(row.k)
            lines.append(
                ",".join(
                    (
                        str(row.N),
                        k_field,
                        fmt_float(row.r_e),
                        fmt_float(row.r_d),
                        fmt_float(row.t_q),
                        fmt_float(row.T_q),
                    )
                )
            )
        return "\n".join(lines) + "\n"

    def slopes_dict(self):
        # non-finite slopes (undefined fits) serialize as null, not NaN
        def fin(x):
            return x if math.isfinite(x) else None

        return {
            "family": self.family,
            "k_rule": self.k_rule,
            "n_min": self.rows[0].N if self.rows else None,
            "n_max": self.rows[-1].N if self.rows else None,
            "points": len(self.rows),
            "slope_t_q": fin(self.slope_t_q),
            "slope_T_q": fin(self.slope_T_q),
        }


def fit_loglog_slope(xs, ys):
    """Least-squares slope of ``ln(y)`` against ``ln(x)``."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) < 2:
        raise ValidationError("fit_loglog_slope: need at least two points")
    if np.any(xs <= 0.0) or np.any(ys <= 0.0) or not np.all(np.isfinite(ys)):
        raise ValidationError("fit_loglog_slope: values must be finite and positive")
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def _sweep_k(family, k_rule, N):
    if family != "dicke":
        return None
    if k_rule == "quarter":
        return N // 4
    if k_rule == "half-minus-one":
        return (N - 1) // 2
    raise ValidationError(
        f"k_rule: must be 'quarter' or 'half-minus-one', got {k_rule!r}"
    )


def scaling_sweep(family, N_list, params, p_e=None, n_bar=None, k_rule=None, threads=1):
    """Closed-form sweep of rates, thermalization time and steady temperature.

    Families: ``product`` (requires ``p_e``), ``thermal-hec`` (requires
    ``n_bar``) and ``dicke`` (requires ``k_rule``; for N not divisible by 4
    the quarter rule takes ``floor(N/4)``, the half-minus-one rule takes the
    largest non-inverted block).  Rows are computed by a worker pool but
    assembled in input order, so output is deterministic.
    """
    N_list = [int(N) for N in N_list]
    if not N_list:
        raise ValidationError("N_list: must not be empty")
    if any(N < 1 for N in N_list):
        raise ValidationError("N_list: all N must be >= 1")
    if family == "product":
        if p_e is None:
            raise ValidationError("p_e: required for the product family")
        make = lambda N: (None, coefficients_product_mixed(N, p_e, params))
    elif family == "thermal-hec":
        if n_bar is None:
            raise ValidationError("n_bar: required for the thermal-hec family")
        make = lambda N: (None, coefficients_thermal_hec(N, n_bar, params))
    elif family == "dicke":
        if k_rule is None:
            raise ValidationError("k_rule: required for the dicke family")
        _sweep_k(family, k_rule, N_list[0])  # fail fast on a bad rule

        def make(N):
            k = _sweep_k("dicke", k_rule, N)
            return k, coefficients_dicke(N, k, params)

    else:
        raise ValidationError(
            f"family: must be 'product', 'thermal-hec' or 'dicke', got {family!r}"
        )

    def row(N):
        k, c = make(N)
        return SweepRow(N, k, c.r_e, c.r_d, thermalization_time(c), steady_temperature(c))

    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as pool:
        rows = tuple(pool.map(row, N_list))

    slope_t_q = math.nan
    slope_T_q = math.nan
    if len(rows) >= 2:
        Ns = [r.N for r in rows]
        try:
            slope_t_q = fit_loglog_slope(Ns, [r.t_q for r in rows])
        except ValidationError:
            pass
        try:
            slope_T_q = fit_loglog_slope(Ns, [r.T_q for r in rows])
        except ValidationError:
            pass
    return SweepResult(family, k_rule, rows, slope_t_q, slope_T_q)
