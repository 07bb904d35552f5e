"""Master-equation coefficients and the reduced generator of the target qubit.

Repeated brief collisions (coupling ``g``, duration ``tau``, rate ``p``) of a
resonant target qubit with freshly prepared N-qubit clusters reduce, to
second order in ``g*tau``, to a Lindblad generator whose coefficients are
moments of the collective bath spin:

====================  =======================  ==========================
coefficient           moment                   effect on the target
====================  =======================  ==========================
``lam``               <J->                     coherent drive (displaced)
``eps``               <J-^2>                   squeezed environment
``r_e``               <J+J->                   excitation rate (thermal)
``r_d``               <J-J+>                   de-excitation rate (thermal)
====================  =======================  ==========================

The drive enters at first order with prefactor ``pg_tau = p*g*tau`` while
the dissipators enter at second order with ``mu = p*(g*tau)**2``; both are
stored explicitly because conflating the two orders is a classic mistake.

The target qubit is stored in the fixed basis ``(|e>, |g>)``: entry (0, 0)
of a qubit density matrix is the excited population.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .baths import BathSpec, validate_bath
from .collective import build_collective_ops, j_z_diagonal
from .errors import NumericError, ValidationError

# Target-qubit operators in the (|e>, |g>) basis.
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
PROJ_E = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
PROJ_G = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
for _op in (SIGMA_PLUS, SIGMA_MINUS, PROJ_E, PROJ_G):
    _op.setflags(write=False)

#: Above this value of g*tau the second-order truncation becomes dubious.
GT_ADVISORY = 0.3

_RATE_TOL = 1e-9


@dataclass(frozen=True)
class CollisionParams:
    """Physical collision parameters (rates in inverse time units).

    ``g`` is the qubit-qubit coupling, ``tau`` the duration of a single
    collision, ``p`` the random collision rate and ``omega0`` the common
    resonance frequency (temperatures are reported in units of
    ``hbar*omega0/k_B``, so ``omega0`` never enters numerically).
    """

    g: float
    tau: float
    p: float
    omega0: float = 1.0

    def __post_init__(self):
        if self.g < 0.0:
            raise ValidationError(f"g: must be >= 0, got {self.g}")
        for field in ("tau", "p", "omega0"):
            value = getattr(self, field)
            if not value > 0.0:
                raise ValidationError(f"{field}: must be positive, got {value}")
        if self.g * self.tau > GT_ADVISORY:
            warnings.warn(
                f"g*tau = {self.g * self.tau:.3g} exceeds {GT_ADVISORY}; the "
                "second-order collision expansion may be inaccurate",
                stacklevel=2,
            )

    @property
    def g_tau(self):
        return self.g * self.tau

    @property
    def mu(self):
        """Dissipator rate prefactor p*(g*tau)**2."""
        return self.p * (self.g * self.tau) ** 2

    @property
    def pg_tau(self):
        """Drive prefactor p*g*tau."""
        return self.p * self.g * self.tau


@dataclass(frozen=True)
class MeqCoefficients:
    """Coefficient tuple driving the target-qubit master equation."""

    lam: complex
    eps: complex
    r_e: float
    r_d: float
    mu: float
    pg_tau: float

    def __post_init__(self):
        for field in ("r_e", "r_d"):
            value = getattr(self, field)
            if value < -_RATE_TOL:
                raise ValidationError(
                    f"{field}: expectation of a positive operator cannot be "
                    f"{value}"
                )
            # clamp away harmless rounding negatives
            object.__setattr__(self, field, max(0.0, float(value)))
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "eps", complex(self.eps))
        if self.mu < 0.0:
            raise ValidationError(f"mu: must be >= 0, got {self.mu}")

    @property
    def thermal_only(self):
        """True when the drive and squeezing channels vanish."""
        return abs(self.lam) <= 1e-12 and abs(self.eps) <= 1e-12

    def to_json_dict(self):
        return {
            "lambda_re": self.lam.real,
            "lambda_im": self.lam.imag,
            "epsilon_re": self.eps.real,
            "epsilon_im": self.eps.imag,
            "r_e": self.r_e,
            "r_d": self.r_d,
            "mu": self.mu,
            "pg_tau": self.pg_tau,
        }


def coefficients_from_state(rho_b, ops, params):
    """Extract the coefficient tuple from an arbitrary bath state.

    Uses the block structure of the canonical basis: with ``L_k`` the
    sub-block of ``J-`` mapping excitation block ``k`` to ``k - 1``,

    * ``lam  = sum_k Tr(L_k rho[k, k-1])``
    * ``eps  = sum_k Tr(L_{k-1} L_k rho[k, k-2])``
    * ``r_e  = sum_k Tr(L_k rho[k, k] L_k^dag)``  (= Tr(J- rho J+))
    * ``r_d  = sum_k Tr(L_{k+1}^dag rho[k, k] L_{k+1})``  (= Tr(J+ rho J-))

    so the cost scales with the squared block sizes rather than ``4**N``.
    """
    rho_b = np.asarray(rho_b, dtype=complex)
    N = ops.N
    dim = 2**N
    if rho_b.shape != (dim, dim):
        raise ValidationError(
            f"coefficients_from_state: state shape {rho_b.shape} does not "
            f"match N={N}"
        )
    offsets = ops.basis.offsets

    def block(i, j):
        return rho_b[offsets[i] : offsets[i + 1], offsets[j] : offsets[j + 1]]

    lam = 0.0j
    eps = 0.0j
    r_e = 0.0
    r_d = 0.0
    for k in range(1, N + 1):
        L = ops.ladder[k - 1]
        lam += np.einsum("ij,ji->", L, block(k, k - 1))
        # Tr(L B L^dag) as one matmul plus an elementwise contraction
        r_e += float(np.sum((L @ block(k, k)) * L.conj()).real)
    for k in range(2, N + 1):
        L2 = ops.ladder[k - 2] @ ops.ladder[k - 1]
        eps += np.einsum("ij,ji->", L2, block(k, k - 2))
    for k in range(0, N):
        L = ops.ladder[k]  # block k+1 -> k
        # Tr(L^dag B L)
        r_d += float(np.sum(L.conj() * (block(k, k) @ L)).real)

    # consistency: r_d - r_e must equal -2<J_z> for any valid state
    jz = float(np.real(np.sum(j_z_diagonal(ops.basis) * np.diag(rho_b))))
    if abs((r_d - r_e) - (-2.0 * jz)) > 1e-8 * max(1.0, N):
        raise NumericError(
            "coefficients_from_state: rate difference inconsistent with "
            f"<J_z> ({r_d - r_e} vs {-2.0 * jz})"
        )
    return MeqCoefficients(lam, eps, r_e, r_d, params.mu, params.pg_tau)


def coefficients_product_mixed(N, p_e, params):
    """Closed form for a product bath: ``r_e = N p_e``, ``r_d = N (1-p_e)``."""
    if not 0.0 <= p_e <= 1.0:
        raise ValidationError(f"p_e: must be in [0, 1], got {p_e}")
    return MeqCoefficients(
        0.0j, 0.0j, N * p_e, N * (1.0 - p_e), params.mu, params.pg_tau
    )


def coefficients_thermal_hec(N, n_bar, params):
    """Closed-form rate sums for the collectively thermalized bath.

    ``r_e = sum_{k=1..N} (1-r) r^k k (N-k+1) / (1 - r^(N+1))`` and ``r_d``
    the same sum with ``r^(k-1)``, so ``r_e / r_d = r`` exactly.
    """
    if n_bar < 0.0:
        raise ValidationError(f"n_bar: must be >= 0, got {n_bar}")
    r = n_bar / (n_bar + 1.0)
    # 1 - r = 1/(n_bar + 1) exactly; avoids cancellation at large n_bar
    norm = (1.0 / (n_bar + 1.0)) / (1.0 - r ** (N + 1))
    r_e = 0.0
    r_d = 0.0
    for k in range(1, N + 1):
        weight = k * (N - k + 1)
        r_e += norm * r**k * weight
        r_d += norm * r ** (k - 1) * weight
    return MeqCoefficients(0.0j, 0.0j, r_e, r_d, params.mu, params.pg_tau)


def coefficients_dicke(N, k, params):
    """Closed form for a symmetric k-excitation bath:
    ``r_e = k(N-k+1)``, ``r_d = (k+1)(N-k)``."""
    if not 0 <= k <= N:
        raise ValidationError(f"k: must be in 0..{N}, got {k}")
    return MeqCoefficients(
        0.0j,
        0.0j,
        float(k * (N - k + 1)),
        float((k + 1) * (N - k)),
        params.mu,
        params.pg_tau,
    )


def coefficients_for(spec, params, ops=None):
    """Coefficients for a :class:`BathSpec`: closed forms for the named
    families, the block-structured trace for explicit matrices."""
    if not isinstance(spec, BathSpec):
        raise ValidationError("coefficients_for: expected a BathSpec")
    if spec.kind == "product":
        if spec.p_e is None:
            raise ValidationError("p_e: required for a product bath")
        return coefficients_product_mixed(spec.N, spec.p_e, params)
    if spec.kind == "thermal-hec":
        if spec.n_bar is None:
            raise ValidationError("n_bar: required for a thermal-hec bath")
        return coefficients_thermal_hec(spec.N, spec.n_bar, params)
    if spec.kind == "dicke":
        if spec.k is None:
            raise ValidationError("k: required for a dicke bath")
        return coefficients_dicke(spec.N, spec.k, params)
    rho = validate_bath(spec)
    if ops is None:
        ops = build_collective_ops(spec.N)
    return coefficients_from_state(rho, ops, params)


def lindblad_rhs(rho_q, c):
    """Right-hand side of the target-qubit master equation.

    ``d rho/dt = -i pg_tau [lam s+ + lam* s-, rho] + mu (eps s+ rho s+ +
    eps* s- rho s-) + (mu r_d/2)(2 s- rho s+ - {s+s-, rho}) + (mu r_e/2)
    (2 s+ rho s- - {s-s+, rho})``.  Trace-free, Hermiticity preserving.
    """
    rho_q = np.asarray(rho_q, dtype=complex)
    if rho_q.shape != (2, 2):
        raise ValidationError(
            f"lindblad_rhs: expected a 2x2 state, got {rho_q.shape}"
        )
    out = np.zeros((2, 2), dtype=complex)
    if c.lam != 0:
        h_eff = c.lam * SIGMA_PLUS + np.conj(c.lam) * SIGMA_MINUS
        out += -1j * c.pg_tau * (h_eff @ rho_q - rho_q @ h_eff)
    if c.eps != 0:
        out += c.mu * (
            c.eps * (SIGMA_PLUS @ rho_q @ SIGMA_PLUS)
            + np.conj(c.eps) * (SIGMA_MINUS @ rho_q @ SIGMA_MINUS)
        )
    out += (c.mu * c.r_d / 2.0) * (
        2.0 * SIGMA_MINUS @ rho_q @ SIGMA_PLUS
        - PROJ_E @ rho_q
        - rho_q @ PROJ_E
    )
    out += (c.mu * c.r_e / 2.0) * (
        2.0 * SIGMA_PLUS @ rho_q @ SIGMA_MINUS
        - PROJ_G @ rho_q
        - rho_q @ PROJ_G
    )
    return out
