"""Dense complex linear algebra primitives shared by every other module.

Everything operates on plain ``numpy`` arrays of ``complex128``.  Density
matrices are Hermitian, unit-trace, positive-semidefinite square matrices;
validation is opt-in (:func:`validate_density_matrix`) so that inner loops
stay cheap.  Dense storage is deliberate: the documented scale limit is
N <= 10 bath qubits for exact-propagator paths and N <= 12 for moment-only
paths, where dense double precision is perfectly adequate.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericError, ValidationError

# Defaults for density-matrix validation with dense double precision.
TOL_HERM = 1e-10
TOL_TRACE = 1e-10
TOL_PSD = 1e-8


def as_complex_matrix(a):
    """Return ``a`` as a 2-d complex128 array, rejecting other shapes."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValidationError(f"expected a matrix, got array of shape {m.shape}")
    return m


def kron(a, b):
    """Kronecker product of two matrices; dimensions multiply."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def partial_trace_bath(rho, dim_sys, dim_bath):
    """Reduced system state of a joint ``system (x) bath`` density matrix.

    Parameters
    ----------
    rho : array_like
        Square matrix of dimension ``dim_sys * dim_bath`` with the system
        factor first in the tensor-product ordering.
    dim_sys, dim_bath : int
        Dimensions of the two factors.

    Returns
    -------
    ndarray
        The ``dim_sys x dim_sys`` reduced matrix.  The trace is preserved
        exactly up to floating-point rounding.
    """
    rho = as_complex_matrix(rho)
    dim = dim_sys * dim_bath
    if rho.shape != (dim, dim):
        raise ValidationError(
            f"partial_trace_bath: shape {rho.shape} does not match "
            f"dim_sys*dim_bath = {dim_sys}*{dim_bath}"
        )
    return np.einsum("abcb->ac", rho.reshape(dim_sys, dim_bath, dim_sys, dim_bath))


def matrix_exp(a, tol=1e-12, max_terms=64):
    """Matrix exponential by scaling-and-squaring with a Taylor series.

    The input is scaled by ``2**-s`` until its infinity norm is below 1/2,
    the series is summed until the current term drops below ``tol`` (scaled
    by the number of squarings), and the result is squared ``s`` times.
    For anti-Hermitian input the result is unitary to within ``tol``.

    Raises
    ------
    ValidationError
        If the input is not square.
    NumericError
        If the series has not converged after ``max_terms`` terms.
    """
    a = as_complex_matrix(a)
    n, m = a.shape
    if n != m:
        raise ValidationError(f"matrix_exp: input must be square, got {a.shape}")
    norm = np.linalg.norm(a, np.inf)
    squarings = 0
    if norm > 0.5:
        squarings = int(np.ceil(np.log2(norm / 0.5)))
    x = a / (2.0**squarings)
    term = np.eye(n, dtype=complex)
    total = np.eye(n, dtype=complex)
    threshold = max(tol * 2.0 ** (-squarings), 1e-300)
    for order in range(1, max_terms + 1):
        term = term @ x / order
        total += term
        if np.max(np.abs(term)) <= threshold:
            break
    else:
        raise NumericError(
            f"matrix_exp: series not converged after {max_terms} terms "
            f"(scaled norm {np.linalg.norm(x, np.inf):.3g})"
        )
    for _ in range(squarings):
        total = total @ total
    return total


def expectation(op, rho):
    """Expectation value Tr(op @ rho); real within tolerance for Hermitian op."""
    op = as_complex_matrix(op)
    rho = as_complex_matrix(rho)
    if op.shape != rho.shape or op.shape[0] != op.shape[1]:
        raise ValidationError(
            f"expectation: incompatible shapes {op.shape} and {rho.shape}"
        )
    return complex(np.einsum("ij,ji->", op, rho))


def validate_density_matrix(
    rho,
    *,
    tol_herm=TOL_HERM,
    tol_trace=TOL_TRACE,
    tol_psd=TOL_PSD,
    name="rho",
):
    """Check the density-matrix invariants and return the validated array.

    Checks, in order: square shape, hermiticity (``tol_herm``), unit trace
    (``tol_trace``) and positivity (smallest eigenvalue >= ``-tol_psd``).
    Raises :class:`ValidationError` naming the failing check.
    """
    rho = as_complex_matrix(rho)
    n, m = rho.shape
    if n != m:
        raise ValidationError(f"{name}: shape check failed, matrix is {n}x{m}")
    herm_dev = np.max(np.abs(rho - rho.conj().T))
    if herm_dev > tol_herm:
        raise ValidationError(
            f"{name}: hermiticity check failed (max |rho - rho^dag| = "
            f"{herm_dev:.3e}, tol {tol_herm:.1e})"
        )
    trace_dev = abs(np.trace(rho) - 1.0)
    if trace_dev > tol_trace:
        raise ValidationError(
            f"{name}: trace check failed (|Tr(rho) - 1| = {trace_dev:.3e}, "
            f"tol {tol_trace:.1e})"
        )
    min_eig = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)[0])
    if min_eig < -tol_psd:
        raise ValidationError(
            f"{name}: positivity check failed (min eigenvalue = {min_eig:.3e}, "
            f"tol {tol_psd:.1e})"
        )
    return rho
