"""Collective spin operators and excitation-block bookkeeping for N qubits.

Canonical storage basis
-----------------------
All bath operators and states in this package use the *excitation-sorted*
product basis: the ``2**N`` product states are grouped into blocks of fixed
excitation number ``k`` (block size ``C(N, k)``, ascending ``k``), and inside
a block states are ordered by their bit pattern read as a binary number with
qubit 1 as the most significant bit and an excited qubit encoded as bit 1.
Index 0 is therefore ``|g...g>``.  In this ordering the equal-excitation
coherence blocks are contiguous along the diagonal, the collective lowering
operator ``J- = sum_i sigma_i^-`` maps block ``k`` into block ``k - 1`` only,
and block-diagonal states are trivially indexable.

The permutation to and from the raw binary ordering is exposed through
:class:`BasisOrdering` for I/O.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np

from .errors import ValidationError

#: Largest N accepted for collective-operator construction.
MAX_QUBITS_DEFAULT = 12


def block_sizes(N):
    """Sizes ``[C(N,0), ..., C(N,N)]`` of the excitation blocks (Pascal row)."""
    if N < 1:
        raise ValidationError(f"block_sizes: N must be >= 1, got {N}")
    return [comb(N, k) for k in range(N + 1)]


@dataclass(frozen=True, eq=False)
class BasisOrdering:
    """Permutation between binary and excitation-sorted basis orderings.

    Attributes
    ----------
    N : int
        Number of qubits.
    order : ndarray
        ``order[s]`` is the binary index of canonical basis state ``s``.
    position : ndarray
        Inverse permutation: ``position[b]`` is the canonical index of
        binary basis state ``b``.
    sizes : tuple of int
        Block sizes ``C(N, k)``.
    offsets : tuple of int
        Cumulative block starts; ``offsets[k]:offsets[k+1]`` is block ``k``.
    excitations : ndarray
        Excitation number of each canonical basis state.
    """

    N: int
    order: np.ndarray
    position: np.ndarray
    sizes: tuple
    offsets: tuple
    excitations: np.ndarray

    @property
    def dim(self):
        return 2**self.N

    def block_slice(self, k):
        """Index slice of excitation block ``k``."""
        if not 0 <= k <= self.N:
            raise ValidationError(f"block_slice: k={k} out of range 0..{self.N}")
        return slice(self.offsets[k], self.offsets[k + 1])

    def state_label(self, s):
        """Pattern string like ``'gge'`` (qubit 1 first) of canonical index s."""
        b = int(self.order[s])
        return "".join(
            "e" if (b >> (self.N - i)) & 1 else "g" for i in range(1, self.N + 1)
        )


def basis_ordering(N):
    """Build the :class:`BasisOrdering` for ``N`` qubits."""
    if N < 1:
        raise ValidationError(f"basis_ordering: N must be >= 1, got {N}")
    sizes = tuple(comb(N, k) for k in range(N + 1))
    order = np.array(
        sorted(range(2**N), key=lambda b: (bin(b).count("1"), b)), dtype=np.intp
    )
    position = np.empty_like(order)
    position[order] = np.arange(2**N, dtype=np.intp)
    offsets = (0, *np.cumsum(sizes).tolist())
    excitations = np.array([bin(int(b)).count("1") for b in order], dtype=np.intp)
    for arr in (order, position, excitations):
        arr.setflags(write=False)
    return BasisOrdering(N, order, position, sizes, offsets, excitations)


class CollectiveOps:
    """Collective spin operators of ``N`` bath qubits in the canonical basis.

    ``ladder[k - 1]`` is the sub-block of ``J-`` mapping excitation block
    ``k`` into block ``k - 1`` (shape ``C(N,k-1) x C(N,k)``); iterating over
    these blocks lets the moment extraction scale with the sum of squared
    block sizes instead of ``4**N``.  The dense ``2**N x 2**N`` operators
    are assembled lazily on first access (and then cached), so moment-only
    workloads at the top of the size range never pay for them.  All arrays
    are read-only and safe to share across workers.
    """

    def __init__(self, N, basis, ladder):
        self.N = N
        self.basis = basis
        self.ladder = ladder

    def _dense(self, fill):
        out = np.zeros((self.basis.dim, self.basis.dim), dtype=complex)
        fill(out, self.basis.offsets)
        out.setflags(write=False)
        return out

    @cached_property
    def J_minus(self):
        def fill(out, off):
            for k in range(1, self.N + 1):
                out[off[k - 1] : off[k], off[k] : off[k + 1]] = self.ladder[k - 1]

        return self._dense(fill)

    @cached_property
    def J_plus(self):
        out = self.J_minus.conj().T.copy()
        out.setflags(write=False)
        return out

    @cached_property
    def J_plus_J_minus(self):
        def fill(out, off):
            for k in range(1, self.N + 1):
                blk = slice(off[k], off[k + 1])
                L = self.ladder[k - 1]
                out[blk, blk] = L.conj().T @ L

        return self._dense(fill)

    @cached_property
    def J_minus_J_plus(self):
        def fill(out, off):
            for k in range(0, self.N):
                blk = slice(off[k], off[k + 1])
                L = self.ladder[k]  # block k+1 -> k
                out[blk, blk] = L @ L.conj().T

        return self._dense(fill)

    @cached_property
    def J_minus_sq(self):
        def fill(out, off):
            for k in range(2, self.N + 1):
                rows = slice(off[k - 2], off[k - 1])
                cols = slice(off[k], off[k + 1])
                out[rows, cols] = self.ladder[k - 2] @ self.ladder[k - 1]

        return self._dense(fill)


def build_collective_ops(N, max_qubits=MAX_QUBITS_DEFAULT):
    """Construct :class:`CollectiveOps` for ``N`` qubits (``N <= max_qubits``)."""
    if not 1 <= N <= max_qubits:
        raise ValidationError(
            f"build_collective_ops: N={N} outside allowed range 1..{max_qubits}"
        )
    basis = basis_ordering(N)
    sizes, offsets = basis.sizes, basis.offsets

    ladder = []
    for k in range(1, N + 1):
        L = np.zeros((sizes[k - 1], sizes[k]), dtype=complex)
        for col in range(sizes[k]):
            b = int(basis.order[offsets[k] + col])
            for bit in range(N):
                if (b >> bit) & 1:
                    row = basis.position[b & ~(1 << bit)] - offsets[k - 1]
                    L[row, col] = 1.0
        L.setflags(write=False)
        ladder.append(L)
    return CollectiveOps(N, basis, tuple(ladder))


def symmetric_dicke_vector(N, k):
    """Normalized equal-amplitude state over all ``C(N,k)`` k-excitation states."""
    basis = basis_ordering(N)
    if not 0 <= k <= N:
        raise ValidationError(f"symmetric_dicke_vector: k={k} out of range 0..{N}")
    v = np.zeros(basis.dim, dtype=complex)
    v[basis.block_slice(k)] = 1.0 / np.sqrt(basis.sizes[k])
    return v


def dicke_ladder_transform(N):
    """Isometry (``2**N x (N+1)``) whose k-th column is the symmetric state
    with ``k`` excitations; maps ladder populations to the product basis."""
    basis = basis_ordering(N)
    V = np.zeros((basis.dim, N + 1), dtype=complex)
    for k in range(N + 1):
        V[basis.block_slice(k), k] = 1.0 / np.sqrt(basis.sizes[k])
    return V


def j_z_diagonal(basis):
    """Diagonal of J_z = (1/2) sum_i sigma_i^z in the canonical basis."""
    return basis.excitations.astype(float) - basis.N / 2.0
