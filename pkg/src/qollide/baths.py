"""Bath-cluster state constructors and coherence classification.

Three families of N-qubit bath states drive qualitatively different target
dynamics:

* ``product``: every bath qubit in the same incoherent mixture with excited
  probability ``p_e`` (a bath of independent thermal spins),
* ``thermal-hec``: the collectively thermalized state, block-diagonal with
  every excitation block ``k`` filled uniformly with the coefficient
  ``d_k = (1 - r) r^k / ((1 - r^(N+1)) C(N,k))`` where ``r = n/(n+1)`` for
  mean photon number ``n``,
* ``dicke``: a single fully symmetric state with ``k`` excitations, i.e.
  one uniformly filled block ``U_k / C(N,k)``.

Coherence classification
------------------------
An off-diagonal entry ``(i, j)`` of a bath state matters to the reduced
target dynamics only through the first and second moments of the collective
spin, so each entry is classified *operationally* by which operator has a
nonzero matrix element at the transposed position: ``J+-`` (displacement,
entries joining states one excitation apart), ``J+-^2`` (squeezing, two
excitations apart), ``J+J-``/``J-J+`` (heat exchange, equal excitation),
otherwise ineffective.

Note a geometric rule of thumb ("anti-diagonal entries of an equal-excitation
block are ineffective") holds only when the paired states are more than one
excitation move apart; for N=2 the central block's anti-diagonal entry
(|ge>, |eg>) is a single move and does contribute to <J+J->.  The operator
test used here is the definition that keeps the master-equation coefficients
exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .collective import basis_ordering
from .errors import ValidationError
from .linalg import validate_density_matrix
from .utils import fmt_complex, parse_complex

#: Operator matrix elements below this magnitude count as zero.  The
#: collective operators have integer entries, so this only guards rounding.
EFFECTIVENESS_EPS = 1e-12

BATH_KINDS = ("product", "thermal-hec", "dicke", "explicit")

LABEL_POPULATION = "population"
LABEL_DISPLACEMENT = "displacement"
LABEL_SQUEEZING = "squeezing"
LABEL_HEC = "hec"
LABEL_INEFFECTIVE = "ineffective"


@dataclass(frozen=True, eq=False)
class BathSpec:
    """Declarative description of a bath state (kind plus parameters)."""

    N: int
    kind: str
    p_e: float = None
    n_bar: float = None
    k: int = None
    rho: np.ndarray = None

    def __post_init__(self):
        if self.kind not in BATH_KINDS:
            raise ValidationError(
                f"bath kind: {self.kind!r} not one of {BATH_KINDS}"
            )
        if self.N < 1:
            raise ValidationError(f"N: must be >= 1, got {self.N}")

    @classmethod
    def product_mixed(cls, N, p_e):
        return cls(N=N, kind="product", p_e=p_e)

    @classmethod
    def thermal_hec(cls, N, n_bar):
        return cls(N=N, kind="thermal-hec", n_bar=n_bar)

    @classmethod
    def dicke(cls, N, k):
        return cls(N=N, kind="dicke", k=k)

    @classmethod
    def explicit(cls, rho):
        rho = np.asarray(rho, dtype=complex)
        dim = rho.shape[0]
        N = int(dim).bit_length() - 1
        if dim < 2 or 2**N != dim or rho.shape != (dim, dim):
            raise ValidationError(
                f"explicit bath: dimension {rho.shape} is not a square power of two"
            )
        return cls(N=N, kind="explicit", rho=rho)

    def describe(self):
        """Provenance dict for JSON output."""
        d = {"kind": self.kind, "N": self.N}
        if self.p_e is not None:
            d["p_e"] = self.p_e
        if self.n_bar is not None:
            d["n_bar"] = self.n_bar
        if self.k is not None:
            d["k"] = self.k
        return d


def product_mixed_state(N, p_e):
    """Bath of N independent qubits, each excited with probability ``p_e``.

    Diagonal in the canonical basis with weight ``p_e**k (1-p_e)**(N-k)`` on
    every k-excitation state.
    """
    if not 0.0 <= p_e <= 1.0:
        raise ValidationError(f"p_e: must be in [0, 1], got {p_e}")
    basis = basis_ordering(N)
    exc = basis.excitations.astype(float)
    diag = p_e**exc * (1.0 - p_e) ** (N - exc)
    return np.diag(diag.astype(complex))


def thermal_hec_state(N, n_bar):
    """Collectively thermalized bath state at mean photon number ``n_bar``.

    Block-diagonal with every excitation block ``k`` uniformly filled with
    ``d_k = (1 - r) r^k / ((1 - r^(N+1)) C(N,k))``, ``r = n_bar/(n_bar+1)``.
    Consecutive block traces are in the Gibbs ratio ``r``.
    """
    if n_bar < 0.0:
        raise ValidationError(f"n_bar: must be >= 0, got {n_bar}")
    basis = basis_ordering(N)
    r = n_bar / (n_bar + 1.0)
    # 1 - r = 1/(n_bar + 1) exactly; avoids cancellation at large n_bar
    norm = (1.0 / (n_bar + 1.0)) / (1.0 - r ** (N + 1))
    rho = np.zeros((basis.dim, basis.dim), dtype=complex)
    for k in range(N + 1):
        blk = basis.block_slice(k)
        rho[blk, blk] = norm * r**k / basis.sizes[k]
    return rho


def dicke_block_state(N, k):
    """Pure fully symmetric state with exactly ``k`` excited bath qubits."""
    basis = basis_ordering(N)
    if not 0 <= k <= N:
        raise ValidationError(f"k: must be in 0..{N}, got {k}")
    rho = np.zeros((basis.dim, basis.dim), dtype=complex)
    blk = basis.block_slice(k)
    rho[blk, blk] = 1.0 / basis.sizes[k]
    return rho


def validate_bath(spec):
    """Materialize a :class:`BathSpec` into a validated density matrix."""
    if spec.kind == "product":
        if spec.p_e is None:
            raise ValidationError("p_e: required for a product bath")
        rho = product_mixed_state(spec.N, spec.p_e)
    elif spec.kind == "thermal-hec":
        if spec.n_bar is None:
            raise ValidationError("n_bar: required for a thermal-hec bath")
        rho = thermal_hec_state(spec.N, spec.n_bar)
    elif spec.kind == "dicke":
        if spec.k is None:
            raise ValidationError("k: required for a dicke bath")
        rho = dicke_block_state(spec.N, spec.k)
    elif spec.kind == "explicit":
        if spec.rho is None:
            raise ValidationError("rho: required for an explicit bath")
        if spec.rho.shape != (2**spec.N, 2**spec.N):
            raise ValidationError(
                f"rho: shape {spec.rho.shape} does not match N={spec.N}"
            )
        rho = np.asarray(spec.rho, dtype=complex)
    else:  # unreachable, kinds checked in __post_init__
        raise ValidationError(f"bath kind: unknown {spec.kind!r}")
    return validate_density_matrix(rho, name=f"{spec.kind} bath")


@dataclass(frozen=True, eq=False)
class CoherenceMap:
    """Per-entry classification of a bath density matrix.

    Boolean masks mark which positions feed each master-equation channel;
    labels are symmetric and diagonal entries are populations.  An entry may
    in principle carry several labels (all are retained); the primary label
    follows the precedence displacement > squeezing > heat exchange.
    """

    N: int
    excitations: np.ndarray
    displacement: np.ndarray
    squeezing: np.ndarray
    hec: np.ndarray

    @property
    def dim(self):
        return 2**self.N

    def block_index(self, i, j):
        """Excitation numbers ``(k_i, k_j)`` of the two basis states."""
        return int(self.excitations[i]), int(self.excitations[j])

    def labels(self, i, j):
        """All labels carried by entry ``(i, j)``."""
        if i == j:
            return (LABEL_POPULATION,)
        found = []
        if self.displacement[i, j]:
            found.append(LABEL_DISPLACEMENT)
        if self.squeezing[i, j]:
            found.append(LABEL_SQUEEZING)
        if self.hec[i, j]:
            found.append(LABEL_HEC)
        return tuple(found) if found else (LABEL_INEFFECTIVE,)

    def primary(self, i, j):
        """Primary label of entry ``(i, j)`` (precedence as documented)."""
        return self.labels(i, j)[0]

    def counts(self):
        """Number of ordered entries per primary label."""
        dim = self.dim
        n_disp = int(self.displacement.sum())
        n_sq = int(np.count_nonzero(self.squeezing & ~self.displacement))
        n_hec = int(
            np.count_nonzero(self.hec & ~self.squeezing & ~self.displacement)
        )
        return {
            LABEL_POPULATION: dim,
            LABEL_DISPLACEMENT: n_disp,
            LABEL_SQUEEZING: n_sq,
            LABEL_HEC: n_hec,
            LABEL_INEFFECTIVE: dim * dim - dim - n_disp - n_sq - n_hec,
        }

    def to_json_dict(self, basis=None, include_entries=None):
        """JSON-ready dict: block sizes, label counts and (for small N) the
        upper-triangle entry list.  Labels are symmetric, so each unordered
        pair appears once."""
        if include_entries is None:
            include_entries = self.N <= 6
        if basis is None:
            basis = basis_ordering(self.N)
        out = {
            "N": self.N,
            "block_sizes": list(basis.sizes),
            "counts": self.counts(),
        }
        if include_entries:
            entries = []
            for i in range(self.dim):
                for j in range(i + 1, self.dim):
                    k_i, k_j = self.block_index(i, j)
                    entries.append(
                        {
                            "i": i,
                            "j": j,
                            "state_i": basis.state_label(i),
                            "state_j": basis.state_label(j),
                            "k_i": k_i,
                            "k_j": k_j,
                            "labels": list(self.labels(i, j)),
                            "primary": self.primary(i, j),
                        }
                    )
            out["entries"] = entries
        return out


def classify_coherences(rho, ops):
    """Classify every entry of a bath density matrix by its dynamical role.

    The entry ``rho[i, j]`` enters the expectation value ``Tr(O rho)``
    through the operator element ``O[j, i]``, so the masks test those
    transposed elements against :data:`EFFECTIVENESS_EPS`.  ``rho`` fixes
    the dimension only; the classification is positional.
    """
    rho = np.asarray(rho)
    dim = 2**ops.N
    if rho.shape != (dim, dim):
        raise ValidationError(
            f"classify_coherences: state shape {rho.shape} does not match "
            f"N={ops.N} (expected {dim}x{dim})"
        )
    eps = EFFECTIVENESS_EPS

    def pair_mask(op):
        # effective through op or its adjoint; |op^dag[j,i]| == |op[i,j]|
        return (np.abs(op.T) > eps) | (np.abs(op) > eps)

    displacement = pair_mask(ops.J_minus)
    squeezing = pair_mask(ops.J_minus_sq)
    hec = (np.abs(ops.J_plus_J_minus) > eps) | (np.abs(ops.J_minus_J_plus) > eps)
    for mask in (displacement, squeezing, hec):
        np.fill_diagonal(mask, False)
        mask.setflags(write=False)
    return CoherenceMap(ops.N, ops.basis.excitations, displacement, squeezing, hec)


BATH_CSV_BASIS = "excitation-sorted"


def bath_to_csv(rho, N):
    """Serialize a bath matrix in canonical order to the CSV wire format."""
    lines = [f"N={N},basis={BATH_CSV_BASIS}"]
    for row in np.asarray(rho, dtype=complex):
        lines.append(",".join(fmt_complex(z) for z in row))
    return "\n".join(lines) + "\n"


def bath_from_csv(text):
    """Parse the CSV wire format; returns ``(N, rho)`` without validation."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValidationError("bath csv: empty input")
    header = lines[0].replace(" ", "")
    if not header.startswith("N=") or f",basis={BATH_CSV_BASIS}" not in header:
        raise ValidationError(
            f"bath csv: header must be 'N=<n>,basis={BATH_CSV_BASIS}', "
            f"got {lines[0]!r}"
        )
    try:
        N = int(header[2:].split(",")[0])
    except ValueError as exc:
        raise ValidationError(f"bath csv: cannot parse N from {lines[0]!r}") from exc
    dim = 2**N
    if len(lines) - 1 != dim:
        raise ValidationError(
            f"bath csv: expected {dim} rows for N={N}, got {len(lines) - 1}"
        )
    rho = np.zeros((dim, dim), dtype=complex)
    for i, line in enumerate(lines[1:]):
        tokens = line.split(",")
        if len(tokens) != dim:
            raise ValidationError(
                f"bath csv: row {i} has {len(tokens)} entries, expected {dim}"
            )
        try:
            rho[i] = [parse_complex(t) for t in tokens]
        except ValueError as exc:
            raise ValidationError(f"bath csv: bad entry in row {i}: {exc}") from exc
    return N, rho


def save_bath_csv(path, rho, N):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(bath_to_csv(rho, N))


def load_bath_csv(path):
    with open(path, "r", encoding="utf-8") as fh:
        return bath_from_csv(fh.read())
