"""Truncated two-mode Fock-space linear algebra.

Everything downstream (polarization operator families, parametric-amplifier
dynamics, squeezing sweeps) runs on the dense operator and state types
defined here. The joint space is the tensor product of two truncated
oscillators with dimensions d_x and d_y; the basis state |n_x, n_y> lives
at flat index n_x * d_y + n_y, row-major over x then y. Operations are
exact on the truncated space; fidelity to the infinite-dimensional physics
is certified post hoc with boundary_leakage.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

ALGEBRA_TOL = 1e-12        # exact-algebra identities (hermiticity, norms)
HERMITICITY_TOL = 1e-10    # operators fed to variance must be this Hermitian
UNITARITY_TOL = 1e-10      # default tolerance for exp(anti-Hermitian) checks
LEAKAGE_TOL = 1e-6         # default boundary-population acceptance
VARIANCE_FLOOR = -1e-9     # cancellation allowance before clamping to zero

# Full positivity certification is cubic in dimension; above this joint
# dimension only hermiticity/trace/diagonal checks run.
PSD_CHECK_MAX_DIM = 1024


class DimensionMismatchError(ValueError):
    """Operands live on different Fock cutoffs."""


@dataclass(frozen=True)
class FockCutoff:
    """Truncation of the two-mode Fock space.

    Photon numbers run 0..d_x-1 and 0..d_y-1. The flat basis index of
    |n_x, n_y> is n_x * d_y + n_y; every array in the package uses this
    ordering.
    """

    d_x: int
    d_y: int

    def __post_init__(self) -> None:
        if self.d_x < 2 or self.d_y < 2:
            raise ValueError(f"cutoff must be at least 2 per mode, got {self}")

    @property
    def dim(self) -> int:
        return self.d_x * self.d_y

    def index(self, n_x: int, n_y: int) -> int:
        if not (0 <= n_x < self.d_x and 0 <= n_y < self.d_y):
            raise ValueError(f"|{n_x},{n_y}> outside cutoff {self}")
        return n_x * self.d_y + n_y

    def number_diagonals(self) -> tuple[np.ndarray, np.ndarray]:
        """Diagonals of N_x and N_y in the flat basis."""
        n_x = np.repeat(np.arange(self.d_x, dtype=float), self.d_y)
        n_y = np.tile(np.arange(self.d_y, dtype=float), self.d_x)
        return n_x, n_y


def _as_complex_matrix(m: np.ndarray, dim: int, what: str) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.shape != (dim, dim):
        raise ValueError(f"{what} has shape {a.shape}, expected {(dim, dim)}")
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Operator:
    """Dense complex matrix on the joint truncated space.

    Immutable. Algebra is spelled with the usual Python operators: `+`,
    `-`, scalar `*`, matrix `@`, plus .dag() and .commutator(). Mixing
    operators from different cutoffs raises DimensionMismatchError.
    """

    cutoff: FockCutoff
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "matrix",
            _as_complex_matrix(self.matrix, self.cutoff.dim, "operator matrix"),
        )

    def _require_same_cutoff(self, other: "Operator") -> None:
        if self.cutoff != other.cutoff:
            raise DimensionMismatchError(
                f"cutoff mismatch: {self.cutoff} vs {other.cutoff}")

    def dag(self) -> "Operator":
        return Operator(self.cutoff, self.matrix.conj().T)

    def __add__(self, other: "Operator") -> "Operator":
        self._require_same_cutoff(other)
        return Operator(self.cutoff, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        self._require_same_cutoff(other)
        return Operator(self.cutoff, self.matrix - other.matrix)

    def __neg__(self) -> "Operator":
        return Operator(self.cutoff, -self.matrix)

    def __mul__(self, scalar: complex) -> "Operator":
        return Operator(self.cutoff, self.matrix * complex(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        self._require_same_cutoff(other)
        return Operator(self.cutoff, self.matrix @ other.matrix)

    def commutator(self, other: "Operator") -> "Operator":
        self._require_same_cutoff(other)
        return Operator(
            self.cutoff,
            self.matrix @ other.matrix - other.matrix @ self.matrix)

    def is_hermitian(self, tol: float = ALGEBRA_TOL) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T)) <= tol)


def commutator(a: Operator, b: Operator) -> Operator:
    return a.commutator(b)


@dataclass(frozen=True)
class QuantumState:
    """Pure state vector or density matrix on the joint space.

    Build through from_vector / from_density (or fock_state); the
    constructors validate normalization, and for density matrices
    hermiticity, unit trace, and (up to PSD_CHECK_MAX_DIM) positivity.
    """

    cutoff: FockCutoff
    vector: np.ndarray | None = field(default=None, repr=False)
    density: np.ndarray | None = field(default=None, repr=False)

    @property
    def is_pure(self) -> bool:
        return self.vector is not None

    @classmethod
    def from_vector(cls, cutoff: FockCutoff, vec: np.ndarray) -> "QuantumState":
        v = np.asarray(vec, dtype=complex).reshape(-1)
        if v.shape != (cutoff.dim,):
            raise ValueError(f"state vector length {v.size}, expected {cutoff.dim}")
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > ALGEBRA_TOL:
            raise ValueError(f"state vector norm {norm!r} is not 1 within {ALGEBRA_TOL}")
        v = v.copy()
        v.flags.writeable = False
        return cls(cutoff, vector=v)

    @classmethod
    def from_density(cls, cutoff: FockCutoff, rho: np.ndarray) -> "QuantumState":
        m = _as_complex_matrix(rho, cutoff.dim, "density matrix")
        if np.max(np.abs(m - m.conj().T)) > ALGEBRA_TOL:
            raise ValueError("density matrix is not Hermitian within 1e-12")
        tr = np.trace(m).real
        if abs(tr - 1.0) > ALGEBRA_TOL:
            raise ValueError(f"density matrix trace {tr!r} is not 1 within {ALGEBRA_TOL}")
        _check_positive(m)
        return cls(cutoff, density=m)

    def density_matrix(self) -> np.ndarray:
        if self.vector is not None:
            return np.outer(self.vector, self.vector.conj())
        assert self.density is not None
        return self.density

    def populations(self) -> np.ndarray:
        """Diagonal occupation probabilities in the flat Fock basis."""
        if self.vector is not None:
            return np.abs(self.vector) ** 2
        assert self.density is not None
        return np.diag(self.density).real.copy()


def _check_positive(m: np.ndarray) -> None:
    off = m.copy()
    np.fill_diagonal(off, 0.0)
    if np.max(np.abs(off)) == 0.0:
        # diagonal mixture, eigenvalues are the diagonal
        low = float(np.min(np.diag(m).real))
    elif m.shape[0] <= PSD_CHECK_MAX_DIM:
        low = float(scipy.linalg.eigvalsh(m, subset_by_index=[0, 0])[0])
    else:
        return
    if low < -1e-10:
        raise ValueError(f"density matrix has eigenvalue {low:.3e} below -1e-10")


def fock_state(cutoff: FockCutoff, n_x: int, n_y: int) -> QuantumState:
    """The basis state |n_x, n_y>."""
    v = np.zeros(cutoff.dim, dtype=complex)
    v[cutoff.index(n_x, n_y)] = 1.0
    return QuantumState.from_vector(cutoff, v)


def _ladder(d: int) -> np.ndarray:
    m = np.zeros((d, d), dtype=complex)
    m[np.arange(d - 1), np.arange(1, d)] = np.sqrt(np.arange(1, d))
    return m


def annihilation(cutoff: FockCutoff, mode: str) -> Operator:
    """Annihilation operator a_x or a_y on the joint space.

    a_x|n_x, n_y> = sqrt(n_x) |n_x - 1, n_y>, likewise for y. Columns at
    the truncation boundary are simply cut; the algebra is exact away
    from the top levels.
    """
    if mode == "x":
        m = np.kron(_ladder(cutoff.d_x), np.eye(cutoff.d_y))
    elif mode == "y":
        m = np.kron(np.eye(cutoff.d_x), _ladder(cutoff.d_y))
    else:
        raise ValueError(f"mode must be 'x' or 'y', got {mode!r}")
    return Operator(cutoff, m)


def creation(cutoff: FockCutoff, mode: str) -> Operator:
    return annihilation(cutoff, mode).dag()


def number_operator(cutoff: FockCutoff, mode: str) -> Operator:
    n_x, n_y = cutoff.number_diagonals()
    diag = n_x if mode == "x" else n_y
    if mode not in ("x", "y"):
        raise ValueError(f"mode must be 'x' or 'y', got {mode!r}")
    return Operator(cutoff, np.diag(diag.astype(complex)))


def identity(cutoff: FockCutoff) -> Operator:
    return Operator(cutoff, np.eye(cutoff.dim, dtype=complex))


def pair_annihilation(cutoff: FockCutoff) -> Operator:
    """The product a_y a_x (equivalently a_x a_y) built directly.

    Kronecker structure: a_x a_y = kron(ladder_x, ladder_y), which avoids
    a joint-dimension matrix product.
    """
    return Operator(cutoff, np.kron(_ladder(cutoff.d_x), _ladder(cutoff.d_y)))


def expectation(op: Operator, state: QuantumState) -> complex:
    """<psi|O|psi> for pure states, Tr(rho O) for mixed ones."""
    if op.cutoff != state.cutoff:
        raise DimensionMismatchError(
            f"cutoff mismatch: {op.cutoff} vs {state.cutoff}")
    if state.vector is not None:
        return complex(np.vdot(state.vector, op.matrix @ state.vector))
    assert state.density is not None
    # Tr(rho O) as an elementwise sum, avoids the full matrix product
    return complex(np.sum(state.density * op.matrix.T))


def variance(op: Operator, state: QuantumState) -> float:
    """<O^2> - <O>^2 for a Hermitian operator.

    Cancellation on near-eigenstates can leave a tiny negative value;
    anything in (VARIANCE_FLOOR, 0) clamps to 0, below that is an error.
    """
    if not op.is_hermitian(HERMITICITY_TOL):
        raise ValueError("variance requires a Hermitian operator within 1e-10")
    if op.cutoff != state.cutoff:
        raise DimensionMismatchError(
            f"cutoff mismatch: {op.cutoff} vs {state.cutoff}")
    if state.vector is not None:
        ov = op.matrix @ state.vector
        mean = np.vdot(state.vector, ov).real
        second = np.vdot(ov, ov).real
    else:
        assert state.density is not None
        prod = op.matrix @ state.density
        mean = np.trace(prod).real
        # <O^2> = Tr((O rho) O) without forming O^2
        second = np.sum(prod * op.matrix.T).real
    v = second - mean * mean
    if v < VARIANCE_FLOOR:
        raise ArithmeticError(f"variance {v:.3e} below the clamping floor")
    return max(v, 0.0)


def matrix_exponential(op: Operator, tol: float = UNITARITY_TOL) -> Operator:
    """exp(op) via scaling-and-squaring (scipy's Pade implementation).

    For anti-Hermitian input the result is checked to be unitary within
    tol, element-wise on U^dag U - I.
    """
    if not np.all(np.isfinite(op.matrix)):
        raise ValueError("matrix exponential of non-finite entries")
    e = scipy.linalg.expm(op.matrix)
    anti = np.max(np.abs(op.matrix + op.matrix.conj().T))
    if anti <= tol:
        dev = np.max(np.abs(e.conj().T @ e - np.eye(op.cutoff.dim)))
        if dev > tol:
            raise ArithmeticError(
                f"exp(anti-Hermitian) failed unitarity: deviation {dev:.3e} > {tol:.1e}")
    return Operator(op.cutoff, e)


def boundary_leakage(state: QuantumState, margin: int) -> float:
    """Population within `margin` levels of either truncation edge.

    The certificate that a truncated computation approximates the
    untruncated physics: small leakage means the state never felt the
    boundary.
    """
    d_x, d_y = state.cutoff.d_x, state.cutoff.d_y
    if not (1 <= margin < min(d_x, d_y)):
        raise ValueError(f"margin {margin} must satisfy 1 <= margin < {min(d_x, d_y)}")
    n_x, n_y = state.cutoff.number_diagonals()
    mask = (n_x >= d_x - margin) | (n_y >= d_y - margin)
    return float(np.sum(state.populations()[mask]))


def interior_indices(cutoff: FockCutoff, margin: int) -> np.ndarray:
    """Flat indices of states at least `margin` levels below both cutoffs."""
    if not (1 <= margin < min(cutoff.d_x, cutoff.d_y)):
        raise ValueError(f"margin {margin} out of range for {cutoff}")
    n_x, n_y = cutoff.number_diagonals()
    keep = (n_x <= cutoff.d_x - 1 - margin) & (n_y <= cutoff.d_y - 1 - margin)
    return np.nonzero(keep)[0]


def random_low_excitation_state(
    cutoff: FockCutoff, max_level: int, rng: np.random.Generator,
) -> QuantumState:
    """Random pure state supported on n_x, n_y <= max_level."""
    if max_level >= min(cutoff.d_x, cutoff.d_y):
        raise ValueError("max_level must sit inside the cutoff")
    v = np.zeros(cutoff.dim, dtype=complex)
    for n_x in range(max_level + 1):
        lo = cutoff.index(n_x, 0)
        v[lo:lo + max_level + 1] = (rng.standard_normal(max_level + 1)
                                    + 1j * rng.standard_normal(max_level + 1))
    v /= np.linalg.norm(v)
    return QuantumState.from_vector(cutoff, v)
