"""Degenerate parametric amplification on the truncated Fock space.

The interaction-picture generator a_x^dag a_y^dag + a_x a_y creates and
destroys quanta pairwise, so it conserves the mode imbalance n_x - n_y.
Evolution therefore block-diagonalizes over imbalance sectors, each a
real symmetric tridiagonal matrix whose eigendecomposition is computed
once per cutoff and reused for every evolution time. This exact
propagator doubles as the brute-force oracle against which closed-form
Heisenberg moments are checked.

Truncation is certified after the fact: the evolved state must keep its
population clear of the last EVOLUTION_MARGIN levels of either mode,
else `evolve` raises and `oracle_moments` flags its report invalid.

Time enters only through the dimensionless product kt. The Bogoliubov
coefficients are C = cosh 2kt and S = sinh 2kt, fixed by the acceptance
anchors <N_x> = S^2 on vacuum and |p_h| = tanh 2kt, so the propagator
applies exp(-i * (2 kt) * H_int).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .fock import (
    FockCutoff,
    Operator,
    QuantumState,
    boundary_leakage,
    expectation,
    pair_annihilation,
    variance,
)
from .polarization import HiddenSet, build_hidden

EVOLUTION_MARGIN = 4           # boundary band whose population certifies truncation
DEFAULT_LEAKAGE_TOL = 1e-6
BOGOLIUBOV_TOL = 1e-12


class TruncationError(ArithmeticError):
    """Evolution pushed too much population against the cutoff."""

    def __init__(self, leakage: float, cutoff: FockCutoff) -> None:
        super().__init__(
            f"boundary leakage {leakage:.3e} exceeds tolerance at {cutoff}")
        self.leakage = float(leakage)
        self.cutoff = cutoff


@dataclass(frozen=True)
class DpaConfig:
    """Evolution parameters: dimensionless kt, truncation, leakage budget.

    kt may be negative (reversal); physical amplification uses kt >= 0.
    """

    kt: float
    cutoff: FockCutoff
    leakage_tol: float = DEFAULT_LEAKAGE_TOL

    def __post_init__(self) -> None:
        if not math.isfinite(self.kt):
            raise ValueError("kt must be finite")
        if not 0.0 < self.leakage_tol < 1.0:
            raise ValueError("leakage_tol must lie in (0, 1)")
        if min(self.cutoff.d_x, self.cutoff.d_y) <= EVOLUTION_MARGIN:
            raise ValueError(
                f"cutoff must exceed {EVOLUTION_MARGIN} levels per mode "
                "to certify leakage")


@dataclass(frozen=True)
class HeisenbergSolution:
    """Bogoliubov coefficients of the closed-form mode transformation.

    a_x(t) = C a_x - i S a_y^dag with C = cosh 2kt, S = sinh 2kt.
    Intended for moderate kt where the hyperbolic identity is
    representable; the constructor enforces it to BOGOLIUBOV_TOL.
    """

    C: float
    S: float

    def __post_init__(self) -> None:
        defect = abs(self.C**2 - self.S**2 - 1.0)
        if defect > BOGOLIUBOV_TOL:
            raise ValueError(f"C^2 - S^2 = 1 violated by {defect:.3e}")

    @classmethod
    def from_kt(cls, kt: float) -> "HeisenbergSolution":
        return cls(math.cosh(2.0 * kt), math.sinh(2.0 * kt))


@dataclass(frozen=True)
class MomentReport:
    """All eight moments of the hidden set for one evolution time.

    `leakage` is the certified boundary population of the evolved state
    (identically zero for closed-form reports, which involve no
    truncation); `valid` is False when it exceeded the configured
    budget and the numbers should not be trusted.
    """

    kt: float
    mean_h0: float
    mean_h1: float
    mean_h2: float
    mean_h3: float
    var_h0: float
    var_h1: float
    var_h2: float
    var_h3: float
    leakage: float
    valid: bool = True

    def __post_init__(self) -> None:
        for name in ("var_h0", "var_h1", "var_h2", "var_h3"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def means(self) -> tuple[float, float, float, float]:
        return (self.mean_h0, self.mean_h1, self.mean_h2, self.mean_h3)

    @property
    def variances(self) -> tuple[float, float, float, float]:
        return (self.var_h0, self.var_h1, self.var_h2, self.var_h3)


def interaction_hamiltonian(cutoff: FockCutoff) -> Operator:
    """H_int = a_x^dag a_y^dag + a_x a_y (coupling absorbed into kt)."""
    pair = pair_annihilation(cutoff)
    return pair + pair.dag()


@lru_cache(maxsize=8)
def _spectral_blocks(
    d_x: int, d_y: int,
) -> tuple[tuple[np.ndarray, np.ndarray, np.ndarray], ...]:
    """Eigendecomposition of H_int per imbalance sector.

    Each sector delta = n_x - n_y is spanned by |lo_x + m, lo_y + m> and
    H_int restricts to a real symmetric tridiagonal matrix with zero
    diagonal and off-diagonals sqrt((lo_x+m+1)(lo_y+m+1)).
    """
    blocks = []
    for delta in range(-(d_y - 1), d_x):
        lo_x, lo_y = max(delta, 0), max(-delta, 0)
        length = min(d_x - lo_x, d_y - lo_y)
        m = np.arange(length)
        flat = (lo_x + m) * d_y + (lo_y + m)
        if length == 1:
            eigvals = np.zeros(1)
            eigvecs = np.ones((1, 1))
        else:
            off = np.sqrt((lo_x + m[:-1] + 1.0) * (lo_y + m[:-1] + 1.0))
            eigvals, eigvecs = eigh_tridiagonal(np.zeros(length), off)
        for arr in (flat, eigvals, eigvecs):
            arr.setflags(write=False)
        blocks.append((flat, eigvals, eigvecs))
    return tuple(blocks)


def _apply_propagator_vector(
    psi: np.ndarray, cutoff: FockCutoff, rate: float,
) -> np.ndarray:
    out = np.zeros(cutoff.dim, dtype=complex)
    for flat, eigvals, eigvecs in _spectral_blocks(cutoff.d_x, cutoff.d_y):
        amps = eigvecs.T @ psi[flat]
        out[flat] = eigvecs @ (np.exp(-1j * rate * eigvals) * amps)
    # rounding drift only: the truncated generator is exactly unitary
    return out / np.linalg.norm(out)


def _propagator_matrix(cutoff: FockCutoff, rate: float) -> np.ndarray:
    u = np.zeros((cutoff.dim, cutoff.dim), dtype=complex)
    for flat, eigvals, eigvecs in _spectral_blocks(cutoff.d_x, cutoff.d_y):
        u[np.ix_(flat, flat)] = \
            (eigvecs * np.exp(-1j * rate * eigvals)) @ eigvecs.T
    return u


def _evolve_unchecked(state: QuantumState, config: DpaConfig) -> QuantumState:
    rate = 2.0 * config.kt
    cut = config.cutoff
    if state.cutoff != cut:
        raise ValueError("state and config cutoffs differ")
    if state.vector is not None:
        return QuantumState.from_vector(
            cut, _apply_propagator_vector(state.vector, cut, rate))
    u = _propagator_matrix(cut, rate)
    rho = u @ state.density @ u.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return QuantumState.from_density(cut, rho)


def evolve(state: QuantumState, config: DpaConfig) -> QuantumState:
    """Apply exp(-i * 2kt * H_int); certify truncation afterwards.

    Raises TruncationError (carrying the measured leakage) when the
    evolved state holds more than config.leakage_tol of its population
    within EVOLUTION_MARGIN levels of either cutoff; enlarge the cutoff
    and retry in that case.
    """
    result = _evolve_unchecked(state, config)
    leakage = boundary_leakage(result, EVOLUTION_MARGIN)
    if leakage > config.leakage_tol:
        raise TruncationError(leakage, config.cutoff)
    return result


def heisenberg_moments(n_x: int, n_y: int, kt: float) -> MomentReport:
    """Closed-form hidden-set moments for the initial Fock state |n_x, n_y>.

    Normal-ordering the Bogoliubov-transformed modes gives, with
    c4 = cosh 4kt, s4 = sinh 4kt and K = 1 + n_x + n_y + 2 n_x n_y:

        <H0> = (n_x + n_y) c4 + 2 sinh^2 2kt      Var H0 = s4^2 K
        <H1> = n_y - n_x                          Var H1 = 0
        <H2> = 0                                  Var H2 = K
        <H3> = -(1 + n_x + n_y) s4                Var H3 = c4^2 K

    No truncation is involved; the report always carries zero leakage.
    """
    if n_x < 0 or n_y < 0 or n_x != int(n_x) or n_y != int(n_y):
        raise ValueError("occupations must be non-negative integers")
    c4 = math.cosh(4.0 * kt)
    s4 = math.sinh(4.0 * kt)
    pair_var = 1.0 + n_x + n_y + 2.0 * n_x * n_y
    return MomentReport(
        kt=kt,
        mean_h0=(n_x + n_y) * c4 + 2.0 * math.sinh(2.0 * kt) ** 2,
        mean_h1=float(n_y - n_x),
        mean_h2=0.0,
        mean_h3=-(1.0 + n_x + n_y) * s4,
        var_h0=s4**2 * pair_var,
        var_h1=0.0,
        var_h2=pair_var,
        var_h3=c4**2 * pair_var,
        leakage=0.0,
    )


def thermal_heisenberg_moments(
    nbar_x: float, nbar_y: float, kt: float,
) -> MomentReport:
    """Closed-form moments for independent thermal modes.

    Mixing the Fock-state forms over geometric occupation laws with
    means nbar_x, nbar_y adds the classical occupation spread
    v_m = nbar_m (1 + nbar_m) to each variance through the usual
    law-of-total-variance split.
    """
    if nbar_x < 0 or nbar_y < 0:
        raise ValueError("thermal occupations must be non-negative")
    c4 = math.cosh(4.0 * kt)
    s4 = math.sinh(4.0 * kt)
    v_x = nbar_x * (1.0 + nbar_x)
    v_y = nbar_y * (1.0 + nbar_y)
    pair_var = 1.0 + nbar_x + nbar_y + 2.0 * nbar_x * nbar_y
    return MomentReport(
        kt=kt,
        mean_h0=(nbar_x + nbar_y) * c4 + 2.0 * math.sinh(2.0 * kt) ** 2,
        mean_h1=float(nbar_y - nbar_x),
        mean_h2=0.0,
        mean_h3=-(1.0 + nbar_x + nbar_y) * s4,
        var_h0=s4**2 * pair_var + c4**2 * (v_x + v_y),
        var_h1=v_x + v_y,
        var_h2=pair_var,
        var_h3=c4**2 * pair_var + s4**2 * (v_x + v_y),
        leakage=0.0,
    )


def _pure_hidden_moments(
    psi: np.ndarray, cutoff: FockCutoff,
) -> tuple[list[float], list[float]]:
    """Means and variances of H0..H3 through two-index array actions."""
    block = psi.reshape(cutoff.d_x, cutoff.d_y)
    n_x = np.arange(cutoff.d_x, dtype=float)[:, None]
    n_y = np.arange(cutoff.d_y, dtype=float)[None, :]
    ladder_weight = np.sqrt((n_x + 1.0) * (n_y + 1.0))

    lowered = np.zeros_like(block)
    lowered[:-1, :-1] = ladder_weight[:-1, :-1] * block[1:, 1:]
    raised = np.zeros_like(block)
    raised[1:, 1:] = ladder_weight[:-1, :-1] * block[:-1, :-1]

    actions = (
        (n_x + n_y) * block,
        (n_y - n_x) * block,
        lowered + raised,
        -1j * (lowered - raised),
    )
    means, variances = [], []
    for action in actions:
        mean = float(np.vdot(block, action).real)
        second = float(np.vdot(action, action).real)
        means.append(mean)
        variances.append(max(second - mean**2, 0.0))
    return means, variances


@lru_cache(maxsize=8)
def _cached_hidden(d_x: int, d_y: int) -> HiddenSet:
    return build_hidden(FockCutoff(d_x, d_y))


def oracle_moments(state: QuantumState, config: DpaConfig) -> MomentReport:
    """Brute-force moments: evolve, then measure the hidden set.

    Never raises on truncation trouble; the report is returned with
    valid=False and the measured leakage so sweeps can flag the row and
    continue.
    """
    evolved = _evolve_unchecked(state, config)
    leakage = boundary_leakage(evolved, EVOLUTION_MARGIN)
    if evolved.vector is not None:
        means, variances = _pure_hidden_moments(evolved.vector, config.cutoff)
    else:
        hidden = _cached_hidden(config.cutoff.d_x, config.cutoff.d_y)
        means = [float(expectation(op, evolved).real)
                 for op in hidden.as_tuple()]
        variances = [variance(op, evolved) for op in hidden.as_tuple()]
    return MomentReport(
        kt=config.kt,
        mean_h0=means[0], mean_h1=means[1],
        mean_h2=means[2], mean_h3=means[3],
        var_h0=variances[0], var_h1=variances[1],
        var_h2=variances[2], var_h3=variances[3],
        leakage=leakage,
        valid=leakage <= config.leakage_tol,
    )


def suggest_cutoff(n_max: int, kt: float) -> FockCutoff:
    """Per-mode dimension comfortably above the amplified occupation."""
    grown = 10.0 * math.sinh(2.0 * abs(kt)) ** 2
    d = n_max + 1 + math.ceil(grown) + 16
    return FockCutoff(d, d)
