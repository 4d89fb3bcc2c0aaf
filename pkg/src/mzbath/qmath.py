"""Exact qubit density-matrix algebra and quantum-information measures.

All states are 2x2 complex, Hermitian, unit-trace, positive-semidefinite
matrices.  Entropic quantities use base-2 logarithms throughout, so the
completely mixed qubit has entropy exactly 1 bit.

Eigenvalue dust in (-1e-12, 0) is clamped to 0 before any logarithm, and
0*log(0) is defined as 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PositivityError, SupportError, TraceError

TRACE_TOL = 1e-12
EIG_CLAMP = 1e-12
SUPPORT_EIG_TOL = 1e-15
SUPPORT_WEIGHT_TOL = 1e-12

LOG2E = math.log2(math.e)


@dataclass(frozen=True)
class DensityMatrix:
    """Validated qubit state.

    The wrapped array is Hermitian by construction (inputs are
    hermitized as (A + A^dagger)/2), has |trace - 1| <= 1e-12 and
    smallest eigenvalue >= -1e-12.  Instances are immutable; the array
    is marked read-only.
    """

    matrix: np.ndarray

    def __post_init__(self):
        self.matrix.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (sorted descending) and orthonormal eigenvectors
    (columns) of a density matrix."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)


def new_density_matrix(elements) -> DensityMatrix:
    """Validating constructor for a qubit density matrix.

    Args:
        elements: 2x2 array-like of complex entries.  Slightly
            non-Hermitian input (integrator round-off) is hermitized
            as (A + A^dagger)/2 before validation.

    Returns:
        DensityMatrix satisfying all invariants.

    Raises:
        TraceError: if |Tr - 1| > 1e-12.
        PositivityError: if the smallest eigenvalue is below -1e-12.
        ValueError: if the shape is not 2x2.
    """
    a = np.asarray(elements, dtype=complex)
    if a.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {a.shape}")
    h = 0.5 * (a + a.conj().T)
    tr = h[0, 0].real + h[1, 1].real
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceError(f"trace is {tr!r}, must be 1 within {TRACE_TOL}")
    half_gap = math.hypot(0.5 * (h[0, 0].real - h[1, 1].real), abs(h[0, 1]))
    lam_min = 0.5 * tr - half_gap
    if lam_min < -EIG_CLAMP:
        raise PositivityError(
            f"smallest eigenvalue {lam_min!r} is below -{EIG_CLAMP}"
        )
    return DensityMatrix(h)


def eigenvalues2(rho: DensityMatrix) -> tuple[float, float]:
    """Closed-form eigenvalues of a qubit state, (lam_plus, lam_minus).

    Computed as 1/2 +- sqrt((rho00 - rho11)^2/4 + |rho01|^2).  Values in
    (-1e-12, 0) are clamped to 0 and values in (1, 1 + 1e-12) to 1, so
    both lie in [0, 1] and sum to 1 up to round-off.
    """
    m = rho.matrix
    s = math.hypot(0.5 * (m[0, 0].real - m[1, 1].real), abs(m[0, 1]))
    lam_p = 0.5 + s
    lam_m = 0.5 - s
    if -EIG_CLAMP <= lam_m < 0.0:
        lam_m = 0.0
    if 1.0 < lam_p <= 1.0 + EIG_CLAMP:
        lam_p = 1.0
    return lam_p, lam_m


def spectral_decomposition(rho: DensityMatrix) -> SpectralDecomposition:
    """Full eigendecomposition with eigenvalues sorted descending."""
    vals, vecs = np.linalg.eigh(rho.matrix)
    order = np.argsort(vals)[::-1]
    return SpectralDecomposition(vals[order].copy(), vecs[:, order].copy())


def _h_bits(lam: float) -> float:
    """-lam * log2(lam) with 0 log 0 := 0 and clamped dust."""
    if lam <= 0.0:
        return 0.0
    if lam >= 1.0:
        return 0.0
    return -lam * math.log2(lam)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy S(rho) = -Tr[rho log2(rho)] in bits.

    For a qubit S lies in [0, 1]; it is 0 exactly for pure states and 1
    for the completely mixed state.
    """
    lam_p, lam_m = eigenvalues2(rho)
    return _h_bits(lam_p) + _h_bits(lam_m)


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Quantum relative entropy S[rho || sigma] in bits.

    S[rho || sigma] = Tr[rho log2(rho) - rho log2(sigma)].  Finite only
    when the support of rho is contained in the support of sigma; the
    support test treats sigma-eigenvalues below 1e-15 as zero and
    rho-weights below 1e-12 in those eigendirections as zero.

    Returns:
        A value >= -1e-12 (round-off), exactly 0.0 when the two states
        have identical matrices.

    Raises:
        SupportError: if rho has weight above 1e-12 in an
            eigendirection where sigma has eigenvalue below 1e-15.
    """
    if np.array_equal(rho.matrix, sigma.matrix):
        return 0.0
    svals, svecs = np.linalg.eigh(sigma.matrix)
    # weight of rho along each sigma eigendirection
    weights = np.einsum("ij,jk,ki->i", svecs.conj().T, rho.matrix, svecs).real
    weights = np.clip(weights, 0.0, None)
    cross = 0.0
    for s, w in zip(svals, weights):
        if s < SUPPORT_EIG_TOL:
            if w > SUPPORT_WEIGHT_TOL:
                raise SupportError(
                    f"rho has weight {w:.3e} on a sigma null direction "
                    f"(sigma eigenvalue {s:.3e})"
                )
            continue
        cross += w * math.log2(s)
    lam_p, lam_m = eigenvalues2(rho)
    tr_rho_log_rho = -(_h_bits(lam_p) + _h_bits(lam_m))
    return tr_rho_log_rho - cross


def dephase(rho: DensityMatrix) -> DensityMatrix:
    """Project a state onto its diagonal in the reference basis.

    The output diagonal equals the input diagonal exactly; off-diagonal
    entries are exactly zero.
    """
    m = rho.matrix
    return new_density_matrix(
        np.array([[m[0, 0].real, 0.0], [0.0, m[1, 1].real]], dtype=complex)
    )


def distillable_coherence(rho: DensityMatrix) -> float:
    """Distillable coherence C_d(rho) = S(dephased rho) - S(rho) in bits.

    Zero for diagonal states, 1 for the maximally coherent qubit; never
    below -1e-12 (dephasing cannot decrease entropy).
    """
    return von_neumann_entropy(dephase(rho)) - von_neumann_entropy(rho)


def mixedness(rho: DensityMatrix) -> float:
    """Degree of mixedness M = 1 - Tr[rho^2].

    Lies in [0, 1/2] for a qubit: 0 for pure states, 1/2 for the
    completely mixed state.
    """
    m = rho.matrix
    purity = m[0, 0].real ** 2 + m[1, 1].real ** 2 + 2.0 * abs(m[0, 1]) ** 2
    return 1.0 - purity


# -- vectorized helpers over stacked (N, 2, 2) state arrays ------------------


def eigenvalues2_stack(stack: np.ndarray) -> np.ndarray:
    """Closed-form eigenvalue pairs, shape (N, 2), columns (plus, minus)."""
    d = 0.5 * (stack[:, 0, 0].real - stack[:, 1, 1].real)
    s = np.hypot(d, np.abs(stack[:, 0, 1]))
    half = 0.5 * (stack[:, 0, 0].real + stack[:, 1, 1].real)
    lam = np.stack([half + s, half - s], axis=1)
    np.clip(lam, 0.0, 1.0, out=lam)
    return lam


def entropy_bits_stack(lam: np.ndarray) -> np.ndarray:
    """Entropy in bits of each row of eigenvalue (or probability) pairs."""
    with np.errstate(divide="ignore", invalid="ignore"):
        term = np.where(lam > 0.0, -lam * np.log2(np.where(lam > 0.0, lam, 1.0)), 0.0)
    return term.sum(axis=1)
