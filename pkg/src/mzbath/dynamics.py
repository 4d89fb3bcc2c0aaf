"""Two-level dissipative dynamics: generator, propagators, fixed point.

The oscillator is truncated to its lowest two levels, with lowering
operator a = |0><1| (counter-rotating a^2, a^dag^2 terms dropped), so the
damping generator

    d(rho)/dt = -(delta+gamma)/2 [a'a rho - 2 a rho a' + rho a'a]
                -(delta-gamma)/2 [a a' rho - 2 a' rho a + rho a a']

closes on 2x2 matrices.  In the Markov limit the coefficients are
delta = Gamma*(2*n_bar + 1) and gamma = Gamma, the analytic solution is
available in closed form, and the Gibbs state

    diag((n_bar+1)/(2*n_bar+1), n_bar/(2*n_bar+1))

is the unique fixed point.  Coherences decay with the factor
eta = exp(-Gamma * t * (2*n_bar + 1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .bath import MarkovParameters, TransientCoefficients
from .errors import CrossCheckError, PositivityError, StepSizeError
from .qmath import DensityMatrix, new_density_matrix

#: eta values whose exact magnitude underflows are clamped to 0.
ETA_UNDERFLOW = 1e-300

#: grid-step stability/accuracy bound: h <= STEP_BOUND / (delta + gamma)
STEP_BOUND = 0.01

#: default step used by grid builders: h = STEP_DEFAULT / (delta + gamma)
STEP_DEFAULT = 0.005

_TRAJECTORY_TRACE_TOL = 1e-9
_TRAJECTORY_EIG_TOL = 1e-9


@dataclass(frozen=True)
class LindbladCoefficients:
    """Damping-generator coefficient pair (delta, gamma), in s^-1."""

    delta: float
    gamma: float

    @classmethod
    def from_markov(cls, markov: MarkovParameters) -> "LindbladCoefficients":
        """Markov specialization delta = Gamma*(2 n_bar + 1), gamma = Gamma."""
        return cls(
            delta=markov.rate * (2.0 * markov.occupation + 1.0),
            gamma=markov.rate,
        )

    @property
    def is_lindblad_type(self) -> bool:
        """True when delta +- gamma >= 0 (completely positive generator).
        A violation is flagged by this property, never fatal."""
        return self.delta + self.gamma >= 0.0 and self.delta - self.gamma >= 0.0


CoefficientSource = Union[
    LindbladCoefficients,
    TransientCoefficients,
    Callable[[float], LindbladCoefficients],
]


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered states on a strictly increasing grid.

    Every stored state satisfies the DensityMatrix invariants; the trace
    drift accumulated before the end-of-run renormalization is recorded
    in max_trace_drift and kept below 1e-9.
    """

    times: np.ndarray
    states: tuple[DensityMatrix, ...]
    max_trace_drift: float = 0.0

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states must have equal lengths")
        self.times.setflags(write=False)

    def as_array(self) -> np.ndarray:
        """Stacked (N, 2, 2) complex array of the states."""
        return np.stack([s.matrix for s in self.states])


@dataclass(frozen=True)
class GibbsState:
    """Thermal fixed point of the Markov generator.

    The two-level weights are diag((n_bar+1)/(2n_bar+1), n_bar/(2n_bar+1));
    beta and the free energy F refer to the ladder Hamiltonian with level
    spacing equal to the system frequency (beta in s with hbar = 1, F in
    s^-1, fixed by normalizing the two Boltzmann weights).
    """

    occupation: float
    matrix: DensityMatrix
    inverse_temperature: float
    free_energy: float


def _coefficients_at(source: CoefficientSource, t: float) -> tuple[float, float]:
    if isinstance(source, LindbladCoefficients):
        return source.delta, source.gamma
    if isinstance(source, TransientCoefficients):
        return source.at(t)
    c = source(t)
    return c.delta, c.gamma


def lindblad_rhs(rho, coeffs: LindbladCoefficients) -> np.ndarray:
    """Time derivative of a state under the two-level damping generator.

    With a = |0><1| the generator reduces elementwise to

        d rho00/dt = +(delta+gamma) rho11 - (delta-gamma) rho00
        d rho11/dt = -(delta+gamma) rho11 + (delta-gamma) rho00
        d rho01/dt = -delta rho01          (and conjugate for rho10)

    which is exactly the operator expression above; the result is
    traceless by construction and Hermitian for Hermitian input.

    Args:
        rho: DensityMatrix or raw 2x2 complex array.
        coeffs: generator coefficients.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    dpg = coeffs.delta + coeffs.gamma
    dmg = coeffs.delta - coeffs.gamma
    d00 = dpg * m[1, 1] - dmg * m[0, 0]
    return np.array(
        [
            [d00, -coeffs.delta * m[0, 1]],
            [-coeffs.delta * m[1, 0], -d00],
        ]
    )


def evolve_rk4(
    rho0: DensityMatrix, coeffs: CoefficientSource, times
) -> Trajectory:
    """Classical fixed-step 4th-order integration over the given grid.

    The grid points are the integration steps.  Every step requires
    h <= 0.01/(delta + gamma) at the coefficient values sampled inside
    the step.  Each state is hermitized ((rho + rho^dagger)/2) and
    checked per step; traces are renormalized at the end of the run and
    the accumulated drift is recorded.

    Raises:
        StepSizeError: if a grid step violates the bound.
        PositivityError: if a state's smallest eigenvalue falls below
            -1e-9 during the run.
    """
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size < 1:
        raise ValueError("times must be a non-empty 1-d grid")
    if t.size > 1 and not np.all(np.diff(t) > 0.0):
        raise ValueError("times must be strictly increasing")

    m = rho0.matrix
    r00 = complex(m[0, 0])
    r01 = complex(m[0, 1])
    r10 = complex(m[1, 0])
    r11 = complex(m[1, 1])

    raw = [(r00, r01, r11)]
    max_drift = abs((r00.real + r11.real) - 1.0)

    def rhs(a00, a01, a10, a11, dpg, dmg, delta):
        d00 = dpg * a11 - dmg * a00
        return d00, -delta * a01, -delta * a10, -d00

    for i in range(t.size - 1):
        h = t[i + 1] - t[i]
        stages = (
            _coefficients_at(coeffs, t[i]),
            _coefficients_at(coeffs, t[i] + 0.5 * h),
            _coefficients_at(coeffs, t[i + 1]),
        )
        for d, g in stages:
            rate = d + g
            if rate > 0.0 and h > STEP_BOUND / rate:
                raise StepSizeError(
                    f"grid step {h:g} exceeds {STEP_BOUND}/(delta+gamma) = "
                    f"{STEP_BOUND / rate:g} at t = {t[i]:g}"
                )
        (d1, g1), (d2, g2), (d3, g3) = stages
        p1, m1 = d1 + g1, d1 - g1
        p2, m2 = d2 + g2, d2 - g2
        p3, m3 = d3 + g3, d3 - g3

        k1 = rhs(r00, r01, r10, r11, p1, m1, d1)
        k2 = rhs(
            r00 + 0.5 * h * k1[0],
            r01 + 0.5 * h * k1[1],
            r10 + 0.5 * h * k1[2],
            r11 + 0.5 * h * k1[3],
            p2, m2, d2,
        )
        k3 = rhs(
            r00 + 0.5 * h * k2[0],
            r01 + 0.5 * h * k2[1],
            r10 + 0.5 * h * k2[2],
            r11 + 0.5 * h * k2[3],
            p2, m2, d2,
        )
        k4 = rhs(
            r00 + h * k3[0],
            r01 + h * k3[1],
            r10 + h * k3[2],
            r11 + h * k3[3],
            p3, m3, d3,
        )
        sixth = h / 6.0
        r00 = r00 + sixth * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        r01 = r01 + sixth * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        r10 = r10 + sixth * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        r11 = r11 + sixth * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3])

        # hermitize
        r01 = 0.5 * (r01 + r10.conjugate())
        r10 = r01.conjugate()
        r00 = complex(r00.real, 0.0)
        r11 = complex(r11.real, 0.0)

        tr = r00.real + r11.real
        drift = abs(tr - 1.0)
        if drift > max_drift:
            max_drift = drift
        if drift > _TRAJECTORY_TRACE_TOL:
            raise CrossCheckError(
                f"trace drifted to {tr!r} at step {i + 1}; integration unstable"
            )
        half_gap = math.hypot(0.5 * (r00.real - r11.real), abs(r01))
        lam_min = 0.5 * tr - half_gap
        if lam_min < -_TRAJECTORY_EIG_TOL:
            raise PositivityError(
                f"state lost positivity at step {i + 1}: min eigenvalue "
                f"{lam_min:.3e}"
            )
        raw.append((r00, r01, r11))

    states = []
    for a00, a01, a11 in raw:
        tr = a00.real + a11.real
        states.append(
            new_density_matrix(
                np.array([[a00 / tr, a01 / tr], [(a01 / tr).conjugate(), a11 / tr]])
            )
        )
    return Trajectory(times=t.copy(), states=tuple(states), max_trace_drift=max_drift)


def decoherence_factor(markov: MarkovParameters, t: float) -> float:
    """Coherence survival factor eta = exp(-Gamma t (2 n_bar + 1)).

    Lies in (0, 1]; values that would underflow below 1e-300 are clamped
    to exactly 0, so fully decohered states become exactly diagonal.
    """
    if t < 0.0:
        raise ValueError("t must be >= 0")
    if markov.rate == 0.0 or t == 0.0:
        return 1.0
    x = markov.rate * t * (2.0 * markov.occupation + 1.0)
    if x > 690.0:  # exp(-x) < 1e-300
        return 0.0
    eta = math.exp(-x)
    return eta if eta >= ETA_UNDERFLOW else 0.0


def evolve_analytic(
    rho0: DensityMatrix, markov: MarkovParameters, t: float
) -> DensityMatrix:
    """Closed-form state after bath contact for time t.

    Coherences scale by eta; the excited population relaxes as
    p_inf + (p(0) - p_inf) * eta^2 with p_inf = n_bar/(2 n_bar + 1).
    At t = 0 the input is returned unchanged; as t -> infinity the state
    tends to the Gibbs fixed point.
    """
    eta = decoherence_factor(markov, t)
    if eta == 1.0:
        return rho0
    n = markov.occupation
    p_inf = n / (2.0 * n + 1.0)
    m = rho0.matrix
    p1 = p_inf + (m[1, 1].real - p_inf) * eta * eta
    off = eta * m[0, 1]
    return new_density_matrix(
        np.array([[1.0 - p1, off], [off.conjugate(), p1]])
    )


def gibbs_state(n_bar: float, system_frequency: float = 1.0) -> GibbsState:
    """Thermal fixed point for a given occupation.

    Args:
        n_bar: mean thermal occupation, >= 0.
        system_frequency: level spacing in s^-1 used for the beta and
            free-energy bookkeeping (the weights depend on n_bar only).
    """
    if n_bar < 0.0:
        raise ValueError("n_bar must be >= 0")
    p1 = n_bar / (2.0 * n_bar + 1.0)
    p0 = 1.0 - p1
    matrix = new_density_matrix(np.array([[p0, 0.0], [0.0, p1]], dtype=complex))
    if n_bar == 0.0:
        beta = math.inf
        free_energy = 0.5 * system_frequency
    else:
        beta = math.log1p(1.0 / n_bar) / system_frequency
        free_energy = 0.5 * system_frequency - math.log1p(
            n_bar / (n_bar + 1.0)
        ) / beta
    return GibbsState(
        occupation=n_bar,
        matrix=matrix,
        inverse_temperature=beta,
        free_energy=free_energy,
    )
