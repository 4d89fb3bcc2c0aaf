"""Ohmic Lorentz-Drude environment and the damping coefficients it induces.

The spectral density is J(w) = (2*g0*w/pi) * L^2/(L^2 + w^2) with cutoff
frequency L and dimensionless coupling g0.  From it the noise and
dissipation kernels are built in the continuum limit,

    kappa(tau) = 2 * int_0^inf J(w) coth(w / 2kT) cos(w tau) dw
    mu(tau)    = 2 * int_0^inf J(w) sin(w tau) dw

and the time-dependent damping coefficients are their running transforms
at the system frequency W,

    delta(t) = int_0^t kappa(tau) cos(W tau) dtau
    gamma(t) = int_0^t mu(tau)    sin(W tau) dtau.

Units: hbar = 1, so every frequency is in s^-1 and the single physical
constant k_B/hbar converts kelvin to s^-1.  The raw quadrature values of
delta(t), gamma(t) carry the normalization of J(w) as written; only their
ratio and shape are compared against the stationary second-order formulas,
whose overall constant (used for the Markov rate) is

    Gamma = g0^2 * W * r^2/(1 + r^2),        r = L / W.

Kernel integrals run over [0, 50*L]; panel widths track both the
Lorentzian scale and the cos/sin oscillation so the composite
Gauss-Legendre rule stays in its fast-convergence regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigError, DomainError, QuadratureError

#: k_B / hbar in s^-1 K^-1 -- the one unit-conversion constant (hbar = 1).
KB_OVER_HBAR = 1.30920e11

#: Upper limit of kernel frequency integrals, in units of the cutoff.
FREQUENCY_CUTOFF_FACTOR = 50.0

#: Absolute/relative tolerance target of the adaptive quadratures.
QUAD_RTOL = 1e-10

_GL_ORDER = 10
_MAX_HALVINGS = 12


@dataclass(frozen=True)
class BathParameters:
    """Physical knobs of the environment.

    temperature       kelvin, >= 0 (0 means a zero-occupation bath)
    cutoff            Lorentz-Drude cutoff L in s^-1, > 0
    coupling          dimensionless effective coupling g0, >= 0
    system_frequency  oscillator frequency W in s^-1, > 0
    """

    temperature: float
    cutoff: float
    coupling: float
    system_frequency: float

    def __post_init__(self):
        for name in ("temperature", "cutoff", "coupling", "system_frequency"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ConfigError(f"bath.{name} must be finite, got {v!r}")
        if self.temperature < 0.0:
            raise ConfigError(
                f"bath.temperature must be >= 0 K, got {self.temperature!r}"
            )
        if self.cutoff <= 0.0:
            raise ConfigError(f"bath.cutoff must be > 0, got {self.cutoff!r}")
        if self.coupling < 0.0:
            raise ConfigError(f"bath.coupling must be >= 0, got {self.coupling!r}")
        if self.system_frequency <= 0.0:
            raise ConfigError(
                f"bath.system_frequency must be > 0, got {self.system_frequency!r}"
            )

    @property
    def cutoff_ratio(self) -> float:
        """r = L / W."""
        return self.cutoff / self.system_frequency

    @property
    def thermal_rate(self) -> float:
        """k_B T / hbar in s^-1 (0 at T = 0)."""
        return KB_OVER_HBAR * self.temperature


@dataclass(frozen=True)
class MarkovParameters:
    """Stationary-limit pair (rate Gamma, occupation n_bar)."""

    rate: float
    occupation: float

    def __post_init__(self):
        if self.rate < 0.0:
            raise ConfigError(f"markov rate must be >= 0, got {self.rate!r}")
        if self.occupation < 0.0:
            raise ConfigError(
                f"markov occupation must be >= 0, got {self.occupation!r}"
            )


@dataclass(frozen=True)
class TransientCoefficients:
    """Time series of the running damping coefficients delta(t), gamma(t).

    All three arrays have equal length; times are strictly increasing and
    the series start at 0 when the grid starts at t = 0 (integral over an
    empty interval).
    """

    times: np.ndarray
    delta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        if not (len(self.times) == len(self.delta) == len(self.gamma)):
            raise ValueError("times, delta, gamma must have equal lengths")
        self.times.setflags(write=False)
        self.delta.setflags(write=False)
        self.gamma.setflags(write=False)

    def at(self, t: float) -> tuple[float, float]:
        """Linearly interpolated (delta, gamma) at time t."""
        return (
            float(np.interp(t, self.times, self.delta)),
            float(np.interp(t, self.times, self.gamma)),
        )


def spectral_density(omega, bath: BathParameters):
    """Ohmic spectral density with Lorentz-Drude cutoff.

    J(w) = (2*g0*w/pi) * L^2/(L^2 + w^2); vanishes at w = 0, peaks at
    w = L, falls off as 1/w beyond.  Accepts scalars or arrays.

    Raises:
        DomainError: for negative frequencies.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0.0):
        raise DomainError("spectral density is defined for omega >= 0")
    lam2 = bath.cutoff * bath.cutoff
    j = (2.0 * bath.coupling * w / math.pi) * lam2 / (lam2 + w * w)
    return float(j) if np.isscalar(omega) else j


def mean_occupation(bath: BathParameters) -> float:
    """Bose-Einstein occupation n_bar = 1/(e^{W/kT} - 1) at the system
    frequency; 0 at T = 0."""
    if bath.temperature == 0.0:
        return 0.0
    x = bath.system_frequency / bath.thermal_rate
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def markov_parameters(bath: BathParameters) -> MarkovParameters:
    """Stationary (Gamma, n_bar) of the Markovian limit."""
    r = bath.cutoff_ratio
    rate = bath.coupling**2 * bath.system_frequency * r * r / (1.0 + r * r)
    return MarkovParameters(rate=rate, occupation=mean_occupation(bath))


def _coth_half(bath: BathParameters) -> float:
    """coth(W / 2kT), with the T = 0 limit equal to 1."""
    if bath.temperature == 0.0:
        return 1.0
    x = bath.system_frequency / (2.0 * bath.thermal_rate)
    if x > 350.0:
        return 1.0
    return 1.0 / math.tanh(x)


def stationary_coefficients(bath: BathParameters) -> tuple[float, float]:
    """Long-time (delta, gamma) to second order in the coupling:
    delta = Gamma * coth(W/2kT), gamma = Gamma."""
    rate = markov_parameters(bath).rate
    return rate * _coth_half(bath), rate


# -- kernel quadrature --------------------------------------------------------


@lru_cache(maxsize=8)
def _gl_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights mapped to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def _panel_grid(a: float, b: float, width: float, order: int):
    """Composite-GL abscissae and weights over [a, b] with panels of at
    most the given width."""
    n_panels = max(1, math.ceil((b - a) / width))
    edges = np.linspace(a, b, n_panels + 1)
    h = np.diff(edges)
    x01, w01 = _gl_nodes(order)
    nodes = (edges[:-1, None] + h[:, None] * x01[None, :]).ravel()
    weights = (h[:, None] * w01[None, :]).ravel()
    return nodes, weights


def _occupation_weight(w: np.ndarray, thermal_rate: float) -> np.ndarray:
    """w * coth(w / 2kT), evaluated stably (limit 2kT at w -> 0); equals
    w itself at T = 0."""
    if thermal_rate == 0.0:
        return w
    y = w / (2.0 * thermal_rate)
    out = np.empty_like(w)
    small = y < 1e-8
    out[small] = 2.0 * thermal_rate * (1.0 + y[small] ** 2 / 3.0)
    ys = y[~small]
    out[~small] = w[~small] / np.tanh(np.minimum(ys, 350.0))
    return out


def _kernel_batch(
    taus: np.ndarray, bath: BathParameters, kind: str, rtol: float = QUAD_RTOL
) -> np.ndarray:
    """Evaluate the noise ('kappa') or dissipation ('mu') kernel on a
    batch of tau values with one shared adaptive frequency grid.

    The integrand oscillates as cos/sin(w*tau), so the base panel width
    is held below a quarter period of the fastest oscillation in the
    batch and below half the Lorentzian scale; the composite rule is
    then refined by halving until two successive estimates agree.
    """
    taus = np.asarray(taus, dtype=float)
    if np.any(taus < 0.0):
        raise DomainError("kernels are defined for tau >= 0")
    lam = bath.cutoff
    upper = FREQUENCY_CUTOFF_FACTOR * lam
    tau_max = float(taus.max()) if taus.size else 0.0
    width = lam / 2.0 if tau_max == 0.0 else min(lam / 2.0, math.pi / (2.0 * tau_max))
    pref = 2.0 * (2.0 * bath.coupling / math.pi) * lam * lam

    def estimate(panel_width: float) -> np.ndarray:
        nodes, weights = _panel_grid(0.0, upper, panel_width, _GL_ORDER)
        lorentz = weights / (lam * lam + nodes * nodes)
        if kind == "kappa":
            envelope = lorentz * _occupation_weight(nodes, bath.thermal_rate)
            osc = np.cos(np.outer(taus, nodes))
        else:
            envelope = lorentz * nodes
            osc = np.sin(np.outer(taus, nodes))
        return pref * (osc @ envelope)

    est = estimate(width)
    scale = max(abs(bath.coupling) * lam, 1e-300)
    for _ in range(_MAX_HALVINGS):
        width *= 0.5
        new = estimate(width)
        err = np.max(np.abs(new - est))
        tol = rtol * max(float(np.max(np.abs(new))), 1e-6 * scale)
        if err <= tol:
            return new
        est = new
    raise QuadratureError(
        f"kernel quadrature did not reach rtol={rtol} after "
        f"{_MAX_HALVINGS} refinements (residual {err:.3e})"
    )


def noise_kernel(tau: float, bath: BathParameters) -> float:
    """Noise kernel kappa(tau) = 2 int_0^inf J(w) coth(w/2kT) cos(w tau) dw.

    Raises:
        QuadratureError: if the adaptive integral fails its tolerance.
        DomainError: for tau < 0.
    """
    return float(_kernel_batch(np.array([tau]), bath, "kappa")[0])


def dissipation_kernel(tau: float, bath: BathParameters) -> float:
    """Dissipation kernel mu(tau) = 2 int_0^inf J(w) sin(w tau) dw.

    Temperature-independent; mu(0) = 0.
    """
    return float(_kernel_batch(np.array([tau]), bath, "mu")[0])


# -- transient coefficients ---------------------------------------------------


def _segment_pair(
    bath: BathParameters, a: float, b: float, width: float, rtol: float
) -> tuple[float, float]:
    """One composite-GL pass of (kappa*cosW, mu*sinW) over [a, b]."""
    nodes, weights = _panel_grid(a, b, width, _GL_ORDER)
    kappa = _kernel_batch(nodes, bath, "kappa", rtol=0.1 * rtol)
    mu = _kernel_batch(nodes, bath, "mu", rtol=0.1 * rtol)
    w_t = bath.system_frequency
    d = float(np.dot(weights, kappa * np.cos(w_t * nodes)))
    g = float(np.dot(weights, mu * np.sin(w_t * nodes)))
    return d, g


def transient_coefficients(
    bath: BathParameters, times, rtol: float = QUAD_RTOL
) -> TransientCoefficients:
    """Cumulative quadrature of the kernels against cos(W tau), sin(W tau).

    Args:
        bath: environment parameters.
        times: strictly increasing grid with times[0] >= 0.

    Returns:
        TransientCoefficients with delta(t), gamma(t) at each grid time;
        delta(0) = gamma(0) = 0.

    Raises:
        QuadratureError: if any segment fails to converge.
        ValueError: for a malformed grid.
    """
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size < 1:
        raise ValueError("times must be a non-empty 1-d grid")
    if t[0] < 0.0:
        raise ValueError("times must start at or after 0")
    if t.size > 1 and not np.all(np.diff(t) > 0.0):
        raise ValueError("times must be strictly increasing")

    w_t = bath.system_frequency
    max_width = min(math.pi / (4.0 * w_t), math.pi / (4.0 * bath.cutoff))
    # convention-consistent magnitude of the stationary plateau, used as
    # the absolute floor of the convergence test for the early segments
    j_at_w = spectral_density(w_t, bath)
    scale = max(math.pi * j_at_w * _coth_half(bath), 1e-300)

    edges = t if t[0] == 0.0 else np.concatenate(([0.0], t))
    deltas = [0.0]
    gammas = [0.0]
    for a, b in zip(edges[:-1], edges[1:]):
        width = min(max_width, b - a)
        d_est, g_est = _segment_pair(bath, a, b, width, rtol)
        converged = False
        for _ in range(_MAX_HALVINGS):
            width *= 0.5
            d_new, g_new = _segment_pair(bath, a, b, width, rtol)
            tol = rtol * max(abs(d_new), abs(g_new), 1e-3 * scale * (b - a))
            if abs(d_new - d_est) <= tol and abs(g_new - g_est) <= tol:
                converged = True
                d_est, g_est = d_new, g_new
                break
            d_est, g_est = d_new, g_new
        if not converged:
            raise QuadratureError(
                f"transient-coefficient segment [{a:g}, {b:g}] did not "
                f"converge to rtol={rtol}"
            )
        deltas.append(deltas[-1] + d_est)
        gammas.append(gammas[-1] + g_est)

    # deltas/gammas hold cumulative values at every edge; drop the t = 0
    # entry when it was prepended rather than requested
    cum_d = np.array(deltas)
    cum_g = np.array(gammas)
    if t[0] > 0.0:
        cum_d = cum_d[1:]
        cum_g = cum_g[1:]
    return TransientCoefficients(times=t.copy(), delta=cum_d, gamma=cum_g)
