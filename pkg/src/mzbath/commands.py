"""Experiment orchestration behind the command-line subcommands.

Each run_* function computes one experiment from a RunConfig and writes
its CSV (and optional SVG) artifacts.  They are plain functions so the
self-test suite can drive them directly; the cli module only parses
arguments and maps exceptions to exit codes.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .bath import (
    BathParameters,
    MarkovParameters,
    mean_occupation,
    stationary_coefficients,
    transient_coefficients,
)
from .config import RunConfig
from .dynamics import LindbladCoefficients, evolve_analytic, evolve_rk4
from .errors import CrossCheckError
from .interferometer import (
    momentum_distribution,
    position_distribution,
    prepare_after_bs1,
)
from .output import config_comments, write_csv, write_svg
from .qmath import distillable_coherence, mixedness
from .thermo import asymptotic_entropy, remained_entropy, thermo_series

#: evolve aborts (exit 4) when the integrator disagrees with the closed
#: form beyond this bound anywhere along the run.
EVOLVE_CROSSCHECK_TOL = 1e-6


def _comments(config: RunConfig, command: str) -> list[str]:
    return config_comments(__version__, command, config.resolved())


def _out_path(config: RunConfig, default_name: str) -> Path:
    if config.out is None:
        return Path(default_name)
    p = Path(config.out)
    if p.is_dir() or str(config.out).endswith(("/", "\\")):
        return p / default_name
    return p


def run_coeffs(config: RunConfig, out: Optional[Path] = None) -> Path:
    """Transient damping coefficients and their stationary values.

    Columns: t, delta, gamma, delta_plus_gamma, delta_minus_gamma,
    stationary_delta, stationary_gamma.  The delta/gamma columns are raw
    kernel quadratures (linear in the coupling); the stationary columns
    carry the second-order normalization, so only ratios and shapes are
    directly comparable between the two groups.
    """
    times = config.coeffs_grid()
    coeffs = transient_coefficients(config.bath, times)
    s_delta, s_gamma = stationary_coefficients(config.bath)
    rows = [
        (t, d, g, d + g, d - g, s_delta, s_gamma)
        for t, d, g in zip(coeffs.times, coeffs.delta, coeffs.gamma)
    ]
    path = out if out is not None else _out_path(config, "coeffs.csv")
    return write_csv(
        path,
        _comments(config, "coeffs"),
        (
            "t",
            "delta",
            "gamma",
            "delta_plus_gamma",
            "delta_minus_gamma",
            "stationary_delta",
            "stationary_gamma",
        ),
        rows,
    )


def run_evolve(config: RunConfig, out: Optional[Path] = None) -> Path:
    """Relaxation of the post-splitter state under the Markov generator.

    Columns: t, eta, rho11_re, rho12_re, rho12_im, rho22_re, entropy,
    entropy_change, coherence, mixedness, heat_rate,
    numeric_vs_analytic_maxerr.  Matrix indices are 1-based, so rho11 is
    the ground-ground entry.  The last column is the elementwise gap
    between the integrator and the closed form at that time; the run
    aborts if it ever exceeds 1e-6.
    """
    markov = config.markov
    times = config.evolve_grid()
    rho0 = prepare_after_bs1(config.phase)
    trajectory = evolve_rk4(
        rho0, LindbladCoefficients.from_markov(markov), times
    )
    series = thermo_series(trajectory, config.bath.system_frequency)

    stack = trajectory.as_array()
    q = 2.0 * markov.occupation + 1.0
    eta = np.exp(-markov.rate * q * times)
    p_inf = markov.occupation / q
    analytic = np.empty_like(stack)
    analytic[:, 1, 1] = p_inf + (rho0.matrix[1, 1].real - p_inf) * eta * eta
    analytic[:, 0, 0] = 1.0 - analytic[:, 1, 1].real
    analytic[:, 0, 1] = eta * rho0.matrix[0, 1]
    analytic[:, 1, 0] = analytic[:, 0, 1].conj()
    maxerr = np.abs(stack - analytic).max(axis=(1, 2))
    worst = float(maxerr.max())
    if worst > EVOLVE_CROSSCHECK_TOL:
        raise CrossCheckError(
            f"integrator disagrees with the closed form by {worst:.3e} "
            f"(> {EVOLVE_CROSSCHECK_TOL:g})"
        )

    rows = [
        (
            times[i],
            float(eta[i]),
            stack[i, 0, 0].real,
            stack[i, 0, 1].real,
            stack[i, 0, 1].imag,
            stack[i, 1, 1].real,
            float(series.entropy[i]),
            float(series.entropy_change[i]),
            float(series.distillable_coherence[i]),
            float(series.mixedness[i]),
            float(series.heat_rate[i]),
            float(maxerr[i]),
        )
        for i in range(len(times))
    ]
    path = out if out is not None else _out_path(config, "evolve.csv")
    return write_csv(
        path,
        _comments(config, "evolve"),
        (
            "t",
            "eta",
            "rho11_re",
            "rho12_re",
            "rho12_im",
            "rho22_re",
            "entropy",
            "entropy_change",
            "coherence",
            "mixedness",
            "heat_rate",
            "numeric_vs_analytic_maxerr",
        ),
        rows,
    )


def run_interfere(
    config: RunConfig, out: Optional[Path] = None, svg: Optional[bool] = None
) -> list[Path]:
    """Pointer distributions at the snapshot times.

    Long-format columns: snapshot_t, axis (X|P), coordinate, density,
    phase_phi.  With SVG output enabled, one self-contained plot per
    (snapshot, axis) is written next to the CSV, holding one polyline
    per phase with exactly the CSV coordinates.
    """
    w = config.bath.system_frequency
    x0 = config.pointer_separation
    x_grid = np.linspace(-2.0 * x0, 2.0 * x0, 801)
    p_scale = math.sqrt(w)
    p_grid = np.linspace(-8.0 * p_scale, 8.0 * p_scale, 1001)

    rows = []
    panels: dict[tuple[float, str], list[tuple[str, np.ndarray, np.ndarray]]] = {}
    for t in config.snapshots:
        for phi in config.phases:
            icfg = config.interferometer_config(phase=phi)
            pos = position_distribution(icfg, t, x_grid)
            mom = momentum_distribution(icfg, t, p_grid)
            for axis, dist in (("X", pos), ("P", mom)):
                for c, dens in zip(dist.abscissa, dist.density):
                    rows.append((t, axis, float(c), float(dens), phi))
                panels.setdefault((t, axis), []).append(
                    (f"phi={phi:.6g}", dist.abscissa, dist.density)
                )

    csv_path = out if out is not None else _out_path(config, "interfere.csv")
    written = [
        write_csv(
            csv_path,
            _comments(config, "interfere"),
            ("snapshot_t", "axis", "coordinate", "density", "phase_phi"),
            rows,
        )
    ]
    if svg if svg is not None else config.svg:
        for idx, t in enumerate(config.snapshots):
            for axis in ("X", "P"):
                svg_path = csv_path.with_name(
                    f"{csv_path.stem}_t{idx}_{axis}.svg"
                )
                written.append(
                    write_svg(
                        svg_path,
                        f"{axis} distribution at t = {t:.6g} s",
                        "position X" if axis == "X" else "momentum P",
                        "probability density",
                        panels[(t, axis)],
                    )
                )
    return written


def sweep_rows(config: RunConfig) -> tuple[tuple[str, ...], list[tuple]]:
    """Header and rows of the parameter sweep, without file output.

    Axes: omega_over_T (sweep values are W/T in s^-1 K^-1), temperature
    (kelvin), or time (seconds; the coherence column is evaluated at the
    row's own time).  Every row reports the occupation, asymptotic and
    remained entropies, the coherence of the bath-evolved state, the
    asymptotic mixedness, and the residual fringe visibility 1/(2n+1).
    """
    bath = config.bath
    w = bath.system_frequency
    values = config.sweep_value_list()

    def n_bar_for(value: float) -> float:
        if config.sweep_axis == "time":
            return mean_occupation(bath)
        temperature = w / value if config.sweep_axis == "omega_over_T" else value
        return mean_occupation(
            BathParameters(
                temperature=temperature,
                cutoff=bath.cutoff,
                coupling=bath.coupling,
                system_frequency=w,
            )
        )

    gamma_rate = config.markov.rate

    def coherence_at(n_bar: float, t: float) -> float:
        markov = MarkovParameters(rate=gamma_rate, occupation=n_bar)
        rho = evolve_analytic(prepare_after_bs1(config.phase), markov, t)
        return distillable_coherence(rho)

    if config.sweep_axis == "time":
        cd_headers = ("C_d_at_t",)
    else:
        cd_headers = tuple(
            f"C_d_at_{format(t, '.6g')}s" for t in config.coherence_times
        )
    header = (
        ("sweep_value", "n_bar", "S_inf", "S_rem")
        + cd_headers
        + ("M_inf", "residual_visibility")
    )

    rows = []
    for value in values:
        n_bar = n_bar_for(float(value))
        gibbs_mix = mixedness(
            evolve_analytic(
                prepare_after_bs1(config.phase),
                MarkovParameters(rate=gamma_rate, occupation=n_bar),
                math.inf,
            )
        )
        if config.sweep_axis == "time":
            cds = (coherence_at(n_bar, float(value)),)
        else:
            cds = tuple(coherence_at(n_bar, t) for t in config.coherence_times)
        rows.append(
            (float(value), n_bar, asymptotic_entropy(n_bar), remained_entropy(n_bar))
            + cds
            + (gibbs_mix, 1.0 / (2.0 * n_bar + 1.0))
        )
    return header, rows


def run_sweep(config: RunConfig, out: Optional[Path] = None) -> Path:
    """Write the parameter sweep CSV (see sweep_rows)."""
    header, rows = sweep_rows(config)
    path = out if out is not None else _out_path(config, "sweep.csv")
    return write_csv(path, _comments(config, "sweep"), header, rows)
