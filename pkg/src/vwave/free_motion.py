"""Wave/trajectory relations for uniform rectilinear motion.

The travelling wave is A*cos(omega*(x/v - t)); its moving nodes carry the
particle trajectory, and the amplitude/frequency identities tie the wave
parameters to mass, velocity and energy (including the de Broglie relation
lambda = h / (m v)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .units import Constants


@dataclass(frozen=True)
class FreeParams:
    """Wave and trajectory parameters of a particle moving at constant v."""

    v: float
    m: float
    energy: float
    omega: float
    wavelength: float
    amplitude: float
    k1: float
    k2: float


def free_params(v: float, m: float = 1.0, c: Constants = Constants()) -> FreeParams:
    """Build the parameter set for velocity v and mass m (atomic units)."""
    if v == 0.0:
        raise ValueError("zero velocity: wavelength is undefined")
    if m <= 0.0:
        raise ValueError("mass must be positive")
    energy = 0.5 * m * v**2
    omega = m * v**2 / c.hbar
    wavelength = c.h / (m * abs(v))
    return FreeParams(
        v=v,
        m=m,
        energy=energy,
        omega=omega,
        wavelength=wavelength,
        amplitude=c.hbar,
        k1=m * v**2,
        k2=m,
    )


def wave_value(x, t, p: FreeParams, phase: float = 0.0):
    """Wave amplitude at (x, t).

    ``phase`` = 0 gives the cosine branch; pi/2 recovers the sine branch.
    """
    return p.amplitude * np.cos(p.omega * (np.asarray(x) / p.v - t) + phase)


def node_trajectory(p: FreeParams, branch: int, t: float) -> float:
    """Position of moving node ``branch`` at time t: x = v*(t + (pi/omega)*(branch + 1/2))."""
    return p.v * (t + (math.pi / p.omega) * (branch + 0.5))


def quantized_frequencies(time_offset: float, n_max: int) -> list[float]:
    """Allowed frequencies omega_n = (pi/|C|)*(n + 1/2) for n = 1..n_max."""
    if time_offset == 0.0:
        raise ValueError("zero time offset: base frequency is undefined")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    omega_o = math.pi / abs(time_offset)
    return [omega_o * (n + 0.5) for n in range(1, n_max + 1)]


def space_derivative(x, t, p: FreeParams):
    """Analytic dV/dx of the cosine wave."""
    return -(p.omega / p.v) * p.amplitude * np.sin(p.omega * (np.asarray(x) / p.v - t))


def time_derivative(x, t, p: FreeParams):
    """Analytic dV/dt of the cosine wave."""
    return p.omega * p.amplitude * np.sin(p.omega * (np.asarray(x) / p.v - t))


def gradient_condition_check(p: FreeParams, t: float, branch: int) -> float:
    """Residual of the gradient boundary condition at a node.

    At every node |dV/dx| = (omega/v)*A = k2*v; the sign alternates with node
    parity, so the check compares magnitudes.
    """
    x = node_trajectory(p, branch, t)
    slope = float(space_derivative(x, t, p))
    return abs(abs(slope) - p.k2 * abs(p.v))
