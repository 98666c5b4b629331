"""Ground-truth plants: the cart-pendulum, its reference trajectory
generator, the bounded bump-distribution measurement noise, and the exact
discrete synthetic plant used to verify the controller.

The cart-pendulum integrates with fixed-step RK4 through the selected
kernel backend (compiled extension when built, pure Python otherwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._backend import BACKEND, kernels

__all__ = [
    "BACKEND",
    "DivergenceError",
    "PendulumParams",
    "PendulumState",
    "NoiseModel",
    "BumpNoiseStream",
    "SyntheticUlmParams",
    "friction_forces",
    "pendulum_accel",
    "rk4_step",
    "rk4_advance",
    "generate_desired_trajectory",
    "synthetic_ulm_plant_step",
]


class DivergenceError(RuntimeError):
    """A simulated trajectory produced a non-finite state."""


@dataclass(frozen=True)
class PendulumParams:
    """Cart-pendulum constants; friction saturates at +-cart_friction /
    +-pend_friction through tanh of the respective rate."""

    cart_mass: float = 1.5
    pend_mass: float = 0.5
    half_length: float = 1.4
    inertia: float = 0.84
    gravity: float = 9.8
    cart_friction: float = 0.028
    pend_friction: float = 0.0032

    def __post_init__(self):
        for name in ("cart_mass", "pend_mass", "half_length", "inertia", "gravity"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("cart_friction", "pend_friction"):
            if getattr(self, name) < 0.0:
                raise ValueError(
                    f"{name} must be non-negative, got {getattr(self, name)}"
                )
        # worst-case determinant of the mass matrix (cos(theta) = +-1)
        m_l = self.pend_mass * self.half_length
        det_min = (self.cart_mass + self.pend_mass) * (
            self.inertia + m_l * self.half_length
        ) - m_l * m_l
        if det_min <= 0.0:
            raise ValueError("mass matrix is not positive definite for all angles")

    def as_tuple(self):
        return (
            self.cart_mass,
            self.pend_mass,
            self.half_length,
            self.inertia,
            self.gravity,
            self.cart_friction,
            self.pend_friction,
        )


@dataclass(frozen=True)
class PendulumState:
    """Cart position/velocity and pendulum angle/rate (angle measured from
    the upward vertical, kept unwrapped)."""

    x: float = 0.0
    theta: float = 0.0
    x_dot: float = 0.0
    theta_dot: float = 0.0

    def __post_init__(self):
        for name in ("x", "theta", "x_dot", "theta_dot"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def as_tuple(self):
        return (self.x, self.theta, self.x_dot, self.theta_dot)


def friction_forces(x_dot: float, theta_dot: float, params: PendulumParams):
    """Saturating friction pair (on the cart, on the pendulum)."""
    return (
        params.cart_friction * math.tanh(x_dot),
        params.pend_friction * math.tanh(theta_dot),
    )


def pendulum_accel(state: PendulumState, force: float, params: PendulumParams):
    """Accelerations (x_ddot, theta_ddot) under a horizontal cart force."""
    m_l = params.pend_mass * params.half_length
    det = (
        (params.cart_mass + params.pend_mass)
        * (params.inertia + m_l * params.half_length)
        - (m_l * math.cos(state.theta)) ** 2
    )
    assert det > 0.0, "mass matrix became singular"
    return kernels.pendulum_accel(*state.as_tuple(), force, *params.as_tuple())


def _check_finite(raw_state, context: str) -> PendulumState:
    if not all(math.isfinite(v) for v in raw_state):
        raise DivergenceError(f"{context} produced a non-finite state")
    return PendulumState(*raw_state)


def rk4_step(
    state: PendulumState, force: float, dt: float, params: PendulumParams
) -> PendulumState:
    """One fixed-step RK4 update with the force held constant over dt."""
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    try:
        raw = kernels.rk4_step(*state.as_tuple(), force, dt, *params.as_tuple())
    except (ValueError, OverflowError) as exc:
        # the pure-Python kernel raises on trig of an infinite angle where
        # the C kernel would return NaN
        raise DivergenceError("rk4_step produced a non-finite state") from exc
    return _check_finite(raw, "rk4_step")


def rk4_advance(
    state: PendulumState,
    force: float,
    dt: float,
    params: PendulumParams,
    substeps: int = 10,
) -> PendulumState:
    """Advance one control period with zero-order-hold force, integrating
    with ``substeps`` internal RK4 steps."""
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if substeps < 1:
        raise ValueError(f"substeps must be >= 1, got {substeps}")
    try:
        raw = kernels.rk4_advance(
            *state.as_tuple(), force, dt, substeps, *params.as_tuple()
        )
    except (ValueError, OverflowError) as exc:
        raise DivergenceError("rk4_advance produced a non-finite state") from exc
    return _check_finite(raw, "rk4_advance")


def _desired_theta_samples(
    params: PendulumParams,
    initial: PendulumState,
    count: int,
    dt: float,
    substeps: int = 10,
) -> np.ndarray:
    """First ``count`` angle samples of the reference-generating loop."""
    thetas = np.empty(count)
    if count == 0:
        return thetas
    raw = initial.as_tuple()
    thetas[0] = raw[1]
    for k in range(1, count):
        try:
            raw = kernels.trajgen_advance(*raw, dt, substeps, *params.as_tuple())
        except (ValueError, OverflowError) as exc:
            raise DivergenceError("trajectory generation diverged") from exc
        if not all(math.isfinite(v) for v in raw):
            raise DivergenceError("trajectory generation diverged")
        thetas[k] = raw[1]
    return thetas


def generate_desired_trajectory(
    params: PendulumParams,
    initial: PendulumState,
    horizon: float,
    dt: float,
    substeps: int = 10,
) -> np.ndarray:
    """Reference angle trajectory as an (n, 2) array of (t, theta) rows.

    The truth model is driven by a weak state feedback force (re-evaluated
    continuously, not held), which for the default constants produces a
    swing whose amplitude decays slowly through friction.  The number of
    rows is floor(horizon/dt) + 1.
    """
    if not horizon > 0.0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    count = int(math.floor(horizon / dt + 1e-9)) + 1
    thetas = _desired_theta_samples(params, initial, count, dt, substeps)
    t = np.arange(count) * dt
    return np.column_stack([t, thetas])


@dataclass(frozen=True)
class NoiseModel:
    """Bump-distribution measurement noise of the given total support
    width; ``seed`` defaults to the experiment seed when omitted."""

    width: float = 0.018
    seed: Optional[int] = None

    def __post_init__(self):
        if not self.width > 0.0:
            raise ValueError(f"width must be positive, got {self.width}")


class BumpNoiseStream:
    """Seeded stream of bump-distributed samples.

    The density is proportional to exp(-1/(1 - (2 s / width)^2)) on the
    open interval (-width/2, width/2) and zero outside, sampled by
    rejection against a uniform envelope; every sample is strictly inside
    the support.
    """

    def __init__(self, width: float, seed: int):
        if not width > 0.0:
            raise ValueError(f"width must be positive, got {width}")
        self.width = width
        self._rng = np.random.Generator(np.random.PCG64(seed))

    def sample(self) -> float:
        while True:
            u = self._rng.uniform(-1.0, 1.0)
            h = self._rng.uniform(0.0, 1.0)
            u2 = u * u
            if u2 >= 1.0:
                continue
            if h < math.exp(1.0 - 1.0 / (1.0 - u2)):
                return 0.5 * self.width * u

    def sample_batch(self, n: int) -> np.ndarray:
        """n samples via vectorized rejection (its own draw pattern; use a
        dedicated stream when mixing with ``sample``)."""
        out = np.empty(0)
        while out.size < n:
            m = max(1024, int(1.8 * (n - out.size)))
            u = self._rng.uniform(-1.0, 1.0, size=m)
            h = self._rng.uniform(0.0, 1.0, size=m)
            u2 = u * u
            ok = u2 < 1.0
            accept = np.zeros(m, dtype=bool)
            accept[ok] = h[ok] < np.exp(1.0 - 1.0 / (1.0 - u2[ok]))
            out = np.concatenate([out, 0.5 * self.width * u[accept]])
        return out[:n]


@dataclass(frozen=True)
class SyntheticUlmParams:
    """Exact second-order discrete plant with a known forcing signal.

    ``y[k+2] = 2 y[k+1] - y[k] + f(k) + G u[k]`` with f either zero, a
    constant, or a sinusoid; the reference is zero or a sinusoid.  This is
    the oracle plant: F is known at every step, so controller identities
    can be checked exactly.
    """

    f_mode: str = "constant"
    f_value: float = 0.0
    f_period: float = 1.0
    y0: float = 0.0
    y1: float = 0.0
    desired_mode: str = "zero"
    desired_amplitude: float = 0.0
    desired_period: float = 1.0

    def __post_init__(self):
        if self.f_mode not in ("zero", "constant", "sine"):
            raise ValueError(f"unknown f_mode {self.f_mode!r}")
        if self.desired_mode not in ("zero", "sine"):
            raise ValueError(f"unknown desired_mode {self.desired_mode!r}")
        if self.f_mode == "sine" and not self.f_period > 0.0:
            raise ValueError("f_period must be positive for a sinusoidal f")
        if self.desired_mode == "sine" and not self.desired_period > 0.0:
            raise ValueError("desired_period must be positive")

    def f_signal(self, k: int, dt: float) -> float:
        if self.f_mode == "zero":
            return 0.0
        if self.f_mode == "constant":
            return self.f_value
        return self.f_value * math.sin(2.0 * math.pi * k * dt / self.f_period)

    def desired_samples(self, count: int, dt: float) -> np.ndarray:
        if self.desired_mode == "zero":
            return np.zeros(count)
        t = np.arange(count) * dt
        return self.desired_amplitude * np.sin(2.0 * math.pi * t / self.desired_period)


def synthetic_ulm_plant_step(y_k, y_kp1, f_k, g_k, u_k):
    """Exact discrete double-integrator step:
    ``y[k+2] = 2 y[k+1] - y[k] + f[k] + G[k] u[k]``."""
    y_k = np.atleast_1d(np.asarray(y_k, dtype=float))
    y_kp1 = np.atleast_1d(np.asarray(y_kp1, dtype=float))
    f_k = np.atleast_1d(np.asarray(f_k, dtype=float))
    if np.isscalar(g_k) or np.ndim(g_k) == 0:
        input_effect = float(g_k) * np.atleast_1d(np.asarray(u_k, dtype=float))
    else:
        input_effect = np.asarray(g_k, dtype=float) @ np.atleast_1d(
            np.asarray(u_k, dtype=float)
        )
    return 2.0 * y_kp1 - y_k + f_k + input_effect
