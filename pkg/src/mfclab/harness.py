"""Closed-loop experiment runner, configuration and log formats, metrics.

One run wires measurement noise -> output observer -> ultra-local-model
estimator -> tracking controller -> plant and records every per-step
quantity.  Runs are deterministic given the configuration and seed.

Causality of the wiring differs by plant:

* cart-pendulum: only the current measurement exists at decision time, so
  the second-order law is evaluated one step in arrears (the (k-1, k)
  error pair plays the role of the (k, k+1) pair) and the newest
  reconstructable F value lags two samples;
* synthetic plant: its step-k state is the output pair (y[k], y[k+1]), so
  the law is evaluated at its natural anchor and controller identities
  hold exactly per step.
"""

from __future__ import annotations

import json
import math
import time
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from ._backend import BACKEND
from .controller import (
    AdaptiveInfluence,
    ControllerConfig,
    FixedInfluence,
    influence_gain,
    control_rhs_second_order,
    solve_input,
)
from .core import HolderGainParams, holder_gain
from .observers import OutputObserverConfig, OutputObserverState, fts_observer_step
from .plants import (
    BumpNoiseStream,
    DivergenceError,
    NoiseModel,
    PendulumParams,
    PendulumState,
    SyntheticUlmParams,
    _desired_theta_samples,
    rk4_advance,
    synthetic_ulm_plant_step,
)
from .ulm import UlmConfig, UlmObserverState, reconstruct_f, ulm_predict

__all__ = [
    "CSV_HEADER",
    "ExperimentConfig",
    "RunLog",
    "RunMetrics",
    "demo_config",
    "run_closed_loop",
    "compute_metrics",
    "write_log_csv",
    "read_log_csv",
    "config_to_dict",
    "config_from_dict",
    "write_config",
    "read_config",
]

CSV_HEADER = "t,y_d,y_true,y_meas,y_hat,e,e_o,F_true,F_hat,e_F,s,u,G"

_COLUMNS = (
    "t", "y_d", "y_true", "y_meas", "y_hat", "e", "e_o",
    "f_true", "f_hat", "e_f", "s", "u", "g",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Full reproducibility record of one closed-loop run."""

    plant: Union[PendulumParams, SyntheticUlmParams]
    horizon: float
    sample_rate: float
    observer: OutputObserverConfig
    ulm: UlmConfig
    controller: ControllerConfig
    noise: Optional[NoiseModel]
    initial_truth: PendulumState
    initial_estimates: PendulumState
    seed: int
    allow_unseparated_gains: bool = False

    def __post_init__(self):
        if not self.sample_rate > 0.0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        if self.horizon < 0.0:
            raise ValueError(f"horizon must be non-negative, got {self.horizon}")
        if self.ulm.order_nu != 2 or self.controller.order_nu != 2:
            raise ValueError("the closed-loop harness implements the second-order law")
        obs_gain = self.observer.gain
        separated = (
            self.controller.margin < obs_gain.margin
            and self.controller.exponent < obs_gain.exponent
        )
        if not separated:
            msg = (
                "controller gains do not respect the separation ordering "
                "(margin < observer margin and exponent < observer exponent)"
            )
            if self.allow_unseparated_gains:
                warnings.warn(msg, stacklevel=2)
            else:
                raise ValueError(msg + "; set allow_unseparated_gains to override")

    @property
    def dt(self) -> float:
        return 1.0 / self.sample_rate

    @property
    def n_records(self) -> int:
        if self.horizon == 0.0:
            return 0
        return int(math.floor(self.horizon * self.sample_rate + 1e-9)) + 1


def demo_config(seed: int = 0) -> ExperimentConfig:
    """Built-in benchmark configuration: the noisy cart-pendulum swing
    tracked at 50 Hz for 70 s."""
    return ExperimentConfig(
        plant=PendulumParams(),
        horizon=70.0,
        sample_rate=50.0,
        observer=OutputObserverConfig(
            gain=HolderGainParams(weight=2.1, margin=2.0, exponent=7.0 / 5.0)
        ),
        ulm=UlmConfig(order_nu=2, margin=1.5, exponent=9.0 / 7.0),
        controller=ControllerConfig(
            margin=1.0,
            exponent=11.0 / 9.0,
            coefficients=(0.35,),
            influence_policy=AdaptiveInfluence(base=1.5),
        ),
        noise=NoiseModel(width=0.018),
        initial_truth=PendulumState(x=0.45, theta=-0.14, x_dot=-0.3, theta_dot=0.05),
        initial_estimates=PendulumState(x=0.0, theta=0.102, x_dot=0.0, theta_dot=0.0),
        seed=seed,
    )


@dataclass
class RunLog:
    """Per-step record of one run; column arrays share a common length.

    ``e`` is the truth tracking error y_true - y_d (the controller acts on
    the estimate-based error, whose deviation from ``e`` is ``e_o``);
    ``f_true``/``f_hat`` are the newest truth-reconstructed value of F and
    the estimator output the controller used at that step.
    """

    t: np.ndarray
    y_d: np.ndarray
    y_true: np.ndarray
    y_meas: np.ndarray
    y_hat: np.ndarray
    e: np.ndarray
    e_o: np.ndarray
    f_true: np.ndarray
    f_hat: np.ndarray
    e_f: np.ndarray
    s: np.ndarray
    u: np.ndarray
    g: np.ndarray
    diverged: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.t)


class _LogBuilder:
    def __init__(self):
        self.rows: List[List[float]] = []

    def append(self, *values: float):
        if len(values) != len(_COLUMNS):
            raise AssertionError("log row width mismatch")
        self.rows.append([float(v) for v in values])

    def build(self, diverged: bool, meta: dict) -> RunLog:
        data = (
            np.asarray(self.rows, dtype=float)
            if self.rows
            else np.empty((0, len(_COLUMNS)))
        )
        cols = {name: data[:, i].copy() for i, name in enumerate(_COLUMNS)}
        return RunLog(diverged=diverged, meta=meta, **cols)


def _scalar_influence(policy, feedback_total: float) -> float:
    gain = influence_gain(policy, feedback_total)
    if np.isscalar(gain):
        return float(gain)
    arr = np.asarray(gain, dtype=float)
    if arr.shape != (1, 1):
        raise ValueError("SISO loop needs a scalar (or 1x1) influence gain")
    return float(arr[0, 0])


def run_closed_loop(
    config: ExperimentConfig,
    *,
    oracle_f: bool = False,
    f_hat_bias: float = 0.0,
    substeps: int = 10,
) -> RunLog:
    """Run the experiment described by ``config`` and return its log.

    ``oracle_f`` feeds the controller the true forcing signal instead of
    the estimator output (for the pendulum: the newest truth-reconstructed
    value); ``f_hat_bias`` adds a constant offset to whichever estimate is
    used, which is the robustness-injection hook.
    """
    start = time.perf_counter()
    meta = {
        "config": config_to_dict(config),
        "seed": config.seed,
        "oracle_f": oracle_f,
        "f_hat_bias": f_hat_bias,
        "backend": BACKEND,
    }
    builder = _LogBuilder()
    diverged = False
    if config.n_records > 0:
        if isinstance(config.plant, PendulumParams):
            diverged = _run_pendulum(
                config, oracle_f, f_hat_bias, substeps, builder
            )
        else:
            diverged = _run_synthetic(config, oracle_f, f_hat_bias, builder)
    meta["wall_time_s"] = time.perf_counter() - start
    return builder.build(diverged, meta)


def _noise_stream(config: ExperimentConfig) -> Optional[BumpNoiseStream]:
    if config.noise is None:
        return None
    seed = config.noise.seed if config.noise.seed is not None else config.seed
    return BumpNoiseStream(config.noise.width, seed)


def _run_pendulum(
    config: ExperimentConfig,
    oracle_f: bool,
    f_hat_bias: float,
    substeps: int,
    builder: _LogBuilder,
) -> bool:
    params = config.plant
    ctl = config.controller
    mu = ctl.mu
    dt = config.dt
    n = config.n_records
    # one desired sample past the horizon: the in-arrears law at step k
    # consumes y_d[k+1]
    y_d = _desired_theta_samples(params, config.initial_truth, n + 1, dt, substeps)
    noise = _noise_stream(config)

    truth = config.initial_truth
    obs_state: Optional[OutputObserverState] = None
    ulm_state = UlmObserverState.initial(1, config.ulm.observer_order)
    recon: List[np.ndarray] = []
    y_true_hist = np.empty(n)
    y_hat_hist = np.empty(n)
    e_hat_hist = np.empty(n)
    u_hist: List[float] = []
    effect_hist: List[float] = []
    f_true_latest = 0.0

    for k in range(n):
        if k > 0:
            try:
                truth = rk4_advance(truth, u_hist[k - 1], dt, params, substeps)
            except DivergenceError:
                return True
        y_k = truth.theta
        y_true_hist[k] = y_k
        eta = noise.sample() if noise is not None else 0.0
        y_m = y_k + eta
        if k == 0:
            obs_state = OutputObserverState.initial(
                config.initial_estimates.theta, y_m
            )
        else:
            obs_state = fts_observer_step(obs_state, y_m, config.observer)
        y_hat_k = float(obs_state.estimate[0])
        e_o_k = float(obs_state.last_error[0])
        y_hat_hist[k] = y_hat_k
        e_hat_hist[k] = y_hat_k - y_d[k]
        e_k = y_k - y_d[k]

        if k >= 2:
            # the in-arrears law at anchor j shapes y[j+2] with the force
            # applied over [t[j+1], t[j+2]), so that is the input effect
            # paired with the window anchored at j = k-2
            window_hat = y_hat_hist[k - 2 : k + 1]
            recon.append(reconstruct_f(window_hat, effect_hist[k - 1], 2))
            window_true = y_true_hist[k - 2 : k + 1]
            f_true_latest = float(
                reconstruct_f(window_true, effect_hist[k - 1], 2)[0]
            )
        f_pred, ulm_state = ulm_predict(ulm_state, recon, config.ulm)
        f_hat_k = f_true_latest if oracle_f else float(f_pred[0])
        f_hat_k += f_hat_bias

        if k >= 1:
            e_prev = e_hat_hist[k - 1]
            e_curr = e_hat_hist[k]
            e_1 = e_curr - e_prev
            s_k = e_1 + mu * e_prev
            rhs = control_rhs_second_order(
                e_prev, e_curr, y_d[k - 1], y_d[k], y_d[k + 1], f_hat_k, ctl
            )
            c_of_s = holder_gain(s_k, ctl.gain)
            feedback_total = -(1.0 - c_of_s) * s_k - mu * e_1 - f_hat_k
            g_k = _scalar_influence(ctl.influence_policy, feedback_total)
            u_k = float(solve_input(g_k, rhs)[0])
            if not math.isfinite(u_k):
                return True
        else:
            s_k = 0.0
            g_k = _scalar_influence(ctl.influence_policy, 0.0)
            u_k = 0.0
        u_hist.append(u_k)
        effect_hist.append(g_k * u_k)

        builder.append(
            k * dt, y_d[k], y_k, y_m, y_hat_k, e_k, e_o_k,
            f_true_latest, f_hat_k, f_hat_k - f_true_latest, s_k, u_k, g_k,
        )
    return False


def _run_synthetic(
    config: ExperimentConfig,
    oracle_f: bool,
    f_hat_bias: float,
    builder: _LogBuilder,
) -> bool:
    params = config.plant
    ctl = config.controller
    mu = ctl.mu
    dt = config.dt
    n = config.n_records
    # the anchored law at step k consumes y_d[k+2]
    y_d = params.desired_samples(n + 2, dt)
    noise = _noise_stream(config)

    y = [params.y0, params.y1]
    obs_state: Optional[OutputObserverState] = None
    ulm_state = UlmObserverState.initial(1, config.ulm.observer_order)
    recon: List[np.ndarray] = []
    effect_hist: List[float] = []

    for k in range(n):
        y_k = y[k]
        eta = noise.sample() if noise is not None else 0.0
        y_m = y_k + eta
        if k == 0:
            obs_state = OutputObserverState.initial(y[0], y_m)
        else:
            obs_state = fts_observer_step(obs_state, y_m, config.observer)
        y_hat_k = float(obs_state.estimate[0])
        e_o_k = float(obs_state.last_error[0])

        e_k = y[k] - y_d[k]
        e_kp1 = y[k + 1] - y_d[k + 1]
        f_true_k = params.f_signal(k, dt)

        if k >= 1:
            recon.append(
                np.array([(y[k + 1] - 2.0 * y[k] + y[k - 1]) - effect_hist[k - 1]])
            )
        f_pred, ulm_state = ulm_predict(ulm_state, recon, config.ulm)
        f_hat_k = f_true_k if oracle_f else float(f_pred[0])
        f_hat_k += f_hat_bias

        e_1 = e_kp1 - e_k
        s_k = e_1 + mu * e_k
        rhs = control_rhs_second_order(
            e_k, e_kp1, y_d[k], y_d[k + 1], y_d[k + 2], f_hat_k, ctl
        )
        c_of_s = holder_gain(s_k, ctl.gain)
        feedback_total = -(1.0 - c_of_s) * s_k - mu * e_1 - f_hat_k
        g_k = _scalar_influence(ctl.influence_policy, feedback_total)
        u_k = float(solve_input(g_k, rhs)[0])
        y_kp2 = float(synthetic_ulm_plant_step(y[k], y[k + 1], f_true_k, g_k, u_k)[0])
        if not (math.isfinite(u_k) and math.isfinite(y_kp2)):
            return True
        y.append(y_kp2)
        effect_hist.append(g_k * u_k)

        builder.append(
            k * dt, y_d[k], y_k, y_m, y_hat_k, e_k, e_o_k,
            f_true_k, f_hat_k, f_hat_k - f_true_k, s_k, u_k, g_k,
        )
    return False


@dataclass(frozen=True)
class RunMetrics:
    """Post-transient summary of one log."""

    max_abs_e: float
    rms_e: float
    max_abs_e_o: float
    max_abs_e_f: float
    first_step_e_o_below: Optional[int]
    first_step_e_f_below: Optional[int]
    rms_u: float

    def as_dict(self) -> dict:
        return {
            "max_abs_e": self.max_abs_e,
            "rms_e": self.rms_e,
            "max_abs_e_o": self.max_abs_e_o,
            "max_abs_e_f": self.max_abs_e_f,
            "first_step_e_o_below": self.first_step_e_o_below,
            "first_step_e_f_below": self.first_step_e_f_below,
            "rms_u": self.rms_u,
        }


def _first_below(values: np.ndarray, tol: float) -> Optional[int]:
    hits = np.nonzero(np.abs(values) <= tol)[0]
    return int(hits[0]) if hits.size else None


def compute_metrics(
    log: RunLog,
    transient_cutoff: float,
    e_o_tol: float = 1e-6,
    e_f_tol: float = 1e-6,
) -> RunMetrics:
    """Summary statistics of a run after discarding the transient.

    Tracking-error and F-estimate statistics are taken for t >= cutoff;
    the observer-error maximum, the first-step-below indices and the
    control effort cover the whole run.
    """
    if log.n == 0:
        raise ValueError("log is empty")
    if transient_cutoff > log.t[-1]:
        raise ValueError(
            f"cutoff {transient_cutoff} s lies beyond the horizon {log.t[-1]} s"
        )
    mask = log.t >= transient_cutoff
    return RunMetrics(
        max_abs_e=float(np.max(np.abs(log.e[mask]))),
        rms_e=float(np.sqrt(np.mean(log.e[mask] ** 2))),
        max_abs_e_o=float(np.max(np.abs(log.e_o))),
        max_abs_e_f=float(np.max(np.abs(log.e_f[mask]))),
        first_step_e_o_below=_first_below(log.e_o, e_o_tol),
        first_step_e_f_below=_first_below(log.e_f, e_f_tol),
        rms_u=float(np.sqrt(np.mean(log.u ** 2))),
    )


def write_log_csv(log: RunLog, path) -> None:
    """Write the log as CSV: fixed header, 17 significant digits, LF."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        columns = [getattr(log, name) for name in _COLUMNS]
        for row in zip(*columns):
            fh.write(",".join("%.17g" % v for v in row) + "\n")


def read_log_csv(path) -> RunLog:
    """Read a log CSV produced by ``write_log_csv``."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header: {header!r}")
        rows = [line.strip() for line in fh if line.strip()]
    data = (
        np.asarray([[float(v) for v in row.split(",")] for row in rows])
        if rows
        else np.empty((0, len(_COLUMNS)))
    )
    if data.size and data.shape[1] != len(_COLUMNS):
        raise ValueError(f"expected {len(_COLUMNS)} columns, got {data.shape[1]}")
    cols = {name: data[:, i].copy() if data.size else np.empty(0)
            for i, name in enumerate(_COLUMNS)}
    return RunLog(diverged=False, meta={"source": str(path)}, **cols)


# ---------------------------------------------------------------------------
# configuration (de)serialization


def _check_keys(d: dict, allowed, context: str) -> None:
    unknown = sorted(set(d) - set(allowed))
    if unknown:
        raise ValueError(f"unknown key(s) {unknown} in {context}")


def _require(d: dict, key: str, context: str):
    if key not in d:
        raise ValueError(f"missing key {key!r} in {context}")
    return d[key]


def _weight_to_json(weight):
    return weight if isinstance(weight, float) else np.asarray(weight).tolist()


def config_to_dict(config: ExperimentConfig) -> dict:
    plant = config.plant
    if isinstance(plant, PendulumParams):
        plant_d = {
            "kind": "pendulum",
            "cart_mass": plant.cart_mass,
            "pend_mass": plant.pend_mass,
            "half_length": plant.half_length,
            "inertia": plant.inertia,
            "gravity": plant.gravity,
            "cart_friction": plant.cart_friction,
            "pend_friction": plant.pend_friction,
        }
    else:
        plant_d = {
            "kind": "synthetic_ulm",
            "f_mode": plant.f_mode,
            "f_value": plant.f_value,
            "f_period": plant.f_period,
            "y0": plant.y0,
            "y1": plant.y1,
            "desired_mode": plant.desired_mode,
            "desired_amplitude": plant.desired_amplitude,
            "desired_period": plant.desired_period,
        }
    policy = config.controller.influence_policy
    if isinstance(policy, AdaptiveInfluence):
        policy_d = {"kind": "adaptive", "base": policy.base}
    else:
        policy_d = {"kind": "fixed", "value": _weight_to_json(policy.value)}
    return {
        "plant": plant_d,
        "horizon": config.horizon,
        "sample_rate": config.sample_rate,
        "observer": {
            "weight": _weight_to_json(config.observer.gain.weight),
            "margin": config.observer.gain.margin,
            "exponent": config.observer.gain.exponent,
        },
        "ulm": {
            "order_nu": config.ulm.order_nu,
            "margin": config.ulm.margin,
            "exponent": config.ulm.exponent,
            "observer_order": config.ulm.observer_order,
        },
        "controller": {
            "margin": config.controller.margin,
            "exponent": config.controller.exponent,
            "coefficients": list(config.controller.coefficients),
            "influence_policy": policy_d,
        },
        "noise": (
            None
            if config.noise is None
            else {"width": config.noise.width, "seed": config.noise.seed}
        ),
        "initial_truth": _state_to_dict(config.initial_truth),
        "initial_estimates": _state_to_dict(config.initial_estimates),
        "seed": config.seed,
        "allow_unseparated_gains": config.allow_unseparated_gains,
    }


def _state_to_dict(state: PendulumState) -> dict:
    return {
        "x": state.x,
        "theta": state.theta,
        "x_dot": state.x_dot,
        "theta_dot": state.theta_dot,
    }


def _state_from_dict(d: dict, context: str) -> PendulumState:
    _check_keys(d, ("x", "theta", "x_dot", "theta_dot"), context)
    return PendulumState(
        x=float(_require(d, "x", context)),
        theta=float(_require(d, "theta", context)),
        x_dot=float(_require(d, "x_dot", context)),
        theta_dot=float(_require(d, "theta_dot", context)),
    )


def _plant_from_dict(d: dict) -> Union[PendulumParams, SyntheticUlmParams]:
    kind = _require(d, "kind", "plant")
    if kind == "pendulum":
        _check_keys(
            d,
            ("kind", "cart_mass", "pend_mass", "half_length", "inertia",
             "gravity", "cart_friction", "pend_friction"),
            "plant",
        )
        return PendulumParams(
            cart_mass=float(_require(d, "cart_mass", "plant")),
            pend_mass=float(_require(d, "pend_mass", "plant")),
            half_length=float(_require(d, "half_length", "plant")),
            inertia=float(_require(d, "inertia", "plant")),
            gravity=float(_require(d, "gravity", "plant")),
            cart_friction=float(_require(d, "cart_friction", "plant")),
            pend_friction=float(_require(d, "pend_friction", "plant")),
        )
    if kind == "synthetic_ulm":
        _check_keys(
            d,
            ("kind", "f_mode", "f_value", "f_period", "y0", "y1",
             "desired_mode", "desired_amplitude", "desired_period"),
            "plant",
        )
        return SyntheticUlmParams(
            f_mode=str(_require(d, "f_mode", "plant")),
            f_value=float(d.get("f_value", 0.0)),
            f_period=float(d.get("f_period", 1.0)),
            y0=float(d.get("y0", 0.0)),
            y1=float(d.get("y1", 0.0)),
            desired_mode=str(d.get("desired_mode", "zero")),
            desired_amplitude=float(d.get("desired_amplitude", 0.0)),
            desired_period=float(d.get("desired_period", 1.0)),
        )
    raise ValueError(f"unknown plant kind {kind!r}")


def _weight_from_json(raw, context: str):
    if isinstance(raw, (int, float)):
        return float(raw)
    if isinstance(raw, list):
        return np.asarray(raw, dtype=float)
    raise ValueError(f"{context} must be a number or a nested list")


def config_from_dict(d: dict) -> ExperimentConfig:
    _check_keys(
        d,
        ("plant", "horizon", "sample_rate", "observer", "ulm", "controller",
         "noise", "initial_truth", "initial_estimates", "seed",
         "allow_unseparated_gains"),
        "config",
    )
    obs_d = _require(d, "observer", "config")
    _check_keys(obs_d, ("weight", "margin", "exponent"), "observer")
    observer = OutputObserverConfig(
        gain=HolderGainParams(
            weight=_weight_from_json(_require(obs_d, "weight", "observer"),
                                     "observer.weight"),
            margin=float(_require(obs_d, "margin", "observer")),
            exponent=float(_require(obs_d, "exponent", "observer")),
        )
    )
    ulm_d = _require(d, "ulm", "config")
    _check_keys(ulm_d, ("order_nu", "margin", "exponent", "observer_order"), "ulm")
    ulm = UlmConfig(
        order_nu=int(_require(ulm_d, "order_nu", "ulm")),
        margin=float(_require(ulm_d, "margin", "ulm")),
        exponent=float(_require(ulm_d, "exponent", "ulm")),
        observer_order=str(ulm_d.get("observer_order", "first")),
    )
    ctl_d = _require(d, "controller", "config")
    _check_keys(
        ctl_d, ("margin", "exponent", "coefficients", "influence_policy"),
        "controller",
    )
    pol_d = _require(ctl_d, "influence_policy", "controller")
    kind = _require(pol_d, "kind", "influence_policy")
    if kind == "adaptive":
        _check_keys(pol_d, ("kind", "base"), "influence_policy")
        policy: Union[AdaptiveInfluence, FixedInfluence] = AdaptiveInfluence(
            base=float(_require(pol_d, "base", "influence_policy"))
        )
    elif kind == "fixed":
        _check_keys(pol_d, ("kind", "value"), "influence_policy")
        policy = FixedInfluence(
            value=_weight_from_json(_require(pol_d, "value", "influence_policy"),
                                    "influence_policy.value")
        )
    else:
        raise ValueError(f"unknown influence policy kind {kind!r}")
    controller = ControllerConfig(
        margin=float(_require(ctl_d, "margin", "controller")),
        exponent=float(_require(ctl_d, "exponent", "controller")),
        coefficients=tuple(
            float(c) for c in _require(ctl_d, "coefficients", "controller")
        ),
        influence_policy=policy,
    )
    noise_d = d.get("noise")
    if noise_d is None:
        noise = None
    else:
        _check_keys(noise_d, ("width", "seed"), "noise")
        raw_seed = noise_d.get("seed")
        noise = NoiseModel(
            width=float(_require(noise_d, "width", "noise")),
            seed=None if raw_seed is None else int(raw_seed),
        )
    return ExperimentConfig(
        plant=_plant_from_dict(_require(d, "plant", "config")),
        horizon=float(_require(d, "horizon", "config")),
        sample_rate=float(_require(d, "sample_rate", "config")),
        observer=observer,
        ulm=ulm,
        controller=controller,
        noise=noise,
        initial_truth=_state_from_dict(
            _require(d, "initial_truth", "config"), "initial_truth"
        ),
        initial_estimates=_state_from_dict(
            _require(d, "initial_estimates", "config"), "initial_estimates"
        ),
        seed=int(_require(d, "seed", "config")),
        allow_unseparated_gains=bool(d.get("allow_unseparated_gains", False)),
    )


def write_config(config: ExperimentConfig, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(config_to_dict(config), fh, indent=2)
        fh.write("\n")


def read_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ValueError(f"{path}: top-level JSON value must be an object")
    return config_from_dict(raw)
