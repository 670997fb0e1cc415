"""Alternate optimization of transmit power and IRS phases, plus a grid-search oracle.

The phase block is projected gradient ascent on the unclamped secrecy
objective ``rate_user - max_k rate_eve_k`` (optionally with a log-sum-exp
softened max). Steps are normalized so that ``step_size`` is the largest
per-element phase move in radians; this keeps the ascent independent of the
absolute channel scale, which spans many orders of magnitude with path loss.
The power block is solved in closed form.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .channel import ChannelRealization, FadingParams
from .irs import TWO_PI, PhaseProfile, effective_channels
from .secrecy import SecrecyOutcome, secrecy_capacity

ARMIJO = 1e-4
MIN_STEP = 1e-10
ORACLE_MAX_ELEMENTS = 3


@dataclass(frozen=True)
class OptimizerConfig:
    max_outer_iters: int = 20
    max_inner_iters: int = 500
    step_size: float = 0.5
    restarts: int = 8
    tol: float = 1e-6
    power_max: float = 3.0
    optimize_amplitudes: bool = False
    smoothing_temperature: float = 0.0

    def __post_init__(self):
        for name in ("max_outer_iters", "max_inner_iters", "restarts"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if not self.power_max > 0:
            raise ValueError("power_max must be > 0")
        if not self.step_size > 0:
            raise ValueError("step_size must be > 0")
        if not self.smoothing_temperature >= 0:
            raise ValueError("smoothing_temperature must be >= 0")


@dataclass(frozen=True, eq=False)
class OptimizationTrace:
    """Accepted-iterate objective values.

    ``restart_index[i]`` names the restart that produced
    ``objective_per_iter[i]``; within one restart the values never decrease.
    """

    objective_per_iter: np.ndarray
    final: SecrecyOutcome | None
    restarts_tried: int
    converged: bool
    restart_index: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))


# --------------------------------------------------------------------------
# numba kernels


@numba.njit(cache=True)
def _surrogate(theta, amps, a_user, d_user, a_eves, d_eves, snr, temperature,
               grad_theta, grad_amps, want_grad):
    m = theta.size
    k = d_eves.size
    unit = np.empty(m, np.complex128)
    for i in range(m):
        unit[i] = complex(math.cos(theta[i]), math.sin(theta[i]))

    h_user = d_user
    for i in range(m):
        h_user += amps[i] * unit[i] * a_user[i]
    h_eves = d_eves.copy()
    for j in range(k):
        for i in range(m):
            h_eves[j] += amps[i] * unit[i] * a_eves[j, i]

    g_user = h_user.real ** 2 + h_user.imag ** 2
    r_user = math.log1p(snr * g_user) / math.log(2.0)
    r_eves = np.empty(k)
    for j in range(k):
        g = h_eves[j].real ** 2 + h_eves[j].imag ** 2
        r_eves[j] = math.log1p(snr * g) / math.log(2.0)

    weights = np.zeros(k)
    best = 0
    for j in range(1, k):
        if r_eves[j] > r_eves[best]:
            best = j
    if temperature > 0.0:
        total = 0.0
        for j in range(k):
            weights[j] = math.exp((r_eves[j] - r_eves[best]) / temperature)
            total += weights[j]
        aggregate = r_eves[best] + temperature * math.log(total)
        for j in range(k):
            weights[j] /= total
    else:
        aggregate = r_eves[best]
        weights[best] = 1.0
    value = r_user - aggregate

    if want_grad:
        # d rate / d |h|^2 for each receiver
        c_user = snr / ((1.0 + snr * g_user) * math.log(2.0))
        c_eves = np.empty(k)
        for j in range(k):
            g = h_eves[j].real ** 2 + h_eves[j].imag ** 2
            c_eves[j] = weights[j] * snr / ((1.0 + snr * g) * math.log(2.0))
        for i in range(m):
            # d|h|^2/dtheta_i = 2 Im(h conj(phi_i e^{j theta_i} c_i))
            # d|h|^2/dphi_i   = 2 Re(h conj(e^{j theta_i} c_i))
            z = h_user * np.conj(unit[i] * a_user[i])
            gt = c_user * 2.0 * amps[i] * z.imag
            ga = c_user * 2.0 * z.real
            for j in range(k):
                if c_eves[j] != 0.0:
                    z = h_eves[j] * np.conj(unit[i] * a_eves[j, i])
                    gt -= c_eves[j] * 2.0 * amps[i] * z.imag
                    ga -= c_eves[j] * 2.0 * z.real
            grad_theta[i] = gt
            grad_amps[i] = ga
    return value


@numba.njit(cache=True)
def _try_step(theta, amps, dir_theta, dir_amps, step, optimize_amps, cand_theta, cand_amps,
              a_user, d_user, a_eves, d_eves, snr, temperature, grad_theta, grad_amps):
    for i in range(theta.size):
        t = theta[i] + step * dir_theta[i]
        t -= TWO_PI * math.floor(t / TWO_PI)
        cand_theta[i] = 0.0 if t >= TWO_PI else t
        if optimize_amps:
            cand_amps[i] = min(1.0, max(0.0, amps[i] + step * dir_amps[i]))
    return _surrogate(cand_theta, cand_amps, a_user, d_user, a_eves, d_eves,
                      snr, temperature, grad_theta, grad_amps, False)


@numba.njit(cache=True)
def _ascend(theta, amps, a_user, d_user, a_eves, d_eves, snr, temperature,
            step0, tol, max_iter, optimize_amps, trace):
    """In-place projected ascent on (theta, amps). Returns (value, n_trace, converged)."""
    m = theta.size
    grad_theta = np.empty(m)
    grad_amps = np.empty(m)
    dir_theta = np.empty(m)
    dir_amps = np.zeros(m)
    cand_theta = np.empty(m)
    cand_amps = amps.copy()
    best_theta = np.empty(m)
    best_amps = amps.copy()
    value = _surrogate(theta, amps, a_user, d_user, a_eves, d_eves, snr, temperature,
                       grad_theta, grad_amps, True)
    trace[0] = value
    n = 1
    converged = False
    for _ in range(max_iter):
        scale = 0.0
        for i in range(m):
            dir_theta[i] = grad_theta[i]
            if optimize_amps:
                blocked = (amps[i] >= 1.0 and grad_amps[i] > 0.0) or (amps[i] <= 0.0 and grad_amps[i] < 0.0)
                dir_amps[i] = 0.0 if blocked else grad_amps[i]
            scale = max(scale, abs(dir_theta[i]), abs(dir_amps[i]))
        if not scale > 0.0:
            converged = True
            break
        slope = 0.0
        for i in range(m):
            dir_theta[i] /= scale
            dir_amps[i] /= scale
            slope += (dir_theta[i] * grad_theta[i] + dir_amps[i] * grad_amps[i])

        # backtrack to the first Armijo step, then keep halving while that still helps
        step = step0
        new_value = value
        accepted = False
        while step >= MIN_STEP:
            trial = _try_step(theta, amps, dir_theta, dir_amps, step, optimize_amps,
                              cand_theta, cand_amps, a_user, d_user, a_eves, d_eves, snr,
                              temperature, grad_theta, grad_amps)
            if accepted:
                if trial <= new_value:
                    break
                new_value = trial
                best_theta[:] = cand_theta
                best_amps[:] = cand_amps
            elif trial >= value + ARMIJO * step * slope:
                accepted = True
                new_value = trial
                best_theta[:] = cand_theta
                best_amps[:] = cand_amps
            step *= 0.5
        if not accepted or new_value - value <= tol * abs(new_value):
            # no sufficient ascent left: keep the current iterate
            converged = True
            break
        theta[:] = best_theta
        amps[:] = best_amps
        value = _surrogate(theta, amps, a_user, d_user, a_eves, d_eves, snr, temperature,
                           grad_theta, grad_amps, True)
        trace[n] = value
        n += 1
    return value, n, converged


# --------------------------------------------------------------------------
# public operations


def optimal_power(user_gain: float, best_eve_gain: float, power_max: float) -> float:
    """Exact maximizer of ``log2(1 + a p) - log2(1 + b p)`` over ``[0, power_max]``.

    The objective is monotone in ``p`` with the sign of ``a - b``, so the
    answer is bang-bang. A tie yields zero capacity at every power, and the
    transmitter stays silent.
    """
    return float(power_max) if user_gain > best_eve_gain else 0.0


def _cascades(realization: ChannelRealization):
    a_user = np.ascontiguousarray(realization.g_ui * realization.g_iu)
    a_eves = np.ascontiguousarray(realization.g_ie * realization.g_ui[None, :])
    return a_user, a_eves


def phase_gradient(
    realization: ChannelRealization,
    profile: PhaseProfile,
    power: float,
    params: FadingParams,
    temperature: float = 0.0,
) -> np.ndarray:
    """Gradient of ``rate_user - eve_aggregate`` with respect to each phase.

    With ``temperature == 0`` the aggregate is the hard max and the result is
    the gradient through the active eve (a subgradient at switch points).
    """
    m = realization.m_elements
    if m == 0:
        raise ValueError("nothing to optimize: realization has no IRS elements")
    if profile.m_elements != m:
        raise ValueError(f"profile has M={profile.m_elements}, realization has M={m}")
    grad_theta, grad_amps = np.empty(m), np.empty(m)
    _objective(realization, profile, power, params, temperature, grad_theta, grad_amps)
    return grad_theta


def amplitude_gradient(realization, profile, power, params, temperature=0.0) -> np.ndarray:
    """Gradient of the same objective with respect to each reflection amplitude."""
    m = realization.m_elements
    grad_theta, grad_amps = np.empty(m), np.empty(m)
    _objective(realization, profile, power, params, temperature, grad_theta, grad_amps)
    return grad_amps


def _objective(realization, profile, power, params, temperature, grad_theta=None, grad_amps=None):
    a_user, a_eves = _cascades(realization)
    m = realization.m_elements
    want = grad_theta is not None
    if not want:
        grad_theta, grad_amps = np.empty(m), np.empty(m)
    return _surrogate(
        np.array(profile.phases, dtype=float),
        np.array(profile.amplitudes, dtype=float),
        a_user,
        complex(realization.h_du),
        a_eves,
        np.array(realization.h_de, dtype=complex),
        float(power) / params.noise_variance,
        float(temperature),
        grad_theta,
        grad_amps,
        want,
    )


def secrecy_objective(realization, profile, power, params, temperature=0.0) -> float:
    """Unclamped objective ascended by the phase block."""
    return float(_objective(realization, profile, power, params, temperature))


def optimize_phases(
    realization: ChannelRealization,
    profile_init: PhaseProfile,
    power: float,
    params: FadingParams,
    cfg: OptimizerConfig,
) -> tuple[PhaseProfile, OptimizationTrace]:
    """Projected gradient ascent on the phases (and amplitudes when enabled).

    Each iteration tries a normalized step of ``cfg.step_size`` radians and
    halves it until the Armijo condition holds. Phases wrap modulo 2*pi and
    amplitudes are clipped to [0, 1]. Stops when the relative improvement
    drops below ``cfg.tol`` or after ``cfg.max_inner_iters`` steps.
    """
    if not power > 0:
        raise ValueError("phase optimization needs power > 0")
    m = realization.m_elements
    if profile_init.m_elements != m:
        raise ValueError(f"profile has M={profile_init.m_elements}, realization has M={m}")
    if m == 0:
        value = secrecy_objective(realization, profile_init, power, params, cfg.smoothing_temperature)
        trace = OptimizationTrace(np.array([value]), None, 1, True, np.zeros(1, dtype=int))
        return profile_init, trace

    a_user, a_eves = _cascades(realization)
    theta = np.array(profile_init.phases, dtype=float)
    amps = np.array(profile_init.amplitudes, dtype=float)
    buffer = np.empty(cfg.max_inner_iters + 1)
    _, n, converged = _ascend(
        theta,
        amps,
        a_user,
        complex(realization.h_du),
        a_eves,
        np.array(realization.h_de, dtype=complex),
        float(power) / params.noise_variance,
        float(cfg.smoothing_temperature),
        float(cfg.step_size),
        float(cfg.tol),
        int(cfg.max_inner_iters),
        bool(cfg.optimize_amplitudes),
        buffer,
    )
    profile = PhaseProfile(amps, theta)
    trace = OptimizationTrace(buffer[:n].copy(), None, 1, bool(converged), np.zeros(n, dtype=int))
    return profile, trace


def _normalized_gains(realization, profile, params):
    h_user, h_eves = effective_channels(realization, profile)
    scale = 1.0 / params.noise_variance
    return abs(h_user) ** 2 * scale, float(np.max(np.abs(h_eves) ** 2)) * scale


def alternate_optimize(
    realization: ChannelRealization,
    params: FadingParams,
    cfg: OptimizerConfig,
    rng: np.random.Generator | None = None,
) -> tuple[SecrecyOutcome, OptimizationTrace]:
    """Maximize secrecy capacity by alternating the phase and power blocks.

    Starting at ``power_max``, each outer iteration runs the phase block and
    then the closed-form power block. The phase block always runs at a
    positive power (``power_max`` when the power block chose silence) so the
    IRS can turn a dead link into a secure one. The best of ``cfg.restarts``
    uniform random phase initializations is returned.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    m = realization.m_elements
    if m == 0:
        profile = PhaseProfile.empty()
        user_gain, eve_gain = _normalized_gains(realization, profile, params)
        power = optimal_power(user_gain, eve_gain, cfg.power_max)
        outcome = secrecy_capacity(realization, profile, power, params)
        trace = OptimizationTrace(
            np.array([outcome.secrecy_capacity]), outcome, 1, True, np.zeros(1, dtype=int)
        )
        return outcome, trace

    best = None
    best_key = None
    objectives, labels = [], []
    all_converged = True
    for restart in range(cfg.restarts):
        theta0 = rng.uniform(0.0, TWO_PI, size=m)
        profile = PhaseProfile(np.ones(m), theta0)
        power = cfg.power_max
        previous = -np.inf
        for _ in range(cfg.max_outer_iters):
            phase_power = power if power > 0 else cfg.power_max
            profile, inner = optimize_phases(realization, profile, phase_power, params, cfg)
            objectives.append(inner.objective_per_iter)
            labels.append(np.full(inner.objective_per_iter.size, restart))
            all_converged &= inner.converged
            user_gain, eve_gain = _normalized_gains(realization, profile, params)
            power = optimal_power(user_gain, eve_gain, cfg.power_max)
            # outer objective: the unclamped secrecy margin at power_max
            current = secrecy_objective(realization, profile, cfg.power_max, params)
            if current - previous <= cfg.tol * abs(current):
                break
            previous = current
        outcome = secrecy_capacity(realization, profile, power, params)
        # rank by clamped capacity, then by the margin so dead links keep the least-bad profile
        key = (outcome.secrecy_capacity, secrecy_objective(realization, profile, cfg.power_max, params))
        if best_key is None or key > best_key:
            best, best_key = outcome, key

    trace = OptimizationTrace(
        np.concatenate(objectives),
        best,
        cfg.restarts,
        bool(all_converged),
        np.concatenate(labels),
    )
    return best, trace


def oracle_grid_search(
    realization: ChannelRealization,
    params: FadingParams,
    power_max: float,
    levels: int,
) -> SecrecyOutcome:
    """Exhaustive search over phases ``2*pi*i/levels``, unit amplitudes, and power in {0, power_max}."""
    m = realization.m_elements
    if m > ORACLE_MAX_ELEMENTS:
        raise ValueError(f"oracle restricted to desk scale (M <= {ORACLE_MAX_ELEMENTS}), got M={m}")
    if levels < 2:
        raise ValueError("levels must be >= 2")
    if m == 0:
        profile = PhaseProfile.empty()
        user_gain, eve_gain = _normalized_gains(realization, profile, params)
        return secrecy_capacity(realization, profile, optimal_power(user_gain, eve_gain, power_max), params)

    grid = TWO_PI * np.arange(levels) / levels
    thetas = np.array(list(itertools.product(grid, repeat=m)))
    reflection = np.exp(1j * thetas) * realization.g_ui[None, :]
    h_user = realization.h_du + reflection @ realization.g_iu
    h_eves = realization.h_de[None, :] + reflection @ realization.g_ie.T
    snr = power_max / params.noise_variance
    margin = np.log1p(snr * np.abs(h_user) ** 2) - np.max(np.log1p(snr * np.abs(h_eves) ** 2), axis=1)
    best = int(np.argmax(margin))
    profile = PhaseProfile.unit(thetas[best])
    power = power_max if margin[best] > 0 else 0.0
    return secrecy_capacity(realization, profile, power, params)
