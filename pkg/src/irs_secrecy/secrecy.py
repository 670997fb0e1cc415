"""Achievable rates and secrecy capacity against the strongest eavesdropper."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, FadingParams
from .irs import PhaseProfile, effective_channels


def rate(h_eff, power: float, noise_variance: float):
    """Shannon rate ``log2(1 + power * |h_eff|**2 / noise_variance)`` in bits/s/Hz.

    Vectorizes over ``h_eff``.
    """
    if power < 0:
        raise ValueError(f"negative power {power}")
    if not noise_variance > 0:
        raise ValueError("noise_variance must be > 0")
    snr = power * np.abs(h_eff) ** 2 / noise_variance
    # log1p keeps precision at the very low SNRs that path loss produces
    if np.ndim(snr) == 0:
        return float(np.log1p(snr) / np.log(2.0))
    return np.log1p(snr) / np.log(2.0)


@dataclass(frozen=True, eq=False)
class SecrecyOutcome:
    power: float
    profile: PhaseProfile
    rate_user: float
    rate_eves: np.ndarray
    secrecy_capacity: float
    active_eve: int

    @property
    def max_eve_rate(self) -> float:
        return float(self.rate_eves[self.active_eve])

    def record(self) -> dict:
        """Flat CSV-ready fields."""
        return {
            "power": self.power,
            "secrecy": self.secrecy_capacity,
            "rate_user": self.rate_user,
            "max_eve_rate": self.max_eve_rate,
            "active_eve": self.active_eve,
        }


def secrecy_capacity(
    realization: ChannelRealization,
    profile: PhaseProfile,
    power: float,
    params: FadingParams,
) -> SecrecyOutcome:
    """Evaluate rates and the clamped secrecy capacity for a fixed power and IRS state.

    Eavesdroppers do not collude, so only the best one counts. Ties in the
    eve rates resolve to the lowest index.
    """
    h_user, h_eves = effective_channels(realization, profile)
    rate_user = rate(h_user, power, params.noise_variance)
    rate_eves = np.asarray(rate(h_eves, power, params.noise_variance), dtype=float)
    active = int(np.argmax(rate_eves))
    capacity = max(0.0, rate_user - float(rate_eves[active]))
    return SecrecyOutcome(
        power=float(power),
        profile=profile,
        rate_user=float(rate_user),
        rate_eves=rate_eves,
        secrecy_capacity=capacity,
        active_eve=active,
    )
