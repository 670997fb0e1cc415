"""IRS reflection state and composition of direct and reflected paths."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization

TWO_PI = 2.0 * np.pi

USER = "user"


def wrap_phase(theta) -> np.ndarray:
    """Map phases onto [0, 2*pi)."""
    wrapped = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    # mod can round a tiny negative input up to exactly 2*pi
    return np.where(wrapped >= TWO_PI, 0.0, wrapped)


@dataclass(frozen=True, eq=False)
class PhaseProfile:
    """Diagonal reflection matrix ``diag(amplitudes * exp(1j * phases))``.

    Phases are canonicalized to [0, 2*pi) on construction. An empty profile
    (M = 0) stands for a link without an IRS.
    """

    amplitudes: np.ndarray
    phases: np.ndarray

    def __post_init__(self):
        amplitudes = np.atleast_1d(np.asarray(self.amplitudes, dtype=float)).copy()
        phases = wrap_phase(np.atleast_1d(self.phases))
        if amplitudes.ndim != 1 or amplitudes.shape != phases.shape:
            raise ValueError(
                f"amplitudes {amplitudes.shape} and phases {phases.shape} must be equal-length vectors"
            )
        if not np.all(np.isfinite(phases)):
            raise ValueError("phases must be finite")
        if np.any(~(amplitudes >= 0.0)) or np.any(amplitudes > 1.0):
            raise ValueError("amplitudes must lie in [0, 1]")
        amplitudes.setflags(write=False)
        phases.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)
        object.__setattr__(self, "phases", phases)

    @classmethod
    def unit(cls, phases) -> "PhaseProfile":
        """Lossless reflection (all amplitudes 1) with the given phases."""
        phases = np.atleast_1d(np.asarray(phases, dtype=float))
        return cls(np.ones_like(phases), phases)

    @classmethod
    def empty(cls) -> "PhaseProfile":
        return cls(np.zeros(0), np.zeros(0))

    @classmethod
    def random(cls, m_elements: int, rng: np.random.Generator) -> "PhaseProfile":
        return cls.unit(rng.uniform(0.0, TWO_PI, size=m_elements))

    @property
    def m_elements(self) -> int:
        return self.phases.size

    @property
    def reflection(self) -> np.ndarray:
        """Diagonal of the reflection matrix."""
        return self.amplitudes * np.exp(1j * self.phases)

    def __eq__(self, other):
        if not isinstance(other, PhaseProfile):
            return NotImplemented
        return np.array_equal(self.amplitudes, other.amplitudes) and np.array_equal(
            self.phases, other.phases
        )

    def __repr__(self):
        return f"PhaseProfile(amplitudes={self.amplitudes!r}, phases={self.phases!r})"


def effective_channel(direct: complex, incident, outgoing, profile: PhaseProfile) -> complex:
    """Direct coefficient plus the IRS-reflected contribution of every element."""
    incident = np.atleast_1d(np.asarray(incident, dtype=complex))
    outgoing = np.atleast_1d(np.asarray(outgoing, dtype=complex))
    m = profile.m_elements
    if incident.shape != (m,) or outgoing.shape != (m,):
        raise ValueError(
            f"length mismatch: incident {incident.shape}, outgoing {outgoing.shape}, profile M={m}"
        )
    return complex(direct + np.sum(profile.reflection * incident * outgoing))


def cascade_coefficients(realization: ChannelRealization, receiver=USER) -> np.ndarray:
    """Per-element products of the UAV->IRS and IRS->receiver coefficients.

    ``receiver`` is ``"user"`` or an eavesdropper index in ``range(K)``.
    """
    if isinstance(receiver, str):
        if receiver != USER:
            raise ValueError(f"unknown receiver {receiver!r}")
        return realization.g_ui * realization.g_iu
    index = int(receiver)
    if not 0 <= index < realization.k_eves:
        raise IndexError(f"eve index {receiver} out of range for K={realization.k_eves}")
    return realization.g_ui * realization.g_ie[index]


def direct_coefficient(realization: ChannelRealization, receiver=USER) -> complex:
    if isinstance(receiver, str):
        if receiver != USER:
            raise ValueError(f"unknown receiver {receiver!r}")
        return realization.h_du
    return complex(realization.h_de[int(receiver)])


def effective_channels(realization: ChannelRealization, profile: PhaseProfile):
    """Effective user coefficient and the vector of effective eve coefficients."""
    if profile.m_elements != realization.m_elements:
        raise ValueError(
            f"profile has M={profile.m_elements} but realization has M={realization.m_elements}"
        )
    reflection = profile.reflection * realization.g_ui
    h_user = realization.h_du + np.sum(reflection * realization.g_iu)
    h_eves = realization.h_de + realization.g_ie @ reflection
    return complex(h_user), h_eves
