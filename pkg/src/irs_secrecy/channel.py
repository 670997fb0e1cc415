"""Large-scale path loss and Rayleigh block fading for the UAV/IRS/vehicle links.

Every link amplitude is ``sqrt(path_loss) * s`` with ``s`` a circularly-symmetric
complex Gaussian of unit variance. Path loss follows ``reference_gain * d**-alpha``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class DegenerateGeometryError(ValueError):
    """Raised when two communicating nodes share a position."""


@dataclass(frozen=True)
class Position3D:
    """Point in meters; ``z`` is the height above the road plane."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(np.isfinite((self.x, self.y, self.z))):
            raise ValueError(f"non-finite position {self}")
        if self.z < 0:
            raise ValueError(f"height must be >= 0, got z={self.z}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @classmethod
    def of(cls, xyz: Sequence[float]) -> "Position3D":
        x, y, z = (float(v) for v in xyz)
        return cls(x, y, z)


def distance(a: Position3D, b: Position3D) -> float:
    return float(np.linalg.norm(a.as_array() - b.as_array()))


@dataclass(frozen=True)
class Topology:
    uav: Position3D
    irs: Position3D
    user: Position3D
    eves: tuple[Position3D, ...]

    def __post_init__(self):
        object.__setattr__(self, "eves", tuple(self.eves))
        if len(self.eves) < 1:
            raise ValueError("topology needs at least one eavesdropper")
        if self.uav.z <= 0:
            raise ValueError("UAV must fly above the road plane (z > 0)")
        for a, b in self.links():
            if distance(a, b) <= 0.0:
                raise DegenerateGeometryError(f"degenerate geometry: {a} and {b} coincide")

    @property
    def k_eves(self) -> int:
        return len(self.eves)

    def links(self):
        yield self.uav, self.user
        yield self.uav, self.irs
        yield self.irs, self.user
        for eve in self.eves:
            yield self.uav, eve
            yield self.irs, eve


@dataclass(frozen=True)
class FadingParams:
    pathloss_exponent: float = 3.0
    noise_variance: float = 0.01
    reference_gain: float = 1.0

    def __post_init__(self):
        if not self.pathloss_exponent > 0:
            raise ValueError("pathloss_exponent must be > 0")
        if not self.noise_variance > 0:
            raise ValueError("noise_variance must be > 0")
        if not self.reference_gain > 0:
            raise ValueError("reference_gain must be > 0")


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One block-fading draw of every link in the topology.

    Attributes:
        h_du: direct UAV -> user coefficient.
        h_de: direct UAV -> eve coefficients, shape (K,).
        g_ui: UAV -> IRS per-element coefficients, shape (M,).
        g_iu: IRS -> user per-element coefficients, shape (M,).
        g_ie: IRS -> eve per-element coefficients, shape (K, M).
    """

    h_du: complex
    h_de: np.ndarray
    g_ui: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    g_iu: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    g_ie: np.ndarray | None = None

    def __post_init__(self):
        h_de = np.atleast_1d(np.asarray(self.h_de, dtype=complex))
        g_ui = np.atleast_1d(np.asarray(self.g_ui, dtype=complex))
        g_iu = np.atleast_1d(np.asarray(self.g_iu, dtype=complex))
        k, m = h_de.size, g_ui.size
        g_ie = np.zeros((k, m), complex) if self.g_ie is None else np.asarray(self.g_ie, complex)
        if h_de.ndim != 1 or k < 1:
            raise ValueError("h_de must be a non-empty vector")
        if g_iu.shape != (m,) or g_ie.shape != (k, m):
            raise ValueError(
                f"inconsistent shapes: g_ui {g_ui.shape}, g_iu {g_iu.shape}, g_ie {g_ie.shape}, K={k}"
            )
        arrays = (np.asarray(self.h_du), h_de, g_ui, g_iu, g_ie)
        if not all(np.all(np.isfinite(a)) for a in arrays):
            raise ValueError("channel coefficients must be finite")
        for name, value in (("h_de", h_de), ("g_ui", g_ui), ("g_iu", g_iu), ("g_ie", g_ie)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        object.__setattr__(self, "h_du", complex(self.h_du))

    @property
    def m_elements(self) -> int:
        return self.g_ui.size

    @property
    def k_eves(self) -> int:
        return self.h_de.size

    def truncated(self, m_elements: int) -> "ChannelRealization":
        """The same draw seen through only the first ``m_elements`` IRS elements."""
        if not 0 <= m_elements <= self.m_elements:
            raise ValueError(f"cannot truncate M={self.m_elements} to {m_elements}")
        return ChannelRealization(
            self.h_du,
            self.h_de,
            self.g_ui[:m_elements],
            self.g_iu[:m_elements],
            self.g_ie[:, :m_elements],
        )


def path_loss(a: Position3D, b: Position3D, params: FadingParams) -> float:
    """Large-scale power gain ``reference_gain * d**-alpha`` between two nodes."""
    d = distance(a, b)
    if d <= 0.0:
        raise DegenerateGeometryError(f"degenerate geometry: zero distance between {a} and {b}")
    return params.reference_gain * d ** (-params.pathloss_exponent)


def complex_normal(rng: np.random.Generator, size=None) -> np.ndarray:
    """CN(0, 1) samples: independent real/imag parts with variance 1/2 each."""
    shape = () if size is None else tuple(int(n) for n in np.atleast_1d(size))
    parts = rng.standard_normal(shape + (2,))
    return (parts[..., 0] + 1j * parts[..., 1]) / np.sqrt(2.0)


def draw_realization(
    topology: Topology,
    params: FadingParams,
    m_elements: int,
    rng: np.random.Generator,
) -> ChannelRealization:
    """Draw one Rayleigh realization of every link.

    Draw order is fixed: the K+1 direct links first, then an element-major
    block of shape (M, K+2) holding (UAV->IRS, IRS->user, IRS->eve_1..K) for
    each element. The realization for M elements is therefore a prefix of the
    realization for any larger M drawn from the same stream state.
    """
    if m_elements < 0:
        raise ValueError("m_elements must be >= 0")
    k = topology.k_eves
    uav, irs, user, eves = topology.uav, topology.irs, topology.user, topology.eves

    direct_gain = np.array([path_loss(uav, user, params)] + [path_loss(uav, e, params) for e in eves])
    direct = np.sqrt(direct_gain) * complex_normal(rng, (k + 1,))

    element_gain = np.array(
        [path_loss(uav, irs, params), path_loss(irs, user, params)]
        + [path_loss(irs, e, params) for e in eves]
    )
    block = np.sqrt(element_gain) * complex_normal(rng, (m_elements, k + 2))

    return ChannelRealization(
        h_du=direct[0],
        h_de=direct[1:],
        g_ui=block[:, 0],
        g_iu=block[:, 1],
        g_ie=block[:, 2:].T,
    )
