"""Near-field channel synthesis for an RIS-assisted MIMO link.

Every link uses the free-space spherical-wave gain
``lambda / (4 pi d) * exp(-j 2 pi d / lambda)`` evaluated per element and
antenna, so the Fresnel phase structure across the surface is exact.
Scattering is added as circularly-symmetric complex Gaussian terms drawn
from counter-based generators keyed by ``(seed, realization, link)``.
"""

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = [
    "SPEED_OF_LIGHT",
    "Regime",
    "SceneGeometry",
    "ScenarioSpec",
    "ChannelSet",
    "los_gain",
    "los_matrix",
    "build_geometry",
    "ris_module_grid",
    "synthesize",
    "copper_sheet_channel",
    "default_copper_sheet",
    "rayleigh_distance",
    "transmit",
]

SPEED_OF_LIGHT = 299_792_458.0

# link tags for the counter-based generator
_TAG_DIRECT, _TAG_TX_RIS, _TAG_RIS_RX = 0, 1, 2


class Regime(str, enum.Enum):
    LOW_RANK = "LowRank"
    MEDIUM_RANK = "MediumRank"


@dataclass(frozen=True, eq=False)
class SceneGeometry:
    """Positions (meters) of the antennas and RIS elements.

    ``ris_elements`` may be empty (no surface). ``direct_scatter_point`` is
    the single point the dominant direct-path component bounces off;
    ``module_side`` is the edge length of one RIS module and is used to
    size the copper-sheet reference.
    """

    wavelength: float
    tx_positions: np.ndarray
    rx_positions: np.ndarray
    ris_elements: np.ndarray
    ris_plane_normal: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0]))
    ris_center: np.ndarray = field(default_factory=lambda: np.zeros(3))
    direct_scatter_point: np.ndarray = field(default_factory=lambda: np.array([1.0, 3.0, 0.5]))
    module_side: float = 0.0
    modules: int = 1

    def __post_init__(self):
        if not (self.wavelength > 0 and math.isfinite(self.wavelength)):
            raise ValueError("wavelength must be positive and finite")
        for name in ("tx_positions", "rx_positions", "ris_elements"):
            pts = np.asarray(getattr(self, name), dtype=float).reshape(-1, 3)
            if not np.all(np.isfinite(pts)):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, pts)
        if self.n_tx < 1 or self.n_rx < 1:
            raise ValueError("need at least one Tx and one Rx antenna")
        for name in ("ris_plane_normal", "ris_center", "direct_scatter_point"):
            v = np.asarray(getattr(self, name), dtype=float).reshape(3)
            if not np.all(np.isfinite(v)):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if abs(np.linalg.norm(self.ris_plane_normal) - 1.0) > 1e-12:
            raise ValueError("ris_plane_normal must have unit norm")

    @property
    def n_tx(self) -> int:
        return self.tx_positions.shape[0]

    @property
    def n_rx(self) -> int:
        return self.rx_positions.shape[0]

    @property
    def n_elements(self) -> int:
        return self.ris_elements.shape[0]


@dataclass(frozen=True)
class ScenarioSpec:
    """Statistical knobs realizing a rank regime.

    ``direct_dominant_gain`` scales the rank-one direct component relative
    to the free-space gain over the Tx-Rx array-center distance.
    ``scatter_power_db`` is the per-entry power of the direct-path scatter
    relative to that component (``-inf`` disables it); ``rician_k_db`` is
    the per-entry LoS-to-scatter power ratio on the RIS links (``+inf``
    disables scatter there).
    """

    regime: Regime = Regime.LOW_RANK
    direct_dominant_gain: float = 3.0
    scatter_power_db: float = -20.0
    rician_k_db: float = 20.0
    seed: int = 0
    realizations: int = 100

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime(self.regime))
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if math.isnan(self.scatter_power_db) or self.scatter_power_db == math.inf:
            raise ValueError("scatter_power_db must be finite or -inf")
        if math.isnan(self.rician_k_db) or self.rician_k_db == -math.inf:
            raise ValueError("rician_k_db must be finite or +inf")
        if not (self.direct_dominant_gain >= 0 and math.isfinite(self.direct_dominant_gain)):
            raise ValueError("direct_dominant_gain must be finite and non-negative")

    @classmethod
    def for_regime(cls, regime, **overrides) -> "ScenarioSpec":
        regime = Regime(regime)
        if regime is Regime.LOW_RANK:
            params = dict(scatter_power_db=-20.0, rician_k_db=20.0)
        else:
            params = dict(scatter_power_db=-6.0, rician_k_db=6.0)
        params.update(overrides)
        return cls(regime=regime, **params)


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """One realization: direct ``(N_R, N_T)``, Tx-RIS ``(N, N_T)`` and
    RIS-Rx ``(N, N_R)`` channels."""

    h_direct: np.ndarray
    h_tx_ris: np.ndarray
    h_ris_rx: np.ndarray

    def __post_init__(self):
        n_r, n_t = self.h_direct.shape
        if self.h_tx_ris.shape[1] != n_t or self.h_ris_rx.shape[1] != n_r:
            raise ValueError("antenna counts of the three channels disagree")
        if self.h_tx_ris.shape[0] != self.h_ris_rx.shape[0]:
            raise ValueError("element counts of the RIS channels disagree")
        for h in (self.h_direct, self.h_tx_ris, self.h_ris_rx):
            if not np.all(np.isfinite(h)):
                raise ValueError("channel entries must be finite")

    @property
    def n_elements(self) -> int:
        return self.h_tx_ris.shape[0]

    def digest(self) -> str:
        """SHA-256 of the raw channel bytes, for paired-comparison logging."""
        import hashlib

        sha = hashlib.sha256()
        for h in (self.h_direct, self.h_tx_ris, self.h_ris_rx):
            sha.update(np.ascontiguousarray(h, dtype=np.complex128).tobytes())
        return sha.hexdigest()


def los_gain(p_a, p_b, wavelength: float) -> complex:
    """Free-space complex gain between two points."""
    if not wavelength > 0:
        raise ValueError("wavelength must be positive")
    d = math.dist(np.asarray(p_a, dtype=float), np.asarray(p_b, dtype=float))
    if d == 0:
        raise ValueError("coincident points have no free-space gain")
    return wavelength / (4 * math.pi * d) * complex(
        math.cos(2 * math.pi * d / wavelength), -math.sin(2 * math.pi * d / wavelength)
    )


def los_matrix(points_a, points_b, wavelength: float) -> np.ndarray:
    """Gains between every point of ``points_a`` (rows) and ``points_b`` (cols)."""
    a = np.asarray(points_a, dtype=float).reshape(-1, 3)
    b = np.asarray(points_b, dtype=float).reshape(-1, 3)
    d = np.sqrt(np.sum((a[:, None, :] - b[None, :, :]) ** 2, axis=-1))
    if np.any(d == 0):
        raise ValueError("coincident points have no free-space gain")
    phase = 2 * np.pi * d / wavelength
    return wavelength / (4 * np.pi * d) * (np.cos(phase) - 1j * np.sin(phase))


def ris_module_grid(elements_per_side: int, pitch: float, center=(0.0, 0.0, 0.0)) -> np.ndarray:
    """Square element grid in the ``x = center_x`` plane, row-major over (y, z)."""
    c = (np.arange(elements_per_side) - (elements_per_side - 1) / 2) * pitch
    y, z = np.meshgrid(c, c, indexing="ij")
    pts = np.stack([np.zeros(y.size), y.ravel(), z.ravel()], axis=1)
    return pts + np.asarray(center, dtype=float)


def _vertical_array(center, count, spacing):
    offsets = (np.arange(count) - (count - 1) / 2) * spacing
    return np.asarray(center, dtype=float) + np.outer(offsets, [0.0, 0.0, 1.0])


def build_geometry(
    modules: int = 1,
    elements_per_side: int = 16,
    carrier_frequency: float = 5.24e9,
    tx_distance: float = 0.6,
    rx_distance: float = 2.0,
    tx_angle_deg: float = 45.0,
    rx_angle_deg: float = 45.0,
    n_tx: int = 3,
    n_rx: int = 3,
    antenna_spacing: Optional[float] = None,
    direct_scatter_point=(1.0, 3.0, 0.5),
) -> SceneGeometry:
    """Default experiment layout.

    The surface lies in the ``x = 0`` plane centred on the origin with
    ``elements_per_side**2`` elements per module at half-wavelength pitch;
    four modules are tiled 2x2 edge to edge. Tx and Rx are vertical
    uniform linear arrays in front of the surface, on opposite sides of its
    broadside (angles measured from the normal in the horizontal plane).
    """
    if modules not in (1, 4):
        raise ValueError("modules must be 1 or 4")
    if carrier_frequency <= 0:
        raise ValueError("carrier_frequency must be positive")
    lam = SPEED_OF_LIGHT / carrier_frequency
    pitch = lam / 2
    spacing = lam / 2 if antenna_spacing is None else antenna_spacing
    side = elements_per_side * pitch

    if modules == 1:
        elements = ris_module_grid(elements_per_side, pitch)
    else:
        h = side / 2
        centers = [(0.0, y, z) for y in (-h, h) for z in (-h, h)]
        elements = np.concatenate([ris_module_grid(elements_per_side, pitch, c) for c in centers])

    ta, ra = math.radians(tx_angle_deg), math.radians(rx_angle_deg)
    tx_center = tx_distance * np.array([math.cos(ta), -math.sin(ta), 0.0])
    rx_center = rx_distance * np.array([math.cos(ra), math.sin(ra), 0.0])
    return SceneGeometry(
        wavelength=lam,
        tx_positions=_vertical_array(tx_center, n_tx, spacing),
        rx_positions=_vertical_array(rx_center, n_rx, spacing),
        ris_elements=elements,
        direct_scatter_point=np.asarray(direct_scatter_point, dtype=float),
        module_side=side,
        modules=modules,
    )


def _rng(seed, realization_index, tag):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, realization_index, tag])))


def _cn(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def synthesize(geom: SceneGeometry, spec: ScenarioSpec, realization_index: int) -> ChannelSet:
    """Draw one channel realization; a pure function of its arguments."""
    if not 0 <= realization_index < spec.realizations:
        raise ValueError(
            f"realization_index {realization_index} outside [0, {spec.realizations})"
        )
    lam = geom.wavelength

    # direct path: rank-one bounce off a single point plus i.i.d. scatter
    d_tr = np.linalg.norm(geom.tx_positions.mean(0) - geom.rx_positions.mean(0))
    g = spec.direct_dominant_gain * lam / (4 * np.pi * d_tr)
    d_tx = np.linalg.norm(geom.tx_positions - geom.direct_scatter_point, axis=1)
    d_rx = np.linalg.norm(geom.rx_positions - geom.direct_scatter_point, axis=1)
    a_tx = np.exp(-2j * np.pi * d_tx / lam)
    a_rx = np.exp(-2j * np.pi * d_rx / lam)
    h_direct = g * np.outer(a_rx, a_tx)
    if spec.scatter_power_db != -math.inf:
        std = g * 10 ** (spec.scatter_power_db / 20)
        h_direct = h_direct + std * _cn(_rng(spec.seed, realization_index, _TAG_DIRECT), h_direct.shape)

    h1 = los_matrix(geom.ris_elements, geom.tx_positions, lam)
    h2 = los_matrix(geom.ris_elements, geom.rx_positions, lam)
    if spec.rician_k_db != math.inf and geom.n_elements:
        k_amp = 10 ** (-spec.rician_k_db / 20)
        h1 = h1 + k_amp * np.abs(h1) * _cn(_rng(spec.seed, realization_index, _TAG_TX_RIS), h1.shape)
        h2 = h2 + k_amp * np.abs(h2) * _cn(_rng(spec.seed, realization_index, _TAG_RIS_RX), h2.shape)
    return ChannelSet(h_direct, h1, h2)


def _plane_basis(normal):
    n = np.asarray(normal, dtype=float)
    ref = np.array([0.0, 0.0, 1.0]) if abs(n[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    u = np.cross(n, ref)
    u /= np.linalg.norm(u)
    return u, np.cross(n, u)


def copper_sheet_channel(geom: SceneGeometry, sheet_center, sheet_halfwidths) -> np.ndarray:
    """Single-bounce image-method channel of a flat perfect conductor.

    The sheet shares the RIS plane normal. ``sheet_halfwidths`` are measured
    along the horizontal and the vertical in-plane axes. Entries whose
    specular point lies outside the sheet are zero; the reflection
    coefficient is -1.
    """
    n = geom.ris_plane_normal
    c = np.asarray(sheet_center, dtype=float)
    hw0, hw1 = (float(x) for x in sheet_halfwidths)
    u, v = _plane_basis(n)
    lam = geom.wavelength

    tx_side = (geom.tx_positions - c) @ n
    rx_side = (geom.rx_positions - c) @ n
    if np.any(tx_side == 0) or np.any(rx_side == 0):
        raise ValueError("an antenna lies on the sheet plane")

    out = np.zeros((geom.n_rx, geom.n_tx), dtype=np.complex128)
    for t, p in enumerate(geom.tx_positions):
        image = p - 2 * tx_side[t] * n
        for r, q in enumerate(geom.rx_positions):
            if np.sign(rx_side[r]) != np.sign(tx_side[t]):
                continue
            frac = tx_side[t] / (tx_side[t] + rx_side[r])
            spec_pt = image + frac * (q - image)
            off = spec_pt - c
            if abs(off @ u) < hw0 and abs(off @ v) < hw1:
                out[r, t] = -los_gain(image, q, lam)
    return out


def default_copper_sheet(geom: SceneGeometry) -> np.ndarray:
    """Copper reference with nine times the area of one module, centred on
    the surface."""
    half = 1.5 * geom.module_side
    return copper_sheet_channel(geom, geom.ris_center, (half, half))


def rayleigh_distance(elements_per_side: int, wavelength: float) -> float:
    """``elements_per_side**2 * wavelength / 2``."""
    if elements_per_side < 1 or wavelength <= 0:
        raise ValueError("need elements_per_side >= 1 and wavelength > 0")
    return elements_per_side**2 * wavelength / 2


def transmit(h, precoder, x, noise_std: float = 0.0, seed: int = 0) -> np.ndarray:
    """Received vector ``h @ precoder @ x + n`` with ``n ~ CN(0, noise_std**2 I)``."""
    h = np.asarray(h, dtype=np.complex128)
    precoder = np.asarray(precoder, dtype=np.complex128)
    x = np.asarray(x, dtype=np.complex128).ravel()
    if h.ndim != 2 or precoder.shape != (h.shape[1], h.shape[1]) or x.shape != (h.shape[1],):
        raise ValueError(
            f"shape mismatch: h {h.shape}, precoder {precoder.shape}, x {x.shape}"
        )
    if noise_std < 0:
        raise ValueError("noise_std must be non-negative")
    y = h @ (precoder @ x)
    if noise_std > 0:
        y = y + noise_std * _cn(np.random.default_rng(seed), y.shape)
    return y
