"""1-bit RIS configurations and end-to-end channel composition.

Bit 0 means a reflection phase of 0, bit 1 a phase of pi. The cascaded
channel through the surface is ``H2^T diag(beta * exp(j psi)) H1``, added
to the direct Tx-Rx channel.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = [
    "RisConfig",
    "phase_matrix",
    "compose_channel",
    "fixed_phase_configs",
]


@dataclass(frozen=True, eq=False)
class RisConfig:
    """Per-element phase bits and reflection amplitudes."""

    bits: np.ndarray
    amplitudes: np.ndarray = field(default=None)

    def __post_init__(self):
        bits = np.asarray(self.bits)
        if bits.ndim != 1:
            raise ValueError("bits must be one-dimensional")
        if bits.size and not np.all((bits == 0) | (bits == 1)):
            raise ValueError("bits must be 0 or 1")
        bits = bits.astype(np.uint8)
        if self.amplitudes is None:
            amps = np.ones(bits.size)
        else:
            amps = np.asarray(self.amplitudes, dtype=float).ravel()
        if amps.shape != bits.shape:
            raise ValueError("amplitudes and bits must have equal length")
        if not np.all(np.isfinite(amps)) or np.any((amps < 0) | (amps > 1)):
            raise ValueError("amplitudes must lie in [0, 1]")
        bits.setflags(write=False)
        amps.setflags(write=False)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zeros(cls, n: int) -> "RisConfig":
        return cls(np.zeros(n, dtype=np.uint8))

    @classmethod
    def from_bitstring(cls, text: str) -> "RisConfig":
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise ValueError(f"bit string may contain only '0' and '1': {text!r}")
        return cls(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"))

    def to_bitstring(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def __len__(self):
        return self.bits.size

    def __eq__(self, other):
        if not isinstance(other, RisConfig):
            return NotImplemented
        return np.array_equal(self.bits, other.bits) and np.array_equal(
            self.amplitudes, other.amplitudes
        )

    def complement(self) -> "RisConfig":
        return RisConfig(1 - self.bits, self.amplitudes)

    @property
    def phases(self) -> np.ndarray:
        return np.pi * self.bits

    def coefficients(self) -> np.ndarray:
        """Diagonal of the phase matrix. ``exp(j pi)`` is taken as exactly -1."""
        return np.where(self.bits == 1, -1.0, 1.0) * self.amplitudes + 0j


def phase_matrix(cfg: RisConfig) -> np.ndarray:
    return np.diag(cfg.coefficients())


def compose_channel(ch, cfg: Optional[RisConfig] = None) -> np.ndarray:
    """End-to-end channel ``H2^T Psi H1 + H_d``; the direct channel alone if
    ``cfg`` is None."""
    if cfg is None:
        return ch.h_direct.copy()
    n = ch.h_tx_ris.shape[0]
    if len(cfg) != n or ch.h_ris_rx.shape[0] != n:
        raise ValueError(
            f"configuration has {len(cfg)} elements, channel has {n}"
        )
    weighted = cfg.coefficients()[:, None] * ch.h_tx_ris
    # explicit reduction instead of BLAS: bit-identical regardless of threading
    cascade = np.sum(ch.h_ris_rx[:, :, None] * weighted[:, None, :], axis=0)
    return cascade + ch.h_direct


def fixed_phase_configs(n: int) -> tuple[RisConfig, RisConfig]:
    """The all-0 and all-pi configurations with unit amplitudes."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return RisConfig(np.zeros(n, dtype=np.uint8)), RisConfig(np.ones(n, dtype=np.uint8))
