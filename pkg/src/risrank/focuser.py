"""Passive beam focusing with 1-bit RIS elements.

For each Tx/Rx antenna pair a single greedy sweep flips elements from 0 to
pi whenever that does not lower (constructive) or raise (destructive) the
cascaded gain ``|h2^T Psi h1|^2``. The resulting configuration is scored
by the effective rank of the full channel, and the best pair wins.
"""

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from .metrics import rank_report
from .ris import RisConfig, compose_channel

__all__ = [
    "Mode",
    "OpCounters",
    "FocusResult",
    "cascade_gain",
    "greedy_flip_pair",
    "passive_beam_focus",
    "exhaustive_pair_optimum",
    "complexity_estimate",
    "MAX_EXHAUSTIVE_ELEMENTS",
]

MAX_EXHAUSTIVE_ELEMENTS = 20


class Mode(str, enum.Enum):
    CONSTRUCTIVE = "Constructive"
    DESTRUCTIVE = "Destructive"


@dataclass
class OpCounters:
    gain_evaluations: int = 0
    svd_evaluations: int = 0

    def reset(self):
        self.gain_evaluations = 0
        self.svd_evaluations = 0

    def __add__(self, other):
        return OpCounters(
            self.gain_evaluations + other.gain_evaluations,
            self.svd_evaluations + other.svd_evaluations,
        )


@dataclass(frozen=True, eq=False)
class FocusResult:
    best_pair: tuple[int, int]
    best_config: RisConfig
    per_pair_rank: np.ndarray
    best_effective_rank: float
    gain_trace: dict = field(repr=False)
    mode: Mode = Mode.CONSTRUCTIVE
    counters: OpCounters = field(default_factory=OpCounters)

    def to_record(self) -> str:
        """One-line JSON record: pair (0-based), bit string, R_e grid, counters."""
        return json.dumps(
            {
                "best_pair": list(self.best_pair),
                "mode": self.mode.value,
                "best_effective_rank": self.best_effective_rank,
                "bits": self.best_config.to_bitstring(),
                "per_pair_rank": self.per_pair_rank.tolist(),
                "gain_evaluations": self.counters.gain_evaluations,
                "svd_evaluations": self.counters.svd_evaluations,
            },
            separators=(",", ":"),
        )


def _check_pair(h1_col, h2_col):
    h1 = np.asarray(h1_col, dtype=np.complex128).ravel()
    h2 = np.asarray(h2_col, dtype=np.complex128).ravel()
    if h1.shape != h2.shape:
        raise ValueError(f"length mismatch: {h1.size} vs {h2.size}")
    return h1, h2


def cascade_gain(h1_col, h2_col, cfg: RisConfig) -> float:
    h1, h2 = _check_pair(h1_col, h2_col)
    if len(cfg) != h1.size:
        raise ValueError(f"configuration has {len(cfg)} elements, vectors have {h1.size}")
    s = np.sum(cfg.coefficients() * h2 * h1)
    return float(s.real**2 + s.imag**2)


def greedy_flip_pair(h1_col, h2_col, mode=Mode.CONSTRUCTIVE, amplitudes=None, counters=None):
    """Single greedy sweep over the elements in index order.

    Starting from all bits 0, each element is tentatively set to pi. The
    flip is undone if the gain drops below the running best (constructive)
    or rises above it (destructive); ties keep the flip.

    Returns
    -------
    cfg : RisConfig
    trace : list of float
        The running best gain, starting with the all-zero gain and
        appended on every committed flip.
    """
    mode = Mode(mode)
    h1, h2 = _check_pair(h1_col, h2_col)
    beta = np.ones(h1.size) if amplitudes is None else np.asarray(amplitudes, dtype=float)
    terms = (beta * h2 * h1).tolist()  # python complex: faster scalar loop
    total = sum(terms, 0j)
    best = total.real**2 + total.imag**2
    trace = [best]
    bits = np.zeros(h1.size, dtype=np.uint8)
    constructive = mode is Mode.CONSTRUCTIVE
    for n, t in enumerate(terms):
        # element n goes from +t to -t
        cand = total - 2 * t
        g = cand.real**2 + cand.imag**2
        if (g < best) if constructive else (g > best):
            continue
        bits[n] = 1
        total = cand
        best = g
        trace.append(g)
    if counters is not None:
        counters.gain_evaluations += h1.size + 1
    return RisConfig(bits, beta), trace


def passive_beam_focus(ch, mode=Mode.CONSTRUCTIVE, counters=None, amplitudes=None) -> FocusResult:
    """Search every antenna pair and keep the configuration with the largest
    effective rank. The first pair in Tx-major order wins ties.

    ``counters``, when given, is reset and then filled with the number of
    cascade-gain and SVD evaluations of this run.
    """
    mode = Mode(mode)
    if ch.n_elements < 1:
        raise ValueError("passive beam focusing needs at least one RIS element")
    if counters is None:
        counters = OpCounters()
    counters.reset()
    n_r, n_t = ch.h_direct.shape
    grid = np.empty((n_t, n_r))
    traces = {}
    configs = {}
    for t in range(n_t):
        for r in range(n_r):
            cfg, trace = greedy_flip_pair(
                ch.h_tx_ris[:, t], ch.h_ris_rx[:, r], mode, amplitudes, counters
            )
            grid[t, r] = rank_report(compose_channel(ch, cfg)).effective_rank
            counters.svd_evaluations += 1
            traces[(t, r)] = trace
            configs[(t, r)] = cfg
    flat = int(np.argmax(grid))  # first occurrence in row-major order
    best = divmod(flat, n_r)
    return FocusResult(
        best_pair=best,
        best_config=configs[best],
        per_pair_rank=grid,
        best_effective_rank=float(grid[best]),
        gain_trace=traces,
        mode=mode,
        counters=counters,
    )


def exhaustive_pair_optimum(h1_col, h2_col, mode=Mode.CONSTRUCTIVE):
    """Brute-force optimum over all ``2**N`` bit vectors (``N <= 20``).

    Ties go to the smallest bit vector read as a binary number with the
    first element as the most significant bit.
    """
    mode = Mode(mode)
    h1, h2 = _check_pair(h1_col, h2_col)
    n = h1.size
    if n > MAX_EXHAUSTIVE_ELEMENTS:
        raise ValueError(f"exhaustive search limited to {MAX_EXHAUSTIVE_ELEMENTS} elements, got {n}")
    terms = h2 * h1
    hi_n = n // 2
    lo_n = n - hi_n

    def partial_sums(t, k):
        # row i: sum of t with sign flipped where bit set in i (MSB = t[0])
        idx = np.arange(2**k)[:, None]
        shifts = np.arange(k - 1, -1, -1)[None, :]
        signs = 1 - 2 * ((idx >> shifts) & 1)
        return signs @ t if k else np.zeros(1, dtype=np.complex128)

    sums = partial_sums(terms[:hi_n], hi_n)[:, None] + partial_sums(terms[hi_n:], lo_n)[None, :]
    gains = (sums.real**2 + sums.imag**2).ravel()
    flat = int(np.argmax(gains) if mode is Mode.CONSTRUCTIVE else np.argmin(gains))
    bits = np.array([(flat >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.uint8)
    return RisConfig(bits), float(gains[flat])


def complexity_estimate(n_t: int, n_r: int, n: int) -> int:
    """Dominant operation count ``N_T N_R N + N_T N_R min^2 max``."""
    if min(n_t, n_r, n) < 1:
        raise ValueError("all sizes must be >= 1")
    return n_t * n_r * n + n_t * n_r * min(n_t, n_r) ** 2 * max(n_t, n_r)
