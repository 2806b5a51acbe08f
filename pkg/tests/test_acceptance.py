"""Exit criteria. Each test is tagged with its criterion number; the terminal
summary prints one PASS/FAIL line per criterion."""

import time

import numpy as np
import pytest

from risrank import bench
from risrank.bench import Method, default_experiments, emit_table, run_batch
from risrank.csi import CsiRecord, ingest_csi, write_csi
from risrank.focuser import Mode, OpCounters, exhaustive_pair_optimum, greedy_flip_pair, passive_beam_focus
from risrank.linalg import frobenius_norm, svd
from risrank.metrics import effective_rank, rank_report
from risrank.scene import ChannelSet, Regime, ScenarioSpec, build_geometry, default_copper_sheet, synthesize

criterion = pytest.mark.criterion


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture(scope="module")
def default_run():
    """The full default grid, timed per regime."""
    summaries, elapsed = [], {}
    for regime in Regime:
        configs = [c for c in default_experiments(seed=0) if c.scenario.regime is regime]
        t0 = time.perf_counter()
        summaries += run_batch(configs)
        elapsed[regime] = time.perf_counter() - t0
    table = {(Regime(s.scenario), s.modules, s.method): s.mean_effective_rank for s in summaries}
    return summaries, table, elapsed


@criterion(1, "effective-rank analytic suite")
def test_ac1_effective_rank():
    t0 = time.perf_counter()
    assert abs(effective_rank([1, 1, 1]) - 3) <= 1e-9
    assert abs(effective_rank([5, 0, 0]) - 1) <= 1e-9
    assert abs(effective_rank([2, 1, 1]) - 2**1.5) <= 1e-9
    rng = np.random.default_rng(100)
    for _ in range(1000):
        q = rng.uniform(0, 10, int(rng.integers(1, 6)))
        q[0] += 1e-3
        base = effective_rank(q)
        c = 10 ** rng.uniform(-6, 6)
        assert abs(effective_rank(c * q) - base) <= 1e-12 * base
        assert abs(effective_rank(rng.permutation(q)) - base) <= 1e-12 * base
    assert time.perf_counter() - t0 < 1.0


@criterion(2, "SVD reconstruction, orthonormality and energy identities")
def test_ac2_svd():
    t0 = time.perf_counter()
    rng = np.random.default_rng(200)
    shapes = [(1, 1), (2, 3), (3, 3), (3, 2), (1, 3), (3, 1), (2, 2)]
    for i in range(1000):
        h = crandn(rng, *shapes[i % len(shapes)])
        r = svd(h)
        q = r.singular_values
        assert np.all(q[:-1] >= q[1:]) and np.all(q >= 0)
        fro = frobenius_norm(h)
        assert frobenius_norm(h - r.reconstruct()) <= 1e-10 * max(1.0, fro)
        for basis in (r.left_vectors, r.right_vectors):
            k = basis.shape[1]
            assert np.max(np.abs(basis.conj().T @ basis - np.eye(k))) <= 1e-10
        assert abs(np.sum(q**2) - fro**2) <= 1e-10 * fro**2
    assert time.perf_counter() - t0 < 5.0


@criterion(3, "Algorithm-1 fidelity: hand traces, monotone traces, greedy vs exhaustive")
def test_ac3_greedy_fidelity():
    t0 = time.perf_counter()
    cfg, trace = greedy_flip_pair([1, -1], [1, 1])
    assert cfg.to_bitstring() == "10" and trace[-1] == 4
    cfg, trace = greedy_flip_pair([1, 1j], [1, 1])
    assert cfg.to_bitstring() == "11" and trace[-1] == pytest.approx(2, abs=1e-15)

    rng = np.random.default_rng(300)
    for i in range(10_000):
        n = int(rng.integers(1, 33))
        mode = Mode.CONSTRUCTIVE if i % 2 == 0 else Mode.DESTRUCTIVE
        _, tr = greedy_flip_pair(crandn(rng, n), crandn(rng, n), mode)
        steps = np.diff(tr)
        assert np.all(steps >= 0) if mode is Mode.CONSTRUCTIVE else np.all(steps <= 0)

    for _ in range(500):
        h1, h2 = crandn(rng, 10), crandn(rng, 10)
        _, up = greedy_flip_pair(h1, h2, Mode.CONSTRUCTIVE)
        _, best = exhaustive_pair_optimum(h1, h2, Mode.CONSTRUCTIVE)
        assert up[-1] <= best * (1 + 1e-12)
        _, down = greedy_flip_pair(h1, h2, Mode.DESTRUCTIVE)
        _, worst = exhaustive_pair_optimum(h1, h2, Mode.DESTRUCTIVE)
        assert down[-1] >= worst - 1e-12 * max(1.0, up[0])
    assert time.perf_counter() - t0 < 30.0


@criterion(4, "counter law")
@pytest.mark.parametrize("n_t, n_r, n", [(3, 3, 256), (3, 3, 1024), (2, 2, 8)])
def test_ac4_counter_law(n_t, n_r, n):
    if n in (256, 1024):
        ch = synthesize(build_geometry(n // 256), ScenarioSpec(), 0)
    else:
        rng = np.random.default_rng(400)
        ch = ChannelSet(crandn(rng, n_r, n_t), crandn(rng, n, n_t), crandn(rng, n, n_r))
    counters = OpCounters()
    passive_beam_focus(ch, counters=counters)
    assert counters.gain_evaluations == n_t * n_r * (n + 1)
    assert counters.svd_evaluations == n_t * n_r


@criterion(5, "qualitative low-rank table reproduction")
def test_ac5_low_rank(default_run):
    _, t, elapsed = default_run
    low = Regime.LOW_RANK
    no_ris = t[(low, 1, Method.NO_RIS)]
    bf1, bf4 = t[(low, 1, Method.BEAM_FOCUS)], t[(low, 4, Method.BEAM_FOCUS)]
    print(f"LowRank: NoRis {no_ris:.4f}, BeamFocus(1) {bf1:.4f}, BeamFocus(4) {bf4:.4f}")
    assert bf4 - no_ris >= 0.8
    assert bf4 > bf1 > no_ris
    assert elapsed[low] < 300


@criterion(6, "qualitative medium-rank table reproduction")
def test_ac6_medium_rank(default_run):
    _, t, elapsed = default_run
    rel = {}
    for regime in Regime:
        base = t[(regime, 1, Method.NO_RIS)]
        rel[regime] = {m: (t[(regime, m, Method.BEAM_FOCUS)] - base) / base for m in (1, 4)}
    print(f"relative BeamFocus gains: {rel}")
    for m in (1, 4):
        assert rel[Regime.MEDIUM_RANK][m] > 0
        assert rel[Regime.MEDIUM_RANK][m] < rel[Regime.LOW_RANK][m]
    assert elapsed[Regime.MEDIUM_RANK] < 300


@criterion(7, "copper-sheet single dominant mode")
def test_ac7_copper_sheet():
    h = default_copper_sheet(build_geometry(1))
    re = rank_report(h).effective_rank
    print(f"copper contribution R_e = {re:.6f}")
    assert re <= 1.3


@criterion(8, "determinism across worker counts")
def test_ac8_determinism(default_run, tmp_path):
    summaries, _, _ = default_run
    emit_table(summaries, tmp_path / "serial")
    again = run_batch(default_experiments(seed=0), workers=3)
    emit_table(again, tmp_path / "parallel")
    for regime in Regime:
        name = f"table_{regime.value}.csv"
        a = (tmp_path / "serial" / name).read_bytes()
        b = (tmp_path / "parallel" / name).read_bytes()
        assert a == b


@criterion(9, "CSI ingest round trip")
def test_ac9_csi_round_trip(tmp_path):
    rng = np.random.default_rng(900)
    records = [CsiRecord(i % 52, crandn(rng, 3, 3), f"{i:06d}") for i in range(100)]
    path = tmp_path / "capture.csi"
    write_csi(path, records)
    back = ingest_csi(path)
    assert len(back) == 100
    for a, b in zip(records, back):
        assert a.matrix.tobytes() == b.matrix.tobytes()
        assert (a.subcarrier, a.timestamp) == (b.subcarrier, b.timestamp)
        direct = effective_rank(svd(a.matrix).singular_values)
        assert abs(rank_report(b.matrix).effective_rank - direct) <= 1e-12
