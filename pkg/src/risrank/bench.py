"""Experiment harness: scenarios x RIS sizes x methods, averaged over
independent channel realizations.

Every method of a realization is evaluated on the very same channel draw,
and all randomness is keyed by ``(seed, realization)``, so the output is a
pure function of the configuration regardless of the worker count.
"""

import configparser
import csv
import enum
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .focuser import Mode, passive_beam_focus
from .metrics import difference_pct, rank_report
from .ris import RisConfig, compose_channel, fixed_phase_configs
from .scene import Regime, ScenarioSpec, build_geometry, default_copper_sheet, synthesize

__all__ = [
    "Method",
    "ConfigError",
    "ExperimentConfig",
    "MethodSummary",
    "load_config",
    "default_experiments",
    "run_experiment",
    "run_batch",
    "emit_table",
    "emit_realizations",
    "read_summary_csv",
    "CSV_COLUMNS",
]

log = logging.getLogger(__name__)

CSV_COLUMNS = ["scenario", "modules", "method", "mean_Re", "diff_pct", "realizations", "seed"]


class Method(str, enum.Enum):
    NO_RIS = "NoRis"
    BEAM_FOCUS = "BeamFocus"
    FIXED_PHASE = "FixedPhase"
    COPPER_SHEET = "CopperSheet"

    @property
    def label(self):
        return _LABELS[self]


# report row order
METHOD_ORDER = [Method.NO_RIS, Method.BEAM_FOCUS, Method.FIXED_PHASE, Method.COPPER_SHEET]
_LABELS = {
    Method.NO_RIS: "w/o RIS",
    Method.BEAM_FOCUS: "Passive Beam Focusing",
    Method.FIXED_PHASE: "Fixed Phase",
    Method.COPPER_SHEET: "Copper Sheet",
}


class ConfigError(ValueError):
    """Invalid experiment configuration; ``errors`` lists one message per field."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: ScenarioSpec = field(default_factory=ScenarioSpec)
    modules: int = 1
    elements_per_side: int = 16
    carrier_frequency: float = 5.24e9
    tx_distance: float = 0.6
    rx_distance: float = 2.0
    tx_angle_deg: float = 45.0
    rx_angle_deg: float = 45.0
    n_tx: int = 3
    n_rx: int = 3
    methods: tuple = tuple(METHOD_ORDER)
    mode: Mode = Mode.CONSTRUCTIVE
    hold_fixed: bool = False

    def __post_init__(self):
        errors = []
        if self.modules not in (1, 4):
            errors.append(f"geometry.modules: must be 1 or 4, got {self.modules}")
        if not self.carrier_frequency > 0:
            errors.append("geometry.carrier_frequency: must be positive")
        if self.elements_per_side < 1:
            errors.append("geometry.elements_per_side: must be >= 1")
        for name in ("tx_distance", "rx_distance"):
            if not getattr(self, name) > 0:
                errors.append(f"geometry.{name}: must be positive")
        if self.n_tx < 1 or self.n_rx < 1:
            errors.append("geometry.n_tx/n_rx: must be >= 1")
        try:
            methods = tuple(Method(m) for m in self.methods)
        except ValueError as exc:
            errors.append(f"methods.include: {exc}")
            methods = ()
        if not methods and not errors:
            errors.append("methods.include: at least one method is required")
        try:
            mode = Mode(self.mode)
        except ValueError as exc:
            errors.append(f"methods.mode: {exc}")
            mode = Mode.CONSTRUCTIVE
        if errors:
            raise ConfigError(errors)
        object.__setattr__(self, "methods", methods)
        object.__setattr__(self, "mode", mode)

    def geometry(self):
        return build_geometry(
            modules=self.modules,
            elements_per_side=self.elements_per_side,
            carrier_frequency=self.carrier_frequency,
            tx_distance=self.tx_distance,
            rx_distance=self.rx_distance,
            tx_angle_deg=self.tx_angle_deg,
            rx_angle_deg=self.rx_angle_deg,
            n_tx=self.n_tx,
            n_rx=self.n_rx,
        )


@dataclass
class MethodSummary:
    method: Method
    scenario: Regime
    modules: int
    mean_effective_rank: float
    difference_pct: float
    realizations: int
    seed: int
    records: list = field(default_factory=list, repr=False)
    details: dict = field(default_factory=dict)


def default_experiments(seed=0, realizations=100, **overrides):
    """Both regimes x {1, 4} modules x all methods."""
    return [
        ExperimentConfig(
            scenario=ScenarioSpec.for_regime(regime, seed=seed, realizations=realizations),
            modules=modules,
            **overrides,
        )
        for regime in Regime
        for modules in (1, 4)
    ]


# -- config file -------------------------------------------------------------

_SCENARIO_KEYS = {
    "regime": str,
    "seed": int,
    "realizations": int,
    "direct_dominant_gain": float,
    "scatter_power_db": float,
    "rician_k_db": float,
}
_GEOMETRY_KEYS = {
    "modules": str,
    "elements_per_side": int,
    "carrier_frequency": float,
    "tx_distance": float,
    "rx_distance": float,
    "tx_angle_deg": float,
    "rx_angle_deg": float,
    "n_tx": int,
    "n_rx": int,
}
_METHOD_KEYS = {"include": str, "mode": str, "hold_fixed": str}
_OUTPUT_KEYS = {"dir": str}
_SECTIONS = {
    "scenario": _SCENARIO_KEYS,
    "geometry": _GEOMETRY_KEYS,
    "methods": _METHOD_KEYS,
    "output": _OUTPUT_KEYS,
}


def _split(value):
    return [v.strip() for v in value.split(",") if v.strip()]


def load_config(text: str, seed: Optional[int] = None):
    """Parse an INI-style experiment file into a list of configurations.

    ``scenario.regime`` and ``geometry.modules`` accept comma-separated
    lists; the cartesian product is returned. Unknown sections or keys are
    errors. Returns ``(configs, output_dir)``.

    Example::

        [scenario]
        regime = LowRank, MediumRank
        realizations = 100
        seed = 7

        [geometry]
        modules = 1, 4

        [methods]
        include = NoRis, BeamFocus, FixedPhase, CopperSheet
        mode = Constructive

        [output]
        dir = results
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError([f"syntax: {exc}"]) from None

    errors = []
    values = {}
    for section in parser.sections():
        if section not in _SECTIONS:
            errors.append(f"{section}: unknown section")
            continue
        keys = _SECTIONS[section]
        for key, raw in parser.items(section):
            if key not in keys:
                errors.append(f"{section}.{key}: unknown key")
                continue
            try:
                values[(section, key)] = keys[key](raw)
            except ValueError:
                errors.append(f"{section}.{key}: cannot parse {raw!r}")
    if errors:
        raise ConfigError(errors)

    def get(section, key, default=None):
        return values.get((section, key), default)

    regimes = []
    for r in _split(get("scenario", "regime", "LowRank,MediumRank")):
        try:
            regimes.append(Regime(r))
        except ValueError:
            errors.append(f"scenario.regime: unknown regime {r!r}")
    modules = []
    for m in _split(get("geometry", "modules", "1,4")):
        try:
            modules.append(int(m))
        except ValueError:
            errors.append(f"geometry.modules: cannot parse {m!r}")
    hold = get("methods", "hold_fixed", "false").lower()
    if hold not in ("true", "false", "yes", "no", "1", "0"):
        errors.append(f"methods.hold_fixed: expected a boolean, got {hold!r}")
    if errors:
        raise ConfigError(errors)

    scenario_overrides = {
        k: v for (s, k), v in values.items() if s == "scenario" and k != "regime"
    }
    if seed is not None:
        scenario_overrides["seed"] = seed
    geometry_kwargs = {k: v for (s, k), v in values.items() if s == "geometry" and k != "modules"}
    methods = tuple(_split(get("methods", "include", ",".join(m.value for m in METHOD_ORDER))))

    configs = []
    for regime in regimes:
        try:
            scenario = ScenarioSpec.for_regime(regime, **scenario_overrides)
        except (TypeError, ValueError) as exc:
            raise ConfigError([f"scenario: {exc}"]) from None
        for m in modules:
            configs.append(
                ExperimentConfig(
                    scenario=scenario,
                    modules=m,
                    methods=methods,
                    mode=get("methods", "mode", Mode.CONSTRUCTIVE.value),
                    hold_fixed=hold in ("true", "yes", "1"),
                    **geometry_kwargs,
                )
            )
    return configs, get("output", "dir")


# -- running -----------------------------------------------------------------


def _evaluate(task):
    """All methods on one realization. Top-level so it pickles for workers."""
    cfg, geom, copper, index, held_bits = task
    ch = synthesize(geom, cfg.scenario, index)
    digest = ch.digest()
    out = {}
    base = rank_report(compose_channel(ch, None)).effective_rank
    out[Method.NO_RIS] = {"effective_rank": base}
    for method in cfg.methods:
        if method is Method.BEAM_FOCUS:
            if held_bits is not None:
                re = rank_report(compose_channel(ch, RisConfig.from_bitstring(held_bits))).effective_rank
                out[method] = {"effective_rank": re, "bits": held_bits}
            else:
                res = passive_beam_focus(ch, cfg.mode)
                out[method] = {
                    "effective_rank": res.best_effective_rank,
                    "pair": res.best_pair,
                    "bits": res.best_config.to_bitstring(),
                }
        elif method is Method.FIXED_PHASE:
            zero, pi = fixed_phase_configs(ch.n_elements)
            out[method] = {
                "all_zero": rank_report(compose_channel(ch, zero)).effective_rank,
                "all_pi": rank_report(compose_channel(ch, pi)).effective_rank,
            }
        elif method is Method.COPPER_SHEET:
            h = ch.h_direct + copper
            out[method] = {"effective_rank": rank_report(h).effective_rank}
    for rec in out.values():
        rec["realization"] = index
        rec["channel"] = digest
    return out


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> list[MethodSummary]:
    """Evaluate every requested method over all realizations of ``cfg``.

    The no-RIS mean is always computed and is the baseline of every
    difference. For Fixed Phase both the all-0 and the all-pi surfaces are
    evaluated and the one with the higher mean is reported.
    """
    geom = cfg.geometry()
    copper = default_copper_sheet(geom)
    spec = cfg.scenario
    held_bits = None
    if cfg.hold_fixed and Method.BEAM_FOCUS in cfg.methods:
        held_bits = passive_beam_focus(synthesize(geom, spec, 0), cfg.mode).best_config.to_bitstring()

    tasks = [(cfg, geom, copper, i, held_bits) for i in range(spec.realizations)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = [_evaluate(t) for t in tasks]

    base_mean = float(np.mean([r[Method.NO_RIS]["effective_rank"] for r in results]))
    summaries = []
    for method in METHOD_ORDER:
        if method not in cfg.methods:
            continue
        records = [r[method] for r in results]
        for rec, r in zip(records, results):
            # paired discipline: every method saw the same draw
            assert rec["channel"] == r[Method.NO_RIS]["channel"]
        details = {}
        if method is Method.FIXED_PHASE:
            m0 = float(np.mean([r["all_zero"] for r in records]))
            m1 = float(np.mean([r["all_pi"] for r in records]))
            variant = "all_zero" if m0 >= m1 else "all_pi"
            details = {"mean_all_zero": m0, "mean_all_pi": m1, "variant": variant}
            for rec in records:
                rec["effective_rank"] = rec[variant]
            log.info("fixed phase: all-0 mean %.4f, all-pi mean %.4f", m0, m1)
        if method is Method.NO_RIS:
            mean, diff = base_mean, 0.0
        else:
            mean = float(np.mean([rec["effective_rank"] for rec in records]))
            diff = difference_pct(mean, base_mean)
        summaries.append(
            MethodSummary(
                method=method,
                scenario=spec.regime,
                modules=cfg.modules,
                mean_effective_rank=mean,
                difference_pct=diff,
                realizations=spec.realizations,
                seed=spec.seed,
                records=records,
                details=details,
            )
        )
    return summaries


def run_batch(configs, workers: int = 1) -> list[MethodSummary]:
    out = []
    for cfg in configs:
        log.info(
            "running %s, %d module(s), %d realizations",
            cfg.scenario.regime.value,
            cfg.modules,
            cfg.scenario.realizations,
        )
        out.extend(run_experiment(cfg, workers=workers))
    return out


# -- reports -----------------------------------------------------------------


def _by_regime(summaries):
    groups = {}
    for s in summaries:
        groups.setdefault(Regime(s.scenario), []).append(s)
    return groups


def _format_table(regime, rows):
    modules = sorted({s.modules for s in rows})
    lookup = {(s.method, s.modules): s for s in rows}
    seeds = sorted({s.seed for s in rows})
    reals = sorted({s.realizations for s in rows})
    header = ["Method"]
    for m in modules:
        header += [f"R_e ({m} RIS)", "Difference %"]
    body = []
    for method in METHOD_ORDER:
        if not any((method, m) in lookup for m in modules):
            continue
        line = [method.label]
        for m in modules:
            s = lookup.get((method, m))
            if s is None:
                line += ["", ""]
            else:
                diff = "-" if method is Method.NO_RIS else f"{s.difference_pct:.4f}"
                line += [f"{s.mean_effective_rank:.4f}", diff]
        body.append(line)
    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
    fmt = lambda r: "  ".join(  # noqa: E731
        c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths))
    )
    title = f"{regime.value} effective rank (seed {', '.join(map(str, seeds))}, {', '.join(map(str, reals))} realizations)"
    rule = "-" * len(fmt(header))
    return "\n".join([title, rule, fmt(header), rule] + [fmt(r) for r in body] + [rule]) + "\n"


def emit_table(summaries, destination) -> str:
    """Write ``table_<regime>.csv`` and ``table_<regime>.txt`` per regime
    into the ``destination`` directory and return the text tables."""
    if not summaries:
        raise ValueError("no summaries to report")
    dest = Path(destination)
    dest.mkdir(parents=True, exist_ok=True)
    texts = []
    for regime, rows in _by_regime(summaries).items():
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        order = {m: i for i, m in enumerate(METHOD_ORDER)}
        for s in sorted(rows, key=lambda s: (s.modules, order[Method(s.method)])):
            writer.writerow(
                [
                    regime.value,
                    s.modules,
                    Method(s.method).value,
                    repr(float(s.mean_effective_rank)),
                    repr(float(s.difference_pct)),
                    s.realizations,
                    s.seed,
                ]
            )
        (dest / f"table_{regime.value}.csv").write_text(buf.getvalue(), encoding="utf-8")
        text = _format_table(regime, rows)
        (dest / f"table_{regime.value}.txt").write_text(text, encoding="utf-8")
        texts.append(text)
    return "\n".join(texts)


def emit_realizations(summaries, destination) -> None:
    """Per-realization plot data and the beam-focusing bit-string log."""
    dest = Path(destination)
    dest.mkdir(parents=True, exist_ok=True)
    for regime, rows in _by_regime(summaries).items():
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["scenario", "modules", "method", "realization", "Re", "channel_sha256"])
        bits = []
        for s in rows:
            for rec in s.records:
                writer.writerow(
                    [regime.value, s.modules, Method(s.method).value, rec["realization"],
                     repr(float(rec["effective_rank"])), rec["channel"]]
                )
                if "bits" in rec:
                    pair = rec.get("pair")
                    pair_txt = "held" if pair is None else f"{pair[0]},{pair[1]}"
                    bits.append(
                        f"modules={s.modules} realization={rec['realization']} "
                        f"pair={pair_txt} bits={rec['bits']}\n"
                    )
        (dest / f"realizations_{regime.value}.csv").write_text(buf.getvalue(), encoding="utf-8")
        if bits:
            (dest / f"ris_configs_{regime.value}.log").write_text("".join(bits), encoding="utf-8")


def read_summary_csv(path) -> list[MethodSummary]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_COLUMNS:
            raise ValueError(f"unexpected columns {reader.fieldnames}")
        for row in reader:
            out.append(
                MethodSummary(
                    method=Method(row["method"]),
                    scenario=Regime(row["scenario"]),
                    modules=int(row["modules"]),
                    mean_effective_rank=float(row["mean_Re"]),
                    difference_pct=float(row["diff_pct"]),
                    realizations=int(row["realizations"]),
                    seed=int(row["seed"]),
                )
            )
    return out
