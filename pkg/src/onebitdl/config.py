"""System configuration, dimension presets and scenario files.

Scenario files are plain TOML with a [system] table (dimensions, seeds) and an
[experiment] table (what to run and over which axes); see scenarios/ for
annotated examples. Precedence, lowest to highest: desk-scale defaults, the
full-scale preset (--full-scale), scenario keys, command-line flags.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised only on 3.10 installs
    import tomli as tomllib

from .errors import ConfigError

__all__ = ["SystemConfig", "ExperimentSpec", "centered_band", "full_band",
           "desk_scale", "full_scale", "load_scenario"]


def centered_band(fft_size: int, count: int) -> tuple:
    """`count` subcarriers symmetric about DC with DC itself excluded:
    {1 .. count/2} and {N - count/2 .. N - 1}."""
    if count % 2 or count <= 0:
        raise ConfigError("subcarrier count must be positive and even")
    if count >= fft_size:
        raise ConfigError("subcarrier count must be below the FFT size (DC is excluded)")
    half = count // 2
    return tuple(range(1, half + 1)) + tuple(range(fft_size - half, fft_size))


def full_band(fft_size: int) -> tuple:
    return tuple(range(fft_size))


@dataclass
class SystemConfig:
    """Static description of one link setup.

    Defaults are the desk scale: B=32 antennas, U=4 UEs, N=512 with 300 used
    subcarriers, prefix 36, 10 channel taps (same oversampling and prefix ratios
    as the full scale, small enough for laptop Monte-Carlo runs).
    """

    num_antennas: int = 32
    num_ues: int = 4
    fft_size: int = 512
    cp_len: int = 36
    num_taps: int = 10
    training_symbols: int = 1
    data_symbols: int = 10
    used_subcarriers: tuple = ()
    noise_power: float = 1.0
    dac_mode: str = "one_bit"
    gain_mode: str = "ls"
    trials: int = 500
    master_seed: int = 1

    def __post_init__(self):
        if not self.used_subcarriers:
            self.used_subcarriers = centered_band(self.fft_size, 300)
        self.used_subcarriers = tuple(int(k) for k in self.used_subcarriers)
        self.validate()

    def validate(self):
        c = self
        if min(c.num_antennas, c.num_ues, c.fft_size, c.num_taps) < 1:
            raise ConfigError("antennas, UEs, FFT size and tap count must be positive")
        if c.num_ues > c.num_antennas:
            raise ConfigError("spatial zero-forcing needs at least as many antennas as UEs")
        if c.cp_len < c.num_taps - 1:
            raise ConfigError(
                f"cyclic prefix ({c.cp_len}) must cover the channel memory "
                f"({c.num_taps - 1} samples)")
        if c.fft_size % 2 or c.cp_len % 2:
            raise ConfigError("FFT size and prefix length must be even "
                              "(half-symbol correlation, half-prefix windows)")
        if c.cp_len >= c.fft_size:
            raise ConfigError("prefix must be shorter than the symbol body")
        ks = c.used_subcarriers
        if len(ks) == 0:
            raise ConfigError("the used subcarrier set is empty")
        if len(set(ks)) != len(ks) or list(ks) != sorted(ks):
            raise ConfigError("used subcarriers must be strictly ascending")
        if ks[0] < 0 or ks[-1] >= c.fft_size:
            raise ConfigError("used subcarriers must lie in [0, fft_size)")
        if c.training_symbols < 0 or c.data_symbols < 1:
            raise ConfigError("need a non-negative training count and at least one data symbol")
        if c.noise_power < 0:
            raise ConfigError("noise power must be non-negative")
        if c.dac_mode not in ("one_bit", "infinite"):
            raise ConfigError(f"unknown dac_mode {c.dac_mode!r}")
        if c.gain_mode not in ("genie", "ls"):
            raise ConfigError(f"unknown gain_mode {c.gain_mode!r}")
        if c.trials < 1:
            raise ConfigError("need at least one trial")

    @property
    def oversampling_ratio(self) -> float:
        return self.fft_size / len(self.used_subcarriers)

    @property
    def symbol_span(self) -> int:
        return self.fft_size + self.cp_len

    @property
    def max_timing_offset(self) -> int:
        """Largest |tau| the offset prior draws: N + G/2."""
        return self.fft_size + self.cp_len // 2


def desk_scale() -> SystemConfig:
    return SystemConfig()


def full_scale() -> SystemConfig:
    """Full-scale dimensions: B=128, U=8, N=2048, 1200 used subcarriers, prefix 144."""
    return SystemConfig(num_antennas=128, num_ues=8, fft_size=2048, cp_len=144,
                        num_taps=10, used_subcarriers=centered_band(2048, 1200))


@dataclass
class ExperimentSpec:
    """What to run. Axes not used by an experiment kind stay empty.

    For "sindr-sweep": a timing sweep (dtau_values, each at every CFO in
    deps_for_dtau) plus a CFO sweep (deps_values, each at every timing in
    dtau_for_deps); duplicate grid points are dropped, first occurrence wins.
    For "sync-rmse" / "ber-curve": an SNR sweep in dB (snr_db).
    """

    kind: str
    dtau_values: tuple = ()
    deps_for_dtau: tuple = (0.0,)
    deps_values: tuple = ()
    dtau_for_deps: tuple = ()
    snr_db: tuple = ()

    KINDS = ("sindr-sweep", "sync-rmse", "ber-curve")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if self.kind == "sindr-sweep":
            if not self.dtau_values and not self.deps_values:
                raise ConfigError("sindr-sweep needs dtau_values and/or deps_values")
            if self.deps_values and not self.dtau_for_deps:
                raise ConfigError("a CFO sweep needs dtau_for_deps")
        else:
            if not self.snr_db:
                raise ConfigError(f"{self.kind} needs an snr_db axis")

    def sindr_grid(self) -> list:
        """Ordered (dtau, deps) grid, duplicates removed."""
        points, seen = [], set()
        for deps in self.deps_for_dtau:
            for dtau in self.dtau_values:
                key = (int(dtau), float(deps))
                if key not in seen:
                    seen.add(key)
                    points.append(key)
        for dtau in self.dtau_for_deps:
            for deps in self.deps_values:
                key = (int(dtau), float(deps))
                if key not in seen:
                    seen.add(key)
                    points.append(key)
        return points


_SYSTEM_KEYS = {
    "antennas": "num_antennas",
    "ues": "num_ues",
    "fft_size": "fft_size",
    "cp_len": "cp_len",
    "taps": "num_taps",
    "training_symbols": "training_symbols",
    "data_symbols": "data_symbols",
    "noise_power": "noise_power",
    "dac_mode": "dac_mode",
    "gain_mode": "gain_mode",
    "trials": "trials",
    "seed": "master_seed",
}

_EXPERIMENT_KEYS = {
    "kind": "kind",
    "dtau_values": "dtau_values",
    "deps_for_dtau": "deps_for_dtau",
    "deps_values": "deps_values",
    "dtau_for_deps": "dtau_for_deps",
    "snr_db": "snr_db",
}


def _expand_range(value, label):
    # dtau_range = [lo, hi] expands to every integer in [lo, hi]
    if not (isinstance(value, list) and len(value) == 2
            and all(isinstance(v, int) for v in value)):
        raise ConfigError(f"{label} must be a two-integer array [lo, hi]")
    lo, hi = value
    if hi < lo:
        raise ConfigError(f"{label} is empty ({lo} > {hi})")
    return tuple(range(lo, hi + 1))


def load_scenario(path, base: Optional[SystemConfig] = None):
    """Parse a scenario file into (ExperimentSpec or None, SystemConfig).

    `base` supplies the dimension preset the scenario overrides (default: desk
    scale). The experiment table may be omitted when the caller provides the
    kind elsewhere; system keys are all optional.
    """
    with open(path, "rb") as f:
        try:
            doc = tomllib.load(f)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"scenario {path}: {e}") from None

    unknown = set(doc) - {"system", "experiment"}
    if unknown:
        raise ConfigError(f"scenario {path}: unknown table(s) {sorted(unknown)}")

    cfg = base if base is not None else desk_scale()
    sys_table = doc.get("system", {})
    updates = {}
    for key, value in sys_table.items():
        if key == "subcarriers":
            if value == "full":
                updates["used_subcarriers"] = full_band(
                    sys_table.get("fft_size", cfg.fft_size))
            elif isinstance(value, int):
                updates["used_subcarriers"] = centered_band(
                    sys_table.get("fft_size", cfg.fft_size), value)
            elif isinstance(value, list):
                updates["used_subcarriers"] = tuple(int(k) for k in value)
            else:
                raise ConfigError('subcarriers must be "full", a count, or an index array')
        elif key in _SYSTEM_KEYS:
            updates[_SYSTEM_KEYS[key]] = value
        else:
            raise ConfigError(f"scenario {path}: unknown system key {key!r}")
    if ("fft_size" in updates and "used_subcarriers" not in updates
            and updates["fft_size"] != cfg.fft_size):
        raise ConfigError("changing fft_size requires an explicit subcarriers key")
    try:
        cfg = replace(cfg, **updates)
    except TypeError as e:
        raise ConfigError(f"scenario {path}: {e}") from None

    exp_table = doc.get("experiment")
    spec = None
    if exp_table is not None:
        fields = {}
        for key, value in exp_table.items():
            if key == "dtau_range":
                fields["dtau_values"] = _expand_range(value, "dtau_range")
            elif key in _EXPERIMENT_KEYS:
                fields[_EXPERIMENT_KEYS[key]] = (tuple(value) if isinstance(value, list)
                                                 else value)
            else:
                raise ConfigError(f"scenario {path}: unknown experiment key {key!r}")
        if "kind" not in fields:
            raise ConfigError(f"scenario {path}: the experiment table needs a kind")
        spec = ExperimentSpec(**fields)
    cfg.validate()
    return spec, cfg
