"""Design-time platform parameters, validation, and derived capacities.

A :class:`PlatformConfig` describes one generated accelerator instance:
the MAC array geometry (``mu`` x ``nu`` x ``ku``), operand precisions,
stream buffer depth, scratchpad port counts / widths, and bank geometry.
The config is immutable; all derived quantities are properties, so a
validated config can be shared freely across concurrent simulations.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, replace
from pathlib import Path


class ConfigError(ValueError):
    """Base class for platform configuration errors."""


class ZeroParam(ConfigError):
    """A structural count parameter is zero or negative."""


class PrecisionError(ConfigError):
    """Element/accumulator widths are unsupported or cannot overflow-safely accumulate."""


class BandwidthError(ConfigError):
    """Memory ports cannot sustain one tile of traffic per cycle."""


SUPPORTED_INPUT_BITS = (2, 4, 8)

_COUNT_FIELDS = (
    "mu", "nu", "ku", "stream_depth", "r_mem", "w_mem",
    "word_bits", "n_bank", "bank_depth",
)


@dataclass(frozen=True)
class PlatformConfig:
    """All design-time parameters of one platform instance.

    Defaults are the reference 8x8x8 int8 instance: depth-3 stream
    buffers, 16 read / 32 write ports of 64 bit, 32 banks x 1056 words.
    ``freq_mhz`` is used only for GOPS reporting and never affects
    cycle-level behavior.
    """

    mu: int = 8            # array rows
    nu: int = 8            # array columns
    ku: int = 8            # dot-product unit vector length
    pa_bits: int = 8       # A element width
    pb_bits: int = 8       # B element width
    pc_bits: int = 32      # C / accumulator width
    stream_depth: int = 3  # prefetch FIFO and output buffer depth, in tiles
    r_mem: int = 16        # scratchpad read ports
    w_mem: int = 32        # scratchpad write ports
    word_bits: int = 64    # port data width
    n_bank: int = 32       # scratchpad banks
    bank_depth: int = 1056 # words per bank
    freq_mhz: float = 200.0

    # ---- derived geometry -------------------------------------------------

    @property
    def word_bytes(self) -> int:
        return self.word_bits // 8

    @property
    def capacity_bytes(self) -> int:
        return self.n_bank * self.bank_depth * self.word_bits // 8

    @property
    def capacity_words(self) -> int:
        return self.n_bank * self.bank_depth

    @property
    def a_tile_bits(self) -> int:
        return self.mu * self.ku * self.pa_bits

    @property
    def b_tile_bits(self) -> int:
        return self.ku * self.nu * self.pb_bits

    @property
    def c_tile_bits(self) -> int:
        return self.mu * self.nu * self.pc_bits

    @property
    def a_tile_words(self) -> int:
        return self.a_tile_bits // self.word_bits

    @property
    def b_tile_words(self) -> int:
        return self.b_tile_bits // self.word_bits

    @property
    def c_tile_words(self) -> int:
        return self.c_tile_bits // self.word_bits

    @property
    def a_row_words(self) -> int:
        """Words per A-tile row (one read port group)."""
        return self.ku * self.pa_bits // self.word_bits

    @property
    def b_row_words(self) -> int:
        return self.nu * self.pb_bits // self.word_bits

    @property
    def c_row_words(self) -> int:
        return self.nu * self.pc_bits // self.word_bits

    @property
    def writeback_cycles(self) -> int:
        """Conflict-free cycles to drain one output tile."""
        return math.ceil(self.c_tile_bits / (self.w_mem * self.word_bits))

    @property
    def peak_ops_per_cycle(self) -> int:
        return peak_ops_per_cycle(self)

    @property
    def peak_gops(self) -> float:
        return self.peak_ops_per_cycle * self.freq_mhz / 1000.0

    def replace(self, **kwargs) -> "PlatformConfig":
        return replace(self, **kwargs)

    def to_dict(self) -> dict:
        return asdict(self)


def peak_ops_per_cycle(cfg: PlatformConfig) -> int:
    """Multiply + add for every MAC lane: 2 * mu * ku * nu."""
    return 2 * cfg.mu * cfg.ku * cfg.nu


def validate(cfg: PlatformConfig) -> PlatformConfig:
    """Check all structural invariants and return the config unchanged.

    Idempotent: validating a validated config is a no-op. Raises
    :class:`ZeroParam`, :class:`PrecisionError` or :class:`BandwidthError`
    with a message naming the violated constraint.
    """
    for name in _COUNT_FIELDS:
        value = getattr(cfg, name)
        if not isinstance(value, int) or value < 1:
            raise ZeroParam(f"{name} must be a positive integer, got {value!r}")

    if cfg.pa_bits not in SUPPORTED_INPUT_BITS:
        raise PrecisionError(f"pa_bits must be one of {SUPPORTED_INPUT_BITS}, got {cfg.pa_bits}")
    if cfg.pb_bits not in SUPPORTED_INPUT_BITS:
        raise PrecisionError(f"pb_bits must be one of {SUPPORTED_INPUT_BITS}, got {cfg.pb_bits}")

    acc_floor = cfg.pa_bits + cfg.pb_bits + math.ceil(math.log2(cfg.ku)) if cfg.ku > 1 \
        else cfg.pa_bits + cfg.pb_bits
    if cfg.pc_bits < acc_floor:
        raise PrecisionError(
            f"pc_bits={cfg.pc_bits} below overflow-safe floor "
            f"pa_bits+pb_bits+ceil(log2(ku))={acc_floor}"
        )

    # Streamers address whole words; tile rows must pack into full words.
    for label, bits in (("ku*pa_bits", cfg.ku * cfg.pa_bits),
                        ("nu*pb_bits", cfg.nu * cfg.pb_bits),
                        ("nu*pc_bits", cfg.nu * cfg.pc_bits)):
        if bits % cfg.word_bits != 0:
            raise PrecisionError(
                f"{label}={bits} must be a multiple of word_bits={cfg.word_bits} "
                "so tile rows align to memory words"
            )

    read_need = cfg.a_tile_bits + cfg.b_tile_bits
    read_have = cfg.r_mem * cfg.word_bits
    if read_have < read_need:
        raise BandwidthError(
            f"read ports undersized: r_mem*word_bits = {read_have} bits/cycle, "
            f"one A'+B' tile needs mu*ku*pa_bits + ku*nu*pb_bits = {read_need}"
        )

    write_need = cfg.c_tile_bits
    write_have = cfg.w_mem * cfg.word_bits
    if write_have < write_need:
        raise BandwidthError(
            f"write ports undersized: w_mem*word_bits = {write_have} bits/cycle, "
            f"one C' tile needs mu*nu*pc_bits = {write_need}"
        )

    return cfg


# ---- config file handling --------------------------------------------------

def config_from_dict(raw: dict) -> PlatformConfig:
    known = {f for f in PlatformConfig.__dataclass_fields__}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    return PlatformConfig(**raw)


def load_config_file(path: str | Path, overrides: dict | None = None) -> PlatformConfig:
    """Load a JSON config file; explicit overrides win over file values."""
    raw = json.loads(Path(path).read_text())
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config file must hold a JSON object")
    if overrides:
        raw.update({k: v for k, v in overrides.items() if v is not None})
    return config_from_dict(raw)


def save_config_file(cfg: PlatformConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(cfg.to_dict(), indent=2) + "\n")


DEFAULT_CONFIG = PlatformConfig()
