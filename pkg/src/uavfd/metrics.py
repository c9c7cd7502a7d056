"""SINR, capacity and coverage statistics.

EVM and SINR are tied by the usual identity SINR_dB = -20*log10(EVM_rms)
for a unit-energy reference constellation.  Full-duplex links use the whole
band continuously; the TDD baseline pays its duty cycle and guard-interval
overhead but sees no co-channel interference.
"""

import math
from dataclasses import dataclass

DEFAULT_SINR_CEILING_DB = 40.0  # cap applied when EVM underflows to 0


@dataclass(frozen=True)
class CapacityConfig:
    bandwidth_hz: float = 10e6
    tdd_duty: float = 0.5
    guard_overhead: float = 0.2

    def __post_init__(self):
        if self.bandwidth_hz <= 0.0:
            raise ValueError("bandwidth_hz must be > 0")
        if not (0.0 < self.tdd_duty < 1.0 or self.tdd_duty == 1.0):
            raise ValueError(f"tdd_duty must be in (0, 1], got {self.tdd_duty}")
        if not (0.0 <= self.guard_overhead < 1.0):
            raise ValueError(f"guard_overhead must be in [0, 1), got {self.guard_overhead}")


def sinr_from_evm(evm_rms: float) -> float:
    """SINR in dB implied by an RMS error vector magnitude.

    evm_rms = 0 (numerically perfect reception) maps to +inf; cap it with
    apply_sinr_ceiling before feeding capacity formulas.
    """
    if evm_rms < 0.0:
        raise ValueError(f"evm_rms must be >= 0, got {evm_rms}")
    if evm_rms == 0.0:
        return math.inf
    return -20.0 * math.log10(evm_rms)


def apply_sinr_ceiling(sinr_db: float, ceiling_db: float = DEFAULT_SINR_CEILING_DB) -> float:
    """Clamp an SINR (possibly +inf) to a finite ceiling."""
    return min(sinr_db, ceiling_db)


def sinr_analytic(signal_dbm: float, interference_dbm: float, noise_dbm: float) -> float:
    """10*log10(S / (I + N)) with all inputs in dBm.

    interference_dbm or noise_dbm may be -inf to mark an absent term.
    """
    i_lin = 10.0 ** (interference_dbm / 10.0)
    n_lin = 10.0 ** (noise_dbm / 10.0)
    if i_lin + n_lin == 0.0:
        return math.inf
    return signal_dbm - 10.0 * math.log10(i_lin + n_lin)


def capacity_fd(cfg: CapacityConfig, sinr_db: float) -> float:
    """Full-duplex Shannon capacity in bit/s; the link owns the band continuously."""
    if sinr_db == -math.inf:
        return 0.0
    return cfg.bandwidth_hz * math.log2(1.0 + 10.0 ** (sinr_db / 10.0))


def capacity_tdd(cfg: CapacityConfig, snr_db: float) -> float:
    """TDD baseline capacity in bit/s.

    Orthogonal time slots mean no co-channel interference, but the link only
    holds the channel for tdd_duty of the time and loses guard_overhead of
    that to switching guard intervals.
    """
    if snr_db == -math.inf:
        return 0.0
    factor = cfg.tdd_duty * (1.0 - cfg.guard_overhead)
    return factor * cfg.bandwidth_hz * math.log2(1.0 + 10.0 ** (snr_db / 10.0))


def cdf(values: list[float]) -> list[tuple[float, float]]:
    """Right-continuous empirical CDF as (value, cumulative fraction) steps.

    Ties collapse into a single step; the last fraction is exactly 1.0.
    """
    if not values:
        raise ValueError("cdf of an empty sample is undefined")
    n = len(values)
    out = []
    seen = 0
    for v in sorted(values):
        seen += 1
        if out and out[-1][0] == v:
            out[-1] = (v, seen / n)
        else:
            out.append((v, seen / n))
    return out


def cdf_at(values: list[float], x: float) -> float:
    """Empirical CDF evaluated at x: fraction of values <= x."""
    if not values:
        raise ValueError("cdf of an empty sample is undefined")
    return sum(1 for v in values if v <= x) / len(values)


def coverage_fraction(values: list[float], threshold: float) -> float:
    """Fraction of values strictly below threshold, in [0, 1]."""
    if not values:
        raise ValueError("coverage of an empty sample is undefined")
    return sum(1 for v in values if v < threshold) / len(values)
