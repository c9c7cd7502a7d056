"""OFDM baseband transmitter and the combiner/attenuator rig.

The waveform mirrors an LTE-like 10 MHz configuration: 1024-point FFT at
15.36 MHz sampling (15 kHz subcarrier spacing), 600 active subcarriers
centered around an unused DC bin, comb pilots on every 8th active
subcarrier, 16QAM data, and a repeated-half preamble for timing metric
synchronization.  The carrier frequency is metadata only; all processing
is complex baseband.

Frames carry their transmitted data symbols so a receiver can compute a
reference (genie) EVM.  `impair` models the measurement rig: two adjustable
attenuators into a signal combiner plus receiver noise, with the interferer
free-running at an arbitrary (asynchronous) sample offset.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fec import TAIL_BITS, coded_length, fec_encode

BITS_PER_SYMBOL = 4  # 16QAM
_QAM_SCALE = 1.0 / math.sqrt(10.0)
_QAM_LEVELS = np.array([-3.0, -1.0, 1.0, 3.0])

_PILOT_SEED = 0x0FD1
_PREAMBLE_SEED = 0x0FD2


@dataclass(frozen=True)
class OfdmParams:
    fft_size: int = 1024
    cp_length: int = 128
    active_subcarriers: int = 600
    pilot_spacing: int = 8
    modulation: str = "16QAM"
    sampling_rate_hz: float = 15.36e6
    bandwidth_hz: float = 10e6
    carrier_freq_hz: float = 5.7e9
    preamble_boost_db: float = 3.0

    def __post_init__(self):
        if self.active_subcarriers >= self.fft_size:
            raise ValueError("active_subcarriers must be < fft_size")
        if self.cp_length >= self.fft_size:
            raise ValueError("cp_length must be < fft_size")
        if self.active_subcarriers % 2 != 0:
            raise ValueError("active_subcarriers must be even (symmetric around DC)")
        if self.pilot_spacing < 2 or self.active_subcarriers % self.pilot_spacing != 0:
            raise ValueError("pilot_spacing must be >= 2 and divide active_subcarriers")
        if self.fft_size % 2 != 0:
            raise ValueError("fft_size must be even")
        if self.modulation != "16QAM":
            raise ValueError(f"unsupported modulation {self.modulation!r}")

    @property
    def symbol_samples(self) -> int:
        return self.fft_size + self.cp_length

    @property
    def preamble_samples(self) -> int:
        return self.fft_size

    @property
    def n_pilots(self) -> int:
        return self.active_subcarriers // self.pilot_spacing

    @property
    def n_data_subcarriers(self) -> int:
        return self.active_subcarriers - self.n_pilots

    @property
    def subcarrier_spacing_hz(self) -> float:
        return self.sampling_rate_hz / self.fft_size

    def frame_samples(self, n_symbols: int) -> int:
        return self.preamble_samples + n_symbols * self.symbol_samples

    def payload_bits(self, n_symbols: int) -> int:
        """Payload size that exactly fills n_symbols after FEC."""
        if n_symbols < 1:
            raise ValueError("n_symbols must be >= 1")
        coded = n_symbols * self.n_data_subcarriers * BITS_PER_SYMBOL
        if coded % 2 != 0:
            raise ValueError("odd coded bit count; adjust subcarrier layout")
        n = coded // 2 - TAIL_BITS
        if n <= 0:
            raise ValueError("frame too small to carry the FEC tail")
        return n

    def data_power_share(self, n_symbols: int) -> float:
        """Average power of the data-symbol region of a unit-power frame.

        The preamble is boosted by preamble_boost_db before the whole frame
        is normalized to unit average power, so data samples carry
        T / (beta*N_pre + M) where T is the frame length, M the data-region
        length and beta the linear boost.
        """
        beta = 10.0 ** (self.preamble_boost_db / 10.0)
        m = n_symbols * self.symbol_samples
        t = self.preamble_samples + m
        return t / (beta * self.preamble_samples + m)


@lru_cache(maxsize=8)
def _subcarrier_maps(params: OfdmParams):
    """FFT bin numbers of active subcarriers plus pilot/data positions."""
    half = params.active_subcarriers // 2
    n = params.fft_size
    # logical order: -half..-1 then +1..+half (DC unused)
    logical = np.concatenate([np.arange(-half, 0), np.arange(1, half + 1)])
    bins = np.where(logical < 0, logical + n, logical)
    pilot_pos = np.arange(0, params.active_subcarriers, params.pilot_spacing)
    data_pos = np.setdiff1d(np.arange(params.active_subcarriers), pilot_pos)
    return bins, pilot_pos, data_pos, logical


def pilot_values(params: OfdmParams, n_symbols: int, pilot_stream: int = 0) -> np.ndarray:
    """Fixed pseudo-random QPSK pilot sequence, one row per OFDM symbol.

    The sequence advances from symbol to symbol and is scrambled per
    transmitter (pilot_stream id, like cell-specific reference scrambling),
    so a co-channel transmitter running the same frame clock can never stay
    coherent on the victim's pilot bins across a frame.
    """
    return _pilot_matrix(params, n_symbols, pilot_stream).copy()


@lru_cache(maxsize=32)
def _pilot_matrix(params: OfdmParams, n_symbols: int, pilot_stream: int = 0) -> np.ndarray:
    rows = np.empty((n_symbols, params.n_pilots), dtype=np.complex128)
    for s in range(n_symbols):
        rng = np.random.default_rng(np.random.SeedSequence([_PILOT_SEED, pilot_stream, s]))
        q = rng.integers(0, 4, size=params.n_pilots)
        rows[s] = np.exp(1j * (math.pi / 4.0 + math.pi / 2.0 * q))
    return rows


@lru_cache(maxsize=8)
def _preamble(params: OfdmParams) -> np.ndarray:
    """Time-domain preamble: two identical halves, unit average power.

    Loading only even subcarriers makes the IFFT output periodic with
    period fft_size/2, which is what the half-lag timing metric detects.
    """
    bins, _, _, logical = _subcarrier_maps(params)
    even = logical % 2 == 0
    rng = np.random.default_rng(_PREAMBLE_SEED)
    q = rng.integers(0, 4, size=int(np.sum(even)))
    spectrum = np.zeros(params.fft_size, dtype=np.complex128)
    spectrum[bins[even]] = np.exp(1j * (math.pi / 4.0 + math.pi / 2.0 * q))
    t = np.fft.ifft(spectrum)
    return t / np.sqrt(np.mean(np.abs(t) ** 2))


def preamble(params: OfdmParams) -> np.ndarray:
    return _preamble(params).copy()


def map_16qam(bits) -> np.ndarray:
    """Gray-mapped 16QAM with unit average energy.

    Per axis, bit pair (u0, u1) maps to level (1-2*u0)*(1+2*u1); the four
    bits of a symbol are (I0, I1, Q0, Q1), so 0000 -> (1+1j)/sqrt(10).
    """
    b = np.asarray(bits, dtype=np.int64).ravel()
    if b.size % BITS_PER_SYMBOL != 0:
        raise ValueError(f"bit count must be a multiple of {BITS_PER_SYMBOL}")
    g = b.reshape(-1, BITS_PER_SYMBOL)
    i = (1 - 2 * g[:, 0]) * (1 + 2 * g[:, 1])
    q = (1 - 2 * g[:, 2]) * (1 + 2 * g[:, 3])
    return (i + 1j * q) * _QAM_SCALE


def _axis_bits_hard(levels_scaled: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    u0 = (levels_scaled < 0).astype(np.uint8)
    u1 = (np.abs(levels_scaled) > 2.0).astype(np.uint8)
    return u0, u1


def demap_16qam(symbols, soft: bool = False) -> np.ndarray:
    """Demap 16QAM symbols to bits.

    Hard output returns 0/1 decisions.  Soft output returns one LLR per
    bit (positive means bit 0), computed as exact min-distance differences
    over the four levels of each axis; the scale is arbitrary, which is
    fine for the max-correlation Viterbi decoder downstream.
    """
    y = np.asarray(symbols, dtype=np.complex128).ravel() / _QAM_SCALE
    out = np.empty((y.size, BITS_PER_SYMBOL))
    for col, axis in ((0, y.real), (2, y.imag)):
        if soft:
            d2 = (axis[:, None] - _QAM_LEVELS[None, :]) ** 2
            # level order (-3, -1, +1, +3) <-> axis bit pairs (11, 10, 00, 01)
            out[:, col] = np.minimum(d2[:, 0], d2[:, 1]) - np.minimum(d2[:, 2], d2[:, 3])
            out[:, col + 1] = np.minimum(d2[:, 0], d2[:, 3]) - np.minimum(d2[:, 1], d2[:, 2])
        else:
            u0, u1 = _axis_bits_hard(axis)
            out[:, col] = u0
            out[:, col + 1] = u1
    flat = out.ravel()
    return flat if soft else flat.astype(np.uint8)


@dataclass(frozen=True)
class FrameBuffer:
    """A transmitted frame: preamble followed by CP-prefixed OFDM symbols.

    data_symbols holds the unit-energy constellation points actually sent
    on the data subcarriers (one row per OFDM symbol); receivers use them
    as the EVM reference.
    """

    samples: np.ndarray
    params: OfdmParams
    n_symbols: int
    data_symbols: np.ndarray
    payload: np.ndarray
    pilot_stream: int = 0

    def __post_init__(self):
        expect = self.params.frame_samples(self.n_symbols)
        if self.samples.size != expect:
            raise ValueError(f"frame length {self.samples.size} != expected {expect}")

    def body_stream(self) -> np.ndarray:
        """The frame without its preamble, renormalized to unit average power.

        This is what a victim receiver sees of an unsynchronized co-channel
        transmitter: a continuous run of data symbols.  Feeding this (rather
        than a full frame) to `impair` keeps the interferer from presenting
        a lock-able preamble of its own.
        """
        if self.n_symbols == 0:
            raise ValueError("preamble-only frame has no body")
        body = self.samples[self.params.preamble_samples :]
        return body / np.sqrt(np.mean(np.abs(body) ** 2))


def build_frame(params: OfdmParams, payload_bits, pilot_stream: int = 0) -> FrameBuffer:
    """FEC-encode, map, and modulate a payload into a baseband frame.

    The payload must exactly fill a whole number of OFDM symbols after
    rate-1/2 encoding (see OfdmParams.payload_bits).  An empty payload
    produces a preamble-only frame.  The emitted frame has unit average
    sample power.  pilot_stream selects the transmitter's pilot scrambling;
    co-channel transmitters should use distinct ids.
    """
    payload = np.asarray(payload_bits, dtype=np.uint8).ravel()
    pre = _preamble(params)

    if payload.size == 0:
        samples = pre.copy()
        return FrameBuffer(
            samples=samples,
            params=params,
            n_symbols=0,
            data_symbols=np.zeros((0, params.n_data_subcarriers), dtype=np.complex128),
            payload=payload,
            pilot_stream=pilot_stream,
        )

    bits_per_ofdm = params.n_data_subcarriers * BITS_PER_SYMBOL
    n_coded = coded_length(payload.size)
    if n_coded % bits_per_ofdm != 0:
        good = params.payload_bits(max(1, n_coded // bits_per_ofdm))
        raise ValueError(
            f"payload of {payload.size} bits does not fill whole OFDM symbols; "
            f"nearest valid size is {good} (see OfdmParams.payload_bits)"
        )
    n_symbols = n_coded // bits_per_ofdm

    coded = fec_encode(payload)
    syms = map_16qam(coded).reshape(n_symbols, params.n_data_subcarriers)

    bins, pilot_pos, data_pos, _ = _subcarrier_maps(params)
    pilots = _pilot_matrix(params, n_symbols, pilot_stream)

    body = np.empty(n_symbols * params.symbol_samples, dtype=np.complex128)
    spectrum = np.zeros(params.fft_size, dtype=np.complex128)
    for s in range(n_symbols):
        spectrum[:] = 0.0
        spectrum[bins[pilot_pos]] = pilots[s]
        spectrum[bins[data_pos]] = syms[s]
        t = np.fft.ifft(spectrum)
        start = s * params.symbol_samples
        body[start : start + params.cp_length] = t[-params.cp_length :]
        body[start + params.cp_length : start + params.symbol_samples] = t

    body_power = np.mean(np.abs(body) ** 2)
    boost = 10.0 ** (params.preamble_boost_db / 10.0)
    samples = np.concatenate([pre * math.sqrt(boost * body_power), body])
    samples /= np.sqrt(np.mean(np.abs(samples) ** 2))

    return FrameBuffer(
        samples=samples,
        params=params,
        n_symbols=n_symbols,
        data_symbols=syms,
        payload=payload,
        pilot_stream=pilot_stream,
    )


def _as_samples(x) -> np.ndarray:
    return x.samples if isinstance(x, FrameBuffer) else np.asarray(x, dtype=np.complex128)


def impair(
    desired,
    interferer,
    atten_desired_db: float,
    atten_interferer_db: float = math.inf,
    noise_power_dbm: float = -math.inf,
    seed: int = 0,
    interferer_delay: int | None = None,
) -> np.ndarray:
    """Combine attenuated desired and interferer signals plus receiver noise.

    Power accounting is relative to the 0 dBm unit-power reference: a frame
    attenuated by A dB arrives at -A dBm.  The interferer is circularly
    shifted by interferer_delay samples (drawn uniformly from the seed when
    None) and tiled/truncated to the desired signal's length, modeling an
    unsynchronized transmitter.  Noise is circular complex Gaussian with
    total power noise_power_dbm.  Draw order is fixed (delay, then noise),
    so a given seed always produces the same output.
    """
    d = _as_samples(desired)
    rng = np.random.default_rng(seed)
    out = d * 10.0 ** (-atten_desired_db / 20.0)

    if interferer is not None and atten_interferer_db != math.inf:
        i = _as_samples(interferer)
        if interferer_delay is None:
            interferer_delay = int(rng.integers(0, i.size))
        i = np.roll(i, interferer_delay)
        if i.size != d.size:
            reps = int(np.ceil(d.size / i.size))
            i = np.tile(i, reps)[: d.size]
        out = out + i * 10.0 ** (-atten_interferer_db / 20.0)

    if noise_power_dbm != -math.inf:
        p = 10.0 ** (noise_power_dbm / 10.0)
        noise = rng.standard_normal(d.size) + 1j * rng.standard_normal(d.size)
        out = out + noise * math.sqrt(p / 2.0)

    return out


def noise_power_for_subcarrier_snr(params: OfdmParams, snr_db: float, n_symbols: int) -> float:
    """Time-domain noise power (dBm-relative) hitting a per-subcarrier SNR target.

    For a unit-power frame the data bins carry data_power_share * N^2 / A
    each, while white noise of time power sigma^2 lands N*sigma^2 in every
    bin, so sigma^2 = share * N / (A * snr_lin).
    """
    if snr_db == math.inf:
        return -math.inf
    share = params.data_power_share(n_symbols)
    sigma2 = share * params.fft_size / (params.active_subcarriers * 10.0 ** (snr_db / 10.0))
    return 10.0 * math.log10(sigma2)


def write_iq(path, samples) -> None:
    """Dump samples as interleaved 32-bit little-endian float (I, Q) pairs."""
    s = _as_samples(samples)
    flat = np.empty(2 * s.size, dtype="<f4")
    flat[0::2] = s.real
    flat[1::2] = s.imag
    flat.tofile(path)


def read_iq(path) -> np.ndarray:
    """Read an IQ dump written by write_iq back into complex samples."""
    flat = np.fromfile(path, dtype="<f4")
    if flat.size % 2 != 0:
        raise ValueError("IQ file has an odd number of floats")
    return flat[0::2].astype(np.float64) + 1j * flat[1::2].astype(np.float64)
