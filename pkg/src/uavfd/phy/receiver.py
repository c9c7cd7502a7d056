"""OFDM receiver: timing synchronization, channel estimation, EVM.

Synchronization computes the classic half-lag autocorrelation timing
metric: the preamble's two identical halves make |P(d)|/R(d) peak at the
preamble start, where P correlates each sample with its half-frame
successor and R is the trailing-half energy.  The link is declared down
when the peak stays under the threshold, which is exactly what happens
when co-channel interference swamps the preamble.  A matched-filter pass
against the known preamble then refines the coarse peak to the sample.

The channel in this rig is a static complex scalar (attenuators and a
combiner), so pilot least-squares estimates are averaged across the
frame's OFDM symbols before interpolation, and a per-symbol common phase
correction from the pilots absorbs any residual rotation introduced by the
frequency-offset corrector.
"""

import math
from dataclasses import dataclass

import numpy as np

from .fec import fec_decode
from .modem import FrameBuffer, OfdmParams, _pilot_matrix, _preamble, _subcarrier_maps, demap_16qam

SYNC_THRESHOLD = 0.5
_ENERGY_EPS = 1e-30


@dataclass(frozen=True)
class SyncResult:
    success: bool
    metric: float
    preamble_start: int | None = None
    frame_start: int | None = None  # first OFDM symbol (start of its CP)
    cfo_subcarriers: float | None = None
    cfo_hz: float | None = None


@dataclass(frozen=True)
class RxResult:
    sync_success: bool
    sync_metric: float
    evm_rms: float | None = None
    payload: np.ndarray | None = None
    freq_offset_hz: float | None = None
    frame_start: int | None = None


def _as_samples(x) -> np.ndarray:
    return x.samples if isinstance(x, FrameBuffer) else np.asarray(x, dtype=np.complex128)


def synchronize(samples, params: OfdmParams, threshold: float = SYNC_THRESHOLD) -> SyncResult:
    """Locate the frame start, or fail when no usable preamble is found.

    Returns the coarse timing metric peak; success requires it to reach
    `threshold`.  On success the start estimate is refined by
    cross-correlation with the known preamble and the fractional frequency
    offset is estimated from the half-lag correlation phase.
    """
    x = _as_samples(samples)
    half = params.fft_size // 2
    if x.size < 2 * half + 1:
        return SyncResult(success=False, metric=0.0)

    c = np.conj(x[:-half]) * x[half:]
    cs = np.concatenate([[0.0 + 0.0j], np.cumsum(c)])
    p = cs[half:] - cs[:-half]  # p[d] = sum over m<half of conj(x[d+m]) x[d+m+half]

    e = np.abs(x) ** 2
    es = np.concatenate([[0.0], np.cumsum(e)])
    r = es[2 * half :] - es[half:-half]  # trailing-half energy

    metric = np.abs(p) / np.maximum(r, _ENERGY_EPS)
    peak = int(np.argmax(metric))
    peak_metric = float(metric[peak])
    if peak_metric < threshold:
        return SyncResult(success=False, metric=peak_metric)

    cfo_coarse = float(np.angle(p[peak]) / math.pi)
    x_corr = x * np.exp(-2j * math.pi * cfo_coarse * np.arange(x.size) / params.fft_size)

    # matched-filter refinement around the coarse peak
    pre = _preamble(params)
    window = max(8, params.cp_length // 2)
    lo = max(0, peak - window)
    hi = min(x.size - pre.size, peak + window)
    if hi < lo:
        return SyncResult(success=False, metric=peak_metric)
    seg = x_corr[lo : hi + pre.size]
    xc = np.abs(np.correlate(seg, pre, mode="valid"))
    start = lo + int(np.argmax(xc))

    # the half-lag phase at the refined start is the cleanest offset estimate;
    # at the exact start of a clean preamble it is identically zero
    cfo_sc = float(np.angle(p[start]) / math.pi) if start < p.size else cfo_coarse

    return SyncResult(
        success=True,
        metric=peak_metric,
        preamble_start=start,
        frame_start=start + params.preamble_samples,
        cfo_subcarriers=cfo_sc,
        cfo_hz=cfo_sc * params.subcarrier_spacing_hz,
    )


def receive_frame(
    samples, params: OfdmParams, reference_symbols, decode: bool = True, pilot_stream: int = 0
) -> RxResult:
    """Demodulate a frame and measure its EVM against the transmitted symbols.

    reference_symbols is the (n_symbols, n_data) matrix of unit-energy
    constellation points the transmitter sent (FrameBuffer.data_symbols);
    the EVM is the RMS distance of the equalized data symbols from it.
    Synchronization failure propagates as a link-down result with no EVM.
    When decode is False the Viterbi stage is skipped and no payload is
    returned, which is considerably faster for EVM-only sweeps.
    """
    x = _as_samples(samples)
    ref = np.asarray(reference_symbols, dtype=np.complex128)
    if ref.ndim != 2:
        raise ValueError("reference_symbols must be (n_symbols, n_data)")
    n_symbols = ref.shape[0]

    sync = synchronize(x, params)
    if not sync.success:
        return RxResult(sync_success=False, sync_metric=sync.metric)
    needed = sync.frame_start + n_symbols * params.symbol_samples
    if needed > x.size or n_symbols == 0:
        return RxResult(sync_success=False, sync_metric=sync.metric)

    x = x * np.exp(-2j * math.pi * sync.cfo_subcarriers * np.arange(x.size) / params.fft_size)

    bins, pilot_pos, data_pos, _ = _subcarrier_maps(params)
    pilots = _pilot_matrix(params, n_symbols, pilot_stream)

    rx_pilots = np.empty((n_symbols, pilot_pos.size), dtype=np.complex128)
    rx_data = np.empty((n_symbols, data_pos.size), dtype=np.complex128)
    for s in range(n_symbols):
        w0 = sync.frame_start + s * params.symbol_samples + params.cp_length
        spectrum = np.fft.fft(x[w0 : w0 + params.fft_size])
        rx_pilots[s] = spectrum[bins[pilot_pos]]
        rx_data[s] = spectrum[bins[data_pos]]

    # static channel: average the per-pilot LS estimates over the frame,
    # aligning each symbol's common phase first so any residual rotation
    # (e.g. from the frequency-offset corrector) cannot shrink the average
    h_per_symbol = rx_pilots / pilots
    align = np.angle(np.sum(h_per_symbol * np.conj(h_per_symbol[0])[None, :], axis=1))
    h_pilot = np.mean(h_per_symbol * np.exp(-1j * align)[:, None], axis=0)
    all_pos = np.arange(params.active_subcarriers)
    h_active = np.interp(all_pos, pilot_pos, h_pilot.real) + 1j * np.interp(
        all_pos, pilot_pos, h_pilot.imag
    )
    h_data = h_active[data_pos]
    h_p = h_active[pilot_pos]

    # per-symbol common phase from the pilots, then one-tap equalization
    cpe = np.angle(np.sum(rx_pilots * np.conj(h_p[None, :] * pilots), axis=1))
    y_eq = rx_data / h_data[None, :] * np.exp(-1j * cpe)[:, None]

    evm = float(np.sqrt(np.mean(np.abs(y_eq - ref) ** 2)))

    payload = None
    if decode:
        llr = demap_16qam(y_eq.ravel(), soft=True)
        payload = fec_decode(llr)

    return RxResult(
        sync_success=True,
        sync_metric=sync.metric,
        evm_rms=evm,
        payload=payload,
        freq_offset_hz=sync.cfo_hz,
        frame_start=sync.frame_start,
    )
