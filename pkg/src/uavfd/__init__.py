"""uavfd: link-level simulator for full-duplex multi-UAV communications.

Models the on-ground evaluation of a channel-reuse full-duplex UAV system:
directional-antenna interference power maps over a placement grid, a
waveform-level OFDM modem with EVM-derived SINR, a TDD baseline for
comparison, and interferer placement optimization.
"""

__version__ = "0.1.0"
