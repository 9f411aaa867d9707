"""BPSK over a binary-input AWGN channel.

Bit b goes out as 2b - 1, so a positive LLR is evidence for bit 1. This lines up
with the decoder's ``m_v >= 0 -> 1`` decision rule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelParams:
    ebno_db: float
    rate: float

    def __post_init__(self):
        if not 0 < self.rate <= 1:
            raise ValueError(f"rate must be in (0, 1], got {self.rate}")

    @property
    def sigma2(self) -> float:
        # unit-energy symbols, Eb = Es / rate
        return 1.0 / (2.0 * self.rate * 10.0 ** (self.ebno_db / 10.0))


def transmit(code, params: ChannelParams, rng: np.random.Generator) -> np.ndarray:
    symbols = 2.0 * np.asarray(code, dtype=np.float64) - 1.0
    return symbols + rng.normal(0.0, np.sqrt(params.sigma2), size=symbols.shape)


def channel_llr(y, params: ChannelParams) -> np.ndarray:
    sigma2 = params.sigma2
    if not sigma2 > 0:
        raise ValueError("degenerate channel: sigma2 must be positive")
    return 2.0 * np.asarray(y, dtype=np.float64) / sigma2


def hard_bits(llr) -> np.ndarray:
    return (np.asarray(llr) >= 0).astype(np.uint8)
