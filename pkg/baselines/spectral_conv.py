"""
Fourier-layer baseline: per-mode channel mixing on the retained band plus a
pointwise bypass.

    a ──┬── fft → truncate(m) → W_k · â_k → synth(s) ──┬── (+) → tanh → b
        └────────────── bypass (c → c) ─────────────────┘

The weight tensor has one c×c complex matrix per retained mode, so the
parameter count is fixed by (m, c, d) and the block runs on any grid s ≥ m.
"""

import numpy as np

from autodiff.tape import Node, Tape
from pdcore.base import ParamModule, ParamSlot, fan_in_bound, grid_sizes
from pdcore.channel_map import ChannelMap


class SpectralConvBlock(ParamModule):

    def __init__(self, prefix: str, d: int, m: int, c: int, activation: bool = True):
        super().__init__(prefix)
        if m < 2 or m % 2:
            raise ValueError(f"m must be even and ≥ 2, got {m}")
        self.d, self.m, self.c = d, m, c
        self.n_modes = m ** d
        self.activation = activation
        self.bypass = ChannelMap(self.slot_name("bypass"), c, c)

    def slots(self) -> list[ParamSlot]:
        weight = ParamSlot(self.slot_name("W"), (self.n_modes, self.c, self.c, 2),
                           fan_in_bound(self.c * self.c), True)
        return [weight, *self.bypass.slots()]

    def forward(self, tape: Tape, a: Node) -> Node:
        """(B, c, *s, 2) → (B, c, *s, 2)."""
        sizes = grid_sizes(a)
        if any(s < self.m for s in sizes):
            raise ValueError(f"Input grid {sizes} is smaller than m={self.m}")
        spectrum = tape.truncate(tape.fft(a, self.d), self.m, self.d)
        mixed = tape.mode_mix(tape.param(self.slot_name("W")), spectrum)
        out = tape.add(tape.synth(mixed, sizes, self.d), self.bypass.forward(tape, a))
        return tape.tanh(out) if self.activation else out


def spectral_conv_forward(tape: Tape, a: Node, block: SpectralConvBlock) -> Node:
    return block.forward(tape, a)


def identity_mode_params(block: SpectralConvBlock) -> dict[str, np.ndarray]:
    """W_k = I for every retained mode, bypass zero."""
    params = {slot.name: np.zeros(slot.shape) for slot in block.slots()}
    params[block.slot_name("W")][:, np.arange(block.c), np.arange(block.c), 0] = 1.0
    return params
