"""
Pointwise complex affine map across channels: y(x) = W·a(x) + b at every grid point.

Used for the network's lift and projection, the skip affines, and a
multi-channel block's merge. A map over the flattened grid would have a
size tied to s; a pointwise one does not.
"""

import numpy as np

from autodiff.tape import Node, Tape
from pdcore.base import ParamModule, ParamSlot, fan_in_bound


class ChannelMap(ParamModule):

    def __init__(self, prefix: str, c_in: int, c_out: int,
                 near_identity: bool = False, noise: float = 1e-2):
        super().__init__(prefix)
        self.c_in = c_in
        self.c_out = c_out
        self.near_identity = near_identity
        self.noise = noise

    def slots(self) -> list[ParamSlot]:
        return [
            ParamSlot(self.slot_name("W"), (self.c_out, self.c_in, 2), fan_in_bound(self.c_in), True),
            ParamSlot(self.slot_name("b"), (self.c_out, 2), 0.0, True),
        ]

    def init_params(self, rng: np.random.Generator) -> dict[str, np.ndarray]:
        params = super().init_params(rng)
        if self.near_identity:
            w = self.noise * rng.uniform(-1.0, 1.0, (self.c_out, self.c_in, 2))
            n = min(self.c_in, self.c_out)
            w[np.arange(n), np.arange(n), 0] += 1.0
            params[self.slot_name("W")] = w
        return params

    def forward(self, tape: Tape, a: Node) -> Node:
        """(B, c_in, *grid, 2) → (B, c_out, *grid, 2)."""
        mixed = tape.channel_mix(tape.param(self.slot_name("W")), a)
        return tape.bias(mixed, tape.param(self.slot_name("b")), axis=1, pair=True)
