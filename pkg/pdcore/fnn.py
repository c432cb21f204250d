"""
Fully connected nets: the generic tanh MLP, the coordinate net that
parametrizes the decoder's spatial basis p̃_k(x), and the mid FNN that maps
one latent to another inside a block.
"""

from collections.abc import Sequence

import numpy as np

from autodiff.tape import Node, Tape
from pdcore.base import ParamModule, ParamSlot, fan_in_bound


class Mlp(ParamModule):
    """tanh between layers, affine output."""

    def __init__(self, prefix: str, widths: Sequence[int]):
        super().__init__(prefix)
        if len(widths) < 2:
            raise ValueError(f"An MLP needs at least input and output widths, got {widths}")
        self.widths = tuple(int(w) for w in widths)

    def slots(self) -> list[ParamSlot]:
        out = []
        for i, (w_in, w_out) in enumerate(zip(self.widths[:-1], self.widths[1:]), start=1):
            bound = fan_in_bound(w_in)
            out.append(ParamSlot(self.slot_name(f"W{i}"), (w_in, w_out), bound))
            out.append(ParamSlot(self.slot_name(f"b{i}"), (w_out,), bound))
        return out

    def forward(self, tape: Tape, x: Node) -> Node:
        """x: (n, widths[0]) → (n, widths[-1])."""
        n_layers = len(self.widths) - 1
        h = x
        for i in range(1, n_layers + 1):
            h = tape.bias(tape.matmul(h, tape.param(self.slot_name(f"W{i}"))),
                          tape.param(self.slot_name(f"b{i}")), axis=-1)
            if i < n_layers:
                h = tape.tanh(h)
        return h


class CoordNet(Mlp):
    """d → hidden → hidden → 2K, read as K complex values per point."""

    def __init__(self, prefix: str, d: int, K: int, hidden: Sequence[int] = (32, 32)):
        super().__init__(prefix, (d, *hidden, 2 * K))
        self.d = d
        self.K = K

    def evaluate(self, tape: Tape, coords: np.ndarray) -> Node:
        """coords: (n, d) → (n, K, 2)."""
        coords = np.asarray(coords, dtype=np.float64)
        if coords.ndim != 2 or coords.shape[1] != self.d:
            raise ValueError(f"Expected coordinates of shape (n, {self.d}), got {coords.shape}")
        out = self.forward(tape, tape.constant(coords))
        return tape.reshape(out, (coords.shape[0], self.K, 2))


def coordnet_eval(tape: Tape, net: CoordNet, coords: np.ndarray) -> Node:
    return net.evaluate(tape, coords)


class MidFnn(ParamModule):
    """
    Latent-to-latent map on real pairs: 2cM → h → h → 2cM.

    The hidden width h defaults to 2cM. Its size is fixed by (c, m, d) alone,
    never by the sampling grid.
    """

    def __init__(self, prefix: str, c: int, d: int, m: int, hidden: int | None = None):
        super().__init__(prefix)
        self.c, self.d, self.m = c, d, m
        self.n_latent = 2 * c * m ** d
        self.hidden = hidden or self.n_latent
        self.net = Mlp(prefix, (self.n_latent, self.hidden, self.hidden, self.n_latent))

    def slots(self) -> list[ParamSlot]:
        return self.net.slots()

    def forward(self, tape: Tape, v: Node) -> Node:
        batch = v.shape[0]
        flat = tape.reshape(v, (batch, self.n_latent))
        return tape.reshape(self.net.forward(tape, flat), v.shape)
