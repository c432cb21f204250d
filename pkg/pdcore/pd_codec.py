"""
Pseudo-differential encoder and decoder with a rank-K symbol.

A pseudo-differential operator with symbol A(x, ξ) acts as

    (P a)(x) = Σ_ξ e^{2πi x·ξ} A(x, ξ) â(ξ)

and a rank-K split A(x, ξ) ≈ Σ_k q_k(x) p_k(ξ) turns it into K diagonal
multiplications in frequency, K inverse FFTs and K pointwise products in
space:

    encode:  â = truncate(fft(a), m)
             w_k = ifft(p_k ∘ â) on the m-point latent grid
             v = Σ_k q_k ∘ w_k                 (P, Q: M×K matrices, M = m^d)

    decode:  û = fft(u)
             g_k = ifft(pad(q̃_k ∘ û, s))       (Qt: M×K matrix)
             b(x_j) = Σ_k p̃_k(x_j) · g_k(x_j)   (p̃: CoordNet at the output grid)

The encoder reads only the m retained modes, so for band-limited input the
latent is the same for every sampling grid s ≥ m. The decoder is defined
for any output grid because p̃ is a function of x rather than a table.

Cost per block: O(K s log s) for the transforms plus O(m²) inside the
latent, against O(m s) for a dense integral kernel.
"""

from collections.abc import Sequence

import numpy as np

from autodiff.tape import Node, Tape
from pdcore.base import AbstractDecoder, AbstractEncoder, ParamSlot, fan_in_bound, grid_sizes
from pdcore.fnn import CoordNet
from spectral.grid import grid_coords


def _require_grid(sizes: Sequence[int], m: int, what: str) -> None:
    if any(s < m for s in sizes):
        raise ValueError(f"{what} grid {tuple(sizes)} is smaller than m={m}")


class _LowRankBasis:
    """Shared helper: an M×K complex matrix laid out for broadcasting against (B, c, K, *mm, 2)."""

    def __init__(self, d: int, m: int, K: int):
        self.d, self.m, self.K = d, m, K
        self.mm = (m,) * d
        self.M = m ** d

    def slot(self, name: str) -> ParamSlot:
        return ParamSlot(name, (self.M, self.K, 2), fan_in_bound(self.K), True)

    def broadcast(self, tape: Tape, name: str, batch: int, channels: int) -> Node:
        basis = tape.transpose(tape.param(name), (1, 0, 2))              # (K, M, 2)
        basis = tape.reshape(basis, (1, 1, self.K, *self.mm, 2))
        return tape.expand(basis, (batch, channels, self.K, *self.mm, 2))

    def spread(self, tape: Tape, x: Node) -> Node:
        """(B, c, *mm, 2) → (B, c, K, *mm, 2) by repetition over k."""
        batch, channels = x.shape[:2]
        x = tape.reshape(x, (batch, channels, 1, *self.mm, 2))
        return tape.expand(x, (batch, channels, self.K, *self.mm, 2))


class PdEncoder(AbstractEncoder):

    def __init__(self, prefix: str, d: int, m: int, K: int):
        super().__init__(prefix)
        if m < 2 or m % 2:
            raise ValueError(f"m must be even and ≥ 2, got {m}")
        self.d, self.m, self.K = d, m, K
        self._basis = _LowRankBasis(d, m, K)

    def slots(self) -> list[ParamSlot]:
        return [self._basis.slot(self.slot_name("P")), self._basis.slot(self.slot_name("Q"))]

    def encode(self, tape: Tape, a: Node) -> Node:
        _require_grid(grid_sizes(a), self.m, "Input")
        batch, channels = a.shape[:2]
        spectrum = tape.truncate(tape.fft(a, self.d), self.m, self.d)
        weighted = tape.cmul(self._basis.spread(tape, spectrum),
                             self._basis.broadcast(tape, self.slot_name("P"), batch, channels))
        w = tape.synth(weighted, self.m, self.d)
        q = self._basis.broadcast(tape, self.slot_name("Q"), batch, channels)
        return tape.sum(tape.cmul(q, w), axis=2)


class PdDecoder(AbstractDecoder):

    def __init__(self, prefix: str, d: int, m: int, K: int, hidden: Sequence[int] = (32, 32)):
        super().__init__(prefix)
        if m < 2 or m % 2:
            raise ValueError(f"m must be even and ≥ 2, got {m}")
        self.d, self.m, self.K = d, m, K
        self._basis = _LowRankBasis(d, m, K)
        self.pnet = CoordNet(self.slot_name("pnet"), d, K, hidden)

    def slots(self) -> list[ParamSlot]:
        return [self._basis.slot(self.slot_name("Qt")), *self.pnet.slots()]

    def decode(self, tape: Tape, u: Node, sizes: Sequence[int]) -> Node:
        sizes = tuple(int(s) for s in sizes)
        if len(sizes) != self.d:
            raise ValueError(f"Expected {self.d} output sizes, got {sizes}")
        _require_grid(sizes, self.m, "Output")
        batch, channels = u.shape[:2]
        u_hat = self._basis.spread(tape, tape.fft(u, self.d))
        qt = self._basis.broadcast(tape, self.slot_name("Qt"), batch, channels)
        g = tape.synth(tape.cmul(u_hat, qt), sizes, self.d)              # (B, c, K, *s, 2)

        pt = self.pnet.evaluate(tape, grid_coords(sizes))                # (S, K, 2)
        pt = tape.reshape(tape.transpose(pt, (1, 0, 2)), (1, 1, self.K, *sizes, 2))
        pt = tape.expand(pt, (batch, channels, self.K, *sizes, 2))
        return tape.sum(tape.cmul(g, pt), axis=2)


def pd_encode(tape: Tape, a: Node, encoder: PdEncoder) -> Node:
    return encoder.encode(tape, a)


def pd_decode(tape: Tape, u: Node, decoder: PdDecoder, sizes: Sequence[int]) -> Node:
    return decoder.decode(tape, u, sizes)


def unit_decoder_params(decoder: PdDecoder) -> dict[str, np.ndarray]:
    """Qt ≡ 1 and p̃ ≡ 1 (zeroed net, unit real bias): decode becomes m-band synthesis."""
    params = {slot.name: np.zeros(slot.shape) for slot in decoder.slots()}
    params[decoder.slot_name("Qt")][..., 0] = 1.0
    last = len(decoder.pnet.widths) - 1
    params[decoder.pnet.slot_name(f"b{last}")][0::2] = 1.0
    return params
