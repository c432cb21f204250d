"""
Dense integral autoencoder: encoder and decoder as quadratures of a learned kernel.

    encode:  v(z_l) = (1/s) Σ_j φ₁(Re a(x_j), x_j, z_l) · a(x_j)
    decode:  b(x_j) = (1/M) Σ_l φ₂(Re u(z_l), x_j, z_l) · u(z_l)

φ₁, φ₂ are small tanh nets (1+2d) → hidden → 2 whose output pair is read as
one complex weight. Every (x_j, z_l) pair is a kernel evaluation, so one
encode costs Θ(s·M) network calls, against Θ(K s log s) for the
pseudo-differential codec. The kernel sees a(x), so the encoder is not
linear in its input.

The classes implement the same encoder/decoder interfaces as the
pseudo-differential codec and plug into MultiChannelBlock through
dense_iae_codec.
"""

from collections.abc import Sequence

import numpy as np

from autodiff.tape import Node, Tape
from pdcore.base import AbstractDecoder, AbstractEncoder, ParamSlot, grid_sizes
from pdcore.fnn import Mlp
from spectral.grid import grid_coords


def _pair_features(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """(n, d), (k, d) → (n, k, 2d): [outer_i, inner_l] for every pair."""
    n, k = outer.shape[0], inner.shape[0]
    return np.concatenate([
        np.broadcast_to(outer[:, None, :], (n, k, outer.shape[1])),
        np.broadcast_to(inner[None, :, :], (n, k, inner.shape[1])),
    ], axis=-1)


class _KernelQuadrature:
    """Σ over the source axis of φ(Re f, source, target) · f, times a fixed weight."""

    def __init__(self, net: Mlp, d: int):
        self.net = net
        self.d = d

    def apply(self, tape: Tape, f: Node, source: np.ndarray, target: np.ndarray,
              out_sizes: tuple[int, ...]) -> Node:
        """f: (B, c, *src, 2) with n_src = len(source) points → (B, c, *out_sizes, 2)."""
        batch, channels = f.shape[:2]
        n_src, n_tgt = source.shape[0], target.shape[0]
        flat = tape.reshape(f, (batch, channels, n_src, 1, 2))
        wide = tape.expand(flat, (batch, channels, n_src, n_tgt, 2))

        values = tape.reshape(tape.real(flat), (batch, channels, n_src, 1, 1))
        values = tape.expand(values, (batch, channels, n_src, n_tgt, 1))
        coords = _pair_features(source, target)[None, None]
        coords = tape.constant(np.broadcast_to(coords, (batch, channels, n_src, n_tgt, 2 * self.d)))
        features = tape.concat([values, coords], axis=-1)

        n_rows = batch * channels * n_src * n_tgt
        kernel = self.net.forward(tape, tape.reshape(features, (n_rows, 1 + 2 * self.d)))
        kernel = tape.reshape(kernel, (batch, channels, n_src, n_tgt, 2))

        summed = tape.sum(tape.cmul(kernel, wide), axis=2)
        return tape.reshape(tape.scale(summed, 1.0 / n_src), (batch, channels, *out_sizes, 2))


class DenseIaeEncoder(AbstractEncoder):

    def __init__(self, prefix: str, d: int, m: int, hidden: Sequence[int] = (32, 32)):
        super().__init__(prefix)
        self.d, self.m = d, m
        self.latent_sizes = (m,) * d
        self.phi = Mlp(self.slot_name("phi"), (1 + 2 * d, *hidden, 2))
        self._quadrature = _KernelQuadrature(self.phi, d)

    def slots(self) -> list[ParamSlot]:
        return self.phi.slots()

    def encode(self, tape: Tape, a: Node) -> Node:
        sizes = grid_sizes(a)
        if len(sizes) != self.d:
            raise ValueError(f"Expected a {self.d}-D field, got grid {sizes}")
        return self._quadrature.apply(tape, a, grid_coords(sizes), grid_coords(self.latent_sizes),
                                      self.latent_sizes)


class DenseIaeDecoder(AbstractDecoder):

    def __init__(self, prefix: str, d: int, m: int, hidden: Sequence[int] = (32, 32)):
        super().__init__(prefix)
        self.d, self.m = d, m
        self.latent_sizes = (m,) * d
        self.phi = Mlp(self.slot_name("phi"), (1 + 2 * d, *hidden, 2))
        self._quadrature = _KernelQuadrature(self.phi, d)

    def slots(self) -> list[ParamSlot]:
        return self.phi.slots()

    def decode(self, tape: Tape, u: Node, sizes: Sequence[int]) -> Node:
        sizes = tuple(int(s) for s in sizes)
        if len(sizes) != self.d:
            raise ValueError(f"Expected {self.d} output sizes, got {sizes}")
        return self._quadrature.apply(tape, u, grid_coords(self.latent_sizes), grid_coords(sizes), sizes)


def dense_iae_codec(prefix: str, d: int, m: int, K: int,
                    hidden: Sequence[int] = (32, 32)) -> tuple[DenseIaeEncoder, DenseIaeDecoder]:
    """Codec factory for MultiChannelBlock. K is accepted for signature parity and unused."""
    return DenseIaeEncoder(f"{prefix}.enc", d, m, hidden), DenseIaeDecoder(f"{prefix}.dec", d, m, hidden)


def dense_iae_encode(tape: Tape, a: Node, encoder: DenseIaeEncoder) -> Node:
    return encoder.encode(tape, a)


def dense_iae_decode(tape: Tape, u: Node, decoder: DenseIaeDecoder, sizes: Sequence[int]) -> Node:
    return decoder.decode(tape, u, sizes)


def unit_kernel_params(module: DenseIaeEncoder | DenseIaeDecoder) -> dict[str, np.ndarray]:
    """φ ≡ 1: zero weights and a unit real output bias."""
    params = {slot.name: np.zeros(slot.shape) for slot in module.slots()}
    last = len(module.phi.widths) - 1
    params[module.phi.slot_name(f"b{last}")][0] = 1.0
    return params
