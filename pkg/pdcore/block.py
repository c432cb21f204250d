"""
Multi-channel block.

    a ──┬── identity ──── encode → FNN → decode ────────────┬── concat → merge → b
        └── F₂ = trunc∘fft ─ encode → FNN → decode ─ F₂⁻¹ ──┘

Each channel runs its own encoder / mid FNN / decoder. The Fourier channel
feeds the centered m-mode spectrum to its pipeline as if it were an m-point
signal, and synthesizes the result back onto the input grid. Keeping the
spectrum at m modes (rather than s) places the band at the same latent
position for every input grid, which is what keeps the block
discretization invariant.

With a single channel there is no merge: the block is exactly
decode∘FNN∘encode (with the channel's transform around it).
"""

import enum
from collections.abc import Callable, Sequence

from autodiff.tape import Node, Tape
from pdcore.base import AbstractDecoder, AbstractEncoder, ParamModule, ParamSlot, grid_sizes
from pdcore.channel_map import ChannelMap
from pdcore.fnn import MidFnn
from pdcore.pd_codec import PdDecoder, PdEncoder


class ChannelKind(str, enum.Enum):
    IDENTITY = "identity"
    FOURIER = "fourier"


CodecFactory = Callable[[str, int, int, int], tuple[AbstractEncoder, AbstractDecoder]]


def pd_codec(prefix: str, d: int, m: int, K: int,
             hidden: Sequence[int] = (32, 32)) -> tuple[AbstractEncoder, AbstractDecoder]:
    return PdEncoder(f"{prefix}.enc", d, m, K), PdDecoder(f"{prefix}.dec", d, m, K, hidden)


class ChannelPipeline(ParamModule):

    def __init__(self, prefix: str, kind: ChannelKind, d: int, m: int, K: int, c: int,
                 codec: CodecFactory = pd_codec, mid_hidden: int | None = None):
        super().__init__(prefix)
        self.kind = ChannelKind(kind)
        self.d, self.m = d, m
        self.encoder, self.decoder = codec(prefix, d, m, K)
        self.mid = MidFnn(f"{prefix}.mid", c, d, m, mid_hidden)

    def slots(self) -> list[ParamSlot]:
        return [*self.encoder.slots(), *self.mid.slots(), *self.decoder.slots()]

    def forward(self, tape: Tape, a: Node) -> Node:
        sizes = grid_sizes(a)
        x = a
        if self.kind == ChannelKind.FOURIER:
            x = tape.truncate(tape.fft(a, self.d), self.m, self.d)
        u = self.mid.forward(tape, self.encoder.encode(tape, x))
        y = self.decoder.decode(tape, u, grid_sizes(x))
        if self.kind == ChannelKind.FOURIER:
            y = tape.synth(y, sizes, self.d)
        return y


class MultiChannelBlock(ParamModule):

    def __init__(self, prefix: str, d: int, m: int, K: int, c: int,
                 channels: Sequence[ChannelKind | str] = (ChannelKind.IDENTITY, ChannelKind.FOURIER),
                 codec: CodecFactory = pd_codec, mid_hidden: int | None = None):
        super().__init__(prefix)
        if not channels:
            raise ValueError("A block needs at least one channel")
        self.c = c
        self.pipelines = [
            ChannelPipeline(f"{prefix}.{ChannelKind(kind).value}{i}", kind, d, m, K, c, codec, mid_hidden)
            for i, kind in enumerate(channels)
        ]
        self.merge = (
            ChannelMap(f"{prefix}.merge", len(self.pipelines) * c, c, near_identity=True)
            if len(self.pipelines) > 1 else None
        )

    def slots(self) -> list[ParamSlot]:
        out = [slot for p in self.pipelines for slot in p.slots()]
        if self.merge is not None:
            out.extend(self.merge.slots())
        return out

    def init_params(self, rng):
        params = {}
        for p in self.pipelines:
            params.update(p.init_params(rng))
        if self.merge is not None:
            params.update(self.merge.init_params(rng))
        return params

    def forward(self, tape: Tape, a: Node) -> Node:
        """(B, c, *s, 2) → (B, c, *s, 2)."""
        if a.shape[1] != self.c:
            raise ValueError(f"Block expects {self.c} channels, got {a.shape[1]}")
        outs = [p.forward(tape, a) for p in self.pipelines]
        if self.merge is None:
            return outs[0]
        return self.merge.forward(tape, tape.concat(outs, axis=1))


def pd_block_forward(tape: Tape, a: Node, block: MultiChannelBlock) -> Node:
    return block.forward(tape, a)
