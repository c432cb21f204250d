"""
The full network: lift, L multi-channel blocks with dense skip connections, projection.

    f ─ lift ─ a₀ ─ block₁ ─ a₁ ─ block₂ ─ a₂ ─ … ─ block_L ─ a_L ─ project ─ [resample] ─ [real] ─ g
               │              ▲  │            ▲                ▲
               └── A₀,₁ ──────┘  └── A₁,₂ ────┤                │
               └──────────── A₀,₂ ────────────┘   …  A_j,L ────┘

    a_i = block_i(a_{i−1}) + Σ_{j<i} A_{j,i}(a_j)

Lift, skips and projection are pointwise channel maps, so no layer has a size
tied to the sampling grid. The lift sees the input channels plus one periodic
coordinate channel e^{2πi x} per axis.

A PdIaeModel pairs the structure built from a config with a flat parameter
dict. The dict is read-only; training produces new models via with_params.
"""

import logging
from collections.abc import Mapping, Sequence

import numpy as np

from autodiff.errors import ShapeError
from autodiff.pairs import to_complex, to_pairs
from autodiff.tape import Node, Tape
from network.config import PdIaeConfig
from network.registry import get_codec
from pdcore.base import ParamModule, ParamSlot, grid_sizes
from pdcore.block import MultiChannelBlock
from pdcore.channel_map import ChannelMap
from spectral import transforms
from spectral.grid import ComplexGrid, grid_coords

logger = logging.getLogger(__name__)


def coordinate_channels(sizes: Sequence[int]) -> np.ndarray:
    """(d, *sizes, 2): e^{2πi x_axis} for each axis."""
    sizes = tuple(sizes)
    coords = grid_coords(sizes).reshape(*sizes, len(sizes))
    return to_pairs(np.exp(2j * np.pi * np.moveaxis(coords, -1, 0)))


def _components(config: PdIaeConfig):
    """Lift, blocks, skips {(j, i): map} and projection. Components hold no arrays."""
    codec = get_codec(config.block, config.hidden_widths)
    lift_map = ChannelMap("lift", config.lift_inputs, config.c)
    blocks = [
        MultiChannelBlock(f"block{i}", config.d, config.m, config.K, config.c,
                          config.channels, codec, config.mid_hidden)
        for i in range(1, config.L + 1)
    ]
    skips = {
        (j, i): ChannelMap(f"skip{j}_{i}", config.c, config.c)
        for i in range(1, config.L + 1) for j in range(i)
    }
    return lift_map, blocks, skips, ChannelMap("proj", config.c, config.out_channels)


class PdIaeModel(ParamModule):

    def __init__(self, config: PdIaeConfig, params: Mapping[str, np.ndarray] | None = None):
        super().__init__("net")
        self.config = config
        self.lift_map, self.blocks, self.skips, self.projection = _components(config)

        if params is None:
            params = self.init_params(np.random.default_rng(config.seed))
        self.params = self._checked(params)
        logger.debug(f"Built {config.block.value} model: L={config.L} c={config.c} m={config.m} K={config.K}, "
                     f"{self.param_count()} parameters")

    # ── Parameters ──────────────────────────────────────────────

    def modules(self) -> list[ParamModule]:
        return [self.lift_map, *self.blocks, *self.skips.values(), self.projection]

    def slots(self) -> list[ParamSlot]:
        return [slot for module in self.modules() for slot in module.slots()]

    @classmethod
    def slot_layout(cls, config: PdIaeConfig) -> list[ParamSlot]:
        """The slot list a model of this config has, without drawing initial weights."""
        lift_map, blocks, skips, projection = _components(config)
        return [slot for module in (lift_map, *blocks, *skips.values(), projection) for slot in module.slots()]

    def init_params(self, rng: np.random.Generator) -> dict[str, np.ndarray]:
        params = {}
        for module in self.modules():
            params.update(module.init_params(rng))
        return params

    def _checked(self, params: Mapping[str, np.ndarray]) -> dict[str, np.ndarray]:
        expected = {slot.name: slot.shape for slot in self.slots()}
        missing = expected.keys() - params.keys()
        extra = params.keys() - expected.keys()
        if missing or extra:
            raise ValueError(f"Parameter names do not match the config: missing {sorted(missing)}, "
                             f"unexpected {sorted(extra)}")
        out = {}
        for name, shape in expected.items():
            arr = np.array(params[name], dtype=np.float64, copy=True)
            if arr.shape != shape:
                raise ShapeError(f"Parameter '{name}' has shape {arr.shape}, expected {shape}")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"Parameter '{name}' has non-finite entries")
            arr.setflags(write=False)
            out[name] = arr
        return out

    def with_params(self, params: Mapping[str, np.ndarray]) -> "PdIaeModel":
        return PdIaeModel(self.config, params)

    # ── Forward ─────────────────────────────────────────────────

    def lift(self, tape: Tape, f: Node) -> Node:
        """(B, in_channels, *s, 2) → (B, c, *s, 2)."""
        sizes = grid_sizes(f)
        if len(sizes) != self.config.d:
            raise ShapeError(f"Expected a {self.config.d}-D input grid, got {sizes}")
        if f.shape[1] != self.config.in_channels:
            raise ShapeError(f"Expected {self.config.in_channels} input channels, got {f.shape[1]}")
        features = f
        if self.config.coord_channels:
            coords = np.broadcast_to(coordinate_channels(sizes), (f.shape[0], self.config.d, *sizes, 2))
            features = tape.concat([f, tape.constant(coords)], axis=1)
        return self.lift_map.forward(tape, features)

    def forward(self, tape: Tape, f: Node, s_out: Sequence[int] | int | None = None) -> Node:
        """
        (B, in_channels, *s, 2) → (B, out_channels, *s_out) when real_output,
        else (B, out_channels, *s_out, 2).
        """
        cfg = self.config
        sizes = grid_sizes(f)
        out_sizes = sizes if s_out is None else transforms.as_sizes(s_out, cfg.d)
        if any(s < cfg.m for s in (*sizes, *out_sizes)):
            raise ValueError(f"Grid too small for m={cfg.m}: input {sizes}, output {out_sizes}")

        out = self.projection.forward(tape, self.hidden_state(tape, f))
        if out_sizes != sizes:
            out = tape.resample(out, out_sizes, cfg.d)
        if cfg.real_output:
            out = tape.real(out)
        return out

    def predict(self, f: np.ndarray, s_out: Sequence[int] | int | None = None) -> np.ndarray:
        """
        Forward on plain arrays. Real input gets a zero imaginary part; a complex
        output comes back as a complex array.
        """
        f = np.asarray(f)
        if np.iscomplexobj(f):
            f = to_pairs(f)
        elif f.ndim == self.config.d + 2:
            f = to_pairs(f.astype(np.complex128))
        tape = Tape(self.params)
        out = self.forward(tape, tape.constant(f), s_out)
        if self.config.real_output:
            return np.array(out.value)
        return to_complex(out.value)

    def imaginary_residue(self, f: np.ndarray) -> float:
        """Norm of the imaginary part the projection produced, relative to the real part."""
        f = np.asarray(f)
        pairs = to_pairs(f) if np.iscomplexobj(f) else to_pairs(f.astype(np.complex128))
        tape = Tape(self.params)
        out = self.projection.forward(tape, self.hidden_state(tape, tape.constant(pairs)))
        re, im = out.value[..., 0], out.value[..., 1]
        return float(np.linalg.norm(im) / max(np.linalg.norm(re), 1e-300))

    def hidden_state(self, tape: Tape, f: Node) -> Node:
        """a_L, the last block output with its skip sum."""
        states = [self.lift(tape, f)]
        for i, block in enumerate(self.blocks, start=1):
            a = block.forward(tape, states[-1])
            for j in range(i):
                a = tape.add(a, self.skips[(j, i)].forward(tape, states[j]))
            states.append(a)
        return states[-1]


def lift(f: ComplexGrid, model: PdIaeModel) -> np.ndarray:
    """Single-channel lift of one grid; returns the c lifted channels stacked on a leading axis."""
    if f.dim != model.config.d:
        raise ValueError(f"Grid dimension {f.dim} does not match config d={model.config.d}")
    tape = Tape(model.params)
    out = model.lift(tape, tape.constant(to_pairs(f.values)[None, None]))
    return to_complex(out.value[0])


def model_forward(f: ComplexGrid | np.ndarray, model: PdIaeModel,
                  s_out: Sequence[int] | int | None = None) -> np.ndarray:
    """Forward pass on a single grid or a batch array; see PdIaeModel.predict."""
    if isinstance(f, ComplexGrid):
        return model.predict(f.values[None, None], s_out)[0, 0]
    return model.predict(f, s_out)
