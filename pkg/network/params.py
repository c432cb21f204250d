"""
Closed-form parameter counts.

Real scalars throughout: a complex weight counts 2. With M = m^d,
n = 2cM (mid FNN width) and h the mid hidden width:

    channel map  a → b     2ab + 2b
    mlp  w₀ → … → w_n      Σ w_{i−1}·w_i + w_i
    pd codec               P, Q, Qt: 3·2MK  +  mlp(d, hidden, 2K)
    dense-IAE codec        2 · mlp(1+2d, hidden, 2)
    pipeline               codec + mlp(n, h, h, n)
    block                  channels · pipeline + [channels > 1] · map(channels·c → c)
    network                map(lift_inputs → c) + L · block + L(L+1)/2 · map(c → c) + map(c → out)

None of the terms involves a grid size.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

from network.config import BlockKind, PdIaeConfig


def channel_map_count(c_in: int, c_out: int) -> int:
    return 2 * c_in * c_out + 2 * c_out


def mlp_count(widths: Sequence[int]) -> int:
    return sum(a * b + b for a, b in zip(widths[:-1], widths[1:]))


def codec_count(config: PdIaeConfig) -> int:
    d, M, K, hidden = config.d, config.latent_size, config.K, config.hidden_widths
    if config.block == BlockKind.PD:
        return 3 * 2 * M * K + mlp_count((d, *hidden, 2 * K))
    return 2 * mlp_count((1 + 2 * d, *hidden, 2))


def pipeline_count(config: PdIaeConfig) -> int:
    n = 2 * config.c * config.latent_size
    h = config.mid_width
    return codec_count(config) + mlp_count((n, h, h, n))


def block_count(config: PdIaeConfig) -> int:
    n_channels = len(config.channels)
    merge = channel_map_count(n_channels * config.c, config.c) if n_channels > 1 else 0
    return n_channels * pipeline_count(config) + merge


@dataclass(frozen=True)
class ParamCount:
    total: int
    breakdown: dict[str, int] = field(default_factory=dict)


def param_count(config: PdIaeConfig) -> ParamCount:
    L, c = config.L, config.c
    breakdown = {
        "lift": channel_map_count(config.lift_inputs, c),
        "blocks": L * block_count(config),
        "skips": L * (L + 1) // 2 * channel_map_count(c, c),
        "projection": channel_map_count(c, config.out_channels),
    }
    return ParamCount(total=sum(breakdown.values()), breakdown=breakdown)


def slot_walk_count(model) -> ParamCount:
    """Count by walking the model's parameter slots, grouped like param_count."""
    groups = {"lift": 0, "blocks": 0, "skips": 0, "projection": 0}
    prefixes = {"lift": "lift.", "blocks": "block", "skips": "skip", "projection": "proj."}
    for slot in model.slots():
        group = next(g for g, p in prefixes.items() if slot.name.startswith(p))
        groups[group] += slot.size
    return ParamCount(total=sum(groups.values()), breakdown=groups)
