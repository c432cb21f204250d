"""
Block registry — maps a BlockKind to the codec factory its channel pipelines use.

To add a block kind:
1. Write an encoder/decoder pair against pdcore.base's abstract interfaces
2. Add a factory (prefix, d, m, K, hidden) → (encoder, decoder)
3. Add a BlockKind member and register the factory in _REGISTRY
"""

from collections.abc import Callable, Sequence
from functools import partial

from baselines.dense_iae import dense_iae_codec
from network.config import BlockKind
from pdcore.base import AbstractDecoder, AbstractEncoder
from pdcore.block import CodecFactory, pd_codec


_REGISTRY: dict[BlockKind, Callable[..., tuple[AbstractEncoder, AbstractDecoder]]] = {
    BlockKind.PD: pd_codec,
    BlockKind.DENSE_IAE: dense_iae_codec,
}


def get_codec(kind: BlockKind | str, hidden: Sequence[int] = (32, 32)) -> CodecFactory:
    """Codec factory for a block kind. Raises ValueError if the kind is unknown."""
    try:
        factory = _REGISTRY[BlockKind(kind)]
    except ValueError:
        raise ValueError(
            f"Unknown block kind: '{kind}'. Available: {[k.value for k in _REGISTRY]}"
        ) from None
    return partial(factory, hidden=tuple(hidden))
