"""
Parameter bookkeeping shared by every trainable component.

A component never owns arrays. It declares ParamSlots (name, shape, init
rule), and a model keeps a flat {name: array} dict built from those slots.
At forward time the component pulls its slots from the Tape by name. This is
what lets the same component be evaluated concurrently on different tapes and
serialized by walking the slot list.

Encoders and decoders are Strategy implementations: a multi-channel block
asks its codec factory for a (encoder, decoder) pair and only talks to the
abstract interfaces below.
"""

from abc import ABC, abstractmethod
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from autodiff.tape import Node, Tape


@dataclass(frozen=True)
class ParamSlot:
    name: str
    shape: tuple[int, ...]
    bound: float = 0.0       # uniform(-bound, bound); 0 → zeros
    is_complex: bool = False  # trailing axis of length 2 holds (re, im)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        if self.bound == 0.0:
            return np.zeros(self.shape)
        return rng.uniform(-self.bound, self.bound, self.shape)


class ParamModule(ABC):

    def __init__(self, prefix: str):
        self.prefix = prefix

    def slot_name(self, leaf: str) -> str:
        return f"{self.prefix}.{leaf}"

    @abstractmethod
    def slots(self) -> list[ParamSlot]:
        ...

    def init_params(self, rng: np.random.Generator) -> dict[str, np.ndarray]:
        return {slot.name: slot.sample(rng) for slot in self.slots()}

    def param_count(self) -> int:
        return sum(slot.size for slot in self.slots())


class AbstractEncoder(ParamModule):

    @abstractmethod
    def encode(self, tape: Tape, a: Node) -> Node:
        """(B, c, *s, 2) field → (B, c, *[m]*d, 2) latent."""
        ...


class AbstractDecoder(ParamModule):

    @abstractmethod
    def decode(self, tape: Tape, u: Node, sizes: Sequence[int]) -> Node:
        """(B, c, *[m]*d, 2) latent → (B, c, *sizes, 2) field."""
        ...


def fan_in_bound(fan_in: int) -> float:
    return 1.0 / float(np.sqrt(max(fan_in, 1)))


def grid_sizes(x: Node) -> tuple[int, ...]:
    """Grid axes of a (B, c, *grid, 2) field node."""
    return tuple(x.shape[2:-1])
