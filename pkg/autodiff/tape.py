"""
Reverse-mode autodiff tape (Wengert list).

A Tape is created per forward pass, bound to a dict of named parameter
arrays. Building the graph appends nodes in execution order, so every node's
inputs are strictly earlier nodes and the list is already topologically
sorted. backprop() walks it once in reverse.

    tape = Tape(params)                 # params: {"lift.W": array, ...}
    w = tape.param("lift.W")            # leaf, created once per name
    x = tape.constant(data)             # leaf without a gradient slot
    y = tape.tanh(tape.matmul(x, w))
    loss = tape.sum(y)
    grads = tape.backprop(loss)         # {"lift.W": dL/dW, ...}

Node values are read-only once recorded, so a finished tape can be shared
with readers on other threads. Building and backprop are single-threaded.
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from autodiff import ops
from autodiff.errors import NonFiniteError, ShapeError
from autodiff.ops import AbstractOp, OpKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Node:
    id: int
    value: np.ndarray
    op: AbstractOp | None = None
    inputs: tuple[int, ...] = field(default_factory=tuple)
    name: str | None = None   # parameter slot name, leaves only

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape


def _frozen(value: np.ndarray) -> np.ndarray:
    arr = np.array(value, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


class Tape:

    def __init__(self, params: Mapping[str, np.ndarray] | None = None):
        self._params: dict[str, np.ndarray] = {
            name: np.asarray(value, dtype=np.float64) for name, value in (params or {}).items()
        }
        self.nodes: list[Node] = []
        self._leaves: dict[str, Node] = {}

    @property
    def parameters(self) -> Mapping[str, np.ndarray]:
        return self._params

    # ── Leaves ──────────────────────────────────────────────────

    def param(self, name: str) -> Node:
        """Leaf for a named parameter slot. Repeated calls return the same node."""
        node = self._leaves.get(name)
        if node is not None:
            return node
        if name not in self._params:
            raise ValueError(f"Unknown parameter slot: '{name}'")
        node = self._append(self._params[name], name=name)
        self._leaves[name] = node
        return node

    def constant(self, value: np.ndarray | float) -> Node:
        return self._append(np.asarray(value, dtype=np.float64))

    def _append(self, value, op=None, inputs=(), name=None) -> Node:
        node = Node(id=len(self.nodes), value=_frozen(value), op=op, inputs=inputs, name=name)
        self.nodes.append(node)
        return node

    # ── Recording ───────────────────────────────────────────────

    def _own(self, node: Node) -> None:
        if node.id >= len(self.nodes) or self.nodes[node.id] is not node:
            raise ValueError(f"Node {node.id} does not belong to this tape")

    def apply(self, op: AbstractOp, *inputs: Node) -> Node:
        for node in inputs:
            self._own(node)
        op.check(*(node.shape for node in inputs))
        value = op.forward(*(node.value for node in inputs))
        if not np.all(np.isfinite(value)):
            raise NonFiniteError(f"{op.kind.value} produced non-finite values")
        return self._append(value, op=op, inputs=tuple(node.id for node in inputs))

    def elementwise(self, kind: OpKind | str, a: Node, b: Node | None = None,
                    alpha: float | None = None) -> Node:
        """Apply one of add, sub, mul, cmul, scale, tanh, relu."""
        kind = OpKind(kind)
        if kind not in ops.ELEMENTWISE_KINDS:
            raise ValueError(f"Not an elementwise kind: '{kind.value}'")
        if kind == OpKind.SCALE:
            if alpha is None:
                raise ValueError("scale needs alpha")
            return self.apply(ops.ScaleOp(alpha), a)
        op = ops.create_op(kind)
        if op.arity == 2:
            if b is None:
                raise ValueError(f"{kind.value} needs two operands")
            return self.apply(op, a, b)
        return self.apply(op, a)

    def add(self, a: Node, b: Node) -> Node:
        return self.apply(ops.AddOp(), a, b)

    def sub(self, a: Node, b: Node) -> Node:
        return self.apply(ops.SubOp(), a, b)

    def mul(self, a: Node, b: Node) -> Node:
        return self.apply(ops.MulOp(), a, b)

    def cmul(self, a: Node, b: Node) -> Node:
        return self.apply(ops.CmulOp(), a, b)

    def scale(self, a: Node, alpha: float) -> Node:
        return self.apply(ops.ScaleOp(alpha), a)

    def tanh(self, a: Node) -> Node:
        return self.apply(ops.TanhOp(), a)

    def relu(self, a: Node) -> Node:
        return self.apply(ops.ReluOp(), a)

    def matmul(self, a: Node, b: Node) -> Node:
        return self.apply(ops.MatmulOp(), a, b)

    def channel_mix(self, w: Node, x: Node) -> Node:
        return self.apply(ops.ChannelMixOp(), w, x)

    def mode_mix(self, w: Node, x: Node) -> Node:
        return self.apply(ops.ModeMixOp(), w, x)

    def bias(self, x: Node, b: Node, axis: int, pair: bool = False) -> Node:
        return self.apply(ops.BiasOp(axis, pair), x, b)

    def sum(self, x: Node, axis: int | None = None) -> Node:
        return self.apply(ops.SumOp(axis), x)

    def mse(self, pred: Node, target: Node) -> Node:
        return self.apply(ops.MseOp(), pred, target)

    def reshape(self, x: Node, shape: Sequence[int]) -> Node:
        return self.apply(ops.ReshapeOp(shape), x)

    def transpose(self, x: Node, axes: Sequence[int]) -> Node:
        return self.apply(ops.TransposeOp(axes), x)

    def expand(self, x: Node, shape: Sequence[int]) -> Node:
        if tuple(shape) == x.shape:
            return x
        return self.apply(ops.ExpandOp(shape), x)

    def concat(self, xs: Sequence[Node], axis: int) -> Node:
        return self.apply(ops.ConcatOp(axis), *xs)

    def real(self, x: Node) -> Node:
        return self.apply(ops.RealOp(), x)

    def complex(self, x: Node) -> Node:
        return self.apply(ops.ComplexOp(), x)

    def fft(self, x: Node, ndim: int) -> Node:
        return self.apply(ops.FftOp(ndim), x)

    def synth(self, x: Node, sizes: int | Sequence[int], ndim: int) -> Node:
        return self.apply(ops.SynthOp(sizes, ndim), x)

    def truncate(self, x: Node, modes: int | Sequence[int], ndim: int) -> Node:
        return self.apply(ops.TruncateOp(modes, ndim), x)

    def pad(self, x: Node, sizes: int | Sequence[int], ndim: int) -> Node:
        return self.apply(ops.PadOp(sizes, ndim), x)

    def resample(self, x: Node, sizes: int | Sequence[int], ndim: int) -> Node:
        return self.apply(ops.ResampleOp(sizes, ndim), x)

    # ── Differentiation ─────────────────────────────────────────

    def backprop(self, loss: Node) -> dict[str, np.ndarray]:
        """
        Gradient of a scalar node with respect to every parameter slot.

        Slots that the loss does not depend on (or that were never pulled
        onto the tape) get a zero gradient of the slot's shape.
        """
        self._own(loss)
        if loss.value.size != 1:
            raise ShapeError(f"Loss must be scalar, got shape {loss.shape}")

        grads: dict[int, np.ndarray] = {loss.id: np.ones_like(loss.value)}
        found: dict[str, np.ndarray] = {}
        for node in reversed(self.nodes[: loss.id + 1]):
            g = grads.pop(node.id, None)
            if g is None:
                continue
            if node.op is None:
                if node.name is not None:
                    found[node.name] = g
                continue
            inputs = [self.nodes[i].value for i in node.inputs]
            for i, gi in zip(node.inputs, node.op.backward(g, inputs, node.value)):
                if gi is None:
                    continue
                grads[i] = grads[i] + gi if i in grads else gi

        result = {name: np.zeros_like(value) for name, value in self._params.items()}
        for name, g in found.items():
            result[name] = np.array(g, dtype=np.float64).reshape(self._params[name].shape)
        return result

    def replay(self) -> list[np.ndarray]:
        """Recompute every node from the leaves, in order."""
        values: list[np.ndarray] = []
        for node in self.nodes:
            if node.op is None:
                values.append(node.value)
            else:
                values.append(node.op.forward(*(values[i] for i in node.inputs)))
        return values

    def verify_replay(self) -> bool:
        """True if replaying reproduces every saved value bit for bit."""
        return all(
            np.array_equal(saved.value, again)
            for saved, again in zip(self.nodes, self.replay())
        )
