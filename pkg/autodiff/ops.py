"""
Differentiable op kinds recorded on a Tape.

Each op is a small strategy object:
- forward(*values) computes the output array from input arrays
- backward(grad, inputs, output) returns one gradient per input (None = no gradient)

Attributes that are not tensors (scale factor, target shape, FFT sizes) live
on the op instance, so a node's op plus its input values are enough to
replay it.

Complex ops work on real-pair arrays (see autodiff.pairs). Gradients use the
convention g = dL/dre + i·dL/dim, under which:
- y = a·b          →  ga = g·conj(b), gb = g·conj(a)
- y = T x (T complex-linear)  →  gx = Tᴴ g

To add an op kind:
1. Subclass AbstractOp (or LinearComplexOp for a fixed complex-linear map)
2. Add an OpKind member and register the class in _REGISTRY
"""

import enum
from abc import ABC, abstractmethod
from collections.abc import Sequence

import numpy as np

from autodiff.errors import ShapeError
from autodiff.pairs import require_pairs, to_complex, to_pairs
from spectral import transforms


class OpKind(str, enum.Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"                  # real elementwise product
    CMUL = "cmul"                # complex elementwise product on real pairs
    SCALE = "scale"              # multiply by a fixed real scalar
    TANH = "tanh"
    RELU = "relu"
    MATMUL = "matmul"            # real 2-D product
    CHANNEL_MIX = "channel_mix"  # pointwise complex channel map
    MODE_MIX = "mode_mix"        # per-mode complex channel map
    BIAS = "bias"                # add a vector along one axis
    SUM = "sum"
    MSE = "mse"
    RESHAPE = "reshape"
    TRANSPOSE = "transpose"
    EXPAND = "expand"            # broadcast singleton axes
    CONCAT = "concat"
    REAL = "real"                # pairs → real part
    COMPLEX = "complex"          # real → pairs with zero imaginary part
    FFT = "fft"
    SYNTH = "synth"              # zero-pad then inverse FFT (fft_inverse)
    TRUNCATE = "truncate"
    PAD = "pad"
    RESAMPLE = "resample"        # spectral resample to new sizes


ELEMENTWISE_KINDS = frozenset({
    OpKind.ADD, OpKind.SUB, OpKind.MUL, OpKind.CMUL,
    OpKind.SCALE, OpKind.TANH, OpKind.RELU,
})

Grads = tuple[np.ndarray | None, ...]


class AbstractOp(ABC):

    # Number of inputs; None means variadic.
    arity: int | None = 1

    def check(self, *shapes: tuple[int, ...]) -> None:
        """Validate input shapes before forward. Raise ShapeError on mismatch."""
        if self.arity is not None and len(shapes) != self.arity:
            raise ShapeError(f"{self.kind.value} takes {self.arity} inputs, got {len(shapes)}")

    @abstractmethod
    def forward(self, *xs: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def backward(self, g: np.ndarray, xs: Sequence[np.ndarray], out: np.ndarray) -> Grads:
        ...

    @property
    @abstractmethod
    def kind(self) -> OpKind:
        ...


# ── Elementwise ─────────────────────────────────────────────────


class _SameShapeBinary(AbstractOp):
    arity = 2

    def check(self, *shapes):
        super().check(*shapes)
        a, b = shapes
        if a != b:
            raise ShapeError(f"{self.kind.value}: shape mismatch {a} vs {b}")


class AddOp(_SameShapeBinary):
    def forward(self, a, b):
        return a + b

    def backward(self, g, xs, out):
        return g, g

    @property
    def kind(self):
        return OpKind.ADD


class SubOp(_SameShapeBinary):
    def forward(self, a, b):
        return a - b

    def backward(self, g, xs, out):
        return g, -g

    @property
    def kind(self):
        return OpKind.SUB


class MulOp(_SameShapeBinary):
    def forward(self, a, b):
        return a * b

    def backward(self, g, xs, out):
        a, b = xs
        return g * b, g * a

    @property
    def kind(self):
        return OpKind.MUL


class CmulOp(_SameShapeBinary):
    def check(self, *shapes):
        super().check(*shapes)
        require_pairs(shapes[0], "cmul operand")

    def forward(self, a, b):
        return to_pairs(to_complex(a) * to_complex(b))

    def backward(self, g, xs, out):
        gz = to_complex(g)
        za, zb = to_complex(xs[0]), to_complex(xs[1])
        return to_pairs(gz * np.conj(zb)), to_pairs(gz * np.conj(za))

    @property
    def kind(self):
        return OpKind.CMUL


class ScaleOp(AbstractOp):
    def __init__(self, alpha: float):
        self.alpha = float(alpha)

    def forward(self, x):
        return self.alpha * x

    def backward(self, g, xs, out):
        return (self.alpha * g,)

    @property
    def kind(self):
        return OpKind.SCALE


class TanhOp(AbstractOp):
    def forward(self, x):
        return np.tanh(x)

    def backward(self, g, xs, out):
        return (g * (1.0 - out * out),)

    @property
    def kind(self):
        return OpKind.TANH


class ReluOp(AbstractOp):
    def forward(self, x):
        return np.maximum(x, 0.0)

    def backward(self, g, xs, out):
        return (g * (xs[0] > 0.0),)

    @property
    def kind(self):
        return OpKind.RELU


# ── Products ────────────────────────────────────────────────────


class MatmulOp(AbstractOp):
    arity = 2

    def check(self, *shapes):
        super().check(*shapes)
        a, b = shapes
        if len(a) != 2 or len(b) != 2 or a[1] != b[0]:
            raise ShapeError(f"matmul: cannot multiply {a} by {b}")

    def forward(self, a, b):
        return a @ b

    def backward(self, g, xs, out):
        a, b = xs
        return g @ b.T, a.T @ g

    @property
    def kind(self):
        return OpKind.MATMUL


class ChannelMixOp(AbstractOp):
    """out[b, o, ...] = Σ_i W[o, i] · x[b, i, ...], complex, pointwise over the grid."""

    arity = 2

    def check(self, *shapes):
        super().check(*shapes)
        w, x = shapes
        require_pairs(w, "channel_mix weight")
        require_pairs(x, "channel_mix input")
        if len(w) != 3 or len(x) < 3 or w[1] != x[1]:
            raise ShapeError(f"channel_mix: weight {w} does not match input {x}")

    def forward(self, w, x):
        return to_pairs(np.einsum("oi,bi...->bo...", to_complex(w), to_complex(x)))

    def backward(self, g, xs, out):
        zw, zx = to_complex(xs[0]), to_complex(xs[1])
        gz = to_complex(g)
        gw = np.einsum(
            "bon,bin->oi",
            gz.reshape(gz.shape[0], gz.shape[1], -1),
            np.conj(zx).reshape(zx.shape[0], zx.shape[1], -1),
        )
        gx = np.einsum("oi,bo...->bi...", np.conj(zw), gz)
        return to_pairs(gw), to_pairs(gx)

    @property
    def kind(self):
        return OpKind.CHANNEL_MIX


class ModeMixOp(AbstractOp):
    """out[b, o, k] = Σ_i W[k, o, i] · x[b, i, k] with k running over the flattened modes."""

    arity = 2

    def check(self, *shapes):
        super().check(*shapes)
        w, x = shapes
        require_pairs(w, "mode_mix weight")
        require_pairs(x, "mode_mix input")
        if len(w) != 4 or len(x) < 4 or w[2] != x[1] or w[0] != int(np.prod(x[2:-1])):
            raise ShapeError(f"mode_mix: weight {w} does not match input {x}")

    def forward(self, w, x):
        zx = to_complex(x)
        flat = zx.reshape(zx.shape[0], zx.shape[1], -1)
        y = np.einsum("koi,bik->bok", to_complex(w), flat)
        return to_pairs(y.reshape((zx.shape[0], y.shape[1]) + zx.shape[2:]))

    def backward(self, g, xs, out):
        zw = to_complex(xs[0])
        zx = to_complex(xs[1])
        flat_x = zx.reshape(zx.shape[0], zx.shape[1], -1)
        gz = to_complex(g)
        flat_g = gz.reshape(gz.shape[0], gz.shape[1], -1)
        gw = np.einsum("bok,bik->koi", flat_g, np.conj(flat_x))
        gx = np.einsum("koi,bok->bik", np.conj(zw), flat_g).reshape(zx.shape)
        return to_pairs(gw), to_pairs(gx)

    @property
    def kind(self):
        return OpKind.MODE_MIX


class BiasOp(AbstractOp):
    """x + b, with b broadcast along every axis except `axis` (and the pair axis)."""

    arity = 2

    def __init__(self, axis: int, pair: bool = False):
        self.axis = axis
        self.pair = pair

    def _axis(self, ndim: int) -> int:
        return self.axis % ndim

    def check(self, *shapes):
        super().check(*shapes)
        x, b = shapes
        n = x[self._axis(len(x))]
        want = (n, 2) if self.pair else (n,)
        if self.pair:
            require_pairs(x, "bias input")
        if b != want:
            raise ShapeError(f"bias: expected bias of shape {want} for input {x}, got {b}")

    def _view(self, b: np.ndarray, ndim: int) -> np.ndarray:
        shape = [1] * ndim
        shape[self._axis(ndim)] = b.shape[0]
        if self.pair:
            shape[-1] = 2
        return b.reshape(shape)

    def forward(self, x, b):
        return x + self._view(b, x.ndim)

    def backward(self, g, xs, out):
        ndim = g.ndim
        keep = {self._axis(ndim)}
        if self.pair:
            keep.add(ndim - 1)
        reduce = tuple(a for a in range(ndim) if a not in keep)
        return g, g.sum(axis=reduce)

    @property
    def kind(self):
        return OpKind.BIAS


# ── Reductions ──────────────────────────────────────────────────


class SumOp(AbstractOp):
    def __init__(self, axis: int | None = None):
        self.axis = axis

    def forward(self, x):
        return np.asarray(x.sum(axis=self.axis), dtype=np.float64)

    def backward(self, g, xs, out):
        shape = xs[0].shape
        if self.axis is None:
            return (np.full(shape, float(g)),)
        return (np.broadcast_to(np.expand_dims(g, self.axis), shape).copy(),)

    @property
    def kind(self):
        return OpKind.SUM


class MseOp(_SameShapeBinary):
    """mean((pred - target)²) over every entry."""

    def forward(self, pred, target):
        diff = pred - target
        return np.asarray(np.mean(diff * diff), dtype=np.float64)

    def backward(self, g, xs, out):
        diff = xs[0] - xs[1]
        d = (2.0 * float(g) / diff.size) * diff
        return d, -d

    @property
    def kind(self):
        return OpKind.MSE


# ── Shape plumbing ──────────────────────────────────────────────


class ReshapeOp(AbstractOp):
    def __init__(self, shape: Sequence[int]):
        self.shape = tuple(int(s) for s in shape)

    def check(self, *shapes):
        super().check(*shapes)
        if int(np.prod(shapes[0])) != int(np.prod(self.shape)):
            raise ShapeError(f"reshape: cannot view {shapes[0]} as {self.shape}")

    def forward(self, x):
        return x.reshape(self.shape)

    def backward(self, g, xs, out):
        return (g.reshape(xs[0].shape),)

    @property
    def kind(self):
        return OpKind.RESHAPE


class TransposeOp(AbstractOp):
    def __init__(self, axes: Sequence[int]):
        self.axes = tuple(int(a) for a in axes)

    def check(self, *shapes):
        super().check(*shapes)
        if sorted(self.axes) != list(range(len(shapes[0]))):
            raise ShapeError(f"transpose: axes {self.axes} invalid for shape {shapes[0]}")

    def forward(self, x):
        return np.ascontiguousarray(np.transpose(x, self.axes))

    def backward(self, g, xs, out):
        return (np.transpose(g, np.argsort(self.axes)),)

    @property
    def kind(self):
        return OpKind.TRANSPOSE


class ExpandOp(AbstractOp):
    """Broadcast singleton axes to a target shape of the same rank."""

    def __init__(self, shape: Sequence[int]):
        self.shape = tuple(int(s) for s in shape)

    def check(self, *shapes):
        super().check(*shapes)
        x = shapes[0]
        if len(x) != len(self.shape) or any(a not in (1, b) for a, b in zip(x, self.shape)):
            raise ShapeError(f"expand: cannot broadcast {x} to {self.shape}")

    def forward(self, x):
        return np.ascontiguousarray(np.broadcast_to(x, self.shape))

    def backward(self, g, xs, out):
        x = xs[0].shape
        axes = tuple(i for i, (a, b) in enumerate(zip(x, self.shape)) if a == 1 and b != 1)
        return (g.sum(axis=axes, keepdims=True) if axes else g,)

    @property
    def kind(self):
        return OpKind.EXPAND


class ConcatOp(AbstractOp):
    arity = None

    def __init__(self, axis: int):
        self.axis = axis

    def check(self, *shapes):
        if not shapes:
            raise ShapeError("concat needs at least one input")
        ndim = len(shapes[0])
        axis = self.axis % ndim
        for s in shapes[1:]:
            if len(s) != ndim or any(a != b for i, (a, b) in enumerate(zip(s, shapes[0])) if i != axis):
                raise ShapeError(f"concat: shape mismatch {shapes[0]} vs {s} along axis {self.axis}")

    def forward(self, *xs):
        return np.concatenate(xs, axis=self.axis)

    def backward(self, g, xs, out):
        cuts = np.cumsum([x.shape[self.axis] for x in xs])[:-1]
        return tuple(np.split(g, cuts, axis=self.axis))

    @property
    def kind(self):
        return OpKind.CONCAT


class RealOp(AbstractOp):
    def check(self, *shapes):
        super().check(*shapes)
        require_pairs(shapes[0], "real input")

    def forward(self, x):
        return x[..., 0].copy()

    def backward(self, g, xs, out):
        return (np.stack([g, np.zeros_like(g)], axis=-1),)

    @property
    def kind(self):
        return OpKind.REAL


class ComplexOp(AbstractOp):
    def forward(self, x):
        return np.stack([x, np.zeros_like(x)], axis=-1)

    def backward(self, g, xs, out):
        return (g[..., 0].copy(),)

    @property
    def kind(self):
        return OpKind.COMPLEX


# ── Fixed complex-linear maps ───────────────────────────────────


class LinearComplexOp(AbstractOp):
    """A fixed complex-linear map on the trailing `ndim` grid axes; backward applies its adjoint."""

    def __init__(self, ndim: int):
        if ndim < 1:
            raise ValueError(f"ndim must be ≥ 1, got {ndim}")
        self.ndim = ndim

    def check(self, *shapes):
        super().check(*shapes)
        require_pairs(shapes[0], f"{self.kind.value} input")
        if len(shapes[0]) < self.ndim + 1:
            raise ShapeError(f"{self.kind.value}: shape {shapes[0]} has fewer than {self.ndim} grid axes")

    @abstractmethod
    def apply(self, z: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def adjoint(self, gz: np.ndarray, in_sizes: tuple[int, ...]) -> np.ndarray:
        ...

    def forward(self, x):
        return to_pairs(self.apply(to_complex(x)))

    def backward(self, g, xs, out):
        in_sizes = tuple(xs[0].shape[-self.ndim - 1:-1])
        return (to_pairs(self.adjoint(to_complex(g), in_sizes)),)


class FftOp(LinearComplexOp):
    def apply(self, z):
        return transforms.centered_fft(z, self.ndim)

    def adjoint(self, gz, in_sizes):
        return transforms.centered_fft_adjoint(gz, self.ndim)

    @property
    def kind(self):
        return OpKind.FFT


class SynthOp(LinearComplexOp):
    def __init__(self, sizes: int | Sequence[int], ndim: int):
        super().__init__(ndim)
        self.sizes = transforms.as_sizes(sizes, ndim)

    def apply(self, z):
        return transforms.synthesize(z, self.sizes, self.ndim)

    def adjoint(self, gz, in_sizes):
        return transforms.synthesize_adjoint(gz, in_sizes, self.ndim)

    @property
    def kind(self):
        return OpKind.SYNTH


class TruncateOp(LinearComplexOp):
    def __init__(self, modes: int | Sequence[int], ndim: int):
        super().__init__(ndim)
        self.modes = transforms.as_sizes(modes, ndim)

    def apply(self, z):
        return transforms.truncate_modes(z, self.modes, self.ndim)

    def adjoint(self, gz, in_sizes):
        return transforms.pad_modes(gz, in_sizes, self.ndim)

    @property
    def kind(self):
        return OpKind.TRUNCATE


class PadOp(LinearComplexOp):
    def __init__(self, sizes: int | Sequence[int], ndim: int):
        super().__init__(ndim)
        self.sizes = transforms.as_sizes(sizes, ndim)

    def apply(self, z):
        return transforms.pad_modes(z, self.sizes, self.ndim)

    def adjoint(self, gz, in_sizes):
        return transforms.truncate_modes(gz, in_sizes, self.ndim)

    @property
    def kind(self):
        return OpKind.PAD


class ResampleOp(LinearComplexOp):
    def __init__(self, sizes: int | Sequence[int], ndim: int):
        super().__init__(ndim)
        self.sizes = transforms.as_sizes(sizes, ndim)

    def apply(self, z):
        return transforms.resample_spectral(z, self.sizes, self.ndim)

    def adjoint(self, gz, in_sizes):
        return transforms.resample_spectral_adjoint(gz, in_sizes, self.ndim)

    @property
    def kind(self):
        return OpKind.RESAMPLE


# ── Registry ────────────────────────────────────────────────────

_REGISTRY: dict[OpKind, type[AbstractOp]] = {
    OpKind.ADD: AddOp,
    OpKind.SUB: SubOp,
    OpKind.MUL: MulOp,
    OpKind.CMUL: CmulOp,
    OpKind.SCALE: ScaleOp,
    OpKind.TANH: TanhOp,
    OpKind.RELU: ReluOp,
    OpKind.MATMUL: MatmulOp,
    OpKind.CHANNEL_MIX: ChannelMixOp,
    OpKind.MODE_MIX: ModeMixOp,
    OpKind.BIAS: BiasOp,
    OpKind.SUM: SumOp,
    OpKind.MSE: MseOp,
    OpKind.RESHAPE: ReshapeOp,
    OpKind.TRANSPOSE: TransposeOp,
    OpKind.EXPAND: ExpandOp,
    OpKind.CONCAT: ConcatOp,
    OpKind.REAL: RealOp,
    OpKind.COMPLEX: ComplexOp,
    OpKind.FFT: FftOp,
    OpKind.SYNTH: SynthOp,
    OpKind.TRUNCATE: TruncateOp,
    OpKind.PAD: PadOp,
    OpKind.RESAMPLE: ResampleOp,
}


def create_op(kind: OpKind | str, **attrs) -> AbstractOp:
    """Instantiate an op by kind. Raises ValueError if the kind is unknown."""
    try:
        kind = OpKind(kind)
    except ValueError:
        raise ValueError(
            f"Unknown op kind: '{kind}'. Available: {[k.value for k in _REGISTRY]}"
        ) from None
    return _REGISTRY[kind](**attrs)
