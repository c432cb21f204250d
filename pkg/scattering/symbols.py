"""
1-D symbol tasks: random band-limited inputs and targets obtained by a
known Fourier multiplier σ(k), computed exactly in the spectrum.

    input   f(x) = Σ_{|k| < m_gen/2} c_k e^{2πikx}
    target  g(x) = Σ_{|k| < m_gen/2} σ(k) c_k e^{2πikx}

Coefficients are Hermitian (c_{−k} = conj c_k) with magnitude decaying as
(1 + |k|)^{−2}. Every registered σ satisfies σ(−k) = conj σ(k), so inputs
and targets are real, and both are exact on any grid s > m_gen.
"""

import enum
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from spectral import transforms

logger = logging.getLogger(__name__)


class SymbolKind(str, enum.Enum):
    DERIVATIVE = "derivative"
    ABS_XI = "abs_xi"
    BAND = "band"


class Symbol(ABC):
    @abstractmethod
    def __call__(self, k: np.ndarray) -> np.ndarray:
        """Multiplier at integer wavenumbers k."""


class DerivativeSymbol(Symbol):
    def __call__(self, k):
        return 2j * np.pi * k


class AbsSymbol(Symbol):
    def __call__(self, k):
        return 2 * np.pi * np.abs(k).astype(np.complex128)


class BandSymbol(Symbol):
    def __init__(self, k0: float = 4.0):
        if k0 <= 0:
            raise ValueError(f"Band width k0 must be positive, got {k0}")
        self.k0 = k0

    def __call__(self, k):
        return np.exp(-(k / self.k0) ** 2).astype(np.complex128)


_REGISTRY: dict[SymbolKind, type[Symbol]] = {
    SymbolKind.DERIVATIVE: DerivativeSymbol,
    SymbolKind.ABS_XI: AbsSymbol,
    SymbolKind.BAND: BandSymbol,
}


def symbol_kind(kind: SymbolKind | str) -> SymbolKind:
    try:
        return SymbolKind(kind)
    except ValueError:
        raise ValueError(f"Unknown symbol: '{kind}'. Available: {[k.value for k in SymbolKind]}") from None


def get_symbol(kind: SymbolKind | str, k0: float = 4.0) -> Symbol:
    cls = _REGISTRY[symbol_kind(kind)]
    return cls(k0) if cls is BandSymbol else cls()


def apply_symbol(f: np.ndarray, kind: SymbolKind | str, k0: float = 4.0) -> np.ndarray:
    """
    σ applied along the last axis of grid values. The unpaired Nyquist mode
    of an even grid is dropped; real input gives real output.
    """
    f = np.asarray(f)
    s = f.shape[-1]
    spectrum = transforms.centered_fft(f, 1)
    k = np.arange(s) - s // 2
    weights = get_symbol(kind, k0)(k)
    if s % 2 == 0:
        weights[0] = 0
    out = transforms.synthesize(spectrum * weights, s, 1)
    return out.real if not np.iscomplexobj(f) else out


@dataclass(frozen=True)
class SymbolTask:
    """Drawn coefficients; evaluate at any grid finer than m_gen."""
    kind: SymbolKind
    m_gen: int
    coeffs: np.ndarray       # (n, m_gen) centered, Hermitian
    k0: float = 4.0

    def _check(self, s: int) -> None:
        if s <= self.m_gen:
            raise ValueError(f"Grid s={s} must exceed m_gen={self.m_gen}")

    def inputs(self, s: int) -> np.ndarray:
        self._check(s)
        return transforms.synthesize(self.coeffs, s, 1).real

    def targets(self, s: int) -> np.ndarray:
        return apply_symbol(self.inputs(s), self.kind, self.k0)


def draw_coefficients(rng: np.random.Generator, m_gen: int, n: int) -> np.ndarray:
    if m_gen < 2 or m_gen % 2:
        raise ValueError(f"m_gen must be even and ≥ 2, got {m_gen}")
    half = m_gen // 2
    k = np.arange(1, half)
    decay = (1.0 + k) ** -2
    pos = (rng.normal(size=(n, half - 1)) + 1j * rng.normal(size=(n, half - 1))) / np.sqrt(2) * decay
    coeffs = np.zeros((n, m_gen), dtype=np.complex128)
    coeffs[:, half] = rng.normal(size=n)                 # k = 0
    coeffs[:, half + 1:] = pos
    coeffs[:, 1:half] = np.conj(pos[:, ::-1])             # k = −(half−1) … −1; slot 0 (k = −half) stays zero
    return coeffs


def gen_symbol_task_1d(kind: SymbolKind | str, m_gen: int, rng: np.random.Generator,
                       n: int = 1, k0: float = 4.0) -> SymbolTask:
    task = SymbolTask(symbol_kind(kind), m_gen, draw_coefficients(rng, m_gen, n), k0)
    logger.debug(f"Drew {n} {task.kind.value} samples with m_gen={m_gen}")
    return task