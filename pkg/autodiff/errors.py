"""Errors raised by the autodiff engine. Both are ValueErrors so callers can catch broadly."""


class ShapeError(ValueError):
    """Operand shapes are incompatible for the requested op."""


class NonFiniteError(ValueError):
    """An op produced NaN/inf, or a function under gradient check did."""
