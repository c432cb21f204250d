"""
Architecture configuration for the full network.

Everything that fixes the parameter layout lives here, so a config alone is
enough to rebuild the slot list (that is how checkpoints are loaded). None of
these fields depends on the sampling grid.
"""

import enum

from pydantic import BaseModel, Field, field_validator

from pdcore.block import ChannelKind


class BlockKind(str, enum.Enum):
    PD = "pd"                  # pseudo-differential encoder/decoder
    DENSE_IAE = "dense_iae"    # dense integral-kernel encoder/decoder


class PdIaeConfig(BaseModel):
    d: int = Field(default=1, ge=1, le=2, description="Spatial dimension of input and output grids")
    L: int = Field(default=4, ge=1, description="Number of multi-channel blocks")
    K: int = Field(default=3, ge=1, description="Rank of the symbol factorization")
    m: int = Field(default=12, ge=2, description="Retained modes per axis; must be even")
    c: int = Field(default=8, ge=1, description="Working channel width")
    in_channels: int = Field(default=1, ge=1)
    out_channels: int = Field(default=1, ge=1)
    mid_hidden: int | None = Field(
        default=None, ge=1,
        description="Hidden width of each mid FNN; None means 2·c·m^d",
    )
    hidden_widths: tuple[int, ...] = Field(
        default=(32, 32), min_length=1,
        description="Hidden widths of the spatial basis net (and of dense-IAE kernel nets)",
    )
    channels: tuple[ChannelKind, ...] = Field(
        default=(ChannelKind.IDENTITY, ChannelKind.FOURIER), min_length=1,
    )
    block: BlockKind = BlockKind.PD
    coord_channels: bool = Field(default=True, description="Feed e^{2πi x} per axis to the lift")
    real_output: bool = Field(default=True, description="Emit the real part of the projection")
    seed: int = 1729

    model_config = {"frozen": True, "extra": "forbid"}

    @field_validator("m")
    @classmethod
    def _even_modes(cls, m: int) -> int:
        if m % 2:
            raise ValueError(f"m must be even (centered band), got {m}")
        return m

    @field_validator("hidden_widths")
    @classmethod
    def _positive_widths(cls, widths: tuple[int, ...]) -> tuple[int, ...]:
        if any(w < 1 for w in widths):
            raise ValueError(f"hidden widths must be positive, got {widths}")
        return widths

    @property
    def lift_inputs(self) -> int:
        return self.in_channels + (self.d if self.coord_channels else 0)

    @property
    def latent_size(self) -> int:
        return self.m ** self.d

    @property
    def mid_width(self) -> int:
        return self.mid_hidden or 2 * self.c * self.latent_size
