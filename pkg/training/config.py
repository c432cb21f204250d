"""
Training configuration.

Defaults follow the reference schedule: Adam at lr 1e-3, batches of 5, the
learning rate halved after 40 epochs without a better test error and
training stopped after 100.
"""

from pydantic import BaseModel, Field, model_validator

from spectral.grid import ResampleMethod


class TrainConfig(BaseModel):
    lr: float = Field(default=1e-3, gt=0, description="Initial learning rate")
    batch_size: int = Field(default=5, ge=1)
    plateau_halve: int = Field(default=40, ge=1, description="Epochs without improvement before halving lr")
    plateau_stop: int = Field(default=100, ge=1, description="Epochs without improvement before stopping")
    aug_weight: float = Field(default=1.0, ge=0, description="Weight λ of the resampled-pair loss")
    augment_grids: tuple[int, ...] = Field(
        default=(24, 32, 48, 64, 96),
        description="Input grid sizes (per axis) the augmentation draws from",
    )
    augment_method: ResampleMethod = ResampleMethod.SPECTRAL
    eval_grids: tuple[int, ...] = Field(
        default=(), description="Grids for the per-epoch test error; empty means the native grid",
    )
    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    eps: float = Field(default=1e-8, gt=0)
    max_epochs: int = Field(default=500, ge=1)
    max_steps: int | None = Field(default=None, ge=1, description="Cap on optimizer steps")
    seed: int = 1729

    model_config = {"frozen": True, "extra": "forbid"}

    @model_validator(mode="after")
    def _plateau_order(self) -> "TrainConfig":
        if self.plateau_halve >= self.plateau_stop:
            raise ValueError(
                f"plateau_halve ({self.plateau_halve}) must be smaller than plateau_stop ({self.plateau_stop})"
            )
        return self
