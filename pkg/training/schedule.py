"""
Plateau schedule — decides what happens after each epoch's test error.

Three outcomes:
1. error improved on the best seen (by more than IMPROVEMENT_TOL) → keep going, remember it
2. no improvement for a multiple of plateau_halve epochs → halve the learning rate
3. no improvement for plateau_stop epochs → stop

Lifecycle:
    epoch → observe(err) → IMPROVED        (best := err, counter := 0)
    epoch → observe(err) → HALVE           (counter % plateau_halve == 0)
    epoch → observe(err) → STOP            (counter == plateau_stop)
    epoch → observe(err) → CONTINUE        (otherwise)
"""

import enum
import logging
import math

logger = logging.getLogger(__name__)

IMPROVEMENT_TOL = 1e-12


class Decision(str, enum.Enum):
    IMPROVED = "improved"
    CONTINUE = "continue"
    HALVE = "halve"
    STOP = "stop"


class PlateauSchedule:

    def __init__(self, lr: float, plateau_halve: int, plateau_stop: int):
        self.lr = lr
        self.plateau_halve = plateau_halve
        self.plateau_stop = plateau_stop
        self.best = math.inf
        self.since_best = 0

    def observe(self, error: float) -> Decision:
        """Record one epoch's test error and update lr in place when halving."""
        if error < self.best - IMPROVEMENT_TOL:
            self.best = error
            self.since_best = 0
            return Decision.IMPROVED

        self.since_best += 1
        if self.since_best >= self.plateau_stop:
            logger.info(f"No improvement for {self.since_best} epochs (best {self.best:.6g}), stopping")
            return Decision.STOP
        if self.since_best % self.plateau_halve == 0:
            self.lr /= 2
            logger.info(f"No improvement for {self.since_best} epochs, halving lr to {self.lr:.3g}")
            return Decision.HALVE
        return Decision.CONTINUE
