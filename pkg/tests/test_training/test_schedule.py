"""
Tests for the plateau schedule.

- Improvement resets the counter
- plateau_halve flat epochs halve the learning rate
- plateau_stop flat epochs stop training
"""

from training.schedule import Decision, PlateauSchedule


def test_first_epoch_is_an_improvement():
    schedule = PlateauSchedule(1e-3, 40, 100)
    assert schedule.observe(0.5) == Decision.IMPROVED
    assert schedule.best == 0.5


def test_flat_error_halves_then_stops():
    schedule = PlateauSchedule(1e-3, 40, 100)
    decisions = [schedule.observe(0.5) for _ in range(101)]
    assert decisions[0] == Decision.IMPROVED
    assert decisions[40] == Decision.HALVE and decisions[80] == Decision.HALVE
    assert decisions[100] == Decision.STOP
    assert Decision.STOP not in decisions[:100]
    assert schedule.lr == 1e-3 / 4


def test_improvement_below_resolution_does_not_count():
    schedule = PlateauSchedule(1e-3, 2, 3)
    schedule.observe(0.5)
    assert schedule.observe(0.5 - 1e-13) == Decision.CONTINUE
    assert schedule.observe(0.4) == Decision.IMPROVED
    assert schedule.since_best == 0


def test_worse_error_counts_as_plateau():
    schedule = PlateauSchedule(1.0, 2, 5)
    schedule.observe(0.1)
    assert [schedule.observe(0.2) for _ in range(2)] == [Decision.CONTINUE, Decision.HALVE]
    assert schedule.lr == 0.5
