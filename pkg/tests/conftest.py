"""Shared helpers: canned scenarios and a randomized scenario generator."""

from __future__ import annotations

import random
import time

import pytest

_SUITE_T0 = time.perf_counter()

# acceptance tests append "<criterion>: PASS" lines here; the terminal
# summary prints them even when output capture is on
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"ACCEPTANCE {line}")
    elapsed = time.perf_counter() - _SUITE_T0
    terminalreporter.write_line(
        f"total suite wall time: {elapsed:.1f}s (acceptance budget: 60s)"
    )

from sentinelsim.events import EventKind, ScenarioEvent
from sentinelsim.scenario import Scenario

BREAKIN_TEXT = """\
set threshold_m 1.0
0 arm
1000 distance 3.5
2000 distance 0.8
5000 door open
"""

# presses land mid-window for "1100101" started at t=1000 (pulses 1, 2, 5, 7)
DEACTIVATE_TEXT = """\
0 arm
1000 mode_button
1250 press_down
1300 press_up
2250 press_down
2300 press_up
5250 press_down
7250 press_down
9000 door open
"""


@pytest.fixture
def breakin_scenario():
    from sentinelsim.scenario import parse_scenario

    return parse_scenario(BREAKIN_TEXT, name="breakin")


@pytest.fixture
def deactivate_scenario():
    from sentinelsim.scenario import parse_scenario

    return parse_scenario(DEACTIVATE_TEXT, name="deactivate")


def random_scenario(seed: int, n_events: int = 40, max_range: float = 4.0) -> Scenario:
    """A structurally valid random event stream.

    Times strictly increase and mode_button is only pressed when no attempt
    can still be running, so generated scenarios never hit state errors.
    """
    rnd = random.Random(seed)
    t = 0
    door_open = False
    attempt_end = -1
    events = []
    for _ in range(n_events):
        t += rnd.randint(1, 2500)
        kinds = ["arm", "distance", "distance", "door", "press_down", "press_up"]
        if t > attempt_end:
            kinds.append("mode_button")
        kind = rnd.choice(kinds)
        if kind == "arm":
            events.append(ScenarioEvent(at=t, kind=EventKind.ARM))
        elif kind == "distance":
            meters = round(rnd.uniform(0.0, max_range), 3)
            events.append(
                ScenarioEvent(at=t, kind=EventKind.DISTANCE_SAMPLE, meters=meters)
            )
        elif kind == "door":
            door_open = not door_open
            ek = EventKind.DOOR_OPEN if door_open else EventKind.DOOR_CLOSE
            events.append(ScenarioEvent(at=t, kind=ek))
        elif kind == "mode_button":
            events.append(ScenarioEvent(at=t, kind=EventKind.MODE_BUTTON))
            attempt_end = t + 6 * 1000 + 500
        elif kind == "press_down":
            events.append(ScenarioEvent(at=t, kind=EventKind.PRESS_DOWN))
        else:
            events.append(ScenarioEvent(at=t, kind=EventKind.PRESS_UP))
    return Scenario(name=f"fuzz-{seed}", events=tuple(events))
