"""Scenario runner: wires sensors, link, controller and notifications together.

run() is referentially transparent in (scenario, seed, config): it touches
no wall clock and no filesystem, so identical inputs give byte-identical
rendered reports. File outputs (report, outbox log, clip placeholders) are
the CLI layer's job.
"""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

from . import rng
from .airframe import LinkModel
from .config import ConfigError, SimConfig, apply_overrides
from .controller import Controller
from .events import EventKind, EventQueue
from .notify import Dispatcher, MemorySink
from .pulselock import PasswordSpec
from .report import RunReport
from .scenario import Scenario
from .sensors import UltrasonicConfig


def resolve_run_config(
    scenario: Scenario,
    base: Optional[SimConfig] = None,
    cli_overrides: Mapping = (),
) -> SimConfig:
    """Layer scenario ``set`` lines and CLI overrides over a base config."""
    cfg = base if base is not None else SimConfig()
    if scenario.overrides:
        cfg = apply_overrides(cfg, scenario.overrides)
    if cli_overrides:
        cfg = apply_overrides(cfg, cli_overrides)
    cfg.validate()
    return cfg


def validate_events(scenario: Scenario, cfg: SimConfig) -> None:
    """Reject scenarios whose distance samples exceed the configured range."""
    problems = []
    for ev in scenario.events:
        if ev.kind is EventKind.DISTANCE_SAMPLE and ev.meters > cfg.max_range_m:
            problems.append(
                f"distance {ev.meters} m at t={ev.at} exceeds max_range_m={cfg.max_range_m}"
            )
    if problems:
        raise ConfigError("; ".join(problems))


def build_controller(cfg: SimConfig, seed: int, dispatcher: Dispatcher) -> Controller:
    ultrasonic = UltrasonicConfig(
        speed_of_sound=cfg.speed_of_sound,
        threshold_distance=cfg.threshold_m,
        max_range=cfg.max_range_m,
        retrigger_cooldown_ms=cfg.retrigger_cooldown_ms,
    )
    password = PasswordSpec.from_string(
        cfg.password, cfg.pulse_period_ms, cfg.press_window_ms
    )
    link = LinkModel(
        drop_probability=cfg.drop_probability,
        latency_ms=cfg.latency_ms,
        max_retries=cfg.max_retries,
        rng_seed=seed,
        data_rate_bps=cfg.data_rate_bps,
    )
    return Controller(
        ultrasonic=ultrasonic,
        password=password,
        link=link,
        dispatcher=dispatcher,
        clip_duration_ms=cfg.clip_duration_ms,
        presence_to_authorities=cfg.presence_to_authorities,
    )


def run(
    scenario: Scenario,
    seed: int = 0,
    base_config: Optional[SimConfig] = None,
    *,
    cli_overrides: Mapping = (),
    extra_sinks: Sequence = (),
) -> RunReport:
    """Execute a scenario to completion and return its report.

    The returned report owns everything observable about the run: the final
    mode, the action log, outbox tallies and the clip manifest. extra_sinks
    receive every notification in addition to the always-present in-memory
    outbox sink.
    """
    cfg = resolve_run_config(scenario, base_config, cli_overrides)
    validate_events(scenario, cfg)

    dispatcher = Dispatcher([MemorySink()] + list(extra_sinks))
    controller = build_controller(cfg, seed, dispatcher)

    queue = EventQueue()
    for ev in scenario.events:
        queue.push(ev)
    for item in queue.drain():
        for followup in controller.dispatch(item):
            queue.push(followup)

    return RunReport(
        scenario=scenario.name,
        seed=seed,
        rng_algorithm=rng.ALGORITHM,
        final_mode=controller.state.mode.value,
        actions=tuple(controller.state.action_log),
        outbox_counts=dispatcher.outbox.counts(),
        clips=tuple(controller.clips),
        clip_bytes=cfg.clip_bytes,
    )
