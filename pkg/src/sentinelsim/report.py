"""Run reports and their text / structured renderings.

Rendering is deterministic: the same report always produces the same bytes,
and the structured form is JSON with sorted keys so replays can be compared
with a plain byte diff.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, Tuple

from .controller import Action, RecordingJob

FORMATS = ("text", "structured")


@dataclass(frozen=True)
class RunReport:
    scenario: str
    seed: int
    rng_algorithm: str
    final_mode: str
    actions: Tuple[Action, ...]
    outbox_counts: Dict[str, int]
    clips: Tuple[RecordingJob, ...]
    clip_bytes: int

    def summary_lines(self) -> list:
        lines = [
            "--- summary ---",
            f"scenario: {self.scenario}",
            f"seed: {self.seed}",
            f"rng: {self.rng_algorithm}",
            f"final_mode: {self.final_mode}",
        ]
        for kind in sorted(self.outbox_counts):
            lines.append(f"outbox.{kind}: {self.outbox_counts[kind]}")
        lines.append(f"clips: {len(self.clips)}")
        for job in self.clips:
            lines.append(
                f"clip {job.clip_id}: started_at={job.started_at} "
                f"duration_ms={job.duration_ms} ref={job.stored_ref} "
                f"bytes={self.clip_bytes}"
            )
        return lines


def render_report(report: RunReport, fmt: str = "text") -> bytes:
    """Render to UTF-8 bytes in the requested format."""
    if fmt == "text":
        lines = [a.line() for a in report.actions]
        lines.extend(report.summary_lines())
        return ("\n".join(lines) + "\n").encode("utf-8")
    if fmt == "structured":
        doc = {
            "scenario": report.scenario,
            "seed": report.seed,
            "rng": report.rng_algorithm,
            "final_mode": report.final_mode,
            "actions": [
                {
                    "t": a.at,
                    "component": a.component,
                    "action": a.action,
                    "details": a.details,
                }
                for a in report.actions
            ],
            "outbox": dict(report.outbox_counts),
            "clips": [
                {
                    "clip_id": job.clip_id,
                    "started_at": job.started_at,
                    "duration_ms": job.duration_ms,
                    "stored_ref": job.stored_ref,
                    "bytes": report.clip_bytes,
                }
                for job in report.clips
            ],
        }
        return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}; expected one of {FORMATS}")
