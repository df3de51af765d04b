"""Run reports: JSON tree, summary table formatting, CSV rows.

The CSV columns follow the result-table layout used across this project:
Start Container through Memory Usage, with extremes rendered as
"length (count)" and sub-second timings as "< 1 second".
"""

from __future__ import annotations

import csv
import io as _io
import json

from .engine import TraversalResult
from .scenario import Metrics, Scenario

CSV_COLUMNS = [
    "Scenario",
    "Start Container",
    "End Container",
    "Configuration",
    "Description",
    "Fastest Completion Time",
    "Final Reality Paths",
    "# Goal Achieving Paths",
    "Total Connections",
    "Longest Path",
    "Shortest Path",
    "Variant Containers Created",
    "Variant Links Created",
    "Memory Usage",
]


def format_duration(seconds: float) -> str:
    if seconds < 1.0:
        return "< 1 second"
    whole = int(seconds)
    hours, remainder = divmod(whole, 3600)
    minutes, secs = divmod(remainder, 60)
    return f"{hours:02d}:{minutes:02d}:{secs:02d}"


def format_extreme(pair: tuple[int, int]) -> str:
    length, count = pair
    return f"{length} ({count})"


def format_goal_count(count: int | None) -> str:
    return "N/A" if count is None else str(count)


def format_memory(estimate: int) -> str:
    return f"{max(1, round(estimate / 2**20))} MB"


def build_report(scenario: Scenario, config, result: TraversalResult, metrics: Metrics) -> dict:
    """Assemble the JSON report tree for one completed run."""
    paths = []
    for index, path in enumerate(result.paths):
        connections = []
        for record in path.connections:
            connections.append(
                {
                    "start": record.start_id,
                    "link": record.link_id,
                    "end": record.end_id,
                    "triggered_generic": list(record.triggered_generic),
                    "triggered_normal": list(record.triggered_normal),
                    "skipped_postconditions": record.skipped_postconditions,
                    "actions_fired": [
                        {"rule": rule_id, "action": action_id, "executed": executed}
                        for rule_id, action_id, executed in record.actions_fired
                    ],
                    "start_state": record.start_variant.configuration,
                    "link_state": record.link_variant.configuration,
                    "end_state": record.end_variant.configuration,
                }
            )
        paths.append(
            {
                "index": index,
                "length": path.length,
                "goal_achieved": path.goal_achieved,
                "connections": connections,
                "terminal_changes": path.terminal_changes(),
                "environment": path.environment,
            }
        )
    return {
        "format": 1,
        "scenario": {
            "name": scenario.name,
            "start": scenario.start,
            "end": scenario.end,
            "configuration": scenario.configuration_label(),
            "description": scenario.description,
        },
        "config": {
            "rule_cap": config.rule_cap,
            "start": config.start,
            "end": config.end,
            "max_paths": config.max_paths,
            "max_seconds": config.max_seconds,
            "allow_normal_only": config.allow_normal_only,
            "allow_actions": config.allow_actions,
            "goal": (
                None
                if config.goal is None
                else [{"fact": fact_id, "value": value} for fact_id, value in config.goal]
            ),
        },
        "metrics": metrics.as_dict(),
        "paths": paths,
        "tallies": {
            "dead_ended": result.dead_ended,
            "loop_terminated": result.loop_terminated,
            "skipped_postconditions": result.skipped_postconditions,
            "candidates_evaluated": result.candidates_evaluated,
        },
    }


def verify_report(report: dict) -> list[str]:
    """Recompute the path-derived metrics from the per-path records and
    list every disagreement with the embedded metrics."""
    problems = []
    metrics = report.get("metrics", {})
    paths = report.get("paths", [])
    if len(paths) != metrics.get("final_reality_paths"):
        return [
            f"paths recorded ({len(paths)}) != final_reality_paths "
            f"({metrics.get('final_reality_paths')!r}); cannot recompute"
        ]
    lengths = [p["length"] for p in paths]
    checks = {
        "final_reality_paths": len(lengths),
        "total_connections": sum(lengths),
        "longest_path": [max(lengths), lengths.count(max(lengths))] if lengths else [0, 0],
        "shortest_path": [min(lengths), lengths.count(min(lengths))] if lengths else [0, 0],
    }
    goals = [p.get("goal_achieved") for p in paths]
    if any(g is not None for g in goals):
        checks["goal_achieving_paths"] = sum(1 for g in goals if g)
    for key, expected in checks.items():
        if metrics.get(key) != expected:
            problems.append(f"{key}: embedded {metrics.get(key)!r} != recomputed {expected!r}")
    for path in paths:
        if path["length"] != len(path["connections"]) + 1:
            problems.append(f"path {path['index']}: length != connections + 1")
    return problems


def dump_report(report: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(report, handle, indent=2, ensure_ascii=False)
        handle.write("\n")


def summary_row(scenario: Scenario, metrics: Metrics) -> dict[str, str]:
    return {
        "Scenario": scenario.name,
        "Start Container": scenario.start,
        "End Container": scenario.end,
        "Configuration": scenario.configuration_label(),
        "Description": scenario.description,
        "Fastest Completion Time": format_duration(metrics.fastest_completion_time),
        "Final Reality Paths": str(metrics.final_reality_paths),
        "# Goal Achieving Paths": format_goal_count(metrics.goal_achieving_paths),
        "Total Connections": str(metrics.total_connections),
        "Longest Path": format_extreme(metrics.longest_path),
        "Shortest Path": format_extreme(metrics.shortest_path),
        "Variant Containers Created": str(metrics.variant_containers_created),
        "Variant Links Created": str(metrics.variant_links_created),
        "Memory Usage": format_memory(metrics.memory_estimate),
    }


def render_csv(rows: list[dict[str, str]]) -> str:
    buffer = _io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def summary_lines(scenario: Scenario, metrics: Metrics, partial: bool) -> list[str]:
    """Human-readable run summary for terminal output."""
    row = summary_row(scenario, metrics)
    lines = [f"{label}: {row[label]}" for label in CSV_COLUMNS[1:]]
    if partial:
        lines.append("Stopped early: yes (partial results)")
    return lines
