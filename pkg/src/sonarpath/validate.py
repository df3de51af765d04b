"""Structural validation: every finding is a report entry, never an exception.

The checks cover dangling references, duplicate common-property use on
one entity, environment facts carrying a common property, parent cycles,
success ranges and malformed scenario references.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import Network

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Finding:
    severity: str
    code: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: [{self.code}] {self.subject}: {self.message}"


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    def add(self, severity: str, code: str, subject: str, message: str) -> None:
        self.findings.append(Finding(severity, code, subject, message))

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == ERROR]

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_network(network: Network, scenarios=None) -> ValidationReport:
    report = ValidationReport()
    _check_facts(network, report)
    _check_containers(network, report)
    _check_links(network, report)
    _check_rules(network, report)
    for scenario in scenarios or []:
        _check_scenario(network, scenario, report)
    return report


def _check_facts(network: Network, report: ValidationReport) -> None:
    seen_cp_per_entity: dict[tuple[str, str], str] = {}
    for fact in network.facts.values():
        cp = fact.common_property
        if cp is not None and cp not in network.common_properties:
            report.add(ERROR, "dangling-cp", fact.id, f"unknown common property {cp!r}")
        owner = fact.owner
        if owner is None:
            if cp is not None:
                report.add(
                    ERROR,
                    "env-fact-with-cp",
                    fact.id,
                    "environment fact must not carry a common property",
                )
            continue
        if owner not in network.containers and owner not in network.links:
            report.add(ERROR, "dangling-owner", fact.id, f"unknown owner {owner!r}")
            continue
        if cp is None:
            continue
        first = seen_cp_per_entity.setdefault((owner, cp), fact.id)
        if first != fact.id:
            report.add(
                ERROR,
                "duplicate-cp-on-entity",
                owner,
                f"facts {first} and {fact.id} both carry {cp}",
            )


def _check_containers(network: Network, report: ValidationReport) -> None:
    for container in network.containers.values():
        parent = container.parent
        if parent is not None and parent not in network.containers:
            report.add(ERROR, "dangling-parent", container.id, f"unknown parent {parent!r}")
    for container in network.containers.values():
        seen = {container.id}
        current = container.parent
        while current is not None and current in network.containers:
            if current in seen:
                report.add(ERROR, "parent-cycle", container.id, "container is its own ancestor")
                break
            seen.add(current)
            current = network.containers[current].parent


def _check_links(network: Network, report: ValidationReport) -> None:
    for link in network.links.values():
        for label, endpoint in (("from", link.source), ("to", link.target)):
            if endpoint not in network.containers:
                report.add(
                    ERROR, "dangling-endpoint", link.id, f"unknown {label} container {endpoint!r}"
                )
        if link.traversability is not None and not 0.0 <= link.traversability <= 1.0:
            report.add(
                ERROR, "traversability-range", link.id, "traversability outside [0, 1]"
            )


def _check_rules(network: Network, report: ValidationReport) -> None:
    for rule in network.rules.values():
        if not 0.0 <= rule.success <= 1.0:
            report.add(ERROR, "success-range", rule.id, f"success {rule.success} outside [0, 1]")
        for condition in (*rule.preconditions, *rule.postconditions):
            if condition.cp is not None and condition.cp not in network.common_properties:
                report.add(
                    ERROR, "dangling-rule-cp", rule.id, f"unknown common property {condition.cp!r}"
                )
            if condition.fact is not None and condition.fact not in network.facts:
                report.add(
                    ERROR, "dangling-rule-fact", rule.id, f"unknown fact {condition.fact!r}"
                )
        for action_id in rule.actions:
            if action_id not in network.actions:
                report.add(ERROR, "dangling-action", rule.id, f"unknown action {action_id!r}")


def _check_scenario(network: Network, scenario, report: ValidationReport) -> None:
    subject = f"scenario {scenario.name}"
    for container_id in (scenario.start, scenario.end):
        if container_id not in network.containers:
            report.add(ERROR, "unknown-container", subject, f"unknown container {container_id!r}")
    for rule_id in scenario.omit_rules:
        if rule_id not in network.rules:
            report.add(ERROR, "unknown-rule", subject, f"omitted rule {rule_id!r} does not exist")
    for fact_id in scenario.fact_overrides:
        if fact_id not in network.facts:
            report.add(ERROR, "unknown-fact", subject, f"override target {fact_id!r} does not exist")
    for fact_id, _ in scenario.goal or ():
        if fact_id not in network.facts:
            report.add(ERROR, "unknown-fact", subject, f"goal fact {fact_id!r} does not exist")
    if not 1 <= scenario.rule_cap <= 100:
        report.add(ERROR, "rule-cap-range", subject, f"rule cap {scenario.rule_cap} outside [1, 100]")
