"""Model document serialization: a versioned JSON tree.

One document holds the network, its rules and actions, and named
scenarios. Dumping is canonical (arrays sorted by natural id, optional
keys omitted at their defaults), so dump(load(dump(x))) is byte-stable.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .model import Action, CustomProperty, Fact, Link, Network, natural_key
from .rules import GenericRule, NormalRule, RuleCondition, RuleError
from .scenario import Scenario

FORMAT_VERSION = 1


class ModelFormatError(Exception):
    """Raised when a document cannot be parsed into a model."""


@dataclass
class ModelDocument:
    network: Network
    scenarios: dict[str, Scenario] = field(default_factory=dict)
    name: str = ""


# ----------------------------------------------------------------------
# loading


def loads(text: str) -> ModelDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ModelFormatError("document root must be an object")
    version = raw.get("format")
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported format version {version!r}")
    network = Network()
    network.notes = [str(note) for note in raw.get("notes", [])]

    for entry in _entries(raw, "common_properties"):
        _require(entry, "common property", "id", "description")
        if entry["id"] in network.common_properties:
            raise ModelFormatError(f"duplicate common property id {entry['id']!r}")
        network.add_common_property(str(entry["description"]), id=str(entry["id"]))

    for entry in _entries(raw, "containers"):
        _require(entry, "container", "id", "name")
        if entry["id"] in network.containers:
            raise ModelFormatError(f"duplicate container id {entry['id']!r}")
        container_id = str(entry["id"])
        network.containers[container_id] = _build_container(entry, container_id)

    # dangling references are validation findings, not parse errors, so
    # entities are inserted directly instead of via the checked builders
    for entry in _entries(raw, "links"):
        _require(entry, "link", "id", "from", "to")
        link_id = str(entry["id"])
        if link_id in network.links:
            raise ModelFormatError(f"duplicate link id {link_id!r}")
        source = str(entry["from"])
        target = str(entry["to"])
        network.links[link_id] = Link(
            link_id,
            str(entry.get("name", "")) or f"{source}->{target}",
            source,
            target,
            traversability=entry.get("traversability"),
            custom_properties=_custom_properties(entry),
        )

    for entry in _entries(raw, "facts"):
        _require(entry, "fact", "id", "value")
        fact_id = str(entry["id"])
        if fact_id in network.facts:
            raise ModelFormatError(f"duplicate fact id {fact_id!r}")
        network.facts[fact_id] = Fact(
            fact_id,
            bool(entry["value"]),
            common_property=_optional_str(entry, "common_property"),
            owner=_optional_str(entry, "owner"),
        )

    for entry in _entries(raw, "actions"):
        _require(entry, "action", "id", "command")
        action_id = str(entry["id"])
        if action_id in network.actions:
            raise ModelFormatError(f"duplicate action id {action_id!r}")
        network.actions[action_id] = Action(
            action_id, str(entry["command"]), bool(entry.get("enabled", False))
        )

    for entry in _entries(raw, "rules"):
        rule = _build_rule(entry)
        if rule.id in network.rules:
            raise ModelFormatError(f"duplicate rule id {rule.id!r}")
        network.rules[rule.id] = rule

    scenarios: dict[str, Scenario] = {}
    for entry in _entries(raw, "scenarios"):
        scenario = _build_scenario(entry)
        if scenario.name in scenarios:
            raise ModelFormatError(f"duplicate scenario name {scenario.name!r}")
        scenarios[scenario.name] = scenario

    return ModelDocument(network, scenarios, name=str(raw.get("name", "")))


def load(path) -> ModelDocument:
    with open(path, encoding="utf-8") as handle:
        return loads(handle.read())


def _entries(raw: dict, key: str) -> list[dict]:
    value = raw.get(key, [])
    if not isinstance(value, list) or any(not isinstance(e, dict) for e in value):
        raise ModelFormatError(f"{key} must be an array of objects")
    return value


def _require(entry: dict, label: str, *keys: str) -> None:
    for key in keys:
        if key not in entry:
            raise ModelFormatError(f"{label} entry missing {key!r}: {entry!r}")


def _optional_str(entry: dict, key: str) -> str | None:
    value = entry.get(key)
    return None if value is None else str(value)


def _build_container(entry: dict, container_id: str):
    from .model import Container

    return Container(
        container_id,
        str(entry["name"]),
        parent=_optional_str(entry, "parent"),
        custom_properties=_custom_properties(entry),
    )


def _custom_properties(entry: dict) -> tuple[CustomProperty, ...]:
    out = []
    for cp in entry.get("custom_properties", []):
        _require(cp, "custom property", "id", "value")
        out.append(
            CustomProperty(
                str(cp["id"]),
                str(cp["value"]),
                common_property=_optional_str(cp, "common_property"),
                attached_to=tuple(str(x) for x in cp.get("attached_to", [])),
            )
        )
    return tuple(out)


def _build_condition(entry: dict, rule_id: str) -> RuleCondition:
    _require(entry, f"rule {rule_id} condition", "value")
    try:
        return RuleCondition(
            slot=str(entry.get("slot", "global")),
            value=bool(entry["value"]),
            cp=_optional_str(entry, "cp"),
            fact=_optional_str(entry, "fact"),
        )
    except RuleError as exc:
        raise ModelFormatError(f"rule {rule_id}: {exc}") from exc


def _build_rule(entry: dict):
    _require(entry, "rule", "id", "kind", "success")
    rule_id = str(entry["id"])
    pre = tuple(_build_condition(c, rule_id) for c in entry.get("pre", []))
    post = tuple(_build_condition(c, rule_id) for c in entry.get("post", []))
    kind = entry["kind"]
    cls = {"generic": GenericRule, "normal": NormalRule}.get(kind)
    if cls is None:
        raise ModelFormatError(f"rule {rule_id}: unknown kind {kind!r}")
    try:
        return cls(
            id=rule_id,
            name=str(entry.get("name", rule_id)),
            preconditions=pre,
            postconditions=post,
            success=float(entry["success"]),
            actions=tuple(str(a) for a in entry.get("actions", [])),
        )
    except RuleError as exc:
        raise ModelFormatError(str(exc)) from exc


def _build_scenario(entry: dict) -> Scenario:
    _require(entry, "scenario", "name", "start", "end")
    goal_raw = entry.get("goal")
    goal = None
    if goal_raw is not None:
        if not isinstance(goal_raw, list):
            raise ModelFormatError("scenario goal must be an array")
        goal = tuple((str(g["fact"]), bool(g["value"])) for g in goal_raw)
    stop = entry.get("stop") or {}
    return Scenario(
        name=str(entry["name"]),
        start=str(entry["start"]),
        end=str(entry["end"]),
        omit_rules=tuple(str(r) for r in entry.get("omit_rules", [])),
        fact_overrides={str(k): bool(v) for k, v in entry.get("fact_overrides", {}).items()},
        rule_cap=int(entry.get("rule_cap", 100)),
        goal=goal,
        max_paths=stop.get("max_paths"),
        max_seconds=stop.get("max_seconds"),
        description=str(entry.get("description", "")),
    )


# ----------------------------------------------------------------------
# dumping


def dumps(document: ModelDocument) -> str:
    network = document.network
    raw: dict = {"format": FORMAT_VERSION}
    if document.name:
        raw["name"] = document.name
    if network.notes:
        raw["notes"] = list(network.notes)
    raw["common_properties"] = [
        {"id": cp.id, "description": cp.description}
        for cp in _sorted(network.common_properties)
    ]
    raw["containers"] = [_container_entry(c) for c in _sorted(network.containers)]
    raw["links"] = [_link_entry(l) for l in _sorted(network.links)]
    raw["facts"] = [_fact_entry(f) for f in _sorted(network.facts)]
    raw["rules"] = [_rule_entry(r) for r in _sorted(network.rules)]
    raw["actions"] = [
        {"id": a.id, "command": a.command, "enabled": a.enabled}
        for a in _sorted(network.actions)
    ]
    raw["scenarios"] = [
        _scenario_entry(document.scenarios[name])
        for name in sorted(document.scenarios, key=natural_key)
    ]
    return json.dumps(raw, indent=2, ensure_ascii=False) + "\n"


def dump(document: ModelDocument, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps(document))


def structural_hash(document: ModelDocument) -> str:
    """Stable content hash; used to prove the base model never mutates."""
    return hashlib.sha256(dumps(document).encode("utf-8")).hexdigest()


def _sorted(collection: dict) -> list:
    return [collection[key] for key in sorted(collection, key=natural_key)]


def _container_entry(container) -> dict:
    entry: dict = {"id": container.id, "name": container.name}
    if container.parent is not None:
        entry["parent"] = container.parent
    if container.custom_properties:
        entry["custom_properties"] = [_cp_entry(p) for p in container.custom_properties]
    return entry


def _link_entry(link) -> dict:
    entry: dict = {"id": link.id, "name": link.name, "from": link.source, "to": link.target}
    if link.traversability is not None:
        entry["traversability"] = link.traversability
    if link.custom_properties:
        entry["custom_properties"] = [_cp_entry(p) for p in link.custom_properties]
    return entry


def _cp_entry(prop: CustomProperty) -> dict:
    entry: dict = {"id": prop.id, "value": prop.value}
    if prop.common_property is not None:
        entry["common_property"] = prop.common_property
    if prop.attached_to:
        entry["attached_to"] = list(prop.attached_to)
    return entry


def _fact_entry(fact) -> dict:
    entry: dict = {"id": fact.id, "value": fact.value}
    if fact.common_property is not None:
        entry["common_property"] = fact.common_property
    if fact.owner is not None:
        entry["owner"] = fact.owner
    return entry


def _condition_entry(condition: RuleCondition) -> dict:
    entry: dict = {"slot": condition.slot}
    if condition.cp is not None:
        entry["cp"] = condition.cp
    if condition.fact is not None:
        entry["fact"] = condition.fact
    entry["value"] = condition.value
    return entry


def _rule_entry(rule) -> dict:
    entry: dict = {
        "id": rule.id,
        "name": rule.name,
        "kind": rule.kind,
        "success": rule.success,
        "pre": [_condition_entry(c) for c in rule.preconditions],
        "post": [_condition_entry(c) for c in rule.postconditions],
    }
    if rule.actions:
        entry["actions"] = list(rule.actions)
    return entry


def _scenario_entry(scenario: Scenario) -> dict:
    entry: dict = {
        "name": scenario.name,
        "start": scenario.start,
        "end": scenario.end,
        "omit_rules": list(scenario.omit_rules),
        "fact_overrides": {
            fact_id: value
            for fact_id, value in sorted(
                scenario.fact_overrides.items(), key=lambda kv: natural_key(kv[0])
            )
        },
    }
    if scenario.rule_cap != 100:
        entry["rule_cap"] = scenario.rule_cap
    if scenario.goal is not None:
        entry["goal"] = [{"fact": fact_id, "value": value} for fact_id, value in scenario.goal]
    stop = {}
    if scenario.max_paths is not None:
        stop["max_paths"] = scenario.max_paths
    if scenario.max_seconds is not None:
        stop["max_seconds"] = scenario.max_seconds
    if stop:
        entry["stop"] = stop
    if scenario.description:
        entry["description"] = scenario.description
    return entry
