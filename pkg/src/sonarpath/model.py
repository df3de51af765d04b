"""Static network model: containers, links, facts, properties, actions.

The model is built once, validated, and treated as immutable by the
traversal engine. Entities own boolean facts; facts may reference a
common property, the vocabulary that generic rules are written in.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

_NATURAL_SPLIT = re.compile(r"(\d+)")


def natural_key(identifier: str) -> tuple:
    """Sort key that orders C2 before C10."""
    return tuple(
        int(part) if part.isdigit() else part
        for part in _NATURAL_SPLIT.split(identifier)
    )


class ModelError(Exception):
    """Raised when a builder operation would corrupt the model."""


@dataclass(frozen=True)
class CommonProperty:
    id: str
    description: str


@dataclass
class Fact:
    """A boolean attribute owned by one entity, or by the network itself.

    A fact with no owner is an environment fact and must not carry a
    common property.
    """

    id: str
    value: bool
    common_property: str | None = None
    owner: str | None = None


@dataclass(frozen=True)
class CustomProperty:
    """Free-form annotation carried through load/save, never read by traversal."""

    id: str
    value: str
    common_property: str | None = None
    attached_to: tuple[str, ...] = ()


@dataclass
class Container:
    id: str
    name: str
    parent: str | None = None
    custom_properties: tuple[CustomProperty, ...] = ()


@dataclass
class Link:
    """Directed edge between two containers. Bidirectional connectivity
    requires two links."""

    id: str
    name: str
    source: str
    target: str
    traversability: float | None = None
    custom_properties: tuple[CustomProperty, ...] = ()


@dataclass(frozen=True)
class Action:
    """Host command attached to a rule. Disabled actions are recorded
    when triggered but never executed."""

    id: str
    command: str
    enabled: bool = False


@dataclass
class Network:
    """The complete static model: entities, facts, rules and actions.

    Rules live in ``rules`` as rulelogic objects; this class does not
    interpret them. Fact ownership is declared on the fact, and the
    network maintains the per-entity indexes that the engine relies on.
    """

    common_properties: dict[str, CommonProperty] = field(default_factory=dict)
    facts: dict[str, Fact] = field(default_factory=dict)
    containers: dict[str, Container] = field(default_factory=dict)
    links: dict[str, Link] = field(default_factory=dict)
    rules: dict[str, object] = field(default_factory=dict)
    actions: dict[str, Action] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    _counters: dict[str, int] = field(default_factory=dict, repr=False)

    # ------------------------------------------------------------------
    # identifier allocation

    def _fresh_id(self, prefix: str, taken: dict) -> str:
        count = self._counters.get(prefix, 0)
        while True:
            count += 1
            candidate = f"{prefix}{count}"
            if candidate not in taken:
                self._counters[prefix] = count
                return candidate

    # ------------------------------------------------------------------
    # builder operations

    def add_common_property(self, description: str, id: str | None = None) -> str:
        cp_id = id or self._fresh_id("P", self.common_properties)
        if cp_id in self.common_properties:
            raise ModelError(f"duplicate common property id {cp_id!r}")
        self.common_properties[cp_id] = CommonProperty(cp_id, description)
        return cp_id

    def add_fact(
        self,
        value: bool,
        common_property: str | None = None,
        owner: str | None = None,
        id: str | None = None,
    ) -> str:
        fact_id = id or self._fresh_id("F", self.facts)
        if fact_id in self.facts:
            raise ModelError(f"duplicate fact id {fact_id!r}")
        if owner is not None and owner not in self.containers and owner not in self.links:
            raise ModelError(f"fact {fact_id!r} owner {owner!r} does not exist")
        if owner is None and common_property is not None:
            raise ModelError(
                f"environment fact {fact_id!r} must not carry a common property"
            )
        self.facts[fact_id] = Fact(fact_id, bool(value), common_property, owner)
        return fact_id

    def add_container(
        self,
        name: str,
        facts: list[tuple[str, bool]] | None = None,
        parent: str | None = None,
        id: str | None = None,
    ) -> str:
        """Add a container; with a parent, auto-create link pairs.

        For the parent and every existing container sharing that parent,
        two directed links (one each way) are created between it and the
        new container, with empty fact sets.
        """
        if parent is not None and parent not in self.containers:
            raise ModelError(f"unknown parent container {parent!r}")
        container_id = id or self._fresh_id("C", self.containers)
        if container_id in self.containers:
            raise ModelError(f"duplicate container id {container_id!r}")
        self.containers[container_id] = Container(container_id, name, parent)
        if parent is not None:
            related = [parent] + [
                c.id
                for c in self.containers.values()
                if c.parent == parent and c.id != container_id
            ]
            for other in related:
                self.add_link(container_id, other)
                self.add_link(other, container_id)
        for cp_id, value in facts or []:
            self.add_fact(value, cp_id, owner=container_id)
        return container_id

    def add_link(
        self,
        source: str,
        target: str,
        facts: list[tuple[str, bool]] | None = None,
        name: str | None = None,
        id: str | None = None,
        traversability: float | None = None,
    ) -> str:
        if source not in self.containers:
            raise ModelError(f"unknown link source {source!r}")
        if target not in self.containers:
            raise ModelError(f"unknown link target {target!r}")
        link_id = id or self._fresh_id("L", self.links)
        if link_id in self.links:
            raise ModelError(f"duplicate link id {link_id!r}")
        self.links[link_id] = Link(
            link_id, name or f"{source}->{target}", source, target, traversability
        )
        for cp_id, value in facts or []:
            self.add_fact(value, cp_id, owner=link_id)
        return link_id

    def add_action(self, command: str, enabled: bool = False, id: str | None = None) -> str:
        action_id = id or self._fresh_id("A", self.actions)
        if action_id in self.actions:
            raise ModelError(f"duplicate action id {action_id!r}")
        self.actions[action_id] = Action(action_id, command, enabled)
        return action_id

    def add_rule(self, rule) -> str:
        if rule.id in self.rules:
            raise ModelError(f"duplicate rule id {rule.id!r}")
        self.rules[rule.id] = rule
        return rule.id

    # ------------------------------------------------------------------
    # lookups

    def entity(self, entity_id: str):
        found = self.containers.get(entity_id) or self.links.get(entity_id)
        if found is None:
            raise KeyError(entity_id)
        return found

    def is_container(self, entity_id: str) -> bool:
        return entity_id in self.containers

    def facts_of(self, entity_id: str) -> list[Fact]:
        """Facts owned by one entity, in natural id order."""
        owned = [f for f in self.facts.values() if f.owner == entity_id]
        owned.sort(key=lambda f: natural_key(f.id))
        return owned

    def environment_facts(self) -> list[Fact]:
        loose = [f for f in self.facts.values() if f.owner is None]
        loose.sort(key=lambda f: natural_key(f.id))
        return loose

    def fact_for_cp(self, entity_id: str, cp_id: str) -> Fact | None:
        for fact in self.facts.values():
            if fact.owner == entity_id and fact.common_property == cp_id:
                return fact
        return None

    def outgoing_links(self, container_id: str) -> list[Link]:
        """Outgoing links in natural link-id order; fixes traversal order."""
        out = [l for l in self.links.values() if l.source == container_id]
        out.sort(key=lambda l: natural_key(l.id))
        return out

    def sorted_ids(self, collection: dict) -> list[str]:
        return sorted(collection, key=natural_key)
