"""Rule and condition types, success ordering, matching and application.

Generic rules speak common properties and are slotted to the three
entities of the connection under evaluation. Normal rules speak specific
fact ids anywhere in the network or environment. The success value is a
deterministic priority, never a sampled probability.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import natural_key

SLOT_START = "start"
SLOT_LINK = "link"
SLOT_END = "end"
SLOT_GLOBAL = "global"
CONNECTION_SLOTS = (SLOT_START, SLOT_LINK, SLOT_END)
VALID_SLOTS = frozenset((*CONNECTION_SLOTS, SLOT_GLOBAL))


class RuleError(Exception):
    """Raised for malformed rules or conditions."""


@dataclass(frozen=True)
class RuleCondition:
    """One pre- or postcondition: a slotted target and a required value.

    Exactly one of ``cp`` and ``fact`` is set. Generic-rule conditions
    target common properties in a connection slot; normal-rule conditions
    target specific facts with the global slot.
    """

    slot: str
    value: bool
    cp: str | None = None
    fact: str | None = None

    def __post_init__(self) -> None:
        if self.slot not in VALID_SLOTS:
            raise RuleError(f"unknown slot {self.slot!r}")
        if (self.cp is None) == (self.fact is None):
            raise RuleError("condition needs exactly one of cp or fact")
        if self.cp is not None and self.slot == SLOT_GLOBAL:
            raise RuleError("cp conditions must use a connection slot")
        if self.fact is not None and self.slot != SLOT_GLOBAL:
            raise RuleError("fact conditions must use the global slot")


def cp_condition(slot: str, cp: str, value: bool) -> RuleCondition:
    return RuleCondition(slot, value, cp=cp)


def fact_condition(fact: str, value: bool) -> RuleCondition:
    return RuleCondition(SLOT_GLOBAL, value, fact=fact)


@dataclass(frozen=True)
class GenericRule:
    id: str
    name: str
    preconditions: tuple[RuleCondition, ...]
    postconditions: tuple[RuleCondition, ...]
    success: float
    actions: tuple[str, ...] = ()
    kind = "generic"

    def __post_init__(self) -> None:
        for condition in (*self.preconditions, *self.postconditions):
            if condition.cp is None:
                raise RuleError(f"generic rule {self.id!r} has a fact condition")


@dataclass(frozen=True)
class NormalRule:
    id: str
    name: str
    preconditions: tuple[RuleCondition, ...]
    postconditions: tuple[RuleCondition, ...]
    success: float
    actions: tuple[str, ...] = ()
    kind = "normal"

    def __post_init__(self) -> None:
        for condition in (*self.preconditions, *self.postconditions):
            if condition.fact is None:
                raise RuleError(f"normal rule {self.id!r} has a cp condition")


Rule = GenericRule | NormalRule


@dataclass(frozen=True)
class OrderedRuleSet:
    """Rules sorted by success descending, ties broken by id ascending.

    ``merged`` interleaves both kinds in one priority order; the engine
    evaluates that list per connection.
    """

    generic: tuple[GenericRule, ...]
    normal: tuple[NormalRule, ...]
    merged: tuple[Rule, ...] = field(init=False)

    def __post_init__(self) -> None:
        combined = sorted(
            (*self.generic, *self.normal),
            key=lambda r: (-r.success, natural_key(r.id)),
        )
        object.__setattr__(self, "merged", tuple(combined))

    def flatten(self) -> list[Rule]:
        return list(self.merged)


def order_rules(rules) -> OrderedRuleSet:
    """Compute the evaluation order once, before traversal."""
    for rule in rules:
        if not 0.0 <= rule.success <= 1.0:
            raise RuleError(
                f"rule {rule.id!r} success {rule.success} outside [0, 1]"
            )
    key = lambda r: (-r.success, natural_key(r.id))
    generic = tuple(sorted((r for r in rules if r.kind == "generic"), key=key))
    normal = tuple(sorted((r for r in rules if r.kind == "normal"), key=key))
    return OrderedRuleSet(generic, normal)


def match_generic_preconditions(rule: GenericRule, view) -> bool:
    """True iff every slotted entity has a fact for the condition's cp
    and its current value matches. A missing fact fails the condition.

    ``view`` must expose cp_value(slot, cp) -> bool | None.
    """
    for condition in rule.preconditions:
        if view.cp_value(condition.slot, condition.cp) is not condition.value:
            return False
    return True


def apply_generic_postconditions(rule: GenericRule, view) -> list[str]:
    """Write each postcondition to its slotted entity; return changed fact ids.

    A postcondition whose cp has no fact on the slotted entity is skipped
    and tallied by the view; it never creates a fact.

    ``view`` must expose set_cp(slot, cp, value) -> changed fact id | None.
    """
    changed = []
    for condition in rule.postconditions:
        fact_id = view.set_cp(condition.slot, condition.cp, condition.value)
        if fact_id is not None:
            changed.append(fact_id)
    return changed


def evaluate_normal_rule(rule: NormalRule, view) -> tuple[bool, list[str]]:
    """Trigger decision plus changed fact ids, resolved through the path view.

    ``view`` must expose fact_value(fact_id) -> bool and
    set_fact(fact_id, value) -> changed bool.
    """
    for condition in rule.preconditions:
        if view.fact_value(condition.fact) is not condition.value:
            return False, []
    changed = []
    for condition in rule.postconditions:
        if view.set_fact(condition.fact, condition.value):
            changed.append(condition.fact)
    return True, changed
