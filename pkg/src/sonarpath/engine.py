"""The enumeration engine: connections, variants, reality paths, traversal.

The traversal is a depth-first search over connection candidates. Every
candidate gets private clones of its three entities, the success-ordered
rules run to a fixpoint (generic triggers capped per connection), and a
candidate survives only if it is valid and does not exactly repeat an
earlier connection of the same path. Committed entity states are interned
in a global variant store so identical configurations are shared.
"""

from __future__ import annotations

import subprocess
import time
from collections import Counter
from dataclasses import dataclass, field

from .model import ModelError, Network, natural_key
from .rules import OrderedRuleSet, order_rules

IN_PROGRESS = "in-progress"
FINAL = "final"
TERMINATED_LOOP = "terminated-loop"
DEAD_END = "dead-end"

_EMPTY_VALUES: list[bool] = []

_SLOT_INDEX = {"start": 0, "link": 1, "end": 2}


class EntityProfile:
    """Per-entity constants: canonical fact order, base values, indexes."""

    __slots__ = ("id", "kind", "fact_ids", "base_values", "cp_pos", "fact_pos", "size")

    def __init__(self, entity_id: str, kind: str, facts) -> None:
        self.id = entity_id
        self.kind = kind
        self.fact_ids = tuple(f.id for f in facts)
        self.base_values = tuple(bool(f.value) for f in facts)
        self.cp_pos = {
            f.common_property: i
            for i, f in enumerate(facts)
            if f.common_property is not None
        }
        self.fact_pos = {f.id: i for i, f in enumerate(facts)}
        self.size = len(self.fact_ids)


class Variant:
    """Immutable deduplicated snapshot of one entity's fact configuration."""

    __slots__ = ("entity_id", "kind", "values", "profile")

    def __init__(self, profile: EntityProfile, values: tuple[bool, ...]) -> None:
        self.entity_id = profile.id
        self.kind = profile.kind
        self.values = values
        self.profile = profile

    @property
    def configuration(self) -> dict[str, bool]:
        return dict(zip(self.profile.fact_ids, self.values))

    def __repr__(self) -> str:
        return f"Variant({self.entity_id}, {self.configuration})"


class VariantStore:
    """Global collection of variants, exact-keyed by (entity, configuration)."""

    def __init__(self) -> None:
        self.containers: dict[tuple[str, tuple[bool, ...]], Variant] = {}
        self.links: dict[tuple[str, tuple[bool, ...]], Variant] = {}

    def intern(self, profile: EntityProfile, values: tuple[bool, ...]) -> Variant:
        table = self.containers if profile.kind == "container" else self.links
        key = (profile.id, values)
        found = table.get(key)
        if found is None:
            found = Variant(profile, values)
            table[key] = found
        return found

    @property
    def container_count(self) -> int:
        return len(self.containers)

    @property
    def link_count(self) -> int:
        return len(self.links)


class ConnectionRecord:
    """One committed traversal step with post-rule entity states."""

    __slots__ = (
        "start_id",
        "link_id",
        "end_id",
        "start_variant",
        "link_variant",
        "end_variant",
        "triggered_generic",
        "triggered_normal",
        "skipped_postconditions",
        "actions_fired",
    )

    def __init__(
        self,
        start_id,
        link_id,
        end_id,
        start_variant,
        link_variant,
        end_variant,
        triggered_generic,
        triggered_normal,
        skipped_postconditions,
        actions_fired,
    ) -> None:
        self.start_id = start_id
        self.link_id = link_id
        self.end_id = end_id
        self.start_variant = start_variant
        self.link_variant = link_variant
        self.end_variant = end_variant
        self.triggered_generic = triggered_generic
        self.triggered_normal = triggered_normal
        self.skipped_postconditions = skipped_postconditions
        self.actions_fired = actions_fired


class PathNode:
    """One node of the shared search tree; a path is the chain to the root.

    ``overlay`` maps entity id to its active variant, holding only
    entities whose current configuration differs from the base network
    (a base-equal active variant reads identically to the base, so the
    entry is dropped). ``environment`` is shared with the parent until a
    write copies it.
    """

    __slots__ = ("parent", "record", "overlay", "environment", "head", "hops")

    def __init__(self, parent, record, overlay, environment, head, hops) -> None:
        self.parent = parent
        self.record = record
        self.overlay = overlay
        self.environment = environment
        self.head = head
        self.hops = hops


class RealityPath:
    """A finalized enumeration result: the connection chain plus its
    terminal view of the network."""

    __slots__ = ("_leaf", "start", "goal_achieved", "status")

    def __init__(self, leaf: PathNode, start: str, goal_achieved: bool | None) -> None:
        self._leaf = leaf
        self.start = start
        self.goal_achieved = goal_achieved
        self.status = FINAL

    @property
    def connections(self) -> list[ConnectionRecord]:
        chain = []
        node = self._leaf
        while node.record is not None:
            chain.append(node.record)
            node = node.parent
        chain.reverse()
        return chain

    @property
    def hops(self) -> int:
        return self._leaf.hops

    @property
    def length(self) -> int:
        """Reported path length: the initial placement plus one per connection."""
        return self._leaf.hops + 1

    @property
    def head(self) -> str:
        return self._leaf.head

    @property
    def active_variants(self) -> dict[str, Variant]:
        return dict(self._leaf.overlay)

    @property
    def environment(self) -> dict[str, bool]:
        return dict(self._leaf.environment)

    def terminal_changes(self) -> dict[str, dict[str, bool]]:
        """Entity configurations that differ from the base network."""
        return {
            entity_id: variant.configuration
            for entity_id, variant in sorted(
                self._leaf.overlay.items(), key=lambda kv: natural_key(kv[0])
            )
        }

    def signature(self) -> tuple:
        """Order-sensitive identity of the path: per connection, the triple
        ids and the three post-rule configurations."""
        return tuple(
            (
                r.start_id,
                r.link_id,
                r.end_id,
                r.start_variant.values,
                r.link_variant.values,
                r.end_variant.values,
            )
            for r in self.connections
        )


@dataclass(frozen=True)
class EngineConfig:
    start: str
    end: str
    rule_cap: int = 100
    max_paths: int | None = None
    max_seconds: float | None = None
    goal: tuple[tuple[str, bool], ...] | None = None
    allow_normal_only: bool = False
    allow_actions: bool = False
    keep_paths: bool = True

    def __post_init__(self) -> None:
        if not 1 <= self.rule_cap <= 100:
            raise ModelError(f"rule cap {self.rule_cap} outside [1, 100]")


@dataclass
class TraversalResult:
    config: EngineConfig
    paths: list[RealityPath]
    final_count: int
    goal_count: int | None
    length_histogram: dict[int, int]
    total_connections: int
    dead_ended: int
    loop_terminated: int
    skipped_postconditions: int
    candidates_evaluated: int
    elapsed: float
    partial: bool
    degenerate: bool
    variant_containers_created: int
    variant_links_created: int
    store: VariantStore = field(repr=False)


class _CompiledGeneric:
    __slots__ = ("id", "pre", "post", "actions", "is_generic")

    def __init__(self, rule, actions) -> None:
        self.id = rule.id
        self.pre = tuple((_SLOT_INDEX[c.slot], c.cp, c.value) for c in rule.preconditions)
        self.post = tuple((_SLOT_INDEX[c.slot], c.cp, c.value) for c in rule.postconditions)
        self.actions = actions
        self.is_generic = True


class _CompiledNormal:
    __slots__ = ("id", "pre", "post", "actions", "is_generic")

    def __init__(self, rule, actions) -> None:
        self.id = rule.id
        self.pre = tuple((c.fact, c.value) for c in rule.preconditions)
        self.post = tuple((c.fact, c.value) for c in rule.postconditions)
        self.actions = actions
        self.is_generic = False


class CompiledModel:
    """Per-traversal constants derived from a validated network."""

    __slots__ = ("network", "profiles", "fact_owner", "env_base", "outgoing", "rules", "merged")

    def __init__(self, network: Network, ordered: OrderedRuleSet | None = None) -> None:
        self.network = network
        self.profiles: dict[str, EntityProfile] = {}
        for cid in network.containers:
            self.profiles[cid] = EntityProfile(cid, "container", network.facts_of(cid))
        for lid in network.links:
            self.profiles[lid] = EntityProfile(lid, "link", network.facts_of(lid))
        self.fact_owner = {
            fid: (self.profiles[f.owner] if f.owner is not None else None)
            for fid, f in network.facts.items()
        }
        self.env_base = {f.id: bool(f.value) for f in network.environment_facts()}
        self.outgoing = {
            cid: tuple(
                (link.id, self.profiles[link.id], link.target, self.profiles[link.target])
                for link in network.outgoing_links(cid)
            )
            for cid in network.containers
        }
        self.rules = ordered or order_rules(network.rules.values())
        merged = []
        for rule in self.rules.merged:
            actions = tuple((rule.id, aid) for aid in rule.actions)
            if rule.kind == "generic":
                merged.append(_CompiledGeneric(rule, actions))
            else:
                merged.append(_CompiledNormal(rule, actions))
        self.merged = tuple(merged)


def _run_action(network: Network, action_id: str, allow: bool) -> bool:
    """Execute only when the action is enabled and execution is allowed;
    otherwise the trigger is recorded as a dry run."""
    action = network.actions.get(action_id)
    if action is None or not action.enabled or not allow:
        return False
    subprocess.run(action.command, shell=True, capture_output=True, check=False)
    return True


def traverse(
    network: Network,
    config: EngineConfig,
    store: VariantStore | None = None,
    stop_event=None,
    compiled: CompiledModel | None = None,
) -> TraversalResult:
    """Enumerate every unique reality path from start to end.

    Paths are processed LIFO; candidate connections are explored in
    ascending link-id order. A path whose head is the end container is
    final and is not extended. Stop conditions are checked between pops
    and mark the result partial.
    """
    if config.start not in network.containers:
        raise ModelError(f"unknown start container {config.start!r}")
    if config.end not in network.containers:
        raise ModelError(f"unknown end container {config.end!r}")
    if store is None:
        store = VariantStore()
    model = compiled or CompiledModel(network)
    profiles = model.profiles
    fact_owner = model.fact_owner
    outgoing = model.outgoing
    merged = model.merged
    end = config.end
    rule_cap = config.rule_cap
    allow_normal_only = config.allow_normal_only
    allow_actions = config.allow_actions
    keep_paths = config.keep_paths
    goal = config.goal

    containers_before = store.container_count
    links_before = store.link_count

    root = PathNode(None, None, {}, dict(model.env_base), config.start, 0)
    stack = [root]
    paths: list[RealityPath] = []
    final_count = 0
    goal_count: int | None = 0 if goal is not None else None
    histogram: Counter[int] = Counter()
    total_connections = 0
    dead_ended = 0
    loop_terminated = 0
    skipped_total = 0
    candidates = 0
    partial = False

    started = time.perf_counter()
    deadline = started + config.max_seconds if config.max_seconds is not None else None

    while stack:
        if config.max_paths is not None and final_count >= config.max_paths:
            partial = True
            break
        if deadline is not None and time.perf_counter() >= deadline:
            partial = True
            break
        if stop_event is not None and stop_event.is_set():
            partial = True
            break

        node = stack.pop()
        if node.head == end:
            final_count += 1
            length = node.hops + 1
            histogram[length] += 1
            total_connections += length
            achieved: bool | None = None
            if goal is not None:
                achieved = _goal_satisfied(goal, node, fact_owner, profiles)
                if achieved:
                    goal_count += 1
            if keep_paths:
                paths.append(RealityPath(node, config.start, achieved))
            continue

        overlay = node.overlay
        environment = node.environment
        start_prof = profiles[node.head]
        children = []
        any_valid = False
        for link_id, link_prof, end_id, end_prof in outgoing[node.head]:
            candidates += 1

            start_var = overlay.get(start_prof.id)
            if start_var is not None:
                s_clone = list(start_var.values)
            elif start_prof.size:
                s_clone = list(start_prof.base_values)
            else:
                s_clone = _EMPTY_VALUES
            link_var = overlay.get(link_id)
            if link_var is not None:
                l_clone = list(link_var.values)
            elif link_prof.size:
                l_clone = list(link_prof.base_values)
            else:
                l_clone = _EMPTY_VALUES
            if end_id == start_prof.id:
                e_clone = s_clone
            else:
                end_var = overlay.get(end_id)
                if end_var is not None:
                    e_clone = list(end_var.values)
                elif end_prof.size:
                    e_clone = list(end_prof.base_values)
                else:
                    e_clone = _EMPTY_VALUES
            clones = (s_clone, l_clone, e_clone)
            profs = (start_prof, link_prof, end_prof)

            triggered: set[str] = set()
            triggered_generic: list[str] = []
            triggered_normal: list[str] = []
            skipped = 0
            remote: dict[str, list[bool]] | None = None
            env_work: dict[str, bool] | None = None
            fired: list[tuple[str, str, bool]] = []
            capped = False

            progress = True
            while progress and not capped:
                progress = False
                for rule in merged:
                    if rule.id in triggered:
                        continue
                    if rule.is_generic:
                        matched = True
                        for slot, cp, value in rule.pre:
                            pos = profs[slot].cp_pos.get(cp)
                            if pos is None or clones[slot][pos] is not value:
                                matched = False
                                break
                        if not matched:
                            continue
                        triggered.add(rule.id)
                        triggered_generic.append(rule.id)
                        progress = True
                        for slot, cp, value in rule.post:
                            pos = profs[slot].cp_pos.get(cp)
                            if pos is None:
                                skipped += 1
                            else:
                                clones[slot][pos] = value
                        for rule_id, action_id in rule.actions:
                            fired.append(
                                (rule_id, action_id, _run_action(network, action_id, allow_actions))
                            )
                        if len(triggered_generic) >= rule_cap:
                            # cap reached: stop assessing rules on this connection
                            capped = True
                            break
                    else:
                        matched = True
                        for fact_id, value in rule.pre:
                            owner = fact_owner[fact_id]
                            if owner is None:
                                current = (env_work or environment)[fact_id]
                            else:
                                eid = owner.id
                                pos = owner.fact_pos[fact_id]
                                if eid == start_prof.id:
                                    current = s_clone[pos]
                                elif eid == link_id:
                                    current = l_clone[pos]
                                elif eid == end_id:
                                    current = e_clone[pos]
                                elif remote is not None and eid in remote:
                                    current = remote[eid][pos]
                                else:
                                    var = overlay.get(eid)
                                    current = (var.values if var is not None else owner.base_values)[pos]
                            if current is not value:
                                matched = False
                                break
                        if not matched:
                            continue
                        triggered.add(rule.id)
                        triggered_normal.append(rule.id)
                        progress = True
                        for fact_id, value in rule.post:
                            owner = fact_owner[fact_id]
                            if owner is None:
                                if env_work is None:
                                    env_work = dict(environment)
                                env_work[fact_id] = value
                            else:
                                eid = owner.id
                                pos = owner.fact_pos[fact_id]
                                if eid == start_prof.id:
                                    s_clone[pos] = value
                                elif eid == link_id:
                                    l_clone[pos] = value
                                elif eid == end_id:
                                    e_clone[pos] = value
                                else:
                                    if remote is None:
                                        remote = {}
                                    working = remote.get(eid)
                                    if working is None:
                                        var = overlay.get(eid)
                                        working = list(var.values if var is not None else owner.base_values)
                                        remote[eid] = working
                                    working[pos] = value
                        for rule_id, action_id in rule.actions:
                            fired.append(
                                (rule_id, action_id, _run_action(network, action_id, allow_actions))
                            )

            if not triggered_generic and not (allow_normal_only and triggered_normal):
                continue
            any_valid = True

            s_values = tuple(s_clone)
            l_values = tuple(l_clone)
            e_values = tuple(e_clone)

            # Path termination heuristic: an exact repeat of an earlier
            # connection of this path kills the candidate. The link id
            # determines the (start, link, end) triple in a static model.
            repeated = False
            walk = node
            while walk.record is not None:
                record = walk.record
                if (
                    record.link_id == link_id
                    and record.start_variant.values == s_values
                    and record.link_variant.values == l_values
                    and record.end_variant.values == e_values
                ):
                    repeated = True
                    break
                walk = walk.parent
            if repeated:
                loop_terminated += 1
                skipped_total += skipped
                continue

            s_var = store.intern(start_prof, s_values)
            l_var = store.intern(link_prof, l_values)
            e_var = store.intern(end_prof, e_values)
            new_overlay = dict(overlay)
            for prof, var in ((start_prof, s_var), (link_prof, l_var), (end_prof, e_var)):
                if var.values == prof.base_values:
                    new_overlay.pop(prof.id, None)
                else:
                    new_overlay[prof.id] = var
            if remote is not None:
                for eid, working in remote.items():
                    prof = profiles[eid]
                    var = store.intern(prof, tuple(working))
                    if var.values == prof.base_values:
                        new_overlay.pop(eid, None)
                    else:
                        new_overlay[eid] = var

            record = ConnectionRecord(
                node.head,
                link_id,
                end_id,
                s_var,
                l_var,
                e_var,
                tuple(triggered_generic),
                tuple(triggered_normal),
                skipped,
                tuple(fired),
            )
            skipped_total += skipped
            children.append(
                PathNode(
                    node,
                    record,
                    new_overlay,
                    env_work if env_work is not None else environment,
                    end_id,
                    node.hops + 1,
                )
            )

        if children:
            # reversed push so the lowest link id is popped first
            stack.extend(reversed(children))
        elif not any_valid:
            dead_ended += 1

    elapsed = time.perf_counter() - started

    return TraversalResult(
        config=config,
        paths=paths,
        final_count=final_count,
        goal_count=goal_count,
        length_histogram=dict(sorted(histogram.items())),
        total_connections=total_connections,
        dead_ended=dead_ended,
        loop_terminated=loop_terminated,
        skipped_postconditions=skipped_total,
        candidates_evaluated=candidates,
        elapsed=elapsed,
        partial=partial,
        degenerate=config.start == config.end,
        variant_containers_created=store.container_count - containers_before,
        variant_links_created=store.link_count - links_before,
        store=store,
    )


def _goal_satisfied(goal, node: PathNode, fact_owner, profiles) -> bool:
    """Check goal facts against the path's terminal view: active variants
    over base values, environment facts from the path's copy."""
    overlay = node.overlay
    for fact_id, wanted in goal:
        owner = fact_owner[fact_id]
        if owner is None:
            current = node.environment[fact_id]
        else:
            var = overlay.get(owner.id)
            values = var.values if var is not None else owner.base_values
            current = values[owner.fact_pos[fact_id]]
        if current is not wanted:
            return False
    return True


def terminal_value(path: RealityPath, fact_id: str, network: Network) -> bool:
    """Resolve one fact in a final path's terminal view."""
    fact = network.facts[fact_id]
    if fact.owner is None:
        return path.environment[fact_id]
    variant = path.active_variants.get(fact.owner)
    if variant is not None:
        return variant.configuration[fact_id]
    return bool(fact.value)
