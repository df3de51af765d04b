"""Scenario configuration, metrics, and the independent oracles.

A scenario narrows a network to one run: omitted rules, initial fact
overrides, start and end containers, heuristic values and stop
conditions. The brute-force enumerator re-implements the traversal
semantics naively (full state copies, no variant store, no shared search
tree) so engine results can be checked against it on small models.
"""

from __future__ import annotations

import copy
import itertools
from dataclasses import dataclass, field, replace

from . import engine
from .model import ModelError, Network, natural_key

BRUTE_MAX_CONTAINERS = 8
BRUTE_MAX_LINKS = 16
BRUTE_MAX_RULES = 12


@dataclass(frozen=True)
class Scenario:
    name: str
    start: str
    end: str
    omit_rules: tuple[str, ...] = ()
    fact_overrides: dict[str, bool] = field(default_factory=dict)
    rule_cap: int = 100
    goal: tuple[tuple[str, bool], ...] | None = None
    max_paths: int | None = None
    max_seconds: float | None = None
    description: str = ""

    def configuration_label(self) -> str:
        """Short human label, e.g. "Omit R8 and R9" or "Omit R7 F39:F"."""
        parts = []
        if self.omit_rules:
            if len(self.omit_rules) == 1:
                parts.append(f"Omit {self.omit_rules[0]}")
            else:
                head = ", ".join(self.omit_rules[:-1])
                parts.append(f"Omit {head} and {self.omit_rules[-1]}")
        if self.fact_overrides:
            overrides = ", ".join(
                f"{fact_id}:{'T' if value else 'F'}"
                for fact_id, value in sorted(self.fact_overrides.items(), key=lambda kv: natural_key(kv[0]))
            )
            parts.append(overrides)
        return " ".join(parts)


@dataclass
class Metrics:
    fastest_completion_time: float
    final_reality_paths: int
    goal_achieving_paths: int | None
    total_connections: int
    longest_path: tuple[int, int]
    shortest_path: tuple[int, int]
    variant_containers_created: int
    variant_links_created: int
    memory_estimate: int
    stopped_early: bool

    def as_dict(self) -> dict:
        return {
            "fastest_completion_time": self.fastest_completion_time,
            "final_reality_paths": self.final_reality_paths,
            "goal_achieving_paths": self.goal_achieving_paths,
            "total_connections": self.total_connections,
            "longest_path": list(self.longest_path),
            "shortest_path": list(self.shortest_path),
            "variant_containers_created": self.variant_containers_created,
            "variant_links_created": self.variant_links_created,
            "memory_estimate": self.memory_estimate,
            "stopped_early": self.stopped_early,
        }


def apply_scenario(network: Network, scenario: Scenario) -> tuple[Network, engine.EngineConfig]:
    """Deep-copy the network, drop omitted rules, apply fact overrides."""
    for rule_id in scenario.omit_rules:
        if rule_id not in network.rules:
            raise ModelError(f"scenario {scenario.name!r} omits unknown rule {rule_id!r}")
    for fact_id in scenario.fact_overrides:
        if fact_id not in network.facts:
            raise ModelError(f"scenario {scenario.name!r} overrides unknown fact {fact_id!r}")
    working = copy.deepcopy(network)
    for rule_id in scenario.omit_rules:
        del working.rules[rule_id]
    for fact_id, value in scenario.fact_overrides.items():
        working.facts[fact_id].value = bool(value)
    config = engine.EngineConfig(
        start=scenario.start,
        end=scenario.end,
        rule_cap=scenario.rule_cap,
        max_paths=scenario.max_paths,
        max_seconds=scenario.max_seconds,
        goal=scenario.goal,
    )
    return working, config


def goal_check(path: engine.RealityPath, goal, network: Network) -> bool | None:
    """Evaluate goal facts against a final path's terminal view.

    Returns None when no goal is configured; an empty goal list is
    trivially satisfied.
    """
    if goal is None:
        return None
    return all(
        engine.terminal_value(path, fact_id, network) is bool(wanted)
        for fact_id, wanted in goal
    )


def compute_metrics(result: engine.TraversalResult) -> Metrics:
    histogram = result.length_histogram
    if histogram:
        longest = max(histogram)
        shortest = min(histogram)
        longest_pair = (longest, histogram[longest])
        shortest_pair = (shortest, histogram[shortest])
    else:
        longest_pair = (0, 0)
        shortest_pair = (0, 0)
    return Metrics(
        fastest_completion_time=result.elapsed,
        final_reality_paths=result.final_count,
        goal_achieving_paths=result.goal_count,
        total_connections=result.total_connections,
        longest_path=longest_pair,
        shortest_path=shortest_pair,
        variant_containers_created=result.variant_containers_created,
        variant_links_created=result.variant_links_created,
        memory_estimate=estimate_memory(result),
        stopped_early=result.partial,
    )


def estimate_memory(result: engine.TraversalResult) -> int:
    """Object-count approximation in bytes; informational only."""
    variants = result.variant_containers_created + result.variant_links_created
    return (
        20 * 2**20
        + 96 * result.total_connections
        + 256 * variants
        + 64 * result.final_count
    )


@dataclass
class ScenarioRun:
    scenario: Scenario
    config: engine.EngineConfig
    working: Network
    result: engine.TraversalResult
    metrics: Metrics


def run_scenario(
    network: Network,
    scenario: Scenario,
    *,
    store: engine.VariantStore | None = None,
    stop_event=None,
    keep_paths: bool = True,
    allow_actions: bool = False,
    rule_cap: int | None = None,
    max_paths: int | None = None,
    max_seconds: float | None = None,
) -> ScenarioRun:
    """Apply a scenario, traverse, and compute its metrics."""
    working, config = apply_scenario(network, scenario)
    config = replace(
        config,
        rule_cap=rule_cap if rule_cap is not None else config.rule_cap,
        max_paths=max_paths if max_paths is not None else config.max_paths,
        max_seconds=max_seconds if max_seconds is not None else config.max_seconds,
        keep_paths=keep_paths,
        allow_actions=allow_actions,
    )
    result = engine.traverse(working, config, store=store, stop_event=stop_event)
    return ScenarioRun(scenario, config, working, result, compute_metrics(result))


# ----------------------------------------------------------------------
# analytic oracle


def one_depth_tree_path_count(branches: int) -> int:
    """Closed-form path count for a hub with ``branches`` leaves and a
    close-links rule: a(n) = (n - 1) * a(n - 1) + 1 with a(1) = 1."""
    if branches < 1:
        raise ValueError("branches must be >= 1")
    count = 1
    for n in range(2, branches + 1):
        count = (n - 1) * count + 1
    return count


def build_one_depth_tree(branches: int, close_links: bool = True) -> tuple[Network, Scenario]:
    """Hub container linked with every leaf in both directions; the single
    rule either closes links after crossing or leaves them open."""
    from .rules import GenericRule, cp_condition

    network = Network()
    cp = network.add_common_property("traversable", id="P1")
    hub = network.add_container("hub", id="C1")
    for i in range(branches):
        leaf = network.add_container(f"leaf{i + 1}", id=f"C{i + 2}")
        network.add_link(hub, leaf, facts=[(cp, True)])
        network.add_link(leaf, hub, facts=[(cp, True)])
    network.add_rule(
        GenericRule(
            id="R1",
            name="cross and close" if close_links else "cross",
            preconditions=(cp_condition("link", cp, True),),
            postconditions=(cp_condition("link", cp, not close_links),),
            success=0.9,
        )
    )
    scenario = Scenario(
        name=f"tree-{branches}",
        start="C1",
        end="C2",
        description=f"one-depth tree with {branches} branches",
    )
    return network, scenario


# ----------------------------------------------------------------------
# brute-force oracle


def brute_force_enumerate(network: Network, config: engine.EngineConfig) -> list[tuple]:
    """Exhaustively enumerate final path signatures on a small network.

    Independent of the engine: full per-path network state, deep copies
    at every step, recursion instead of an explicit stack. Refuses models
    beyond the guard so runtime stays bounded.
    """
    if len(network.containers) > BRUTE_MAX_CONTAINERS:
        raise ValueError("brute-force guard: too many containers")
    if len(network.links) > BRUTE_MAX_LINKS:
        raise ValueError("brute-force guard: too many links")
    if len(network.rules) > BRUTE_MAX_RULES:
        raise ValueError("brute-force guard: too many rules")
    if config.start not in network.containers or config.end not in network.containers:
        raise ModelError("unknown start or end container")

    ordered = sorted(
        network.rules.values(), key=lambda r: (-r.success, natural_key(r.id))
    )
    fact_order: dict[str, list[str]] = {}
    for entity_id in itertools.chain(network.containers, network.links):
        fact_order[entity_id] = [f.id for f in network.facts_of(entity_id)]
    cp_of_fact = {f.id: f.common_property for f in network.facts.values()}
    owner_of = {f.id: f.owner for f in network.facts.values()}

    def initial_state() -> dict:
        entities = {
            entity_id: {fact_id: bool(network.facts[fact_id].value) for fact_id in order}
            for entity_id, order in fact_order.items()
        }
        env = {f.id: bool(f.value) for f in network.environment_facts()}
        return {"entities": entities, "env": env}

    def entity_signature(state: dict, entity_id: str) -> tuple:
        return tuple(state["entities"][entity_id][fid] for fid in fact_order[entity_id])

    def cp_fact_on(entity_id: str, cp_id: str) -> str | None:
        for fact_id in fact_order[entity_id]:
            if cp_of_fact[fact_id] == cp_id:
                return fact_id
        return None

    def run_connection(state: dict, start: str, link: str, end: str) -> tuple[bool, list[str], list[str]]:
        slot_entity = {"start": start, "link": link, "end": end}
        triggered: list[str] = []
        generic_hits: list[str] = []
        normal_hits: list[str] = []
        while True:
            fired_this_pass = False
            for rule in ordered:
                if rule.id in triggered:
                    continue
                if rule.kind == "generic":
                    ok = True
                    for cond in rule.preconditions:
                        entity = slot_entity[cond.slot]
                        fact_id = cp_fact_on(entity, cond.cp)
                        if fact_id is None or state["entities"][entity][fact_id] != cond.value:
                            ok = False
                            break
                    if not ok:
                        continue
                    triggered.append(rule.id)
                    generic_hits.append(rule.id)
                    fired_this_pass = True
                    for cond in rule.postconditions:
                        entity = slot_entity[cond.slot]
                        fact_id = cp_fact_on(entity, cond.cp)
                        if fact_id is not None:
                            state["entities"][entity][fact_id] = cond.value
                    if len(generic_hits) >= config.rule_cap:
                        return True, generic_hits, normal_hits
                else:
                    ok = True
                    for cond in rule.preconditions:
                        owner = owner_of[cond.fact]
                        current = (
                            state["env"][cond.fact]
                            if owner is None
                            else state["entities"][owner][cond.fact]
                        )
                        if current != cond.value:
                            ok = False
                            break
                    if not ok:
                        continue
                    triggered.append(rule.id)
                    normal_hits.append(rule.id)
                    fired_this_pass = True
                    for cond in rule.postconditions:
                        owner = owner_of[cond.fact]
                        if owner is None:
                            state["env"][cond.fact] = cond.value
                        else:
                            state["entities"][owner][cond.fact] = cond.value
            if not fired_this_pass:
                return False, generic_hits, normal_hits

    links_from: dict[str, list] = {cid: network.outgoing_links(cid) for cid in network.containers}
    results: list[tuple] = []

    def explore(state: dict, head: str, history: list[tuple]) -> None:
        if head == config.end:
            results.append(tuple(history))
            return
        for link in links_from[head]:
            candidate = copy.deepcopy(state)
            _, generic_hits, normal_hits = run_connection(candidate, head, link.id, link.target)
            valid = bool(generic_hits) or (config.allow_normal_only and bool(normal_hits))
            if not valid:
                continue
            step = (
                head,
                link.id,
                link.target,
                entity_signature(candidate, head),
                entity_signature(candidate, link.id),
                entity_signature(candidate, link.target),
            )
            if any(
                previous[1] == step[1] and previous[3:] == step[3:]
                for previous in history
            ):
                continue
            explore(candidate, link.target, history + [step])

    explore(initial_state(), config.start, [])
    return results
