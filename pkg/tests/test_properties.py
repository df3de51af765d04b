"""Property-based checks: randomized models against the independent enumerator
and the structural invariants every run must keep."""

import dataclasses

import hypothesis.strategies as st
from hypothesis import given, settings

from sonarpath import (
    CustomProperty,
    EngineConfig,
    GenericRule,
    ModelDocument,
    Network,
    NormalRule,
    Scenario,
    brute_force_enumerate,
    cp_condition,
    dumps,
    fact_condition,
    loads,
    structural_hash,
    traverse,
)
from sonarpath.rules import SLOT_END, SLOT_LINK


def build_model(params):
    """Deterministic network construction from drawn parameters."""
    count, edges, opens, with_close, with_mark, with_normal, end_index = params
    net = Network()
    p_open = net.add_common_property("link open")
    p_mark = net.add_common_property("visited")
    for index in range(1, count + 1):
        net.add_container(
            f"host {index}", facts=[(p_mark, False)] if with_mark else None
        )
    for (a, b), is_open in zip(edges, opens):
        net.add_link(f"C{a}", f"C{b}", facts=[(p_open, is_open)])
    net.add_rule(
        GenericRule(
            id="R1",
            name="cross open link",
            preconditions=(cp_condition(SLOT_LINK, p_open, True),),
            postconditions=(cp_condition(SLOT_LINK, p_open, True),),
            success=0.9,
        )
    )
    if with_close:
        net.add_rule(
            GenericRule(
                id="R2",
                name="cross and close",
                preconditions=(cp_condition(SLOT_LINK, p_open, True),),
                postconditions=(cp_condition(SLOT_LINK, p_open, False),),
                success=0.8,
            )
        )
    if with_mark:
        net.add_rule(
            GenericRule(
                id="R3",
                name="mark the far side",
                preconditions=(
                    cp_condition(SLOT_LINK, p_open, True),
                    cp_condition(SLOT_END, p_mark, False),
                ),
                postconditions=(cp_condition(SLOT_END, p_mark, True),),
                success=0.7,
            )
        )
    if with_normal:
        env = net.add_fact(False)
        net.add_rule(
            NormalRule(
                id="R4",
                name="raise alarm",
                preconditions=(fact_condition(env, False),),
                postconditions=(fact_condition(env, True),),
                success=0.6,
            )
        )
    return net, EngineConfig(start="C1", end=f"C{end_index}")


@st.composite
def drawn_models(draw):
    count = draw(st.integers(min_value=2, max_value=4))
    pairs = [(a, b) for a in range(1, count + 1) for b in range(1, count + 1) if a != b]
    edges = tuple(
        draw(st.lists(st.sampled_from(pairs), min_size=1, max_size=6, unique=True))
    )
    opens = tuple(draw(st.booleans()) for _ in edges)
    with_close = draw(st.booleans())
    with_mark = draw(st.booleans())
    with_normal = draw(st.booleans())
    end_index = draw(st.integers(min_value=2, max_value=count))
    return count, edges, opens, with_close, with_mark, with_normal, end_index


def signatures(result):
    return [path.signature() for path in result.paths]


@given(drawn_models())
@settings(max_examples=25)
def test_engine_matches_independent_enumeration(params):
    net, config = build_model(params)
    expected = sorted(brute_force_enumerate(net, config))
    result = traverse(net, config)
    assert sorted(signatures(result)) == expected


@given(drawn_models())
def test_repeat_runs_are_identical_and_share_variants(params):
    net, config = build_model(params)
    first = traverse(net, config)
    second = traverse(net, config)
    assert signatures(first) == signatures(second)
    assert first.length_histogram == second.length_histogram
    assert (first.dead_ended, first.loop_terminated) == (
        second.dead_ended,
        second.loop_terminated,
    )
    again = traverse(net, config, store=first.store)
    assert again.variant_containers_created == 0
    assert again.variant_links_created == 0


@given(drawn_models(), st.integers(min_value=1, max_value=3))
def test_per_run_invariants(params, cap):
    net, base_config = build_model(params)
    config = dataclasses.replace(base_config, rule_cap=cap)
    result = traverse(net, config)
    for path in result.paths:
        states = [
            (
                record.link_id,
                record.start_variant.values,
                record.link_variant.values,
                record.end_variant.values,
            )
            for record in path.connections
        ]
        # a repeated connection state would have been terminated, not finalized
        assert len(states) == len(set(states))
        assert all(len(record.triggered_generic) <= cap for record in path.connections)
        assert path.length == path.hops + 1
    assert sum(result.length_histogram.values()) == result.final_count
    assert (
        sum(length * count for length, count in result.length_histogram.items())
        == result.total_connections
    )


@given(drawn_models())
def test_custom_properties_never_affect_traversal(params):
    net, config = build_model(params)
    base = traverse(net, config)
    decorated, _ = build_model(params)
    for container_id in list(decorated.containers):
        container = decorated.containers[container_id]
        tag = CustomProperty(id=f"X-{container_id}", value="inert", attached_to=(container_id,))
        decorated.containers[container_id] = dataclasses.replace(
            container, custom_properties=(tag,)
        )
    redone = traverse(decorated, config)
    assert signatures(redone) == signatures(base)
    assert redone.length_histogram == base.length_histogram
    assert redone.loop_terminated == base.loop_terminated


@given(drawn_models())
def test_serialization_round_trip_is_stable(params):
    net, config = build_model(params)
    doc = ModelDocument(
        net,
        {"walk": Scenario(name="walk", start=config.start, end=config.end)},
        name="drawn",
    )
    text = dumps(doc)
    assert dumps(loads(text)) == text
    assert structural_hash(loads(text)) == structural_hash(doc)


@given(drawn_models())
def test_goal_counts_stay_bounded(params):
    net, config = build_model(params)
    trivial = traverse(net, dataclasses.replace(config, goal=()))
    assert trivial.goal_count == trivial.final_count
    probe_fact = sorted(net.facts)[0]
    tracked = traverse(net, dataclasses.replace(config, goal=((probe_fact, True),)))
    assert tracked.goal_count is not None
    assert 0 <= tracked.goal_count <= tracked.final_count
