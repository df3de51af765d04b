"""Bundled models: shape, validity, and canonical serialization."""

import pytest

from sonarpath import dumps, loads, structural_hash, validate_network
from sonarpath.fixtures import fixture_names, fixture_text, load_fixture


def rule_kinds(network):
    generic = sum(1 for rule in network.rules.values() if rule.kind == "generic")
    return generic, len(network.rules) - generic


def test_fixture_names():
    assert fixture_names() == ["model1", "model2", "model3"]


def test_unknown_fixture_rejected():
    with pytest.raises(KeyError):
        fixture_text("model9")


@pytest.mark.parametrize("name", ["model1", "model2", "model3"])
def test_fixtures_validate_cleanly(name):
    doc = load_fixture(name)
    report = validate_network(doc.network, doc.scenarios.values())
    assert report.ok, [str(finding) for finding in report.findings]


@pytest.mark.parametrize("name", ["model1", "model2", "model3"])
def test_fixtures_are_canonical(name):
    # the shipped text is exactly what the serializer would write back
    text = fixture_text(name)
    assert dumps(loads(text)) == text


def test_fixture_hashes_are_distinct():
    hashes = {structural_hash(load_fixture(name)) for name in fixture_names()}
    assert len(hashes) == 3


def test_model1_shape(model1_doc):
    net = model1_doc.network
    assert len(net.containers) == 5
    assert len(net.links) == 10
    assert len(net.facts) == 20
    assert len(net.common_properties) == 10
    assert rule_kinds(net) == (9, 0)
    assert sorted(model1_doc.scenarios) == ["s1", "s2", "s3", "s4", "s5"]
    assert all(len(net.facts_of(link_id)) == 1 for link_id in net.links)
    s1 = model1_doc.scenarios["s1"]
    assert s1.omit_rules == ("R8", "R9")
    assert s1.goal == (("F9", True),)
    assert (s1.start, s1.end) == ("C1", "C5")


def test_model2_shape(model2_doc):
    net = model2_doc.network
    assert len(net.containers) == 12
    assert len(net.links) == 26
    assert len(net.facts) == 55
    assert len(net.common_properties) == 7
    assert rule_kinds(net) == (7, 5)
    assert sorted(model2_doc.scenarios) == ["s1", "s2", "s3", "s4", "s5"]
    # one environment fact drives the alarm rules
    env = net.environment_facts()
    assert [fact.id for fact in env] == ["F40"] and env[0].value is False
    for scenario in model2_doc.scenarios.values():
        assert (scenario.start, scenario.end) == ("C2", "C9")
        assert scenario.goal == ()


def test_model3_shape(model3_doc):
    net = model3_doc.network
    assert len(net.containers) == 33
    assert len(net.links) == 78
    assert len(net.facts) == 78
    assert len(net.common_properties) == 1
    assert rule_kinds(net) == (2, 0)
    assert sorted(model3_doc.scenarios) == ["s1", "s2", "s3", "s4", "s5"]
    assert all(len(net.facts_of(link_id)) == 1 for link_id in net.links)
    assert model3_doc.scenarios["s1"].goal is None
    assert model3_doc.scenarios["s2"].max_paths == 1_200_000
    assert model3_doc.scenarios["s4"].max_seconds == 72_000
    assert model3_doc.scenarios["s5"].max_seconds == 72_000
