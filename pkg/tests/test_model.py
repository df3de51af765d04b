"""Builder operations, id allocation, and lookups on the base network."""

import pytest

from sonarpath import ModelError, Network
from sonarpath.model import natural_key


def test_natural_key_orders_numeric_suffixes():
    ids = ["C10", "C2", "C1", "C21"]
    assert sorted(ids, key=natural_key) == ["C1", "C2", "C10", "C21"]


def test_ids_allocated_per_prefix():
    net = Network()
    assert net.add_common_property("link open") == "P1"
    assert net.add_common_property("admin privileges") == "P2"
    assert net.add_container("a") == "C1"
    assert net.add_container("b") == "C2"
    assert net.add_link("C1", "C2") == "L1"
    assert net.add_fact(True) == "F1"
    assert net.add_action("echo hi") == "A1"


def test_explicit_ids_do_not_break_the_counter():
    net = Network()
    net.add_container("a")
    net.add_container("b", id="C7")
    assert net.add_container("c") == "C2"
    with pytest.raises(ModelError, match="duplicate container id 'C7'"):
        net.add_container("d", id="C7")


def test_default_link_name_is_the_endpoint_pair():
    net = Network()
    net.add_container("a")
    net.add_container("b")
    link_id = net.add_link("C1", "C2")
    assert net.links[link_id].name == "C1->C2"


def test_child_containers_link_to_parent_and_siblings():
    net = Network()
    net.add_container("root")
    assert len(net.links) == 0
    net.add_container("left", parent="C1")
    assert len(net.links) == 2
    net.add_container("right", parent="C1")
    assert len(net.links) == 6
    pairs = {(link.source, link.target) for link in net.links.values()}
    assert ("C2", "C3") in pairs and ("C3", "C2") in pairs
    assert ("C1", "C3") in pairs and ("C3", "C1") in pairs


def test_container_and_link_facts_created_inline():
    net = Network()
    cp = net.add_common_property("link open")
    net.add_container("a", facts=[(cp, True)])
    net.add_container("b")
    link_id = net.add_link("C1", "C2", facts=[(cp, False)])
    facts = net.facts_of(link_id)
    assert len(facts) == 1 and facts[0].value is False
    assert net.fact_for_cp("C1", cp).value is True


def test_builder_rejections():
    net = Network()
    net.add_container("a")
    with pytest.raises(ModelError, match="unknown parent container"):
        net.add_container("b", parent="C9")
    with pytest.raises(ModelError, match="unknown link source"):
        net.add_link("C9", "C1")
    with pytest.raises(ModelError, match="unknown link target"):
        net.add_link("C1", "C9")
    with pytest.raises(ModelError, match="owner 'C9' does not exist"):
        net.add_fact(True, owner="C9")
    cp = net.add_common_property("marker")
    with pytest.raises(ModelError, match="must not carry a common property"):
        net.add_fact(True, common_property=cp)


def test_duplicate_rule_id_rejected():
    from sonarpath import GenericRule, cp_condition
    from sonarpath.rules import SLOT_LINK

    net = Network()
    cp = net.add_common_property("link open")
    rule = GenericRule(
        id="R1",
        name="cross",
        preconditions=(cp_condition(SLOT_LINK, cp, True),),
        postconditions=(cp_condition(SLOT_LINK, cp, True),),
        success=0.5,
    )
    net.add_rule(rule)
    with pytest.raises(ModelError, match="duplicate rule id 'R1'"):
        net.add_rule(rule)


def test_entity_lookup(model1):
    assert model1.entity("C1").name == "C1"
    assert model1.entity("L1").source == "C1"
    with pytest.raises(KeyError):
        model1.entity("C99")
    assert model1.is_container("C1")
    assert not model1.is_container("L1")


def test_facts_listed_in_natural_order():
    net = Network()
    cp1 = net.add_common_property("one")
    cp2 = net.add_common_property("two")
    net.add_container("a")
    net.add_fact(True, cp1, owner="C1", id="F10")
    net.add_fact(False, cp2, owner="C1", id="F2")
    assert [fact.id for fact in net.facts_of("C1")] == ["F2", "F10"]


def test_environment_facts_have_no_owner():
    net = Network()
    net.add_container("a")
    cp = net.add_common_property("marker")
    net.add_fact(True, cp, owner="C1")
    env = net.add_fact(False)
    listed = net.environment_facts()
    assert [fact.id for fact in listed] == [env]
    assert listed[0].owner is None and listed[0].common_property is None


def test_outgoing_links_in_natural_order(model1):
    assert [link.id for link in model1.outgoing_links("C1")] == ["L1", "L5"]
    assert [link.id for link in model1.outgoing_links("C5")] == ["L10"]


def test_fact_values_coerced_to_bool():
    net = Network()
    fact_id = net.add_fact(1)
    assert net.facts[fact_id].value is True
