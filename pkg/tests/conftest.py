"""Shared fixtures: bundled model documents and small throwaway networks."""

import copy

import pytest
from hypothesis import settings

from sonarpath import GenericRule, Network, cp_condition
from sonarpath.fixtures import load_fixture
from sonarpath.rules import SLOT_LINK

settings.register_profile("suite", deadline=None, derandomize=True, max_examples=40)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def model1_doc():
    return load_fixture("model1")


@pytest.fixture(scope="session")
def model2_doc():
    return load_fixture("model2")


@pytest.fixture(scope="session")
def model3_doc():
    return load_fixture("model3")


@pytest.fixture
def model1(model1_doc):
    # traversal never mutates the network, but builder tests do
    return copy.deepcopy(model1_doc.network)


@pytest.fixture
def model2(model2_doc):
    return copy.deepcopy(model2_doc.network)


def build_two_hosts(open_out=True, open_back=True, extra_rule=False):
    """C1 and C2 joined by a link pair, with one crossing rule per link state."""
    net = Network()
    cp = net.add_common_property("link open")
    a = net.add_container("a")
    b = net.add_container("b")
    net.add_link(a, b, facts=[(cp, open_out)])
    net.add_link(b, a, facts=[(cp, open_back)])
    net.add_rule(
        GenericRule(
            id="R1",
            name="cross open link",
            preconditions=(cp_condition(SLOT_LINK, cp, True),),
            postconditions=(cp_condition(SLOT_LINK, cp, True),),
            success=0.9,
        )
    )
    if extra_rule:
        net.add_rule(
            GenericRule(
                id="R2",
                name="cross again",
                preconditions=(cp_condition(SLOT_LINK, cp, True),),
                postconditions=(cp_condition(SLOT_LINK, cp, True),),
                success=0.8,
            )
        )
    return net


@pytest.fixture
def two_hosts():
    return build_two_hosts()
