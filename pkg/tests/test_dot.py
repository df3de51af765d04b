"""Graphviz export for networks and enumerated paths."""

import pytest

from sonarpath import run_scenario
from sonarpath.dot import network_to_dot, report_to_dot
from sonarpath.report import build_report


def test_network_export_counts(model1_doc, model3_doc):
    text = network_to_dot(model1_doc.network)
    assert text.splitlines()[0] == 'digraph "network" {'
    assert text.count(" -> ") == 10
    assert text.count("[label=") == 15  # 5 nodes plus 10 labeled edges
    big = network_to_dot(model3_doc.network, title="full mesh")
    assert big.splitlines()[0] == 'digraph "full mesh" {'
    assert big.count(" -> ") == 78
    assert big.count("[label=") == 111


def test_container_names_appear_in_labels(model2_doc):
    text = network_to_dot(model2_doc.network)
    # names that differ from the id render on a second label line
    assert 'label="C1\\nswitch 1"' in text


def test_network_export_is_deterministic(model3_doc):
    assert network_to_dot(model3_doc.network) == network_to_dot(model3_doc.network)


@pytest.fixture(scope="module")
def s1_report(model1_doc):
    run = run_scenario(model1_doc.network, model1_doc.scenarios["s1"])
    return build_report(run.scenario, run.config, run.result, run.metrics)


def test_path_export_clusters(s1_report):
    everything = report_to_dot(s1_report)
    assert everything.count("subgraph cluster") == 1
    single = report_to_dot(s1_report, path_index=0)
    assert single.count("subgraph cluster") == 1
    assert "L1" in single


def test_path_export_rejects_bad_indices(s1_report):
    with pytest.raises(IndexError, match=r"path index 5 out of range \(0\.\.0\)"):
        report_to_dot(s1_report, path_index=5)
