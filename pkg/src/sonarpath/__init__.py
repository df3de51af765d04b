"""Rule-fact network modeling and exhaustive attack-path enumeration.

Build a network of containers and directed links holding boolean facts,
write generic and normal rules over them, and enumerate every unique
reality path between two containers with variant deduplication, a
per-connection rule cap, and a path termination heuristic.
"""

from .engine import (
    EngineConfig,
    RealityPath,
    TraversalResult,
    Variant,
    VariantStore,
    traverse,
)
from .io import ModelDocument, ModelFormatError, dump, dumps, load, loads, structural_hash
from .model import (
    Action,
    CommonProperty,
    Container,
    CustomProperty,
    Fact,
    Link,
    ModelError,
    Network,
)
from .rules import (
    GenericRule,
    NormalRule,
    OrderedRuleSet,
    RuleCondition,
    RuleError,
    cp_condition,
    fact_condition,
    order_rules,
)
from .scenario import (
    Metrics,
    Scenario,
    ScenarioRun,
    apply_scenario,
    brute_force_enumerate,
    build_one_depth_tree,
    compute_metrics,
    goal_check,
    one_depth_tree_path_count,
    run_scenario,
)
from .validate import Finding, ValidationReport, validate_network

__version__ = "0.1.0"

__all__ = [
    "Action",
    "CommonProperty",
    "Container",
    "CustomProperty",
    "EngineConfig",
    "Fact",
    "Finding",
    "GenericRule",
    "Link",
    "Metrics",
    "ModelDocument",
    "ModelError",
    "ModelFormatError",
    "Network",
    "NormalRule",
    "OrderedRuleSet",
    "RealityPath",
    "RuleCondition",
    "RuleError",
    "Scenario",
    "ScenarioRun",
    "TraversalResult",
    "ValidationReport",
    "Variant",
    "VariantStore",
    "apply_scenario",
    "brute_force_enumerate",
    "build_one_depth_tree",
    "compute_metrics",
    "cp_condition",
    "dump",
    "dumps",
    "fact_condition",
    "goal_check",
    "load",
    "loads",
    "one_depth_tree_path_count",
    "order_rules",
    "run_scenario",
    "structural_hash",
    "traverse",
    "validate_network",
]
