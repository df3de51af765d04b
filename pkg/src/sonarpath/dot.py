"""Graphviz DOT export for models and run reports.

Output is a pure function of the input: nodes and edges appear in
natural id order, so identical inputs give identical bytes.
"""

from __future__ import annotations

from .model import Network, natural_key


def _quote(value: str) -> str:
    escaped = value.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _label(*parts: str) -> str:
    # escape each part first so the joining \n stays a DOT line break
    escaped = [p.replace("\\", "\\\\").replace('"', '\\"') for p in parts]
    return '"' + "\\n".join(escaped) + '"'


def network_to_dot(network: Network, title: str = "network") -> str:
    lines = [f"digraph {_quote(title)} {{"]
    lines.append("  node [shape=box];")
    for container_id in network.sorted_ids(network.containers):
        container = network.containers[container_id]
        if container.name in ("", container_id):
            label = _label(container_id)
        else:
            label = _label(container_id, container.name)
        lines.append(f"  {_quote(container_id)} [label={label}];")
    for link_id in network.sorted_ids(network.links):
        link = network.links[link_id]
        lines.append(
            f"  {_quote(link.source)} -> {_quote(link.target)} [label={_quote(link_id)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def report_to_dot(report: dict, path_index: int | None = None) -> str:
    """One subgraph cluster per selected path; edges carry the triggered
    rule ids of that connection."""
    paths = report.get("paths", [])
    if path_index is not None:
        if not 0 <= path_index < len(paths):
            raise IndexError(f"path index {path_index} out of range (0..{len(paths) - 1})")
        paths = [paths[path_index]]
    name = report.get("scenario", {}).get("name", "run")
    lines = [f"digraph {_quote(name)} {{"]
    lines.append("  node [shape=box];")
    for path in paths:
        index = path["index"]
        length = path["length"]
        lines.append(f"  subgraph cluster_{index} {{")
        lines.append(f"    label={_quote(f'path {index} (length {length})')};")
        seen = []
        for connection in path["connections"]:
            for container_id in (connection["start"], connection["end"]):
                if container_id not in seen:
                    seen.append(container_id)
        for container_id in sorted(seen, key=natural_key):
            node = f"p{index}_{container_id}"
            lines.append(f"    {_quote(node)} [label={_quote(container_id)}];")
        for step, connection in enumerate(path["connections"]):
            triggered = ", ".join(
                (*connection["triggered_generic"], *connection["triggered_normal"])
            )
            link_id = connection["link"]
            label = f"{step + 1}. {link_id}"
            if triggered:
                label += f" [{triggered}]"
            tail = f"p{index}_" + connection["start"]
            head = f"p{index}_" + connection["end"]
            lines.append(f"    {_quote(tail)} -> {_quote(head)} [label={_quote(label)}];")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
