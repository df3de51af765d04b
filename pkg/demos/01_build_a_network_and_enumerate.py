"""
Build a network by hand and enumerate its reality paths
=======================================================

A four-host lab: a workstation, a jump host, a file server, and a backup
box. Links are directed and carry an "open" fact; one crossing rule
traverses open links, a second closes the link behind itself.
"""

from sonarpath import EngineConfig, GenericRule, Network, cp_condition, traverse
from sonarpath.rules import SLOT_LINK

net = Network()
p_open = net.add_common_property("link open")

workstation = net.add_container("workstation")
jump = net.add_container("jump host")
files = net.add_container("file server")
backup = net.add_container("backup box")

# one open pair per direction; the backup box is reachable two ways
for source, target in [
    (workstation, jump),
    (jump, workstation),
    (jump, files),
    (files, jump),
    (files, backup),
    (jump, backup),
]:
    net.add_link(source, target, facts=[(p_open, True)])

net.add_rule(
    GenericRule(
        id="R1",
        name="traverse open link",
        preconditions=(cp_condition(SLOT_LINK, p_open, True),),
        postconditions=(cp_condition(SLOT_LINK, p_open, True),),
        success=0.9,
    )
)
net.add_rule(
    GenericRule(
        id="R2",
        name="traverse and close link",
        preconditions=(cp_condition(SLOT_LINK, p_open, True),),
        postconditions=(cp_condition(SLOT_LINK, p_open, False),),
        success=0.8,
    )
)

result = traverse(net, EngineConfig(start=workstation, end=backup))

print(f"unique reality paths from {workstation} to {backup}: {result.final_count}")
print(f"dead ends: {result.dead_ended}, loop terminations: {result.loop_terminated}")
print(f"variant containers: {result.variant_containers_created}, "
      f"variant links: {result.variant_links_created}")
print()

# each connection prints as start -[link: rules]-> end
for index, path in enumerate(result.paths):
    steps = ", ".join(
        f"{r.start_id} -[{r.link_id}: {'+'.join(r.triggered_generic)}]-> {r.end_id}"
        for r in path.connections
    )
    print(f"path {index} (length {path.length}): {steps}")
