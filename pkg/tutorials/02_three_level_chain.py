"""
Deciding boundary membership on a three-level chain
===================================================

A quadratic differential degenerating to three levels.  The two upper
vertices are squares of abelian differentials, the bottom one is not.
Changing the roots on the edges flips the verdict.
"""

# %%
from pathlib import Path

from kdiff import Edge, LevelGraph, MarkedPoint, TwistedKDifferential, Vertex, parse_cycnum, validate
from kdiff.cover import lifted_level_graph
from kdiff.grc import check_condition_4, check_condition_4hat
from kdiff.serialize import dump_instance


def chain(r1, r2, r3):
    vertices = [
        Vertex(1, 1, 0, (), 2),
        Vertex(2, 0, -1, (MarkedPoint(4),), 2),
        Vertex(3, 1, -2, (MarkedPoint(3), MarkedPoint(1)), 1),
    ]
    edges = [
        Edge(1, 1, 2, 0, -4, None, parse_cycnum(r1)),
        Edge(2, 1, 2, 0, -4, None, parse_cycnum(r2)),
        Edge(3, 2, 3, 0, -4, None, parse_cycnum(r3)),
    ]
    return TwistedKDifferential(2, LevelGraph(vertices, edges))


# %%
t = chain("0", "0", "1")
print(validate(t).ok)
report = check_condition_4(t)
for inst in report.instances:
    print(inst.level, inst.component_vertices, inst.case, inst.witness)
print(check_condition_4hat(t))

# %%
# The witness offsets say how the two sheets over the upper part are glued.
# Gluing e2 with a twist joins them into one component.
for offsets in ({1: 0, 2: 0, 3: 0}, {1: 0, 2: 1, 3: 0}):
    lifted = lifted_level_graph(t, offsets)
    above = lifted.subgraph("above", -2)
    print(offsets, [c.sorted_vertices() for c in lifted.connected_components(above)])

# %%
# Roots 1, -1 on the upper edges force the untwisted gluing, so the nonzero
# residue at the bottom cannot be balanced.
for roots in [("1", "-1", "1"), ("1", "-1", "0")]:
    t = chain(*roots)
    print(roots, check_condition_4(t).status, check_condition_4hat(t).status)

# %%
# Save the three variants for the command-line examples in the README.
out = Path(__file__).parent / "instances"
out.mkdir(exist_ok=True)
dump_instance(chain("0", "0", "1"), out / "chain_twisted.json")
dump_instance(chain("1", "-1", "1"), out / "chain_cancelling.json")
dump_instance(chain("1", "-1", "0"), out / "chain_zero_residue.json")
