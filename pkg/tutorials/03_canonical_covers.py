"""
Canonical covers of single vertices
===================================

Taking a k-th root of a k-differential gives a cyclic cover on which it
becomes the k-th power of an abelian differential.
"""

# %%
from pathlib import Path

from kdiff import Edge, LevelGraph, MarkedPoint, TwistedKDifferential, Vertex, parse_cycnum
from kdiff.cover import forced_horizontal_offsets, lifted_differential, local_cover
from kdiff.serialize import dump_instance

cubic = TwistedKDifferential(3, LevelGraph([Vertex(0, 2, 0, (MarkedPoint(6),), 1)]))
data = local_cover(cubic, 0)
print(data.components, data.component_genus, data.lifted_orders(), data.riemann_hurwitz_holds())

# %%
# A square with two self-gluings.  Which residue meets which decides
# whether the two sheets stay apart.
def loops(roots):
    vertex = Vertex(0, 0, 0, (MarkedPoint(2), MarkedPoint(2)), 2)
    edges = [Edge(i, 0, 0, -2, -2, parse_cycnum(p), parse_cycnum(m)) for i, (p, m) in enumerate(roots, start=1)]
    return TwistedKDifferential(2, LevelGraph([vertex], edges))


crossed = loops([("1", "1"), ("-1", "-1")])
straight = loops([("1", "-1"), ("1", "-1")])
for name, t in [("crossed", crossed), ("straight", straight)]:
    forced = forced_horizontal_offsets(t)
    print(name, forced.offsets, forced.component_counts)

# %%
lifted = lifted_differential(crossed, forced_horizontal_offsets(crossed).offsets)
print(lifted.k, lifted.graph.genus_total(), [v.id for v in lifted.graph.vertices])

# %%
out = Path(__file__).parent / "instances"
out.mkdir(exist_ok=True)
dump_instance(cubic, out / "cubic_single_zero.json")
dump_instance(crossed, out / "loops_crossed.json")
