"""
From a circuit to a pursuit game
================================

Every gate becomes a five-node gadget on each side of the board, every
input a pair of leaf nodes, and the truth of the circuit decides whether
the mouse can march from the output gadget down to the hole.
"""

from collections import Counter

from catmouse import build_directed, build_undirected, parse_circuit, stats

circuit = parse_circuit("""\
inputs 2
gate g0 AND i0 i1
output g0
""")

graph, cmap = build_directed(circuit, "11")
print("start nodes: cat at", graph.c, "/ mouse at", graph.m)
print("hole", graph.h, "/ dead end", graph.d)

# stats() gives a census by node role and edge tag.
report = stats(graph)
print("nodes:", report["node_count"], " edges:", report["edge_count"])
for tag, count in sorted(report["edge_tags"].items()):
    print(f"  {tag:>16}: {count}")

# Layers count down toward the hole; every directed edge drops exactly
# one level.  The mouse starts one level below the cat, and that single
# tempo is what the whole construction preserves.
print()
print("layer of cat start:", cmap.layer[graph.c])
print("layer of mouse start:", cmap.layer[graph.m])
drops = Counter(cmap.layer[a] - cmap.layer[b] for a, b, _ in graph.edges)
print("level drop along each edge:", dict(drops))

# The undirected board adds guard edges so that backtracking hands the
# cat a capture instead of a free tempo.
ug, _ = build_undirected(circuit, "11")
extra = len(ug.edges) - len(graph.edges)
print()
print(f"undirected build: {extra} guard edges on top of the same skeleton")
