"""
Solving the game exactly
========================

Retrograde analysis over (cat, mouse, turn) states labels every
position CatWin, MouseWin or Draw, with the distance to the end under
optimal play from both sides.
"""

from catmouse import GameInstance, build_directed, parse_circuit, play_match, solve

circuit = parse_circuit("""\
inputs 2
gate g0 AND i0 i1
output g0
""")

for bits in ("11", "01"):
    graph, cmap = build_directed(circuit, bits)
    instance = GameInstance.from_game_graph(graph)
    solution = solve(instance)
    dist = solution.dist(instance.initial_state())
    print(f"bits {bits}: {solution.outcome().value} in {dist} plies")

# Optimal play on the true instance: the winner heads straight for the
# shortest win, the loser drags its feet.  The transcript is replayable.
graph, cmap = build_directed(circuit, "11")
instance = GameInstance.from_game_graph(graph)
solution = solve(instance)
policy = solution.policy()
transcript = play_match(instance, policy, policy)
print()
print(transcript.text())

# A winning mouse needs one move per level, and the cat moves first, so
# the match length is exactly twice the mouse's starting layer.
print("mouse starting layer:", cmap.layer[graph.m])
print("match length:", len(transcript.moves), "plies")
