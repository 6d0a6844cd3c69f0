"""
The correctness argument, played out
====================================

Two scripted strategies carry the burden of proof.  On a false circuit
the mirror cat shadows the mouse's twin node and wins against any
opposition; on a true circuit the marching mouse walks a true path to
the hole and wins against any opposition.  Here each one faces a
solver-optimal adversary, which is as hard as the claim gets.
"""

from catmouse import (
    GameInstance,
    build_undirected,
    evaluate,
    make_mirror_cat,
    make_true_path_mouse,
    parse_circuit,
    play_match,
    solve,
)

circuit = parse_circuit("""\
inputs 3
gate g0 OR i0 i1
gate g1 AND i1 i2
gate g2 AND g0 g1
output g2
""")

for bits in ("011", "100"):
    value, _ = evaluate(circuit, bits)
    graph, cmap = build_undirected(circuit, bits)
    instance = GameInstance.from_game_graph(graph)
    solution = solve(instance)
    cat = make_mirror_cat(instance, cmap, circuit, bits)
    mouse = make_true_path_mouse(instance, cmap, circuit, bits)
    print(f"bits {bits} (circuit value {value}):")

    if value:
        # Scripted mouse against the strongest possible cat.
        transcript = play_match(instance, solution.policy(), mouse)
        print("  scripted mouse vs optimal cat:", transcript.result.value,
              f"({transcript.reason}, {len(transcript.moves)} plies)")
    else:
        # Scripted cat against the strongest possible mouse.
        transcript = play_match(instance, cat, solution.policy())
        print("  scripted cat vs optimal mouse:", transcript.result.value,
              f"({transcript.reason}, {len(transcript.moves)} plies)")

    # The two scripts head to head reproduce the circuit value.
    transcript = play_match(instance, cat, mouse)
    print("  script vs script:", transcript.result.value,
          f"({transcript.reason}, {len(transcript.moves)} plies)")
    if value:
        level = cmap.layer[graph.m]
        assert len(transcript.moves) == 2 * level
        print(f"  win length {2 * level} = 2 x mouse layer {level}, as predicted")
    print()
