"""Synchronous monotone circuits, their cat-and-mouse game graphs, and an
exact game solver, with scripted strategies and a verification harness
tying the two worlds together: the circuit is true exactly when the Mouse
wins the game built from it."""

from .circuits import (
    AND,
    OR,
    Circuit,
    CircuitError,
    Gate,
    evaluate,
    generate_random,
    parse_circuit,
    serialize_circuit,
    validate_layers,
)
from .reduction import (
    CorrespondenceMap,
    GameGraph,
    GraphError,
    build_directed,
    build_undirected,
    export_graph,
    import_graph,
    stats,
)
from .solver import (
    CAT,
    MOUSE,
    GameInstance,
    GameState,
    Graph,
    MatchTranscript,
    Outcome,
    SolverError,
    classify,
    minimax_oracle,
    outcome,
    play_match,
    solve,
)
from .strategies import (
    NoMoveError,
    NoSafeMoveError,
    StrategyError,
    make_mirror_cat,
    make_true_path_mouse,
)
from .verify import (
    FuzzReport,
    VerificationReport,
    check_structure,
    fuzz_equivalence,
    undirected_probes,
    verify_equivalence,
)

__all__ = [
    "AND",
    "OR",
    "Circuit",
    "CircuitError",
    "Gate",
    "evaluate",
    "generate_random",
    "parse_circuit",
    "serialize_circuit",
    "validate_layers",
    "CorrespondenceMap",
    "GameGraph",
    "GraphError",
    "build_directed",
    "build_undirected",
    "export_graph",
    "import_graph",
    "stats",
    "CAT",
    "MOUSE",
    "GameInstance",
    "GameState",
    "Graph",
    "MatchTranscript",
    "Outcome",
    "SolverError",
    "classify",
    "minimax_oracle",
    "outcome",
    "play_match",
    "solve",
    "NoMoveError",
    "NoSafeMoveError",
    "StrategyError",
    "make_mirror_cat",
    "make_true_path_mouse",
    "FuzzReport",
    "VerificationReport",
    "check_structure",
    "fuzz_equivalence",
    "undirected_probes",
    "verify_equivalence",
]
