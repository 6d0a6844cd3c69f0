"""Exact solving of cat-and-mouse pursuit games.

The game: Cat and Mouse stand on nodes of a shared graph and move alternately
along edges, Cat first, neither player may pass.  Cat wins the moment both
players occupy the same node (even the hole), Mouse wins the moment it stands
on the hole alone, and a repeated (cat, mouse, player-to-move) situation is a
draw.  A player whose node has no outgoing edge loses.

``solve`` runs retrograde analysis over all (cat, mouse, turn) states:
terminal states seed a backward breadth-first sweep in which a state is won
for the mover as soon as one successor is won for them, and lost once every
successor is lost (tracked with successor counters; here the counting is done
with sparse matrix products over the whole state space at once).  States never
decided are draws, matching the classical equivalence with the
repetition-draw rule.  The recorded distance is plies-to-termination under
optimal play: winners minimize it, losers maximize it.

``minimax_oracle`` independently evaluates small instances by plain
depth-limited minimax over the move tree, deep enough that any forced win
must already have appeared; it shares no machinery with ``solve``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Callable, NamedTuple

import numpy as np
from scipy.sparse import csr_matrix

CAT = "Cat"
MOUSE = "Mouse"

CAT_TERMINAL = "CatTerminal"
MOUSE_TERMINAL = "MouseTerminal"
OPEN = "Open"


class Outcome(Enum):
    CAT_WIN = "CatWin"
    MOUSE_WIN = "MouseWin"
    DRAW = "Draw"


class SolverError(Exception):
    pass


class InvalidInstanceError(SolverError):
    pass


class TooLargeError(SolverError):
    pass


class PolicyIllegalMoveError(SolverError):
    pass


class GameState(NamedTuple):
    cat: str
    mouse: str
    turn: str


@dataclass(frozen=True, eq=False)
class Graph:
    """A bare arena graph for ad-hoc games (no roles, no layers)."""

    directed: bool
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self):
        known = set(self.nodes)
        for a, b in self.edges:
            if a not in known or b not in known:
                raise InvalidInstanceError(f"edge ({a!r}, {b!r}) uses unknown node")

    @cached_property
    def _adjacency(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {n: [] for n in self.nodes}
        for a, b in self.edges:
            out[a].append(b)
            if not self.directed and a != b:
                out[b].append(a)
        return {n: tuple(vs) for n, vs in out.items()}

    def neighbors_out(self, node: str) -> tuple[str, ...]:
        return self._adjacency[node]

    def has_node(self, node: str) -> bool:
        return node in self._adjacency


@dataclass(frozen=True, eq=False)
class GameInstance:
    """An arena plus starting placement and hole.

    The start must be live: the players begin on distinct nodes and the Mouse
    does not begin on the hole, so no win condition holds before the first
    move.
    """

    graph: object
    cat_start: str
    mouse_start: str
    hole: str

    def __post_init__(self):
        for node in (self.cat_start, self.mouse_start, self.hole):
            if not self.graph.has_node(node):
                raise InvalidInstanceError(f"unknown node {node!r}")
        if self.cat_start == self.mouse_start:
            raise InvalidInstanceError("players cannot start on the same node")
        if self.mouse_start == self.hole:
            raise InvalidInstanceError("the Mouse cannot start on the hole")

    @classmethod
    def from_game_graph(cls, graph) -> "GameInstance":
        return cls(graph, graph.c, graph.m, graph.h)

    def initial_state(self) -> GameState:
        return GameState(self.cat_start, self.mouse_start, CAT)


def classify(state: GameState, instance: GameInstance) -> str:
    """Terminal status of a state; capture takes precedence at the hole."""
    if state.cat == state.mouse:
        return CAT_TERMINAL
    if state.mouse == instance.hole:
        return MOUSE_TERMINAL
    return OPEN


_CATWIN = 1
_MOUSEWIN = 2


class Solution:
    """Value, optimal-play distance and best moves for every state."""

    def __init__(self, instance, ids, val_c, val_m, dist_c, dist_m):
        self.instance = instance
        self._ids = ids
        self._index = {v: i for i, v in enumerate(ids)}
        self._val = {CAT: val_c, MOUSE: val_m}
        self._dist = {CAT: dist_c, MOUSE: dist_m}

    def _locate(self, state: GameState) -> tuple[np.ndarray, np.ndarray, int, int]:
        if state.turn not in (CAT, MOUSE):
            raise InvalidInstanceError(f"bad turn {state.turn!r}")
        try:
            ci = self._index[state.cat]
            mi = self._index[state.mouse]
        except KeyError as missing:
            raise InvalidInstanceError(f"unknown node {missing}") from None
        return self._val[state.turn], self._dist[state.turn], ci, mi

    def value(self, state: GameState) -> Outcome:
        val, _dist, ci, mi = self._locate(state)
        code = val[ci, mi]
        if code == _CATWIN:
            return Outcome.CAT_WIN
        if code == _MOUSEWIN:
            return Outcome.MOUSE_WIN
        return Outcome.DRAW

    def dist(self, state: GameState) -> int | None:
        """Plies to termination under optimal play; None for draws."""
        _val, dist, ci, mi = self._locate(state)
        plies = int(dist[ci, mi])
        return None if plies < 0 else plies

    def outcome(self) -> Outcome:
        return self.value(self.instance.initial_state())

    def _successors(self, state: GameState) -> list[tuple[str, GameState]]:
        if state.turn == CAT:
            return [(v, GameState(v, state.mouse, MOUSE))
                    for v in self.instance.graph.neighbors_out(state.cat)]
        return [(v, GameState(state.cat, v, CAT))
                for v in self.instance.graph.neighbors_out(state.mouse)]

    def best_move(self, state: GameState) -> str | None:
        """The optimal move for the player to play in a decided open state.

        The winner picks the smallest-distance winning successor, the loser
        the largest-distance one; remaining ties fall to the smaller node id.
        Returns None on terminal states, draws and stuck states.
        """
        if classify(state, self.instance) != OPEN:
            return None
        value = self.value(state)
        if value is Outcome.DRAW:
            return None
        successors = self._successors(state)
        if not successors:
            return None
        mover_wins = (value is Outcome.CAT_WIN) == (state.turn == CAT)
        best: tuple | None = None
        for move, nxt in successors:
            if self.value(nxt) is not value:
                continue
            plies = self.dist(nxt)
            key = (plies, move) if mover_wins else (-plies, move)
            if best is None or key < best[0]:
                best = (key, move)
        return None if best is None else best[1]

    def _draw_move(self, state: GameState) -> str | None:
        opponent_win = Outcome.CAT_WIN if state.turn == MOUSE else Outcome.MOUSE_WIN
        candidates = sorted(
            move for move, nxt in self._successors(state)
            if self.value(nxt) is not opponent_win
        )
        return candidates[0] if candidates else None

    def policy(self) -> Callable[[GameState], str | None]:
        """An optimal policy: follows best moves, preserves draws."""

        def choose(state: GameState) -> str | None:
            if classify(state, self.instance) != OPEN:
                return None
            if self.value(state) is Outcome.DRAW:
                return self._draw_move(state)
            return self.best_move(state)

        return choose


def solve(instance: GameInstance) -> Solution:
    """Retrograde analysis of the full (cat, mouse, turn) state space."""
    graph = instance.graph
    ids = tuple(graph.nodes)
    index = {v: i for i, v in enumerate(ids)}
    n = len(ids)
    rows: list[int] = []
    cols: list[int] = []
    for u in ids:
        ui = index[u]
        for v in graph.neighbors_out(u):
            rows.append(ui)
            cols.append(index[v])
    adj = csr_matrix(
        (np.ones(len(rows), dtype=np.float32), (rows, cols)), shape=(n, n)
    )
    out_deg = np.diff(adj.indptr)
    hole = index[instance.hole]

    val_c = np.zeros((n, n), dtype=np.int8)
    val_m = np.zeros((n, n), dtype=np.int8)
    dist_c = np.full((n, n), -1, dtype=np.int32)
    dist_m = np.full((n, n), -1, dtype=np.int32)

    diag = np.eye(n, dtype=bool)
    at_hole = np.zeros((n, n), dtype=bool)
    at_hole[:, hole] = True
    at_hole &= ~diag
    for val, dist in ((val_c, dist_c), (val_m, dist_m)):
        val[diag] = _CATWIN
        val[at_hole] = _MOUSEWIN
        dist[diag | at_hole] = 0
    # A player to move with no way out loses on the spot.
    cat_stuck = (out_deg == 0)[:, None] & (val_c == 0)
    val_c[cat_stuck] = _MOUSEWIN
    dist_c[cat_stuck] = 0
    mouse_stuck = (out_deg == 0)[None, :] & (val_m == 0)
    val_m[mouse_stuck] = _CATWIN
    dist_m[mouse_stuck] = 0

    cw_m = (val_m == _CATWIN).astype(np.float32)
    mw_m = (val_m == _MOUSEWIN).astype(np.float32)
    cw_c = (val_c == _CATWIN).astype(np.float32)
    mw_c = (val_c == _MOUSEWIN).astype(np.float32)

    plies = 0
    limit = 2 * n * n + 4
    while True:
        plies += 1
        if plies > limit:
            raise SolverError("attractor failed to converge")
        undecided_c = val_c == 0
        undecided_m = val_m == 0
        # Cat to move: wins by reaching a Cat-winning mouse-turn state, loses
        # once every move lands in a Mouse-winning one.
        new_cw_c = ((adj @ cw_m) > 0) & undecided_c
        new_mw_c = ((adj @ (1.0 - mw_m)) == 0) & undecided_c
        # Mouse to move: symmetric, walking the mouse coordinate.
        new_mw_m = ((adj @ mw_c.T).T > 0) & undecided_m
        new_cw_m = ((adj @ (1.0 - cw_c).T).T == 0) & undecided_m
        if not (new_cw_c.any() or new_mw_c.any()
                or new_cw_m.any() or new_mw_m.any()):
            break
        val_c[new_cw_c] = _CATWIN
        val_c[new_mw_c] = _MOUSEWIN
        val_m[new_cw_m] = _CATWIN
        val_m[new_mw_m] = _MOUSEWIN
        dist_c[new_cw_c | new_mw_c] = plies
        dist_m[new_cw_m | new_mw_m] = plies
        cw_c[new_cw_c] = 1.0
        mw_c[new_mw_c] = 1.0
        cw_m[new_cw_m] = 1.0
        mw_m[new_mw_m] = 1.0

    return Solution(instance, ids, val_c, val_m, dist_c, dist_m)


def outcome(instance: GameInstance) -> Outcome:
    """Value of the initial state (Cat to move from the starting placement)."""
    return solve(instance).outcome()


@dataclass(frozen=True)
class MatchTranscript:
    """A played-out game: the move list, how it ended, and why."""

    moves: tuple[tuple[int, str, str, str], ...]
    result: Outcome
    reason: str
    states: tuple[GameState, ...]
    gave_up: bool = False

    def text(self) -> str:
        lines = [f"ply {n} {player} {frm} -> {to}"
                 for n, player, frm, to in self.moves]
        lines.append(f"result {self.result.value} {self.reason}")
        return "\n".join(lines) + "\n"

    def mouse_moves(self) -> int:
        return sum(1 for _n, player, _f, _t in self.moves if player == MOUSE)


def play_match(
    instance: GameInstance,
    cat_policy: Callable[[GameState], str | None],
    mouse_policy: Callable[[GameState], str | None],
    max_plies: int | None = None,
    start: GameState | None = None,
) -> MatchTranscript:
    """Play the two policies against each other and score the result.

    Policies return the destination node or None to resign the move; a policy
    with no legal move loses.  Repetition of a (cat, mouse, turn) situation is
    an immediate draw.  ``max_plies`` defaults high enough that repetition
    always fires first.
    """
    graph = instance.graph
    if max_plies is None:
        max_plies = 2 * len(tuple(graph.nodes)) ** 2 + 2
    state = start if start is not None else instance.initial_state()
    seen: set[GameState] = set()
    moves: list[tuple[int, str, str, str]] = []
    states = [state]
    ply = 0
    gave_up = False
    while True:
        status = classify(state, instance)
        if status == CAT_TERMINAL:
            result, reason = Outcome.CAT_WIN, "capture"
            break
        if status == MOUSE_TERMINAL:
            result, reason = Outcome.MOUSE_WIN, "hole"
            break
        if state in seen:
            result, reason = Outcome.DRAW, "repetition"
            break
        seen.add(state)
        if ply >= max_plies:
            result, reason = Outcome.DRAW, "ply-limit"
            break
        mover = state.turn
        position = state.cat if mover == CAT else state.mouse
        legal = graph.neighbors_out(position)
        policy = cat_policy if mover == CAT else mouse_policy
        move = policy(state) if legal else None
        if move is None:
            gave_up = bool(legal)
            result = Outcome.MOUSE_WIN if mover == CAT else Outcome.CAT_WIN
            reason = "stuck"
            break
        if move not in legal:
            raise PolicyIllegalMoveError(
                f"{mover} played {position!r} -> {move!r}, which is not an edge"
            )
        ply += 1
        moves.append((ply, mover, position, move))
        if mover == CAT:
            state = GameState(move, state.mouse, MOUSE)
        else:
            state = GameState(state.cat, move, CAT)
        states.append(state)
    return MatchTranscript(
        moves=tuple(moves),
        result=result,
        reason=reason,
        states=tuple(states),
        gave_up=gave_up,
    )


_ORACLE_LIMIT = 10


def minimax_oracle(instance: GameInstance) -> Outcome:
    """Game value of the initial state by depth-limited minimax.

    A player who can force a win can force one within 2|V|^2 plies, because
    backward induction decides at least one of the 2|V|^2 states per ply
    level; lines still undecided at that horizon are draws, exactly matching
    the repetition rule.  Memoized on (state, remaining plies).  Limited to
    graphs of at most 10 nodes.
    """
    graph = instance.graph
    ids = tuple(graph.nodes)
    if len(ids) > _ORACLE_LIMIT:
        raise TooLargeError(f"{len(ids)} nodes; the oracle allows {_ORACLE_LIMIT}")
    horizon = 2 * len(ids) * len(ids) + 1
    memo: dict[tuple[GameState, int], Outcome] = {}

    def search(state: GameState, plies_left: int) -> Outcome:
        status = classify(state, instance)
        if status == CAT_TERMINAL:
            return Outcome.CAT_WIN
        if status == MOUSE_TERMINAL:
            return Outcome.MOUSE_WIN
        mover = state.turn
        position = state.cat if mover == CAT else state.mouse
        legal = graph.neighbors_out(position)
        if not legal:
            return Outcome.MOUSE_WIN if mover == CAT else Outcome.CAT_WIN
        if plies_left == 0:
            return Outcome.DRAW
        key = (state, plies_left)
        if key in memo:
            return memo[key]
        mover_win = Outcome.CAT_WIN if mover == CAT else Outcome.MOUSE_WIN
        best = Outcome.MOUSE_WIN if mover == CAT else Outcome.CAT_WIN
        for move in sorted(set(legal)):
            if mover == CAT:
                nxt = GameState(move, state.mouse, MOUSE)
            else:
                nxt = GameState(state.cat, move, CAT)
            value = search(nxt, plies_left - 1)
            if value is mover_win:
                best = value
                break
            if value is Outcome.DRAW:
                best = value
        memo[key] = best
        return best

    return search(instance.initial_state(), horizon)
