"""Make a dual complex n-colorable by edge blow-ups, and color it.

For n = 2 the dual complex is a graph and subdividing edges removes odd
cycles.  For n >= 3 vertices are inserted one at a time; when a new vertex
sees every color class, groups of edges are blown up (steps 1, 2, 4) until
the classes and the new exceptional groups can be merged into n colors.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

from .snc_complex import SncComplex, SncError, adjacency, blow_up, validate

STEP_LABELS = ("dim2", "step1", "step2", "step4")


class ColoringError(SncError):
    pass


class DimensionError(ColoringError):
    pass


class ImpossibleColoringError(ColoringError):
    pass


class InvariantViolation(AssertionError):
    """A step invariant failed; this means the combinatorial model is wrong."""


class PropernessViolation(InvariantViolation):
    pass


@dataclass(frozen=True)
class ColoredComplex:
    complex: SncComplex
    color: Mapping[str, int]

    def classes(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {k: [] for k in range(1, self.complex.n + 1)}
        for v in self.complex.vertex_ids:
            if v in self.color:
                out.setdefault(self.color[v], []).append(v)
        return out

    @property
    def is_total(self) -> bool:
        return all(v in self.color for v in self.complex.vertex_ids)


@dataclass(frozen=True)
class BlowUpRecord:
    edge: tuple[str, str]
    exceptional: str
    step: str


BlowUpLog = list[BlowUpRecord]


@dataclass
class StepAudit:
    """Tally of invariant checks run during insertion steps."""

    checks: Counter = field(default_factory=Counter)
    failures: list[str] = field(default_factory=list)
    insertions: int = 0
    outcomes: Counter = field(default_factory=Counter)
    # per blow-up insertion: the final complex and the F / E groups used
    trace: list[dict] = field(default_factory=list)
    keep_trace: bool = False

    def require(self, ok: bool, name: str, detail: str = "") -> None:
        self.checks[name] += 1
        if not ok:
            self.failures.append(f"{name}: {detail}")
            raise InvariantViolation(f"{name}: {detail}")


def replay(c: SncComplex, log: Iterable[BlowUpRecord]) -> SncComplex:
    for rec in log:
        c, _ = blow_up(c, rec.edge, new_id=rec.exceptional)
    return c


def monochromatic_edges(c: SncComplex, color: Mapping[str, int]) -> list[frozenset[str]]:
    return [
        e
        for e in c.edges
        if all(u in color for u in e) and len({color[u] for u in e}) == 1
    ]


def check_proper(cc: ColoredComplex) -> bool:
    """True iff the coloring is total, uses colors 1..n and no edge is monochromatic."""
    n = cc.complex.n
    if not cc.is_total:
        return False
    if any(not 1 <= cc.color[v] <= n for v in cc.complex.vertex_ids):
        return False
    return not monochromatic_edges(cc.complex, cc.color)


def _independent(c: SncComplex, group: Iterable[str]) -> bool:
    s = set(group)
    nbrs = c.neighbors
    return all(not (nbrs[u] & s) for u in s)


def _no_face_meets_all(c: SncComplex, groups: Sequence[Iterable[str]]) -> bool:
    sets = [set(g) for g in groups]
    if any(not s for s in sets):
        return True
    k = len(sets)
    for f in c.faces:
        if len(f) >= k and all(f & s for s in sets):
            return False
    return True


# ---------------------------------------------------------------------------
# n = 2
# ---------------------------------------------------------------------------


def _bfs_two_color(c: SncComplex) -> dict[str, int] | None:
    color: dict[str, int] = {}
    nbrs = c.neighbors
    for root in c.vertex_ids:
        if root in color:
            continue
        color[root] = 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in c.ordered(nbrs[u]):
                if w not in color:
                    color[w] = 3 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return None
    return color


def _components(c: SncComplex) -> list[list[str]]:
    seen: set[str] = set()
    comps = []
    for root in c.vertex_ids:
        if root in seen:
            continue
        comp, stack = [], [root]
        seen.add(root)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in c.neighbors[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def color_dim2(c: SncComplex, mode: str = "double") -> tuple[ColoredComplex, BlowUpLog]:
    """Two-color a surface arrangement after subdividing edges.

    Already bipartite graphs are left alone.  Otherwise ``mode="double"``
    subdivides every edge once, doubling every cycle length;
    ``mode="odd-components"`` only subdivides edges of the connected
    components that contain an odd cycle.
    """
    if c.n != 2:
        raise DimensionError(f"color_dim2 needs n=2, got n={c.n}")
    if mode not in ("double", "odd-components"):
        raise ValueError(f"unknown mode {mode!r}")
    log: BlowUpLog = []
    if _bfs_two_color(c) is None:
        if mode == "double":
            targets = list(c.edges)
        else:
            targets = []
            for comp in _components(c):
                sub = set(comp)
                sub_c = SncComplex(
                    2,
                    tuple(v for v in c.vertices if v.id in sub),
                    frozenset(f for f in c.faces if f <= sub),
                )
                if _bfs_two_color(sub_c) is None:
                    targets.extend(e for e in c.edges if e <= sub)
        for e in sorted(targets, key=c.sort_key):
            edge = tuple(c.ordered(e))
            c, new = blow_up(c, edge)
            log.append(BlowUpRecord(edge, new, "dim2"))
    color = _bfs_two_color(c)
    if color is None:
        raise PropernessViolation("odd cycle survived edge subdivision")
    return ColoredComplex(c, color), log


# ---------------------------------------------------------------------------
# n >= 3
# ---------------------------------------------------------------------------


def _assign(
    c: SncComplex,
    color: dict[str, int],
    groups: Mapping[int, Sequence[Sequence[str]]],
    audit: StepAudit,
) -> None:
    """Give each color the union of its groups after checking they may share it."""
    for k, parts in groups.items():
        for p in parts:
            audit.require(_independent(c, p), "group independent", f"color {k}")
        for p, q in combinations(parts, 2):
            if p and q:
                clash = adjacency(c, p, q)
                audit.require(
                    not clash,
                    "monochromatic-pair safety",
                    f"color {k}: {sorted(map(sorted, clash))}",
                )
        for p in parts:
            for u in p:
                color[u] = k


def insert_vertex_step(
    state: ColoredComplex, v: str, audit: StepAudit | None = None
) -> tuple[ColoredComplex, BlowUpLog]:
    """Extend a proper coloring of every vertex but ``v`` to one including ``v``.

    Vertices of the complex that are neither colored nor ``v`` are ignored
    (they are inserted later).  Raises :class:`InvariantViolation` if any of
    the emptiness claims behind the algorithm fails.
    """
    audit = audit if audit is not None else StepAudit()
    c = state.complex
    n = c.n
    if n < 3:
        raise DimensionError(f"insert_vertex_step needs n>=3, got n={n}")
    if v in state.color:
        raise ColoringError(f"vertex {v!r} is already colored")
    if v not in c.index:
        raise ColoringError(f"unknown vertex {v!r}")
    if monochromatic_edges(c, state.color):
        raise ColoringError("input coloring is not proper")
    audit.insertions += 1
    color = dict(state.color)
    classes = state.classes()
    nbrs_v = c.neighbors[v]

    # (0) a class that v does not meet
    for k in range(1, n + 1):
        if not nbrs_v & set(classes[k]):
            color[v] = k
            audit.outcomes["free class"] += 1
            return ColoredComplex(c, color), []

    # (0') two classes with no edges between them can share a color
    pair_adj: dict[tuple[int, int], bool] = {}
    for a, b in combinations(range(1, n + 1), 2):
        pair_adj[a, b] = bool(adjacency(c, classes[a], classes[b]))
    for (a, b), adj in pair_adj.items():
        if not adj:
            for u in classes[b]:
                color[u] = a
            color[v] = b
            audit.outcomes["merged classes"] += 1
            return ColoredComplex(c, color), []

    # (1) label classes so that F_2, F_3 meet
    for perm in permutations(range(1, n + 1)):
        a, b = sorted((perm[1], perm[2]))
        if pair_adj[a, b]:
            break
    F = [None] + [list(classes[k]) for k in perm]
    log: BlowUpLog = []

    def blow_group(edges: Iterable[tuple[str, str]], step: str) -> list[str]:
        nonlocal c
        made = []
        for edge in edges:
            c, e = blow_up(c, edge)
            log.append(BlowUpRecord(edge, e, step))
            made.append(e)
        return made

    def edges_between(A: Sequence[str], B: Sequence[str]) -> list[tuple[str, str]]:
        bset = set(B)
        return [(a, b) for a in c.ordered(A) for b in c.ordered(c.neighbors[a] & bset)]

    E: dict[int, list[str]] = {}
    E[1] = blow_group(edges_between(F[1], [v]), "step1")
    audit.require(not adjacency(c, F[1], [v]), "step1: F1-v edges gone")
    audit.require(_independent(c, E[1]), "step1: E1 independent")
    audit.require(
        _no_face_meets_all(c, [E[1], *F[2:]]), "step1: E1^F2^...^Fn empty"
    )

    E[2] = blow_group(edges_between(F[2], F[3]), "step2")
    audit.require(not adjacency(c, F[2], F[3]), "step2: F2-F3 edges gone")
    audit.require(_independent(c, E[2]), "step2: E2 independent")
    audit.require(
        _no_face_meets_all(c, [E[2], E[1], *F[4:]]), "step2: E2^E1^F4^...^Fn empty"
    )

    if n == 3:
        groups = {1: [F[1], [v]], 2: [E[1], E[2]], 3: [F[2], F[3]]}
        audit.outcomes["n=3 coloring"] += 1
    else:
        exit_at = None
        for i in range(3, n):
            edges = edges_between(E[i - 2], F[i + 1])
            if not edges:
                exit_at = i
                break
            E[i] = blow_group(edges, "step4")
            audit.require(
                not adjacency(c, E[i - 2], F[i + 1]), f"step4: E{i-2}-F{i+1} edges gone"
            )
            audit.require(_independent(c, E[i]), "step4: E_i independent")
            audit.require(
                _no_face_meets_all(c, [E[i], E[i - 1], *F[i + 2:]]),
                "step4: E_i^E_{i-1}^F_{i+2}^...^Fn empty",
            )
        groups = {1: [F[1], [v]], 2: [F[2], F[3]]}
        if exit_at is not None:
            i = exit_at
            for k in range(1, i - 1):
                groups[k + 2] = [E[k], F[k + 3]]
            groups[i + 1] = [E[i - 1]]
            for k in range(i + 2, n + 1):
                groups[k] = [F[k]]
            audit.outcomes["early exit"] += 1
        else:
            for k in range(1, n - 2):
                groups[k + 2] = [E[k], F[k + 3]]
            groups[n] = [E[n - 2], E[n - 1]]
            audit.outcomes["full loop"] += 1

    if audit.keep_trace:
        audit.trace.append({"v": v, "complex": c, "F": F[1:], "E": dict(E), "groups": groups})
    _assign(c, color, groups, audit)
    result = ColoredComplex(c, color)
    colored = set(state.color) | {v} | {rec.exceptional for rec in log}
    missing = colored - set(color)
    bad = monochromatic_edges(c, color)
    audit.require(not missing, "all groups colored", str(sorted(missing)))
    if bad:
        raise PropernessViolation(f"monochromatic edges {sorted(map(sorted, bad))}")
    return result, log


def color(
    c: SncComplex, audit: StepAudit | None = None, dim2_mode: str = "double"
) -> tuple[ColoredComplex, BlowUpLog]:
    """Blow up edges of ``c`` until it is properly n-colorable; return the coloring."""
    n = c.n
    if n == 1 and c.edges:
        raise ImpossibleColoringError("a curve arrangement with meeting components")
    problems = validate(c)
    if problems:
        raise ColoringError("invalid complex: " + "; ".join(problems))
    if n == 1:
        return ColoredComplex(c, {v: 1 for v in c.vertex_ids}), []
    if n == 2:
        return color_dim2(c, mode=dim2_mode)
    order = c.vertex_ids
    base = min(len(order), n)
    state = ColoredComplex(c, {v: k + 1 for k, v in enumerate(order[:base])})
    log: BlowUpLog = []
    for v in order[base:]:
        state, step_log = insert_vertex_step(state, v, audit)
        log.extend(step_log)
    if not check_proper(state):
        raise PropernessViolation("final coloring is not proper")
    return state, log


def to_dot(cc: ColoredComplex, name: str = "dual") -> str:
    """Graphviz rendering of the colored dual graph, deterministic."""
    palette = ["red", "green", "blue", "orange", "purple", "brown", "cyan", "gold"]
    c = cc.complex
    lines = [f"graph {name} {{"]
    for v in c.vertices:
        k = cc.color.get(v.id)
        fill = palette[(k - 1) % len(palette)] if k else "white"
        label = f"{v.id}\\ncolor={k if k else '-'}\\n{v.kind}"
        shape = "box" if v.is_exceptional else "ellipse"
        lines.append(
            f'  "{v.id}" [label="{label}", shape={shape}, style=filled, fillcolor={fill}];'
        )
    for e in sorted(c.edges, key=c.sort_key):
        a, b = c.ordered(e)
        lines.append(f'  "{a}" -- "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
