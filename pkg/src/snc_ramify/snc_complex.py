"""Dual complexes of simple normal crossing divisor arrangements.

A complex records which irreducible components of a divisor meet: vertices
are components, faces are the vertex sets with nonempty common intersection.
Blowing up the intersection of two components is modelled by the rewriting
rule in :func:`blow_up`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional

ORIGINAL = "original"
EXCEPTIONAL = "exceptional"

Face = frozenset


class SncError(ValueError):
    """Base class for malformed complexes and invalid operations on them."""


class EdgeNotAFaceError(SncError):
    pass


class NonDisjointSetsError(SncError):
    pass


class ArrangementFormatError(SncError):
    pass


@dataclass(frozen=True)
class Vertex:
    id: str
    kind: str = ORIGINAL
    # (i, j) for exceptional vertices: the blown-up edge, in the order given.
    provenance: Optional[tuple[str, str]] = None
    generation: int = 0

    @property
    def is_exceptional(self) -> bool:
        return self.kind == EXCEPTIONAL


@dataclass(frozen=True)
class SncComplex:
    """Explicit face set of an SNC dual complex in ambient dimension ``n``.

    ``faces`` is stored as given; :func:`validate` reports whether it is
    actually downward closed.  Use :meth:`from_facets` to build a complex from
    maximal faces only.
    """

    n: int
    vertices: tuple[Vertex, ...]
    faces: frozenset[frozenset[str]]

    @classmethod
    def from_facets(
        cls,
        n: int,
        vertices: Iterable[Vertex | str],
        facets: Iterable[Iterable[str]] = (),
    ) -> "SncComplex":
        verts = tuple(v if isinstance(v, Vertex) else Vertex(v) for v in vertices)
        faces: set[frozenset[str]] = {frozenset([v.id]) for v in verts}
        for facet in facets:
            faces |= _subfaces(frozenset(facet))
        return cls(n, verts, frozenset(faces))

    @cached_property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: k for k, v in enumerate(self.vertex_ids)}

    @cached_property
    def by_id(self) -> dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def edges(self) -> frozenset[frozenset[str]]:
        return frozenset(f for f in self.faces if len(f) == 2)

    @cached_property
    def neighbors(self) -> dict[str, frozenset[str]]:
        nbrs: dict[str, set[str]] = {v: set() for v in self.vertex_ids}
        for e in self.edges:
            a, b = tuple(e)
            nbrs.setdefault(a, set()).add(b)
            nbrs.setdefault(b, set()).add(a)
        return {v: frozenset(s) for v, s in nbrs.items()}

    @cached_property
    def maximal_faces(self) -> frozenset[frozenset[str]]:
        by_size = sorted(self.faces, key=len, reverse=True)
        maximal: list[frozenset[str]] = []
        for f in by_size:
            if not any(f < g for g in maximal):
                maximal.append(f)
        return frozenset(maximal)

    def sort_key(self, face: Iterable[str]) -> tuple[int, ...]:
        """Lexicographic key of a face by vertex creation order."""
        return tuple(sorted(self.index[v] for v in face))

    def ordered(self, vs: Iterable[str]) -> list[str]:
        return sorted(vs, key=self.index.__getitem__)

    def sorted_faces(self) -> list[frozenset[str]]:
        """Faces by size, then lexicographically by vertex order."""
        return sorted(self.faces, key=lambda f: (len(f), self.sort_key(f)))

    def same_as(self, other: "SncComplex") -> bool:
        """Equality up to vertex order."""
        return (
            self.n == other.n
            and set(self.vertices) == set(other.vertices)
            and self.faces == other.faces
        )


def _subfaces(face: frozenset[str]) -> set[frozenset[str]]:
    items = tuple(face)
    return {
        frozenset(c)
        for k in range(1, len(items) + 1)
        for c in combinations(items, k)
    }


def validate(c: SncComplex) -> list[str]:
    """Return a list of violated invariants; empty when ``c`` is valid."""
    report: list[str] = []
    if c.n < 1:
        report.append(f"dimension must be positive, got {c.n}")
    seen: set[str] = set()
    for v in c.vertices:
        if v.id in seen:
            report.append(f"duplicate vertex id {v.id!r}")
        seen.add(v.id)
    for v in c.vertices:
        if v.is_exceptional:
            if v.provenance is None:
                report.append(f"exceptional vertex {v.id!r} lacks provenance")
            else:
                for p in v.provenance:
                    if p not in seen:
                        report.append(
                            f"exceptional vertex {v.id!r} refers to unknown vertex {p!r}"
                        )
    for v in c.vertex_ids:
        if frozenset([v]) not in c.faces:
            report.append(f"vertex {v!r} is not a face")
    for f in sorted(c.faces, key=lambda f: (len(f), sorted(f))):
        label = "{" + ",".join(sorted(f)) + "}"
        if not f:
            report.append("empty face")
            continue
        unknown = sorted(f - seen)
        if unknown:
            report.append(f"face {label} uses undeclared vertices {unknown}")
        if len(f) > c.n:
            report.append(f"face {label}: face size exceeds n ({len(f)} > {c.n})")
        if len(f) > 1:
            for g in combinations(sorted(f), len(f) - 1):
                if frozenset(g) not in c.faces:
                    report.append(
                        f"face {label} is not downward closed (missing {{{','.join(g)}}})"
                    )
                    break
    return report


def _fresh_id(c: SncComplex, taken: set[str]) -> str:
    k = sum(1 for v in c.vertices if v.is_exceptional) + 1
    while f"e{k}" in taken:
        k += 1
    return f"e{k}"


def blow_up(
    c: SncComplex, edge: Iterable[str], new_id: str | None = None
) -> tuple[SncComplex, str]:
    """Blow up the intersection of two components.

    Every face T containing both endpoints i, j is replaced by
    ``(T - {i}) | {e}`` and ``(T - {j}) | {e}`` together with their
    subfaces; all other faces are kept.  Face sizes never grow.
    """
    pair = tuple(edge)
    if len(pair) != 2:
        raise EdgeNotAFaceError(f"an edge needs exactly two vertices, got {pair}")
    i, j = pair
    ij = frozenset(pair)
    if len(ij) != 2 or ij not in c.faces:
        raise EdgeNotAFaceError(f"{{{i},{j}}} is not a face of the complex")
    taken = set(c.vertex_ids)
    e = new_id if new_id is not None else _fresh_id(c, taken)
    if e in taken:
        raise SncError(f"vertex id {e!r} already in use")
    parents = (c.by_id[i], c.by_id[j])
    vertex = Vertex(
        e,
        EXCEPTIONAL,
        (i, j),
        1 + max(p.generation for p in parents),
    )
    faces: set[frozenset[str]] = set()
    for t in c.faces:
        if ij <= t:
            rest = t - ij
            faces.add(rest | {e, j})
            faces.add(rest | {e, i})
            faces.add(rest | {e})
        else:
            faces.add(t)
    return SncComplex(c.n, c.vertices + (vertex,), frozenset(faces)), e


def adjacency(
    c: SncComplex, a: Iterable[str], b: Iterable[str]
) -> set[frozenset[str]]:
    """The 2-faces with one endpoint in ``a`` and the other in ``b``."""
    a, b = set(a), set(b)
    if a & b:
        raise NonDisjointSetsError(f"sets overlap in {sorted(a & b)}")
    out: set[frozenset[str]] = set()
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    nbrs = c.neighbors
    for u in small:
        for w in nbrs.get(u, ()):
            if w in large:
                out.add(frozenset((u, w)))
    return out


# ---------------------------------------------------------------------------
# Text arrangement format
# ---------------------------------------------------------------------------


def parse_arrangement(
    text: str,
) -> tuple[SncComplex, dict[str, int]]:
    """Parse the line-oriented arrangement format.

    Recognised lines::

        dim <n>
        vertex <name> [exceptional <i> <j> <generation>]
        face <name> ... <name>
        color <name> <k>

    Only maximal faces need be listed.  Returns the complex and any colors
    given (empty dict when uncolored).
    """
    n: int | None = None
    vertices: list[Vertex] = []
    facets: list[list[str]] = []
    colors: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        try:
            if head == "dim":
                (value,) = args
                n = int(value)
            elif head == "vertex":
                if len(args) == 1:
                    vertices.append(Vertex(args[0]))
                elif len(args) == 5 and args[1] == EXCEPTIONAL:
                    name, _, i, j, gen = args
                    vertices.append(Vertex(name, EXCEPTIONAL, (i, j), int(gen)))
                else:
                    raise ValueError("bad vertex declaration")
            elif head == "face":
                if not args:
                    raise ValueError("empty face")
                facets.append(args)
            elif head == "color":
                name, k = args
                colors[name] = int(k)
            else:
                raise ValueError(f"unknown directive {head!r}")
        except ValueError as exc:
            raise ArrangementFormatError(f"line {lineno}: {exc}: {raw!r}") from None
    if n is None:
        raise ArrangementFormatError("missing 'dim' line")
    declared = {v.id for v in vertices}
    for facet in facets:
        for name in facet:
            if name not in declared:
                raise ArrangementFormatError(f"face uses undeclared vertex {name!r}")
    for name in colors:
        if name not in declared:
            raise ArrangementFormatError(f"color given for undeclared vertex {name!r}")
    return SncComplex.from_facets(n, vertices, facets), colors


def format_arrangement(c: SncComplex, colors: dict[str, int] | None = None) -> str:
    lines = [f"dim {c.n}"]
    for v in c.vertices:
        if v.is_exceptional:
            i, j = v.provenance
            lines.append(f"vertex {v.id} {EXCEPTIONAL} {i} {j} {v.generation}")
        else:
            lines.append(f"vertex {v.id}")
    for f in sorted(c.maximal_faces, key=lambda f: (-len(f), c.sort_key(f))):
        if len(f) > 1:
            lines.append("face " + " ".join(c.ordered(f)))
    if colors:
        for v in c.vertex_ids:
            if v in colors:
                lines.append(f"color {v} {colors[v]}")
    return "\n".join(lines) + "\n"
