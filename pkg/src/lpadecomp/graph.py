"""Finite directed multigraphs whose parallel edges are stored as counted bundles.

A bundle ``(source, target) -> multiplicity`` stands for that many parallel
edges; the multiplicity is a positive ``int`` or :data:`OMEGA` (countably many).
"""

from __future__ import annotations

import enum
import functools
import json
from collections import deque
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

import networkx as nx

from .errors import GraphError, LimitExceeded, ParseError

CANONICAL_LIMIT = 12


@functools.total_ordering
class _Omega:
    """The infinite multiplicity. Greater than every int and absorbing under ``+``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "OMEGA"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("lpadecomp.OMEGA")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __reduce__(self):
        return (_Omega, ())


OMEGA = _Omega()


def add_mult(a, b):
    """Sum of two multiplicities (0 allowed); OMEGA absorbs."""
    if a is OMEGA or b is OMEGA:
        return OMEGA
    return a + b


def parse_multiplicity(token: str) -> int | _Omega:
    if token == "inf":
        return OMEGA
    if not token.isdigit():
        raise GraphError(f"multiplicity must be a positive integer or 'inf', got {token!r}")
    value = int(token)
    if value < 1:
        raise GraphError("multiplicity must be at least 1")
    return value


class EdgeBundle(NamedTuple):
    source: str
    target: str
    mult: object  # int >= 1 or OMEGA


class VertexKind(enum.Enum):
    SINK = "sink"
    REGULAR = "regular"
    INFINITE_EMITTER = "infinite_emitter"


def _check_mult(mult):
    if mult is OMEGA:
        return mult
    if isinstance(mult, bool) or not isinstance(mult, int):
        raise GraphError(f"multiplicity must be a positive int or OMEGA, got {mult!r}")
    if mult < 1:
        raise GraphError(f"multiplicity must be at least 1, got {mult}")
    return mult


class Graph:
    """Immutable finite multigraph.

    Vertices keep their declaration order. Bundles are kept in the order of
    (source position, target position).
    """

    __slots__ = ("_vertices", "_position", "_bundles", "_out", "_in", "_cache")

    def __init__(self, vertices: Iterable[str], bundles: Iterable = ()):
        verts = tuple(vertices)
        position = {}
        for name in verts:
            if not isinstance(name, str) or not name or any(c.isspace() for c in name):
                raise GraphError(f"invalid vertex name {name!r}")
            if name in position:
                raise GraphError(f"duplicate vertex {name!r}")
            position[name] = len(position)
        table = {}
        for b in bundles:
            src, dst, mult = b
            for end in (src, dst):
                if end not in position:
                    raise GraphError(f"bundle {src}->{dst} references undeclared vertex {end!r}")
            if (src, dst) in table:
                raise GraphError(f"duplicate bundle {src}->{dst}")
            table[(src, dst)] = _check_mult(mult)
        order = sorted(table, key=lambda k: (position[k[0]], position[k[1]]))
        self._vertices = verts
        self._position = position
        self._bundles = {k: table[k] for k in order}
        self._out = {v: {} for v in verts}
        self._in = {v: {} for v in verts}
        for (s, t), m in self._bundles.items():
            self._out[s][t] = m
            self._in[t][s] = m
        self._cache = {}

    # -- basic access -------------------------------------------------------

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def bundles(self) -> Mapping[tuple[str, str], object]:
        return dict(self._bundles)

    def edge_bundles(self) -> list[EdgeBundle]:
        return [EdgeBundle(s, t, m) for (s, t), m in self._bundles.items()]

    def __len__(self):
        return len(self._vertices)

    def __contains__(self, name):
        return name in self._position

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vertices == other._vertices and self._bundles == other._bundles

    def __hash__(self):
        return hash((self._vertices, frozenset(self._bundles.items())))

    def __repr__(self):
        edges = ", ".join(f"{s}->{t}({m})" for (s, t), m in self._bundles.items())
        return f"Graph([{', '.join(self._vertices)}]; {edges})"

    def _require(self, *names):
        for name in names:
            if name not in self._position:
                raise GraphError(f"unknown vertex {name!r}")

    def multiplicity(self, source: str, target: str):
        """Multiplicity of the bundle source->target, 0 if absent."""
        self._require(source, target)
        return self._out[source].get(target, 0)

    def out_bundles(self, v: str) -> dict:
        self._require(v)
        return dict(self._out[v])

    def in_bundles(self, v: str) -> dict:
        self._require(v)
        return dict(self._in[v])

    def out_degree(self, v: str):
        self._require(v)
        total = 0
        for m in self._out[v].values():
            total = add_mult(total, m)
        return total

    def vertex_kind(self, v: str) -> VertexKind:
        degree = self.out_degree(v)
        if degree == 0:
            return VertexKind.SINK
        if degree is OMEGA:
            return VertexKind.INFINITE_EMITTER
        return VertexKind.REGULAR

    def sinks(self) -> list[str]:
        return [v for v in self._vertices if not self._out[v]]

    def regular_vertices(self) -> list[str]:
        return [v for v in self._vertices if self.vertex_kind(v) is VertexKind.REGULAR]

    def infinite_emitters(self) -> list[str]:
        return [v for v in self._vertices if OMEGA in self._out[v].values()]

    def has_omega(self) -> bool:
        return any(m is OMEGA for m in self._bundles.values())

    # -- reachability -------------------------------------------------------

    def reachable_from(self, v: str) -> set[str]:
        """All w with v >= w (v itself included)."""
        self._require(v)
        seen = {v}
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for t in self._out[u]:
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        return seen

    def reaches(self, v: str, w: str) -> bool:
        self._require(v, w)
        return w in self.reachable_from(v)

    def restricted_subgraph(self, keep: Iterable[str]) -> Graph:
        keep = set(keep)
        self._require(*sorted(keep))
        verts = [v for v in self._vertices if v in keep]
        return Graph(verts, [(s, t, m) for (s, t), m in self._bundles.items()
                             if s in keep and t in keep])

    # -- kernel interface ---------------------------------------------------

    @property
    def sorted_names(self) -> tuple[str, ...]:
        """Vertex names in sorted order; bit i of a vertex mask is ``sorted_names[i]``."""
        try:
            return self._cache["sorted"]
        except KeyError:
            names = tuple(sorted(self._vertices))
            self._cache["sorted"] = names
            self._cache["bit"] = {v: i for i, v in enumerate(names)}
            return names

    def packed(self) -> tuple[int, tuple[int, ...]]:
        """``(n, flat)`` multiplicity matrix in sorted-name order; 0 = none, -1 = OMEGA."""
        try:
            return self._cache["packed"]
        except KeyError:
            pass
        names = self.sorted_names
        bit = self._cache["bit"]
        n = len(names)
        flat = [0] * (n * n)
        for (s, t), m in self._bundles.items():
            flat[bit[s] * n + bit[t]] = -1 if m is OMEGA else m
        packed = (n, tuple(flat))
        self._cache["packed"] = packed
        return packed

    def mask(self, names: Iterable[str]) -> int:
        self.sorted_names
        bit = self._cache["bit"]
        out = 0
        for name in names:
            if name not in bit:
                raise GraphError(f"unknown vertex {name!r}")
            out |= 1 << bit[name]
        return out

    def names(self, mask: int) -> tuple[str, ...]:
        names = self.sorted_names
        return tuple(names[i] for i in range(len(names)) if mask >> i & 1)

    @property
    def full_mask(self) -> int:
        return (1 << len(self._vertices)) - 1

    def to_networkx(self) -> nx.DiGraph:
        dg = nx.DiGraph()
        dg.add_nodes_from(self._vertices)
        for (s, t), m in self._bundles.items():
            dg.add_edge(s, t, mult=m)
        return dg


def build_graph(vertex_names: Iterable[str], bundles: Iterable = ()) -> Graph:
    return Graph(vertex_names, bundles)


def vertex_kind(g: Graph, v: str) -> VertexKind:
    return g.vertex_kind(v)


def reaches(g: Graph, v: str, w: str) -> bool:
    return g.reaches(v, w)


def restricted_subgraph(g: Graph, keep: Iterable[str]) -> Graph:
    return g.restricted_subgraph(keep)


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    clash = set(g1.vertices) & set(g2.vertices)
    if clash:
        raise GraphError(f"vertex names collide: {sorted(clash)}")
    return Graph(g1.vertices + g2.vertices, g1.edge_bundles() + g2.edge_bundles())


def relabel(g: Graph, mapping: Mapping[str, str]) -> Graph:
    """Rename vertices; names missing from ``mapping`` are kept."""
    rename = lambda v: mapping.get(v, v)  # noqa: E731
    return Graph([rename(v) for v in g.vertices],
                 [(rename(s), rename(t), m) for s, t, m in g.edge_bundles()])


# -- cycles -----------------------------------------------------------------

def find_cycles(g: Graph) -> list[tuple[str, ...]]:
    """Elementary cycles as vertex sequences, each rotated to start at its first-declared vertex."""
    pos = {v: i for i, v in enumerate(g.vertices)}
    cycles = []
    for cyc in nx.simple_cycles(g.to_networkx()):
        k = min(range(len(cyc)), key=lambda i: pos[cyc[i]])
        cycles.append(tuple(cyc[k:] + cyc[:k]))
    cycles.sort(key=lambda c: (len(c), [pos[v] for v in c]))
    return cycles


def has_exit(g: Graph, cycle: Iterable[str]) -> bool:
    """True iff some vertex on the cycle emits an edge that is not the cycle's own edge."""
    cycle = tuple(cycle)
    for i, v in enumerate(cycle):
        nxt = cycle[(i + 1) % len(cycle)]
        if g.multiplicity(v, nxt) == 0:
            raise GraphError(f"{cycle} is not a cycle of the graph")
        if g.out_degree(v) is OMEGA or g.out_degree(v) > 1:
            return True
    return False


def is_acyclic(g: Graph) -> bool:
    return nx.is_directed_acyclic_graph(g.to_networkx())


# -- canonical labeling -----------------------------------------------------

def _label(m):
    # sort key for a matrix cell; OMEGA sorts above every finite count
    return (1, 0) if m is OMEGA else (0, m)


def canonical_form(g: Graph, limit: int = CANONICAL_LIMIT) -> bytes:
    """Isomorphism-invariant code of a multiplicity-labelled multigraph.

    Colour refinement orders the vertices into cells; a backtracking search
    over orderings consistent with the cells keeps the lexicographically
    smallest adjacency sequence. Interchangeable vertices (identical rows and
    columns) are only tried once per position.
    """
    n = len(g)
    if n > limit:
        raise LimitExceeded(f"canonical_form supports at most {limit} vertices, got {n}")
    verts = list(g.vertices)
    idx = {v: i for i, v in enumerate(verts)}
    A = [[_label(0)] * n for _ in range(n)]
    for (s, t), m in g.bundles.items():
        A[idx[s]][idx[t]] = _label(m)

    colour = [0] * n
    while True:
        sig = [(colour[i], A[i][i],
                tuple(sorted((A[i][j], colour[j]) for j in range(n) if j != i)),
                tuple(sorted((A[j][i], colour[j]) for j in range(n) if j != i)))
               for i in range(n)]
        ranks = {s: r for r, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if len(set(new)) == len(set(colour)):
            colour = new
            break
        colour = new

    def twins(u, v):
        if A[u][u] != A[v][v] or A[u][v] != A[v][u]:
            return False
        return all(A[u][w] == A[v][w] and A[w][u] == A[w][v]
                   for w in range(n) if w != u and w != v)

    cells = sorted(range(n), key=lambda i: colour[i])
    slots = [colour[i] for i in cells]  # colour required at each position
    best: list | None = None
    order: list[int] = []
    used = [False] * n

    def extend(seq):
        nonlocal best
        k = len(order)
        if k == n:
            if best is None or seq < best:
                best = list(seq)
            return
        tried = []
        for v in range(n):
            if used[v] or colour[v] != slots[k]:
                continue
            if any(twins(v, t) for t in tried):
                continue
            tried.append(v)
            add = [A[v][v]]
            for u in order:
                add.append(A[u][v])
                add.append(A[v][u])
            new_seq = seq + add
            if best is not None and new_seq > best[:len(new_seq)]:
                continue
            order.append(v)
            used[v] = True
            extend(new_seq)
            order.pop()
            used[v] = False

    extend([])
    body = ",".join("w" if c == (1, 0) else str(c[1]) for c in (best or []))
    return f"{n}|{body}".encode() if n else b"0|"


# -- text format ------------------------------------------------------------

def parse_graph(text: str) -> Graph:
    """Parse the line-oriented graph format (``vertex <name>``, ``edge <src> <dst> <mult>``)."""
    vertices: list[str] = []
    declared: dict[str, int] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "vertex":
            if len(parts) != 2:
                raise ParseError("expected 'vertex <name>'", lineno)
            if parts[1] in declared:
                raise ParseError(f"duplicate vertex {parts[1]!r}", lineno)
            declared[parts[1]] = lineno
            vertices.append(parts[1])
        elif parts[0] == "edge":
            if len(parts) != 4:
                raise ParseError("expected 'edge <src> <dst> <mult>'", lineno)
            try:
                mult = parse_multiplicity(parts[3])
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            edges.append((lineno, parts[1], parts[2], mult))
        else:
            raise ParseError(f"unknown directive {parts[0]!r}", lineno)
    seen = set()
    for lineno, s, t, _ in edges:
        for end in (s, t):
            if end not in declared:
                raise ParseError(f"undeclared vertex {end!r}", lineno)
        if (s, t) in seen:
            raise ParseError(f"duplicate bundle {s}->{t}", lineno)
        seen.add((s, t))
    try:
        return Graph(vertices, [(s, t, m) for _, s, t, m in edges])
    except GraphError as exc:
        raise ParseError(str(exc)) from None


def read_graph(path) -> Graph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError:
        raise ParseError(f"{path} is not valid UTF-8") from None
    return parse_graph(text)


def format_graph(g: Graph) -> str:
    lines = [f"vertex {v}" for v in g.vertices]
    lines += [f"edge {s} {t} {m}" for s, t, m in g.edge_bundles()]
    return "\n".join(lines) + "\n"


def graph_to_json(g: Graph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [[s, t, "inf" if m is OMEGA else m] for s, t, m in g.edge_bundles()],
    }


def graph_from_json(data: dict) -> Graph:
    return Graph(data["vertices"],
                 [(s, t, OMEGA if m == "inf" else m) for s, t, m in data["edges"]])


def to_dot(g: Graph, name: str = "G") -> str:
    lines = [f"digraph {json.dumps(name)} {{"]
    lines += [f"  {json.dumps(v)};" for v in g.vertices]
    for s, t, m in g.edge_bundles():
        label = "" if m == 1 else f' [label="({"∞" if m is OMEGA else m})"]'
        lines.append(f"  {json.dumps(s)} -> {json.dumps(t)}{label};")
    lines.append("}")
    return "\n".join(lines) + "\n"
