"""Finite metric trees with optional infinite leaf edges (their ends).

A topology is a finite tree with positive rational edge lengths; an edge may
instead be marked infinite, provided its far endpoint is a leaf — such an
edge is a ray and contributes one end to the boundary.  Points are locations
(edge index + rational offset from the edge's first endpoint); locations
sitting on a node normalize to one canonical form, so equality is structural.

The tree is immutable after validation and every query is pure: exact
distances, medians, arclength parameterization, the horofunction of each end
(normalized to vanish at the designated base node), and nearest-point
projection onto horoballs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainRangeError, InputError, ModelMismatchError, TopologyError
from .rationals import (
    INFINITE,
    format_length,
    format_rational,
    is_infinite,
    parse_length,
    parse_rational,
)


@dataclass(frozen=True)
class Location:
    """A point on an edge, ``offset`` measured from the edge's first endpoint."""

    edge: int
    offset: Fraction


def validate(nodes, edges, base) -> list[str]:
    """Check the topology invariants; returns diagnostics (empty means valid)."""
    problems: list[str] = []
    nodes = list(nodes)
    if not nodes:
        return ["no nodes"]
    if len(set(nodes)) != len(nodes):
        return ["duplicate node ids"]
    known = set(nodes)
    if base not in known:
        problems.append(f"base {base!r} is not a node")
    degree = {v: 0 for v in nodes}
    for i, (u, v, length) in enumerate(edges):
        if u not in known or v not in known:
            problems.append(f"edge {i} references an unknown node")
            continue
        if u == v:
            problems.append(f"cycle: edge {i} is a self-loop")
        degree[u] += 1
        degree[v] += 1
        if not is_infinite(length) and length <= 0:
            problems.append(f"edge {i} has nonpositive length {format_length(length)}")
    if problems:
        return problems
    if len(edges) >= len(nodes):
        problems.append("cycle: more edges than a tree allows")
    # connectivity over all edges (infinite ones included)
    adjacency = {v: [] for v in nodes}
    for u, v, _ in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        for nxt in adjacency[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    if len(seen) != len(nodes):
        problems.append("disconnected: not every node is reachable")
    for i, (u, v, length) in enumerate(edges):
        if is_infinite(length) and degree[v] != 1:
            problems.append(f"edge {i} is infinite but its far endpoint {v!r} is interior")
    return problems


class RayTree:
    """Validated immutable tree; raises `TopologyError` on invalid input."""

    kind = "raytree"

    def __init__(self, nodes, edges, base):
        nodes = list(nodes)
        edges = [
            (u, v, length if is_infinite(length) else Fraction(length))
            for (u, v, length) in edges
        ]
        problems = validate(nodes, edges, base)
        if problems:
            raise TopologyError(problems[0], problems=problems)
        self.nodes = nodes
        self.edges = edges
        self.base = base
        self._at_infinity = {v for (_, v, length) in edges if is_infinite(length)}
        self._adj = {node: [] for node in nodes}  # finite edges only
        self._incident = {node: [] for node in nodes}
        for i, (u, v, length) in enumerate(edges):
            self._incident[u].append(i)
            self._incident[v].append(i)
            if not is_infinite(length):
                self._adj[u].append((v, length))
                self._adj[v].append((u, length))
        self._dist_cache: dict = {}
        self._parent_cache: dict = {}

    # -- locations ----------------------------------------------------

    def node_location(self, node) -> Location:
        """Canonical location of a node: its lowest-index incident edge."""
        if node not in self._incident:
            raise ModelMismatchError(f"unknown node {node!r}")
        if node in self._at_infinity:
            raise DomainRangeError(f"node {node!r} sits at infinity and is not a point")
        e = self._incident[node][0]
        u, _, length = self.edges[e]
        if node == u:
            return Location(e, Fraction(0))
        return Location(e, length)

    def location(self, edge: int, offset) -> Location:
        """Validated, normalized location on an edge."""
        if not isinstance(edge, int) or isinstance(edge, bool) or not 0 <= edge < len(self.edges):
            raise ModelMismatchError(f"no edge {edge!r} in this tree")
        offset = Fraction(offset)
        u, v, length = self.edges[edge]
        if offset < 0 or (not is_infinite(length) and offset > length):
            raise DomainRangeError(
                f"offset {format_rational(offset)} outside edge {edge} "
                f"of length {format_length(length)}"
            )
        if offset == 0:
            return self.node_location(u)
        if not is_infinite(length) and offset == length:
            return self.node_location(v)
        return Location(edge, offset)

    def check_point(self, p) -> None:
        if not isinstance(p, Location):
            raise ModelMismatchError(f"{p!r} is not a location")
        if self.location(p.edge, p.offset) != p:
            raise ModelMismatchError(f"{p!r} is not a canonical location of this tree")

    # -- node-level geometry -------------------------------------------

    def _scan_from(self, a) -> None:
        if a in self._dist_cache:
            return
        dist = {a: Fraction(0)}
        parent: dict = {a: None}
        stack = [a]
        while stack:
            cur = stack.pop()
            for nxt, length in self._adj[cur]:
                if nxt not in dist:
                    dist[nxt] = dist[cur] + length
                    parent[nxt] = cur
                    stack.append(nxt)
        self._dist_cache[a] = dist
        self._parent_cache[a] = parent

    def _node_dist(self, a, b) -> Fraction:
        self._scan_from(a)
        d = self._dist_cache[a].get(b)
        if d is None:
            raise DomainRangeError(f"node {b!r} is not at finite distance from {a!r}")
        return d

    def _node_path(self, a, b) -> list:
        """Nodes along the unique finite path a -> b, inclusive."""
        self._scan_from(a)
        parent = self._parent_cache[a]
        if b not in parent:
            raise DomainRangeError(f"node {b!r} is not at finite distance from {a!r}")
        chain = [b]
        while chain[-1] != a:
            chain.append(parent[chain[-1]])
        chain.reverse()
        return chain

    def _edge_between(self, a, b) -> tuple[int, bool]:
        """(edge index, True if traversed u->v) for adjacent nodes a, b."""
        for e in self._incident[a]:
            u, v, length = self.edges[e]
            if is_infinite(length):
                continue
            if u == a and v == b:
                return e, True
            if v == a and u == b:
                return e, False
        raise DomainRangeError(f"nodes {a!r}, {b!r} are not adjacent")

    def _exits(self, p: Location) -> list:
        """(node, cost) ways off p's edge; the at-infinity side is omitted."""
        u, v, length = self.edges[p.edge]
        out = [(u, p.offset)]
        if not is_infinite(length):
            out.append((v, length - p.offset))
        return out

    # -- point-level geometry -------------------------------------------

    def dist(self, p: Location, q: Location) -> Fraction:
        self.check_point(p)
        self.check_point(q)
        if p.edge == q.edge:
            return abs(p.offset - q.offset)
        best = None
        for a, ca in self._exits(p):
            for b, cb in self._exits(q):
                d = ca + self._node_dist(a, b) + cb
                if best is None or d < best:
                    best = d
        return best

    def _geodesic(self, p: Location, q: Location) -> list:
        """Runs (edge, from_offset, to_offset) tracing [p, q]; empty if p == q."""
        if p.edge == q.edge:
            return [] if p.offset == q.offset else [(p.edge, p.offset, q.offset)]
        best = None
        for a, ca in self._exits(p):
            for b, cb in self._exits(q):
                d = ca + self._node_dist(a, b) + cb
                if best is None or d < best[0]:
                    best = (d, a, b)
        _, a, b = best
        runs = []
        u, v, length = self.edges[p.edge]
        if a == u:
            if p.offset != 0:
                runs.append((p.edge, p.offset, Fraction(0)))
        elif p.offset != length:
            runs.append((p.edge, p.offset, length))
        chain = self._node_path(a, b)
        for here, there in zip(chain, chain[1:]):
            e, forward = self._edge_between(here, there)
            _, _, elen = self.edges[e]
            runs.append((e, Fraction(0), elen) if forward else (e, elen, Fraction(0)))
        u, v, length = self.edges[q.edge]
        if b == u:
            if q.offset != 0:
                runs.append((q.edge, Fraction(0), q.offset))
        elif q.offset != length:
            runs.append((q.edge, length, q.offset))
        return runs

    def segment_point(self, p: Location, q: Location, s) -> Location:
        """The point at arclength s from p along the unique segment [p, q]."""
        s = Fraction(s)
        total = self.dist(p, q)
        if s < 0 or s > total:
            raise DomainRangeError(
                f"arclength {format_rational(s)} outside [0, {format_rational(total)}]"
            )
        remaining = s
        for e, o1, o2 in self._geodesic(p, q):
            step = abs(o2 - o1)
            if remaining <= step:
                direction = 1 if o2 > o1 else -1
                return self.location(e, o1 + direction * remaining)
            remaining -= step
        return self.location(q.edge, q.offset)

    def median(self, x: Location, y: Location, z: Location) -> Location:
        """The unique point on all three pairwise segments."""
        dxy = self.dist(x, y)
        dxz = self.dist(x, z)
        dyz = self.dist(y, z)
        return self.segment_point(x, y, (dxy + dxz - dyz) / 2)

    # -- boundary -------------------------------------------------------

    def ends(self) -> list[int]:
        """One end per infinite edge; empty for compact trees."""
        return [i for i, (_, _, length) in enumerate(self.edges) if is_infinite(length)]

    def check_end(self, end) -> None:
        if not isinstance(end, int) or isinstance(end, bool) or not (
            0 <= end < len(self.edges) and is_infinite(self.edges[end][2])
        ):
            raise ModelMismatchError(f"{end!r} is not an end of this tree")

    def _ray_witness(self, end: int, *points: Location, extra=Fraction(0)) -> Location:
        """A location on the end's edge beyond every relevant ray merge."""
        on_edge = [p.offset for p in points if p.edge == end]
        start = max(on_edge) if on_edge else Fraction(0)
        return self.location(end, start + extra + 1)

    def busemann(self, end: int, y: Location) -> Fraction:
        """Horofunction of the end, vanishing at the base node.

        Exact: computed from a witness point far enough out on the ray that
        the distance-minus-parameter expression has already stabilized.
        """
        self.check_end(end)
        self.check_point(y)
        base = self.node_location(self.base)
        w = self._ray_witness(end, y, base)
        return self.dist(y, w) - self.dist(base, w)

    def ray_point(self, end: int, x: Location, s) -> Location:
        """The point at arclength s >= 0 from x along the ray [x, end)."""
        self.check_end(end)
        self.check_point(x)
        s = Fraction(s)
        if s < 0:
            raise DomainRangeError(f"ray arclength must be nonnegative, got {format_rational(s)}")
        w = self._ray_witness(end, x, extra=s)
        return self.segment_point(x, w, s)

    def horoball_projection(self, end: int, y: Location, x: Location) -> Location:
        """Nearest point to x in the horoball through y: walk toward the end."""
        by = self.busemann(end, y)
        bx = self.busemann(end, x)
        if bx <= by:
            return x
        return self.ray_point(end, x, bx - by)

    def ray_merge(self, end: int, x: Location, y: Location) -> Location:
        """Where the rays from x and from y toward the end come together."""
        self.check_end(end)
        w = self._ray_witness(end, x, y)
        return self.median(x, y, w)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [[u, v, format_length(length)] for (u, v, length) in self.edges],
            "base": self.base,
        }

    @classmethod
    def from_json(cls, obj) -> "RayTree":
        if not isinstance(obj, dict) or not {"nodes", "edges", "base"} <= set(obj):
            raise InputError("expected a tree object with 'nodes', 'edges' and 'base'")
        edges = []
        for entry in obj["edges"]:
            if not isinstance(entry, (list, tuple)) or len(entry) != 3:
                raise InputError(f"bad edge entry {entry!r}")
            edges.append((entry[0], entry[1], parse_length(entry[2])))
        return cls(obj["nodes"], edges, obj["base"])

    def point_to_json(self, p: Location) -> dict:
        return {"edge": p.edge, "offset": format_rational(p.offset)}

    def point_from_json(self, obj) -> Location:
        if not isinstance(obj, dict) or "edge" not in obj or "offset" not in obj:
            raise InputError(f"expected a location object with 'edge' and 'offset', got {obj!r}")
        edge = obj["edge"]
        if not isinstance(edge, int) or isinstance(edge, bool):
            raise InputError(f"edge index must be an integer, got {edge!r}")
        return self.location(edge, parse_rational(obj["offset"]))

    def end_to_json(self, end):
        self.check_end(end)
        return end

    def end_from_json(self, obj):
        if not isinstance(obj, int) or isinstance(obj, bool):
            raise InputError(f"end must be an edge index, got {obj!r}")
        self.check_end(obj)
        return obj

    def point_label(self, p: Location) -> str:
        return f"e{p.edge}+{format_rational(p.offset)}"
