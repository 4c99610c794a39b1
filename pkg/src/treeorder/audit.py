"""Finite-sample certificates: metric/order axioms, the four-point test, and
exact tree realization.

`FiniteMetric` and `FinitePoset` hold a distance matrix and an order-with-join
table over the same index set.  The checks verify, in exact arithmetic, the
semilattice axioms (chain additivity and the join split), upper semilinearity,
and the four-point condition.  `l1_plane_sample` builds the taxicab grid that
passes the first two checks and fails the last two — the delineating
counterexample.  `realize_tree` reconstructs, for any matrix passing the
four-point test, a finite tree reproducing it with zero error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .errors import DomainError, FourPointError, InputError
from .rationals import format_rational, parse_rational
from .raytree import Location, RayTree


@dataclass(frozen=True)
class FiniteMetric:
    """A strict finite metric: symmetric, zero diagonal, triangle inequality."""

    n: int
    d: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.d)
        object.__setattr__(self, "d", rows)
        n = self.n
        if n < 1 or len(rows) != n or any(len(row) != n for row in rows):
            raise DomainError(f"distance matrix is not {n}x{n}")
        for i in range(n):
            if rows[i][i] != 0:
                raise DomainError(f"nonzero diagonal at {i}")
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise DomainError(f"asymmetric at ({i},{j})")
                if rows[i][j] <= 0:
                    raise DomainError(f"nonpositive distance at ({i},{j})")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if rows[i][j] > rows[i][k] + rows[k][j]:
                        raise DomainError(f"triangle inequality fails at ({i},{j},{k})")

    def to_json(self) -> dict:
        return {"n": self.n, "d": [[format_rational(x) for x in row] for row in self.d]}

    @classmethod
    def from_json(cls, obj) -> "FiniteMetric":
        if not isinstance(obj, dict) or "n" not in obj or "d" not in obj:
            raise InputError("expected a metric object with 'n' and 'd'")
        rows = tuple(tuple(parse_rational(x) for x in row) for row in obj["d"])
        return cls(obj["n"], rows)


@dataclass(frozen=True)
class FinitePoset:
    """A finite order relation plus a (possibly partial) join table.

    Present join entries are verified to be least upper bounds.
    """

    n: int
    leq: tuple[tuple[bool, ...], ...]
    join: tuple[tuple[Optional[int], ...], ...]

    def __post_init__(self):
        leq = tuple(tuple(bool(x) for x in row) for row in self.leq)
        join = tuple(tuple(row) for row in self.join)
        object.__setattr__(self, "leq", leq)
        object.__setattr__(self, "join", join)
        n = self.n
        if len(leq) != n or any(len(row) != n for row in leq):
            raise DomainError(f"leq relation is not {n}x{n}")
        if len(join) != n or any(len(row) != n for row in join):
            raise DomainError(f"join table is not {n}x{n}")
        for i in range(n):
            if not leq[i][i]:
                raise DomainError(f"not reflexive at {i}")
            for j in range(n):
                if i != j and leq[i][j] and leq[j][i]:
                    raise DomainError(f"not antisymmetric at ({i},{j})")
                for k in range(n):
                    if leq[i][j] and leq[j][k] and not leq[i][k]:
                        raise DomainError(f"not transitive at ({i},{j},{k})")
        for i in range(n):
            for j in range(n):
                w = join[i][j]
                if w is None:
                    continue
                if not isinstance(w, int) or isinstance(w, bool) or not 0 <= w < n:
                    raise DomainError(f"join entry ({i},{j}) is not an index: {w!r}")
                if not (leq[i][w] and leq[j][w]):
                    raise DomainError(f"join entry ({i},{j}) is not an upper bound")
                for m in range(n):
                    if leq[i][m] and leq[j][m] and not leq[w][m]:
                        raise DomainError(f"join entry ({i},{j}) is not least")

    def to_json(self) -> dict:
        return {"n": self.n, "leq": [list(row) for row in self.leq],
                "join": [list(row) for row in self.join]}

    @classmethod
    def from_json(cls, obj) -> "FinitePoset":
        if not isinstance(obj, dict) or not {"leq", "join"} <= set(obj):
            raise InputError("expected a poset object with 'leq' and 'join'")
        leq = tuple(tuple(row) for row in obj["leq"])
        join = tuple(tuple(row) for row in obj["join"])
        n = obj.get("n", len(leq))
        return cls(n, leq, join)


@dataclass(frozen=True)
class FourPointWitness:
    """A quadruple whose split-pair sum beats both cross sums."""

    quad: tuple[int, int, int, int]  # pairing (quad[0],quad[1]) + (quad[2],quad[3])
    lhs: Fraction
    rhs: Fraction


def check_four_point(metric: FiniteMetric) -> Optional[FourPointWitness]:
    """None iff every quadruple satisfies the four-point condition.

    For each 4-subset the three pair sums are formed; each must be bounded by
    the larger of the other two (equivalently: the maximum is attained twice).
    Returns the first violating pairing otherwise.
    """
    d = metric.d
    for i, j, k, l in combinations(range(metric.n), 4):
        sums = (
            ((i, j, k, l), d[i][j] + d[k][l]),
            ((i, k, j, l), d[i][k] + d[j][l]),
            ((i, l, j, k), d[i][l] + d[j][k]),
        )
        for idx, (quad, lhs) in enumerate(sums):
            rhs = max(s for t, (_, s) in enumerate(sums) if t != idx)
            if lhs > rhs:
                return FourPointWitness(quad, lhs, rhs)
    return None


@dataclass(frozen=True)
class TableViolation:
    """One failed identity over the finite tables, by index."""

    check: str
    witness: tuple
    lhs: Optional[Fraction] = None
    rhs: Optional[Fraction] = None

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "witness": list(self.witness),
            "lhs": None if self.lhs is None else format_rational(self.lhs),
            "rhs": None if self.rhs is None else format_rational(self.rhs),
        }


def check_metric_semilattice(metric: FiniteMetric, poset: FinitePoset) -> list[TableViolation]:
    """Verify chain additivity and the join identity on the full sample.

    Requires the join table to be total; missing entries are refused up front.
    """
    if metric.n != poset.n:
        raise DomainError(f"size mismatch: metric {metric.n} vs poset {poset.n}")
    n = metric.n
    missing = [[i, j] for i in range(n) for j in range(n) if poset.join[i][j] is None]
    if missing:
        raise DomainError("join table has missing entries", missing=missing)
    d, leq, join = metric.d, poset.leq, poset.join
    out: list[TableViolation] = []
    for i in range(n):
        for k in range(n):
            if not leq[i][k]:
                continue
            for j in range(n):
                if not leq[k][j]:
                    continue
                if d[i][k] + d[k][j] != d[i][j]:
                    out.append(TableViolation("chain-additivity", (i, k, j),
                                              d[i][k] + d[k][j], d[i][j]))
    for i in range(n):
        for j in range(i, n):
            w = join[i][j]
            if d[i][w] + d[w][j] != d[i][j]:
                out.append(TableViolation("join-splits-distance", (i, j, w),
                                          d[i][w] + d[w][j], d[i][j]))
    return out


def check_upper_semilinear(poset: FinitePoset) -> Optional[tuple[int, int, int]]:
    """None iff every upper cone is a chain; else (base, a, b) with a, b
    incomparable above base."""
    n, leq = poset.n, poset.leq
    for b in range(n):
        for i in range(n):
            if not leq[b][i]:
                continue
            for j in range(i + 1, n):
                if leq[b][j] and not (leq[i][j] or leq[j][i]):
                    return (b, i, j)
    return None


def grid_points(k: int) -> list[tuple[int, int]]:
    """Deterministic enumeration of the k x k integer grid (x-major)."""
    return [(x, y) for x in range(k) for y in range(k)]


def l1_plane_sample(k: int) -> tuple[FiniteMetric, FinitePoset]:
    """The k x k grid under the taxicab metric, coordinatewise order, and
    coordinatewise-max join.

    A metric semilattice that is neither semilinear nor a tree metric; the
    smallest instance (k = 2) exhibits both failures.
    """
    if k < 2:
        raise DomainError(f"grid needs k >= 2, got {k}")
    pts = grid_points(k)
    n = len(pts)
    index = {p: i for i, p in enumerate(pts)}
    d = tuple(
        tuple(Fraction(abs(ax - bx) + abs(ay - by)) for (bx, by) in pts)
        for (ax, ay) in pts
    )
    leq = tuple(
        tuple(ax <= bx and ay <= by for (bx, by) in pts)
        for (ax, ay) in pts
    )
    join = tuple(
        tuple(index[(max(ax, bx), max(ay, by))] for (bx, by) in pts)
        for (ax, ay) in pts
    )
    return FiniteMetric(n, d), FinitePoset(n, leq, join)


@dataclass(frozen=True)
class RealizedTree:
    """A finite tree plus one location per input sample, reproducing the matrix."""

    tree: RayTree
    locations: tuple[Location, ...]


def realize_tree(metric: FiniteMetric) -> RealizedTree:
    """Build a finite tree whose point set realizes the matrix exactly.

    Refuses (with the witness) any matrix failing the four-point test.
    Points are inserted in input order; each new point hangs off the existing
    span by a pendant edge whose length is the smallest branch estimate
    (d(i,t) + d(j,t) - d(i,j)) / 2 over earlier pairs (i, j), ties broken by
    lowest index pair, so the output is deterministic.
    """
    witness = check_four_point(metric)
    if witness is not None:
        raise FourPointError(
            "matrix is not a tree metric",
            quad=list(witness.quad),
            lhs=format_rational(witness.lhs),
            rhs=format_rational(witness.rhs),
        )
    n, d = metric.n, metric.d
    if n < 2:
        raise DomainError("tree realization needs at least 2 points")
    nodes = ["p0", "p1"]
    edges: list = [("p0", "p1", d[0][1])]
    anchors = {0: "p0", 1: "p1"}
    steiner = 0
    for t in range(2, n):
        tree = RayTree(nodes, edges, nodes[0])
        best = None
        for i in range(t):
            for j in range(i + 1, t):
                pendant = (d[i][t] + d[j][t] - d[i][j]) / 2
                if pendant < 0:
                    raise DomainError(f"negative branch estimate at ({i},{j},{t})")
                if best is None or pendant < best[0]:
                    best = (pendant, i, j)
        pendant, i, j = best
        along = (d[i][t] + d[i][j] - d[j][t]) / 2
        attach = tree.segment_point(
            tree.node_location(anchors[i]), tree.node_location(anchors[j]), along
        )
        u, v, length = tree.edges[attach.edge]
        if attach.offset == 0:
            attach_node = u
        elif attach.offset == length:
            attach_node = v
        else:
            attach_node = f"s{steiner}"
            steiner += 1
            nodes.append(attach_node)
            edges[attach.edge] = (u, attach_node, attach.offset)
            edges.append((attach_node, v, length - attach.offset))
        if pendant == 0:
            anchors[t] = attach_node
        else:
            node = f"p{t}"
            nodes.append(node)
            edges.append((attach_node, node, pendant))
            anchors[t] = node
    tree = RayTree(nodes, edges, nodes[0])
    locs = tuple(tree.node_location(anchors[i]) for i in range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if tree.dist(locs[i], locs[j]) != d[i][j]:
                raise DomainError("realization failed to reproduce the matrix", pair=[i, j])
    return RealizedTree(tree, locs)
