"""Partial orders on tree models: rooted orders, boundary orders, and their space.

An `OrderHandle` designates where an order "points": at a root inside the
model (the root is the greatest element) or at an end on its boundary.  Both
flavors run over either model (`universal.UniversalModel` or
`raytree.RayTree`) through the shared model interface.

`compare(tau, x, y)` reads "y lies toward the focal point of tau from x".
Rooted orders are compared by the median test; boundary orders by the exact
unit-slope horofunction equation.  The distance between two rooted orders —
seen as relation sets in the metric square — is the distance between their
roots; `hausdorff_oracle` re-derives that value independently from a finite
net so the closed formula can be cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional

from .errors import DomainError, InputError, ModelMismatchError
from .rationals import INFINITE

ROOTED = "rooted"
AT_END = "end"

INTERIOR = "interior"
BOUNDARY = "boundary"


@dataclass(frozen=True)
class OrderHandle:
    """An order on ``model``: either Rooted(point) or AtEnd(end)."""

    model: object
    order_kind: str
    point: object = None
    end: object = None


@dataclass(frozen=True)
class PointOrEnd:
    """An element of the model-with-boundary: an interior point or an end."""

    kind: str
    point: object = None
    end: object = None


def rooted(model, point) -> OrderHandle:
    model.check_point(point)
    return OrderHandle(model, ROOTED, point=point)


def at_end(model, end) -> OrderHandle:
    model.check_end(end)
    return OrderHandle(model, AT_END, end=end)


def compare(tau: OrderHandle, x, y) -> bool:
    """True iff x precedes y under tau (y sits toward the focal point from x)."""
    model = tau.model
    model.check_point(x)
    model.check_point(y)
    if tau.order_kind == ROOTED:
        return model.median(tau.point, x, y) == y
    return model.busemann(tau.end, x) - model.busemann(tau.end, y) == model.dist(x, y)


def sup(tau: OrderHandle, points) -> object:
    """Least upper bound of a nonempty finite set under tau."""
    pts = list(points)
    if not pts:
        raise DomainError("supremum of an empty set")
    model = tau.model
    for p in pts:
        model.check_point(p)
    acc = pts[0]
    for p in pts[1:]:
        if tau.order_kind == ROOTED:
            acc = model.median(tau.point, acc, p)
        else:
            acc = model.ray_merge(tau.end, acc, p)
    return acc


def hausdorff_distance(tau: OrderHandle, sigma: OrderHandle):
    """Distance between two orders: root distance, 0, or INFINITE.

    Two rooted orders sit exactly as far apart as their roots; an order and a
    boundary order (or two distinct boundary orders) are infinitely far.
    """
    if tau.model is not sigma.model:
        raise ModelMismatchError("orders are bound to different models")
    if tau.order_kind == ROOTED and sigma.order_kind == ROOTED:
        return tau.model.dist(tau.point, sigma.point)
    if tau.order_kind == AT_END and sigma.order_kind == AT_END and tau.end == sigma.end:
        return Fraction(0)
    return INFINITE


def hausdorff_oracle(tau: OrderHandle, sigma: OrderHandle, net) -> Fraction:
    """Two-sided Hausdorff estimate between two rooted orders over a finite net.

    The orders are materialized as relation sets {(s, t) in net^2 : s tau t}
    and compared under the sum metric d((s,t),(s',t')) = dist(s,s') +
    dist(t,t').  Exact rational arithmetic (run on a common-denominator
    integer grid); independent of the closed root-distance formula.
    """
    if tau.order_kind != ROOTED or sigma.order_kind != ROOTED:
        raise DomainError("the discretized oracle is defined for rooted orders")
    if tau.model is not sigma.model:
        raise ModelMismatchError("orders are bound to different models")
    pts = list(net)
    if not pts:
        raise DomainError("empty net")
    model = tau.model
    n = len(pts)
    dmat = [[Fraction(0)] * n for _ in range(n)]
    scale = 1
    for i in range(n):
        for j in range(i + 1, n):
            d = model.dist(pts[i], pts[j])
            dmat[i][j] = dmat[j][i] = d
            scale = lcm(scale, d.denominator)
    grid = [[int(d * scale) for d in row] for row in dmat]
    rel_tau = [(i, j) for i in range(n) for j in range(n) if compare(tau, pts[i], pts[j])]
    rel_sigma = [(i, j) for i in range(n) for j in range(n) if compare(sigma, pts[i], pts[j])]

    def directed(src, dst):
        worst = 0
        for i, j in src:
            best = None
            for k, l in dst:
                d = grid[i][k] + grid[j][l]
                if best is None or d < best:
                    best = d
                    if best <= worst:
                        break  # cannot raise the running maximum
            worst = max(worst, best)
        return worst

    return Fraction(max(directed(rel_tau, rel_sigma), directed(rel_sigma, rel_tau)), scale)


def in_neighborhood(tau: OrderHandle, x, y) -> bool:
    """Membership in the basic neighborhood keyed by (x, y): x tau y, minus
    the one rooted order whose root is y."""
    if x == y:
        raise DomainError("neighborhood parameters must be distinct points")
    if not compare(tau, x, y):
        return False
    return not (tau.order_kind == ROOTED and tau.point == y)


def phi(tau: OrderHandle) -> PointOrEnd:
    """The focal point of an order: its root, or the end it looks toward."""
    if tau.order_kind == ROOTED:
        return PointOrEnd(INTERIOR, point=tau.point)
    return PointOrEnd(BOUNDARY, end=tau.end)


def phi_inverse(model, v: PointOrEnd) -> OrderHandle:
    """The order focused at a given point or end."""
    if v.kind == INTERIOR:
        return rooted(model, v.point)
    if v.kind == BOUNDARY:
        return at_end(model, v.end)
    raise InputError(f"bad point-or-end kind {v.kind!r}")


def check_convergence(roots, target: OrderHandle, probes) -> bool:
    """Do the rooted orders at ``roots`` run into every probe neighborhood of
    ``target``?

    Each probe (x, y) must satisfy in_neighborhood(target, x, y); violations
    are reported per probe.  Over the presented finite sequence, convergence
    means a suffix lies inside each probe neighborhood.
    """
    model = target.model
    roots = list(roots)
    probes = [tuple(p) for p in probes]
    if not roots:
        raise DomainError("empty root sequence")
    bad = [k for k, (x, y) in enumerate(probes) if x == y or not in_neighborhood(target, x, y)]
    if bad:
        raise DomainError(
            "probes must lie in the target's neighborhood filter", probes=bad
        )
    for x, y in probes:
        flags = [in_neighborhood(rooted(model, r), x, y) for r in roots]
        if not flags[-1]:
            return False
    return True


@dataclass(frozen=True)
class Violation:
    """One failed audit check, with the witnesses and both sides."""

    check: str
    witness: tuple
    lhs: Optional[Fraction] = None
    rhs: Optional[Fraction] = None


def audit_rooted_order(tau: OrderHandle, sample) -> list[Violation]:
    """Exhaustively verify the order axioms of a rooted order on a finite sample.

    Checks, with exact arithmetic: chain additivity, the join identity via
    sup, upper semilinearity, and that the root dominates the sample.
    Returns the violations found (expected: none).
    """
    if tau.order_kind != ROOTED:
        raise DomainError("audit applies to rooted orders")
    pts = list(sample)
    if not pts:
        raise DomainError("empty sample")
    model = tau.model
    root = tau.point
    n = len(pts)
    leq = [[compare(tau, pts[i], pts[j]) for j in range(n)] for i in range(n)]
    out: list[Violation] = []
    for i in range(n):
        if not compare(tau, pts[i], root):
            out.append(Violation("root-greatest", (pts[i], root)))
    for i in range(n):
        for k in range(n):
            if not leq[i][k]:
                continue
            for j in range(n):
                if not leq[k][j]:
                    continue
                lhs = model.dist(pts[i], pts[k]) + model.dist(pts[k], pts[j])
                rhs = model.dist(pts[i], pts[j])
                if lhs != rhs:
                    out.append(Violation("chain-additivity", (pts[i], pts[k], pts[j]), lhs, rhs))
    for i in range(n):
        for j in range(i, n):
            w = sup(tau, [pts[i], pts[j]])
            if not (compare(tau, pts[i], w) and compare(tau, pts[j], w)):
                out.append(Violation("join-upper-bound", (pts[i], pts[j], w)))
            lhs = model.dist(pts[i], w) + model.dist(w, pts[j])
            rhs = model.dist(pts[i], pts[j])
            if lhs != rhs:
                out.append(Violation("join-splits-distance", (pts[i], pts[j], w), lhs, rhs))
            for k in range(n):
                if leq[i][k] and leq[j][k] and not compare(tau, w, pts[k]):
                    out.append(Violation("join-least", (pts[i], pts[j], pts[k], w)))
    for b in range(n):
        for i in range(n):
            if not leq[b][i]:
                continue
            for j in range(i + 1, n):
                if leq[b][j] and not (leq[i][j] or leq[j][i]):
                    out.append(Violation("upper-semilinear", (pts[b], pts[i], pts[j])))
    return out


def violation_to_json(model, violation: Violation) -> dict:
    from .rationals import format_rational

    def encode(w):
        try:
            return model.point_to_json(w)
        except Exception:
            return repr(w)

    return {
        "check": violation.check,
        "witness": [encode(w) for w in violation.witness],
        "lhs": None if violation.lhs is None else format_rational(violation.lhs),
        "rhs": None if violation.rhs is None else format_rational(violation.rhs),
    }


def order_to_json(tau: OrderHandle) -> dict:
    if tau.order_kind == ROOTED:
        return {"kind": "rooted", "point": tau.model.point_to_json(tau.point)}
    return {"kind": "end", "end": tau.model.end_to_json(tau.end)}


def order_from_json(model, obj) -> OrderHandle:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InputError(f"expected an order object with 'kind', got {obj!r}")
    if obj["kind"] == "rooted":
        if "point" not in obj:
            raise InputError("rooted order needs a 'point'")
        return rooted(model, model.point_from_json(obj["point"]))
    if obj["kind"] == "end":
        if "end" not in obj:
            raise InputError("boundary order needs an 'end'")
        return at_end(model, model.end_from_json(obj["end"]))
    raise InputError(f"unknown order kind {obj['kind']!r}")


def point_or_end_to_json(model, v: PointOrEnd) -> dict:
    if v.kind == INTERIOR:
        return {"kind": INTERIOR, "point": model.point_to_json(v.point)}
    return {"kind": BOUNDARY, "end": model.end_to_json(v.end)}


def point_or_end_from_json(model, obj) -> PointOrEnd:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InputError(f"expected a point-or-end object, got {obj!r}")
    if obj["kind"] == INTERIOR:
        return PointOrEnd(INTERIOR, point=model.point_from_json(obj["point"]))
    if obj["kind"] == BOUNDARY:
        return PointOrEnd(BOUNDARY, end=model.end_from_json(obj["end"]))
    raise InputError(f"unknown point-or-end kind {obj['kind']!r}")
