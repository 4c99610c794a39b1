"""Batch command-line frontend over the kernel.

JSON in, JSON out (DOT text for `export-dot`); every rational is printed in
its exact "p/q" form and identical invocations produce byte-identical output.
Exit codes: 0 success, 1 parse/usage error, 2 domain error (with a JSON
diagnostic on stdout).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import audit, orders, symmetry
from .errors import DomainError, InputError
from .groups import parse_group
from .rationals import format_rational, is_infinite, parse_rational
from .raytree import RayTree
from .universal import UniversalModel, join as upoint_join

SUBCOMMANDS = (
    "dist", "median", "join", "order-compare", "order-sup", "hd-orders",
    "phi", "busemann", "project", "check-tree-metric", "realize",
    "audit-order", "audit-semilattice", "sim-apply", "sim-map", "fiber",
    "convergence", "export-dot",
)


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract here is exit 1
    def error(self, message):
        raise InputError(message)


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _model(args, tree_path=None):
    path = tree_path if tree_path is not None else getattr(args, "tree", None)
    choice = getattr(args, "model", None) or ("raytree" if path else "upoint")
    if choice == "raytree":
        if not path:
            raise InputError("the raytree model needs --tree FILE")
        return RayTree.from_json(_load_json(path))
    return UniversalModel(parse_group(args.group))


def _point(model, path):
    return model.point_from_json(_load_json(path))


def _points(model, path):
    raw = _load_json(path)
    if not isinstance(raw, list):
        raise InputError(f"{path} must hold a JSON list of points")
    return [model.point_from_json(obj) for obj in raw]


def _order(model, path):
    return orders.order_from_json(model, _load_json(path))


def _add_model_flags(parser):
    parser.add_argument("--model", choices=("upoint", "raytree"), default=None,
                        help="defaults to raytree when a tree file is given, else upoint")
    parser.add_argument("--group", default="z2", help="z<k> or int (upoint model)")
    parser.add_argument("--tree", help="tree JSON file (raytree model)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="treeorder", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, *positional, flags=True):
        p = sub.add_parser(name)
        if flags:
            _add_model_flags(p)
        for arg in positional:
            p.add_argument(arg)
        return p

    command("dist", "point_a", "point_b")
    command("median", "point_a", "point_b", "point_c")
    command("join", "point_a", "point_b")
    command("order-compare", "order", "point_a", "point_b")
    command("order-sup", "order", "points")
    hd = command("hd-orders")
    hd.add_argument("tree_file", nargs="?", help="tree JSON (implies the raytree model)")
    hd.add_argument("--rooted", nargs=2, metavar=("PX", "PY"), help="two root point files")
    hd.add_argument("--orders", nargs=2, metavar=("O1", "O2"), help="two order files")
    command("phi", "order")
    bus = command("busemann", "point")
    bus.add_argument("--end", required=True, help="end id: edge index, or 'up'")
    proj = command("project", "horoball_point", "point")
    proj.add_argument("--end", required=True)
    command("check-tree-metric", "matrix", flags=False)
    command("realize", "matrix", flags=False)
    command("audit-order", "order", "sample")
    command("audit-semilattice", "matrix", "poset", flags=False)
    command("sim-apply", "similarity", "point")
    command("sim-map", "point_a", "point_b")
    fib = command("fiber", "point", "height")
    fib.add_argument("--map", action="store_true", help="slide within fibers instead of projecting")
    command("convergence", "order", "roots", "probes")
    command("export-dot", "points")
    return parser


def _end_id(model, text):
    if isinstance(model, RayTree):
        try:
            return model.end_from_json(int(text))
        except ValueError as exc:
            raise InputError(f"end must be an edge index, got {text!r}") from exc
    return model.end_from_json(text)


def _group_of(args):
    return parse_group(args.group)


def execute(args) -> tuple:
    """Run one parsed command; returns (document, is_json)."""
    cmd = args.command

    if cmd == "dist":
        model = _model(args)
        a, b = _point(model, args.point_a), _point(model, args.point_b)
        return {"dist": format_rational(model.dist(a, b))}, True

    if cmd == "median":
        model = _model(args)
        a, b, c = (_point(model, p) for p in (args.point_a, args.point_b, args.point_c))
        return {"median": model.point_to_json(model.median(a, b, c))}, True

    if cmd == "join":
        model = _model(args)
        if not isinstance(model, UniversalModel):
            raise InputError("join is an operation of the upoint model")
        a, b = _point(model, args.point_a), _point(model, args.point_b)
        return {"join": model.point_to_json(upoint_join(a, b))}, True

    if cmd == "order-compare":
        model = _model(args)
        tau = _order(model, args.order)
        a, b = _point(model, args.point_a), _point(model, args.point_b)
        return {"compare": orders.compare(tau, a, b)}, True

    if cmd == "order-sup":
        model = _model(args)
        tau = _order(model, args.order)
        pts = _points(model, args.points)
        return {"sup": model.point_to_json(orders.sup(tau, pts))}, True

    if cmd == "hd-orders":
        model = _model(args, tree_path=args.tree_file)
        if args.rooted:
            tau = orders.rooted(model, _point(model, args.rooted[0]))
            sigma = orders.rooted(model, _point(model, args.rooted[1]))
        elif args.orders:
            tau, sigma = (_order(model, p) for p in args.orders)
        else:
            raise InputError("hd-orders needs --rooted PX PY or --orders O1 O2")
        value = orders.hausdorff_distance(tau, sigma)
        return {"hd": "inf" if is_infinite(value) else format_rational(value)}, True

    if cmd == "phi":
        model = _model(args)
        tau = _order(model, args.order)
        return orders.point_or_end_to_json(model, orders.phi(tau)), True

    if cmd == "busemann":
        model = _model(args)
        end = _end_id(model, args.end)
        y = _point(model, args.point)
        return {"busemann": format_rational(model.busemann(end, y))}, True

    if cmd == "project":
        model = _model(args)
        if not isinstance(model, RayTree):
            raise InputError("project runs on the raytree model")
        end = _end_id(model, args.end)
        y = _point(model, args.horoball_point)
        x = _point(model, args.point)
        return {"point": model.point_to_json(model.horoball_projection(end, y, x))}, True

    if cmd == "check-tree-metric":
        metric = audit.FiniteMetric.from_json(_load_json(args.matrix))
        witness = audit.check_four_point(metric)
        if witness is not None:
            raise DomainError(
                "four-point condition fails",
                quad=list(witness.quad),
                lhs=format_rational(witness.lhs),
                rhs=format_rational(witness.rhs),
            )
        return {"ok": True}, True

    if cmd == "realize":
        metric = audit.FiniteMetric.from_json(_load_json(args.matrix))
        realized = audit.realize_tree(metric)
        return {
            "tree": realized.tree.to_json(),
            "locations": [realized.tree.point_to_json(p) for p in realized.locations],
        }, True

    if cmd == "audit-order":
        model = _model(args)
        tau = _order(model, args.order)
        sample = _points(model, args.sample)
        found = orders.audit_rooted_order(tau, sample)
        return {"violations": [orders.violation_to_json(model, v) for v in found]}, True

    if cmd == "audit-semilattice":
        metric = audit.FiniteMetric.from_json(_load_json(args.matrix))
        poset = audit.FinitePoset.from_json(_load_json(args.poset))
        semilattice = [v.to_json() for v in audit.check_metric_semilattice(metric, poset)]
        linear = audit.check_upper_semilinear(poset)
        four = audit.check_four_point(metric)
        return {
            "semilattice": semilattice,
            "semilinear": "ok" if linear is None else {"witness": list(linear)},
            "four_point": "ok" if four is None else {
                "quad": list(four.quad),
                "lhs": format_rational(four.lhs),
                "rhs": format_rational(four.rhs),
            },
        }, True

    if cmd == "sim-apply":
        model = _model(args)
        if not isinstance(model, UniversalModel):
            raise InputError("similarities act on the upoint model")
        sim = symmetry.similarity_from_json(_load_json(args.similarity), _group_of(args))
        p = _point(model, args.point)
        return {"point": model.point_to_json(symmetry.apply(sim, p))}, True

    if cmd == "sim-map":
        model = _model(args)
        if not isinstance(model, UniversalModel):
            raise InputError("similarities act on the upoint model")
        a, b = _point(model, args.point_a), _point(model, args.point_b)
        return {"similarity": symmetry.similarity_to_json(symmetry.map_point_to_point(a, b))}, True

    if cmd == "fiber":
        model = _model(args)
        if not isinstance(model, UniversalModel):
            raise InputError("fibers live in the upoint model")
        p = _point(model, args.point)
        height = parse_rational(args.height)
        if args.map:
            image = symmetry.fiber_map(p.start, height, p)
            return {"point": model.point_to_json(image)}, True
        nearest = symmetry.fiber_nearest(p, height)
        return {
            "point": model.point_to_json(nearest.point),
            "distance": format_rational(nearest.distance),
            "unique": nearest.unique,
        }, True

    if cmd == "convergence":
        model = _model(args)
        target = _order(model, args.order)
        roots = _points(model, args.roots)
        raw = _load_json(args.probes)
        if not isinstance(raw, list):
            raise InputError("probes file must hold a JSON list of [x, y] pairs")
        probes = []
        for entry in raw:
            if not isinstance(entry, (list, tuple)) or len(entry) != 2:
                raise InputError(f"bad probe entry {entry!r}")
            probes.append((model.point_from_json(entry[0]), model.point_from_json(entry[1])))
        return {"converges": orders.check_convergence(roots, target, probes)}, True

    if cmd == "export-dot":
        model = _model(args)
        pts = _points(model, args.points)
        return export_dot(pts, model), False

    raise InputError(f"unknown subcommand {cmd!r}")


def export_dot(points, model) -> str:
    """DOT drawing of the finite subtree spanned by the points.

    The span is the point set closed under medians of triples; branch points
    all arise this way, and one closure pass suffices in a tree (checked as a
    postcondition).  Edges join adjacent points and are labelled with their
    exact lengths.  Output is deterministic for a given input order.
    """
    if not points:
        raise DomainError("export needs at least one point")
    closure: list = []
    for p in points:
        if p not in closure:
            closure.append(p)
    base = len(closure)
    for i in range(base):
        for j in range(i + 1, base):
            for k in range(j + 1, base):
                m = model.median(closure[i], closure[j], closure[k])
                if m not in closure:
                    closure.append(m)
    for i in range(len(closure)):
        for j in range(i + 1, len(closure)):
            for k in range(j + 1, len(closure)):
                if model.median(closure[i], closure[j], closure[k]) not in closure:
                    raise DomainError("median closure did not stabilize in one pass")
    n = len(closure)
    lines = ["graph spanned_subtree {"]
    for i, p in enumerate(closure):
        lines.append(f'  q{i} [label="{model.point_label(p)}"];')
    for i in range(n):
        for j in range(i + 1, n):
            d = model.dist(closure[i], closure[j])
            direct = True
            for k in range(n):
                if k in (i, j):
                    continue
                between = model.dist(closure[i], closure[k]) + model.dist(closure[k], closure[j])
                if between == d:
                    direct = False
                    break
            if direct:
                lines.append(f'  q{i} -- q{j} [label="{format_rational(d)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def run(argv) -> int:
    """Parse and execute; prints the result document and returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        document, as_json = execute(args)
    except InputError as exc:
        print(json.dumps({"error": "input", "message": str(exc)}), file=sys.stderr)
        return 1
    except DomainError as exc:
        print(json.dumps(exc.payload(), sort_keys=True))
        return 2
    if as_json:
        print(json.dumps(document, sort_keys=True))
    else:
        sys.stdout.write(document)
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
