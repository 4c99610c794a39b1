"""Similarities of the step-function tree, its height fibration, and limits.

A similarity scales all heights and breakpoints by a positive rational
coefficient and then adds a fixed jump pattern from above.  We keep every
similarity in the folded normal form "add ``translation`` after scaling by
``coefficient``": the scale-then-shift commutation rule lets any product of
generators (pure scalings, pure shifts, and shift-conjugated scalings) be
renormalized into this shape, so equality of similarities is equality of the
two fields.  Shifts are stored through their zero-extension down to height 0,
which makes two shifts equal exactly when they act equally.

Also here: the height map (a submetry onto the positive reals), the
constant-height fibers (mutually isometric, equidistant, ultrametric), the
completeness radius with its constructive in-ball limit procedure, and the
branch-count description per group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .errors import DomainError, EscapeError, InputError, ModelMismatchError
from .groups import GroupSpec
from .rationals import format_rational, parse_rational
from .universal import StepFunction, UPoint, dist


def _merged(group: GroupSpec, start: Fraction, funcs: Sequence[StepFunction]) -> tuple:
    """Canonical jump list of the pointwise sum of ``funcs`` above ``start``."""
    cuts = sorted({b for f in funcs for (b, _) in f.segments if b > start}, reverse=True)
    out = []
    prev = 0
    for c in cuts:
        val = 0
        for f in funcs:
            val = group.add(val, f.evaluate(c))
        if val != prev:
            out.append((c, val))
            prev = val
    return tuple(out)


def _scaled(f: StepFunction, lam: Fraction) -> StepFunction:
    return StepFunction(f.group, f.start * lam, tuple((b * lam, v) for b, v in f.segments))


def _negated(f: StepFunction) -> StepFunction:
    return StepFunction(f.group, f.start, tuple((b, f.group.neg(v)) for b, v in f.segments))


def extension(p: StepFunction) -> StepFunction:
    """The function of ``p`` continued by zero all the way down to height 0."""
    segs = p.segments
    if segs and segs[-1][1] != 0 and p.start > 0:
        segs = segs + ((p.start, 0),)
    return StepFunction(p.group, Fraction(0), segs)


@dataclass(frozen=True)
class Similarity:
    """Scale by ``coefficient``, then add the ``translation`` jumps from above."""

    translation: StepFunction  # start-0 jump data applied after scaling
    coefficient: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coefficient", Fraction(self.coefficient))
        if self.coefficient <= 0:
            raise DomainError(f"similarity coefficient must be positive, got {self.coefficient}")
        if self.translation.start != 0:
            raise DomainError("translation data must live on (0, oo)")

    @property
    def group(self) -> GroupSpec:
        return self.translation.group


def identity(group: GroupSpec) -> Similarity:
    return Similarity(StepFunction(group, Fraction(0)), Fraction(1))


def homothety(group: GroupSpec, lam) -> Similarity:
    """Pure scaling by lam > 0."""
    return Similarity(StepFunction(group, Fraction(0)), Fraction(lam))


def shift(group: GroupSpec, segments) -> Similarity:
    """Pure isometric shift adding the given start-0 jump list."""
    return Similarity(StepFunction(group, Fraction(0), tuple(segments)), Fraction(1))


def point_shift(p: UPoint) -> Similarity:
    """The shift carrying the jump-free point at p's height onto p."""
    return Similarity(extension(p), Fraction(1))


def similarity_from_parts(group: GroupSpec, post_segments, lam, pre_segments) -> Similarity:
    """Fold "shift by post after scaling, undoing the shift by pre first" into
    normal form: post - scaled(pre)."""
    post = StepFunction(group, Fraction(0), tuple(post_segments))
    pre = StepFunction(group, Fraction(0), tuple(pre_segments))
    lam = Fraction(lam)
    if lam <= 0:
        raise DomainError(f"similarity coefficient must be positive, got {lam}")
    folded = _merged(group, Fraction(0), [post, _negated(_scaled(pre, lam))])
    return Similarity(StepFunction(group, Fraction(0), folded), lam)


def apply(s: Similarity, p: UPoint) -> UPoint:
    """The image point; all distances come out multiplied by the coefficient."""
    if p.group != s.group:
        raise ModelMismatchError("similarity and point carry different groups")
    lam = s.coefficient
    scaled = UPoint(p.group, p.start * lam, tuple((b * lam, v) for b, v in p.segments))
    segs = _merged(p.group, scaled.start, [scaled, s.translation])
    return UPoint(p.group, scaled.start, segs)


def compose(s1: Similarity, s2: Similarity) -> Similarity:
    """s1 after s2; coefficients multiply."""
    if s1.group != s2.group:
        raise ModelMismatchError("similarities carry different groups")
    group = s1.group
    folded = _merged(group, Fraction(0), [s1.translation, _scaled(s2.translation, s1.coefficient)])
    return Similarity(StepFunction(group, Fraction(0), folded), s1.coefficient * s2.coefficient)


def inverse(s: Similarity) -> Similarity:
    inv = 1 / s.coefficient
    return Similarity(_scaled(_negated(s.translation), inv), inv)


def coefficient(s: Similarity) -> Fraction:
    """The scaling factor: a multiplicative homomorphism onto the positive
    rationals whose kernel consists of the exact isometries."""
    return s.coefficient


def map_point_to_point(p: UPoint, q: UPoint) -> Similarity:
    """A similarity carrying p to q exactly, with coefficient q.start/p.start."""
    if p.group != q.group:
        raise ModelMismatchError("points carry different groups")
    group = p.group
    lam = q.start / p.start
    folded = _merged(group, Fraction(0), [extension(q), _negated(_scaled(extension(p), lam))])
    return Similarity(StepFunction(group, Fraction(0), folded), lam)


def submetry_height(p: UPoint) -> Fraction:
    """The height map: 1-Lipschitz, and onto every radius-r interval from a
    radius-r ball (sweep the vertical geodesic)."""
    return p.start


def completeness_radius(p: UPoint) -> Fraction:
    """Largest radius whose closed balls at p are complete: the height itself."""
    return p.start


def ball_limit(
    center: UPoint,
    radius,
    terms: Sequence[UPoint],
    limit_height=None,
) -> UPoint:
    """Limit of a presented Cauchy sequence inside a ball of radius < height.

    The sequence is given by finitely many terms plus (optionally) the exact
    limiting height; when the heights of the tail are already constant the
    hint may be omitted.  The jump lists of the tail must stabilize above the
    limiting height; the heights must approach it monotonically.  Sequences
    heading down toward height 0 — fresh jumps forever, or a nonpositive
    limiting height — are refused with an escape diagnostic.
    """
    radius = Fraction(radius)
    if not 0 < radius < center.start:
        raise DomainError(
            f"need 0 < radius < center height; got radius {format_rational(radius)} "
            f"at height {format_rational(center.start)}"
        )
    terms = list(terms)
    if not terms:
        raise DomainError("empty sequence")
    for k, t in enumerate(terms):
        if t.group != center.group:
            raise ModelMismatchError(f"term {k} carries a different group")
        if dist(center, t) > radius:
            raise DomainError(f"term {k} lies outside the ball", term=k)
    if limit_height is None:
        h = terms[-1].start
    else:
        h = Fraction(limit_height)
    if h <= 0:
        raise EscapeError("limiting height is not positive: the sequence escapes the space")
    gaps = [abs(t.start - h) for t in terms]
    if any(b > a for a, b in zip(gaps, gaps[1:])) or (gaps[-1] > 0 and gaps[-1] >= gaps[0]):
        raise EscapeError("heights do not converge to the declared limit")
    tails = [tuple(pair for pair in t.segments if pair[0] > h) for t in terms]
    stable = tails[-1]
    if len(terms) > 1 and tails[-2] != stable:
        raise EscapeError("jump lists do not stabilize above the limiting height")
    limit = UPoint(center.group, h, stable)
    gaps = [dist(limit, t) for t in terms]
    if any(b > a for a, b in zip(gaps, gaps[1:])) or (gaps[-1] > 0 and gaps[-1] >= gaps[0]):
        raise EscapeError("terms do not converge to the stabilized point")
    if dist(center, limit) > radius:
        raise DomainError("stabilized point falls outside the ball")
    return limit


class FiberNearest(NamedTuple):
    point: UPoint
    distance: Fraction
    unique: bool


def fiber_nearest(p: UPoint, b) -> FiberNearest:
    """Nearest point of the height-b fiber to p; always at distance |b - height|.

    Going up the nearest point is the restriction and is unique; going down
    any extension works, so the zero-extension is returned flagged non-unique.
    """
    b = Fraction(b)
    if b <= 0:
        raise DomainError(f"fiber height must be positive, got {format_rational(b)}")
    if b >= p.start:
        return FiberNearest(p.restrict(b), b - p.start, True)
    segs = tuple(pair for pair in extension(p).segments if pair[0] > b)
    return FiberNearest(UPoint(p.group, b, segs), p.start - b, False)


def fiber_map(a, b, p: UPoint) -> UPoint:
    """The canonical fiber isometry: slide the jump pattern from height a to b."""
    a = Fraction(a)
    b = Fraction(b)
    if p.start != a:
        raise DomainError(
            f"point has height {format_rational(p.start)}, not {format_rational(a)}"
        )
    if b <= 0:
        raise DomainError(f"target fiber height must be positive, got {format_rational(b)}")
    delta = b - a
    return UPoint(p.group, b, tuple((bp + delta, v) for bp, v in p.segments))


def valency(group: GroupSpec):
    """Branch count at every point: group order plus one (math.inf for the
    integers)."""
    if group.modulus is None:
        return math.inf
    return group.modulus + 1


def similarity_to_json(s: Similarity) -> dict:
    return {
        "g": [[format_rational(b), v] for b, v in s.translation.segments],
        "lambda": format_rational(s.coefficient),
        "f": [],
    }


def similarity_from_json(obj, group: GroupSpec) -> Similarity:
    if not isinstance(obj, dict) or not {"g", "lambda", "f"} <= set(obj):
        raise InputError("expected a similarity object with 'g', 'lambda' and 'f'")

    def segs(raw):
        if not isinstance(raw, list):
            raise InputError("translation data must be a list of [breakpoint, value] pairs")
        out = []
        for entry in raw:
            if not isinstance(entry, (list, tuple)) or len(entry) != 2:
                raise InputError(f"bad segment entry {entry!r}")
            out.append((parse_rational(entry[0]), entry[1]))
        return tuple(out)

    return similarity_from_parts(group, segs(obj["g"]), parse_rational(obj["lambda"]), segs(obj["f"]))
