"""The step-function tree: an exactly computable, similarity-homogeneous real tree.

A point is a pair (f, a): a rational height a > 0 together with a function f
on (a, oo) that is piecewise constant from the left, takes values in an
additive group, has finitely many jumps, and is identically zero above its
top breakpoint.  Points are ordered by "the higher one is the restriction of
the lower one"; every two points have a join, and the induced path metric
(ascend to the join, descend to the other point) makes the set a real tree
in which every point branches |G|+1 ways.

Jump lists are kept canonical: breakpoints strictly decrease, the topmost
value is nonzero, adjacent values differ.  Equality of points is equality of
canonical forms.  All scalars are `fractions.Fraction`; nothing here is ever
rounded.  Values are immutable and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (
    CanonicalFormError,
    DomainError,
    DomainRangeError,
    InputError,
    ModelMismatchError,
)
from .groups import GroupSpec
from .rationals import format_rational, parse_rational

Segment = tuple[Fraction, int]


@dataclass(frozen=True)
class StepFunction:
    """A finitely-supported jump list on (start, oo), eventually zero.

    ``segments`` is ((b1, v1), ..., (bk, vk)) with b1 > ... > bk > start; the
    function equals vi on (b_{i+1}, bi] (with b_{k+1} = start) and 0 above b1.
    """

    group: GroupSpec
    start: Fraction
    segments: tuple[Segment, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "start", Fraction(self.start))
        segs = tuple((Fraction(b), self.group.normalize(v)) for b, v in self.segments)
        object.__setattr__(self, "segments", segs)
        if self.start < 0:
            raise CanonicalFormError(f"domain start must be nonnegative, got {self.start}")
        prev_b: Optional[Fraction] = None
        prev_v: Optional[int] = None
        for b, v in segs:
            if b <= self.start:
                raise CanonicalFormError(
                    f"breakpoint {format_rational(b)} is not above the domain start "
                    f"{format_rational(self.start)}"
                )
            if prev_b is not None and b >= prev_b:
                raise CanonicalFormError("breakpoints must strictly decrease")
            if prev_v is not None and v == prev_v:
                raise CanonicalFormError("adjacent segment values must differ")
            prev_b, prev_v = b, v
        if segs and segs[0][1] == 0:
            raise CanonicalFormError("the topmost segment value must be nonzero")

    @property
    def top(self) -> Fraction:
        """Least height above which the function is identically zero."""
        return self.segments[0][0] if self.segments else self.start

    def evaluate(self, x) -> int:
        """The value at x; requires x > start.  Zero above the top breakpoint."""
        x = Fraction(x)
        if x <= self.start:
            raise DomainRangeError(
                f"{format_rational(x)} is outside the domain "
                f"({format_rational(self.start)}, oo)"
            )
        value = 0
        for b, v in self.segments:
            if x > b:
                return value
            value = v
        return value

    def restrict(self, h) -> "StepFunction":
        """The same function cut down to (h, oo); requires h >= start."""
        h = Fraction(h)
        if h < self.start:
            raise DomainRangeError(
                f"cannot restrict to ({format_rational(h)}, oo): domain starts at "
                f"{format_rational(self.start)}"
            )
        if h == self.start:
            return self
        kept = tuple(pair for pair in self.segments if pair[0] > h)
        return type(self)(self.group, h, kept)

    def to_json(self) -> dict:
        return {
            "a": format_rational(self.start),
            "segments": [[format_rational(b), v] for b, v in self.segments],
        }

    @classmethod
    def from_json(cls, obj, group: GroupSpec):
        if not isinstance(obj, dict) or "a" not in obj or "segments" not in obj:
            raise InputError(f"expected a point object with 'a' and 'segments', got {obj!r}")
        raw = obj["segments"]
        if not isinstance(raw, list):
            raise InputError("'segments' must be a list of [breakpoint, value] pairs")
        segs = []
        for entry in raw:
            if not isinstance(entry, (list, tuple)) or len(entry) != 2:
                raise InputError(f"bad segment entry {entry!r}")
            segs.append((parse_rational(entry[0]), entry[1]))
        return cls(group, parse_rational(obj["a"]), tuple(segs))

    def __repr__(self):
        inner = ",".join(f"({format_rational(b)},{v})" for b, v in self.segments)
        return f"<{format_rational(self.start)}; [{inner}]>"


class UPoint(StepFunction):
    """A tree point: a step function whose height (domain start) is positive."""

    def __post_init__(self):
        super().__post_init__()
        if self.start <= 0:
            raise CanonicalFormError(f"point height must be positive, got {self.start}")


def upoint(group: GroupSpec, a, segments=()) -> UPoint:
    """Convenience constructor accepting "p/q" strings for the scalars."""
    return UPoint(group, Fraction(a), tuple((Fraction(b), v) for b, v in segments))


def _check_same_group(p: StepFunction, q: StepFunction) -> None:
    if p.group != q.group:
        raise ModelMismatchError(
            f"points carry different groups: {p.group.name} vs {q.group.name}"
        )


def model_leq(p: UPoint, q: UPoint) -> bool:
    """True iff q is the restriction of p to (q.start, oo): p lies below q."""
    _check_same_group(p, q)
    if p.start > q.start:
        return False
    return p.restrict(q.start).segments == q.segments


def join(p: UPoint, q: UPoint) -> UPoint:
    """The least common upper point: restriction to the lowest agreement height."""
    _check_same_group(p, q)
    base = p.start if p.start >= q.start else q.start
    cuts = sorted(
        {b for b, _ in p.segments if b > base} | {b for b, _ in q.segments if b > base},
        reverse=True,
    )
    height = base
    for c in cuts:
        # first disagreement from the top pins the join height
        if p.evaluate(c) != q.evaluate(c):
            height = c
            break
    return p.restrict(height)


def dist(p: UPoint, q: UPoint) -> Fraction:
    """Path length: up from p to the join, down to q.  Zero iff p == q."""
    h = join(p, q).start
    return (h - p.start) + (h - q.start)


def segment_point(p: UPoint, q: UPoint, t) -> UPoint:
    """The unique point on [p, q] at arclength t from p."""
    t = Fraction(t)
    total = dist(p, q)
    if t < 0 or t > total:
        raise DomainRangeError(
            f"arclength {format_rational(t)} outside [0, {format_rational(total)}]"
        )
    h = join(p, q).start
    ascent = h - p.start
    if t <= ascent:
        return p.restrict(p.start + t)
    return q.restrict(h - (t - ascent))


def median(x: UPoint, y: UPoint, z: UPoint) -> UPoint:
    """The unique point lying on all three pairwise segments.

    The three pairwise joins are mutually comparable and the two highest
    coincide; the lowest one is on all three segments.
    """
    best = join(x, y)
    for cand in (join(x, z), join(y, z)):
        if cand.start < best.start:
            best = cand
    return best


@dataclass(frozen=True)
class ComponentLabel:
    """Branch label at a removed center: which side of the center a point falls on.

    Points strictly below the center are tagged with the group value their
    function takes at the center height; everything else shares one label.
    """

    below_center: bool
    value: Optional[int] = None

    def __repr__(self):
        return f"B({self.value})" if self.below_center else "A"


def classify_component(center: UPoint, p: UPoint) -> ComponentLabel:
    """Which component of the complement of ``center`` contains ``p``."""
    _check_same_group(center, p)
    if p == center:
        raise DomainError("cannot classify the center against itself")
    if model_leq(p, center):
        # strictly below, so p.start < center.start and the value is defined
        return ComponentLabel(True, p.evaluate(center.start))
    return ComponentLabel(False)


#: The single boundary end of the model: straight up the heights.
UP_END = "up"


@dataclass(frozen=True)
class UniversalModel:
    """Binds a group choice and the base point used to normalize horofunctions.

    Presents the uniform model interface shared with `raytree.RayTree` so the
    order machinery can run over either space.
    """

    group: GroupSpec
    base: Optional[UPoint] = None

    kind = "upoint"

    def __post_init__(self):
        if self.base is None:
            object.__setattr__(self, "base", upoint(self.group, 1))
        elif self.base.group != self.group:
            raise ModelMismatchError("base point group differs from the model group")

    def check_point(self, p) -> None:
        if not isinstance(p, UPoint) or p.group != self.group:
            raise ModelMismatchError(f"{p!r} is not a point of this model")

    def check_end(self, end) -> None:
        if end != UP_END:
            raise ModelMismatchError(f"{end!r} is not an end of this model")

    def ends(self) -> list:
        return [UP_END]

    def dist(self, p: UPoint, q: UPoint) -> Fraction:
        self.check_point(p)
        self.check_point(q)
        return dist(p, q)

    def median(self, x: UPoint, y: UPoint, z: UPoint) -> UPoint:
        for p in (x, y, z):
            self.check_point(p)
        return median(x, y, z)

    def segment_point(self, p: UPoint, q: UPoint, t) -> UPoint:
        self.check_point(p)
        self.check_point(q)
        return segment_point(p, q, t)

    def busemann(self, end, p: UPoint) -> Fraction:
        """Horofunction of the upward end, vanishing at the base point."""
        self.check_end(end)
        self.check_point(p)
        return self.base.start - p.start

    def ray_merge(self, end, p: UPoint, q: UPoint) -> UPoint:
        """Where the upward rays from p and q come together: their join."""
        self.check_end(end)
        self.check_point(p)
        self.check_point(q)
        return join(p, q)

    def point_to_json(self, p: UPoint) -> dict:
        return p.to_json()

    def point_from_json(self, obj) -> UPoint:
        return UPoint.from_json(obj, self.group)

    def end_to_json(self, end):
        self.check_end(end)
        return end

    def end_from_json(self, obj):
        if obj != UP_END:
            raise InputError(f"unknown end {obj!r} (the only end is {UP_END!r})")
        return UP_END

    def point_label(self, p: UPoint) -> str:
        return repr(p)
