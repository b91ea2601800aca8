"""Exact plane geometry over Q(zeta) points.

A point is a single CycNum via the complex embedding; every map the engine needs
(central symmetries, zeta-rotations, reflections, the golden-ratio contraction)
is z -> u*z + t or z -> u*conj(z) + t with u, t in the field, so compositions,
inverses and fixed points never leave exact arithmetic.

The imaginary unit i is not in Q(zeta), so cross products are exact only up to
the positive factor sin(pi/5): for w in the field, Im(w) = imcoef(w)*sin(pi/5)
with imcoef(w) in the real subfield.  All predicates use signs, which the factor
does not affect, and areas are reported in units of sin(pi/5) throughout (only
ratios and comparisons of areas are ever consumed).
"""

from .cyclotomic import CycNum, ZETA, ONE, ZERO

_IM_UNIT = ZETA - ZETA.conj()  # 2i*sin(pi/5)
_IM_UNIT_INV = _IM_UNIT.inv()


class BoundaryError(Exception):
    """A point landed where the map/predicate is undefined."""


class EmptyRegionError(Exception):
    """A clip produced a region with empty interior."""


def imcoef(w):
    """Im(w) / sin(pi/5) as an exact real-subfield element."""
    return (w - w.conj()) * _IM_UNIT_INV


def cross(u, v):
    """Cross product u x v up to the positive factor sin(pi/5)."""
    return imcoef(u.conj() * v)


def dot(u, v):
    """Dot product <u, v>, exact (real part of conj(u)*v is in the field)."""
    w = u.conj() * v
    return (w + w.conj()) / 2


class Line:
    """Oriented line through point p with direction d; 'left' is the side
    where cross(d, z - p) > 0."""

    __slots__ = ("p", "d")

    def __init__(self, p, d):
        if d.is_zero():
            raise ValueError("zero direction")
        self.p = p
        self.d = d

    @classmethod
    def through(cls, a, b):
        return cls(a, b - a)

    def side(self, z):
        """+1 left, 0 on the line, -1 right."""
        return cross(self.d, z - self.p).real_sign()

    def reversed(self):
        return Line(self.p, -self.d)

    def contains(self, z):
        return self.side(z) == 0

    def parallel_to(self, other):
        return cross(self.d, other.d).is_zero()

    def __repr__(self):
        return f"Line({self.p!r}, dir={self.d!r})"


def intersect_lines(l1, l2):
    den = cross(l2.d, l1.d)
    if den.is_zero():
        raise ValueError("parallel lines do not intersect")
    s = cross(l2.d, l2.p - l1.p) / den
    return l1.p + s * l1.d


class PlanarMap:
    """z -> u*z + t (direct) or z -> u*conj(z) + t (mirror)."""

    __slots__ = ("kind", "u", "t")

    def __init__(self, kind, u, t):
        if kind not in ("direct", "mirror"):
            raise ValueError(kind)
        if u.is_zero():
            raise ValueError("degenerate map (u = 0)")
        self.kind = kind
        self.u = u
        self.t = t

    @classmethod
    def identity(cls):
        return cls("direct", ONE, ZERO)

    @classmethod
    def translation(cls, t):
        return cls("direct", ONE, t)

    @classmethod
    def spiral(cls, u, center):
        """z -> u*(z - center) + center."""
        return cls("direct", u, center - u * center)

    @classmethod
    def central_symmetry(cls, c):
        return cls("direct", -ONE, c + c)

    def __call__(self, z):
        if self.kind == "direct":
            return self.u * z + self.t
        return self.u * z.conj() + self.t

    def compose(self, other):
        """self after other: (self.compose(other))(z) = self(other(z))."""
        u1, t1, u2, t2 = self.u, self.t, other.u, other.t
        if self.kind == "direct":
            if other.kind == "direct":
                return PlanarMap("direct", u1 * u2, u1 * t2 + t1)
            return PlanarMap("mirror", u1 * u2, u1 * t2 + t1)
        if other.kind == "direct":
            return PlanarMap("mirror", u1 * u2.conj(), u1 * t2.conj() + t1)
        return PlanarMap("direct", u1 * u2.conj(), u1 * t2.conj() + t1)

    def invert(self):
        if self.kind == "direct":
            ui = self.u.inv()
            return PlanarMap("direct", ui, -ui * self.t)
        ui = self.u.conj().inv()
        return PlanarMap("mirror", ui, -ui * self.t.conj())

    def fixed_point(self):
        """The unique fixed point (direct maps with u != 1)."""
        if self.kind != "direct":
            raise ValueError("fixed_point only for direct maps")
        den = ONE - self.u
        if den.is_zero():
            raise ValueError("translation or identity has no unique fixed point")
        return self.t / den

    def scale_sq(self):
        """Squared similarity ratio u*conj(u), an exact real element."""
        return self.u * self.u.conj()

    def is_isometry(self):
        return self.scale_sq() == ONE

    def __eq__(self, other):
        return (
            isinstance(other, PlanarMap)
            and self.kind == other.kind
            and self.u == other.u
            and self.t == other.t
        )

    def __hash__(self):
        return hash((self.kind, self.u, self.t))

    def __repr__(self):
        return f"PlanarMap({self.kind}, u={self.u!r}, t={self.t!r})"


def map_from_pairs(pairs, kind):
    """The unique direct/mirror similarity sending pairs[0][0] -> pairs[0][1],
    pairs[1][0] -> pairs[1][1]; any further pairs are verified exactly."""
    if len(pairs) < 2:
        raise ValueError("need at least two point pairs")
    (z1, w1), (z2, w2) = pairs[0], pairs[1]
    if z1 == z2:
        raise ValueError("source points must be distinct")
    if kind == "direct":
        u = (w2 - w1) / (z2 - z1)
        t = w1 - u * z1
    else:
        u = (w2 - w1) / (z2.conj() - z1.conj())
        t = w1 - u * z1.conj()
    m = PlanarMap(kind, u, t)
    for z, w in pairs[2:]:
        if m(z) != w:
            raise ValueError(f"inconsistent pair: {z!r} does not map to {w!r}")
    return m


def transform_line(m, line):
    """Image of an oriented line; mirror maps flip left/right, so the image
    direction is negated to keep 'left' = image of 'left'."""
    q = m(line.p)
    if m.kind == "direct":
        return Line(q, m.u * line.d)
    return Line(q, -(m.u * line.d.conj()))


class ConvexRegion:
    """An open convex region: interior = strict left of every boundary line.

    Bounded regions also carry their counterclockwise vertex list; unbounded
    regions (sectors, wedges) are line-lists only.
    """

    def __init__(self, lines, vertices=None):
        self.lines = list(lines)
        self.vertices = list(vertices) if vertices is not None else None

    @property
    def bounded(self):
        return self.vertices is not None

    @classmethod
    def from_vertices(cls, vs):
        n = len(vs)
        if n < 3:
            raise ValueError("need at least 3 vertices")
        lines = [Line.through(vs[i], vs[(i + 1) % n]) for i in range(n)]
        r = cls(lines, vs)
        for i in range(n):
            e1 = vs[(i + 1) % n] - vs[i]
            e2 = vs[(i + 2) % n] - vs[(i + 1) % n]
            if cross(e1, e2).real_sign() <= 0:
                raise ValueError("vertices must be strictly convex counterclockwise")
        return r

    @classmethod
    def from_halfplanes(cls, lines):
        """Unbounded-capable region from oriented lines (interior strict-left)."""
        return cls(lines, None)

    def locate(self, p):
        """'interior' | 'boundary' | 'outside', exact."""
        on_edge = False
        for line in self.lines:
            s = line.side(p)
            if s < 0:
                return "outside"
            if s == 0:
                on_edge = True
        return "boundary" if on_edge else "interior"

    def contains(self, p):
        return self.locate(p) == "interior"

    def area(self):
        """Exact area in units of sin(pi/5) (real subfield element)."""
        if not self.bounded:
            raise ValueError("area of unbounded region")
        vs = self.vertices
        total = ZERO
        for i in range(len(vs)):
            total = total + cross(vs[i], vs[(i + 1) % len(vs)])
        return total / 2

    def clip(self, line):
        """Intersection with the open halfplane left of `line` (bounded regions)."""
        if not self.bounded:
            raise ValueError("clip requires a bounded region")
        vs = self.vertices
        out = []
        n = len(vs)
        sides = [line.side(v) for v in vs]
        for i in range(n):
            a, b = vs[i], vs[(i + 1) % n]
            sa, sb = sides[i], sides[(i + 1) % n]
            if sa >= 0:
                out.append(a)
            if (sa > 0 and sb < 0) or (sa < 0 and sb > 0):
                out.append(intersect_lines(Line.through(a, b), line))
        # drop duplicates created when a vertex lies exactly on the clip line
        dedup = []
        for v in out:
            if not dedup or (dedup[-1] != v and v != dedup[0]):
                dedup.append(v)
        if len(dedup) < 3:
            raise EmptyRegionError("clip produced an empty region")
        r = ConvexRegion.from_vertices(dedup)
        if r.area().real_sign() <= 0:
            raise EmptyRegionError("clip produced a degenerate region")
        return r

    def transform(self, m):
        """Image region under a planar map."""
        lines = [transform_line(m, l) for l in self.lines]
        if self.vertices is None:
            return ConvexRegion(lines, None)
        vs = [m(v) for v in self.vertices]
        if m.kind == "mirror":
            vs = list(reversed(vs))  # restore counterclockwise order
            lines = list(reversed(lines))
        return ConvexRegion(lines, vs)

    def vertex_set(self):
        if not self.bounded:
            raise ValueError("unbounded region has no vertex set")
        return frozenset(self.vertices)

    def __repr__(self):
        if self.bounded:
            return f"ConvexRegion({len(self.vertices)} vertices)"
        return f"ConvexRegion(unbounded, {len(self.lines)} lines)"


def halfplane_intersection(lines, radius=10**6):
    """Bounded polygon cut out by the given halfplanes, computed by clipping a
    huge regular decagon (its corners are exact field points, unlike a box).

    Raises EmptyRegionError if empty; ValueError if the true region leaks out
    of the bounding decagon (i.e. is not bounded well inside `radius`)."""
    big = ConvexRegion.from_vertices([radius * ZETA ** k for k in range(10)])
    region = big
    for line in lines:
        region = region.clip(line)
    for i, v in enumerate(region.vertices):
        w = region.vertices[(i + 1) % len(region.vertices)]
        edge = w - v
        if not any(
            cross(edge, l.d).is_zero() and l.contains(v) for l in lines
        ):
            raise ValueError("halfplane intersection is not bounded")
    return ConvexRegion.from_vertices(region.vertices)
