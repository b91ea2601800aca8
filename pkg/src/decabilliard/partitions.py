"""Red/green partition recursion on X and the periodic-fraction estimate.

X splits into the f-orbit of Gamma(X) plus the three periodic cores: pushing
Gamma(T_a) along f takes 7 steps (path sigma(a) = aababaa) and Gamma(T_b)
takes 3 (path aaa), and at step j the piece sits inside the triangle named by
the j-th path symbol.  That yields a fixed subdivision template for each of
the two triangles: T_a splits into 8 lambda-scaled green triangles plus the
red cells omega_a and omega_ab; T_b into 2 green triangles plus omega_ba.

A level-l partition refines every green cell by the template of its base
triangle; red cells persist bit-identically.  Green area therefore contracts
at least by the factor (1 - epsilon) per level, with

    epsilon = min(area(omega_a + omega_ab) / area(ABE),
                  area(omega_ba) / area(CED)).

Level 1 is all green: the two bare triangles (their subdivision at level 2 is
what the recursion prescribes, so they cannot be red-carried).
"""

from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import CycNum, ZERO
from .geometry import cross
from .returns import SIGMA, polygon_area
from .selfsim import build_Gamma, omega_components


@dataclass(frozen=True)
class Cell:
    color: str  # "red" | "green"
    vertices: tuple  # exact CycNum vertex cycle
    lineage: str
    base: str = None  # green cells: which triangle this is a copy of
    g: object = None  # green cells: the isometry-or-similarity placing it

    def area(self):
        a = polygon_area(self.vertices)
        return a if a.real_sign() > 0 else -a


@dataclass
class ColoredPartition:
    level: int
    cells: list

    def red_cells(self):
        return [c for c in self.cells if c.color == "red"]

    def green_cells(self):
        return [c for c in self.cells if c.color == "green"]


class PartitionBuilder:
    """Owns the subdivision template derived from one Gamma push-through."""

    def __init__(self, x, gamma=None, omegas=None):
        self.x = x
        self.gamma = gamma or build_Gamma(x)
        self.omegas = omegas or omega_components(x)
        q = x.quad
        self.tri = {"a": (q.A, q.B, q.E), "b": (q.C, q.E, q.D)}
        self.reds_template = {
            "a": (
                ("omega_a", tuple(self.omegas.omega_a.vertices)),
                ("omega_ab", tuple(self.omegas.omega_ab.vertices)),
            ),
            "b": (("omega_ba", tuple(self.omegas.omega_ba.vertices)),),
        }
        self.green_template = {"a": [], "b": []}
        branch = {"a": x.f_a, "b": x.f_b}
        for s in "ab":
            h = self.gamma
            for j, sym in enumerate(SIGMA((s,))):
                # the piece h(T_s) lies in the triangle the path names; checked
                # on the centroid so a template error cannot pass silently
                c = _centroid(tuple(h(v) for v in self.tri[s]))
                assert x.quad.locate(c) == sym
                self.green_template[sym].append((h, s, j))
                h = branch[sym].compose(h)

    def initial(self):
        cells = [
            Cell("green", self.tri[s], lineage=s, base=s, g=None) for s in "ab"
        ]
        return ColoredPartition(1, cells)

    def step(self, partition):
        cells = list(partition.red_cells())
        for cell in partition.green_cells():
            place = cell.g
            for name, vs in self.reds_template[cell.base]:
                pv = vs if place is None else tuple(place(v) for v in vs)
                cells.append(Cell("red", pv, f"{cell.lineage}:{name}"))
            for h, s, j in self.green_template[cell.base]:
                g = h if place is None else place.compose(h)
                cells.append(
                    Cell(
                        "green",
                        tuple(g(v) for v in self.tri[s]),
                        f"{cell.lineage}/{s}{j}",
                        base=s,
                        g=g,
                    )
                )
        return ColoredPartition(partition.level + 1, cells)

    def levels(self, depth):
        """Partitions for levels 1..depth."""
        out = [self.initial()]
        while len(out) < depth:
            out.append(self.step(out[-1]))
        return out

    def epsilon(self):
        """Exact per-level green-area contraction constant, in (0, 1)."""
        om = self.omegas
        q = self.x.quad
        ra = (om.omega_a.area() + om.omega_ab.area()) / q.big.area()
        rb = om.omega_ba.area() / q.small.area()
        return ra if (rb - ra).real_sign() > 0 else rb


def areas(partition):
    """(red, green) exact area sums; red + green = area(X)."""
    red = ZERO
    green = ZERO
    for c in partition.cells:
        if c.color == "red":
            red = red + c.area()
        else:
            green = green + c.area()
    return red, green


def _centroid(vs):
    inv = Fraction(1, len(vs))
    total = vs[0]
    for v in vs[1:]:
        total = total + v
    return total * inv


# -- periodic fraction (Monte-Carlo proxy for full measure) ---------------------


def periodic_fraction(table, region, samples, cap, seed):
    """Sample exact rational points of `region` uniformly and classify their
    plane orbits: periodic (exact return), boundary, or undecided (cap hit).

    `region` exposes vertices (a tuple/list or a zero-argument method) and a
    locate method; anything locating to 'interior'/'a'/'b' counts as inside.
    Sampling happens in exact rational coordinates over a field-point frame of
    the region, so acceptance tests and the orbit run are both exact; undecided
    is never counted as periodic."""
    import random

    from .billiard import per_from_induced

    vs = region.vertices() if callable(region.vertices) else tuple(region.vertices)
    origin = vs[0]
    e1 = vs[1] - origin
    e2 = _pick_second_axis(vs, origin, e1)
    box = _frame_bbox(vs, origin, e1, e2)
    rng = random.Random(seed)
    engine = table.engine()

    stats = {
        "samples": samples,
        "periodic": 0,
        "boundary": 0,
        "undecided": 0,
        "observed_periods": {},
        "seed": seed,
        "cap": cap,
    }
    denom = 2 ** 32
    (u0, u1), (v0, v1) = box
    accepted = 0
    while accepted < samples:
        u = u0 + (u1 - u0) * Fraction(rng.randrange(denom), denom)
        v = v0 + (v1 - v0) * Fraction(rng.randrange(denom), denom)
        p = origin + u * e1 + v * e2
        loc = region.locate(p)
        if loc not in ("interior", "a", "b"):
            continue
        accepted += 1
        res = engine.detect_period(p, cap)
        if res[0] == "period":
            stats["periodic"] += 1
            period = per_from_induced(res[1], res[2])
            stats["observed_periods"][period] = (
                stats["observed_periods"].get(period, 0) + 1
            )
        elif res[0] == "boundary":
            stats["boundary"] += 1
        else:
            stats["undecided"] += 1
    stats["periodic_fraction"] = Fraction(stats["periodic"], samples)
    return stats


def _pick_second_axis(vs, origin, e1):
    for v in vs[2:]:
        e2 = v - origin
        if not cross(e1, e2).is_zero():
            return e2
    raise ValueError("degenerate region")


def _frame_bbox(vs, origin, e1, e2):
    """Rational (u, v) bounding box of the vertices in the (e1, e2) frame,
    padded so rounding slack cannot clip the region."""
    z1, z2 = complex(e1), complex(e2)
    det = z1.real * z2.imag - z1.imag * z2.real
    us, vls = [], []
    for v in vs:
        w = complex(v - origin)
        us.append((w.real * z2.imag - w.imag * z2.real) / det)
        vls.append((z1.real * w.imag - z1.imag * w.real) / det)
    pad = Fraction(1, 64)
    lo_u = Fraction(min(us)).limit_denominator(4096) - pad
    hi_u = Fraction(max(us)).limit_denominator(4096) + pad
    lo_v = Fraction(min(vls)).limit_denominator(4096) - pad
    hi_v = Fraction(max(vls)).limit_denominator(4096) + pad
    return (lo_u, hi_u), (lo_v, hi_v)
