"""The outer billiard outside the regular decagon and its induced map T'.

Table placement: vertex A_k = zeta^k (unit circumradius, counterclockwise), so
the order-10 rotational symmetry R (by pi/5, clockwise) is exactly multiplication
by zeta^-1 and every construction stays in the field.

T sends a point p strictly inside the sector V_i (the open exterior wedge whose
supporting vertex is A_i) to its central reflection 2*A_i - p.  T' is T quotiented
by R onto one sector V' (the central reflection of V_1 about A_1): V' splits into
five pieces alpha_1..alpha_5 = int(V') /\ int(V_{i+1}) on which

    T'(z) = R^i(T(z)) = 2*zeta - zeta^(-i) * z,

i.e. a rotation by (5-i)*pi/5 counterclockwise for i = 1..4 (fixed point O_i) and
a translation by 2*zeta for i = 5.  Both maps are undefined on region boundaries;
hitting one raises BoundaryError.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .cyclotomic import CycNum, ZETA, ONE, ZERO, _sign_u_plus_v_phi
from .geometry import (
    BoundaryError,
    ConvexRegion,
    Line,
    PlanarMap,
    cross,
    halfplane_intersection,
    intersect_lines,
)


class PiecewiseIsometry:
    """Finitely many (open convex region, planar map, symbol) branches; undefined
    on the complement of the branch interiors."""

    def __init__(self, branches, name=""):
        self.branches = list(branches)  # (ConvexRegion, PlanarMap, symbol)
        self.name = name

    def branch_at(self, p):
        for region, m, symbol in self.branches:
            loc = region.locate(p)
            if loc == "interior":
                return region, m, symbol
        raise BoundaryError(f"{self.name or 'piecewise map'} undefined at {p!r}")

    def step(self, p):
        _, m, symbol = self.branch_at(p)
        return m(p), symbol

    def __call__(self, p):
        return self.step(p)[0]

    def invert(self):
        inv_branches = [
            (region.transform(m), m.invert(), symbol)
            for region, m, symbol in self.branches
        ]
        return PiecewiseIsometry(inv_branches, name=self.name + "^-1")


@dataclass
class OrbitRecord:
    start: CycNum
    steps: list = field(default_factory=list)  # (point after step, symbol)
    halt: tuple = ("cap", 0)  # ("period", n) | ("boundary", step) | ("cap", n)

    @property
    def code(self):
        return tuple(s for _, s in self.steps)


def per_from_induced(m, s):
    """T-period of a T'-periodic point: induced period m, total rotation count s."""
    return m * 10 // gcd(s, 10)


class Table:
    """The regular decagon table with its sector fan and induced map data."""

    def __init__(self):
        self.A = [ZETA ** k for k in range(10)]
        A = self.A
        # V_i: open exterior wedge at A_i (right of line A_{i-1}A_i, left of A_iA_{i+1})
        self.V = [
            ConvexRegion.from_halfplanes(
                [
                    Line(A[i], A[i - 1] - A[i]),
                    Line(A[i], A[(i + 1) % 10] - A[i]),
                ]
            )
            for i in range(10)
        ]
        # V'_i: central reflection of V_i about A_i
        self.V_refl = [
            self.V[i].transform(PlanarMap.central_symmetry(A[i])) for i in range(10)
        ]
        self.V_prime = self.V_refl[1]
        # R: rotation by pi/5 clockwise
        self.R = PlanarMap("direct", ZETA ** 9, ZERO)
        self.table_region = ConvexRegion.from_vertices(A)
        # alpha_i = int(V') /\ int(V_{i+1}) with branch isometry z -> 2 zeta - zeta^-i z
        self._alphas = None
        self._T_system = None
        self._Tp_system = None
        self._engine = None

    # -- piecewise systems ----------------------------------------------------

    def T_system(self):
        if self._T_system is None:
            self._T_system = PiecewiseIsometry(
                [
                    (self.V[i], PlanarMap.central_symmetry(self.A[i]), i)
                    for i in range(10)
                ],
                name="T",
            )
        return self._T_system

    def alpha_pieces(self):
        """T' as a PiecewiseIsometry with branches alpha_1..alpha_5."""
        if self._Tp_system is None:
            branches = []
            for i in range(1, 6):
                region = ConvexRegion.from_halfplanes(
                    self.V_prime.lines + self.V[i + 1].lines
                )
                m = PlanarMap("direct", ZETA ** (5 - i), 2 * ZETA)
                branches.append((region, m, i))
            self._Tp_system = PiecewiseIsometry(branches, name="T'")
        return self._Tp_system

    def alpha(self, i):
        return self.alpha_pieces().branches[i - 1][0]

    def alpha_polygon(self, i):
        """Vertex form of the bounded pieces alpha_1..alpha_3 (alpha_4 and
        alpha_5 share a boundary direction with V' and are unbounded)."""
        if not 1 <= i <= 3:
            raise ValueError("only alpha_1..alpha_3 are bounded")
        return halfplane_intersection(self.alpha(i).lines)

    # -- the maps --------------------------------------------------------------

    def step_T(self, p):
        return self.T_system().step(p)[0]

    def step_T_inv(self, p):
        for i in range(10):
            if self.V_refl[i].locate(p) == "interior":
                return 2 * self.A[i] - p
        raise BoundaryError(f"T^-1 undefined at {p!r}")

    def r_prime(self, p):
        """Representative of p in V' and the minimal k with R^k(p) in int(V')."""
        q = p
        for k in range(10):
            loc = self.V_prime.locate(q)
            if loc == "interior":
                return q, k
            q = self.R(q)
        raise BoundaryError(f"no rotation of {p!r} lies strictly inside V'")

    def step_T_prime(self, p):
        """One T' step; returns (image, branch symbol in 1..5)."""
        return self.alpha_pieces().step(p)

    # -- fixed points and components --------------------------------------------

    def fixed_point_O(self, i):
        """O_i as the exact intersection of the bisector of V' with the bisector
        of the wedge V_{i+1} (i = 1..4); cross-checked against the branch map."""
        if not 1 <= i <= 4:
            raise ValueError("i must be 1..4")
        A = self.A
        # both wedges have rays spanned by equal-length chords, so the bisector
        # direction is just the sum of the ray directions
        bis_vp = Line(A[1], ZETA ** 2 - ONE)
        bis_vi = Line(A[i + 1], A[i] - A[i + 2])
        o = intersect_lines(bis_vp, bis_vi)
        m = self.alpha_pieces().branches[i - 1][1]
        assert m(o) == o, "bisector intersection is not the branch fixed point"
        return o

    def system(self, map_choice):
        if map_choice == "T":
            return self.T_system()
        if map_choice in ("Tprime", "T'"):
            return self.alpha_pieces()
        raise ValueError(f"unknown map {map_choice!r}")

    def orbit(self, p, map_choice, cap):
        """Iterate exactly; halt at first exact return to p, boundary hit, or cap."""
        system = self.system(map_choice)
        rec = OrbitRecord(start=p)
        q = p
        for n in range(1, cap + 1):
            try:
                q, symbol = system.step(q)
            except BoundaryError:
                rec.halt = ("boundary", n - 1)
                return rec
            rec.steps.append((q, symbol))
            if q == p:
                rec.halt = ("period", n)
                return rec
        rec.halt = ("cap", cap)
        return rec

    def detect_period(self, p, map_choice, cap):
        """Lean period detector: (period, code-symbol sum) or halt marker.

        Returns ("period", m, s) / ("boundary", n) / ("cap", cap)."""
        system = self.system(map_choice)
        q = p
        s = 0
        for n in range(1, cap + 1):
            try:
                q, symbol = system.step(q)
            except BoundaryError:
                return ("boundary", n - 1)
            s += symbol
            if q == p:
                return ("period", n, s)
        return ("cap", cap)

    def component_of(self, p, map_choice, cap=10 ** 6):
        """The periodic component of p: the open convex polygon of points sharing
        p's code, computed by pulling sector halfplanes back along 2m+1 steps."""
        system = self.system(map_choice)
        q = p
        regions = []
        m_period = None
        for n in range(1, cap + 1):
            region, m, symbol = system.branch_at(q)
            regions.append((region, m))
            q = m(q)
            if q == p:
                m_period = n
                break
        if m_period is None:
            raise ValueError(f"{p!r} is not periodic within cap {cap}")
        # The component is the intersection of pulled-back branch regions over
        # all times.  The pullbacks repeat once the composition over r periods
        # is the identity, where r is the order of the linear part of the
        # period-m composition (for T that gives the familiar 2m bound; for T'
        # the branch rotations are 10th roots of unity, so r <= 20).
        g_period = PlanarMap.identity()
        for region, m in regions:
            g_period = m.compose(g_period)
        r = 1
        u = g_period.u
        while u != ONE:
            u = u * g_period.u
            r += 1
            if r > 20:
                raise ValueError("period composition is not of finite order")
        if g_period.u == ONE and not g_period.t.is_zero():
            raise ValueError("periodic point with translational holonomy")
        g = PlanarMap.identity()
        lines = []
        seen = set()
        for j in range(r * m_period):
            region, m = regions[j % m_period]
            ginv = g.invert()
            for line in region.lines:
                pre = ginv(line.p), ginv(line.p + line.d)
                key = None
                lpre = Line.through(pre[0], pre[1])
                # dedupe: normalize by (direction ray, offset) via exact data
                key = _line_key(lpre)
                if key not in seen:
                    seen.add(key)
                    lines.append(lpre)
            g = m.compose(g)
        poly = halfplane_intersection(lines)
        assert poly.locate(p) == "interior"
        return poly

    # -- fast integer engine -----------------------------------------------------

    def engine(self):
        if self._engine is None:
            self._engine = InducedOrbitEngine(self)
        return self._engine


def _line_key(line):
    """Canonical key for an oriented line (same left halfplane <=> same key)."""
    d = line.d
    # normalize direction: scale so the first nonzero of (n, d) is positive and
    # the vector is primitive
    n = d.n
    g = 0
    for x in n:
        g = gcd(g, abs(x))
    n = tuple(x // g for x in n)
    offset = cross(CycNum(n), line.p)  # signed offset, scales with |d| removed
    return (n, offset.n, offset.d)


class InducedOrbitEngine:
    """Integer-only iteration of T' for points with a fixed denominator.

    A point z = (sum n_k zeta^k)/D keeps the same D along the whole T'-orbit
    (branch maps are z -> 2 zeta - zeta^-i z with integer data), so a step is an
    integer matrix action plus sign tests of precompiled linear forms.
    """

    def __init__(self, table):
        A = table.A
        # sector separators L_j = line A_j -> A_{j+1}, j = 1..6
        self.sep = [
            _compile_line_form(Line(A[j], A[(j + 1) % 10] - A[j])) for j in range(1, 7)
        ]
        # V' boundary rays at A_1: interior is left of (A_1, zeta-1) and
        # left of (A_1, -(zeta^2-zeta))
        self.vp1 = _compile_line_form(Line(A[1], ZETA - ONE))
        self.vp2 = _compile_line_form(Line(A[1], -(ZETA ** 2 - ZETA)))
        # zeta^m action matrices: column k = coords of zeta^(m+k)
        from .cyclotomic import _ZPOW

        self.zmat = [
            tuple(tuple(_ZPOW[(m + k) % 10][j] for k in range(4)) for j in range(4))
            for m in range(10)
        ]
        self.two_zeta = (0, 2, 0, 0)
        self._run = None

    def classify(self, n, D):
        """Branch index 1..5 of the point n/D, or 0 if on a boundary."""
        if _eval_form(self.vp1, n, D) <= 0 or _eval_form(self.vp2, n, D) <= 0:
            return 0
        prev = _eval_form(self.sep[0], n, D)
        for i in range(1, 6):
            cur = _eval_form(self.sep[i], n, D)
            if prev < 0 and cur > 0:
                return i
            prev = cur
        return 0

    def step(self, n, D):
        """One T' step: (new numerator vector, branch symbol); symbol 0 = boundary."""
        i = self.classify(n, D)
        if i == 0:
            return n, 0
        z = self.zmat[(10 - i) % 10]
        n2 = tuple(
            D * t - (r[0] * n[0] + r[1] * n[1] + r[2] * n[2] + r[3] * n[3])
            for t, r in zip(self.two_zeta, z)
        )
        return n2, i

    def detect_period(self, p, cap):
        """('period', m, s) / ('boundary', n) / ('cap', cap) for p under T'.

        Runs the generated single-frame loop; step()/classify() above are the
        readable reference implementation it is tested against."""
        if self._run is None:
            self._run = _compile_runner(self)
        return self._run(p.n, p.d, cap)

    def code(self, p, length):
        """The first `length` T'-code symbols of p (raises on boundary)."""
        n = p.n
        D = p.d
        out = []
        for _ in range(length):
            n, i = self.step(n, D)
            if i == 0:
                raise BoundaryError("orbit hit a boundary while coding")
            out.append(i)
        return tuple(out)


def _compile_line_form(line):
    """Integer linear forms (ru, bu, rv, bv) with
    side(n/D) = sign((ru.n + bu*D) + (rv.n + bv*D)*phi)."""
    us, vs = [], []
    for k in range(4):
        u, v = cross(line.d, CycNum.zeta_pow(k)).real_pair()
        us.append(u)
        vs.append(v)
    u0, v0 = cross(line.d, line.p).real_pair()
    dens = [x.denominator for x in us + vs + [u0, v0]]
    L = 1
    for d in dens:
        L = L * d // gcd(L, d)
    ru = tuple(int(u * L) for u in us)
    rv = tuple(int(v * L) for v in vs)
    return ru, -int(u0 * L), rv, -int(v0 * L)


def _eval_form(form, n, D):
    ru, bu, rv, bv = form
    a = ru[0] * n[0] + ru[1] * n[1] + ru[2] * n[2] + ru[3] * n[3] + bu * D
    b = rv[0] * n[0] + rv[1] * n[1] + rv[2] * n[2] + rv[3] * n[3] + bv * D
    return _sign_u_plus_v_phi(a, b)


def _form_expr(form, which):
    """Source for the u- or v-part of a compiled line form, in locals a0..a3, D."""
    ru, bu, rv, bv = form
    row, b = (ru, bu) if which == "u" else (rv, bv)
    terms = [f"{c}*a{k}" for k, c in enumerate(row) if c]
    if b:
        terms.append(f"{b}*D")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def _sign_block(form, out, indent):
    """Source computing `out` = exact sign of the form at (a0..a3)/D."""
    pad = " " * indent
    return (
        f"{pad}u = {_form_expr(form, 'u')}\n"
        f"{pad}v = {_form_expr(form, 'v')}\n"
        f"{pad}if v == 0:\n"
        f"{pad}    {out} = (u > 0) - (u < 0)\n"
        f"{pad}elif u == 0:\n"
        f"{pad}    {out} = (v > 0) - (v < 0)\n"
        f"{pad}elif (u > 0) == (v > 0):\n"
        f"{pad}    {out} = 1 if u > 0 else -1\n"
        f"{pad}else:\n"
        f"{pad}    w = u*u + u*v - v*v\n"
        f"{pad}    {out} = ((w > 0) - (w < 0)) if u > 0 else ((w < 0) - (w > 0))\n"
    )


def _compile_runner(engine):
    """Generate a single-frame T'-orbit loop with all constants inlined.

    Semantics identical to repeated engine.step(); returns
    ('period', m, s) / ('boundary', n) / ('cap', cap)."""
    lines = [
        "def run(n0, D, cap):",
        "    a0, a1, a2, a3 = n0",
        "    c0, c1, c2, c3 = n0",
        "    s = 0",
        "    for k in range(1, cap + 1):",
    ]
    for form in (engine.vp1, engine.vp2):
        lines.append(_sign_block(form, "sg", 8).rstrip("\n"))
        lines.append("        if sg <= 0:")
        lines.append("            return ('boundary', k - 1, s)")
    lines.append(_sign_block(engine.sep[0], "prev", 8).rstrip("\n"))
    lines.append("        i = 0")
    for j in range(1, 6):
        lines.append(_sign_block(engine.sep[j], "cur", 8).rstrip("\n"))
        lines.append("        if prev < 0 and cur > 0:")
        lines.append(f"            i = {j}")
        lines.append("        prev = cur")
    lines.append("        if i == 0:")
    lines.append("            return ('boundary', k - 1, s)")
    first = True
    for i in range(1, 6):
        z = engine.zmat[(10 - i) % 10]
        kw = "if" if first else "elif"
        first = False
        lines.append(f"        {kw} i == {i}:")
        for j in range(4):
            terms = [f"{c}*a{k}" for k, c in enumerate(z[j]) if c]
            t = engine.two_zeta[j]
            head = f"{t}*D" if t else ""
            expr = (head + (" - (" + " + ".join(terms) + ")" if terms else "")) or "0"
            if not head and terms:
                expr = "-(" + " + ".join(terms) + ")"
            lines.append(f"            b{j} = {expr}")
        lines.append("            a0, a1, a2, a3 = b0, b1, b2, b3")
    lines.append("        s += i")
    lines.append("        if a0 == c0 and a1 == c1 and a2 == c2 and a3 == c3:")
    lines.append("            return ('period', k, s)")
    lines.append("    return ('cap', cap)")
    namespace = {}
    exec("\n".join(lines), namespace)  # constants only; no external state
    return namespace["run"]
