"""Self-similar structure of (X, f): periodic cores, the contraction Gamma,
and the exact aperiodic point p_inf.

All angles in the figure are multiples of pi/5, so angle bisectors are exact:
if the rays at a vertex are d and (scale)*zeta^m*d, the bisector direction is
d*(1 + zeta^m).  The three periodic cores are

  * omega_a:  regular decagon about O_a (bisector intersection for angles ABE
    and FDA), with W_3 = C; f-code "a";
  * omega_ba: regular pentagon about the incenter of CED with one side on CD
    (circumradius = inradius * 2/phi, exact); f-code "ba";
  * omega_ab = f(omega_ba), inside ABE; f-code "ab".

Gamma is the mirror similarity A -> A, B -> W_7 (verified on C -> W_8 and
D -> W_9); the first return of f to Gamma(X) is conjugate to f through Gamma
with path substitution sigma(a) = aababaa, sigma(b) = aaa.  The composition
Gamma_1 = Gamma o f^-1 o Gamma o f is a genuine contraction with a fixed point
p_inf whose f-orbit never repeats; the certificate checks a finite prefix of
that statement exactly.
"""

from dataclasses import dataclass

from .cyclotomic import CycNum, ZETA, ONE
from .geometry import (
    BoundaryError,
    ConvexRegion,
    Line,
    PlanarMap,
    cross,
    dot,
    intersect_lines,
    map_from_pairs,
)
from .returns import DartQuad, ReturnSystem, SIGMA, _branch_locate


def bisector(vertex, p1, p2):
    """The internal bisector at `vertex` of the angle p1-vertex-p2, exact.

    Requires the angle to be a multiple of pi/5 (true throughout this figure)."""
    d1 = p1 - vertex
    d2 = p2 - vertex
    for m in range(1, 10):
        r = ZETA ** m * d1
        if cross(r, d2).is_zero() and dot(r, d2).real_sign() > 0:
            return Line(vertex, d1 * (ONE + ZETA ** m))
    raise ValueError("angle is not a positive multiple of pi/5")


def incenter(a, b, c):
    """Incenter of a triangle whose angles are multiples of pi/5."""
    return intersect_lines(bisector(a, b, c), bisector(b, c, a))


def foot_of_perpendicular(p, line):
    d = line.d
    s = dot(d, p - line.p) / dot(d, d)
    return line.p + s * d


@dataclass
class OmegaComponents:
    omega_a: ConvexRegion
    omega_ba: ConvexRegion
    omega_ab: ConvexRegion
    O_a: CycNum
    O_ba: CycNum
    O_ab: CycNum


def omega_components(x):
    """The three periodic cores of (X, f), with exact invariance checks."""
    q = x.quad
    A, B, C, D, E, F = q.A, q.B, q.C, q.D, q.E, q.F
    # O_a: meet of the bisectors of angle ABE (at B) and angle FDA (at D)
    O_a = intersect_lines(bisector(B, A, E), bisector(D, F, A))
    W = [O_a + ZETA ** (k - 3) * (C - O_a) for k in range(10)]
    omega_a = ConvexRegion.from_vertices(W)

    # omega_ba: regular pentagon about the incenter of CED, one side on CD
    O_ba = incenter(C, E, D)
    foot = foot_of_perpendicular(O_ba, Line.through(C, D))
    two_over_phi = 2 * (ZETA + ZETA.conj()) - 2  # 2/phi = 2*phi - 2
    v0 = O_ba + two_over_phi * ZETA * (foot - O_ba)
    vs = [O_ba + ZETA ** (2 * k) * (v0 - O_ba) for k in range(5)]
    omega_ba = ConvexRegion.from_vertices(vs)

    O_ab = x.f_b(O_ba)
    omega_ab = omega_ba.transform(x.f_b)

    # exact invariances (vertex-set equalities); these fail loudly if any
    # anchor choice above were wrong
    assert x.f_a(O_a) == O_a
    assert omega_a.transform(x.f_a).vertex_set() == omega_a.vertex_set()
    assert omega_ab.transform(x.f_a).vertex_set() == omega_ba.vertex_set()
    assert x.f_a(O_ab) == O_ba
    for v in omega_a.vertices:
        assert q.big.locate(v) != "outside"
    for v in omega_ba.vertices:
        assert q.small.locate(v) != "outside"
    return OmegaComponents(omega_a, omega_ba, omega_ab, O_a, O_ba, O_ab)


def build_Gamma(x, omegas=None):
    """The orientation-reversing contraction Gamma: A -> A, B -> W_7 (C -> W_8
    and D -> W_9 verified exactly); scale^2 = lambda^2 < 1."""
    om = omegas or omega_components(x)
    q = x.quad
    W = om.omega_a.vertices
    w_index = {}  # reconstruct W_k indexing from W_3 = C
    i3 = W.index(q.C)
    for k in range(10):
        w_index[(3 + k) % 10] = W[(i3 + k) % 10]
    gamma = map_from_pairs(
        [(q.A, q.A), (q.B, w_index[7]), (q.C, w_index[8]), (q.D, w_index[9])],
        "mirror",
    )
    lam2 = gamma.scale_sq()
    assert (ONE - lam2).real_sign() > 0, "Gamma must be a contraction"
    return gamma


def gamma_return_system(x, gamma):
    """First return of f to Gamma(X)."""
    q = x.quad
    gx = DartQuad(gamma(q.A), gamma(q.B), gamma(q.C), gamma(q.D))
    return ReturnSystem(x.pieces, _branch_locate(gx), cap=7, name="f_Gamma"), gx


def verify_gamma_return(x, gamma, points):
    """For each sample p: the f-return of Gamma(p) into Gamma(X) is Gamma(f(p)),
    the return time is 7 from ABE / 3 from CED, and the path spells sigma."""
    system, _ = gamma_return_system(x, gamma)
    failures = []
    for p in points:
        try:
            fp, symbol = x.step_f(p)
            landing, time, path = system.first_return(gamma(p))
        except BoundaryError:
            continue
        expected_time = 7 if symbol == "a" else 3
        if landing != gamma(fp):
            failures.append(("conjugacy", p))
        elif time != expected_time or path != SIGMA((symbol,)):
            failures.append(("path", p))
    return failures


def verify_sigma_codes(x, gamma, points, window=30):
    """Windowed rho_X-code of Gamma(p) equals sigma(code of p)."""
    failures = []
    for p in points:
        try:
            word = x.code_rho_X(p, window)
            image = SIGMA(word)
            code = x.code_rho_X(gamma(p), len(image))
        except BoundaryError:
            continue
        if code != image:
            failures.append(("sigma", p))
    return failures


def rank(x, gamma, q):
    """Maximal k with Gamma^-k(q) in X (as an open point set)."""
    ginv = gamma.invert()
    k = 0
    p = q
    if x.quad.locate_region(p) != "interior":
        raise ValueError("rank is defined for points of X")
    while True:
        p = ginv(p)
        if x.quad.locate_region(p) != "interior":
            return k
        k += 1


def orbit_rank(x, gamma, q, cap=10 ** 4):
    """Max rank along one exact f-period of q."""
    ranks = [rank(x, gamma, q)]
    p = q
    for _ in range(cap):
        p, _ = x.step_f(p)
        if p == q:
            return max(ranks)
        ranks.append(rank(x, gamma, p))
    raise ValueError(f"point is not f-periodic within cap {cap}")


@dataclass
class AperiodicCertificate:
    p_inf: CycNum
    mu: CycNum  # spiral factor of Gamma_1
    branch_pair: tuple  # (symbol used for f, symbol used for f^-1)
    nesting_checked: int
    steps_checked: int


def aperiodic_point(x, gamma=None, steps=10 ** 4, nesting=8):
    """Exact fixed point of Gamma_1 = Gamma o f^-1 o Gamma o f, with the
    finite certificate: Gamma_1^j(X) strictly nested around p_inf for
    j <= nesting, and `steps` exact f-iterates with no return and no
    boundary hit.

    The branch ambiguity inside Gamma_1 is resolved by trying all four
    branch pairs and keeping the (unique) one whose fixed point passes."""
    gamma = gamma or build_Gamma(x)
    q = x.quad
    branch = {"a": x.f_a, "b": x.f_b}
    candidates = []
    for s1, g1 in branch.items():
        for s2, g2 in branch.items():
            m = gamma.compose(g2.invert()).compose(gamma).compose(g1)
            assert m.kind == "direct"
            p = m.fixed_point()
            if q.locate_region(p) != "interior":
                continue
            if _nesting_ok(q, m, p, nesting):
                candidates.append((s1, s2, m, p))
    if len(candidates) != 1:
        raise AssertionError(
            f"expected exactly one viable Gamma_1 branch pair, got {len(candidates)}"
        )
    s1, s2, m, p_inf = candidates[0]
    lam2 = gamma.scale_sq()
    assert m.scale_sq() == lam2 * lam2  # |mu|^2 = lambda^4

    p = p_inf
    for n in range(1, steps + 1):
        p, _ = x.step_f(p)  # raises BoundaryError on a boundary landing
        if p == p_inf:
            raise AssertionError(f"p_inf returned to itself at step {n}")
    return AperiodicCertificate(
        p_inf=p_inf,
        mu=m.u,
        branch_pair=(s1, s2),
        nesting_checked=nesting,
        steps_checked=steps,
    )


def _nesting_ok(quad, m, p, depth):
    """Gamma_1^j(X) strictly decreasing with p interior to each, j <= depth."""
    current = quad
    for _ in range(depth):
        vs = [m(v) for v in current.vertices()]
        nxt = DartQuad(*vs)
        for v in vs:
            if current.locate_region(v) == "outside":
                return False
        if nxt.locate_region(p) != "interior":
            return False
        current = nxt
    return True
