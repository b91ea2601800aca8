"""Exact arithmetic in Q(zeta) for zeta = exp(i*pi/5), a primitive 10th root of unity.

Elements are stored on the rational basis {1, zeta, zeta^2, zeta^3}, reduced by
the minimal polynomial Phi_10(x) = x^4 - x^3 + x^2 - x + 1, so the representation
is unique and equality/hashing are structural.  Internally a value is a vector of
four integers over one positive common denominator; this keeps orbit iteration on
machine integers instead of per-coefficient Fraction objects.

The field contains the golden ratio phi = zeta + zeta^-1 = (1+sqrt5)/2, and every
real element is u + v*phi with u, v rational.  Sign decisions for real elements
are made by rational comparisons through phi^2 = phi + 1 (no floating point, no
precision escalation).
"""

from fractions import Fraction
from math import gcd
import cmath

import mpmath

# zeta^m on the basis {1, zeta, zeta^2, zeta^3}, for m = 0..9.
_ZPOW = (
    (1, 0, 0, 0),
    (0, 1, 0, 0),
    (0, 0, 1, 0),
    (0, 0, 0, 1),
    (-1, 1, -1, 1),
    (-1, 0, 0, 0),
    (0, -1, 0, 0),
    (0, 0, -1, 0),
    (0, 0, 0, -1),
    (1, -1, 1, -1),
)


def _sign_int(x):
    return (x > 0) - (x < 0)


def _sign_u_plus_v_phi(nu, nv):
    """Exact sign of nu + nv*phi for integers nu, nv (phi = (1+sqrt5)/2)."""
    if nv == 0:
        return _sign_int(nu)
    if nu == 0:
        return _sign_int(nv)
    if (nu > 0) == (nv > 0):
        return 1 if nu > 0 else -1
    # Mixed signs: compare |nu/nv| with phi via the norm form
    # (u + v*phi)(u + v*(1-phi)) = u^2 + uv - v^2, which is nonzero for
    # integer (u, v) != (0, 0) since phi is irrational.
    d = nu * nu + nu * nv - nv * nv
    return _sign_int(d) if nu > 0 else -_sign_int(d)


class CycNum:
    """An element of Q(zeta); doubles as a point of the plane via z = complex value."""

    __slots__ = ("n", "d")

    def __init__(self, n, d=1):
        # n: iterable of 4 ints (numerators), d: positive int (common denominator)
        n = tuple(n)
        if d < 0:
            n = tuple(-x for x in n)
            d = -d
        if d == 0:
            raise ZeroDivisionError("zero denominator")
        g = gcd(gcd(gcd(abs(n[0]), abs(n[1])), gcd(abs(n[2]), abs(n[3]))), d)
        if g > 1:
            n = tuple(x // g for x in n)
            d //= g
        if n == (0, 0, 0, 0):
            d = 1
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)

    def __setattr__(self, *a):
        raise AttributeError("CycNum is immutable")

    # -- construction -------------------------------------------------------

    @classmethod
    def of(cls, c0, c1=0, c2=0, c3=0):
        """Build from rational coefficients (ints or Fractions)."""
        cs = [Fraction(c) for c in (c0, c1, c2, c3)]
        d = 1
        for c in cs:
            d = d * c.denominator // gcd(d, c.denominator)
        return cls(tuple(int(c * d) for c in cs), d)

    @classmethod
    def zeta_pow(cls, m):
        return cls(_ZPOW[m % 10])

    # -- accessors -----------------------------------------------------------

    def coeffs(self):
        return tuple(Fraction(x, self.d) for x in self.n)

    def is_zero(self):
        return self.n == (0, 0, 0, 0)

    def is_rational(self):
        return self.n[1] == self.n[2] == self.n[3] == 0

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError("not a rational element")
        return Fraction(self.n[0], self.d)

    def is_real(self):
        # fixed by conj <=> c1 = 0 and c3 = -c2
        return self.n[1] == 0 and self.n[3] == -self.n[2]

    def real_pair(self):
        """A real element as (u, v) with value u + v*phi, u and v rational."""
        if not self.is_real():
            raise ValueError("not a real element")
        # 1, zeta^2 - zeta^3 = phi - 1 span the real subfield on this basis
        return Fraction(self.n[0] - self.n[2], self.d), Fraction(self.n[2], self.d)

    def real_sign(self):
        """Exact sign (-1, 0, +1) of a real element."""
        if not self.is_real():
            raise ValueError("real_sign of a non-real element")
        return _sign_u_plus_v_phi(self.n[0] - self.n[2], self.n[2])

    # -- field operations ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self, other
        if a.d == b.d:
            return CycNum(tuple(x + y for x, y in zip(a.n, b.n)), a.d)
        return CycNum(tuple(x * b.d + y * a.d for x, y in zip(a.n, b.n)), a.d * b.d)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(tuple(-x for x in self.n), self.d)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.n, other.n
        # convolution, degrees 0..6
        d0 = a[0] * b[0]
        d1 = a[0] * b[1] + a[1] * b[0]
        d2 = a[0] * b[2] + a[1] * b[1] + a[2] * b[0]
        d3 = a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0]
        d4 = a[1] * b[3] + a[2] * b[2] + a[3] * b[1]
        d5 = a[2] * b[3] + a[3] * b[2]
        d6 = a[3] * b[3]
        # reduce with zeta^4 = -1 + zeta - zeta^2 + zeta^3, zeta^5 = -1, zeta^6 = -zeta
        return CycNum(
            (d0 - d4 - d5, d1 + d4 - d6, d2 - d4, d3 + d4),
            self.d * other.d,
        )

    __rmul__ = __mul__

    def conj(self):
        """Complex conjugation: the field automorphism zeta -> zeta^-1."""
        c0, c1, c2, c3 = self.n
        return CycNum((c0 + c1, -c1, c1 - c3, -c1 - c2), self.d)

    def galois(self, k):
        """The automorphism zeta -> zeta^k (k coprime to 10)."""
        out = [0, 0, 0, 0]
        for i, c in enumerate(self.n):
            if c:
                p = _ZPOW[(i * k) % 10]
                for j in range(4):
                    out[j] += c * p[j]
        return CycNum(tuple(out), self.d)

    def inv(self):
        """Multiplicative inverse, via the product of Galois conjugates."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        b = self.galois(3) * self.galois(7) * self.galois(9)
        norm = self * b  # rational: the field norm
        assert norm.is_rational()
        num, den = norm.n[0], norm.d
        # b / (num/den) = b * den / num
        return CycNum(tuple(x * den for x in b.n), b.d * num)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_rational():
            if other.is_zero():
                raise ZeroDivisionError("division by zero")
            return CycNum(tuple(x * other.d for x in self.n), self.d * other.n[0])
        return self * other.inv()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inv()

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        out = _ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparisons (real elements only, for < etc.) --------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.n == other.n and self.d == other.d

    def __hash__(self):
        return hash((self.n, self.d))

    def __lt__(self, other):
        return (self - other).real_sign() < 0

    def __le__(self, other):
        return (self - other).real_sign() <= 0

    def __gt__(self, other):
        return (self - other).real_sign() > 0

    def __ge__(self, other):
        return (self - other).real_sign() >= 0

    # -- numerics (diagnostics/rendering only; never inside predicates) -------

    def __complex__(self):
        z = 0j
        for k, c in enumerate(self.n):
            if c:
                z += c * cmath.exp(1j * cmath.pi * k / 5)
        return z / self.d

    def approx(self, precision_bits=53):
        """Verified enclosure: (real interval, imag interval), mpmath.iv values."""
        iv = mpmath.iv
        old = iv.prec
        iv.prec = precision_bits
        try:
            re = iv.mpf(0)
            im = iv.mpf(0)
            for k, c in enumerate(self.n):
                if c:
                    ang = iv.pi * k / 5
                    re += c * iv.cos(ang)
                    im += c * iv.sin(ang)
            return re / self.d, im / self.d
        finally:
            iv.prec = old

    # -- serialization ---------------------------------------------------------

    def token(self):
        """The four coefficients as 'num/den' strings joined by commas."""
        return ",".join(f"{c.numerator}/{c.denominator}" for c in self.coeffs())

    @classmethod
    def from_token(cls, s):
        parts = s.split(",")
        if len(parts) != 4:
            raise ValueError(f"expected 4 comma-separated rationals, got {s!r}")
        return cls.of(*(Fraction(p) for p in parts))

    def __repr__(self):
        return f"CycNum({self.token()})"


def _coerce(x):
    if isinstance(x, CycNum):
        return x
    if isinstance(x, int):
        return CycNum((x, 0, 0, 0))
    if isinstance(x, Fraction):
        return CycNum((x.numerator, 0, 0, 0), x.denominator)
    return NotImplemented


ZERO = CycNum((0, 0, 0, 0))
ONE = CycNum((1, 0, 0, 0))
_ONE = ONE
ZETA = CycNum((0, 1, 0, 0))
# phi = zeta + zeta^-1 = (1 + sqrt5)/2
PHI = ZETA + ZETA.conj()
