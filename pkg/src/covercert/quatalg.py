"""Rational quaternion algebras (a,b | Q).

Basis 1, i, j, k with i^2 = a, j^2 = b, ij = -ji = k.  Everything here is
exact: element arithmetic over Fraction, ramification via the local Hilbert
symbol formulas, and explicit splittings over Q_2 (when a is a 2-adic
square) and over R (when a > 0).
"""

from dataclasses import dataclass
from fractions import Fraction

from .exact import PAdicApprox, RealInterval, is_square_padic, sqrt_padic
from .mat2 import mat_det, mat_mul, mat_scale, mat_sub
from .util import is_prime, is_rational_square, odd_prime_factors, valuation

INF = "inf"


@dataclass(frozen=True)
class QuaternionAlgebra:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.a == 0 or self.b == 0:
            raise ValueError("structure constants must be nonzero")

    def element(self, x0, x1=0, x2=0, x3=0) -> "Quaternion":
        return Quaternion(self, Fraction(x0), Fraction(x1),
                          Fraction(x2), Fraction(x3))

    def one(self) -> "Quaternion":
        return self.element(1)


@dataclass(frozen=True)
class Quaternion:
    algebra: QuaternionAlgebra
    x0: Fraction
    x1: Fraction
    x2: Fraction
    x3: Fraction

    def coords(self):
        return (self.x0, self.x1, self.x2, self.x3)

    def _check(self, other):
        if self.algebra != other.algebra:
            raise ValueError("elements of different algebras")

    def __add__(self, other):
        self._check(other)
        return Quaternion(self.algebra, self.x0 + other.x0, self.x1 + other.x1,
                          self.x2 + other.x2, self.x3 + other.x3)

    def __neg__(self):
        return Quaternion(self.algebra, -self.x0, -self.x1, -self.x2, -self.x3)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        a, b = self.algebra.a, self.algebra.b
        x0, x1, x2, x3 = self.coords()
        y0, y1, y2, y3 = other.coords()
        # jk = -b i, kj = b i, ik = a j, ki = -a j
        return Quaternion(
            self.algebra,
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )

    def scale(self, c) -> "Quaternion":
        c = Fraction(c)
        return Quaternion(self.algebra, c * self.x0, c * self.x1,
                          c * self.x2, c * self.x3)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.algebra, self.x0, -self.x1, -self.x2, -self.x3)

    def nrd(self) -> Fraction:
        a, b = self.algebra.a, self.algebra.b
        return (self.x0 ** 2 - a * self.x1 ** 2 - b * self.x2 ** 2
                + a * b * self.x3 ** 2)

    def trd(self) -> Fraction:
        return 2 * self.x0

    def inverse(self) -> "Quaternion":
        n = self.nrd()
        if n == 0:
            raise ZeroDivisionError("norm-zero element")
        return self.conjugate().scale(Fraction(1, 1) / n)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords())


def _legendre(u: int, p: int) -> int:
    t = pow(u % p, (p - 1) // 2, p)
    return -1 if t == p - 1 else t


def _square_class_int(r: Fraction) -> int:
    # num/den and num*den differ by den^2: same class at every place
    return r.numerator * r.denominator


def hilbert_symbol(a, b, place) -> int:
    """(a,b)_v = +1 iff z^2 = a x^2 + b y^2 has a nontrivial solution over
    the completion at v; v is a prime or the string "inf"."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("arguments must be nonzero")
    if place == INF:
        return -1 if (a < 0 and b < 0) else 1
    p = place
    if not is_prime(p):
        raise ValueError(f"{p} is not a prime")
    A, B = _square_class_int(a), _square_class_int(b)
    alpha, beta = valuation(A, p), valuation(B, p)
    u = A // p ** alpha
    v = B // p ** beta
    if p == 2:
        eps = ((u - 1) // 2) * ((v - 1) // 2)
        omega_u = (u * u - 1) // 8
        omega_v = (v * v - 1) // 8
        e = eps + alpha * omega_v + beta * omega_u
        return -1 if e % 2 else 1
    sign = 1
    if alpha % 2 and beta % 2:
        sign *= _legendre(-1, p)
    if beta % 2:
        sign *= _legendre(u, p)
    if alpha % 2:
        sign *= _legendre(v, p)
    return sign


def ramified_places(D: QuaternionAlgebra):
    """Sorted list of places with symbol -1; primes ascending, "inf" last.

    Only finitely many places can ramify: at any odd p dividing neither
    numerator nor denominator of a and b both valuations vanish and the
    symbol is +1.  The product formula is asserted as a self-check.
    """
    candidates = {2}
    for r in (D.a, D.b):
        candidates.update(odd_prime_factors(abs(_square_class_int(r))))
    ram = sorted(p for p in candidates if hilbert_symbol(D.a, D.b, p) == -1)
    product = 1
    for p in candidates:
        product *= hilbert_symbol(D.a, D.b, p)
    at_inf = hilbert_symbol(D.a, D.b, INF)
    product *= at_inf
    assert product == 1, "Hilbert product formula violated"
    if at_inf == -1:
        ram.append(INF)
    assert len(ram) % 2 == 0, "ramification set must have even cardinality"
    return ram


def is_division(D: QuaternionAlgebra) -> bool:
    return bool(ramified_places(D))


def quadratic_embeds(D: QuaternionAlgebra, e) -> bool:
    """Whether Q(sqrt(e)) embeds into D.

    For a division algebra this holds iff e is a non-square in the completion
    at every ramified place (at "inf": e < 0, so that the completion of the
    field is C).  A split algebra is M_2(Q) and admits every quadratic field.
    """
    e = Fraction(e)
    if e == 0 or is_rational_square(e):
        raise ValueError("e must generate a quadratic field")
    for v in ramified_places(D):
        if v == INF:
            if e > 0:
                return False
        elif is_square_padic(e, v, 3):
            return False
    return True


@dataclass(frozen=True)
class SplittingMap:
    """Embedding of the algebra into 2x2 matrices over Q_2 or R.

    i maps to diag(s, -s) with s a square root of a in the target field and
    j to [[0,1],[b,0]]; then q = x0 + x1 i + x2 j + x3 k goes to
    [[x0 + s x1, x2 + s x3], [b (x2 - s x3), x0 - s x1]] and det = nrd(q).
    """
    algebra: QuaternionAlgebra
    kind: str  # "2-adic" or "real"
    s: object
    precision: int

    def _lift(self, r):
        if self.kind == "2-adic":
            return PAdicApprox.from_rational(r, 2, self.precision)
        return RealInterval.from_rational(r, self.precision)

    def image_i(self):
        z = self._lift(0)
        return ((self.s, z), (z, -self.s))

    def image_j(self):
        z, o = self._lift(0), self._lift(1)
        return ((z, o), (self._lift(self.algebra.b), z))

    def apply(self, q: Quaternion):
        if q.algebra != self.algebra:
            raise ValueError("element of a different algebra")
        b = self._lift(q.algebra.b)
        x0, x1, x2, x3 = (self._lift(c) for c in q.coords())
        return ((x0 + self.s * x1, x2 + self.s * x3),
                (b * (x2 - self.s * x3), x0 - self.s * x1))

    def verify(self, samples=()) -> dict:
        """Check the defining relations and det = nrd residuals; raises on
        failure, returns a small report otherwise."""
        a, b = self.algebra.a, self.algebra.b
        I, J = self.image_i(), self.image_j()
        aId = mat_scale(self._lift(a), ((self._lift(1), self._lift(0)),
                                        (self._lift(0), self._lift(1))))
        bId = mat_scale(self._lift(b), ((self._lift(1), self._lift(0)),
                                        (self._lift(0), self._lift(1))))
        checks = {
            "i^2 - a": mat_sub(mat_mul(I, I), aId),
            "j^2 - b": mat_sub(mat_mul(J, J), bId),
            "ij + ji": mat_sub(mat_mul(I, J), mat_scale(self._lift(-1),
                                                        mat_mul(J, I))),
        }
        for name, R in checks.items():
            for row in R:
                for entry in row:
                    self._assert_vanishes(entry, name)
        for q in samples:
            diff = mat_det(self.apply(q)) - self._lift(q.nrd())
            self._assert_vanishes(diff, f"det - nrd at {q.coords()}")
        return {"kind": self.kind, "precision": self.precision,
                "relations": sorted(checks), "det_samples": len(samples)}

    def _assert_vanishes(self, entry, name):
        # slack of 4 digits absorbs denominators of half-integral samples
        if self.kind == "2-adic":
            ok = entry.valuation_at_least(self.precision - 4)
        else:
            ok = entry.contains_zero() and entry.width() < Fraction(1, 2 ** 30)
        if not ok:
            raise AssertionError(f"splitting relation {name} fails: {entry}")


def split_padic(D: QuaternionAlgebra, p: int, precision: int) -> SplittingMap:
    if p != 2:
        raise ValueError("only the 2-adic splitting is provided")
    if hilbert_symbol(D.a, D.b, 2) != 1:
        raise ValueError("algebra is ramified at 2; no splitting exists")
    if not is_square_padic(D.a, 2, max(precision, 3)):
        raise ValueError("a is not a 2-adic square; this construction "
                         "requires the diagonal form of i")
    s = sqrt_padic(D.a, 2, precision + 2)
    return SplittingMap(D, "2-adic", s, precision + 2)


def split_2adic(D: QuaternionAlgebra, precision: int) -> SplittingMap:
    return split_padic(D, 2, precision)


def split_real(D: QuaternionAlgebra, bits: int = 64) -> SplittingMap:
    if D.a <= 0:
        raise ValueError("real splitting with diagonal i needs a > 0")
    s = RealInterval.exact(D.a).sqrt(bits)
    return SplittingMap(D, "real", s, bits)
