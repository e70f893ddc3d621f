"""Non-discreteness certificates from exact arithmetic in a real quadratic field.

Two mechanisms, both unconditional once they fire: an elliptic element whose
trace rules out every finite rotation order (its powers then accumulate at the
identity), and Jorgensen's inequality |tr^2 A - 4| + |tr[A,B] - 2| >= 1, which
every discrete non-elementary two-generator group must satisfy.  All traces
live in Q(sqrt(d)) and every sign test is exact; no floating point anywhere.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .mat2 import mat_adj, mat_det, mat_mul, mat_tr
from .quatalg import Quaternion
from .util import is_perfect_square

NOT_FOUND = "not found"

VIOLATION = "violation"
NO_VIOLATION = "no-violation"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, eq=False)
class RealQuadElem:
    """u + v*sqrt(d) with exact rational u, v; d a positive non-square."""

    d: int
    u: Fraction
    v: Fraction

    def __post_init__(self):
        if self.d <= 0 or is_perfect_square(self.d):
            raise ValueError("d must be positive and not a square")
        object.__setattr__(self, "u", Fraction(self.u))
        object.__setattr__(self, "v", Fraction(self.v))

    def _coerce(self, other):
        if isinstance(other, RealQuadElem):
            if other.d != self.d:
                raise ValueError("mixed quadratic fields")
            return other
        return RealQuadElem(self.d, Fraction(other), 0)

    def __add__(self, other):
        other = self._coerce(other)
        return RealQuadElem(self.d, self.u + other.u, self.v + other.v)

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return RealQuadElem(self.d, -self.u, -self.v)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        return RealQuadElem(self.d, self.u * other.u + self.d * self.v * other.v,
                            self.u * other.v + self.v * other.u)

    def __rmul__(self, other):
        return self * other

    def conjugate(self) -> "RealQuadElem":
        return RealQuadElem(self.d, self.u, -self.v)

    def norm(self) -> Fraction:
        return self.u * self.u - self.d * self.v * self.v

    def inverse(self) -> "RealQuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        return RealQuadElem(self.d, self.u / n, -self.v / n)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def sign(self) -> int:
        """Exact sign of the real number u + v*sqrt(d)."""
        if self.v == 0:
            return 0 if self.u == 0 else (1 if self.u > 0 else -1)
        if self.u == 0:
            return 1 if self.v > 0 else -1
        if self.u > 0 and self.v > 0:
            return 1
        if self.u < 0 and self.v < 0:
            return -1
        # opposite signs: compare u^2 with d v^2, the larger magnitude wins
        big_u = self.u * self.u > self.d * self.v * self.v
        return (1 if self.u > 0 else -1) if big_u else (1 if self.v > 0 else -1)

    def __eq__(self, other):
        other = self._coerce(other)
        return self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.d, self.u, self.v))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def is_rational(self) -> bool:
        return self.v == 0

    def __repr__(self):
        return f"({self.u} + {self.v}*sqrt({self.d}))"


def quad(d: int, u, v=0) -> RealQuadElem:
    return RealQuadElem(d, Fraction(u), Fraction(v))


def lift_rational_matrix(rows, d: int):
    """2x2 rational matrix as a matrix over Q(sqrt(d))."""
    return tuple(tuple(quad(d, x) for x in row) for row in rows)


def real_embed(q: Quaternion):
    """Image of q under i -> diag(sqrt(a), -sqrt(a)), j -> [[0,1],[b,0]].

    Exact over Q(sqrt(a)); the determinant is nrd(q).  Needs a to be a
    positive non-square integer so the target field is real quadratic.
    """
    a, b = q.algebra.a, q.algebra.b
    if a <= 0 or a.denominator != 1 or is_perfect_square(int(a)):
        raise ValueError("algebra does not split over a real quadratic field")
    d = int(a)
    x0, x1, x2, x3 = q.coords()
    return ((quad(d, x0, x1), quad(d, x2, x3)),
            (quad(d, b * x2, -b * x3), quad(d, x0, -x1)))


@dataclass(frozen=True)
class WordElement:
    """A product of generator images, remembering its spelling."""

    word: tuple
    matrix: tuple

    @staticmethod
    def seed(label: str, matrix) -> "WordElement":
        return WordElement((label,), tuple(tuple(row) for row in matrix))

    def extend(self, label: str, rows) -> "WordElement":
        return WordElement(self.word + (label,), mat_mul(self.matrix, rows))

    @property
    def trace(self) -> RealQuadElem:
        return mat_tr(self.matrix)

    @property
    def determinant(self) -> RealQuadElem:
        return mat_det(self.matrix)


def is_infinite_elliptic_trace(t: RealQuadElem) -> bool:
    """Trace test for an infinite-order elliptic in PSL2(R), det 1.

    Elliptic needs -2 < t < 2.  Finite order would force t = 2cos(pi q/n)
    algebraic of degree at most 2, i.e. one of 0, +-1 (orders 2,3,4,6 in
    PSL), t^2 in {2, 3} (orders 8, 12) or t^2 -+ t - 1 = 0 (orders 5, 10);
    excluding all of those leaves an irrational rotation angle.
    """
    if not (-2 < t < 2):
        return False
    if t == 0 or t == 1 or t == -1:
        return False
    t2 = t * t
    if t2 == 2 or t2 == 3:
        return False
    if t2 - t - 1 == 0 or t2 + t - 1 == 0:
        return False
    return True


@dataclass(frozen=True)
class EllipticCertificate:
    word: tuple
    matrix: tuple
    trace: RealQuadElem


def find_infinite_elliptic(seeds, max_len: int, state_cap: int = 200000):
    """Breadth-first word search for a det-1 infinite-order elliptic.

    seeds are single-letter WordElements; words grow on the right in seed
    order, so the first hit is shortest and lexicographically least.  The
    alphabet should be closed under inverses or the search is one-sided.
    Returns an EllipticCertificate or NOT_FOUND.
    """
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    if max_len < 1:
        raise ValueError("max_len must be positive")
    one = seeds[0].matrix[0][0]._coerce(1)
    frontier = deque()
    seen = set()
    for s in seeds:
        if len(s.word) != 1:
            raise ValueError("seeds must be single-letter words")
        frontier.append(s)
        seen.add(s.matrix)
    states = len(seen)
    while frontier:
        w = frontier.popleft()
        if w.determinant == one and is_infinite_elliptic_trace(w.trace):
            return EllipticCertificate(w.word, w.matrix, w.trace)
        if len(w.word) >= max_len:
            continue
        for s in seeds:
            nxt = w.extend(s.word[0], s.matrix)
            if nxt.matrix in seen:
                continue
            seen.add(nxt.matrix)
            states += 1
            if states > state_cap:
                raise RuntimeError("word search state cap exceeded")
            frontier.append(nxt)
    return NOT_FOUND


def verify_elliptic(cert: EllipticCertificate, seeds) -> bool:
    """Re-multiply the word from the seed alphabet and re-test every
    exclusion; certificates must survive this from scratch."""
    table = {s.word[0]: s.matrix for s in seeds}
    m = table[cert.word[0]]
    for label in cert.word[1:]:
        m = mat_mul(m, table[label])
    if m != cert.matrix:
        return False
    one = m[0][0]._coerce(1)
    return mat_det(m) == one and is_infinite_elliptic_trace(mat_tr(m))


@dataclass(frozen=True)
class JorgensenReport:
    sum_value: RealQuadElem      # |tr^2 A - 4| + |tr[A,B] - 2|
    trace_a: RealQuadElem
    commutator_trace: RealQuadElem
    verdict: str
    reason: str


def jorgensen_violation(A: WordElement, B: WordElement) -> JorgensenReport:
    """Exact Jorgensen test for the pair (A, B), with the elementary cases
    audited rather than assumed.

    Discrete non-elementary groups satisfy sum >= 1, so sum < 1 certifies
    non-discreteness once <A,B> is known non-elementary.  With tr[A,B] != 2
    that is automatic for parabolic A (a shared fixed point would make the
    commutator parabolic or trivial) and for hyperbolic A when additionally
    tr B != 0 (axis-preserving B either fixes both endpoints, forcing
    commutator trace 2, or swaps them with trace 0).  An infinite-order
    elliptic A is non-discreteness on its own.  Anything else is reported
    as inconclusive, never upgraded.
    """
    one = A.matrix[0][0]._coerce(1)
    if A.determinant != one or B.determinant != one:
        raise ValueError("Jorgensen test needs determinant-one inputs")
    comm = mat_mul(mat_mul(A.matrix, B.matrix),
                   mat_mul(mat_adj(A.matrix), mat_adj(B.matrix)))
    ta, tc = mat_tr(A.matrix), mat_tr(comm)
    total = abs(ta * ta - 4) + abs(tc - 2)
    if total >= 1:
        return JorgensenReport(total, ta, tc, NO_VIOLATION,
                               "sum at least 1; no conclusion")
    if tc == 2:
        return JorgensenReport(total, ta, tc, INCONCLUSIVE,
                               "commutator trace 2: pair may be elementary")
    scalar = A.matrix[0][1] == 0 and A.matrix[1][0] == 0 \
        and A.matrix[0][0] == A.matrix[1][1]
    if ta * ta == 4 and not scalar:
        return JorgensenReport(total, ta, tc, VIOLATION,
                               "parabolic generator, commutator trace not 2")
    if is_infinite_elliptic_trace(ta):
        return JorgensenReport(total, ta, tc, VIOLATION,
                               "generator is an infinite-order elliptic")
    if ta * ta > 4 and mat_tr(B.matrix) != 0:
        return JorgensenReport(total, ta, tc, VIOLATION,
                               "hyperbolic generator, axis not preserved")
    return JorgensenReport(total, ta, tc, INCONCLUSIVE,
                           "cannot rule out an elementary pair")


def find_jorgensen_partner(A: WordElement, candidates):
    """First candidate (in the given order) whose pair with A is a certified
    violation; returns (WordElement, JorgensenReport) or NOT_FOUND."""
    for cand in candidates:
        report = jorgensen_violation(A, cand)
        if report.verdict == VIOLATION:
            return cand, report
    return NOT_FOUND
