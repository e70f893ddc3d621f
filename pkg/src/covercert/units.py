"""Finite slices of the norm-one unit group and their finite-level images.

Two orders are supported.  The standard order Z<1,i,j,k> is what
enumerate_units scans.  When a = 1 mod 4 there is also its 2-saturation
Z<1, (1+i)/2, j, (j+k)/2>: elements (u + vi + wj + zk)/2 with u = v and
w = z mod 2.  The distinction matters at the prime 2: the standard order's
norm-one units land in a proper subgroup of SL2(Z/2) (see
mod2_image_obstruction), so congruence surjectivity is only visible
through the saturated slice.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .modgroup import (DEFAULT_CAP, ResidueMatrix, SubgroupTable,
                       closure_incremental, enumerate_group)
from .quatalg import (INF, QuaternionAlgebra, Quaternion, SplittingMap,
                      is_division, is_square_padic, quadratic_embeds,
                      ramified_places, split_2adic)
from .util import is_perfect_square

STANDARD = "standard"
SATURATED = "2-saturated"


@dataclass(frozen=True)
class UnitSlice:
    algebra: QuaternionAlgebra
    bound: int
    order_kind: str
    elements: tuple

    def __len__(self):
        return len(self.elements)


def _require_integral_constants(D: QuaternionAlgebra):
    if D.a.denominator != 1 or D.b.denominator != 1:
        raise ValueError("integral orders need integral structure constants")
    return int(D.a), int(D.b)


def enumerate_units(D: QuaternionAlgebra, B: int) -> UnitSlice:
    """All integral quaternions of reduced norm 1 with every |coordinate|
    at most B, by solving x0^2 = 1 + a x1^2 + b x2^2 - a b x3^2 over the
    (x1,x2,x3) grid."""
    a, b = _require_integral_constants(D)
    if B < 1:
        raise ValueError("bound must be >= 1")
    found = []
    for x1 in range(-B, B + 1):
        t1 = 1 + a * x1 * x1
        for x2 in range(-B, B + 1):
            t2 = t1 + b * x2 * x2
            for x3 in range(-B, B + 1):
                rhs = t2 - a * b * x3 * x3
                if rhs < 0:
                    continue
                x0 = isqrt(rhs)
                if x0 * x0 == rhs and x0 <= B:
                    found.append((x0, x1, x2, x3))
                    if x0:
                        found.append((-x0, x1, x2, x3))
    found.sort()
    return UnitSlice(D, B, STANDARD,
                     tuple(D.element(*c) for c in found))


def in_saturated_order(q: Quaternion) -> bool:
    """Membership in Z<1, (1+i)/2, j, (j+k)/2>."""
    doubled = [2 * c for c in q.coords()]
    if any(t.denominator != 1 for t in doubled):
        return False
    u, v, w, z = (int(t) for t in doubled)
    return (u - v) % 2 == 0 and (w - z) % 2 == 0


def enumerate_units_saturated(D: QuaternionAlgebra, B: int) -> UnitSlice:
    """Norm-one elements (u + vi + wj + zk)/2 of the 2-saturated order with
    |u|,|v|,|w|,|z| <= 2B; a superset of the standard slice at bound B.

    Needs a = 1 mod 4, which is what makes the half-integral combinations
    close under multiplication.
    """
    a, b = _require_integral_constants(D)
    if a % 4 != 1:
        raise ValueError("2-saturated order needs a = 1 mod 4")
    if B < 1:
        raise ValueError("bound must be >= 1")
    H = 2 * B
    half = Fraction(1, 2)
    found = []
    for v in range(-H, H + 1):
        t1 = 4 + a * v * v
        for w in range(-H, H + 1):
            t2 = t1 + b * w * w
            for z in range(-H + (H + w) % 2, H + 1, 2):  # z = w mod 2
                rhs = t2 - a * b * z * z
                if rhs < 0:
                    continue
                u = isqrt(rhs)
                if u * u == rhs and u <= H and (u - v) % 2 == 0:
                    found.append((u, v, w, z))
                    if u:
                        found.append((-u, v, w, z))
    found.sort()
    return UnitSlice(D, B, SATURATED,
                     tuple(D.element(*(half * t for t in c)) for c in found))


def reduce_units(slice_: UnitSlice, split: SplittingMap, k: int):
    """Image of each slice element in SL2(Z/2^k) through the splitting.

    The determinant-1 invariant is asserted per element by the
    ResidueMatrix constructor.
    """
    if split.kind != "2-adic":
        raise ValueError("need the 2-adic splitting")
    if split.precision < k + 2:
        raise ValueError("insufficient splitting precision for this level")
    out = []
    for q in slice_.elements:
        mat = split.apply(q)
        entries = [e.residue(k) for row in mat for e in row]
        out.append(ResidueMatrix(*entries, 2 ** k))
    return out


def mod2_image_obstruction(D: QuaternionAlgebra) -> str:
    """Why the standard order cannot surject at level 2 when a and b are odd
    and a is a 2-adic square: with s = sqrt(a) odd, every integral unit maps
    to [[x0+x1, x2+x3], [x2+x3, x0+x1]] mod 2, a set of at most two matrices.
    Recorded in certificates that fall back to the saturated order."""
    return ("standard-order units reduce mod 2 to matrices with equal "
            "diagonal and equal off-diagonal entries; at most 2 of the 6 "
            "elements of SL2(Z/2) are reachable")


def surjects_at_level(D: QuaternionAlgebra, B: int, k: int,
                      order_kind: str = SATURATED, cap: int = DEFAULT_CAP):
    """Whether the height-B slice already generates all of SL2(Z/2^k).

    Returns (flag, image_table).  The saturated order is the default
    because the standard order provably cannot reach level 1 (see
    mod2_image_obstruction); pass order_kind="standard" to watch it fail.
    """
    if order_kind == STANDARD:
        slice_ = enumerate_units(D, B)
    elif order_kind == SATURATED:
        slice_ = enumerate_units_saturated(D, B)
    else:
        raise ValueError(f"unknown order kind {order_kind!r}")
    split = split_2adic(D, k + 4)
    mats = reduce_units(slice_, split, k)
    seen, gens = set(), []
    for g in mats:
        if g not in seen:
            seen.add(g)
            gens.append(g)
    table = closure_incremental(gens, cap)
    G = enumerate_group(2, k)
    return table.element_set == G.element_set, table


def torsion_check(D: QuaternionAlgebra, B: int) -> dict:
    """Finite-order search in the slice plus the algebra-level embedding
    criterion.

    In a division algebra a norm-one element has finite order iff its
    reduced trace lies in {-2,-1,0,1,2}, and trace +-2 forces the element
    to be +-1 (no nilpotents).  Traces -1, 0, 1 give orders 3 or 6, 4, 3.
    The embedding verdicts for sqrt(-1) and sqrt(-3) decide orders 4 and
    3/6 for the whole unit group, not just the slice.
    """
    if not is_division(D):
        raise ValueError("torsion criterion needs a division algebra")
    slice_ = enumerate_units(D, B)
    offenders = []
    for q in slice_.elements:
        t = q.trd()
        if t in (-2, 2):
            assert q in (D.one(), -D.one()), "non-central trace +-2 unit"
        elif -2 < t < 2:
            offenders.append(q.coords())
    embeds_i = quadratic_embeds(D, -1)
    embeds_w = quadratic_embeds(D, -3)
    return {
        "bound": B,
        "slice_size": len(slice_),
        "finite_order_in_slice": offenders,
        "slice_torsion_free": not offenders,
        "embeds_sqrt_minus_1": embeds_i,
        "embeds_sqrt_minus_3": embeds_w,
        "algebra_torsion_free": not embeds_i and not embeds_w,
    }


def find_example_algebra(d: int, search_bound: int = 100) -> QuaternionAlgebra:
    """Scan odd b = 3, 5, 7, ... for the smallest b making (d, b) a division
    algebra, unramified at 2 and at infinity, admitting neither sqrt(-1)
    nor sqrt(-3); d must be a non-square 2-adic square greater than 6."""
    if d <= 6:
        raise ValueError("need d > 6")
    if is_perfect_square(d):
        raise ValueError("d must not be a perfect square")
    if not is_square_padic(d, 2, 3):
        raise ValueError("d must be a 2-adic square")
    for b in range(3, search_bound + 1, 2):
        D = QuaternionAlgebra(d, b)
        ram = ramified_places(D)
        if not ram or 2 in ram or INF in ram:
            continue
        if quadratic_embeds(D, -1) or quadratic_embeds(D, -3):
            continue
        return D
    raise ValueError(f"no admissible b up to {search_bound}")
