"""2x2 matrix helpers over any commutative coefficient ring.

Matrices are plain tuples ((a, b), (c, d)).  Entries only need +, -, *
(and scalar coercion where noted), so the same functions serve Fraction,
PAdicApprox, RealInterval and quadratic-field elements alike.
"""


def mat_mul(A, B):
    (a, b), (c, d) = A
    (e, f), (g, h) = B
    return ((a * e + b * g, a * f + b * h),
            (c * e + d * g, c * f + d * h))


def mat_add(A, B):
    (a, b), (c, d) = A
    (e, f), (g, h) = B
    return ((a + e, b + f), (c + g, d + h))


def mat_sub(A, B):
    (a, b), (c, d) = A
    (e, f), (g, h) = B
    return ((a - e, b - f), (c - g, d - h))


def mat_scale(s, A):
    (a, b), (c, d) = A
    return ((s * a, s * b), (s * c, s * d))


def mat_det(A):
    (a, b), (c, d) = A
    return a * d - b * c


def mat_tr(A):
    return A[0][0] + A[1][1]


def mat_adj(A):
    """Adjugate; equals the inverse whenever det(A) = 1."""
    (a, b), (c, d) = A
    return ((d, -b), (-c, a))


def mat_pow(A, n, one):
    """A**n for n >= 0; `one` is the ring's multiplicative identity."""
    if n < 0:
        raise ValueError("negative power needs an inverse; use mat_adj for det 1")
    R = ((one, one - one), (one - one, one))
    while n:
        if n & 1:
            R = mat_mul(R, A)
        A = mat_mul(A, A)
        n >>= 1
    return R
