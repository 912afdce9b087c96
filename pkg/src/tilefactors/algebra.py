"""Exact arithmetic for dilation constants and abelianization matrices.

Everything here is certified arithmetic: algebraic numbers are carried
as an integer minimal polynomial plus a shrinking rational isolating
interval, and field elements as rational coordinate vectors over the
power basis of the dilation.  No floating point enters any decision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from .errors import InternalCheckError, PreconditionError

IntMatrix = tuple[tuple[int, ...], ...]
Elt = tuple[Fraction, ...]


# ---------------------------------------------------------------------------
# rational polynomials, ascending coefficient order


def poly_trim(p: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(p)
    while n > 0 and p[n - 1] == 0:
        n -= 1
    return tuple(p[:n])


def poly_eval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_divmod(
    num: Sequence[Fraction], den: Sequence[Fraction]
) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    num = list(num)
    dn = len(den)
    if dn == 0:
        raise ZeroDivisionError("polynomial division by zero")
    lead = den[dn - 1]
    quot = [Fraction(0)] * max(0, len(num) - dn + 1)
    for i in range(len(num) - dn, -1, -1):
        c = num[i + dn - 1] / lead
        if c == 0:
            continue
        quot[i] = c
        for j in range(dn):
            num[i + j] -= c * den[j]
    return poly_trim(quot), poly_trim(num)


def _poly_ext_gcd(
    a: Sequence[Fraction], b: Sequence[Fraction]
) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Return (g, u, v) with u*a + v*b = g, g monic."""
    r0, r1 = poly_trim(a), poly_trim(b)
    u0: tuple[Fraction, ...] = (Fraction(1),)
    u1: tuple[Fraction, ...] = ()
    v0: tuple[Fraction, ...] = ()
    v1: tuple[Fraction, ...] = (Fraction(1),)

    def p_sub(x: Sequence[Fraction], y: Sequence[Fraction]) -> tuple[Fraction, ...]:
        n = max(len(x), len(y))
        return poly_trim(
            [
                (x[i] if i < len(x) else Fraction(0)) - (y[i] if i < len(y) else Fraction(0))
                for i in range(n)
            ]
        )

    def p_mul(x: Sequence[Fraction], y: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if not x or not y:
            return ()
        out = [Fraction(0)] * (len(x) + len(y) - 1)
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            for j, yj in enumerate(y):
                out[i + j] += xi * yj
        return poly_trim(out)

    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, p_sub(u0, p_mul(q, u1))
        v0, v1 = v1, p_sub(v0, p_mul(q, v1))
    if not r0:
        raise ZeroDivisionError("gcd of zero polynomials")
    lead = r0[-1]
    scale = lambda p: tuple(c / lead for c in p)  # noqa: E731
    return scale(r0), scale(u0), scale(v0)


# ---------------------------------------------------------------------------
# interval helpers (closed rational intervals)


def _iv_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _iv_mul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(ps), max(ps))


def _iv_eval(p: Sequence[Fraction], iv) -> tuple[Fraction, Fraction]:
    acc = (Fraction(0), Fraction(0))
    for c in reversed(p):
        acc = _iv_add(_iv_mul(acc, iv), (c, c))
    return acc


# ---------------------------------------------------------------------------
# algebraic reals


@dataclass
class AlgebraicReal:
    """A real algebraic number: irreducible monic minpoly (ascending
    integer coefficients) plus an isolating interval.

    For degree one the interval is the exact rational point.  For higher
    degree the polynomial has opposite signs at the two endpoints and
    exactly one root between them; refine() bisects in place.
    """

    minpoly: tuple[int, ...]
    lo: Fraction
    hi: Fraction

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    def is_rational(self) -> bool:
        return self.degree == 1

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise InternalCheckError("rational_value on irrational algebraic number")
        # monic x + c0  ->  root -c0
        return Fraction(-self.minpoly[0], self.minpoly[1])

    def _fracpoly(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c) for c in self.minpoly)

    def refine(self) -> None:
        if self.is_rational():
            v = self.rational_value()
            self.lo = self.hi = v
            return
        p = self._fracpoly()
        mid = (self.lo + self.hi) / 2
        s_mid = poly_eval(p, mid)
        if s_mid == 0:
            raise InternalCheckError("irreducible polynomial with rational root")
        s_lo = poly_eval(p, self.lo)
        if (s_lo < 0) == (s_mid < 0):
            self.lo = mid
        else:
            self.hi = mid

    def refine_below_width(self, width: Fraction) -> None:
        guard = 0
        while self.hi - self.lo > width:
            self.refine()
            guard += 1
            if guard > 100000:
                raise InternalCheckError("interval refinement did not converge")

    def sign_of_poly(self, g: Sequence[Fraction]) -> int:
        """Exact sign of g(root) for rational-coefficient g reduced here."""
        g = poly_trim(g)
        if not g:
            return 0
        if self.is_rational():
            v = poly_eval(g, self.rational_value())
            return (v > 0) - (v < 0)
        # reduce mod minpoly so degree < d, then zero-test exactly
        _, rem = _poly_divmod(g, self._fracpoly())
        if not rem:
            return 0
        guard = 0
        while True:
            lo, hi = _iv_eval(rem, (self.lo, self.hi))
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            self.refine()
            guard += 1
            if guard > 100000:
                raise InternalCheckError("sign evaluation did not converge")

    def cmp_rational(self, q: Fraction) -> int:
        return self.sign_of_poly((Fraction(-q), Fraction(1)))

    def __float__(self) -> float:
        self.refine_below_width(Fraction(1, 10**15))
        return float((self.lo + self.hi) / 2)


# ---------------------------------------------------------------------------
# the number field Q(dilation)


class NumberField:
    """Arithmetic in Q(x)/(minpoly) with exact sign decisions.

    Elements are coordinate tuples over the power basis 1, x, ..,
    x^(d-1).  Signs are decided by reducing the representing polynomial
    and shrinking the root's isolating interval, so comparisons are
    certified, never numeric guesses.
    """

    def __init__(self, root: AlgebraicReal):
        self.root = root
        self.minpoly = root.minpoly
        self.degree = len(root.minpoly) - 1
        if self.degree < 1:
            raise PreconditionError("number field needs a nonconstant minimal polynomial")
        d = self.degree
        # reduction table: x^(d+k) as a vector over the power basis
        self._red: list[tuple[Fraction, ...]] = []
        top = [Fraction(-c, self.minpoly[d]) for c in self.minpoly[:d]]
        cur = tuple(top)
        self._red.append(cur)
        for _ in range(d - 2 if d >= 2 else 0):
            shifted = [Fraction(0)] + list(cur[: d - 1])
            carry = cur[d - 1]
            nxt = [shifted[i] + carry * top[i] for i in range(d)]
            self._red.append(tuple(nxt))

    # construction -----------------------------------------------------

    def zero(self) -> Elt:
        return tuple(Fraction(0) for _ in range(self.degree))

    def one(self) -> Elt:
        return self.from_rational(Fraction(1))

    def from_rational(self, q: Fraction | int) -> Elt:
        v = [Fraction(0)] * self.degree
        v[0] = Fraction(q)
        return tuple(v)

    def generator(self) -> Elt:
        """The dilation itself as a field element."""
        if self.degree == 1:
            return (self.root.rational_value(),)
        v = [Fraction(0)] * self.degree
        v[1] = Fraction(1)
        return tuple(v)

    # ring operations ---------------------------------------------------

    def add(self, a: Elt, b: Elt) -> Elt:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: Elt, b: Elt) -> Elt:
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a: Elt) -> Elt:
        return tuple(-x for x in a)

    def scale(self, q: Fraction | int, a: Elt) -> Elt:
        q = Fraction(q)
        return tuple(q * x for x in a)

    def mul(self, a: Elt, b: Elt) -> Elt:
        d = self.degree
        if d == 1:
            return (a[0] * b[0],)
        conv = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y == 0:
                    continue
                conv[i + j] += x * y
        out = list(conv[:d])
        for k in range(d, 2 * d - 1):
            c = conv[k]
            if c == 0:
                continue
            red = self._red[k - d]
            for i in range(d):
                out[i] += c * red[i]
        return tuple(out)

    def inv(self, a: Elt) -> Elt:
        if self.is_zero(a):
            raise ZeroDivisionError("field inverse of zero")
        if self.degree == 1:
            return (1 / a[0],)
        g, u, _ = _poly_ext_gcd(poly_trim(a), tuple(Fraction(c) for c in self.minpoly))
        if g != (Fraction(1),):
            raise InternalCheckError("reducible minimal polynomial in field inverse")
        out = list(u) + [Fraction(0)] * (self.degree - len(u))
        return tuple(out[: self.degree])

    def div(self, a: Elt, b: Elt) -> Elt:
        return self.mul(a, self.inv(b))

    # decisions ----------------------------------------------------------

    def is_zero(self, a: Elt) -> bool:
        return all(x == 0 for x in a)

    def eq(self, a: Elt, b: Elt) -> bool:
        return a == b

    def sign(self, a: Elt) -> int:
        if self.degree == 1:
            return (a[0] > 0) - (a[0] < 0)
        if self.is_zero(a):
            return 0
        return self.root.sign_of_poly(a)

    def cmp(self, a: Elt, b: Elt) -> int:
        return self.sign(self.sub(a, b))

    def maximum(self, a: Elt, b: Elt) -> Elt:
        return a if self.cmp(a, b) >= 0 else b

    def minimum(self, a: Elt, b: Elt) -> Elt:
        return a if self.cmp(a, b) <= 0 else b

    # display -------------------------------------------------------------

    def to_float(self, a: Elt) -> float:
        if self.degree == 1:
            return float(a[0])
        self.root.refine_below_width(Fraction(1, 10**12))
        x = (self.root.lo + self.root.hi) / 2
        return float(poly_eval(a, x))

    def to_str(self, a: Elt) -> str:
        if self.degree == 1:
            return str(a[0])
        parts = []
        for i, c in enumerate(a):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*L")
            else:
                parts.append(f"{c}*L^{i}")
        return " + ".join(parts) if parts else "0"


def elt_to_json(a: Elt) -> list[str]:
    return [str(c) for c in a]


# ---------------------------------------------------------------------------
# integer matrices


def mat_validate(M: Sequence[Sequence[int]]) -> IntMatrix:
    rows = tuple(tuple(int(x) for x in row) for row in M)
    m = len(rows)
    if m == 0 or any(len(r) != m for r in rows):
        raise PreconditionError("matrix must be square and nonempty")
    return rows


def mat_mul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    m = len(A)
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(m)) for j in range(m)) for i in range(m)
    )


def mat_pow(M: IntMatrix, n: int) -> IntMatrix:
    m = len(M)
    P = tuple(tuple(1 if i == j else 0 for j in range(m)) for i in range(m))
    B = M
    while n > 0:
        if n & 1:
            P = mat_mul(P, B)
        n >>= 1
        if n:
            B = mat_mul(B, B)
    return P


def mat_transpose(M: IntMatrix) -> IntMatrix:
    m = len(M)
    return tuple(tuple(M[j][i] for j in range(m)) for i in range(m))


def matrix_is_primitive(M: Sequence[Sequence[int]]) -> bool:
    """Entrywise M^k > 0 for some k up to the Wielandt bound (m-1)^2 + 1."""
    rows = mat_validate(M)
    m = len(rows)
    if any(x < 0 for r in rows for x in r):
        return False
    adj = tuple(tuple(1 if x > 0 else 0 for x in r) for r in rows)
    P = adj
    for _ in range((m - 1) ** 2 + 1):
        if all(all(x for x in r) for r in P):
            return True
        P = tuple(
            tuple(1 if any(P[i][k] and adj[k][j] for k in range(m)) else 0 for j in range(m))
            for i in range(m)
        )
    return False


def rank_q(M: Sequence[Sequence[int | Fraction]]) -> int:
    rows = [[Fraction(x) for x in r] for r in M]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    col = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def rank_f2(M: Sequence[Sequence[int]]) -> int:
    pivots: list[int] = []
    for row in M:
        bits = 0
        for j, x in enumerate(row):
            if x & 1:
                bits |= 1 << j
        for p in pivots:
            low = p & (-p)
            if bits & low:
                bits ^= p
        if bits:
            pivots.append(bits)
    return len(pivots)


def eventual_rank(M: Sequence[Sequence[int]], field: str = "Q") -> int:
    """Rank of M^m (m the size), i.e. the rank after all nilpotency dies."""
    rows = mat_validate(M)
    P = mat_pow(rows, len(rows))
    if field == "Q":
        return rank_q(P)
    if field == "F2":
        return rank_f2(P)
    raise PreconditionError(f"unknown coefficient field {field!r}")


# ---------------------------------------------------------------------------
# sympy bridges: characteristic polynomial, factorization, root isolation


_X = sympy.Symbol("x")


def charpoly_coeffs(M: IntMatrix) -> tuple[int, ...]:
    """Ascending integer coefficients of det(xI - M), monic."""
    poly = sympy.Matrix([list(r) for r in M]).charpoly(_X)
    desc = [int(c) for c in poly.all_coeffs()]
    return tuple(reversed(desc))


def factor_int_poly(coeffs: Sequence[int]) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Irreducible monic factors (ascending coefficients) with multiplicities."""
    p = sympy.Poly(list(reversed([int(c) for c in coeffs])), _X, domain="ZZ")
    const, factors = p.factor_list()
    if const != 1:
        raise InternalCheckError("non-monic characteristic polynomial factorization")
    out = []
    for f, mult in factors:
        fc = tuple(reversed([int(c) for c in sympy.Poly(f, _X).all_coeffs()]))
        out.append((fc, int(mult)))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return tuple(out)


def real_root_intervals(
    coeffs: Sequence[int], eps: Fraction | None = None
) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for the real roots, ascending."""
    p = sympy.Poly(list(reversed([int(c) for c in coeffs])), _X, domain="ZZ")
    kw = {}
    if eps is not None:
        kw["eps"] = sympy.Rational(eps.numerator, eps.denominator)
    ivs = p.intervals(**kw)
    out = []
    for (a, b), _mult in ivs:
        out.append((Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))))
    return out


def _complex_root_rectangles(
    coeffs: Sequence[int], eps: Fraction
) -> list[tuple[Fraction, Fraction, Fraction, Fraction]]:
    """Isolating rectangles (re_lo, re_hi, im_lo, im_hi) for non-real roots."""
    p = sympy.Poly(list(reversed([int(c) for c in coeffs])), _X, domain="ZZ")
    reals, complexes = p.intervals(all=True, eps=sympy.Rational(eps.numerator, eps.denominator))
    del reals
    out = []
    for ((u, v), _mult) in complexes:
        re_lo = Fraction(int(sympy.re(u).p), int(sympy.re(u).q))
        im_lo = Fraction(int(sympy.im(u).p), int(sympy.im(u).q))
        re_hi = Fraction(int(sympy.re(v).p), int(sympy.re(v).q))
        im_hi = Fraction(int(sympy.im(v).p), int(sympy.im(v).q))
        out.append((re_lo, re_hi, im_lo, im_hi))
    return out


def largest_real_root(coeffs: Sequence[int]) -> AlgebraicReal | None:
    ivs = real_root_intervals(coeffs)
    if not ivs:
        return None
    lo, hi = ivs[-1]
    return AlgebraicReal(minpoly=tuple(int(c) for c in coeffs), lo=lo, hi=hi)


# ---------------------------------------------------------------------------
# Pisot certification


def _iv_square_bounds(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    if lo <= 0 <= hi:
        return (Fraction(0), max(lo * lo, hi * hi))
    return (min(lo * lo, hi * hi), max(lo * lo, hi * hi))


def is_pisot(a: AlgebraicReal) -> bool:
    """True iff a > 1 and every conjugate lies strictly inside the unit disk.

    Degree two is decided by exact comparison of the norm against the
    root; the self-reciprocal shortcut rules the remaining polynomials
    that could carry unit-modulus conjugates, so the interval refinement
    below always terminates.
    """
    if a.cmp_rational(Fraction(1)) <= 0:
        raise PreconditionError("Pisot test needs a real algebraic number exceeding 1")
    d = a.degree
    if d == 1:
        return True
    coeffs = a.minpoly
    if d == 2:
        # the second root has modulus |c0| / root
        return a.cmp_rational(Fraction(abs(coeffs[0]))) > 0
    rev = tuple(reversed(coeffs))
    if coeffs == rev or coeffs == tuple(-c for c in rev):
        # roots come in r, 1/r pairs: some conjugate has modulus >= 1
        return False

    eps = Fraction(1, 4)
    for _ in range(80):
        ok = True
        a.refine_below_width(eps)
        reals = real_root_intervals(coeffs, eps=eps)
        own = [iv for iv in reals if iv[0] <= a.hi and iv[1] >= a.lo]
        if len(own) != 1:
            eps /= 16
            continue
        for lo, hi in reals:
            if (lo, hi) == own[0]:
                continue
            if hi < 1 and lo > -1:
                continue
            if lo >= 1 or hi <= -1:
                return False
            ok = False
        for re_lo, re_hi, im_lo, im_hi in _complex_root_rectangles(coeffs, eps):
            m_lo_r, m_hi_r = _iv_square_bounds(re_lo, re_hi)
            m_lo_i, m_hi_i = _iv_square_bounds(im_lo, im_hi)
            mod2_lo = m_lo_r + m_lo_i
            mod2_hi = m_hi_r + m_hi_i
            if mod2_hi < 1:
                continue
            if mod2_lo > 1:
                return False
            ok = False
        if ok:
            return True
        eps /= 16
    raise InternalCheckError("Pisot certification did not converge")


# ---------------------------------------------------------------------------
# Perron data


@dataclass(frozen=True)
class PerronData:
    """Spectral record of a primitive abelianization matrix."""

    matrix: IntMatrix
    size: int
    charpoly: tuple[int, ...]
    charpoly_factors: tuple[tuple[tuple[int, ...], int], ...]
    minpoly: tuple[int, ...]
    degree: int
    norm: int
    signed_norm: int
    determinant: int
    unimodular: bool
    irreducible: bool
    pisot: bool
    dilation: AlgebraicReal
    field: NumberField
    lengths: tuple[Elt, ...]

    def dilation_elt(self) -> Elt:
        return self.field.generator()


def _nullspace_vector(field: NumberField, A: list[list[Elt]]) -> list[Elt]:
    """One nonzero kernel vector of a square matrix with nullity one."""
    m = len(A)
    rows = [list(r) for r in A]
    pivot_cols: list[int] = []
    r = 0
    for c in range(m):
        pr = None
        for i in range(r, m):
            if not field.is_zero(rows[i][c]):
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(m):
            if i != r and not field.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivot_cols.append(c)
        r += 1
    free = [c for c in range(m) if c not in pivot_cols]
    if len(free) != 1:
        raise InternalCheckError(
            f"expected a one-dimensional eigenspace, found nullity {len(free)}"
        )
    fc = free[0]
    vec = [field.zero()] * m
    vec[fc] = field.one()
    for rr, pc in enumerate(pivot_cols):
        vec[pc] = field.neg(rows[rr][fc])
    return vec


def perron_data(M: Sequence[Sequence[int]]) -> PerronData:
    """Dilation, its minimal polynomial, norms, and exact tile lengths.

    The tile lengths are the left eigenvector of the matrix at the
    dilation, normalized so the first length is 1; positivity of every
    entry is certified before returning.
    """
    rows = mat_validate(M)
    m = len(rows)
    if any(x < 0 for r in rows for x in r):
        raise PreconditionError("abelianization matrices must be nonnegative")
    if not matrix_is_primitive(rows):
        raise PreconditionError("matrix is not primitive")

    cp = charpoly_coeffs(rows)
    factors = factor_int_poly(cp)

    candidates: list[tuple[tuple[int, ...], Fraction, Fraction]] = []
    for fc, _mult in factors:
        ivs = real_root_intervals(fc)
        if ivs:
            lo, hi = ivs[-1]
            candidates.append((fc, lo, hi))
    if not candidates:
        raise InternalCheckError("primitive matrix with no real eigenvalue")

    # shrink until the candidate intervals are pairwise disjoint
    eps = Fraction(1, 4)
    for _ in range(60):
        overlap = False
        for i in range(len(candidates)):
            for j in range(i + 1, len(candidates)):
                a, b = candidates[i], candidates[j]
                if not (a[2] < b[1] or b[2] < a[1]):
                    overlap = True
        if not overlap:
            break
        eps /= 16
        refined = []
        for fc, _, _ in candidates:
            ivs = real_root_intervals(fc, eps=eps)
            lo, hi = ivs[-1]
            refined.append((fc, lo, hi))
        candidates = refined
    else:
        raise InternalCheckError("could not separate eigenvalue intervals")

    fc, lo, hi = max(candidates, key=lambda t: t[1])
    dilation = AlgebraicReal(minpoly=fc, lo=lo, hi=hi)
    d = dilation.degree

    mult_of_min = next(mult for f, mult in factors if f == fc)
    if mult_of_min != 1:
        raise InternalCheckError("the dilation is not a simple eigenvalue")

    det = (-1) ** m * cp[0]
    norm = abs(fc[0])
    signed_norm = fc[0] if d % 2 == 0 else -fc[0]
    pisot = dilation.cmp_rational(Fraction(1)) > 0 and is_pisot(dilation)

    field = NumberField(dilation)
    lam = field.generator()
    # left eigenvector: kernel of (M^T - dilation I)
    A = [
        [
            field.sub(field.from_rational(rows[j][i]), lam)
            if i == j
            else field.from_rational(rows[j][i])
            for j in range(m)
        ]
        for i in range(m)
    ]
    vec = _nullspace_vector(field, A)
    if field.is_zero(vec[0]):
        raise InternalCheckError("left eigenvector has a vanishing first coordinate")
    inv0 = field.inv(vec[0])
    lengths = tuple(field.mul(inv0, x) for x in vec)
    for x in lengths:
        if field.sign(x) <= 0:
            raise InternalCheckError("left eigenvector is not strictly positive")

    return PerronData(
        matrix=rows,
        size=m,
        charpoly=cp,
        charpoly_factors=factors,
        minpoly=fc,
        degree=d,
        norm=norm,
        signed_norm=signed_norm,
        determinant=det,
        unimodular=abs(det) == 1,
        irreducible=len(factors) == 1 and factors[0][1] == 1 and d == m,
        pisot=pisot,
        dilation=dilation,
        field=field,
        lengths=lengths,
    )


# ---------------------------------------------------------------------------
# involution block structure


@dataclass(frozen=True)
class InvolutionBlockBound:
    """Eventual-rank bound for a matrix commuting with a free involution.

    In block coordinates ordered (orbit representatives, their swaps)
    the matrix is [[X, Y], [Y, X]]; the spectrum splits into X+Y and
    X-Y, which is what certifies the factor-of-two in the bound.
    """

    block_ok: bool
    degree: int
    norm: int
    norm_odd: bool
    evrank_q: int
    evrank_f2_sum: int
    bound_2d: int
    certified: bool
    representatives: tuple[int, ...]


def involution_block_bound(
    M: Sequence[Sequence[int]], iota: Sequence[int]
) -> InvolutionBlockBound:
    rows = mat_validate(M)
    m = len(rows)
    perm = tuple(int(i) for i in iota)
    if sorted(perm) != list(range(m)):
        raise PreconditionError("involution must be a permutation of the letter indices")
    if any(perm[perm[i]] != i for i in range(m)):
        raise PreconditionError("involution must square to the identity")
    if any(perm[i] == i for i in range(m)):
        raise PreconditionError("involution has a fixed point")

    pd = perron_data(rows)

    block_ok = all(
        rows[perm[i]][perm[j]] == rows[i][j] and rows[perm[i]][j] == rows[i][perm[j]]
        for i in range(m)
        for j in range(m)
    )

    reps = tuple(i for i in range(m) if i < perm[i])
    X = tuple(tuple(rows[r][c] for c in reps) for r in reps)
    Y = tuple(tuple(rows[r][perm[c]] for c in reps) for r in reps)
    XpY = tuple(tuple(X[i][j] + Y[i][j] for j in range(len(reps))) for i in range(len(reps)))

    evrank_q = eventual_rank(rows, "Q")
    evrank_f2_sum = eventual_rank(XpY, "F2")
    norm_odd = pd.norm % 2 == 1
    certified = block_ok and norm_odd and evrank_f2_sum >= pd.degree and evrank_q >= 2 * pd.degree

    return InvolutionBlockBound(
        block_ok=block_ok,
        degree=pd.degree,
        norm=pd.norm,
        norm_odd=norm_odd,
        evrank_q=evrank_q,
        evrank_f2_sum=evrank_f2_sum,
        bound_2d=2 * pd.degree,
        certified=certified,
        representatives=reps,
    )
