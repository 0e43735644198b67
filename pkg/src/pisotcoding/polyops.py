"""Polynomial utilities over exact rationals.

Coefficient lists are ascending: coeffs[i] is the coefficient of x^i.
Everything here is exact; floats only appear as seeds supplied by callers.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, isqrt

from .errors import SchurCohnDegenerate


def strip(coeffs):
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return c


def degree(coeffs):
    c = strip(coeffs)
    return len(c) - 1 if c else -1


def evaluate(coeffs, x):
    acc = 0 * x if not isinstance(x, (int, Fraction)) else Fraction(0)
    for c in reversed(list(coeffs)):
        acc = acc * x + c
    return acc


def derivative(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def poly_divmod(a, b):
    """Quotient and remainder over the rationals; b need not be monic."""
    a = [Fraction(c) for c in strip(a)]
    b = [Fraction(c) for c in strip(b)]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    r = a[:]
    while len(r) >= len(b) and r:
        f = r[-1] / b[-1]
        d = len(r) - len(b)
        q[d] = f
        for i, bc in enumerate(b):
            r[i + d] -= f * bc
        r = strip(r)
    return strip(q), r


def poly_xgcd_inverse(a, g):
    """u with u*a == 1 modulo g, for g irreducible and a nonzero mod g."""
    r0, r1 = [Fraction(c) for c in strip(g)], [Fraction(c) for c in strip(a)]
    s0, s1 = [], [Fraction(1)]
    while degree(r1) > 0:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, strip(poly_sub(s0, poly_mul(q, s1)))
    if not r1:
        raise ZeroDivisionError("element shares a factor with the modulus")
    c = r1[0]
    return [s / c for s in s1]


def sign_at(coeffs, x):
    v = evaluate(coeffs, Fraction(x))
    return (v > 0) - (v < 0)


def sturm_chain(coeffs):
    p0 = [Fraction(c) for c in strip(coeffs)]
    p1 = [Fraction(c) for c in derivative(p0)]
    chain = [p0, p1]
    while degree(chain[-1]) > 0:
        _, r = poly_divmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _variations(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def _sign_at_inf(coeffs, positive):
    c = strip(coeffs)
    if not c:
        return 0
    lead = c[-1]
    s = (lead > 0) - (lead < 0)
    if not positive and (len(c) - 1) % 2 == 1:
        s = -s
    return s


def count_real_roots(coeffs, a=None, b=None, chain=None):
    """Number of distinct real roots in the half-open interval (a, b].

    a=None means -infinity, b=None means +infinity.  Endpoints must not be
    roots when finite (squarefree inputs let callers nudge instead).
    """
    chain = chain or sturm_chain(coeffs)
    va = _variations([_sign_at_inf(p, False) if a is None else sign_at(p, a) for p in chain])
    vb = _variations([_sign_at_inf(p, True) if b is None else sign_at(p, b) for p in chain])
    return va - vb


def cauchy_bound(coeffs):
    c = [Fraction(x) for x in strip(coeffs)]
    lead = abs(c[-1])
    return 1 + max((abs(x) / lead for x in c[:-1]), default=Fraction(0))


def isolate_real_roots(coeffs):
    """Disjoint rational intervals (lo, hi], one distinct real root each."""
    chain = sturm_chain(coeffs)
    bound = cauchy_bound(coeffs) + 1
    total = count_real_roots(coeffs, -bound, bound, chain=chain)
    out = []
    stack = [(-bound, bound, total)]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        while evaluate(coeffs, mid) == 0:
            mid += (hi - lo) / 64
        nl = count_real_roots(coeffs, lo, mid, chain=chain)
        stack.append((lo, mid, nl))
        stack.append((mid, hi, n - nl))
    out.sort()
    return out


def refine_root_interval(coeffs, lo, hi, width):
    """Bisection refinement of a sign-change bracket down to the given width."""
    lo, hi = Fraction(lo), Fraction(hi)
    slo = sign_at(coeffs, lo)
    if slo == 0:
        return lo, lo
    while hi - lo > width:
        mid = (lo + hi) / 2
        sm = sign_at(coeffs, mid)
        if sm == 0:
            # exact rational root; collapse
            return mid, mid
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def count_roots_in_disk(coeffs, radius):
    """Exact number of complex roots with |z| < radius (rational radius).

    Raises SchurCohnDegenerate on singular cases (some root modulus equal to
    the radius, or a vanishing transform); callers retry with a nudged radius.
    """
    radius = Fraction(radius)
    c = [Fraction(x) for x in strip(coeffs)]
    scaled = []
    p = Fraction(1)
    for x in c:
        scaled.append(x * p)
        p *= radius
    return _count_unit_disk(scaled)


def _count_unit_disk(c):
    c = strip(c)
    n = len(c) - 1
    if n <= 0:
        return 0
    inside = 0
    while c and c[0] == 0:
        inside += 1
        c = c[1:]
    c = strip(c)
    n = len(c) - 1
    if n <= 0:
        return inside
    a0, an = c[0], c[-1]
    delta = a0 * a0 - an * an
    if delta == 0:
        raise SchurCohnDegenerate("schur transform is singular")
    q = strip([a0 * c[i] - an * c[n - i] for i in range(n + 1)])
    if not q:
        raise SchurCohnDegenerate("schur transform vanished")
    inner = _count_unit_disk(q)
    return inside + (inner if delta > 0 else n - inner)


def _integer_divides(d, g):
    """Exact test: does the monic integer polynomial d divide monic integer g?"""
    r = [int(x) for x in strip(g)]
    dd = [int(x) for x in strip(d)]
    while len(r) >= len(dd):
        f = r[-1]  # d is monic, so the quotient step stays integral
        off = len(r) - len(dd)
        for i, dc in enumerate(dd):
            r[i + off] -= f * dc
        r = strip(r)
        if not r:
            return True
    return not r


def _divisors(n):
    n = abs(n)
    out = set()
    for i in range(1, isqrt(n) + 1):
        if n % i == 0:
            out.update({i, n // i, -i, -(n // i)})
    return sorted(out)


def irreducible_or_witness(g):
    """Irreducibility of a monic integer polynomial by bounded factor search.

    Returns (True, None) or (False, witness) with witness a monic integer
    factor in ascending coefficients.  Exhaustive over candidate monic factor
    degrees d <= deg/2; candidate coefficients are constrained by the constant
    term dividing g(0) and by binomial height bounds on divisor coefficients.
    """
    g = [int(x) for x in strip(g)]
    m = len(g) - 1
    if g[-1] != 1:
        raise ValueError("expected a monic integer polynomial")
    if m <= 1:
        return True, None
    if g[0] == 0:
        return False, (0, 1)
    # degree-1 factors: rational root theorem
    for r in _divisors(g[0]):
        if evaluate(g, r) == 0:
            return False, (-r, 1)
    radius = cauchy_bound(g)
    r_ceil = int(radius) + 1
    for d in range(2, m // 2 + 1):
        bounds = [comb(d, d - i) * r_ceil ** (d - i) for i in range(d)]
        const_candidates = _divisors(g[0])
        witness = _search_factor(g, d, bounds, const_candidates)
        if witness is not None:
            return False, tuple(witness)
    return True, None


def _search_factor(g, d, bounds, const_candidates):
    # candidate factor x^d + c_{d-1} x^{d-1} + ... + c_0, with c_0 | g(0)
    mids = [range(-b, b + 1) for b in bounds[1:]]

    def rec(idx, acc):
        if idx == len(mids):
            for c0 in const_candidates:
                cand = [c0] + acc + [1]
                if _integer_divides(cand, g):
                    return cand
            return None
        for v in mids[idx]:
            got = rec(idx + 1, acc + [v])
            if got is not None:
                return got
        return None

    return rec(0, [])


def frac_sqrt_lower(q):
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative operand")
    return Fraction(isqrt(q.numerator * q.denominator), q.denominator)


def frac_sqrt_upper(q):
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative operand")
    s = isqrt(q.numerator * q.denominator)
    if s * s == q.numerator * q.denominator:
        return Fraction(s, q.denominator)
    return Fraction(s + 1, q.denominator)
