#!/usr/bin/env python3
"""Regenerate the newform fixture pack under fixtures/.

Everything is exact integer/rational arithmetic.  Spaces of cusp forms for
Gamma0(M), M in {1, 3, 5, 15}, are spanned by eta quotients times Eisenstein
monomials; Hecke eigenforms are extracted by factoring characteristic
polynomials of T_r on the new subspace.  Only orbits with rational (hence
integral) coefficients are emitted; the engine tops up non-rational weights
from the same ring generators at run time.

Usage: python3 tools/gen_fixtures.py [outdir]
"""

import sys
import os
from fractions import Fraction
from sympy import Poly, symbols, factor_list, Rational, isprime

PREC = 240  # coefficients a_0 .. a_{PREC-1}

x = symbols("x")


# ---------- power series helpers (lists of Fraction/int, index = exponent) ----------

def ps_mul(a, b, prec=PREC):
    out = [0] * prec
    for i, ai in enumerate(a):
        if i >= prec:
            break
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if i + j >= prec:
                break
            if bj == 0:
                continue
            out[i + j] += ai * bj
    return out


def ps_pow(a, n, prec=PREC):
    r = [1] + [0] * (prec - 1)
    base = list(a[:prec]) + [0] * max(0, prec - len(a))
    while n:
        if n & 1:
            r = ps_mul(r, base, prec)
        base = ps_mul(base, base, prec)
        n >>= 1
    return r


def ps_scale_exp(a, m, prec=PREC):
    """a(q) -> a(q^m)"""
    out = [0] * prec
    for i, ai in enumerate(a):
        if i * m >= prec:
            break
        out[i * m] = ai
    return out


def euler_product(prec=PREC):
    """prod (1-q^n) via pentagonal number theorem"""
    out = [0] * prec
    out[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 >= prec and g2 >= prec:
            break
        s = 1 if k % 2 == 0 else -1
        if g1 < prec:
            out[g1] += s
        if g2 < prec:
            out[g2] += s
        k += 1
    return out


EULER = euler_product()


def eta_quotient(parts, prec=PREC):
    """prod_d eta(q^d)^{c_d} for parts = [(d, c)], c >= 0, including the q^{sum d*c/24} prefactor."""
    shift = sum(d * c for d, c in parts)
    assert shift % 24 == 0
    shift //= 24
    r = [1] + [0] * (prec - 1)
    for d, c in parts:
        e = ps_pow(ps_scale_exp(EULER, d, prec), c, prec)
        r = ps_mul(r, e, prec)
    out = [0] * prec
    for i, v in enumerate(r):
        if i + shift < prec:
            out[i + shift] = v
    return out


def bernoulli_numbers(n):
    B = [Fraction(0)] * (n + 1)
    B[0] = Fraction(1)
    for m in range(1, n + 1):
        s = Fraction(0)
        from math import comb
        for k in range(m):
            s += comb(m + 1, k) * B[k]
        B[m] = -s / (m + 1)
    return B


BERN = bernoulli_numbers(40)


def sigma(n, k):
    s = 0
    for d in range(1, n + 1):
        if n % d == 0:
            s += d ** k
    return s


def eisenstein(k, prec=PREC):
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, exact rationals (integral for k=4,6,...)."""
    c = Fraction(-2 * k) / BERN[k]
    out = [Fraction(1)] + [c * sigma(n, k - 1) for n in range(1, prec)]
    return out


E4 = [int(v) for v in eisenstein(4)]
E6 = [int(v) for v in eisenstein(6)]
DELTA = eta_quotient([(1, 24)])


def vm_basis(k, cuspidal, prec=PREC):
    """Victor Miller style basis of M_k(1) / S_k(1): echelon, integral, pivots 1."""
    if k < 0 or k % 2:
        return []
    if k == 0:
        return [] if cuspidal else [[1] + [0] * (prec - 1)]
    if k == 2:
        return []
    rows = []
    j = 0
    while 12 * j <= k:
        r = k - 12 * j
        if r == 2:
            j += 1
            continue
        b = 1 if r % 4 == 2 else 0
        a = (r - 6 * b) // 4
        m = ps_pow(DELTA, j, prec)
        for _ in range(a):
            m = ps_mul(m, E4, prec)
        for _ in range(b):
            m = ps_mul(m, E6, prec)
        rows.append(m)
        j += 1
    # echelonize (they have leading terms q^0, q^1, ..., already triangular)
    rows.sort(key=lambda r: next(i for i, v in enumerate(r) if v != 0))
    n = len(rows)
    for i in range(n):
        piv = next(i2 for i2, v in enumerate(rows[i]) if v != 0)
        assert rows[i][piv] == 1
        for i2 in range(n):
            if i2 != i and rows[i2][piv] != 0:
                c = rows[i2][piv]
                rows[i2] = [u - c * v for u, v in zip(rows[i2], rows[i])]
    if cuspidal:
        rows = [r for r in rows if r[0] == 0]
    return rows


# ---------- exact linear algebra over Q / Z ----------

def rref(mat, prec=None):
    """returns (rref rows as Fractions, pivot columns); see rref_t for the transform."""
    rows, pivots, _ = rref_t(mat, prec)
    return rows, pivots


def rref_t(mat, prec=None):
    """returns (rref rows, pivot columns, T) with rref == T * mat (T rows over Q)."""
    m = len(mat)
    rows = [[Fraction(v) for v in r[: (prec or len(r))]] for r in mat]
    T = [[Fraction(1 if i == j else 0) for j in range(m)] for i in range(m)]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        T[r], T[pr] = T[pr], T[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        T[r] = [v / pv for v in T[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                ci = rows[i][c]
                rows[i] = [u - ci * v for u, v in zip(rows[i], rows[r])]
                T[i] = [u - ci * v for u, v in zip(T[i], T[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots, T[:r]


def hnf_with_transform(mat):
    """row-style HNF of integer matrix; returns (H, U) with U*mat == H, U unimodular."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    H = [list(map(int, r)) for r in mat]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        # find pivot: nonzero minimal |entry|
        while True:
            best = None
            for i in range(r, m):
                if H[i][c] != 0 and (best is None or abs(H[i][c]) < abs(H[best][c])):
                    best = i
            if best is None:
                break
            H[r], H[best] = H[best], H[r]
            U[r], U[best] = U[best], U[r]
            done = True
            for i in range(r + 1, m):
                if H[i][c] != 0:
                    qq = H[i][c] // H[r][c]
                    H[i] = [u - qq * v for u, v in zip(H[i], H[r])]
                    U[i] = [u - qq * v for u, v in zip(U[i], U[r])]
                    if H[i][c] != 0:
                        done = False
            if done:
                break
        if any(H[i][c] != 0 for i in range(r, m)):
            if H[r][c] < 0:
                H[r] = [-v for v in H[r]]
                U[r] = [-v for v in U[r]]
            for i in range(r):
                qq = H[i][c] // H[r][c]
                if qq:
                    H[i] = [u - qq * v for u, v in zip(H[i], H[r])]
                    U[i] = [u - qq * v for u, v in zip(U[i], U[r])]
            r += 1
    return H, U, r


def z_left_kernel(mat):
    """basis of {x in Z^m : x*mat = 0}; saturated by construction."""
    H, U, r = hnf_with_transform(mat)
    return U[r:]


def saturate(mat):
    """saturation of the row lattice of integer matrix mat inside Z^n (full prec columns)."""
    rows = [r for r in mat if any(v != 0 for v in r)]
    if not rows:
        return []
    m, n = len(rows), len(rows[0])
    # right kernel of rows: transpose, left kernel
    tr = [[rows[i][j] for i in range(m)] for j in range(n)]
    K = z_left_kernel(tr)  # rows of K in Z^n with rows * K^T = 0
    if not K:
        # full column rank: saturation is Z^n itself (cannot happen: m <= n here means rank n)
        return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    Kt = [[K[i][j] for i in range(len(K))] for j in range(n)]  # n x (n-r)
    return z_left_kernel(Kt)


def smith_divisors(mat):
    """elementary divisors of integer matrix"""
    A = [list(map(int, r)) for r in mat]
    m = len(A)
    n = len(A[0]) if m else 0
    divs = []
    top = 0
    while top < min(m, n):
        # find minimal nonzero entry in A[top:][top:]
        best = None
        for i in range(top, m):
            for j in range(top, n):
                if A[i][j] != 0 and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        A[top], A[bi] = A[bi], A[top]
        for row in A:
            row[top], row[bj] = row[bj], row[top]
        # clear row and column
        again = False
        for i in range(top + 1, m):
            if A[i][top] % A[top][top] != 0:
                qq = A[i][top] // A[top][top]
                A[i] = [u - qq * v for u, v in zip(A[i], A[top])]
                again = True
        if again:
            continue
        for i in range(top + 1, m):
            qq = A[i][top] // A[top][top]
            A[i] = [u - qq * v for u, v in zip(A[i], A[top])]
        colbad = False
        for j in range(top + 1, n):
            if A[top][j] % A[top][top] != 0:
                colbad = True
        if colbad:
            # transpose trick: do column reduction
            for j in range(top + 1, n):
                qq = A[top][j] // A[top][top]
                if qq:
                    for i in range(m):
                        A[i][j] -= qq * A[i][top]
            continue
        for j in range(top + 1, n):
            qq = A[top][j] // A[top][top]
            if qq:
                for i in range(m):
                    A[i][j] -= qq * A[i][top]
        # divisibility fix-up
        d = abs(A[top][top])
        bad = None
        for i in range(top + 1, m):
            for j in range(top + 1, n):
                if A[i][j] % d != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            A[top] = [u + v for u, v in zip(A[top], A[bad])]
            continue
        divs.append(d)
        top += 1
    return divs


# ---------- spaces for Gamma0(M), M in {1,3,5,15} ----------

PHI3 = [1] + [12 * (sigma(n, 1) - 3 * (sigma(n // 3, 1) if n % 3 == 0 else 0)) for n in range(1, PREC)]
PHI5 = [1] + [6 * (sigma(n, 1) - 5 * (sigma(n // 5, 1) if n % 5 == 0 else 0)) for n in range(1, PREC)]
DELTA3 = eta_quotient([(1, 6), (3, 6)])   # weight 6 cusp generator, level 3
DELTA5 = eta_quotient([(1, 4), (5, 4)])   # weight 4 cusp generator, level 5
E2_15 = eta_quotient([(1, 1), (3, 1), (5, 1), (15, 1)])  # weight 2 newform, level 15


def dim_Sk(M, k):
    from math import gcd
    if k < 4:
        # genus for k=2, 0 for k<=0 -- desk levels are genus<=1
        pass
    def mult(M):
        primes = [p for p in [2, 3, 5, 7, 11, 13] if M % p == 0]
        return primes
    primes = [p for p in range(2, M + 1) if M % p == 0 and isprime(p)]
    mu = M
    for p in primes:
        mu = mu * (p + 1) // p
    def kron(a, p):
        if p == 2:
            return 0
        r = pow(a % p, (p - 1) // 2, p)
        return 1 if r == 1 else (-1 if r == p - 1 else 0)
    e2 = 1
    for p in primes:
        e2 *= (1 + kron(-1, p))
    e3 = 1
    for p in primes:
        e3 *= 1 if p == 3 else (1 + kron(-3, p))
    einf = 0
    for d in range(1, M + 1):
        if M % d == 0:
            einf += _phi(gcd(d, M // d))
    g = Fraction(1) + Fraction(mu, 12) - Fraction(e2, 4) - Fraction(e3, 3) - Fraction(einf, 2)
    assert g.denominator == 1
    g = int(g)
    if k == 0:
        return 0
    if k == 2:
        return g
    return (k - 1) * (g - 1) + (k // 4) * e2 + (k // 3) * e3 + (k // 2 - 1) * einf


def _phi(n):
    r = n
    p = 2
    nn = n
    while p * p <= nn:
        if nn % p == 0:
            while nn % p == 0:
                nn //= p
            r -= r // p
        p += 1
    if nn > 1:
        r -= r // nn
    return r


def dim_Mk(M, k):
    from math import gcd
    primes = [p for p in range(2, M + 1) if M % p == 0 and isprime(p)]
    einf = sum(_phi(gcd(d, M // d)) for d in range(1, M + 1) if M % d == 0)
    if k == 0:
        return 1
    return dim_Sk(M, k) + einf - (1 if k == 2 else 0)


def first_vm_row(k, prec=PREC):
    """level-1 weight-k form with a_0 = 1 (k even >= 4)"""
    b = 1 if k % 4 == 2 else 0
    a = (k - 6 * b) // 4
    m = [1] + [0] * (prec - 1)
    for _ in range(a):
        m = ps_mul(m, E4, prec)
    for _ in range(b):
        m = ps_mul(m, E6, prec)
    return m


def m_span_prime_level(ell, j, prec=PREC):
    """spanning set of M_j(Gamma0(ell)), ell in {3,5}: G_j(q), G_j(q^ell) plus Delта_ell * M_{j-w}."""
    w, dell, phi = (6, DELTA3, PHI3) if ell == 3 else (4, DELTA5, PHI5)
    if j < 0 or j % 2:
        return []
    if j == 0:
        return [[1] + [0] * (prec - 1)]
    if j == 2:
        return [phi[:prec]]
    rows = [first_vm_row(j, prec), ps_scale_exp(first_vm_row(j, prec), ell, prec)]
    for r in m_span_prime_level(ell, j - w, prec):
        rows.append(ps_mul(dell, r, prec))
    return rows


def sturm(k, M):
    primes = [p for p in range(2, M + 1) if M % p == 0 and isprime(p)]
    mu = M
    for p in primes:
        mu = mu * (p + 1) // p
    return k * mu // 12


def saturate_series(span, k, M, prec=PREC):
    """saturated basis of the span: saturate on an initial column block, lift to full prec.

    At primes p not dividing M, integrality through the Sturm bound certifies
    integrality (mod-p Sturm), so sturm+1 columns suffice; at primes dividing M
    the truncated saturation can overshoot, so the column count grows until the
    lift is integral through the full working precision.
    """
    c0 = sturm(k, M) + 1
    while True:
        small = [r[:c0] for r in span]
        sat_small = saturate(small)
        if not sat_small:
            return []
        rr, piv, T = rref_t(small)
        out = []
        ok = True
        for srow in sat_small:
            cs = coords_in(rr, piv, srow)  # coords w.r.t. rref rows
            span_cs = [sum(cs[i] * T[i][j] for i in range(len(cs))) for j in range(len(span))]
            full = [Fraction(0)] * prec
            for c, row in zip(span_cs, span):
                if c != 0:
                    full = [u + c * v for u, v in zip(full, row)]
            if not all(t.denominator == 1 for t in full):
                ok = False
                break
            out.append([int(t) for t in full])
        if ok:
            return out
        c0 += 1
        assert c0 <= prec, "saturation did not stabilize within working precision"


def s_basis_prime_level(ell, k, prec=PREC):
    """saturated Z-basis of S_k(Gamma0(ell)), certified against the dimension formula."""
    w, dell = (6, DELTA3) if ell == 3 else (4, DELTA5)
    span = [ps_mul(dell, r, prec) for r in m_span_prime_level(ell, k - w, prec)]
    if not span:
        return []
    sat = saturate_series(span, k, ell, prec)
    assert len(sat) == dim_Sk(ell, k), (ell, k, len(sat), dim_Sk(ell, k))
    return sat


def s_basis_15_4(prec=PREC):
    span = [ps_mul(E2_15, r, prec) for r in
            [E2_15, PHI3[:prec], ps_scale_exp(PHI3, 5, prec), PHI5[:prec], ps_scale_exp(PHI5, 3, prec)]]
    sat = saturate_series(span, 4, 15, prec)
    assert len(sat) == 4
    return sat


# ---------- Hecke operators and eigenform extraction ----------

def hecke_t(f, r, k, level, prec_out):
    """T_r f as a series to prec_out; r prime. For r | level this is U_r."""
    out = [0] * prec_out
    for n in range(prec_out):
        v = f[r * n]
        if level % r != 0 and n % r == 0:
            v += r ** (k - 1) * f[n // r]
        out[n] = v
    return out


def coords_in(rows_rref, pivots, vec):
    """coordinates of vec in the rref row space; asserts membership."""
    v = [Fraction(t) for t in vec]
    cs = []
    for i, p in enumerate(pivots):
        c = v[p]
        cs.append(c)
        if c != 0:
            v = [u - c * w for u, w in zip(v, rows_rref[i])]
    assert all(t == 0 for t in v), "not a member"
    return cs


def operator_matrix(basis, r, k, level, prec):
    """matrix rows: T_r(basis[i]) = sum_j m[i][j] basis[j]"""
    pout = (prec - 1) // r + 1
    rr, piv, T = rref_t([b[:pout] for b in basis])
    assert len(rr) == len(basis)
    mat = []
    for b in basis:
        img = hecke_t(b, r, k, level, pout)
        cs = coords_in(rr, piv, img)  # coords w.r.t. rref rows
        mat.append([sum(cs[i] * T[i][j] for i in range(len(cs))) for j in range(len(basis))])
    return mat


def charpoly(mat):
    n = len(mat)
    from sympy import Matrix
    M = Matrix([[Rational(v) for v in row] for row in mat])
    return M.charpoly(x)


def new_subspace(basis, ell, k, level, prec):
    """kernel of ell^2 U_ell^2 - ell^k on the span, as saturated integer rows."""
    U = operator_matrix(basis, ell, k, level, prec)
    n = len(basis)
    U2 = [[sum(U[i][t] * U[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    S = [[ell * ell * U2[i][j] - (ell ** k if i == j else 0) for j in range(n)] for i in range(n)]
    # left kernel of S over Q -> saturate in coordinates
    from sympy import Matrix
    M = Matrix([[Rational(v) for v in row] for row in S])
    ker = M.T.nullspace()
    if not ker:
        return []
    kerrows = []
    for v in ker:
        den = 1
        for t in v:
            den = den * t.q // _gcd(den, t.q)
        kerrows.append([int(t * den) for t in v])
    coords = saturate(kerrows)  # coordinate lattice, small
    out = []
    for c in coords:
        row = [0] * prec
        for ci, b in zip(c, basis):
            if ci:
                row = [u + ci * v for u, v in zip(row, b)]
        out.append(row)
    return saturate_series(out, k, level, prec)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def split_eigenforms(newbasis, ell, k, level, prec):
    """split the new subspace into rational eigenforms; returns (forms, leftover_dim)."""
    if not newbasis:
        return [], 0
    pieces = [newbasis]
    for r in [2, 7, 11, 13, 3, 5]:
        if level % r == 0:
            continue
        nxt = []
        for piece in pieces:
            if len(piece) == 1:
                nxt.append(piece)
                continue
            T = operator_matrix(piece, r, k, level, prec)
            cp = charpoly(T)
            fl = factor_list(cp.as_expr())[1]
            if len(fl) == 1 and fl[0][1] == len(piece):
                nxt.append(piece)
                continue
            from sympy import Matrix, eye
            M = Matrix([[Rational(v) for v in row] for row in T])
            for fac, mult in fl:
                P = Poly(fac, x)
                B = Matrix.zeros(len(piece))
                # evaluate P(M)^mult
                E = eye(len(piece))
                coeffs = P.all_coeffs()
                PM = Matrix.zeros(len(piece))
                for cc in coeffs:
                    PM = PM * M + Rational(cc) * E
                PMm = eye(len(piece))
                for _ in range(mult):
                    PMm = PMm * PM
                ker = PMm.T.nullspace()
                rows = []
                for v in ker:
                    den = 1
                    for t in v:
                        den = den * t.q // _gcd(den, t.q)
                    rows.append([int(t * den) for t in v])
                rows = saturate(rows)
                sub = []
                for c in rows:
                    row = [0] * prec
                    for ci, b in zip(c, piece):
                        if ci:
                            row = [u + ci * v for u, v in zip(row, b)]
                    sub.append(row)
                if sub:
                    nxt.append(saturate_series(sub, k, level, prec))
        pieces = nxt
        if all(len(p) == 1 for p in pieces):
            break
    forms = []
    leftover = 0
    for piece in pieces:
        if len(piece) > 1:
            leftover += len(piece)
            continue
        f = piece[0]
        if f[1] == 0:
            leftover += 1
            continue
        # normalize a_1 = 1; must be integral
        if f[1] < 0:
            f = [-v for v in f]
        if f[1] != 1:
            if any(v % f[1] for v in f):
                leftover += 1
                continue
            f = [v // f[1] for v in f]
        forms.append(f)
    return forms, leftover


def verify_eigenform(f, k, level, prec):
    """multiplicativity + Hecke recurrence against the series itself: T_r f == a_r f."""
    for r in [2, 3, 5, 7, 11, 13]:
        pout = (prec - 1) // r + 1
        img = hecke_t(f, r, k, level, pout)
        ar = f[r]
        assert img[:pout] == [ar * v for v in f[:pout]], (level, k, r)


# ---------- fixture emission ----------

def al_sign(f, ellp, k):
    v = -Fraction(f[ellp], ellp ** ((k - 2) // 2))
    assert v in (1, -1), (f[:8], ellp, k)
    return int(v)


def emit(outdir, label, level, weight, an, al, provenance):
    path = os.path.join(outdir, label + ".nf")
    with open(path, "w") as fh:
        fh.write("# newform fixture\n")
        fh.write(f"label = {label}\n")
        fh.write(f"level = {level}\n")
        fh.write(f"weight = {weight}\n")
        fh.write("coeff_ring = Z\n")
        if al:
            fh.write("al_signs = " + " ".join(f"{p}:{'+1' if s > 0 else '-1'}" for p, s in sorted(al.items())) + "\n")
        fh.write(f"provenance = {provenance}\n")
        fh.write("an = " + ",".join(str(v) for v in an) + "\n")
    return path


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "fixtures")
    os.makedirs(outdir, exist_ok=True)
    prov = "derived by exact linear algebra from eta-quotient and Eisenstein spanning sets (tools/gen_fixtures.py)"
    nan = 220  # a_1..a_220 per fixture

    made = []

    # level 1: one-dimensional cusp spaces, the unique normalized form is the eigenform
    for k in [12, 16, 18, 20, 22, 26]:
        basis = vm_basis(k, cuspidal=True)
        assert len(basis) == 1
        f = basis[0]
        verify_eigenform(f, k, 1, PREC)
        made.append(emit(outdir, f"1.{k}.a", 1, k, f[1:nan + 1], {}, prov))

    # levels 3 and 5: all rational new orbits for even weights <= 36
    report = []
    for ell in [3, 5]:
        for k in range(4, 38, 2):
            basis = s_basis_prime_level(ell, k)
            if not basis:
                continue
            nb = new_subspace(basis, ell, k, ell, PREC)
            forms, leftover = split_eigenforms(nb, ell, k, ell, PREC)
            names = "abcdefgh"
            forms.sort(key=lambda f: f[2])
            for i, f in enumerate(forms):
                verify_eigenform(f, k, ell, PREC)
                sgn = al_sign(f, ell, k)
                made.append(emit(outdir, f"{ell}.{k}.{names[i]}", ell, k, f[1:nan + 1], {ell: sgn}, prov))
            report.append((ell, k, len(nb), len(forms), leftover))

    # level 15, weight 4: the two rational newforms
    basis = s_basis_15_4()
    nb = new_subspace(basis, 3, 4, 15, PREC)
    # the 3-new space at level 15, weight 4 is spanned by the two genuine newforms
    # (the 5-new space is everything: S_4(3) = 0, so there are no 5-old forms here)
    assert len(nb) == 2
    forms, leftover = split_eigenforms(nb, 3, 4, 15, PREC)
    assert leftover == 0 and len(forms) == 2
    forms.sort(key=lambda f: f[2])
    for i, f in enumerate(forms):
        verify_eigenform(f, 4, 15, PREC)
        al = {3: al_sign(f, 3, 4), 5: al_sign(f, 5, 4)}
        made.append(emit(outdir, f"15.4.{'ab'[i]}", 15, 4, f[1:nan + 1], al, prov))

    # ---------- cross-checks against the worked examples ----------
    f5 = DELTA5
    a15, b15 = forms  # sorted by a_2: a has a_2=1, b has a_2=3
    assert f5[1:10] == [1, -4, 2, 8, -5, -8, 6, 0, -23]
    assert a15[1:10] == [1, 1, 3, -7, 5, 3, -24, -15, 9]
    assert b15[1:10] == [1, 3, -3, 1, -5, -9, 20, -21, 9]
    # b = f + 2 f(q^3) mod 7
    v3f = ps_scale_exp(f5, 3)
    comb = [u + 2 * v for u, v in zip(f5, v3f)]
    assert all((u - v) % 7 == 0 for u, v in zip(comb, b15))
    # the saturation gap: divisors of old_sat + new_sat inside the saturated lattice.
    # Over Z the index is 35; its 7-part {1,1,1,7} is the Z_7 statement.
    sat = s_basis_15_4()
    rr, piv = rref(sat)
    coords = [coords_in(rr, piv, v) for v in [f5, v3f] + nb]
    dens = 1
    for row in coords:
        for t in row:
            dens = dens * t.denominator // _gcd(dens, t.denominator)
    assert dens == 1  # sublattice of the saturated one
    divs = smith_divisors([[int(t) for t in row] for row in coords])
    assert divs == [1, 1, 1, 35], divs
    wit = [Fraction(u + 2 * v - w, 7) for u, v, w in zip(f5, v3f, b15)]
    assert all(t.denominator == 1 for t in wit)
    coords_in(rr, piv, wit)  # p-integral and in the lattice

    # 3.12/3.16 regression pair, congruent mod 5
    f12 = next(iter(in_all_forms(made, outdir, "3.12")))
    f16s = list(in_all_forms(made, outdir, "3.16"))
    assert f12[:5] == [1, 78, -243, 4036, -5370], f12[:6]
    f16m = next(f for f in f16s if f[1] == -72)
    assert f16m[:5] == [1, -72, 2187, -27584, -221490]
    assert all((u - v) % 5 == 0 for u, v in zip(f12[:30], f16m[:30]))

    print("orbit report (level, weight, newdim, rational forms, leftover):")
    for row in report:
        print("  ", row)
    print(f"wrote {len(made)} fixtures to {outdir}")


def in_all_forms(made, outdir, prefix):
    for path in made:
        base = os.path.basename(path)
        if base.startswith(prefix + "."):
            an = None
            with open(path) as fh:
                for line in fh:
                    if line.startswith("an = "):
                        an = [int(t) for t in line[5:].strip().split(",")]
            yield an


if __name__ == "__main__":
    main()
