"""SL(n) root data and the jump-matrix constructors on decorated graphs.

Conventions (all validated against printed low-rank matrices by the tests):
the coroots are h_i = diag((n-i) 1_i, -i 1_{n-i}); the Gram matrix is
G_jk = tr(h_j h_k) = n^2 (min(j,k) - jk/n), i.e. n^2 times the inverse Cartan
matrix.  Edge matrices are S(z) = (-1)^(n-1) z^(-h) P sigma; the sign makes
S(z_rev) S(z) = 1 hold with the reversal z_rev = (-1)^(n-1) (z_{n-1},...,z_1)
and reproduces the printed SL(2) and SL(3) matrices simultaneously.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .jets import Jet, mat, mat_identity, mat_mul


@lru_cache(maxsize=None)
def coroot(n, i):
    """h_i = diag((n-i) repeated i times, -i repeated n-i times)."""
    assert 1 <= i <= n - 1
    return tuple(n - i if a < i else -i for a in range(n))


@lru_cache(maxsize=None)
def simple_root(n, i):
    """alpha_i = diag(0,...,1 at slot i,-1,...,0)."""
    assert 1 <= i <= n - 1
    return tuple(1 if a == i - 1 else (-1 if a == i else 0) for a in range(n))


@lru_cache(maxsize=None)
def gram(n):
    """G_jk = tr(h_j h_k); integer, symmetric, positive definite."""
    if n < 2:
        raise ValueError("need n >= 2")
    g = []
    for j in range(1, n):
        row = []
        for k in range(1, n):
            row.append(n * min(j, k) * (n - max(j, k)))
        g.append(tuple(row))
    return tuple(g)


@lru_cache(maxsize=None)
def cartan(n):
    """Tridiagonal Cartan matrix of SL(n)."""
    return tuple(tuple(2 if j == k else (-1 if abs(j - k) == 1 else 0)
                       for k in range(n - 1)) for j in range(n - 1))


def long_permutation(n):
    """Antidiagonal permutation matrix P_ab = delta_{a, n+1-b}."""
    return tuple(tuple(1 if a + b == n - 1 else 0 for b in range(n)) for a in range(n))


def signature(n):
    """sigma = diag(1, -1, 1, ...)."""
    return tuple(tuple((-1) ** a if a == b else 0 for b in range(n)) for a in range(n))


def diag_matrix(entries):
    n = len(entries)
    return tuple(tuple(entries[a] if a == b else 0 for b in range(n)) for a in range(n))


def power_monomial(vec, exponents):
    """prod vec[j]^exponents[j] for jets or scalars; negative exponents allowed."""
    out = None
    for v, k in zip(vec, exponents):
        if k == 0:
            continue
        if isinstance(v, int):
            v = Fraction(v)  # ints would silently go float under negative powers
        term = v ** k
        out = term if out is None else out * term
    if out is None:
        return 1
    return out


def coroot_power(n, vec):
    """Diagonal matrix prod_j vec[j]^(h_j) for an (n-1)-vector of scalars or jets."""
    ents = []
    for a in range(n):
        exps = [coroot(n, j)[a] for j in range(1, n)]
        ents.append(power_monomial(vec, exps))
    return diag_matrix(ents)


def edge_matrix(n, z):
    """Jump matrix S(z) on an oriented triangulation edge."""
    for v in z:
        if (v.value if isinstance(v, Jet) else v) == 0:
            raise ValueError("edge coordinate is zero")
    # S = (-1)^(n-1) z^(-h) P sigma; build z^(-h) via negated exponents
    ents = []
    for a in range(n):
        exps = [-coroot(n, j)[a] for j in range(1, n)]
        ents.append(power_monomial(z, exps))
    s = (-1) ** (n - 1)
    out = [[0] * n for _ in range(n)]
    for a in range(n):
        b = n - 1 - a  # column hit by P
        out[a][b] = ents[a] * ((-1) ** b) * s
    return mat(out)


def edge_reverse(n, z):
    """Coordinates of the reversed edge: (-1)^(n-1) (z_{n-1}, ..., z_1)."""
    s = (-1) ** (n - 1)
    return tuple(s * v for v in reversed(tuple(z)))


def _nilpotent_f(n, i):
    """F_i = 1 + E_{i+1,i} (indices 1-based)."""
    out = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
    out[i][i - 1] = 1
    return mat(out)


def _h_power(n, i, x):
    """H_i(x) = x^(-h_i) = diag(x^(n-i) ... , x^(-i) ...)."""
    ents = [x ** (n - i) if a < i else x ** (-i) for a in range(n)]
    return diag_matrix(ents)


def face_matrix_a1(n, xval):
    """A_1 on a face, from the triangular product formula.

    ``xval`` maps triples (a, b, c) with a+b+c = n, a,b,c >= 1 to scalars/jets.
    For n = 2 there are no face coordinates and A_1 is constant.
    """
    prod = mat_identity(n)
    for k in range(n - 1, 0, -1):
        nk = mat_identity(n)
        for i in range(k, n - 1):
            trip = (n - i - 1, i - k + 1, k)
            nk = mat_mul(nk, _h_power(n, i + 1, xval[trip]), _nilpotent_f(n, i))
        nk = mat_mul(nk, _nilpotent_f(n, n - 1))
        prod = mat_mul(prod, nk)
    return mat_mul(signature(n), prod, long_permutation(n))


def _cycled(xval, perm):
    return {trip: xval[tuple(trip[p] for p in perm)] for trip in xval}


def face_matrices(n, xval):
    """(A_1, A_2, A_3) with A_1 A_2 A_3 = 1 exactly.

    A_2 and A_3 use cyclically permuted triple indices: A_2(x_abc) = A_1(x_bca),
    A_3(x_abc) = A_1(x_cab).
    """
    for trip, v in xval.items():
        if (v.value if isinstance(v, Jet) else v) == 0:
            raise ValueError(f"face coordinate {trip} is zero")
    a1 = face_matrix_a1(n, xval)
    # cyclic relabeling: A_2 reads x_{cab} where A_1 reads x_{abc}, A_3 reads
    # x_{bca}; this direction is the one that makes A_1 A_2 A_3 = 1 hold
    a2 = face_matrix_a1(n, _cycled(xval, (2, 0, 1)))
    a3 = face_matrix_a1(n, _cycled(xval, (1, 2, 0)))
    return a1, a2, a3


def face_triples(n):
    """Positive triples (a,b,c), a+b+c = n, in descending lexicographic order."""
    trips = [(a, b, n - a - b)
             for a in range(n - 2, 0, -1)
             for b in range(n - a - 1, 0, -1)]
    return trips


def face_diagonal(n, xval, i):
    """x^(h_i) = prod x_abc^(h_index), index = a, b, c for i = 1, 2, 3."""
    assert i in (1, 2, 3)
    out = mat_identity(n)
    for trip in sorted(xval):
        vec = [Fraction(1)] * (n - 1)
        vec[trip[i - 1] - 1] = xval[trip]
        out = mat_mul(out, coroot_power(n, vec))
    return out


def toric_matrix(n, r):
    """R = prod r_i^(h_i), the diagonal cherry gauge matrix."""
    for v in r:
        if (v.value if isinstance(v, Jet) else v) == 0:
            raise ValueError("toric coordinate is zero")
    return coroot_power(n, r)


def triangular_diagonalize(m):
    """Factor a lower-triangular matrix as M = C Lambda C^-1.

    C is unit lower triangular, computed by forward substitution; requires the
    diagonal entries of M to be pairwise distinct ("regular monodromy").
    """
    n = len(m)
    lam = [m[i][i] for i in range(n)]
    vals = [x.value if isinstance(x, Jet) else x for x in lam]
    for i in range(n):
        for j in range(i + 1, n):
            if vals[i] == vals[j]:
                raise ValueError("non-regular monodromy: repeated eigenvalue")
    c = [[Fraction(1) if i == j else 0 for j in range(n)] for i in range(n)]
    for j in range(n):
        c[j][j] = 1
        for i in range(j + 1, n):
            acc = 0
            for k in range(j, i):
                acc = acc + m[i][k] * c[k][j]
            c[i][j] = acc / (lam[j] - m[i][i])
    return mat(c), diag_matrix(lam)
