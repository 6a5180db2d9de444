"""The closed combinatorial two-form, symplectic potential, and Casimirs.

Everything here is a constant-coefficient expression over the logarithmic
coordinate basis: vertex blocks with Gram-matrix weights, face blocks with
the integer coefficient table, and the toric block pairing each rho with the
puncture functional mu.  The central cross-check of the package asserts that
the form built here equals the jet-evaluated one exactly.

Two calibrations are fixed by that oracle rather than read off a formula
display: the face-coefficient table (kept verbatim as printed, so the tables
regression holds) enters the total form with weight -1, and the toric block
enters as 2n d(mu) ^ d(rho); both signs are the ones the graph evaluation
and the extended-space cross-check produce.
"""

from __future__ import annotations

from fractions import Fraction

from .charts import ChartBasis
from .fgraph import DecoratedGraph
from .skew import SkewForm
from .sln import face_triples, gram

FACE_FACTOR = -1     # table coefficient -> total-form weight (jet-calibrated)
TORIC_SIGN = -1      # sign of 2n d(rho) ^ d(mu) in the total form


def _heaviside(x) -> Fraction:
    if x > 0:
        return Fraction(1)
    if x < 0:
        return Fraction(0)
    return Fraction(1, 2)


def face_coefficient(n, t, tp):
    """Coefficient of d(xi_t) ^ d(xi_t') in the face form, unordered basis.

    Integer-valued and antisymmetric under swapping the triples; vanishes
    identically for n = 2, 3.
    """
    for trip in (t, tp):
        if len(trip) != 3 or any(c < 1 for c in trip) or sum(trip) != n:
            raise ValueError(f"invalid face triple {trip} for n={n}")
    i, j, k = t
    ip, jp, kp = tp
    di, dj, dk = ip - i, jp - j, kp - k
    val = (jp * k - kp * j) * _heaviside(dj * dk) \
        + (kp * i - ip * k) * _heaviside(di * dk) \
        + (ip * j - jp * i) * _heaviside(di * dj)
    val = n * val
    if val.denominator != 1:
        raise ArithmeticError(f"non-integer face coefficient for {t}, {tp}")
    return int(val)


def face_table(n):
    """Full antisymmetric table {(t, t'): coeff} over ordered triple pairs."""
    trips = face_triples(n)
    return {(t, tp): face_coefficient(n, t, tp) for t in trips for tp in trips}


def _zeta_slot(basis: ChartBasis, h, j):
    """Basis label of the j-th log coordinate of the oriented edge h."""
    e, s = h
    return ("z", e, j) if s == 1 else ("z", e, basis.n - j)


def vertex_form(dec: DecoratedGraph, basis: ChartBasis, v) -> SkewForm:
    """Gram-weighted star contribution of a triangulation vertex.

    Star objects are the interleaved face corners and outgoing edges,
    counterclockwise from the cherry corner; earlier objects pair with later
    ones through the Gram matrix.
    """
    n = basis.n
    G = gram(n)
    w = SkewForm(basis.labels)
    star = []  # ("f", face, corner_index) and ("e", half_edge), in ccw order
    for (f, pos), h in dec.vertex_faces_edges(v):
        star.append(("f", f, dec.corner_index[(f, pos)]))
        star.append(("e", h))
    for a in range(len(star)):
        for b in range(a + 1, len(star)):
            first, second = star[a], star[b]
            if first[0] == "e" and second[0] == "e":
                for i in range(1, n):
                    for j in range(1, n):
                        w.add(basis.index(_zeta_slot(basis, first[1], i)),
                              basis.index(_zeta_slot(basis, second[1], j)),
                              Fraction(G[i - 1][j - 1]))
            elif first[0] == "f" and second[0] == "e":
                _, f, fv = first
                for trip in face_triples(n):
                    row = trip[fv - 1]
                    for l in range(1, n):
                        w.add(basis.index(("x", f, trip)),
                              basis.index(_zeta_slot(basis, second[1], l)),
                              Fraction(G[row - 1][l - 1]))
            elif first[0] == "e" and second[0] == "f":
                _, f, fv = second
                for trip in face_triples(n):
                    row = trip[fv - 1]
                    for l in range(1, n):
                        w.add(basis.index(_zeta_slot(basis, first[1], l)),
                              basis.index(("x", f, trip)),
                              Fraction(G[row - 1][l - 1]))
            else:
                _, fp, fvp = first
                _, f, fv = second
                for tp in face_triples(n):
                    for t in face_triples(n):
                        w.add(basis.index(("x", fp, tp)),
                              basis.index(("x", f, t)),
                              Fraction(G[tp[fvp - 1] - 1][t[fv - 1] - 1]))
    return w


def face_form(dec: DecoratedGraph, basis: ChartBasis, f) -> SkewForm:
    """Face-center contribution: integer table over the face's xi block."""
    n = basis.n
    w = SkewForm(basis.labels)
    trips = face_triples(n)
    for a, t in enumerate(trips):
        for tp in trips[a + 1:]:
            c = face_coefficient(n, t, tp)
            if c:
                w.add(basis.index(("x", f, t)), basis.index(("x", f, tp)),
                      Fraction(FACE_FACTOR * c))
    return w


def mu_functional(dec: DecoratedGraph, basis: ChartBasis, v):
    """Puncture functionals mu_{v;1..n-1} as coefficient vectors over the basis.

    mu_{v; n-l} = (1/n) [ sum over incident face corners of xi G_{a l}
                        + sum over incident edges of zeta_j G_{j l} ],
    with the face Gram row picked by the corner's index component.
    """
    n = basis.n
    G = gram(n)
    out = {j: [Fraction(0)] * len(basis) for j in range(1, n)}
    for (f, pos), h in dec.vertex_faces_edges(v):
        fv = dec.corner_index[(f, pos)]
        for l in range(1, n):
            for trip in face_triples(n):
                row = trip[fv - 1]
                out[n - l][basis.index(("x", f, trip))] += Fraction(G[row - 1][l - 1], n)
            for j in range(1, n):
                out[n - l][basis.index(_zeta_slot(basis, h, j))] += Fraction(G[j - 1][l - 1], n)
    return out


def casimirs(dec: DecoratedGraph, basis: ChartBasis):
    """All N (n-1) puncture functionals, ordered by vertex then index."""
    out = []
    for v in dec.tri.graph.vertices:
        mus = mu_functional(dec, basis, v)
        for j in range(1, basis.n):
            out.append((("mu", v, j), tuple(mus[j])))
    return out


def total_form(dec: DecoratedGraph, basis: ChartBasis) -> SkewForm:
    """The full constant-coefficient two-form of the decorated graph."""
    n = basis.n
    w = SkewForm(basis.labels)
    for v in dec.tri.graph.vertices:
        w = w + vertex_form(dec, basis, v)
    for f in dec.tri.face_ids():
        w = w + face_form(dec, basis, f)
    for v in dec.tri.graph.vertices:
        mus = mu_functional(dec, basis, v)
        for j in range(1, n):
            rho = basis.index(("r", v, j))
            for b, c in enumerate(mus[j]):
                if c:
                    w.add(rho, b, TORIC_SIGN * 2 * n * c)
    return w


def extended_form(dec: DecoratedGraph, basis: ChartBasis) -> SkewForm:
    """Omega-hat = -(1/2) total form: integer FG block, n dlog(m) ^ d(rho) toric block."""
    return Fraction(-1, 2) * total_form(dec, basis)


# ---------------------------------------------------------------------------
# symplectic potential

class PotentialForm:
    """One-form sum_a (sum_b L[a][b] sigma_b) d sigma_a with rational weights."""

    def __init__(self, basis_labels, L):
        self.basis = tuple(basis_labels)
        self.L = tuple(tuple(row) for row in L)

    def exterior_derivative(self) -> SkewForm:
        w = SkewForm(self.basis)
        B = len(self.basis)
        for a in range(B):
            for b in range(B):
                c = self.L[a][b]
                if c:
                    w.add(b, a, c)  # d(sigma_b) ^ d(sigma_a) from sigma_b d sigma_a
        return w

    def pulled_back(self, T):
        """Substitute sigma = T sigma_old (and d sigma likewise): L -> T^t L T."""
        B = len(self.basis)
        TL = [[sum(T[i][a] * self.L[i][j] for i in range(B)) for j in range(B)]
              for a in range(B)]
        out = [[sum(TL[a][j] * T[j][b] for j in range(B)) for b in range(B)]
               for a in range(B)]
        return PotentialForm(self.basis, out)

    def __eq__(self, other):
        return isinstance(other, PotentialForm) and self.basis == other.basis \
            and self.L == other.L

    def coefficients_at(self, values):
        """Numeric coefficient of each d sigma_a at a point (values over basis)."""
        return [sum(self.L[a][b] * values[b] for b in range(len(self.basis)))
                for a in range(len(self.basis))]


def symplectic_potential(dec: DecoratedGraph, basis: ChartBasis) -> PotentialForm:
    """Canonical primitive theta with d(theta) equal to the total form exactly.

    theta = -(1/2) sum W_ab sigma_a d sigma_b antisymmetrized, the unique
    primitive with coefficients linear in the coordinates and the pair-wise
    (sigma_a d sigma_b - sigma_b d sigma_a)/2 shape of the printed potential.
    """
    w = total_form(dec, basis)
    B = len(basis)
    L = [[Fraction(0)] * B for _ in range(B)]
    for (a, b), c in w.entries.items():
        # c * d sigma_a ^ d sigma_b contributes (c/2)(sigma_a d sigma_b - sigma_b d sigma_a)
        half = Fraction(c, 2) if isinstance(c, (int, Fraction)) else c / 2
        L[b][a] += half
        L[a][b] -= half
    return PotentialForm(basis.labels, L)


def cherry_shift_matrix(dec: DecoratedGraph, basis: ChartBasis, moved_vertices):
    """Linear substitution T with rho_new = T-row expression in old coordinates.

    For each vertex whose cherry migrated one corner counterclockwise (over
    its corner's face edge pair), the toric coordinates shift by
    rho_{v;j} -> rho_{v;j} - sum_{b+c=j} xi_{f1;(n-j)bc} - zeta_{e1;n-j},
    everything else is unchanged.  Returns T as a dense rational matrix.
    """
    n = basis.n
    B = len(basis)
    T = [[Fraction(1) if i == j else Fraction(0) for j in range(B)] for i in range(B)]
    for v in moved_vertices:
        (f1, pos1), h1 = dec.vertex_faces_edges(v)[0]
        fv = dec.corner_index[(f1, pos1)]
        for j in range(1, n):
            row = basis.index(("r", v, j))
            for trip in face_triples(n):
                if trip[fv - 1] == n - j:
                    T[row][basis.index(("x", f1, trip))] -= 1
            T[row][basis.index(_zeta_slot(basis, h1, n - j))] -= 1
    return tuple(tuple(r) for r in T)
