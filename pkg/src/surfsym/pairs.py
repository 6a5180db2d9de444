"""Standard pairs: graphs with SL(n) jump factories, flatness, and the two-form.

Jumps are stored as factories (chart -> jet matrix) on the canonical
orientation of each edge; the reversed jump is the exact jet inverse, so
J(-e) = J(e)^-1 holds structurally.  Factories survive graph moves unchanged,
which lets move invariance be tested at many chart points.

``evaluate_omega`` implements the canonical two-form of a flat graph
connection: at every vertex, with outgoing jumps J_1 ... J_k counterclockwise
(starting at the cilium where one exists), it accumulates
sum_l tr((J_[1:l])^-1 d J_[1:l] ^ J_l^-1 d J_l) over the chart's logarithmic
directions.
"""

from __future__ import annotations

from .charts import CoordinateChart
from .fgraph import DecoratedGraph
from .jets import (Jet, log_form, mat, mat_identity, mat_inv, mat_mul,
                   mat_values, mat_max_abs, skew_pairing)
from .ribbon import RibbonGraph, opposite
from .skew import SkewForm
from .sln import (edge_matrix, face_matrices, toric_matrix,
                  triangular_diagonalize)


class Evaluation:
    """Evaluation context: one chart point, memoized factory values."""

    def __init__(self, pair, chart: CoordinateChart, jets=True):
        self.pair = pair
        self.chart = chart
        self.jets = jets
        self._memo = {}

    def call(self, factory):
        key = id(factory)
        if key not in self._memo:
            self._memo[key] = factory(self)
        return self._memo[key]

    def oriented(self, factory, sign):
        """Value of a factory, inverted for the reversed orientation."""
        m = self.call(factory)
        if sign == 1:
            return m
        key = ("inv", id(factory))
        if key not in self._memo:
            self._memo[key] = mat_inv(m)
        return self._memo[key]

    def jump(self, h):
        """Jet matrix on the oriented edge h of the current pair."""
        e, s = h
        return self.oriented(self.pair.jumps[e], s)


class StandardPair:
    """Ribbon graph plus jump factories on canonical edge orientations.

    ``cherries`` records the cherry gadgets symbolically ({name: {"stem",
    "cherry", "inner", "q", "t"}}) so moves can address "the cherry at v"
    after arbitrary rewiring.
    """

    def __init__(self, graph: RibbonGraph, jumps, cilia=None, cherries=None):
        self.graph = graph
        self.jumps = dict(jumps)
        self.cilia = dict(cilia or {})
        self.cherries = dict(cherries or {})
        for e in graph.edges:
            if e not in self.jumps:
                raise ValueError(f"edge {e} has no jump factory")

    def vertex_jumps(self, ev: Evaluation, v):
        hs = self.graph.rot[v]
        if v in self.cilia:
            k = hs.index(self.cilia[v])
            hs = hs[k:] + hs[:k]
        return hs, [ev.jump(h) for h in hs]


# ---------------------------------------------------------------------------
# jump factories for the Fock-Goncharov graph

def _s_factory(e):
    def fac(ev):
        z = ev.chart.z_vector((e, 1), jets=ev.jets)
        return edge_matrix(ev.chart.n, z)
    return fac


def _a_factory(f, index):
    def fac(ev):
        xv = ev.chart.x_values(f, jets=ev.jets)
        return face_matrices(ev.chart.n, xv)[index - 1]
    return fac


def _stem_factory(schedule):
    """M_v^0 = (J_1 ... J_2q)^-1 over a frozen (factory, sign) schedule."""
    def fac(ev):
        prod = None
        for base, sign in schedule:
            m = ev.oriented(base, sign)
            prod = m if prod is None else mat_mul(prod, m)
        return mat_inv(prod)
    return fac


def _lambda_factory(stem_fac):
    def fac(ev):
        m = ev.call(stem_fac)
        n = len(m)
        return tuple(tuple(m[i][i] if i == j else 0 for j in range(n))
                     for i in range(n))
    return fac


def _cherry_factory(v, stem_fac):
    def fac(ev):
        m = ev.call(stem_fac)
        c0, _lam = triangular_diagonalize(m)
        r = toric_matrix(ev.chart.n, ev.chart.r_vector(v, jets=ev.jets))
        return mat_mul(c0, r)
    return fac


def constant_factory(matrix):
    def fac(ev):
        return matrix
    return fac


def assemble_fg_pair(dec: DecoratedGraph) -> StandardPair:
    """Standard pair of the decorated graph: S on triangulation edges, A_i on
    face-center edges, M_v^0 on stems, C_v = C_v^0 R_v on cherries, Lambda_v
    inside; flat at every vertex by construction."""
    jumps = {}
    for e in dec.tri.graph.edges:
        jumps[e] = _s_factory(e)
    for (f, pos), eid in dec.eedge.items():
        jumps[eid] = _a_factory(f, dec.corner_index[(f, pos)])
    cherries = {}
    for v in dec.tri.graph.vertices:
        schedule = [(jumps[e], s) for (e, s) in dec.star(v)]
        stem = _stem_factory(schedule)
        jumps[dec.stem[v]] = stem
        jumps[dec.inner[v]] = _lambda_factory(stem)
        jumps[dec.cherry[v]] = _cherry_factory(v, stem)
        cherries[v] = {"stem": dec.stem[v], "cherry": dec.cherry[v],
                       "inner": dec.inner[v], "q": ("q", v), "t": ("t", v)}
    cilia = {v: (dec.stem[v], 1) for v in dec.tri.graph.vertices}
    return StandardPair(dec.graph, jumps, cilia, cherries)


# ---------------------------------------------------------------------------
# flatness and the two-form

def verify_flatness(pair: StandardPair, chart: CoordinateChart):
    """Max deviation of the ccw jump product from the identity, per vertex.

    Exact charts give exact zeros; float charts give float residuals.
    """
    ev = Evaluation(pair, chart, jets=False)
    out = {}
    for v in pair.graph.vertices:
        if pair.graph.valence(v) < 2:
            continue
        _, js = pair.vertex_jumps(ev, v)
        prod = mat_identity(len(mat_values(js[0])))
        for m in js:
            prod = mat_mul(prod, mat_values(m))
        dev = mat_max_abs(tuple(tuple(x - (1 if i == j else 0)
                                      for j, x in enumerate(row))
                                for i, row in enumerate(prod)))
        out[v] = dev
    return out


def evaluate_omega(pair: StandardPair, chart: CoordinateChart) -> SkewForm:
    """Canonical two-form of the pair at a chart point, over log directions."""
    ev = Evaluation(pair, chart, jets=True)
    dim = len(chart.basis)
    w = SkewForm(chart.basis.labels)
    for v in pair.graph.vertices:
        if pair.graph.valence(v) < 2:
            continue
        _, js = pair.vertex_jumps(ev, v)
        k = None
        for l, j in enumerate(js):
            k = j if k is None else mat_mul(k, j)
            if l == 0:
                continue  # tr(alpha ^ alpha) = 0
            contrib = skew_pairing(log_form(k, dim), log_form(j, dim), dim)
            for (a, b), c in contrib.items():
                w.add(a, b, c)
    return w


def omega_is_start_invariant(pair, chart, v, starts=10):
    """Exact cyclic-start independence of the vertex contribution (flat vertex)."""
    ev = Evaluation(pair, chart, jets=True)
    dim = len(chart.basis)
    hs = pair.graph.rot[v]
    ref = None
    for shift in range(min(starts, len(hs))):
        rotated = hs[shift:] + hs[:shift]
        js = [ev.jump(h) for h in rotated]
        w = SkewForm(chart.basis.labels)
        k = None
        for l, j in enumerate(js):
            k = j if k is None else mat_mul(k, j)
            if l == 0:
                continue
            for (a, b), c in skew_pairing(log_form(k, dim), log_form(j, dim), dim).items():
                w.add(a, b, c)
        if ref is None:
            ref = w
        elif w != ref:
            return False
    return True
