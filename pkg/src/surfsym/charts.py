"""Coordinate charts: multiplicative Fock-Goncharov coordinates and their jets.

A chart stores the multiplicative coordinates only (edge vectors z_e, face
coordinates x_{f;abc}, toric coordinates r_{v;j}), exact rationals in exact
mode.  Logarithmic coordinates never materialize: they exist as the tangent
directions of jets, via the chain rule d/d(log s) = s d/ds.  The basis order
is: all zeta directions (by edge id, then component), all xi directions (by
face id, then descending-lex triple), all rho directions (by vertex id).
"""

from __future__ import annotations

import random
from fractions import Fraction

from .jets import Jet
from .scalars import rat, rat_str, to_complex
from .sln import edge_reverse, face_triples


class ChartBasis:
    def __init__(self, n, edge_ids, face_ids, vertex_ids):
        self.n = n
        self.edge_ids = tuple(edge_ids)
        self.face_ids = tuple(face_ids)
        self.vertex_ids = tuple(vertex_ids)
        labels = []
        for e in self.edge_ids:
            labels += [("z", e, j) for j in range(1, n)]
        for f in self.face_ids:
            labels += [("x", f, t) for t in face_triples(n)]
        for v in self.vertex_ids:
            labels += [("r", v, j) for j in range(1, n)]
        self.labels = tuple(labels)
        self._index = {l: i for i, l in enumerate(labels)}

    def __len__(self):
        return len(self.labels)

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown coordinate label {label}") from None


class CoordinateChart:
    """Multiplicative coordinate values over a ChartBasis."""

    def __init__(self, basis: ChartBasis, values):
        self.basis = basis
        self.values = dict(values)
        missing = [l for l in basis.labels if l not in self.values]
        if missing:
            raise ValueError(f"chart is missing coordinates, e.g. {missing[0]}")
        for l, v in self.values.items():
            if l not in basis._index:
                raise KeyError(f"unknown coordinate label {l}")
            if v == 0:
                raise ValueError(f"coordinate {l} is zero")

    @property
    def n(self):
        return self.basis.n

    def value(self, label):
        return self.values[label]

    def jet(self, label):
        """Multiplicative value as a jet: tangent = value in its own log slot."""
        v = self.values[label]
        dim = len(self.basis)
        t = [0] * dim
        t[self.basis.index(label)] = v
        return Jet(v, t)

    def z_vector(self, half_edge, jets=True):
        """Edge coordinates for an oriented edge as jets (or bare values).

        For the canonical orientation these are the stored z_{e;j}; for the
        reverse they are (-1)^(n-1) z_{e;n-j}, whose log-direction is the
        (e, n-j) slot.
        """
        e, s = half_edge
        n = self.n
        if s == 1:
            vals = [self.values[("z", e, j)] for j in range(1, n)]
            slots = [("z", e, j) for j in range(1, n)]
        else:
            sign = (-1) ** (n - 1)
            vals = [sign * self.values[("z", e, n - j)] for j in range(1, n)]
            slots = [("z", e, n - j) for j in range(1, n)]
        if not jets:
            return tuple(vals)
        dim = len(self.basis)
        out = []
        for v, l in zip(vals, slots):
            t = [0] * dim
            t[self.basis.index(l)] = v
            out.append(Jet(v, t))
        return tuple(out)

    def x_values(self, f, jets=True):
        n = self.n
        if jets:
            return {t: self.jet(("x", f, t)) for t in face_triples(n)}
        return {t: self.values[("x", f, t)] for t in face_triples(n)}

    def r_vector(self, v, jets=True):
        n = self.n
        if jets:
            return tuple(self.jet(("r", v, j)) for j in range(1, n))
        return tuple(self.values[("r", v, j)] for j in range(1, n))

    def to_float(self):
        vals = {l: to_complex(v) for l, v in self.values.items()}
        out = CoordinateChart.__new__(CoordinateChart)
        out.basis = self.basis
        out.values = vals
        return out

    # -- serialization ------------------------------------------------------
    def to_json_dict(self):
        z, x, r = {}, {}, {}
        for (kind, obj, idx), v in sorted(self.values.items(), key=lambda kv: str(kv[0])):
            sv = rat_str(v) if isinstance(v, (int, Fraction)) else repr(v)
            if kind == "z":
                z.setdefault(str(obj), [None] * (self.n - 1))[idx - 1] = sv
            elif kind == "x":
                x.setdefault(str(obj), {})["".join(map(str, idx))] = sv
            else:
                r.setdefault(str(obj), [None] * (self.n - 1))[idx - 1] = sv
        return {"n": self.n, "z": z, "x": x, "r": r}


def chart_from_json(basis: ChartBasis, d) -> CoordinateChart:
    n = basis.n
    if d.get("n", n) != n:
        raise ValueError(f"chart rank n={d.get('n')} does not match basis n={n}")
    key = {str(e): e for e in basis.edge_ids}
    keyf = {str(f): f for f in basis.face_ids}
    keyv = {str(v): v for v in basis.vertex_ids}
    values = {}
    for e_s, vec in d.get("z", {}).items():
        if e_s not in key:
            raise ValueError(f"chart: unknown edge id {e_s}")
        if len(vec) != n - 1:
            raise ValueError(f"chart: edge {e_s} needs {n-1} coordinates")
        for j, sv in enumerate(vec, start=1):
            values[("z", key[e_s], j)] = rat(sv)
    for f_s, trips in d.get("x", {}).items():
        if f_s not in keyf:
            raise ValueError(f"chart: unknown face id {f_s}")
        for abc, sv in trips.items():
            trip = tuple(int(c) for c in abc)
            values[("x", keyf[f_s], trip)] = rat(sv)
    for v_s, vec in d.get("r", {}).items():
        if v_s not in keyv:
            raise ValueError(f"chart: unknown vertex id {v_s}")
        for j, sv in enumerate(vec, start=1):
            values[("r", keyv[v_s], j)] = rat(sv)
    return CoordinateChart(basis, values)


def random_chart(basis: ChartBasis, seed, mode="exact", predicate=None,
                 max_attempts=1000) -> CoordinateChart:
    """Seeded random rational chart; resamples while ``predicate`` rejects it.

    Numerators and denominators are drawn from [1, 97] with random signs on z
    and x; toric coordinates are kept positive (their sign is a root-of-unity
    gauge).  ``predicate(chart) -> str|None`` returns a rejection reason.
    """
    rng = random.Random(seed)
    for _ in range(max_attempts):
        values = {}
        for label in basis.labels:
            num = rng.randint(1, 97)
            den = rng.randint(1, 97)
            v = Fraction(num, den)
            if label[0] in ("z", "x") and rng.random() < 0.5:
                v = -v
            values[label] = v
        chart = CoordinateChart(basis, values)
        if mode == "float":
            chart = chart.to_float()
        reason = predicate(chart) if predicate else None
        if reason is None:
            return chart
    raise RuntimeError(f"random_chart: no admissible chart after {max_attempts} "
                       f"attempts (last reason: {reason})")
