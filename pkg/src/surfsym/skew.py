"""Labeled skew-symmetric coefficient matrices over a coordinate basis."""

from __future__ import annotations

from fractions import Fraction

from .scalars import rat_str, to_complex


class SkewForm:
    """Two-form with constant coefficients: sum of W[a,b] dsigma_a ^ dsigma_b, a < b.

    ``basis`` is the ordered tuple of coordinate labels; entries live in a
    sparse dict keyed by index pairs (a, b) with a < b.  Exact antisymmetry is
    structural.
    """

    __slots__ = ("basis", "entries")

    def __init__(self, basis, entries=None):
        self.basis = tuple(basis)
        self.entries = {}
        if entries:
            for (a, b), c in entries.items():
                self.add(a, b, c)

    def add(self, a, b, coeff):
        if a == b or coeff == 0:
            return
        if a > b:
            a, b, coeff = b, a, -coeff
        c = self.entries.get((a, b), 0) + coeff
        if c == 0:
            self.entries.pop((a, b), None)
        else:
            self.entries[(a, b)] = c

    def __getitem__(self, pair):
        a, b = pair
        if a == b:
            return 0
        if a > b:
            return -self.entries.get((b, a), 0)
        return self.entries.get((a, b), 0)

    def coeff(self, label_a, label_b):
        return self[self.basis.index(label_a), self.basis.index(label_b)]

    def __add__(self, other):
        assert self.basis == other.basis
        out = SkewForm(self.basis, dict(self.entries))
        for (a, b), c in other.entries.items():
            out.add(a, b, c)
        return out

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        out = SkewForm(self.basis)
        for (a, b), v in self.entries.items():
            out.add(a, b, c * v)
        return out

    def __eq__(self, other):
        return isinstance(other, SkewForm) and self.basis == other.basis \
            and self.entries == other.entries

    def restricted(self, labels):
        """Restriction to a sub-basis (rows/columns of the listed labels)."""
        labels = tuple(labels)
        idx = {self.basis.index(l): k for k, l in enumerate(labels)}
        out = SkewForm(labels)
        for (a, b), c in self.entries.items():
            if a in idx and b in idx:
                out.add(idx[a], idx[b], c)
        return out

    def dense(self):
        n = len(self.basis)
        m = [[Fraction(0)] * n for _ in range(n)]
        for (a, b), c in self.entries.items():
            m[a][b] = c
            m[b][a] = -c
        return tuple(tuple(r) for r in m)

    def max_abs_diff(self, other) -> float:
        assert self.basis == other.basis
        keys = set(self.entries) | set(other.entries)
        worst = 0.0
        for k in keys:
            d = to_complex(self.entries.get(k, 0)) - to_complex(other.entries.get(k, 0))
            worst = max(worst, abs(d))
        return worst

    def to_json_dict(self):
        ents = sorted(self.entries.items())
        return {
            "basis": [list(map(str, l)) for l in self.basis],
            "entries": [[a, b, rat_str(c) if isinstance(c, (int, Fraction)) else repr(c)]
                        for (a, b), c in ents],
        }

    def __repr__(self):
        return f"SkewForm({len(self.basis)} coords, {len(self.entries)} entries)"
