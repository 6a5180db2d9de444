"""First-order jets over a coordinate basis, and generic matrix algebra.

A ``Jet`` carries a scalar value together with its tangent vector over the
active chart's logarithmic directions: the component in slot ``a`` is the
derivative along the a-th log-coordinate.  Jet arithmetic implements the
Leibniz rule, so any rational expression of coordinate jets differentiates
itself; matrix products and inverses propagate tangents through
d(M N) = dM N + M dN and d(M^-1) = -M^-1 dM M^-1.

Matrices are plain tuples of tuples.  Entries may be jets or bare scalars
(mixing is fine: bare scalars act as constants); everything stays exact when
the underlying scalars are exact.
"""

from __future__ import annotations

from fractions import Fraction


def _is_scalar(x):
    return not isinstance(x, Jet)


class Jet:
    __slots__ = ("value", "tangent")

    def __init__(self, value, tangent):
        self.value = value
        self.tangent = tuple(tangent)

    @classmethod
    def constant(cls, value, dim):
        return cls(value, (0,) * dim)

    @property
    def dim(self):
        return len(self.tangent)

    def __add__(self, other):
        if _is_scalar(other):
            return Jet(self.value + other, self.tangent)
        return Jet(self.value + other.value,
                   tuple(a + b for a, b in zip(self.tangent, other.tangent)))

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.value, tuple(-a for a in self.tangent))

    def __sub__(self, other):
        if _is_scalar(other):
            return Jet(self.value - other, self.tangent)
        return Jet(self.value - other.value,
                   tuple(a - b for a, b in zip(self.tangent, other.tangent)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if _is_scalar(other):
            return Jet(self.value * other, tuple(a * other for a in self.tangent))
        u, v = self.value, other.value
        return Jet(u * v,
                   tuple(u * b + v * a for a, b in zip(self.tangent, other.tangent)))

    __rmul__ = __mul__

    def inverse(self):
        w = 1 / self.value if not isinstance(self.value, (int, Fraction)) \
            else Fraction(1, 1) / self.value
        w2 = -(w * w)
        return Jet(w, tuple(w2 * a for a in self.tangent))

    def __truediv__(self, other):
        if _is_scalar(other):
            return self * (Fraction(1, 1) / other if isinstance(other, (int, Fraction)) else 1 / other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = Jet(1, (0,) * self.dim)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Jet):
            return self.value == other.value and self.tangent == other.tangent
        return self.value == other and all(t == 0 for t in self.tangent)

    def __repr__(self):
        return f"Jet({self.value}, {self.tangent})"


def jet_value(x):
    return x.value if isinstance(x, Jet) else x


def jet_tangent(x, dim):
    return x.tangent if isinstance(x, Jet) else (0,) * dim


# ---------------------------------------------------------------------------
# generic dense matrices (tuples of tuples; entries: scalars or jets)

def mat(rows):
    return tuple(tuple(r) for r in rows)


def mat_identity(n, one=1):
    return tuple(tuple(one if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(*ms):
    out = ms[0]
    for m in ms[1:]:
        n, k, k2, p = len(out), len(out[0]), len(m), len(m[0])
        assert k == k2
        out = tuple(tuple(sum(out[i][t] * m[t][j] for t in range(k))
                          for j in range(p)) for i in range(n))
    return out


def mat_scale(c, m):
    return tuple(tuple(c * x for x in row) for row in m)


def mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_transpose(m):
    return tuple(tuple(m[i][j] for i in range(len(m))) for j in range(len(m[0])))


def _pivot_weight(x):
    v = jet_value(x)
    if isinstance(v, complex):
        return abs(v)
    return 1 if v != 0 else 0


def mat_inv(m):
    """Gauss-Jordan inverse; exact over exact scalars, partial pivoting over floats."""
    n = len(m)
    a = [list(row) for row in m]
    b = [list(row) for row in mat_identity(n)]
    for col in range(n):
        piv, best = None, 0
        for r in range(col, n):
            w = _pivot_weight(a[r][col])
            if w > best:
                piv, best = r, w
                if not isinstance(jet_value(a[r][col]), complex):
                    break
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
        inv_p = 1 / a[col][col] if not isinstance(a[col][col], (int, Fraction)) \
            else Fraction(1, 1) / a[col][col]
        a[col] = [x * inv_p for x in a[col]]
        b[col] = [x * inv_p for x in b[col]]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if _pivot_weight(f) == 0:
                continue
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
            b[r] = [x - f * y for x, y in zip(b[r], b[col])]
    return mat(b)


def mat_det(m):
    """Determinant by fraction-free-ish elimination over a field."""
    n = len(m)
    a = [list(row) for row in m]
    det = 1
    for col in range(n):
        piv = None
        for r in range(col, n):
            if _pivot_weight(a[r][col]) > 0:
                piv = r
                break
        if piv is None:
            return 0 * det
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col]
        inv_p = 1 / a[col][col] if not isinstance(a[col][col], (int, Fraction)) \
            else Fraction(1, 1) / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv_p
            if _pivot_weight(f) == 0:
                continue
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def mat_trace(m):
    t = m[0][0]
    for i in range(1, len(m)):
        t = t + m[i][i]
    return t


def mat_values(m):
    return tuple(tuple(jet_value(x) for x in row) for row in m)


def mat_constant(m, dim):
    """Lift a scalar matrix to a jet matrix with zero tangents."""
    return tuple(tuple(x if isinstance(x, Jet) else Jet.constant(x, dim) for x in row)
                 for row in m)


def mat_max_abs(m):
    best = 0.0
    for row in m:
        for x in row:
            v = jet_value(x)
            best = max(best, abs(complex(v)) if not isinstance(v, (int, Fraction)) else abs(float(v)))
    return best


# ---------------------------------------------------------------------------
# matrix-valued one-forms: sparse maps direction -> scalar matrix

def log_form(m, dim):
    """Left-logarithmic derivative M^-1 dM of a jet matrix, as {slot: matrix}."""
    vals = mat_values(m)
    inv_vals = mat_inv(vals)
    n = len(m)
    slots = set()
    for row in m:
        for x in row:
            if isinstance(x, Jet):
                for a, t in enumerate(x.tangent):
                    if t != 0:
                        slots.add(a)
    out = {}
    for a in slots:
        ta = tuple(tuple(jet_tangent(m[i][j], dim)[a] for j in range(n)) for i in range(n))
        out[a] = mat_mul(inv_vals, ta)
    return out


def right_log_form(m, dim):
    """dM M^-1 of a jet matrix, as {slot: matrix}."""
    vals = mat_values(m)
    inv_vals = mat_inv(vals)
    n = len(m)
    slots = set()
    for row in m:
        for x in row:
            if isinstance(x, Jet):
                for a, t in enumerate(x.tangent):
                    if t != 0:
                        slots.add(a)
    out = {}
    for a in slots:
        ta = tuple(tuple(jet_tangent(m[i][j], dim)[a] for j in range(n)) for i in range(n))
        out[a] = mat_mul(ta, inv_vals)
    return out


def _tr_prod(x, y):
    n = len(x)
    t = 0
    for i in range(n):
        for j in range(n):
            t = t + x[i][j] * y[j][i]
    return t


def skew_pairing(alpha, beta, dim):
    """tr(alpha ^ beta) of two matrix one-forms, as a skew coefficient matrix.

    Returns W with W[a][b] = tr(alpha_a beta_b - alpha_b beta_a) stored sparsely
    as {(a, b): coeff} for a < b only.
    """
    out = {}
    for a, xa in alpha.items():
        for b, yb in beta.items():
            if a == b:
                continue
            t = _tr_prod(xa, yb)
            if t == 0:
                continue
            key, sgn = ((a, b), 1) if a < b else ((b, a), -1)
            out[key] = out.get(key, 0) + sgn * t
    return {k: v for k, v in out.items() if v != 0}
