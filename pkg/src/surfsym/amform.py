"""Reduction to the one-vertex graph and the extended two-form.

``normalize_to_sigma_hat`` rewrites a full coordinate-graph pair, by recorded
two-form preserving moves only, into the canonical shape: one base vertex
carrying N cherry gadgets and 2g interleaved loop edges.  The monodromy
presentation {M_j, C_j, Lambda_j, A_l, B_l} is read off that shape, and
``evaluate_w`` computes the extended two-form

  (1/2) [ sum tr(dK_i K_i^-1 ^ dK_{i-1} K_{i-1}^-1)
        + sum tr(Lambda^-1 C^-1 dC ^ Lambda C^-1 dC)
        + 2 sum tr(D^-1 dD ^ P^-1 dP) + sum tr(D^-1 P^-1 dP ^ D P^-1 dP) ]
  + sum tr(Lambda^-1 dLambda ^ C^-1 dC)

whose coefficient matrix must equal -(1/2) of the combinatorial total form.
Handle matrices are eigendecomposed in float mode with first-order
perturbation jets (simple spectra required).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .jets import (Jet, log_form, mat, mat_identity, mat_inv, mat_mul,
                   mat_values, right_log_form, skew_pairing)
from .moves import MoveError, apply_move
from .pairs import Evaluation, StandardPair
from .ribbon import opposite
from .scalars import to_complex
from .skew import SkewForm


def _gadget_edges(pair):
    out = set()
    for info in pair.cherries.values():
        out |= {info["stem"], info["cherry"], info["inner"]}
    return out


def _greedy_reduce(pair, probe_chart, gadgets, stems):
    """Exhaust merges, zips, removals, and unblocking cherry migrations."""
    script = []
    cur = pair

    def do(step):
        nonlocal cur
        cur = apply_move(cur, step, probe_chart)
        script.append(step)

    guard = 0
    while True:
        guard += 1
        if guard > 10000:
            raise MoveError("normalization did not terminate")
        g = cur.graph
        # 1. remove monogon loops (the zip-then-detach composite; the jump
        #    condition J(-e) = J(e)^-1 holds identically for a loop)
        acted = False
        for cyc in g.faces():
            if len(cyc) == 1 and cyc[0][0] not in gadgets:
                h = cyc[0]
                do({"op": "detach", "vertex": g.vertex_of(h),
                    "edges": [list(h), list(opposite(h))]})
                acted = True
                break
        if acted:
            continue
        # 2. zip bigons of non-gadget edges
        for cyc in g.faces():
            if len(cyc) == 2 and cyc[0][0] != cyc[1][0] \
                    and cyc[0][0] not in gadgets and cyc[1][0] not in gadgets:
                h1, h2 = cyc
                do({"op": "zip", "edges": [list(h1), list(opposite(h2))]})
                acted = True
                break
        if acted:
            continue
        # 3. detach 2-valent non-gadget interior vertices (old face centers)
        for v in g.vertices:
            if g.valence(v) == 2 and v not in g.punctures:
                h1, h2 = g.rot[v]
                if h1[0] not in gadgets and h2[0] not in gadgets and h1 != opposite(h2):
                    do({"op": "detach", "vertex": v,
                        "edges": [list(h1), list(h2)]})
                    acted = True
                    break
        if acted:
            continue
        # 4. contract non-loop, non-gadget edges
        for e in g.edges:
            if e in gadgets:
                continue
            u, w = g.endpoints(e)
            if u != w and u not in g.punctures and w not in g.punctures:
                do({"op": "merge", "edge": [e, 1]})
                acted = True
                break
        if acted:
            continue
        # 5. a face that would be a monogon or bigon except for cherry gadgets
        #    sitting inside: migrate a blocking cherry across one of the
        #    face's real boundary edges (the follow-up zip or removal then
        #    fires with priority, so this makes progress)
        for cyc in g.faces():
            eff = [h for h in cyc if h[0] not in gadgets]
            if eff and len(eff) <= 2 and len(eff) < len(cyc):
                for h in cyc:
                    name = stems.get(h[0])
                    if name is None or g.vertex_of(h) == cur.cherries[name]["q"]:
                        continue
                    if g.sigma_inv(h)[0] not in gadgets:
                        do({"op": "cherry_migrate", "vertex": name,
                            "direction": "cw"})
                        acted = True
                    elif g.sigma(h)[0] not in gadgets:
                        do({"op": "cherry_migrate", "vertex": name,
                            "direction": "ccw"})
                        acted = True
                    if acted:
                        break
            if acted:
                break
        if not acted:
            break
    return cur, script


def _gather_stems(pair, probe_chart, stems):
    """Bubble the cherry stems into one consecutive block at the base vertex."""
    script = []
    cur = pair
    base = _base_vertex(cur)
    guard = 0
    while True:
        guard += 1
        if guard > 1000:
            raise MoveError("stem gathering did not terminate")
        rot = cur.graph.rot[base]
        idx = [i for i, h in enumerate(rot) if h[0] in stems]
        if not idx or len(idx) == len(rot):
            break
        span = (idx[-1] - idx[0]) + 1
        if span == len(idx):
            break
        moved = False
        for i in idx:
            prev = rot[(i - 1) % len(rot)]
            if prev[0] not in stems and any(
                    rot[(i - 1 - k) % len(rot)][0] in stems
                    for k in range(1, len(rot))):
                step = {"op": "cherry_migrate", "vertex": stems[rot[i][0]],
                        "direction": "cw"}
                cur = apply_move(cur, step, probe_chart)
                script.append(step)
                moved = True
                break
        if not moved:
            break
    return cur, script


def _handle_pattern_ok(pair):
    """Stems consecutive and loop halves parse as [x, y, -x, -y] blocks."""
    base = _base_vertex(pair)
    stems = {info["stem"] for info in pair.cherries.values()}
    rot = list(pair.graph.rot[base])
    if not all(h[0] in stems for h in rot):
        k = next(i for i, h in enumerate(rot) if h[0] in stems) \
            if any(h[0] in stems for h in rot) else 0
        while rot[k - 1][0] in stems:
            k -= 1
        rot = rot[k:] + rot[:k]
    tail = [h for h in rot if h[0] not in stems]
    lead = rot[:len(rot) - len(tail)]
    if len(lead) != len(stems) or any(h[0] not in stems for h in lead):
        return False
    while tail:
        if len(tail) < 4:
            return False
        if tail[2] != opposite(tail[0]) or tail[3] != opposite(tail[1]):
            return False
        tail = tail[4:]
    return True


def _rotation_signature(pair):
    base = _base_vertex(pair)
    stems = {info["stem"] for info in pair.cherries.values()}
    rot = pair.graph.rot[base]
    ids = {}
    sig = []
    for e, s in rot:
        if e in stems:
            sig.append("stem")
            continue
        if e not in ids:
            ids[e] = len(ids)
        sig.append(f"{ids[e]}{'+' if s == 1 else '-'}")
    # canonicalize up to rotation
    n = len(sig)
    best = min(tuple(sig[i:] + sig[:i]) for i in range(n))
    return best


def _slide_candidates(pair):
    """Half-edges hy at the base with a distinct non-gadget sigma-successor."""
    base = _base_vertex(pair)
    gadgets = _gadget_edges(pair)
    out = []
    for h in pair.graph.rot[base]:
        if h[0] in gadgets:
            continue
        nxt = pair.graph.sigma(h)
        if nxt[0] in gadgets or nxt[0] == h[0]:
            continue
        out.append((h, nxt))
    return out


def normalize_to_sigma_hat(pair: StandardPair, probe_chart):
    """Reduce to one base vertex + N cherries + 2g interleaved loops.

    Returns (normalized pair, move script).  Greedy merging/zipping handles
    everything except non-minimal loop systems (e.g. the three loops of a
    one-vertex torus triangulation); those are resolved by a bounded search
    over handle slides, each slide being an attach followed by a zip, so the
    whole script stays within the canonical moves.
    """
    gadgets = _gadget_edges(pair)
    stems = {info["stem"]: name for name, info in pair.cherries.items()}
    n_cherries = len(pair.cherries)
    genus = pair.graph.genus()
    target_valence = n_cherries + 4 * genus
    cable_counter = [0]
    seen = set()

    def finish(cur, script):
        cur2, extra = _gather_stems(cur, probe_chart, stems)
        if cur2.graph.valence(_base_vertex(cur2)) == target_valence \
                and _handle_pattern_ok(cur2):
            return cur2, script + extra
        return None

    def search(cur, script, depth):
        cur, steps = _greedy_reduce(cur, probe_chart, gadgets, stems)
        script = script + steps
        done = finish(cur, script)
        if done is not None:
            return done
        if depth == 0:
            return None
        sig = _rotation_signature(cur)
        if sig in seen:
            return None
        seen.add(sig)
        base = _base_vertex(cur)
        for hy, hz in _slide_candidates(cur):
            cable = ("cable", cable_counter[0])
            steps = [
                {"op": "attach", "vertex": base, "edge": list(hy),
                 "after": list(opposite(hz)), "new_edge_id": cable},
                {"op": "zip", "edges": [list(hy), list(hz)]},
            ]
            try:
                nxt = cur
                for s in steps:
                    nxt = apply_move(nxt, s, probe_chart)
            except MoveError:
                continue
            cable_counter[0] += 1
            found = search(nxt, script + steps, depth - 1)
            if found is not None:
                return found
        return None

    result = search(pair, [], depth=6)
    if result is None:
        raise MoveError("could not normalize the pair to the one-vertex shape")
    final, script = result
    _check_sigma_hat_shape(final)
    return final, script


def _base_vertex(pair):
    special = set(pair.graph.punctures)
    for info in pair.cherries.values():
        special.add(info["q"])
    bases = [v for v in pair.graph.vertices if v not in special]
    if len(bases) != 1:
        raise MoveError(f"expected a single base vertex, found {bases}")
    return bases[0]


def _check_sigma_hat_shape(pair):
    base = _base_vertex(pair)
    n_cherries = len(pair.cherries)
    g = pair.graph.genus()
    expected_valence = n_cherries + 4 * g
    if pair.graph.valence(base) != expected_valence:
        raise MoveError(
            f"normalized graph has base valence {pair.graph.valence(base)}, "
            f"expected {expected_valence} (N + 4g)")


# ---------------------------------------------------------------------------
# monodromy presentation

class MonodromyPresentation:
    """Matrices {M_j, C_j, Lambda_j, A_l, B_l} with M_1..M_N prod A B^-1 A^-1 B = 1.

    Entries are jet matrices over the originating chart, so the extended form
    can be evaluated directly.
    """

    def __init__(self, m, c, lam, a, b, dim):
        self.m = list(m)
        self.c = list(c)
        self.lam = list(lam)
        self.a = list(a)
        self.b = list(b)
        self.dim = dim

    @property
    def n_punctures(self):
        return len(self.m)

    @property
    def genus(self):
        return len(self.a)

    def relation_residual(self):
        """Max |entry| of M_1...M_N prod_l A_l B_l^-1 A_l^-1 B_l - 1 (values)."""
        prod = None
        for mm in self.m:
            v = mat_values(mm)
            prod = v if prod is None else mat_mul(prod, v)
        for al, bl in zip(self.a, self.b):
            va, vb = mat_values(al), mat_values(bl)
            h = mat_mul(va, mat_inv(vb), mat_inv(va), vb)
            prod = h if prod is None else mat_mul(prod, h)
        n = len(prod)
        worst = 0.0
        for i in range(n):
            for j in range(n):
                d = prod[i][j] - (1 if i == j else 0)
                worst = max(worst, abs(to_complex(d)))
        return worst


def extract_presentation(pair: StandardPair, chart) -> MonodromyPresentation:
    """Read the presentation off a normalized pair at a chart point."""
    ev = Evaluation(pair, chart, jets=True)
    base = _base_vertex(pair)
    rot = list(pair.graph.rot[base])
    stems = {info["stem"]: name for name, info in pair.cherries.items()}
    # rotate so the stem block leads (stems were gathered to be consecutive)
    if all(h[0] in stems for h in rot):
        k = 0
    else:
        k = next(i for i, h in enumerate(rot) if h[0] in stems)
        while rot[k - 1][0] in stems:
            k -= 1
    rot = rot[k:] + rot[:k]
    n_stems = 0
    while n_stems < len(rot) and rot[n_stems][0] in stems:
        n_stems += 1
    if n_stems != len(pair.cherries):
        raise MoveError("stems are not consecutive at the base vertex")
    m, c, lam = [], [], []
    for h in rot[:n_stems]:
        name = stems[h[0]]
        info = pair.cherries[name]
        m.append(ev.jump(h))
        c.append(ev.jump((info["cherry"], 1)))
        lam.append(ev.jump((info["inner"], 1)))
    a, b = [], []
    tail = rot[n_stems:]
    while tail:
        if len(tail) < 4:
            raise MoveError("handle block malformed")
        x, y = tail[0], tail[1]
        if tail[2] != opposite(x) or tail[3] != opposite(y):
            raise MoveError("handle loops are not in the standard interleave")
        a.append(ev.jump(x))
        b.append(mat_inv(ev.jump(y)))
        tail = tail[4:]
    return MonodromyPresentation(m, c, lam, a, b, dim=len(chart.basis))


# ---------------------------------------------------------------------------
# eigen-decomposition with perturbation jets

def _eigen_jets(a_jet, dim, tol=1e-10):
    """A = P D P^-1 for a complex jet matrix with simple spectrum.

    Eigenvalue jets are d(lambda_i) = (V^-1 dA V)_ii; eigenvector jets come
    from the resolvent sum, then columns are normalized so their largest
    modulus entry is 1.
    """
    n = len(a_jet)
    avals = np.array([[complex(v) for v in row] for row in mat_values(a_jet)])
    lam, vecs = np.linalg.eig(avals)
    scale = max(abs(l) for l in lam)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(lam[i] - lam[j]) <= tol * max(1.0, scale):
                raise ValueError("eigenvalue collision: resample the chart")
    vinv = np.linalg.inv(vecs)
    slots = sorted({a for row in a_jet for x in row
                    if isinstance(x, Jet) for a, t in enumerate(x.tangent) if t != 0})
    dlam = {i: [0j] * dim for i in range(n)}
    dvec = [[ [0j] * dim for _ in range(n)] for _ in range(n)]
    for s in slots:
        da = np.array([[complex(x.tangent[s]) if isinstance(x, Jet) else 0j
                        for x in row] for row in a_jet])
        gmat = vinv @ da @ vecs
        f = np.zeros((n, n), dtype=complex)
        for i in range(n):
            dlam[i][s] = gmat[i, i]
            for j in range(n):
                if i != j:
                    f[i, j] = gmat[i, j] / (lam[j] - lam[i])
        dv = vecs @ f
        for i in range(n):
            for j in range(n):
                dvec[i][j][s] = dv[i, j]
    p = [[Jet(vecs[i, j], tuple(dvec[i][j])) for j in range(n)] for i in range(n)]
    # normalize columns: largest-modulus entry scaled to 1
    cols = []
    for j in range(n):
        k = max(range(n), key=lambda i: abs(vecs[i, j]))
        cols.append(p[k][j].inverse())
    p = mat([[p[i][j] * cols[j] for j in range(n)] for i in range(n)])
    d = mat([[Jet(lam[i], tuple(dlam[i])) if i == j else 0 for j in range(n)]
             for i in range(n)])
    return p, d


# ---------------------------------------------------------------------------
# the extended two-form

def _pair_into(w, contrib, factor=1):
    for (x, y), cval in contrib.items():
        w.add(x, y, factor * cval)


def _sandwich_forms(diag, gamma, dim):
    """({a: D^-1 g_a}, {a: D g_a}) for diagonal D and one-form gamma."""
    dinv = mat_inv(diag)
    lo = {a: mat_mul(dinv, ga) for a, ga in gamma.items()}
    hi = {a: mat_mul(diag, ga) for a, ga in gamma.items()}
    return lo, hi


def evaluate_w(pres: MonodromyPresentation, basis) -> SkewForm:
    """Extended two-form of the presentation over the chart's log directions."""
    dim = pres.dim
    w = SkewForm(basis.labels)
    # K-chain: K_j = M_1...M_j, then A_l and B_l^-1 A_l^-1 B_l blocks
    chain = []
    for mm in pres.m:
        chain.append(mm)
    for al, bl in zip(pres.a, pres.b):
        chain.append(al)
        binv = mat_inv(bl)
        chain.append(mat_mul(binv, mat_inv(al), bl))
    k_forms = []
    prod = None
    for jm in chain:
        prod = jm if prod is None else mat_mul(prod, jm)
        k_forms.append(right_log_form(prod, dim))
    for i in range(1, len(chain)):
        _pair_into(w, skew_pairing(k_forms[i], k_forms[i - 1], dim))
    # puncture terms
    for cj, lj in zip(pres.c, pres.lam):
        gamma = log_form(cj, dim)
        lam_vals = mat_values(lj)
        lo, hi = _sandwich_forms(lam_vals, gamma, dim)
        _pair_into(w, skew_pairing(lo, hi, dim))
        # extension term, doubled here so the global 1/2 leaves it intact
        dlam = log_form(lj, dim)
        _pair_into(w, skew_pairing(dlam, gamma, dim), factor=2)
    # handle terms
    for al, bl in zip(pres.a, pres.b):
        p1, d1 = _eigen_jets(al, dim)
        p2 = mat_mul(mat_inv(bl), p1)
        d2 = mat_inv(d1)
        for p, d in ((p1, d1), (p2, d2)):
            pi = log_form(p, dim)
            delta = log_form(d, dim)
            _pair_into(w, skew_pairing(delta, pi, dim), factor=2)
            d_vals = mat_values(d)
            lo, hi = _sandwich_forms(d_vals, pi, dim)
            _pair_into(w, skew_pairing(lo, hi, dim))
    out = SkewForm(basis.labels)
    for (x, y), cval in w.entries.items():
        if isinstance(cval, (int, Fraction)):
            out.add(x, y, Fraction(cval) / 2)
        else:
            out.add(x, y, cval / 2)
    return out
