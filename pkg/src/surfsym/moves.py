"""The two-form preserving graph moves and the invariance harness.

Each move takes a standard pair and returns a new one; the chart and its
basis never change, only the graph and the jump factories, so invariance is
literally equality of the evaluated coefficient matrices.  Factories compose
structurally (products, inverses, conjugations of the originals), which keeps
every rewrite exact.

Preconditions that are identities of jump values (detach's J(e) = J(e')^-1,
face collapse's trivial holonomy) are checked exactly at a probe chart when
one is supplied.
"""

from __future__ import annotations

from .jets import mat_identity, mat_inv, mat_mul, mat_values
from .pairs import Evaluation, StandardPair
from .ribbon import RibbonGraph, opposite


class MoveError(ValueError):
    pass


def _product_factory(f1, f2):
    def fac(ev):
        return mat_mul(ev.call(f1), ev.call(f2))
    return fac


def _inverse_factory(f):
    def fac(ev):
        return mat_inv(ev.call(f))
    return fac


def _conjugate_factory(j, f):
    """ev -> J^-1 F J."""
    def fac(ev):
        jm = ev.call(j)
        return mat_mul(mat_inv(jm), ev.call(f), jm)
    return fac


def _half_factory(pair, h):
    """Factory producing the jump of the oriented edge h."""
    e, s = h
    base = pair.jumps[e]
    return base if s == 1 else _inverse_factory(base)


def _with_rot(pair, rot, jumps=None, cilia=None, cherries=None):
    graph = RibbonGraph(rot, pair.graph.punctures)
    live = {h for hs in rot.values() for h in hs}
    cil = {v: h for v, h in (cilia if cilia is not None else pair.cilia).items()
           if v in rot and h in live}
    return StandardPair(graph, pair.jumps if jumps is None else jumps, cil,
                        cherries if cherries is not None else pair.cherries)


def _values_equal_identity(ev, factories):
    prod = None
    for h in factories:
        m = mat_values(ev.jump(h))
        prod = m if prod is None else mat_mul(prod, m)
    return prod == mat_identity(len(prod))


# ---------------------------------------------------------------------------
# the five moves

def zip_edges(pair: StandardPair, h, hp) -> StandardPair:
    """Zip two parallel edges bounding a bigon into one.

    ``h`` and ``hp`` are oriented edges with the same source and target,
    counterclockwise-consecutive at both; the surviving edge keeps h's id and
    carries J(h) J(hp).
    """
    g = pair.graph
    if h[0] == hp[0]:
        raise MoveError("zip needs two distinct edges")
    if g.vertex_of(h) != g.vertex_of(hp) or \
            g.vertex_of(opposite(h)) != g.vertex_of(opposite(hp)):
        raise MoveError("zip: edges do not share endpoints")
    if not (g.face_next(h) == opposite(hp) and g.face_next(opposite(hp)) == h):
        raise MoveError("zip: edges do not bound a bigon (not homotopic)")
    zipped = _product_factory(_half_factory(pair, h), _half_factory(pair, hp))
    jumps = dict(pair.jumps)
    del jumps[hp[0]]
    jumps[h[0]] = zipped if h[1] == 1 else _inverse_factory(zipped)
    rot = {v: tuple(x for x in hs if x[0] != hp[0]) for v, hs in g.rot.items()}
    return _with_rot(pair, rot, jumps)


def detach(pair: StandardPair, v, h, hp, probe_chart=None) -> StandardPair:
    """Detach two consecutive edges with inverse jumps from the vertex v.

    ``h`` and ``hp`` are ccw-consecutive outgoing edges at v with
    J(h) = J(hp)^-1; v loses both, and the far ends join into a single edge
    (h's id), or the edge disappears when hp is h reversed (a trivial loop).
    """
    g = pair.graph
    if g.vertex_of(h) != v or g.vertex_of(hp) != v or g.sigma(h) != hp:
        raise MoveError("detach: edges not ccw-consecutive at the vertex")
    if probe_chart is not None:
        ev = Evaluation(pair, probe_chart, jets=False)
        if not _values_equal_identity(ev, [h, hp]):
            raise MoveError("detach: jump condition J(e) = J(e')^-1 violated")
    rot = {w: list(hs) for w, hs in g.rot.items()}
    if hp == opposite(h):
        # trivial loop: delete the edge outright
        rot[v] = [x for x in rot[v] if x[0] != h[0]]
        jumps = dict(pair.jumps)
        del jumps[h[0]]
        return _with_rot(pair, {w: tuple(hs) for w, hs in rot.items()}, jumps)
    # far half of hp is replaced by the far half of h's partner
    rot[v] = [x for x in rot[v] if x not in (h, hp)]
    wp = g.vertex_of(opposite(hp))
    k = rot[wp].index(opposite(hp))
    rot[wp][k] = h  # h's half-edge migrates to the far vertex of hp
    jumps = dict(pair.jumps)
    del jumps[hp[0]]
    return _with_rot(pair, {w: tuple(hs) for w, hs in rot.items()}, jumps)


def attach(pair: StandardPair, v, h, after, new_edge_id) -> StandardPair:
    """Attach the edge h to v, splitting it in two (inverse of detach).

    ``h`` is an oriented edge w -> w'; after the move, h ends at v instead and
    a new edge runs v -> w' carrying the same jump, so the two consecutive
    edges at v have inverse jumps.  ``after`` names the half-edge at v behind
    which the pair is inserted (None prepends).
    """
    g = pair.graph
    if new_edge_id in pair.jumps:
        raise MoveError(f"attach: edge id {new_edge_id} already in use")
    wp = g.vertex_of(opposite(h))
    rot = {w: list(hs) for w, hs in g.rot.items()}
    pos = rot[v].index(after) + 1 if after is not None else 0
    k = rot[wp].index(opposite(h))
    rot[wp][k] = (new_edge_id, -1)
    rot[v][pos:pos] = [opposite(h), (new_edge_id, 1)]
    jumps = dict(pair.jumps)
    fac = _half_factory(pair, h)
    jumps[new_edge_id] = fac
    return _with_rot(pair, {w: tuple(hs) for w, hs in rot.items()}, jumps)


def merge(pair: StandardPair, h) -> StandardPair:
    """Collapse the edge h, merging its endpoints (the source survives)."""
    g = pair.graph
    u, w = g.vertex_of(h), g.vertex_of(opposite(h))
    if u == w:
        raise MoveError("merge: cannot collapse a loop edge")
    if g.valence(u) < 2 or g.valence(w) < 2:
        raise MoveError("merge: univalent endpoint (puncture) cannot be merged")
    rot = {x: list(hs) for x, hs in g.rot.items()}
    at_u = rot[u]
    at_w = rot[w]
    ku, kw = at_u.index(h), at_w.index(opposite(h))
    merged = at_u[ku + 1:] + at_u[:ku] + at_w[kw + 1:] + at_w[:kw]
    rot[u] = merged
    del rot[w]
    jumps = dict(pair.jumps)
    del jumps[h[0]]
    return _with_rot(pair, {x: tuple(hs) for x, hs in rot.items()}, jumps)


def cherry_migrate(pair: StandardPair, v, direction="ccw") -> StandardPair:
    """Move the cherry at v across the neighbouring edge.

    Counterclockwise: the stem swaps with its ccw-successor e, the stem jump
    is conjugated J0 -> J^-1 J0 J and the cherry jump becomes J^-1 C, with J
    the jump of e outgoing at v.  Clockwise is the exact inverse.
    """
    if v not in pair.cherries:
        raise MoveError(f"no cherry recorded at vertex {v}")
    info = pair.cherries[v]
    stem_e, cherry_e, qv = info["stem"], info["cherry"], info["q"]
    g = pair.graph
    # the base half of the stem is the one not at the 4-valent cherry vertex
    stem_h = (stem_e, 1) if g.vertex_of((stem_e, -1)) == qv else (stem_e, -1)
    base = g.vertex_of(stem_h)
    if direction == "ccw":
        nb = g.sigma(stem_h)
    elif direction == "cw":
        nb = g.sigma_inv(stem_h)
    else:
        raise MoveError(f"unknown migration direction {direction!r}")
    if nb[0] in (stem_e, cherry_e):
        raise MoveError("cherry migration blocked by its own gadget")
    jfac = _half_factory(pair, nb)
    stem_fac = _half_factory(pair, stem_h)
    cherry_fac = pair.jumps[cherry_e]
    jumps = dict(pair.jumps)
    if direction == "ccw":
        new_stem = _conjugate_factory(jfac, stem_fac)          # J^-1 J0 J
        new_cherry = _product_factory(_inverse_factory(jfac), cherry_fac)
    else:
        inv = _inverse_factory(jfac)
        new_stem = _conjugate_factory(inv, stem_fac)           # J J0 J^-1
        new_cherry = _product_factory(jfac, cherry_fac)
    jumps[stem_e] = new_stem if stem_h[1] == 1 else _inverse_factory(new_stem)
    jumps[cherry_e] = new_cherry
    rot = {x: list(hs) for x, hs in g.rot.items()}
    ks, kn = rot[base].index(stem_h), rot[base].index(nb)
    rot[base][ks], rot[base][kn] = rot[base][kn], rot[base][ks]
    return _with_rot(pair, {x: tuple(hs) for x, hs in rot.items()}, jumps)


def face_collapse(pair: StandardPair, anchor, probe_chart=None) -> StandardPair:
    """Collapse the face containing the oriented edge ``anchor`` to a vertex.

    Requires the face's boundary holonomy to be trivial; boundary edges are
    contracted (or, once they become trivial loops, removed), preserving the
    jumps on all other edges at the face's corners.
    """
    g = pair.graph
    cyc = None
    for f in g.faces():
        if anchor in f:
            cyc = f
            break
    if cyc is None:
        raise MoveError(f"no face contains oriented edge {anchor}")
    if probe_chart is not None:
        ev = Evaluation(pair, probe_chart, jets=False)
        if not _values_equal_identity(ev, list(cyc)):
            raise MoveError("face collapse: nontrivial holonomy around the face")
    sides = [h for h in cyc]
    out = pair
    while sides:
        progress = False
        for h in list(sides):
            gg = out.graph
            if gg.vertex_of(h) != gg.vertex_of(opposite(h)):
                out = merge(out, h)
                sides.remove(h)
                progress = True
            elif gg.sigma(h) == opposite(h):
                out = detach(out, gg.vertex_of(h), h, opposite(h))
                sides.remove(h)
                progress = True
            elif gg.sigma(opposite(h)) == h:
                out = detach(out, gg.vertex_of(h), opposite(h), h)
                sides.remove(h)
                progress = True
        if not progress:
            raise MoveError("face collapse: stuck (face sides are interleaved loops)")
    return out


# ---------------------------------------------------------------------------
# scripted moves and the invariance harness

def apply_move(pair: StandardPair, step, probe_chart=None) -> StandardPair:
    op = step["op"]
    if op == "zip":
        (e1, s1), (e2, s2) = step["edges"]
        return zip_edges(pair, (e1, s1), (e2, s2))
    if op == "detach":
        (e1, s1), (e2, s2) = step["edges"]
        return detach(pair, step["vertex"], (e1, s1), (e2, s2), probe_chart)
    if op == "attach":
        e, s = step["edge"]
        after = step.get("after")
        if after is not None:
            after = (after[0], after[1])
        return attach(pair, step["vertex"], (e, s), after,
                      step["new_edge_id"])
    if op == "merge":
        e, s = step["edge"]
        return merge(pair, (e, s))
    if op == "cherry_migrate":
        return cherry_migrate(pair, step["vertex"], step.get("direction", "ccw"))
    if op == "face_collapse":
        e, s = step["anchor"]
        return face_collapse(pair, (e, s), probe_chart)
    raise MoveError(f"unknown move op {op!r}")


def invariance_harness(pair: StandardPair, script, charts):
    """Replay a move script, checking the two-form after every step.

    Returns (final_pair, report); the report lists per-step, per-chart
    discrepancies (0 exact / float magnitude) between the evaluated two-form
    before and after.
    """
    from .pairs import evaluate_omega  # local import to avoid a cycle

    report = []
    baselines = [evaluate_omega(pair, c) for c in charts]
    current = pair
    for i, step in enumerate(script):
        current = apply_move(current, step, charts[0] if charts else None)
        worst = 0.0
        for base, chart in zip(baselines, charts):
            w = evaluate_omega(current, chart)
            worst = max(worst, w.max_abs_diff(base))
        report.append({"step": i, "op": step["op"], "max_discrepancy": worst})
    return current, report
