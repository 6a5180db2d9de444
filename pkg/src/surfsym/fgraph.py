"""Decorated triangulations: ciliations, cherries, face centers.

``decorate`` turns a triangulation into the full coordinate graph: each
vertex v grows a stem to a 4-valent vertex ("q", v) carrying the cherry loop
around the puncture ("t", v), and each face f gains a center vertex ("p", f)
with three edges from the face corners.  The flattened object is an ordinary
ribbon graph plus addressing metadata, so graph moves can treat cherries
symbolically while the two-form machinery sees plain edges.

Corner index convention: the three corners of a face, in stored boundary
order, carry the indices (1, 3, 2); around the face center the outgoing edges
then read A_1^-1, A_3^-1, A_2^-1 counterclockwise, which is the unique
assignment with trivial monodromy at the center (A_1 A_2 A_3 = 1 only helps
in that cyclic order).
"""

from __future__ import annotations

from .ribbon import RibbonGraph, Triangulation, opposite
from .charts import ChartBasis

CORNER_INDICES = (1, 3, 2)
CORNER_OCC = "h"        # corner after h indexes the face occurrence of: h | next
STEM_BEFORE_E = True    # cherry stem inserted before the corner's face edge
QV_ORDER = "+"          # cherry loop departs ("+") or returns ("-") first at q_v


class DecoratedGraph:
    """Triangulation with cherries and face centers, flattened to a ribbon graph."""

    def __init__(self, tri: Triangulation, ciliation, cherry_faces=None):
        self.tri = tri
        g0 = tri.graph
        self.ciliation = dict(ciliation)
        for v in g0.vertices:
            if v not in self.ciliation:
                raise ValueError(f"vertex {v} has no cilium")
            h = self.ciliation[v]
            if h not in g0.rot[v]:
                raise ValueError(f"cilium of vertex {v} names half-edge {h} "
                                 f"not outgoing at {v}")
        # the cilium corner determines the cherry face; an explicit choice must agree
        self.cherry_faces = {}
        for v, h in self.ciliation.items():
            f, _pos = self.corner_face(h)
            self.cherry_faces[v] = f
        if cherry_faces is not None:
            for v, f in cherry_faces.items():
                if self.cherry_faces.get(v) != f:
                    raise ValueError(
                        f"cherry face {f} for vertex {v} is not incident at the "
                        f"cilium (corner lies in face {self.cherry_faces.get(v)})")

        self.stem = {v: ("stem", v) for v in g0.vertices}
        self.cherry = {v: ("cherry", v) for v in g0.vertices}
        self.inner = {v: ("inner", v) for v in g0.vertices}
        self.eedge = {}
        self.corner_index = {}
        for f, cyc in enumerate(tri.face_cycles):
            for pos in range(3):
                self.eedge[(f, pos)] = ("E", f, pos)
                self.corner_index[(f, pos)] = CORNER_INDICES[pos]

        rot = {}
        for v in g0.vertices:
            new = []
            for h in g0.rot[v]:
                new.append(h)
                corner = [(self.eedge[self.corner_face(h)], 1)]
                if self.ciliation[v] == h:
                    if STEM_BEFORE_E:
                        corner.insert(0, (self.stem[v], 1))
                    else:
                        corner.append((self.stem[v], 1))
                new.extend(corner)
            rot[v] = tuple(new)
        for v in g0.vertices:
            c = 1 if QV_ORDER == "+" else -1
            rot[("q", v)] = ((self.stem[v], -1), (self.cherry[v], c),
                             (self.inner[v], 1), (self.cherry[v], -c))
            rot[("t", v)] = ((self.inner[v], -1),)
        for f, cyc in enumerate(tri.face_cycles):
            rot[("p", f)] = tuple((self.eedge[(f, pos)], -1) for pos in range(3))

        punctures = tuple(("t", v) for v in g0.vertices)
        self.graph = RibbonGraph(rot, punctures)
        if self.graph.genus() != tri.g:
            raise ValueError("decoration changed the genus: wiring inconsistent")

    def corner_face(self, h):
        """(face id, position) of the corner counterclockwise after h."""
        if CORNER_OCC == "h":
            return self.tri.corner_face(h)
        return self.tri.corner_face(self.tri.graph.sigma(h))

    # -- star addressing ----------------------------------------------------
    def star(self, v):
        """Jump schedule at a triangulation vertex, ccw starting at the stem.

        Returns the list of flattened half-edges after the stem: alternating
        E-edges (toward face centers) and triangulation edges, 2 * valence
        entries.
        """
        hs = self.graph.rot[v]
        k = hs.index((self.stem[v], 1))
        return list(hs[k + 1:]) + list(hs[:k])

    def vertex_faces_edges(self, v):
        """((face, pos), half_edge) pairs at v, ccw from the cherry corner."""
        out = []
        st = self.star(v)
        for i in range(0, len(st), 2):
            eh, sh = st[i], st[i + 1]
            assert eh[0][0] == "E"
            _, f, pos = eh[0]
            out.append(((f, pos), sh))
        return out

    def basis(self, n) -> ChartBasis:
        return ChartBasis(n, self.tri.graph.edges, self.tri.face_ids(),
                          self.tri.graph.vertices)


def default_ciliation(tri: Triangulation):
    """Deterministic ciliation: the corner after the least half-edge at each vertex."""
    cil = {}
    for v in tri.graph.vertices:
        cil[v] = min(tri.graph.rot[v], key=lambda h: (str(h[0]), h[1]))
    return cil


def decorate(tri: Triangulation, ciliation=None, cherry_faces=None) -> DecoratedGraph:
    if ciliation is None:
        ciliation = default_ciliation(tri)
    return DecoratedGraph(tri, ciliation, cherry_faces)
