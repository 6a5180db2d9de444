"""Ribbon graphs (graphs embedded on oriented surfaces) and triangulations.

A ribbon graph is stored as a rotation system: for every vertex, the cyclic
counterclockwise order of its outgoing half-edges.  A half-edge is a pair
``(edge_id, sign)``; the two half-edges of an edge carry opposite signs, and
``(e, +1)`` is the edge's canonical orientation.  Faces are the orbits of
``h -> rot_prev(opposite(h))``, which traces each face boundary with the face
on the left.
"""

from __future__ import annotations


def opposite(h):
    return (h[0], -h[1])


class RibbonGraph:
    """Embedded graph with cyclic half-edge order at each vertex."""

    def __init__(self, rot, punctures=()):
        self.rot = {v: tuple(hs) for v, hs in rot.items()}
        self.punctures = tuple(punctures)
        self._vertex_of = {}
        for v, hs in self.rot.items():
            for h in hs:
                if h in self._vertex_of:
                    raise ValueError(f"half-edge {h} listed at two vertices")
                self._vertex_of[h] = v
        self._edges = sorted({h[0] for h in self._vertex_of}, key=str)
        for e in self._edges:
            if (e, 1) not in self._vertex_of or (e, -1) not in self._vertex_of:
                raise ValueError(f"edge {e} is missing a half-edge")
        self._faces = None

    # -- basic queries ----------------------------------------------------
    @property
    def vertices(self):
        return sorted(self.rot, key=str)

    @property
    def edges(self):
        return list(self._edges)

    def vertex_of(self, h):
        return self._vertex_of[h]

    def endpoints(self, e):
        return self._vertex_of[(e, 1)], self._vertex_of[(e, -1)]

    def valence(self, v):
        return len(self.rot[v])

    def sigma(self, h):
        hs = self.rot[self._vertex_of[h]]
        return hs[(hs.index(h) + 1) % len(hs)]

    def sigma_inv(self, h):
        hs = self.rot[self._vertex_of[h]]
        return hs[(hs.index(h) - 1) % len(hs)]

    def face_next(self, h):
        return self.sigma(opposite(h))

    def faces(self):
        """Face boundaries as tuples of half-edges (face on the left)."""
        if self._faces is None:
            seen = set()
            out = []
            for v in self.vertices:
                for h in self.rot[v]:
                    if h in seen:
                        continue
                    cyc = []
                    x = h
                    while x not in seen:
                        seen.add(x)
                        cyc.append(x)
                        x = self.face_next(x)
                    out.append(tuple(cyc))
            self._faces = out
        return self._faces

    def genus(self):
        chi = len(self.rot) - len(self._edges) + len(self.faces())
        if chi % 2:
            raise ValueError("odd Euler characteristic: not a closed surface graph")
        return (2 - chi) // 2

    def validate(self):
        """Return the list of violated ribbon-graph invariants (empty if valid)."""
        problems = []
        for e in self._edges:
            for s in (1, -1):
                if (e, s) not in self._vertex_of:
                    problems.append(f"edge {e}: half-edge with sign {s} unattached")
        for v, hs in self.rot.items():
            if len(set(hs)) != len(hs):
                problems.append(f"vertex {v}: repeated half-edge in rotation")
        chi = len(self.rot) - len(self._edges) + len(self.faces())
        if chi % 2 or chi > 2:
            problems.append(f"Euler characteristic {chi} is not 2-2g for g >= 0")
        for p in self.punctures:
            if p not in self.rot:
                problems.append(f"puncture {p} is not a vertex")
        return problems

    def relabeled(self, vmap=None, emap=None):
        vmap = vmap or {}
        emap = emap or {}
        rot = {vmap.get(v, v): tuple((emap.get(e, e), s) for (e, s) in hs)
               for v, hs in self.rot.items()}
        punct = tuple(vmap.get(p, p) for p in self.punctures)
        return RibbonGraph(rot, punct)

    def __repr__(self):
        return (f"RibbonGraph(V={len(self.rot)}, E={len(self._edges)}, "
                f"F={len(self.faces())}, g={self.genus()})")


def from_faces(edge_endpoints, face_cycles, punctures=()):
    """Build a ribbon graph from its faces.

    ``edge_endpoints``: {edge_id: (src, dst)}; ``face_cycles``: iterable of
    cyclic half-edge lists, each half-edge appearing in exactly one face.
    The rotation is recovered from sigma = opposite . phi^-1.
    """
    phi = {}
    for cyc in face_cycles:
        n = len(cyc)
        for i, h in enumerate(cyc):
            if h in phi:
                raise ValueError(f"half-edge {h} appears in two face boundaries")
            phi[h] = cyc[(i + 1) % n]
    for e, (src, dst) in edge_endpoints.items():
        for s in (1, -1):
            if (e, s) not in phi:
                raise ValueError(f"half-edge ({e},{s}) missing from face data")

    def sigma(h):
        return phi[opposite(h)]

    rot = {}
    placed = set()
    for e in sorted(edge_endpoints, key=str):
        for s in (1, -1):
            h = (e, s)
            if h in placed:
                continue
            cyc = []
            x = h
            while x not in placed:
                placed.add(x)
                cyc.append(x)
                x = sigma(x)
            v = edge_endpoints[e][0 if s == 1 else 1]
            if v in rot:
                raise ValueError(f"vertex {v}: rotation splits into several orbits")
            rot[v] = tuple(cyc)
    # check the declared endpoints match the derived orbits
    g = RibbonGraph(rot, punctures)
    for e, (src, dst) in edge_endpoints.items():
        if g.vertex_of((e, 1)) != src or g.vertex_of((e, -1)) != dst:
            raise ValueError(f"edge {e}: endpoints inconsistent with face data")
    return g


def dual_graph(g: RibbonGraph) -> RibbonGraph:
    """Dual ribbon graph: vertices <-> faces, same edge ids.

    The dual edge e* is oriented so that the intersection number of e and e*
    is +1, i.e. e* runs from the face right of e to the face left of e.
    """
    face_of = {}
    faces = g.faces()
    for i, cyc in enumerate(faces):
        for h in cyc:
            face_of[h] = i
    rot = {}
    for i, cyc in enumerate(faces):
        # outgoing dual half-edge at face i, for boundary element h, is the
        # reverse of e*(h); e*(h) = (edge, +1) when h is the canonical half-edge
        rot[("f", i)] = tuple((h[0], -h[1]) for h in cyc)
    return RibbonGraph(rot)


# ---------------------------------------------------------------------------
# triangulations

class Triangulation:
    """Ribbon graph all of whose faces are directed 3-cycles, vertex per puncture."""

    def __init__(self, graph: RibbonGraph, genus: int, n_punctures: int):
        self.graph = graph
        self.g = genus
        self.N = n_punctures
        E, F, V = len(graph.edges), len(graph.faces()), len(graph.rot)
        if V != n_punctures or E != 3 * n_punctures - 6 + 6 * genus \
                or F != 2 * n_punctures - 4 + 4 * genus:
            raise ValueError(
                f"not a ({genus},{n_punctures}) triangulation: V={V}, E={E}, F={F}")
        for cyc in graph.faces():
            if len(cyc) != 3:
                raise ValueError(f"face {cyc} is not a triangle")
        # deterministic corner order: rotate each boundary to its least half-edge
        self.face_cycles = []
        for cyc in graph.faces():
            k = min(range(3), key=lambda i: (str(cyc[i][0]), cyc[i][1]))
            self.face_cycles.append(cyc[k:] + cyc[:k])

    @property
    def n(self):  # pragma: no cover - convenience alias
        return self.N

    def face_ids(self):
        return list(range(len(self.face_cycles)))

    def corner_face(self, h):
        """(face id, corner position) of the corner counterclockwise after h."""
        for f, cyc in enumerate(self.face_cycles):
            if h in cyc:
                return f, cyc.index(h)
        raise KeyError(h)


def _sphere_faces(N):
    """Face data of a deterministic (0, N) triangulation."""
    if N == 3:
        edges = {0: (0, 1), 1: (1, 2), 2: (2, 0)}
        faces = [[(0, 1), (1, 1), (2, 1)],
                 [(0, -1), (2, -1), (1, -1)]]
        return edges, faces
    # suspension of an (N-2)-cycle: apexes u = N-2, w = N-1
    m = N - 2
    edges = {}
    for i in range(m):  # cycle edges i -> i+1
        edges[("c", i)] = (i, (i + 1) % m)
    for i in range(m):
        edges[("u", i)] = (N - 2, i)
        edges[("w", i)] = (N - 1, i)
    faces = []
    for i in range(m):
        j = (i + 1) % m
        # upper triangle (u, i, j) and lower triangle (w, j, i), both ccw
        faces.append([(("u", i), 1), (("c", i), 1), (("u", j), -1)])
        faces.append([(("w", j), 1), (("c", i), -1), (("w", i), -1)])
    return edges, faces


def _polygon_faces(g):
    """Fan-triangulated 4g-gon with standard identifications: a (g,1) triangulation."""
    m = 4 * g
    word = []
    for j in range(g):
        word += [(("a", j), 1), (("b", j), 1), (("a", j), -1), (("b", j), -1)]
    edges = {lab: (0, 0) for (lab, _s) in word}
    side = {i: word[i] for i in range(m)}
    for j in range(2, m - 1):
        edges[("d", j)] = (0, 0)
    faces = [[side[0], side[1], (("d", 2), -1)]]
    for j in range(2, m - 2):
        faces.append([(("d", j), 1), side[j], (("d", j + 1), -1)])
    faces.append([(("d", m - 2), 1), side[m - 2], side[m - 1]])
    return edges, faces


def _subdivide(edges, faces, new_vertex):
    """Star-subdivide the first face: adds one vertex, 3 edges, 2 faces."""
    target = faces[0]
    rest = faces[1:]
    corners = []
    for (e, s) in target:
        src = edges[e][0 if s == 1 else 1]
        corners.append(src)
    spokes = []
    for i in range(3):
        eid = ("s", new_vertex, i)
        edges[eid] = (corners[i], new_vertex)
        spokes.append(eid)
    new_faces = []
    for i in range(3):
        j = (i + 1) % 3
        new_faces.append([target[i], (spokes[j], 1), (spokes[i], -1)])
    return edges, rest + new_faces


def build_triangulation(g, N, spec=None) -> Triangulation:
    """Deterministic triangulation of the genus-g surface with N punctures.

    ``spec``, if given, is {"edges": [{id, src, dst}], "faces": [{id, boundary}]}
    following the surface-description schema.
    """
    if 2 - 2 * g - N >= 0:
        raise ValueError(f"(g={g}, N={N}) has non-negative Euler characteristic")
    if g == 0 and N < 3:
        raise ValueError("a sphere triangulation needs at least 3 punctures")
    if spec is not None:
        edges = {d["id"]: (d["src"], d["dst"]) for d in spec["edges"]}
        faces = [[(e, s) for (e, s) in d["boundary"]] for d in spec["faces"]]
        graph = from_faces(edges, faces)
        return Triangulation(graph, g, N)
    if g == 0:
        edges, faces = _sphere_faces(N)
        base_vertices = N
    else:
        edges, faces = _polygon_faces(g)
        base_vertices = 1
    for k in range(base_vertices, N):
        edges, faces = _subdivide(edges, faces, k)
    graph = from_faces(edges, faces)
    # normalize vertex names to 0..N-1 order of appearance
    vmap = {v: i for i, v in enumerate(graph.vertices)}
    graph = graph.relabeled(vmap=vmap)
    return Triangulation(graph, g, N)


# ---------------------------------------------------------------------------
# surface description files

def surface_to_json(tri: Triangulation, ciliation=None, cherry_faces=None):
    d = {
        "genus": tri.g,
        "punctures": tri.N,
        "triangulation": {
            "edges": [{"id": _key(e), "src": _key(tri.graph.endpoints(e)[0]),
                       "dst": _key(tri.graph.endpoints(e)[1])} for e in tri.graph.edges],
            "faces": [{"id": f, "boundary": [[_key(e), s] for (e, s) in cyc]}
                      for f, cyc in enumerate(tri.face_cycles)],
        },
    }
    if ciliation is not None:
        d["ciliation"] = {_key(v): {"corner_after_edge": [_key(h[0]), h[1]]}
                          for v, h in ciliation.items()}
    if cherry_faces is not None:
        d["cherry_faces"] = {_key(v): f for v, f in cherry_faces.items()}
    return d


def _key(x):
    if isinstance(x, tuple):
        return list(x)
    return x


def _unkey(x):
    if isinstance(x, list):
        return tuple(_unkey(y) for y in x)
    return x


def surface_from_json(d):
    g, N = d["genus"], d["punctures"]
    tri_spec = d.get("triangulation")
    if tri_spec is not None:
        spec = {
            "edges": [{"id": _unkey(e["id"]), "src": _unkey(e["src"]),
                       "dst": _unkey(e["dst"])} for e in tri_spec["edges"]],
            "faces": [{"id": f["id"],
                       "boundary": [(_unkey(e), s) for e, s in f["boundary"]]}
                      for f in tri_spec["faces"]],
        }
        try:
            tri = build_triangulation(g, N, spec)
        except (KeyError, ValueError) as exc:
            raise ValueError(f"invalid triangulation spec: {exc}") from exc
    else:
        tri = build_triangulation(g, N)
    cil = None
    if "ciliation" in d:
        cil = {}
        for v, c in d["ciliation"].items():
            e, s = c["corner_after_edge"]
            cil[_vertex_key(v)] = (_unkey(e), s)
    cherry = None
    if "cherry_faces" in d:
        cherry = {_vertex_key(v): f for v, f in d["cherry_faces"].items()}
    return tri, cil, cherry


def _vertex_key(v):
    if isinstance(v, str) and v.lstrip("-").isdigit():
        return int(v)
    return _unkey(v)
