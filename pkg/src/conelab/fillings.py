"""Joint complexes used as flat-norm universes.

Two chains can only be compared by the LP if they live on one complex that
also carries filling cells.  The builders here assemble such universes:
strips between nearby polylines (1-chains filled by 2-cells) and prism stacks
between two graphs over a common domain (2-chains filled by 3-cells).

All builders deduplicate vertices by rounded coordinates and silently drop
collapsed cells, so coinciding curve segments merge instead of duplicating.
"""

from __future__ import annotations

import numpy as np

from .currents import Chain, chain_from_simplices, point_key
from .errors import ChainError
from .mesh import _gram_measure, build_complex

DEGENERATE_AREA = 2e-12


class _VertexPool:
    def __init__(self):
        self.points: list[np.ndarray] = []
        self.index: dict[tuple, int] = {}

    def add(self, p) -> int:
        key = point_key(p)
        if key not in self.index:
            self.index[key] = len(self.points)
            self.points.append(np.asarray(p, dtype=float))
        return self.index[key]

    def array(self) -> np.ndarray:
        return np.array(self.points)


def _keep(pts, ids) -> bool:
    if len(set(ids)) != len(ids):
        return False
    return _gram_measure(pts[list(ids)]) > DEGENERATE_AREA


def resample_polyline(points: np.ndarray, count: int, closed: bool = False) -> np.ndarray:
    """Arc-length resampling to ``count`` segments (count+1 points, or wrap)."""
    pts = np.asarray(points, dtype=float)
    if closed and point_key(pts[0]) != point_key(pts[-1]):
        pts = np.vstack([pts, pts[0]])
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    if s[-1] == 0:
        raise ChainError("cannot resample a zero-length polyline")
    targets = np.linspace(0.0, s[-1], count + 1)
    out = np.column_stack([np.interp(targets, s, pts[:, c])
                           for c in range(pts.shape[1])])
    out[0] = pts[0]
    out[-1] = pts[-1]
    return out


def strip_complex(poly_a: np.ndarray, poly_b: np.ndarray, closed: bool = False,
                  extra_polys=()):
    """Ladder strip between two equally-sampled polylines.

    Returns (complex, chain_a, chain_b): the 1-chains of the two polylines on
    a complex whose 2-cells triangulate the strip between them.  Shared points
    (pinned endpoints, coinciding samples) are merged.
    """
    pa = np.asarray(poly_a, dtype=float)
    pb = np.asarray(poly_b, dtype=float)
    if pa.shape != pb.shape:
        raise ChainError("strip polylines must have equal sampling")
    pool = _VertexPool()
    ia = [pool.add(p) for p in pa]
    ib = [pool.add(p) for p in pb]
    extra_ids = [[pool.add(p) for p in np.asarray(poly, dtype=float)]
                 for poly in extra_polys]

    pairs = list(zip(range(len(pa) - 1), range(1, len(pa))))
    if closed:
        pairs.append((len(pa) - 1, 0))

    pts = pool.array()
    sims = []
    seg_a, seg_b = [], []
    for i, j in pairs:
        a0, a1, b0, b1 = ia[i], ia[j], ib[i], ib[j]
        if a0 != a1:
            seg_a.append((a0, a1))
            sims.append((a0, a1))
        if b0 != b1:
            seg_b.append((b0, b1))
            sims.append((b0, b1))
        for tri in ((a0, a1, b1), (a0, b1, b0)):
            if _keep(pts, tri):
                sims.append(tri)
    for ids in extra_ids:
        for i in range(len(ids) - 1):
            if ids[i] != ids[i + 1]:
                sims.append((ids[i], ids[i + 1]))

    cx = build_complex(pts, sims)
    chain_a = chain_from_simplices(cx, [(s, 1) for s in seg_a])
    chain_b = chain_from_simplices(cx, [(s, 1) for s in seg_b])
    return cx, chain_a, chain_b


def multi_strip_complex(pairs, unmatched_a=(), unmatched_b=()):
    """Several strips in one universe, plus fill-less leftover polylines.

    ``pairs`` entries are (poly_a, poly_b, closed) with equal sampling;
    ``unmatched_*`` entries are (polyline, closed) whose segments enter the
    complex without any 2-cells (the LP pays their mass in R).
    Returns (complex, chain_a, chain_b).
    """
    pool = _VertexPool()
    seg_a, seg_b = [], []
    quads = []
    for pa, pb, closed in pairs:
        pa = np.asarray(pa, dtype=float)
        pb = np.asarray(pb, dtype=float)
        if pa.shape != pb.shape:
            raise ChainError("strip polylines must have equal sampling")
        ia = [pool.add(p) for p in pa]
        ib = [pool.add(p) for p in pb]
        rungs = list(zip(range(len(pa) - 1), range(1, len(pa))))
        if closed:
            rungs.append((len(pa) - 1, 0))
        for i, j in rungs:
            quads.append((ia[i], ia[j], ib[i], ib[j]))
    extras = []
    for polys, sink in ((unmatched_a, seg_a), (unmatched_b, seg_b)):
        for poly, closed in polys:
            poly = np.asarray(poly, dtype=float)
            ids = [pool.add(p) for p in poly]
            segs = list(zip(ids[:-1], ids[1:]))
            if closed and ids[-1] != ids[0]:
                segs.append((ids[-1], ids[0]))
            extras.append((segs, sink))

    pts = pool.array()
    sims = []
    for a0, a1, b0, b1 in quads:
        if a0 != a1:
            seg_a.append((a0, a1))
            sims.append((a0, a1))
        if b0 != b1:
            seg_b.append((b0, b1))
            sims.append((b0, b1))
        for tri in ((a0, a1, b1), (a0, b1, b0)):
            if _keep(pts, tri):
                sims.append(tri)
    for segs, sink in extras:
        for s in segs:
            if s[0] != s[1]:
                sink.append(s)
                sims.append(s)
    cx = build_complex(pts, sims)
    chain_a = chain_from_simplices(cx, [(s, 1) for s in seg_a])
    chain_b = chain_from_simplices(cx, [(s, 1) for s in seg_b])
    return cx, chain_a, chain_b


def _split_prism(ids: tuple) -> list[tuple]:
    """3-tet split of a prism, diagonals through each quad's smallest vertex."""
    order = list(ids)
    if min(range(6), key=lambda i: order[i]) >= 3:
        order = order[3:] + order[:3]
    r = min(range(3), key=lambda i: order[i])
    order = order[r:3] + order[:r] + order[3 + r:6] + order[3:3 + r]
    i0, i1, i2, i3, i4, i5 = order
    if min(i1, i5) < min(i2, i4):
        tets = [(i0, i1, i2, i5), (i0, i1, i5, i4), (i0, i4, i5, i3)]
    else:
        tets = [(i0, i1, i2, i4), (i0, i4, i2, i5), (i0, i4, i5, i3)]
    return tets


def _split_quad(b0, b1, t1, t0) -> list[tuple]:
    """Two triangles of a wall quad, diagonal through its smallest vertex."""
    if min(b0, t1) < min(b1, t0):
        return [(b0, b1, t1), (b0, t1, t0)]
    return [(b0, b1, t0), (b1, t1, t0)]


def graph_prism_complex(domain_points: np.ndarray, triangles, map_top, map_bottom):
    """Prism stack between two graphs over a common 2d domain mesh.

    ``map_top``/``map_bottom`` send a domain point (2,) to ambient coordinates.
    Returns (complex, top_chain, bottom_chain).  The complex carries both
    graph surfaces, side walls over the domain's boundary edges, and three
    tetrahedra per prism, with conforming quad diagonals.
    """
    dom = np.asarray(domain_points, dtype=float)
    top_pts = np.array([map_top(p) for p in dom], dtype=float)
    bot_pts = np.array([map_bottom(p) for p in dom], dtype=float)
    pool = _VertexPool()
    it = [pool.add(p) for p in top_pts]
    ib = [pool.add(p) for p in bot_pts]

    edge_count: dict[tuple, int] = {}
    for tri in triangles:
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            key = (min(a, b), max(a, b))
            edge_count[key] = edge_count.get(key, 0) + 1

    pts = pool.array()
    sims = []
    top_tris, bot_tris = [], []
    for tri in triangles:
        t_ids = tuple(it[v] for v in tri)
        b_ids = tuple(ib[v] for v in tri)
        if _keep(pts, t_ids):
            top_tris.append(t_ids)
            sims.append(t_ids)
        if _keep(pts, b_ids):
            bot_tris.append(b_ids)
            sims.append(b_ids)
        for tet in _split_prism(b_ids + t_ids):
            if _keep(pts, tet):
                sims.append(tet)
    for (a, b), count in edge_count.items():
        if count != 1:
            continue
        for tri in _split_quad(ib[a], ib[b], it[b], it[a]):
            if _keep(pts, tri):
                sims.append(tri)

    cx = build_complex(pts, sims)
    top_chain = chain_from_simplices(cx, [(t, 1) for t in top_tris])
    bot_chain = chain_from_simplices(cx, [(t, 1) for t in bot_tris])
    return cx, top_chain, bot_chain


def coned_strip_complex(sheet_pairs, unmatched_a=(), unmatched_b=()):
    """Universe for comparing two cones: coned strips between matched sheets.

    ``sheet_pairs`` is a list of (polyline_a, polyline_b, mult_a, mult_b,
    closed) with equal sampling per pair.  Both cone fans, the spherical
    strips between matched sheets, and the tetrahedra coning each strip cell
    to the origin enter the complex; unmatched sheets contribute their fans
    only.  Returns (complex, chain_a, chain_b).
    """
    probe = None
    for entry in list(sheet_pairs) + [(p, None, m, None, c) for p, m, c in unmatched_a]:
        probe = np.asarray(entry[0], dtype=float)
        break
    if probe is None:
        for p, m, c in unmatched_b:
            probe = np.asarray(p, dtype=float)
            break
    if probe is None:
        raise ChainError("no sheets supplied")
    dim = probe.shape[1]
    pool = _VertexPool()
    origin = pool.add(np.zeros(dim))

    entries_a, entries_b = [], []
    sims = []

    def add_fan(ids, mult, closed, sink):
        pairs = list(zip(ids[:-1], ids[1:]))
        if closed:
            pairs.append((ids[-1], ids[0]))
        pts = pool.array()
        for a, b in pairs:
            tri = (origin, a, b)
            if _keep(pool.array(), tri):
                sims.append(tri)
                sink.append((tri, mult))

    for pa, pb, ma, mb, closed in sheet_pairs:
        pa = np.asarray(pa, dtype=float)
        pb = np.asarray(pb, dtype=float)
        if pa.shape != pb.shape:
            raise ChainError("matched sheets must have equal sampling")
        ia = [pool.add(p) for p in pa]
        ib2 = [pool.add(p) for p in pb]
        add_fan(ia, ma, closed, entries_a)
        add_fan(ib2, mb, closed, entries_b)
        rungs = list(zip(range(len(ia) - 1), range(1, len(ia))))
        if closed:
            rungs.append((len(ia) - 1, 0))
        pts = pool.array()
        for i, j in rungs:
            for tri in ((ia[i], ia[j], ib2[j]), (ia[i], ib2[j], ib2[i])):
                if _keep(pts, tri):
                    sims.append(tri)
                    tet = (origin,) + tri
                    if _keep(pts, tet):
                        sims.append(tet)

    for poly, mult, closed in unmatched_a:
        ids = [pool.add(p) for p in np.asarray(poly, dtype=float)]
        add_fan(ids, mult, closed, entries_a)
    for poly, mult, closed in unmatched_b:
        ids = [pool.add(p) for p in np.asarray(poly, dtype=float)]
        add_fan(ids, mult, closed, entries_b)

    cx = build_complex(pool.array(), sims)
    chain_a = chain_from_simplices(cx, entries_a)
    chain_b = chain_from_simplices(cx, entries_b)
    return cx, chain_a, chain_b
