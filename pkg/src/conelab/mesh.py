"""Simplicial complexes in R^(2+n), simplex measures, ball clipping, sphere arcs.

Complexes are immutable after construction.  Simplices are stored as oriented
vertex tuples; the canonical key of a simplex is its sorted tuple, and the
orientation of any vertex ordering is the parity of the permutation relative
to the stored tuple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MeshError

VOLUME_FLOOR = 1e-12
MAX_DIM = 3

_FACTORIAL = (1.0, 1.0, 2.0, 6.0)


def _perm_sign(perm) -> int:
    """Sign of the permutation given as a sequence of distinct sortable items."""
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def _orientation_sign(given, stored) -> int:
    """Sign of the permutation carrying ``stored`` onto ``given``."""
    pos = {v: i for i, v in enumerate(stored)}
    return _perm_sign([pos[v] for v in given])


class SimplicialComplex:
    """Oriented simplicial complex embedded in R^d, closed under faces."""

    def __init__(self, vertices: np.ndarray, simplices: dict, incidence: dict):
        self.vertices = vertices
        self.ambient_dim = vertices.shape[1]
        self.simplices = simplices          # k -> list of oriented vertex tuples
        self.incidence = incidence          # k -> list of [(face_id, sign), ...]
        self._index = {
            k: {tuple(sorted(s)): i for i, s in enumerate(sims)}
            for k, sims in simplices.items()
        }
        self._measures: dict[int, np.ndarray] = {}

    @property
    def top_dim(self) -> int:
        return max(k for k, sims in self.simplices.items() if sims)

    def simplex_count(self, k: int) -> int:
        return len(self.simplices.get(k, []))

    def find(self, verts) -> tuple[int, int]:
        """Locate a simplex by vertex tuple; returns (id, orientation sign)."""
        k = len(verts) - 1
        key = tuple(sorted(verts))
        try:
            sid = self._index[k][key]
        except KeyError:
            raise MeshError(f"simplex {tuple(verts)} not in complex") from None
        return sid, _orientation_sign(tuple(verts), self.simplices[k][sid])

    def simplex_points(self, k: int, sid: int) -> np.ndarray:
        return self.vertices[list(self.simplices[k][sid])]

    def measures(self, k: int) -> np.ndarray:
        """All k-simplex measures, computed lazily and cached."""
        if k not in self._measures:
            sims = self.simplices.get(k, [])
            out = np.empty(len(sims))
            for i in range(len(sims)):
                out[i] = _gram_measure(self.vertices[list(sims[i])])
            self._measures[k] = out
        return self._measures[k]

    def boundary_matrix(self, k: int) -> np.ndarray:
        """Dense integer matrix of the boundary operator from k to k-1 cells."""
        rows = self.simplex_count(k - 1)
        cols = self.simplex_count(k)
        mat = np.zeros((rows, cols), dtype=np.int64)
        for j, faces in enumerate(self.incidence[k]):
            for fid, sign in faces:
                mat[fid, j] += sign
        return mat


def _gram_measure(points: np.ndarray) -> float:
    k = points.shape[0] - 1
    if k == 0:
        return 1.0
    edges = points[1:] - points[0]
    gram = edges @ edges.T
    det = float(np.linalg.det(gram)) if k > 1 else float(gram[0, 0])
    return math.sqrt(max(det, 0.0)) / _FACTORIAL[k]


def build_complex(vertices, simplices, volume_floor: float = VOLUME_FLOOR) -> SimplicialComplex:
    """Build a face-closed complex from vertex coordinates and simplex tuples.

    ``simplices`` is an iterable of vertex tuples of mixed dimensions (k <= 3).
    All faces are generated automatically; the signed incidence relation is
    computed and ``boundary o boundary = 0`` is verified in integer arithmetic.
    """
    verts = np.asarray(vertices, dtype=float)
    if verts.ndim != 2 or verts.shape[1] < 3:
        raise MeshError("vertices must be an (n, d) array with d >= 3")
    nv = verts.shape[0]

    by_dim: dict[int, list[tuple]] = {k: [] for k in range(MAX_DIM + 1)}
    seen: dict[int, dict[tuple, int]] = {k: {} for k in range(MAX_DIM + 1)}

    def insert(tup: tuple) -> int:
        k = len(tup) - 1
        key = tuple(sorted(tup))
        if len(set(key)) != len(key):
            raise MeshError(f"repeated vertex in simplex {tup}")
        if key in seen[k]:
            return seen[k][key]
        sid = len(by_dim[k])
        seen[k][key] = sid
        by_dim[k].append(tup)
        return sid

    queue = []
    for tup in simplices:
        tup = tuple(int(v) for v in tup)
        if not tup or len(tup) - 1 > MAX_DIM:
            raise MeshError(f"simplex {tup} has unsupported dimension")
        if any(v < 0 or v >= nv for v in tup):
            raise MeshError(f"dangling vertex reference in simplex {tup}")
        insert(tup)
        queue.append(tup)

    # close under faces (breadth-first; generated faces keep subset order)
    while queue:
        tup = queue.pop()
        if len(tup) == 1:
            continue
        for i in range(len(tup)):
            face = tup[:i] + tup[i + 1:]
            before = len(by_dim[len(face) - 1])
            fid = insert(face)
            if fid == before:
                queue.append(face)

    for k in range(1, MAX_DIM + 1):
        for tup in by_dim[k]:
            if _gram_measure(verts[list(tup)]) <= volume_floor:
                raise MeshError(f"degenerate {k}-simplex {tup}")

    incidence: dict[int, list] = {}
    for k in range(1, MAX_DIM + 1):
        ops = []
        for tup in by_dim[k]:
            faces = []
            for i in range(len(tup)):
                face = tup[:i] + tup[i + 1:]
                fid = seen[k - 1][tuple(sorted(face))]
                sign = (-1) ** i * _orientation_sign(face, by_dim[k - 1][fid])
                faces.append((fid, sign))
            ops.append(faces)
        incidence[k] = ops

    cx = SimplicialComplex(verts, by_dim, incidence)
    _check_dd_zero(cx)
    return cx


def _check_dd_zero(cx: SimplicialComplex) -> None:
    for k in range(2, MAX_DIM + 1):
        for faces in cx.incidence[k]:
            acc: dict[int, int] = {}
            for fid, sign in faces:
                for gid, gsign in cx.incidence[k - 1][fid]:
                    acc[gid] = acc.get(gid, 0) + sign * gsign
            if any(v != 0 for v in acc.values()):
                raise MeshError("incidence matrices do not satisfy dd = 0")


def simplex_measure(complex: SimplicialComplex, k: int, simplex_id: int) -> float:
    """Gram-determinant k-volume of one simplex."""
    if simplex_id < 0 or simplex_id >= complex.simplex_count(k):
        raise MeshError(f"no {k}-simplex with id {simplex_id}")
    return float(complex.measures(k)[simplex_id])


# ---------------------------------------------------------------------------
# ball clipping

def clip_measure_to_ball(complex: SimplicialComplex, k: int, simplex_id: int,
                         center, radius: float) -> float:
    """k-volume of the simplex intersected with the closed ball B_radius(center).

    Segments and triangles are clipped exactly (quadratic roots, in-plane
    circular clipping); tetrahedra use recursive bisection with inside/outside
    pruning.  Exact whenever the simplex lies entirely inside or outside.
    """
    if radius <= 0:
        raise MeshError("radius must be positive")
    center = np.asarray(center, dtype=float)
    pts = complex.simplex_points(k, simplex_id)
    full = complex.measures(k)[simplex_id]
    return _clip_points(pts, center, radius, full)


def _clip_points(pts: np.ndarray, center: np.ndarray, radius: float, full: float) -> float:
    k = pts.shape[0] - 1
    dists = np.linalg.norm(pts - center, axis=1)
    if np.all(dists <= radius + 1e-12):
        return float(full)
    if k == 0:
        return 0.0
    if k == 1:
        return _clip_segment(pts[0], pts[1], center, radius)
    if k == 2:
        return _clip_triangle(pts, center, radius)
    return _clip_tet(pts, center, radius, depth=14)


def _clip_segment(p, q, center, radius) -> float:
    d = q - p
    a = float(d @ d)
    rel = p - center
    b = 2.0 * float(rel @ d)
    c = float(rel @ rel) - radius * radius
    disc = b * b - 4 * a * c
    if disc <= 0:
        return 0.0
    sq = math.sqrt(disc)
    t0 = max((-b - sq) / (2 * a), 0.0)
    t1 = min((-b + sq) / (2 * a), 1.0)
    if t1 <= t0:
        return 0.0
    return (t1 - t0) * math.sqrt(a)


def _clip_triangle(pts, center, radius) -> float:
    # orthonormal in-plane frame
    e1 = pts[1] - pts[0]
    e1 = e1 / np.linalg.norm(e1)
    e2 = pts[2] - pts[0]
    e2 = e2 - (e2 @ e1) * e1
    n2 = np.linalg.norm(e2)
    if n2 == 0.0:
        return 0.0
    e2 = e2 / n2
    rel = center - pts[0]
    cp = np.array([rel @ e1, rel @ e2])
    h2 = float(rel @ rel) - float(cp @ cp)
    rho2 = radius * radius - h2
    if rho2 <= 0:
        return 0.0
    rho = math.sqrt(rho2)
    poly = np.array([[(p - pts[0]) @ e1, (p - pts[0]) @ e2] for p in pts]) - cp
    area2 = (poly[1][0] - poly[0][0]) * (poly[2][1] - poly[0][1]) \
        - (poly[2][0] - poly[0][0]) * (poly[1][1] - poly[0][1])
    if area2 < 0:
        poly = poly[::-1]
    return abs(_circle_polygon_area(poly, rho))


def _circle_polygon_area(poly: np.ndarray, rho: float) -> float:
    """Area of (CCW polygon) intersected with the disc of radius rho at 0."""
    total = 0.0
    m = len(poly)
    for i in range(m):
        p = poly[i]
        q = poly[(i + 1) % m]
        total += _edge_disc_contrib(p, q, rho)
    return total


def _edge_disc_contrib(p, q, rho) -> float:
    d = q - p
    a = float(d @ d)
    if a == 0.0:
        return 0.0
    b = 2.0 * float(p @ d)
    c = float(p @ p) - rho * rho
    cuts = [0.0, 1.0]
    disc = b * b - 4 * a * c
    if disc > 0:
        sq = math.sqrt(disc)
        for t in ((-b - sq) / (2 * a), (-b + sq) / (2 * a)):
            if 1e-14 < t < 1.0 - 1e-14:
                cuts.append(t)
    cuts.sort()
    total = 0.0
    for t0, t1 in zip(cuts[:-1], cuts[1:]):
        if t1 - t0 < 1e-15:
            continue
        x0 = p + t0 * d
        x1 = p + t1 * d
        xm = p + 0.5 * (t0 + t1) * d
        if float(xm @ xm) <= rho * rho:
            total += 0.5 * (x0[0] * x1[1] - x0[1] * x1[0])
        else:
            ang = math.atan2(x1[1], x1[0]) - math.atan2(x0[1], x0[0])
            if ang > math.pi:
                ang -= 2 * math.pi
            elif ang < -math.pi:
                ang += 2 * math.pi
            total += 0.5 * rho * rho * ang
    return total


def _tet_volume(pts: np.ndarray) -> float:
    e = pts[1:] - pts[0]
    g = e @ e.T
    det = (g[0, 0] * (g[1, 1] * g[2, 2] - g[1, 2] * g[2, 1])
           - g[0, 1] * (g[1, 0] * g[2, 2] - g[1, 2] * g[2, 0])
           + g[0, 2] * (g[1, 0] * g[2, 1] - g[1, 1] * g[2, 0]))
    return math.sqrt(max(det, 0.0)) / 6.0


def _clip_tet(pts, center, radius, depth, vol_floor=1e-10) -> float:
    """Tet-ball volume by longest-edge bisection with inside/outside pruning."""
    r2 = radius * radius
    total = 0.0
    stack = [(np.asarray(pts, dtype=float) - center, depth)]
    while stack:
        cur, d = stack.pop()
        vol = _tet_volume(cur)
        if vol <= 0.0:
            continue
        d2 = np.einsum("ij,ij->i", cur, cur)
        if d2.max() <= r2:
            total += vol
            continue
        centroid = cur.mean(axis=0)
        diffs = cur - centroid
        rb = math.sqrt(float(np.einsum("ij,ij->i", diffs, diffs).max()))
        dc = math.sqrt(float(centroid @ centroid))
        if dc - rb >= radius:
            continue
        if d == 0 or vol <= vol_floor:
            if dc <= radius:
                total += vol
            continue
        best, bi, bj = -1.0, 0, 1
        for i in range(4):
            for j in range(i + 1, 4):
                diff = cur[i] - cur[j]
                l2 = float(diff @ diff)
                if l2 > best:
                    best, bi, bj = l2, i, j
        mid = 0.5 * (cur[bi] + cur[bj])
        left = cur.copy()
        left[bj] = mid
        right = cur.copy()
        right[bi] = mid
        stack.append((left, d - 1))
        stack.append((right, d - 1))
    return total


# ---------------------------------------------------------------------------
# geodesic arcs on the unit sphere

UNIT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class GeodesicArc:
    """Minor great-circle arc between two non-antipodal unit vectors."""

    start: np.ndarray
    end: np.ndarray
    angle: float = field(init=False)

    def __post_init__(self):
        p = np.asarray(self.start, dtype=float)
        q = np.asarray(self.end, dtype=float)
        for v in (p, q):
            if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
                raise MeshError("arc endpoints must be unit vectors")
        object.__setattr__(self, "start", p)
        object.__setattr__(self, "end", q)
        ang = math.acos(min(1.0, max(-1.0, float(p @ q))))
        if ang <= 0.0:
            raise MeshError("arc endpoints coincide")
        object.__setattr__(self, "angle", ang)


def subdivide_arc(arc: GeodesicArc, max_angle: float) -> list[GeodesicArc]:
    """Split an arc into pieces of angle <= max_angle by spherical interpolation."""
    if max_angle <= 0:
        raise MeshError("max_angle must be positive")
    if arc.angle > math.pi - 1e-9:
        raise MeshError("antipodal arc has no unique great circle; pre-split it")
    m = max(1, math.ceil(arc.angle / max_angle - 1e-12))
    if m == 1:
        return [arc]
    pts = slerp_points(arc.start, arc.end, m + 1)
    return [GeodesicArc(pts[i], pts[i + 1]) for i in range(m)]


def slerp_points(p: np.ndarray, q: np.ndarray, count: int) -> np.ndarray:
    """``count`` points interpolating the minor arc from p to q, inclusive."""
    theta = math.acos(min(1.0, max(-1.0, float(p @ q))))
    ts = np.linspace(0.0, 1.0, count)
    s = math.sin(theta)
    pts = (np.sin((1 - ts)[:, None] * theta) * p + np.sin(ts[:, None] * theta) * q) / s
    # renormalize to keep endpoints exactly unit under accumulation
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    pts[0] = p
    pts[-1] = q
    return pts


# ---------------------------------------------------------------------------
# plain-text mesh files

def write_mesh(path, complex: SimplicialComplex) -> None:
    """Write the complex; decimal coordinates use 17 significant digits."""
    k_max = max(k for k in range(MAX_DIM + 1) if complex.simplex_count(k))
    lines = [f"{complex.ambient_dim} {k_max}",
             f"vertices {complex.vertices.shape[0]}"]
    for row in complex.vertices:
        lines.append(" ".join(f"{x:.17g}" for x in row))
    for k in range(k_max + 1):
        sims = complex.simplices.get(k, [])
        lines.append(f"simplices {k} {len(sims)}")
        for tup in sims:
            lines.append(" ".join(str(v) for v in tup))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_mesh(path) -> SimplicialComplex:
    with open(path, encoding="utf-8") as fh:
        tokens = fh.read().split("\n")
    row = 0

    def next_line():
        nonlocal row
        while row < len(tokens) and not tokens[row].strip():
            row += 1
        row += 1
        return tokens[row - 1].split()

    head = next_line()
    ambient_dim, k_max = int(head[0]), int(head[1])
    tag, nv = next_line()
    if tag != "vertices":
        raise MeshError("malformed mesh file: missing vertex block")
    verts = np.array([[float(x) for x in next_line()] for _ in range(int(nv))])
    if verts.size and verts.shape[1] != ambient_dim:
        raise MeshError("vertex dimension does not match header")
    sims = []
    for _ in range(k_max + 1):
        tag, _k, count = next_line()
        if tag != "simplices":
            raise MeshError("malformed mesh file: missing simplex block")
        for _ in range(int(count)):
            sims.append(tuple(int(v) for v in next_line()))
    return build_complex(verts, sims)
