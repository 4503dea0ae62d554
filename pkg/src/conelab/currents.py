"""Integer-coefficient polyhedral chains and spherical 1-chains.

Chains are value-semantic: every operation returns a fresh chain, and mass is
always recomputed from the complex rather than cached on the chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ChainError, MeshError
from .mesh import (GeodesicArc, SimplicialComplex, build_complex,
                   clip_measure_to_ball)

POINT_KEY_DECIMALS = 9


def point_key(p) -> tuple:
    """Hashable key identifying a point up to 1e-9 coordinate rounding."""
    return tuple(round(float(x), POINT_KEY_DECIMALS) + 0.0 for x in p)


class Chain:
    """Sparse integer k-chain on a shared simplicial complex."""

    def __init__(self, complex: SimplicialComplex, dim: int, coeffs: dict | None = None):
        self.complex = complex
        self.dim = dim
        self.coeffs = {}
        if coeffs:
            n = complex.simplex_count(dim)
            for sid, c in coeffs.items():
                c = int(c)
                if c == 0:
                    continue
                if sid < 0 or sid >= n:
                    raise ChainError(f"no {dim}-simplex with id {sid}")
                self.coeffs[int(sid)] = c

    def copy(self) -> "Chain":
        return Chain(self.complex, self.dim, dict(self.coeffs))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "Chain") -> "Chain":
        self._check_compatible(other)
        out = dict(self.coeffs)
        for sid, c in other.coeffs.items():
            v = out.get(sid, 0) + c
            if v:
                out[sid] = v
            else:
                out.pop(sid, None)
        return Chain(self.complex, self.dim, out)

    def __neg__(self) -> "Chain":
        return Chain(self.complex, self.dim, {s: -c for s, c in self.coeffs.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __rmul__(self, scalar: int) -> "Chain":
        scalar = int(scalar)
        if scalar == 0:
            return Chain(self.complex, self.dim, {})
        return Chain(self.complex, self.dim, {s: scalar * c for s, c in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, Chain) and other.complex is self.complex
                and other.dim == self.dim and other.coeffs == self.coeffs)

    def _check_compatible(self, other: "Chain") -> None:
        if other.complex is not self.complex:
            raise ChainError("chains live on different complexes")
        if other.dim != self.dim:
            raise ChainError("chain dimension mismatch")

    def support_points(self, spacing: float | None = None) -> np.ndarray:
        return _sample_simplices(self.complex, self.dim, self.coeffs.keys(), spacing)


def chain_from_simplices(complex: SimplicialComplex, entries) -> Chain:
    """Chain from (vertex_tuple, coeff) pairs, resolving orientation signs."""
    dim = None
    coeffs: dict[int, int] = {}
    for verts, c in entries:
        sid, sign = complex.find(verts)
        k = len(verts) - 1
        if dim is None:
            dim = k
        elif dim != k:
            raise ChainError("mixed simplex dimensions in chain")
        v = coeffs.get(sid, 0) + sign * int(c)
        if v:
            coeffs[sid] = v
        else:
            coeffs.pop(sid, None)
    return Chain(complex, 0 if dim is None else dim, coeffs)


def boundary(chain: Chain) -> Chain:
    """Signed boundary (k-1)-chain; boundary(boundary(c)) vanishes exactly."""
    if chain.dim < 1:
        raise ChainError("boundary needs dim >= 1")
    out: dict[int, int] = {}
    inc = chain.complex.incidence[chain.dim]
    for sid, c in chain.coeffs.items():
        for fid, sign in inc[sid]:
            v = out.get(fid, 0) + sign * c
            if v:
                out[fid] = v
            else:
                out.pop(fid, None)
    return Chain(chain.complex, chain.dim - 1, out)


def mass(chain: Chain, ball: tuple | None = None) -> float:
    """Total |coeff|-weighted k-volume, optionally clipped to a ball."""
    if ball is None:
        meas = chain.complex.measures(chain.dim)
        return float(sum(abs(c) * meas[s] for s, c in chain.coeffs.items()))
    center, radius = ball
    total = 0.0
    for sid, c in chain.coeffs.items():
        total += abs(c) * clip_measure_to_ball(chain.complex, chain.dim, sid,
                                               center, radius)
    return float(total)


def pushforward(chain: Chain, map_fn) -> Chain:
    """Image chain under a vertex map, on a freshly built complex.

    The map must be injective on the vertices used by the chain; simplices
    that collapse below the degeneracy floor raise MeshError.
    """
    cx = chain.complex
    used: set[int] = set()
    tuples = []
    for sid, c in chain.coeffs.items():
        tup = cx.simplices[chain.dim][sid]
        used.update(tup)
        tuples.append((tup, c))
    order = sorted(used)
    remap = {v: i for i, v in enumerate(order)}
    new_verts = np.array([map_fn(cx.vertices[v]) for v in order], dtype=float)
    keys = {point_key(p) for p in new_verts}
    if len(keys) != len(order):
        raise ChainError("map is not injective on the chain's vertex set")
    new_cx = build_complex(new_verts,
                           [tuple(remap[v] for v in tup) for tup, _ in tuples])
    return chain_from_simplices(new_cx, [(tuple(remap[v] for v in tup), c)
                                         for tup, c in tuples])


def scaling_map(center, factor: float):
    """The rescaling x -> (x - center) / factor used for blow-ups."""
    center = np.asarray(center, dtype=float)

    def apply(x):
        return (np.asarray(x, dtype=float) - center) / factor

    return apply


# ---------------------------------------------------------------------------
# spherical 1-chains

@dataclass(frozen=True, eq=False)
class SphericalChain:
    """Weighted geodesic arcs: entries (arc, multiplicity >= 1, sign in {-1,+1})."""

    arcs: tuple

    def __init__(self, arcs):
        norm = []
        for arc, mult, sign in arcs:
            mult = int(mult)
            sign = int(sign)
            if mult == 0 or sign not in (-1, 1):
                raise ChainError("arc multiplicity must be nonzero, sign +-1")
            if mult < 0:
                mult, sign = -mult, -sign
            norm.append((arc, mult, sign))
        object.__setattr__(self, "arcs", tuple(norm))

    def mass(self) -> float:
        return float(sum(mult * arc.angle for arc, mult, _ in self.arcs))

    def boundary_coeffs(self) -> dict:
        """Signed endpoint counts keyed by rounded point coordinates."""
        out: dict = {}
        pts: dict = {}
        for arc, mult, sign in self.arcs:
            for p, w in ((arc.end, sign * mult), (arc.start, -sign * mult)):
                key = point_key(p)
                pts[key] = p
                out[key] = out.get(key, 0) + w
        return {k: (pts[k], v) for k, v in out.items() if v != 0}

    def __add__(self, other: "SphericalChain") -> "SphericalChain":
        return SphericalChain(self.arcs + other.arcs)

    def support_points(self, per_arc: int = 8) -> np.ndarray:
        from .mesh import slerp_points
        chunks = [slerp_points(arc.start, arc.end, max(2, per_arc))
                  for arc, _, _ in self.arcs]
        return np.vstack(chunks)


def spherical_chain_from_points(points: np.ndarray, mult: int = 1,
                                closed: bool = False) -> SphericalChain:
    """Chain of consecutive arcs through unit points, oriented along the list."""
    pts = np.asarray(points, dtype=float)
    pairs = [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
    if closed and point_key(pts[0]) != point_key(pts[-1]):
        pairs.append((pts[-1], pts[0]))
    return SphericalChain([(GeodesicArc(p, q), mult, 1) for p, q in pairs])


def cone_over(z: SphericalChain) -> tuple[Chain, float]:
    """Triangulated cone with vertex 0 over a spherical chain.

    Returns the chain and the exact sector mass sum(|mult| * angle / 2); the
    triangulated mass converges to it at second order under arc subdivision.
    """
    if not z.arcs:
        raise ChainError("cannot cone an empty spherical chain")
    dim = len(z.arcs[0][0].start)
    verts = [np.zeros(dim)]
    index = {point_key(verts[0]): 0}
    entries = []
    exact = 0.0
    for arc, mult, sign in z.arcs:
        if arc.angle > math.pi - 1e-9:
            raise ChainError("antipodal arc: sector plane ambiguous; subdivide first")
        ids = []
        for p in (arc.start, arc.end):
            key = point_key(p)
            if key not in index:
                index[key] = len(verts)
                verts.append(np.asarray(p, dtype=float))
            ids.append(index[key])
        entries.append(((0, ids[0], ids[1]), sign * mult))
        exact += mult * arc.angle / 2.0
    cx = build_complex(np.array(verts), [t for t, _ in entries])
    return chain_from_simplices(cx, entries), exact


# ---------------------------------------------------------------------------
# Hausdorff distance between supports

def _sample_simplices(cx: SimplicialComplex, dim: int, sids, spacing) -> np.ndarray:
    if spacing is None:
        meas = cx.measures(dim) if dim >= 1 else None
        if dim >= 1 and len(meas):
            active = [meas[s] for s in sids]
            typical = np.median(active) if active else 1.0
            spacing = max(typical ** (1.0 / max(dim, 1)) * 0.5, 1e-3)
        else:
            spacing = 0.1
    pts = []
    for sid in sids:
        corners = cx.simplex_points(dim, sid)
        pts.extend(_sample_one(corners, spacing))
    if not pts:
        raise ChainError("empty support")
    return np.unique(np.round(np.array(pts), 12), axis=0)


def _sample_one(corners: np.ndarray, spacing: float) -> list:
    k = corners.shape[0] - 1
    if k == 0:
        return [corners[0]]
    if k == 1:
        n = max(1, math.ceil(np.linalg.norm(corners[1] - corners[0]) / spacing))
        ts = np.linspace(0, 1, n + 1)
        return list(corners[0] + ts[:, None] * (corners[1] - corners[0]))
    # barycentric grid for triangles and tets
    edge = max(np.linalg.norm(corners[i] - corners[j])
               for i in range(k + 1) for j in range(i))
    n = max(1, math.ceil(edge / spacing))
    out = []
    if k == 2:
        for i in range(n + 1):
            for j in range(n + 1 - i):
                l0, l1 = i / n, j / n
                out.append(corners[0] * (1 - l0 - l1) + corners[1] * l0 + corners[2] * l1)
    else:
        for i in range(n + 1):
            for j in range(n + 1 - i):
                for m in range(n + 1 - i - j):
                    l = np.array([n - i - j - m, i, j, m]) / n
                    out.append(l @ corners)
    return out


def _support_array(obj, spacing) -> np.ndarray:
    if isinstance(obj, np.ndarray):
        if obj.size == 0:
            raise ChainError("empty support")
        return obj
    if isinstance(obj, Chain):
        if obj.is_zero():
            raise ChainError("empty support")
        return obj.support_points(spacing)
    if isinstance(obj, SphericalChain):
        if not obj.arcs:
            raise ChainError("empty support")
        return obj.support_points()
    raise ChainError(f"cannot extract a support from {type(obj).__name__}")


def hausdorff_distance(a, b, spacing: float | None = None) -> float:
    """Symmetric Hausdorff distance between sampled supports.

    Accepts chains, spherical chains, or raw point arrays; sampling density is
    tied to the typical simplex size unless ``spacing`` is given.
    """
    pa = _support_array(a, spacing)
    pb = _support_array(b, spacing)
    return max(_one_sided(pa, pb), _one_sided(pb, pa))


def _one_sided(pa: np.ndarray, pb: np.ndarray) -> float:
    worst = 0.0
    step = max(1, int(2e6 // max(len(pb), 1)))
    for i in range(0, len(pa), step):
        block = pa[i:i + step]
        d2 = np.sum((block[:, None, :] - pb[None, :, :]) ** 2, axis=2)
        worst = max(worst, float(np.sqrt(d2.min(axis=1).max())))
    return worst


# ---------------------------------------------------------------------------
# chain files

def write_chain(path, chain: Chain, mesh_path: str) -> None:
    """Chain file: first line references the mesh file, then 'k id coeff' rows."""
    lines = [str(mesh_path)]
    for sid in sorted(chain.coeffs):
        lines.append(f"{chain.dim} {sid} {chain.coeffs[sid]}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_chain(path, complex: SimplicialComplex | None = None):
    """Read a chain file; loads the referenced mesh unless one is supplied."""
    from .mesh import read_mesh
    from pathlib import Path

    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    mesh_ref = lines[0].strip()
    if complex is None:
        ref = Path(mesh_ref)
        if not ref.is_absolute():
            ref = Path(path).parent / ref
        complex = read_mesh(ref)
    dim = None
    coeffs: dict[int, int] = {}
    for ln in lines[1:]:
        k, sid, c = ln.split()
        k, sid, c = int(k), int(sid), int(c)
        if dim is None:
            dim = k
        elif k != dim:
            raise ChainError("mixed dimensions in chain file")
        coeffs[sid] = coeffs.get(sid, 0) + c
    return Chain(complex, 0 if dim is None else dim, coeffs), mesh_ref


def export_chain_csv(path, chain: Chain) -> None:
    """Debug CSV of (simplex_id, measure, coeff) rows in id order."""
    meas = chain.complex.measures(chain.dim)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("simplex_id,measure,coeff\n")
        for sid in sorted(chain.coeffs):
            fh.write(f"{sid},{meas[sid]:.17g},{chain.coeffs[sid]}\n")
