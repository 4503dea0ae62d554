"""Boundary cones: exact constructors, classifier, sampler, and coverage nets.

A 2-dimensional cone with boundary multiplicity Q on a line through the
origin decomposes into interior planes (full discs, no boundary) and
half-planes with the line as common edge.  Conventions:

* ``P = +line`` and ``N = -line`` are the two sphere points of the line;
* every stored half-plane is oriented so its boundary is ``+[line]``, the
  diameter chain running N -> 0 -> P; closed books therefore carry signed
  multiplicities ``(Q+, -Q-)`` on opposite directions ``(u, -u)``;
* half-circle cross-section sheets run from P to N.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .currents import (Chain, boundary, chain_from_simplices, cone_over,
                       hausdorff_distance, mass, point_key, SphericalChain,
                       spherical_chain_from_points)
from .errors import ConeSpecError
from .fillings import coned_strip_complex, resample_polyline
from .flatnorm import flat_distance
from .mesh import build_complex

PLANE_MERGE_ANGLE = 1e-4
RANK_TOL = 1e-9
MIN_SEPARATION = 1e-6


# ---------------------------------------------------------------------------
# spec

@dataclass
class ConeSpec:
    """Symbolic description of a boundary cone in R^(2+n)."""

    n: int
    line: np.ndarray | None
    interior_planes: list = field(default_factory=list)   # (basis (2,d), mult>0)
    halfplanes: list = field(default_factory=list)        # (direction (d,), signed mult)

    def __post_init__(self):
        d = self.ambient_dim
        if d < 3:
            raise ConeSpecError("ambient dimension must be at least 3")
        if self.line is not None:
            self.line = _unit(np.asarray(self.line, dtype=float), d)
        elif self.halfplanes:
            raise ConeSpecError("half-planes need a boundary line")
        planes = []
        for basis, mult in self.interior_planes:
            basis = _orthonormal_basis(np.asarray(basis, dtype=float), d)
            mult = int(mult)
            if mult <= 0:
                raise ConeSpecError("interior plane multiplicities must be positive")
            planes.append((basis, mult))
        self.interior_planes = planes
        halves = []
        for u, mult in self.halfplanes:
            u = _unit(np.asarray(u, dtype=float), d)
            if abs(float(u @ self.line)) > 1e-9:
                raise ConeSpecError("half-plane direction must be orthogonal to the line")
            mult = int(mult)
            if mult == 0:
                raise ConeSpecError("half-plane multiplicity must be nonzero")
            halves.append((u, mult))
        self.halfplanes = halves
        self._validate()

    @property
    def ambient_dim(self) -> int:
        return 2 + self.n

    @property
    def boundary_multiplicity(self) -> int:
        return sum(m for _, m in self.halfplanes)

    @property
    def case_tag(self) -> str:
        has_int = bool(self.interior_planes)
        if not self.halfplanes:
            return "interior_only"
        if has_int:
            return "mixed"
        if len(self.halfplanes) == 2:
            (u1, m1), (u2, m2) = self.halfplanes
            if float(u1 @ u2) < -1.0 + 1e-9 and m1 * m2 < 0:
                return "closed_book"
        return "open_book"

    def _validate(self):
        q = self.boundary_multiplicity
        if self.halfplanes:
            if q < 1:
                raise ConeSpecError("boundary multiplicity must be at least 1")
            negs = [m for _, m in self.halfplanes if m < 0]
            if negs:
                if len(self.halfplanes) != 2 or len(negs) != 1:
                    raise ConeSpecError("negative multiplicities only occur in a "
                                        "closed book (one pair of opposite halves)")
                (u1, m1), (u2, m2) = self.halfplanes
                if float(u1 @ u2) > -1.0 + 1e-9:
                    raise ConeSpecError("closed-book halves must span one plane")
                if m1 + m2 < 1 or min(abs(m1), abs(m2)) < 1:
                    raise ConeSpecError("closed book needs Q+ > Q- >= 1")
        for i, (u1, _) in enumerate(self.halfplanes):
            for u2, _ in self.halfplanes[i + 1:]:
                if np.linalg.norm(u1 - u2) < MIN_SEPARATION:
                    raise ConeSpecError("half-planes must be distinct")
        for i, (b1, _) in enumerate(self.interior_planes):
            if self.line is not None:
                if np.linalg.norm(b1 @ self.line) > 1.0 - 1e-9:
                    raise ConeSpecError("interior plane must avoid the boundary line")
            for b2, _ in self.interior_planes[i + 1:]:
                if _min_singular(np.vstack([b1, b2])) < RANK_TOL:
                    raise ConeSpecError("interior planes must meet only at the origin")
            for u, _ in self.halfplanes:
                stack = np.vstack([b1, self.line, u])
                if _min_singular(stack) < RANK_TOL:
                    raise ConeSpecError("interior plane touches a half-plane")
        if density_at_origin(self) < Fraction(self.boundary_multiplicity, 2):
            raise ConeSpecError("density below Q/2")
        if density_at_origin(self) <= 0:
            raise ConeSpecError("empty cone")


def _unit(v: np.ndarray, d: int) -> np.ndarray:
    if v.shape != (d,):
        raise ConeSpecError(f"expected a vector of length {d}")
    norm = float(np.linalg.norm(v))
    if norm < 1e-12:
        raise ConeSpecError("zero vector")
    return v / norm


def _orthonormal_basis(basis: np.ndarray, d: int) -> np.ndarray:
    if basis.shape != (2, d):
        raise ConeSpecError(f"expected a (2, {d}) plane basis")
    q, r = np.linalg.qr(basis.T)
    if abs(r[0, 0] * r[1, 1]) < 1e-12:
        raise ConeSpecError("plane basis is rank deficient")
    return q.T.copy()


def _min_singular(rows: np.ndarray) -> float:
    return float(np.linalg.svd(rows, compute_uv=False)[-1])


def density_at_origin(spec: ConeSpec) -> Fraction:
    """Exact density: interior multiplicities plus half the boundary ones."""
    theta = Fraction(0)
    for _, m in spec.interior_planes:
        theta += m
    for _, m in spec.halfplanes:
        theta += Fraction(abs(m), 2)
    return theta


# ---------------------------------------------------------------------------
# sheets and realizations

@dataclass
class Sheet:
    """One realized cross-section component: a sampled curve on the sphere."""

    kind: str                 # "half" or "circle"
    points: np.ndarray        # (m+1, d); half sheets run P -> N
    mult: int                 # signed chain coefficient
    closed: bool

    def length(self) -> float:
        seg = np.linalg.norm(np.diff(self.points, axis=0), axis=1)
        return float(seg.sum())


def _half_sheet_points(line: np.ndarray, u: np.ndarray, count: int) -> np.ndarray:
    thetas = np.linspace(0.0, math.pi, count + 1)
    pts = np.outer(np.cos(thetas), line) + np.outer(np.sin(thetas), u)
    pts[0] = line
    pts[-1] = -line
    return pts


def _circle_sheet_points(basis: np.ndarray, count: int) -> np.ndarray:
    thetas = np.linspace(0.0, 2 * math.pi, count + 1)[:-1]
    return np.outer(np.cos(thetas), basis[0]) + np.outer(np.sin(thetas), basis[1])


def cross_section_sheets(spec: ConeSpec, max_angle: float = 0.1) -> list[Sheet]:
    """Sampled sheets of the cross-section at the requested angular resolution."""
    if max_angle <= 0:
        raise ConeSpecError("max_angle must be positive")
    sheets = []
    n_half = max(2, math.ceil(math.pi / max_angle))
    n_full = max(4, math.ceil(2 * math.pi / max_angle))
    for u, m in spec.halfplanes:
        sheets.append(Sheet("half", _half_sheet_points(spec.line, u, n_half), m, False))
    for basis, m in spec.interior_planes:
        sheets.append(Sheet("circle", _circle_sheet_points(basis, n_full), m, True))
    return sheets


def cross_section(spec: ConeSpec, max_angle: float = 0.1) -> SphericalChain:
    """Cross-section 1-chain: half circles P -> N and full circles, with
    multiplicities copied from the spec."""
    chain = None
    for sheet in cross_section_sheets(spec, max_angle):
        part = spherical_chain_from_points(sheet.points, mult=sheet.mult,
                                           closed=sheet.closed)
        chain = part if chain is None else chain + part
    if chain is None:
        raise ConeSpecError("spec has no sheets")
    return chain


def make_cone(spec: ConeSpec, h: float = 0.05, radius: float = 1.0) -> Chain:
    """Triangulated cone chain in B_radius: one fan of flat sectors per sheet.

    The restriction of its boundary to the open ball is Q copies of the
    diameter chain N -> 0 -> P plus the chord polylines of the cross-section.
    """
    if radius <= 0:
        raise ConeSpecError("radius must be positive")
    sheets = cross_section_sheets(spec, max_angle=h / radius)
    pool_pts = [np.zeros(spec.ambient_dim)]
    index = {point_key(pool_pts[0]): 0}

    def vid(p):
        key = point_key(p)
        if key not in index:
            index[key] = len(pool_pts)
            pool_pts.append(np.asarray(p, dtype=float))
        return index[key]

    entries = []
    for sheet in sheets:
        ids = [vid(radius * p) for p in sheet.points]
        pairs = list(zip(ids[:-1], ids[1:]))
        if sheet.closed:
            pairs.append((ids[-1], ids[0]))
        for a, b in pairs:
            entries.append(((0, a, b), sheet.mult))
    cx = build_complex(np.array(pool_pts), [t for t, _ in entries])
    return chain_from_simplices(cx, entries)


# ---------------------------------------------------------------------------
# classifier

def classify(chain: Chain, tolerance: float = 1e-6) -> ConeSpec:
    """Recover a ConeSpec from a triangulated cone chain.

    The cone precondition is checked geometrically: every support triangle's
    plane must pass through the origin (radial ruling, which makes the chain
    invariant under rescalings exactly) and the mass ratio ||T||(B_r)/r^2 must
    be constant over r in {1/4, 1/2, 1}.
    """
    cx = chain.complex
    if chain.dim != 2 or chain.is_zero():
        raise ConeSpecError("classification expects a nonzero 2-chain")
    d = cx.ambient_dim
    sids = sorted(chain.coeffs)

    radius = max(float(np.linalg.norm(cx.vertices[v]))
                 for s in sids for v in cx.simplices[2][s])
    for s in sids:
        pts = cx.simplex_points(2, s)
        if _plane_offset(pts) > 10 * tolerance:
            raise ConeSpecError("not a cone: a support plane misses the origin")
    # strictly inside the rim every fan triangle meets B_r in an exact sector,
    # so the ratio is constant in r for genuine cones
    center = np.zeros(d)
    ratios = [mass(chain, (center, f * radius)) / f ** 2 for f in (0.25, 0.5)]
    if max(ratios) - min(ratios) > max(tolerance, 1e-9) * max(ratios):
        raise ConeSpecError("not a cone: mass ratio varies with radius")

    line, q_total = _recover_line(chain, radius)

    # group support triangles into coplanar, edge-connected components
    normals = {s: _plane_basis(cx.simplex_points(2, s)) for s in sids}
    adj = _edge_adjacency(cx, sids)
    comp_of = {}
    comps = []
    for s in sids:
        if s in comp_of:
            continue
        comp = [s]
        comp_of[s] = len(comps)
        queue = [s]
        while queue:
            cur = queue.pop()
            for other in adj.get(cur, ()):
                if other in comp_of:
                    continue
                if _principal_angle(normals[cur], normals[other]) < PLANE_MERGE_ANGLE:
                    comp_of[other] = len(comps)
                    comp.append(other)
                    queue.append(other)
        comps.append(comp)

    interior = []
    halves = []
    for comp in comps:
        pts = np.vstack([cx.simplex_points(2, s) for s in comp])
        basis = _fit_plane(pts, tolerance)
        coeffs = {chain.coeffs[s] for s in comp}
        contains_line = (line is not None
                         and np.linalg.norm(basis @ line) > 1.0 - 1e-6)
        if not contains_line:
            if len(coeffs) != 1:
                raise ConeSpecError("unclassifiable: mixed multiplicities on a sheet")
            m = coeffs.pop()
            if m < 0:
                basis = np.vstack([basis[1], basis[0]])
                m = -m
            interior.append((basis, int(m)))
            continue
        # sheet lies in a plane containing the line: split by side
        u = _side_direction(basis, line)
        sides = {1: set(), -1: set()}
        for s in comp:
            bary = cx.simplex_points(2, s).mean(axis=0)
            side = 1 if float(bary @ u) >= 0 else -1
            sides[side].add(chain.coeffs[s])
        for side in (1, -1):
            vals = sides[side]
            if not vals:
                continue
            if len(vals) != 1:
                raise ConeSpecError("unclassifiable: mixed multiplicities on a sheet")
            halves.append((u if side == 1 else -u, int(vals.pop())))

    if line is None and halves:
        raise ConeSpecError("boundary edges found but no line recovered")
    spec = ConeSpec(n=d - 2, line=line, interior_planes=interior, halfplanes=halves)
    if spec.boundary_multiplicity != q_total:
        raise ConeSpecError("sheet multiplicities disagree with the boundary line")
    return spec


def _plane_offset(pts: np.ndarray) -> float:
    basis = _plane_basis(pts)
    x = pts[0]
    return float(np.linalg.norm(x - basis.T @ (basis @ x)))


def _plane_basis(pts: np.ndarray) -> np.ndarray:
    e1 = pts[1] - pts[0]
    e2 = pts[2] - pts[0]
    e1 = e1 / np.linalg.norm(e1)
    e2 = e2 - (e2 @ e1) * e1
    e2 = e2 / np.linalg.norm(e2)
    return np.vstack([e1, e2])


def _principal_angle(b1: np.ndarray, b2: np.ndarray) -> float:
    s = np.linalg.svd(b1 @ b2.T, compute_uv=False)
    s = np.clip(s, -1.0, 1.0)
    return float(math.acos(s[-1]))


def _edge_adjacency(cx, sids):
    by_edge = {}
    for s in sids:
        for fid, _ in cx.incidence[2][s]:
            by_edge.setdefault(fid, []).append(s)
    adj = {}
    for members in by_edge.values():
        for a in members:
            for b in members:
                if a != b:
                    adj.setdefault(a, set()).add(b)
    return adj


def _fit_plane(pts: np.ndarray, tolerance: float) -> np.ndarray:
    u, s, vt = np.linalg.svd(pts, full_matrices=False)
    if len(s) > 2 and s[2] > math.sqrt(tolerance) * max(s[0], 1.0):
        raise ConeSpecError("unclassifiable: sheet is not planar")
    return vt[:2]


def _side_direction(basis: np.ndarray, line: np.ndarray) -> np.ndarray:
    u = basis[0] - float(basis[0] @ line) * line
    if np.linalg.norm(u) < 0.5:
        u = basis[1] - float(basis[1] @ line) * line
    return u / np.linalg.norm(u)


def _recover_line(chain: Chain, radius: float):
    """Boundary line direction and multiplicity from the radial boundary edges."""
    cx = chain.complex
    b = boundary(chain)
    per_dir = {}
    for sid, c in b.coeffs.items():
        va, vb = cx.simplices[1][sid]
        pa, pb = cx.vertices[va], cx.vertices[vb]
        na, nb = np.linalg.norm(pa), np.linalg.norm(pb)
        if min(na, nb) > radius / 2:
            continue
        far, c_eff = (pb, c) if na < nb else (pa, -c)
        key = point_key(far / np.linalg.norm(far))
        acc = per_dir.setdefault(key, [np.asarray(far, dtype=float), 0])
        acc[1] += c_eff
    per_dir = {k: v for k, v in per_dir.items() if v[1] != 0}
    if not per_dir:
        return None, 0
    if len(per_dir) != 2:
        raise ConeSpecError("boundary edges do not form a single line")
    (pa, ca), (pb, cb) = per_dir.values()
    if ca + cb != 0:
        raise ConeSpecError("boundary multiplicities are unbalanced")
    far_p = pa if ca > 0 else pb
    q = abs(ca)
    line = far_p / np.linalg.norm(far_p)
    return line, q


# ---------------------------------------------------------------------------
# sampling the cone space

def _partitions(total: int):
    if total == 0:
        yield ()
        return
    def rec(n, cap):
        if n == 0:
            yield ()
            return
        for first in range(min(n, cap), 0, -1):
            for rest in rec(n - first, first):
                yield (first,) + rest
    yield from rec(total, total)


def enumerate_configurations(q: int, q_bar: int, n: int) -> list[dict]:
    """All (case, multiplicity partition) shapes with density at most q_bar/2."""
    if q_bar < q or q < 0 or q_bar < 1:
        return []
    configs = []
    budget = Fraction(q_bar, 2)

    def interior_options(remaining: Fraction, allow: bool):
        opts = [()]
        if not allow:
            return opts
        max_int = int(remaining)
        for total in range(1, max_int + 1):
            opts.extend(_partitions(total))
        return opts

    if q == 0:
        for part in interior_options(budget, True):
            if part and (n >= 2 or len(part) == 1):
                configs.append({"book": None, "interior": part})
        return configs

    for book in _partitions(q):
        rem = budget - Fraction(q, 2)
        if rem < 0:
            continue
        for part in interior_options(rem, n >= 2):
            configs.append({"book": ("open", book), "interior": part})
    t = 1
    while Fraction(q + 2 * t, 2) <= budget:
        rem = budget - Fraction(q + 2 * t, 2)
        for part in interior_options(rem, n >= 2):
            configs.append({"book": ("closed", (q + t, t)), "interior": part})
        t += 1
    return configs


def sample_cone_space(q: int, q_bar: int, n: int, seed=0) -> ConeSpec:
    """Uniform draw over enumerated shapes, rotation-invariant orientations."""
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    configs = enumerate_configurations(q, q_bar, n)
    if not configs:
        raise ConeSpecError(f"no cones with boundary {q} and density <= {q_bar}/2")
    d = 2 + n
    for _ in range(200):
        cfg = configs[int(rng.integers(0, len(configs)))]
        try:
            line = _unit(rng.standard_normal(d), d)
            halves = []
            if cfg["book"] is not None:
                kind, mults = cfg["book"]
                if kind == "open":
                    dirs = _sample_directions(rng, line, len(mults), d)
                    halves = list(zip(dirs, mults))
                else:
                    u = _sample_directions(rng, line, 1, d)[0]
                    qp, qm = mults
                    halves = [(u, qp), (-u, -qm)]
            planes = []
            for m in cfg["interior"]:
                basis = _orthonormal_basis(rng.standard_normal((2, d)), d)
                planes.append((basis, m))
            return ConeSpec(n=n, line=line, interior_planes=planes, halfplanes=halves)
        except ConeSpecError:
            continue
    raise ConeSpecError("could not sample a valid spec (space too constrained)")


def _sample_directions(rng, line, count, d, min_angle=0.05):
    dirs = []
    for _ in range(200):
        v = rng.standard_normal(d)
        v = v - float(v @ line) * line
        norm = np.linalg.norm(v)
        if norm < 1e-6:
            continue
        v = v / norm
        if all(np.linalg.norm(v - u) > min_angle and np.linalg.norm(v + u) > min_angle
               for u in dirs):
            dirs.append(v)
        if len(dirs) == count:
            return dirs
    raise ConeSpecError("direction sampling failed")


# ---------------------------------------------------------------------------
# flat distance between cones, and coverage nets

def _sheet_match_cost(sa: Sheet, sb: Sheet) -> float:
    return hausdorff_distance(sa.points, sb.points)


def _align_polylines(sa: Sheet, sb: Sheet, count: int):
    pa = resample_polyline(sa.points, count, closed=sa.closed)
    pb = resample_polyline(sb.points, count, closed=sb.closed)
    mb = sb.mult
    if sa.closed:
        pa = pa[:-1]
        pb_full = pb[:-1]
        best, best_cost = None, np.inf
        for rev in (False, True):
            cand0 = pb_full[::-1].copy() if rev else pb_full
            for shift in range(count):
                cand = np.roll(cand0, -shift, axis=0)
                cost = float(np.sum((pa - cand) ** 2))
                if cost < best_cost:
                    best_cost = cost
                    best = (cand.copy(), -mb if rev else mb)
        return pa, best[0], sa.mult, best[1], True
    cost_fw = float(np.sum((pa - pb) ** 2))
    cost_bw = float(np.sum((pa - pb[::-1]) ** 2))
    if cost_bw < cost_fw:
        return pa, pb[::-1].copy(), sa.mult, -mb, False
    return pa, pb, sa.mult, mb, False


def cone_flat_distance(spec_a: ConeSpec, spec_b: ConeSpec, max_angle: float = 0.2,
                       ball_radius: float = 1.0):
    """Flat distance between unit-ball cone restrictions on a joint complex.

    Sheets of equal kind are matched greedily by Hausdorff distance; matched
    sheets contribute coned strips (3-cells), unmatched sheets only their
    fans.  The LP value is therefore an upper bound for the continuum flat
    distance that is tight when the cones are close.
    """
    sheets_a = cross_section_sheets(spec_a, max_angle)
    sheets_b = cross_section_sheets(spec_b, max_angle)
    pairs = []
    free_a = list(range(len(sheets_a)))
    free_b = list(range(len(sheets_b)))
    cost = {(i, j): _sheet_match_cost(sheets_a[i], sheets_b[j])
            for i in free_a for j in free_b
            if sheets_a[i].kind == sheets_b[j].kind}
    while cost:
        (i, j) = min(cost, key=cost.get)
        sa, sb = sheets_a[i], sheets_b[j]
        count = max(len(sa.points), len(sb.points), 8)
        pa, pb, ma, mb, closed = _align_polylines(sa, sb, count)
        pairs.append((pa, pb, ma, mb, closed))
        free_a.remove(i)
        free_b.remove(j)
        cost = {k: v for k, v in cost.items() if k[0] != i and k[1] != j}
    una = [(sheets_a[i].points, sheets_a[i].mult, sheets_a[i].closed) for i in free_a]
    unb = [(sheets_b[j].points, sheets_b[j].mult, sheets_b[j].closed) for j in free_b]
    cx, ca, cb = coned_strip_complex(pairs, una, unb)
    if cx.simplex_count(3) == 0:
        # fully degenerate strips (coinciding cones): no filling needed
        from .flatnorm import trivial_certificate
        return trivial_certificate(ca, cb, ball_radius)
    return flat_distance(ca, cb, ball_radius=ball_radius)


@dataclass
class NetReport:
    net: list
    build_samples: int
    coverage: int
    trials: int
    rows: list

    @property
    def covered(self) -> bool:
        return self.coverage == self.trials


def cone_space_net(q: int, q_bar: int, n: int, eps: float, trials: int = 20, *,
                   seed: int = 0, max_angle: float = 0.25, size_cap: int = 64,
                   settle: int = 15, build_budget: int = 150) -> tuple[list, NetReport]:
    """Greedy eps-net under the cone flat distance, plus coverage evidence.

    Building stops once ``settle`` consecutive samples land within eps of the
    net (or the budget runs out); ``trials`` fresh samples are then checked.
    Raises when the net would exceed ``size_cap``.
    """
    if eps <= 0:
        raise ConeSpecError("eps must be positive")
    rng = np.random.default_rng(seed)
    net: list[ConeSpec] = []
    consecutive = 0
    build_samples = 0
    while consecutive < settle and build_samples < build_budget:
        spec = sample_cone_space(q, q_bar, n, rng)
        build_samples += 1
        dist = min((cone_flat_distance(spec, member, max_angle).value
                    for member in net), default=np.inf)
        if dist > eps:
            net.append(spec)
            consecutive = 0
            if len(net) > size_cap:
                raise ConeSpecError("net exceeds the configured size cap; "
                                    "eps is too small for this resolution")
        else:
            consecutive += 1
    rows = []
    covered = 0
    for t in range(trials):
        spec = sample_cone_space(q, q_bar, n, rng)
        dists = [cone_flat_distance(spec, member, max_angle).value for member in net]
        best = int(np.argmin(dists))
        ok = dists[best] <= eps
        covered += int(ok)
        rows.append({"trial": t, "min_dist": float(dists[best]),
                     "nearest": best, "covered": ok})
    report = NetReport(net=net, build_samples=build_samples, coverage=covered,
                       trials=trials, rows=rows)
    return net, report


# ---------------------------------------------------------------------------
# serialization

def write_cone_spec(path, spec: ConeSpec) -> None:
    buf = io.StringIO()
    buf.write("[cone]\n")
    buf.write(f"n = {spec.n}\n")
    if spec.line is not None:
        buf.write("line = " + " ".join(f"{x:.17g}" for x in spec.line) + "\n")
    buf.write(f"case = {spec.case_tag}\n")
    for i, (u, m) in enumerate(spec.halfplanes):
        buf.write(f"\n[halfplane {i}]\n")
        buf.write("direction = " + " ".join(f"{x:.17g}" for x in u) + "\n")
        buf.write(f"mult = {m}\n")
    for i, (basis, m) in enumerate(spec.interior_planes):
        buf.write(f"\n[plane {i}]\n")
        buf.write("basis_u = " + " ".join(f"{x:.17g}" for x in basis[0]) + "\n")
        buf.write("basis_v = " + " ".join(f"{x:.17g}" for x in basis[1]) + "\n")
        buf.write(f"mult = {m}\n")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(buf.getvalue())


def read_cone_spec(path) -> ConeSpec:
    cp = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        cp.read_file(fh)
    n = cp.getint("cone", "n")
    line = None
    if cp.has_option("cone", "line"):
        line = np.array([float(x) for x in cp.get("cone", "line").split()])
    halves = []
    planes = []
    for section in cp.sections():
        if section.startswith("halfplane"):
            u = np.array([float(x) for x in cp.get(section, "direction").split()])
            halves.append((u, cp.getint(section, "mult")))
        elif section.startswith("plane"):
            bu = np.array([float(x) for x in cp.get(section, "basis_u").split()])
            bv = np.array([float(x) for x in cp.get(section, "basis_v").split()])
            planes.append((np.vstack([bu, bv]), cp.getint(section, "mult")))
    return ConeSpec(n=n, line=line, interior_planes=planes, halfplanes=halves)
