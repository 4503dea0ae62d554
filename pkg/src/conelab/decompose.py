"""Decomposition of spherical 1-chains into simple paths and cycles, and the
constructive grouping of a cross-section perturbation into per-cone pieces.

``indecomposable_pieces`` peels a chain with boundary Q(N - P) into exactly Q
simple directed P -> N paths plus simple cycles, by multigraph expansion and
deterministic smallest-arc-first walking; mass bookkeeping is exact because
arc angles are summed, never cancelled.

``lemma_decomposition`` groups the pieces of a nearby chain Z against the
pieces of an exact cross-section R: paths are matched by optimal assignment
under Hausdorff cost, large cycles are attached to the piece whose sheet they
hug, small cycles form the remainder, and the seven quality conditions are
measured and reported.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .currents import (SphericalChain, cone_over, hausdorff_distance,
                       point_key)
from .errors import DecompositionError
from .fillings import multi_strip_complex, resample_polyline
from .flatnorm import flat_distance, trivial_certificate
from .mesh import GeodesicArc


@dataclass
class Piece:
    """One simple path or cycle produced by peeling."""

    points: np.ndarray          # (m+1, d); cycles repeat their first point
    closed: bool
    mass: float

    def to_chain(self) -> SphericalChain:
        arcs = [(GeodesicArc(self.points[i], self.points[i + 1]), 1, 1)
                for i in range(len(self.points) - 1)]
        return SphericalChain(arcs)


def _expand_edges(z: SphericalChain):
    """Directed parallel edges (tail_key, head_key, tail, head, angle)."""
    edges = []
    for arc, mult, sign in z.arcs:
        tail, head = (arc.start, arc.end) if sign > 0 else (arc.end, arc.start)
        for _ in range(mult):
            edges.append((point_key(tail), point_key(head), tail, head, arc.angle))
    return edges


def indecomposable_pieces(z: SphericalChain, p_point, n_point):
    """Peel into (paths, cycles); boundary must be Q([N] - [P]) for some Q >= 0."""
    p_key = point_key(np.asarray(p_point, dtype=float))
    n_key = point_key(np.asarray(n_point, dtype=float))
    bnd = z.boundary_coeffs()
    q = 0
    for key, (_, coeff) in bnd.items():
        if key == n_key and coeff > 0:
            q = coeff
        elif key == p_key and coeff < 0:
            if bnd.get(n_key, (None, 0))[1] != -coeff:
                raise DecompositionError("boundary is not of the form Q([N]-[P])")
        else:
            raise DecompositionError("boundary is not of the form Q([N]-[P])")
    if bnd and q == 0:
        raise DecompositionError("boundary is not of the form Q([N]-[P])")

    edges = _expand_edges(z)
    out_edges: dict = {}
    for eid, e in enumerate(edges):
        out_edges.setdefault(e[0], []).append(eid)
    for lst in out_edges.values():
        lst.sort(reverse=True)      # pop() then yields the smallest id first
    used = [False] * len(edges)

    def next_edge(key):
        lst = out_edges.get(key, [])
        while lst:
            eid = lst[-1]
            if used[eid]:
                lst.pop()
                continue
            return eid
        return None

    def walk(start_key, start_point, stop_key):
        """Walk greedily, splitting off a simple cycle at every node revisit."""
        nodes = [start_key]
        pts = [np.asarray(start_point, dtype=float)]
        masses = [0.0]
        pos = {start_key: 0}
        cycles = []
        while True:
            if stop_key is not None and nodes[-1] == stop_key and len(nodes) > 1:
                break
            eid = next_edge(nodes[-1])
            if eid is None:
                if stop_key is None and nodes[-1] == start_key:
                    break
                raise DecompositionError("walk dead-ended; inconsistent multigraph")
            used[eid] = True
            _, head_key, _, head, angle = edges[eid]
            nodes.append(head_key)
            pts.append(np.asarray(head, dtype=float))
            masses.append(masses[-1] + angle)
            if head_key in pos and pos[head_key] < len(nodes) - 1:
                i = pos[head_key]
                cyc_pts = np.array(pts[i:])
                cycles.append(Piece(points=cyc_pts, closed=True,
                                    mass=masses[-1] - masses[i]))
                for k in nodes[i + 1:-1]:
                    pos.pop(k, None)
                del nodes[i + 1:], pts[i + 1:], masses[i + 1:]
            else:
                pos[head_key] = len(nodes) - 1
        piece = Piece(points=np.array(pts), closed=(stop_key is None),
                      mass=masses[-1])
        return piece, cycles

    paths = []
    cycles = []
    p_arr = np.asarray(p_point, dtype=float)
    for _ in range(q):
        piece, cycs = walk(p_key, p_arr, n_key)
        paths.append(piece)
        cycles.extend(cycs)
    for eid in range(len(edges)):
        if used[eid]:
            continue
        start_key, _, start, _, _ = edges[eid]
        piece, cycs = walk(start_key, start, None)
        cycles.extend(cycs)
        if piece.mass > 0:
            cycles.append(piece)
    return paths, cycles


# ---------------------------------------------------------------------------
# grouping

@dataclass
class SubCone:
    """Cone over one grouped cross-section piece (boundary multiplicity 1)."""

    section_pieces: list
    exact_mass: float

    def section_chain(self) -> SphericalChain:
        chain = None
        for piece in self.section_pieces:
            part = piece.to_chain()
            chain = part if chain is None else chain + part
        return chain

    def cone_chain(self):
        return cone_over(self.section_chain())


@dataclass
class ConditionRow:
    name: str
    value: float
    threshold: float
    ok: bool


@dataclass
class DecompositionResult:
    pieces: list                 # Q lists of Piece (paths first, then cycles)
    remainder: list              # list of Piece (small cycles)
    sub_cones: list              # SubCone per group, from R's pieces
    condition_report: list = field(default_factory=list)
    epsilon_used: float = 0.0
    q: int = 0

    def piece_chain(self, i: int) -> SphericalChain:
        chain = None
        for piece in self.pieces[i]:
            part = piece.to_chain()
            chain = part if chain is None else chain + part
        return chain

    def all_ok(self) -> bool:
        return all(row.ok for row in self.condition_report)


def _piece_set_points(pieces) -> np.ndarray:
    return np.vstack([p.points for p in pieces])


def _poly_hausdorff(pa: np.ndarray, pb: np.ndarray) -> float:
    return hausdorff_distance(pa, pb)


def _assign_paths(z_paths, r_paths):
    """Min-total-Hausdorff assignment; exhaustive up to Q = 6, greedy beyond."""
    q = len(z_paths)
    cost = np.array([[_poly_hausdorff(zp.points, rp.points) for rp in r_paths]
                     for zp in z_paths])
    if q <= 6:
        best_perm, best_cost = None, np.inf
        for perm in itertools.permutations(range(q)):
            total = sum(cost[i, perm[i]] for i in range(q))
            if total < best_cost - 1e-15:
                best_cost = total
                best_perm = perm
        return list(best_perm)
    taken = set()
    perm = []
    for i in range(q):
        j = min((j for j in range(q) if j not in taken), key=lambda j: cost[i, j])
        taken.add(j)
        perm.append(j)
    return perm


def _component_flat_norm(z_pieces, r_pieces) -> float:
    """Flat norm of (Z_i - R_i) via strips between matched components."""
    z_paths = [p for p in z_pieces if not p.closed]
    r_paths = [p for p in r_pieces if not p.closed]
    z_cycs = [p for p in z_pieces if p.closed]
    r_cycs = [p for p in r_pieces if p.closed]
    pairs = []
    for zp, rp in zip(z_paths, r_paths):
        count = max(len(zp.points), len(rp.points), 8) - 1
        pairs.append((resample_polyline(zp.points, count),
                      resample_polyline(rp.points, count), False))
    free_r = list(range(len(r_cycs)))
    un_a, un_b = [], []
    for zc in z_cycs:
        if not free_r:
            un_a.append((zc.points, True))
            continue
        j = min(free_r, key=lambda j: _poly_hausdorff(zc.points, r_cycs[j].points))
        free_r.remove(j)
        rc = r_cycs[j]
        count = max(len(zc.points), len(rc.points), 8) - 1
        pa = resample_polyline(zc.points, count, closed=True)[:-1]
        pb0 = resample_polyline(rc.points, count, closed=True)[:-1]
        best, best_cost = None, np.inf
        for rev in (False, True):
            cand0 = pb0[::-1].copy() if rev else pb0
            for shift in range(count):
                cand = np.roll(cand0, -shift, axis=0)
                c = float(np.sum((pa - cand) ** 2))
                if c < best_cost:
                    best_cost, best = c, cand.copy()
        pairs.append((pa, best, True))
    un_b.extend((r_cycs[j].points, True) for j in free_r)
    cx, ca, cb = multi_strip_complex(pairs, un_a, un_b)
    if cx.simplex_count(2) == 0:
        return trivial_certificate(ca, cb).value
    return flat_distance(ca, cb).value


def lemma_decomposition(z: SphericalChain, r: SphericalChain, eps0: float,
                        eta: float | None = None,
                        mass_floor: float | None = None) -> DecompositionResult:
    """Group Z into Q pieces matched to R's pieces plus a small remainder.

    Z and R must share the boundary Q([N] - [P]).  Cycles of Z with mass at
    most ``mass_floor`` go to the remainder; larger cycles attach to the
    group whose matched R-sheet they approach within ``eta`` (default 5*eps0),
    otherwise the cycle is reported as a decomposition failure.
    """
    if eta is None:
        eta = 5.0 * eps0
    if mass_floor is None:
        mass_floor = eps0 / 2.0

    bnd_r = r.boundary_coeffs()
    if len(bnd_r) != 2:
        raise DecompositionError("cross-section boundary must be two points")
    (k1, (p1, c1)), (k2, (p2, c2)) = sorted(bnd_r.items())
    if c1 + c2 != 0:
        raise DecompositionError("cross-section boundary multiplicities unbalanced")
    n_point, p_point = (p1, p2) if c1 > 0 else (p2, p1)

    r_paths, r_cycles = indecomposable_pieces(r, p_point, n_point)
    z_paths, z_cycles = indecomposable_pieces(z, p_point, n_point)
    q = len(r_paths)
    if q == 0:
        raise DecompositionError("cross-section has no boundary paths (Q = 0)")
    if len(z_paths) != q:
        raise DecompositionError(
            f"Z has {len(z_paths)} boundary paths but the cross-section has {q}")

    # attach R's cycles to the nearest R-path (deterministic order)
    r_groups = [[p] for p in r_paths]
    for cyc in r_cycles:
        i = min(range(q), key=lambda i: _poly_hausdorff(cyc.points, r_paths[i].points))
        r_groups[i].append(cyc)

    perm = _assign_paths(z_paths, r_paths)
    z_groups = [[z_paths[i]] for i in range(q)]
    groups_of_r = [r_groups[perm[i]] for i in range(q)]

    remainder = []
    for cyc in z_cycles:
        if cyc.mass <= mass_floor:
            remainder.append(cyc)
            continue
        dists = []
        for i in range(q):
            sheet_d = min(_poly_hausdorff(cyc.points, sheet.points)
                          for sheet in groups_of_r[i])
            dists.append(sheet_d)
        i_best = int(np.argmin(dists))
        if dists[i_best] > eta:
            raise DecompositionError(
                f"unmatchable cycle of mass {cyc.mass:.6g}: nearest sheet at "
                f"Hausdorff distance {dists[i_best]:.6g} > eta = {eta:.6g}",
                cycle=cyc.points)
        z_groups[i_best].append(cyc)

    sub_cones = [SubCone(section_pieces=groups_of_r[i],
                         exact_mass=sum(p.mass for p in groups_of_r[i]) / 2.0)
                 for i in range(q)]

    result = DecompositionResult(pieces=z_groups, remainder=remainder,
                                 sub_cones=sub_cones, epsilon_used=eps0, q=q)
    result.condition_report = _evaluate_conditions(z, r, result, eps0)
    return result


def _evaluate_conditions(z, r, result: DecompositionResult, eps0: float):
    rows = []
    q = result.q
    z_mass = z.mass()
    piece_mass = [sum(p.mass for p in grp) for grp in result.pieces]
    rem_mass = sum(p.mass for p in result.remainder)

    rows.append(ConditionRow("i_sum", abs(z_mass - (sum(piece_mass) + rem_mass)),
                             1e-12 * max(1.0, z_mass), True))
    rows[-1].ok = rows[-1].value <= rows[-1].threshold

    r_mass = r.mass()
    split_gap = abs(r_mass / 2.0 - sum(sc.exact_mass for sc in result.sub_cones))
    mass_gap = abs(z_mass - (sum(piece_mass) + rem_mass))
    rows.append(ConditionRow("ii_mass_additivity", max(split_gap, mass_gap),
                             1e-12 * max(1.0, z_mass), True))
    rows[-1].ok = rows[-1].value <= rows[-1].threshold

    bnd_ok = True
    for i in range(q):
        zb = result.piece_chain(i).boundary_coeffs()
        rb = result.sub_cones[i].section_chain().boundary_coeffs()
        if sorted(zb.keys()) != sorted(rb.keys()):
            bnd_ok = False
        else:
            for key in zb:
                if zb[key][1] != rb[key][1]:
                    bnd_ok = False
    rows.append(ConditionRow("iii_boundaries", 0.0 if bnd_ok else 1.0, 0.5, bnd_ok))

    flat_vals = [_component_flat_norm(result.pieces[i],
                                      result.sub_cones[i].section_pieces)
                 for i in range(q)]
    worst_flat = max(flat_vals) if flat_vals else 0.0
    rows.append(ConditionRow("iv_flat_norm", worst_flat, eps0, worst_flat <= eps0))

    mass_gaps = [piece_mass[i] - sum(p.mass for p in result.sub_cones[i].section_pieces)
                 for i in range(q)]
    worst_gap = max(mass_gaps) if mass_gaps else 0.0
    rows.append(ConditionRow("v_mass_gap", worst_gap, eps0, worst_gap <= eps0))

    dists = [hausdorff_distance(_piece_set_points(result.pieces[i]),
                                _piece_set_points(result.sub_cones[i].section_pieces))
             for i in range(q)]
    worst_dist = max(dists) if dists else 0.0
    rows.append(ConditionRow("vi_support_dist", worst_dist, eps0, worst_dist <= eps0))

    rem_closed = all(p.closed for p in result.remainder)
    rows.append(ConditionRow("vii_remainder", rem_mass if rem_closed else math.inf,
                             eps0, rem_closed and rem_mass <= eps0))
    return rows


def verify_mass_splitting(result: DecompositionResult, spec) -> dict:
    """Check exact sector-mass additivity of the sub-cones against the spec.

    Each sub-cone must carry boundary multiplicity 1; the sum of the exact
    sector masses must reproduce pi * density to 1e-12.
    """
    from .cones import density_at_origin
    total = float(math.pi * density_at_origin(spec))
    sub_sum = sum(sc.exact_mass for sc in result.sub_cones)
    boundary_ok = True
    for sc in result.sub_cones:
        paths = [p for p in sc.section_pieces if not p.closed]
        if len(paths) != 1:
            boundary_ok = False
    gap = abs(total - sub_sum)
    return {"total_mass": total, "sub_cone_sum": sub_sum, "gap": gap,
            "sub_masses": [sc.exact_mass for sc in result.sub_cones],
            "boundary_ok": boundary_ok, "ok": boundary_ok and gap <= 1e-12 * max(1.0, total)}
