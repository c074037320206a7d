"""Face lattices of convex polytopes in C^N and their Shilov face sets.

Complex coordinates are flattened to reals as (x1, y1, ..., xN, yN); the
complex structure J acts blockwise by (x, y) -> (-y, x).  For every face
with direction space W the number nu = dim_C(W intersect JW) counts the
complex directions along the face.  The Shilov set for the q-plurisub-
harmonic family is then the boundary minus the open region where every
nearby boundary point has at least q+1 complex directions; on a polytope
that open region is a union of relative interiors of faces selected by a
star criterion over the lattice.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import ConvexHull, Delaunay, QhullError

from .cloud import PointCloud
from .errors import ClassificationError, InputError, NumericRankError

MAX_VERTICES = 64
MAX_PRODUCT_VERTICES = 4096
MAX_GENERIC_FACETS = 20
_RANK_TOL = 1e-9


def complex_structure(n: int) -> np.ndarray:
    """The 2N x 2N block matrix of multiplication by i."""
    j = np.zeros((2 * n, 2 * n))
    for k in range(n):
        j[2 * k, 2 * k + 1] = -1.0
        j[2 * k + 1, 2 * k] = 1.0
    return j


@dataclass(frozen=True)
class Facet:
    normal: np.ndarray  # unit outward, length 2N
    offset: float  # n . v <= offset, equality on vertex_set
    vertex_set: frozenset[int]


@dataclass
class Face:
    """One face: its vertices, affine-direction basis, and complex count."""

    vertex_set: frozenset[int]
    dim: int
    basis: np.ndarray  # (2N, dim), orthonormal columns
    nu: int
    witness: np.ndarray  # vertex centroid, lies in the relative interior
    face_id: int = -1

    def __le__(self, other: "Face") -> bool:
        return self.vertex_set <= other.vertex_set


class FaceLattice:
    """All non-empty proper faces plus the body, ordered by vertex inclusion."""

    def __init__(self, faces: list[Face], body: Face):
        faces = sorted(faces, key=lambda f: (f.dim, tuple(sorted(f.vertex_set))))
        for i, f in enumerate(faces):
            f.face_id = i
        body.face_id = len(faces)
        self.proper = faces
        self.body = body
        self._by_vset = {f.vertex_set: f for f in faces}
        self._by_vset[body.vertex_set] = body

    def __len__(self) -> int:
        return len(self.proper) + 1

    def face_with_vertices(self, vset: frozenset[int]) -> Optional[Face]:
        return self._by_vset.get(vset)

    def superfaces(self, f: Face) -> list[Face]:
        """Proper faces containing f (including f itself)."""
        return [g for g in self.proper if f.vertex_set <= g.vertex_set]


@dataclass
class Polytope:
    """Full-dimensional convex polytope in C^N with V and H data."""

    n: int  # ambient complex dimension
    vertices: np.ndarray  # (m, 2N)
    facets: list[Facet]
    factors: Optional[list["Polytope"]] = None  # set for product polytopes
    _lattice: Optional[FaceLattice] = field(default=None, repr=False)

    @property
    def real_dim(self) -> int:
        return 2 * self.n

    def lattice(self) -> FaceLattice:
        if self._lattice is None:
            self._lattice = face_lattice(self)
        return self._lattice

    def interior_point(self) -> np.ndarray:
        return self.vertices.mean(axis=0)


def _numeric_rank(m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    sv = np.linalg.svd(m, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > _RANK_TOL * sv[0]))


def _make_face(vset: frozenset[int], verts: np.ndarray, n: int) -> Face:
    pts = verts[sorted(vset)]
    centroid = pts.mean(axis=0)
    diffs = pts - centroid
    if len(pts) == 1:
        basis = np.zeros((2 * n, 0))
        dim = 0
    else:
        _, sv, vt = np.linalg.svd(diffs, full_matrices=False)
        dim = int(np.sum(sv > _RANK_TOL * max(sv[0], 1.0)))
        basis = vt[:dim].T
    j = complex_structure(n)
    stacked = np.hstack([basis, j @ basis])
    defect = 2 * dim - _numeric_rank(stacked)
    if defect < 0 or defect % 2:
        raise NumericRankError(
            f"face {sorted(vset)}: dim(W ^ JW) = {defect} is not even; "
            "re-run with exact-rational-like vertex data or tighter tolerance"
        )
    return Face(vertex_set=vset, dim=dim, basis=basis, nu=defect // 2, witness=centroid)


def complex_dimension(face: Face) -> int:
    """Complex dimension of the largest complex plane inside the face's hull."""
    return face.nu


# ---------------------------------------------------------------------------
# Construction


def build_polytope(vertices: Sequence[Sequence[float]], ambient_complex_dim: int) -> Polytope:
    """Convex hull with facet hyperplanes; prunes non-extreme input points.

    Requires a full-dimensional hull in R^(2N) and at most 64 points.
    """
    n = int(ambient_complex_dim)
    verts = np.asarray(vertices, dtype=float)
    if verts.ndim != 2 or verts.shape[1] != 2 * n:
        raise InputError(
            f"vertices must be (m, {2 * n}) for complex dimension {n}, got {verts.shape}"
        )
    if len(verts) > MAX_VERTICES:
        raise InputError(f"at most {MAX_VERTICES} vertices supported, got {len(verts)}")
    try:
        hull = ConvexHull(verts)
    except QhullError as e:
        raise InputError(f"degenerate hull (not full-dimensional): {e}") from e
    extreme = sorted(hull.vertices)
    if len(extreme) != len(verts):
        dropped = sorted(set(range(len(verts))) - set(extreme))
        warnings.warn(f"pruned non-extreme input points at indices {dropped}")
        verts = verts[extreme]
        hull = ConvexHull(verts)

    scale = max(1.0, float(np.abs(verts).max()))
    facets: list[Facet] = []
    seen: set[tuple] = set()
    for eq in hull.equations:
        normal, off = eq[:-1], -eq[-1]  # qhull: n.x + b <= 0 inside
        key = tuple(np.round(np.append(normal, off), 9))
        if key in seen:
            continue
        seen.add(key)
        slack = verts @ normal - off
        if np.any(slack > 1e-7 * scale):
            raise InputError("facet hyperplane fails to support the hull")
        vset = frozenset(int(i) for i in np.nonzero(slack > -1e-9 * scale)[0])
        facets.append(Facet(normal=normal, offset=float(off), vertex_set=vset))
    return Polytope(n=n, vertices=verts, facets=facets)


def regular_polygon(k: int, radius: float = 1.0, center: Sequence[float] = (0.0, 0.0)) -> Polytope:
    """Regular k-gon in C^1, first vertex on the positive x-axis."""
    if k < 3:
        raise InputError("polygon needs at least 3 vertices")
    ang = 2.0 * np.pi * np.arange(k) / k
    pts = np.stack([center[0] + radius * np.cos(ang), center[1] + radius * np.sin(ang)], axis=1)
    return build_polytope(pts, 1)


def polygon(vertices2d: Sequence[Sequence[float]]) -> Polytope:
    """Convex polygon in C^1 from explicit 2D points."""
    return build_polytope(vertices2d, 1)


def product(p: Polytope, q: Polytope) -> Polytope:
    """Cartesian product; vertex, facet and face data compose factorwise."""
    m = len(p.vertices) * len(q.vertices)
    if m > MAX_PRODUCT_VERTICES:
        raise InputError(f"product would have {m} vertices (cap {MAX_PRODUCT_VERTICES})")
    mp, mq = len(p.vertices), len(q.vertices)
    verts = np.hstack([
        np.repeat(p.vertices, mq, axis=0),
        np.tile(q.vertices, (mp, 1)),
    ])
    facets: list[Facet] = []
    all_q = range(mq)
    for f in p.facets:
        vset = frozenset(i * mq + j for i in f.vertex_set for j in all_q)
        facets.append(Facet(
            normal=np.concatenate([f.normal, np.zeros(2 * q.n)]),
            offset=f.offset, vertex_set=vset,
        ))
    all_p = range(mp)
    for f in q.facets:
        vset = frozenset(i * mq + j for i in all_p for j in f.vertex_set)
        facets.append(Facet(
            normal=np.concatenate([np.zeros(2 * p.n), f.normal]),
            offset=f.offset, vertex_set=vset,
        ))
    factors = (p.factors or [p]) + (q.factors or [q])
    return Polytope(n=p.n + q.n, vertices=verts, facets=facets, factors=factors)


# ---------------------------------------------------------------------------
# Lattice enumeration


def _generic_lattice(p: Polytope) -> FaceLattice:
    if len(p.facets) > MAX_GENERIC_FACETS:
        raise InputError(
            f"{len(p.facets)} facets exceeds the generic cap "
            f"{MAX_GENERIC_FACETS}; build the polytope as a product instead"
        )
    vsets: set[frozenset[int]] = {f.vertex_set for f in p.facets}
    frontier = list(vsets)
    while frontier:
        new: list[frozenset[int]] = []
        for a in frontier:
            for b in list(vsets):
                c = a & b
                if c and c not in vsets:
                    vsets.add(c)
                    new.append(c)
        frontier = new
    faces = [_make_face(vs, p.vertices, p.n) for vs in vsets]
    body = _make_face(frozenset(range(len(p.vertices))), p.vertices, p.n)
    return FaceLattice(faces, body)


def _product_lattice(p: Polytope) -> FaceLattice:
    factors = p.factors
    assert factors is not None
    factor_faces: list[list[frozenset[int]]] = []
    sizes = [len(f.vertices) for f in factors]
    for f in factors:
        lat = f.lattice()
        factor_faces.append([g.vertex_set for g in lat.proper] + [lat.body.vertex_set])
    strides = np.ones(len(factors), dtype=int)
    for k in range(len(factors) - 2, -1, -1):
        strides[k] = strides[k + 1] * sizes[k + 1]

    def combine(choice: list[frozenset[int]]) -> frozenset[int]:
        out = [0]
        for k, vs in enumerate(choice):
            out = [base + int(strides[k]) * int(i) for base in out for i in vs]
        return frozenset(out)

    combos: list[list[frozenset[int]]] = [[]]
    for ff in factor_faces:
        combos = [c + [vs] for c in combos for vs in ff]
    bodies = [ff[-1] for ff in factor_faces]
    faces = []
    for choice in combos:
        if all(ch is b for ch, b in zip(choice, bodies)):
            continue  # that combination is the whole body
        faces.append(_make_face(combine(choice), p.vertices, p.n))
    body = _make_face(frozenset(range(len(p.vertices))), p.vertices, p.n)
    return FaceLattice(faces, body)


def face_lattice(p: Polytope) -> FaceLattice:
    """All non-empty faces; compositional for products, else by intersection."""
    if p.factors is not None:
        return _product_lattice(p)
    return _generic_lattice(p)


# ---------------------------------------------------------------------------
# Boundary classification


def classify_boundary_point(
    p: Polytope, point: Sequence[float], tol: float = 1e-8
) -> tuple[Face, int, str]:
    """Face whose relative interior holds the point, its nu, and its kind.

    The face is the intersection of all facets active at the point; for a
    polytope the minimal-face iteration stabilizes there immediately.
    """
    x = np.asarray(point, dtype=float).reshape(p.real_dim)
    scale = max(1.0, float(np.abs(p.vertices).max()))
    slacks = np.array([f.normal @ x - f.offset for f in p.facets])
    if np.any(slacks > tol * scale) or np.all(slacks < -tol * scale):
        raise ClassificationError(
            f"point not on the boundary; signed facet slacks: {slacks.tolist()}"
        )
    active = [f for f, s in zip(p.facets, slacks) if s > -tol * scale]
    vset = frozenset.intersection(*[f.vertex_set for f in active])
    face = p.lattice().face_with_vertices(vset)
    if face is None:
        raise ClassificationError(f"active facet intersection {sorted(vset)} is not a lattice face")
    return face, face.nu, ("real" if face.nu == 0 else "complex")


# ---------------------------------------------------------------------------
# Shilov computation


def gamma_q(p: Polytope, q: int) -> list[Face]:
    """Faces whose relative interiors consist of stably q-complex points.

    A boundary neighborhood of a relative-interior point of F meets exactly
    the relative interiors of the faces containing F, so F qualifies iff
    every containing proper face G has nu(G) >= q.
    """
    lat = p.lattice()
    return [f for f in lat.proper if all(g.nu >= q for g in lat.superfaces(f))]


def maximal_faces(faces: Sequence[Face]) -> list[Face]:
    out = []
    for f in faces:
        if not any(f.vertex_set < g.vertex_set for g in faces):
            out.append(f)
    return out


@dataclass
class ShilovResult:
    """Shilov face set for one q, its complement, and a boundary sample."""

    q: int
    ambient_complex_dim: int
    shilov_faces: list[Face]
    gamma_faces: list[Face]
    maximal_shilov_faces: list[Face]
    cloud: PointCloud

    def shilov_vertex_union(self) -> frozenset[int]:
        out: set[int] = set()
        for f in self.shilov_faces:
            out |= f.vertex_set
        return frozenset(out)

    def to_json(self) -> dict:
        def render(faces):
            return [
                {
                    "id": int(f.face_id),
                    "vertices": [int(v) for v in sorted(f.vertex_set)],
                    "dim": int(f.dim),
                    "nu": int(f.nu),
                }
                for f in sorted(faces, key=lambda g: g.face_id)
            ]

        return {
            "q": self.q,
            "ambient_complex_dim": self.ambient_complex_dim,
            "shilov_faces": render(self.shilov_faces),
            "gamma_faces": render(self.gamma_faces),
            "maximal_shilov_faces": sorted(int(f.face_id) for f in self.maximal_shilov_faces),
        }


def face_volume(face: Face, verts: np.ndarray) -> float:
    """d-volume of the face inside its own affine hull."""
    if face.dim == 0:
        return 0.0
    pts = verts[sorted(face.vertex_set)]
    local = (pts - face.witness) @ face.basis
    if face.dim == 1:
        return float(local[:, 0].max() - local[:, 0].min())
    tri = Delaunay(local)
    total = 0.0
    fact = float(math.factorial(face.dim))
    for simplex in tri.simplices:
        edges = local[simplex[1:]] - local[simplex[0]]
        total += abs(np.linalg.det(edges)) / fact
    return total


def sample_face(face: Face, verts: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform sample of the face, returned as (count, 2N) real coordinates."""
    if count <= 0:
        return np.zeros((0, verts.shape[1]))
    if face.dim == 0:
        return np.tile(face.witness, (count, 1))
    pts = verts[sorted(face.vertex_set)]
    local = (pts - face.witness) @ face.basis
    if face.dim == 1:
        lo, hi = local[:, 0].min(), local[:, 0].max()
        t = rng.uniform(lo, hi, size=count)[:, None]
        return face.witness + t @ face.basis.T
    tri = Delaunay(local)
    vols = []
    for simplex in tri.simplices:
        edges = local[simplex[1:]] - local[simplex[0]]
        vols.append(abs(np.linalg.det(edges)) / math.factorial(face.dim))
    weights = np.asarray(vols) / np.sum(vols)
    picks = rng.choice(len(tri.simplices), size=count, p=weights)
    out = np.empty((count, verts.shape[1]))
    for i, s in enumerate(picks):
        bary = rng.dirichlet(np.ones(face.dim + 1))
        loc = bary @ local[tri.simplices[s]]
        out[i] = face.witness + face.basis @ loc
    return out


def shilov_psh(p: Polytope, q: int, count: int = 2048, seed: int = 0) -> ShilovResult:
    """Shilov face set for the q-plurisubharmonic family on the polytope.

    The result is the boundary minus the stable (q+1)-complex region: a
    face contributes iff some containing face has nu <= q, which makes the
    face set closed downward, so the union of the listed faces' relative
    interiors is already closed.  The cloud samples the maximal faces with
    volume weights.
    """
    if q < 0:
        raise InputError("q must be non-negative")
    lat = p.lattice()
    gamma = gamma_q(p, q + 1)
    gamma_ids = {f.face_id for f in gamma}
    shilov = [f for f in lat.proper if f.face_id not in gamma_ids]
    top = maximal_faces(shilov)
    rng = np.random.default_rng(seed)
    pieces = []
    labels = []
    if top and count > 0:
        vols = np.array([max(face_volume(f, p.vertices), 1e-300) for f in top])
        alloc = np.maximum(1, np.floor(count * vols / vols.sum()).astype(int))
        while alloc.sum() > count:
            alloc[int(np.argmax(alloc))] -= 1
        for f, k in zip(top, alloc):
            pts = sample_face(f, p.vertices, int(k), rng)
            pieces.append(pts)
            labels.extend([f.face_id] * int(k))
    points = np.vstack(pieces) if pieces else np.zeros((0, p.real_dim))
    cloud = PointCloud(
        points=points, provenance="polytope-shilov", labels=np.asarray(labels, dtype=int)
    )
    return ShilovResult(
        q=q, ambient_complex_dim=p.n, shilov_faces=shilov,
        gamma_faces=gamma, maximal_shilov_faces=top, cloud=cloud,
    )


# ---------------------------------------------------------------------------
# Foliation planes


def complex_plane_basis(face: Face, n: int) -> np.ndarray:
    """Orthonormal complex basis (nu rows in C^N) of W intersect JW."""
    if face.nu == 0:
        return np.zeros((0, n), dtype=complex)
    j = complex_structure(n)
    b = face.basis
    stacked = np.hstack([b, -(j @ b)])
    _, sv, vt = np.linalg.svd(stacked)
    null_dim = stacked.shape[1] - int(np.sum(sv > _RANK_TOL * sv[0]))
    null_vecs = vt[-null_dim:] if null_dim else np.zeros((0, stacked.shape[1]))
    reals = (b @ null_vecs[:, : b.shape[1]].T).T  # rows span W ^ JW
    cplx = reals[:, 0::2] + 1j * reals[:, 1::2]
    u, sv2, _ = np.linalg.svd(cplx.T, full_matrices=False)
    keep = int(np.sum(sv2 > _RANK_TOL * max(sv2[0], 1.0)))
    if keep != face.nu:
        raise NumericRankError(
            f"face {sorted(face.vertex_set)}: complex plane rank {keep} != nu {face.nu}"
        )
    return u[:, :keep].T


def nu_superlevel_is_open(p: Polytope, q: int) -> bool:
    """Whether the boundary region of points with nu >= q is open.

    On the lattice this is the star-closedness of the nu >= q face set;
    when it fails, per-face planes are still well defined but no global
    foliation claim is made.
    """
    lat = p.lattice()
    high = [f for f in lat.proper if f.nu >= q]
    return all(all(g.nu >= q for g in lat.superfaces(f)) for f in high)


def foliation_planes(p: Polytope, q: int) -> list[tuple[Face, np.ndarray]]:
    """Per-face complex q-plane bases on the exactly-q-complex Shilov part.

    Qualifying faces are exactly q-complex and their relative interiors lie
    in the Shilov set for level q but not level q-1.  Empty for q = 0.
    """
    if q < 1:
        return []
    in_q = {f.face_id for f in gamma_q(p, q)}
    in_q1 = {f.face_id for f in gamma_q(p, q + 1)}
    out = []
    for f in p.lattice().proper:
        if f.nu == q and f.face_id in in_q and f.face_id not in in_q1:
            out.append((f, complex_plane_basis(f, p.n)))
    return out


# ---------------------------------------------------------------------------
# Falsification oracle


@dataclass
class ExposureReport:
    trials: int
    probes: int
    violations: list[dict]

    @property
    def ok(self) -> bool:
        return not self.violations


def _product_face_candidates(p: Polytope, q: int) -> list[frozenset[int]]:
    """Independent Shilov candidates for products: at most q full factors.

    For a product of planar polygons a product face carries one complex
    direction per full factor, and peak functions exist exactly at points
    whose face has at most q full factors (pinched exposures in the proper
    factors plus a concave quadratic in each full one).  This re-derives
    the Shilov face set without touching the lattice's nu machinery.
    """
    factors = p.factors or [p]
    sizes = [len(f.vertices) for f in factors]
    strides = np.ones(len(factors), dtype=int)
    for k in range(len(factors) - 2, -1, -1):
        strides[k] = strides[k + 1] * sizes[k + 1]
    per_factor = []
    for f in factors:
        lat = f.lattice()
        proper = [g.vertex_set for g in lat.proper]
        per_factor.append((proper, lat.body.vertex_set))
    combos: list[tuple[list[frozenset[int]], int]] = [([], 0)]
    for proper, body in per_factor:
        nxt = []
        for choice, bodies in combos:
            for vs in proper:
                nxt.append((choice + [vs], bodies))
            if bodies + 1 <= q:
                nxt.append((choice + [body], bodies + 1))
        combos = nxt
    out = []
    for choice, _ in combos:
        idxs = [0]
        for k, vs in enumerate(choice):
            idxs = [base + int(strides[k]) * i for base in idxs for i in vs]
        out.append(frozenset(idxs))
    return out


def linear_exposure_oracle(
    p: Polytope, q: int, result: ShilovResult, trials: int = 1000, seed: int = 0
) -> ExposureReport:
    """Falsify a Shilov result against exposed faces and peak probes.

    Every random complex-linear functional's exposed face (its maximizer
    set on the body, hence on the boundary) must intersect the closed
    Shilov set; two faces of a polytope intersect iff they share a vertex,
    so the check is exact set arithmetic.  For product polytopes an
    independent candidate enumeration adds peak probes: each candidate
    face must be covered by the reported face set, which catches results
    truncated below the true Shilov set.
    """
    rng = np.random.default_rng(seed)
    verts = p.vertices
    shilov_verts = result.shilov_vertex_union()
    scale = max(1.0, float(np.abs(verts).max()))
    violations: list[dict] = []
    for t in range(trials):
        a = rng.standard_normal(p.n) + 1j * rng.standard_normal(p.n)
        real_coeff = np.empty(p.real_dim)
        real_coeff[0::2] = a.real
        real_coeff[1::2] = -a.imag  # Re(sum a_k z_k)
        vals = verts @ real_coeff
        top = vals.max()
        exposed = frozenset(int(i) for i in np.nonzero(vals >= top - 1e-9 * scale)[0])
        if not (exposed & shilov_verts):
            violations.append({
                "kind": "exposed-face-misses-shilov",
                "trial": t,
                "functional": [complex(v) for v in a],
                "exposed_vertices": sorted(exposed),
            })
    probes = 0
    if p.factors is not None:
        result_vsets = [f.vertex_set for f in result.shilov_faces]
        for cand in _product_face_candidates(p, q):
            probes += 1
            if not any(cand <= vs for vs in result_vsets):
                witness = verts[sorted(cand)].mean(axis=0)
                violations.append({
                    "kind": "peak-probe-face-missing",
                    "candidate_vertices": sorted(cand),
                    "witness": [float(x) for x in witness],
                })
    return ExposureReport(trials=trials, probes=probes, violations=violations)
