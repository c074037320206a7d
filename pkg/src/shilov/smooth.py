"""Levi-form analysis of smoothly bounded domains from a defining function.

A domain is the sublevel set of a real field rho with non-vanishing
gradient on the boundary.  Boundary points are found by bisection along
quasi-random rays from an interior seed; at each accepted point the
complex Hessian of rho is restricted to the holomorphic tangent space and
its eigenvalue signature drives the strict q-pseudoconvexity flags.  The
closure of the flagged set approximates the Shilov set of the smooth
q-plurisubharmonic family.

Per-sample analysis is embarrassingly parallel; given a seed the sampler
is deterministic regardless of scheduling.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import norm as _norm
from scipy.stats.qmc import Sobol

from .cloud import PointCloud
from .errors import InputError, ProfileError, SamplingError
from .fields import ScalarField, complex_to_real, make_field, real_to_complex
from .hessian import HermitianSpectrum, raw_complex_hessian, spectrum_of, wirtinger_gradients


@dataclass
class DefiningDomain:
    """Defining field, interior seed, sampling box and acceptance thresholds."""

    rho: ScalarField
    interior_seed: np.ndarray  # complex (N,)
    bounding_box: np.ndarray  # (2N, 2) real bounds
    boundary_tol: float = 1e-9
    gradient_floor: float = 1e-6
    name: str = ""

    def __post_init__(self):
        self.interior_seed = np.asarray(self.interior_seed, dtype=complex).reshape(self.rho.n)
        self.bounding_box = np.asarray(self.bounding_box, dtype=float).reshape(2 * self.rho.n, 2)
        if self.rho(self.interior_seed) >= 0:
            raise InputError(f"interior seed {self.interior_seed} has rho >= 0")
        if self.boundary_tol <= 0 or self.gradient_floor <= 0:
            raise InputError("boundary_tol and gradient_floor must be positive")

    @property
    def n(self) -> int:
        return self.rho.n


def _box_domain(name: str, half_width: float, seed, **params) -> DefiningDomain:
    fld = make_field(name, **params)
    box = np.array([[-half_width, half_width]] * (2 * fld.n))
    return DefiningDomain(rho=fld, interior_seed=np.asarray(seed, dtype=complex),
                          bounding_box=box, name=name)


def make_domain(name: str, **params) -> DefiningDomain:
    """Registry of ready-made defining domains."""
    if name == "ball":
        n = int(params.pop("n", 2))
        radius = float(params.pop("radius", 1.0))
        return _box_domain("ball", radius + 0.5, np.zeros(n), n=n, radius=radius, **params)
    if name == "ellipsoid":
        n = int(params.pop("n", 2))
        coeffs = params.pop("coeffs", (1.0, 4.0))
        return _box_domain("ellipsoid", 1.5, np.zeros(n), n=n, coeffs=coeffs, **params)
    if name == "quartic":
        return _box_domain("quartic", 1.5, np.zeros(2), **params)
    if name == "nonparallel_quadric":
        slack = float(params.pop("slack", 0.01))
        radius = float(params.pop("radius", 3.0))
        return _box_domain(
            "nonparallel_quadric", radius + 1.0, np.array([1.5, 0.0, 1.5]),
            slack=slack, radius=radius, **params,
        )
    raise InputError(
        "unknown domain; available: ball, ellipsoid, quartic, nonparallel_quadric"
    )


@dataclass
class BoundarySample:
    cloud: PointCloud
    skipped: int  # rays with no sign change inside the box
    discarded_gradient: int  # hits failing the gradient floor


def sphere_directions(dim: int, count: int, seed: int) -> np.ndarray:
    """Deterministic low-discrepancy directions on the unit sphere."""
    if count == 0:
        return np.zeros((0, dim))
    sob = Sobol(d=dim, scramble=True, seed=seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)  # non-power-of-2 draws are fine here
        u = sob.random(count)
    g = _norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    norms = np.linalg.norm(g, axis=1)
    norms[norms == 0] = 1.0
    return g / norms[:, None]


def sample_boundary(domain: DefiningDomain, count: int, seed: int = 0) -> BoundarySample:
    """Bisect rho along rays from the seed until |rho| <= boundary_tol."""
    d = 2 * domain.n
    x0 = complex_to_real(domain.interior_seed)
    dirs = sphere_directions(d, count, seed)
    lo_b, hi_b = domain.bounding_box[:, 0], domain.bounding_box[:, 1]
    accepted = []
    skipped = 0
    discarded = 0
    for u in dirs:
        with np.errstate(divide="ignore"):
            t_hi = np.where(u > 0, (hi_b - x0) / u, np.where(u < 0, (lo_b - x0) / u, np.inf))
        t_exit = float(np.min(t_hi))
        if not np.isfinite(t_exit) or t_exit <= 0:
            skipped += 1
            continue
        f_exit = domain.rho(real_to_complex(x0 + t_exit * u))
        if f_exit < 0:
            skipped += 1  # ray stays inside up to the box: no bracket
            continue
        t_lo, t_up = 0.0, t_exit
        point = None
        for _ in range(200):
            mid = 0.5 * (t_lo + t_up)
            v = domain.rho(real_to_complex(x0 + mid * u))
            if abs(v) <= domain.boundary_tol:
                point = x0 + mid * u
                break
            if v < 0:
                t_lo = mid
            else:
                t_up = mid
        if point is None:
            skipped += 1
            continue
        z = real_to_complex(point)
        dz, _ = wirtinger_gradients(domain.rho, z)
        if 2.0 * np.linalg.norm(dz) < domain.gradient_floor:  # |real grad| = 2|dz|
            discarded += 1
            continue
        accepted.append(point)
    if count and skipped > 0.10 * count:
        raise SamplingError(
            f"{skipped}/{count} rays failed to bracket a boundary crossing"
        )
    pts = np.asarray(accepted) if accepted else np.zeros((0, d))
    return BoundarySample(
        cloud=PointCloud(points=pts, provenance=f"boundary:{domain.name}"),
        skipped=skipped, discarded_gradient=discarded,
    )


def holomorphic_tangent_basis(domain: DefiningDomain, p: np.ndarray) -> np.ndarray:
    """Orthonormal rows spanning ker of v -> sum_k rho_{z_k}(p) v_k; (N-1, N)."""
    z = np.asarray(p, dtype=complex).reshape(domain.n)
    dz, _ = wirtinger_gradients(domain.rho, z)
    nrm = np.linalg.norm(dz)
    if 2.0 * nrm < domain.gradient_floor:
        raise SamplingError(f"degenerate boundary point {z}: |grad rho| below floor")
    if domain.n == 1:
        return np.zeros((0, 1), dtype=complex)
    _, _, vh = np.linalg.svd(dz.reshape(1, -1))
    return vh[1:].conj()


@dataclass
class LeviReport:
    """Restricted Levi spectrum and strictness flags at one boundary point."""

    point: np.ndarray  # complex (N,)
    tangent_basis: np.ndarray  # (N-1, N) rows
    restricted: HermitianSpectrum
    delta: float
    flags: tuple[bool, ...]  # strictly q-pseudoconvex, q = 0..N-1

    def strictly_q_pc(self, q: int) -> bool:
        return self.flags[min(q, len(self.flags) - 1)] if self.flags else True


def levi_restricted(
    domain: DefiningDomain, p: np.ndarray, delta: Optional[float] = None
) -> LeviReport:
    """Complex Hessian of rho restricted to the holomorphic tangent space.

    Strictly q-pseudoconvex at p means at least N-1-q restricted
    eigenvalues above delta (a small negative perturbation argument turns
    that margin into a strictly q-plurisubharmonic local defining
    function).  Flags are monotone in q by construction.
    """
    z = np.asarray(p, dtype=complex).reshape(domain.n)
    rows = holomorphic_tangent_basis(domain, z)
    h = raw_complex_hessian(domain.rho, z)
    h = (h + h.conj().T) / 2.0
    if delta is None:
        scale = float(np.abs(h).max()) if h.size else 1.0
        delta = 1e-4 * max(1.0, scale)
    b = rows.T  # columns are tangent vectors
    restricted = spectrum_of(b.conj().T @ h @ b, tol=delta) if domain.n > 1 else spectrum_of(
        np.zeros((0, 0), dtype=complex), tol=delta
    )
    n1 = domain.n - 1
    flags = tuple(restricted.positive >= n1 - q for q in range(domain.n))
    return LeviReport(point=z, tangent_basis=rows, restricted=restricted,
                      delta=delta, flags=flags)


def analyze_boundary(
    domain: DefiningDomain, count: int, seed: int = 0,
    delta: Optional[float] = None, jobs: int = 1,
) -> tuple[BoundarySample, list[LeviReport]]:
    """Sample the boundary and compute a Levi report per accepted point."""
    sample = sample_boundary(domain, count, seed)
    zs = [real_to_complex(x) for x in sample.cloud.points]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(lambda z: levi_restricted(domain, z, delta), zs))
    else:
        reports = [levi_restricted(domain, z, delta) for z in zs]
    return sample, reports


@dataclass
class FlaggedCloud:
    """Boundary sample with per-point strictness flags for one q."""

    points: np.ndarray  # (m, 2N)
    flags: np.ndarray  # bool, strictly q-pc
    closure: np.ndarray  # bool, unflagged but within closure radius of a flag
    reports: list[LeviReport]
    q: int

    @property
    def flagged_points(self) -> np.ndarray:
        return self.points[self.flags]

    def covered(self) -> np.ndarray:
        return self.flags | self.closure


def strict_q_set(
    domain: DefiningDomain, q: int, count: int, seed: int = 0,
    delta: Optional[float] = None, jobs: int = 1,
) -> FlaggedCloud:
    """Desk approximation of the strictly q-pseudoconvex boundary set.

    The flagged subset approximates the open strict set; unflagged samples
    within twice the mean nearest-neighbor spacing of a flagged one are
    tagged as closure points, so flags+closure approximates the closed
    Shilov set.
    """
    sample, reports = analyze_boundary(domain, count, seed, delta, jobs)
    pts = sample.cloud.points
    flags = np.array([r.strictly_q_pc(q) for r in reports], dtype=bool)
    closure = np.zeros(len(pts), dtype=bool)
    if len(pts) >= 2 and flags.any() and not flags.all():
        tree = cKDTree(pts)
        nn, _ = tree.query(pts, k=2)
        radius = 2.0 * float(np.mean(nn[:, 1]))
        flag_tree = cKDTree(pts[flags])
        dist, _ = flag_tree.query(pts[~flags], k=1)
        idx = np.nonzero(~flags)[0]
        closure[idx[dist <= radius]] = True
    return FlaggedCloud(points=pts, flags=flags, closure=closure, reports=reports, q=q)


def foliation_direction(
    domain: DefiningDomain, p: np.ndarray, q: int, delta: Optional[float] = None
) -> np.ndarray:
    """Complex q-dimensional Levi kernel at p, rows in ambient coordinates.

    Requires the restricted spectrum to show exactly N-q-1 eigenvalues
    above delta, q inside [-delta, delta] and none below; the kernel
    eigenvectors pull back through the tangent basis.
    """
    report = levi_restricted(domain, p, delta)
    eig = report.restricted.eigenvalues
    d = report.delta
    zeros = np.abs(eig) <= d
    if report.restricted.negative or int(zeros.sum()) != q or \
            int((eig > d).sum()) != domain.n - q - 1:
        raise ProfileError(
            f"spectrum {eig.tolist()} does not match profile "
            f"(expect {q} zeros, {domain.n - q - 1} positives, delta={d})"
        )
    _, vecs = np.linalg.eigh(report.restricted.matrix)
    kernel = vecs[:, zeros]
    ambient = (report.tangent_basis.T @ kernel).T  # rows in C^N
    return ambient


def directed_hausdorff(from_points: np.ndarray, to_points: np.ndarray) -> float:
    """max over ``from_points`` of the distance to ``to_points``."""
    if len(from_points) == 0:
        return 0.0
    if len(to_points) == 0:
        return float("inf")
    tree = cKDTree(to_points)
    dist, _ = tree.query(from_points, k=1)
    return float(dist.max())
