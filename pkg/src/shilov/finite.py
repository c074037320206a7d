"""Exact Shilov boundaries for finite families of tabulated functions.

A finite Hausdorff space is discrete, so every tabulated function is upper
semi-continuous and every subset is closed.  Boundary computations then
reduce to exact set combinatorics over maximizer sets.  Values are extended
reals: ordinary floats plus the bottom element ``-inf`` (a function that is
identically ``-inf`` attains its maximum everywhere).

All operations are pure functions of immutable inputs and are safe to call
concurrently.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import InputError

NEG_INF = float("-inf")


def _check_ext_real(v: float, where: str) -> float:
    v = float(v)
    if math.isnan(v) or v == math.inf:
        raise InputError(f"{where}: values must be finite reals or -inf, got {v!r}")
    return v


@dataclass(frozen=True)
class FiniteSpace:
    """Finite discrete space given by an ordered tuple of distinct point ids."""

    points: tuple[str, ...]

    def __post_init__(self):
        if not self.points:
            raise InputError("space must contain at least one point")
        if len(set(self.points)) != len(self.points):
            raise InputError("point identifiers must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.points)

    def as_set(self) -> frozenset[str]:
        return frozenset(self.points)


@dataclass(frozen=True)
class TabFunction:
    """Total extended-real function table on a finite space."""

    space: FiniteSpace
    values: tuple[float, ...]
    name: str = ""

    def __post_init__(self):
        if len(self.values) != len(self.space):
            raise InputError(
                f"function {self.name!r}: {len(self.values)} values for "
                f"{len(self.space)} points"
            )
        object.__setattr__(
            self,
            "values",
            tuple(_check_ext_real(v, f"function {self.name!r}") for v in self.values),
        )

    def value_at(self, point: str) -> float:
        return self.values[self.space.points.index(point)]


@dataclass(frozen=True)
class Family:
    """Finite family of tabulated functions on one shared space; may be empty."""

    space: FiniteSpace
    members: tuple[TabFunction, ...] = ()
    name: str = ""

    def __post_init__(self):
        for f in self.members:
            if f.space.points != self.space.points:
                raise InputError(
                    f"family {self.name!r}: member {f.name!r} lives on a different space"
                )


@dataclass(frozen=True)
class BoundaryReport:
    """Shilov set, peak set, minimal boundary (if it exists) and boundary flag."""

    shilov: frozenset[str]
    peaks: frozenset[str]
    minimal: Optional[frozenset[str]]
    shilov_is_boundary: bool

    def to_json(self) -> dict:
        return {
            "shilov": sorted(self.shilov),
            "peaks": sorted(self.peaks),
            "minimal": sorted(self.minimal) if self.minimal is not None else None,
            "shilov_is_boundary": self.shilov_is_boundary,
        }


def max_set(f: TabFunction) -> frozenset[str]:
    """All points attaining ``max f``; never empty (``-inf`` maxima count too)."""
    top = max(f.values)
    return frozenset(p for p, v in zip(f.space.points, f.values) if v == top)


def is_boundary(points: Iterable[str], family: Family) -> bool:
    """True iff the set meets every member's maximizer set.

    Vacuously true for the empty family (any set, including the empty one,
    is then a boundary).
    """
    s = frozenset(points)
    stray = s - family.space.as_set()
    if stray:
        raise InputError(f"points not in the space: {sorted(stray)}")
    return all(s & max_set(f) for f in family.members)


def peak_points(family: Family) -> frozenset[str]:
    """Points at which some member attains its maximum uniquely."""
    peaks = set()
    for f in family.members:
        m = max_set(f)
        if len(m) == 1:
            peaks |= m
    return frozenset(peaks)


def shilov_boundary(family: Family) -> frozenset[str]:
    """Intersection of all closed boundaries for the family.

    On a finite discrete space a point lies in every boundary exactly when
    deleting it breaks some maximizer set, i.e. when some member peaks
    there; so the intersection equals the peak set.  (Exhaustive subset
    enumeration in the test suite guards this identity.)
    """
    return peak_points(family)


def minimal_boundary(family: Family) -> Optional[frozenset[str]]:
    """The boundary contained in every boundary, or ``None`` if none exists.

    The peak set lies inside every boundary, and any minimal boundary must
    consist of peak points only (a non-peak point can always be dropped).
    Hence the minimal boundary exists iff the peak set is itself a
    boundary, in which case it equals the peak set.
    """
    peaks = peak_points(family)
    if is_boundary(peaks, family):
        return peaks
    return None


def analyze(family: Family) -> BoundaryReport:
    """Full boundary report for one family."""
    shilov = shilov_boundary(family)
    return BoundaryReport(
        shilov=shilov,
        peaks=peak_points(family),
        minimal=minimal_boundary(family),
        shilov_is_boundary=is_boundary(shilov, family),
    )


def generates_topology(family: Family) -> tuple[bool, dict[str, list[dict]]]:
    """Decide whether finite strict sublevel intersections isolate every point.

    The tightest strict sublevel set of ``f`` around ``x`` is
    ``{y : f(y) <= f(x)}`` (realized by any threshold between ``f(x)`` and
    the next larger value).  The family generates the discrete topology iff
    for each ``x`` those sets, intersected over all members, leave ``{x}``.

    Returns ``(flag, witness)`` where the witness maps each isolated point
    to one polyhedron description ``[{"function": ..., "threshold": ...}]``.
    """
    witness: dict[str, list[dict]] = {}
    for idx, x in enumerate(family.space.points):
        candidate = set(family.space.points)
        description = []
        for fi, f in enumerate(family.members):
            fx = f.values[idx]
            level = {p for p, v in zip(family.space.points, f.values) if v <= fx}
            if level == candidate:
                continue  # this member does not shrink the polyhedron
            candidate &= level
            larger = [v for v in f.values if v > fx]
            if fx == NEG_INF:
                threshold = min(larger)  # strict sublevel keeps only -inf points
            else:
                threshold = fx + (min(larger) - fx) / 2.0
            description.append(
                {"function": f.name or f"f{fi}", "threshold": threshold}
            )
        if candidate != {x}:
            return False, {}
        if not description and len(family.space) == 1:
            # singleton space: any member (or none) isolates the point
            description = [{"function": "<any>", "threshold": 1.0}]
        witness[x] = description
    return True, witness


def decreasing_limit_max(
    seq: Sequence[TabFunction],
) -> tuple[TabFunction, list[float]]:
    """Pointwise limit of a non-increasing sequence plus the max trace.

    The sequence must be pointwise non-increasing; violations are reported
    with the offending index and point.  For a finite sequence the limit is
    its last element, and the last trace entry equals the limit's maximum.
    """
    if not seq:
        raise InputError("sequence must be non-empty")
    space = seq[0].space
    for n in range(1, len(seq)):
        if seq[n].space.points != space.points:
            raise InputError(f"sequence member {n} lives on a different space")
        for p, prev, cur in zip(space.points, seq[n - 1].values, seq[n].values):
            if cur > prev:
                raise InputError(
                    f"sequence not non-increasing at index {n}, point {p!r}: "
                    f"{prev} -> {cur}"
                )
    trace = [max(f.values) for f in seq]
    return seq[-1], trace


def union_shilov(families: Sequence[Family]) -> frozenset[str]:
    """Shilov boundary of a concatenation of families.

    Every sub-family's Shilov set must itself be a boundary for that
    sub-family (validated); the result then equals the union of the
    per-family Shilov sets, which is what concatenation computes exactly on
    finite spaces.
    """
    if not families:
        raise InputError("need at least one family")
    space = families[0].space
    members: list[TabFunction] = []
    for j, fam in enumerate(families):
        if fam.space.points != space.points:
            raise InputError(f"family {fam.name or j} lives on a different space")
        if not is_boundary(shilov_boundary(fam), fam):
            raise InputError(
                f"family {fam.name or j}: its Shilov set is not a boundary for it"
            )
        members.extend(fam.members)
    return shilov_boundary(Family(space=space, members=tuple(members)))


# ---------------------------------------------------------------------------
# JSON interface


def family_from_json(doc: dict | str) -> Family:
    """Parse ``{"points": [...], "functions": [{"name", "values"}]}``.

    Values may be numbers or the string ``"-inf"``; each values array must
    align with the points array.
    """
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise InputError(f"invalid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise InputError("top-level document must be an object")
    if "points" not in doc:
        raise InputError("missing key: points")
    pts = doc["points"]
    if not isinstance(pts, list) or not all(isinstance(p, str) for p in pts):
        raise InputError("points: must be an array of strings")
    space = FiniteSpace(points=tuple(pts))
    functions = doc.get("functions", [])
    if not isinstance(functions, list):
        raise InputError("functions: must be an array")
    members = []
    for i, spec in enumerate(functions):
        if not isinstance(spec, dict) or "values" not in spec:
            raise InputError(f"functions[{i}]: object with a values array required")
        raw = spec["values"]
        if not isinstance(raw, list) or len(raw) != len(pts):
            raise InputError(
                f"functions[{i}].values: expected {len(pts)} entries, "
                f"got {len(raw) if isinstance(raw, list) else type(raw).__name__}"
            )
        vals = []
        for j, v in enumerate(raw):
            if v == "-inf":
                vals.append(NEG_INF)
            elif isinstance(v, (int, float)) and not isinstance(v, bool):
                vals.append(float(v))
            else:
                raise InputError(
                    f"functions[{i}].values[{j}]: number or \"-inf\" required"
                )
        members.append(
            TabFunction(space=space, values=tuple(vals), name=str(spec.get("name", f"f{i}")))
        )
    return Family(space=space, members=tuple(members), name=str(doc.get("name", "")))
