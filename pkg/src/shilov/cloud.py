"""Point clouds: the common exchange type between modules.

CSV layout: one row per point, coordinate columns named x1,y1,...,xN,yN,
then any integer tag columns (face_id, flags).  Floats are written with 17
significant digits so files are byte-reproducible.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InputError


@dataclass
class PointCloud:
    points: np.ndarray  # (m, d) real coordinates
    provenance: str = ""
    labels: Optional[np.ndarray] = None  # per-point integer tag (face id)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        if self.points.ndim != 2:
            raise InputError(f"points must be a 2-d array, got shape {self.points.shape}")
        if not np.all(np.isfinite(self.points)):
            raise InputError("cloud coordinates must be finite")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=int)
            if self.labels.shape != (len(self.points),):
                raise InputError("labels must align with points")

    @property
    def ambient_real_dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return len(self.points)


def coordinate_columns(d: int) -> list[str]:
    return [("x" if k % 2 == 0 else "y") + str(k // 2 + 1) for k in range(d)]


def cloud_to_csv(cloud: PointCloud, extra: Optional[dict[str, np.ndarray]] = None) -> str:
    cols = coordinate_columns(cloud.ambient_real_dim)
    tags: list[tuple[str, np.ndarray]] = []
    if cloud.labels is not None:
        tags.append(("face_id", cloud.labels))
    for name, values in (extra or {}).items():
        tags.append((name, np.asarray(values)))
    buf = io.StringIO()
    buf.write(",".join(cols + [t[0] for t in tags]) + "\n")
    for i in range(len(cloud)):
        row = [format(v, ".17g") for v in cloud.points[i]]
        for _, values in tags:
            v = values[i]
            row.append(str(int(v)) if np.issubdtype(values.dtype, np.integer) else format(v, ".17g"))
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def cloud_from_csv(text: str, provenance: str = "csv") -> PointCloud:
    lines = [ln for ln in text.strip().splitlines() if ln]
    if not lines:
        raise InputError("empty CSV")
    header = lines[0].split(",")
    coord_idx = [i for i, h in enumerate(header) if h and h[0] in "xy" and h[1:].isdigit()]
    if not coord_idx:
        raise InputError("no coordinate columns (x1,y1,...) in CSV header")
    label_idx = header.index("face_id") if "face_id" in header else None
    pts, labels = [], []
    for ln in lines[1:]:
        cells = ln.split(",")
        pts.append([float(cells[i]) for i in coord_idx])
        if label_idx is not None:
            labels.append(int(float(cells[label_idx])))
    return PointCloud(
        points=np.asarray(pts),
        provenance=provenance,
        labels=np.asarray(labels, dtype=int) if labels else None,
    )
