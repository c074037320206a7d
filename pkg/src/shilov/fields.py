"""Scalar fields on C^N and the built-in field registry.

Points travel on the wire as 2N reals laid out ``(x1, y1, ..., xN, yN)``
with ``z_k = x_k + i*y_k``; in memory they are complex vectors of length N.
Field evaluators take a complex vector and return a float (real-valued
fields) or a complex number.  Evaluators must tolerate concurrent calls.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, EvaluationError, InputError


def real_to_complex(x: np.ndarray) -> np.ndarray:
    """(x1, y1, ..., xN, yN) -> complex vector of length N."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size % 2:
        raise InputError(f"real coordinate vector must have even length, got {x.shape}")
    return x[0::2] + 1j * x[1::2]


def complex_to_real(z: np.ndarray) -> np.ndarray:
    """Complex vector of length N -> (x1, y1, ..., xN, yN)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(2 * z.size, dtype=float)
    out[0::2] = z.real
    out[1::2] = z.imag
    return out


@dataclass
class ScalarField:
    """Evaluator plus finite-difference metadata.

    ``box`` is an optional (2N, 2) array of per-real-axis bounds; the
    evaluator is assumed defined on the box inflated by ``2*step``, so a
    stencil centered at any in-box point stays valid.
    """

    fn: Callable[[np.ndarray], complex]
    n: int
    step: float = 1e-3
    box: Optional[np.ndarray] = None
    complex_valued: bool = False
    name: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise InputError("complex dimension must be >= 1")
        if self.step <= 0:
            raise InputError("finite-difference step must be positive")
        if self.box is not None:
            self.box = np.asarray(self.box, dtype=float).reshape(2 * self.n, 2)

    def check_point(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex).reshape(self.n)
        if self.box is not None:
            x = complex_to_real(z)
            low, high = self.box[:, 0], self.box[:, 1]
            if np.any(x < low) or np.any(x > high):
                bad = int(np.argmax((x < low) | (x > high)))
                raise DomainError(
                    f"field {self.name!r}: real axis {bad} value {x[bad]} outside "
                    f"[{low[bad]}, {high[bad]}]"
                )
        return z

    def __call__(self, z: np.ndarray) -> complex:
        v = self.fn(np.asarray(z, dtype=complex))
        if not np.isfinite(v if self.complex_valued else float(np.real_if_close(v))):
            raise EvaluationError(f"field {self.name!r}: non-finite value at {z}")
        return v if self.complex_valued else float(np.real(v))


def _sqnorm(z):
    return float(np.sum(np.abs(z) ** 2))


# Registry factories.  Each takes keyword parameters and returns a ScalarField.

def _make_sqnorm(n=2, coeffs=None, step=1e-3):
    c = np.ones(n) if coeffs is None else np.asarray(coeffs, dtype=float)
    return ScalarField(
        fn=lambda z: float(np.sum(c * np.abs(z) ** 2)),
        n=n, step=step, name="sqnorm",
    )


def _make_one_plus_sqnorm(n=2, step=1e-3):
    return ScalarField(fn=lambda z: 1.0 + _sqnorm(z), n=n, step=step, name="one_plus_sqnorm")


def _make_neg_sqnorm(n=2, step=1e-3):
    return ScalarField(fn=lambda z: -_sqnorm(z), n=n, step=step, name="neg_sqnorm")


def _make_re_poly(n=2, step=1e-3):
    # Re(z1^2): pluriharmonic, complex Hessian vanishes identically.
    return ScalarField(fn=lambda z: float((z[0] ** 2).real), n=n, step=step, name="re_poly")


def _make_antiholo(n=2, step=1e-3):
    return ScalarField(
        fn=lambda z: complex(np.conj(z[0])), n=n, step=step,
        complex_valued=True, name="antiholo",
    )


def _make_holo_prod(n=2, step=1e-3):
    return ScalarField(
        fn=lambda z: complex(z[0] * z[1]), n=n, step=step,
        complex_valued=True, name="holo_prod",
    )


def _make_singular_nh(n=2, step=1e-3):
    # (conj(z1)+...+conj(zN)) / |z|^2: smooth away from the origin only.
    def fn(z):
        return complex(np.sum(np.conj(z)) / np.sum(np.abs(z) ** 2))

    return ScalarField(fn=fn, n=n, step=step, complex_valued=True, name="singular_nh")


def _make_ball(n=2, radius=1.0, step=1e-3):
    r2 = float(radius) ** 2
    return ScalarField(fn=lambda z: _sqnorm(z) - r2, n=n, step=step, name="ball")


def _make_ellipsoid(n=2, coeffs=(1.0, 4.0), step=1e-3):
    c = np.asarray(coeffs, dtype=float)
    if c.size != n or np.any(c <= 0):
        raise InputError("ellipsoid needs one positive coefficient per variable")
    return ScalarField(
        fn=lambda z: float(np.sum(c * np.abs(z) ** 2) - 1.0),
        n=n, step=step, name="ellipsoid",
    )


def _make_quartic(step=1e-3):
    # |z1|^4 + |z2|^2 - 1: boundary flat to fourth order along z1 = 0.
    return ScalarField(
        fn=lambda z: float(abs(z[0]) ** 4 + abs(z[1]) ** 2 - 1.0),
        n=2, step=step, name="quartic",
    )


def _make_nonparallel_quadric(slack=0.0, radius=3.0, step=1e-3):
    # (Re z2)^2 - (Re z1)(Re z3), optionally bounded by a small |z|^2 slack.
    s, r2 = float(slack), float(radius) ** 2

    def fn(z):
        x = z.real
        v = x[1] ** 2 - x[0] * x[2]
        if s:
            v += s * (float(np.sum(np.abs(z) ** 2)) - r2)
        return float(v)

    return ScalarField(fn=fn, n=3, step=step, name="nonparallel_quadric")


FIELD_REGISTRY: dict[str, Callable[..., ScalarField]] = {
    "sqnorm": _make_sqnorm,
    "one_plus_sqnorm": _make_one_plus_sqnorm,
    "neg_sqnorm": _make_neg_sqnorm,
    "re_poly": _make_re_poly,
    "antiholo": _make_antiholo,
    "holo_prod": _make_holo_prod,
    "singular_nh": _make_singular_nh,
    "ball": _make_ball,
    "ellipsoid": _make_ellipsoid,
    "quartic": _make_quartic,
    "nonparallel_quadric": _make_nonparallel_quadric,
}


def make_field(name: str, **params) -> ScalarField:
    """Instantiate a registry field by name."""
    try:
        factory = FIELD_REGISTRY[name]
    except KeyError:
        raise InputError(
            f"unknown field {name!r}; available: {sorted(FIELD_REGISTRY)}"
        ) from None
    try:
        return factory(**params)
    except TypeError as e:
        raise InputError(f"field {name!r}: bad parameters ({e})") from e
