"""Finite-difference Wirtinger calculus: complex Hessians, psh index, rank.

Second-order central stencils on the 2N real coordinates; entries assemble
via

    u_{z_k zbar_l} = 1/4 [ (u_{x_k x_l} + u_{y_k y_l})
                           + i (u_{x_k y_l} - u_{y_k x_l}) ].

The assembled matrix is averaged with its conjugate transpose before the
eigendecomposition, so the stored matrix is exactly Hermitian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .fields import ScalarField, complex_to_real, real_to_complex


@dataclass(frozen=True)
class HermitianSpectrum:
    """Hermitian matrix with its eigenvalues and signature counts under tol."""

    matrix: np.ndarray
    eigenvalues: np.ndarray  # ascending
    tol: float
    counts: tuple[int, int, int]  # (negative, zero, positive)

    @property
    def negative(self) -> int:
        return self.counts[0]

    @property
    def zero(self) -> int:
        return self.counts[1]

    @property
    def positive(self) -> int:
        return self.counts[2]


def spectrum_of(matrix: np.ndarray, tol: float) -> HermitianSpectrum:
    """Symmetrize, decompose and count eigenvalue signs under ``tol``."""
    if tol <= 0:
        raise InputError("spectral tolerance must be positive")
    h = np.asarray(matrix, dtype=complex)
    h = (h + h.conj().T) / 2.0
    eig = np.linalg.eigvalsh(h)
    neg = int(np.sum(eig < -tol))
    pos = int(np.sum(eig > tol))
    return HermitianSpectrum(
        matrix=h, eigenvalues=eig, tol=tol,
        counts=(neg, len(eig) - neg - pos, pos),
    )


def _second_partials(field: ScalarField, x: np.ndarray) -> np.ndarray:
    """Full (2N x 2N) table of real second partials at real point x."""
    h = field.step
    m = x.size
    f0 = field(real_to_complex(x))
    out = np.empty((m, m), dtype=complex if field.complex_valued else float)
    for i in range(m):
        e = np.zeros(m)
        e[i] = h
        out[i, i] = (field(real_to_complex(x + e)) - 2.0 * f0
                     + field(real_to_complex(x - e))) / h**2
    for i in range(m):
        ei = np.zeros(m)
        ei[i] = h
        for j in range(i + 1, m):
            ej = np.zeros(m)
            ej[j] = h
            v = (field(real_to_complex(x + ei + ej))
                 - field(real_to_complex(x + ei - ej))
                 - field(real_to_complex(x - ei + ej))
                 + field(real_to_complex(x - ei - ej))) / (4.0 * h**2)
            out[i, j] = v
            out[j, i] = v
    return out


def raw_complex_hessian(field: ScalarField, z: np.ndarray) -> np.ndarray:
    """Assembled (u_{z_k zbar_l}) matrix before symmetrization."""
    z = field.check_point(z)
    x = complex_to_real(z)
    d2 = _second_partials(field, x)
    n = field.n
    xs, ys = slice(0, 2 * n, 2), slice(1, 2 * n, 2)
    dxx, dyy = d2[xs, xs], d2[ys, ys]
    dxy, dyx = d2[xs, ys], d2[ys, xs]
    return 0.25 * ((dxx + dyy) + 1j * (dxy - dyx))


def complex_hessian(field: ScalarField, z: np.ndarray, tol: float = 1e-6) -> HermitianSpectrum:
    """Complex Hessian spectrum of a real-valued field at z."""
    return spectrum_of(raw_complex_hessian(field, z), tol)


def qpsh_index(field: ScalarField, z: np.ndarray, tol: float = 1e-6) -> int:
    """Number of Hessian eigenvalues below ``-tol``.

    This is the least q for which the field passes the pointwise
    q-plurisubharmonicity test at z (at least N - q non-negative
    eigenvalues of the complex Hessian).
    """
    return complex_hessian(field, z, tol).negative


def is_strictly_qpsh(spectrum: HermitianSpectrum, q: int, delta: float) -> bool:
    """Strictness test: the (N-q)-th smallest eigenvalue exceeds ``delta``."""
    n = spectrum.eigenvalues.size
    if q >= n:
        return True
    return bool(spectrum.eigenvalues[q] > delta)


def wirtinger_gradients(field: ScalarField, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """First-order Wirtinger derivatives (f_{z_k}, f_{zbar_k}) at z."""
    z = field.check_point(z)
    x = complex_to_real(z)
    h = field.step
    m = x.size
    grad = np.empty(m, dtype=complex)
    for i in range(m):
        e = np.zeros(m)
        e[i] = h
        grad[i] = (field(real_to_complex(x + e)) - field(real_to_complex(x - e))) / (2.0 * h)
    dz = 0.5 * (grad[0::2] - 1j * grad[1::2])
    dzbar = 0.5 * (grad[0::2] + 1j * grad[1::2])
    return dz, dzbar


def bordered_matrix(field: ScalarField, z: np.ndarray) -> np.ndarray:
    """Anti-holomorphic gradient row stacked over the complex Hessian."""
    _, dzbar = wirtinger_gradients(field, z)
    hess = raw_complex_hessian(field, z)
    return np.vstack([dzbar[np.newaxis, :], hess])


def qholo_rank(field: ScalarField, z: np.ndarray, tol: float = 1e-6) -> int:
    """Numeric rank of the bordered (N+1) x N matrix at z.

    Singular values above ``tol * max(largest, 1)`` count; a rank of at
    most q certifies the pointwise q-holomorphy test.
    """
    m = bordered_matrix(field, z)
    sv = np.linalg.svd(m, compute_uv=False)
    threshold = tol * max(float(sv[0]) if sv.size else 0.0, 1.0)
    return int(np.sum(sv > threshold))
