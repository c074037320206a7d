"""Regularized maximum via tensor-product quadrature against a bump kernel.

The smoothing kernel is the even bump ``theta(s) = c * exp(-1/(1-s^2))`` on
(-1, 1).  Its normalization constant is fixed by the same Gauss-Legendre
rule used for the integral itself, so per-axis weights sum to one exactly
and the single-argument identity ``M_(eps)(t) = t`` holds to machine
precision by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import GluingError, InputError
from .fields import ScalarField
from .hessian import qpsh_index

MAX_ARGS = 6
_MAX_GRID = 20_000_000


@lru_cache(maxsize=32)
def kernel_rule(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-axis quadrature nodes and normalized bump-weighted weights."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    bump = np.exp(-1.0 / (1.0 - x**2))
    wk = w * bump
    return x, wk / wk.sum()


@dataclass(frozen=True)
class RegMaxParams:
    """Smoothing widths and quadrature resolution for one evaluation."""

    epsilons: tuple[float, ...]
    nodes: int = 32

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilons)
        object.__setattr__(self, "epsilons", eps)
        if not eps:
            raise InputError("need at least one smoothing width")
        if any(e <= 0 for e in eps):
            raise InputError(f"smoothing widths must be positive, got {eps}")
        if len(eps) > MAX_ARGS:
            raise InputError(f"at most {MAX_ARGS} arguments supported, got {len(eps)}")
        if self.nodes < 8:
            raise InputError("need at least 8 quadrature nodes per axis")
        if self.nodes ** len(eps) > _MAX_GRID:
            raise InputError(
                f"tensor grid {self.nodes}^{len(eps)} too large; reduce nodes"
            )


def reg_max(t: Sequence[float], params: RegMaxParams) -> float:
    """Kernel-smoothed maximum of the tuple ``t``.

    Monotone and convex in ``t``, sandwiched between ``max t_j`` and
    ``max (t_j + eps_j)``, and insensitive to coordinates dominated by more
    than the width gap.
    """
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or t.size != len(params.epsilons):
        raise InputError(
            f"got {t.size} values for {len(params.epsilons)} smoothing widths"
        )
    x, w = kernel_rule(params.nodes)
    l = t.size
    acc = None
    weight = None
    for j in range(l):
        shape = [1] * l
        shape[j] = params.nodes
        axis_vals = (t[j] + params.epsilons[j] * x).reshape(shape)
        axis_w = w.reshape(shape)
        acc = axis_vals if acc is None else np.maximum(acc, axis_vals)
        weight = axis_w if weight is None else weight * axis_w
    return float(np.sum(acc * weight))


@dataclass(frozen=True)
class CompositeQpshCheck:
    """Pointwise index of a smoothed maximum against the additive budget."""

    composite_index: int
    budget: int
    satisfied: bool


def compose_reg_max(
    fields: Sequence[ScalarField], params: RegMaxParams, name: str = "reg_max"
) -> ScalarField:
    """Field z -> reg_max(psi_1(z), ..., psi_k(z))."""
    if not fields:
        raise InputError("need at least one field")
    if len(fields) != len(params.epsilons):
        raise InputError("one smoothing width per field required")
    n = fields[0].n
    if any(f.n != n for f in fields) or any(f.complex_valued for f in fields):
        raise InputError("fields must be real-valued on one common C^N")
    box = next((f.box for f in fields if f.box is not None), None)

    def fn(z):
        return reg_max([f(z) for f in fields], params)

    return ScalarField(fn=fn, n=n, step=fields[0].step, box=box, name=name)


def reg_max_field(
    fields_with_q: Sequence[tuple[ScalarField, int]],
    params: RegMaxParams,
    z: np.ndarray,
    tol: float = 1e-6,
) -> tuple[float, CompositeQpshCheck]:
    """Evaluate the smoothed maximum of several fields and audit its index.

    The smoothed maximum of q_j-plurisubharmonic pieces stays within the
    additive budget q_1 + ... + q_k; the check recomputes the composite's
    pointwise index at z and compares.
    """
    fields = [f for f, _ in fields_with_q]
    budget = int(sum(q for _, q in fields_with_q))
    composite = compose_reg_max(fields, params)
    value = composite(np.asarray(z, dtype=complex))
    idx = qpsh_index(composite, z, tol)
    return value, CompositeQpshCheck(
        composite_index=idx, budget=budget, satisfied=idx <= budget
    )


def glue_peak(
    psi: ScalarField,
    c: float,
    eps: float,
    region: Callable[[np.ndarray], bool],
    collar_samples: Sequence[np.ndarray],
    nodes: int = 32,
) -> ScalarField:
    """Flatten a peaked field to the constant ``c`` outside a region.

    Returns the field equal to ``reg_max(psi, c)`` inside the region and to
    ``c`` outside.  At every provided collar sample (points bracketing the
    seam) ``psi`` must stay below ``c - 2*eps``: exactly then the smoothed
    maximum collapses to ``c`` there and the two branches agree to machine
    precision across the seam.  Any peak of ``psi`` above ``c + eps``
    survives gluing, since the smoothed maximum is strictly increasing in
    its first argument on that range.
    """
    if eps <= 0:
        raise InputError("eps must be positive")
    gap = c - 2.0 * eps
    for p in collar_samples:
        v = psi(np.asarray(p, dtype=complex))
        if v >= gap:
            raise GluingError(
                f"collar condition psi < c - 2*eps fails at {p}: "
                f"psi={v}, bound={gap}"
            )
    params = RegMaxParams(epsilons=(eps, eps), nodes=nodes)

    def fn(z):
        z = np.asarray(z, dtype=complex)
        if region(z):
            return reg_max([psi(z), c], params)
        return c

    return ScalarField(fn=fn, n=psi.n, step=psi.step, box=psi.box, name="glued")
