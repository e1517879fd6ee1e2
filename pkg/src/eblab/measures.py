"""Finitely supported measures on state space and domination probes.

Continuous measures enter only through quadrature discretization done by
callers; atoms are plain (weight, state) pairs and duplicates are allowed.
"""

from __future__ import annotations

import numpy as np

from .errors import InvariantViolationError, WindowMismatchError
from .hilbert import (
    EPS_PSD,
    ProductWindow,
    StateOperator,
    min_eigenvalue,
    tensor,
)

WEIGHT_TOL = 1e-12


def _check_weights(weights):
    w = np.asarray(weights, dtype=float)
    if w.size == 0:
        raise InvariantViolationError("measure needs at least one atom")
    if np.any(w <= 0.0):
        raise InvariantViolationError("measure weights must be positive")
    total = float(w.sum())
    if abs(total - 1.0) > WEIGHT_TOL:
        raise InvariantViolationError(
            f"measure weights sum to {total!r}, off unity beyond {WEIGHT_TOL}")
    return w


class StateMeasure:
    """Probability-weighted finite collection of states on one window."""

    def __init__(self, atoms):
        atoms = [(float(w), s) for w, s in atoms]
        self._weights = _check_weights([w for w, _ in atoms])
        states = [s for _, s in atoms]
        window = states[0].window
        for s in states[1:]:
            if s.window != window:
                raise WindowMismatchError("all atoms of a state measure share one window")
        self._states = tuple(states)
        self._window = window

    @property
    def atoms(self):
        return tuple(zip(self._weights.tolist(), self._states))

    @property
    def window(self):
        return self._window


class ProductMeasure:
    """Finite measure on pairs (left state, right state)."""

    def __init__(self, atoms):
        atoms = [(float(w), l, r) for w, l, r in atoms]
        self._weights = _check_weights([w for w, _, _ in atoms])
        lefts = [l for _, l, _ in atoms]
        rights = [r for _, _, r in atoms]
        for l in lefts[1:]:
            if l.window != lefts[0].window:
                raise WindowMismatchError("all left atoms share one window")
        for r in rights[1:]:
            if r.window != rights[0].window:
                raise WindowMismatchError("all right atoms share one window")
        self._lefts = tuple(lefts)
        self._rights = tuple(rights)

    @property
    def atoms(self):
        return tuple(zip(self._weights.tolist(), self._lefts, self._rights))

    @property
    def left_window(self):
        return self._lefts[0].window

    @property
    def right_window(self):
        return self._rights[0].window


def barycenter(measure):
    """Weighted average state of a StateMeasure."""
    total = sum(w * s.entries for w, s in measure.atoms)
    return StateOperator(measure.window, total)


def separable_from_measure(measure):
    """Assemble sum_a w_a (left_a x right_a); separable by construction."""
    total = sum(w * tensor(l, r).entries for w, l, r in measure.atoms)
    window = ProductWindow(measure.left_window, measure.right_window)
    return StateOperator(window, total)


def product_bound_probe(rho, alpha, beta, tol=1e-10):
    """Largest eps with rho - eps |alpha><alpha| x |beta><beta| positive.

    Positivity means minimum eigenvalue >= -EPS_PSD; the answer is located
    by bisection on [0, 1] to absolute tolerance tol, and results at the
    tolerance floor report as 0 (no domination). This is a necessary-
    condition diagnostic only: a positive value certifies domination by
    the given pure product state, a zero proves nothing beyond it.
    """
    w = rho.window
    if not isinstance(w, ProductWindow):
        raise WindowMismatchError("probe needs a state on a product window")
    if w.left != alpha.window or w.right != beta.window:
        raise WindowMismatchError("candidate vectors must match the product factors")
    v = np.kron(alpha.amplitudes, beta.amplitudes)
    projector = np.outer(v, v.conj())
    m = rho.entries

    def feasible(eps):
        return min_eigenvalue(m - eps * projector) >= -EPS_PSD

    if feasible(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo if lo > 1.5 * tol else 0.0


def fourier_necessary_check(phi, alpha, tol=1e-12):
    """True when |alpha_k| <= |phi_k| + tol for every mode.

    Necessary (never sufficient) for phi's orbit average to dominate a
    product state built on alpha. Accepts PureVector or raw amplitude
    arrays; windows must agree when both carry one.
    """
    pa = phi.amplitudes if hasattr(phi, "amplitudes") else np.asarray(phi, dtype=complex)
    aa = alpha.amplitudes if hasattr(alpha, "amplitudes") else np.asarray(alpha, dtype=complex)
    if hasattr(phi, "window") and hasattr(alpha, "window") and phi.window != alpha.window:
        raise WindowMismatchError("vectors live on different windows")
    if pa.shape != aa.shape:
        raise WindowMismatchError("amplitude vectors differ in length")
    return bool(np.all(np.abs(aa) <= np.abs(pa) + tol))
