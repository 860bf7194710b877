# GoracleSL.py
# V1: Double-precision ground truth for small n.
"""
Independent low-precision checks of the structured pipeline.

f_n is evaluated straight from its definition,

    f_n(x) = sum_i x_i + sum_{1<=i<=j<=n} prod_{k=i..j} 1/x_k,

with an O(n^2) double loop. The change of variables x_1 = 1/u_1,
x_j = (1 + u_{j-1})/u_j turns it into the O(n) sum

    g_n(u) = sum_{j=1..n} u_j + (1 + u_{j-1})/u_j,   u_0 = 0,

which `minimize_direct` minimizes by damped Newton steps on its tridiagonal
Hessian.
"""
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import solve_banded
from scipy.optimize import minimize_scalar

from GnumericsSL import DomainError

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
MAX_NEWTON_ITERATIONS = 100
MAX_N = 12


# --- Vectors ---

@dataclass(frozen=True)
class XVector:
    """Positive vector (x_1, ..., x_n)."""
    x: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.x, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("x must be a non-empty 1-D vector")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            bad = int(np.argmax(~(np.isfinite(arr) & (arr > 0))))
            raise DomainError(f"x components must be positive, x[{bad + 1}]={arr[bad]}",
                              step=bad + 1, value=arr[bad])
        arr.setflags(write=False)
        object.__setattr__(self, "x", arr)

    @property
    def n(self):
        return self.x.size


@dataclass(frozen=True)
class UVector:
    """(u_0, u_1, ..., u_n) with u_0 = 0 and the rest positive."""
    u: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.u, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("u must hold u_0 and at least one more component")
        if arr[0] != 0:
            raise ValueError(f"u_0 must be 0, got {arr[0]}")
        interior = arr[1:]
        if not np.all(np.isfinite(interior)) or np.any(interior <= 0):
            bad = int(np.argmax(~(np.isfinite(interior) & (interior > 0)))) + 1
            raise DomainError(f"u components must be positive, u[{bad}]={arr[bad]}",
                              step=bad, value=arr[bad])
        arr.setflags(write=False)
        object.__setattr__(self, "u", arr)

    @property
    def n(self):
        return self.u.size - 1

    @classmethod
    def from_interior(cls, interior):
        return cls(np.concatenate(([0.0], np.asarray(interior, dtype=float))))


def random_xvector(n, rng, low=0.1, high=10.0):
    """Log-uniform positive vector for property checks."""
    return XVector(np.exp(rng.uniform(np.log(low), np.log(high), size=n)))


# --- Objectives ---

def f_n(xv):
    x = xv.x
    total = float(np.sum(x))
    recip = 1.0 / x
    for i in range(x.size):
        total += float(np.sum(np.cumprod(recip[i:])))
    return total


def g_n(uv):
    u = uv.u
    return float(np.sum(u[1:] + (1.0 + u[:-1]) / u[1:]))


def x_to_u(xv):
    x = xv.x
    u = np.zeros(x.size + 1)
    for j in range(1, x.size + 1):
        u[j] = (1.0 + u[j - 1]) / x[j - 1]
    return UVector(u)


def u_to_x(uv):
    u = uv.u
    return XVector((1.0 + u[:-1]) / u[1:])


# --- Derivatives of g_n in the interior coordinates u_1..u_n ---

def grad_g(uv):
    u = uv.u
    v = u[1:]
    grad = 1.0 - (1.0 + u[:-1]) / v ** 2
    grad[:-1] += 1.0 / v[1:]
    return grad


def criteq_residuals(uv):
    """Critical-point equations of g_n; zero at the minimizer."""
    return grad_g(uv)


def hess_g_banded(uv):
    """Tridiagonal Hessian in the (1, 1) banded layout used by solve_banded."""
    u = uv.u
    v = u[1:]
    n = v.size
    ab = np.zeros((3, n))
    ab[1] = 2.0 * (1.0 + u[:-1]) / v ** 3
    off = -1.0 / v[1:] ** 2
    ab[0, 1:] = off
    ab[2, :-1] = off
    return ab


def search_box(n):
    """Cube (3n-1)^-1 <= u_j <= 3n-1 that contains the minimizer."""
    return 1.0 / (3 * n - 1), float(3 * n - 1)


# --- Minimization ---

class DirectMinimum(NamedTuple):
    x: XVector
    value: float
    u: UVector
    gradient_norm: float
    iterations: int
    converged: bool


def _g_interior(v):
    prev = np.concatenate(([0.0], v[:-1]))
    return float(np.sum(v + (1.0 + prev) / v))


def _coordinate_sweep(v, lo, hi, sweeps=3):
    """Bounded scalar minimization along each coordinate in turn."""
    v = v.copy()
    for _ in range(sweeps):
        for j in range(v.size):
            def along(t, j=j):
                w = v.copy()
                w[j] = t
                return _g_interior(w)
            res = minimize_scalar(along, bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-12})
            v[j] = res.x
    return v


def minimize_direct(n, tol=DEFAULT_TOL, max_iter=MAX_NEWTON_ITERATIONS):
    """
    Minimize g_n from u = (0, 1, ..., 1) and map the result back to x.

    Newton steps are backtracked to keep the iterate inside the search box and
    to decrease g_n. When a step cannot make progress the iterate gets a
    round of coordinate-wise bounded minimization before Newton resumes.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > MAX_N:
        log.warning(f"minimize_direct(n={n}) is outside the double precision regime (n <= {MAX_N}).")
    lo, hi = search_box(n)
    v = np.ones(n)
    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        uv = UVector.from_interior(v)
        grad = grad_g(uv)
        if np.max(np.abs(grad)) < tol:
            converged = True
            break
        step = None
        try:
            step = solve_banded((1, 1), hess_g_banded(uv), -grad)
        except (np.linalg.LinAlgError, ValueError) as e:
            log.debug(f"Newton solve failed at iteration {iterations}: {e}")
        slope = float(grad @ step) if step is not None and np.all(np.isfinite(step)) else 0.0
        accepted = False
        if slope < 0:
            current = _g_interior(v)
            t = 1.0
            while t > 1e-10:
                cand = v + t * step
                if np.all(cand >= lo) and np.all(cand <= hi) and \
                        _g_interior(cand) <= current + 1e-4 * t * slope:
                    v, accepted = cand, True
                    break
                t *= 0.5
        if not accepted:
            log.debug(f"Newton stalled at iteration {iterations}; coordinate sweep.")
            v = _coordinate_sweep(v, lo, hi)

    uv = UVector.from_interior(v)
    gnorm = float(np.max(np.abs(grad_g(uv))))
    if not converged:
        converged = gnorm < tol
    if not converged:
        log.warning(f"minimize_direct(n={n}) hit the iteration cap; gradient norm {gnorm:.3e}.")
    xv = u_to_x(uv)
    return DirectMinimum(xv, f_n(xv), uv, gnorm, iterations, converged)

# === End of GoracleSL.py ===
