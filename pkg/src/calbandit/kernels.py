"""Hot numeric kernels: SPD solves, UCB index scoring, rank-1 updates.

Every kernel exists in two variants: a numba ``@njit`` version and a pure-numpy
version. The active backend is chosen once at import time from the
``CALBANDIT_BACKEND`` environment variable ("numba" or "numpy"); the default is
numba when importable, numpy otherwise. ``benchmarks/bench_kernels.py``
compares the two.

Matrix arguments are stacked per-arm arrays: ``A`` is (K, d, d) C-contiguous,
``b`` and ``X`` are (K, d). All kernels assume float64 and SPD matrices.
"""
from __future__ import annotations

import os

import numpy as np
from scipy.linalg import cho_factor, cho_solve

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False


# ---------------------------------------------------------------------------
# numpy variants
# ---------------------------------------------------------------------------

def _np_solve_spd(A: np.ndarray, y: np.ndarray) -> np.ndarray:
    return cho_solve(cho_factor(A, lower=True), y)


def _np_ucb_scores(A: np.ndarray, b: np.ndarray, X: np.ndarray, alpha: float) -> np.ndarray:
    K = b.shape[0]
    out = np.empty(K)
    for k in range(K):
        factor = cho_factor(A[k], lower=True)
        theta = cho_solve(factor, b[k])
        z = cho_solve(factor, X[k])
        out[k] = X[k] @ theta + alpha * np.sqrt(X[k] @ z)
    return out


def _np_ucb_scores_inv(A_inv: np.ndarray, b: np.ndarray, X: np.ndarray, alpha: float) -> np.ndarray:
    K = b.shape[0]
    out = np.empty(K)
    for k in range(K):
        theta = A_inv[k] @ b[k]
        z = A_inv[k] @ X[k]
        out[k] = X[k] @ theta + alpha * np.sqrt(X[k] @ z)
    return out


def _np_rank1_update(A: np.ndarray, b: np.ndarray, x: np.ndarray, r: float, w: float) -> None:
    # w * (x_i * x_j) is computed identically for (i, j) and (j, i), so the
    # updated A stays exactly symmetric.
    A += w * np.outer(x, x)
    b += (w * r) * x


def _np_sherman_morrison(A_inv: np.ndarray, x: np.ndarray, w: float) -> None:
    u = A_inv @ x
    scale = w / (1.0 + w * (x @ u))
    A_inv -= scale * np.outer(u, u)


# ---------------------------------------------------------------------------
# numba variants
# ---------------------------------------------------------------------------

if HAS_NUMBA:

    @njit(cache=True)
    def _nb_chol_solve(L, y, out):
        # Solves L L^T out = y given the lower Cholesky factor L.
        d = y.shape[0]
        tmp = np.empty(d)
        for i in range(d):
            s = y[i]
            for j in range(i):
                s -= L[i, j] * tmp[j]
            tmp[i] = s / L[i, i]
        for i in range(d - 1, -1, -1):
            s = tmp[i]
            for j in range(i + 1, d):
                s -= L[j, i] * out[j]
            out[i] = s / L[i, i]

    @njit(cache=True)
    def _nb_solve_spd(A, y):
        L = np.linalg.cholesky(A)
        out = np.empty(y.shape[0])
        _nb_chol_solve(L, y, out)
        return out

    @njit(cache=True)
    def _nb_ucb_scores(A, b, X, alpha):
        K, d = b.shape
        out = np.empty(K)
        theta = np.empty(d)
        z = np.empty(d)
        for k in range(K):
            L = np.linalg.cholesky(A[k])
            _nb_chol_solve(L, b[k], theta)
            _nb_chol_solve(L, X[k], z)
            mean = 0.0
            var = 0.0
            for i in range(d):
                mean += X[k, i] * theta[i]
                var += X[k, i] * z[i]
            out[k] = mean + alpha * np.sqrt(var)
        return out

    @njit(cache=True)
    def _nb_ucb_scores_inv(A_inv, b, X, alpha):
        K, d = b.shape
        out = np.empty(K)
        for k in range(K):
            mean = 0.0
            var = 0.0
            for i in range(d):
                ti = 0.0
                zi = 0.0
                for j in range(d):
                    ti += A_inv[k, i, j] * b[k, j]
                    zi += A_inv[k, i, j] * X[k, j]
                mean += X[k, i] * ti
                var += X[k, i] * zi
            out[k] = mean + alpha * np.sqrt(var)
        return out

    @njit(cache=True)
    def _nb_rank1_update(A, b, x, r, w):
        d = x.shape[0]
        wr = w * r
        for i in range(d):
            for j in range(i, d):
                p = w * (x[i] * x[j])
                A[i, j] += p
                if j != i:
                    A[j, i] += p
            b[i] += wr * x[i]

    @njit(cache=True)
    def _nb_sherman_morrison(A_inv, x, w):
        d = x.shape[0]
        u = np.empty(d)
        denom = 1.0
        for i in range(d):
            s = 0.0
            for j in range(d):
                s += A_inv[i, j] * x[j]
            u[i] = s
        for i in range(d):
            denom += w * x[i] * u[i]
        scale = w / denom
        for i in range(d):
            for j in range(i, d):
                p = scale * (u[i] * u[j])
                A_inv[i, j] -= p
                if j != i:
                    A_inv[j, i] -= p


_BACKENDS = {
    "numpy": {
        "solve_spd": _np_solve_spd,
        "ucb_scores": _np_ucb_scores,
        "ucb_scores_inv": _np_ucb_scores_inv,
        "rank1_update": _np_rank1_update,
        "sherman_morrison": _np_sherman_morrison,
    }
}
if HAS_NUMBA:
    _BACKENDS["numba"] = {
        "solve_spd": _nb_solve_spd,
        "ucb_scores": _nb_ucb_scores,
        "ucb_scores_inv": _nb_ucb_scores_inv,
        "rank1_update": _nb_rank1_update,
        "sherman_morrison": _nb_sherman_morrison,
    }


def _default_backend() -> str:
    choice = os.environ.get("CALBANDIT_BACKEND", "").strip().lower()
    if choice:
        if choice not in ("numpy", "numba"):
            raise ValueError(f"CALBANDIT_BACKEND must be 'numpy' or 'numba', got {choice!r}")
        if choice == "numba" and not HAS_NUMBA:
            raise RuntimeError("CALBANDIT_BACKEND=numba but numba is not installed")
        return choice
    return "numba" if HAS_NUMBA else "numpy"


_active = _default_backend()


def active_backend() -> str:
    """Name of the backend currently serving the public kernel functions."""
    return _active


def use_backend(name: str) -> None:
    """Switch the active backend at runtime (mainly for tests/benchmarks)."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {sorted(_BACKENDS)}")
    _active = name


def solve_spd(A: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Solve A x = y for symmetric positive-definite A via Cholesky."""
    return _BACKENDS[_active]["solve_spd"](A, y)


def ucb_scores(A: np.ndarray, b: np.ndarray, X: np.ndarray, alpha: float) -> np.ndarray:
    """Per-arm index x'A^{-1}b + alpha*sqrt(x'A^{-1}x) for stacked arm stats."""
    return _BACKENDS[_active]["ucb_scores"](A, b, X, alpha)


def ucb_scores_inv(A_inv: np.ndarray, b: np.ndarray, X: np.ndarray, alpha: float) -> np.ndarray:
    """Same index as :func:`ucb_scores` but from maintained inverses."""
    return _BACKENDS[_active]["ucb_scores_inv"](A_inv, b, X, alpha)


def rank1_update(A: np.ndarray, b: np.ndarray, x: np.ndarray, r: float, w: float) -> None:
    """In place: A += w x x', b += w r x. Preserves exact symmetry of A."""
    _BACKENDS[_active]["rank1_update"](A, b, x, r, w)


def sherman_morrison(A_inv: np.ndarray, x: np.ndarray, w: float) -> None:
    """In place rank-1 downdate of A^{-1} after A += w x x'."""
    _BACKENDS[_active]["sherman_morrison"](A_inv, x, w)


def warmup() -> None:
    """Trigger JIT compilation of the active backend's kernels."""
    d = 3
    A = np.eye(d)[None, :, :].copy()
    b = np.zeros((1, d))
    X = np.ones((1, d))
    ucb_scores(A, b, X, 1.0)
    ucb_scores_inv(A, b, X, 1.0)
    solve_spd(A[0].copy(), b[0].copy())
    rank1_update(A[0], b[0], X[0], 1.0, 0.5)
    sherman_morrison(A[0], X[0], 0.5)
