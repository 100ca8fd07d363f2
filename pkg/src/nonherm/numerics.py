"""Dense complex linear algebra used by the rest of the package.

Vectors and matrices are plain ``numpy`` arrays of dtype ``complex128``.
The two eigensolvers are written out explicitly rather than delegated to
LAPACK:

* :func:`general_eig` reduces to upper Hessenberg form with Householder
  reflectors and runs a single-shift complex QR iteration (Wilkinson shift,
  deflation, occasional exceptional shifts).  Eigenvectors are obtained from
  the resulting Schur triangle by back substitution.
* :func:`hermitian_eig` is a cyclic complex Jacobi method.

All tolerances are relative to the Frobenius norm of the operand and are
collected in :class:`Tolerances`.
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    DegenerateSpectrumError,
    DimensionError,
    NotPositiveDefiniteError,
    SingularMatrixError,
    SymmetryError,
)

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds, all relative to the scale of the operand."""

    tol_eig: float = 1e-10
    tol_sym: float = 1e-12
    tol_gap: float = 1e-8
    tol_pd: float = 1e-12
    cond_max: float = 1e12
    max_sweeps: int = 60
    max_qr_iter: int = 60

    def replace(self, **changes) -> "Tolerances":
        return dataclasses.replace(self, **changes)


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class EigenDecomposition:
    """Right eigensystem of a diagonalizable matrix.

    ``right_vectors[:, k]`` is a unit-norm eigenvector for ``eigenvalues[k]``;
    eigenvalues are sorted by (real part, imaginary part).
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    condition_estimate: float


# ---------------------------------------------------------------------------
# basic algebra


def as_vector(f) -> np.ndarray:
    v = np.asarray(f, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"expected a non-empty vector, got shape {v.shape}")
    return v


def as_matrix(a, square: bool = True) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.size == 0:
        raise DimensionError(f"expected a non-empty matrix, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def scalar_product(f, g) -> complex:
    """Return ``<f, g> = sum(conj(f_k) * g_k)`` (conjugate-linear in ``f``)."""
    f, g = as_vector(f), as_vector(g)
    if f.shape != g.shape:
        raise DimensionError(f"dimension mismatch: {f.size} vs {g.size}")
    return complex(np.vdot(f, g))


def norm(f) -> float:
    return float(np.linalg.norm(as_vector(f)))


def matrix_apply(a, f) -> np.ndarray:
    a, f = as_matrix(a, square=False), as_vector(f)
    if a.shape[1] != f.size:
        raise DimensionError(f"cannot apply {a.shape} matrix to vector of length {f.size}")
    return a @ f


def multiply(a, b) -> np.ndarray:
    a, b = as_matrix(a, square=False), as_matrix(b, square=False)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint_dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a, square=False).conj().T


def frobenius_residual(a, b) -> float:
    """``||a - b||_F / max(1, ||a||_F, ||b||_F)``."""
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    return float(np.linalg.norm(a - b) / max(1.0, na, nb))


def is_hermitian(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    return bool(np.linalg.norm(a - a.conj().T) <= tol.tol_sym * max(np.linalg.norm(a), EPS))


def _sort_order(values: np.ndarray, scale: float) -> np.ndarray:
    # real parts are rounded so that round-off cannot flip conjugate pairs
    keys = [(round(v.real / scale, 9), v.imag) for v in values]
    return np.array(sorted(range(len(values)), key=lambda k: keys[k]), dtype=int)


# ---------------------------------------------------------------------------
# Hermitian eigensolver (cyclic Jacobi)


def hermitian_eig(a, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a Hermitian matrix, ``a = U diag(lam) U^dagger``.

    Returns the real eigenvalues in ascending order and the unitary matrix
    whose columns are the corresponding eigenvectors.
    """
    a = as_matrix(a)
    if not is_hermitian(a, tol):
        raise SymmetryError("matrix is not Hermitian within tol_sym")
    n = a.shape[0]
    w = 0.5 * (a + a.conj().T)
    u = np.eye(n, dtype=complex)
    scale = np.linalg.norm(w)
    if scale == 0.0:
        return np.zeros(n), u

    for _ in range(tol.max_sweeps):
        off = np.linalg.norm(w - np.diag(np.diag(w)))
        if off <= EPS * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = w[p, q]
                g = abs(apq)
                if g <= EPS * 1e-3 * scale:
                    continue
                phase = apq / g
                app, aqq = w[p, p].real, w[q, q].real
                tau = (aqq - app) / (2.0 * g)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                w[:, idx] = w[:, idx] @ rot
                w[idx, :] = rot.conj().T @ w[idx, :]
                u[:, idx] = u[:, idx] @ rot
                w[p, q] = w[q, p] = 0.0
    else:
        off = np.linalg.norm(w - np.diag(np.diag(w)))
        if off > 1e3 * EPS * scale:
            raise ConvergenceError(f"Jacobi did not converge in {tol.max_sweeps} sweeps")

    lam = np.diag(w).real.copy()
    order = np.argsort(lam, kind="stable")
    return lam[order], u[:, order]


# ---------------------------------------------------------------------------
# general eigensolver (Hessenberg + shifted QR)


def _hessenberg(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Householder reduction ``a = q h q^dagger`` with ``h`` upper Hessenberg."""
    n = a.shape[0]
    h = a.copy()
    q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        nx = np.linalg.norm(x)
        if nx == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += phase * nx
        v /= np.linalg.norm(v)
        h[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, :])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h, q


def _givens(a: complex, b: complex) -> tuple[float, complex]:
    """Return (c, s) such that [[c, s], [-conj(s), c]] @ [a, b] = [r, 0]."""
    if b == 0:
        return 1.0, 0.0
    if a == 0:
        return 0.0, 1.0
    rho = np.hypot(abs(a), abs(b))
    c = abs(a) / rho
    s = (a / abs(a)) * np.conj(b) / rho
    return c, s


def _wilkinson_shift(block: np.ndarray) -> complex:
    a, b, c, d = block[0, 0], block[0, 1], block[1, 0], block[1, 1]
    half = 0.5 * (a - d)
    disc = np.sqrt(half * half + b * c)
    mu1, mu2 = 0.5 * (a + d) + disc, 0.5 * (a + d) - disc
    return mu1 if abs(mu1 - d) < abs(mu2 - d) else mu2


def _schur(h: np.ndarray, q: np.ndarray, max_iter: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduce Hessenberg ``h`` to upper-triangular Schur form in place."""
    n = h.shape[0]
    scale = np.linalg.norm(h)
    hi = n - 1
    iters = 0
    while hi > 0:
        lo = hi
        while lo > 0:
            s = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if s == 0.0:
                s = scale
            if abs(h[lo, lo - 1]) <= EPS * s:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            iters = 0
            continue

        iters += 1
        if iters > max_iter:
            raise ConvergenceError(f"QR iteration did not converge after {max_iter} steps")
        if iters % 11 == 10:
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1])
        else:
            mu = _wilkinson_shift(h[hi - 1:hi + 1, hi - 1:hi + 1])

        for k in range(lo, hi + 1):
            h[k, k] -= mu
        rots = []
        for k in range(lo, hi):
            c, s = _givens(h[k, k], h[k + 1, k])
            g = np.array([[c, s], [-np.conj(s), c]])
            h[k:k + 2, k:] = g @ h[k:k + 2, k:]
            h[k + 1, k] = 0.0
            rots.append(g.conj().T)
        for k, gh in zip(range(lo, hi), rots):
            h[:hi + 1, k:k + 2] = h[:hi + 1, k:k + 2] @ gh
            q[:, k:k + 2] = q[:, k:k + 2] @ gh
        for k in range(lo, hi + 1):
            h[k, k] += mu
    return np.triu(h), q


def _triangular_eigvecs(t: np.ndarray, scale: float) -> np.ndarray:
    n = t.shape[0]
    y = np.zeros((n, n), dtype=complex)
    smin = max(EPS * scale, np.finfo(float).tiny)
    for k in range(n):
        lam = t[k, k]
        y[k, k] = 1.0
        for j in range(k - 1, -1, -1):
            denom = t[j, j] - lam
            if abs(denom) < smin:
                denom = smin
            y[j, k] = -(t[j, j + 1:k + 1] @ y[j + 1:k + 1, k]) / denom
    return y


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Normalize to unit length with the largest component real positive."""
    v = v / np.linalg.norm(v)
    j = int(np.argmax(np.abs(v) - 1e-12 * np.arange(v.size)))
    return v * (abs(v[j]) / v[j])


def general_eig(h, tol: Tolerances = DEFAULT_TOL) -> EigenDecomposition:
    """Eigenvalues and unit-norm right eigenvectors of a square matrix.

    Raises :class:`DegenerateSpectrumError` if two eigenvalues are closer
    than ``tol_gap * ||h||_F``.
    """
    h = as_matrix(h)
    n = h.shape[0]
    scale = float(np.linalg.norm(h))
    if n == 1:
        return EigenDecomposition(h[0].copy(), np.ones((1, 1), dtype=complex), 1.0)
    if scale == 0.0:
        raise DegenerateSpectrumError("zero matrix has a fully degenerate spectrum")

    hess, q = _hessenberg(h)
    t, z = _schur(hess, q, tol.max_qr_iter)
    values = np.diag(t).copy()

    gaps = np.abs(values[:, None] - values[None, :]) + np.diag(np.full(n, np.inf))
    if gaps.min() < tol.tol_gap * scale:
        raise DegenerateSpectrumError(
            f"eigenvalue gap {gaps.min():.3e} below tol_gap * ||H||_F = {tol.tol_gap * scale:.3e}"
        )

    vecs = z @ _triangular_eigvecs(t, scale)
    vecs = np.column_stack([_fix_phase(vecs[:, k]) for k in range(n)])

    order = _sort_order(values, max(scale, 1.0))
    values, vecs = values[order], vecs[:, order]

    resid = np.linalg.norm(h @ vecs - vecs * values, axis=0).max()
    if resid > tol.tol_eig * scale:
        raise ConvergenceError(f"eigenvector residual {resid:.3e} exceeds tol_eig * ||H||_F")
    return EigenDecomposition(values, vecs, condition_number(vecs, tol))


def condition_number(a, tol: Tolerances = DEFAULT_TOL) -> float:
    """Spectral condition number computed from the eigenvalues of ``a^dagger a``."""
    a = as_matrix(a)
    lam, _ = hermitian_eig(a.conj().T @ a, tol.replace(tol_sym=1e-8))
    if lam[0] <= 0.0:
        return float("inf")
    return float(np.sqrt(lam[-1] / lam[0]))


# ---------------------------------------------------------------------------
# inverse and square root


def inverse(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    a = as_matrix(a)
    n = a.shape[0]
    try:
        cond = np.linalg.cond(a)
        if not np.isfinite(cond) or cond > tol.cond_max:
            raise SingularMatrixError(f"matrix condition number {cond:.3e} exceeds cond_max")
        return np.linalg.solve(a, np.eye(n, dtype=complex))
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(str(exc)) from exc


def positive_sqrt(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Unique Hermitian positive-definite square root of a Hermitian PD matrix."""
    a = as_matrix(a)
    lam, u = hermitian_eig(a, tol)
    if lam[0] <= tol.tol_pd * np.linalg.norm(a):
        raise NotPositiveDefiniteError(f"smallest eigenvalue {lam[0]:.3e} is not positive")
    b = (u * np.sqrt(lam)) @ u.conj().T
    return 0.5 * (b + b.conj().T)


# ---------------------------------------------------------------------------
# text I/O for complex scalars

_FLOAT = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^\s*([+-]?{_FLOAT})(?:\s*([+-])\s*({_FLOAT})i)?\s*$")


def parse_complex(text) -> complex:
    """Parse ``<float>`` or ``<float>(+|-)<float>i``; bare numbers pass through."""
    if isinstance(text, bool):
        raise ValueError(f"not a complex number: {text!r}")
    if isinstance(text, (int, float, complex)):
        return complex(text)
    m = _COMPLEX_RE.match(str(text))
    if m is None:
        raise ValueError(f"not a complex number: {text!r}")
    re_part = float(m.group(1))
    im_part = 0.0
    if m.group(2) is not None:
        im_part = float(m.group(3)) * (-1.0 if m.group(2) == "-" else 1.0)
    return complex(re_part, im_part)


def format_complex(z: complex, digits: int = 17) -> str:
    z = complex(z)
    re_s = f"{z.real:.{digits}g}"
    if z.imag == 0.0:
        return re_s
    sign = "-" if z.imag < 0 else "+"
    return f"{re_s}{sign}{abs(z.imag):.{digits}g}i"


def parse_matrix(rows) -> np.ndarray:
    """Build a complex matrix from an array of row arrays of complex strings."""
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ValueError("matrix must be a non-empty array of row arrays")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("matrix rows have different lengths")
    return np.array([[parse_complex(x) for x in r] for r in rows], dtype=complex)
