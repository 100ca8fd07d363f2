"""Biorthogonal eigensystems and the metric operators built from them.

For a diagonalizable ``H`` with right eigenvectors ``phi_k`` (columns of
``phi``) the biorthogonal partners ``Psi_k`` are the columns of
``inv(phi)^dagger``, so that ``psi^dagger @ phi = I``.  The metrics are

    S_phi = phi phi^dagger,    S_psi = psi psi^dagger = inv(S_phi).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .antilinear import AntilinearOp, adjoint, compose_al, compose_la
from .errors import ConstructionError, DimensionError, IllConditionedBasisError
from .numerics import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    as_vector,
    frobenius_residual,
    general_eig,
    inverse,
    positive_sqrt,
    scalar_product,
)
from .report import Report


@dataclass(frozen=True, eq=False)
class BiorthogonalSystem:
    eigenvalues: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    s_phi: np.ndarray
    s_psi: np.ndarray
    s_phi_sqrt: np.ndarray
    s_psi_sqrt: np.ndarray

    @property
    def dim(self) -> int:
        return self.phi.shape[0]


def system_from_basis(eigenvalues, phi, psi=None, tol: Tolerances = DEFAULT_TOL) -> BiorthogonalSystem:
    """Assemble a system from given eigenvalues and eigenvector columns.

    ``psi`` defaults to the unique biorthogonal partner ``inv(phi)^dagger``.
    A caller-supplied ``psi`` is taken as is (this is how corrupted fixtures
    reach the verification table).
    """
    values = np.asarray(eigenvalues, dtype=complex).copy()
    phi = as_matrix(phi).copy()
    if values.shape != (phi.shape[0],):
        raise DimensionError("need one eigenvalue per eigenvector column")
    if psi is None:
        psi = inverse(phi, tol).conj().T
    psi = as_matrix(psi).copy()
    if psi.shape != phi.shape:
        raise DimensionError(f"psi shape {psi.shape} does not match phi shape {phi.shape}")

    s_phi = phi @ phi.conj().T
    s_psi = psi @ psi.conj().T
    s_phi = 0.5 * (s_phi + s_phi.conj().T)
    s_psi = 0.5 * (s_psi + s_psi.conj().T)
    arrays = [values, phi, psi, s_phi, s_psi, positive_sqrt(s_phi, tol), positive_sqrt(s_psi, tol)]
    for a in arrays:
        a.setflags(write=False)
    return BiorthogonalSystem(*arrays)


def build_system(h, tol: Tolerances = DEFAULT_TOL) -> BiorthogonalSystem:
    """Biorthogonal eigensystem of ``h`` with unit-norm right eigenvectors."""
    h = as_matrix(h)
    eig = general_eig(h, tol)
    if eig.condition_estimate > tol.cond_max:
        raise IllConditionedBasisError(
            f"eigenvector basis condition number {eig.condition_estimate:.3e} exceeds cond_max"
        )
    sys = system_from_basis(eig.eigenvalues, eig.right_vectors, tol=tol)

    scale = max(1.0, np.linalg.norm(h))
    for k, e in enumerate(sys.eigenvalues):
        psi_k = sys.psi[:, k]
        resid = np.linalg.norm(h.conj().T @ psi_k - np.conj(e) * psi_k)
        if resid > tol.tol_eig * scale * np.linalg.norm(psi_k) * max(1.0, eig.condition_estimate):
            raise ConstructionError(f"H^dagger Psi_{k} = conj(E_{k}) Psi_{k} fails (residual {resid:.3e})")
    return sys


def rescaled(sys: BiorthogonalSystem, factors, tol: Tolerances = DEFAULT_TOL) -> BiorthogonalSystem:
    """Use the per-pair freedom ``phi_k -> z_k phi_k``, ``Psi_k -> Psi_k / conj(z_k)``."""
    z = np.asarray(factors, dtype=complex)
    if z.shape != sys.eigenvalues.shape or np.any(z == 0):
        raise ValueError("need one non-zero scale factor per eigenpair")
    return system_from_basis(sys.eigenvalues, sys.phi * z, sys.psi / z.conj(), tol)


def reordered(sys: BiorthogonalSystem, order, tol: Tolerances = DEFAULT_TOL) -> BiorthogonalSystem:
    order = np.asarray(order, dtype=int)
    return system_from_basis(sys.eigenvalues[order], sys.phi[:, order], sys.psi[:, order], tol)


# ---------------------------------------------------------------------------
# deformed scalar products and adjoints


def inner_phi(f, g, sys: BiorthogonalSystem) -> complex:
    """``<f, g>_phi = <S_phi f, g>``."""
    f, g = as_vector(f), as_vector(g)
    if f.size != sys.dim:
        raise DimensionError(f"vector length {f.size} does not match system dimension {sys.dim}")
    return scalar_product(sys.s_phi @ f, g)


def inner_psi(f, g, sys: BiorthogonalSystem) -> complex:
    """``<f, g>_Psi = <S_Psi f, g>``."""
    f, g = as_vector(f), as_vector(g)
    if f.size != sys.dim:
        raise DimensionError(f"vector length {f.size} does not match system dimension {sys.dim}")
    return scalar_product(sys.s_psi @ f, g)


def _sandwich(left, x, right):
    if isinstance(x, AntilinearOp):
        if x.dim != left.shape[0]:
            raise DimensionError(f"operator dimension {x.dim} does not match system dimension {left.shape[0]}")
        return compose_la(left, compose_al(adjoint(x), right))
    x = as_matrix(x)
    if x.shape != left.shape:
        raise DimensionError(f"operator shape {x.shape} does not match system dimension {left.shape[0]}")
    return left @ x.conj().T @ right


def flat_adjoint(x, sys: BiorthogonalSystem):
    """Adjoint with respect to ``<.,.>_phi``: ``S_Psi X^dagger S_phi``."""
    return _sandwich(sys.s_psi, x, sys.s_phi)


def sharp_adjoint(x, sys: BiorthogonalSystem):
    """Adjoint with respect to ``<.,.>_Psi``: ``S_phi X^dagger S_Psi``."""
    return _sandwich(sys.s_phi, x, sys.s_psi)


# ---------------------------------------------------------------------------
# verification


def invariant_report(sys: BiorthogonalSystem, h=None, threshold: float = 1e-9) -> Report:
    """Residuals of every structural identity a biorthogonal system must satisfy."""
    n = sys.dim
    eye = np.eye(n)
    phi, psi = sys.phi, sys.psi
    rep = Report("biorthogonal system")
    rep.add("biorthogonality psi^+ phi = 1", frobenius_residual(psi.conj().T @ phi, eye), threshold)
    rep.add("resolution phi psi^+ = 1", frobenius_residual(phi @ psi.conj().T, eye), threshold)
    rep.add("resolution psi phi^+ = 1", frobenius_residual(psi @ phi.conj().T, eye), threshold)
    rep.add("S_phi S_psi = 1", frobenius_residual(sys.s_phi @ sys.s_psi, eye), threshold)
    rep.add("S_phi Psi_k = phi_k", frobenius_residual(sys.s_phi @ psi, phi), threshold)
    rep.add("S_psi phi_k = Psi_k", frobenius_residual(sys.s_psi @ phi, psi), threshold)
    rep.add("(S_phi^1/2)^2 = S_phi", frobenius_residual(sys.s_phi_sqrt @ sys.s_phi_sqrt, sys.s_phi), threshold)
    rep.add("(S_psi^1/2)^2 = S_psi", frobenius_residual(sys.s_psi_sqrt @ sys.s_psi_sqrt, sys.s_psi), threshold)
    rep.add("S_psi^1/2 S_phi^1/2 = 1", frobenius_residual(sys.s_psi_sqrt @ sys.s_phi_sqrt, eye), threshold)
    if h is not None:
        h = as_matrix(h)
        e = sys.eigenvalues
        rep.add("H phi_k = E_k phi_k", frobenius_residual(h @ phi, phi * e), threshold)
        rep.add("H^+ Psi_k = conj(E_k) Psi_k", frobenius_residual(h.conj().T @ psi, psi * e.conj()), threshold)
    return rep
