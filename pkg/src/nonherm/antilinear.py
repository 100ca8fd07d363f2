"""Antilinear operators on C^n.

Every antilinear map is stored in the canonical form ``f -> m @ conj(f)``.
In that representation the operations of the algebra become matrix
identities:

===================  ==========================
operation            matrix part
===================  ==========================
``V^dagger``         ``m.T``
``V1 V2`` (linear)   ``m1 @ conj(m2)``
``A V``              ``A @ m``
``V A``              ``m @ conj(A)``
===================  ==========================

A sum of a linear and an antilinear operator is neither, so no function
here builds one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, NormalizationError, NotEigenpairError, NotFixedError
from .numerics import (
    DEFAULT_TOL,
    Tolerances,
    adjoint_dagger,
    as_matrix,
    as_vector,
    format_complex,
    frobenius_residual,
    parse_matrix,
    scalar_product,
)


@dataclass(frozen=True, eq=False)
class AntilinearOp:
    """Antilinear operator acting as ``f -> m @ conj(f)``."""

    m: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.m).copy()
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @property
    def dim(self) -> int:
        return self.m.shape[0]

    def __call__(self, f) -> np.ndarray:
        return apply(self, f)

    def __eq__(self, other):
        if not isinstance(other, AntilinearOp):
            return NotImplemented
        return self.m.shape == other.m.shape and frobenius_residual(self.m, other.m) <= DEFAULT_TOL.tol_eig

    __hash__ = None

    def is_self_adjoint(self, tol: float = DEFAULT_TOL.tol_eig) -> bool:
        return frobenius_residual(self.m, self.m.T) <= tol

    def to_dict(self) -> dict:
        return {
            "antilinear": True,
            "matrix": [[format_complex(x) for x in row] for row in self.m],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AntilinearOp":
        if data.get("antilinear") is not True:
            raise ValueError("missing 'antilinear': true tag")
        return cls(parse_matrix(data["matrix"]))


def conjugation(n: int) -> AntilinearOp:
    """Entrywise complex conjugation on C^n."""
    return AntilinearOp(np.eye(n, dtype=complex))


def _check_dim(n: int, *ops):
    for op in ops:
        d = op.dim if isinstance(op, AntilinearOp) else as_matrix(op).shape[0]
        if d != n:
            raise DimensionError(f"dimension mismatch: {n} vs {d}")


def apply(v: AntilinearOp, f) -> np.ndarray:
    f = as_vector(f)
    if f.size != v.dim:
        raise DimensionError(f"cannot apply {v.dim}-dimensional operator to vector of length {f.size}")
    return v.m @ f.conj()


def adjoint(v: AntilinearOp) -> AntilinearOp:
    """Antilinear adjoint, defined by ``<V^dagger x, y> = <V y, x>``."""
    return AntilinearOp(v.m.T)


def compose_aa(v1: AntilinearOp, v2: AntilinearOp) -> np.ndarray:
    """The product of two antilinear maps is the linear matrix ``m1 conj(m2)``."""
    _check_dim(v1.dim, v2)
    return v1.m @ v2.m.conj()


def compose_la(a, v: AntilinearOp) -> AntilinearOp:
    """``A V`` for linear ``A``."""
    a = as_matrix(a)
    _check_dim(v.dim, a)
    return AntilinearOp(a @ v.m)


def compose_al(v: AntilinearOp, a) -> AntilinearOp:
    """``V A`` for linear ``A``; ``V(A f) = m conj(A) conj(f)``."""
    a = as_matrix(a)
    _check_dim(v.dim, a)
    return AntilinearOp(v.m @ a.conj())


def anti_adjoint_product_rule_check(
    v1: AntilinearOp, v2: AntilinearOp, tol: Tolerances = DEFAULT_TOL
) -> bool:
    """Check ``(V1 V2)^dagger == V2^dagger V1^dagger``; both sides are linear."""
    lhs = adjoint_dagger(compose_aa(v1, v2))
    rhs = compose_aa(adjoint(v2), adjoint(v1))
    return frobenius_residual(lhs, rhs) <= tol.tol_eig


def antilinear_fixes_basis_but_not_identity(
    basis, v: AntilinearOp, tol: Tolerances = DEFAULT_TOL
) -> bool:
    """Show that ``V b_j = b_j`` for a whole basis does not make ``V`` the identity.

    Raises :class:`NotFixedError` if some basis vector is not fixed.
    """
    vecs = [as_vector(b) for b in basis]
    mat = np.column_stack(vecs)
    if mat.shape[0] != v.dim or np.linalg.matrix_rank(mat) < v.dim:
        raise NotFixedError("supplied vectors do not span the space")
    for j, b in enumerate(vecs):
        if np.linalg.norm(apply(v, b) - b) > tol.tol_eig * max(1.0, np.linalg.norm(b)):
            raise NotFixedError(f"basis vector {j} is not fixed by the operator")
    b0 = vecs[0]
    image = apply(v, 1j * b0)
    fixed_as_antilinear = np.linalg.norm(image + 1j * b0) <= tol.tol_eig * np.linalg.norm(b0)
    differs_from_identity = np.linalg.norm(image - 1j * b0) > tol.tol_eig * np.linalg.norm(b0)
    return bool(fixed_as_antilinear and differs_from_identity)


def rank_one_selfadjoint_example(psi, alpha: complex, tol: Tolerances = DEFAULT_TOL) -> AntilinearOp:
    """``V f = alpha <f, psi> psi``: self-adjoint, yet ``V psi = alpha psi`` with complex alpha."""
    psi = as_vector(psi)
    if abs(np.linalg.norm(psi) - 1.0) > tol.tol_eig:
        raise NormalizationError("psi must have unit norm")
    if complex(alpha).imag == 0.0:
        raise ValueError("alpha must have a non-zero imaginary part")
    return AntilinearOp(alpha * np.outer(psi, psi))


@dataclass
class OrthogonalityReport:
    """Outcome of :func:`v_squared_orthogonality_check`.

    ``pairs`` holds ``(j, k, required, overlap, passed)`` tuples; ``v2_residuals``
    are the residuals of ``V^2 phi_j = |E_j|^2 phi_j``.
    """

    pairs: list = field(default_factory=list)
    v2_residuals: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(p[4] for p in self.pairs) and all(r <= DEFAULT_TOL.tol_eig for r in self.v2_residuals)


def v_squared_orthogonality_check(v: AntilinearOp, pairs, tol: Tolerances = DEFAULT_TOL) -> OrthogonalityReport:
    """Eigenvectors of an antilinear ``V`` with eigenvalues of different modulus are orthogonal.

    ``pairs`` is a sequence of ``(eigenvector, eigenvalue)``.  Orthogonality is
    only demanded when the moduli differ by more than ``tol_gap``.
    """
    vecs, vals = [], []
    for j, (phi, e) in enumerate(pairs):
        phi = as_vector(phi)
        e = complex(e)
        if np.linalg.norm(apply(v, phi) - e * phi) > tol.tol_eig * max(1.0, np.linalg.norm(phi)):
            raise NotEigenpairError(f"pair {j} does not satisfy V phi = E phi")
        vecs.append(phi)
        vals.append(e)

    v2 = compose_aa(v, v)
    report = OrthogonalityReport()
    for phi, e in zip(vecs, vals):
        r = np.linalg.norm(v2 @ phi - abs(e) ** 2 * phi) / max(1.0, np.linalg.norm(phi))
        report.v2_residuals.append(float(r))
    for j in range(len(vecs)):
        for k in range(j + 1, len(vecs)):
            required = abs(abs(vals[j]) - abs(vals[k])) > tol.tol_gap
            overlap = scalar_product(vecs[j], vecs[k])
            scale = np.linalg.norm(vecs[j]) * np.linalg.norm(vecs[k])
            passed = (not required) or abs(overlap) <= tol.tol_eig * max(1.0, scale)
            report.pairs.append((j, k, required, overlap, passed))
    return report
