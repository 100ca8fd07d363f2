"""Operators derived from ``H`` through the antilinear maps ``V_phi`` and ``V_Psi``.

With ``V_phi f = sum_k <f, Psi_k> phi_k`` (matrix part ``phi psi^T``) the
module builds

* ``H_phi = V_phi H`` and ``H~_phi = H V_phi`` (antilinear),
* ``H_phiphi = V_phi H V_phi`` (linear),
* ``H_0 = S_Psi^1/2 H_phi S_phi^1/2`` and ``H~_0 = S_Psi^1/2 H~_phi S_phi^1/2``,
* the orthonormal basis ``e_k = S_Psi^1/2 phi_k``,

and checks every intertwining identity between them as a residual.
Antilinear operators are compared through their matrix parts only; a linear
operator is never compared with an antilinear one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .antilinear import AntilinearOp, adjoint, apply, compose_aa, compose_al, compose_la
from .biortho import BiorthogonalSystem, flat_adjoint, sharp_adjoint
from .errors import ConstructionError
from .numerics import DEFAULT_TOL, Tolerances, as_matrix, frobenius_residual, general_eig, inverse
from .report import Report


@dataclass(frozen=True, eq=False)
class DerivedOperators:
    h_phi: AntilinearOp
    h_phi_tilde: AntilinearOp
    h_phiphi: np.ndarray
    h0: AntilinearOp
    h0_tilde: AntilinearOp
    e_basis: np.ndarray
    v_phi: AntilinearOp
    v_psi: AntilinearOp


def _op_residual(a: AntilinearOp, b: AntilinearOp) -> float:
    return frobenius_residual(a.m, b.m)


def build_v_ops(sys: BiorthogonalSystem, tol: Tolerances = DEFAULT_TOL) -> tuple[AntilinearOp, AntilinearOp]:
    """``V_phi`` and ``V_Psi``; raises :class:`ConstructionError` if the system is inconsistent."""
    v_phi = AntilinearOp(sys.phi @ sys.psi.T)
    v_psi = AntilinearOp(sys.psi @ sys.phi.T)
    eye = np.eye(sys.dim)
    residuals = {
        "V_phi^2 = 1": frobenius_residual(compose_aa(v_phi, v_phi), eye),
        "V_psi^2 = 1": frobenius_residual(compose_aa(v_psi, v_psi), eye),
        "V_phi^+ = V_psi": _op_residual(adjoint(v_phi), v_psi),
        "V_phi phi_k = phi_k": frobenius_residual(v_phi.m @ sys.phi.conj(), sys.phi),
        "V_psi Psi_k = Psi_k": frobenius_residual(v_psi.m @ sys.psi.conj(), sys.psi),
    }
    bad = {k: r for k, r in residuals.items() if not r <= tol.tol_eig}
    if bad:
        detail = ", ".join(f"{k} ({r:.2e})" for k, r in bad.items())
        raise ConstructionError(f"inconsistent biorthogonal system: {detail}")
    return v_phi, v_psi


def build_derived(h, sys: BiorthogonalSystem, tol: Tolerances = DEFAULT_TOL) -> DerivedOperators:
    h = as_matrix(h)
    v_phi, v_psi = build_v_ops(sys, tol)
    h_phi = compose_al(v_phi, h)
    h_phi_tilde = compose_la(h, v_phi)
    h_phiphi = compose_aa(h_phi, v_phi)
    h0 = compose_la(sys.s_psi_sqrt, compose_al(h_phi, sys.s_phi_sqrt))
    h0_tilde = compose_la(sys.s_psi_sqrt, compose_al(h_phi_tilde, sys.s_phi_sqrt))
    e_basis = sys.s_psi_sqrt @ sys.phi
    return DerivedOperators(h_phi, h_phi_tilde, h_phiphi, h0, h0_tilde, e_basis, v_phi, v_psi)


def derived_report(d: DerivedOperators, sys: BiorthogonalSystem, h, threshold: float = 1e-9) -> Report:
    """Defining properties of the derived operators themselves."""
    h = as_matrix(h)
    eye = np.eye(sys.dim)
    rep = Report("derived operators")
    rep.add("V_phi^2 = 1", frobenius_residual(compose_aa(d.v_phi, d.v_phi), eye), threshold)
    rep.add("V_psi^2 = 1", frobenius_residual(compose_aa(d.v_psi, d.v_psi), eye), threshold)
    rep.add("V_phi^+ = V_psi", _op_residual(adjoint(d.v_phi), d.v_psi), threshold)
    rep.add("H_phi^+ = H^+ V_psi", _op_residual(adjoint(d.h_phi), compose_la(h.conj().T, d.v_psi)), threshold)
    rep.add("H~_phi^+ = V_psi H^+", _op_residual(adjoint(d.h_phi_tilde), compose_al(d.v_psi, h.conj().T)), threshold)
    rep.add("H_0 = H_0^+", _op_residual(d.h0, adjoint(d.h0)), threshold)
    rep.add("H~_0 = H~_0^+", _op_residual(d.h0_tilde, adjoint(d.h0_tilde)), threshold)
    rep.add("e-basis orthonormal", frobenius_residual(d.e_basis.conj().T @ d.e_basis, eye), threshold)
    rep.add("e_k = S_phi^1/2 Psi_k", frobenius_residual(d.e_basis, sys.s_phi_sqrt @ sys.psi), threshold)
    return rep


def check_antilinear_intertwining(d: DerivedOperators, sys: BiorthogonalSystem, threshold: float = 1e-9) -> Report:
    s_phi, s_psi = sys.s_phi, sys.s_psi
    hp, hp_dag = d.h_phi, adjoint(d.h_phi)
    ht, ht_dag = d.h_phi_tilde, adjoint(d.h_phi_tilde)
    rep = Report("antilinear intertwining")
    rep.add("S_psi H_phi = H_phi^+ S_psi", _op_residual(compose_la(s_psi, hp), compose_al(hp_dag, s_psi)), threshold)
    rep.add("H_phi S_phi = S_phi H_phi^+", _op_residual(compose_al(hp, s_phi), compose_la(s_phi, hp_dag)), threshold)
    rep.add("H~_phi S_phi = S_phi H~_phi^+", _op_residual(compose_al(ht, s_phi), compose_la(s_phi, ht_dag)), threshold)
    rep.add("H~_phi^+ S_psi = S_psi H~_phi", _op_residual(compose_al(ht_dag, s_psi), compose_la(s_psi, ht)), threshold)
    return rep


def _eigen_residual(op: AntilinearOp, vecs: np.ndarray, values: np.ndarray) -> float:
    worst = 0.0
    for k in range(vecs.shape[1]):
        v = vecs[:, k]
        r = np.linalg.norm(apply(op, v) - values[k] * v) / max(1.0, np.linalg.norm(v))
        worst = max(worst, r)
    return float(worst)


def check_isospectrality(d: DerivedOperators, sys: BiorthogonalSystem, threshold: float = 1e-9) -> Report:
    """Eigen-equations of the antilinear derived operators, worst pair per relation.

    The relation for the adjoint of ``H~_phi`` is checked as
    ``H~_phi^+ Psi_n = E_n Psi_n``.
    """
    e = sys.eigenvalues
    rep = Report("isospectrality")
    rep.add("H_phi phi_n = conj(E_n) phi_n", _eigen_residual(d.h_phi, sys.phi, e.conj()), threshold)
    rep.add("H_phi^+ Psi_n = conj(E_n) Psi_n", _eigen_residual(adjoint(d.h_phi), sys.psi, e.conj()), threshold)
    rep.add("H~_phi phi_n = E_n phi_n", _eigen_residual(d.h_phi_tilde, sys.phi, e), threshold)
    rep.add("H~_phi^+ Psi_n = E_n Psi_n", _eigen_residual(adjoint(d.h_phi_tilde), sys.psi, e), threshold)
    rep.add("H_0 e_k = conj(E_k) e_k", _eigen_residual(d.h0, d.e_basis, e.conj()), threshold)
    rep.add("H~_0 e_k = E_k e_k", _eigen_residual(d.h0_tilde, d.e_basis, e), threshold)
    return rep


def check_linear_intertwining(d: DerivedOperators, sys: BiorthogonalSystem, h, threshold: float = 1e-9) -> Report:
    h = as_matrix(h)
    hd = h.conj().T
    hpp, hpp_d = d.h_phiphi, d.h_phiphi.conj().T
    s_phi, s_psi = sys.s_phi, sys.s_psi
    rep = Report("linear intertwining")
    rep.add("S_psi H_phiphi = H^+ S_psi", frobenius_residual(s_psi @ hpp, hd @ s_psi), threshold)
    rep.add("H_phiphi S_phi = S_phi H^+", frobenius_residual(hpp @ s_phi, s_phi @ hd), threshold)
    rep.add("S_phi H_phiphi^+ = H S_phi", frobenius_residual(s_phi @ hpp_d, h @ s_phi), threshold)
    rep.add("S_psi H = H_phiphi^+ S_psi", frobenius_residual(s_psi @ h, hpp_d @ s_psi), threshold)
    return rep


def check_metric_selfadjointness(d: DerivedOperators, sys: BiorthogonalSystem, threshold: float = 1e-9) -> Report:
    hp_dag = adjoint(d.h_phi)
    ht_dag = adjoint(d.h_phi_tilde)
    rep = Report("metric self-adjointness")
    rep.add("H_phi = H_phi#", _op_residual(d.h_phi, sharp_adjoint(d.h_phi, sys)), threshold)
    rep.add("H_phi^+ = (H_phi^+)b", _op_residual(hp_dag, flat_adjoint(hp_dag, sys)), threshold)
    rep.add("H~_phi = H~_phi#", _op_residual(d.h_phi_tilde, sharp_adjoint(d.h_phi_tilde, sys)), threshold)
    rep.add("H~_phi^+ = (H~_phi^+)b", _op_residual(ht_dag, flat_adjoint(ht_dag, sys)), threshold)
    return rep


def full_report(h, sys: BiorthogonalSystem, threshold: float = 1e-9, tol: Tolerances = DEFAULT_TOL) -> Report:
    """Every intertwining-module check in one report."""
    d = build_derived(h, sys, tol)
    rep = Report("intertwining")
    for part in (
        derived_report(d, sys, h, threshold),
        check_antilinear_intertwining(d, sys, threshold),
        check_isospectrality(d, sys, threshold),
        check_linear_intertwining(d, sys, h, threshold),
        check_metric_selfadjointness(d, sys, threshold),
    ):
        rep.extend(part)
    return rep


def real_spectrum_report(h, sys: BiorthogonalSystem, threshold: float = 1e-10) -> Report:
    """Pseudo-Hermiticity identities that hold only when every eigenvalue is real."""
    h = as_matrix(h)
    hd = h.conj().T
    rep = Report("real spectrum")
    rep.add("S_psi H = H^+ S_psi", frobenius_residual(sys.s_psi @ h, hd @ sys.s_psi), threshold)
    rep.add("S_phi H^+ = H S_phi", frobenius_residual(sys.s_phi @ hd, h @ sys.s_phi), threshold)
    rep.add("H = H#", frobenius_residual(h, sharp_adjoint(h, sys)), threshold)
    rep.add("H^+ = (H^+)b", frobenius_residual(hd, flat_adjoint(hd, sys)), threshold)
    return rep


# ---------------------------------------------------------------------------
# no similarity to a self-adjoint matrix


@dataclass
class SimilarityWitness:
    """Per-sample spectra of ``X H X^-1`` compared with the spectrum of ``H``."""

    spectrum: np.ndarray
    sample_spectra: list
    mismatches: list
    hermiticity_defects: list

    @property
    def max_mismatch(self) -> float:
        return max(self.mismatches, default=0.0)

    @property
    def all_retain_nonreal(self) -> bool:
        return all(np.abs(s.imag).max() > DEFAULT_TOL.tol_gap for s in self.sample_spectra)

    @property
    def none_selfadjoint(self) -> bool:
        return all(r > DEFAULT_TOL.tol_gap for r in self.hermiticity_defects)


def _multiset_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Greedy nearest matching; adequate for well-separated spectra."""
    remaining = list(b)
    worst = 0.0
    for x in a:
        j = int(np.argmin([abs(x - y) for y in remaining]))
        worst = max(worst, abs(x - remaining.pop(j)))
    return worst


def no_selfadjoint_similarity_demo(h, x_samples, tol: Tolerances = DEFAULT_TOL) -> SimilarityWitness:
    """Numerical witness that no similarity transform makes ``h`` self-adjoint.

    Similar matrices share their spectrum; a spectrum with a non-real element
    cannot belong to a self-adjoint matrix.
    """
    h = as_matrix(h)
    spectrum = general_eig(h, tol).eigenvalues
    if np.abs(spectrum.imag).max() <= tol.tol_gap:
        raise ValueError("H has a real spectrum; the demonstration needs a non-real eigenvalue")
    spectra, mismatches, defects = [], [], []
    for x in x_samples:
        x = as_matrix(x)
        hx = x @ h @ inverse(x, tol)
        s = general_eig(hx, tol).eigenvalues
        spectra.append(s)
        mismatches.append(_multiset_distance(s, spectrum))
        defects.append(frobenius_residual(hx, hx.conj().T))
    return SimilarityWitness(spectrum, spectra, mismatches, defects)
