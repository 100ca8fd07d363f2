"""Two-level model with prescribed eigenvalues ``E1``, ``E2``.

    H = 1/(2 - a b) [[2 E1 - a b E2,  a (E2 - E1)],
                     [2 b (E1 - E2),  2 E2 - a b E1]]

with real ``a = alpha``, ``b = beta`` and ``alpha * beta != 2``.  Its
eigenvectors do not depend on ``E1``, ``E2``:

    phi_1 = (1, beta),  phi_2 = (alpha, 2),
    Psi_1 = (2, -alpha) / (2 - alpha beta),  Psi_2 = (-beta, 1) / (2 - alpha beta).

The closed forms here use that normalization verbatim.  The module also maps
a PT-symmetric two-level Hamiltonian (model name ``das_greenwood``),

    h = [[r e^{i theta},   s e^{i Phi}],
         [t e^{-i Phi},    r e^{-i theta}]],

onto ``H`` at ``Phi = -pi/2`` in the broken regime.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .biortho import BiorthogonalSystem, build_system, rescaled, reordered, system_from_basis
from .errors import DegenerateParamError, NotBrokenRegimeError
from .numerics import DEFAULT_TOL, Tolerances


@dataclass(frozen=True)
class TwoLevelParams:
    alpha: float
    beta: float
    e1: complex
    e2: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "e1", complex(self.e1))
        object.__setattr__(self, "e2", complex(self.e2))
        if abs(self.alpha * self.beta - 2.0) <= DEFAULT_TOL.tol_gap:
            raise DegenerateParamError(f"alpha*beta = {self.alpha * self.beta!r} is 2")
        if abs(self.e1 - self.e2) <= DEFAULT_TOL.tol_gap * max(1.0, abs(self.e1), abs(self.e2)):
            raise DegenerateParamError("E1 and E2 coincide")

    @property
    def denom(self) -> float:
        return 2.0 - self.alpha * self.beta

    def conjugated(self) -> "TwoLevelParams":
        return TwoLevelParams(self.alpha, self.beta, self.e1.conjugate(), self.e2.conjugate())


class Regime(enum.Enum):
    BROKEN = "Broken"
    UNBROKEN = "Unbroken"
    EXCEPTIONAL = "ExceptionalPoint"


@dataclass(frozen=True)
class DasGreenwoodParams:
    r: float
    s: float
    t: float
    theta: float
    phi_phase: float = -math.pi / 2

    def __post_init__(self):
        for name in ("r", "s", "t", "theta", "phi_phase"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.s == 0.0 or self.t == 0.0:
            raise DegenerateParamError("s and t must be non-zero")

    @property
    def discriminant(self) -> float:
        return self.r ** 2 * math.sin(self.theta) ** 2 - self.t * self.s


def build_h(p: TwoLevelParams) -> np.ndarray:
    a, b, e1, e2 = p.alpha, p.beta, p.e1, p.e2
    ab = a * b
    return np.array(
        [[2 * e1 - ab * e2, a * (e2 - e1)],
         [2 * b * (e1 - e2), 2 * e2 - ab * e1]],
        dtype=complex,
    ) / p.denom


def closed_form_eigensystem(p: TwoLevelParams) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """``(phi1, phi2, psi1, psi2)`` in the normalization ``<phi_k, Psi_n> = delta_kn``."""
    a, b, d = p.alpha, p.beta, p.denom
    phi1 = np.array([1.0, b], dtype=complex)
    phi2 = np.array([a, 2.0], dtype=complex)
    psi1 = np.array([2.0, -a], dtype=complex) / d
    psi2 = np.array([-b, 1.0], dtype=complex) / d
    return phi1, phi2, psi1, psi2


def closed_form_metrics(p: TwoLevelParams) -> tuple[np.ndarray, np.ndarray]:
    a, b, d = p.alpha, p.beta, p.denom
    off = b + 2 * a
    s_phi = np.array([[1 + a * a, off], [off, 4 + b * b]], dtype=complex)
    s_psi = np.array([[4 + b * b, -off], [-off, 1 + a * a]], dtype=complex) / d ** 2
    return s_phi, s_psi


def closed_form_hphiphi(p: TwoLevelParams) -> np.ndarray:
    """``V H V``: the model with both eigenvalues complex-conjugated."""
    return build_h(p.conjugated())


def closed_form_system(p: TwoLevelParams, tol: Tolerances = DEFAULT_TOL) -> BiorthogonalSystem:
    """Biorthogonal system in the closed-form normalization, ordered (E1, E2)."""
    phi1, phi2, psi1, psi2 = closed_form_eigensystem(p)
    return system_from_basis(
        [p.e1, p.e2], np.column_stack([phi1, phi2]), np.column_stack([psi1, psi2]), tol
    )


def pipeline_system(p: TwoLevelParams, tol: Tolerances = DEFAULT_TOL) -> BiorthogonalSystem:
    """Generic numerical pipeline on ``build_h(p)``, re-expressed in the closed-form normalization.

    The eigenpairs are reordered to (E1, E2) and rescaled so that
    ``phi_1[0] = 1`` and ``phi_2[1] = 2``; no closed-form vector enters.
    """
    sys = build_system(build_h(p), tol)
    vals = sys.eigenvalues
    first = int(np.argmin(np.abs(vals - p.e1)))
    sys = reordered(sys, [first, 1 - first], tol)
    z = np.array([1.0 / sys.phi[0, 0], 2.0 / sys.phi[1, 1]])
    return rescaled(sys, z, tol)


# ---------------------------------------------------------------------------
# PT-symmetric model


def das_greenwood_h(dg: DasGreenwoodParams) -> np.ndarray:
    r, s, t, th, ph = dg.r, dg.s, dg.t, dg.theta, dg.phi_phase
    return np.array(
        [[r * np.exp(1j * th), s * np.exp(1j * ph)],
         [t * np.exp(-1j * ph), r * np.exp(-1j * th)]],
        dtype=complex,
    )


def classify_regime(dg: DasGreenwoodParams, tol: Tolerances = DEFAULT_TOL) -> Regime:
    disc = dg.discriminant
    if abs(disc) <= tol.tol_gap:
        return Regime.EXCEPTIONAL
    return Regime.BROKEN if disc > 0 else Regime.UNBROKEN


def map_das_greenwood(dg: DasGreenwoodParams, branch: str = "+", tol: Tolerances = DEFAULT_TOL) -> TwoLevelParams:
    """Parameters ``(alpha, beta, E1, E2)`` for which ``build_h`` reproduces ``h``.

    Defined for ``Phi = -pi/2`` in the broken regime, where ``alpha`` and
    ``beta`` come out real.
    """
    if branch not in ("+", "-"):
        raise ValueError(f"branch must be '+' or '-', got {branch!r}")
    if abs(dg.phi_phase + math.pi / 2) > 1e-12:
        raise ValueError("the mapping is defined only for phi_phase = -pi/2")
    disc = dg.discriminant
    if disc <= tol.tol_gap:
        raise NotBrokenRegimeError(f"r^2 sin^2(theta) - t s = {disc:.6g} is not positive")
    sign = 1.0 if branch == "+" else -1.0
    beta = (dg.r * math.sin(dg.theta) + sign * math.sqrt(disc)) / dg.s
    alpha = 2.0 * beta * dg.s / dg.t
    if alpha == 0.0:
        raise DegenerateParamError("mapping gives alpha = 0")
    re_e = dg.r * math.cos(dg.theta)
    im_e = (2.0 - alpha * beta) / (2.0 * alpha) * dg.s
    return TwoLevelParams(alpha, beta, complex(re_e, im_e), complex(re_e, -im_e))
