"""Non-unitary time evolution and transition probabilities.

The state evolves as ``Phi(t) = exp(-i H t) Phi_0``, evaluated spectrally as
``phi @ diag(exp(-i E_k t)) @ psi^dagger @ Phi_0``.  The transition
probability uses the ordinary scalar product of C^n:

    P(t) = |<Phi_f, Phi(t)>|^2 / (||Phi_f||^2 ||Phi(t)||^2).

For the two-level model the initial state is expanded over the right
eigenvectors (``Phi_0 = sum c_k phi_k``) and the final state over their
biorthogonal partners (``Phi_f = sum d_k Psi_k``), which gives the closed
forms implemented in :func:`closed_form_ur` and :func:`closed_form_br`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .biortho import BiorthogonalSystem
from .errors import DegenerateParamError, DimensionError, NormalizationError, RegimeError
from .numerics import DEFAULT_TOL, as_vector
from .two_level import TwoLevelParams


@dataclass(frozen=True)
class EvolutionSpec:
    """Initial coefficients over ``phi_k``, final coefficients over ``Psi_k``, and a uniform time grid."""

    c: tuple
    d: tuple
    t_start: float = 0.0
    t_end: float = 10.0
    n_steps: int = 1001

    def __post_init__(self):
        c = tuple(complex(x) for x in self.c)
        d = tuple(complex(x) for x in self.d)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        if not c or not d or len(c) != len(d):
            raise ValueError("c and d must be non-empty and of equal length")
        if not any(c) or not any(d):
            raise ValueError("initial and final states must be non-zero")
        if not self.t_end > self.t_start:
            raise ValueError("t_end must be greater than t_start")
        if int(self.n_steps) < 2:
            raise ValueError("n_steps must be at least 2")
        object.__setattr__(self, "n_steps", int(self.n_steps))

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_steps)


@dataclass(frozen=True, eq=False)
class EvolutionTrace:
    times: np.ndarray
    states: np.ndarray  # shape (n_times, dim)
    norms_sq: np.ndarray
    probs: np.ndarray


def evolve(h, sys: BiorthogonalSystem, phi0, t: float) -> np.ndarray:
    """``exp(-i H t) phi0`` through the spectral decomposition held in ``sys``."""
    phi0 = as_vector(phi0)
    if phi0.size != sys.dim or np.shape(h) != (sys.dim, sys.dim):
        raise DimensionError("state, Hamiltonian and system dimensions differ")
    if t == 0:
        return phi0.copy()
    coeffs = sys.psi.conj().T @ phi0
    return sys.phi @ (np.exp(-1j * sys.eigenvalues * t) * coeffs)


def transition_probability(phif, phit) -> float:
    phif, phit = as_vector(phif), as_vector(phit)
    nf, nt = np.vdot(phif, phif).real, np.vdot(phit, phit).real
    if nf == 0.0 or nt == 0.0:
        raise NormalizationError("transition probability needs non-zero states")
    p = abs(np.vdot(phif, phit)) ** 2 / (nf * nt)
    return float(min(p, 1.0))


def initial_state(sys: BiorthogonalSystem, c) -> np.ndarray:
    return sys.phi @ np.asarray(c, dtype=complex)


def final_state(sys: BiorthogonalSystem, d) -> np.ndarray:
    return sys.psi @ np.asarray(d, dtype=complex)


def trace(h, sys: BiorthogonalSystem, spec: EvolutionSpec) -> EvolutionTrace:
    if len(spec.c) != sys.dim:
        raise DimensionError(f"{len(spec.c)} coefficients for a {sys.dim}-dimensional system")
    if np.shape(h) != (sys.dim, sys.dim):
        raise DimensionError("Hamiltonian and system dimensions differ")
    times = spec.times()
    phi0 = initial_state(sys, spec.c)
    phif = final_state(sys, spec.d)
    coeffs = sys.psi.conj().T @ phi0
    phases = np.exp(-1j * np.outer(times, sys.eigenvalues))
    states = (phases * coeffs) @ sys.phi.T
    states[times == 0] = phi0
    norms_sq = np.einsum("ij,ij->i", states.conj(), states).real
    overlaps = states @ phif.conj()
    probs = np.abs(overlaps) ** 2 / (np.vdot(phif, phif).real * norms_sq)
    return EvolutionTrace(times, states, norms_sq, np.clip(probs, 0.0, 1.0))


# ---------------------------------------------------------------------------
# closed forms for the two-level model


def final_norm_sq(p: TwoLevelParams, d) -> float:
    d1, d2 = complex(d[0]), complex(d[1])
    a, b = p.alpha, p.beta
    val = (abs(d1) ** 2 * (4 + a * a) + abs(d2) ** 2 * (1 + b * b)
           - (a + 2 * b) * 2 * (d1.conjugate() * d2).real)
    return val / p.denom ** 2


def _unpack(spec: EvolutionSpec):
    if len(spec.c) != 2:
        raise DimensionError("closed forms need two-level coefficients")
    return spec.c[0], spec.c[1], spec.d[0], spec.d[1]


def closed_form_ur(p: TwoLevelParams, spec: EvolutionSpec, t):
    """``(norm_sq, overlap_sq, prob)`` for real ``E1``, ``E2``; ``t`` may be an array."""
    if p.e1.imag != 0.0 or p.e2.imag != 0.0:
        raise RegimeError("closed_form_ur needs real eigenvalues")
    c1, c2, d1, d2 = _unpack(spec)
    a, b = p.alpha, p.beta
    t = np.asarray(t, dtype=float)
    osc = np.exp(1j * (p.e1.real - p.e2.real) * t)
    cross = c1.conjugate() * c2 * osc
    norm_sq = abs(c1) ** 2 * (1 + b * b) + abs(c2) ** 2 * (4 + a * a) + (a + 2 * b) * 2 * cross.real
    ov = c1.conjugate() * c2 * d1 * d2.conjugate() * osc
    overlap_sq = abs(c1) ** 2 * abs(d1) ** 2 + abs(c2) ** 2 * abs(d2) ** 2 + 2 * ov.real
    prob = overlap_sq / (final_norm_sq(p, spec.d) * norm_sq)
    return norm_sq, overlap_sq, prob


def closed_form_br(p: TwoLevelParams, spec: EvolutionSpec, t):
    """``(norm_sq, overlap_sq, prob)`` for ``E1 = conj(E2) = R + iI``; ``t`` may be an array."""
    scale = max(1.0, abs(p.e1))
    if abs(p.e1 - p.e2.conjugate()) > DEFAULT_TOL.tol_gap * scale or p.e1.imag == 0.0:
        raise RegimeError("closed_form_br needs E1 = conj(E2) with non-zero imaginary part")
    c1, c2, d1, d2 = _unpack(spec)
    a, b, im = p.alpha, p.beta, p.e1.imag
    t = np.asarray(t, dtype=float)
    grow, decay = np.exp(2 * im * t), np.exp(-2 * im * t)
    norm_sq = (abs(c1) ** 2 * (1 + b * b) * grow + abs(c2) ** 2 * (4 + a * a) * decay
               + (a + 2 * b) * 2 * (c1.conjugate() * c2).real)
    overlap_sq = (abs(c1) ** 2 * abs(d1) ** 2 * grow + abs(c2) ** 2 * abs(d2) ** 2 * decay
                  + 2 * (c1.conjugate() * c2 * d1 * d2.conjugate()).real)
    prob = overlap_sq / (final_norm_sq(p, spec.d) * norm_sq)
    return norm_sq, overlap_sq, prob


def closed_form(p: TwoLevelParams, spec: EvolutionSpec, t):
    """Dispatch to the unbroken or broken closed form."""
    if p.e1.imag == 0.0 and p.e2.imag == 0.0:
        return closed_form_ur(p, spec, t)
    return closed_form_br(p, spec, t)


# ---------------------------------------------------------------------------
# long-time behaviour


class Behavior(enum.Enum):
    PERIODIC = "periodic"
    QUASI_PERIODIC = "quasi-periodic"
    CONVERGES = "converges"
    DECAYS_TO_ZERO = "decays-to-zero"


@dataclass(frozen=True)
class Asymptote:
    """``value`` is the period for periodic motion and the limit for converging motion."""

    behavior: Behavior
    value: float | None = None

    def describe(self) -> str:
        if self.behavior is Behavior.PERIODIC:
            return f"periodic with T={self.value:.17g}"
        if self.behavior is Behavior.CONVERGES:
            return f"converges to {self.value:.17g}"
        return self.behavior.value


_ZERO_LIMIT = 1e-14


def asymptote_and_period(p: TwoLevelParams, spec: EvolutionSpec) -> Asymptote:
    """Periodic when both eigenvalues share their imaginary part, otherwise a limit.

    In the second case the limit is the ratio of the dominant exponentials of
    the closed forms: if ``Im(E_k)`` is largest among the populated ``phi_k``,
    ``P -> |d_k|^2 / (||phi_k||^2 ||Phi_f||^2)``.
    """
    if p.e1 == p.e2:
        raise DegenerateParamError("exceptional point: E1 = E2")
    c1, c2, d1, d2 = _unpack(spec)
    im1, im2 = p.e1.imag, p.e2.imag
    if abs(im1 - im2) <= DEFAULT_TOL.tol_gap * max(1.0, abs(p.e1), abs(p.e2)):
        return Asymptote(Behavior.PERIODIC, 2 * math.pi / abs(p.e1.real - p.e2.real))

    norm_phi = (1 + p.beta ** 2, 4 + p.alpha ** 2)
    coeff_d = (d1, d2)
    populated = [k for k, c in enumerate((c1, c2)) if c != 0]
    k = max(populated, key=lambda j: (im1, im2)[j])
    limit = abs(coeff_d[k]) ** 2 / (norm_phi[k] * final_norm_sq(p, spec.d))
    if limit <= _ZERO_LIMIT:
        return Asymptote(Behavior.DECAYS_TO_ZERO, 0.0)
    return Asymptote(Behavior.CONVERGES, float(limit))


def spectral_asymptote(sys: BiorthogonalSystem, c, d) -> Asymptote:
    """Long-time behaviour of ``P(t)`` for a general system, by dominant balance."""
    c = np.asarray(c, dtype=complex)
    d = np.asarray(d, dtype=complex)
    e = sys.eigenvalues
    populated = np.flatnonzero(c != 0)
    if populated.size == 0:
        raise ValueError("initial state is zero")
    scale = max(1.0, np.abs(e).max())
    top = e[populated].imag.max()
    dominant = populated[np.abs(e[populated].imag - top) <= DEFAULT_TOL.tol_gap * scale]
    if dominant.size == 1:
        k = dominant[0]
        phif = sys.psi @ d
        phik = sys.phi[:, k]
        limit = abs(np.vdot(phif, phik)) ** 2 / (np.vdot(phif, phif).real * np.vdot(phik, phik).real)
        if limit <= _ZERO_LIMIT:
            return Asymptote(Behavior.DECAYS_TO_ZERO, 0.0)
        return Asymptote(Behavior.CONVERGES, float(limit))
    freqs = np.unique(np.round(e[dominant].real, 12))
    if dominant.size == populated.size and dominant.size == 2:
        return Asymptote(Behavior.PERIODIC, 2 * math.pi / abs(freqs[-1] - freqs[0]))
    return Asymptote(Behavior.QUASI_PERIODIC)
