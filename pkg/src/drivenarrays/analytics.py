"""Closed-form dimer results: eigenfrequencies, the weak-drive g2 formula,
the bunching onset point, boundary and asymptotes, and the hardcore-limit
population.

All formulas take rates in units of gamma_p.  The weak-drive g2 follows
from the stationary state of the non-Hermitian Hamiltonian with the
two-site ansatz C00|00> + C1(|01>+|10>) + C11|11> + C2(|02>+|20>):
solving the order-Omega and order-Omega^2 amplitude equations gives

    C1 = -Omega C00 / (Dt - J)
    C2 = -sqrt(2) Omega C1 (Dt + J) / (2 (Dt^2 + U Dt - J^2))

with Dt = Delta_c - i gamma_p / 2, and g2 = 2 |C2|^2 / |C1|^4
= |Dt^2 - J^2|^2 / |Dt^2 + U Dt - J^2|^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .models import resonance_detuning_bh


@dataclass(frozen=True)
class DimerEigenfrequencies:
    """Dimer eigenfrequencies relative to omega_c (one-photon) and
    2 omega_c (two-photon)."""

    one_photon: tuple     # (omega_plus, omega_minus) = (-J, +J)
    two_photon: tuple     # (omega_plus, omega_zero, omega_minus)


def dimer_eigenfrequencies(J: float, U: float) -> DimerEigenfrequencies:
    if J < 0 or U < 0:
        raise ValueError("J and U must be non-negative")
    root = np.sqrt(U * U + 4.0 * J * J)
    return DimerEigenfrequencies(
        one_photon=(-J, J),
        two_photon=(U - root, 2.0 * U, U + root))


def g2_closed_form(J: float, U: float, gamma_p: float = 1.0) -> float:
    """Weak-drive dimer g2 at the two-photon resonance detuning."""
    delta_c = resonance_detuning_bh(J, U)
    dt = delta_c - 0.5j * gamma_p
    num = dt * dt - J * J
    den = dt * dt + U * dt - J * J
    return float(abs(num) ** 2 / abs(den) ** 2)


def g2_unity_boundary(U: float) -> float:
    """Large-U bunched-to-antibunched boundary J = sqrt(U / 2)."""
    if U <= 0:
        raise ValueError("U must be positive")
    return float(np.sqrt(U / 2.0))


def g2_large_u_asymptote(J: float, U: float) -> float:
    """Large-U/J expansion (J/U)^2 (1 + 4 J^2) of the weak-drive g2."""
    return float((J / U) ** 2 * (1.0 + 4.0 * J * J))


def hardcore_population(Omega: float, J: float, gamma_p: float = 1.0) -> float:
    """Per-site population in the hardcore (U -> infinity) limit."""
    if Omega <= 0:
        raise ValueError("Omega must be positive")
    x = (2.0 * Omega / gamma_p) ** 2
    y = (J / Omega) ** 2
    return float(x * (2.0 * x + 1.0) / ((2.0 * x + 1.0) ** 2 + x * y))


def line_crossing_ratio() -> float:
    """U/J ratio at which emission lines B and C cross (smaller root)."""
    return float((9.0 - np.sqrt(17.0)) / 4.0)


# Quoted onset coupling sqrt(3 + 2 sqrt(2)) / 4 and the factor-2 alternative
# favoured by the tangency analysis of the closed-form g2.
ONSET_J_QUOTED = float(np.sqrt(3.0 + 2.0 * np.sqrt(2.0)) / 4.0)
ONSET_J_RESCALED = float(np.sqrt(3.0 + 2.0 * np.sqrt(2.0)) / 2.0)


@dataclass(frozen=True)
class CriticalPoint:
    """Minimum hopping for bunched statistics and the nonlinearity there."""

    J_c: float
    U_c: float
    source: str                    # "quoted" or "located"
    matches_candidate: str = ""    # which closed-form candidate J_c matches


def max_g2_over_u(J: float, gamma_p: float = 1.0):
    """(U*, g2(U*)) at the interior bunching peak of g2(U) at fixed J.

    g2(U) -> 1 as U -> 0, so the relevant feature is the interior local
    maximum; when none exists (J below the onset) this returns (None, the
    supremum over the scan grid).
    """
    lus = np.linspace(np.log(1e-3), np.log(1e4), 2000)
    g = np.array([g2_closed_form(J, np.exp(lu), gamma_p) for lu in lus])
    loc = np.flatnonzero((g[1:-1] > g[:-2]) & (g[1:-1] > g[2:])) + 1
    if loc.size == 0:
        return None, float(g.max())
    k = loc[np.argmax(g[loc])]
    res = minimize_scalar(lambda lu: -g2_closed_form(J, np.exp(lu), gamma_p),
                          bounds=(lus[k - 1], lus[k + 1]), method="bounded",
                          options={"xatol": 1e-14})
    u_star = float(np.exp(res.x))
    return u_star, g2_closed_form(J, u_star, gamma_p)


def critical_point(locate: bool = False, gamma_p: float = 1.0) -> CriticalPoint:
    """Bunching onset (J_c, U_c).

    locate=False returns the quoted pair; locate=True finds the tangency
    point where the interior peak of the closed-form g2(U) reaches 1 and
    reports which of the two candidate couplings it matches.
    """
    if not locate:
        return CriticalPoint(J_c=ONSET_J_QUOTED,
                             U_c=float(np.sqrt(ONSET_J_QUOTED)),
                             source="quoted")
    h = lambda J: max_g2_over_u(J, gamma_p)[1] - 1.0
    J_c = brentq(h, 1.1, 2.0, xtol=1e-12, rtol=8.9e-16)
    U_c = max_g2_over_u(J_c, gamma_p)[0]
    cands = {"sqrt(3+2sqrt2)/4": ONSET_J_QUOTED,
             "sqrt(3+2sqrt2)/2": ONSET_J_RESCALED}
    name = min(cands, key=lambda k: abs(cands[k] - J_c))
    return CriticalPoint(J_c=float(J_c), U_c=float(U_c), source="located",
                         matches_candidate=name)
