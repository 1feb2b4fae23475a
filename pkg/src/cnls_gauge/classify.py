"""Recognition of named single-species cases and reduction-case builders.

For q = 1 the derivative family contains several classical equations,
recognized from the scalar coefficients (beta, gamma, delta, lambda):

* Jackiw:        delta = 0 and lambda = 0
* Chen-Lee-Liu:  4*delta + beta + gamma = 0 and lambda = 0
* Kaup-Newell:   4*delta + 3*(beta + gamma) = 0 and lambda = 0

The three ``case*_coeffs`` builders produce derivative-family coefficient
sets whose gauge transform collapses to, respectively, decoupled linear
equations, decoupled current-coupled (Jackiw-like) equations, and a system
coupled only through the transformed currents.
"""

from __future__ import annotations

import enum

import numpy as np

from .fields import DispersionMatrix
from .nonlinearity import DerivativeSpec

__all__ = [
    "SpecialCase",
    "classify_q1",
    "case1_coeffs",
    "case2_coeffs",
    "case3_coeffs",
    "DEFAULT_CLASSIFY_TOL",
]

DEFAULT_CLASSIFY_TOL = 1e-12


class SpecialCase(enum.Enum):
    JACKIW = "Jackiw"
    CHEN_LEE_LIU = "ChenLeeLiu"
    KAUP_NEWELL = "KaupNewell"
    GENERIC = "Generic"


def classify_q1(
    beta: float,
    gamma: float,
    delta: float,
    lam: float,
    tol: float = DEFAULT_CLASSIFY_TOL,
) -> frozenset[SpecialCase]:
    """Label set for the scalar (q = 1) derivative-family coefficients.

    The linear conditions are tested relative to scale = max(|beta|,
    |gamma|, |delta|, 1) so that rescaling all three couplings preserves
    the labels; conditions may overlap, Generic appears only alone.
    """
    if not tol > 0:
        raise ValueError("tol must be > 0")
    beta, gamma, delta, lam = (float(v) for v in (beta, gamma, delta, lam))
    scale = max(abs(beta), abs(gamma), abs(delta), 1.0)
    labels = set()
    if abs(lam) <= tol:
        if abs(delta) <= tol:
            labels.add(SpecialCase.JACKIW)
        if abs(4.0 * delta + beta + gamma) <= tol * scale:
            labels.add(SpecialCase.CHEN_LEE_LIU)
        if abs(4.0 * delta + 3.0 * (beta + gamma)) <= tol * scale:
            labels.add(SpecialCase.KAUP_NEWELL)
    if not labels:
        labels.add(SpecialCase.GENERIC)
    return frozenset(labels)


def _as_delta(delta, A: DispersionMatrix) -> np.ndarray:
    delta = np.atleast_2d(np.asarray(delta, dtype=float))
    q = A.q
    if delta.shape != (q, q):
        raise ValueError(f"delta must have shape {(q, q)}, got {delta.shape}")
    return delta


def case1_coeffs(delta, A: DispersionMatrix) -> DerivativeSpec:
    """Coefficients whose transformed system is decoupled and linear.

    beta_kj = -2 delta_kj, gamma_kj = 2 A_j delta_kj / A_k,
    lam_kji = delta_kj (2 delta_ji - delta_ki) / A_k.
    """
    delta = _as_delta(delta, A)
    Ak = A.values
    beta = -2.0 * delta
    gamma = 2.0 * delta * Ak[None, :] / Ak[:, None]
    lam = (
        delta[:, :, None]
        * (2.0 * delta[None, :, :] - delta[:, None, :])
        / Ak[:, None, None]
    )
    return DerivativeSpec(beta=beta, gamma=gamma, delta=delta, lam=lam)


def case2_coeffs(
    delta, beta_diag, A: DispersionMatrix
) -> tuple[DerivativeSpec, np.ndarray]:
    """Coefficients whose transformed system decouples into Jackiw-like
    equations driven by the species' own current with strength eta_k.

    Off-diagonal beta and all gamma follow the decoupling recipe of case 1;
    beta_kk stays free. The cubic tensor is patched on the index patterns
    that touch the diagonal:

        lam_kkk = delta_kk (beta_kk + 3 delta_kk) / A_k
        lam_kjk = delta_kj (beta_kk + delta_kk + 2 delta_jk) / A_k   (j != k)
        lam_kki = delta_kk delta_ki / A_k                            (i != k)
        lam_kji = delta_kj (2 delta_ji - delta_ki) / A_k             otherwise

    Returns the spec together with eta_k = (beta_kk + 2 delta_kk)/(2 A_k).
    """
    delta = _as_delta(delta, A)
    q = A.q
    Ak = A.values
    beta_diag = np.atleast_1d(np.asarray(beta_diag, dtype=float))
    if beta_diag.shape != (q,):
        raise ValueError(f"beta_diag must have shape {(q,)}, got {beta_diag.shape}")
    beta = -2.0 * delta
    beta[np.arange(q), np.arange(q)] = beta_diag
    gamma = 2.0 * delta * Ak[None, :] / Ak[:, None]
    lam = (
        delta[:, :, None]
        * (2.0 * delta[None, :, :] - delta[:, None, :])
        / Ak[:, None, None]
    )
    dkk = delta[np.arange(q), np.arange(q)]
    for k in range(q):
        for j in range(q):
            if j == k:
                for i in range(q):
                    if i == k:
                        lam[k, k, k] = dkk[k] * (beta_diag[k] + 3.0 * dkk[k]) / Ak[k]
                    else:
                        lam[k, k, i] = dkk[k] * delta[k, i] / Ak[k]
            else:
                lam[k, j, k] = (
                    delta[k, j] * (beta_diag[k] + dkk[k] + 2.0 * delta[j, k]) / Ak[k]
                )
    eta = (beta_diag + 2.0 * dkk) / (2.0 * Ak)
    return DerivativeSpec(beta=beta, gamma=gamma, delta=delta, lam=lam), eta


def case3_coeffs(
    delta, gamma, A: DispersionMatrix
) -> tuple[DerivativeSpec, np.ndarray]:
    """Coefficients whose transformed system couples only through the
    transformed currents with strengths eta_kj.

    beta_kj = -2 delta_kj, lam_kji = gamma_kj delta_ji / A_j
    - delta_kj delta_ki / A_k, with gamma free. Returns the spec and
    eta_kj = (gamma_kj - 2 A_j delta_kj / A_k) / (2 A_j).
    """
    delta = _as_delta(delta, A)
    q = A.q
    Ak = A.values
    gamma = np.atleast_2d(np.asarray(gamma, dtype=float))
    if gamma.shape != (q, q):
        raise ValueError(f"gamma must have shape {(q, q)}, got {gamma.shape}")
    beta = -2.0 * delta
    lam = (
        gamma[:, :, None] * delta[None, :, :] / Ak[None, :, None]
        - delta[:, :, None] * delta[:, None, :] / Ak[:, None, None]
    )
    eta = (gamma - 2.0 * delta * Ak[None, :] / Ak[:, None]) / (2.0 * Ak[None, :])
    return DerivativeSpec(beta=beta, gamma=gamma, delta=delta, lam=lam), eta
