"""Coefficient families defining the complex nonlinearity W + i*Wim.

Two families are supported besides the trivial linear case:

* ``DriftCubicSpec`` -- per-species drift delta_k and cubic couplings
  gamma_k:

      W_k   = delta_k dS_k/dx - gamma_k rho_k - 2 sum_{j!=k} gamma_j rho_j
      Wim_k = -(delta_k / 2) dlog(rho_k)/dx

* ``DerivativeSpec`` -- matrix couplings to phase gradients and densities:

      W_k   = sum_j rho_j (beta_kj dS_k/dx + gamma_kj dS_j/dx)
              + sum_{j,i} lambda_kji rho_j rho_i
      Wim_k = 2 delta_kk drho_k/dx
              + sum_{j!=k} delta_kj (drho_j/dx + (rho_j/rho_k) drho_k/dx)

Each imaginary part is a scaled divergence, Wim_k = (1/rho_k) dF_k/dx, for
a closed-form flux F_k; this structure is what makes the species norms
conserved and the gauge reduction possible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .fields import (
    DispersionMatrix,
    HydroFields,
    VacuumError,
    density_gradient,
    phase_gradient,
)

__all__ = [
    "LinearSpec",
    "DriftCubicSpec",
    "DerivativeSpec",
    "FamilySpec",
    "eval_W",
    "eval_Wim",
    "eval_F",
    "eval_W_parts",
    "eval_Wim_parts",
    "eval_F_parts",
]


def _as_array(name: str, value, shape: tuple[int, ...]) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != shape:
        raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must contain finite entries")
    return arr


@dataclass(frozen=True)
class LinearSpec:
    """All-zero nonlinearity (free Schrodinger system)."""

    q: int = 1

    def __post_init__(self) -> None:
        if int(self.q) < 1:
            raise ValueError("q must be >= 1")
        object.__setattr__(self, "q", int(self.q))


@dataclass(frozen=True)
class DriftCubicSpec:
    """Drift-cubic family: per-species drift delta_k and cubic gamma_k."""

    delta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self) -> None:
        delta = np.atleast_1d(np.asarray(self.delta, dtype=float))
        q = delta.size
        object.__setattr__(self, "delta", _as_array("delta", delta, (q,)))
        object.__setattr__(self, "gamma", _as_array("gamma", self.gamma, (q,)))

    @property
    def q(self) -> int:
        return self.delta.size


@dataclass(frozen=True)
class DerivativeSpec:
    """Derivative family: q x q couplings beta, gamma, delta and cubic tensor lam."""

    beta: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray
    lam: np.ndarray

    def __post_init__(self) -> None:
        beta = np.atleast_2d(np.asarray(self.beta, dtype=float))
        q = beta.shape[0]
        object.__setattr__(self, "beta", _as_array("beta", beta, (q, q)))
        object.__setattr__(self, "gamma", _as_array("gamma", self.gamma, (q, q)))
        object.__setattr__(self, "delta", _as_array("delta", self.delta, (q, q)))
        object.__setattr__(self, "lam", _as_array("lam", self.lam, (q, q, q)))

    @property
    def q(self) -> int:
        return self.beta.shape[0]


FamilySpec = Union[LinearSpec, DriftCubicSpec, DerivativeSpec]


def _check_spec_fields(spec: FamilySpec, q: int) -> None:
    if spec.q != q:
        raise ValueError(f"spec species count {spec.q} does not match fields q={q}")


def eval_W_parts(spec: FamilySpec, rho: np.ndarray, dS: np.ndarray) -> np.ndarray:
    """Real part of the nonlinearity from density and phase-gradient samples."""
    if isinstance(spec, LinearSpec):
        return np.zeros_like(rho)
    if isinstance(spec, DriftCubicSpec):
        total = spec.gamma @ rho  # sum_j gamma_j rho_j at every node
        return spec.delta[:, None] * dS + spec.gamma[:, None] * rho - 2.0 * total
    if isinstance(spec, DerivativeSpec):
        W = (spec.beta @ rho) * dS + spec.gamma @ (rho * dS)
        W += np.einsum("kji,jx,ix->kx", spec.lam, rho, rho)
        return W
    raise TypeError(f"unsupported nonlinearity spec: {type(spec).__name__}")


def eval_Wim_parts(
    spec: FamilySpec, rho: np.ndarray, drho: np.ndarray
) -> np.ndarray:
    """Imaginary part of the nonlinearity from density samples and gradients."""
    if isinstance(spec, LinearSpec):
        return np.zeros_like(rho)
    if isinstance(spec, DriftCubicSpec):
        return -0.5 * spec.delta[:, None] * drho / rho
    if isinstance(spec, DerivativeSpec):
        diag = np.diag(spec.delta)
        off = spec.delta - np.diag(diag)
        out = 2.0 * diag[:, None] * drho + off @ drho
        out += (off @ rho) * drho / rho
        return out
    raise TypeError(f"unsupported nonlinearity spec: {type(spec).__name__}")


def eval_F_parts(spec: FamilySpec, rho: np.ndarray) -> np.ndarray:
    """Closed-form flux F_k with Wim_k = (1/rho_k) dF_k/dx."""
    if isinstance(spec, LinearSpec):
        return np.zeros_like(rho)
    if isinstance(spec, DriftCubicSpec):
        return -0.5 * spec.delta[:, None] * rho
    if isinstance(spec, DerivativeSpec):
        return rho * (spec.delta @ rho)
    raise TypeError(f"unsupported nonlinearity spec: {type(spec).__name__}")


def _has_drift(spec: FamilySpec) -> bool:
    if isinstance(spec, DriftCubicSpec):
        return bool(np.any(spec.delta != 0.0))
    if isinstance(spec, DerivativeSpec):
        return bool(np.any(spec.delta != 0.0))
    return False


def _vacuum_guard(spec: FamilySpec, h: HydroFields) -> None:
    if _has_drift(spec) and h.vacuum.any():
        raise VacuumError(
            "density below floor where the nonlinearity divides by rho"
        )


def eval_W(spec: FamilySpec, h: HydroFields, A: DispersionMatrix) -> np.ndarray:
    """Real nonlinearity W_k evaluated on hydrodynamic fields."""
    _check_spec_fields(spec, h.q)
    if A.q != h.q:
        raise ValueError(f"dispersion size {A.q} does not match fields q={h.q}")
    if isinstance(spec, LinearSpec):
        return np.zeros_like(h.rho)
    return eval_W_parts(spec, h.rho, phase_gradient(h))


def eval_Wim(spec: FamilySpec, h: HydroFields) -> np.ndarray:
    """Imaginary nonlinearity Wim_k evaluated on hydrodynamic fields."""
    _check_spec_fields(spec, h.q)
    if isinstance(spec, LinearSpec):
        return np.zeros_like(h.rho)
    _vacuum_guard(spec, h)
    return eval_Wim_parts(spec, h.rho, density_gradient(h))


def eval_F(spec: FamilySpec, h: HydroFields) -> np.ndarray:
    """Flux fields F_k; satisfies (1/rho_k) dF_k/dx == eval_Wim to resolution."""
    _check_spec_fields(spec, h.q)
    return eval_F_parts(spec, h.rho)
