"""Gauge reduction of complex nonlinearities to real ones.

The diagonal unitary map phi_k = exp(i sigma_k) psi_k removes the imaginary
part of the nonlinearity when the real generator satisfies

    dsigma_k/dx = F_k / (A_k rho_k),

with F_k the closed-form flux of the imaginary part. The transformed system
carries a purely real nonlinearity

    R_k = W_k - A_k (dsigma_k/dx)^2 + J_k dsigma_k/dx / rho_k + dsigma_k/dt,

which for both supported families collapses to closed coefficient tables
(``TransformedSpec``). This module builds generators, applies and inverts
the map, evaluates R both ways, and checks the 2-D curl feasibility
condition for vector fluxes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .fields import (
    ComplexFieldSet,
    DispersionMatrix,
    HydroFields,
    VacuumError,
    phase_gradient,
    to_hydro,
)
from .grid import Grid1D, antiderivative_parts, derivative
from .nonlinearity import (
    DerivativeSpec,
    DriftCubicSpec,
    FamilySpec,
    LinearSpec,
    eval_F,
    eval_F_parts,
    eval_W_parts,
)

__all__ = [
    "GaugeGenerator",
    "TransformedSpec",
    "Grid2D",
    "compute_generator",
    "apply_gauge",
    "invert_gauge",
    "phase_relation_residual",
    "cole_hopf_G",
    "curl_residual_2d",
    "transformed_spec_drift",
    "transformed_spec_derivative",
    "transformed_spec_linear",
    "eval_transformed",
    "eval_transformed_parts",
    "eval_R_numeric",
    "RAMP_PERIOD_TOL",
]

# Tolerance on ramp*L/(2*pi) being an integer for grid periodicity.
RAMP_PERIOD_TOL = 1e-9


@dataclass(frozen=True)
class GaugeGenerator:
    """Per-species generator sigma_k split as periodic part + linear ramp.

    sigma_k(x) = sigma[k] + ramp[k] * (x - x[anchor]); sigma_k vanishes at
    the anchor node. The split is kept explicit because the ramp is not
    grid-periodic; ``derivative(sigma) + ramp`` reconstructs dsigma/dx.
    """

    sigma: np.ndarray
    ramp: np.ndarray
    anchor: int
    grid: Grid1D
    spec: FamilySpec
    A: DispersionMatrix

    def __post_init__(self) -> None:
        sigma = np.asarray(self.sigma, dtype=float)
        ramp = np.atleast_1d(np.asarray(self.ramp, dtype=float))
        if sigma.ndim != 2 or sigma.shape[1] != self.grid.n_points:
            raise ValueError(f"sigma must be (q, n_points), got {sigma.shape}")
        if ramp.shape != (sigma.shape[0],):
            raise ValueError("ramp must hold one slope per species")
        if not 0 <= int(self.anchor) < self.grid.n_points:
            raise ValueError(f"anchor index {self.anchor} out of range")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "ramp", ramp)
        object.__setattr__(self, "anchor", int(self.anchor))

    @property
    def q(self) -> int:
        return self.sigma.shape[0]

    @property
    def x_anchor(self) -> float:
        return float(self.grid.x[self.anchor])

    def values(self) -> np.ndarray:
        """Full sigma samples, periodic part plus ramp."""
        return self.sigma + self.ramp[:, None] * (self.grid.x - self.x_anchor)

    def gradient(self) -> np.ndarray:
        """dsigma/dx samples; equals F/(A rho) of the generating state."""
        return derivative(self.sigma, self.grid) + self.ramp[:, None]

    def ramp_windings(self) -> np.ndarray:
        """ramp * L / (2*pi) per species; integer values keep phi periodic."""
        return self.ramp * self.grid.length / (2.0 * np.pi)

    def ramp_is_periodic(self, tol: float = RAMP_PERIOD_TOL) -> bool:
        w = self.ramp_windings()
        return bool(np.all(np.abs(w - np.rint(w)) <= tol))


@dataclass(frozen=True)
class TransformedSpec:
    """Coefficient tables of the purely real transformed nonlinearity.

    R_k = const_shift[k]
          + sum_j cubic[k,j] rho_j
          + sum_j drift_self[k,j] rho_j dS_k/dx
          + sum_j drift_cross[k,j] rho_j dS_j/dx
          + sum_{j,i} quartic[k,j,i] rho_j rho_i
    """

    drift_self: np.ndarray
    drift_cross: np.ndarray
    cubic: np.ndarray
    quartic: np.ndarray
    const_shift: np.ndarray

    def __post_init__(self) -> None:
        ds = np.atleast_2d(np.asarray(self.drift_self, dtype=float))
        q = ds.shape[0]
        checks = {
            "drift_self": (ds, (q, q)),
            "drift_cross": (np.asarray(self.drift_cross, dtype=float), (q, q)),
            "cubic": (np.asarray(self.cubic, dtype=float), (q, q)),
            "quartic": (np.asarray(self.quartic, dtype=float), (q, q, q)),
            "const_shift": (np.atleast_1d(np.asarray(self.const_shift, dtype=float)), (q,)),
        }
        for name, (arr, shape) in checks.items():
            if arr.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must contain finite entries")
            object.__setattr__(self, name, arr)

    @property
    def q(self) -> int:
        return self.drift_self.shape[0]

    @classmethod
    def zeros(cls, q: int) -> "TransformedSpec":
        return cls(
            drift_self=np.zeros((q, q)),
            drift_cross=np.zeros((q, q)),
            cubic=np.zeros((q, q)),
            quartic=np.zeros((q, q, q)),
            const_shift=np.zeros(q),
        )


def compute_generator(
    spec: FamilySpec,
    h: HydroFields,
    A: DispersionMatrix,
    anchor: int = 0,
) -> GaugeGenerator:
    """Integrate dsigma/dx = F/(A rho) from the anchor node.

    Drift-cubic specs yield a pure ramp -delta_k/(2 A_k); derivative specs
    yield sigma_k = (1/A_k) sum_j delta_kj * antiderivative(rho_j).
    """
    if A.q != h.q:
        raise ValueError(f"dispersion size {A.q} does not match fields q={h.q}")
    if spec.q != h.q:
        raise ValueError(f"spec species count {spec.q} does not match fields q={h.q}")
    if isinstance(spec, LinearSpec):
        return GaugeGenerator(
            sigma=np.zeros_like(h.rho),
            ramp=np.zeros(h.q),
            anchor=anchor,
            grid=h.grid,
            spec=spec,
            A=A,
        )
    if h.vacuum.any():
        raise VacuumError("cannot integrate F/(A rho) through vacuum nodes")
    integrand = eval_F_parts(spec, h.rho) / (A.values[:, None] * h.rho)
    sigma, ramp = antiderivative_parts(integrand, h.grid, anchor)
    return GaugeGenerator(
        sigma=sigma, ramp=ramp, anchor=anchor, grid=h.grid, spec=spec, A=A
    )


def _check_gen_fields(fields: ComplexFieldSet, gen: GaugeGenerator) -> None:
    if fields.q != gen.q or fields.grid.n_points != gen.grid.n_points:
        raise ValueError(
            f"field shape ({fields.q}, {fields.grid.n_points}) does not match "
            f"generator shape ({gen.q}, {gen.grid.n_points})"
        )


def apply_gauge(psi: ComplexFieldSet, gen: GaugeGenerator) -> ComplexFieldSet:
    """phi_k = exp(i sigma_k) psi_k; densities are preserved pointwise.

    When the ramp winding is not an integer the result is flagged
    ``non_periodic_ramp`` (and a warning is issued): the samples remain
    exact but the underlying function is not grid-periodic, so spectral
    evolution of the result is refused downstream.
    """
    _check_gen_fields(psi, gen)
    phase = np.exp(1j * gen.values())
    flagged = not gen.ramp_is_periodic()
    if flagged:
        warnings.warn(
            "gauge ramp winding is not an integer; transformed field is not "
            "grid-periodic",
            stacklevel=2,
        )
    return ComplexFieldSet(
        data=phase * psi.data,
        grid=psi.grid,
        non_periodic_ramp=flagged != psi.non_periodic_ramp,
    )


def invert_gauge(phi: ComplexFieldSet, gen: GaugeGenerator) -> ComplexFieldSet:
    """Inverse map psi_k = exp(-i sigma_k) phi_k (unitary inverse)."""
    _check_gen_fields(phi, gen)
    phase = np.exp(-1j * gen.values())
    flagged = not gen.ramp_is_periodic()
    return ComplexFieldSet(
        data=phase * phi.data,
        grid=phi.grid,
        non_periodic_ramp=flagged != phi.non_periodic_ramp,
    )


def _wrap_to_pi(v: np.ndarray) -> np.ndarray:
    return (v + np.pi) % (2.0 * np.pi) - np.pi


def phase_relation_residual(
    h_psi: HydroFields, h_phi: HydroFields, gen: GaugeGenerator
) -> np.ndarray:
    """sup_x distance(S_phi - S_psi - sigma, 2*pi*Z) per species.

    Vanishes exactly when the transformed phase relation S_phi = S_psi +
    sigma holds modulo a global 2*pi branch.
    """
    if h_psi.q != h_phi.q or h_psi.q != gen.q:
        raise ValueError("species counts of the two states and generator differ")
    mismatch = h_phi.S - h_psi.S - gen.values()
    return np.abs(_wrap_to_pi(mismatch)).max(axis=-1)


def cole_hopf_G(
    psi: ComplexFieldSet, spec: FamilySpec, A: DispersionMatrix
) -> np.ndarray:
    """Generalized Cole-Hopf functional G_k = dlog(psi_k)/dx + i F_k/(A_k rho_k).

    The gauge image phi satisfies dlog(phi_k)/dx = G_k, which reduces to the
    classical Cole-Hopf map when G is prescribed as the field itself.
    """
    h = to_hydro(psi)
    if h.vacuum.any():
        raise VacuumError("G is undefined at vacuum nodes")
    dlog = derivative(psi.data, psi.grid) / psi.data
    F = eval_F(spec, h)
    return dlog + 1j * F / (A.values[:, None] * h.rho)


@dataclass(frozen=True)
class Grid2D:
    """Uniform 2-D grid descriptor for the curl feasibility check."""

    nx: int
    ny: int
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self) -> None:
        if self.nx < 4 or self.ny < 4:
            raise ValueError("need at least 4 nodes per direction")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("domain endpoints out of order")

    @cached_property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx, endpoint=False)

    @cached_property
    def y(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.ny, endpoint=False)


def curl_residual_2d(
    Fx: np.ndarray, Fy: np.ndarray, rho: np.ndarray, grid2: Grid2D
) -> float:
    """sup |d(Fy/rho)/dx - d(Fx/rho)/dy| over the 2-D grid.

    A vanishing residual is the feasibility condition for a single-valued
    generator in two dimensions. Differentiation uses second-order centered
    differences (exact for the affine fields of interest), so the inputs
    need not be periodic.
    """
    Fx = np.asarray(Fx, dtype=float)
    Fy = np.asarray(Fy, dtype=float)
    rho = np.asarray(rho, dtype=float)
    shape = (grid2.nx, grid2.ny)
    for name, arr in (("Fx", Fx), ("Fy", Fy), ("rho", rho)):
        if arr.shape != shape:
            raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
    vx = Fx / rho
    vy = Fy / rho
    dvy_dx = np.gradient(vy, grid2.x, axis=0, edge_order=2)
    dvx_dy = np.gradient(vx, grid2.y, axis=1, edge_order=2)
    return float(np.abs(dvy_dx - dvx_dy).max())


def transformed_spec_drift(
    spec: DriftCubicSpec, A: DispersionMatrix
) -> TransformedSpec:
    """Transformed coefficients for the drift-cubic family.

    The drift is absorbed entirely into the constant potential shift
    delta_k^2/(4 A_k) (completing the square of the drift term); the cubic
    couplings pass through unchanged.
    """
    q = spec.q
    if A.q != q:
        raise ValueError(f"dispersion size {A.q} does not match spec q={q}")
    cubic = np.tile(-2.0 * spec.gamma, (q, 1))
    cubic[np.arange(q), np.arange(q)] = -spec.gamma
    return TransformedSpec(
        drift_self=np.zeros((q, q)),
        drift_cross=np.zeros((q, q)),
        cubic=cubic,
        quartic=np.zeros((q, q, q)),
        const_shift=spec.delta**2 / (4.0 * A.values),
    )


def transformed_spec_derivative(
    spec: DerivativeSpec, A: DispersionMatrix
) -> TransformedSpec:
    """Transformed coefficients for the derivative family."""
    q = spec.q
    if A.q != q:
        raise ValueError(f"dispersion size {A.q} does not match spec q={q}")
    Ak = A.values
    drift_self = spec.beta + 2.0 * spec.delta
    drift_cross = spec.gamma - 2.0 * spec.delta * (Ak[None, :] / Ak[:, None])
    quartic = -(
        spec.delta[:, :, None]
        * (spec.delta[:, None, :] + spec.beta[:, None, :])
        / Ak[:, None, None]
        + spec.gamma[:, :, None] * spec.delta[None, :, :] / Ak[None, :, None]
        - spec.lam
    )
    return TransformedSpec(
        drift_self=drift_self,
        drift_cross=drift_cross,
        cubic=np.zeros((q, q)),
        quartic=quartic,
        const_shift=np.zeros(q),
    )


def transformed_spec_linear(spec: LinearSpec) -> TransformedSpec:
    """Transformed coefficients of the trivial linear system (all zero)."""
    return TransformedSpec.zeros(spec.q)


def eval_transformed_parts(
    tspec: TransformedSpec, rho: np.ndarray, dS: np.ndarray
) -> np.ndarray:
    """Evaluate R_k from density and phase-gradient samples."""
    R = np.broadcast_to(tspec.const_shift[:, None], rho.shape).copy()
    R += tspec.cubic @ rho
    R += (tspec.drift_self @ rho) * dS
    R += tspec.drift_cross @ (rho * dS)
    R += np.einsum("kji,jx,ix->kx", tspec.quartic, rho, rho)
    return R


def eval_transformed(tspec: TransformedSpec, h: HydroFields) -> np.ndarray:
    """Evaluate R_k on the transformed system's hydrodynamic fields."""
    if tspec.q != h.q:
        raise ValueError(f"spec species count {tspec.q} does not match fields q={h.q}")
    return eval_transformed_parts(tspec, h.rho, phase_gradient(h))


def eval_R_numeric(
    spec: FamilySpec,
    h_phi: HydroFields,
    gen: GaugeGenerator,
    A: DispersionMatrix,
    J: np.ndarray,
) -> np.ndarray:
    """Direct evaluation of the transformed nonlinearity.

    R_k = W_k - A_k (dsigma_k/dx)^2 + J_k dsigma_k/dx / rho_k + dsigma_k/dt,

    with W_k evaluated on the pre-transform phase gradient dS = dS_phi -
    dsigma/dx and J the transformed-system currents. The generator of the
    drift-cubic family is time-independent; for the derivative family
    dsigma_k/dt follows from the continuity equations,

        dsigma_k/dt = -(1/A_k) sum_j delta_kj (j_j(x) - j_j(anchor)),

    whose anchor term is a spatially constant (time-dependent) global
    phase. Agreement with ``eval_transformed`` therefore holds up to a
    spatial constant per species.
    """
    if not (spec.q == h_phi.q == gen.q == A.q):
        raise ValueError("species counts of spec, fields, generator and A differ")
    J = np.asarray(J, dtype=float)
    if J.shape != h_phi.rho.shape:
        raise ValueError(f"J must have shape {h_phi.rho.shape}, got {J.shape}")
    if h_phi.vacuum.any():
        raise VacuumError("R is undefined at vacuum nodes")
    rho = h_phi.rho
    dsigma = gen.gradient()
    dS_psi = phase_gradient(h_phi) - dsigma
    W = eval_W_parts(spec, rho, dS_psi)
    R = W - A.values[:, None] * dsigma**2 + J * dsigma / rho
    if isinstance(spec, DerivativeSpec):
        flux = eval_F_parts(spec, rho)
        current = 2.0 * (A.values[:, None] * rho * dS_psi + flux)
        rel = current - current[:, gen.anchor, None]
        R -= (spec.delta @ rel) / A.values[:, None]
    return R
