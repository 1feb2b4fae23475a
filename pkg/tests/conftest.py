import numpy as np
import pytest

from cnls_gauge import (
    ComplexFieldSet,
    DerivativeSpec,
    DispersionMatrix,
    DriftCubicSpec,
    HydroFields,
    from_hydro,
    make_grid,
)

TWO_PI = 2.0 * np.pi


@pytest.fixture
def grid256():
    return make_grid(256, 0.0, TWO_PI)


@pytest.fixture
def grid128():
    return make_grid(128, 0.0, TWO_PI)


def band_limited_hydro(rng, grid, q, base=1.0, rel_amp=0.15, max_mode=6,
                       phase_amp=0.1):
    """Random smooth (rho, S) with rho bounded away from zero.

    Densities are base * (1 + sum of modes <= max_mode scaled to rel_amp);
    phases are zero-mean mode sums of size phase_amp.
    """
    x = grid.x
    rho = np.empty((q, grid.n_points))
    S = np.empty_like(rho)
    for k in range(q):
        wiggle = np.zeros_like(x)
        phase = np.zeros_like(x)
        for m in range(1, max_mode + 1):
            c = rng.uniform(-1.0, 1.0, 4) / m
            wiggle += c[0] * np.cos(m * x) + c[1] * np.sin(m * x)
            phase += c[2] * np.cos(m * x) + c[3] * np.sin(m * x)
        wiggle *= rel_amp / max(1.0, np.abs(wiggle).max())
        phase *= phase_amp / max(1.0, np.abs(phase).max())
        rho[k] = base * (1.0 + wiggle)
        S[k] = phase
    return HydroFields(rho=rho, S=S, grid=grid)


def band_limited_state(rng, grid, q, **kwargs) -> ComplexFieldSet:
    return from_hydro(band_limited_hydro(rng, grid, q, **kwargs))


def random_derivative_spec(rng, q, scale=1.0) -> DerivativeSpec:
    return DerivativeSpec(
        beta=scale * rng.uniform(-1.0, 1.0, (q, q)),
        gamma=scale * rng.uniform(-1.0, 1.0, (q, q)),
        delta=scale * rng.uniform(-1.0, 1.0, (q, q)),
        lam=scale * rng.uniform(-1.0, 1.0, (q, q, q)),
    )


def random_drift_cubic_spec(rng, q, scale=1.0) -> DriftCubicSpec:
    return DriftCubicSpec(
        delta=scale * rng.uniform(-1.0, 1.0, q),
        gamma=scale * rng.uniform(-1.0, 1.0, q),
    )


def random_dispersion(rng, q) -> DispersionMatrix:
    signs = rng.choice([-1.0, 1.0], q)
    return DispersionMatrix(values=signs * rng.uniform(0.5, 2.0, q))
