"""Square input-output quantity model.

Given a nonnegative technical-coefficient matrix ``a`` with spectral
radius below one (a productive economy), gross output solves
``(I - a) x = y`` and factor use is ``phi = f x``.  The spectral radius
is estimated by power iteration; linear systems are solved by LU
factorization with an explicit residual check rather than by forming
the inverse times the right-hand side.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from heconet import kernels
from heconet.config import DEFAULT_TOLERANCES, Tolerances


class NonProductiveEconomyError(ValueError):
    """Spectral radius of the coefficient matrix is not below one."""

    def __init__(self, radius: float):
        self.radius = radius
        super().__init__(
            f"economy is not productive: spectral radius {radius:.12g} >= 1")


class SingularSystemError(RuntimeError):
    """The Leontief system could not be solved to the required residual."""


def _as_square_coefficients(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"coefficient matrix must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("coefficient matrix must be finite")
    if np.any(a < 0):
        raise ValueError("coefficient matrix must be nonnegative")
    return a


@dataclass(frozen=True)
class SquareEio:
    """One-technology-per-sector economy: coefficients plus factor rows."""

    a: np.ndarray
    f: np.ndarray
    labels: tuple[str, ...] = ()
    factor_labels: tuple[str, ...] = ()

    def __post_init__(self):
        a = _as_square_coefficients(self.a).copy()
        f = np.asarray(self.f, dtype=float)
        if f.ndim != 2 or f.shape[1] != a.shape[0]:
            raise ValueError(
                f"factor matrix must have {a.shape[0]} columns, got shape {f.shape}")
        if not np.all(np.isfinite(f)) or np.any(f < 0):
            raise ValueError("factor matrix must be finite and nonnegative")
        labels = tuple(self.labels) or tuple(f"s{i + 1}" for i in range(a.shape[0]))
        factor_labels = tuple(self.factor_labels) or tuple(f"f{i + 1}" for i in range(f.shape[0]))
        if len(labels) != a.shape[0]:
            raise ValueError("labels must match the number of sectors")
        if len(factor_labels) != f.shape[0]:
            raise ValueError("factor_labels must match the number of factor rows")
        a.setflags(write=False)
        f = f.copy()
        f.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "factor_labels", factor_labels)

    @property
    def n_sectors(self) -> int:
        return self.a.shape[0]


def coefficients_from_flows(z, x) -> np.ndarray:
    """Technical coefficients a_ij = z_ij / x_j from a flow table.

    ``z`` is the inter-industry flow matrix, ``x`` the gross output
    vector; every sector must have strictly positive output.
    """
    z = np.asarray(z, dtype=float)
    x = np.asarray(x, dtype=float)
    if z.ndim != 2 or z.shape[0] != z.shape[1]:
        raise ValueError(f"flow matrix must be square, got shape {z.shape}")
    if x.shape != (z.shape[0],):
        raise ValueError(f"output vector must have length {z.shape[0]}")
    if not np.all(np.isfinite(z)) or np.any(z < 0):
        raise ValueError("flow matrix must be finite and nonnegative")
    for j, xj in enumerate(x):
        if not np.isfinite(xj) or xj <= 0:
            raise ValueError(
                f"gross output of sector {j} must be strictly positive, got {xj!r}")
    return z / x[np.newaxis, :]


def spectral_radius(a, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Power-iteration estimate of the spectral radius of nonnegative a."""
    a = _as_square_coefficients(a)
    radius, _, converged = kernels.nonneg_power_radius(
        a, tol.spectral_tol, tol.spectral_max_iter)
    if not converged:
        warnings.warn(
            f"power iteration did not converge within {tol.spectral_max_iter} "
            f"iterations; using last estimate {radius:.12g}",
            RuntimeWarning, stacklevel=2)
    return radius


def _require_productive(a, tol: Tolerances) -> None:
    radius = spectral_radius(a, tol)
    if radius >= 1.0 - tol.productive_margin:
        raise NonProductiveEconomyError(radius)


def leontief_inverse(a, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Total-requirements matrix (I - a)^-1 for a productive economy."""
    a = _as_square_coefficients(a)
    _require_productive(a, tol)
    n = a.shape[0]
    eye = np.eye(n)
    try:
        inverse = np.linalg.solve(eye - a, eye)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"I - a is numerically singular: {exc}") from exc
    residual = np.max(np.abs((eye - a) @ inverse - eye)) if n else 0.0
    if residual > tol.inverse_residual:
        raise SingularSystemError(
            f"inverse residual {residual:.3e} exceeds {tol.inverse_residual:.3e}")
    return inverse


def solve(eio: SquareEio, y, tol: Tolerances = DEFAULT_TOLERANCES):
    """Gross output and factor use for final demand y.

    Returns (x, phi) with (I - a) x = y and phi = f x.  Demand must be
    nonnegative; a negative computed output (possible only through
    numeric degeneracy) is reported as a warning, not silently clipped.
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (eio.n_sectors,):
        raise ValueError(f"demand must have length {eio.n_sectors}")
    if not np.all(np.isfinite(y)) or np.any(y < 0):
        raise ValueError("demand must be finite and nonnegative")
    _require_productive(eio.a, tol)
    eye = np.eye(eio.n_sectors)
    try:
        x = np.linalg.solve(eye - eio.a, y)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"I - a is numerically singular: {exc}") from exc
    residual = np.max(np.abs((eye - eio.a) @ x - y)) if eio.n_sectors else 0.0
    scale = 1.0 + (np.max(np.abs(y)) if y.size else 0.0)
    if residual > tol.inverse_residual * scale:
        raise SingularSystemError(
            f"solve residual {residual:.3e} exceeds tolerance")
    if np.any(x < -tol.demand_slack):
        warnings.warn("computed gross output has negative entries",
                      RuntimeWarning, stacklevel=2)
    return x, eio.f @ x
