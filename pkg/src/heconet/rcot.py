"""Rectangular choice-of-technology linear program.

Each sector may operate any number of alternative technologies; the
program picks activity levels x* >= 0 minimizing price-weighted factor
use pi' F* x* subject to net output covering final demand,
(I* - A*) x* >= y, and factor use staying within availability,
F* x* <= f.
"""

from dataclasses import dataclass

import numpy as np

from heconet import lp
from heconet.config import DEFAULT_TOLERANCES, Tolerances
from heconet.incidence import IncidenceMatrices
from heconet.leontief import SquareEio
from heconet.lp import LinearProgram, LpStatus


def _finite_nonneg(name: str, arr: np.ndarray) -> None:
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    if np.any(arr < 0):
        raise ValueError(f"{name} must be nonnegative")


@dataclass(frozen=True, eq=False)
class RcotInstance:
    """Data of one technology-choice problem.

    i_star is the n x t sector-technology incidence matrix: exactly one
    1 per column (each technology belongs to one sector), at least one
    per row (every sector has a technology), hence t >= n.
    """

    i_star: np.ndarray
    a_star: np.ndarray
    f_star: np.ndarray
    y: np.ndarray
    f: np.ndarray
    pi: np.ndarray
    tech_labels: tuple[str, ...] = ()
    sector_labels: tuple[str, ...] = ()
    factor_labels: tuple[str, ...] = ()

    def __post_init__(self):
        i_star = np.asarray(self.i_star, dtype=float).copy()
        if i_star.ndim != 2:
            raise ValueError("i_star must be a matrix")
        n, t = i_star.shape
        if t < n:
            raise ValueError(f"need at least as many technologies as sectors, got {t} < {n}")
        if not np.all((i_star == 0.0) | (i_star == 1.0)):
            raise ValueError("i_star entries must be 0 or 1")
        col_sums = i_star.sum(axis=0)
        if np.any(col_sums != 1.0):
            bad = int(np.argmax(col_sums != 1.0))
            raise ValueError(f"technology column {bad} must belong to exactly one sector")
        row_sums = i_star.sum(axis=1)
        if np.any(row_sums < 1.0):
            bad = int(np.argmax(row_sums < 1.0))
            raise ValueError(f"sector row {bad} has no technology")

        a_star = np.asarray(self.a_star, dtype=float).copy()
        f_star = np.asarray(self.f_star, dtype=float).copy()
        y = np.asarray(self.y, dtype=float).copy()
        f = np.asarray(self.f, dtype=float).copy()
        pi = np.asarray(self.pi, dtype=float).copy()
        k = f_star.shape[0] if f_star.ndim == 2 else -1
        if a_star.shape != (n, t):
            raise ValueError(f"a_star must have shape {(n, t)}, got {a_star.shape}")
        if f_star.ndim != 2 or f_star.shape[1] != t:
            raise ValueError(f"f_star must have {t} columns, got shape {f_star.shape}")
        if y.shape != (n,):
            raise ValueError(f"y must have length {n}")
        if f.shape != (k,) or pi.shape != (k,):
            raise ValueError(f"f and pi must have length {k}")
        for name, arr in (("a_star", a_star), ("f_star", f_star),
                          ("y", y), ("f", f), ("pi", pi)):
            _finite_nonneg(name, arr)

        tech_labels = tuple(self.tech_labels) or tuple(f"t{j + 1}" for j in range(t))
        sector_labels = tuple(self.sector_labels) or tuple(f"s{i + 1}" for i in range(n))
        factor_labels = tuple(self.factor_labels) or tuple(f"f{i + 1}" for i in range(k))
        if len(tech_labels) != t or len(sector_labels) != n or len(factor_labels) != k:
            raise ValueError("label lengths must match matrix dimensions")

        for arr in (i_star, a_star, f_star, y, f, pi):
            arr.setflags(write=False)
        object.__setattr__(self, "i_star", i_star)
        object.__setattr__(self, "a_star", a_star)
        object.__setattr__(self, "f_star", f_star)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "tech_labels", tech_labels)
        object.__setattr__(self, "sector_labels", sector_labels)
        object.__setattr__(self, "factor_labels", factor_labels)

    @property
    def n_sectors(self) -> int:
        return self.i_star.shape[0]

    @property
    def n_technologies(self) -> int:
        return self.i_star.shape[1]

    @property
    def n_factors(self) -> int:
        return self.f_star.shape[0]


@dataclass
class RcotSolution:
    x_star: np.ndarray
    z: float
    phi: np.ndarray
    status: LpStatus
    binding: np.ndarray          # per-row slack, demand rows then factor rows
    tech_labels: tuple[str, ...] = ()
    row_labels: tuple[str, ...] = ()
    factor_labels: tuple[str, ...] = ()
    iterations: int = 0


def build_rcot_lp(inst: RcotInstance) -> LinearProgram:
    """Assemble the LP: min pi'F*x*, (I*-A*)x* >= y, F*x* <= f, x* >= 0."""
    rows = np.vstack([inst.i_star - inst.a_star, inst.f_star])
    senses = (lp.GREATER_EQUAL,) * inst.n_sectors + (lp.LESS_EQUAL,) * inst.n_factors
    rhs = np.concatenate([inst.y, inst.f])
    row_labels = tuple(f"demand:{s}" for s in inst.sector_labels) \
        + tuple(f"cap:{s}" for s in inst.factor_labels)
    return LinearProgram(cost=inst.pi @ inst.f_star, rows=rows, senses=senses,
                         rhs=rhs, var_labels=inst.tech_labels, row_labels=row_labels)


def solve_rcot(inst: RcotInstance, tol: Tolerances = DEFAULT_TOLERANCES) -> RcotSolution:
    """Solve the technology-choice LP; status is never silently defaulted."""
    program = build_rcot_lp(inst)
    result = lp.solve_lp(program, tol)
    if result.status is not LpStatus.OPTIMAL:
        nan_t = np.full(inst.n_technologies, np.nan)
        nan_k = np.full(inst.n_factors, np.nan)
        return RcotSolution(nan_t, np.nan, nan_k, result.status,
                            np.full(program.n_rows, np.nan),
                            inst.tech_labels, program.row_labels,
                            inst.factor_labels, result.iterations)
    x = result.x
    phi = inst.f_star @ x
    z = float(inst.pi @ phi)
    return RcotSolution(x, z, phi, result.status, result.slacks,
                        inst.tech_labels, program.row_labels,
                        inst.factor_labels, result.iterations)


def rcot_from_square(eio: SquareEio, y, f, pi) -> RcotInstance:
    """Embed a one-technology-per-sector economy: I* = I, A* = a, F* = f rows."""
    n = eio.n_sectors
    return RcotInstance(
        i_star=np.eye(n), a_star=eio.a, f_star=eio.f,
        y=y, f=f, pi=pi,
        tech_labels=eio.labels, sector_labels=eio.labels,
        factor_labels=eio.factor_labels)


def instance_from_incidence(inc: IncidenceMatrices, n_products: int,
                            y, f, pi,
                            sector_labels=(), factor_labels=(),
                            tech_labels=()) -> RcotInstance:
    """Recover a technology-choice instance from incidence matrices.

    The first ``n_products`` incidence rows are product rows: their
    positive part must be a 0/1 sector-technology incidence and their
    negative part the augmented transaction matrix.  The remaining rows
    are factor rows and must have no positive part (factors are only
    consumed).  Requires a single-buffer model so that rows correspond
    to operands one-to-one.
    """
    if len(inc.buffers) != 1:
        raise ValueError(
            f"technology-choice recovery requires a single buffer, got {len(inc.buffers)}")
    n_rows = inc.m_plus.shape[0]
    if not 0 < n_products <= n_rows:
        raise ValueError(f"n_products must be in 1..{n_rows}")
    i_star = inc.m_plus[:n_products]
    if np.any(inc.m_plus[n_products:] != 0):
        raise ValueError("factor rows must not be produced by any capability")
    return RcotInstance(
        i_star=i_star,
        a_star=inc.m_minus[:n_products],
        f_star=inc.m_minus[n_products:],
        y=y, f=f, pi=pi,
        tech_labels=tuple(tech_labels) or inc.capabilities,
        sector_labels=tuple(sector_labels) or inc.operands[:n_products],
        factor_labels=tuple(factor_labels) or inc.operands[n_products:])
