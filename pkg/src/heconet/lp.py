"""Dense two-phase revised-simplex solver with solution certification.

The solver is deliberately small and deterministic: Bland's rule is
always on (entering: smallest eligible index; leaving: minimum ratio,
ties to the smallest basic variable index), the basis inverse is kept
explicitly and refactorized periodically, and every optimal answer is
re-checked against the KKT conditions before it is returned.  There is
no presolve beyond dropping all-zero rows.

Sign conventions for a minimization problem: duals are >= 0 on ">="
rows, <= 0 on "<=" rows, free on "=" rows; slacks are reported so that
feasible rows have nonnegative slack (equality rows report their signed
residual).
"""

import io
from dataclasses import dataclass
from enum import Enum

import numpy as np

from heconet import kernels
from heconet.config import DEFAULT_TOLERANCES, Tolerances

LESS_EQUAL = "<="
EQUAL = "="
GREATER_EQUAL = ">="
_SENSES = (LESS_EQUAL, EQUAL, GREATER_EQUAL)


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LpNumericError(RuntimeError):
    """Base class for numeric failures inside the solver."""


class PivotBreakdownError(LpNumericError):
    """A pivot fell below the breakdown threshold; carries a basis dump."""

    def __init__(self, message: str, basis=None):
        self.basis = None if basis is None else [int(v) for v in basis]
        if self.basis is not None:
            message = f"{message}; basis columns: {self.basis}"
        super().__init__(message)


class IterationLimitError(LpNumericError):
    pass


class CertificationError(LpNumericError):
    """An optimal answer failed its own KKT certificate."""


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """min cost'x  s.t.  rows_i x (sense_i) rhs_i,  lower <= x <= upper."""

    cost: np.ndarray
    rows: np.ndarray
    senses: tuple[str, ...]
    rhs: np.ndarray
    lower: np.ndarray = None
    upper: np.ndarray = None
    var_labels: tuple[str, ...] = ()
    row_labels: tuple[str, ...] = ()

    def __post_init__(self):
        cost = np.atleast_1d(np.asarray(self.cost, dtype=float)).copy()
        rows = np.asarray(self.rows, dtype=float).copy()
        if rows.size == 0:
            rows = rows.reshape(0, cost.shape[0])
        if rows.ndim != 2 or rows.shape[1] != cost.shape[0]:
            raise ValueError(
                f"rows must be a matrix with {cost.shape[0]} columns, got shape {rows.shape}")
        rhs = np.atleast_1d(np.asarray(self.rhs, dtype=float)).copy()
        if rhs.shape != (rows.shape[0],):
            raise ValueError(f"rhs must have length {rows.shape[0]}")
        senses = tuple(self.senses)
        if len(senses) != rows.shape[0]:
            raise ValueError(f"senses must have length {rows.shape[0]}")
        for s in senses:
            if s not in _SENSES:
                raise ValueError(f"unknown sense {s!r}; expected one of {_SENSES}")
        n = cost.shape[0]
        lower = np.zeros(n) if self.lower is None else np.atleast_1d(np.asarray(self.lower, dtype=float)).copy()
        upper = np.full(n, np.inf) if self.upper is None else np.atleast_1d(np.asarray(self.upper, dtype=float)).copy()
        if lower.shape != (n,) or upper.shape != (n,):
            raise ValueError(f"bounds must have length {n}")
        for name, arr in (("cost", cost), ("rows", rows), ("rhs", rhs)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be finite")
        if np.any(np.isnan(lower)) or np.any(np.isnan(upper)):
            raise ValueError("bounds must not be NaN")
        if np.any(lower == np.inf) or np.any(upper == -np.inf):
            raise ValueError("lower bounds must be < +inf and upper bounds > -inf")
        if np.any(lower > upper):
            bad = int(np.argmax(lower > upper))
            raise ValueError(f"lower bound exceeds upper bound for variable {bad}")
        var_labels = tuple(self.var_labels) or tuple(f"x{j + 1}" for j in range(n))
        row_labels = tuple(self.row_labels) or tuple(f"r{i + 1}" for i in range(rows.shape[0]))
        if len(var_labels) != n:
            raise ValueError("var_labels must match the number of variables")
        if len(row_labels) != rows.shape[0]:
            raise ValueError("row_labels must match the number of rows")
        for arr in (cost, rows, rhs, lower, upper):
            arr.setflags(write=False)
        object.__setattr__(self, "cost", cost)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "senses", senses)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "var_labels", var_labels)
        object.__setattr__(self, "row_labels", row_labels)

    @property
    def n_vars(self) -> int:
        return self.cost.shape[0]

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]


@dataclass
class LpResult:
    status: LpStatus
    x: np.ndarray
    objective: float
    duals: np.ndarray
    slacks: np.ndarray
    iterations: int


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    bound: float


@dataclass(frozen=True)
class Certificate:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]


def dump_lp(lp: LinearProgram) -> str:
    """Plain-text echo of an LP for debugging."""
    out = io.StringIO()
    out.write("minimize\n")
    terms = " + ".join(f"{c:g} {v}" for c, v in zip(lp.cost, lp.var_labels))
    out.write(f"  {terms or '0'}\n")
    out.write("subject to\n")
    width = max((len(r) for r in lp.row_labels), default=0)
    for label, row, sense, rhs in zip(lp.row_labels, lp.rows, lp.senses, lp.rhs):
        lhs = " + ".join(f"{a:g} {v}" for a, v in zip(row, lp.var_labels) if a != 0)
        out.write(f"  {label:<{width}}  {lhs or '0'} {sense} {rhs:g}\n")
    out.write("bounds\n")
    for v, lo, hi in zip(lp.var_labels, lp.lower, lp.upper):
        out.write(f"  {lo:g} <= {v} <= {hi:g}\n")
    return out.getvalue()


@dataclass
class _Standardized:
    """Equality form min c'w, a w = b, w >= 0 plus reconstruction maps."""

    a: np.ndarray            # m_std x n_work
    b: np.ndarray            # >= 0
    c: np.ndarray            # n_work
    var_plus: np.ndarray     # std column of the shifted/positive part per var
    var_minus: np.ndarray    # std column of the negative part, or -1
    var_base: np.ndarray     # additive base per var
    var_sign: np.ndarray     # +1 or -1 multiplier on the plus part
    row_pos: np.ndarray      # std row per original row, or -1 if dropped
    row_flip: np.ndarray     # +1/-1 applied to each std row during rhs flip
    infeasible_zero_row: int  # original row index proven infeasible, or -1


def _standardize(lp: LinearProgram, tol: Tolerances) -> _Standardized:
    n = lp.n_vars
    m = lp.n_rows
    var_plus = np.full(n, -1, dtype=np.int64)
    var_minus = np.full(n, -1, dtype=np.int64)
    var_base = np.zeros(n)
    var_sign = np.ones(n)
    caps = []  # (std column, cap) pairs for finite-width variables

    col = 0
    for j in range(n):
        lo, hi = lp.lower[j], lp.upper[j]
        if np.isfinite(lo):
            var_plus[j] = col
            var_base[j] = lo
            var_sign[j] = 1.0
            col += 1
            if np.isfinite(hi):
                caps.append((var_plus[j], hi - lo))
        elif np.isfinite(hi):
            var_plus[j] = col
            var_base[j] = hi
            var_sign[j] = -1.0
            col += 1
        else:
            var_plus[j] = col
            var_minus[j] = col + 1
            col += 2
    n_work_vars = col

    # Substituted rhs: b_i - rows_i . base
    shifted_rhs = lp.rhs - lp.rows @ var_base if m else lp.rhs.copy()

    # All-zero rows are dropped after a consistency check.
    keep: list[int] = []
    for i in range(m):
        if np.any(lp.rows[i] != 0.0):
            keep.append(i)
            continue
        r = shifted_rhs[i]
        sense = lp.senses[i]
        viol = abs(r) if sense == EQUAL else (max(0.0, -r) if sense == LESS_EQUAL else max(0.0, r))
        if viol > tol.lp_feasibility:
            return _Standardized(
                a=np.zeros((0, 0)), b=np.zeros(0), c=np.zeros(0),
                var_plus=var_plus, var_minus=var_minus, var_base=var_base,
                var_sign=var_sign, row_pos=np.full(m, -1, dtype=np.int64),
                row_flip=np.zeros(0), infeasible_zero_row=i)

    n_slack = sum(1 for i in keep if lp.senses[i] != EQUAL) + len(caps)
    m_std = len(keep) + len(caps)
    n_std = n_work_vars + n_slack
    a = np.zeros((m_std, n_std))
    b = np.zeros(m_std)
    c = np.zeros(n_std)
    row_pos = np.full(m, -1, dtype=np.int64)
    row_flip = np.ones(m_std)

    for j in range(n):
        cj = lp.cost[j]
        a_col = var_plus[j]
        c[a_col] += var_sign[j] * cj
        if var_minus[j] >= 0:
            c[var_minus[j]] -= cj

    slack_col = n_work_vars
    for pos, i in enumerate(keep):
        row_pos[i] = pos
        for j in range(n):
            coeff = lp.rows[i, j]
            if coeff == 0.0:
                continue
            a[pos, var_plus[j]] += var_sign[j] * coeff
            if var_minus[j] >= 0:
                a[pos, var_minus[j]] -= coeff
        b[pos] = shifted_rhs[i]
        if lp.senses[i] == LESS_EQUAL:
            a[pos, slack_col] = 1.0
            slack_col += 1
        elif lp.senses[i] == GREATER_EQUAL:
            a[pos, slack_col] = -1.0
            slack_col += 1

    for offset, (work_col, cap) in enumerate(caps):
        pos = len(keep) + offset
        a[pos, work_col] = 1.0
        a[pos, slack_col] = 1.0
        slack_col += 1
        b[pos] = cap

    for pos in range(m_std):
        if b[pos] < 0.0:
            a[pos, :] *= -1.0
            b[pos] *= -1.0
            row_flip[pos] = -1.0

    return _Standardized(a=a, b=b, c=c, var_plus=var_plus, var_minus=var_minus,
                         var_base=var_base, var_sign=var_sign, row_pos=row_pos,
                         row_flip=row_flip, infeasible_zero_row=-1)


def _run_kernel(a, b, c, basis, in_basis, binv, tol: Tolerances, phase: str):
    try:
        status, iters = kernels.simplex_iterate(
            a, b, c, basis, in_basis, binv,
            tol.lp_pivot, tol.lp_reduced_cost, tol.lp_ratio_tie,
            tol.lp_refactor_every, tol.lp_max_iter)
    except np.linalg.LinAlgError as exc:
        raise PivotBreakdownError(
            f"singular basis during {phase} refactorization: {exc}", basis) from exc
    if status == kernels.BREAKDOWN:
        raise PivotBreakdownError(
            f"pivot below {tol.lp_pivot:g} in {phase}", basis)
    if status == kernels.ITERATION_LIMIT:
        raise IterationLimitError(
            f"simplex exceeded {tol.lp_max_iter} iterations in {phase}")
    return status, iters


def _phase1(std: _Standardized, tol: Tolerances):
    """Find a feasible basis of the standardized system.

    Returns (basis, in_basis, binv, a, b, keep_rows, iterations) or None
    when the system is infeasible.  The returned arrays may have fewer
    rows than the input when redundant rows were eliminated.
    """
    m, n_cols = std.a.shape
    a_full = np.hstack([std.a, np.eye(m)])
    c1 = np.concatenate([np.zeros(n_cols), np.ones(m)])
    basis = np.arange(n_cols, n_cols + m, dtype=np.int64)
    in_basis = np.zeros(n_cols + m, dtype=bool)
    in_basis[basis] = True
    binv = np.eye(m)
    b = std.b.copy()

    status, iters = _run_kernel(a_full, b, c1, basis, in_basis, binv, tol, "phase 1")
    if status != kernels.OPTIMAL:
        raise PivotBreakdownError("phase 1 did not reach an optimum", basis)

    xb = binv @ b
    artificial_load = float(np.sum(xb[basis >= n_cols])) if m else 0.0
    scale = 1.0 + (float(np.max(b)) if m else 0.0)
    if artificial_load > tol.lp_feasibility * scale:
        return None

    # Drive remaining zero-level artificials out of the basis; rows that
    # admit no pivot on a structural column are redundant and removed.
    redundant: list[int] = []
    for pos in range(m):
        if basis[pos] < n_cols:
            continue
        row_view = binv[pos, :] @ std.a
        entering = -1
        for j in range(n_cols):
            if not in_basis[j] and abs(row_view[j]) > tol.lp_reduced_cost:
                entering = j
                break
        if entering < 0:
            redundant.append(pos)
            continue
        d = binv @ np.ascontiguousarray(std.a[:, entering])
        pivot = d[pos]
        binv[pos, :] /= pivot
        for i in range(m):
            if i != pos and d[i] != 0.0:
                binv[i, :] -= d[i] * binv[pos, :]
        in_basis[basis[pos]] = False
        in_basis[entering] = True
        basis[pos] = entering

    keep_rows = np.array([i for i in range(m) if i not in set(redundant)], dtype=np.int64)
    a_work = np.ascontiguousarray(std.a[keep_rows])
    b_work = std.b[keep_rows].copy()
    if redundant:
        basis = basis[keep_rows]
        try:
            binv = np.linalg.inv(a_work[:, basis]) if keep_rows.size else np.zeros((0, 0))
        except np.linalg.LinAlgError as exc:
            raise PivotBreakdownError(
                f"singular basis after removing redundant rows: {exc}", basis) from exc
    in_basis = np.zeros(n_cols, dtype=bool)
    in_basis[basis] = True
    return basis, in_basis, binv, a_work, b_work, keep_rows, iters


def solve_lp(lp: LinearProgram, tol: Tolerances = DEFAULT_TOLERANCES) -> LpResult:
    """Solve an LP; optimal results are certified before being returned.

    Raises :class:`PivotBreakdownError` / :class:`IterationLimitError`
    on numeric failure and :class:`CertificationError` when an optimal
    answer fails its own KKT certificate.  Infeasible and unbounded
    problems are reported through ``status``.
    """
    std = _standardize(lp, tol)
    n = lp.n_vars
    nan_vec = np.full(n, np.nan)
    nan_rows = np.full(lp.n_rows, np.nan)

    if std.infeasible_zero_row >= 0:
        return LpResult(LpStatus.INFEASIBLE, nan_vec, np.nan, nan_rows, nan_rows, 0)

    m_std, n_work = std.a.shape
    if m_std == 0:
        # Every variable sits at its base point; nothing restrains the rest.
        if np.any(std.c < -tol.lp_reduced_cost):
            return LpResult(LpStatus.UNBOUNDED, nan_vec, np.nan, nan_rows, nan_rows, 0)
        w = np.zeros(n_work)
        return _finish(lp, std, w, np.zeros(0), np.zeros(0, dtype=np.int64), 0, tol)

    phase1 = _phase1(std, tol)
    if phase1 is None:
        return LpResult(LpStatus.INFEASIBLE, nan_vec, np.nan, nan_rows, nan_rows, 0)
    basis, in_basis, binv, a_work, b_work, keep_rows, iters1 = phase1

    if keep_rows.size == 0:
        if np.any(std.c < -tol.lp_reduced_cost):
            return LpResult(LpStatus.UNBOUNDED, nan_vec, np.nan, nan_rows, nan_rows, iters1)
        w = np.zeros(n_work)
        return _finish(lp, std, w, np.zeros(0), keep_rows, iters1, tol)

    status, iters2 = _run_kernel(a_work, b_work, std.c, basis, in_basis, binv, tol, "phase 2")
    total_iters = iters1 + iters2
    if status == kernels.UNBOUNDED:
        return LpResult(LpStatus.UNBOUNDED, nan_vec, np.nan, nan_rows, nan_rows, total_iters)

    w = np.zeros(n_work)
    w[basis] = binv @ b_work
    y_std = std.c[basis] @ binv
    return _finish(lp, std, w, y_std, keep_rows, total_iters, tol)


def _finish(lp: LinearProgram, std: _Standardized, w, y_std, keep_rows,
            iterations, tol: Tolerances) -> LpResult:
    x = std.var_base + std.var_sign * w[std.var_plus] if lp.n_vars else np.zeros(0)
    split = std.var_minus >= 0
    if np.any(split):
        x = x.copy()
        x[split] -= w[std.var_minus[split]]

    duals = np.zeros(lp.n_rows)
    # row_pos maps original rows to pre-elimination std rows; keep_rows
    # maps the surviving std rows to dual positions.
    surviving = {int(r): k for k, r in enumerate(keep_rows)}
    for i in range(lp.n_rows):
        pos = std.row_pos[i]
        if pos >= 0 and int(pos) in surviving:
            duals[i] = std.row_flip[pos] * y_std[surviving[int(pos)]]

    slacks = np.zeros(lp.n_rows)
    if lp.n_rows:
        ax = lp.rows @ x
        for i, sense in enumerate(lp.senses):
            if sense == GREATER_EQUAL:
                slacks[i] = ax[i] - lp.rhs[i]
            else:
                slacks[i] = lp.rhs[i] - ax[i]

    objective = float(lp.cost @ x) if lp.n_vars else 0.0
    result = LpResult(LpStatus.OPTIMAL, x, objective, duals, slacks, int(iterations))
    cert = certify(lp, result, tol)
    if not cert.passed:
        failed = ", ".join(f"{c.name} ({c.value:.3e} > {c.bound:.3e})" for c in cert.failures())
        raise CertificationError(f"optimal result failed certification: {failed}")
    return result


def _check(name: str, value, bound) -> CheckResult:
    value = float(value)
    bound = float(bound)
    return CheckResult(name, value <= bound, value, bound)


def certify(lp: LinearProgram, result: LpResult,
            tol: Tolerances = DEFAULT_TOLERANCES) -> Certificate:
    """Recompute the KKT conditions for a claimed-optimal result.

    Checks primal feasibility (rows and bounds), dual sign conditions,
    dual feasibility via reduced costs, complementary slackness, the
    duality gap, and objective consistency.
    """
    if result.status is not LpStatus.OPTIMAL:
        raise ValueError(f"can only certify optimal results, got {result.status}")
    x = np.asarray(result.x, dtype=float)
    lam = np.asarray(result.duals, dtype=float)
    checks = []

    ax = lp.rows @ x if lp.n_rows else np.zeros(0)
    primal = 0.0
    for i, sense in enumerate(lp.senses):
        r = ax[i] - lp.rhs[i]
        if sense == LESS_EQUAL:
            primal = max(primal, r)
        elif sense == GREATER_EQUAL:
            primal = max(primal, -r)
        else:
            primal = max(primal, abs(r))
    checks.append(_check("primal row feasibility", primal, tol.lp_feasibility))

    bound_viol = 0.0
    for j in range(lp.n_vars):
        if np.isfinite(lp.lower[j]):
            bound_viol = max(bound_viol, lp.lower[j] - x[j])
        if np.isfinite(lp.upper[j]):
            bound_viol = max(bound_viol, x[j] - lp.upper[j])
    checks.append(_check("bound feasibility", bound_viol, tol.lp_feasibility))

    sign_viol = 0.0
    for i, sense in enumerate(lp.senses):
        if sense == GREATER_EQUAL:
            sign_viol = max(sign_viol, -lam[i])
        elif sense == LESS_EQUAL:
            sign_viol = max(sign_viol, lam[i])
    checks.append(_check("dual sign conditions", sign_viol, tol.lp_feasibility))

    reduced = lp.cost - (lp.rows.T @ lam if lp.n_rows else 0.0)
    dual_viol = 0.0
    for j in range(lp.n_vars):
        lo, hi = lp.lower[j], lp.upper[j]
        at_lo = np.isfinite(lo) and x[j] - lo <= tol.lp_feasibility * (1.0 + abs(lo))
        at_hi = np.isfinite(hi) and hi - x[j] <= tol.lp_feasibility * (1.0 + abs(hi))
        if at_lo and at_hi:
            continue
        if at_lo:
            dual_viol = max(dual_viol, -reduced[j])
        elif at_hi:
            dual_viol = max(dual_viol, reduced[j])
        else:
            dual_viol = max(dual_viol, abs(reduced[j]))
    checks.append(_check("dual feasibility (reduced costs)", dual_viol, tol.lp_feasibility))

    comp = 0.0
    for i in range(lp.n_rows):
        comp = max(comp, abs(lam[i] * result.slacks[i]))
    checks.append(_check("complementary slackness", comp, tol.lp_complementarity))

    obj = float(lp.cost @ x) if lp.n_vars else 0.0
    dual_obj = float(lam @ lp.rhs) if lp.n_rows else 0.0
    for j in range(lp.n_vars):
        if np.isfinite(lp.lower[j]) and reduced[j] > 0:
            dual_obj += reduced[j] * lp.lower[j]
        elif np.isfinite(lp.upper[j]) and reduced[j] < 0:
            dual_obj += reduced[j] * lp.upper[j]
    gap = abs(obj - dual_obj)
    checks.append(_check("duality gap", gap, tol.lp_duality_gap * (1.0 + abs(obj))))

    obj_err = abs(result.objective - obj)
    checks.append(_check("objective consistency", obj_err,
                         tol.lp_duality_gap * (1.0 + abs(obj))))

    return Certificate(tuple(checks))


def feasible(lp: LinearProgram, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Phase-1 feasibility test (no objective)."""
    std = _standardize(lp, tol)
    if std.infeasible_zero_row >= 0:
        return False
    if std.a.shape[0] == 0:
        return True
    return _phase1(std, tol) is not None


def irreducible_infeasible_rows(lp: LinearProgram,
                                tol: Tolerances = DEFAULT_TOLERANCES) -> list:
    """Greedy deletion filter: labels of an irreducible infeasible row set.

    Repeatedly drops any row whose removal keeps the system infeasible;
    the surviving rows form an irreducible witness.  Intended for small
    diagnostic problems; each trial is one phase-1 solve.
    """
    if feasible(lp, tol):
        return []
    active = list(range(lp.n_rows))
    changed = True
    while changed:
        changed = False
        for drop in list(active):
            trial = [i for i in active if i != drop]
            sub = LinearProgram(
                cost=lp.cost,
                rows=lp.rows[trial] if trial else np.zeros((0, lp.n_vars)),
                senses=tuple(lp.senses[i] for i in trial),
                rhs=lp.rhs[trial] if trial else np.zeros(0),
                lower=lp.lower, upper=lp.upper,
                var_labels=lp.var_labels,
                row_labels=tuple(lp.row_labels[i] for i in trial))
            if not feasible(sub, tol):
                active = trial
                changed = True
    return [lp.row_labels[i] for i in active]
