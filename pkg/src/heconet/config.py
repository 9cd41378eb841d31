"""Numeric tolerances shared across the package.

Every threshold used by the solvers lives in one frozen record so that
library calls, tests, and the command line agree on the same numbers.
The defaults are deliberately conservative for double precision at the
problem scales this package targets (tens to a few thousand variables).
"""

import dataclasses
import json
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Bundle of numeric thresholds.

    Attributes
    ----------
    spectral_tol:
        Relative convergence threshold for the power-iteration spectral
        radius estimate.
    spectral_max_iter:
        Iteration cap for power iteration.
    productive_margin:
        An economy is rejected as non-productive when its spectral
        radius exceeds ``1 - productive_margin``.
    inverse_residual:
        Max-norm bound on ``(I - A) B - I`` accepted for a computed
        Leontief inverse ``B``.
    lp_pivot:
        Pivot magnitudes at or below this value are treated as numeric
        breakdown inside the simplex.
    lp_reduced_cost:
        Reduced costs above ``-lp_reduced_cost`` count as optimal.
    lp_ratio_tie:
        Window within which ratio-test candidates are considered tied;
        ties resolve to the smallest basic variable index.
    lp_feasibility:
        Bound on primal and dual feasibility residuals during
        certification.
    lp_complementarity:
        Bound on per-row ``|dual * slack|`` during certification.
    lp_duality_gap:
        Relative duality-gap bound, scaled by ``1 + |objective|``.
    lp_refactor_every:
        Number of eta updates between explicit refactorizations of the
        basis inverse.
    lp_max_iter:
        Simplex pivot cap per phase.
    demand_slack:
        Demand rows must be satisfied to within this slack in
        technology-choice solutions.
    """

    spectral_tol: float = 1e-10
    spectral_max_iter: int = 10_000
    productive_margin: float = 1e-9
    inverse_residual: float = 1e-9
    lp_pivot: float = 1e-11
    lp_reduced_cost: float = 1e-9
    lp_ratio_tie: float = 1e-10
    lp_feasibility: float = 1e-7
    lp_complementarity: float = 1e-6
    lp_duality_gap: float = 1e-6
    lp_refactor_every: int = 50
    lp_max_iter: int = 50_000
    demand_slack: float = 1e-6

    def replace(self, **changes) -> "Tolerances":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_json(cls, text: str | bytes) -> "Tolerances":
        """Build a record from a JSON object of overrides.

        Unknown keys are rejected so that typos in a tolerance file do
        not silently fall back to defaults.
        """
        raw = json.loads(text)
        if not isinstance(raw, dict):
            raise ValueError("tolerance config must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ValueError(f"unknown tolerance keys: {', '.join(unknown)}")
        for key, value in raw.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ValueError(f"tolerance {key!r} must be a number")
        return cls(**raw)


DEFAULT_TOLERANCES = Tolerances()
