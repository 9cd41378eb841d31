"""Incidence matrices of a hetero-functional system.

Each capability is a column; each (operand, buffer) pair is a row, with
operand-major flattening: ``row = operand_index * n_buffers +
buffer_index``.  The negative matrix records what a capability pulls
per unit execution, the positive matrix what it pushes.  Entries carry
the real-valued per-unit coefficients of the underlying process; the
classical boolean incidence tensors are the support of the weighted
matrices, available through :meth:`IncidenceMatrices.support`.
"""

from dataclasses import dataclass

import numpy as np

from heconet.core import SystemModel, buffer_set, require_valid


@dataclass(frozen=True, eq=False)
class IncidenceMatrices:
    """Dense positive/negative incidence matrices with index maps.

    ``m`` always equals ``m_plus - m_minus`` exactly, because it is
    constructed by that subtraction and never recomputed.
    """

    m_plus: np.ndarray
    m_minus: np.ndarray
    m: np.ndarray
    operands: tuple[str, ...]
    buffers: tuple[str, ...]
    capabilities: tuple[str, ...]

    def __post_init__(self):
        n_rows = len(self.operands) * len(self.buffers)
        n_cols = len(self.capabilities)
        for name in ("m_plus", "m_minus", "m"):
            mat = np.asarray(getattr(self, name), dtype=float)
            if mat.shape != (n_rows, n_cols):
                raise ValueError(f"{name} must have shape {(n_rows, n_cols)}, got {mat.shape}")
            mat = mat.copy()
            mat.setflags(write=False)
            object.__setattr__(self, name, mat)
        for name in ("m_plus", "m_minus"):
            mat = getattr(self, name)
            if not np.all(np.isfinite(mat)):
                raise ValueError(f"{name} must be finite")
            if np.any(mat < 0):
                raise ValueError(f"{name} must be nonnegative")
        if not np.array_equal(self.m, self.m_plus - self.m_minus):
            raise ValueError("m must equal m_plus - m_minus exactly")
        object.__setattr__(self, "operands", tuple(self.operands))
        object.__setattr__(self, "buffers", tuple(self.buffers))
        object.__setattr__(self, "capabilities", tuple(self.capabilities))

    @property
    def n_places(self) -> int:
        return len(self.operands) * len(self.buffers)

    @property
    def row_index(self) -> dict:
        """Bijection (operand id, buffer id) -> row."""
        n_b = len(self.buffers)
        return {(o, b): i * n_b + j
                for i, o in enumerate(self.operands)
                for j, b in enumerate(self.buffers)}

    @property
    def col_index(self) -> dict:
        """Bijection capability id -> column."""
        return {c: j for j, c in enumerate(self.capabilities)}

    @property
    def place_labels(self) -> tuple:
        """Row labels as (operand id, buffer id) pairs, row order."""
        return tuple((o, b) for o in self.operands for b in self.buffers)

    def row(self, operand_id: str, buffer_id: str) -> int:
        return (self.operands.index(operand_id) * len(self.buffers)
                + self.buffers.index(buffer_id))

    def support(self) -> tuple:
        """Boolean incidence matrices: (m_plus != 0, m_minus != 0)."""
        return self.m_plus != 0, self.m_minus != 0

    def equals(self, other: "IncidenceMatrices") -> bool:
        return (self.operands == other.operands
                and self.buffers == other.buffers
                and self.capabilities == other.capabilities
                and np.array_equal(self.m_plus, other.m_plus)
                and np.array_equal(self.m_minus, other.m_minus))


def matricize(m_plus: np.ndarray, m_minus: np.ndarray) -> np.ndarray:
    """Elementwise difference of the positive and negative matrices."""
    m_plus = np.asarray(m_plus, dtype=float)
    m_minus = np.asarray(m_minus, dtype=float)
    if m_plus.shape != m_minus.shape:
        raise ValueError(f"shape mismatch: {m_plus.shape} vs {m_minus.shape}")
    return m_plus - m_minus


def build_incidence(model: SystemModel) -> IncidenceMatrices:
    """Assemble incidence matrices from a validated model.

    For a capability executing process p, each input flow (operand i,
    coefficient a) adds a to ``m_minus[(i, pull buffer), capability]``
    and each output flow adds its coefficient to the matching
    ``m_plus`` entry.  Repeated flows of one operand accumulate.
    """
    require_valid(model)
    buffers = buffer_set(model)
    operands = [o.id for o in model.operands]
    n_b = len(buffers)
    row_of = {(o, b): i * n_b + j
              for i, o in enumerate(operands) for j, b in enumerate(buffers)}

    n_rows = len(operands) * n_b
    n_cols = len(model.capabilities)
    m_plus = np.zeros((n_rows, n_cols))
    m_minus = np.zeros((n_rows, n_cols))

    for col, cap in enumerate(model.capabilities):
        proc = model.process(cap.process)
        for flow in proc.inputs:
            m_minus[row_of[flow.operand, cap.pull[flow.operand]], col] += flow.coeff
        for flow in proc.outputs:
            m_plus[row_of[flow.operand, cap.push[flow.operand]], col] += flow.coeff

    return IncidenceMatrices(
        m_plus=m_plus,
        m_minus=m_minus,
        m=matricize(m_plus, m_minus),
        operands=tuple(operands),
        buffers=tuple(buffers),
        capabilities=tuple(c.id for c in model.capabilities),
    )
