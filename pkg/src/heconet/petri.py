"""Discrete-time dynamics of the system net and per-operand nets.

The engineering system net is a timed Petri net whose places are the
(operand, buffer) pairs of the incidence matrices and whose transitions
are the capabilities.  Firing is fluid: activity levels are nonnegative
reals, not integers.  One step of length dt applies

    q_b[k+1] = q_b[k] + (M+ u_plus[k] - M- u_minus[k]) dt
    q_e[k+1] = q_e[k] + (u_minus[k] - u_plus[k]) dt

where u_minus starts executions (tokens move into flight) and u_plus
completes them.  Place markings may go negative (deficits are how the
static economic reduction encodes demand); tokens in flight may not.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from heconet import kernels
from heconet.incidence import IncidenceMatrices

# Tokens in flight must stay nonnegative up to roundoff.
QE_FLOOR = -1e-9


def _as_vector(value, length: int, name: str, nonneg: bool = False) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != (length,):
        raise ValueError(f"{name} must have shape ({length},), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    if nonneg and np.any(arr < 0):
        raise ValueError(f"{name} must be nonnegative")
    return arr


@dataclass(frozen=True, eq=False)
class Marking:
    """Joint marking [q_b; q_e] of places and transitions."""

    q_b: np.ndarray
    q_e: np.ndarray

    def __post_init__(self):
        q_b = np.asarray(self.q_b, dtype=float).copy()
        q_e = np.asarray(self.q_e, dtype=float).copy()
        if q_b.ndim != 1 or q_e.ndim != 1:
            raise ValueError("markings must be vectors")
        if not (np.all(np.isfinite(q_b)) and np.all(np.isfinite(q_e))):
            raise ValueError("markings must be finite")
        if np.any(q_e < QE_FLOOR):
            raise ValueError(
                f"tokens in flight must be nonnegative, got min {q_e.min():g}")
        q_b.setflags(write=False)
        q_e.setflags(write=False)
        object.__setattr__(self, "q_b", q_b)
        object.__setattr__(self, "q_e", q_e)


def _check_durations(durations, n: int) -> np.ndarray:
    arr = np.asarray(durations)
    if arr.shape != (n,):
        raise ValueError(f"durations must have shape ({n},), got {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        as_int = arr.astype(np.int64)
        if not np.array_equal(as_int, arr):
            raise ValueError("durations must be integers")
        arr = as_int
    arr = arr.astype(np.int64)
    if np.any(arr < 0):
        raise ValueError("durations must be nonnegative")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class EngineeringSystemNet:
    """Incidence structure plus per-capability durations and step length."""

    incidence: IncidenceMatrices
    durations: np.ndarray = None
    dt: float = 1.0

    def __post_init__(self):
        durations = self.durations
        if durations is None:
            durations = np.zeros(len(self.incidence.capabilities), dtype=np.int64)
        durations = _check_durations(durations, len(self.incidence.capabilities))
        dt = float(self.dt)
        if not np.isfinite(dt) or dt <= 0:
            raise ValueError(f"dt must be a positive finite number, got {dt!r}")
        object.__setattr__(self, "durations", durations)
        object.__setattr__(self, "dt", dt)

    @property
    def n_places(self) -> int:
        return self.incidence.n_places

    @property
    def n_transitions(self) -> int:
        return len(self.incidence.capabilities)

    @property
    def place_labels(self) -> tuple:
        return self.incidence.place_labels

    @property
    def transition_labels(self) -> tuple:
        return self.incidence.capabilities


@dataclass(frozen=True, eq=False)
class OperandNet:
    """Per-operand net tracking an operand's own state evolution."""

    operand: str
    places: tuple[str, ...]
    transitions: tuple[str, ...]
    m_plus: np.ndarray
    m_minus: np.ndarray
    marking: Marking
    durations: np.ndarray = None
    dt: float = 1.0

    def __post_init__(self):
        places = tuple(self.places)
        transitions = tuple(self.transitions)
        shape = (len(places), len(transitions))
        m_plus = np.asarray(self.m_plus, dtype=float).copy()
        m_minus = np.asarray(self.m_minus, dtype=float).copy()
        for name, mat in (("m_plus", m_plus), ("m_minus", m_minus)):
            if mat.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {mat.shape}")
            if not np.all(np.isfinite(mat)) or np.any(mat < 0):
                raise ValueError(f"{name} must be finite and nonnegative")
            mat.setflags(write=False)
        if self.marking.q_b.shape != (len(places),) or self.marking.q_e.shape != (len(transitions),):
            raise ValueError("marking shapes do not match places/transitions")
        durations = self.durations
        if durations is None:
            durations = np.zeros(len(transitions), dtype=np.int64)
        durations = _check_durations(durations, len(transitions))
        dt = float(self.dt)
        if not np.isfinite(dt) or dt <= 0:
            raise ValueError(f"dt must be a positive finite number, got {dt!r}")
        object.__setattr__(self, "places", places)
        object.__setattr__(self, "transitions", transitions)
        object.__setattr__(self, "m_plus", m_plus)
        object.__setattr__(self, "m_minus", m_minus)
        object.__setattr__(self, "durations", durations)
        object.__setattr__(self, "dt", dt)

    @property
    def n_places(self) -> int:
        return len(self.places)

    @property
    def n_transitions(self) -> int:
        return len(self.transitions)


def step_esn(net: EngineeringSystemNet, marking: Marking, u_minus, u_plus) -> Marking:
    """Apply one state-transition step; the input marking is untouched."""
    n = net.n_transitions
    u_minus = _as_vector(u_minus, n, "u_minus", nonneg=True)
    u_plus = _as_vector(u_plus, n, "u_plus", nonneg=True)
    if marking.q_b.shape != (net.n_places,) or marking.q_e.shape != (n,):
        raise ValueError("marking shapes do not match the net")
    q_b = marking.q_b + net.dt * (net.incidence.m_plus @ u_plus - net.incidence.m_minus @ u_minus)
    q_e = marking.q_e + net.dt * (u_minus - u_plus)
    return Marking(q_b, q_e)


def step_operand_net(onet: OperandNet, u_minus, u_plus) -> Marking:
    """One step of an operand net from its stored marking."""
    n = onet.n_transitions
    u_minus = _as_vector(u_minus, n, "u_minus", nonneg=True)
    u_plus = _as_vector(u_plus, n, "u_plus", nonneg=True)
    q_b = onet.marking.q_b + onet.dt * (onet.m_plus @ u_plus - onet.m_minus @ u_minus)
    q_e = onet.marking.q_e + onet.dt * (u_minus - u_plus)
    return Marking(q_b, q_e)


@dataclass(frozen=True)
class DroppedFiring:
    """A start whose completion falls beyond the simulated horizon."""

    step: int
    transition: str
    amount: float
    completes_at: int


def derive_completions(durations, schedule: np.ndarray):
    """Completion schedule implied by the duration constraint.

    u_plus[k + d] = u_minus[k] per transition with duration d; starts
    whose completion index exceeds the horizon are left out and
    reported.  Returns (u_plus, dropped) where dropped is a list of
    :class:`DroppedFiring` with transition *indices* (callers with
    label context translate them).
    """
    schedule = np.asarray(schedule, dtype=float)
    if schedule.ndim != 2:
        raise ValueError("schedule must be a K x n_transitions matrix")
    horizon, n = schedule.shape
    durations = _check_durations(durations, n)
    u_plus = np.zeros_like(schedule)
    dropped = []
    for k in range(horizon):
        for j in range(n):
            amount = schedule[k, j]
            if amount == 0.0:
                continue
            completes = k + int(durations[j])
            if completes < horizon:
                u_plus[completes, j] += amount
            else:
                dropped.append((k, j, float(amount), completes))
    return u_plus, dropped


@dataclass(frozen=True, eq=False)
class SimulationResult:
    """Trajectory of K+1 markings plus the derived completion schedule."""

    markings: tuple
    u_plus: np.ndarray
    dropped: tuple

    @property
    def q_b(self) -> np.ndarray:
        return np.array([m.q_b for m in self.markings])

    @property
    def q_e(self) -> np.ndarray:
        return np.array([m.q_e for m in self.markings])

    def __len__(self) -> int:
        return len(self.markings)

    def __iter__(self):
        return iter(self.markings)

    def __getitem__(self, idx):
        return self.markings[idx]


def simulate(net: EngineeringSystemNet, initial: Marking, schedule) -> SimulationResult:
    """Roll the net forward over a K x |E_S| start schedule.

    Completions are derived from the duration constraint; starts that
    would complete beyond the horizon are dropped with a warning and
    reported in the result.
    """
    schedule = np.asarray(schedule, dtype=float)
    if schedule.ndim != 2 or schedule.shape[1] != net.n_transitions:
        raise ValueError(
            f"schedule must have shape (K, {net.n_transitions}), got {schedule.shape}")
    if not np.all(np.isfinite(schedule)):
        raise ValueError("schedule must be finite")
    if np.any(schedule < 0):
        raise ValueError("schedule must be nonnegative")
    if initial.q_b.shape != (net.n_places,) or initial.q_e.shape != (net.n_transitions,):
        raise ValueError("initial marking shapes do not match the net")

    u_plus, dropped_raw = derive_completions(net.durations, schedule)
    labels = net.transition_labels
    dropped = tuple(DroppedFiring(step=k, transition=labels[j], amount=a, completes_at=c)
                    for k, j, a, c in dropped_raw)
    if dropped:
        warnings.warn(
            f"{len(dropped)} scheduled firing(s) complete beyond the horizon "
            f"and were dropped", RuntimeWarning, stacklevel=2)

    qb_traj, qe_traj = kernels.esn_trajectory(
        np.ascontiguousarray(net.incidence.m_plus),
        np.ascontiguousarray(net.incidence.m_minus),
        initial.q_b.copy(), initial.q_e.copy(),
        u_plus, np.ascontiguousarray(schedule), float(net.dt))
    markings = tuple(Marking(qb_traj[k], qe_traj[k]) for k in range(schedule.shape[0] + 1))
    return SimulationResult(markings=markings, u_plus=u_plus, dropped=dropped)
