"""End-to-end channel evaluation and tuning optimization.

The surface elements are loaded with tunable impedances (the diagonal of
the tuning matrix). The transmitter-to-receiver transfer impedance is

    h = z_rt - z_rs^T (Z_ss + diag(tuning))^(-1) z_st

computed with an LU solve, never an explicit inverse. A derivative-free
cyclic coordinate-descent optimizer adjusts per-element reactances to
maximize |h|.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.linalg.lapack import zgecon

from .errors import DomainError, SingularSystem
from .impedance import ImpedanceSet

DEFAULT_REACTANCE_BOUNDS = (-2000.0, 2000.0)  # [ohm]
DEFAULT_CONDITION_CAP = 1e12
_RESIDUAL_REL_MAX = 1e-10
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class TuningState:
    """Diagonal tuning impedances of the surface, in ohms.

    With reactance_only set, every entry must be purely imaginary with
    its reactance inside reactance_bounds; this is the physically passive
    lossless regime and the one the optimizer works in. Clearing the flag
    admits arbitrary complex entries without any realizability claim.
    """

    entries: np.ndarray
    reactance_only: bool = True
    reactance_bounds: tuple[float, float] = DEFAULT_REACTANCE_BOUNDS

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        object.__setattr__(self, "entries", entries)
        bounds = (float(self.reactance_bounds[0]), float(self.reactance_bounds[1]))
        object.__setattr__(self, "reactance_bounds", bounds)
        if entries.ndim != 1 or entries.shape[0] < 1:
            raise DomainError("tuning entries must form a non-empty vector")
        if not np.all(np.isfinite(entries)):
            raise DomainError("tuning entries must be finite")
        lo, hi = bounds
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise DomainError("reactance bounds must satisfy lo < hi, finite")
        if self.reactance_only:
            if np.any(entries.real != 0.0):
                raise DomainError(
                    "reactance-only tuning forbids resistive (real) parts"
                )
            x = entries.imag
            if np.any(x < lo) or np.any(x > hi):
                raise DomainError(
                    f"tuning reactances must lie within [{lo:g}, {hi:g}] ohm"
                )

    @classmethod
    def from_reactances(cls, x, reactance_bounds=DEFAULT_REACTANCE_BOUNDS):
        """Purely reactive state from a vector of reactances in ohms."""
        x = np.asarray(x, dtype=float)
        return cls(1j * x, reactance_only=True, reactance_bounds=reactance_bounds)

    @property
    def n_elements(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class ChannelResult:
    """One channel evaluation.

    h_e2e: transfer impedance [ohm]
    gain_db: 20*log10(|h_e2e / z_rt|), the level relative to the direct
             transmitter-receiver link
    condition_estimate: 1-norm condition estimate of the solved system
    """

    h_e2e: complex
    gain_db: float
    condition_estimate: float


def _factor_system(system: np.ndarray, cond_cap: float):
    with warnings.catch_warnings():
        # An exactly singular matrix makes the factorization warn; the
        # condition estimate below turns that case into a typed error.
        warnings.simplefilter("ignore")
        try:
            lu, piv = lu_factor(system)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem(f"coupling system factorization failed: {exc}")
    if not np.all(np.isfinite(lu)):
        raise SingularSystem("coupling system is singular (non-finite factors)")
    anorm = np.linalg.norm(system, 1)
    rcond, info = zgecon(lu, anorm)
    if info != 0:
        raise SingularSystem(f"condition estimator failed (info = {info})")
    cond = math.inf if rcond == 0 else 1.0 / float(rcond)
    if cond > cond_cap:
        raise SingularSystem(
            f"coupling system condition estimate {cond:.3e} exceeds the "
            f"cap {cond_cap:.3e}"
        )
    return lu, piv, cond


def end_to_end(
    imps: ImpedanceSet,
    tuning: TuningState,
    cond_cap: float = DEFAULT_CONDITION_CAP,
) -> ChannelResult:
    """Evaluate the transfer impedance for one tuning state.

    Solves (Z_ss + diag(tuning)) x = z_st by LU with partial pivoting,
    verifies the residual, and forms h = z_rt - z_rs . x with a plain
    (unconjugated) dot product. Deterministic for fixed inputs.

    Raises SingularSystem when the factorization fails, the 1-norm
    condition estimate exceeds cond_cap, or the residual will not shrink
    below 1e-10 of the right-hand side.
    """
    if tuning.n_elements != imps.n_elements:
        raise DomainError(
            f"tuning has {tuning.n_elements} entries, surface has "
            f"{imps.n_elements} elements"
        )
    system = imps.z_ss + np.diag(tuning.entries)
    lu, piv, cond = _factor_system(system, cond_cap)

    rhs = imps.z_st
    x = lu_solve((lu, piv), rhs)
    rhs_norm = np.linalg.norm(rhs)
    residual = np.linalg.norm(system @ x - rhs)
    if residual > _RESIDUAL_REL_MAX * rhs_norm:
        # One round of iterative refinement usually recovers the digits.
        x = x + lu_solve((lu, piv), rhs - system @ x)
        residual = np.linalg.norm(system @ x - rhs)
        if residual > _RESIDUAL_REL_MAX * rhs_norm:
            raise SingularSystem(
                f"solve residual {residual:.3e} stayed above "
                f"{_RESIDUAL_REL_MAX:.1e} * |rhs| = "
                f"{_RESIDUAL_REL_MAX * rhs_norm:.3e}"
            )

    h = complex(imps.z_rt - np.dot(imps.z_rs, x))
    if imps.z_rt == 0:
        raise DomainError("gain is undefined for a vanishing direct link")
    if h == 0:
        raise DomainError("transfer impedance vanished; gain is undefined")
    gain_db = 20.0 * math.log10(abs(h / imps.z_rt))
    return ChannelResult(h_e2e=h, gain_db=gain_db, condition_estimate=cond)


@dataclass(frozen=True)
class OptimizeResult:
    """Optimizer outcome: best tuning, its channel, and the trace of
    |h_e2e| after the initial state and each completed sweep."""

    tuning: TuningState
    channel: ChannelResult
    trace: tuple[float, ...] = field(default_factory=tuple)


def _golden_max(f, lo: float, hi: float, tol: float):
    """Golden-section maximization on [lo, hi]; returns (x, f(x))."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc > fd else (d, fd)


def optimize_tuning(
    imps: ImpedanceSet,
    init: TuningState,
    objective: str = "max_gain",
    budget: int = 20,
    seed: int | None = None,
    coarse_points: int = 65,
    cond_cap: float = DEFAULT_CONDITION_CAP,
) -> OptimizeResult:
    """Maximize |h_e2e| over per-element reactances.

    Cyclic coordinate descent: each pass sweeps the elements in order,
    and each element's reactance is re-optimized over the bounds by a
    coarse scan (coarse_points samples plus the current value) followed
    by golden-section refinement inside the best scan cell. A move is
    only accepted when it does not lower the objective, so the trace of
    |h_e2e| values is non-decreasing. budget caps the number of full
    sweeps; the search stops early once a sweep brings no improvement.

    Real parts of the entries are held fixed; with reactance_only set
    they are all zero. The procedure is deterministic; seed is accepted
    for interface stability but no randomness is used.

    Raises DomainError for budget < 1 or an unknown objective, and
    SingularSystem if every probed state fails to solve.
    """
    if objective != "max_gain":
        raise DomainError(f"unknown objective {objective!r}")
    if not isinstance(budget, int) or budget < 1:
        raise DomainError("optimizer budget must be an integer >= 1")
    if coarse_points < 3:
        raise DomainError("coarse_points must be at least 3")
    del seed  # deterministic search; parameter kept for call-site stability

    lo, hi = init.reactance_bounds
    entries = init.entries.copy()
    n = entries.shape[0]
    solve_failures = 0
    solve_successes = 0

    def evaluate(vec) -> tuple[float, ChannelResult | None]:
        nonlocal solve_failures, solve_successes
        state = TuningState(vec, reactance_only=False,
                            reactance_bounds=init.reactance_bounds)
        try:
            res = end_to_end(imps, state, cond_cap=cond_cap)
        except SingularSystem:
            solve_failures += 1
            return -math.inf, None
        solve_successes += 1
        return abs(res.h_e2e), res

    best_obj, best_res = evaluate(entries)
    trace = [best_obj]
    grid = np.linspace(lo, hi, coarse_points)
    cell = (hi - lo) / (coarse_points - 1)
    line_tol = 1e-10 * (hi - lo)

    for _ in range(budget):
        improved = False
        for idx in range(n):
            base = entries[idx].real  # held fixed; zero in reactive mode

            def line(x: float) -> float:
                entries[idx] = base + 1j * x
                return evaluate(entries)[0]

            current_x = entries[idx].imag
            scan = [(line(x), x) for x in grid]
            scan.append((line(current_x), current_x))
            scan_best, scan_x = max(scan, key=lambda t: t[0])
            bracket_lo = max(lo, scan_x - cell)
            bracket_hi = min(hi, scan_x + cell)
            gold_x, gold_obj = _golden_max(line, bracket_lo, bracket_hi, line_tol)
            cand_obj, cand_x = max((scan_best, scan_x), (gold_obj, gold_x))
            if cand_obj > best_obj:
                entries[idx] = base + 1j * cand_x
                best_obj = cand_obj
                improved = True
            else:
                entries[idx] = base + 1j * current_x
        trace.append(best_obj)
        if not improved:
            break

    if solve_successes == 0:
        raise SingularSystem(
            f"every probed tuning state failed to solve "
            f"({solve_failures} attempts)"
        )

    final_state = TuningState(entries, reactance_only=init.reactance_only,
                              reactance_bounds=init.reactance_bounds)
    final_obj, final_res = evaluate(entries)
    if final_res is None:
        raise SingularSystem("optimizer terminated on an unsolvable state")
    return OptimizeResult(tuning=final_state, channel=final_res,
                          trace=tuple(trace))
