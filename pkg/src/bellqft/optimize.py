"""Box-constrained Nelder-Mead maximization with quasi-random multistart."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.stats import qmc

from bellqft.chsh import TSIRELSON, UnitaryParams, chsh_base_value, chsh_unitary_value


@dataclass
class BoundedProblem:
    objective: Callable[[np.ndarray], float]
    lower: np.ndarray
    upper: np.ndarray
    names: tuple[str, ...] = ()

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        if self.lower.shape != self.upper.shape or self.lower.ndim != 1:
            raise ValueError("lower and upper bounds must be 1-D arrays of equal length")
        if not np.all(self.lower < self.upper):
            raise ValueError("bounds need lower < upper componentwise")

    @property
    def dimension(self) -> int:
        return self.lower.size

    def project(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)


@dataclass
class OptResult:
    best_point: np.ndarray
    best_value: float
    evaluations: int
    starts: int
    history: list[float]
    converged: list[bool] = field(default_factory=list)
    start_points: list[np.ndarray] = field(default_factory=list)
    traces: list[list[float]] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def all_converged(self) -> bool:
        return all(self.converged)


def nelder_mead(
    problem: BoundedProblem,
    x0: Sequence[float],
    max_iter: int = 2000,
    ftol: float = 1e-13,
    xtol: float = 1e-10,
    initial_step: float = 0.05,
    adaptive: bool = False,
) -> OptResult:
    """Maximize ``problem.objective`` from ``x0``.

    Standard reflect / expand / contract / shrink moves with every trial
    point clipped to the box.  ``initial_step`` is the fraction of each box
    side used to build the starting simplex.  Stops once the simplex
    diameter (max-norm distance to the best vertex) is below ``xtol`` and
    the spread of vertex values below ``ftol``, or after ``max_iter``
    iterations; ``converged`` is False only in the last case.  Either test
    alone can fire early: a simplex straddling a symmetric peak has zero
    value spread long before it has located the peak.
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != problem.lower.shape:
        raise ValueError(f"x0 has shape {x0.shape}, expected {problem.lower.shape}")
    if np.any(x0 < problem.lower) or np.any(x0 > problem.upper):
        raise ValueError("x0 must lie inside the box")
    n = problem.dimension
    if adaptive:
        rho, chi, gamma, sigma = 1.0, 1.0 + 2.0 / n, 0.75 - 0.5 / n, 1.0 - 1.0 / n
    else:
        rho, chi, gamma, sigma = 1.0, 2.0, 0.5, 0.5

    evaluations = 0

    def f(x):
        nonlocal evaluations
        evaluations += 1
        return -float(problem.objective(x))

    width = problem.upper - problem.lower
    simplex = [x0.copy()]
    for i in range(n):
        step = initial_step * width[i]
        vertex = x0.copy()
        # step inward when the vertex would leave the box
        vertex[i] = x0[i] + step if x0[i] + step <= problem.upper[i] else x0[i] - step
        simplex.append(vertex)
    simplex = np.array(simplex)
    values = np.array([f(v) for v in simplex])

    trace: list[float] = []
    converged = False
    for _ in range(max_iter):
        order = np.argsort(values, kind="stable")
        simplex, values = simplex[order], values[order]
        trace.append(-values[0])
        diameter = np.max(np.abs(simplex[1:] - simplex[0]))
        if diameter < xtol and values[-1] - values[0] < ftol:
            converged = True
            break

        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = problem.project(centroid + rho * (centroid - worst))
        fr = f(xr)
        if fr < values[0]:
            xe = problem.project(centroid + rho * chi * (centroid - worst))
            fe = f(xe)
            if fe < fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
            continue
        if fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
            continue
        if fr < values[-1]:
            xc = problem.project(centroid + gamma * (xr - centroid))
            fc = f(xc)
            if fc <= fr:
                simplex[-1], values[-1] = xc, fc
                continue
        else:
            xc = problem.project(centroid + gamma * (worst - centroid))
            fc = f(xc)
            if fc < values[-1]:
                simplex[-1], values[-1] = xc, fc
                continue
        simplex[1:] = simplex[0] + sigma * (simplex[1:] - simplex[0])
        values[1:] = [f(v) for v in simplex[1:]]

    best = int(np.argmin(values))
    return OptResult(
        best_point=simplex[best].copy(),
        best_value=-float(values[best]),
        evaluations=evaluations,
        starts=1,
        history=[-float(values[best])],
        converged=[converged],
        start_points=[x0.copy()],
        traces=[trace],
    )


def sobol_starts(problem: BoundedProblem, n_starts: int, seed: int) -> np.ndarray:
    """First ``n_starts`` points of a scrambled Sobol sequence mapped onto the box."""
    if n_starts < 1:
        raise ValueError("n_starts must be at least 1")
    sampler = qmc.Sobol(d=problem.dimension, scramble=True, seed=seed)
    unit = sampler.random_base2(max(0, math.ceil(math.log2(n_starts))))[:n_starts]
    return problem.lower + unit * (problem.upper - problem.lower)


def centered_starts(
    problem: BoundedProblem, n_starts: int, seed: int, center: np.ndarray, power: np.ndarray
) -> np.ndarray:
    """Sobol starts pulled toward ``center`` coordinate-wise.

    A unit coordinate ``s`` is mapped to ``center + d |2s - 1|^p`` with ``d``
    the distance to the upper (``s > 1/2``) or lower box edge.  ``p = 1``
    is uniform; larger ``p`` concentrates starts near ``center`` while still
    reaching the box faces.
    """
    if n_starts < 1:
        raise ValueError("n_starts must be at least 1")
    center = np.asarray(center, dtype=float)
    power = np.broadcast_to(np.asarray(power, dtype=float), center.shape)
    sampler = qmc.Sobol(d=problem.dimension, scramble=True, seed=seed)
    unit = sampler.random_base2(max(0, math.ceil(math.log2(n_starts))))[:n_starts]
    s = 2.0 * unit - 1.0
    reach = np.where(s >= 0, problem.upper - center, center - problem.lower)
    points = center + np.sign(s) * reach * np.abs(s) ** power
    return problem.project(points)


def multistart(
    problem: BoundedProblem,
    n_starts: int,
    seed: int = 0,
    starts: np.ndarray | None = None,
    **nm_options,
) -> OptResult:
    """Run Nelder-Mead from each start and keep the best result.

    Starts default to :func:`sobol_starts`; results merge in start order so
    the outcome is reproducible for a fixed seed.
    """
    if starts is None:
        starts = sobol_starts(problem, n_starts, seed)
    elif len(starts) != n_starts:
        raise ValueError("len(starts) must equal n_starts")
    runs = [nelder_mead(problem, x0, **nm_options) for x0 in starts]
    best = max(range(len(runs)), key=lambda i: (runs[i].best_value, -i))
    return OptResult(
        best_point=runs[best].best_point,
        best_value=runs[best].best_value,
        evaluations=sum(r.evaluations for r in runs),
        starts=len(runs),
        history=[r.best_value for r in runs],
        converged=[r.converged[0] for r in runs],
        start_points=[r.start_points[0] for r in runs],
        traces=[r.traces[0] for r in runs],
        notes={"best_start": best, "seed": seed},
    )


BASE_NAMES = ("lambda", "eta", "eta_prime")
UNITARY_NAMES = BASE_NAMES + UnitaryParams.names()

LAMBDA_BOUNDS = (0.01, 0.9999)
ETA_BOUNDS = (-6.0, 6.0)
UNITARY_BOUNDS = (-200.0, 200.0)


def base_problem() -> BoundedProblem:
    lower = np.array([LAMBDA_BOUNDS[0], ETA_BOUNDS[0], ETA_BOUNDS[0]])
    upper = np.array([LAMBDA_BOUNDS[1], ETA_BOUNDS[1], ETA_BOUNDS[1]])
    return BoundedProblem(chsh_base_value, lower, upper, BASE_NAMES)


def unitary_problem() -> BoundedProblem:
    lower = np.array([LAMBDA_BOUNDS[0], ETA_BOUNDS[0], ETA_BOUNDS[0]] + [UNITARY_BOUNDS[0]] * 8)
    upper = np.array([LAMBDA_BOUNDS[1], ETA_BOUNDS[1], ETA_BOUNDS[1]] + [UNITARY_BOUNDS[1]] * 8)
    return BoundedProblem(chsh_unitary_value, lower, upper, UNITARY_NAMES)


def symmetric_pattern(point: Sequence[float], rtol: float = 1e-3) -> bool:
    """Whether Bob's unitary parameters repeat Alice's: sigma=alpha, tau=beta, sigma'=alpha', tau'=beta'."""
    u = UnitaryParams.from_array(point[3:])
    pairs = [(u.alpha, u.sigma), (u.beta, u.tau), (u.alpha_prime, u.sigma_prime), (u.beta_prime, u.tau_prime)]
    return all(math.isclose(a, b, rel_tol=rtol, abs_tol=rtol) for a, b in pairs)


def maximize_base(n_starts: int = 64, seed: int = 0, **nm_options) -> OptResult:
    nm_options.setdefault("max_iter", 600)
    return multistart(base_problem(), n_starts, seed, **nm_options)


#: Start concentration for the unitary problem: uniform in (lambda, eta, eta'),
#: strongly centered on the identity unitaries.
UNITARY_START_POWER = np.array([1.0, 1.0, 1.0] + [6.0] * 8)


def maximize_unitary(n_starts: int = 256, seed: int = 0, **nm_options) -> OptResult:
    """Multistart over all 11 parameters, the 8 unitary ones treated as free.

    The returned notes record whether Bob's best parameters reproduce
    Alice's (the symmetric pattern) and whether the value stays within the
    Tsirelson bound.
    """
    problem = unitary_problem()
    center = np.array([0.5 * (LAMBDA_BOUNDS[0] + LAMBDA_BOUNDS[1]), 0.0, 0.0] + [0.0] * 8)
    starts = centered_starts(problem, n_starts, seed, center, UNITARY_START_POWER)
    nm_options.setdefault("max_iter", 4000)
    nm_options.setdefault("adaptive", True)
    result = multistart(problem, n_starts, seed, starts=starts, **nm_options)
    result.notes["symmetric_pattern"] = symmetric_pattern(result.best_point)
    result.notes["within_tsirelson"] = bool(abs(result.best_value) <= TSIRELSON + 1e-9)
    return result
