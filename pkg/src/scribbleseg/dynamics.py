"""Constrained dominant-set extraction via infection-and-immunization dynamics.

Seed constraints are enforced through the payoff matrix: subtracting
``alpha`` from the diagonal entries of every non-seed vertex, with alpha
above the largest eigenvalue of the non-seed principal submatrix,
guarantees that every local maximizer of x'Bx over the simplex keeps at
least one seed in its support.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, SeedCoverageError
from .graph import AffinityGraph, DominantSetResult, support_of
from .validation import check_simplex

log = logging.getLogger(__name__)

# Strictly-positive lower bound for alpha, used when every non-seed vertex
# is isolated and the eigenvalue bound degenerates to zero.
ALPHA_FLOOR = 1e-4


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and iteration budgets for the simplex dynamics."""

    tolerance: float = 1e-7
    max_iterations: int = 10_000
    alpha_margin: float = 1.01
    alpha_floor: float = ALPHA_FLOOR

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.alpha_margin <= 1:
            raise ValueError("alpha_margin must exceed 1")
        if self.alpha_floor <= 0:
            raise ValueError("alpha_floor must be positive")


@dataclass(frozen=True)
class CdsProgram:
    """Maximize x'Bx over the simplex, B = A - alpha * diag(non-seed mask)."""

    graph: AffinityGraph
    seeds: frozenset[int]
    alpha: float
    b: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        b = np.asarray(self.b, dtype=np.float64).copy()
        b.flags.writeable = False
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "seeds", frozenset(self.seeds))


def _power_iteration(m: np.ndarray, tol: float = 1e-8, max_iterations: int = 200_000) -> float:
    """Largest eigenvalue of a symmetric matrix by shifted power iteration.

    A positive diagonal shift makes the algebraically largest eigenvalue
    dominate in magnitude even when the spectrum dips negative: half the
    infinity norm suffices for non-negative matrices (their spectral
    radius is the top eigenvalue), the full norm otherwise. Stops when the
    residual ||Mv - lambda v|| certifies the Rayleigh quotient to ``tol``
    (the residual bounds the eigenvalue error for symmetric matrices).
    """
    n = m.shape[0]
    if n == 1:
        return float(m[0, 0])
    norm_inf = float(np.abs(m).sum(axis=1).max())
    if norm_inf == 0.0:
        return 0.0
    # Keep the shift as small as safety allows: a large shift drags the
    # convergence ratio (lambda_2 + s) / (lambda_1 + s) toward one.
    shift = 0.5 * norm_inf if m.min() >= 0.0 else norm_inf
    shifted = m + shift * np.eye(n)
    rng = np.random.default_rng(0)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    for _ in range(max_iterations):
        w = shifted @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            # v lies in the nullspace of the shifted matrix: eigenvalue -shift.
            return -shift
        v = w / norm
        rayleigh = float(v @ (shifted @ v))
        residual = float(np.linalg.norm(shifted @ v - rayleigh * v))
        if residual <= tol:
            return rayleigh - shift
    raise ConvergenceError(f"power iteration did not reach residual {tol} in {max_iterations} iterations")


def lambda_max_principal(graph: AffinityGraph, excluded) -> float:
    """Largest eigenvalue of the graph matrix restricted to V \\ excluded."""
    excluded = frozenset(excluded)
    keep = np.array([i for i in range(graph.n) if i not in excluded], dtype=np.int64)
    if keep.size == 0:
        raise ValueError("the excluded set covers every vertex; no principal submatrix remains")
    sub = graph.a[np.ix_(keep, keep)]
    return _power_iteration(sub)


def build_program(graph: AffinityGraph, seeds, cfg: SolverConfig | None = None) -> CdsProgram:
    """Assemble the seed-constrained payoff matrix with a safe alpha.

    alpha = margin * max(lambda_max(A restricted to non-seeds), floor); the
    strict inequality required by the containment guarantee is met through
    the multiplicative margin.
    """
    cfg = cfg or SolverConfig()
    seeds = frozenset(seeds)
    if not seeds:
        raise ValueError("seed set must be non-empty")
    if not seeds <= set(range(graph.n)):
        raise ValueError("seed set contains unknown vertex ids")
    non_seeds = np.array([i for i in range(graph.n) if i not in seeds], dtype=np.int64)
    if non_seeds.size == 0:
        lam = 0.0  # no constraint needed: B equals A
    else:
        lam = lambda_max_principal(graph, seeds)
    alpha = cfg.alpha_margin * max(lam, cfg.alpha_floor)
    b = graph.a.copy()
    b[non_seeds, non_seeds] = -alpha
    return CdsProgram(graph=graph, seeds=seeds, alpha=alpha, b=b)


def inimdyn_step(b: np.ndarray, x: np.ndarray) -> np.ndarray:
    """One infection-and-immunization update of the state ``x``.

    Selects the pure strategy (excess payoff > 0) or co-strategy (member
    with excess payoff < 0) of maximum infectivity magnitude, then moves by
    the payoff-optimal invasion share. Returns ``x`` unchanged when nothing
    is infective; the payoff x'Bx never decreases.
    """
    payoff = float(x @ (b @ x))
    excess = b @ x - payoff
    i_pure = int(np.argmax(excess))
    pure_score = float(excess[i_pure]) if excess[i_pure] > 0.0 else -np.inf
    masked = np.where(x > 0.0, excess, np.inf)
    i_co = int(np.argmin(masked))
    co_valid = x[i_co] > 0.0 and excess[i_co] < 0.0 and x[i_co] < 1.0
    co_score = float(-excess[i_co]) if co_valid else -np.inf
    if pure_score <= 0.0 and co_score <= 0.0:
        return x
    if pure_score >= co_score:
        y = np.zeros_like(x)
        y[i_pure] = 1.0
    else:
        y = x / (1.0 - x[i_co])
        y[i_co] = 0.0  # extinction is exact, not a rounding artifact
    direction = y - x
    gain = float(direction @ (b @ x))
    curvature = float(direction @ (b @ direction))
    if curvature < 0.0:
        delta = min(-gain / curvature, 1.0)
    else:
        delta = 1.0
    new_x = y if delta >= 1.0 else x + delta * direction
    np.clip(new_x, 0.0, None, out=new_x)
    return new_x / new_x.sum()


def _infectivity(b: np.ndarray, x: np.ndarray) -> float:
    """Largest infectivity magnitude over pure strategies and co-strategies."""
    excess = b @ x - float(x @ (b @ x))
    best = float(excess.max())
    members = x > 0.0
    if members.any():
        best = max(best, float(-excess[members].min()))
    return best


def inimdyn_solve(
    prog: CdsProgram,
    x0: np.ndarray | None = None,
    cfg: SolverConfig | None = None,
) -> DominantSetResult:
    """Run the dynamics to an epsilon-Nash state of the constrained payoff.

    Starts from the uniform barycenter of the simplex unless ``x0`` is
    given. When the iteration budget runs out the final state is returned
    flagged ``converged=False``.
    """
    cfg = cfg or SolverConfig()
    b = prog.b
    n = b.shape[0]
    x = np.full(n, 1.0 / n) if x0 is None else check_simplex(x0)
    iterations = 0
    converged = _infectivity(b, x) <= cfg.tolerance
    while not converged and iterations < cfg.max_iterations:
        x = inimdyn_step(b, x)
        iterations += 1
        converged = _infectivity(b, x) <= cfg.tolerance
    if not converged:
        log.warning("inimdyn did not converge in %d iterations (residual %.3e)", iterations, _infectivity(b, x))
    value = float(x @ (prog.graph.a @ x))
    return DominantSetResult(
        support=support_of(x),
        chi=x,
        value=value,
        converged=converged,
        iterations=iterations,
    )


def replicator_step(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    """One replicator-dynamics update x_i <- x_i (Ax)_i / x'Ax.

    Fixed-point verification utility only: characteristic vectors of
    dominant sets must be stationary under this map. Requires a
    non-negative payoff matrix and x'Ax > 0.
    """
    ax = a @ x
    denom = float(x @ ax)
    if denom <= 0.0:
        raise ValueError("replicator step undefined: x'Ax is not positive")
    return x * ax / denom


def extract_cds_collection(
    graph: AffinityGraph,
    seeds,
    cfg: SolverConfig | None = None,
) -> list[DominantSetResult]:
    """Peel constrained dominant sets until every seed vertex is covered.

    Each round solves on the subgraph of still-active vertices, records the
    support (re-indexed to the original graph), removes it, and re-seeds
    with the uncovered seeds. Supports are pairwise disjoint and their
    union contains all seeds; the round budget is |seeds|.
    """
    cfg = cfg or SolverConfig()
    seeds = frozenset(seeds)
    if not seeds:
        raise ValueError("seed set must be non-empty")
    if not seeds <= set(range(graph.n)):
        raise ValueError("seed set contains unknown vertex ids")
    active = sorted(range(graph.n))
    uncovered = set(seeds)
    results: list[DominantSetResult] = []
    for _ in range(len(seeds)):
        if not uncovered:
            break
        index = np.asarray(active, dtype=np.int64)
        sub = graph.subgraph(active)
        local_seeds = {active.index(s) for s in uncovered}
        prog = build_program(sub, local_seeds, cfg)
        local = inimdyn_solve(prog, cfg=cfg)
        support = frozenset(int(index[v]) for v in local.support)
        chi = np.zeros(graph.n)
        chi[index] = local.chi
        value = float(chi @ (graph.a @ chi))
        results.append(
            DominantSetResult(
                support=support,
                chi=chi,
                value=value,
                converged=local.converged,
                iterations=local.iterations,
            )
        )
        uncovered -= support
        active = [v for v in active if v not in support]
        if not active:
            break
    if uncovered:
        raise SeedCoverageError(f"seeds left uncovered after {len(results)} extraction rounds: {sorted(uncovered)}")
    return results
