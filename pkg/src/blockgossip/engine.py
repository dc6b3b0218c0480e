"""Gossip iterations in primal and dual form, plus full run loops.

The production primal step averages node values over the connected
components of the drawn edge subset; that is all a real gossip network
computes, and it costs O(tau). The algebraically equivalent projection form
(pseudoinverse of the sampled block of A A^T) is kept as a test oracle. The
dual step updates edge weights y so that the induced node values c + A^T y
follow exactly the same trajectory.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graphs import Graph, IncidenceSystem, component_node_lists, incidence
from .linalg import pinv_psd
from .sampling import SamplerSpec, SketchSample, draw, draw_indices

DEFAULT_MAX_ITERS = 1_000_000

# Exact recompute cadence for the incrementally tracked squared error; keeps
# float drift bounded on runs with hundreds of thousands of steps.
_REFRESH_EVERY = 8192


@dataclass(frozen=True)
class PrimalState:
    """Node values x at iteration k, alongside the initial values c."""

    x: np.ndarray
    c: np.ndarray
    k: int = 0


@dataclass(frozen=True)
class DualState:
    """Edge weights y at iteration k; the induced node values are c + A^T y."""

    y: np.ndarray
    c: np.ndarray
    k: int = 0


@dataclass(frozen=True)
class StepRecord:
    sample: SketchSample
    pre_rel_error: float
    post_rel_error: float
    dual_objective: float | None = None
    x: np.ndarray | None = None


@dataclass(frozen=True)
class RunTrace:
    engine: str
    iterations: int
    capped: bool
    trivial: bool
    z0: float
    final_rel_error: float
    final_x: np.ndarray
    x_star: np.ndarray
    records: tuple[StepRecord, ...] = field(default=())
    max_mass_drift: float | None = None


def initial_primal(c: Sequence[float]) -> PrimalState:
    c = np.asarray(c, dtype=np.float64)
    return PrimalState(x=c.copy(), c=c, k=0)


def initial_dual(c: Sequence[float], m: int) -> DualState:
    c = np.asarray(c, dtype=np.float64)
    return DualState(y=np.zeros(m), c=c, k=0)


def _check_sample(sample: SketchSample, n: int, what: str) -> None:
    if sample.n != n:
        raise ValueError(f"{what}: sample drawn for n={sample.n}, state has n={n}")


def _averaged(x: np.ndarray, groups: Sequence[Sequence[int]]) -> np.ndarray:
    out = x.copy()
    for nodes in groups:
        s = 0.0
        for i in nodes:
            s += out[i]
        mu = s / len(nodes)
        for i in nodes:
            out[i] = mu
    return out


def rbk_step(state: PrimalState, sample: SketchSample) -> PrimalState:
    """Average node values over each connected component of the sample."""
    _check_sample(sample, state.x.shape[0], "rbk_step")
    groups = [comp.sorted_nodes() for comp in sample.components]
    return PrimalState(x=_averaged(state.x, groups), c=state.c, k=state.k + 1)


def rbk_step_projection(
    state: PrimalState, sample: SketchSample, sys: IncidenceSystem
) -> PrimalState:
    """Projection of x onto the solution set of the sampled constraint rows.

    Literal pseudoinverse form; equivalent to rbk_step and kept as its
    independent oracle, not as a production path.
    """
    _check_sample(sample, state.x.shape[0], "rbk_step_projection")
    if sys.n != state.x.shape[0]:
        raise ValueError(
            f"rbk_step_projection: system has n={sys.n}, state has n={state.x.shape[0]}"
        )
    rows = list(sample.edges)
    A_s = sys.A[rows, :]
    gram = A_s @ A_s.T
    x_new = state.x - A_s.T @ (pinv_psd(gram) @ (A_s @ state.x))
    return PrimalState(x=x_new, c=state.c, k=state.k + 1)


def rnm_step(
    state: DualState, sample: SketchSample, sys: IncidenceSystem
) -> DualState:
    """Maximize the dual objective over the sampled block of edge weights.

    Solves the block of the (negated) Hessian A A^T restricted to the sample
    via its pseudoinverse, which picks the least-norm maximizer; entries of y
    outside the sample do not move.
    """
    _check_sample(sample, state.c.shape[0], "rnm_step")
    if sys.m != state.y.shape[0]:
        raise ValueError(f"rnm_step: system has m={sys.m}, state has m={state.y.shape[0]}")
    rows = list(sample.edges)
    A_s = sys.A[rows, :]
    gram = A_s @ A_s.T
    x = state.c + sys.A.T @ state.y
    y_new = state.y.copy()
    y_new[rows] -= pinv_psd(gram) @ (A_s @ x)
    return DualState(y=y_new, c=state.c, k=state.k + 1)


def primal_from_dual(state: DualState, sys: IncidenceSystem) -> np.ndarray:
    """Node values induced by the edge weights: c + A^T y."""
    return state.c + sys.A.T @ state.y


def dual_objective(state: DualState, sys: IncidenceSystem) -> float:
    """D(y) = -(A c)^T y - 0.5 * ||A^T y||^2 (zero right-hand side)."""
    Aty = sys.A.T @ state.y
    return float(-(sys.A @ state.c) @ state.y - 0.5 * (Aty @ Aty))


def advice(state: DualState, sys: IncidenceSystem) -> np.ndarray:
    """Per-node correction A^T y that turns the private value c_i into the
    node's current estimate."""
    return sys.A.T @ state.y


def run(
    engine: str,
    g: Graph,
    spec: SamplerSpec,
    c: Sequence[float],
    eps: float,
    cap: int = DEFAULT_MAX_ITERS,
    rng: np.random.Generator | None = None,
    records: bool = True,
    keep_states: bool = False,
    mass_check: bool = False,
) -> RunTrace:
    """Iterate until the relative error ||x - x*|| / ||c - x*|| drops below eps.

    Parameters
    ----------
    engine : "primal" (component averaging) or "dual" (edge-weight ascent).
    g, spec, c : graph, sampler, and initial node values.
    eps : stopping tolerance on the relative error; must be positive.
    cap : iteration cap; a capped run is flagged in the trace, not raised.
    rng : seeded generator owning this run's subset stream.
    records : keep one StepRecord per iteration. Turned off, the primal
        engine runs a fast incremental-error loop with the same draw stream.
    keep_states : snapshot the node values into each record.
    mass_check : track the worst per-step drift of mean(x) from mean(c).

    Returns
    -------
    RunTrace with the iteration count, per-step records when requested, and
    the final state.
    """
    if engine not in ("primal", "dual"):
        raise ValueError(f"unknown engine {engine!r}")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if cap < 1:
        raise ValueError(f"iteration cap must be >= 1, got {cap}")
    c = np.asarray(c, dtype=np.float64)
    if c.shape != (g.n,):
        raise ValueError(f"c has shape {c.shape}, expected ({g.n},)")
    if rng is None:
        raise ValueError("run needs a seeded rng")
    tau = spec.resolve_tau(g.m)

    cbar = float(np.sum(c) / g.n)
    x_star = np.full(g.n, cbar)
    z0 = float(np.linalg.norm(c - x_star))
    if bool(np.all(c == c[0])) or z0 == 0.0:
        return RunTrace(
            engine=engine, iterations=0, capped=False, trivial=True, z0=0.0,
            final_rel_error=0.0, final_x=c.copy(), x_star=x_star,
        )

    if engine == "primal" and not records and not keep_states:
        iters, capped, x_list, rel, drift = _run_primal_fast(
            g, tau, c, eps, cap, rng, mass_check
        )
        return RunTrace(
            engine=engine, iterations=iters, capped=capped, trivial=False, z0=z0,
            final_rel_error=rel, final_x=np.asarray(x_list), x_star=x_star,
            max_mass_drift=drift,
        )
    return _run_recorded(
        engine, g, spec, c, eps, cap, rng, records, keep_states, mass_check,
        cbar, x_star, z0,
    )


def _run_recorded(engine, g, spec, c, eps, cap, rng, keep_records, keep_states,
                  mass_check, cbar, x_star, z0) -> RunTrace:
    sys = incidence(g)
    x = c.copy()
    y = np.zeros(g.m)
    recs: list[StepRecord] = []
    max_drift = 0.0 if mass_check else None
    rel = float(np.linalg.norm(x - x_star)) / z0
    if rel < eps:
        return RunTrace(
            engine=engine, iterations=0, capped=False, trivial=False, z0=z0,
            final_rel_error=rel, final_x=x, x_star=x_star,
            max_mass_drift=max_drift,
        )
    k = 0
    capped = True
    while k < cap:
        k += 1
        sample = draw(spec, g, rng)
        pre_rel = rel
        obj = None
        if engine == "primal":
            groups = [comp.sorted_nodes() for comp in sample.components]
            x = _averaged(x, groups)
        else:
            state = rnm_step(DualState(y=y, c=c, k=k - 1), sample, sys)
            y = state.y
            x = primal_from_dual(state, sys)
            obj = dual_objective(state, sys)
        rel = float(np.linalg.norm(x - x_star)) / z0
        if mass_check:
            max_drift = max(max_drift, abs(float(np.sum(x) / g.n) - cbar))
        if keep_records:
            recs.append(
                StepRecord(
                    sample=sample, pre_rel_error=pre_rel, post_rel_error=rel,
                    dual_objective=obj, x=x.copy() if keep_states else None,
                )
            )
        if rel < eps:
            capped = False
            break
    return RunTrace(
        engine=engine, iterations=k, capped=capped, trivial=False, z0=z0,
        final_rel_error=rel, final_x=x, x_star=x_star, records=tuple(recs),
        max_mass_drift=max_drift,
    )


def _run_primal_fast(g, tau, c, eps, cap, rng, mass_check):
    """Primal loop on plain lists with an incrementally tracked error.

    The squared error is refreshed from scratch periodically and whenever the
    threshold appears crossed, so float drift cannot distort hitting times.
    """
    n = g.n
    m = g.m
    u = [e[0] for e in g.edges]
    v = [e[1] for e in g.edges]
    x = [float(val) for val in c]
    cbar = 0.0
    for val in x:
        cbar += val
    cbar /= n

    def exact_err2() -> float:
        s = 0.0
        for val in x:
            d = val - cbar
            s += d * d
        return s

    err2 = exact_err2()
    z0sq = err2
    thresh = (eps * eps) * z0sq
    max_drift = 0.0 if mass_check else None
    integers = rng.integers
    k = 0
    capped = True
    pairwise = tau == 1
    while k < cap:
        k += 1
        if pairwise:
            e = int(integers(0, m))
            i = u[e]
            j = v[e]
            xi = x[i]
            xj = x[j]
            mu = 0.5 * (xi + xj)
            x[i] = mu
            x[j] = mu
            di = xi - cbar
            dj = xj - cbar
            dm = mu - cbar
            err2 += 2.0 * dm * dm - di * di - dj * dj
        else:
            selected = draw_indices(rng, m, tau)
            for nodes in component_node_lists(g, selected):
                s = 0.0
                for a in nodes:
                    s += x[a]
                mu = s / len(nodes)
                dm = mu - cbar
                dm2 = dm * dm
                for a in nodes:
                    d = x[a] - cbar
                    err2 += dm2 - d * d
                    x[a] = mu
        if mass_check:
            s = 0.0
            for val in x:
                s += val
            max_drift = max(max_drift, abs(s / n - cbar))
        if err2 < thresh:
            err2 = exact_err2()
            if err2 < thresh:
                capped = False
                break
        elif k % _REFRESH_EVERY == 0:
            err2 = exact_err2()
    final_rel = (max(err2, 0.0) ** 0.5) / (z0sq ** 0.5)
    return k, capped, x, final_rel, max_drift
