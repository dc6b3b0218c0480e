"""Spectral rate analysis and experiment statistics.

H is the expectation of the sampled projection operator R_S over the subset
distribution. Its exact value comes from enumerating all C(m, tau) subsets
when that is affordable, otherwise from a Monte Carlo mean; the per-step
contraction factor of the expected squared error is rho = 1 minus the
smallest nonzero eigenvalue of A^T H A.
"""
from __future__ import annotations

import itertools
import math
import multiprocessing
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .engine import DEFAULT_MAX_ITERS, run
from .graphs import Graph, IncidenceSystem, incidence
from .linalg import pinv_psd, sym_eigen, zero_cutoff
from .sampling import (
    ENUMERATION_CAP,
    SamplerSpec,
    draw_indices,
    enumeration_feasible,
    make_rng,
    subset_count,
)

CROSS_CHECK_TOL = 1e-8


class CappedRunError(RuntimeError):
    """A trial hit the iteration cap; partial results ride along."""

    def __init__(self, message: str, rows: list | None = None):
        super().__init__(message)
        self.rows = rows or []


@dataclass(frozen=True)
class ExpectedProjection:
    """E[R_S] for a sampler, with the estimation mode on record."""

    H: np.ndarray
    method: str  # "exact-enumeration" or "monte-carlo"
    samples: int  # subsets enumerated or drawn
    tau: int


@dataclass(frozen=True)
class RateReport:
    H: np.ndarray
    rho: float
    lambda_min_plus: float
    rho_second_largest: float
    iter_complexity: float
    method: str
    tau: int
    one_step: bool


@dataclass(frozen=True)
class AveragingTimeBound:
    iterations: int
    raw: float
    loose: float


@dataclass(frozen=True)
class SpeedupRow:
    tau: int
    mean_iters: float
    std_iters: float
    baseline: float
    theoretical: float | None


def _scatter_projection(H: np.ndarray, AAT: np.ndarray, subset: Sequence[int]) -> None:
    S = list(subset)
    gram = AAT[np.ix_(S, S)]
    H[np.ix_(S, S)] += pinv_psd(gram)


def _exact_chunk(args) -> np.ndarray:
    AAT, m, tau, start, stop = args
    H = np.zeros((m, m))
    subsets = itertools.islice(itertools.combinations(range(m), tau), start, stop)
    for S in subsets:
        _scatter_projection(H, AAT, S)
    return H


def expected_projection(
    g: Graph,
    sys: IncidenceSystem,
    spec: SamplerSpec,
    rng: np.random.Generator | None = None,
    n_samples: int | None = None,
    n_jobs: int = 1,
    method: str = "auto",
) -> ExpectedProjection:
    """E[R_S], exactly when C(m, tau) fits the enumeration cap, else Monte Carlo.

    The Monte Carlo sample count defaults to min(1e5, 100 * C(m, tau)); pass
    n_samples to override. The fallback is automatic and recorded in the
    returned method field; method="exact" or "monte-carlo" pins one mode.
    """
    if method not in ("auto", "exact", "monte-carlo"):
        raise ValueError(f"unknown method {method!r}")
    tau = spec.resolve_tau(g.m)
    m = g.m
    AAT = sys.A @ sys.A.T
    count = subset_count(g, tau)
    if method == "exact" and count > ENUMERATION_CAP:
        raise ValueError(
            f"C({m}, {tau}) = {count} subsets exceeds the enumeration cap"
        )
    if method != "monte-carlo" and count <= ENUMERATION_CAP:
        if n_jobs > 1 and count > 20_000:
            chunks = _chunk_ranges(count, n_jobs * 4)
            args = [(AAT, m, tau, a, b) for a, b in chunks]
            with multiprocessing.get_context("fork").Pool(n_jobs) as pool:
                parts = pool.map(_exact_chunk, args)
            H = sum(parts)
        else:
            H = _exact_chunk((AAT, m, tau, 0, count))
        H /= count
        H = (H + H.T) / 2.0
        return ExpectedProjection(H=H, method="exact-enumeration", samples=count, tau=tau)
    n = n_samples if n_samples is not None else min(100_000, 100 * count)
    if rng is None:
        rng = make_rng(0, m, tau)
    H = np.zeros((m, m))
    for _ in range(n):
        _scatter_projection(H, AAT, draw_indices(rng, m, tau))
    H /= n
    H = (H + H.T) / 2.0
    return ExpectedProjection(H=H, method="monte-carlo", samples=n, tau=tau)


def _chunk_ranges(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total))
    step = total // parts
    bounds = [i * step for i in range(parts)] + [total]
    return [(bounds[i], bounds[i + 1]) for i in range(parts)]


def convergence_rate(sys: IncidenceSystem, proj: ExpectedProjection) -> RateReport:
    """Contraction factor rho = 1 - lambda_min_plus(A^T H A).

    A^T H A must have exactly one zero eigenvalue (the all-ones direction);
    more means the sampler misses part of the edge space. rho is recomputed
    independently as the second-largest eigenvalue of I - A^T H A and the
    two values must agree to 1e-8.
    """
    M = sys.A.T @ proj.H @ sys.A
    M = (M + M.T) / 2.0
    dec = sym_eigen(M)
    cutoff = zero_cutoff(dec.eigenvalues)
    n_zero = int(np.sum(dec.eigenvalues <= cutoff))
    if n_zero != 1:
        raise ValueError(
            f"A^T H A has {n_zero} zero eigenvalues, expected exactly 1; "
            "the expected projection is singular on the constraint space"
        )
    lam = float(dec.eigenvalues[n_zero])
    lam = min(lam, 1.0)
    rho = 1.0 - lam
    if rho < 1e-12:
        rho = 0.0
        lam = 1.0
    w_eigs = np.sort(np.linalg.eigvalsh(np.eye(sys.n) - M))
    rho_second = float(w_eigs[-2])
    if abs(rho - rho_second) > CROSS_CHECK_TOL:
        raise RuntimeError(
            f"rate cross-check failed: 1 - lambda_min_plus = {rho!r} but the "
            f"second-largest eigenvalue of the expected iteration is {rho_second!r}"
        )
    return RateReport(
        H=proj.H, rho=rho, lambda_min_plus=lam, rho_second_largest=rho_second,
        iter_complexity=1.0 / lam, method=proj.method, tau=proj.tau,
        one_step=(rho == 0.0),
    )


def exact_rate(g: Graph, tau: int, n_jobs: int = 1) -> RateReport:
    """Rate report for uniform fixed-size sampling via exact enumeration."""
    sys = incidence(g)
    proj = expected_projection(g, sys, SamplerSpec.fixed_size(tau), n_jobs=n_jobs)
    if proj.method != "exact-enumeration":
        raise ValueError(f"exact enumeration infeasible for tau={tau} on m={g.m}")
    return convergence_rate(sys, proj)


def averaging_time_bound(rho: float, eps: float) -> AveragingTimeBound:
    """Iteration bound 3 log(1/eps) / log(1/rho), with the looser
    3 log(1/eps) / (1 - rho) alongside."""
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if rho < 0.0 or rho >= 1.0:
        raise ValueError(f"rho must lie in [0, 1), got {rho}")
    log_eps = math.log(1.0 / eps)
    if rho == 0.0:
        return AveragingTimeBound(iterations=1, raw=0.0, loose=3.0 * log_eps)
    raw = 3.0 * log_eps / math.log(1.0 / rho)
    loose = 3.0 * log_eps / (1.0 - rho)
    return AveragingTimeBound(iterations=math.ceil(raw), raw=raw, loose=loose)


def _hitting_task(args) -> tuple[int, bool]:
    g, spec, c, eps, cap, seed, stream = args
    rng = make_rng(seed, *stream)
    trace = run("primal", g, spec, c, eps, cap=cap, rng=rng, records=False)
    return trace.iterations, trace.capped


def _map_tasks(tasks: list, n_jobs: int) -> list[tuple[int, bool]]:
    if n_jobs > 1 and len(tasks) > 1:
        with multiprocessing.get_context("fork").Pool(n_jobs) as pool:
            return pool.map(_hitting_task, tasks, chunksize=max(1, len(tasks) // (n_jobs * 8)))
    return [_hitting_task(t) for t in tasks]


def empirical_averaging_time(
    g: Graph,
    spec: SamplerSpec,
    c: Sequence[float],
    eps: float,
    trials: int,
    seed: int,
    cap: int = DEFAULT_MAX_ITERS,
    n_jobs: int = 1,
) -> int:
    """Empirical (1 - eps)-quantile of the first iteration reaching eps.

    Needs trials >= ceil(10 / eps) so the quantile is estimable. Per-run
    error is nonincreasing, so the hitting time of each seeded run is exactly
    the run length reported by the engine.
    """
    need = math.ceil(10.0 / eps)
    if trials < need:
        raise ValueError(f"need at least {need} trials for eps={eps}, got {trials}")
    tasks = [(g, spec, c, eps, cap, seed, (t,)) for t in range(trials)]
    results = _map_tasks(tasks, n_jobs)
    if any(capped for _, capped in results):
        raise CappedRunError(
            f"a trial hit the iteration cap {cap} before reaching eps={eps}; increase cap"
        )
    times = sorted(iters for iters, _ in results)
    rank = math.ceil((1.0 - eps) * trials)
    return times[rank - 1]


def speedup_curve(
    g: Graph,
    c: Sequence[float],
    eps: float,
    taus: Sequence[int],
    trials: int = 20,
    seed: int = 0,
    cap: int = DEFAULT_MAX_ITERS,
    n_jobs: int = 1,
) -> list[SpeedupRow]:
    """Mean iterations to reach eps per block size, against the ell/tau line.

    taus must be strictly increasing and start the comparison at 1, which
    defines ell. The theoretical column 1/(1 - rho) is filled wherever exact
    enumeration of H is affordable and left None otherwise.
    """
    taus = list(taus)
    if not taus or taus != sorted(set(taus)):
        raise ValueError(f"taus must be strictly increasing, got {taus}")
    if taus[0] != 1:
        raise ValueError("taus must contain 1 (the pairwise baseline)")
    if not all(1 <= t <= g.m for t in taus):
        raise ValueError(f"every tau must lie in 1..{g.m}, got {taus}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rows: list[SpeedupRow] = []
    ell = None
    for tau in taus:
        spec = SamplerSpec.fixed_size(tau)
        tasks = [(g, spec, c, eps, cap, seed, (tau, t)) for t in range(trials)]
        results = _map_tasks(tasks, n_jobs)
        if any(capped for _, capped in results):
            raise CappedRunError(
                f"a tau={tau} trial hit the iteration cap {cap}; increase cap",
                rows=rows,
            )
        iters = np.array([it for it, _ in results], dtype=np.float64)
        mean = float(np.mean(iters))
        std = float(np.std(iters, ddof=1)) if trials > 1 else 0.0
        if ell is None:
            ell = mean
        theoretical = None
        if enumeration_feasible(g, tau):
            theoretical = exact_rate(g, tau, n_jobs=n_jobs).iter_complexity
        rows.append(
            SpeedupRow(
                tau=tau, mean_iters=mean, std_iters=std,
                baseline=ell / tau, theoretical=theoretical,
            )
        )
    return rows
