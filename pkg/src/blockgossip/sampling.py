"""Random edge-subset selection with a reproducible RNG contract.

Subsets of fixed size tau are drawn uniformly from all C(m, tau) candidates
by a partial Fisher-Yates shuffle over edge indices. Randomness comes from
numpy's PCG64; trial indices are mixed into the seed entropy, so independent
trials get independent, platform-stable streams.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .graphs import Component, Graph, components

ENUMERATION_CAP = 2_000_000


def make_rng(seed: int, *substream: int) -> np.random.Generator:
    """PCG64 generator for a (seed, substream...) entropy tuple.

    Equal tuples give identical streams on every platform; distinct trial or
    block-size indices give independent streams.
    """
    return np.random.default_rng([int(seed), *map(int, substream)])


@dataclass(frozen=True)
class SamplerSpec:
    """Which edge subsets a gossip step may select.

    kind is one of "fixed", "single", "all"; "single" is fixed size 1 and
    "all" is fixed size m, kept distinct only for labeling.
    """

    kind: str
    tau: int | None = None

    def __post_init__(self):
        if self.kind not in ("fixed", "single", "all"):
            raise ValueError(f"unknown sampler kind {self.kind!r}")
        if self.kind == "fixed":
            if self.tau is None or self.tau < 1:
                raise ValueError(f"fixed-size sampler needs tau >= 1, got {self.tau}")
        elif self.tau is not None:
            raise ValueError(f"sampler kind {self.kind!r} takes no tau")

    @classmethod
    def fixed_size(cls, tau: int) -> "SamplerSpec":
        return cls("fixed", tau)

    @classmethod
    def single_edge(cls) -> "SamplerSpec":
        return cls("single")

    @classmethod
    def all_edges(cls) -> "SamplerSpec":
        return cls("all")

    @classmethod
    def parse(cls, text: str) -> "SamplerSpec":
        """Parse a sampler string: "tau:K", "pairwise", or "all"."""
        if text == "pairwise":
            return cls.single_edge()
        if text == "all":
            return cls.all_edges()
        kind, sep, arg = text.partition(":")
        if kind == "tau" and sep:
            try:
                return cls.fixed_size(int(arg))
            except ValueError:
                raise ValueError(f"malformed sampler spec {text!r}")
        raise ValueError(
            f"unknown sampler spec {text!r}; expected 'tau:K', 'pairwise', or 'all'"
        )

    def resolve_tau(self, m: int) -> int:
        """Block size for a graph with m edges; rejects tau out of 1..m."""
        if self.kind == "single":
            tau = 1
        elif self.kind == "all":
            tau = m
        else:
            tau = self.tau  # type: ignore[assignment]
        if not (1 <= tau <= m):
            raise ValueError(f"block size tau={tau} out of range 1..{m}")
        return tau

    def label(self) -> str:
        if self.kind == "single":
            return "pairwise"
        if self.kind == "all":
            return "all"
        return f"tau:{self.tau}"


@dataclass(frozen=True)
class SketchSample:
    """A drawn edge subset plus the components of the induced subgraph."""

    edges: tuple[int, ...]
    components: tuple[Component, ...]
    m: int
    n: int


def draw_indices(rng: np.random.Generator, m: int, tau: int) -> list[int]:
    """Uniform size-tau subset of {0..m-1}, ascending.

    Partial Fisher-Yates: position i swaps with a uniform pick from [i, m).
    tau == m returns the full index set without consuming randomness.
    """
    if tau == m:
        return list(range(m))
    if tau == 1:
        return [int(rng.integers(0, m))]
    idx = list(range(m))
    for i in range(tau):
        j = int(rng.integers(i, m))
        idx[i], idx[j] = idx[j], idx[i]
    head = idx[:tau]
    head.sort()
    return head


def draw(spec: SamplerSpec, g: Graph, rng: np.random.Generator) -> SketchSample:
    """Draw one edge subset for g and resolve its connected components."""
    tau = spec.resolve_tau(g.m)
    selected = draw_indices(rng, g.m, tau)
    comps = tuple(components(g, selected))
    return SketchSample(edges=tuple(selected), components=comps, m=g.m, n=g.n)


def enumerate_subsets(g: Graph, tau: int) -> Iterator[tuple[int, ...]]:
    """All size-tau edge subsets in lexicographic order.

    Refuses when C(m, tau) exceeds the enumeration cap; callers should fall
    back to Monte Carlo estimation then.
    """
    if not (1 <= tau <= g.m):
        raise ValueError(f"block size tau={tau} out of range 1..{g.m}")
    count = math.comb(g.m, tau)
    if count > ENUMERATION_CAP:
        raise ValueError(
            f"C({g.m}, {tau}) = {count} subsets exceeds the enumeration cap "
            f"{ENUMERATION_CAP}; use Monte Carlo estimation instead"
        )
    return itertools.combinations(range(g.m), tau)


def subset_count(g: Graph, tau: int) -> int:
    return math.comb(g.m, tau)


def enumeration_feasible(g: Graph, tau: int) -> bool:
    return math.comb(g.m, tau) <= ENUMERATION_CAP
