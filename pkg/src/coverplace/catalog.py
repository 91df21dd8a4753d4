"""Named placements and the seeded uniform sampler.

PRNG contract: numpy ``PCG64`` seeded with ``SeedSequence(seed,
spawn_key=(replicate,))``. Each (seed, replicate) pair gets its own
independent stream, so replicates can run in any order or thread.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .model import BadArity, BadModel, CoverError, Placement, make_placement, require_open_probability

GENERATOR_ID = f"numpy-{np.__version__}/PCG64/SeedSequence(seed,spawn_key=(replicate,))"


class NoValidK(CoverError, ValueError):
    pass


class Kind(enum.Enum):
    EQUISPACED = "eq"
    SINGLE_CLUSTER = "sgl"
    ALT = "alt"
    THREE_CLUSTER = "three"
    RANDOM = "rand"


@dataclass(frozen=True)
class NamedPlacement:
    kind: Kind
    placement: Placement
    k: int | None = None
    seed: int | None = None
    replicate: int | None = None


def equispaced(n: int) -> Placement:
    """(2i - 1) / (2n), i = 1..n."""
    _need(n >= 1, f"equispaced needs n >= 1, got {n}")
    return make_placement((2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n))


def single_cluster(n: int) -> Placement:
    _need(n >= 1, f"single cluster needs n >= 1, got {n}")
    return make_placement(np.full(n, 0.5))


def alt_placement(n: int) -> Placement:
    """(1, 2, 4, ..., 2n-4, 2n-3) / (2n-2): equispaced on a finer grid with
    the two border sensors pulled in by half a step."""
    _need(n >= 4, f"alternative placement needs n >= 4, got {n}")
    num = np.concatenate([[1.0], 2.0 * np.arange(1, n - 1), [2.0 * n - 3.0]])
    return make_placement(num / (2.0 * n - 2.0))


def three_cluster(n: int, k: int) -> Placement:
    """k sensors at 1/4, n - 2k at 1/2, k at 3/4."""
    _need(1 <= k <= n // 2, f"three-cluster needs 1 <= k <= n // 2, got k={k}, n={n}")
    return make_placement(np.concatenate([np.full(k, 0.25), np.full(n - 2 * k, 0.5), np.full(k, 0.75)]))


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise BadArity(msg)


def rng_for(seed: int, replicate: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(replicate,))))


def sample_uniform_placement(n: int, seed: int, replicate: int = 0) -> Placement:
    _need(n >= 1, f"need n >= 1, got {n}")
    return make_placement(rng_for(seed, replicate).random(n))


def make_named(kind: Kind | str, n: int, k: int | None = None, seed: int | None = None, replicate: int = 0) -> NamedPlacement:
    kind = Kind(kind) if not isinstance(kind, Kind) else kind
    if kind is Kind.EQUISPACED:
        return NamedPlacement(kind, equispaced(n))
    if kind is Kind.SINGLE_CLUSTER:
        return NamedPlacement(kind, single_cluster(n))
    if kind is Kind.ALT:
        return NamedPlacement(kind, alt_placement(n))
    if kind is Kind.THREE_CLUSTER:
        if k is None:
            raise BadArity("three-cluster placement needs k")
        return NamedPlacement(kind, three_cluster(n, k), k=k)
    if seed is None:
        raise BadArity("random placement needs a seed")
    return NamedPlacement(kind, sample_uniform_placement(n, seed, replicate), seed=seed, replicate=replicate)


def three_cluster_margin(n: int, p: float, k: int) -> float:
    """p^k (1 - p^k) - 2 p^n: positive when the three-cluster placement
    beats the single cluster."""
    q = p**k
    return q * (1.0 - q) - 2.0 * p**n


def choose_three_cluster_k(n: int, p: float, require_inequality: bool = True) -> int:
    """k = 1 for p <= 1/3, else the smallest k <= n // 2 with p^k in (1/4, 3/4).

    With ``require_inequality`` the chosen k must also satisfy
    p^k (1 - p^k) > 2 p^n, otherwise ``NoValidK`` is raised.
    """
    if n < 4:
        raise BadArity(f"need n >= 4, got {n}")
    try:
        p = require_open_probability(p)
    except BadModel as exc:
        raise NoValidK(str(exc)) from exc
    if p <= 1.0 / 3.0:
        k = 1
    else:
        k = next((j for j in range(1, n // 2 + 1) if 0.25 < p**j < 0.75), None)
        if k is None:
            raise NoValidK(f"no k <= {n // 2} with p^k in (1/4, 3/4) at p={p}")
    if require_inequality and not three_cluster_margin(n, p, k) > 0.0:
        raise NoValidK(f"k={k} fails p^k(1-p^k) > 2p^n at n={n}, p={p}")
    return k


def alt_witness_search(n_max: int = 64, c_values=None):
    """Grid search for (n, c) with C(alt) < C(eq) at p = c / n.

    Returns a list of (n, c, p, C(alt), C(eq)) for every winning grid point.
    """
    from .cost_exact import expected_cost
    from .model import Independent

    if c_values is None:
        c_values = np.linspace(4.0, 8.0, 17)
    found = []
    for n in range(4, n_max + 1):
        alt, eq = alt_placement(n), equispaced(n)
        for c in c_values:
            p = float(c) / n
            if not 0.0 < p < 1.0:
                continue
            ca = expected_cost(alt, Independent(p))
            ce = expected_cost(eq, Independent(p))
            if ca < ce:
                found.append((n, float(c), p, ca, ce))
    return found


__all__ = [
    "GENERATOR_ID",
    "Kind",
    "NamedPlacement",
    "NoValidK",
    "alt_placement",
    "alt_witness_search",
    "choose_three_cluster_k",
    "equispaced",
    "make_named",
    "rng_for",
    "sample_uniform_placement",
    "single_cluster",
    "three_cluster",
    "three_cluster_margin",
]
