"""Core domain types: placements, failure laws, active sets, geometry."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

import numpy as np


class CoverError(Exception):
    """Base class for all errors raised by this package."""


class EntryOutOfRange(CoverError, ValueError):
    pass


class EmptyInput(CoverError, ValueError):
    pass


class TooLarge(CoverError, ValueError):
    """A size guard was exceeded (exponential enumeration, LP size, ...)."""


class BadArity(CoverError, ValueError):
    pass


class BadEpsilon(CoverError, ValueError):
    pass


class BadModel(CoverError, ValueError):
    pass


class Geometry(enum.Enum):
    INTERVAL = "interval"
    CIRCLE = "circle"

    @classmethod
    def parse(cls, value: "Geometry | str") -> "Geometry":
        if isinstance(value, Geometry):
            return value
        return cls(str(value).lower())


@dataclass(frozen=True, eq=False)
class Placement:
    """Sorted sensor positions in [0, 1].

    ``permutation[k]`` is the input index of the k-th smallest position, so
    ``raw[permutation] == positions``.
    """

    positions: np.ndarray
    permutation: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return int(self.positions.shape[0])

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.positions.tolist())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Placement):
            return NotImplemented
        return np.array_equal(self.positions, other.positions)

    def __hash__(self) -> int:
        return hash(self.positions.tobytes())

    def subset(self, members: "ActiveSet | Iterable[int]") -> np.ndarray:
        """Positions of the active sensors (1-based member indices)."""
        idx = members.members if isinstance(members, ActiveSet) else tuple(members)
        return self.positions[[i - 1 for i in idx]]


def make_placement(raw: Sequence[float] | np.ndarray | Placement) -> Placement:
    if isinstance(raw, Placement):
        return raw
    arr = np.asarray(raw, dtype=float).reshape(-1)
    if arr.size == 0:
        raise EmptyInput("a placement needs at least one sensor")
    if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0:
        raise EntryOutOfRange("every position must lie in [0, 1]")
    perm = np.argsort(arr, kind="stable")
    positions = arr[perm]
    positions.setflags(write=False)
    perm.setflags(write=False)
    return Placement(positions, perm)


@dataclass(frozen=True)
class Independent:
    """Each sensor fails with probability ``p``, independently."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise BadModel(f"failure probability must lie in [0, 1], got {self.p}")

    def cardinality_weights(self, n: int) -> np.ndarray:
        """Probability of one particular active set of each size 0..n."""
        m = np.arange(n + 1)
        return np.power(self.p, n - m) * np.power(1.0 - self.p, m)

    def size_distribution(self, n: int) -> np.ndarray:
        """Pr(|A| = m) for m = 0..n."""
        from scipy.stats import binom

        return binom.pmf(np.arange(n + 1), n, 1.0 - self.p)


@dataclass(frozen=True)
class Cortes:
    """Exactly ``k`` of ``n`` sensors fail; the failing set is uniform."""

    k: int
    n: int

    def __post_init__(self):
        if not (0 <= self.k < self.n):
            raise BadModel(f"need 0 <= k < n, got k={self.k}, n={self.n}")

    @property
    def active(self) -> int:
        return self.n - self.k

    def cardinality_weights(self, n: int) -> np.ndarray:
        self._check_n(n)
        w = np.zeros(n + 1)
        w[self.active] = 1.0 / comb(n, self.k)
        return w

    def size_distribution(self, n: int) -> np.ndarray:
        self._check_n(n)
        d = np.zeros(n + 1)
        d[self.active] = 1.0
        return d

    def _check_n(self, n: int) -> None:
        if n != self.n:
            raise BadModel(f"Cortes law is defined for n={self.n}, placement has {n}")


FailureModel = Independent | Cortes


@dataclass(frozen=True)
class ActiveSet:
    """Strictly increasing 1-based indices of the sensors that did not fail."""

    members: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(i) for i in self.members)
        if any(b <= a for a, b in zip(m, m[1:])):
            raise ValueError("active set members must be strictly increasing")
        if m and m[0] < 1:
            raise ValueError("active set members are 1-based")
        object.__setattr__(self, "members", m)

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "ActiveSet":
        return cls(tuple(i + 1 for i in range(n) if mask >> i & 1))

    def to_mask(self) -> int:
        return sum(1 << (i - 1) for i in self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, k: int) -> int:
        """``A[k]`` is the k-th smallest member, k starting at 1."""
        if not 1 <= k <= len(self.members):
            raise IndexError(k)
        return self.members[k - 1]


def probability_of_active_set(model: FailureModel, A: ActiveSet | Iterable[int], n: int) -> float:
    members = A.members if isinstance(A, ActiveSet) else tuple(A)
    if members and (min(members) < 1 or max(members) > n):
        raise ValueError(f"active set {members} not contained in [1, {n}]")
    size = len(members)
    if isinstance(model, Independent):
        return model.p ** (n - size) * (1.0 - model.p) ** size
    if isinstance(model, Cortes):
        if n != model.n:
            raise BadModel(f"Cortes law is defined for n={model.n}, got n={n}")
        return 1.0 / comb(n, model.k) if size == n - model.k else 0.0
    raise TypeError(f"unknown failure model {model!r}")


def require_open_probability(p: float) -> float:
    """Optimizer-facing check: the optimization problem needs p in (0, 1)."""
    if not 0.0 < p < 1.0:
        raise BadModel(f"optimization requires p in (0, 1), got {p}")
    return float(p)
