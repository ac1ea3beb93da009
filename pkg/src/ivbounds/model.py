"""Observed and full-data laws for the discrete IV model.

Index conventions used throughout the package:

* observed coordinates ``(y, d, z)`` are flattened arm-major,
  ``z * 2n + d * n + y``, i.e. ``p_{00,0}, p_{10,0}, p_{01,0}, p_{11,0}, p_{00,1}, ...``
  for ``n = 2``;
* full-data cells ``(i, j, d)`` with ``d in {0,1}^ell`` are flattened with the
  treatment pattern outermost, ``code(d) * n^2 + i * n + j`` where
  ``code(d) = sum_z d_z * 2^(ell-1-z)`` (``d_0`` is the most significant bit).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from numbers import Rational
from typing import Iterator, Sequence

from .errors import (
    ArmNotNormalized,
    NegativeProbability,
    ShapeMismatch,
    SupportTooSmall,
)

WEIGHT_RANGE = 2**16


def as_rational(x) -> Rational:
    """Exact rational from an int, Fraction or decimal/ratio string."""
    if isinstance(x, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(x, Rational):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError(f"refusing inexact float {x!r}; pass a string or Fraction")
    return Fraction(x)


def col_index(y: int, d: int, z: int, n: int) -> int:
    return z * 2 * n + d * n + y


def col_key(k: int, n: int) -> tuple[int, int, int]:
    z, rest = divmod(k, 2 * n)
    d, y = divmod(rest, n)
    return y, d, z


def d_patterns(ell: int) -> list[tuple[int, ...]]:
    """All treatment patterns ``d in {0,1}^ell`` in row order."""
    return list(product((0, 1), repeat=ell))


@dataclass(frozen=True)
class OutcomeSupport:
    gammas: tuple

    def __post_init__(self):
        g = tuple(as_rational(x) for x in self.gammas)
        if len(g) < 2:
            raise SupportTooSmall(len(g))
        if any(a >= b for a, b in zip(g, g[1:])):
            raise ValueError(f"outcome support must be strictly increasing: {g}")
        object.__setattr__(self, "gammas", g)

    @property
    def n(self) -> int:
        return len(self.gammas)

    @classmethod
    def range(cls, n: int) -> "OutcomeSupport":
        """The support ``0, 1, ..., n-1``."""
        return cls(tuple(range(n)))

    def affine(self, scale, shift) -> "OutcomeSupport":
        scale, shift = as_rational(scale), as_rational(shift)
        return OutcomeSupport(tuple(scale * g + shift for g in self.gammas))

    def __getitem__(self, i):
        return self.gammas[i]

    def __len__(self):
        return len(self.gammas)


@dataclass(frozen=True)
class ObservedLaw:
    """Per-arm conditional laws ``P(Y, D | Z = z)``.

    ``probs`` is the flat arm-major vector; use :meth:`p` or :meth:`as_array`
    for indexed access.
    """

    support: OutcomeSupport
    ell: int
    probs: tuple

    @property
    def n(self) -> int:
        return self.support.n

    def p(self, y: int, d: int, z: int):
        return self.probs[col_index(y, d, z, self.n)]

    def arm(self, z: int) -> tuple:
        m = 2 * self.n
        return self.probs[z * m:(z + 1) * m]

    def as_array(self) -> list:
        """Nested ``p[y][d][z]``."""
        n, ell = self.n, self.ell
        return [[[self.p(y, d, z) for z in range(ell)] for d in (0, 1)] for y in range(n)]


@dataclass(frozen=True)
class FullDataLaw:
    """Joint law of ``(Y(0), Y(1), D(0), ..., D(ell-1))``, flat in row order."""

    support: OutcomeSupport
    ell: int
    q: tuple

    @property
    def n(self) -> int:
        return self.support.n

    def cell(self, i: int, j: int, d: Sequence[int]):
        code = 0
        for bit in d:
            code = 2 * code + bit
        return self.q[code * self.n * self.n + i * self.n + j]

    def cells(self) -> Iterator[tuple[int, int, tuple, Rational]]:
        n = self.n
        k = 0
        for d in d_patterns(self.ell):
            for i in range(n):
                for j in range(n):
                    yield i, j, d, self.q[k]
                    k += 1


def _flatten_observed(probs, n: int, ell: int) -> list:
    if len(probs) != n:
        raise ShapeMismatch(f"expected {n} outcome rows, got {len(probs)}")
    flat = [None] * (2 * n * ell)
    for y, row in enumerate(probs):
        if len(row) != 2:
            raise ShapeMismatch(f"row y={y}: expected 2 treatment levels")
        for d, arms in enumerate(row):
            if len(arms) != ell:
                raise ShapeMismatch(f"entry ({y},{d}): expected {ell} arms")
            for z, v in enumerate(arms):
                flat[col_index(y, d, z, n)] = as_rational(v)
    return flat


def new_observed_law(support: OutcomeSupport, ell: int, probs) -> ObservedLaw:
    """Validate ``probs[y][d][z]`` and build an :class:`ObservedLaw`."""
    if not isinstance(support, OutcomeSupport):
        support = OutcomeSupport(tuple(support))
    if ell < 1:
        raise ShapeMismatch(f"ell must be positive, got {ell}")
    n = support.n
    flat = _flatten_observed(probs, n, ell)
    return observed_from_flat(support, ell, flat)


def observed_from_flat(support: OutcomeSupport, ell: int, flat) -> ObservedLaw:
    n = support.n
    flat = tuple(as_rational(v) for v in flat)
    if len(flat) != 2 * n * ell:
        raise ShapeMismatch(f"expected {2 * n * ell} probabilities, got {len(flat)}")
    for k, v in enumerate(flat):
        if v < 0:
            y, d, z = col_key(k, n)
            raise NegativeProbability((y, d, z), v)
    m = 2 * n
    for z in range(ell):
        total = sum(flat[z * m:(z + 1) * m])
        if total != 1:
            raise ArmNotNormalized(z, total)
    return ObservedLaw(support, ell, flat)


def conjugate(law: ObservedLaw) -> ObservedLaw:
    """Swap the treatment index in every arm."""
    n = law.n
    out = [None] * len(law.probs)
    for z in range(law.ell):
        for d in (0, 1):
            for y in range(n):
                out[col_index(y, d, z, n)] = law.probs[col_index(y, 1 - d, z, n)]
    return ObservedLaw(law.support, law.ell, tuple(out))


def new_full_data_law(support: OutcomeSupport, ell: int, q) -> FullDataLaw:
    n = support.n
    q = tuple(as_rational(v) for v in q)
    if len(q) != 2**ell * n * n:
        raise ShapeMismatch(f"expected {2**ell * n * n} cells, got {len(q)}")
    if any(v < 0 for v in q):
        raise NegativeProbability(q.index(min(q)), min(q))
    if sum(q) != 1:
        raise ValueError(f"full-data law sums to {sum(q)}")
    return FullDataLaw(support, ell, q)


def ate_of(q: FullDataLaw):
    g = q.support.gammas
    return sum((g[j] - g[i]) * w for i, j, _, w in q.cells() if w)


def marginalize(q: FullDataLaw) -> ObservedLaw:
    """Observed law induced by ``q`` (the map ``p = M^T q``)."""
    n, ell = q.n, q.ell
    out = [0] * (2 * n * ell)
    for i, j, d, w in q.cells():
        if not w:
            continue
        for z, dz in enumerate(d):
            y = j if dz else i
            out[col_index(y, dz, z, n)] += w
    return ObservedLaw(q.support, ell, tuple(Fraction(v) for v in out))


def swap_potential_outcomes(q: FullDataLaw) -> FullDataLaw:
    """Relabel ``Y(0)`` and ``Y(1)``."""
    n = q.n
    out = list(q.q)
    for k in range(len(out)):
        code, rest = divmod(k, n * n)
        i, j = divmod(rest, n)
        out[code * n * n + j * n + i] = q.q[k]
    return FullDataLaw(q.support, q.ell, tuple(out))


def random_full_data_law(n: int, ell: int, seed: int, support: OutcomeSupport | None = None) -> FullDataLaw:
    """Seeded exact random law: integer weights in ``[0, 2^16)``, normalized."""
    if n < 2:
        raise SupportTooSmall(n)
    if ell < 2:
        raise ValueError(f"ell must be at least 2, got {ell}")
    support = support or OutcomeSupport.range(n)
    rng = random.Random(seed)
    size = 2**ell * n * n
    while True:
        w = [rng.randrange(WEIGHT_RANGE) for _ in range(size)]
        total = sum(w)
        if total:
            break
    return FullDataLaw(support, ell, tuple(Fraction(x, total) for x in w))


def corrupt(law: ObservedLaw, magnitude, seed: int) -> ObservedLaw:
    """Mix one arm toward a random cell: ``p_z <- (1-m) p_z + m e_cell``."""
    m = as_rational(magnitude)
    if not 0 <= m <= 1:
        raise ValueError(f"magnitude must lie in [0, 1], got {m}")
    rng = random.Random(seed)
    n = law.n
    z = rng.randrange(law.ell)
    target = rng.randrange(2 * n)
    probs = list(law.probs)
    base = z * 2 * n
    for k in range(2 * n):
        probs[base + k] = (1 - m) * probs[base + k] + (m if k == target else 0)
    return ObservedLaw(law.support, law.ell, tuple(probs))
