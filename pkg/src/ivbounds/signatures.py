"""Admissible signatures indexing the dual vertices for a binary instrument.

A signature is a 0/1 array ``B[i][d][z]`` (``i`` in ``[n]``, ``d, z`` in
``{0,1}``) stored flat in the arm-major order shared with dual vectors:
``bits[z*2n + d*n + i]``.  Four columns matter: ``B_{.00}``, ``B_{.10}``,
``B_{.01}``, ``B_{.11}``, and the families are defined on the row pairs
``(B_{i00}, B_{i01})`` (treatment 0) and ``(B_{i10}, B_{i11})`` (treatment 1).

Family parameter ``t`` is the boundary all-ones row: the smallest ``i``
with ``B_{i00} = B_{i01} = 1`` for S1, the largest ``i`` with
``B_{i10} = B_{i11} = 1`` for S3, and ``None`` for S2.
"""

from __future__ import annotations

from typing import Iterator, NamedTuple, Sequence

from .errors import NotAdmissible, ShapeMismatch

S1, S2, S3 = "S1", "S2", "S3"


class Signature(NamedTuple):
    bits: tuple
    family: str
    t: int | None
    n: int

    def bit(self, i: int, d: int, z: int) -> int:
        return self.bits[z * 2 * self.n + d * self.n + i]

    def __str__(self):
        return "".join(map(str, self.bits))


def _pairs(mask: int, rows: Sequence[int], n: int):
    """Rows listed in ``rows`` get complementary bits from ``mask`` (MSB first)."""
    a = [1] * n
    b = [1] * n
    m = len(rows)
    for pos, i in enumerate(rows):
        bit = (mask >> (m - 1 - pos)) & 1
        a[i] = bit
        b[i] = 1 - bit
    return tuple(a), tuple(b)


def _mixed_columns(n: int) -> list[tuple[tuple, tuple]]:
    """All-rows-complementary column pairs with a 1 in each column."""
    rows = range(n)
    return [_pairs(mask, rows, n) for mask in range(1, 2**n - 1)]


def signature_chunks(n: int) -> list[tuple[str, int | None]]:
    """Disjoint sub-streams ``(family, t)`` whose union is the full stream."""
    return (
        [(S1, t) for t in range(n - 1)]
        + [(S2, None)]
        + [(S3, t) for t in range(1, n)]
    )


def chunk_columns(n: int, family: str, t: int | None, mixed=None):
    """Column options of one sub-stream.

    Returns ``(d0_pairs, d1_pairs, d0_outer)``: every signature of the chunk
    is one treatment-0 pair ``(B_{.00}, B_{.01})`` combined with one
    treatment-1 pair ``(B_{.10}, B_{.11})``; ``d0_outer`` gives the loop order.
    """
    if mixed is None:
        mixed = _mixed_columns(n)
    if family == S1:
        d0 = [_pairs(m, range(t), n) for m in range(2**t)]
        return d0, mixed, True
    if family == S2:
        d0 = [_pairs(m, range(n - 1), n) for m in range(2 ** (n - 1))]
        d1 = [_pairs(m, range(1, n), n) for m in range(2 ** (n - 1))]
        return d0, d1, False
    if family == S3:
        d1 = [_pairs(m, range(t + 1, n), n) for m in range(2 ** (n - 1 - t))]
        return mixed, d1, False
    raise ValueError(f"unknown family {family!r}")


def assemble(p0, p1, family: str, t: int | None, n: int) -> Signature:
    return Signature(p0[0] + p1[0] + p0[1] + p1[1], family, t, n)


def enumerate_chunk(n: int, family: str, t: int | None, mixed=None) -> Iterator[Signature]:
    d0, d1, d0_outer = chunk_columns(n, family, t, mixed)
    if d0_outer:
        for p0 in d0:
            for p1 in d1:
                yield Signature(p0[0] + p1[0] + p0[1] + p1[1], family, t, n)
    else:
        for p1 in d1:
            for p0 in d0:
                yield Signature(p0[0] + p1[0] + p0[1] + p1[1], family, t, n)


def enumerate_signatures(n: int) -> Iterator[Signature]:
    """Every admissible signature exactly once: S1 (by t), S2, S3 (by t)."""
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    mixed = _mixed_columns(n)
    for family, t in signature_chunks(n):
        yield from enumerate_chunk(n, family, t, mixed)


def count_signatures(n: int) -> int:
    return 5 * 4 ** (n - 1) - 2 ** (n + 2) + 4


def family_counts(n: int) -> dict[str, int]:
    side = (2 ** (n - 1) - 1) * (2**n - 2)
    return {S1: side, S2: 4 ** (n - 1), S3: side}


def classify(bits: Sequence[int], n: int | None = None) -> Signature:
    """Family and parameter of an admissible signature; :class:`NotAdmissible` otherwise."""
    bits = tuple(int(b) for b in bits)
    if n is None:
        n, rem = divmod(len(bits), 4)
        if rem:
            raise ShapeMismatch(f"signature length {len(bits)} is not 4n")
    if len(bits) != 4 * n or n < 2:
        raise ShapeMismatch(f"expected {4 * n} bits for n={n}")
    if any(b not in (0, 1) for b in bits):
        raise ShapeMismatch("signature entries must be 0 or 1")
    c00, c10, c01, c11 = (bits[k * n:(k + 1) * n] for k in range(4))
    both0 = [c00[i] == c01[i] == 1 for i in range(n)]
    diff0 = [c00[i] != c01[i] for i in range(n)]
    both1 = [c10[i] == c11[i] == 1 for i in range(n)]
    diff1 = [c10[i] != c11[i] for i in range(n)]

    if all(diff1):
        # only S1 can have every treatment-1 row complementary
        t = next((i for i in range(n) if both0[i]), None)
        if t is None or t > n - 2:
            raise NotAdmissible("S1: need an all-ones treatment-0 row t <= n-2")
        if not all(both0[t:]) or not all(diff0[:t]):
            raise NotAdmissible("S1: treatment-0 rows must be complementary before t and all-ones from t")
        if not (any(c10) and any(c11)):
            raise NotAdmissible("S1: treatment-1 columns each need a 1")
        return Signature(bits, S1, t, n)
    if all(diff0):
        t = max((i for i in range(n) if both1[i]), default=None)
        if t is None or t < 1:
            raise NotAdmissible("S3: need an all-ones treatment-1 row t >= 1")
        if not all(both1[:t + 1]) or not all(diff1[t + 1:]):
            raise NotAdmissible("S3: treatment-1 rows must be all-ones up to t and complementary after")
        if not (any(c00) and any(c01)):
            raise NotAdmissible("S3: treatment-0 columns each need a 1")
        return Signature(bits, S3, t, n)
    if not (both0[n - 1] and both1[0]):
        raise NotAdmissible("S2: rows (n-1, d=0) and (0, d=1) must be all-ones")
    if not all(diff0[:n - 1]):
        raise NotAdmissible("S2: treatment-0 rows below n-1 must be complementary")
    if not all(diff1[1:]):
        raise NotAdmissible("S2: treatment-1 rows above 0 must be complementary")
    return Signature(bits, S2, None, n)
