"""Extreme rays of the dual cone and the sharp IV inequalities (binary instrument).

Ray entries are written ``r[(y, d, z)]`` and normalized so that
``r[(n-1, 1, 1)] = 0``.  Families IV, V and VI carry a 0/1 vector ``s``,
enumerated with ``s_0`` as the least significant bit; ``T = {k : s_k = 1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import SeparationFailed, UnsupportedInstrumentArity
from .expr import LinearExpr, inequality_text
from .lp_core import DualVector
from .model import ObservedLaw, OutcomeSupport, col_index

FAMILY_A, FAMILY_B, FAMILY_C = "a", "b", "c"
COMPATIBLE, FALSIFIED = "compatible", "falsified"
_INEQ_OF_RAY = {"ray-IV": FAMILY_A, "ray-V": FAMILY_B, "ray-VI": FAMILY_C}


def _ray(n: int, entries: dict, family: str, **params) -> DualVector:
    vals = [0] * (4 * n)
    for (y, d, z), x in entries.items():
        vals[col_index(y, d, z, n)] = x
    return DualVector(n, 2, tuple(vals), family=family, params=params)


def _subsets(size: int, proper: bool) -> Iterator[tuple[int, ...]]:
    """Nonempty 0/1 vectors of length ``size`` (proper: not all ones)."""
    top = 2**size - 1 if proper else 2**size
    for mask in range(1, top):
        yield tuple((mask >> k) & 1 for k in range(size))


def _family_iv(n: int, s: Sequence[int]) -> DualVector:
    e = {}
    for k in range(n):
        e[k, 0, 1] = -1
        sk = s[k] if k < n - 1 else 0
        e[k, 1, 0] = sk
        e[k, 1, 1] = -sk
    return _ray(n, e, "ray-IV", s=tuple(s))


def _family_v(n: int, s: Sequence[int]) -> DualVector:
    e = {}
    for k in range(n):
        e[k, 1, 0] = -1
        e[k, 0, 1] = s[k]
        e[k, 0, 0] = -s[k]
    return _ray(n, e, "ray-V", s=tuple(s))


def _family_vi(n: int, s: Sequence[int]) -> DualVector:
    e = {}
    for k in range(n):
        e[k, 0, 0] = -1
        sk = s[k] if k < n - 1 else 0
        e[k, 1, 1] = sk
        e[k, 1, 0] = -sk
    return _ray(n, e, "ray-VI", s=tuple(s))


def axiom_rays(n: int) -> Iterator[DualVector]:
    """Families I-III: the inequalities every arm-consistent law satisfies."""
    for sign in (1, -1):
        e = {}
        for y in range(n):
            for d in (0, 1):
                e[y, d, 1] = sign
                e[y, d, 0] = -sign
        yield _ray(n, e, "ray-I", sign=sign)
    for z in (0, 1):
        for d in (0, 1):
            for y in range(n):
                if (y, d, z) != (n - 1, 1, 1):
                    yield _ray(n, {(y, d, z): -1}, "ray-II", cell=(y, d, z))
    e = {}
    for y in range(n):
        e[y, 0, 0] = e[y, 1, 0] = -1
        e[y, 0, 1] = 1
        e[y, 1, 1] = 1 if y < n - 1 else 0
    yield _ray(n, e, "ray-III")


def enumerate_rays(n: int) -> Iterator[DualVector]:
    """One representative per extreme-ray class, families I to VI in order."""
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    yield from axiom_rays(n)
    for s in _subsets(n - 1, proper=False):
        yield _family_iv(n, s)
    for s in _subsets(n, proper=True):
        yield _family_v(n, s)
    for s in _subsets(n - 1, proper=False):
        yield _family_vi(n, s)


def count_rays(n: int) -> int:
    return 2 ** (n + 1) + 4 * n - 2


def count_inequalities(n: int) -> int:
    return 2 ** (n + 1) - 4


@dataclass(frozen=True)
class IvInequality:
    """``expr <= 0`` generated by ``ray`` (``expr`` coefficients are the ray's entries)."""

    expr: LinearExpr
    family: str
    T: tuple
    ray: DualVector = field(compare=False)

    def slack(self, law) -> Fraction:
        return self.expr.evaluate(law)

    def text(self, reduced: bool = False, latex: bool = False) -> str:
        return inequality_text(self.expr.reduced() if reduced else self.expr, latex)


def inequality_from_ray(ray: DualVector) -> IvInequality:
    family = _INEQ_OF_RAY.get(ray.family, ray.family)
    s = ray.params.get("s", ())
    T = tuple(k for k, b in enumerate(s) if b)
    return IvInequality(LinearExpr.from_vector(ray.n, ray.ell, ray.values), family, T, ray)


def sharp_inequalities(n: int) -> Iterator[IvInequality]:
    """Families (a), (b), (c) from rays IV, V, VI."""
    for ray in enumerate_rays(n):
        if ray.family in _INEQ_OF_RAY:
            yield inequality_from_ray(ray)


@dataclass(frozen=True)
class AxiomFailure:
    family: str
    detail: str
    value: Fraction


def validate_axioms(law) -> list[AxiomFailure]:
    """Violated family I-III inequalities of a possibly invalid law.

    Accepts an :class:`ObservedLaw` (which may have been built without
    validation) or a ``(support, probs)`` pair with flat ``probs``.
    """
    if isinstance(law, ObservedLaw):
        n, probs = law.n, law.probs
    else:
        support, probs = law
        n = support.n if isinstance(support, OutcomeSupport) else int(support)
    probs = [Fraction(x) for x in probs]
    out = []
    m0, m1 = sum(probs[:2 * n]), sum(probs[2 * n:4 * n])
    if m0 != m1:
        out.append(AxiomFailure("I", f"arm masses differ: {m0} vs {m1}", abs(m1 - m0)))
    for k, x in enumerate(probs):
        z, rest = divmod(k, 2 * n)
        d, y = divmod(rest, n)
        if (y, d, z) != (n - 1, 1, 1) and x < 0:
            out.append(AxiomFailure("II", f"p_{{{y}{d},{z}}} < 0", -x))
    iii = m1 - m0 - probs[col_index(n - 1, 1, 1, n)]
    if iii > 0:
        out.append(AxiomFailure("III", "arm-1 mass minus p_{(n-1)1,1} exceeds arm-0 mass", iii))
    return out


@dataclass(frozen=True)
class FalsificationReport:
    verdict: str
    violations: tuple = ()  # (IvInequality, slack) pairs
    axiom_failures: tuple = ()
    complete: bool = True

    @property
    def falsified(self) -> bool:
        return self.verdict == FALSIFIED


def report_from(violations, axiom_failures, complete: bool) -> FalsificationReport:
    verdict = FALSIFIED if violations or axiom_failures else COMPATIBLE
    return FalsificationReport(verdict, tuple(violations), tuple(axiom_failures), complete)


def falsification_test(law: ObservedLaw) -> FalsificationReport:
    """Check every sharp inequality exactly (complete for a binary instrument)."""
    if law.ell != 2:
        raise UnsupportedInstrumentArity(law.ell)
    violations = []
    for ineq in sharp_inequalities(law.n):
        slack = ineq.slack(law)
        if slack > 0:
            violations.append((ineq, slack))
    return report_from(violations, validate_axioms(law), True)


def necessity_fixture(target: IvInequality, n: int, support: OutcomeSupport | None = None) -> ObservedLaw:
    """A law violating ``target`` and no other sharp inequality."""
    from .oracle import separating_distribution

    others = [i.ray for i in sharp_inequalities(n) if i.ray != target.ray]
    law = separating_distribution(target.ray, others, n, support)
    if law is None:
        raise SeparationFailed(f"no separating law for family {target.family}, T={target.T}")
    return law
