"""Linear functionals of the observed probabilities ``p_{yd,z}``."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .model import ObservedLaw, as_rational, col_index, col_key


@dataclass(frozen=True)
class LinearExpr:
    """``sum coeff * p_{yd,z} + constant`` with exact coefficients.

    ``terms`` holds ``((y, d, z), coeff)`` pairs in arm-major order, zeros dropped.
    """

    n: int
    ell: int
    terms: tuple
    constant: Fraction = Fraction(0)

    @classmethod
    def from_mapping(cls, n: int, ell: int, coeffs: Mapping, constant=0) -> "LinearExpr":
        items = sorted(
            ((tuple(k), as_rational(c)) for k, c in coeffs.items() if c),
            key=lambda kc: col_index(*kc[0], n),
        )
        return cls(n, ell, tuple(items), Fraction(as_rational(constant)))

    @classmethod
    def from_vector(cls, n: int, ell: int, values: Sequence, constant=0) -> "LinearExpr":
        return cls.from_mapping(
            n, ell, {col_key(k, n): c for k, c in enumerate(values) if c}, constant
        )

    @property
    def coeffs(self) -> dict:
        return dict(self.terms)

    def coeff(self, y: int, d: int, z: int):
        return self.coeffs.get((y, d, z), 0)

    def vector(self) -> list:
        out = [0] * (2 * self.n * self.ell)
        for (y, d, z), c in self.terms:
            out[col_index(y, d, z, self.n)] = c
        return out

    def evaluate(self, law) -> Fraction:
        probs = law.probs if isinstance(law, ObservedLaw) else law
        n = self.n
        return sum(
            (c * probs[col_index(y, d, z, n)] for (y, d, z), c in self.terms),
            Fraction(self.constant),
        )

    def reduced(self) -> "LinearExpr":
        """Equivalent form on arm-normalized laws with fewest terms.

        Each arm's coefficients are shifted by their most common value
        (ties prefer no shift), compensated in the constant since every arm
        sums to one.
        """
        n = self.n
        vec = self.vector()
        const = Fraction(self.constant)
        for z in range(self.ell):
            block = vec[z * 2 * n:(z + 1) * 2 * n]
            counts = Counter(block)
            top = max(counts.values())
            modes = [c for c, k in counts.items() if k == top]
            shift = 0 if 0 in modes else min(modes, key=lambda c: (abs(c), c))
            if shift:
                for k in range(z * 2 * n, (z + 1) * 2 * n):
                    vec[k] -= shift
                const += shift
        return LinearExpr.from_vector(n, self.ell, vec, const)

    def __neg__(self) -> "LinearExpr":
        return LinearExpr(self.n, self.ell, tuple((k, -c) for k, c in self.terms), -self.constant)

    # -- rendering ---------------------------------------------------------

    def _render(self, var, const_fmt, sep="") -> str:
        parts = []
        for (y, d, z), c in self.terms:
            mag = abs(c)
            body = var(y, d, z) if mag == 1 else f"{const_fmt(mag)}{sep}{var(y, d, z)}"
            parts.append(("-" if c < 0 else "+", body))
        if self.constant or not parts:
            c = self.constant
            parts.append(("-" if c < 0 else "+", const_fmt(abs(c)) or "0"))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def text(self) -> str:
        return self._render(lambda y, d, z: f"p_{{{y}{d},{z}}}", _plain, "*")

    def latex(self) -> str:
        return self._render(lambda y, d, z: f"p_{{{y}{d},{z}}}", _latex_number)

    def to_json(self) -> dict:
        return {
            "terms": [
                {"y": y, "d": d, "z": z, "coeff": str(c)} for (y, d, z), c in self.terms
            ],
            "constant": str(self.constant),
        }

    def __str__(self):
        return self.text()


def _plain(x) -> str:
    if x == 0:
        return ""
    return str(x)


def _latex_number(x) -> str:
    x = Fraction(x)
    if x == 0:
        return ""
    if x.denominator == 1:
        return str(x.numerator)
    return rf"\tfrac{{{x.numerator}}}{{{x.denominator}}}"


def inequality_text(expr: LinearExpr, latex: bool = False) -> str:
    """Render ``expr <= 0`` as ``lhs <= rhs`` with the constant moved right."""
    lhs = LinearExpr(expr.n, expr.ell, expr.terms)
    render = lhs.latex if latex else lhs.text
    rhs = -expr.constant
    rel = r"\le" if latex else "<="
    rhs_s = _latex_number(rhs) if latex else str(rhs)
    return f"{render()} {rel} {rhs_s or '0'}"
