"""JSON input documents: ``probs[z][d][y]`` as decimal strings.

This adapter is the only place the file layout ``[z][d][y]`` meets the core's
flat arm-major vector (which happens to be the same order read row by row).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .errors import EmptyArm, SchemaError
from .model import ObservedLaw, OutcomeSupport, observed_from_flat


@dataclass(frozen=True)
class InputDocument:
    gammas: tuple
    ell: int
    probs: tuple  # probs[z][d][y], strings
    meta: Any = field(default=None, compare=True)

    @property
    def n(self) -> int:
        return len(self.gammas)


def _number(x, where: str) -> str:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise SchemaError(f"{where}: expected a decimal string, got {x!r}")
    try:
        Fraction(str(x).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{where}: not a rational number: {x!r}") from exc
    return str(x)


def parse_document(data) -> InputDocument:
    """Validate the schema of a JSON text or already-decoded object."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError("document must be a JSON object")
    missing = [k for k in ("gammas", "ell", "probs") if k not in data]
    if missing:
        raise SchemaError(f"missing field(s): {', '.join(missing)}")
    unknown = set(data) - {"gammas", "ell", "probs", "meta"}
    if unknown:
        raise SchemaError(f"unknown field(s): {', '.join(sorted(unknown))}")
    gammas = data["gammas"]
    if not isinstance(gammas, list) or len(gammas) < 2:
        raise SchemaError("gammas must be a list of at least 2 decimal strings")
    gammas = tuple(_number(g, f"gammas[{i}]") for i, g in enumerate(gammas))
    ell = data["ell"]
    if isinstance(ell, bool) or not isinstance(ell, int) or ell < 2:
        raise SchemaError(f"ell must be an integer >= 2, got {ell!r}")
    n = len(gammas)
    probs = data["probs"]
    if not isinstance(probs, list) or len(probs) != ell:
        raise SchemaError(f"probs must have {ell} arms")
    out = []
    for z, arm in enumerate(probs):
        if not isinstance(arm, list) or len(arm) != 2:
            raise SchemaError(f"probs[{z}] must have 2 treatment levels")
        rows = []
        for d, row in enumerate(arm):
            if not isinstance(row, list) or len(row) != n:
                raise SchemaError(f"probs[{z}][{d}] must have {n} entries")
            rows.append(tuple(_number(x, f"probs[{z}][{d}][{y}]") for y, x in enumerate(row)))
        out.append(tuple(rows))
    return InputDocument(gammas, ell, tuple(out), data.get("meta"))


def to_law(doc: InputDocument) -> ObservedLaw:
    """Build the validated law; zero-mass arms raise :class:`EmptyArm`."""
    support = OutcomeSupport(tuple(Fraction(g) for g in doc.gammas))
    flat = [Fraction(x) for arm in doc.probs for row in arm for x in row]
    m = 2 * doc.n
    for z in range(doc.ell):
        arm = flat[z * m:(z + 1) * m]
        if all(x == 0 for x in arm):
            raise EmptyArm(z)
    return observed_from_flat(support, doc.ell, flat)


def _fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else str(x)


def from_law(law: ObservedLaw, meta=None) -> InputDocument:
    n = law.n
    probs = tuple(
        tuple(tuple(_fmt(law.p(y, d, z)) for y in range(n)) for d in (0, 1))
        for z in range(law.ell)
    )
    return InputDocument(tuple(_fmt(g) for g in law.support.gammas), law.ell, probs, meta)


def document_to_dict(doc: InputDocument) -> dict:
    out = {
        "gammas": list(doc.gammas),
        "ell": doc.ell,
        "probs": [[list(row) for row in arm] for arm in doc.probs],
    }
    if doc.meta is not None:
        out["meta"] = doc.meta
    return out


def dump_document(doc: InputDocument, indent: int | None = 2) -> str:
    return json.dumps(document_to_dict(doc), indent=indent)


def load_document(path) -> InputDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())
