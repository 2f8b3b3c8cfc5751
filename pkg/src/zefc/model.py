"""Problem instances: two finite alphabets, an exact joint pmf, and a function table.

Probabilities are `fractions.Fraction` throughout so that support membership
(p > 0) is an exact predicate, never a floating-point judgment.  Entropies are
evaluated in floating point later, from these exact masses.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .errors import InstanceFormatError

__all__ = [
    "ProblemInstance",
    "SupportSet",
    "load_instance",
    "store_instance",
    "instance_from_mapping",
    "instance_to_mapping",
    "support",
    "marginals",
]


def _parse_probability(value: Any) -> Fraction:
    """Parse a pmf cell: "a/b" string, decimal string, int, or float."""
    try:
        if isinstance(value, bool):
            raise ValueError("booleans are not probabilities")
        if isinstance(value, (int, str)):
            return Fraction(value)
        if isinstance(value, float):
            # decimal reading of the shortest repr, not the binary expansion
            return Fraction(repr(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise InstanceFormatError(f"bad probability {value!r}: {exc}") from exc
    raise InstanceFormatError(f"bad probability {value!r}: unsupported type")


def _normalize_label(value: Any) -> str:
    """Canonical string form of a symbol or function-value label.

    Non-string JSON scalars are allowed in function tables; they are folded to
    their JSON literal so that `null` is a distinct, stable label.
    """
    if isinstance(value, str):
        return value
    return json.dumps(value)


@dataclass(frozen=True)
class ProblemInstance:
    """The tuple (alphabet of A, alphabet of B, joint pmf, function table)."""

    alphabet_x: tuple[str, ...]
    alphabet_y: tuple[str, ...]
    pmf: tuple[tuple[Fraction, ...], ...]
    f_table: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        nx, ny = len(self.alphabet_x), len(self.alphabet_y)
        if nx == 0 or ny == 0:
            raise InstanceFormatError("alphabets must be nonempty")
        if len(set(self.alphabet_x)) != nx:
            raise InstanceFormatError("duplicate labels in alphabet_x")
        if len(set(self.alphabet_y)) != ny:
            raise InstanceFormatError("duplicate labels in alphabet_y")
        for name, table in (("pmf", self.pmf), ("f", self.f_table)):
            if len(table) != nx or any(len(row) != ny for row in table):
                raise InstanceFormatError(f"{name} must be a {nx}x{ny} matrix")
        total = Fraction(0)
        for row in self.pmf:
            for p in row:
                if p < 0:
                    raise InstanceFormatError(f"negative probability {p}")
                total += p
        if total != 1:
            raise InstanceFormatError(f"pmf sums to {total}, expected exactly 1")

    @property
    def size_x(self) -> int:
        return len(self.alphabet_x)

    @property
    def size_y(self) -> int:
        return len(self.alphabet_y)

    def f(self, i: int, j: int) -> str:
        """Function value at row index i, column index j."""
        return self.f_table[i][j]

    def p(self, i: int, j: int) -> Fraction:
        return self.pmf[i][j]


@dataclass(frozen=True)
class SupportSet:
    """Index pairs (i, j) with pmf[i][j] > 0, in row-major order."""

    pairs: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair: tuple[int, int]) -> bool:
        return pair in set(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def index_map(self) -> dict[tuple[int, int], int]:
        """Position of each support pair in row-major order."""
        return {pair: k for k, pair in enumerate(self.pairs)}


def support(inst: ProblemInstance) -> SupportSet:
    """Exactly the positive-probability cells, row-major."""
    pairs = tuple(
        (i, j)
        for i in range(inst.size_x)
        for j in range(inst.size_y)
        if inst.pmf[i][j] > 0
    )
    return SupportSet(pairs)


def marginals(inst: ProblemInstance) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Exact rational marginals (over X, over Y); each sums to 1."""
    px = tuple(sum(row, Fraction(0)) for row in inst.pmf)
    py = tuple(
        sum((inst.pmf[i][j] for i in range(inst.size_x)), Fraction(0))
        for j in range(inst.size_y)
    )
    return px, py


def instance_from_mapping(obj: Any) -> ProblemInstance:
    """Build and validate an instance from a decoded JSON object."""
    if not isinstance(obj, dict):
        raise InstanceFormatError("instance document must be a JSON object")
    missing = {"alphabet_x", "alphabet_y", "pmf", "f"} - set(obj)
    if missing:
        raise InstanceFormatError(f"missing keys: {sorted(missing)}")
    ax = tuple(_normalize_label(s) for s in _require_list(obj["alphabet_x"], "alphabet_x"))
    ay = tuple(_normalize_label(s) for s in _require_list(obj["alphabet_y"], "alphabet_y"))
    pmf_rows = _require_list(obj["pmf"], "pmf")
    f_rows = _require_list(obj["f"], "f")
    pmf = tuple(
        tuple(_parse_probability(v) for v in _require_list(row, "pmf row"))
        for row in pmf_rows
    )
    f_table = tuple(
        tuple(_normalize_label(v) for v in _require_list(row, "f row"))
        for row in f_rows
    )
    return ProblemInstance(ax, ay, pmf, f_table)


def _require_list(value: Any, what: str) -> Sequence[Any]:
    if not isinstance(value, list):
        raise InstanceFormatError(f"{what} must be an array")
    return value


def instance_to_mapping(inst: ProblemInstance) -> dict[str, Any]:
    """Inverse of `instance_from_mapping`; rationals rendered as "a/b"."""
    return {
        "alphabet_x": list(inst.alphabet_x),
        "alphabet_y": list(inst.alphabet_y),
        "pmf": [[str(p) for p in row] for row in inst.pmf],
        "f": [list(row) for row in inst.f_table],
    }


def load_instance(text: str) -> ProblemInstance:
    """Parse an instance document (UTF-8 JSON) into a validated instance."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not valid JSON: {exc}") from exc
    return instance_from_mapping(obj)


def store_instance(inst: ProblemInstance) -> str:
    """Serialize so that load_instance(store_instance(inst)) == inst."""
    return json.dumps(instance_to_mapping(inst), indent=2, sort_keys=True) + "\n"
