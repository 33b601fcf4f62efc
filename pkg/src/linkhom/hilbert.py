"""Degree-indexed dimension tables: the package's comparator for graded modules."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class HilbertTable:
    """Coefficient-field dimensions of a graded module over a degree window.

    ``data`` maps each degree in ``window`` (inclusive on both ends) to a
    dimension; degrees outside the window are unknown unless ``complete`` is
    set, in which case the module has finite length and the table is exact
    everywhere (zero off-window).
    """

    window: tuple
    data: tuple  # ((degree, dim), ...) sorted, zeros included inside window
    complete: bool = False

    @staticmethod
    def from_dict(d: dict, window, complete=False) -> "HilbertTable":
        lo, hi = window
        rows = tuple((deg, d.get(deg, 0)) for deg in range(lo, hi + 1))
        return HilbertTable((lo, hi), rows, complete)

    def as_dict(self) -> dict:
        return dict(self.data)

    def dim(self, degree: int) -> int:
        return dict(self.data).get(degree, 0)

    def total(self):
        """Total dimension; only meaningful for complete tables."""
        return sum(v for _, v in self.data)

    def is_zero(self) -> bool:
        return all(v == 0 for _, v in self.data)

    def first_nonzero(self):
        for deg, v in self.data:
            if v:
                return deg
        return None

    def shifted(self, twist: int) -> "HilbertTable":
        """Table of the twisted module M(twist): H'(d) = H(d + twist)."""
        lo, hi = self.window
        rows = tuple((deg - twist, v) for deg, v in self.data)
        return HilbertTable((lo - twist, hi - twist), rows, self.complete)

    def reversed_table(self) -> "HilbertTable":
        """Table of the graded dual: H'(d) = H(-d)."""
        lo, hi = self.window
        rows = tuple(sorted(((-deg, v) for deg, v in self.data)))
        return HilbertTable((-hi, -lo), rows, self.complete)

    def restrict(self, window) -> "HilbertTable":
        lo, hi = window
        d = self.as_dict()
        rows = tuple((deg, d.get(deg, 0)) for deg in range(lo, hi + 1))
        return HilbertTable((lo, hi), rows, False)

    def agrees_with(self, other: "HilbertTable") -> bool:
        """Equality on the overlap of the two windows (full equality when the
        windows coincide)."""
        lo = max(self.window[0], other.window[0])
        hi = min(self.window[1], other.window[1])
        a, b = self.as_dict(), other.as_dict()
        return all(a.get(d, 0) == b.get(d, 0) for d in range(lo, hi + 1))

    def to_json(self):
        return {"window": list(self.window), "dims": [list(r) for r in self.data],
                "complete": self.complete}


def tables_equal(a: HilbertTable, b: HilbertTable) -> bool:
    return a.as_dict() == b.as_dict() and a.window == b.window


def alternating_sum_zero(tables) -> bool:
    """Degreewise alternating sum of a list of tables vanishes on the common window."""
    if not tables:
        return True
    lo = max(t.window[0] for t in tables)
    hi = min(t.window[1] for t in tables)
    for d in range(lo, hi + 1):
        s = 0
        sign = 1
        for t in tables:
            s += sign * t.dim(d)
            sign = -sign
        if s != 0:
            return False
    return True
