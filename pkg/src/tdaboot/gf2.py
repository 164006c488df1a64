"""Linear algebra over the two-element field.

Vectors are Python ints used as bitsets: bit ``i`` is the coefficient of
basis element ``i``. Addition is XOR, so everything here is exact.
"""

from __future__ import annotations

from typing import Iterable


class Echelon:
    """Incrementally maintained echelon basis keyed by leading bit."""

    __slots__ = ("_rows",)

    def __init__(self, vectors: Iterable[int] = ()):
        self._rows: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        rows = self._rows
        while v:
            lead = v.bit_length() - 1
            row = rows.get(lead)
            if row is None:
                return v
            v ^= row
        return 0

    def add(self, v: int) -> bool:
        """Insert ``v``; return True if it was independent of the basis."""
        v = self.reduce(v)
        if v:
            self._rows[v.bit_length() - 1] = v
            return True
        return False

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def basis(self) -> list[int]:
        return [self._rows[k] for k in sorted(self._rows)]

    def copy(self) -> "Echelon":
        e = Echelon()
        e._rows = dict(self._rows)
        return e


def rank(vectors: Iterable[int]) -> int:
    return Echelon(vectors).rank


def span_basis(vectors: Iterable[int]) -> list[int]:
    return Echelon(vectors).basis()


def in_span(v: int, vectors: Iterable[int]) -> bool:
    return v in Echelon(vectors)


def kernel(columns: list[int]) -> list[int]:
    """Null space of the matrix whose ``j``-th column is ``columns[j]``.

    Returned vectors are bitsets over column indices.
    """
    pivots: dict[int, tuple[int, int]] = {}
    out = []
    for j, col in enumerate(columns):
        combo = 1 << j
        while col:
            lead = col.bit_length() - 1
            hit = pivots.get(lead)
            if hit is None:
                break
            col ^= hit[0]
            combo ^= hit[1]
        if col:
            pivots[col.bit_length() - 1] = (col, combo)
        else:
            out.append(combo)
    return out


def intersection(u: list[int], v: list[int]) -> list[int]:
    """Basis of span(u) ∩ span(v), read off the kernel of the stacked basis."""
    ub = span_basis(u)
    vb = span_basis(v)
    mask = (1 << len(ub)) - 1
    result = Echelon()
    for combo in kernel(ub + vb):
        part = combo & mask
        x = 0
        i = 0
        while part:
            if part & 1:
                x ^= ub[i]
            part >>= 1
            i += 1
        result.add(x)
    return result.basis()


def intersection_dim(u: list[int], v: list[int]) -> int:
    return rank(u) + rank(v) - rank(list(u) + list(v))


def extension_count(sub: list[int], sup: list[int]) -> int:
    """How many vectors of ``sup`` are needed to extend a basis of ``sub``.

    Equals dim(span(sup)/span(sub)) when span(sub) ⊆ span(sup).
    """
    e = Echelon(sub)
    return sum(1 for x in sup if e.add(x))


def popcount(v: int) -> int:
    return bin(v).count("1")


def bits(v: int) -> list[int]:
    out = []
    i = 0
    while v:
        if v & 1:
            out.append(i)
        v >>= 1
        i += 1
    return out
