"""Additive set arithmetic over Z_p: sumsets, translates, dilates, and
representation-function statistics.

Sets carry a dual representation: a sorted element tuple for iteration and
a p-bit mask for the sumset kernel (cyclic shift-OR, word-parallel).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .field import PrimeField, subgroup_elements


class ResidueSet:
    """Immutable subset of Z_p. Elements are canonical residues in [0, p-1]."""

    __slots__ = ("field", "_elements", "_bits")

    def __init__(self, field: PrimeField, elements: tuple[int, ...], bits: int | None):
        self.field = field
        self._elements = elements
        self._bits = bits

    @classmethod
    def from_elements(cls, field: PrimeField, elements: Iterable[int]) -> "ResidueSet":
        p = field.p
        elems = tuple(sorted({e % p for e in elements}))
        return cls(field, elems, None)

    @classmethod
    def from_bits(cls, field: PrimeField, bits: int) -> "ResidueSet":
        if bits < 0 or bits >> field.p:
            raise ValueError("bit mask has bits outside [0, p-1]")
        rs = cls(field, (), bits)
        rs._elements = tuple(i for i in range(field.p) if bits >> i & 1)
        return rs

    @property
    def elements(self) -> tuple[int, ...]:
        return self._elements

    @property
    def bits(self) -> int:
        if self._bits is None:
            acc = 0
            for e in self._elements:
                acc |= 1 << e
            self._bits = acc
        return self._bits

    def __len__(self) -> int:
        return len(self._elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self._elements)

    def __contains__(self, x: int) -> bool:
        return self.bits >> (x % self.field.p) & 1 == 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ResidueSet):
            return NotImplemented
        return self.field.p == other.field.p and self._elements == other._elements

    def __hash__(self) -> int:
        return hash((self.field.p, self._elements))

    def __repr__(self) -> str:
        return f"ResidueSet(p={self.field.p}, {{{', '.join(map(str, self._elements))}}})"


def subgroup(field: PrimeField, k: int) -> ResidueSet:
    """The multiplicative subgroup A of k-th powers, |A| = (p-1)/k."""
    return ResidueSet(field, subgroup_elements(field, k), None)


def _require_same_field(a: ResidueSet, b: ResidueSet) -> int:
    if a.field.p != b.field.p:
        raise ValueError(f"mismatched fields: p={a.field.p} vs p={b.field.p}")
    return a.field.p


def _rotate(bits: int, shift: int, p: int, mask: int) -> int:
    """Cyclic left shift of a p-bit mask by `shift` positions."""
    shift %= p
    if shift == 0:
        return bits
    return ((bits << shift) | (bits >> (p - shift))) & mask


def sumset(a: ResidueSet, b: ResidueSet) -> ResidueSet:
    """{x + y mod p : x in A, y in B} via shift-OR over the smaller operand."""
    p = _require_same_field(a, b)
    if len(a) > len(b):
        a, b = b, a
    mask = (1 << p) - 1
    base = b.bits
    acc = 0
    for x in a.elements:
        acc |= _rotate(base, x, p, mask)
    return ResidueSet.from_bits(a.field, acc)


def sumset_pairs(a: ResidueSet, b: ResidueSet) -> ResidueSet:
    """Reference implementation of `sumset` by direct pair enumeration."""
    p = _require_same_field(a, b)
    return ResidueSet.from_elements(a.field, {(x + y) % p for x in a for y in b})


def iterated_sumset(a: ResidueSet, l: int) -> ResidueSet:
    """The l-fold sumset A + ... + A (l >= 1 copies)."""
    if l < 1:
        raise ValueError(f"fold count must be >= 1, got {l}")
    acc = a
    for _ in range(l - 1):
        acc = sumset(acc, a)
    return acc


def translate(a: ResidueSet, x: int) -> ResidueSet:
    """{e + x mod p : e in A}."""
    p = a.field.p
    mask = (1 << p) - 1
    return ResidueSet.from_bits(a.field, _rotate(a.bits, x % p, p, mask))


def dilate(a: ResidueSet, x: int) -> ResidueSet:
    """{e * x mod p : e in A}; x must be nonzero so cardinality is preserved."""
    p = a.field.p
    x %= p
    if x == 0:
        raise ValueError("dilation by 0 is not invertible")
    return ResidueSet.from_elements(a.field, (e * x % p for e in a.elements))


@dataclass(frozen=True)
class RepProfile:
    """counts[c] = number of ordered pairs (x, y) in A x A with x + y = c."""

    field: PrimeField
    counts: tuple[int, ...]
    source_size: int

    def __post_init__(self) -> None:
        if sum(self.counts) != self.source_size**2:
            raise ValueError("representation counts do not sum to |A|^2")
        if len(self.counts) != self.field.p:
            raise ValueError("counts array must have length p")


def rep_profile(a: ResidueSet) -> RepProfile:
    """Full representation function of A + A, by O(|A|^2) pair enumeration."""
    p = a.field.p
    counts = [0] * p
    elems = a.elements
    for x in elems:
        for y in elems:
            counts[(x + y) % p] += 1
    return RepProfile(a.field, tuple(counts), len(elems))


def pair_sum_counter(elements: Iterable[int], p: int) -> Counter:
    """Sparse r(c) as a Counter; avoids a length-p array for large p."""
    elems = list(elements)
    ctr: Counter = Counter()
    for x in elems:
        for y in elems:
            ctr[(x + y) % p] += 1
    return ctr


def max_rep_nonzero(a: ResidueSet) -> tuple[int, int]:
    """(c, r(c)) maximizing r over nonzero c; ties broken by smallest c.

    A set with no nonzero pair sums reports (1, 0).
    """
    p = a.field.p
    ctr = pair_sum_counter(a.elements, p)
    best_c, best_r = 1, 0
    for c in sorted(ctr):
        if c != 0 and ctr[c] > best_r:
            best_c, best_r = c, ctr[c]
    return best_c, best_r


def doubling_ratio(a: ResidueSet) -> Fraction:
    """|A + A| / |A| as an exact rational."""
    if len(a) == 0:
        raise ValueError("doubling ratio of the empty set is undefined")
    return Fraction(len(sumset(a, a)), len(a))


def sum_of_elements(a: ResidueSet) -> int:
    """Sum of all elements of A, reduced mod p."""
    return sum(a.elements) % a.field.p
