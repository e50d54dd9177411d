"""Generalized arithmetic progression (GAP) structure and additive
decompositions: generation, recognition, peeling, and direct-sum checks.

A GAP is {a + x_1 d_1 + ... + x_n d_n : x_i in [0, L_i - 1]} with every
L_i >= 2 and every d_i nonzero; it is proper when its cardinality equals
the product of the L_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .field import PrimeField
from .setops import ResidueSet, _rotate, pair_sum_counter, sumset


@dataclass(frozen=True)
class GapDescription:
    """(a, [d_1..d_n], [L_1..L_n]) plus whether the generated set is proper."""

    a: int
    diffs: tuple[int, ...]
    lengths: tuple[int, ...]
    proper: bool

    def __post_init__(self) -> None:
        if len(self.diffs) != len(self.lengths) or not self.diffs:
            raise ValueError("need n >= 1 differences with matching lengths")
        if any(l < 2 for l in self.lengths):
            raise ValueError("every component length must be >= 2")
        if any(d == 0 for d in self.diffs):
            raise ValueError("every difference must be nonzero")

    @property
    def dimension(self) -> int:
        return len(self.diffs)

    @property
    def cell_count(self) -> int:
        return math.prod(self.lengths)


def generate_gap(desc: GapDescription, field: PrimeField) -> tuple[ResidueSet, bool]:
    """Materialize the described set; returns (set, proper)."""
    p = field.p
    if any(d % p == 0 for d in desc.diffs):
        raise ValueError("difference is 0 mod p")
    mask = (1 << p) - 1
    acc = 1 << (desc.a % p)
    for d, length in zip(desc.diffs, desc.lengths):
        row = acc
        for _ in range(length - 1):
            row = _rotate(row, d % p, p, mask)
            acc |= row
    rs = ResidueSet.from_bits(field, acc)
    return rs, len(rs) == desc.cell_count


@dataclass(frozen=True)
class Decomposition:
    """An expression target = parts[0] + ... + parts[n-1], every |part| >= 2."""

    parts: tuple[ResidueSet, ...]
    target: ResidueSet

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValueError("decomposition needs at least one part")
        if any(len(s) < 2 for s in self.parts):
            raise ValueError("every part must have cardinality >= 2")
        acc = self.parts[0]
        for s in self.parts[1:]:
            acc = sumset(acc, s)
        if acc != self.target:
            raise ValueError("parts do not sum to the target set")

    @property
    def direct(self) -> bool:
        return len(self.target) == math.prod(len(s) for s in self.parts)


def is_direct(d: Decomposition) -> bool:
    """True iff |target| equals the product of the part cardinalities."""
    return d.direct


def ap_to_pairs(a: int, d: int, length: int, field: PrimeField) -> Decomposition:
    """Write the AP {a, a+d, ..., a+(L-1)d} as {a, a+d} + (L-2) copies of {0, d}."""
    p = field.p
    a %= p
    d %= p
    if d == 0:
        raise ValueError("difference must be nonzero")
    if length < 2 or length >= p:
        raise ValueError(f"need 2 <= L < p for a proper AP, got L={length}")
    target = ResidueSet.from_elements(field, ((a + j * d) % p for j in range(length)))
    parts = [ResidueSet.from_elements(field, (a, a + d))]
    parts.extend(ResidueSet.from_elements(field, (0, d)) for _ in range(length - 2))
    return Decomposition(tuple(parts), target)


def is_arithmetic_progression(s: ResidueSet) -> Optional[tuple[int, int]]:
    """Some (a, d) with S = {a, a+d, ..., a+(|S|-1)d}, or None.

    Anchors are tried in ascending order, then candidate differences; a
    singleton reports (a, 1) by convention.
    """
    p = s.field.p
    n = len(s)
    if n == 0:
        return None
    if n == 1:
        return s.elements[0], 1
    bits = s.bits
    diffs = sorted({(y - x) % p for x in s.elements for y in s.elements if x != y})
    for a in s.elements:
        for d in diffs:
            cur = a
            for _ in range(n - 1):
                cur = (cur + d) % p
                if not bits >> cur & 1:
                    break
            else:
                return a, d
    return None


@lru_cache(maxsize=1 << 16)
def _peel(p: int, canon: tuple[int, ...]) -> Optional[tuple[int, tuple[int, ...]]]:
    """Peel a canonical (min-translated-to-0) set into (base, diffs), or None.

    For each candidate difference d, the translation-by-d chains inside the
    set must all have even length; the even-position elements form the
    cofactor, which is peeled recursively. Chains cannot wrap because
    |set| = 2^n < p.
    """
    if len(canon) == 1:
        return canon[0], ()
    in_set = set(canon)
    candidates = sorted({(y - x) % p for x in canon for y in canon if x != y})
    for d in candidates:
        cofactor = []
        ok = True
        for head in canon:
            if (head - d) % p in in_set:
                continue  # interior of a chain
            chain_len = 0
            cur = head
            while cur in in_set:
                if chain_len % 2 == 0:
                    cofactor.append(cur)
                chain_len += 1
                cur = (cur + d) % p
            if chain_len % 2:
                ok = False
                break
        if not ok or 2 * len(cofactor) != len(canon):
            continue
        m = min(cofactor)
        sub = _peel(p, tuple(sorted((x - m) % p for x in cofactor)))
        if sub is not None:
            base, diffs = sub
            return (base + m) % p, (d,) + diffs
    return None


def binary_gap_peel(s: ResidueSet) -> Optional[GapDescription]:
    """All-2 proper GAP description of S, or None if S is not a direct sum
    of cardinality-2 sets. |S| must be a power of 2."""
    n = len(s)
    if n == 0 or n & (n - 1):
        raise ValueError(f"set size {n} is not a power of 2")
    if n == 1:
        return None  # component lengths >= 2 exclude singletons
    p = s.field.p
    m = s.elements[0]
    canon = tuple((x - m) % p for x in s.elements)
    res = _peel(p, canon)
    if res is None:
        return None
    base, diffs = res
    return GapDescription((base + m) % p, diffs, (2,) * len(diffs), proper=True)


def gap_oracle(
    s: ResidueSet,
    dim_max: int,
    product_cap: int,
    *,
    size_guard: int = 64,
    p_guard: int = 101,
) -> Optional[GapDescription]:
    """Exhaustive GAP search: any witness with dimension <= dim_max and
    length product <= product_cap whose generated set equals S.

    Complete for proper GAPs once product_cap >= |S| and dim_max >= log2|S|;
    non-proper descriptions are covered only up to the caps. Descriptions
    are normalized (base in S, differences <= (p-1)/2, components sorted),
    which loses no generated sets.
    """
    p = s.field.p
    if p > p_guard or len(s) > size_guard:
        raise ValueError(
            f"cost guard exceeded: p={p} > {p_guard} or |S|={len(s)} > {size_guard}"
        )
    if dim_max < 1 or product_cap < 2:
        raise ValueError("need dim_max >= 1 and product_cap >= 2")
    size = len(s)
    if size < 2:
        return None
    mask = (1 << p) - 1
    target = s.bits
    outside = mask ^ target
    half = (p - 1) // 2

    def search(acc, prod, d_min, l_min, depth, path):
        # Extend by one component (d, L) >= (d_min, l_min) lexicographically.
        # Single-component completions are tested before recursing deeper so
        # plain APs are found without exploring subtrees.
        extensions = []
        for d in range(d_min, half + 1):
            l_floor = l_min if d == d_min else 2
            row = acc
            cur = acc
            length = 1
            while True:
                row = _rotate(row, d, p, mask)
                if row & outside:
                    break
                length += 1
                if prod * length > product_cap:
                    break
                cur |= row
                if length < l_floor:
                    continue
                if cur == target:
                    return path + [(d, length)]
                if depth + 1 < dim_max:
                    extensions.append((d, length, cur, prod * length))
        for d, length, cur, prod2 in extensions:
            found = search(cur, prod2, d, length, depth + 1, path + [(d, length)])
            if found is not None:
                return found
        return None

    for a in s.elements:
        found = search(1 << a, 1, 1, 2, 0, [])
        if found is not None:
            diffs = tuple(d for d, _ in found)
            lengths = tuple(l for _, l in found)
            return GapDescription(a, diffs, lengths, proper=math.prod(lengths) == size)
    return None


def cofactor_decompositions(
    b: ResidueSet, max_part_size: Optional[int] = None
) -> Iterator[Decomposition]:
    """All normalized 2-decompositions B = S + T with |S|, |T| >= 2.

    Normalization: 0 in T, hence S is a subset of B. For each candidate S
    the maximal cofactor T = intersection of (B - s) over s in S is tested;
    subsets whose running cofactor drops below 2 elements are pruned, which
    is exact because the cofactor only shrinks as S grows.
    """
    n = len(b)
    if max_part_size is None and n > 24:
        raise ValueError(f"|B| = {n} > 24; pass max_part_size to bound the search")
    if n < 2:
        return
    p = b.field.p
    mask = (1 << p) - 1
    target = b.bits
    elems = b.elements
    shifted = [_rotate(target, (p - e) % p, p, mask) for e in elems]  # B - e
    depth_cap = n if max_part_size is None else max_part_size
    field = b.field
    chosen: list[int] = []

    def rec(start: int, tbits: int) -> Iterator[Decomposition]:
        for i in range(start, n):
            nt = tbits & shifted[i]
            if nt.bit_count() < 2:
                continue
            chosen.append(i)
            if len(chosen) >= 2:
                union = 0
                for idx in chosen:
                    union |= _rotate(nt, elems[idx], p, mask)
                if union == target:
                    part_s = ResidueSet.from_elements(field, (elems[j] for j in chosen))
                    part_t = ResidueSet.from_bits(field, nt)
                    yield Decomposition((part_s, part_t), b)
            if len(chosen) < depth_cap:
                yield from rec(i + 1, nt)
            chosen.pop()

    yield from rec(0, mask)


@dataclass(frozen=True)
class SumsetBoundResult:
    """Exact-arithmetic comparison |S|^(n-1) <= prod |S-hat_i|."""

    total_size: int
    hat_sizes: tuple[int, ...]
    lhs: int
    rhs: int
    holds: bool


def gmr_check(parts: Sequence[ResidueSet]) -> SumsetBoundResult:
    """Check the sumset size bound |S|^(n-1) <= prod over i of |S-hat_i|,
    where S-hat_i drops the i-th summand. Requires n >= 3 nonempty parts."""
    n = len(parts)
    if n < 3:
        raise ValueError(f"need at least 3 parts, got {n}")
    if any(len(s) == 0 for s in parts):
        raise ValueError("parts must be nonempty")
    prefix = [parts[0]]
    for s in parts[1:]:
        prefix.append(sumset(prefix[-1], s))
    suffix = [parts[-1]]
    for s in reversed(parts[:-1]):
        suffix.append(sumset(suffix[-1], s))
    suffix.reverse()
    hat_sizes = []
    for i in range(n):
        if i == 0:
            hat = suffix[1]
        elif i == n - 1:
            hat = prefix[n - 2]
        else:
            hat = sumset(prefix[i - 1], suffix[i + 1])
        hat_sizes.append(len(hat))
    total = len(prefix[-1])
    lhs = total ** (n - 1)
    rhs = math.prod(hat_sizes)
    return SumsetBoundResult(total, tuple(hat_sizes), lhs, rhs, lhs <= rhs)


def pair_parts_from_gap(desc: GapDescription, field: PrimeField) -> Decomposition:
    """Turn an all-2 GAP description into the decomposition
    {0, d_1} + ... + {0, d_(n-1)} + {a, a + d_n}."""
    if any(l != 2 for l in desc.lengths):
        raise ValueError("description must have every component length 2")
    p = field.p
    target, _ = generate_gap(desc, field)
    parts = [ResidueSet.from_elements(field, (0, d)) for d in desc.diffs[:-1]]
    parts.append(
        ResidueSet.from_elements(field, (desc.a, desc.a + desc.diffs[-1]))
    )
    return Decomposition(tuple(parts), target)


def concentrated_sum_witness(decomp: Decomposition) -> tuple[int, int]:
    """For a direct decomposition of a zero-sum set into 2-element parts,
    return (c, r(c)) where c is the common sum of complementary corner
    pairs; r(c) is at least 2^(n-1) = |target| / 2.

    Raises ValueError if c = 0, c != -d_n, or r(c) < |target| / 2; any of
    these falsifies the concentration claim on this input.
    """
    p = decomp.target.field.p
    if any(len(s) != 2 for s in decomp.parts):
        raise ValueError("every part must have exactly 2 elements")
    if not decomp.direct:
        raise ValueError("decomposition must be direct")
    base = 0
    diffs = []
    for part in decomp.parts:
        u, v = part.elements
        base = (base + u) % p
        diffs.append((v - u) % p)
    c = (2 * base + sum(diffs[:-1])) % p
    d_last = diffs[-1]
    if c == 0 or (c + d_last) % p != 0:
        raise ValueError(
            f"witness construction failed: c={c}, d_n={d_last} (target not zero-sum?)"
        )
    t = len(decomp.target)
    r_c = pair_sum_counter(decomp.target.elements, p)[c]
    if 2 * r_c < t:
        raise ValueError(f"concentration violated: r({c}) = {r_c} < {t}/2")
    return c, r_c
