"""Brute-force point counting on projective Fermat curves x^k + y^k = c z^k
over Z_p, with exact-integer bound checks. No floating point anywhere."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .field import PrimeField
from .setops import RepProfile, max_rep_nonzero, subgroup


@lru_cache(maxsize=512)
def _power_counts(p: int, k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """counts[v] = #{x in Z_p : x^k = v}, plus the support of nonzero counts."""
    counts = [0] * p
    for x in range(p):
        counts[pow(x, k, p)] += 1
    support = tuple(v for v, n in enumerate(counts) if n)
    return tuple(counts), support


@dataclass(frozen=True)
class CurveCount:
    """Projective point count N(c) of x^k + y^k = c z^k, with the
    xyz != 0 affine sub-count and the curve genus (k-1)(k-2)/2."""

    field: PrimeField
    k: int
    c: int
    n_projective: int
    n_affine_nonzero: int
    genus: int


def fermat_point_count(field: PrimeField, k: int, c: int) -> CurveCount:
    """Count projective points: the affine chart z=1 over all (x, y), plus
    points at infinity [1 : y : 0] with y^k = -1. Each point counted once."""
    p = field.p
    c %= p
    if c == 0:
        raise ValueError("c = 0 gives a degenerate curve")
    if k < 1 or (p - 1) % k != 0:
        raise ValueError(f"k={k} must divide p-1={p - 1}")
    counts, support = _power_counts(p, k)
    n_affine = sum(counts[v] * counts[(c - v) % p] for v in support)
    n_infinity = counts[p - 1]
    # x = 0 forces y^k = c and vice versa; c != 0 rules out x = y = 0.
    n_affine_nonzero = n_affine - 2 * counts[c]
    return CurveCount(
        field=field,
        k=k,
        c=c,
        n_projective=n_affine + n_infinity,
        n_affine_nonzero=n_affine_nonzero,
        genus=(k - 1) * (k - 2) // 2,
    )


def hasse_weil_check(count: CurveCount) -> bool:
    """(N - (p+1))^2 <= 4 g^2 p, in exact integers."""
    p = count.field.p
    return (count.n_projective - (p + 1)) ** 2 <= 4 * count.genus**2 * p


def k_squared_correspondence(count: CurveCount, profile: RepProfile) -> bool:
    """The xyz != 0 points map k^2-to-1 onto ordered pair representations
    of c over the k-th power subgroup: affine-nonzero count = k^2 * r(c)."""
    return count.n_affine_nonzero == count.k**2 * profile.counts[count.c]


def mattarei_check(field: PrimeField, k: int) -> bool:
    """For k >= 4 and 4t <= k^3: max nonzero r(c) obeys 4 r^3 <= 27 t^2."""
    p = field.p
    if k < 4:
        raise ValueError(f"bound requires k >= 4, got k={k}")
    if (p - 1) % k != 0:
        raise ValueError(f"k={k} must divide p-1={p - 1}")
    t = (p - 1) // k
    if 4 * t > k**3:
        raise ValueError(f"bound requires 4t <= k^3, got t={t}, k={k}")
    _, r = max_rep_nonzero(subgroup(field, k))
    return 4 * r**3 <= 27 * t**2
