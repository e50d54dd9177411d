"""Empirical verification suites: per-claim sweeps over ranges of primes,
producing deterministic structured reports.

Every sweep returns a SweepReport whose entries are flat dicts (JSON/CSV
ready), sorted by (p, k) regardless of execution order; violations are the
entries whose checks failed. Reports are byte-identical across runs except
for the timing block.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Optional, Sequence

from .curves import fermat_point_count, hasse_weil_check, k_squared_correspondence, mattarei_check
from .field import PrimeField, divisors, primes_in_range, primes_up_to, subgroup_elements
from .setops import ResidueSet, max_rep_nonzero, rep_profile, subgroup, sumset, _rotate
from .structure import (
    GapDescription,
    binary_gap_peel,
    concentrated_sum_witness,
    gap_oracle,
    generate_gap,
    gmr_check,
    pair_parts_from_gap,
)

AP_DIRECT = "AP_DIRECT"
BINARY_PEEL = "BINARY_PEEL"
POWER_OF_TWO_FILTER = "POWER_OF_TWO_FILTER"
ORACLE = "ORACLE"


@dataclass(frozen=True)
class GapVerdict:
    """Classification of one subgroup against the expected rule
    `GAP iff t in {2, 4, p-1}`; a witness is present iff is_gap."""

    p: int
    k: int
    t: int
    is_gap: bool
    expected: bool
    agrees: bool
    method: str
    witness: Optional[GapDescription]

    def entry(self) -> dict:
        e = {
            "p": self.p,
            "k": self.k,
            "t": self.t,
            "is_gap": self.is_gap,
            "expected": self.expected,
            "agrees": self.agrees,
            "method": self.method,
        }
        if self.witness is not None:
            e["witness_a"] = self.witness.a
            e["witness_diffs"] = " ".join(map(str, self.witness.diffs))
            e["witness_lengths"] = " ".join(map(str, self.witness.lengths))
        else:
            e["witness_a"] = ""
            e["witness_diffs"] = ""
            e["witness_lengths"] = ""
        return e


@dataclass
class SweepReport:
    suite: str
    params: dict
    entries: list[dict]
    violations: list[dict]
    timing: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "entries": self.entries,
            "violations": self.violations,
            "timing": self.timing,
        }


def _pmap(fn: Callable, units: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(units) < 2:
        return [fn(u) for u in units]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        chunk = max(1, len(units) // (jobs * 8))
        return list(ex.map(fn, units, chunksize=chunk))


def _finish(suite: str, params: dict, entries: list[dict], t0: float) -> SweepReport:
    violations = [e for e in entries if not e.get("ok", True)]
    timing = {"seconds": round(time.perf_counter() - t0, 6)}
    return SweepReport(suite, params, entries, violations, timing)


# ---------------------------------------------------------------------------
# classification of individual subgroups


def classify_subgroup(field: PrimeField, k: int, use_oracle: bool = False) -> GapVerdict:
    """Decide whether the k-th power subgroup is a GAP.

    Decision route: k=1 is the full unit group, an AP with difference 1;
    t=1 and non-power-of-2 orders are excluded outright (any subgroup GAP
    with k>1 must be a proper all-2 GAP of size 2^n); power-of-2 orders are
    settled by binary_gap_peel. With use_oracle=True the verdict instead
    comes from the exhaustive gap_oracle (cross-validation path).
    """
    p = field.p
    if k < 1 or (p - 1) % k != 0:
        raise ValueError(f"k={k} does not divide p-1={p - 1}")
    t = (p - 1) // k
    expected = t in (2, 4, p - 1)
    a_k = subgroup(field, k)
    witness: Optional[GapDescription]
    if use_oracle:
        witness = gap_oracle(a_k, dim_max=4, product_cap=max(2, 2 * t))
        method = ORACLE
        is_gap = witness is not None
    elif k == 1:
        witness = GapDescription(1, (1,), (p - 1,), proper=True)
        method = AP_DIRECT
        is_gap = True
    elif t == 1 or t & (t - 1):
        witness = None
        method = POWER_OF_TWO_FILTER
        is_gap = False
    else:
        witness = binary_gap_peel(a_k)
        method = BINARY_PEEL
        is_gap = witness is not None
    if witness is not None:
        regen, proper = generate_gap(witness, field)
        if regen != a_k or not proper:
            raise AssertionError(f"witness does not regenerate subgroup (p={p}, k={k})")
    return GapVerdict(p, k, t, is_gap, expected, is_gap == expected, method, witness)


# ---------------------------------------------------------------------------
# theorem sweep: GAP iff t in {2, 4, p-1}


def _theorem_unit(pk: tuple[int, int]) -> dict:
    p, k = pk
    field = PrimeField.of(p)
    verdict = classify_subgroup(field, k)
    e = verdict.entry()
    e["csum_c"] = ""
    e["csum_r"] = ""
    csum_ok = True
    if verdict.is_gap and k > 1:
        # every k>1 witness is all-2; its corner pairs share one sum c with
        # r(c) >= t/2, and c must equal -d_n mod p
        try:
            c, r = concentrated_sum_witness(pair_parts_from_gap(verdict.witness, field))
            e["csum_c"] = c
            e["csum_r"] = r
        except ValueError:
            csum_ok = False
    e["ok"] = verdict.agrees and csum_ok
    return e


def theorem_sweep(p_max: int, jobs: int = 1) -> SweepReport:
    """Classify every (p, k) with 3 <= p <= p_max prime and k | p-1."""
    if p_max < 3:
        raise ValueError("p_max must be at least 3")
    t0 = time.perf_counter()
    units = [(p, k) for p in primes_in_range(3, p_max) for k in divisors(p - 1)]
    entries = _pmap(_theorem_unit, units, jobs)
    entries.sort(key=lambda e: (e["p"], e["k"]))
    return _finish("theorem", {"p_max": p_max}, entries, t0)


# ---------------------------------------------------------------------------
# max nonzero r(c) sweeps for t in {8, 16, 32}

_RC_ORDERS = (8, 16, 32)


def _rc_unit(args: tuple[int, int]) -> dict:
    p, t = args
    field = PrimeField.of(p)
    k = (p - 1) // t
    a_k = ResidueSet(field, subgroup_elements(field, k), None)
    c, r = max_rep_nonzero(a_k)
    return {"p": p, "k": k, "t": t, "max_c": c, "max_r": r, "bound": t // 2, "ok": 2 * r < t}


def rc_sweep(t: int, p_max: int, jobs: int = 1, k_min: int = 2) -> SweepReport:
    """For primes p = kt + 1 up to min(p_max, 3^t - 1), check that the max
    nonzero representation count over the order-t subgroup stays below t/2.

    k >= k_min (default 2): the k=1 case is the full unit group, where
    r(c) = p - 2 for every nonzero c, outside the scope of the claim.
    """
    if t not in _RC_ORDERS:
        raise ValueError(f"t must be one of {_RC_ORDERS}, got {t}")
    t0 = time.perf_counter()
    hi = min(p_max, 3**t - 1)
    coverage = "full" if p_max >= 3**t - 1 else "partial"
    skipped = []
    units = []
    for p in primes_up_to(hi):
        if p % t != 1:
            continue
        if (p - 1) // t < k_min:
            skipped.append(p)
            continue
        units.append((p, t))
    entries = _pmap(_rc_unit, units, jobs)
    entries.sort(key=lambda e: e["p"])
    params = {
        "t": t,
        "p_max": p_max,
        "effective_p_max": hi,
        "coverage": coverage,
        "k_min": k_min,
        "skipped_small_k": skipped,
    }
    return _finish("rc", params, entries, t0)


# ---------------------------------------------------------------------------
# exact doubling |A+A| = t^2/2 + 1 for p > 3^t


def _doubling_unit(args: tuple[int, int]) -> dict:
    p, t = args
    field = PrimeField.of(p)
    k = (p - 1) // t
    a_k = subgroup(field, k)
    size = len(sumset(a_k, a_k))
    want = t * t // 2 + 1
    return {"p": p, "k": k, "t": t, "sum_size": size, "expected_size": want, "ok": size == want}


def doubling_sweep(t: int, p_min: int, p_max: int, jobs: int = 1) -> SweepReport:
    """Exact sumset size t^2/2 + 1 for every prime p = kt + 1 in
    [p_min, p_max]; the range must lie entirely above 3^t."""
    if t < 2 or t % 2:
        raise ValueError(f"t must be even and >= 2, got {t}")
    if p_min <= 3**t:
        raise ValueError(f"range must lie above 3^t = {3**t}, got p_min={p_min}")
    if p_max < p_min:
        raise ValueError("empty range")
    t0 = time.perf_counter()
    units = [(p, t) for p in primes_in_range(p_min, p_max) if p % t == 1]
    entries = _pmap(_doubling_unit, units, jobs)
    entries.sort(key=lambda e: e["p"])
    params = {"t": t, "p_min": p_min, "p_max": p_max}
    return _finish("doubling", params, entries, t0)


# ---------------------------------------------------------------------------
# quadratic residues admit no 2-decomposition with a part of size 2..4


def _covers(tbits: int, u_elems: Iterable[int], target: int, p: int, mask: int) -> bool:
    union = 0
    for e in u_elems:
        union |= _rotate(tbits, e, p, mask)
    return union == target


def chen_yan_check(p: int) -> dict:
    """Search for U + V = R (quadratic residues) with 2 <= |U| <= 4.

    U ranges over subsets of R (normalization 0 in V); V is the maximal
    cofactor of U. Branches are pruned when 4|V| < t, since any extension
    of U up to size 4 then cannot cover the t residues.
    """
    if p <= 3:
        raise ValueError("need p > 3")
    field = PrimeField.of(p)
    r_set = subgroup(field, 2)
    t = len(r_set)
    target = r_set.bits
    mask = (1 << p) - 1
    elems = r_set.elements
    masks = [_rotate(target, (p - e) % p, p, mask) for e in elems]
    found = 0
    n = t
    for i in range(n):
        mi = masks[i]
        for j in range(i + 1, n):
            t2 = mi & masks[j]
            c2 = t2.bit_count()
            if c2 < 2 or 4 * c2 < t:
                continue
            if 2 * c2 >= t and _covers(t2, (elems[i], elems[j]), target, p, mask):
                found += 1
            for l in range(j + 1, n):
                t3 = t2 & masks[l]
                c3 = t3.bit_count()
                if c3 < 2 or 4 * c3 < t:
                    continue
                if 3 * c3 >= t and _covers(t3, (elems[i], elems[j], elems[l]), target, p, mask):
                    found += 1
                for m in range(l + 1, n):
                    t4 = t3 & masks[m]
                    c4 = t4.bit_count()
                    if c4 < 2 or 4 * c4 < t:
                        continue
                    if _covers(t4, (elems[i], elems[j], elems[l], elems[m]), target, p, mask):
                        found += 1
    return {"p": p, "k": 2, "t": t, "decompositions": found, "ok": found == 0}


def chen_yan_sweep(p_max: int = 199, jobs: int = 1) -> SweepReport:
    t0 = time.perf_counter()
    units = [p for p in primes_up_to(p_max) if p > 5]
    entries = _pmap(chen_yan_check, units, jobs)
    entries.sort(key=lambda e: e["p"])
    return _finish("chen-yan", {"p_max": p_max}, entries, t0)


# ---------------------------------------------------------------------------
# every 2-decomposition of a k>1 subgroup is a direct sum


def _hp_unit(pk: tuple[int, int]) -> dict:
    from .structure import cofactor_decompositions

    p, k = pk
    field = PrimeField.of(p)
    a_k = subgroup(field, k)
    total = 0
    nondirect = 0
    for dec in cofactor_decompositions(a_k):
        total += 1
        if not dec.direct:
            nondirect += 1
    return {
        "p": p,
        "k": k,
        "t": len(a_k),
        "decompositions": total,
        "nondirect": nondirect,
        "ok": nondirect == 0,
    }


def hp_direct_sum_sweep(p_max: int = 43, t_cap: int = 24, jobs: int = 1) -> SweepReport:
    """Exhaustively enumerate normalized 2-decompositions of every k>1
    subgroup with t <= t_cap, p <= p_max, and assert each is direct."""
    t0 = time.perf_counter()
    units = []
    for p in primes_up_to(p_max):
        if p < 3:
            continue
        for k in divisors(p - 1):
            if k == 1:
                continue
            t = (p - 1) // k
            if t > t_cap:
                raise ValueError(f"t={t} exceeds t_cap={t_cap} at p={p}, k={k}")
            units.append((p, k))
    entries = _pmap(_hp_unit, units, jobs)
    entries.sort(key=lambda e: (e["p"], e["k"]))
    return _finish("hp", {"p_max": p_max, "t_cap": t_cap}, entries, t0)


# ---------------------------------------------------------------------------
# leave-one-out sumset size inequality on random parts


def _gmr_unit(case: tuple[int, int, int, tuple[tuple[int, ...], ...]]) -> dict:
    idx, p, n, parts_elems = case
    field = PrimeField.of(p)
    parts = [ResidueSet.from_elements(field, es) for es in parts_elems]
    res = gmr_check(parts)
    return {
        "case": idx,
        "p": p,
        "n": n,
        "sizes": " ".join(str(len(s)) for s in parts),
        "total_size": res.total_size,
        "lhs": res.lhs,
        "rhs": res.rhs,
        "ok": res.holds,
    }


def gmr_random_suite(
    count: int = 1000, p_max: int = 101, seed: int = 0, jobs: int = 1
) -> SweepReport:
    """Seeded random triples/quadruples of nonempty subsets of Z_p:
    |S|^(n-1) <= prod of leave-one-out sumset sizes, exact integers."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    primes = [p for p in primes_up_to(p_max) if p >= 3]
    cases = []
    for i in range(count):
        p = rng.choice(primes)
        n = rng.choice((3, 4))
        parts = tuple(
            tuple(rng.sample(range(p), rng.randint(1, min(p, 16)))) for _ in range(n)
        )
        cases.append((i, p, n, parts))
    entries = _pmap(_gmr_unit, cases, jobs)
    entries.sort(key=lambda e: e["case"])
    params = {"count": count, "p_max": p_max, "seed": seed}
    return _finish("gmr", params, entries, t0)


# ---------------------------------------------------------------------------
# Fermat curve counts: Hasse-Weil bound and the k^2-to-1 correspondence


def _hasse_weil_unit(pk: tuple[int, int]) -> dict:
    p, k = pk
    field = PrimeField.of(p)
    t = (p - 1) // k
    profile = rep_profile(subgroup(field, k))
    hw_bad = corr_bad = mod_bad = exact_bad = 0
    n_min = n_max = None
    for c in range(1, p):
        cnt = fermat_point_count(field, k, c)
        if not hasse_weil_check(cnt):
            hw_bad += 1
        if not k_squared_correspondence(cnt, profile):
            corr_bad += 1
        if cnt.n_affine_nonzero % (k * k):
            mod_bad += 1
        if k <= 2 and cnt.n_projective != p + 1:
            exact_bad += 1
        n = cnt.n_projective
        n_min = n if n_min is None else min(n_min, n)
        n_max = n if n_max is None else max(n_max, n)
    return {
        "p": p,
        "k": k,
        "t": t,
        "genus": (k - 1) * (k - 2) // 2,
        "c_count": p - 1,
        "hw_violations": hw_bad,
        "corr_violations": corr_bad,
        "mod_violations": mod_bad,
        "exact_violations": exact_bad,
        "n_min": n_min,
        "n_max": n_max,
        "ok": hw_bad == corr_bad == mod_bad == exact_bad == 0,
    }


def hasse_weil_sweep(p_max: int = 101, k_max: int = 10, jobs: int = 1) -> SweepReport:
    t0 = time.perf_counter()
    units = [
        (p, k)
        for p in primes_in_range(3, p_max)
        for k in divisors(p - 1)
        if k <= k_max
    ]
    entries = _pmap(_hasse_weil_unit, units, jobs)
    entries.sort(key=lambda e: (e["p"], e["k"]))
    return _finish("hasse-weil", {"p_max": p_max, "k_max": k_max}, entries, t0)


# ---------------------------------------------------------------------------
# refined r(c) bound for small subgroups: 4 r^3 <= 27 t^2


def _mattarei_unit(pk: tuple[int, int]) -> dict:
    p, k = pk
    field = PrimeField.of(p)
    t = (p - 1) // k
    c, r = max_rep_nonzero(subgroup(field, k))
    ok = mattarei_check(field, k)
    return {
        "p": p,
        "k": k,
        "t": t,
        "max_c": c,
        "max_r": r,
        "lhs": 4 * r**3,
        "rhs": 27 * t**2,
        "ok": ok and 4 * r**3 <= 27 * t**2,
    }


def mattarei_sweep(p_max: int = 500, jobs: int = 1) -> SweepReport:
    t0 = time.perf_counter()
    units = []
    for p in primes_up_to(p_max):
        if p < 3:
            continue
        for k in divisors(p - 1):
            t = (p - 1) // k
            if k >= 4 and 4 * t <= k**3:
                units.append((p, k))
    entries = _pmap(_mattarei_unit, units, jobs)
    entries.sort(key=lambda e: (e["p"], e["k"]))
    return _finish("mattarei", {"p_max": p_max}, entries, t0)


# ---------------------------------------------------------------------------
# spot checks: big power-of-2 subgroups admit no all-2 decomposition


def _spotcheck_unit(pk: tuple[int, int]) -> dict:
    p, k = pk
    field = PrimeField.of(p)
    a_k = subgroup(field, k)
    t = len(a_k)
    peel_failed = binary_gap_peel(a_k) is None
    c, r = max_rep_nonzero(a_k)
    return {
        "p": p,
        "k": k,
        "t": t,
        "peel_failed": peel_failed,
        "max_c": c,
        "max_r": r,
        "bound": t // 2,
        "ok": peel_failed and 2 * r < t,
    }


def no_pair_sum_spotcheck(p_max: int = 500, t_min: int = 64, jobs: int = 1) -> SweepReport:
    """For subgroups with k > 2 and t = 2^n >= t_min: peeling must fail and
    the max nonzero representation count must stay below t/2."""
    t0 = time.perf_counter()
    units = []
    for p in primes_up_to(p_max):
        if p < 3:
            continue
        for k in divisors(p - 1):
            if k <= 2:
                continue
            t = (p - 1) // k
            if t >= t_min and t & (t - 1) == 0:
                units.append((p, k))
    entries = _pmap(_spotcheck_unit, units, jobs)
    entries.sort(key=lambda e: (e["p"], e["k"]))
    return _finish("lemma55", {"p_max": p_max, "t_min": t_min}, entries, t0)


# ---------------------------------------------------------------------------
# cross-validation of the classifier against the exhaustive oracle


def _oracle_unit(pk: tuple[int, int]) -> dict:
    p, k = pk
    field = PrimeField.of(p)
    fast = classify_subgroup(field, k)
    slow = classify_subgroup(field, k, use_oracle=True)
    return {
        "p": p,
        "k": k,
        "t": fast.t,
        "fast_is_gap": fast.is_gap,
        "oracle_is_gap": slow.is_gap,
        "ok": fast.is_gap == slow.is_gap,
    }


def oracle_equivalence_sweep(p_max: int = 61, jobs: int = 1) -> SweepReport:
    t0 = time.perf_counter()
    units = [(p, k) for p in primes_in_range(3, p_max) for k in divisors(p - 1)]
    entries = _pmap(_oracle_unit, units, jobs)
    entries.sort(key=lambda e: (e["p"], e["k"]))
    return _finish("oracle-equivalence", {"p_max": p_max}, entries, t0)
