"""Brute-force oracles for the frameproof, separable, HLD and SCLD properties.

Every coalition of the relevant sizes is enumerated once. The kernel
returns, per coalition, a descendant digest and the number of codewords
the descendant covers. Separability is decided by grouping equal digests
and re-checking each group exactly, so a digest collision can never
produce a false witness.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from functools import reduce
from itertools import combinations, islice
from math import comb
from operator import or_

import numpy as np

from ._backend import kernels
from .code import Code, Coalition, count_coalitions, desc, residual
from .errors import ParameterError

COALITION_BUDGET = 10**8


@dataclass
class VerifyReport:
    property: str
    t: int
    holds: bool
    minimal_list_size: int | None
    witness: dict | None
    coalitions_examined: int
    list_size_convention: str
    L: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def coalition_at(m: int, t: int, pos: int, exact: bool = False) -> Coalition:
    """Unrank ``pos`` in the sizes-ascending, lexicographic coalition order."""
    sizes = (t,) if exact else range(1, t + 1)
    for s in sizes:
        block = comb(m, s)
        if pos < block:
            out, start = [], 0
            for k in range(s, 0, -1):
                for v in range(start, m):
                    cnt = comb(m - v - 1, k - 1)
                    if pos < cnt:
                        out.append(v)
                        start = v + 1
                        break
                    pos -= cnt
            return tuple(out)
        pos -= block
    raise IndexError("coalition position out of range")


@dataclass
class CoalitionScan:
    """Per-coalition digests and residual sizes for one code and ``t``."""

    code: object
    t: int
    exact: bool
    keys: object
    counts: np.ndarray
    _groups: list | None = field(default=None, repr=False)

    @classmethod
    def run(cls, code, t: int, exact: bool = False) -> CoalitionScan:
        total = count_coalitions(code.M, t, exact)
        if total > COALITION_BUDGET:
            raise ParameterError(f"{total} coalitions exceed the verification budget")
        keys, counts = kernels.coalition_scan(code, t, exact)
        return cls(code, t, exact, keys, counts)

    def __len__(self) -> int:
        return len(self.counts)

    def coalition(self, pos: int) -> Coalition:
        return coalition_at(self.code.M, self.t, int(pos), self.exact)

    def max_count(self) -> int:
        return int(self.counts.max()) if len(self.counts) else 0

    def first_over(self, limit: int) -> int | None:
        hits = np.flatnonzero(self.counts > limit)
        return int(hits[0]) if len(hits) else None

    def collision_groups(self) -> list[list[Coalition]]:
        """Groups (size >= 2) of coalitions with identical descendants."""
        if self._groups is None:
            self._groups = self._find_groups()
        return self._groups

    def _find_groups(self) -> list[list[Coalition]]:
        keys = self.keys
        if isinstance(keys, np.ndarray):
            order = np.argsort(keys, kind="stable")
            sk = keys[order]
            same = np.flatnonzero(sk[1:] == sk[:-1])
            if not len(same):
                return []
            runs: list[list[int]] = []
            prev = -2
            for i in same:
                if i == prev + 1 and runs:
                    runs[-1].append(int(order[i + 1]))
                else:
                    runs.append([int(order[i]), int(order[i + 1])])
                prev = i
            packed = self.code.packed
            groups = []
            for run in runs:
                exact: dict[int, list[Coalition]] = {}
                for pos in sorted(run):
                    c = self.coalition(pos)
                    exact.setdefault(reduce(or_, (packed[i] for i in c)), []).append(c)
                groups.extend(g for g in exact.values() if len(g) > 1)
            return groups
        seen: dict[int, list[int]] = {}
        for pos, k in enumerate(keys):
            seen.setdefault(k, []).append(pos)
        return [[self.coalition(p) for p in ps] for ps in seen.values() if len(ps) > 1]


def _check_t(code: Code, t: int) -> None:
    if not 1 <= t <= code.M:
        raise ParameterError(f"need 1 <= t <= M (t={t}, M={code.M})")


def is_frameproof(code: Code, t: int) -> VerifyReport:
    """No size-t coalition's descendant covers a codeword outside it."""
    if t >= code.M:
        raise ParameterError("t too large")
    if t < 1:
        raise ParameterError("t must be >= 1")
    scan = CoalitionScan.run(code, t, exact=True)
    bad = scan.first_over(t)
    witness = None
    if bad is not None:
        coal = scan.coalition(bad)
        framed = next(j for j in residual(code, desc(code, coal)) if j not in coal)
        witness = {"coalition": list(coal), "framed": framed}
    return VerifyReport("fpc", t, bad is None, scan.max_count(), witness, len(scan), "exactly-t")


def _separability_witness(scan: CoalitionScan) -> dict | None:
    groups = scan.collision_groups()
    if not groups:
        return None
    a, b = groups[0][0], groups[0][1]
    return {"coalitions": [list(a), list(b)]}


def is_separable(code: Code, t: int) -> VerifyReport:
    """Distinct coalitions of size <= t have distinct descendants."""
    _check_t(code, t)
    scan = CoalitionScan.run(code, t)
    witness = _separability_witness(scan)
    return VerifyReport("sc", t, witness is None, scan.max_count(), witness, len(scan), "1..t")


def is_hld(code: Code, t: int, L: int | None = None) -> VerifyReport:
    """List size over coalitions of size exactly ``t``; holds iff it is <= L."""
    _check_t(code, t)
    scan = CoalitionScan.run(code, t, exact=True)
    mls = scan.max_count()
    holds, witness = True, None
    if L is not None and mls > L:
        pos = scan.first_over(L)
        holds = False
        witness = {"coalition": list(scan.coalition(pos)), "residual_size": int(scan.counts[pos])}
    return VerifyReport("hld", t, holds, mls, witness, len(scan), "exactly-t", L)


def is_scld(code: Code, t: int, L: int | None = None) -> VerifyReport:
    """Separable, and list size over all of Desc_t is <= L (when given)."""
    _check_t(code, t)
    scan = CoalitionScan.run(code, t)
    mls = scan.max_count()
    witness = _separability_witness(scan)
    holds = witness is None
    if holds and L is not None and mls > L:
        pos = scan.first_over(L)
        holds = False
        witness = {"coalition": list(scan.coalition(pos)), "residual_size": int(scan.counts[pos])}
    return VerifyReport("scld", t, holds, mls, witness, len(scan), "1..t", L)


def verify(code: Code, t: int, prop: str, L: int | None = None) -> VerifyReport:
    prop = prop.lower()
    if prop == "fpc":
        return is_frameproof(code, t)
    if prop == "sc":
        return is_separable(code, t)
    if prop == "hld":
        return is_hld(code, t, L)
    if prop == "scld":
        return is_scld(code, t, L)
    raise ParameterError(f"unknown property {prop!r}")


@dataclass
class CrosscheckReport:
    t: int
    checks: dict[str, bool]
    details: dict[str, str]

    @property
    def consistent(self) -> bool:
        return all(self.checks.values())

    @property
    def inconsistencies(self) -> list[str]:
        return [k for k, ok in self.checks.items() if not ok]


def lemma1_crosscheck(code: Code, t: int) -> CrosscheckReport:
    """Check the four code-relation equivalences on one code.

    1. t-FPC  <=>  SCLD with list size t
    2. SC     <=>  SCLD ignoring list size
    3. SCLD(L) <=> SC and HLD(L), and both list-size measurements agree
    4. SCLD(L) implies SCLD(L') for every L <= L' <= M
    """
    _check_t(code, t)
    scld = is_scld(code, t)
    sc = is_separable(code, t)
    hld = is_hld(code, t)
    L = scld.minimal_list_size
    checks: dict[str, bool] = {}
    details: dict[str, str] = {}

    if t < code.M:
        fpc = is_frameproof(code, t)
        checks["fpc_iff_scld_L_eq_t"] = fpc.holds == is_scld(code, t, t).holds
        details["fpc_iff_scld_L_eq_t"] = f"fpc={fpc.holds} scld(L=t)={is_scld(code, t, t).holds}"
    checks["sc_iff_scld_any_L"] = sc.holds == scld.holds
    details["sc_iff_scld_any_L"] = f"sc={sc.holds} scld={scld.holds}"

    with_l = is_scld(code, t, L).holds
    checks["scld_iff_sc_and_hld"] = with_l == (sc.holds and is_hld(code, t, L).holds) and (
        hld.minimal_list_size == scld.minimal_list_size
    )
    details["scld_iff_sc_and_hld"] = (
        f"scld(L={L})={with_l} sc={sc.holds} hld_L={hld.minimal_list_size} scld_L={scld.minimal_list_size}"
    )

    mono = True
    if with_l:
        mono = all(is_scld(code, t, lp).holds for lp in range(L, code.M + 1))
    checks["list_size_monotone"] = mono
    details["list_size_monotone"] = f"L={L} M={code.M}"
    return CrosscheckReport(t, checks, details)


def naive_separable(code: Code, t: int) -> bool:
    """Quadratic pairwise comparison of all descendants; for cross-checks only."""
    packed = code.packed
    ds = [reduce(or_, (packed[i] for i in c)) for s in range(1, t + 1) for c in combinations(range(code.M), s)]
    return all(a != b for i, a in enumerate(ds) for b in islice(ds, i + 1, None))
