"""Tutte and vertical connectivity, witnesses, and flat covers.

Both connectivities are computed by one full scan of the connectivity
function lambda(X) = r(X) + r(E-X) - r(M):

  * Tutte connectivity tau is the least k such that some X has
    |X| >= k, |E-X| >= k and lambda(X) < k; equivalently the minimum of
    lambda(X)+1 over X with lambda(X) < min(|X|, |E-X|).  When no such X
    exists tau is infinite, which happens exactly for the uniform
    matroids U_{r,n} with n in {2r-1, 2r, 2r+1}; the scan result is
    cross-checked against that characterization.

  * Vertical connectivity kappa replaces the size conditions by rank
    conditions r(X), r(E-X) >= k and falls back to r(M) when no vertical
    separation exists.

flats_cover searches for a family of proper flats covering all but a
permitted number of elements; since every proper flat extends to a
hyperplane and enlarging a flat only shrinks the uncovered remainder, the
search ranges over hyperplanes only.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb
from typing import List, Optional, Tuple

import numpy as np

from .core import Matroid, is_uniform, popcount
from .errors import BudgetExceeded, MatroidError
from .expansion import expand

SCAN_BUDGET = 20
INFINITE = None      # tau's "no k-separation exists" value


@dataclass(frozen=True)
class ConnectivityResult:
    """Connectivity value plus a witness separation when one exists.

    value None encodes an infinite Tutte connectivity; the witness is the
    smallest-mask X attaining the minimal separation, as labels.
    """

    value: Optional[int]
    witness: Optional[Tuple[str, ...]]

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def to_json_dict(self) -> dict:
        return {
            "value": "infinite" if self.value is None else self.value,
            "witness": list(self.witness) if self.witness else None,
        }


def _scan(M: Matroid, qualifier: str, threads: int = 1):
    """Minimal lambda(X)+1 over qualifying X, with smallest-mask witness.

    qualifier 'size' demands lambda(X) < min(|X|, |E-X|) (Tutte style),
    'rank' demands lambda(X) < min(r(X), r(E-X)) (vertical style).
    """
    n = M.ground.n
    if n > SCAN_BUDGET:
        raise BudgetExceeded(
            "connectivity scan over 2^%d subsets, budget is 2^%d"
            % (n, SCAN_BUDGET))
    if n == 0:
        return None, None
    ranks = M.rank_table(threads=threads).astype(np.int64)
    lam = ranks + ranks[::-1] - int(M.rank_total)
    if qualifier == "size":
        masks = np.arange(1 << n, dtype=np.uint64)
        sizes = np.bitwise_count(masks).astype(np.int64)
        bound = np.minimum(sizes, n - sizes)
    else:
        bound = np.minimum(ranks, ranks[::-1])
    qual = lam < bound
    if not qual.any():
        return None, None
    best = int(lam[qual].min())
    at = int(np.nonzero(qual & (lam == best))[0][0])
    return best + 1, M.ground.labels_of(at)


def tutte_connectivity(M: Matroid, threads: int = 1) -> ConnectivityResult:
    """Tutte connectivity tau(M); INFINITE when no k-separation exists."""
    value, witness = _scan(M, "size", threads)
    uni = is_uniform(M)
    char_infinite = uni is not None and uni[1] in (2 * uni[0] - 1,
                                                   2 * uni[0],
                                                   2 * uni[0] + 1)
    if (value is None) != char_infinite:
        raise MatroidError(
            "internal check failed: infinite-tau scan disagrees with the "
            "uniform characterization")
    return ConnectivityResult(value=value, witness=witness)


def vertical_connectivity(M: Matroid, threads: int = 1) -> ConnectivityResult:
    """Vertical connectivity kappa(M); r(M) when no vertical separation."""
    value, witness = _scan(M, "rank", threads)
    if M.loops:
        stripped = M.delete(M.loops)
        v2, _ = _scan(stripped, "rank", threads)
        k1 = value if value is not None else M.rank_total
        k2 = v2 if v2 is not None else stripped.rank_total
        if k1 != k2:
            raise MatroidError(
                "internal check failed: kappa changed after removing loops")
    if value is None:
        return ConnectivityResult(value=M.rank_total, witness=None)
    return ConnectivityResult(value=value, witness=witness)


def flats_cover(M: Matroid, count: int, slack: int
                ) -> Optional[List[Tuple[str, ...]]]:
    """Up to `count` proper flats leaving at most `slack` elements uncovered.

    Returns one witness list of flats (as label tuples) or None.  Only
    hyperplanes need to be searched: any proper flat lies inside one, and
    the larger flat never uncovers anything.
    """
    n = M.ground.n
    if count < 1:
        raise ValueError("count must be positive")
    if n == 0:
        return []
    hyps = M.hyperplanes()
    if not hyps:
        return None
    if comb(len(hyps) + count - 1, count) > 2_000_000:
        raise BudgetExceeded(
            "flat-cover search over %d hyperplanes choose %d is too large"
            % (len(hyps), count))
    full = M.ground.full
    hyps.sort(key=popcount, reverse=True)
    for combo in combinations_with_replacement(hyps, count):
        u = 0
        for h in combo:
            u |= h
        if popcount(full & ~u) <= slack:
            chosen = sorted(set(combo), key=popcount)
            return [M.ground.labels_of(h) for h in chosen]
    return None


def two_flats_cover_plus_one(M: Matroid
                             ) -> Tuple[bool, Optional[List[Tuple[str, ...]]]]:
    """Do two proper flats cover all but at most one element?"""
    w = flats_cover(M, 2, 1)
    return w is not None, w


@dataclass(frozen=True)
class ScalingCheck:
    """One side of a connectivity scaling report."""

    name: str
    applicable: bool
    reason: Optional[str]
    base_value: Optional[int]
    expected: Optional[int]
    computed: Optional[int]

    @property
    def match(self) -> Optional[bool]:
        if not self.applicable:
            return None
        return self.expected == self.computed

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "applicable": self.applicable,
            "reason": self.reason,
            "base_value": self.base_value,
            "expected": self.expected,
            "computed": self.computed,
            "match": self.match,
        }


def kappa_scaling_check(M: Matroid, t: int, threads: int = 1
                        ) -> List[ScalingCheck]:
    """Check tau and kappa scaling under t-expansion.

    tau(M^t) = t(tau(M)-1)+1 whenever tau(M) is finite, and
    kappa(M^t) = t(kappa(M)-1)+1 whenever kappa(M) < r(M).  Sides whose
    hypothesis fails are reported as skipped, with the observed value of
    the expansion still recorded.
    """
    Mt, _ = expand(M, t)
    out = []

    tau = tutte_connectivity(M, threads)
    tau_t = tutte_connectivity(Mt, threads)
    if tau.is_infinite:
        out.append(ScalingCheck(
            name="tau", applicable=False,
            reason="tau(M) is infinite; the scaling theorem needs a finite "
                   "value",
            base_value=None, expected=None,
            computed=tau_t.value))
    else:
        out.append(ScalingCheck(
            name="tau", applicable=True, reason=None,
            base_value=tau.value,
            expected=t * (tau.value - 1) + 1,
            computed=tau_t.value))

    kap = vertical_connectivity(M, threads)
    kap_t = vertical_connectivity(Mt, threads)
    if kap.value >= M.rank_total:
        out.append(ScalingCheck(
            name="kappa", applicable=False,
            reason="kappa(M) = r(M); the scaling theorem needs "
                   "kappa(M) < r(M)",
            base_value=kap.value, expected=None,
            computed=kap_t.value))
    else:
        out.append(ScalingCheck(
            name="kappa", applicable=True, reason=None,
            base_value=kap.value,
            expected=t * (kap.value - 1) + 1,
            computed=kap_t.value))
    return out
