"""Matroids represented by their lattice of cyclic flats.

A matroid is stored as a ground set plus the family of cyclic flats with
their ranks.  This family, ordered by inclusion, is a lattice, and the rank
of an arbitrary subset X is recovered as

    r(X) = min { r(A) + |X - A| : A a cyclic flat }.

Subsets of the ground set are bitmasks over a fixed label order, so the
ground set is capped at 62 elements and the rank formula is a short loop
(or a vectorized numpy scan when a full 2^n table is wanted).

validate_axioms() is the only entry point that builds a Matroid from raw
data.  It checks, in order: that the family has a least and a greatest
member, that joins and meets computed by the closure/coloop rules stay in
the family and agree with the order-theoretic joins and meets, and then the
three rank axioms (Z1) r(least) = 0, (Z2) 0 < r(Y)-r(X) < |Y-X| for nested
pairs, (Z3) submodularity with the parallel-correction term on incomparable
pairs.  Violations raise with a witness attached; nothing is silently
repaired.
"""

from __future__ import annotations

import json
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    HasLoops,
    Z0Violation,
    Z1Violation,
    Z2Violation,
    Z3Violation,
)

MAX_GROUND = 62          # bitmask ground-set cap
TABLE_BUDGET = 22        # largest n for which 2^n rank tables are built
MINOR_BUDGET = 22        # largest surviving ground set for minors


def popcount(x: int) -> int:
    return bin(x).count("1")


class GroundSet:
    """An ordered tuple of distinct string labels with mask conversions."""

    __slots__ = ("labels", "index", "n", "full")

    def __init__(self, labels: Sequence[str]):
        labels = tuple(str(x) for x in labels)
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate ground-set labels")
        if len(labels) > MAX_GROUND:
            raise ValueError("ground set larger than %d elements" % MAX_GROUND)
        self.labels = labels
        self.index = {lab: i for i, lab in enumerate(labels)}
        self.n = len(labels)
        self.full = (1 << self.n) - 1

    def mask_of(self, elements: Iterable[str]) -> int:
        m = 0
        for e in elements:
            e = str(e)
            if e not in self.index:
                raise ValueError("unknown element %r" % e)
            m |= 1 << self.index[e]
        return m

    def labels_of(self, mask: int) -> tuple:
        return tuple(self.labels[i] for i in range(self.n) if mask >> i & 1)

    def __eq__(self, other):
        return isinstance(other, GroundSet) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return "GroundSet(%r)" % (self.labels,)


def _label_key(ground: GroundSet, mask: int):
    # canonical set order: by size, then lexicographically by label tuple
    return (popcount(mask), ground.labels_of(mask))


class Matroid:
    """A matroid given by its cyclic flats and their ranks.

    Instances are built through validate_axioms() (or the convenience
    constructors in this module); the raw __init__ trusts its input.
    zee is a tuple of (mask, rank) pairs sorted by (size, label order).
    """

    __slots__ = ("ground", "zee", "rank_total", "loops", "coloops",
                 "_rank_cache", "_table")

    def __init__(self, ground: GroundSet, zee: Sequence[tuple],
                 rank_cache: Optional[dict] = None):
        self.ground = ground
        self.zee = tuple(sorted(zee, key=lambda ar: _label_key(ground, ar[0])))
        self._rank_cache = dict(rank_cache) if rank_cache else {}
        self._table = None
        least = self.zee[0][0]
        for a, _ in self.zee:
            least &= a
        top = 0
        for a, _ in self.zee:
            top |= a
        self.loops = least
        self.coloops = ground.full & ~top
        self.rank_total = self.rank(ground.full)

    # -- rank and derived predicates ------------------------------------

    def rank(self, mask: int) -> int:
        got = self._rank_cache.get(mask)
        if got is not None:
            return got
        best = None
        for a, r in self.zee:
            v = r + popcount(mask & ~a)
            if best is None or v < best:
                best = v
        self._rank_cache[mask] = best
        return best

    def rank_of(self, elements: Iterable[str]) -> int:
        return self.rank(self.ground.mask_of(elements))

    def closure(self, mask: int) -> int:
        r = self.rank(mask)
        out = mask
        rest = self.ground.full & ~mask
        while rest:
            b = rest & -rest
            rest ^= b
            if self.rank(mask | b) == r:
                out |= b
        return out

    def is_flat(self, mask: int) -> bool:
        return self.closure(mask) == mask

    def is_cyclic(self, mask: int) -> bool:
        # no coloops in the restriction: dropping any element keeps the rank
        r = self.rank(mask)
        rest = mask
        while rest:
            b = rest & -rest
            rest ^= b
            if self.rank(mask ^ b) < r:
                return False
        return True

    def lam(self, mask: int) -> int:
        """Connectivity function lambda(X) = r(X) + r(E-X) - r(M)."""
        return (self.rank(mask) + self.rank(self.ground.full & ~mask)
                - self.rank_total)

    # -- whole-powerset tables -------------------------------------------

    def rank_table(self, threads: int = 1) -> np.ndarray:
        """Vector of r(X) for every mask X, built by a vectorized scan."""
        if self._table is not None:
            return self._table
        n = self.ground.n
        if n > TABLE_BUDGET:
            raise BudgetExceeded(
                "rank table needs 2^%d entries, budget is 2^%d"
                % (n, TABLE_BUDGET))
        masks = np.arange(1 << n, dtype=np.uint64)
        self._table = rank_of_mask_array(self, masks, threads=threads)
        return self._table

    def lam_table(self, threads: int = 1) -> np.ndarray:
        """Vector of lambda(X) for every mask X.

        The complement of mask X is full - X, so reversing the rank table
        lines complements up with their partners.
        """
        t = self.rank_table(threads=threads).astype(np.int64)
        return t + t[::-1] - int(self.rank_total)

    # -- structure --------------------------------------------------------

    def dual(self):
        """Dual matroid: complements of cyclic flats, corank function."""
        full = self.ground.full
        n = self.ground.n
        zee = [(full & ~a, (n - popcount(a)) + r - self.rank_total)
               for a, r in self.zee]
        return validate_axioms(zee, self.ground)

    def delete(self, mask: int):
        return self._minor(mask, 0)

    def contract(self, mask: int):
        return self._minor(0, mask)

    def minor(self, delete_mask: int, contract_mask: int):
        if delete_mask & contract_mask:
            raise ValueError("delete and contract sets overlap")
        return self._minor(delete_mask, contract_mask)

    def _minor(self, dmask: int, cmask: int):
        gone = dmask | cmask
        keep = [i for i in range(self.ground.n) if not gone >> i & 1]
        m = len(keep)
        if m > MINOR_BUDGET:
            raise BudgetExceeded(
                "minor recovery scans 2^%d subsets, budget is 2^%d"
                % (m, MINOR_BUDGET))
        sub = GroundSet([self.ground.labels[i] for i in keep])
        small = np.arange(1 << m, dtype=np.uint64)
        emb = np.zeros(1 << m, dtype=np.uint64)
        for j, pos in enumerate(keep):
            emb |= ((small >> np.uint64(j)) & np.uint64(1)) << np.uint64(pos)
        base = self.rank(cmask)
        table = rank_of_mask_array(self, emb | np.uint64(cmask)) - base
        zee = zee_from_rank_table(table, m)
        pairs = [(int(a), int(r)) for a, r in zee]
        return validate_axioms(pairs, sub)

    def components(self) -> list:
        """Connected components as masks (loops are singleton components)."""
        n = self.ground.n
        full = self.ground.full
        if n == 0:
            return []
        lam = self.lam_table()
        masks = np.arange(1 << n, dtype=np.uint64)
        # a component is a minimal nonempty union of lambda=0 blocks;
        # accumulate per element the intersection of all separators
        # containing it.
        zero = masks[(lam == 0)]
        comps = []
        seen = 0
        for i in range(n):
            if seen >> i & 1:
                continue
            bit = np.uint64(1 << i)
            cand = zero[(zero & bit) != 0]
            comp = full
            for v in cand.tolist():
                comp &= v
            comps.append(comp)
            seen |= comp
        return comps

    def is_connected(self) -> bool:
        if self.ground.n <= 1:
            return True
        return len(self.components()) == 1

    def connected_flats(self, proper: bool = True) -> list:
        """Connected flats with at least two elements, plus rank criteria.

        Returns masks of the connected flats of the matroid; loops make the
        notion degenerate, so they are rejected.  A connected flat with two
        or more elements has no coloops in its restriction, hence is a
        cyclic flat; singleton flats are connected too and are included.
        With proper=True the ground set itself is excluded.
        """
        if self.loops:
            raise HasLoops("connected flats are only computed for loopless "
                           "matroids")
        out = []
        for a, _ in self.zee:
            if a == 0:
                continue
            if proper and a == self.ground.full:
                continue
            if restriction_is_connected(self, a):
                out.append(a)
        # singleton closures that are flats (no parallel partner, no loops)
        for i in range(self.ground.n):
            b = 1 << i
            if self.closure(b) == b and (not proper or b != self.ground.full):
                if b not in out:
                    out.append(b)
        out.sort(key=lambda msk: _label_key(self.ground, msk))
        return out

    def hyperplanes(self) -> list:
        """Masks of rank (r-1) flats, via a table scan."""
        n = self.ground.n
        table = self.rank_table()
        masks = np.arange(1 << n, dtype=np.uint64)
        isflat = np.ones(1 << n, dtype=bool)
        for b in range(n):
            bit = np.uint64(1 << b)
            absent = (masks & bit) == 0
            grown = (masks[absent] | bit).astype(np.int64)
            isflat[absent] &= table[grown] > table[masks[absent].astype(np.int64)]
        want = isflat & (table == self.rank_total - 1)
        return [int(v) for v in masks[want]]

    def clonal_classes(self) -> list:
        """Partition of E into clonal classes, as masks.

        Two elements are clones when swapping them is an automorphism; with
        the cyclic-flat representation that is exactly "the two elements lie
        in the same members of the family".
        """
        sig = {}
        for i in range(self.ground.n):
            pattern = tuple((a >> i) & 1 for a, _ in self.zee)
            sig.setdefault(pattern, 0)
            sig[pattern] |= 1 << i
        out = sorted(sig.values(),
                     key=lambda msk: _label_key(self.ground, msk))
        return out

    # -- comparisons and conversions --------------------------------------

    def equals(self, other: "Matroid") -> bool:
        """Equality as labeled matroids (ground order may differ)."""
        if set(self.ground.labels) != set(other.ground.labels):
            return False
        mine = {(frozenset(self.ground.labels_of(a)), r) for a, r in self.zee}
        theirs = {(frozenset(other.ground.labels_of(a)), r)
                  for a, r in other.zee}
        return mine == theirs

    def relabel(self, mapping: dict) -> "Matroid":
        """Rename elements; mapping must be injective on the labels."""
        new = [str(mapping.get(lab, lab)) for lab in self.ground.labels]
        ground = GroundSet(new)   # raises on collisions
        return Matroid(ground, self.zee)

    def restriction(self, mask: int):
        return self.delete(self.ground.full & ~mask)

    def to_json_dict(self) -> dict:
        flats = [(sorted(self.ground.labels_of(a)), int(r))
                 for a, r in self.zee]
        flats.sort(key=lambda sr: (len(sr[0]), sr[0]))
        return {
            "elements": list(self.ground.labels),
            "cyclic_flats": [{"set": s, "rank": r} for s, r in flats],
        }

    def to_json(self, pretty: bool = False) -> str:
        d = self.to_json_dict()
        if pretty:
            return json.dumps(d, indent=2)
        return json.dumps(d)

    def __repr__(self):
        return "Matroid(n=%d, r=%d, cyclic_flats=%d)" % (
            self.ground.n, self.rank_total, len(self.zee))


# -- vectorized helpers ----------------------------------------------------

def rank_of_mask_array(M: Matroid, masks: np.ndarray,
                       threads: int = 1) -> np.ndarray:
    """Evaluate the cyclic-flat rank formula on an array of masks."""
    masks = masks.astype(np.uint64, copy=False)
    if threads > 1 and masks.size >= (1 << 16):
        from concurrent.futures import ThreadPoolExecutor
        chunks = np.array_split(masks, threads)
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda c: rank_of_mask_array(M, c), chunks))
        return np.concatenate(parts)
    out = np.full(masks.shape, 255, dtype=np.uint8)
    for a, r in M.zee:
        cand = np.bitwise_count(masks & np.uint64(M.ground.full & ~a))
        cand += np.uint8(r)
        np.minimum(out, cand.astype(np.uint8), out=out)
    return out.astype(np.int64)


def zee_from_rank_table(table: np.ndarray, n: int) -> list:
    """Recover the (mask, rank) pairs of cyclic flats from a full table."""
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    isflat = np.ones(size, dtype=bool)
    iscyc = np.ones(size, dtype=bool)
    for b in range(n):
        bit = 1 << b
        has = (masks & bit) != 0
        wo = masks[~has]
        isflat[~has] &= table[wo | bit] > table[wo]
        wi = masks[has]
        iscyc[has] &= table[wi ^ bit] == table[wi]
    both = np.nonzero(isflat & iscyc)[0]
    return [(int(i), int(table[i])) for i in both]


def restriction_is_connected(M: Matroid, mask: int) -> bool:
    """Is M restricted to mask connected?  Direct lambda scan on the
    restriction's subsets, without constructing the minor."""
    k = popcount(mask)
    if k <= 1:
        return True
    bits = [i for i in range(M.ground.n) if mask >> i & 1]
    total = M.rank(mask)
    # lambda_{M|mask}(Y) = r(Y) + r(mask - Y) - r(mask)
    for sub in range(1, 1 << (k - 1)):
        y = 0
        for j in range(k):
            if sub >> j & 1:
                y |= 1 << bits[j]
        if M.rank(y) + M.rank(mask & ~y) - total == 0:
            return False
    return True


# -- validation -------------------------------------------------------------

def validate_axioms(flats, ground) -> Matroid:
    """Check the cyclic-flat axioms and build the matroid.

    flats: iterable of (mask, rank) pairs, or of ({labels}, rank) pairs.
    ground: a GroundSet or a sequence of labels.

    Raises Z0Violation / Z1Violation / Z2Violation / Z3Violation with a
    witness, or ValueError for malformed input (duplicates, bad ranks,
    sets outside the ground set).
    """
    if not isinstance(ground, GroundSet):
        ground = GroundSet(ground)
    recs = []
    for item in flats:
        a, r = item
        if not isinstance(a, int):
            a = ground.mask_of(a)
        if a & ~ground.full:
            raise ValueError("cyclic flat outside the ground set")
        if not isinstance(r, int) or isinstance(r, bool) or r < 0:
            raise ValueError("ranks must be nonnegative integers")
        recs.append((a, r))
    if not recs:
        raise ValueError("the family of cyclic flats must be nonempty")
    seen = {}
    for a, r in recs:
        if a in seen and seen[a] != r:
            raise ValueError("the same set listed with two ranks")
        seen[a] = r
    recs = sorted(seen.items(), key=lambda ar: _label_key(ground, ar[0]))

    masks = [a for a, _ in recs]
    meet_all = masks[0]
    join_all = 0
    for a in masks:
        meet_all &= a
        join_all |= a
    byset = dict(recs)
    if meet_all not in byset:
        raise Z0Violation("no least member: the intersection of the family "
                          "is not in the family",
                          witness=ground.labels_of(meet_all))
    if join_all not in byset:
        raise Z0Violation("no greatest member: the union of the family is "
                          "not in the family",
                          witness=ground.labels_of(join_all))

    cache = {}

    def crank(x: int) -> int:
        got = cache.get(x)
        if got is not None:
            return got
        best = None
        for a, r in recs:
            v = r + popcount(x & ~a)
            if best is None or v < best:
                best = v
        cache[x] = best
        return best

    def rule_join(u: int) -> int:
        ru = crank(u)
        out = u
        rest = ground.full & ~u
        while rest:
            b = rest & -rest
            rest ^= b
            if crank(u | b) == ru:
                out |= b
        return out

    def rule_meet(s: int) -> int:
        rs = crank(s)
        drop = 0
        rest = s
        while rest:
            b = rest & -rest
            rest ^= b
            if crank(s ^ b) < rs:
                drop |= b
        return s & ~drop

    # (Z1) least member has rank zero
    if byset[meet_all] != 0:
        raise Z1Violation(
            "least member %s has rank %d, expected 0"
            % (sorted(ground.labels_of(meet_all)), byset[meet_all]),
            witness=ground.labels_of(meet_all))

    # (Z2) strict, properly submaximal growth on nested pairs
    for i, (x, rx) in enumerate(recs):
        for y, ry in recs:
            if x == y or (x & ~y):
                continue
            gap = ry - rx
            if not (0 < gap < popcount(y & ~x)):
                raise Z2Violation(
                    "nested pair %s < %s has rank gap %d over %d new "
                    "elements" % (sorted(ground.labels_of(x)),
                                  sorted(ground.labels_of(y)), gap,
                                  popcount(y & ~x)),
                    witness=(ground.labels_of(x), ground.labels_of(y)))

    # (Z0) joins and meets: computed by the rules, must land in the family
    # and must be the order-theoretic join/meet there.
    # (Z3) on the same pair sweep (incomparable pairs suffice).
    m = len(recs)
    for i in range(m):
        x, rx = recs[i]
        for j in range(i + 1, m):
            y, ry = recs[j]
            if (x & ~y) == 0 or (y & ~x) == 0:
                continue   # comparable: join/meet trivial, (Z3) automatic
            jn = rule_join(x | y)
            rj = byset.get(jn)
            if rj is None:
                raise Z0Violation(
                    "join of %s and %s computed as %s, which is not in the "
                    "family" % (sorted(ground.labels_of(x)),
                                sorted(ground.labels_of(y)),
                                sorted(ground.labels_of(jn))),
                    witness=(ground.labels_of(x), ground.labels_of(y)))
            for z in masks:
                if (x & ~z) == 0 and (y & ~z) == 0 and (jn & ~z):
                    raise Z0Violation(
                        "family member %s is an upper bound of %s and %s "
                        "but does not contain their computed join"
                        % (sorted(ground.labels_of(z)),
                           sorted(ground.labels_of(x)),
                           sorted(ground.labels_of(y))),
                        witness=(ground.labels_of(x), ground.labels_of(y),
                                 ground.labels_of(z)))
            mt = rule_meet(x & y)
            rm = byset.get(mt)
            if rm is None:
                raise Z0Violation(
                    "meet of %s and %s computed as %s, which is not in the "
                    "family" % (sorted(ground.labels_of(x)),
                                sorted(ground.labels_of(y)),
                                sorted(ground.labels_of(mt))),
                    witness=(ground.labels_of(x), ground.labels_of(y)))
            for z in masks:
                if (z & ~x) == 0 and (z & ~y) == 0 and (z & ~mt):
                    raise Z0Violation(
                        "family member %s is a lower bound of %s and %s "
                        "but is not contained in their computed meet"
                        % (sorted(ground.labels_of(z)),
                           sorted(ground.labels_of(x)),
                           sorted(ground.labels_of(y))),
                        witness=(ground.labels_of(x), ground.labels_of(y),
                                 ground.labels_of(z)))
            correction = popcount((x & y) & ~mt)
            if rj + rm + correction > rx + ry:
                raise Z3Violation(
                    "pair %s, %s: r(join)+r(meet)+%d = %d exceeds "
                    "r(X)+r(Y) = %d"
                    % (sorted(ground.labels_of(x)),
                       sorted(ground.labels_of(y)), correction,
                       rj + rm + correction, rx + ry),
                    witness=(ground.labels_of(x), ground.labels_of(y)))

    return Matroid(ground, recs, rank_cache=cache)


# -- constructors -----------------------------------------------------------

def uniform(r: int, n: int, labels: Optional[Sequence[str]] = None) -> Matroid:
    """The uniform matroid U_{r,n}."""
    if labels is None:
        labels = [str(i + 1) for i in range(n)]
    ground = GroundSet(labels)
    if len(labels) != n:
        raise ValueError("label count does not match n")
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    if r == 0:
        zee = [(ground.full, 0)]
    elif r == n:
        zee = [(0, 0)]
    else:
        zee = [(0, 0), (ground.full, r)]
    return validate_axioms(zee, ground)


def is_uniform(M: Matroid) -> Optional[tuple]:
    """Return (r, n) when M is uniform, else None."""
    n = M.ground.n
    r = M.rank_total
    if r == 0:
        return (0, n) if M.zee == ((M.ground.full, 0),) else None
    if r == n:
        return (r, n) if M.zee == ((0, 0),) else None
    want = tuple(sorted([(0, 0), (M.ground.full, r)]))
    have = tuple(sorted(M.zee))
    return (r, n) if want == have else None


def from_json_dict(obj: dict) -> Matroid:
    try:
        elements = obj["elements"]
        flats = [(set(f["set"]), int(f["rank"]))
                 for f in obj["cyclic_flats"]]
    except (KeyError, TypeError) as exc:
        raise ValueError("malformed matroid JSON: %s" % exc)
    return validate_axioms(flats, elements)


def from_json(text: str) -> Matroid:
    return from_json_dict(json.loads(text))
