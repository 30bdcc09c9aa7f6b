"""Branch decompositions, exact branch-width, tangles, certificates.

A branch decomposition is a cubic tree whose leaves are injectively
labeled by ground elements; each tree edge displays the bipartition of
labels induced by removing it, with width lambda(X)+1, and the width of
the decomposition is the maximum over edges.  Branch-width is the minimum
width over all decompositions.

branch_width_exact runs the subset dynamic program

    g(X) = lambda(X)+1                                 for |X| = 1
    g(X) = max(lambda(X)+1,
               min over bipartitions {A,B} of X of max(g(A), g(B)))

whose top value g(E) is the branch-width; an optimal decomposition is
reconstructed from the stored splits.  The partition sweep costs Theta(3^n),
so the exact path is budgeted at n <= 18.

Beyond the budget, a width is certified: an explicit decomposition gives
the upper bound, and a verified tangle of order k gives the lower bound k
(the maximum order of a tangle equals the branch-width).  Tangle axioms
over families like {X : r(X) < c} are verified by vectorized full-table
scans; the three-sets axiom (T3) reduces to pairs of maximal members plus
a "some member contains the remainder" table.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .core import GroundSet, Matroid, popcount
from .errors import (
    BudgetExceeded,
    InvalidTangle,
    MalformedTree,
    MatroidError,
)
from .connectivity import flats_cover
from .expansion import ExpansionMap

DP_BUDGET = 18
TANGLE_BUDGET = 20


# -- branch decompositions --------------------------------------------------

@dataclass(frozen=True)
class BranchDecomposition:
    """A tree with labeled leaves; unlabeled leaves are normalized away."""

    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...]
    leaf_labels: Dict[str, str]      # ground label -> vertex id

    @classmethod
    def build(cls, vertices, edges, leaf_labels) -> "BranchDecomposition":
        return cls(tuple(str(v) for v in vertices),
                   tuple((str(a), str(b)) for a, b in edges),
                   {str(k): str(v) for k, v in leaf_labels.items()})

    def to_json_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [[a, b] for a, b in self.edges],
            "leaf_labels": dict(sorted(self.leaf_labels.items())),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "BranchDecomposition":
        try:
            return cls.build(obj["vertices"],
                             [tuple(e) for e in obj["edges"]],
                             obj["leaf_labels"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedTree("malformed decomposition JSON: %s" % exc)

    def normalized(self, ground: GroundSet):
        """Adjacency of the normalized tree, or raise MalformedTree.

        Checks the label map is a bijection onto leaves of the pruned
        tree, prunes unlabeled leaves, suppresses degree-2 vertices, and
        verifies the result is a cubic tree.
        """
        labels = set(ground.labels)
        if set(self.leaf_labels) != labels:
            missing = labels - set(self.leaf_labels)
            extra = set(self.leaf_labels) - labels
            raise MalformedTree(
                "leaf labels do not match the ground set "
                "(missing %s, extra %s)" % (sorted(missing), sorted(extra)))
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise MalformedTree("duplicate vertex ids")
        adj: Dict[str, set] = {v: set() for v in vs}
        for a, b in self.edges:
            if a not in vs or b not in vs:
                raise MalformedTree("edge endpoint %r is not a vertex"
                                    % (a if a not in vs else b))
            if a == b or b in adj[a]:
                raise MalformedTree("self-loop or repeated edge at %r" % a)
            adj[a].add(b)
            adj[b].add(a)
        if len(self.edges) != len(vs) - (1 if vs else 0):
            raise MalformedTree("edge count does not match a tree")
        labeled = {}
        for lab, v in self.leaf_labels.items():
            if v not in vs:
                raise MalformedTree("label %r points at unknown vertex %r"
                                    % (lab, v))
            if v in labeled.values():
                raise MalformedTree("vertex %r carries two labels" % v)
            labeled[lab] = v
        label_of = {v: lab for lab, v in labeled.items()}
        # prune unlabeled leaves, then suppress degree-2 vertices
        changed = True
        while changed:
            changed = False
            for v in list(adj):
                if len(adj[v]) <= 1 and v not in label_of:
                    if len(adj) == 1 and not label_of:
                        break
                    for u in list(adj[v]):
                        adj[u].discard(v)
                    del adj[v]
                    changed = True
            for v in list(adj):
                if len(adj[v]) == 2 and v not in label_of:
                    a, b = sorted(adj[v])
                    if b in adj[a]:
                        raise MalformedTree(
                            "suppressing %r would create a repeated edge"
                            % v)
                    adj[a].discard(v)
                    adj[b].discard(v)
                    adj[a].add(b)
                    adj[b].add(a)
                    del adj[v]
                    changed = True
        if not adj and ground.n > 0:
            raise MalformedTree("tree is empty but the ground set is not")
        if adj:
            seen = set()
            stack = [next(iter(adj))]
            while stack:
                v = stack.pop()
                if v in seen:
                    continue
                seen.add(v)
                stack.extend(adj[v])
            if seen != set(adj):
                raise MalformedTree("tree is not connected")
        for v, nb in adj.items():
            if v in label_of:
                if len(nb) > 1:
                    raise MalformedTree("labeled vertex %r is not a leaf" % v)
            elif len(nb) != 3:
                raise MalformedTree(
                    "internal vertex %r has degree %d, need 3"
                    % (v, len(nb)))
        for lab, v in labeled.items():
            if v not in adj:
                raise MalformedTree("labeled leaf %r was pruned away" % lab)
        return adj, labeled


def displayed_sets(D: BranchDecomposition, M: Matroid
                   ) -> List[Tuple[Tuple[str, str], int]]:
    """For each normalized tree edge, the mask displayed on one side."""
    adj, labeled = D.normalized(M.ground)
    vertex_label_mask = {}
    for lab, v in labeled.items():
        vertex_label_mask[v] = 1 << M.ground.index[lab]
    out = []
    edges = set()
    for v, nb in adj.items():
        for u in nb:
            if (u, v) in edges or (v, u) in edges:
                continue
            edges.add((v, u))
            # labels on the v side of edge (v,u)
            mask = 0
            stack = [v]
            seen = {u, v}
            while stack:
                w = stack.pop()
                mask |= vertex_label_mask.get(w, 0)
                for x in adj[w]:
                    if x not in seen:
                        seen.add(x)
                        stack.append(x)
            out.append(((v, u), mask))
    return out


def edge_widths(M: Matroid, D: BranchDecomposition
                ) -> List[Tuple[Tuple[str, str], int]]:
    return [(edge, M.lam(mask) + 1) for edge, mask in displayed_sets(D, M)]


def decomposition_width(M: Matroid, D: BranchDecomposition) -> int:
    """Max over edges of lambda(displayed)+1; |E| for ground sets of <=1."""
    if M.ground.n <= 1:
        D.normalized(M.ground)   # still insist the tree is well formed
        return M.ground.n
    return max(w for _, w in edge_widths(M, D))


# -- exact branch-width ------------------------------------------------------

def branch_width_exact(M: Matroid, budget: int = DP_BUDGET
                       ) -> Tuple[int, BranchDecomposition]:
    """Optimal width and a realizing decomposition, by subset DP."""
    n = M.ground.n
    if n > min(budget, 22):
        raise BudgetExceeded(
            "exact branch-width does Theta(3^%d) partition work, budget "
            "is n <= %d" % (n, min(budget, 22)))
    labels = M.ground.labels
    if n == 0:
        return 0, BranchDecomposition.build([], [], {})
    if n == 1:
        return 1, BranchDecomposition.build(["v0"], [], {labels[0]: "v0"})
    lam = M.lam_table().tolist()
    full = M.ground.full
    size = full + 1
    g = [0] * size
    split = [0] * size
    big = n + 2
    for x in range(1, size):
        if x & (x - 1) == 0:
            g[x] = lam[x] + 1
            continue
        best = big
        bestc = 0
        sub = (x - 1) & x
        while sub:
            c = x ^ sub
            if sub < c:
                break
            a = g[sub]
            b = g[c]
            v = a if a > b else b
            if v < best:
                best = v
                bestc = c
            sub = (sub - 1) & x
        lx = lam[x] + 1
        g[x] = best if best > lx else lx
        split[x] = bestc

    counter = [0]
    vertices: List[str] = []
    edges: List[Tuple[str, str]] = []
    leaf_labels: Dict[str, str] = {}

    def fresh() -> str:
        v = "v%d" % counter[0]
        counter[0] += 1
        vertices.append(v)
        return v

    def build(x: int) -> str:
        v = fresh()
        if x & (x - 1) == 0:
            leaf_labels[labels[x.bit_length() - 1]] = v
            return v
        c = split[x]
        edges.append((v, build(c)))
        edges.append((v, build(x ^ c)))
        return v

    top = split[full]
    a = build(top)
    b = build(full ^ top)
    edges.append((a, b))
    return g[full], BranchDecomposition.build(vertices, edges, leaf_labels)


# -- decomposition builders --------------------------------------------------

class _Ids:
    def __init__(self, prefix: str = "t"):
        self.n = 0
        self.prefix = prefix
        self.vertices: List[str] = []

    def fresh(self) -> str:
        v = "%s%d" % (self.prefix, self.n)
        self.n += 1
        self.vertices.append(v)
        return v


def _caterpillar(ids: _Ids, labs: Sequence[str], edges, leaf_labels) -> str:
    """Attachable caterpillar holding labs; returns its root vertex.

    The root has degree 2 inside the caterpillar when |labs| >= 2 (so it
    needs one more edge from the caller) and is the bare leaf when
    |labs| == 1.
    """
    if len(labs) == 1:
        v = ids.fresh()
        leaf_labels[labs[0]] = v
        return v
    spine = [ids.fresh() for _ in range(len(labs) - 1)]
    for i in range(len(spine) - 1):
        edges.append((spine[i], spine[i + 1]))
    for i, s in enumerate(spine):
        leaf = ids.fresh()
        leaf_labels[labs[i]] = leaf
        edges.append((s, leaf))
    last_leaf = ids.fresh()
    leaf_labels[labs[-1]] = last_leaf
    edges.append((spine[-1], last_leaf))
    return spine[0]


def caterpillar_decomposition(labels: Sequence[str]) -> BranchDecomposition:
    """A path-shaped decomposition with the labels in the given order."""
    labels = [str(x) for x in labels]
    ids = _Ids()
    edges: List[Tuple[str, str]] = []
    leaf_labels: Dict[str, str] = {}
    if not labels:
        return BranchDecomposition.build([], [], {})
    if len(labels) <= 2:
        for lab in labels:
            leaf_labels[lab] = ids.fresh()
        if len(labels) == 2:
            edges.append((ids.vertices[0], ids.vertices[1]))
        return BranchDecomposition.build(ids.vertices, edges, leaf_labels)
    root = _caterpillar(ids, labels[1:], edges, leaf_labels)
    first = ids.fresh()
    leaf_labels[labels[0]] = first
    edges.append((first, root))
    return BranchDecomposition.build(ids.vertices, edges, leaf_labels)


def fan_decomposition(groups: Sequence[Sequence[str]]) -> BranchDecomposition:
    """Center vertex with three caterpillar arms, one per group."""
    groups = [[str(x) for x in grp] for grp in groups if grp]
    if len(groups) != 3:
        raise ValueError("fan decomposition needs exactly three nonempty "
                         "groups")
    ids = _Ids()
    edges: List[Tuple[str, str]] = []
    leaf_labels: Dict[str, str] = {}
    center = ids.fresh()
    for grp in groups:
        root = _caterpillar(ids, grp, edges, leaf_labels)
        edges.append((center, root))
    return BranchDecomposition.build(ids.vertices, edges, leaf_labels)


def expand_decomposition(D: BranchDecomposition, emap: ExpansionMap
                         ) -> BranchDecomposition:
    """Decomposition for the expansion: each leaf grows a block caterpillar.

    The old leaf vertex becomes the head of a spine carrying the t block
    labels, so every edge of the old tree now displays S_X for its old
    displayed set X, and block-internal edges display subsets of one
    block.  The width therefore scales as t*(w-1)+1, which callers assert
    via decomposition_width.
    """
    base = emap.base_ground
    adj, labeled = D.normalized(base)
    t = emap.t
    if t == 1:
        return D
    if base.n == 0:
        return BranchDecomposition.build([], [], {})
    if base.n == 1:
        return caterpillar_decomposition(emap.blocks[base.labels[0]])
    vertices = list(adj.keys())
    edges: List[Tuple[str, str]] = []
    seen = set()
    for v, nb in adj.items():
        for u in nb:
            if (u, v) not in seen:
                seen.add((v, u))
                edges.append((v, u))
    prefix = "x"
    while any(v.startswith(prefix) for v in vertices):
        prefix += "x"
    ids = _Ids(prefix)
    leaf_labels: Dict[str, str] = {}
    for lab in base.labels:
        head = labeled[lab]
        blk = emap.blocks[lab]
        spine = [head] + [ids.fresh() for _ in range(t - 2)]
        for i in range(len(spine) - 1):
            edges.append((spine[i], spine[i + 1]))
        for i, s in enumerate(spine):
            leaf = ids.fresh()
            leaf_labels[blk[i]] = leaf
            edges.append((s, leaf))
        last = ids.fresh()
        leaf_labels[blk[-1]] = last
        edges.append((spine[-1], last))
    vertices.extend(ids.vertices)
    return BranchDecomposition.build(vertices, edges, leaf_labels)


# -- tangles -----------------------------------------------------------------

@dataclass(frozen=True)
class RankBelow:
    """Descriptor for the family {X : r(X) < c}."""

    c: int

    def describe(self) -> str:
        return "rank-lt:%d" % self.c


@dataclass(frozen=True)
class Tangle:
    """A claimed tangle: an order plus members (explicit or described)."""

    order: int
    members: Union[Tuple[int, ...], RankBelow]

    def describe(self) -> str:
        if isinstance(self.members, RankBelow):
            return self.members.describe()
        return "explicit:%d sets" % len(self.members)


def rank_bounded_family(M: Matroid, c: int) -> RankBelow:
    """The family {X : r(X) < c} as a lazy descriptor."""
    if not 0 < c <= M.rank_total + 1:
        raise ValueError("rank bound %d is outside 1..r(M)+1" % c)
    return RankBelow(c)


def _member_table(M: Matroid, members, size: int) -> np.ndarray:
    if isinstance(members, RankBelow):
        return M.rank_table() < members.c
    memb = np.zeros(size, dtype=bool)
    for x in members:
        if x < 0 or x >= size:
            raise ValueError("tangle member outside the ground set")
        memb[x] = True
    return memb


def verify_tangle(M: Matroid, tangle: Tangle, threads: int = 1
                  ) -> Tuple[bool, Optional[dict]]:
    """Check the four tangle axioms; (ok, witness-of-violation).

    (T1) every member X has lambda(X) < k-1;
    (T2) every X with lambda(X) < k-1 has X or E-X among the members;
    (T3) no three members cover E -- reduced to pairs of inclusion-maximal
         members plus a superset-membership table;
    (T4) no member is the complement of a single element.
    """
    n = M.ground.n
    if n > TANGLE_BUDGET:
        raise BudgetExceeded(
            "tangle verification scans 2^%d subsets, budget is 2^%d"
            % (n, TANGLE_BUDGET))
    k = tangle.order
    if k < 1:
        return False, {"axiom": "order", "detail": "order must be >= 1"}
    size = 1 << n
    full = M.ground.full
    ranks = M.rank_table(threads=threads).astype(np.int64)
    lam = ranks + ranks[::-1] - int(M.rank_total)
    memb = _member_table(M, tangle.members, size)

    def labels(x: int):
        return sorted(M.ground.labels_of(int(x)))

    viol = memb & (lam >= k - 1)
    if viol.any():
        x = int(np.nonzero(viol)[0][0])
        return False, {"axiom": "T1", "set": labels(x),
                       "lambda": int(lam[x]), "order": k}
    viol = (lam < k - 1) & ~(memb | memb[::-1])
    if viol.any():
        x = int(np.nonzero(viol)[0][0])
        return False, {"axiom": "T2", "set": labels(x),
                       "lambda": int(lam[x]), "order": k}
    # inclusion-maximal members and a "some member contains X" table
    idx = np.arange(size, dtype=np.int64)
    mx = memb.copy()
    sup = memb.copy()
    for b in range(n):
        lower = np.nonzero((idx >> b) & 1 == 0)[0]
        mx[lower] &= ~memb[lower | (1 << b)]
        sup[lower] |= sup[lower | (1 << b)]
    maximal = np.nonzero(mx)[0]
    for x in maximal.tolist():
        rest = full & ~(x | maximal)
        bad = sup[rest]
        if bad.any():
            y = int(maximal[int(np.nonzero(bad)[0][0])])
            need = full & ~(x | y)
            z = next(int(m) for m in np.nonzero(memb)[0]
                     if need & ~int(m) == 0)
            return False, {"axiom": "T3", "sets": [labels(x), labels(y),
                                                   labels(z)]}
    for i in range(n):
        if memb[full ^ (1 << i)]:
            return False, {"axiom": "T4",
                           "element": M.ground.labels[i]}
    if k >= 3:
        missing = (ranks < k - 1) & ~memb
        if missing.any():
            raise MatroidError(
                "internal check failed: a verified tangle of order >= 3 "
                "must contain every set of rank below order-1")
    return True, None


# -- certificates ------------------------------------------------------------

@dataclass(frozen=True)
class WidthCertificate:
    """Two-sided branch-width certificate.

    lower_order <= bw(M) <= upper_width always holds once both halves are
    verified (a tangle of order k forces bw >= k; a decomposition of width
    w shows bw <= w); exact is true when the bounds meet.
    """

    upper_width: int
    lower_order: int
    decomposition: BranchDecomposition
    tangle: Tangle

    @property
    def exact(self) -> bool:
        return self.upper_width == self.lower_order

    @property
    def value(self) -> Optional[int]:
        return self.upper_width if self.exact else None

    def to_json_dict(self) -> dict:
        return {
            "exact": self.exact,
            "value": self.value,
            "bounds": [self.lower_order, self.upper_width],
            "upper": {"width": self.upper_width,
                      "decomposition": self.decomposition.to_json_dict()},
            "lower": {"order": self.lower_order,
                      "tangle": self.tangle.describe()},
        }


def branch_width_certified(M: Matroid, upper: BranchDecomposition,
                           lower: Tangle, threads: int = 1
                           ) -> WidthCertificate:
    """Verify both halves and combine them into a WidthCertificate."""
    width = decomposition_width(M, upper)
    ok, witness = verify_tangle(M, lower, threads=threads)
    if not ok:
        raise InvalidTangle("tangle verification failed: %r" % (witness,))
    if lower.order > width:
        raise MatroidError(
            "internal check failed: verified tangle order %d exceeds a "
            "verified decomposition width %d" % (lower.order, width))
    return WidthCertificate(upper_width=width, lower_order=lower.order,
                            decomposition=upper, tangle=lower)


# -- three-flat covers -------------------------------------------------------

def three_flats_cover(M: Matroid, slack: int
                      ) -> Tuple[bool, Optional[list]]:
    """Do three proper flats cover all but at most `slack` elements?"""
    w = flats_cover(M, 3, slack)
    return w is not None, w


def three_flats_cover_plus_two(M: Matroid) -> Tuple[bool, Optional[list]]:
    return three_flats_cover(M, 2)
