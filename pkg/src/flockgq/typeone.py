"""Type I hemisystems: the base-line partition, the construction, its
invariant group T, hemisystem verification, and strongly regular graphs.

Given a base line l' of W(3,q) disjoint from the BLT-set, each BLT line pi
produces q+1 totally isotropic lines <Y, Y-perp meet pi> (one per point Y
of l'); two BLT lines are related when those line sets are equal or
disjoint, which splits the BLT-set into two halves.  Lifting l' into
P-perp, the q+1 planes on it (sorted canonically, indexed 1..q+1) carry a
subset S of size (q-1)/2 avoiding <P, l>, and the hemisystem is the chosen
half of the BLT planes plus the type (a) lines attached to that half
through an S-plane plus those attached to the other half through the
complementary planes.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .blt import BLTSet, w3_form, w3_ti_lines
from .errors import DomainError
from .gf import field_for_order
from . import linalg as la
from .linalg import Subspace
from .knarr import (
    FlockGQ,
    LINE_A,
    P_VECTOR,
    e_matrix,
    project_w5_vector,
    ti_planes_on_line,
)
from .maps import SemilinearMap, induced_permutations


@dataclass(frozen=True)
class Hemisystem:
    q: int
    line_indices: tuple[int, ...]
    provenance: dict

    def __post_init__(self):
        object.__setattr__(self, "line_indices", tuple(sorted(self.line_indices)))

    @property
    def size(self) -> int:
        return len(self.line_indices)


@dataclass(frozen=True)
class BLTPartition:
    base_line: Subspace
    plus: tuple[int, ...]
    minus: tuple[int, ...]


@dataclass(frozen=True)
class SRGParams:
    v: int
    k: int
    lam: int
    mu: int

    def identity_holds(self) -> bool:
        return self.k * (self.k - self.lam - 1) == (self.v - self.k - 1) * self.mu


# ---------------------------------------------------------------------------
# Lemma: base lines and the two-class partition


def admissible_base_lines(B: BLTSet) -> list[Subspace]:
    """Totally isotropic lines of W(3,q) disjoint from every BLT line."""
    F = B.field()
    out = [
        m
        for m in w3_ti_lines(B.q)
        if all(la.intersection_dim(F, m, ln) == 0 for ln in B.lines)
    ]
    return out


def projection_lines(F, B: BLTSet, pi: Subspace, lprime: Subspace) -> frozenset:
    """{<Y, Y-perp meet pi> : Y in l'} as canonical W(3,q) lines."""
    J4 = w3_form(F)
    lines = set()
    for y in _projective_vectors(F, lprime):
        yperp = la.perp(F, Subspace(4, 1, (y,)), J4)
        x = la.intersection(F, yperp, pi)
        if x.k != 1:
            raise DomainError("base line meets a BLT line")
        lines.add(la.canonicalize(F, [y, x.rows[0]]))
    if len(lines) != B.q + 1:
        raise AssertionError("projection lines are not distinct")
    return frozenset(lines)


def _projective_vectors(F, space: Subspace):
    seen = set()
    for v in space.vectors(F):
        lead = next((j for j, a in enumerate(v) if a), None)
        if lead is None:
            continue
        w = la.vec_scale(F, F.inv(v[lead]), v)
        if w not in seen:
            seen.add(w)
            yield w


def blt_partition(B: BLTSet, lprime: Subspace) -> BLTPartition:
    """Split the BLT-set by the equal-or-disjoint relation on its
    projection line sets; asserts the two-equal-classes structure."""
    F = B.field()
    if any(la.intersection_dim(F, lprime, ln) != 0 for ln in B.lines):
        raise DomainError("base line must avoid every BLT line")
    sets = [projection_lines(F, B, pi, lprime) for pi in B.lines]
    n = len(sets)
    disjoint = [[not (sets[i] & sets[j]) for j in range(n)] for i in range(n)]
    plus = tuple(j for j in range(n) if j == 0 or disjoint[0][j])
    minus = tuple(j for j in range(n) if j not in plus)
    half = (B.q + 1) // 2
    if len(plus) != half or len(minus) != half:
        raise AssertionError("partition classes have unequal sizes")
    for cls in (plus, minus):
        for i in cls:
            for j in cls:
                if i != j and not disjoint[i][j]:
                    raise AssertionError("relation is not transitive")
    for i in plus:
        for j in minus:
            if disjoint[i][j]:
                raise AssertionError("relation is not transitive")
    return BLTPartition(base_line=lprime, plus=plus, minus=minus)


# ---------------------------------------------------------------------------
# the construction


def project_line(F, ell: Subspace) -> Subspace:
    if any(r[-1] != 0 for r in ell.rows):
        raise DomainError("line must lie in P-perp (last coordinate zero)")
    proj = [project_w5_vector(r) for r in ell.rows]
    if la.mat_rank(F, proj) != 2:
        raise DomainError("line passes through P")
    return la.canonicalize(F, proj)


def planes_on_base_line(G: FlockGQ, ell: Subspace):
    """(sorted planes on ell, 1-based index of <P, ell>)."""
    F = G.F
    J6 = la.symplectic_j6(F)
    if ell.k != 2 or ell.n != 6:
        raise DomainError("base line must be a line of W(5,q)")
    for u in ell.rows:
        for v in ell.rows:
            if la.beta(F, J6.gram, u, v) != 0:
                raise DomainError("base line must be totally isotropic")
    planes = ti_planes_on_line(F, J6, ell)
    p_idx = next(
        i for i, s in enumerate(planes) if s.contains_vector(F, P_VECTOR)
    )
    return planes, p_idx + 1


def typeone_build(
    G: FlockGQ, ell: Subspace, S, orientation: str = "+"
) -> Hemisystem:
    """Theorem construction: O-half plus the matching type (a) lines."""
    F = G.F
    q = G.q
    B = G.blt
    if orientation not in ("+", "-"):
        raise DomainError("orientation must be '+' or '-'")
    for pi_rows in (G.lines[j] for j in G.blt_plane_line_ids()):
        if la.intersection_dim(F, ell, pi_rows) != 0:
            raise DomainError("base line meets a BLT plane")
    planes, p_planeidx = planes_on_base_line(G, ell)
    S = frozenset(S)
    if len(S) != (q - 1) // 2:
        raise DomainError(f"S must have size {(q-1)//2}")
    if not S <= set(range(1, q + 2)) or p_planeidx in S:
        raise DomainError(
            f"S must be a subset of 1..{q+1} avoiding the <P,l> index {p_planeidx}"
        )

    lprime = project_line(F, ell)
    part = blt_partition(B, lprime)
    plus, minus = part.plus, part.minus
    if orientation == "-":
        plus, minus = minus, plus

    # map BLT plane line-ids to positions in B.lines via projection mod P
    blt_ids = G.blt_plane_line_ids()
    plane_to_pos = {}
    for j in blt_ids:
        proj = [project_w5_vector(r) for r in G.lines[j].rows]
        w3 = la.canonicalize(F, [r for r in proj if any(r)])
        plane_to_pos[j] = next(i for i, ln in enumerate(B.lines) if ln == w3)

    member: list[int] = [j for j in blt_ids if plane_to_pos[j] in plus]

    r_planes = [(i + 1, s) for i, s in enumerate(planes) if i + 1 != p_planeidx]
    for j in range(G.n_lines):
        if G.line_types[j] != LINE_A:
            continue
        rho = G.lines[j]
        hits = [idx for idx, s in r_planes if la.intersection_dim(F, rho, s) >= 1]
        if len(hits) != 1:
            raise AssertionError(
                f"type (a) line {j} meets {len(hits)} planes on the base line"
            )
        cls_plus = plane_to_pos[G.attached_plane[j]] in plus
        in_S = hits[0] in S
        if (cls_plus and in_S) or (not cls_plus and not in_S):
            member.append(j)

    hemi = Hemisystem(
        q=q,
        line_indices=tuple(member),
        provenance={
            "type_one": {
                "ell": [list(r) for r in ell.rows],
                "S": sorted(S),
                "orientation": orientation,
            }
        },
    )
    rep = verify_hemisystem(G, hemi)
    if not rep.ok:
        raise AssertionError("constructed set failed hemisystem verification")
    return hemi


def complement(G: FlockGQ, H: Hemisystem) -> Hemisystem:
    rest = tuple(sorted(set(range(G.n_lines)) - set(H.line_indices)))
    return Hemisystem(q=H.q, line_indices=rest, provenance={"complement_of": H.provenance})


# ---------------------------------------------------------------------------
# verification


@dataclass
class HemiReport:
    ok: bool
    size: int
    expected_size: int
    violations: tuple = ()


def verify_hemisystem(G: FlockGQ, H) -> HemiReport:
    """Check every point lies on exactly (q+1)/2 member lines."""
    ids = H.line_indices if isinstance(H, Hemisystem) else tuple(H)
    members = set(ids)
    target = (G.q + 1) // 2
    bad = []
    for i, ls in enumerate(G.points_lines):
        c = sum(1 for l in ls if l in members)
        if c != target:
            bad.append((i, c))
    expected = (G.q + 1) * (G.q**3 + 1) // 2
    return HemiReport(ok=not bad, size=len(members), expected_size=expected,
                      violations=tuple(bad))


# ---------------------------------------------------------------------------
# the group T


def t_group(G: FlockGQ, ell: Subspace):
    """The two generators of T: elations with a = w1, w2 where l' = <w1,w2>."""
    F = G.F
    lprime = project_line(F, ell)
    w1, w2 = lprime.rows
    return [
        SemilinearMap(e_matrix(F, w1, 0)),
        SemilinearMap(e_matrix(F, w2, 0)),
    ]


@dataclass
class TReport:
    group_order: int
    fixes_type_b: bool
    type_a_orbit_sizes: set
    semiregular: bool
    fixes_hemisystems: bool


def verify_t_group(G: FlockGQ, gens, hemisystems=()) -> TReport:
    perms = [induced_permutations(G, g)[1] for g in gens]
    ident = tuple(range(G.n_lines))
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in perms:
                q_ = tuple(g[i] for i in p)
                if q_ not in group:
                    group.add(q_)
                    nxt.append(q_)
        frontier = nxt
    b_ids = set(G.blt_plane_line_ids())
    fixes_b = all(p[j] == j for p in group for j in b_ids)
    # orbits on type (a)
    seen = set()
    sizes = set()
    for j in range(G.n_lines):
        if G.line_types[j] != LINE_A or j in seen:
            continue
        orb = {p[j] for p in group}
        seen |= orb
        sizes.add(len(orb))
    fixes_h = all(
        {p[j] for j in H.line_indices} == set(H.line_indices)
        for p in perms
        for H in hemisystems
    )
    return TReport(
        group_order=len(group),
        fixes_type_b=fixes_b,
        type_a_orbit_sizes=sizes,
        semiregular=sizes == {len(group)},
        fixes_hemisystems=fixes_h,
    )


# ---------------------------------------------------------------------------
# strongly regular graphs


def concurrency_graph(G: FlockGQ, H) -> np.ndarray:
    """Adjacency matrix on member lines; adjacent = sharing a point."""
    ids = H.line_indices if isinstance(H, Hemisystem) else tuple(sorted(H))
    sets = [frozenset(G.lines_points[j]) for j in ids]
    v = len(ids)
    adj = np.zeros((v, v), dtype=np.int64)
    for a in range(v):
        for b in range(a + 1, v):
            if sets[a] & sets[b]:
                adj[a, b] = adj[b, a] = 1
    return adj


def srg_check(adj: np.ndarray):
    """SRGParams on success, else (None, witness)."""
    v = adj.shape[0]
    degs = adj.sum(axis=1)
    k = int(degs[0])
    if not (degs == k).all():
        i = int(np.argmax(degs != k))
        return None, ("degree", i, int(degs[i]))
    m = adj @ adj
    lam = mu = None
    for a in range(v):
        for b in range(a + 1, v):
            common = int(m[a, b])
            if adj[a, b]:
                if lam is None:
                    lam = common
                elif common != lam:
                    return None, ("lambda", a, b, common, lam)
            else:
                if mu is None:
                    mu = common
                elif common != mu:
                    return None, ("mu", a, b, common, mu)
    params = SRGParams(v=v, k=k, lam=lam if lam is not None else 0,
                       mu=mu if mu is not None else 0)
    if not params.identity_holds():
        return None, ("identity", params)
    return params, None


def graph_to_dimacs(adj: np.ndarray) -> str:
    v = adj.shape[0]
    edges = [(a + 1, b + 1) for a in range(v) for b in range(a + 1, v) if adj[a, b]]
    lines = [f"p edge {v} {len(edges)}"]
    lines += [f"e {a} {b}" for a, b in edges]
    return "\n".join(lines) + "\n"


def graph_to_adjacency_list(adj: np.ndarray) -> str:
    v = adj.shape[0]
    out = []
    for a in range(v):
        nbrs = " ".join(str(b) for b in range(v) if adj[a, b])
        out.append(f"{a}: {nbrs}")
    return "\n".join(out) + "\n"
