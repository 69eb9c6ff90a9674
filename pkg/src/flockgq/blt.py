"""BLT-sets of lines of W(3,q): q-clan families, quadric models, transport.

W(3,q) is taken with the form beta(x,y) = x1 y4 - x4 y1 + x2 y3 - x3 y2.
A q-clan pair (f, g) yields the line set

    l_inf = [[0,0,1,0],[0,0,0,1]],   l_t = [[1,0,f_t,t],[0,1,g_t,f_t]]

and this set is a BLT-set exactly when every difference form
(t-u)x^2 + 2(f_t-f_u)xy + (g_t-g_u)y^2 is anisotropic.  The Fisher and
Penttila-Mondello families are given as point sets of a parabolic-quadric
model over GF(q^2) + GF(q^2) + GF(q) and carried into W(3,q) through the
Klein correspondence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import ConfigurationError, DomainError
from .gf import GF, field_for_order, field_make, subfield_embedding
from . import linalg as la
from .linalg import Subspace

FAMILIES = (
    "linear",
    "ftwkb",
    "kantor_monomial",
    "kantor_knuth",
    "fisher",
    "penttila_mondello",
    "custom",
)

# Penttila-Mondello q-clan for q = 11, indexed by t = 0..10.
_PM11_F = (8, 0, 7, 4, 8, 0, 1, 5, 0, 0, 0)
_PM11_G = (1, 8, 3, 2, 5, 6, 10, 9, 4, 7, 0)


@dataclass(frozen=True)
class BLTSet:
    q: int
    family: str
    params: dict = field(compare=False)
    lines: tuple[Subspace, ...] = ()

    def field(self) -> GF:
        return field_for_order(self.q)


def minimal_nonsquare(F: GF) -> int:
    return min((a for a in range(1, F.order) if not F.is_square(a)), key=F.gap_rank)


def w3_form(F: GF) -> la.BilinearForm:
    return la.symplectic_j4(F)


@lru_cache(maxsize=None)
def w3_ti_lines(q: int) -> tuple[Subspace, ...]:
    """All totally isotropic lines of W(3,q), canonically sorted."""
    F = field_for_order(q)
    return tuple(la.isotropic_subspaces(F, w3_form(F), 2, 4))


def _qclan_lines(F: GF, fg) -> list[Subspace]:
    lines = [la.canonicalize(F, [(0, 0, 1, 0), (0, 0, 0, 1)])]
    for t in range(F.order):
        f, g = fg(t)
        lines.append(la.canonicalize(F, [(1, 0, f, t), (0, 1, g, f)]))
    return lines


def blt_qclan(family: str, q: int, params: dict | None = None) -> BLTSet:
    """Construct the q-clan BLT-set of one of the tabulated families."""
    params = dict(params or {})
    F = field_for_order(q)
    if F.p == 2:
        raise ConfigurationError("q must be odd")

    if family == "linear":
        n = params.setdefault("n", minimal_nonsquare(F))
        if F.is_square(n):
            raise ConfigurationError("parameter n must be a nonsquare")
        fg = lambda t: (0, F.mul(F.neg(n), t))
    elif family == "ftwkb":
        if q % 3 != 2:
            raise ConfigurationError("FTWKB requires q = 2 (mod 3)")
        c32 = F.div(F.from_int(3), F.from_int(2))
        three = F.from_int(3)
        fg = lambda t: (F.mul(c32, F.pow(t, 2)), F.mul(three, F.pow(t, 3)))
    elif family == "kantor_monomial":
        five = F.from_int(5)
        if q % 5 not in (2, 3) or F.is_square(five):
            raise ConfigurationError(
                "Kantor monomial requires q = +-2 (mod 5) with 5 a nonsquare"
            )
        c52 = F.div(five, F.from_int(2))
        fg = lambda t: (F.mul(c52, F.pow(t, 3)), F.mul(five, F.pow(t, 5)))
    elif family == "kantor_knuth":
        if F.f == 1:
            raise ConfigurationError("Kantor-Knuth requires q to be a proper prime power")
        n = params.setdefault("n", minimal_nonsquare(F))
        if F.is_square(n):
            raise ConfigurationError("parameter n must be a nonsquare")
        e = params.setdefault("sigma", 1)
        if not 1 <= e < F.f:
            raise ConfigurationError("sigma must be a nontrivial automorphism exponent")
        fg = lambda t: (0, F.mul(F.neg(n), F.frob(t, e)))
    elif family == "penttila_mondello":
        if q != 11:
            raise ConfigurationError(
                "the Penttila-Mondello q-clan table is for q = 11; use transport otherwise"
            )
        fg = lambda t: (_PM11_F[t], _PM11_G[t])
    else:
        raise ConfigurationError(f"unknown q-clan family {family!r}")

    lines = _qclan_lines(F, fg)
    lines.sort(key=lambda s: s.sort_key(F))
    return BLTSet(q=q, family=family, params=params, lines=tuple(lines))


# ---------------------------------------------------------------------------
# parabolic-quadric models (Fisher, Penttila-Mondello)


def _gfq2_embedding(F: GF, F2: GF):
    """Maps between GF(q) and its copy inside GF(q^2), Conway-compatible."""
    return subfield_embedding(F, F2)


def parabolic_model_form(q: int) -> la.QuadraticForm:
    """(x, y, a) -> x^(q+1) + y^(q+1) + a^2 written over GF(q)^5.

    Coordinates are (x1, x2, y1, y2, a) on the basis (1, w) of GF(q^2)
    with w the canonical primitive element.
    """
    F = field_for_order(q)
    F2 = field_make(F.p, 2 * F.f)
    _, down = _gfq2_embedding(F, F2)
    w = F2.primitive
    tr = down(F2.trace_to(q, w))
    nm = down(F2.norm_to(q, w))
    c = [[0] * 5 for _ in range(5)]
    c[0][0], c[0][1], c[1][1] = 1, tr, nm
    c[2][2], c[2][3], c[3][3] = 1, tr, nm
    c[4][4] = 1
    return la.QuadraticForm(tuple(tuple(r) for r in c))


def _to_vec5(F: GF, F2: GF, X: int, Y: int, a: int):
    """(X, Y, a) in GF(q^2)^2 + GF(q) to coordinates over GF(q)."""
    up, down = _gfq2_embedding(F, F2)
    w = F2.primitive
    denom = F2.sub(w, F2.pow(w, F.order))

    def split(Z):
        b2 = F2.div(F2.sub(Z, F2.pow(Z, F.order)), denom)
        b1 = F2.sub(Z, F2.mul(b2, w))
        return down(b1), down(b2)

    x1, x2 = split(X)
    y1, y2 = split(Y)
    return (x1, x2, y1, y2, a)


def blt_q4_points(family: str, q: int) -> list[tuple[int, ...]]:
    """BLT-set of points of the parabolic-quadric model, as 5-vectors.

    The unit-norm parameters (beta, and gamma for Penttila-Mondello) are
    pinned to the minimal-rank solutions of their norm equations so the
    output is reproducible.
    """
    F = field_for_order(q)
    F2 = field_make(F.p, 2 * F.f)
    up, _ = _gfq2_embedding(F, F2)

    def norm_solution(target_q: int) -> int:
        want = up(target_q)
        for r in range(1, F2.order):
            cand = F2.from_rank(r)
            if F2.pow(cand, q + 1) == want:
                return cand
        raise AssertionError(f"no solution of norm {target_q} in GF({q}^2)")

    munits = [F2.exp[(k * (q - 1)) % (F2.order - 1)] for k in range(q + 1)]

    if family == "fisher":
        beta = norm_solution(F.neg(1))
        raw = [(F2.mul(beta, F2.mul(x, x)), 0, 1) for x in munits]
        raw += [(0, F2.mul(beta, F2.mul(y, y)), 1) for y in munits]
    elif family == "penttila_mondello":
        if q % 10 not in (1, 9):
            raise ConfigurationError("Penttila-Mondello requires q = +-1 (mod 10)")
        five_inv = F.inv(F.from_int(5))
        beta = norm_solution(F.neg(F.mul(F.from_int(4), five_inv)))
        gamma = norm_solution(F.neg(five_inv))
        raw = [
            (F2.mul(beta, F2.pow(x, 2)), F2.mul(gamma, F2.pow(x, 3)), 1)
            for x in munits
        ]
    else:
        raise ConfigurationError(f"no quadric model for family {family!r}")

    form = parabolic_model_form(q)
    pts = set()
    for X, Y, a in raw:
        v = _to_vec5(F, F2, X, Y, a)
        lead = next(i for i, c in enumerate(v) if c)
        v = la.vec_scale(F, F.inv(v[lead]), v)
        if form.evaluate(F, v) != 0:
            raise DomainError("constructed point is not singular")
        pts.add(v)
    if len(pts) != q + 1:
        raise AssertionError(f"expected {q+1} distinct points, got {len(pts)}")
    out = sorted(pts, key=lambda v: tuple(F.gap_rank(c) for c in v))
    return out


def blt_transport(points: list[tuple[int, ...]], q: int, family: str = "custom") -> BLTSet:
    """Carry a point set of the parabolic model to a BLT-set of W(3,q) lines.

    Points are moved by a fixed similarity onto the Klein-quadric section
    and then pulled back through the Pluecker embedding.
    """
    F = field_for_order(q)
    src = parabolic_model_form(q)
    dst = la.klein_section(F)
    M, c = la.isometry_between(F, src, dst)
    lines = []
    for v in points:
        if src.evaluate(F, v) != 0:
            raise DomainError("input point is not singular for the model form")
        u = la.vec_mat(F, v, M)
        lines.append(la.section_point_to_w3_line(F, u))
    if len(set(lines)) != len(lines):
        raise AssertionError("transport collapsed two points onto one line")
    lines.sort(key=lambda s: s.sort_key(F))
    return BLTSet(q=q, family=family, params={"transport_similarity": c}, lines=tuple(lines))


def blt_make(family: str, q: int, params: dict | None = None) -> BLTSet:
    """Any supported family at q, through its natural route."""
    if family == "fisher" or (family == "penttila_mondello" and q != 11):
        return blt_transport(blt_q4_points(family, q), q, family=family)
    return blt_qclan(family, q, params)


# ---------------------------------------------------------------------------
# verification


@dataclass
class BLTReport:
    direct_ok: bool
    direct_witness: tuple | None
    anisotropy_ok: bool | None
    anisotropy_witness: tuple | None

    @property
    def agree(self) -> bool | None:
        if self.anisotropy_ok is None:
            return None
        return self.direct_ok == self.anisotropy_ok

    @property
    def ok(self) -> bool:
        return self.direct_ok and self.anisotropy_ok in (True, None)


def qclan_form(B: BLTSet) -> dict[int, tuple[int, int]] | None:
    """Rewrite a BLT-set in q-clan coordinates via a symplectic base change.

    The canonically least member is moved onto l_inf; the remaining lines
    then read off as [[1,0,f,t],[0,1,g,f]].  Returns None when the set is
    not in general position (some member meets the chosen one), in which
    case the anisotropy test does not apply.
    """
    F = B.field()
    J = w3_form(F).gram
    b3, b4 = B.lines[0].rows

    Jt = la.mat_transpose(J)

    def solve_affine(conds):
        # beta(x, v) = val is the linear equation (v J^T) . x = val
        aug = [list(la.vec_mat(F, v, Jt)) + [val] for v, val in conds]
        red = la.rref(F, aug)
        piv = {}
        for r in red:
            j = next(i for i, a in enumerate(r) if a)
            if j == 4:
                return None
            piv[j] = r
        x = [0, 0, 0, 0]
        for j, r in piv.items():
            x[j] = r[4]
        return tuple(x)

    b1 = solve_affine([(b3, 0), (b4, 1)])
    b2 = solve_affine([(b3, 1), (b4, 0), (b1, 0)])
    basis = (b1, b2, b3, b4)
    gram = tuple(
        tuple(la.beta(F, J, u, v) for v in basis) for u in basis
    )
    assert gram == w3_form(F).gram, "symplectic base change failed"
    Minv = la.mat_inv(F, basis)

    fg: dict[int, tuple[int, int]] = {}
    for ln in B.lines[1:]:
        rows = la.rref(F, [la.vec_mat(F, r, Minv) for r in ln.rows])
        if rows[0][0] != 1 or rows[1][1] != 1 or rows[0][1] != 0 or rows[1][0] != 0:
            return None
        f, t = rows[0][2], rows[0][3]
        g, f2 = rows[1][2], rows[1][3]
        if f2 != f or t in fg:
            return None
        fg[t] = (f, g)
    if len(fg) != F.order:
        return None
    return fg


def _anisotropy_check(F: GF, fg) -> tuple[bool, tuple | None]:
    ts = sorted(fg, key=F.gap_rank)
    for i, t in enumerate(ts):
        for u in ts[i + 1 :]:
            a = F.sub(t, u)
            b = F.sub(fg[t][0], fg[u][0])
            c = F.sub(fg[t][1], fg[u][1])
            two_b = F.add(b, b)
            for x in range(F.order):
                for y in range(F.order):
                    if x == 0 and y == 0:
                        continue
                    val = F.add(
                        F.mul(a, F.mul(x, x)),
                        F.add(F.mul(two_b, F.mul(x, y)), F.mul(c, F.mul(y, y))),
                    )
                    if val == 0:
                        return False, (t, u, x, y)
    return True, None


def verify_blt(B: BLTSet) -> BLTReport:
    """Two independent checks: the direct concurrence scan and anisotropy."""
    F = B.field()
    members = set(B.lines)
    direct_ok, witness = True, None
    for m in w3_ti_lines(B.q):
        met = [ln for ln in B.lines if ln != m and la.intersection_dim(F, m, ln) >= 1]
        if len(met) > 2:
            direct_ok, witness = False, (m, tuple(met))
            break
    if len(members) != B.q + 1:
        direct_ok = False
        witness = witness or ("wrong size", len(members))

    fg = qclan_form(B) if len(members) == B.q + 1 else None
    if fg is None:
        aniso_ok, aniso_wit = None, None
    else:
        aniso_ok, aniso_wit = _anisotropy_check(F, fg)
    return BLTReport(direct_ok, witness, aniso_ok, aniso_wit)
