"""Point hemisystems of Q-(5,q) invariant under a Singer-type element.

GF(q^6) with the symmetric form B(x,y) = Tr_{q^6->q}(x y^(q^3)) is an
elliptic orthogonal space.  With xi the canonical primitive element,
omega = xi^((q^3-1)(q+1)) generates the cyclic group K of order q^2-q+1
acting semiregularly on singular points, and each K-orbit on singular
vectors is a fibre of the (q^2-q+1)-power map with value r in

    R = {r : r^(q+1) in GF(q^3), Tr(r^(q+1)) = 0}.

An element of R is pinned by the pair (r^(q^2-1), r^(q^3-1)) up to GF(q)
scalars: the first coordinate is a zero of X^(q+1) + X + 1, the second a
(q+1)-st root of unity.  The Frobenius a -> a^(q^2) groups the zeros into
orbits tagged by irreducible factors over GF(q^2), and a table Pi of
(factor, root-of-unity) pairs expands to half the singular points.

Membership of a point <u> is decided by u^(q^2-q+1) in the expanded set,
which is well defined projectively because the pair condition is invariant
under GF(q) scalars.  (The paper prints the point-level exponent
(q^2-q+1)(q-1) here, but only the vector-level power reproduces its own
worked q=3 table; see the q=3 check in the tests.)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, DomainError
from .gf import GF, field_for_order, field_make, subfield_embedding
from . import linalg as la
from .linalg import Subspace


@dataclass(frozen=True)
class TauFactor:
    """One tau-orbit of zeros, tagged by its monic GF(q^2) polynomial."""

    coeffs: tuple[int, ...]  # ascending, elements of GF(q^6)
    roots: tuple[int, ...]


@dataclass(frozen=True)
class PiSpec:
    q: int
    entries: frozenset  # {(factor_id, n)} with n an element of GF(q^6)


class SingerFrame:
    def __init__(self, q: int, validate: bool = True):
        Fq = field_for_order(q)
        self.q = q
        self.Fq = Fq
        self.F = field_make(Fq.p, 6 * Fq.f)
        F = self.F
        n1 = F.order - 1
        self.xi = F.primitive
        self.omega = F.exp[((q**3 - 1) * (q + 1)) % n1]
        self.z = F.exp[n1 // (q * q - 1)]  # GF(q^2) primitive
        self.gfq = [0] + [F.exp[(k * (n1 // (q - 1))) % n1] for k in range(q - 1)]

        trq = lambda x: F.trace_to(q, x)
        qc = q**3 + 1
        singular = [u for u in range(1, F.order) if trq(F.pow(u, qc)) == 0]
        # group into projective points; representative = least packed int
        pt_of: dict[int, int] = {}
        reps = []
        for u in singular:
            if u in pt_of:
                continue
            cls = sorted(F.mul(lam, u) for lam in self.gfq[1:])
            pid = len(reps)
            for w in cls:
                pt_of[w] = pid
            reps.append(cls[0])
        self.point_reps = reps
        self.point_of = pt_of

        self.R_set = frozenset(
            r
            for r in range(1, F.order)
            if F.in_subfield(F.pow(r, q + 1), q**3) and trq(F.pow(r, q + 1)) == 0
        )
        poly = [1, 1] + [0] * (q - 1) + [1]  # X^(q+1) + X + 1
        zeros = F.poly_roots(poly)
        self.zeros = tuple(sorted(zeros))
        self.N = tuple(
            sorted(n for n in range(1, F.order) if F.pow(n, q + 1) == 1)
        )

        factors = []
        left = set(zeros)
        while left:
            a = min(left)
            orb = [a]
            b = F.pow(a, q * q)
            while b != a:
                orb.append(b)
                b = F.pow(b, q * q)
            left -= set(orb)
            coeffs = tuple(F.poly_from_roots(sorted(orb)))
            factors.append(TauFactor(coeffs=coeffs, roots=tuple(sorted(orb))))
        factors.sort(key=lambda f: f.roots)
        self.factors = tuple(factors)
        self.factor_of_zero = {
            a: i for i, f in enumerate(factors) for a in f.roots
        }
        self._lines = None
        if validate:
            self._validate()

    def _validate(self):
        F, q = self.F, self.q
        k_order = q * q - q + 1
        assert F.pow(self.omega, k_order) == 1
        assert all(F.pow(self.omega, d) != 1 for d in range(1, k_order) if k_order % d == 0)
        n_pts = (q + 1) * (q**3 + 1)
        assert len(self.point_reps) == n_pts, len(self.point_reps)
        # K acts semiregularly with (q+1)^2 point orbits
        seen = set()
        orbits = 0
        for pid in range(n_pts):
            if pid in seen:
                continue
            orbits += 1
            u = self.point_reps[pid]
            orb = set()
            w = u
            while True:
                orb.add(self.point_of[min(F.mul(lam, w) for lam in self.gfq[1:])])
                w = F.mul(self.omega, w)
                if w == u:
                    break
            assert len(orb) == k_order, "K is not semiregular on points"
            seen |= orb
        assert orbits == (q + 1) ** 2
        assert len(self.R_set) == (q + 1) ** 2 * (q - 1)
        assert len(self.zeros) == q + 1
        assert all(F.in_subfield(a, q**3) for a in self.zeros)
        assert all(F.in_subfield(c, q * q) for f in self.factors for c in f.coeffs)
        # every r in R sits on the line l_a with a = r^(q^2-1)
        assert all(F.pow(r, q * q - 1) in self.factor_of_zero for r in self.R_set)
        assert len(self.N) == q + 1

    # -- vector model -----------------------------------------------------

    @property
    def coordinate_maps(self):
        """(to_vec, from_vec) between GF(q^6) and GF(q)^6 on basis xi^i."""
        if hasattr(self, "_coord_maps"):
            return self._coord_maps
        F, Fq = self.F, self.Fq
        p, e = Fq.p, Fq.f
        Fp = field_make(p, 1)
        up, down = subfield_embedding(Fq, F)
        w = up(Fq.primitive) if Fq.f > 1 else up(1)
        # GF(p)-basis elements xi^i * w^j, (i, j) lexicographic
        basis = []
        for i in range(6):
            xi_i = F.pow(self.xi, i)
            for j in range(e):
                basis.append(F.mul(xi_i, F.pow(w, j) if e > 1 else 1))

        def digits(a):
            out = []
            for _ in range(F.f):
                a, d = divmod(a, p)
                out.append(d)
            return out

        M = [digits(b) for b in basis]
        Minv = la.mat_inv(Fp, tuple(tuple(r) for r in M))

        def to_vec(u: int):
            coords = la.vec_mat(Fp, tuple(digits(u)), Minv)
            out = []
            for i in range(6):
                c = 0
                for j in range(e):
                    d = coords[i * e + j]
                    if d:
                        c = F.add(c, F.mul(F.from_int(d), F.pow(w, j) if e > 1 else 1))
                out.append(down(c))
            return tuple(out)

        def from_vec(v) -> int:
            acc = 0
            for i, c in enumerate(v):
                if c:
                    acc = F.add(acc, F.mul(up(c), F.pow(self.xi, i)))
            return acc

        self._coord_maps = (to_vec, from_vec)
        return self._coord_maps

    # -- singular lines ----------------------------------------------------

    @property
    def lines(self) -> list[tuple[int, ...]]:
        """Totally singular lines as sorted tuples of point ids."""
        if self._lines is None:
            F, q = self.F, self.q
            qc = q**3
            trq = lambda x: F.trace_to(q, x)
            reps = self.point_reps
            out = set()
            for i, u in enumerate(reps):
                uq = F.pow(u, qc)
                for jj in range(i + 1, len(reps)):
                    v = reps[jj]
                    if trq(F.mul(v, uq)) != 0:
                        continue
                    ids = {i, jj}
                    for lam in self.gfq[1:]:
                        ids.add(self.point_of[F.add(u, F.mul(lam, v))])
                    out.add(tuple(sorted(ids)))
            lines = sorted(out)
            expected = (q * q + 1) * (q**3 + 1)
            assert len(lines) == expected, (len(lines), expected)
            self._lines = lines
        return self._lines

    def collinear(self, u: int, v: int) -> bool:
        return self.F.trace_to(self.q, self.F.mul(u, self.F.pow(v, self.q**3))) == 0


@lru_cache(maxsize=None)
def singer_frame(q: int, validate: bool = True) -> SingerFrame:
    if q not in (3, 5, 7, 9):
        raise ConfigurationError(
            "singer frames are built for q in {3,5,7,9} (larger q lacks field data)"
        )
    return SingerFrame(q, validate=validate)


# ---------------------------------------------------------------------------
# Pi tables and expansion

# (factor coefficient spec ascending, n as z-exponents); "int" entries are
# rational integers, "zlog" entries are powers of the GF(q^2) primitive z.
SINGER_TABLES: dict[int, list[tuple[tuple, tuple[int, ...]]]] = {
    3: [
        ((("int", -1), ("int", 1)), (0, 6)),
        ((("int", -1), ("int", 1), ("int", 1), ("int", 1)), (4, 2)),
    ],
    5: [
        ((("int", -1), ("int", -1), ("int", 2), ("int", 1)), (0, 8, 16)),
        ((("int", -1), ("int", 0), ("int", 3), ("int", 1)), (0, 4, 20)),
    ],
    7: [
        ((("int", 3), ("int", 1)), (6, 12, 30, 36)),
        ((("int", 5), ("int", 1)), (0, 24, 18, 42)),
        ((("int", -1), ("int", 4), ("int", 0), ("int", 1)), (0, 24, 18, 42)),
        ((("int", -1), ("int", 3), ("int", -1), ("int", 1)), (6, 12, 30, 36)),
    ],
    9: [
        ((("int", -1), ("int", 1)), (0, 8, 24, 56, 72)),
        ((("int", -1), ("int", -1), ("int", -1), ("int", 1)), (0, 16, 32, 48, 64)),
        ((("int", -1), ("zlog", 50), ("zlog", 50), ("int", 1)), (0, 8, 16, 64, 72)),
        ((("int", -1), ("zlog", 70), ("zlog", 70), ("int", 1)), (0, 24, 32, 48, 56)),
    ],
}


def _coeff_value(frame: SingerFrame, spec) -> int:
    kind, v = spec
    F = frame.F
    if kind == "int":
        return F.from_int(v) if v >= 0 else F.neg(F.from_int(-v))
    if kind == "zlog":
        return F.pow(frame.z, v)
    raise ConfigurationError(f"unknown coefficient spec {spec!r}")


def bundled_pi(q: int) -> PiSpec:
    """The published Pi set for q in {3,5,7,9}."""
    if q not in SINGER_TABLES:
        raise ConfigurationError(f"no bundled Pi table for q={q}")
    frame = singer_frame(q)
    F = frame.F
    entries = set()
    for coeff_spec, n_logs in SINGER_TABLES[q]:
        coeffs = tuple(_coeff_value(frame, s) for s in coeff_spec)
        fid = next(
            (i for i, f in enumerate(frame.factors) if f.coeffs == coeffs), None
        )
        if fid is None:
            raise ConfigurationError(
                f"bundled factor {coeff_spec} is not a factor of X^{q+1}+X+1"
            )
        for k in n_logs:
            entries.add((fid, F.pow(frame.z, k)))
    return PiSpec(q=q, entries=frozenset(entries))


def pi_hemisystem(frame: SingerFrame, pi: PiSpec) -> tuple[int, ...]:
    """Expand Pi to its point set (sorted point ids)."""
    F, q = frame.F, frame.q
    for fid, n in pi.entries:
        if not 0 <= fid < len(frame.factors) or F.pow(n, q + 1) != 1:
            raise ConfigurationError(f"malformed Pi entry {(fid, n)}")
    if not pi.entries:
        return ()
    wanted = set(pi.entries)
    hr = {
        r
        for r in frame.R_set
        if (frame.factor_of_zero[F.pow(r, q * q - 1)], F.pow(r, q**3 - 1)) in wanted
    }
    power = q * q - q + 1
    return tuple(
        i for i, u in enumerate(frame.point_reps) if F.pow(u, power) in hr
    )


@dataclass
class PointHemiReport:
    ok: bool
    size: int
    expected_size: int
    witness: tuple | None = None


def verify_point_hemisystem(frame: SingerFrame, pts) -> PointHemiReport:
    """Every totally singular line must carry exactly (q+1)/2 of the points."""
    members = set(pts)
    target = (frame.q + 1) // 2
    expected = (frame.q + 1) * (frame.q**3 + 1) // 2
    for ln in frame.lines:
        c = sum(1 for i in ln if i in members)
        if c != target:
            return PointHemiReport(False, len(members), expected, witness=(ln, c))
    return PointHemiReport(True, len(members), expected)


def collinearity_graph(frame: SingerFrame, pts) -> np.ndarray:
    ids = sorted(pts)
    v = len(ids)
    adj = np.zeros((v, v), dtype=np.int64)
    for a in range(v):
        ua = frame.point_reps[ids[a]]
        for b in range(a + 1, v):
            if frame.collinear(ua, frame.point_reps[ids[b]]):
                adj[a, b] = adj[b, a] = 1
    return adj


def pi_orbit_closure(frame: SingerFrame, pi: PiSpec, multiplier: int) -> PiSpec:
    """Transport Pi by r -> multiplier * r (multiplier in GF(q^2)*).

    Scaling r fixes the factor coordinate and multiplies the root-of-unity
    coordinate by multiplier^(q-1).
    """
    F, q = frame.F, frame.q
    if multiplier == 0 or F.pow(multiplier, q * q) != multiplier:
        raise DomainError("multiplier must be a nonzero element of GF(q^2)")
    shift = F.pow(multiplier, q - 1)
    return PiSpec(
        q=pi.q,
        entries=frozenset((fid, F.mul(shift, n)) for fid, n in pi.entries),
    )


def pi_orbit(frame: SingerFrame, pi: PiSpec) -> list[PiSpec]:
    """The full orbit of Pi under multiplication by the GF(q^2) primitive."""
    out = [pi]
    cur = pi_orbit_closure(frame, pi, frame.z)
    while cur != pi:
        out.append(cur)
        cur = pi_orbit_closure(frame, cur, frame.z)
    return out


# ---------------------------------------------------------------------------
# the quadric as a point-line geometry over GF(q)


def quadric_from_hermitian_trace(q: int):
    """(QuadraticForm over GF(q)^6, PointLineGeometry) of the trace form."""
    frame = singer_frame(q)
    F, Fq = frame.F, frame.Fq
    _, down = subfield_embedding(Fq, F)
    to_vec, _ = frame.coordinate_maps
    qc = q**3
    gram = [[0] * 6 for _ in range(6)]
    for i in range(6):
        for j in range(6):
            gram[i][j] = down(
                F.trace_to(q, F.mul(F.pow(frame.xi, i), F.pow(F.pow(frame.xi, j), qc)))
            )
    coeffs = [[0] * 6 for _ in range(6)]
    for i in range(6):
        coeffs[i][i] = gram[i][i]
        for j in range(i + 1, 6):
            coeffs[i][j] = Fq.add(gram[i][j], gram[j][i])
    form = la.QuadraticForm(tuple(tuple(r) for r in coeffs))

    points = []
    for u in frame.point_reps:
        v = to_vec(u)
        points.append(la.canonicalize(Fq, [v]))
    points.sort(key=lambda s: s.sort_key(Fq))
    lines = []
    for ln in frame.lines:
        u, v = frame.point_reps[ln[0]], frame.point_reps[ln[1]]
        lines.append(la.canonicalize(Fq, [to_vec(u), to_vec(v)]))
    lines.sort(key=lambda s: s.sort_key(Fq))
    return form, la.PointLineGeometry(Fq, points, lines)
