"""Semilinear maps and the permutations they induce on a geometry."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .gf import GF
from . import linalg as la
from .linalg import Mat, Subspace


@dataclass(frozen=True)
class SemilinearMap:
    """v -> frobenius^e(v) . matrix, acting on row vectors."""

    matrix: Mat
    frob: int = 0

    def apply_vector(self, F: GF, v):
        if self.frob:
            v = tuple(F.frob(a, self.frob) for a in v)
        return la.vec_mat(F, v, self.matrix)

    def apply_subspace(self, F: GF, s: Subspace) -> Subspace:
        return la.canonicalize(F, [self.apply_vector(F, r) for r in s.rows])

    def compose(self, F: GF, other: "SemilinearMap") -> "SemilinearMap":
        """self followed by other."""
        m = tuple(other.apply_vector(F, row) for row in self.matrix)
        return SemilinearMap(m, (self.frob + other.frob) % F.f)


def induced_permutations(geom, gen: SemilinearMap):
    """(point permutation, line permutation) of a generator on a geometry.

    The geometry must expose F, points, lines as canonical subspaces with
    ``point_index``/``line_index`` lookups.  A generator that moves some
    object outside the geometry is rejected with a witness.
    """
    F = geom.F
    pperm = [0] * len(geom.points)
    for i, s in enumerate(geom.points):
        img = gen.apply_subspace(F, s)
        j = geom.point_index.get(img.rows)
        if j is None:
            raise DomainError(f"generator does not preserve the point set (point {i})")
        pperm[i] = j
    lperm = [0] * len(geom.lines)
    for i, s in enumerate(geom.lines):
        img = gen.apply_subspace(F, s)
        j = geom.line_index.get(img.rows)
        if j is None:
            raise DomainError(f"generator does not preserve the line set (line {i})")
        lperm[i] = j
    return tuple(pperm), tuple(lperm)


def check_incidence_preserved(geom, pperm, lperm) -> bool:
    lines_points = geom.lines_points
    for j, pts in enumerate(lines_points):
        image = tuple(sorted(pperm[i] for i in pts))
        if image != lines_points[lperm[j]]:
            return False
    return True
