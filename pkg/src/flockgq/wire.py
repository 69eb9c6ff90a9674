"""JSON wire forms, schema "qf/1".

Field elements travel as {"field": "3^2", "log": k} with "zero" for 0;
subspaces as arrays of rows of element wires; everything larger carries a
"schema" tag.  Encoders are deterministic so repeated runs are
byte-identical.
"""

from __future__ import annotations

import json

from .blt import BLTSet
from .errors import ConfigurationError
from .gf import GF, element_from_wire, element_to_wire, field_for_order, subfield_embedding
from . import linalg as la
from .linalg import Subspace
from .maps import SemilinearMap

SCHEMA = "qf/1"


def subspace_to_wire(F: GF, s: Subspace):
    return [[element_to_wire(F, a) for a in row] for row in s.rows]


def subspace_from_wire(rows) -> tuple[GF, Subspace]:
    F = None
    mat = []
    for row in rows:
        out = []
        for cell in row:
            F, a = element_from_wire(cell)
            out.append(a)
        mat.append(tuple(out))
    return F, la.canonicalize(F, mat)


def geometry_to_wire(geom) -> dict:
    F = geom.F
    return {
        "schema": SCHEMA,
        "points": [subspace_to_wire(F, s) for s in geom.points],
        "lines": [subspace_to_wire(F, s) for s in geom.lines],
        "incidence": "by-containment",
    }


def blt_to_wire(B: BLTSet) -> dict:
    F = B.field()
    return {
        "schema": SCHEMA,
        "q": B.q,
        "family": B.family,
        "params": {k: v for k, v in sorted(B.params.items())},
        "lines": [subspace_to_wire(F, s) for s in B.lines],
    }


def blt_from_wire(obj) -> BLTSet:
    lines = []
    for rows in obj["lines"]:
        _, s = subspace_from_wire(rows)
        lines.append(s)
    F = field_for_order(obj["q"])
    lines.sort(key=lambda s: s.sort_key(F))
    return BLTSet(
        q=obj["q"],
        family=obj["family"],
        params=dict(obj.get("params", {})),
        lines=tuple(lines),
    )


_POINT_TYPES = {0: "i", 1: "ii", 2: "iii"}
_LINE_TYPES = {0: "a", 1: "b"}


def gq_to_wire(G) -> dict:
    F = G.F
    return {
        "schema": SCHEMA,
        "q": G.q,
        "blt": blt_to_wire(G.blt),
        "points": [
            {"type": _POINT_TYPES[t], "subspace": subspace_to_wire(F, s)}
            for t, s in zip(G.point_types, G.points)
        ],
        "lines": [
            {"type": _LINE_TYPES[t], "subspace": subspace_to_wire(F, s)}
            for t, s in zip(G.line_types, G.lines)
        ],
    }


def gq_from_wire(obj):
    """Rebuild from the stored BLT-set and check the stored indexing agrees."""
    from .knarr import knarr_build

    B = blt_from_wire(obj["blt"])
    G = knarr_build(B)
    stored_points = [
        subspace_from_wire(p["subspace"])[1].rows for p in obj["points"]
    ]
    if stored_points != [s.rows for s in G.points]:
        raise ConfigurationError("stored point indexing does not match the rebuild")
    stored_lines = [subspace_from_wire(p["subspace"])[1].rows for p in obj["lines"]]
    if stored_lines != [s.rows for s in G.lines]:
        raise ConfigurationError("stored line indexing does not match the rebuild")
    return G


def hemisystem_to_wire(G, H) -> dict:
    return {
        "schema": SCHEMA,
        "gq": {"family": G.blt.family, "q": G.q,
               "params": {k: v for k, v in sorted(G.blt.params.items())}},
        "lines": list(H.line_indices),
        "provenance": H.provenance,
    }


def point_hemisystem_to_wire(q: int, pts, provenance: dict) -> dict:
    return {
        "schema": SCHEMA,
        "model": "Qminus5",
        "q": q,
        "points": sorted(pts),
        "provenance": provenance,
    }


def pi_to_wire(frame, pi) -> dict:
    F = frame.F
    Fq2 = field_for_order(frame.q**2)
    _, down = subfield_embedding(Fq2, F)
    entries = []
    for fid, n in sorted(pi.entries, key=lambda e: (e[0], F.log[e[1]] if e[1] != 1 else 0)):
        factor = frame.factors[fid]
        entries.append(
            {
                "factor": [element_to_wire(Fq2, down(c)) for c in factor.coeffs],
                "n_log": Fq2.log[down(n)] if n != 1 else 0,
            }
        )
    return {"schema": SCHEMA, "q": frame.q, "entries": entries}


def pi_from_wire(frame, obj):
    from .singer import PiSpec

    F = frame.F
    Fq2 = field_for_order(frame.q**2)
    up, _ = subfield_embedding(Fq2, F)
    entries = set()
    for ent in obj["entries"]:
        coeffs = []
        for cell in ent["factor"]:
            _, a = element_from_wire(cell)
            coeffs.append(up(a))
        coeffs = tuple(coeffs)
        fid = next(
            (i for i, f in enumerate(frame.factors) if f.coeffs == coeffs), None
        )
        if fid is None:
            raise ConfigurationError("factor polynomial does not divide X^(q+1)+X+1")
        n = F.pow(frame.z, ent["n_log"])
        entries.add((fid, n))
    return PiSpec(q=frame.q, entries=frozenset(entries))


def semilinear_to_wire(F: GF, g: SemilinearMap) -> dict:
    return {
        "matrix": [[element_to_wire(F, a) for a in row] for row in g.matrix],
        "frobenius": g.frob,
    }


def semilinear_from_wire(obj) -> SemilinearMap:
    mat = []
    for row in obj["matrix"]:
        mat.append(tuple(element_from_wire(cell)[1] for cell in row))
    return SemilinearMap(tuple(mat), frob=obj.get("frobenius", 0))


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
