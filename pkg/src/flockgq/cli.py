"""Command-line interface.

Machine-readable JSON goes to stdout (or --out); human-readable reports go
to stderr.  Exit codes: 0 ok, 1 verification failure, 2 usage or
configuration error, 3 resource limit reached.  Every command is
deterministic: identical invocations produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys

from .blt import blt_make, verify_blt
from .errors import ConfigurationError, DomainError
from .gf import field_for_order
from . import linalg as la
from .knarr import knarr_build, verify_gq, write_matrixmarket
from .typeone import (
    Hemisystem,
    admissible_base_lines,
    concurrency_graph,
    srg_check,
    t_group,
    typeone_build,
    verify_hemisystem,
    verify_t_group,
)
from .maps import SemilinearMap
from . import search as searchmod
from . import singer as singermod
from . import wire

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


def _emit(args, payload: dict):
    text = wire.dumps(payload)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _log(msg: str):
    print(msg, file=sys.stderr)


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _gq_from_descriptor(desc):
    if isinstance(desc, str):
        return wire.gq_from_wire(_load_json(desc))
    params = dict(desc.get("params", {}))
    B = blt_make(desc["family"], int(desc["q"]), params or None)
    return knarr_build(B)


def _parse_matrix(text: str, F):
    rows = []
    for chunk in text.split(";"):
        rows.append(tuple(F.from_int(int(tok)) if int(tok) < F.p else int(tok)
                          for tok in chunk.split()))
    return la.canonicalize(F, rows)


# ---------------------------------------------------------------------------
# subcommands


def cmd_build_gq(args) -> int:
    params = {}
    if args.nonsquare is not None:
        params["n"] = args.nonsquare
    if args.sigma is not None:
        params["sigma"] = args.sigma
    B = blt_make(args.family, args.q, params or None)
    rep = verify_blt(B)
    if not rep.ok:
        _log("BLT verification failed")
        return EXIT_VERIFY
    G = knarr_build(B, check_blt=False)
    _log(f"built {args.family} q={args.q}: {G.n_points} points, {G.n_lines} lines")
    if args.matrixmarket:
        write_matrixmarket(G, args.matrixmarket)
    _emit(args, wire.gq_to_wire(G))
    return EXIT_OK


def _resolve_ell(args, G):
    F = G.F
    if args.ell_matrix:
        return _parse_matrix(args.ell_matrix, F)
    base = admissible_base_lines(G.blt)
    k = args.ell_index
    if not 1 <= k <= len(base):
        raise ConfigurationError(
            f"--ell-index must be in 1..{len(base)} (admissible base lines)"
        )
    lp = base[k - 1]
    from .knarr import lift_w3_vector

    return la.canonicalize(F, [lift_w3_vector(u) for u in lp.rows])


def cmd_typeone(args) -> int:
    G = _gq_from_descriptor(
        args.gq if args.gq else {"family": args.family, "q": args.q}
    )
    ell = _resolve_ell(args, G)
    S = {int(t) for t in args.subset.split(",")}
    H = typeone_build(G, ell, S, orientation=args.orientation)
    _log(f"hemisystem of {H.size} lines (expected {(G.q+1)*(G.q**3+1)//2})")
    if args.check_t:
        rep = verify_t_group(G, t_group(G, ell), [H])
        _log(
            f"T order {rep.group_order}, fixes type (b): {rep.fixes_type_b}, "
            f"semiregular: {rep.semiregular}, fixes hemisystem: {rep.fixes_hemisystems}"
        )
    _emit(args, wire.hemisystem_to_wire(G, H))
    return EXIT_OK


def _load_hemisystem(path: str):
    obj = _load_json(path)
    return obj


def cmd_verify(args) -> int:
    obj = _load_hemisystem(args.hemi)
    if obj.get("model") == "Qminus5":
        frame = singermod.singer_frame(obj["q"])
        rep = singermod.verify_point_hemisystem(frame, obj["points"])
        _emit(args, {"schema": wire.SCHEMA, "ok": rep.ok, "size": rep.size})
        if rep.ok:
            _log(f"point hemisystem verified ({rep.size} points)")
            return EXIT_OK
        _log(f"verification failed; witness line {rep.witness}")
        return EXIT_VERIFY
    G = _gq_from_descriptor(args.gq if args.gq else obj["gq"])
    rep = verify_hemisystem(G, tuple(obj["lines"]))
    _emit(
        args,
        {
            "schema": wire.SCHEMA,
            "ok": rep.ok,
            "size": rep.size,
            "violations": [list(v) for v in rep.violations[:32]],
        },
    )
    if rep.ok:
        _log(f"hemisystem verified ({rep.size} lines)")
        return EXIT_OK
    _log(f"verification failed at {len(rep.violations)} points")
    return EXIT_VERIFY


def cmd_srg(args) -> int:
    obj = _load_hemisystem(args.hemi)
    if obj.get("model") == "Qminus5":
        frame = singermod.singer_frame(obj["q"])
        adj = singermod.collinearity_graph(frame, obj["points"])
    else:
        G = _gq_from_descriptor(args.gq if args.gq else obj["gq"])
        H = Hemisystem(q=G.q, line_indices=tuple(obj["lines"]), provenance={})
        adj = concurrency_graph(G, H)
    params, witness = srg_check(adj)
    if params is None:
        _log(f"not strongly regular: {witness}")
        return EXIT_VERIFY
    sys.stdout.write(f"{params.v} {params.k} {params.lam} {params.mu}\n")
    return EXIT_OK


def cmd_singer(args) -> int:
    frame = singermod.singer_frame(args.q)
    if args.pi:
        pi = wire.pi_from_wire(frame, _load_json(args.pi))
    else:
        pi = singermod.bundled_pi(args.q)
    pts = singermod.pi_hemisystem(frame, pi)
    rep = singermod.verify_point_hemisystem(frame, pts)
    payload = wire.point_hemisystem_to_wire(
        args.q, pts, {"singer_pi": wire.pi_to_wire(frame, pi)}
    )
    _emit(args, payload)
    if not rep.ok:
        _log(f"Pi expansion is not a hemisystem (witness {rep.witness})")
        return EXIT_VERIFY
    _log(f"point hemisystem of {rep.size} points verified")
    return EXIT_OK


def _system_from_descriptor(desc):
    G = _gq_from_descriptor(desc["gq"])
    gens = [wire.semilinear_from_wire(g) for g in desc.get("group", {}).get("generators", [])]
    if gens:
        action = searchmod.group_action(G, gens)
        po, lo = searchmod.orbits(action)
    else:
        po, lo = searchmod.trivial_orbits(G)
    tsys = searchmod.tactical(G, po, lo)
    for exc in desc.get("exclude", []):
        tsys = searchmod.exclude(tsys, exc["lines"], exc["alpha"])
    return G, tsys


def cmd_search(args) -> int:
    desc = _load_json(args.descriptor)
    G, tsys = _system_from_descriptor(desc)
    res = searchmod.solve_all(
        tsys,
        limits=desc.get("limits"),
        prescribe_lines=desc.get("prescribe", ()),
        threads=args.threads,
    )
    out = sys.stdout if not args.out else open(args.out, "w")
    try:
        out.write(searchmod.solutions_to_jsonl(res))
    finally:
        if args.out:
            out.close()
    _log(
        f"{len(res.solutions)} solutions, status {res.status}, "
        f"{res.node_count} nodes, {res.wall_time:.1f}s"
    )
    if args.verify_solutions:
        for sol in res.solutions:
            if not verify_hemisystem(G, sol).ok:
                _log("a reported solution failed full verification")
                return EXIT_VERIFY
        _log("all solutions re-verified against the full incidence matrix")
    return EXIT_OK if res.status == "complete" else EXIT_LIMIT


def cmd_export_lp(args) -> int:
    desc = _load_json(args.descriptor)
    _, tsys = _system_from_descriptor(desc)
    searchmod.export_lp(tsys, args.out)
    _log(f"wrote {len(tsys.rows)} equality rows, {tsys.n_vars} binaries to {args.out}")
    return EXIT_OK


def cmd_essential(args) -> int:
    desc = _load_json(args.descriptor)
    G, tsys = _system_from_descriptor(desc)
    fixed = desc.get("fixed", [])
    if "orbits" in desc:
        orbit_sets = [tuple(o) for o in desc["orbits"]]
    else:
        orbit_sets = [tuple(o) for o in tsys.var_lines]
    out = searchmod.essential_orbits(tsys, fixed, orbit_sets, limits=desc.get("limits"))
    _emit(args, {
        "schema": wire.SCHEMA,
        "fixed": list(fixed),
        "orbits": [{"index": i, "status": s} for i, s in out],
    })
    ess = sum(1 for _, s in out if s == "essential")
    unk = sum(1 for _, s in out if s == "unknown")
    _log(f"{ess} essential orbits of {len(out)} probed ({unk} unknown)")
    return EXIT_LIMIT if unk else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="flockgq",
        description="flock generalized quadrangles, hemisystems and exact search",
    )
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build-gq", help="construct a flock GQ from a BLT family")
    b.add_argument("--family", required=True)
    b.add_argument("--q", type=int, required=True)
    b.add_argument("--nonsquare", type=int)
    b.add_argument("--sigma", type=int)
    b.add_argument("--matrixmarket", help="also write the incidence matrix here")
    b.add_argument("--out")
    b.set_defaults(func=cmd_build_gq)

    t = sub.add_parser("typeone", help="build a Type I hemisystem")
    t.add_argument("--gq", help="GQ JSON file (else --family/--q)")
    t.add_argument("--family")
    t.add_argument("--q", type=int)
    t.add_argument("--ell-index", type=int, default=1,
                   help="1-based index into the admissible base lines")
    t.add_argument("--ell-matrix", help='rows "a b c d e f; a b c d e f"')
    t.add_argument("--S", dest="subset", required=True, help='e.g. "1,3,4"')
    t.add_argument("--orientation", choices=["+", "-"], default="+")
    t.add_argument("--check-t", action="store_true")
    t.add_argument("--out")
    t.set_defaults(func=cmd_typeone)

    v = sub.add_parser("verify", help="verify a hemisystem file")
    v.add_argument("--gq")
    v.add_argument("--hemi", required=True)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("srg", help="strongly regular graph parameters")
    s.add_argument("--gq")
    s.add_argument("--hemi", required=True)
    s.set_defaults(func=cmd_srg)

    g = sub.add_parser("singer", help="Singer-type point hemisystem of Q-(5,q)")
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--pi", help="PiSpec JSON file (default: bundled table)")
    g.add_argument("--out")
    g.set_defaults(func=cmd_singer)

    r = sub.add_parser("search", help="run an exact search from a descriptor")
    r.add_argument("--descriptor", required=True)
    r.add_argument("--threads", type=int, default=1)
    r.add_argument("--verify-solutions", action="store_true")
    r.add_argument("--out")
    r.set_defaults(func=cmd_search)

    e = sub.add_parser("export-lp", help="write the system in LP format")
    e.add_argument("--descriptor", required=True)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_export_lp)

    x = sub.add_parser("essential", help="probe orbits for essentiality")
    x.add_argument("--descriptor", required=True)
    x.add_argument("--out")
    x.set_defaults(func=cmd_essential)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, DomainError) as exc:
        _log(f"error: {exc}")
        return EXIT_USAGE
    except FileNotFoundError as exc:
        _log(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
