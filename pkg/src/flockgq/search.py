"""Symmetry-reduced exact search for hemisystems.

A prescribed group collapses the point-line incidence system to its
tactical decomposition: b_ij counts the lines of line-orbit j through any
point of point-orbit i (well-definedness is re-verified from a second
representative).  Hemisystems stabilized by the group are exactly the 0/1
solutions of B x = (q+1)/2 subject to optional cardinality cuts, and the
solver below enumerates all of them by depth-first branch and propagate:
every equality row tracks its assigned weight and remaining supply, rows
force their unassigned variables whenever either bound becomes tight, and
branching always picks the row with fewest free variables, then the
largest coefficient, trying 1 before 0.  Everything is deterministic.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace

from .errors import DomainError
from .maps import SemilinearMap, check_incidence_preserved, induced_permutations


# ---------------------------------------------------------------------------
# group actions and orbits


@dataclass
class GroupAction:
    geometry: object
    generators: tuple[SemilinearMap, ...]
    point_perms: tuple[tuple[int, ...], ...]
    line_perms: tuple[tuple[int, ...], ...]


def group_action(geometry, generators) -> GroupAction:
    """Verify the generators act on the geometry preserving incidence."""
    pps, lps = [], []
    for g in generators:
        pp, lp = induced_permutations(geometry, g)
        if not check_incidence_preserved(geometry, pp, lp):
            raise DomainError("generator does not preserve incidence")
        pps.append(pp)
        lps.append(lp)
    return GroupAction(geometry, tuple(generators), tuple(pps), tuple(lps))


@dataclass(frozen=True)
class OrbitPartition:
    orbits: tuple[tuple[int, ...], ...]
    orbit_of: tuple[int, ...]


def orbit_partition(perms, n: int) -> OrbitPartition:
    """Orbits of the group generated by permutations, numbered by least member."""
    orbit_of = [-1] * n
    orbits = []
    for start in range(n):
        if orbit_of[start] >= 0:
            continue
        oid = len(orbits)
        frontier = [start]
        orbit_of[start] = oid
        members = [start]
        while frontier:
            nxt = []
            for x in frontier:
                for p in perms:
                    y = p[x]
                    if orbit_of[y] < 0:
                        orbit_of[y] = oid
                        members.append(y)
                        nxt.append(y)
            frontier = nxt
        orbits.append(tuple(sorted(members)))
    return OrbitPartition(tuple(orbits), tuple(orbit_of))


def orbits(action: GroupAction) -> tuple[OrbitPartition, OrbitPartition]:
    geom = action.geometry
    return (
        orbit_partition(action.point_perms, len(geom.points)),
        orbit_partition(action.line_perms, len(geom.lines)),
    )


def trivial_orbits(geometry) -> tuple[OrbitPartition, OrbitPartition]:
    np_, nl = len(geometry.points), len(geometry.lines)
    return (
        OrbitPartition(tuple((i,) for i in range(np_)), tuple(range(np_))),
        OrbitPartition(tuple((j,) for j in range(nl)), tuple(range(nl))),
    )


# ---------------------------------------------------------------------------
# tactical decomposition


@dataclass(frozen=True)
class SideConstraint:
    coeffs: tuple[int, ...]  # per variable
    bound: int


@dataclass(frozen=True)
class TacticalSystem:
    rows: tuple[tuple[int, ...], ...]  # m x n, small nonnegative ints
    target: int
    var_lines: tuple[tuple[int, ...], ...]  # variable -> expanded line ids
    side_constraints: tuple[SideConstraint, ...] = ()

    @property
    def n_vars(self) -> int:
        return len(self.var_lines)

    def orbit_sizes(self) -> tuple[int, ...]:
        return tuple(len(v) for v in self.var_lines)

    def expand(self, chosen_vars) -> tuple[int, ...]:
        out = []
        for j in chosen_vars:
            out.extend(self.var_lines[j])
        return tuple(sorted(out))


def tactical(gq, point_orbits: OrbitPartition, line_orbits: OrbitPartition) -> TacticalSystem:
    """Collapse the incidence relation onto orbits; b_ij from a representative,
    checked against a second one whenever the orbit has one."""
    q = gq.q
    target = (q + 1) // 2
    n = len(line_orbits.orbits)
    rows = []
    for orb in point_orbits.orbits:
        rep = orb[0]
        row = [0] * n
        for l in gq.points_lines[rep]:
            row[line_orbits.orbit_of[l]] += 1
        if len(orb) > 1:
            check = [0] * n
            for l in gq.points_lines[orb[1]]:
                check[line_orbits.orbit_of[l]] += 1
            if check != row:
                raise AssertionError(
                    "tactical decomposition is inconsistent: the action was invalid"
                )
        if sum(row) != q + 1:
            raise AssertionError("row sum must equal the point degree")
        rows.append(tuple(row))
    return TacticalSystem(
        rows=tuple(rows),
        target=target,
        var_lines=tuple(line_orbits.orbits),
    )


def side_constraint_from_lines(sys: TacticalSystem, lines, bound: int) -> SideConstraint:
    wanted = set(lines)
    coeffs = tuple(
        sum(1 for l in var if l in wanted) for var in sys.var_lines
    )
    return SideConstraint(coeffs=coeffs, bound=bound)


def exclude(sys: TacticalSystem, solution_lines, alpha: int) -> TacticalSystem:
    """Strengthened no-good cut: at most alpha of the solution's lines."""
    weight = len(tuple(solution_lines))
    if alpha >= weight:
        raise DomainError(f"alpha={alpha} does not exclude a solution of weight {weight}")
    sc = side_constraint_from_lines(sys, solution_lines, alpha)
    return replace(sys, side_constraints=sys.side_constraints + (sc,))


# ---------------------------------------------------------------------------
# the exact solver


@dataclass
class SolveResult:
    solutions: list
    status: str  # "complete" | "limit_reached"
    node_count: int
    wall_time: float


class _Limits:
    def __init__(self, limits):
        limits = limits or {}
        self.max_solutions = limits.get("max_solutions")
        self.max_nodes = limits.get("max_nodes")
        self.time = limits.get("time")


class _Engine:
    """Shared DFS trail machinery for enumeration and maximization."""

    def __init__(self, sys: TacticalSystem, prescribe_vars=(), forbid_vars=()):
        self.sys = sys
        n = sys.n_vars
        self.n = n
        self.val = [-1] * n
        m = len(sys.rows)
        self.row_entries = [[] for _ in range(m)]  # row -> [(var, coeff)]
        self.var_rows = [[] for _ in range(n)]
        for i, row in enumerate(sys.rows):
            for j, c in enumerate(row):
                if c:
                    self.row_entries[i].append((j, c))
                    self.var_rows[j].append((i, c))
        self.row_sum = [0] * m
        self.row_rem = [sum(c for _, c in self.row_entries[i]) for i in range(m)]
        self.row_free = [len(self.row_entries[i]) for i in range(m)]
        k = len(sys.side_constraints)
        self.sc_sum = [0] * k
        self.var_scs = [[] for _ in range(n)]
        for s, sc in enumerate(sys.side_constraints):
            for j, c in enumerate(sc.coeffs):
                if c:
                    self.var_scs[j].append((s, c))
        self.trail: list[int] = []
        self.failed = False
        self.root_fixed = [(j, 1) for j in prescribe_vars] + [(j, 0) for j in forbid_vars]

    # -- assignment with propagation --------------------------------------

    def assign(self, j: int, value: int) -> bool:
        """Assign and propagate; False on contradiction (trail still grows).

        All counters for a variable are updated before a contradiction is
        reported, so the trail undo always restores a consistent state.
        """
        queue = [(j, value)]
        sys = self.sys
        target = sys.target
        while queue:
            j, value = queue.pop()
            cur = self.val[j]
            if cur >= 0:
                if cur != value:
                    return False
                continue
            self.val[j] = value
            self.trail.append(j)
            failed = False
            for i, c in self.var_rows[j]:
                self.row_rem[i] -= c
                self.row_free[i] -= 1
                if value:
                    self.row_sum[i] += c
                if failed:
                    continue
                s = self.row_sum[i]
                if s > target or s + self.row_rem[i] < target:
                    failed = True
                elif self.row_free[i]:
                    if s == target:
                        for j2, _ in self.row_entries[i]:
                            if self.val[j2] < 0:
                                queue.append((j2, 0))
                    elif s + self.row_rem[i] == target:
                        for j2, _ in self.row_entries[i]:
                            if self.val[j2] < 0:
                                queue.append((j2, 1))
            if value:
                for s_i, c in self.var_scs[j]:
                    self.sc_sum[s_i] += c
                    if failed:
                        continue
                    bound = sys.side_constraints[s_i].bound
                    if self.sc_sum[s_i] > bound:
                        failed = True
                    elif self.sc_sum[s_i] == bound:
                        coeffs = sys.side_constraints[s_i].coeffs
                        for j2 in range(self.n):
                            if coeffs[j2] and self.val[j2] < 0:
                                queue.append((j2, 0))
            if failed:
                return False
        return True

    def root_consistent(self) -> bool:
        """Check and propagate every row/constraint once, before any branching."""
        target = self.sys.target
        forced = []
        for i in range(len(self.sys.rows)):
            s = self.row_sum[i]
            if s > target or s + self.row_rem[i] < target:
                return False
            if self.row_free[i]:
                if s == target:
                    forced += [(j, 0) for j, _ in self.row_entries[i] if self.val[j] < 0]
                elif s + self.row_rem[i] == target:
                    forced += [(j, 1) for j, _ in self.row_entries[i] if self.val[j] < 0]
        for s_i, sc in enumerate(self.sys.side_constraints):
            if self.sc_sum[s_i] > sc.bound:
                return False
            if self.sc_sum[s_i] == sc.bound:
                forced += [
                    (j, 0) for j, c in enumerate(sc.coeffs) if c and self.val[j] < 0
                ]
        for j, v in forced:
            if not self.assign(j, v):
                return False
        return True

    def undo_to(self, mark: int):
        while len(self.trail) > mark:
            j = self.trail.pop()
            value = self.val[j]
            self.val[j] = -1
            for i, c in self.var_rows[j]:
                self.row_rem[i] += c
                self.row_free[i] += 1
                if value:
                    self.row_sum[i] -= c
            if value:
                for s_i, c in self.var_scs[j]:
                    self.sc_sum[s_i] -= c

    def pick_branch_var(self):
        """Most-constrained unsatisfied row, then largest coefficient.

        Falls back to the lowest unassigned variable when every row is
        settled (possible only for variables outside all rows), so that side
        constraints still propagate; returns None iff all assigned.
        """
        best_row, best_free = -1, None
        for i, free in enumerate(self.row_free):
            if free and (best_free is None or free < best_free):
                best_row, best_free = i, free
                if free == 1:
                    break
        if best_row < 0:
            for j in range(self.n):
                if self.val[j] < 0:
                    return j
            return None
        var, coeff = -1, -1
        for j, c in self.row_entries[best_row]:
            if self.val[j] < 0 and c > coeff:
                var, coeff = j, c
        if var < 0:
            raise AssertionError("row bookkeeping drifted")
        return var


def solve_all(
    sys: TacticalSystem,
    limits: dict | None = None,
    prescribe_lines=(),
    forbid_lines=(),
    threads: int = 1,
) -> SolveResult:
    """Enumerate every 0/1 solution, expanded to sorted line-index sets.

    Solutions are reported in canonical sorted order, so the result does
    not depend on ``threads``.  Runs with node or time limits are forced
    serial to keep the reported status meaningful.
    """
    if threads > 1 and not (limits or {}).get("max_nodes") and not (limits or {}).get("time"):
        return _solve_parallel(sys, limits, prescribe_lines, forbid_lines, threads)
    lim = _Limits(limits)
    pres, forb = _vars_from_lines(sys, prescribe_lines, forbid_lines)
    eng = _Engine(sys, pres, forb)
    t0 = time.monotonic()
    solutions: list[tuple[int, ...]] = []
    status = "complete"
    nodes = 0

    root_mark = len(eng.trail)
    ok = True
    for j, v in eng.root_fixed:
        if not eng.assign(j, v):
            ok = False
            break
    ok = ok and eng.root_consistent()

    def out_of_budget():
        nonlocal status
        if lim.max_nodes is not None and nodes > lim.max_nodes:
            status = "limit_reached"
            return True
        if lim.time is not None and time.monotonic() - t0 > lim.time:
            status = "limit_reached"
            return True
        if lim.max_solutions is not None and len(solutions) >= lim.max_solutions:
            status = "limit_reached"
            return True
        return False

    def record():
        chosen = [j for j in range(eng.n) if eng.val[j] == 1]
        solutions.append(sys.expand(chosen))

    def dfs() -> bool:
        """Returns False when the budget ran out."""
        nonlocal nodes
        j = eng.pick_branch_var()
        if j is None:
            record()
            return not out_of_budget()
        nodes += 1
        if out_of_budget():
            return False
        for value in (1, 0):
            mark = len(eng.trail)
            if eng.assign(j, value):
                if not dfs():
                    eng.undo_to(mark)
                    return False
            eng.undo_to(mark)
        return True

    if ok:
        dfs()
    eng.undo_to(root_mark)
    if status == "complete":
        solutions.sort()
    return SolveResult(
        solutions=solutions,
        status=status,
        node_count=nodes,
        wall_time=time.monotonic() - t0,
    )


def _split_roots(sys, pres, forb, want: int):
    """Feasible decision prefixes that partition the search space."""
    eng = _Engine(sys, pres, forb)
    for j, v in eng.root_fixed:
        if not eng.assign(j, v):
            return []
    if not eng.root_consistent():
        return []
    leaves: list = []  # prefixes that are already complete assignments
    frontier: list = [[]]
    while frontier and len(frontier) + len(leaves) < want:
        prefix = frontier.pop(0)
        mark = len(eng.trail)
        ok = True
        for j, v in prefix:
            if not eng.assign(j, v):
                ok = False
                break
        if ok:
            j = eng.pick_branch_var()
            if j is None:
                leaves.append(prefix)
            else:
                for value in (1, 0):
                    m2 = len(eng.trail)
                    if eng.assign(j, value):
                        frontier.append(prefix + [(j, value)])
                    eng.undo_to(m2)
        eng.undo_to(mark)
    return frontier + leaves


def _solve_parallel(sys, limits, prescribe_lines, forbid_lines, threads: int):
    from concurrent.futures import ThreadPoolExecutor

    t0 = time.monotonic()
    pres, forb = _vars_from_lines(sys, prescribe_lines, forbid_lines)
    roots = _split_roots(sys, pres, forb, 4 * threads)
    lim = _Limits(limits)

    def run(root):
        eng = _Engine(sys, pres, forb)
        for j, v in eng.root_fixed:
            if not eng.assign(j, v):
                return [], 0
        if not eng.root_consistent():
            return [], 0
        for j, v in root:
            if not eng.assign(j, v):
                return [], 0
        sols: list = []
        nodes = 0

        def dfs():
            nonlocal nodes
            j = eng.pick_branch_var()
            if j is None:
                sols.append(sys.expand([k for k in range(eng.n) if eng.val[k] == 1]))
                return
            nodes += 1
            for value in (1, 0):
                mark = len(eng.trail)
                if eng.assign(j, value):
                    dfs()
                eng.undo_to(mark)

        dfs()
        return sols, nodes

    solutions: list = []
    total_nodes = len(roots)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for sols, nodes in pool.map(run, roots):
            solutions.extend(sols)
            total_nodes += nodes
    solutions = sorted(set(solutions))
    status = "complete"
    if lim.max_solutions is not None and len(solutions) > lim.max_solutions:
        solutions = solutions[: lim.max_solutions]
        status = "limit_reached"
    return SolveResult(
        solutions=solutions,
        status=status,
        node_count=total_nodes,
        wall_time=time.monotonic() - t0,
    )


def _vars_from_lines(sys: TacticalSystem, prescribe_lines, forbid_lines):
    line_var = {}
    for j, lines in enumerate(sys.var_lines):
        for l in lines:
            line_var[l] = j
    pres = sorted({line_var[l] for l in prescribe_lines})
    forb = sorted({line_var[l] for l in forbid_lines})
    if set(pres) & set(forb):
        raise DomainError("a line is both prescribed and forbidden")
    return pres, forb


@dataclass
class MaxIntersection:
    value: int | None
    witness: tuple[int, ...] | None
    exact: bool
    node_count: int


def max_intersection(
    sys: TacticalSystem, reference_lines, limits: dict | None = None
) -> MaxIntersection:
    """Exact maximum of |solution meet reference| over solutions != reference."""
    ref = tuple(sorted(reference_lines))
    base = exclude(sys, ref, len(ref) - 1)
    lim = _Limits(limits)
    obj = side_constraint_from_lines(sys, ref, 0).coeffs  # reuse coefficient builder
    eng = _Engine(base)
    root_ok = eng.root_consistent()
    t0 = time.monotonic()
    best: int = -1
    best_sol = None
    nodes = 0
    exact = True
    obj_total = sum(obj)

    def current_obj():
        return sum(c for j, c in enumerate(obj) if c and eng.val[j] == 1)

    def upper_bound():
        return sum(c for j, c in enumerate(obj) if c and eng.val[j] != 0)

    def dfs() -> bool:
        nonlocal nodes, best, best_sol, exact
        if lim.max_nodes is not None and nodes > lim.max_nodes:
            exact = False
            return False
        if lim.time is not None and time.monotonic() - t0 > lim.time:
            exact = False
            return False
        if upper_bound() <= best:
            return True
        j = eng.pick_branch_var()
        if j is None:
            val = current_obj()
            if val > best:
                best = val
                best_sol = sys.expand([k for k in range(eng.n) if eng.val[k] == 1])
            return True
        nodes += 1
        for value in (1, 0):
            mark = len(eng.trail)
            if eng.assign(j, value):
                if not dfs():
                    eng.undo_to(mark)
                    return False
            eng.undo_to(mark)
        return True

    if root_ok:
        dfs()
    return MaxIntersection(
        value=None if best < 0 else best,
        witness=best_sol,
        exact=exact,
        node_count=nodes,
    )


# ---------------------------------------------------------------------------
# essential orbits


def essential_orbits(
    sys: TacticalSystem,
    fixed_lines,
    orbit_sets,
    limits: dict | None = None,
) -> list[tuple[int, str]]:
    """Probe each orbit: is a solution through the fixed lines possible that
    avoids the orbit entirely?  Infeasible probe = essential orbit."""
    out = []
    for idx, orb in enumerate(orbit_sets):
        if set(orb) & set(fixed_lines):
            out.append((idx, "fixed"))
            continue
        probe_limits = dict(limits or {})
        probe_limits["max_solutions"] = 1
        res = solve_all(
            sys, limits=probe_limits, prescribe_lines=fixed_lines, forbid_lines=orb
        )
        if res.solutions:
            out.append((idx, "inessential"))
        elif res.status == "complete":
            out.append((idx, "essential"))
        else:
            out.append((idx, "unknown"))
    return out


# ---------------------------------------------------------------------------
# LP export


def export_lp(sys: TacticalSystem, path: str):
    """CPLEX-LP text: constant objective, equality rows, <= cuts, binaries."""
    with open(path, "w") as fh:
        fh.write("\\ tactical hemisystem system, schema qf/1\n")
        fh.write("Minimize\n obj: 0 x0\n")
        fh.write("Subject To\n")
        for i, row in enumerate(sys.rows):
            terms = " + ".join(
                (f"{c} x{j}" if c != 1 else f"x{j}") for j, c in enumerate(row) if c
            )
            fh.write(f" p{i}: {terms} = {sys.target}\n")
        for s, sc in enumerate(sys.side_constraints):
            terms = " + ".join(
                (f"{c} x{j}" if c != 1 else f"x{j}") for j, c in enumerate(sc.coeffs) if c
            )
            fh.write(f" s{s}: {terms} <= {sc.bound}\n")
        fh.write("Binary\n")
        for j in range(sys.n_vars):
            fh.write(f" x{j}\n")
        fh.write("End\n")


def solutions_to_jsonl(result: SolveResult) -> str:
    lines = [json.dumps({"schema": "qf/1", "lines": list(sol)}) for sol in result.solutions]
    return "\n".join(lines) + ("\n" if lines else "")
