"""Exact 1-Wasserstein distance between basis distributions.

Both marginals are scaled by the least common multiple of their mass
denominators, the resulting integer transportation problem is solved by
successive shortest augmenting paths (Dijkstra with potentials, all-integer
arithmetic), and the optimum is divided back. Costs are exchange-graph
distances, so by the triangle inequality the shared mass min(mu, nu) can be
fixed in place and only the residuals routed; that reduction is on by
default and can be disabled for cross-checking.

Tie-breaking is deterministic: nodes are scanned in canonical support order
and shortest-path ties resolve to the lowest (row, column) indices, so equal
inputs always produce the identical coupling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Mapping

from .errors import UnbalancedMarginals, ValidationResult
from .matroid import Mask, basis_sort_key
from .walk import Distribution


@dataclass(frozen=True)
class TransportProblem:
    """Marginals plus an integer cost matrix over their canonical supports."""

    mu: Distribution
    nu: Distribution
    row_keys: tuple[Mask, ...]
    col_keys: tuple[Mask, ...]
    cost: tuple[tuple[int, ...], ...]  # cost[i][j], nonnegative

    @classmethod
    def from_distance(cls, mu: Distribution, nu: Distribution,
                      dist: Callable[[Mask, Mask], int]) -> "TransportProblem":
        rows = tuple(mu.support())
        cols = tuple(nu.support())
        cost = tuple(tuple(dist(x, y) for y in cols) for x in rows)
        return cls(mu, nu, rows, cols, cost)


@dataclass(frozen=True)
class Coupling:
    """Joint distribution over basis pairs; keys (x, y), masses positive."""

    masses: Mapping[tuple[Mask, Mask], Fraction]

    def items_sorted(self) -> list[tuple[tuple[Mask, Mask], Fraction]]:
        keys = sorted(self.masses,
                      key=lambda p: (basis_sort_key(p[0]), basis_sort_key(p[1])))
        return [(p, self.masses[p]) for p in keys]

    def row_marginal(self) -> dict[Mask, Fraction]:
        out: dict[Mask, Fraction] = {}
        for (x, _), q in self.masses.items():
            out[x] = out.get(x, Fraction(0)) + q
        return out

    def col_marginal(self) -> dict[Mask, Fraction]:
        out: dict[Mask, Fraction] = {}
        for (_, y), q in self.masses.items():
            out[y] = out.get(y, Fraction(0)) + q
        return out


def verify_coupling(c: Coupling, mu: Distribution, nu: Distribution) -> ValidationResult:
    """Exact marginal check; failure names the first violated marginal."""
    for q in c.masses.values():
        if q < 0:
            return ValidationResult.failed("negative mass in coupling")
    rows = c.row_marginal()
    for b in sorted(set(rows) | set(mu.masses), key=basis_sort_key):
        if rows.get(b, Fraction(0)) != mu.mass(b):
            return ValidationResult.failed(
                f"row marginal mismatch at {b}: {rows.get(b, Fraction(0))} != {mu.mass(b)}",
                witness=("row", b),
            )
    cols = c.col_marginal()
    for b in sorted(set(cols) | set(nu.masses), key=basis_sort_key):
        if cols.get(b, Fraction(0)) != nu.mass(b):
            return ValidationResult.failed(
                f"column marginal mismatch at {b}: {cols.get(b, Fraction(0))} != {nu.mass(b)}",
                witness=("column", b),
            )
    return ValidationResult.passed("marginals match exactly")


def expected_distance(c: Coupling, dist: Callable[[Mask, Mask], int]) -> Fraction:
    """Sum of mass times distance over the coupling."""
    total = Fraction(0)
    for (x, y), q in c.masses.items():
        total += q * dist(x, y)
    return total


# ── integer min-cost transportation ─────────────────────────────────────────

_INF = float("inf")


def _solve_integer_transport(supply: list[int], demand: list[int],
                             cost: list[list[int]]) -> tuple[int, dict[tuple[int, int], int]]:
    """Min-cost flow for the balanced transportation problem, all integers.

    Successive shortest augmenting paths with Johnson potentials; each
    augmentation saturates a source or a sink, so there are at most
    (rows + cols) rounds. Nodes: 0..m-1 sources, m..m+n-1 sinks.
    """
    m, n = len(supply), len(demand)
    remaining_supply = supply[:]
    remaining_demand = demand[:]
    flow: dict[tuple[int, int], int] = {}
    pot = [0] * (m + n)  # potentials keep reduced costs nonnegative
    total = 0
    pending = sum(remaining_supply)
    if pending != sum(remaining_demand):
        raise UnbalancedMarginals(
            f"supplies {pending} != demands {sum(remaining_demand)} after scaling")
    while pending:
        # Dijkstra over the residual bipartite graph from all live sources
        dist = [_INF] * (m + n)
        parent = [-1] * (m + n)
        done = [False] * (m + n)
        for i in range(m):
            if remaining_supply[i]:
                dist[i] = 0
        while True:
            v = -1
            best = _INF
            for w in range(m + n):
                if not done[w] and dist[w] < best:
                    best = dist[w]
                    v = w
            if v < 0:
                break
            done[v] = True
            if v < m:  # source: forward arcs to every sink
                dv = dist[v]
                base = pot[v]
                row = cost[v]
                for j in range(n):
                    w = m + j
                    if done[w]:
                        continue
                    nd = dv + row[j] + base - pot[w]
                    if nd < dist[w]:
                        dist[w] = nd
                        parent[w] = v
            else:  # sink: residual arcs back along positive flow
                j = v - m
                dv = dist[v]
                base = pot[v]
                for i in range(m):
                    if done[i] or not flow.get((i, j)):
                        continue
                    nd = dv - cost[i][j] - pot[i] + base
                    if nd < dist[i]:
                        dist[i] = nd
                        parent[i] = v
        # nearest deficit sink; ties resolve to the lowest column index
        sink = -1
        best = _INF
        for j in range(n):
            if remaining_demand[j] and dist[m + j] < best:
                best = dist[m + j]
                sink = m + j
        if sink < 0:
            raise UnbalancedMarginals("no augmenting path; marginals inconsistent")
        # walk back to a source, find bottleneck
        path = []
        v = sink
        while parent[v] >= 0:
            path.append((parent[v], v))
            v = parent[v]
        bottleneck = min(remaining_supply[v], remaining_demand[sink - m])
        for a, b in path:
            if a >= m:  # residual arc sink->source: limited by its flow
                bottleneck = min(bottleneck, flow[(b, a - m)])
        for a, b in path:
            if a < m:
                key = (a, b - m)
                flow[key] = flow.get(key, 0) + bottleneck
                total += bottleneck * cost[a][b - m]
            else:
                key = (b, a - m)
                flow[key] -= bottleneck
                total -= bottleneck * cost[b][a - m]
                if not flow[key]:
                    del flow[key]
        remaining_supply[v] -= bottleneck
        remaining_demand[sink - m] -= bottleneck
        pending -= bottleneck
        for w in range(m + n):
            if dist[w] < _INF:
                pot[w] += int(dist[w])
    return total, flow


def wasserstein1(p: TransportProblem,
                 fix_common_mass: bool = True) -> tuple[Fraction, Coupling]:
    """Exact optimal transport value and an optimal coupling.

    The value is zero iff the marginals are equal (costs are graph
    distances, which vanish only on the diagonal), in which case the
    coupling is the identity.
    """
    mu, nu = p.mu, p.nu
    total_mu = sum(mu.masses.values())
    total_nu = sum(nu.masses.values())
    if total_mu != total_nu:
        raise UnbalancedMarginals(f"marginal totals differ: {total_mu} != {total_nu}")

    col_index = {y: j for j, y in enumerate(p.col_keys)}
    masses: dict[tuple[Mask, Mask], Fraction] = {}
    residual_mu: dict[Mask, Fraction] = dict(mu.masses)
    residual_nu: dict[Mask, Fraction] = dict(nu.masses)

    if fix_common_mass:
        # shared mass never moves under a metric cost (triangle inequality);
        # requires zero diagonal, which graph distances guarantee
        for i, x in enumerate(p.row_keys):
            j = col_index.get(x)
            if j is None or p.cost[i][j] != 0:
                continue
            q = min(residual_mu[x], residual_nu[x])
            if q > 0:
                masses[(x, x)] = q
                residual_mu[x] -= q
                residual_nu[x] -= q

    rows = [x for x in p.row_keys if residual_mu.get(x, 0) > 0]
    cols = [y for y in p.col_keys if residual_nu.get(y, 0) > 0]
    value = Fraction(0)
    if rows:
        row_pos = {x: i for i, x in enumerate(p.row_keys)}
        denoms = [residual_mu[x].denominator for x in rows]
        denoms += [residual_nu[y].denominator for y in cols]
        scale = lcm(*denoms)
        supply = [int(residual_mu[x] * scale) for x in rows]
        demand = [int(residual_nu[y] * scale) for y in cols]
        cost = [[p.cost[row_pos[x]][col_index[y]] for y in cols] for x in rows]
        scaled_value, flow = _solve_integer_transport(supply, demand, cost)
        value = Fraction(scaled_value, scale)
        for (i, j), f in flow.items():
            if f:
                key = (rows[i], cols[j])
                masses[key] = masses.get(key, Fraction(0)) + Fraction(f, scale)

    return value, Coupling(masses)
