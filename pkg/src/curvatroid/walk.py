"""The down-up basis-exchange walk and the basis exchange graph.

One walk step from a basis S: drop an element u of S uniformly, then replace
S - u by a uniform choice among all bases containing it. All masses are
exact fractions. The exchange graph (bases adjacent when they differ by one
exchange) carries the metric used by the transport layer; distances come
from BFS, with every served row checked against the symmetric-difference
formula d(X, Y) = |X - Y| before use, so the fast formula is verified for
the matroid at hand rather than assumed.
"""

from __future__ import annotations

import weakref
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import NotABasis
from .matroid import Mask, Matroid, basis_sort_key, bits


@dataclass(frozen=True)
class Distribution:
    """Probability distribution over bases (masks), masses exact and positive."""

    masses: Mapping[Mask, Fraction]

    def __post_init__(self):
        frozen = MappingProxyType(dict(self.masses))
        object.__setattr__(self, "masses", frozen)
        total = Fraction(0)
        for b, q in frozen.items():
            if q <= 0:
                raise ValueError(f"nonpositive mass {q} on {b}")
            total += q
        if total != 1:
            raise ValueError(f"masses sum to {total}, not 1")

    def mass(self, b: Mask) -> Fraction:
        return self.masses.get(b, Fraction(0))

    def support(self) -> list[Mask]:
        """Support in canonical order."""
        return sorted(self.masses, key=basis_sort_key)

    def items_sorted(self) -> list[tuple[Mask, Fraction]]:
        return [(b, self.masses[b]) for b in self.support()]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        return dict(self.masses) == dict(other.masses)


def transition_distribution(m: Matroid, s: Mask) -> Distribution:
    """One-step distribution of the down-up walk started at basis s.

    Multiple (drop, add) routes to the same target are summed into a single
    support entry; the result always puts positive mass on s itself.
    """
    if s not in m.bases:
        raise NotABasis("walk must start at a basis")
    k = m.rank
    out: dict[Mask, Fraction] = {}
    for u in bits(s):
        sub = s ^ (1 << u)
        completions = m.exchange_neighborhood(s, u)
        step = Fraction(1, k * completions.bit_count())
        for x in bits(completions):
            target = sub | (1 << x)
            out[target] = out.get(target, Fraction(0)) + step
    return Distribution(out)


class BasisGraph:
    """Exchange graph on the basis family with verified distance service.

    Rows of the distance table are produced by BFS and compared against the
    symmetric-difference formula. After `verify_budget` distinct sources
    check out clean, later rows are served by the formula directly; a
    mismatch (possible only for families violating the exchange axiom)
    permanently disables the formula and keeps serving BFS rows.
    """

    def __init__(self, m: Matroid, verify_budget: int = 64):
        self.matroid = m
        self.order = m.sorted_bases()
        self.index = {b: i for i, b in enumerate(self.order)}
        self.adj: list[list[int]] = [[] for _ in self.order]
        for x, y in m.adjacent_basis_pairs():
            xi, yi = self.index[x], self.index[y]
            self.adj[xi].append(yi)
            self.adj[yi].append(xi)
        self.verify_budget = verify_budget
        self._rows: dict[int, list[int]] = {}
        self._verified = 0
        self._formula_ok = True
        self._kernels: dict[Mask, Distribution] = {}

    def __len__(self) -> int:
        return len(self.order)

    def kernel(self, s: Mask) -> Distribution:
        """Cached transition distribution."""
        dist = self._kernels.get(s)
        if dist is None:
            dist = transition_distribution(self.matroid, s)
            self._kernels[s] = dist
        return dist

    # -- distances --------------------------------------------------------

    def _bfs_row(self, src: int) -> list[int]:
        row = [-1] * len(self.order)
        row[src] = 0
        queue = deque([src])
        while queue:
            v = queue.popleft()
            dnext = row[v] + 1
            for w in self.adj[v]:
                if row[w] < 0:
                    row[w] = dnext
                    queue.append(w)
        return row

    def _formula_row(self, src: int) -> list[int]:
        x = self.order[src]
        return [(x & ~y).bit_count() for y in self.order]

    def row(self, x: Mask) -> list[int]:
        """Distances from basis x to every basis, in canonical order."""
        src = self._vertex(x)
        row = self._rows.get(src)
        if row is not None:
            return row
        if self._formula_ok and self._verified >= self.verify_budget:
            row = self._formula_row(src)
        else:
            row = self._bfs_row(src)
            if self._formula_ok:
                if row == self._formula_row(src):
                    self._verified += 1
                else:
                    self._formula_ok = False
        self._rows[src] = row
        return row

    def _vertex(self, x: Mask) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise NotABasis(f"mask {x} is not a vertex of the basis graph") from None

    def distance(self, x: Mask, y: Mask) -> int:
        d = self.row(x)[self._vertex(y)]
        if d < 0:
            raise NotABasis(
                "basis graph is disconnected (family violates the exchange axiom)"
            )
        return d

    def verify_distance_formula(self) -> bool:
        """Exhaustively compare BFS against |X - Y| from every source."""
        for src in range(len(self.order)):
            if self._bfs_row(src) != self._formula_row(src):
                return False
        return True


_graphs: "weakref.WeakKeyDictionary[Matroid, BasisGraph]" = weakref.WeakKeyDictionary()


def basis_graph(m: Matroid) -> BasisGraph:
    """Per-matroid cached exchange graph."""
    g = _graphs.get(m)
    if g is None:
        g = BasisGraph(m)
        _graphs[m] = g
    return g


def basis_distance(g: BasisGraph, x: Mask, y: Mask) -> int:
    """Shortest-path distance between two bases in the exchange graph."""
    return g.distance(x, y)


def distance_matrix(g: BasisGraph, sources: Iterable[Mask]) -> dict[Mask, dict[Mask, int]]:
    """Exact distances from each source to every basis."""
    out = {}
    for x in sources:
        row = g.row(x)
        out[x] = {y: row[i] for i, y in enumerate(g.order)}
    return out
