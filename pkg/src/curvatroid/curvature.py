"""Ollivier-Ricci curvature of the down-up walk, with certified bounds.

For adjacent bases S, T the pair curvature is 1 - W1(P(S,.), P(T,.)) under
the exchange-graph metric, and the walk's curvature is the minimum over all
adjacent pairs. Alongside the exact optimal-transport route this module
carries three closed-form certificates:

* a global lower bound depending only on the rank and ground-set size,
* a per-pair lower bound realized by an explicit coupling of the two
  down-up steps (the down-step coupling),
* a per-pair upper bound from an exhaustive split of the coupled step into
  meet / drift / separate events.

Every quantity is an exact fraction.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .errors import CurvatroidError, InvalidRank, NotAdjacent, NotABasis, ValidationResult
from .matroid import Mask, Matroid, basis_sort_key, bits
from .transport import Coupling, TransportProblem, wasserstein1
from .walk import BasisGraph, basis_graph


# ── pair frame and witness ──────────────────────────────────────────────────


@dataclass(frozen=True)
class PairFrame:
    """An adjacent basis pair S, T with the exchange made explicit.

    s_elem is the element of S - T, t_elem the element of T - S, and shared
    lists S ∩ T in canonical order.
    """

    s_basis: Mask
    t_basis: Mask
    s_elem: int
    t_elem: int
    shared: tuple[int, ...]

    def swapped(self) -> "PairFrame":
        return PairFrame(self.t_basis, self.s_basis, self.t_elem, self.s_elem,
                         self.shared)


@dataclass(frozen=True)
class DropWitness:
    """Neighborhood data for one crossing drop u (a shared element whose
    removal lets the S-side walk add t_elem directly)."""

    drop: int            # the shared element u
    ns_size: int         # #N(S - u)
    nt_size: int         # #N(T - u)
    overlap_size: int    # #(N(S - u) ∩ N(T - u))
    s_only_adds: Mask    # (N(S - u) - t) \ N(T - u): S-side adds T cannot mirror

    @property
    def s_only_count(self) -> int:
        return self.s_only_adds.bit_count()

    @property
    def t_only_count(self) -> int:
        # by symmetry: #((N(T - u) - s) \ N(S - u))
        return self.nt_size - 1 - self.overlap_size


@dataclass(frozen=True)
class PairWitness:
    """Crossing drops of a pair frame with their neighborhood statistics."""

    crossing_drops: tuple[int, ...]
    entries: tuple[DropWitness, ...]  # aligned with crossing_drops


def make_pair_frame(m: Matroid, s: Mask, t: Mask) -> PairFrame:
    """Orient an adjacent pair: the first-listed basis supplies s_elem."""
    if s not in m.bases:
        raise NotABasis("first basis is not in the family")
    if t not in m.bases:
        raise NotABasis("second basis is not in the family")
    diff = s ^ t
    if diff.bit_count() != 2:
        raise NotAdjacent("bases do not differ by a single exchange")
    s_only = diff & s
    t_only = diff & t
    shared = tuple(bits(s & t))
    return PairFrame(s, t, s_only.bit_length() - 1, t_only.bit_length() - 1, shared)


def compute_pair_witness(m: Matroid, frame: PairFrame) -> PairWitness:
    """Scan the shared elements and record the crossing drops.

    For a shared u, the S side can add t_elem after dropping u exactly when
    the T side can add s_elem (both statements say the same set is a basis).
    For non-crossing drops the two neighborhoods coincide; a violation means
    the family is not a matroid.
    """
    t_bit = 1 << frame.t_elem
    s_bit = 1 << frame.s_elem
    crossing = []
    entries = []
    for u in frame.shared:
        ns = m.exchange_neighborhood(frame.s_basis, u)
        nt = m.exchange_neighborhood(frame.t_basis, u)
        if ns & t_bit:
            if not nt & s_bit:
                raise CurvatroidError("exchange symmetry violated; not a matroid")
            overlap = ns & nt
            crossing.append(u)
            entries.append(DropWitness(
                drop=u,
                ns_size=ns.bit_count(),
                nt_size=nt.bit_count(),
                overlap_size=overlap.bit_count(),
                s_only_adds=ns & ~nt & ~t_bit,
            ))
        elif ns != nt:
            raise CurvatroidError(
                "non-crossing drop with unequal neighborhoods; not a matroid")
    return PairWitness(tuple(crossing), tuple(entries))


# ── closed-form bounds ──────────────────────────────────────────────────────


def theorem_lb_global(k: int, n: int) -> Fraction:
    """Curvature lower bound for every rank-k matroid on n elements.

    For n > k + 1 this is -1 + 2/k + 3(k-1)/(k(n-k+1)); for n = k + 1 the
    stronger constant 1/k holds.
    """
    if not 1 <= k < n:
        raise InvalidRank(f"need 1 <= k < n, got k={k}, n={n}")
    if n == k + 1:
        return Fraction(1, k)
    return -1 + Fraction(2, k) + Fraction(3 * (k - 1), k * (n - k + 1))


def downstep_lb_pair(m: Matroid, frame: PairFrame,
                     witness: PairWitness | None = None) -> Fraction:
    """Pair curvature lower bound: 1 minus the down-step coupling's exact
    expected distance, in closed form.

    Dropping the exchanged elements (probability 1/k) the walks meet.
    A non-crossing shared drop leaves the walks at distance one. For a
    crossing drop u the coupled up-steps meet with probability 1/max,
    agree (distance one) with probability overlap/max, and the leftover
    lands at distance one exactly on the forced residual of the meeting
    column, mass 1/min - 1/max, everything else at distance two. The terms
    are symmetric in the two bases, so the value is orientation-invariant.
    """
    if witness is None:
        witness = compute_pair_witness(m, frame)
    k = m.rank
    total = Fraction(1, k) - Fraction(len(witness.entries), k)
    for e in witness.entries:
        hi = max(e.ns_size, e.nt_size)
        lo = min(e.ns_size, e.nt_size)
        total += Fraction(1 + e.overlap_size, k * hi) + Fraction(1, k * lo)
    return total


def theorem_ub_values(m: Matroid, frame: PairFrame,
                      witness: PairWitness | None = None) -> tuple[Fraction, Fraction]:
    """Both orientations of the per-pair upper bound.

    Forward: 1/k + (1/k) * sum over crossing drops of
    (1/#N(T-u) - #onlyS/#N(S-u)); reverse swaps the roles of S and T.
    """
    if witness is None:
        witness = compute_pair_witness(m, frame)
    k = m.rank
    forward = Fraction(1, k)
    reverse = Fraction(1, k)
    for e in witness.entries:
        forward += Fraction(1, k * e.nt_size) - Fraction(e.s_only_count, k * e.ns_size)
        reverse += Fraction(1, k * e.ns_size) - Fraction(e.t_only_count, k * e.nt_size)
    return forward, reverse


def theorem_ub_pair(m: Matroid, frame: PairFrame,
                    witness: PairWitness | None = None) -> Fraction:
    """The tighter of the two orientations of the per-pair upper bound."""
    forward, reverse = theorem_ub_values(m, frame, witness)
    return min(forward, reverse)


# ── the down-step coupling ──────────────────────────────────────────────────


@dataclass(frozen=True)
class CouplingCell:
    """One outcome of the coupled down-up step (kept per drop, unaggregated)."""

    drop_from_s: int
    drop_from_t: int
    add_to_s: int
    add_to_t: int
    x: Mask
    y: Mask
    mass: Fraction
    distance: int


@dataclass(frozen=True)
class DownstepCoupling:
    """Full outcome table of the down-step coupling for one pair."""

    frame: PairFrame
    cells: tuple[CouplingCell, ...]

    def coupling(self) -> Coupling:
        masses: dict[tuple[Mask, Mask], Fraction] = {}
        for c in self.cells:
            key = (c.x, c.y)
            masses[key] = masses.get(key, Fraction(0)) + c.mass
        return Coupling(masses)

    def expected_distance(self) -> Fraction:
        return sum((c.mass * c.distance for c in self.cells), Fraction(0))

    def mass_multiset(self) -> list[Fraction]:
        return sorted((c.mass for c in self.cells), reverse=True)


def downstep_coupling_table(m: Matroid, frame: PairFrame) -> DownstepCoupling:
    """Couple the two walks: drop the same shared element on both sides (or
    the exchanged pair s, t together), then pair the up-steps.

    After a crossing drop the S-side add of t is paired with the T-side add
    of s (the walks meet), shared candidates are paired identically, and the
    residual mass is filled by the product rule. Every outcome pair sits at
    distance at most two; the expected distance does not depend on the
    residual filling because the only distance-one residual column is
    marginal-forced.
    """
    g = basis_graph(m)
    k = m.rank
    s_bit = 1 << frame.s_elem
    t_bit = 1 << frame.t_elem
    drop_prob = Fraction(1, k)
    cells: list[CouplingCell] = []

    def emit(drop_s, drop_t, add_s, add_t, x, y, mass):
        d = 0 if x == y else g.distance(x, y)
        if d > 2:
            raise CurvatroidError("coupling produced a pair beyond distance two")
        cells.append(CouplingCell(drop_s, drop_t, add_s, add_t, x, y, mass, d))

    # both walks drop their exchanged element: identical completions
    rest = frame.s_basis ^ s_bit
    comps = m.exchange_neighborhood(frame.s_basis, frame.s_elem)
    step = drop_prob / comps.bit_count()
    for x in bits(comps):
        target = rest | (1 << x)
        emit(frame.s_elem, frame.t_elem, x, x, target, target, step)

    for u in frame.shared:
        u_bit = 1 << u
        s_sub = frame.s_basis ^ u_bit
        t_sub = frame.t_basis ^ u_bit
        ns = m.exchange_neighborhood(frame.s_basis, u)
        nt = m.exchange_neighborhood(frame.t_basis, u)
        a, b = ns.bit_count(), nt.bit_count()
        if ns & t_bit:
            # crossing drop: meet on (add t, add s), mirror the overlap
            hi = max(a, b)
            match = drop_prob / hi
            meet = s_sub | t_bit
            if meet != (t_sub | s_bit):
                raise CurvatroidError("exchange bookkeeping error")
            emit(u, u, frame.t_elem, frame.s_elem, meet, meet, match)
            overlap = ns & nt
            for v in bits(overlap):
                v_bit = 1 << v
                emit(u, u, v, v, s_sub | v_bit, t_sub | v_bit, match)
            left_s = []
            for x in bits(ns):
                q = drop_prob / a - (match if (x == frame.t_elem or (1 << x) & overlap) else 0)
                if q > 0:
                    left_s.append((x, q))
            left_t = []
            for y in bits(nt):
                q = drop_prob / b - (match if (y == frame.s_elem or (1 << y) & overlap) else 0)
                if q > 0:
                    left_t.append((y, q))
            total_left = sum(q for _, q in left_s)
            if total_left != sum(q for _, q in left_t):
                raise CurvatroidError("residual masses out of balance")
            for x, qx in left_s:
                for y, qy in left_t:
                    emit(u, u, x, y, s_sub | (1 << x), t_sub | (1 << y),
                         qx * qy / total_left)
        else:
            if ns != nt:
                raise CurvatroidError(
                    "non-crossing drop with unequal neighborhoods; not a matroid")
            step = drop_prob / a
            for v in bits(ns):
                v_bit = 1 << v
                emit(u, u, v, v, s_sub | v_bit, t_sub | v_bit, step)

    return DownstepCoupling(frame, tuple(cells))


def build_downstep_coupling(m: Matroid, frame: PairFrame) -> Coupling:
    """The down-step coupling as an aggregated joint distribution."""
    return downstep_coupling_table(m, frame).coupling()


def downstep_lb_via_coupling(m: Matroid, frame: PairFrame) -> Fraction:
    """1 minus the constructed coupling's expected distance.

    Must equal downstep_lb_pair exactly; a difference signals a bug in one
    of the two routes.
    """
    return 1 - downstep_coupling_table(m, frame).expected_distance()


# ── exact curvature ─────────────────────────────────────────────────────────


def exact_pair_curvature(m: Matroid, frame: PairFrame) -> Fraction:
    """1 - W1 between the two one-step distributions."""
    g = basis_graph(m)
    problem = TransportProblem.from_distance(
        g.kernel(frame.s_basis), g.kernel(frame.t_basis), g.distance)
    value, _ = wasserstein1(problem)
    return 1 - value


def proposition_distance_check(m: Matroid, frame: PairFrame, u: int,
                               a: int | None = None) -> ValidationResult:
    """Verify that an S-only add lands far from T's one-step range.

    For a crossing drop u and a in (N(S-u) - t) \\ N(T-u), the basis S-u+a
    must be at distance >= 2 from every neighbor of T except T-u+s, T-t+s
    and T-t+a (those that are bases). With a=None every such a is checked;
    a vacuous pass is reported when there are none.
    """
    witness = compute_pair_witness(m, frame)
    try:
        idx = witness.crossing_drops.index(u)
    except ValueError:
        raise CurvatroidError(f"{m.labels[u]!r} is not a crossing drop") from None
    adds_mask = witness.entries[idx].s_only_adds
    if a is None:
        adds = list(bits(adds_mask))
        if not adds:
            return ValidationResult.passed("no one-sided adds: vacuous")
    else:
        if not adds_mask & (1 << a):
            raise CurvatroidError(f"{m.labels[a]!r} is not a one-sided add for this drop")
        adds = [a]

    g = basis_graph(m)
    t = frame.t_basis
    neighbors = []
    for x in bits(t):
        for y in bits(m.exchange_neighborhood(t, x)):
            if y != x:
                neighbors.append((t ^ (1 << x)) | (1 << y))
    u_bit = 1 << u
    s_bit = 1 << frame.s_elem
    t_bit = 1 << frame.t_elem
    for cand in adds:
        probe = (frame.s_basis ^ u_bit) | (1 << cand)
        exceptions = {(t ^ u_bit) | s_bit, (t ^ t_bit) | s_bit}
        with_a = (t ^ t_bit) | (1 << cand)
        if with_a in m.bases:
            exceptions.add(with_a)
        for z in neighbors:
            if z in exceptions:
                continue
            if g.distance(probe, z) < 2:
                return ValidationResult.failed(
                    f"{m.labels_of(probe)} is near neighbor {m.labels_of(z)}",
                    witness=(probe, z),
                )
    return ValidationResult.passed(f"checked {len(adds)} add(s) against "
                                   f"{len(neighbors)} neighbors")


# ── reports ─────────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class PairReport:
    frame: PairFrame
    witness: PairWitness
    downstep_lb: Fraction
    ub_forward: Fraction
    ub_reverse: Fraction
    theorem_ub: Fraction
    coupling_expected_distance: Fraction
    kappa_exact: Fraction | None


@dataclass(frozen=True)
class GlobalReport:
    kappa_exact: Fraction | None
    argmin_pair: tuple[Mask, Mask] | None
    theorem_lb: Fraction | None
    downstep_lb: Fraction | None
    theorem_ub: Fraction | None
    pair_count: int
    degenerate: bool = False
    audited: bool = False


def compute_pair_report(m: Matroid, s: Mask, t: Mask, exact: bool = True) -> PairReport:
    """All per-pair quantities for one adjacent pair."""
    frame = make_pair_frame(m, s, t)
    witness = compute_pair_witness(m, frame)
    lb = downstep_lb_pair(m, frame, witness)
    forward, reverse = theorem_ub_values(m, frame, witness)
    expected = downstep_coupling_table(m, frame).expected_distance()
    if lb != 1 - expected:
        raise CurvatroidError("down-step bound disagrees with its coupling")
    kappa = exact_pair_curvature(m, frame) if exact else None
    return PairReport(frame, witness, lb, forward, reverse, min(forward, reverse),
                      expected, kappa)


def _pair_key(pair: tuple[Mask, Mask]) -> tuple:
    return (basis_sort_key(pair[0]), basis_sort_key(pair[1]))


def canonical_pairs(m: Matroid) -> list[tuple[Mask, Mask]]:
    """Adjacent pairs, each oriented and listed in canonical order."""
    pairs = []
    for x, y in m.adjacent_basis_pairs():
        if basis_sort_key(x) > basis_sort_key(y):
            x, y = y, x
        pairs.append((x, y))
    pairs.sort(key=_pair_key)
    return pairs


def resolve_workers(workers: int | None = None) -> int:
    """Worker count for pair fan-out, capped by CURVATROID_THREADS."""
    cap = os.environ.get("CURVATROID_THREADS")
    limit = max(1, int(cap)) if cap else None
    if workers is None:
        workers = limit or 1
    if limit is not None:
        workers = min(workers, limit)
    return max(1, workers)


def global_curvature(m: Matroid, exact: bool = True, collapse: bool = True,
                     workers: int | None = None,
                     audit_all_pairs: bool = False) -> GlobalReport:
    """Minimum pair curvature over every adjacent pair, plus global bounds.

    When a pair's lower and upper bounds agree the sandwiched value is
    already exact and the transport solve is skipped (disable with
    collapse=False). A single-basis family has no pairs; by convention it
    reports curvature 1 with the degenerate flag set. With audit_all_pairs
    the minimum of 1 - W1/d over all basis pairs (any distance) is computed
    as well and must agree with the adjacent-pair minimum.
    """
    theorem_lb = theorem_lb_global(m.rank, m.n) if m.rank < m.n else None
    pairs = canonical_pairs(m)
    if not pairs:
        return GlobalReport(Fraction(1) if exact else None, None, theorem_lb,
                            None, None, 0, degenerate=True)

    g = basis_graph(m)
    frames = []
    lb_min = ub_min = None
    bounds = []
    for x, y in pairs:
        frame = make_pair_frame(m, x, y)
        witness = compute_pair_witness(m, frame)
        lb = downstep_lb_pair(m, frame, witness)
        ub = theorem_ub_pair(m, frame, witness)
        frames.append(frame)
        bounds.append((lb, ub))
        if lb_min is None or lb < lb_min:
            lb_min = lb
        if ub_min is None or ub < ub_min:
            ub_min = ub

    kappa = None
    argmin = None
    if exact:
        workers = resolve_workers(workers)

        def pair_kappa(i: int) -> Fraction:
            lb, ub = bounds[i]
            if collapse and lb == ub:
                return lb
            return exact_pair_curvature(m, frames[i])

        if workers > 1:
            for b in m.sorted_bases():  # warm caches so threads only read
                g.kernel(b)
                g.row(b)
            with ThreadPoolExecutor(max_workers=workers) as pool:
                kappas = list(pool.map(pair_kappa, range(len(pairs))))
        else:
            kappas = [pair_kappa(i) for i in range(len(pairs))]
        kappa = min(kappas)
        argmin = pairs[kappas.index(kappa)]  # first minimal pair, canonical order

    audited = False
    if audit_all_pairs and exact:
        order = m.sorted_bases()
        worst = None
        for i, x in enumerate(order):
            for y in order[i + 1:]:
                d = g.distance(x, y)
                problem = TransportProblem.from_distance(g.kernel(x), g.kernel(y),
                                                         g.distance)
                value, _ = wasserstein1(problem)
                ratio = 1 - Fraction(value, d)
                if worst is None or ratio < worst:
                    worst = ratio
        if worst != kappa:
            raise CurvatroidError(
                f"all-pairs audit disagrees: {worst} != adjacent minimum {kappa}")
        audited = True

    return GlobalReport(kappa, argmin, theorem_lb, lb_min, ub_min, len(pairs),
                        degenerate=False, audited=audited)
