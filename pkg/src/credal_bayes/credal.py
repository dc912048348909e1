"""The core of a capacity as a concrete polytope.

Membership testing and emptiness detection work for any capacity; vertex
enumeration is provided only for 2-alternating (concave) capacities,
where the extreme points are the marginal vectors of outcome orderings.
General polytope vertex enumeration is deliberately absent: optimization
over arbitrary cores goes through the LP path in :mod:`.optim`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from ._numeric import encode_number, opt_tol
from .capacity import Capacity, CheckResult, OutcomeSpace, ProbabilityVector
from .capacity import is_two_alternating
from .errors import NotTwoAlternating, SpaceTooLarge
from .optim import core_feasible

MAX_VERTEX_OUTCOMES = 10  # n! orderings before deduplication


@dataclass(frozen=True)
class CredalSet:
    """A core polytope: the domination constraints plus, for concave
    capacities, the cached list of extreme points."""

    space: OutcomeSpace
    constraint_capacity: Capacity
    vertices: tuple[ProbabilityVector, ...] | None = None

    @classmethod
    def from_capacity(cls, c: Capacity) -> "CredalSet":
        verts = None
        if c.space.n <= MAX_VERTEX_OUTCOMES and is_two_alternating(c):
            verts = core_vertices_two_monotone(c)
        return cls(c.space, c, verts)


def core_membership(c: Capacity, p: ProbabilityVector, tol=None) -> CheckResult:
    """Is ``p`` dominated by ``c`` on every event?

    On failure the witness is the maximally violated event mask.
    """
    if c.space != p.space:
        raise ValueError("capacity and vector live on different spaces")
    if tol is None:
        tol = opt_tol(c.exact and p.exact)
    table = p.mass_table()
    worst_mask, worst_gap = None, 0
    for m in range(c.space.size):
        gap = table[m] - c.values[m]
        if gap > tol and gap > worst_gap:
            worst_mask, worst_gap = m, gap
    if worst_mask is None:
        return CheckResult(True)
    return CheckResult(False, worst_mask)


def is_core_empty(c: Capacity) -> bool:
    """True when no probability vector is dominated by ``c``.

    Feasibility reuses the LP kernel with a zero objective; verdicts near
    the boundary are settled in exact arithmetic.
    """
    return not core_feasible(c)


def core_vertices_two_monotone(c: Capacity) -> tuple[ProbabilityVector, ...]:
    """Extreme points of the core of a 2-alternating capacity.

    Each ordering of the outcomes yields the marginal vector that assigns
    every outcome the increment of ``c`` along the ordering's prefixes.
    Duplicates collapse (componentwise 1e-12, exact in rational mode) and
    the result is sorted lexicographically so serialized output is stable.
    """
    n = c.space.n
    if n > MAX_VERTEX_OUTCOMES:
        raise SpaceTooLarge(
            f"vertex enumeration needs n <= {MAX_VERTEX_OUTCOMES}, got {n}"
        )
    verdict = is_two_alternating(c)
    if not verdict:
        raise NotTwoAlternating(
            "vertex enumeration needs a 2-alternating capacity",
            witness=verdict.witness,
        )
    exact = c.exact
    seen: dict[tuple, tuple] = {}
    for order in permutations(range(n)):
        mass = [0] * n
        mask = 0
        prev = c.values[0]
        for i in order:
            mask |= 1 << i
            cur = c.values[mask]
            mass[i] = cur - prev
            prev = cur
        key = tuple(mass) if exact else tuple(round(float(x), 12) for x in mass)
        if key not in seen:
            seen[key] = tuple(mass)
    return tuple(
        ProbabilityVector(c.space, mass) for mass in sorted(seen.values())
    )


def vertices_to_json(vertices) -> list:
    """Vertex lists as arrays of mass arrays, in lexicographic order, so
    serialized output diffs stay stable."""
    rows = sorted(tuple(v.mass) for v in vertices)
    return [[encode_number(x) for x in row] for row in rows]


def random_core_points(
    c: Capacity, count: int, rng
) -> tuple[ProbabilityVector, ...]:
    """Random interior points: convex mixtures of the core's vertices.

    Stays inside the polytope by construction. Needs a 2-alternating
    capacity (for the vertex list) and a seeded ``random.Random``.
    """
    verts = core_vertices_two_monotone(c)
    n = c.space.n
    out = []
    for _ in range(count):
        weights = [rng.random() for _ in verts]
        total = sum(weights)
        mix = [0.0] * n
        for w, v in zip(weights, verts):
            f = w / total
            for i in range(n):
                mix[i] += f * float(v.mass[i])
        s = sum(mix)
        out.append(ProbabilityVector(c.space, tuple(x / s for x in mix)))
    return tuple(out)
