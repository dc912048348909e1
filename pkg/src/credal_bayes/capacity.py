"""Set functions on a finite outcome space.

Events are subsets of the outcome space encoded as int bitmasks: bit i is
set when outcome i belongs to the event. A :class:`Capacity` stores one
value per event in a dense tuple of length ``2**n`` indexed by mask, which
keeps every lookup O(1) and every sweep a plain range loop.

Values are either binary floats (default) or exact rationals
(:class:`fractions.Fraction`); all operations preserve whichever mode the
inputs carry. Structural comparisons use a tolerance of 1e-12 in float
mode and are exact in rational mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, InitVar
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ._numeric import (
    STRUCT_TOL,
    all_exact,
    encode_number,
    exact_number,
    parse_number,
    struct_tol,
)
from .errors import EmptyFamily, NotMonotone, NotNormalized, SpaceTooLarge

MAX_OUTCOMES = 20          # dense 2**n storage cap
MAX_PAIR_CHECK = 12        # exhaustive concavity check cap


@dataclass(frozen=True)
class OutcomeSpace:
    """An ordered finite set of outcome labels.

    Labels double as JSON keys (comma-joined), so they must be nonempty,
    unique and comma-free.
    """

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if not 1 <= len(self.labels) <= MAX_OUTCOMES:
            raise ValueError(f"need between 1 and {MAX_OUTCOMES} outcomes, got {len(self.labels)}")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("outcome labels must be unique")
        for lab in self.labels:
            if not isinstance(lab, str) or not lab or "," in lab:
                raise ValueError(f"bad outcome label {lab!r}: labels are nonempty comma-free strings")
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(self.labels)})

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def size(self) -> int:
        """Number of events, ``2**n``."""
        return 1 << len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.labels)) - 1

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"unknown outcome label {label!r}") from None

    def mask_of(self, labels: Iterable[str]) -> int:
        m = 0
        for lab in labels:
            m |= 1 << self.index(lab)
        return m

    def labels_of(self, mask: int) -> tuple[str, ...]:
        self.check_mask(mask)
        return tuple(lab for i, lab in enumerate(self.labels) if mask >> i & 1)

    def complement(self, mask: int) -> int:
        self.check_mask(mask)
        return self.full_mask ^ mask

    def check_mask(self, mask: int) -> None:
        if not isinstance(mask, int) or not 0 <= mask <= self.full_mask:
            raise ValueError(f"event mask {mask!r} out of range for {self.n} outcomes")

    def event_key(self, mask: int) -> str:
        """Serialization key: comma-joined sorted labels, "" for the empty event."""
        return ",".join(sorted(self.labels_of(mask)))

    def mask_from_key(self, key: str) -> int:
        if key == "":
            return 0
        return self.mask_of(key.split(","))

    def events_by_size(self) -> list[int]:
        """All event masks ordered by cardinality, ties by mask value."""
        return sorted(range(self.size), key=lambda m: (m.bit_count(), m))


@dataclass(frozen=True)
class CheckResult:
    """Boolean verdict plus an optional witness of failure.

    Truthiness follows ``ok`` so results drop into plain conditionals.
    """

    ok: bool
    witness: tuple | int | None = None

    def __bool__(self) -> bool:
        return self.ok


def event_mass_table(mass: Sequence, n: int) -> list:
    """Per-event sums of a per-outcome vector, indexed by mask.

    Additions run in ascending outcome order so the float result is
    bit-identical to a direct ascending-index sum.
    """
    table = [0] * (1 << n)
    for m in range(1, 1 << n):
        high = m.bit_length() - 1
        table[m] = table[m ^ (1 << high)] + mass[high]
    return table


@dataclass(frozen=True)
class ProbabilityVector:
    """A point of the probability simplex over an outcome space."""

    space: OutcomeSpace
    mass: tuple

    def __post_init__(self):
        object.__setattr__(self, "mass", tuple(self.mass))
        if len(self.mass) != self.space.n:
            raise ValueError(f"expected {self.space.n} weights, got {len(self.mass)}")
        exact = all_exact(self.mass)
        object.__setattr__(self, "_exact", exact)
        total = 0
        for w in self.mass:
            if not exact_number(w) and not math.isfinite(w):
                raise ValueError("weights must be finite")
            if w < 0:
                raise ValueError(f"negative weight {w!r}")
            total += w
        if exact:
            if total != 1:
                raise ValueError(f"weights sum to {total}, expected exactly 1")
        elif abs(total - 1) > STRUCT_TOL:
            raise ValueError(f"weights sum to {total!r}, expected 1 within {STRUCT_TOL}")

    @property
    def exact(self) -> bool:
        return self._exact

    def event_mass(self, mask: int):
        """Total weight of an event, summed in ascending outcome order."""
        self.space.check_mask(mask)
        total = 0
        for i in range(self.space.n):
            if mask >> i & 1:
                total += self.mass[i]
        return total

    def mass_table(self) -> list:
        return event_mass_table(self.mass, self.space.n)


def uniform_vector(space: OutcomeSpace, exact: bool = False) -> ProbabilityVector:
    if exact:
        return ProbabilityVector(space, (Fraction(1, space.n),) * space.n)
    return ProbabilityVector(space, (1.0 / space.n,) * space.n)


@dataclass(frozen=True)
class Capacity:
    """A normalized monotone set function: 0 at the empty event, 1 at the
    full event, and nondecreasing along inclusion.

    Construction validates the invariants (pass ``check=False`` only for
    values that are monotone by construction). Conjugation partners are
    cached so that double conjugation returns the original object.
    """

    space: OutcomeSpace
    values: tuple
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != self.space.size:
            raise ValueError(
                f"expected {self.space.size} event values, got {len(self.values)}"
            )
        object.__setattr__(self, "_exact", all_exact(self.values))
        object.__setattr__(self, "_conjugate", None)
        object.__setattr__(self, "_two_alternating", None)
        if check:
            self._validate()

    @property
    def exact(self) -> bool:
        return self._exact

    def value(self, mask: int):
        self.space.check_mask(mask)
        return self.values[mask]

    def __getitem__(self, mask: int):
        return self.values[mask]

    def _validate(self) -> None:
        tol = struct_tol(self.exact)
        v = self.values
        if not self.exact:
            for x in v:
                if not exact_number(x) and not math.isfinite(x):
                    raise NotNormalized("event values must be finite numbers")
        if abs(v[0]) > tol:
            raise NotNormalized(f"value at the empty event is {v[0]!r}, expected 0")
        # Covers imply the full inclusion order, so checking A vs A+{x}
        # suffices and costs O(n 2^n) instead of O(4^n). Monotonicity is
        # checked before top normalization so a decreasing pair wins the
        # rejection even when the full event is also off.
        witness = _monotone_witness(v, self.space.n, tol)
        if witness is not None:
            a, b = witness
            raise NotMonotone(
                f"value decreases from {self.space.event_key(a)!r} ({v[a]!r}) "
                f"to {self.space.event_key(b)!r} ({v[b]!r})",
                witness=witness,
            )
        full = self.space.full_mask
        if abs(v[full] - 1) > tol:
            raise NotNormalized(f"value at the full event is {v[full]!r}, expected 1")


def _monotone_witness(values: tuple, n: int, tol) -> tuple[int, int] | None:
    if all_exact(values):
        for m in range(1 << n):
            vm = values[m]
            for i in range(n):
                bit = 1 << i
                if not m & bit and vm > values[m | bit] + tol:
                    return (m, m | bit)
        return None
    v = np.asarray(values, dtype=float)
    masks = np.arange(1 << n)
    for i in range(n):
        bit = 1 << i
        lower = masks[(masks & bit) == 0]
        bad = np.nonzero(v[lower] > v[lower | bit] + tol)[0]
        if bad.size:
            a = int(lower[bad[0]])
            return (a, a | bit)
    return None


def validate(values, space: OutcomeSpace) -> Capacity:
    """Build a validated capacity from a dense sequence or a mask-keyed mapping.

    Raises :class:`NotNormalized` or :class:`NotMonotone` (with a witness
    pair) on the first violated constraint.
    """
    if isinstance(values, dict):
        if set(values) != set(range(space.size)):
            raise ValueError(f"expected one value per event mask 0..{space.size - 1}")
        values = tuple(values[m] for m in range(space.size))
    else:
        values = tuple(values)
    return Capacity(space, values)


def conjugate(c: Capacity) -> Capacity:
    """The conjugate set function, ``A -> 1 - c(complement of A)``.

    Monotone and normalized whenever ``c`` is, so no re-validation.
    Partners are cached: ``conjugate(conjugate(c)) is c``, which makes the
    involution exact even in float mode.
    """
    if c._conjugate is not None:
        return c._conjugate
    full = c.space.full_mask
    vals = tuple(1 - c.values[full ^ m] for m in range(c.space.size))
    k = Capacity(c.space, vals, check=False)
    object.__setattr__(k, "_conjugate", c)
    object.__setattr__(c, "_conjugate", k)
    return k


def is_two_alternating(c: Capacity, tol=None) -> CheckResult:
    """Exhaustively test concavity: c(A|B) + c(A&B) <= c(A) + c(B) for all pairs.

    Returns a witness pair on failure. Capped at 12 outcomes; the pair
    sweep is quadratic in the number of events.
    """
    memoised = tol is None
    if memoised and c._two_alternating is not None:
        return c._two_alternating
    if c.space.n > MAX_PAIR_CHECK:
        raise SpaceTooLarge(
            f"concavity check needs n <= {MAX_PAIR_CHECK}, got {c.space.n}"
        )
    if tol is None:
        tol = struct_tol(c.exact)
    result = _two_alternating_result(c, tol)
    if memoised:
        object.__setattr__(c, "_two_alternating", result)
    return result


def _two_alternating_result(c: Capacity, tol) -> CheckResult:
    size = c.space.size
    v = c.values
    if c.exact:
        for a in range(size):
            va = v[a]
            for b in range(a + 1, size):
                if a & b == a or a & b == b:
                    continue  # nested pairs hold with equality rearranged
                if v[a | b] + v[a & b] > va + v[b] + tol:
                    return CheckResult(False, (a, b))
        return CheckResult(True)
    arr = np.asarray(v, dtype=float)
    masks = np.arange(size)
    for a in range(size):
        lhs = arr[masks | a] + arr[masks & a]
        rhs = arr[a] + arr
        bad = np.nonzero(lhs > rhs + tol)[0]
        if bad.size:
            return CheckResult(False, (a, int(bad[0])))
    return CheckResult(True)


def _clamp_unit(x):
    if x < 0:
        return 0
    if x > 1:
        return 1
    return x


def epsilon_contamination(p: ProbabilityVector, eps) -> Capacity:
    """Upper envelope of the contamination class around ``p``: every mixture
    ``(1-eps) p + eps r`` over arbitrary ``r``.

    Closed form ``(1-eps) p(A) + eps`` on nonempty events; always concave.
    ``eps=0`` gives the additive capacity of ``p``, ``eps=1`` the vacuous one.
    """
    if not 0 <= eps <= 1:
        raise ValueError(f"contamination weight must lie in [0, 1], got {eps!r}")
    table = p.mass_table()
    one_minus = 1 - eps
    vals = [0] * len(table)
    for m in range(1, len(table)):
        vals[m] = _clamp_unit(one_minus * table[m] + eps)
    vals[-1] = 1
    return Capacity(p.space, vals, check=False)


def distortion_capacity(p: ProbabilityVector, alpha: float) -> Capacity:
    """Concave power distortion ``A -> p(A) ** alpha`` for alpha in (0, 1].

    Exact inputs stay exact only at alpha=1 (the identity); fractional
    exponents force float values.
    """
    if not 0 < alpha <= 1:
        raise ValueError(f"distortion exponent must lie in (0, 1], got {alpha!r}")
    table = p.mass_table()
    if alpha == 1:
        vals = [_clamp_unit(x) for x in table]
    else:
        vals = [_clamp_unit(float(x) ** alpha) for x in table]
    vals[0] = 0
    vals[-1] = 1
    return Capacity(p.space, vals, check=False)


def additive_capacity(p: ProbabilityVector) -> Capacity:
    """The additive capacity ``A -> p(A)`` of a single probability vector."""
    vals = [_clamp_unit(x) for x in p.mass_table()]
    vals[0] = 0
    vals[-1] = 1
    return Capacity(p.space, vals, check=False)


def vacuous_capacity(space: OutcomeSpace) -> Capacity:
    """Total ambiguity: 1 on every nonempty event; its core is the whole simplex."""
    vals = [1] * space.size
    vals[0] = 0
    return Capacity(space, vals, check=False)


def upper_envelope(ps: Sequence[ProbabilityVector]) -> Capacity:
    """Event-wise maximum over a family of probability vectors."""
    ps = list(ps)
    if not ps:
        raise EmptyFamily("upper envelope needs at least one probability vector")
    space = ps[0].space
    for p in ps[1:]:
        if p.space != space:
            raise ValueError("all vectors must share one outcome space")
    tables = [p.mass_table() for p in ps]
    vals = [_clamp_unit(max(t[m] for t in tables)) for m in range(space.size)]
    vals[0] = 0
    vals[-1] = 1
    return Capacity(space, vals, check=False)


# ---------------------------------------------------------------------------
# JSON form
#
# {"outcomes": [...], "kind": "explicit", "values": {"": 0, "a": 0.4, ...}}
# {"outcomes": [...], "kind": "eps-contamination", "p": [...], "eps": x}
# {"outcomes": [...], "kind": "distortion", "p": [...], "alpha": x}
# {"outcomes": [...], "kind": "envelope", "vertices": [[...], ...]}
#
# Keys in "values" are comma-joined sorted outcome labels, "" for the empty
# event. Numbers may be rational literals ("4/7") in either mode.
# ---------------------------------------------------------------------------


def capacity_to_json(c: Capacity) -> dict:
    values = {
        c.space.event_key(m): encode_number(c.values[m]) for m in range(c.space.size)
    }
    return {"outcomes": list(c.space.labels), "kind": "explicit", "values": values}


def _vector_from_json(space: OutcomeSpace, raw, exact: bool) -> ProbabilityVector:
    if not isinstance(raw, list) or len(raw) != space.n:
        raise ValueError(f"expected a list of {space.n} weights")
    return ProbabilityVector(space, tuple(parse_number(v, exact) for v in raw))


def capacity_from_json(obj: dict, exact: bool = False) -> Capacity:
    """Parse any supported capacity form; raises ValueError on shape errors
    and the structural errors of :func:`validate` on bad values."""
    if not isinstance(obj, dict):
        raise ValueError("capacity must be a JSON object")
    space = OutcomeSpace(tuple(obj.get("outcomes", ())))
    kind = obj.get("kind", "explicit")
    if kind == "explicit":
        raw = obj.get("values")
        if not isinstance(raw, dict):
            raise ValueError('explicit capacity needs a "values" object')
        vals: dict[int, object] = {}
        for key, v in raw.items():
            mask = space.mask_from_key(key)
            if mask in vals:
                raise ValueError(f"duplicate event key {key!r}")
            vals[mask] = parse_number(v, exact)
        return validate(vals, space)
    if kind == "eps-contamination":
        p = _vector_from_json(space, obj.get("p"), exact)
        return epsilon_contamination(p, parse_number(obj.get("eps"), exact))
    if kind == "distortion":
        p = _vector_from_json(space, obj.get("p"), exact)
        alpha = parse_number(obj.get("alpha"), exact)
        return distortion_capacity(p, float(alpha) if alpha != 1 else alpha)
    if kind == "envelope":
        raw = obj.get("vertices")
        if not isinstance(raw, list) or not raw:
            raise ValueError('envelope capacity needs a nonempty "vertices" list')
        return upper_envelope([_vector_from_json(space, r, exact) for r in raw])
    raise ValueError(f"unknown capacity kind {kind!r}")
