"""Posterior upper/lower probability envelopes under a credal prior and a
set of likelihoods.

For an event A, a prior capacity with nonempty core and a likelihood set
with pointwise envelopes ``hi`` and ``lo``, two upper bounds on the
posterior probability of A are computed:

* the vertex bound  N / (N + D) with
  N = sup over the prior core of E[hi * 1_A] and
  D = inf over the prior core of E[lo * 1_{A^c}]  (both by LP), and
* the Choquet bound C / (C + D') with
  C  = upper Choquet integral of hi * 1_A and
  D' = lower Choquet integral of lo * 1_{A^c}.

The vertex bound never exceeds the Choquet bound, and when the prior is
2-alternating (concave) and the envelopes belong to the likelihood set,
both bounds equal the exact posterior upper probability. Lower bounds
come from conjugacy: lower(A) = 1 - upper(complement of A), computed as
literally that expression so the identity holds bit for bit.

Likelihood vectors store the density value at the single observed data
point, one entry per outcome; the sample space itself never appears.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, InitVar

from ._numeric import RATIO_TOL, encode_number
from .capacity import Capacity, OutcomeSpace
from .capacity import is_two_alternating
from .choquet import Functional, choquet_lower, choquet_upper, pointwise_max, pointwise_min
from .credal import is_core_empty
from .errors import InfeasibleCore, NotMonotone, NotTwoAlternating, UndefinedRatio
from .optim import inf_expectation, sup_expectation

log = logging.getLogger(__name__)

# Posterior sweeps clamp monotonicity noise up to this much; anything
# larger aborts as a defect.
CLAMP_TOL = 1e-9


@dataclass(frozen=True)
class LikelihoodSet:
    """A set of likelihood vectors, as a pointwise band or a finite family.

    Both forms expose pointwise envelopes ``lower`` and ``upper``; the
    bounds depend on the set only through them. ``envelopes_are_members``
    records whether the envelopes themselves belong to the set: true by
    construction for bands, checked coordinate by coordinate for
    families. When false, equality of bound and posterior envelope is
    never claimed, only the bound direction.
    """

    space: OutcomeSpace
    form: str  # "band" | "family"
    lower: Functional
    upper: Functional
    members: tuple[Functional, ...] | None
    envelopes_are_members: bool

    @classmethod
    def band(cls, lower: Functional, upper: Functional) -> "LikelihoodSet":
        if lower.space != upper.space:
            raise ValueError("band envelopes live on different spaces")
        for lo, hi in zip(lower.values, upper.values):
            if lo > hi:
                raise ValueError("band lower envelope exceeds the upper envelope")
        return cls(lower.space, "band", lower, upper, None, True)

    @classmethod
    def family(cls, members) -> "LikelihoodSet":
        members = tuple(members)
        if not members:
            raise ValueError("a likelihood family needs at least one member")
        space = members[0].space
        for m in members[1:]:
            if m.space != space:
                raise ValueError("family members live on different spaces")
        hi = pointwise_max(members)
        lo = pointwise_min(members)
        flag = any(m.values == hi.values for m in members) and any(
            m.values == lo.values for m in members
        )
        return cls(space, "family", lo, hi, members, flag)

    @classmethod
    def precise(cls, L: Functional) -> "LikelihoodSet":
        """A singleton set: no likelihood ambiguity."""
        return cls.band(L, L)

    @property
    def exact(self) -> bool:
        return self.lower.exact and self.upper.exact

    def scaled(self, factor) -> "LikelihoodSet":
        if self.form == "band":
            return LikelihoodSet.band(self.lower.scaled(factor), self.upper.scaled(factor))
        return LikelihoodSet.family(tuple(m.scaled(factor) for m in self.members))


@dataclass(frozen=True)
class PosteriorQuery:
    """A (prior, likelihood set, event) triple ready for updating.

    Construction checks the shared space and that the prior core is
    nonempty; pass ``check_core=False`` only when the caller already did.
    """

    prior: Capacity
    likelihoods: LikelihoodSet
    event: int
    check_core: InitVar[bool] = True

    def __post_init__(self, check_core: bool):
        if self.prior.space != self.likelihoods.space:
            raise ValueError("prior and likelihood set live on different spaces")
        self.prior.space.check_mask(self.event)
        if check_core and is_core_empty(self.prior):
            raise InfeasibleCore("the prior core is empty; no posterior exists")

    @property
    def space(self) -> OutcomeSpace:
        return self.prior.space

    @property
    def exact(self) -> bool:
        return self.prior.exact and self.likelihoods.exact

    def complement(self) -> "PosteriorQuery":
        return PosteriorQuery(
            self.prior,
            self.likelihoods,
            self.space.complement(self.event),
            check_core=False,
        )


class EqualityDiagnosis(str, enum.Enum):
    """How the reported bound relates to the true posterior envelope."""

    PROVEN_EQUAL = "ProvenEqual"          # concave prior, envelopes in the set
    BOUND_ONLY = "BoundOnly"              # upper bound, no oracle comparison
    NUMERICALLY_EQUAL = "NumericallyEqual"  # oracle matched within tolerance
    STRICT_GAP = "StrictGap"              # oracle strictly below a bound


@dataclass(frozen=True)
class PosteriorReport:
    """Per-event results: bounds, conjugate bounds, denominators, diagnosis,
    and (when available) the oracle values and achieving witnesses."""

    space: OutcomeSpace
    event: int
    bound_vertex: object
    bound_choquet: object
    lower_vertex: object
    lower_choquet: object
    c_value: object
    c_prime_value: object
    equality_diagnosis: EqualityDiagnosis
    oracle: object = None
    lower_oracle: object = None
    achieving_prior: tuple | None = None
    achieving_likelihood: tuple | None = None
    instance_hash: str | None = None

    def to_json(self) -> dict:
        enc = encode_number
        return {
            "event": self.space.event_key(self.event),
            "upper_vertex": enc(self.bound_vertex),
            "upper_choquet": enc(self.bound_choquet),
            "lower_vertex": enc(self.lower_vertex),
            "lower_choquet": enc(self.lower_choquet),
            "c": enc(self.c_value),
            "c_prime": enc(self.c_prime_value),
            "diagnosis": self.equality_diagnosis.value,
            "oracle": None if self.oracle is None else enc(self.oracle),
            "lower_oracle": None
            if self.lower_oracle is None
            else enc(self.lower_oracle),
            "achieving_prior": None
            if self.achieving_prior is None
            else [enc(v) for v in self.achieving_prior],
            "achieving_likelihood": None
            if self.achieving_likelihood is None
            else [enc(v) for v in self.achieving_likelihood],
            "instance_hash": self.instance_hash,
        }


def _ratio_floor(exact: bool):
    return 0 if exact else RATIO_TOL


def _vertex_parts(prior: Capacity, likelihoods: LikelihoodSet, event: int):
    """Numerator bound, denominator and the sup-side optimizer, via LP."""
    space = prior.space
    num_f = likelihoods.upper.restricted(event)
    den_f = likelihoods.lower.restricted(space.complement(event))
    sup = sup_expectation(prior, num_f)
    inf = inf_expectation(prior, den_f)
    denom = sup.value + inf.value
    if denom <= _ratio_floor(prior.exact and likelihoods.exact):
        raise UndefinedRatio(
            f"denominator vanished for event {space.event_key(event)!r}",
            event=event,
        )
    return sup.value / denom, denom, sup.argmax


def _choquet_parts(prior: Capacity, likelihoods: LikelihoodSet, event: int):
    space = prior.space
    num = choquet_upper(prior, likelihoods.upper.restricted(event))
    den = num + choquet_lower(prior, likelihoods.lower.restricted(space.complement(event)))
    if den <= _ratio_floor(prior.exact and likelihoods.exact):
        raise UndefinedRatio(
            f"denominator vanished for event {space.event_key(event)!r}",
            event=event,
        )
    return num / den, den


def upper_bound_vertex(q: PosteriorQuery):
    """The LP-based upper bound on the posterior probability of the event."""
    value, _, _ = _vertex_parts(q.prior, q.likelihoods, q.event)
    return value


def upper_bound_choquet(q: PosteriorQuery):
    """The Choquet-integral upper bound; never below the vertex bound."""
    value, _ = _choquet_parts(q.prior, q.likelihoods, q.event)
    return value


def lower_bound(q: PosteriorQuery, which: str = "vertex"):
    """Conjugate lower bound: one minus the upper bound of the complement."""
    comp = q.complement()
    if which == "vertex":
        return 1 - upper_bound_vertex(comp)
    if which == "choquet":
        return 1 - upper_bound_choquet(comp)
    raise ValueError(f"unknown bound form {which!r}")


def bounds_report(q: PosteriorQuery) -> PosteriorReport:
    """Both upper bounds, both conjugate lower bounds and the diagnosis
    available without an oracle run."""
    uv, c_val, argmax = _vertex_parts(q.prior, q.likelihoods, q.event)
    uc, c_prime = _choquet_parts(q.prior, q.likelihoods, q.event)
    comp = q.space.complement(q.event)
    lv = 1 - _vertex_parts(q.prior, q.likelihoods, comp)[0]
    lc = 1 - _choquet_parts(q.prior, q.likelihoods, comp)[0]
    proven = bool(is_two_alternating(q.prior)) and q.likelihoods.envelopes_are_members
    diagnosis = (
        EqualityDiagnosis.PROVEN_EQUAL if proven else EqualityDiagnosis.BOUND_ONLY
    )
    extreme = _extreme_for_event(q.likelihoods, q.event)
    return PosteriorReport(
        space=q.space,
        event=q.event,
        bound_vertex=uv,
        bound_choquet=uc,
        lower_vertex=lv,
        lower_choquet=lc,
        c_value=c_val,
        c_prime_value=c_prime,
        equality_diagnosis=diagnosis,
        achieving_prior=argmax.mass,
        achieving_likelihood=extreme.values,
    )


def _extreme_for_event(likelihoods: LikelihoodSet, event: int) -> Functional:
    """The likelihood the upper bound effectively evaluates: the upper
    envelope on the event, the lower envelope off it."""
    space = likelihoods.space
    vals = tuple(
        likelihoods.upper.values[i] if event >> i & 1 else likelihoods.lower.values[i]
        for i in range(space.n)
    )
    return Functional(space, vals)


def posterior_capacity(prior: Capacity, likelihoods: LikelihoodSet) -> Capacity:
    """The posterior upper probability as a full capacity over all events.

    Only emitted when the values are exact posteriors rather than mere
    bounds: the prior must be 2-alternating and the likelihood envelopes
    must belong to the set. Events are swept in subset-size order;
    monotonicity noise up to 1e-9 is clamped with a logged warning and
    anything larger aborts.
    """
    verdict = is_two_alternating(prior)
    if not verdict:
        raise NotTwoAlternating(
            "posterior capacity values are exact only for 2-alternating priors",
            witness=verdict.witness,
        )
    if not likelihoods.envelopes_are_members:
        raise ValueError(
            "likelihood envelopes are not members of the set; "
            "the sweep would emit bounds, not posterior values"
        )
    if is_core_empty(prior):
        raise InfeasibleCore("the prior core is empty; no posterior exists")
    space = prior.space
    full = space.full_mask
    values: list = [None] * space.size
    values[0] = 0
    values[full] = 1
    clamp = 0 if (prior.exact and likelihoods.exact) else CLAMP_TOL
    for mask in space.events_by_size():
        if mask == 0 or mask == full:
            continue
        v, _, _ = _vertex_parts(prior, likelihoods, mask)
        v = min(v, 1)
        floor = max(
            (values[mask ^ (1 << i)] for i in range(space.n) if mask >> i & 1),
            default=0,
        )
        if v < floor:
            if floor - v > clamp:
                raise NotMonotone(
                    f"posterior sweep lost monotonicity by {float(floor - v):.3e} "
                    f"at event {space.event_key(mask)!r}",
                    witness=(mask ^ (mask & -mask), mask),
                )
            log.warning(
                "clamped posterior value at %r up by %.3e",
                space.event_key(mask),
                float(floor - v),
            )
            v = floor
        values[mask] = v
    return Capacity(space, tuple(values))


def check_preserved_concavity(prior: Capacity, likelihoods: LikelihoodSet) -> bool:
    """Whether the posterior capacity of a concave prior is itself concave.

    Expected true; a False return is logged loudly since it means either
    a numerical defect or a genuine counterexample worth keeping.
    """
    post = posterior_capacity(prior, likelihoods)
    verdict = is_two_alternating(post)
    if not verdict:
        log.error(
            "posterior capacity lost concavity, witness pair %r / %r",
            prior.space.event_key(verdict.witness[0]),
            prior.space.event_key(verdict.witness[1]),
        )
    return bool(verdict)
