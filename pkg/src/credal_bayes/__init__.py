"""Robust Bayesian updating on finite outcome spaces.

Priors are credal sets given as the core of an upper probability;
likelihood ambiguity enters as a pointwise band or finite family. The
package computes posterior upper/lower probability envelopes two ways
(LP over the core, Choquet integration), exposes an independent
brute-force oracle, and verifies the bound chain and its equality
condition on randomized campaigns.
"""

from .capacity import (
    Capacity,
    CheckResult,
    OutcomeSpace,
    ProbabilityVector,
    additive_capacity,
    capacity_from_json,
    capacity_to_json,
    conjugate,
    distortion_capacity,
    epsilon_contamination,
    is_two_alternating,
    uniform_vector,
    upper_envelope,
    vacuous_capacity,
    validate,
)
from .choquet import Functional, choquet_lower, choquet_upper, indicator
from .credal import (
    CredalSet,
    core_membership,
    core_vertices_two_monotone,
    is_core_empty,
    random_core_points,
    vertices_to_json,
)
from .optim import ExpectationBound, inf_expectation, sup_expectation
from .bayes import (
    EqualityDiagnosis,
    LikelihoodSet,
    PosteriorQuery,
    PosteriorReport,
    bounds_report,
    check_preserved_concavity,
    lower_bound,
    posterior_capacity,
    upper_bound_choquet,
    upper_bound_vertex,
)
from .oracle import (
    OracleResult,
    bang_bang_likelihood,
    brute_force_upper,
    precise_posterior,
    verify_theorem,
)
from .campaign import CampaignSummary, run_campaign
from .model import ModelFile, ModelOptions, load_model, parse_model
from . import errors

__version__ = "0.1.0"

__all__ = [
    "Capacity",
    "CheckResult",
    "OutcomeSpace",
    "ProbabilityVector",
    "additive_capacity",
    "capacity_from_json",
    "capacity_to_json",
    "conjugate",
    "distortion_capacity",
    "epsilon_contamination",
    "is_two_alternating",
    "uniform_vector",
    "upper_envelope",
    "vacuous_capacity",
    "validate",
    "Functional",
    "choquet_lower",
    "choquet_upper",
    "indicator",
    "CredalSet",
    "core_membership",
    "core_vertices_two_monotone",
    "is_core_empty",
    "random_core_points",
    "vertices_to_json",
    "ExpectationBound",
    "inf_expectation",
    "sup_expectation",
    "EqualityDiagnosis",
    "LikelihoodSet",
    "PosteriorQuery",
    "PosteriorReport",
    "bounds_report",
    "check_preserved_concavity",
    "lower_bound",
    "posterior_capacity",
    "upper_bound_choquet",
    "upper_bound_vertex",
    "OracleResult",
    "bang_bang_likelihood",
    "brute_force_upper",
    "precise_posterior",
    "verify_theorem",
    "CampaignSummary",
    "run_campaign",
    "ModelFile",
    "ModelOptions",
    "load_model",
    "parse_model",
    "errors",
]
