"""Exact sup/inf of linear expectations over the core of a capacity.

The core of a capacity ``c`` is the polytope of probability vectors
dominated by ``c`` on every event. Optimizing a linear objective over it
is a linear program with one domination constraint per proper nonempty
event plus the simplex constraints. Fast mode solves in floats; when
both the capacity and the objective are exact rationals the program is
solved exactly.

Emptiness detection never flaps: a float phase 1 that lands within 1e-7
of the feasibility boundary is re-adjudicated with exact rationals on
the exact binary values of the inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._numeric import to_fraction
from ._simplex import solve_exact, solve_float
from .capacity import Capacity, OutcomeSpace, ProbabilityVector
from .choquet import Functional
from .errors import InfeasibleCore, SpaceTooLarge

MAX_LP_OUTCOMES = 12
# Float phase-1 residuals above this mean a definitely empty core; at or
# below, the verdict is handed to the exact solver.
AMBIGUOUS_FEAS = 1e-7


@dataclass(frozen=True)
class ExpectationBound:
    """Optimum of a linear expectation over the core, with an optimizer.

    The optimizer is a basic feasible solution of the domination LP, so
    it is a vertex of the core polytope.
    """

    value: object
    argmax: ProbabilityVector
    status: str = "optimal"


def _check_inputs(c: Capacity, f: Functional) -> None:
    if c.space != f.space:
        raise ValueError("capacity and functional live on different spaces")
    if c.space.n > MAX_LP_OUTCOMES:
        raise SpaceTooLarge(
            f"core optimization needs n <= {MAX_LP_OUTCOMES}, got {c.space.n}"
        )


def _float_arrays(c: Capacity):
    n = c.space.n
    masks = np.arange(1, c.space.size - 1)  # proper nonempty events
    a_ub = (masks[:, None] >> np.arange(n)) & 1
    b_ub = np.asarray([float(c.values[m]) for m in masks])
    return a_ub.astype(float), b_ub, [np.ones(n)], [1.0]


def _exact_arrays(c: Capacity):
    n = c.space.n
    one = Fraction(1)
    a_ub, b_ub = [], []
    for m in range(1, c.space.size - 1):
        a_ub.append([one if m >> i & 1 else Fraction(0) for i in range(n)])
        b_ub.append(to_fraction(c.values[m]))
    return a_ub, b_ub, [[one] * n], [one]


def _solve_core(c: Capacity, objective, maximize: bool, exact: bool):
    """Shared LP path; falls back to exact arithmetic near the feasibility
    boundary so empty-core verdicts are stable."""
    if exact:
        sol = solve_exact(objective, *_exact_arrays(c), maximize=maximize)
        if sol.status == "infeasible":
            raise InfeasibleCore("the capacity dominates no probability vector")
        if sol.status != "optimal":
            raise ArithmeticError(f"core LP reported {sol.status}")
        return sol
    sol = solve_float(objective, *_float_arrays(c), maximize=maximize)
    if sol.status == "infeasible":
        if sol.infeasibility > AMBIGUOUS_FEAS:
            raise InfeasibleCore("the capacity dominates no probability vector")
        exact_obj = [to_fraction(v) for v in objective]
        sol = solve_exact(exact_obj, *_exact_arrays(c), maximize=maximize)
        if sol.status == "infeasible":
            raise InfeasibleCore("the capacity dominates no probability vector")
        sol = _floatify(sol)
    if sol.status != "optimal":
        raise ArithmeticError(f"core LP reported {sol.status}")
    return sol


def _floatify(sol):
    from ._simplex import LPSolution

    return LPSolution(
        sol.status,
        tuple(float(v) for v in sol.x),
        float(sol.value),
        float(sol.infeasibility),
    )


def _vector_from_solution(space: OutcomeSpace, x, exact: bool) -> ProbabilityVector:
    if exact:
        return ProbabilityVector(space, tuple(x))
    mass = [v if v > 0 else 0.0 for v in x]
    total = sum(mass)
    if abs(total - 1) > 1e-9:
        raise ArithmeticError(f"LP optimizer sums to {total!r}; solver defect")
    return ProbabilityVector(space, tuple(v / total for v in mass))


def _expectation(c: Capacity, f: Functional, maximize: bool) -> ExpectationBound:
    _check_inputs(c, f)
    exact = c.exact and f.exact
    sol = _solve_core(c, list(f.values), maximize, exact)
    argmax = _vector_from_solution(c.space, sol.x, exact)
    return ExpectationBound(sol.value, argmax)


def sup_expectation(c: Capacity, f: Functional) -> ExpectationBound:
    """Maximize the expectation of ``f`` over the core of ``c``.

    Raises :class:`InfeasibleCore` when the core is empty.
    """
    return _expectation(c, f, maximize=True)


def inf_expectation(c: Capacity, f: Functional) -> ExpectationBound:
    """Minimize the expectation of ``f`` over the core of ``c``.

    Implemented as the negated maximization of ``-f``.
    """
    return _expectation(c, f, maximize=False)


def core_feasible(c: Capacity) -> bool:
    """Phase-1 feasibility of the domination polytope (zero objective)."""
    if c.space.n > MAX_LP_OUTCOMES:
        raise SpaceTooLarge(
            f"core feasibility needs n <= {MAX_LP_OUTCOMES}, got {c.space.n}"
        )
    zero = [0] * c.space.n
    if c.exact:
        return solve_exact(zero, *_exact_arrays(c)).status == "optimal"
    sol = solve_float(zero, *_float_arrays(c))
    if sol.status == "optimal":
        return True
    if sol.infeasibility > AMBIGUOUS_FEAS:
        return False
    return solve_exact(zero, *_exact_arrays(c)).status == "optimal"
