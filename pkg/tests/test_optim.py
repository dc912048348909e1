"""LP expectation bounds over cores, cross-checked against independent routes."""

from fractions import Fraction
from random import Random

import pytest

from credal_bayes import (
    Capacity,
    Functional,
    OutcomeSpace,
    ProbabilityVector,
    additive_capacity,
    choquet_lower,
    choquet_upper,
    core_membership,
    core_vertices_two_monotone,
    epsilon_contamination,
    inf_expectation,
    sup_expectation,
    uniform_vector,
    vacuous_capacity,
)
from credal_bayes.campaign import (
    random_contamination,
    random_distortion,
    random_monotone_capacity,
)
from credal_bayes._simplex import solve_float
from credal_bayes.errors import InfeasibleCore, SpaceTooLarge
from credal_bayes.optim import _float_arrays

SP2 = OutcomeSpace(("a", "b"))
SP3 = OutcomeSpace(("t1", "t2", "t3"))


def _space(n):
    return OutcomeSpace(tuple(f"x{i}" for i in range(n)))


def _random_functional(rng, space, lo=0.0, hi=3.0):
    return Functional(space, tuple(rng.uniform(lo, hi) for _ in range(space.n)))


class TestExamples:
    def test_additive_core_is_the_measure(self):
        p = ProbabilityVector(SP3, (0.5, 0.3, 0.2))
        c = additive_capacity(p)
        f = Functional(SP3, (1.0, 2.0, 4.0))
        got = sup_expectation(c, f)
        want = sum(a * b for a, b in zip(f.values, p.mass))
        assert got.value == pytest.approx(want, abs=1e-12)
        assert got.argmax.mass == pytest.approx(p.mass, abs=1e-9)
        assert inf_expectation(c, f).value == pytest.approx(want, abs=1e-12)

    def test_vacuous_peak_and_trough(self):
        f = Functional(SP2, (3.0, 1.0))
        v = vacuous_capacity(SP2)
        top = sup_expectation(v, f)
        assert top.value == pytest.approx(3.0, abs=1e-12)
        assert top.argmax.mass == pytest.approx((1.0, 0.0), abs=1e-9)
        assert inf_expectation(v, f).value == pytest.approx(1.0, abs=1e-12)

    def test_contamination_matches_choquet(self):
        c = epsilon_contamination(uniform_vector(SP3), 0.1)
        f = Functional(SP3, (0.5, 0.0, 0.0))
        assert sup_expectation(c, f).value == pytest.approx(0.2, abs=1e-12)
        g = Functional(SP3, (0.0, 0.3, 0.2))
        assert inf_expectation(c, g).value == pytest.approx(0.15, abs=1e-12)

    def test_infeasible_core(self):
        bad = Capacity(SP2, (0, 0.2, 0.2, 1))
        with pytest.raises(InfeasibleCore):
            sup_expectation(bad, Functional(SP2, (1.0, 0.0)))

    def test_space_cap(self):
        space = _space(13)
        with pytest.raises(SpaceTooLarge):
            sup_expectation(vacuous_capacity(space), Functional(space, (1,) * 13))


class TestAgainstChoquet:
    def test_exactness_for_concave_capacities(self):
        rng = Random(41)
        for _ in range(60):
            space = _space(rng.randint(1, 6))
            c = (
                random_contamination(rng, space)
                if rng.random() < 0.5
                else random_distortion(rng, space)
            )
            f = _random_functional(rng, space)
            assert sup_expectation(c, f).value == pytest.approx(
                choquet_upper(c, f), abs=1e-9
            )
            assert inf_expectation(c, f).value == pytest.approx(
                choquet_lower(c, f), abs=1e-9
            )

    def test_upper_bound_direction_for_arbitrary_monotone(self):
        rng = Random(43)
        for _ in range(40):
            space = _space(rng.randint(3, 6))
            c = random_monotone_capacity(rng, space)
            f = _random_functional(rng, space)
            assert sup_expectation(c, f).value <= choquet_upper(c, f) + 1e-9


class TestOptimizer:
    def test_argmax_membership_and_value(self):
        rng = Random(47)
        for _ in range(30):
            space = _space(rng.randint(2, 5))
            c = random_monotone_capacity(rng, space)
            f = _random_functional(rng, space)
            got = sup_expectation(c, f)
            assert core_membership(c, got.argmax)
            achieved = sum(a * b for a, b in zip(f.values, got.argmax.mass))
            assert achieved == pytest.approx(got.value, abs=1e-9)

    def test_argmax_is_a_core_vertex_when_enumerable(self):
        rng = Random(53)
        for _ in range(20):
            space = _space(rng.randint(2, 5))
            c = random_distortion(rng, space)
            f = _random_functional(rng, space)
            got = sup_expectation(c, f)
            verts = core_vertices_two_monotone(c)
            dists = [
                max(abs(a - b) for a, b in zip(v.mass, got.argmax.mass)) for v in verts
            ]
            assert min(dists) < 1e-7

    def test_inf_is_negated_sup(self):
        rng = Random(59)
        for _ in range(20):
            space = _space(rng.randint(2, 5))
            c = random_contamination(rng, space)
            f = _random_functional(rng, space)
            neg = solve_float([-v for v in f.values], *_float_arrays(c), maximize=True)
            assert inf_expectation(c, f).value == pytest.approx(-neg.value, abs=1e-9)


class TestExactMode:
    def test_exact_equals_choquet_exactly(self):
        rng = Random(61)
        for _ in range(10):
            space = _space(rng.randint(2, 5))
            c = random_contamination(rng, space, exact=True)
            f = Functional(
                space, tuple(Fraction(rng.randint(0, 24), 24) for _ in range(space.n))
            )
            assert sup_expectation(c, f).value == choquet_upper(c, f)
            assert inf_expectation(c, f).value == choquet_lower(c, f)

    def test_exact_and_float_agree(self):
        rng = Random(67)
        for _ in range(10):
            space = _space(rng.randint(2, 5))
            c = random_contamination(rng, space, exact=True)
            f_exact = Functional(
                space, tuple(Fraction(rng.randint(0, 24), 24) for _ in range(space.n))
            )
            c_float = Capacity(space, tuple(float(v) for v in c.values))
            f_float = Functional(space, tuple(float(v) for v in f_exact.values))
            assert float(sup_expectation(c, f_exact).value) == pytest.approx(
                sup_expectation(c_float, f_float).value, abs=1e-9
            )


def test_cross_check_against_scipy():
    scipy_opt = pytest.importorskip("scipy.optimize")
    rng = Random(71)
    for _ in range(25):
        space = _space(rng.randint(2, 5))
        c = random_monotone_capacity(rng, space)
        f = _random_functional(rng, space)
        a_ub, b_ub, a_eq, b_eq = _float_arrays(c)
        res = scipy_opt.linprog(
            [-v for v in f.values],
            A_ub=a_ub,
            b_ub=b_ub,
            A_eq=a_eq,
            b_eq=b_eq,
            bounds=[(0, None)] * space.n,
            method="highs",
        )
        assert res.status == 0
        assert sup_expectation(c, f).value == pytest.approx(-res.fun, abs=1e-7)
