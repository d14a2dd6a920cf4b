import json
import math

import numpy as np
import pytest

from incprob.designs import ExactComputationLimit
from incprob.verify import (
    CheckResult,
    VerificationReport,
    check_divergence_triangles,
    check_entropy_monotonicity,
    check_likelihood_ratio_order,
    check_majorization_chains,
    check_ratio_monotonicity,
    check_spread_bounds,
    randomized_suite,
)

from helpers import random_alpha

WORKED = [0.5, 0.3, 0.2]
ALL_FAMILIES = (
    check_majorization_chains,
    check_entropy_monotonicity,
    check_divergence_triangles,
    check_spread_bounds,
    check_ratio_monotonicity,
)


class TestWorkedPopulation:
    @pytest.mark.parametrize("family", ALL_FAMILIES)
    def test_every_family_passes(self, family):
        rep = family(WORKED)
        assert rep.overall
        assert all(c.slack >= -c.tolerance for c in rep.checks)

    def test_lr_family_passes(self):
        for n in (1, 2, 3):
            assert check_likelihood_ratio_order(WORKED, n).overall

    def test_known_divergence_ordering(self):
        rep = check_divergence_triangles(WORKED, triple=(1, 2, 3))
        by_name = {}
        for c in rep.checks:
            by_name.setdefault(c.name, []).append(c)
        dom = by_name["divergence_rejective_dominates"][0]
        # D(p_R(3)||alpha) - D(p_S(3)||alpha) is 0 at the census size
        assert dom.holds
        rep_all = check_divergence_triangles(WORKED)
        doms = [c for c in rep_all.checks if c.name == "divergence_rejective_dominates"]
        # at n=2 the gap is the worked 0.020146 - 0.013381
        gap = [c.slack for c in doms if "(2)" in c.statement][0]
        assert gap == pytest.approx(0.020146282269784127 - 0.013380804968089959, rel=1e-9)

    def test_entropy_values_match_direct_computation(self):
        rep = check_entropy_monotonicity(WORKED)
        dom2 = [
            c for c in rep.checks
            if c.name == "entropy_rejective_dominates" and "(2)" in c.statement
        ][0]
        assert dom2.slack == pytest.approx(1.0824846048881014 - 1.0746977727823148, rel=1e-9)


class TestUniformPopulation:
    @pytest.mark.parametrize("family", ALL_FAMILIES)
    def test_chains_collapse(self, family):
        rep = family([0.25] * 4)
        assert rep.overall
        assert max(abs(c.slack) for c in rep.checks) <= 1e-12


class TestArgumentValidation:
    def test_bad_triple(self):
        with pytest.raises(ValueError):
            check_divergence_triangles(WORKED, triple=(2, 2, 3))
        with pytest.raises(ValueError):
            check_divergence_triangles(WORKED, triple=(1, 2, 4))

    def test_lr_guard(self):
        alpha = np.full(12, 1 / 12)
        with pytest.raises(ExactComputationLimit):
            check_likelihood_ratio_order(alpha, 2)


class TestReports:
    def test_overall_is_conjunction(self):
        rep = check_majorization_chains(WORKED)
        assert rep.overall == all(c.holds for c in rep.checks)
        forced = VerificationReport(
            rep.alpha, rep.checks + (CheckResult("x", "forced", False, -1.0, 0.0),)
        )
        assert not forced.overall

    def test_json_round_trip(self):
        rep = check_spread_bounds(WORKED, 2)
        data = json.loads(rep.to_json())
        assert data["overall"] is True
        assert data["alpha"] == pytest.approx(WORKED)
        assert len(data["checks"]) == len(rep.checks)
        assert all(isinstance(c["slack"], (float, str)) for c in data["checks"])

    def test_text_table_lines_up(self):
        rep = check_ratio_monotonicity(WORKED, 2)
        text = rep.to_text()
        assert text.startswith("overall: PASS")
        assert len(text.splitlines()) == len(rep.checks) + 2

    def test_nonfinite_slack_serializes(self):
        rep = VerificationReport(
            (0.5, 0.5), (CheckResult("inf_case", "s", True, math.inf, 1e-10),)
        )
        data = json.loads(rep.to_json())
        assert data["checks"][0]["slack"] == "inf"

    def test_negative_tolerance_forces_failure(self):
        rep = check_majorization_chains(WORKED, tol=-1e-3)
        assert not rep.overall


class TestStatisticalFallback:
    def test_flagged_and_passing_above_cutoff(self):
        rng = np.random.default_rng(101)
        alpha = random_alpha(rng, 5)
        rep = check_majorization_chains(alpha, exact_cutoff=4, mc_reps=20000, seed=3)
        assert rep.overall
        assert any(c.statistical for c in rep.checks)
        assert any(not c.statistical for c in rep.checks)
        # rejective-only claims stay exact
        assert all(
            not c.statistical for c in rep.checks if c.name == "rejective_chain"
        )

    def test_deterministic_per_seed(self):
        rng = np.random.default_rng(102)
        alpha = random_alpha(rng, 5)
        r1 = check_spread_bounds(alpha, 2, exact_cutoff=4, mc_reps=2000, seed=9)
        r2 = check_spread_bounds(alpha, 2, exact_cutoff=4, mc_reps=2000, seed=9)
        assert r1.to_json() == r2.to_json()


class TestRandomizedSuite:
    def test_small_suite_passes(self):
        rep = randomized_suite(range(2, 7), trials=12, seed=5)
        assert rep.alpha is None
        assert rep.overall
        names = {c.name for c in rep.checks}
        assert "rejective_chain" in names
        assert "likelihood_ratio_order" in names
        assert "rejective_majorized_by_alpha" in names

    def test_repeatable(self):
        a = randomized_suite(range(2, 5), trials=6, seed=77)
        b = randomized_suite(range(2, 5), trials=6, seed=77)
        assert a.to_json() == b.to_json()

    def test_rejects_empty_configuration(self):
        with pytest.raises(ValueError):
            randomized_suite([], trials=3)
        with pytest.raises(ValueError):
            randomized_suite(range(2, 4), trials=0)
