"""Model file validation and the command line front end."""

import contextlib
import io
import json
import os

import pytest

from credal_bayes import cli, parse_model, precise_posterior
from credal_bayes.capacity import OutcomeSpace, ProbabilityVector
from credal_bayes.choquet import Functional
from credal_bayes.errors import ModelError


def _base_model(eps=0.1):
    return {
        "version": 1,
        "outcomes": ["t1", "t2", "t3"],
        "prior": {"kind": "eps-contamination", "p": [1 / 3, 1 / 3, 1 / 3], "eps": eps},
        "likelihood": {"band": {"lower": [0.5, 0.3, 0.2], "upper": [0.5, 0.3, 0.2]}},
        "events": [["t1"]],
        "options": {},
    }


def _write(tmp_path, doc, name="model.json"):
    path = os.path.join(tmp_path, name)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
    return path


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli.main(argv)
    return code, out.getvalue(), err.getvalue()


class TestParsing:
    def test_round_trip(self):
        m = parse_model(_base_model())
        assert m.space.labels == ("t1", "t2", "t3")
        assert m.event_masks() == [0b001]

    def test_missing_version(self):
        doc = _base_model()
        del doc["version"]
        with pytest.raises(ModelError, match=r"\$\.version"):
            parse_model(doc)

    def test_bad_event_label_names_path(self):
        doc = _base_model()
        doc["events"] = [["nope"]]
        with pytest.raises(ModelError, match=r"\$\.events\[0\]"):
            parse_model(doc)

    def test_bad_band_value_names_path(self):
        doc = _base_model()
        doc["likelihood"]["band"]["lower"][1] = "zzz"
        with pytest.raises(ModelError, match=r"\$\.likelihood\.band\.lower\[1\]"):
            parse_model(doc)

    def test_crossed_band_rejected(self):
        doc = _base_model()
        doc["likelihood"]["band"]["lower"] = [0.9, 0.9, 0.9]
        with pytest.raises(ModelError, match=r"\$\.likelihood\.band"):
            parse_model(doc)

    def test_non_monotone_prior_named(self):
        doc = _base_model()
        doc["prior"] = {
            "kind": "explicit",
            "values": {"": 0, "t1": 0.6, "t2": 0.1, "t3": 0.1,
                       "t1,t2": 0.5, "t1,t3": 0.7, "t2,t3": 0.4, "t1,t2,t3": 1},
        }
        with pytest.raises(ModelError, match=r"\$\.prior"):
            parse_model(doc)

    def test_exact_mode_reads_decimals_faithfully(self):
        from fractions import Fraction

        doc = _base_model()
        doc["options"] = {"exact": True}
        doc["prior"] = {"kind": "eps-contamination", "p": ["1/3", "1/3", "1/3"], "eps": 0.1}
        doc["likelihood"] = {
            "band": {"lower": ["1/2", 0.3, "1/5"], "upper": ["1/2", 0.3, "1/5"]}
        }
        m = parse_model(doc)
        assert m.prior.exact
        assert m.likelihoods.lower.values[1] == Fraction(3, 10)


class TestUpdate:
    def test_precise_model_collapses(self, tmp_path):
        path = _write(tmp_path, _base_model(eps=0))
        code, out, err = _run(["update", path, "--json"])
        assert code == 0
        rec = json.loads(out)["events"][0]
        p = ProbabilityVector(OutcomeSpace(("t1", "t2", "t3")), (1 / 3,) * 3)
        want = precise_posterior(p, Functional(p.space, (0.5, 0.3, 0.2)), 0b001)
        assert rec["upper_vertex"] == pytest.approx(want, abs=1e-12)
        assert rec["lower_vertex"] == pytest.approx(want, abs=1e-12)

    def test_fixture_table(self, tmp_path):
        path = _write(tmp_path, _base_model())
        code, out, err = _run(["update", path])
        assert code == 0
        assert "0.571429" in out
        assert "ProvenEqual" in out

    def test_vacuous_prior_reports_one_everywhere(self, tmp_path):
        doc = _base_model(eps=1.0)
        doc["events"] = "all"
        path = _write(tmp_path, doc)
        code, out, _ = _run(["update", path, "--json"])
        assert code == 0
        for rec in json.loads(out)["events"]:
            if rec["event"]:
                assert rec["upper_vertex"] == pytest.approx(1.0, abs=1e-12)

    def test_validation_exit_code(self, tmp_path):
        doc = _base_model()
        doc["outcomes"] = ["a", "a", "b"]
        path = _write(tmp_path, doc)
        code, _, err = _run(["update", path])
        assert code == 2
        assert "validation error" in err

    def test_undefined_ratio_exit_code(self, tmp_path):
        doc = _base_model()
        doc["likelihood"] = {
            "band": {"lower": [0, 0, 0], "upper": [1, 1, 1]}
        }
        doc["events"] = [[]]  # empty event with vanishing lower evidence
        path = _write(tmp_path, doc)
        code, _, err = _run(["update", path])
        assert code == 3
        assert "undefined ratio" in err

    def test_determinism(self, tmp_path):
        path = _write(tmp_path, _base_model())
        first = _run(["update", path, "--sweep", "--json"])
        second = _run(["update", path, "--sweep", "--json"])
        assert first == second

    def test_posterior_round_trip(self, tmp_path):
        path = _write(tmp_path, _base_model())
        code, out, _ = _run(["update", path, "--sweep", "--json"])
        assert code == 0
        posterior = json.loads(out)["posterior"]
        doc = _base_model()
        doc["prior"] = posterior
        path2 = _write(tmp_path, doc, "model2.json")
        code2, out2, err2 = _run(["update", path2])
        assert code2 == 0, err2

    def test_thread_cap_does_not_change_output(self, tmp_path, monkeypatch):
        path = _write(tmp_path, _base_model())
        base = _run(["update", path, "--sweep", "--json"])
        monkeypatch.setenv("CREDAL_BAYES_THREADS", "4")
        threaded = _run(["update", path, "--sweep", "--json"])
        assert base == threaded

    def test_family_likelihood_reports_bound_only(self, tmp_path):
        doc = _base_model()
        doc["likelihood"] = {"family": [[0.5, 0.1, 0.1], [0.1, 0.5, 0.1]]}
        path = _write(tmp_path, doc)
        code, out, _ = _run(["update", path])
        assert code == 0
        assert "BoundOnly" in out


class TestVerify:
    def test_model_mode(self, tmp_path):
        path = _write(tmp_path, _base_model())
        code, out, _ = _run(["verify", path])
        assert code == 0
        assert "ProvenEqual" in out

    def test_random_campaign_deterministic(self):
        a = _run(["verify", "--random", "25", "--seed", "11", "--family", "distortion", "--json"])
        b = _run(["verify", "--random", "25", "--seed", "11", "--family", "distortion", "--json"])
        assert a == b
        assert a[0] == 0
        lines = a[1].strip().splitlines()
        assert len(lines) == 26  # 25 records plus the summary
        summary = json.loads(lines[-1])["summary"]
        assert summary["diagnosis_counts"] == {"ProvenEqual": 25}

    def test_random_campaign_arbitrary(self):
        code, out, _ = _run(["verify", "--random", "25", "--seed", "5", "--family", "arbitrary"])
        assert code == 0
        assert "violations: 0" in out

    def test_exact_distortion_rejected(self):
        code, _, err = _run(["verify", "--random", "5", "--family", "distortion", "--exact"])
        assert code == 2
        assert "float-only" in err

    def test_chain_violation_exit_code(self, monkeypatch, tmp_path):
        from credal_bayes.errors import ChainViolation

        def boom(**kwargs):
            raise ChainViolation("forced for the exit-code contract", {"instance": 0})

        monkeypatch.setattr(cli, "run_campaign", boom)
        code, _, err = _run(["verify", "--random", "5"])
        assert code == 4
        assert "chain violation" in err


class TestReplayDumps:
    def test_query_model_round_trips(self):
        from random import Random

        from credal_bayes.campaign import query_to_model_json, random_query

        for family in ("contamination", "arbitrary"):
            q = random_query(Random(5), family)
            m = parse_model(query_to_model_json(q))
            assert m.prior.values == q.prior.values
            assert m.likelihoods.lower.values == q.likelihoods.lower.values
            assert m.event_masks() == [q.event]
        q = random_query(Random(5), "contamination", exact=True)
        m = parse_model(query_to_model_json(q))
        assert m.prior.exact and m.prior.values == q.prior.values


class TestIterate:
    def test_empty_observation_list_echoes_prior(self, tmp_path):
        mp = _write(tmp_path, _base_model())
        op = _write(tmp_path, {"version": 1, "observations": []}, "obs.json")
        code, out, _ = _run(["iterate", mp, op, "--json"])
        assert code == 0
        doc = json.loads(out)
        assert doc["steps"] == 0
        want = 0.9 * (1 / 3) + 0.1
        assert doc["final"]["values"]["t1"] == pytest.approx(want, abs=1e-12)

    def test_repeated_precise_observation_squares_likelihood(self, tmp_path):
        doc = _base_model(eps=0)
        L = [0.5, 0.3, 0.2]
        doc["likelihood"] = {"band": {"lower": L, "upper": L}}
        mp = _write(tmp_path, doc)
        obs = {"version": 1, "observations": [
            {"band": {"lower": L, "upper": L}},
            {"band": {"lower": L, "upper": L}},
        ]}
        op = _write(tmp_path, obs, "obs.json")
        code, out, _ = _run(["iterate", mp, op, "--json"])
        assert code == 0
        final = json.loads(out)["final"]["values"]
        space = OutcomeSpace(("t1", "t2", "t3"))
        p = ProbabilityVector(space, (1 / 3,) * 3)
        squared = Functional(space, tuple(x * x for x in L))
        for label, mask in (("t1", 0b001), ("t2", 0b010), ("t3", 0b100)):
            assert final[label] == pytest.approx(
                precise_posterior(p, squared, mask), abs=1e-9
            )

    def test_band_steps_keep_concavity(self, tmp_path):
        doc = _base_model()
        doc["outcomes"] = ["a", "b", "c", "d"]
        doc["prior"] = {"kind": "eps-contamination", "p": [0.4, 0.3, 0.2, 0.1], "eps": 0.2}
        doc["likelihood"] = {"band": {"lower": [0.4, 0.3, 0.2, 0.1],
                                      "upper": [0.5, 0.4, 0.3, 0.2]}}
        doc["events"] = [["a"], ["a", "b"]]
        mp = _write(tmp_path, doc)
        from random import Random

        rng = Random(21)
        steps = []
        for _ in range(10):
            lo = [round(rng.uniform(0.05, 0.8), 6) for _ in range(4)]
            hi = [round(x + rng.uniform(0, 0.3), 6) for x in lo]
            steps.append({"band": {"lower": lo, "upper": hi}})
        op = _write(tmp_path, {"version": 1, "observations": steps}, "obs.json")
        code, out, err = _run(["iterate", mp, op])
        assert code == 0, err
        assert out.count("10    ") >= 2  # both watched events reported at step 10
