"""
Tests for the gaiakit command line.

Each test writes its inputs to a temporary directory, runs one command
through ``run`` and checks the exit status and the JSON report.
"""

import json

import pytest

from gaiakit.config import settings
from gaiakit.formats import InstanceModel
from gaiakit.main import create_parser, run
from tests.conftest import write_json
from tests.fixtures import categories, coalgebras, instances


def run_json(argv, capsys):
    """Run a command and parse its stdout."""
    status = run(argv)
    out = capsys.readouterr().out
    return status, json.loads(out) if out else None


@pytest.fixture
def chain2_file(tmp_path):
    return write_json(tmp_path / "chain2.json", categories.CHAIN_2)


class TestParser:
    """Tests for argument parsing."""

    def test_no_command(self, capsys):
        assert run([]) == 2

    def test_unknown_command(self, capsys):
        assert run(["frobnicate"]) == 2

    def test_common_options(self):
        args = create_parser().parse_args(["nerve", "c.json", "--truncation", "2", "--seed", "4"])
        assert (args.truncation, args.seed) == (2, 4)


class TestInputErrors:
    """Tests for inputs that cannot be processed."""

    def test_missing_file(self, tmp_path, capsys):
        assert run(["validate", str(tmp_path / "absent.json")]) == 2
        assert "error" in capsys.readouterr().err

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{"chain": 2,\n}', encoding="utf-8")
        assert run(["validate", str(path)]) == 2
        assert "line 2" in capsys.readouterr().err

    def test_bad_face_argument(self, chain2_file, capsys):
        argv = ["fill-horn", chain2_file, "--n", "2", "--k", "1", "--face", "0:1->2"]
        assert run(argv) == 2


class TestCategoryCommands:
    """Tests for validate, nerve and the horn commands."""

    def test_validate(self, chain2_file, capsys):
        assert run_json(["validate", chain2_file], capsys) == (0, {"valid": True})

    def test_validate_broken(self, tmp_path, capsys):
        path = write_json(tmp_path / "broken.json", categories.BROKEN_COHERENCE)
        status, report = run_json(["validate", path], capsys)
        assert status == 1
        assert not report["valid"]
        assert "coherence" in [v["kind"] for v in report["violations"]]

    def test_validate_broken_space(self, tmp_path, capsys):
        path = write_json(tmp_path / "space.json", coalgebras.BROKEN_TABLE)
        status, report = run_json(["validate", path], capsys)
        assert status == 1
        assert not report["valid"]

    def test_validate_coalgebra(self, tmp_path, capsys):
        path = write_json(tmp_path / "lts.json", coalgebras.BRANCHING)
        assert run_json(["validate", path], capsys) == (0, {"valid": True})

    def test_nerve(self, chain2_file, capsys):
        status, report = run_json(["nerve", chain2_file, "--truncation", "2"], capsys)
        assert status == 0
        assert report["truncation"] == 2
        assert report["nondegenerate"] == [3, 3, 1]

    def test_output_is_byte_stable(self, chain2_file, capsys):
        run(["nerve", chain2_file])
        first = capsys.readouterr().out
        run(["nerve", chain2_file])
        assert capsys.readouterr().out == first

    def test_fill_horn(self, chain2_file, capsys):
        argv = ["fill-horn", chain2_file, "--n", "2", "--k", "1"]
        argv += ["--face", "0=1->2", "--face", "2=0->1"]
        status, report = run_json(argv, capsys)
        assert status == 0
        assert report == {"fillers": 1, "simplices": ["0->1;1->2"]}

    def test_kan_check(self, tmp_path, capsys):
        path = write_json(tmp_path / "chain1.json", categories.CHAIN_1)
        status, report = run_json(["kan-check", path, "--max-dim", "2"], capsys)
        assert status == 0
        assert not report["holds"]
        assert report["witness"]["n"] == 2

    def test_kan_check_inner(self, chain2_file, capsys):
        assert run_json(["kan-check", chain2_file, "--inner"], capsys) == (0, {"holds": True})

    def test_budget_exhausted(self, tmp_path, capsys):
        path = write_json(tmp_path / "z2.json", categories.Z2_MONOID)
        assert run(["kan-check", path, "--budget", "1"]) == 3
        assert "budget" in capsys.readouterr().err

    def test_capacity_exceeded(self, chain2_file, capsys):
        """Running out of room is not a failed check."""
        settings.product_capacity = 2
        assert run(["nerve", chain2_file]) == 3
        assert capsys.readouterr().out == ""


class TestLiftingCommands:
    """Tests for lift, query and migrate."""

    def write_square(self, tmp_path, x):
        maps = {
            "f": {"domain": [], "codomain": ["b"], "table": {}},
            "p": {"domain": x, "codomain": ["*"], "table": {v: "*" for v in x}},
            "top": {"domain": [], "codomain": x, "table": {}},
            "bottom": {"domain": ["b"], "codomain": ["*"], "table": {"b": "*"}},
        }
        return [write_json(tmp_path / f"{name}.json", raw) for name, raw in maps.items()]

    def test_lift(self, tmp_path, capsys):
        status, report = run_json(["lift", *self.write_square(tmp_path, ["x", "y"])], capsys)
        assert status == 0
        assert report["count"] == 2
        assert report["solutions"] == [{"b": "x"}, {"b": "y"}]

    def test_lift_expecting_a_solution(self, tmp_path, capsys):
        argv = ["lift", *self.write_square(tmp_path, []), "--expect-solution"]
        status, report = run_json(argv, capsys)
        assert status == 1
        assert report["count"] == 0

    def test_query(self, tmp_path, capsys):
        instance = write_json(tmp_path / "g.json", instances.COLLIDER)
        pattern = write_json(tmp_path / "p.json", instances.COLLIDER_PATTERN)
        status, report = run_json(["query", instance, pattern], capsys)
        assert status == 0
        assert report["count"] == 4
        assert "answers" not in report

    def test_query_with_window(self, tmp_path, capsys):
        instance = write_json(tmp_path / "g.json", instances.TWO_CYCLE)
        pattern = write_json(tmp_path / "p.json", instances.SOURCE_PATTERN)
        _, report = run_json(["query", instance, pattern], capsys)
        assert report["answers"] == [["v1"], ["v2"]]

    @pytest.mark.parametrize("mode,size", [("sigma", 3), ("pi", 2)])
    def test_migrate(self, tmp_path, capsys, mode, size):
        functor = write_json(tmp_path / "f.json", categories.COLLAPSE_FUNCTOR)
        instance = write_json(tmp_path / "i.json", instances.COLLAPSE_SOURCE_INSTANCE)
        status, report = run_json(["migrate", functor, instance, "--mode", mode], capsys)
        assert status == 0
        assert len(report["tables"]["c"]) == size
        # the output is itself an instance file
        InstanceModel.model_validate(report)

    def test_migrate_delta(self, tmp_path, capsys):
        functor = write_json(tmp_path / "f.json", categories.COLLAPSE_FUNCTOR)
        target = {"schema": categories.COLLAPSE_FUNCTOR["target"], "tables": {"c": ["u", "v"]}}
        instance = write_json(tmp_path / "i.json", target)
        _, report = run_json(["migrate", functor, instance, "--mode", "delta"], capsys)
        assert report["tables"] == {"a": ["u", "v"], "b": ["u", "v"]}


class TestLearningCommands:
    """Tests for train, check-functoriality and equivariance."""

    @pytest.fixture
    def dataset(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("1,2\n2,4\n", encoding="utf-8")
        return str(path)

    def test_train(self, tmp_path, dataset, capsys):
        raw = {"layers": [{"kind": "scalar_product"}], "epsilon": 0.05}
        pipeline = write_json(tmp_path / "pipe.json", raw)
        status, report = run_json(["train", pipeline, dataset, "--epochs", "200"], capsys)
        assert status == 0
        assert report["params"][0] == pytest.approx(2.0, abs=1e-2)
        assert len(report["losses"]) == 200
        assert report["final_loss"] == report["losses"][-1]

    def test_stochastic_training_needs_a_seed(self, tmp_path, dataset, capsys):
        raw = {"layers": [{"kind": "bias", "n": 1}], "optimizer": "zeroth_order"}
        pipeline = write_json(tmp_path / "pipe.json", raw)
        assert run(["train", pipeline, dataset]) == 2
        assert "--seed" in capsys.readouterr().err

    def test_dataset_width_must_match(self, tmp_path, dataset, capsys):
        raw = {"layers": [{"kind": "affine", "n_in": 2, "n_out": 1}]}
        pipeline = write_json(tmp_path / "pipe.json", raw)
        assert run(["train", pipeline, dataset]) == 2

    def test_check_functoriality(self, tmp_path, capsys):
        layers = [
            {"kind": "affine", "n_in": 2, "n_out": 3},
            {"kind": "pointwise", "n": 3, "nonlinearity": "tanh"},
        ]
        pipeline = write_json(tmp_path / "pipe.json", {"layers": layers})
        status, report = run_json(["check-functoriality", pipeline, "--samples", "5"], capsys)
        assert status == 0
        assert report["holds"]
        assert report["pairs"][0]["layers"] == [0, 1]
        assert report["gradient_error"] < 1e-6

    def test_equivariance(self, tmp_path, capsys):
        path = write_json(tmp_path / "block.json", {"d": 2, "m": 2, "r": 4, "n": 3})
        status, report = run_json(["equivariance", path, "--seed", "0"], capsys)
        assert status == 0
        assert report["holds"]
        assert report["permutations"] == 6

    def test_equivariance_needs_a_seed(self, tmp_path, capsys):
        path = write_json(tmp_path / "block.json", {"d": 2, "m": 2, "r": 4, "n": 3})
        assert run(["equivariance", path]) == 2


class TestCoalgebraCommands:
    """Tests for bisim, coinductive-solve, yoneda-check and homology."""

    def test_bisim(self, tmp_path, capsys):
        left = write_json(tmp_path / "l.json", coalgebras.BRANCHING)
        right = write_json(tmp_path / "r.json", coalgebras.MERGED)
        status, report = run_json(["bisim", left, right], capsys)
        assert status == 0
        assert report["pairs"] == [["s0", "t0"], ["s1", "t1"], ["s2", "t1"]]

    def test_coinductive_solve(self, tmp_path, capsys):
        path = write_json(tmp_path / "h.json", coalgebras.HALF_CONTRACTION)
        status, report = run_json(["coinductive-solve", path], capsys)
        assert status == 0
        assert report["fixed_point"][0] == pytest.approx(2.0, abs=1e-9)
        assert report["iterations"] == 31
        assert not report["estimated"]
        assert report["error_bound"] <= 1e-9

    def test_non_contraction(self, tmp_path, capsys):
        path = write_json(tmp_path / "h.json", coalgebras.DOUBLING)
        assert run(["coinductive-solve", path]) == 1

    def test_yoneda_check(self, tmp_path, capsys):
        path = write_json(tmp_path / "s.json", coalgebras.STRING_SPACE)
        status, report = run_json(["yoneda-check", path], capsys)
        assert status == 0
        assert report["holds"]

    def test_homology_of_a_group(self, tmp_path, capsys):
        path = write_json(tmp_path / "z2.json", categories.Z2_MONOID)
        status, report = run_json(["homology", "--input", path, "--truncation", "3"], capsys)
        assert status == 0
        assert report["betti"][:3] == [1, 0, 0]
        assert report["torsion"][1] == [2]
        assert report["top_dimension_truncated"]

    def test_homology_of_a_circle(self, tmp_path, capsys):
        path = write_json(tmp_path / "circle.json", {"shape": {"kind": "boundary", "n": 2}})
        export = tmp_path / "boundaries.txt"
        argv = ["homology", "--input", path, "--export-boundaries", str(export)]
        status, report = run_json(argv, capsys)
        assert status == 0
        assert report["betti"][:3] == [1, 1, 0]
        rows = [line.split() for line in export.read_text(encoding="utf-8").splitlines()]
        assert rows
        assert all(len(row) == 4 and row[3] in ("1", "-1") for row in rows)

    def test_homology_of_an_instance(self, tmp_path, capsys):
        path = write_json(tmp_path / "g.json", instances.TWO_CYCLE)
        _, report = run_json(["homology", "--input", path], capsys)
        assert report["betti"][:2] == [1, 1]
