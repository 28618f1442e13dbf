import json
from pathlib import Path

import jsonschema

from pplogic import cli

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
SCHEMAS = Path(__file__).resolve().parent.parent / "src" / "pplogic" / "schemas"


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def validate(payload, schema_name):
    from referencing import Registry, Resource

    registry = Registry().with_resources(
        (path.name, Resource.from_contents(json.loads(path.read_text())))
        for path in SCHEMAS.glob("*.json")
    )
    schema = json.loads((SCHEMAS / schema_name).read_text())
    validator = jsonschema.Draft7Validator(schema, registry=registry)
    validator.validate(payload)


UNIFORM = str(FIXTURES / "uniform_two_atoms.dist.json")
POINT = str(FIXTURES / "point_b1.dist.json")


class TestProb:
    def test_uniform_disjunction(self, capsys):
        code, out, _ = run(capsys, "prob", UNIFORM, "B1|B2")
        assert code == 0 and out.strip() == "3/4"

    def test_point_mass(self, capsys):
        code, out, _ = run(capsys, "prob", POINT, "B1")
        assert code == 0 and out.strip() == "1"

    def test_contradiction(self, capsys):
        code, out, _ = run(capsys, "prob", UNIFORM, "B1&!B1")
        assert code == 0 and out.strip() == "0"

    def test_malformed_distribution_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"carrier":[1],"mass":{"0":"1/2"}}')
        code, _, err = run(capsys, "prob", str(bad), "B1")
        assert code == 2 and "error" in err

    def test_missing_file_exits_2(self, capsys, tmp_path):
        code, _, err = run(capsys, "prob", str(tmp_path / "nowhere.json"), "B1")
        assert code == 2 and "error" in err

    def test_atoms_outside_carrier_extend_fairly(self, capsys):
        code, out, _ = run(capsys, "prob", POINT, "B1 & B2")
        assert code == 0 and out.strip() == "1/2"

    def test_json_format_validates(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "prob", UNIFORM, "B1")
        assert code == 0
        validate(json.loads(out), "prob_result.schema.json")


class TestValid:
    def test_valid_formula_exits_0(self, capsys):
        code, out, _ = run(capsys, "valid", "P(B1) <= 1")
        assert code == 0 and out.strip() == "valid"

    def test_invalid_formula_exits_1_with_witness(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "valid", "P(B1) < 1/2")
        assert code == 1
        payload = json.loads(out)
        validate(payload, "valid_result.schema.json")
        assert payload["witness"]["distribution"]["carrier"] == [1]

    def test_unsupported_exits_3(self, capsys):
        code, _, err = run(capsys, "valid", "P(B1) < x1 * x1")
        assert code == 3 and "unsupported" in err

    def test_parse_error_exits_2(self, capsys):
        code, _, err = run(capsys, "valid", "P(B1 <= 1")
        assert code == 2 and "error" in err


class TestPqEntail:
    def write_hyps(self, tmp_path, lines):
        path = tmp_path / "hyps.txt"
        path.write_text("\n".join(lines) + "\n")
        return str(path)

    def test_split_hypotheses_hailperin_fails(self, capsys, tmp_path):
        hyp = self.write_hyps(tmp_path, ["B1", "!B1"])
        code, out, _ = run(
            capsys, "pq-entail", "--p", "1/2", "--q", "1/4", "--hyp", hyp, "--concl", "F",
            "--hailperin",
        )
        assert code == 1 and "does not entail" in out

    def test_conjunctive_form_entails(self, capsys, tmp_path):
        hyp = self.write_hyps(tmp_path, ["B1", "!B1"])
        code, out, _ = run(
            capsys, "pq-entail", "--p", "1/2", "--q", "1/4", "--hyp", hyp, "--concl", "F"
        )
        assert code == 0 and "entails" in out

    def test_reflexive_entailment(self, capsys, tmp_path):
        hyp = self.write_hyps(tmp_path, ["B1"])
        code, _, _ = run(capsys, "pq-entail", "--p", "1", "--q", "1", "--hyp", hyp, "--concl", "B1")
        assert code == 0

    def test_invalid_pair_exits_2(self, capsys, tmp_path):
        hyp = self.write_hyps(tmp_path, ["B1"])
        code, _, err = run(
            capsys, "pq-entail", "--p", "1/4", "--q", "3/4", "--hyp", hyp, "--concl", "B1"
        )
        assert code == 2 and "error" in err

    def test_comments_and_blanks_in_hypothesis_files(self, capsys, tmp_path):
        hyp = self.write_hyps(tmp_path, ["# a comment", "", "B1  # trailing"])
        code, _, _ = run(capsys, "pq-entail", "--p", "1", "--q", "1", "--hyp", hyp, "--concl", "B1")
        assert code == 0

    def test_json_format_validates(self, capsys, tmp_path):
        hyp = self.write_hyps(tmp_path, ["B1"])
        code, out, _ = run(
            capsys, "--format", "json", "pq-entail", "--p", "1", "--q", "1",
            "--hyp", hyp, "--concl", "B1",
        )
        assert code == 0
        validate(json.loads(out), "pq_result.schema.json")


class TestCheck:
    def test_shipped_script_accepted(self, capsys):
        code, out, _ = run(capsys, "check", str(FIXTURES / "prob_at_most_one.ppl-proof"))
        assert code == 0 and "accepted" in out

    def test_corrupted_script_rejected(self, capsys, tmp_path):
        text = (FIXTURES / "marginal_sum.ppl-proof").read_text().replace("MP 5 6", "MP 3 6")
        bad = tmp_path / "bad.ppl-proof"
        bad.write_text(text)
        code, out, _ = run(capsys, "check", str(bad))
        assert code == 1 and "rejected" in out

    def test_unparsable_script_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.ppl-proof"
        bad.write_text("1. nonsense here\n")
        code, _, err = run(capsys, "check", str(bad))
        assert code == 2 and "error" in err

    def test_undecided_side_condition_exits_2(self, capsys, tmp_path):
        script = tmp_path / "nonlinear.ppl-proof"
        script.write_text("1. P(B1) = x1 * x1 ; RR\n")
        code, out, _ = run(capsys, "check", str(script))
        assert code == 2 and "rejected" in out

    def test_solver_flag_reaches_side_conditions(self, capsys, tmp_path):
        stub = tmp_path / "solver.py"
        stub.write_text("#!/usr/bin/env python3\nimport sys\nopen(sys.argv[1]).read()\nprint('unsat')\n")
        script = tmp_path / "nonlinear.ppl-proof"
        script.write_text("1. P(B1) = x1 * x1 ; RR\n")
        code, out, _ = run(
            capsys, "--solver", f"python3 {stub}", "check", str(script)
        )
        assert code == 0 and "accepted" in out

    def test_json_report_validates(self, capsys):
        code, out, _ = run(
            capsys, "--format", "json", "check", str(FIXTURES / "marginal_sum.ppl-proof")
        )
        assert code == 0
        validate(json.loads(out), "check_report.schema.json")


class TestEmitSmt:
    def test_script_ends_with_check_sat(self, capsys):
        code, out, _ = run(capsys, "emit-smt", "P(B1) <= 1")
        assert code == 0 and out.rstrip().endswith("(check-sat)")

    def test_deterministic_across_runs(self, capsys):
        _, first, _ = run(capsys, "emit-smt", "P(B1 & B2) < 1/3")
        _, second, _ = run(capsys, "emit-smt", "P(B1 & B2) < 1/3")
        assert first == second

    def test_marginal_sum_formula_emits(self, capsys):
        code, out, _ = run(
            capsys, "emit-smt", "P(B1 & !B2) = x1 & P(B1 & B2) = x2 -> P(B1) = x1 + x2"
        )
        assert code == 0 and "(set-logic QF_NRA)" in out


class TestGaloisDemo:
    def test_round_trip_reported_equal(self, capsys):
        code, out, _ = run(capsys, "galois-demo", UNIFORM)
        assert code == 0 and "round trip equal: True" in out

    def test_json_format_validates(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "galois-demo", UNIFORM)
        assert code == 0
        payload = json.loads(out)
        validate(payload, "galois_result.schema.json")
        assert payload["round_trip_equal"] is True
