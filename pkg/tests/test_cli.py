import json

from click.testing import CliRunner

from condtest.cli import main


def write_spec(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def uniform_spec(tmp_path, n=64, name="u.json"):
    return write_spec(tmp_path, name,
                      {"kind": "explicit", "weights": [1.0] * n})


class TestRun:
    def test_basic_run_prints_aggregate(self, tmp_path):
        spec = uniform_spec(tmp_path)
        r = CliRunner().invoke(main, [
            "run", "--tester", "pcond_uniform", "--dist", spec,
            "--eps", "0.5", "--trials", "2", "--seed", "3",
        ])
        assert r.exit_code == 0, r.output
        doc = json.loads(r.output)
        assert doc["trials"] == 2
        assert doc["profile"]["name"] == "desk"
        assert 0.0 <= doc["accept_rate"] <= 1.0

    def test_csv_output_file(self, tmp_path):
        spec = uniform_spec(tmp_path)
        out = tmp_path / "report.csv"
        r = CliRunner().invoke(main, [
            "run", "--tester", "pcond_uniform", "--dist", spec,
            "--eps", "0.5", "--trials", "2", "--out", str(out),
            "--format", "csv",
        ])
        assert r.exit_code == 0, r.output
        lines = out.read_text().splitlines()
        assert lines[0] == "trial,seed,verdict,estimate,samp,cond,pcond,icond,total,millis"
        assert len(lines) == 3

    def test_json_output_file(self, tmp_path):
        spec = uniform_spec(tmp_path)
        out = tmp_path / "report.json"
        r = CliRunner().invoke(main, [
            "run", "--tester", "dist_uniformity", "--dist", spec,
            "--eps", "0.25", "--trials", "1", "--out", str(out),
        ])
        assert r.exit_code == 0, r.output
        doc = json.loads(out.read_text())
        assert doc["aggregate"]["kind"] == "estimate"
        assert len(doc["trials"]) == 1

    def test_two_spec_tester(self, tmp_path):
        d1 = uniform_spec(tmp_path, name="a.json")
        d2 = uniform_spec(tmp_path, name="b.json")
        r = CliRunner().invoke(main, [
            "run", "--tester", "cond_known", "--dist", d1, "--dist2", d2,
            "--eps", "0.5", "--trials", "1",
        ])
        assert r.exit_code == 0, r.output

    def test_missing_second_spec_fails_cleanly(self, tmp_path):
        spec = uniform_spec(tmp_path)
        r = CliRunner().invoke(main, [
            "run", "--tester", "cond_known", "--dist", spec,
            "--eps", "0.5",
        ])
        assert r.exit_code != 0
        assert "two distribution specs" in r.output

    def test_unknown_tester_rejected(self, tmp_path):
        spec = uniform_spec(tmp_path)
        r = CliRunner().invoke(main, [
            "run", "--tester", "nope", "--dist", spec, "--eps", "0.5",
        ])
        assert r.exit_code != 0


class TestSweep:
    def test_sweep_outputs_rows(self):
        r = CliRunner().invoke(main, [
            "sweep", "--tester", "pcond_uniform", "--n-grid", "256,1024",
            "--eps", "0.5", "--trials", "1",
        ])
        assert r.exit_code == 0, r.output
        doc = json.loads(r.output)
        assert [row["n"] for row in doc["rows"]] == [256, 1024]

    def test_bad_grid(self):
        r = CliRunner().invoke(main, [
            "sweep", "--tester", "pcond_uniform", "--n-grid", "a,b",
            "--eps", "0.5",
        ])
        assert r.exit_code != 0


class TestDistValidate:
    def test_validate_generator_spec(self, tmp_path):
        spec = write_spec(tmp_path, "hs.json", {
            "kind": "generator", "name": "half_split",
            "params": {"n": 64, "eps": 0.25},
        })
        r = CliRunner().invoke(main, ["dist", "validate", spec])
        assert r.exit_code == 0, r.output
        doc = json.loads(r.output)
        assert doc["n"] == 64
        assert doc["total_mass"] == 1.0
        assert abs(doc["tv_to_uniform"] - 0.25) < 1e-12

    def test_validate_bad_spec(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{\"kind\": \"generator\", \"name\": \"nope\"}")
        r = CliRunner().invoke(main, ["dist", "validate", str(p)])
        assert r.exit_code != 0
