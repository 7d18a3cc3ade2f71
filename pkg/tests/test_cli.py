"""CLI tests: exit codes, report formats, config layering, quantities.

Everything drives main(argv) in-process; stdout/stderr go through capsys.
QMC-backed paths use small sample counts to stay fast; statistical
accuracy at full defaults is the acceptance suite's job.
"""

import csv
import io
import json
import os

import jsonschema
import pytest
from mpmath import mp

from mahlerlab import cli, registry
from mahlerlab.cli import JSON_SCHEMA, RunConfig, UsageError, main
from mahlerlab.modular import NEWFORM_F, newform_coefficient
from mahlerlab.registry import IdentityCheck, get_check


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExitCodes:
    def test_no_arguments_is_usage_error(self, capsys):
        code, _, _ = run_cli(capsys)
        assert code == 2

    def test_verify_without_ids_or_all(self, capsys):
        code, _, err = run_cli(capsys, "verify")
        assert code == 2
        assert "--all" in err

    def test_unknown_id_suggests(self, capsys):
        code, _, err = run_cli(capsys, "verify", "eq-9.9")
        assert code == 2
        assert "did you mean" in err

    def test_passing_check_exits_zero(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "qexp-f-coeffs")
        assert code == 0
        assert out.startswith("PASS qexp-f-coeffs")

    def test_failing_check_exits_one(self, capsys, monkeypatch):
        orig = get_check("eq-4.3")
        broken = IdentityCheck(
            id="eq-4.3",
            kind="high-precision",
            description=orig.description,
            lhs_plan=lambda ctx: registry.PlanResult((mp.mpf(1),)),
            rhs_plan=lambda ctx: registry.PlanResult((mp.mpf(2),)),
            tolerance=mp.mpf(0),
        )
        monkeypatch.setitem(registry._REGISTRY, "eq-4.3", broken)
        code, out, _ = run_cli(capsys, "verify", "eq-4.3")
        assert code == 1
        assert "FAIL eq-4.3" in out

    def test_bad_precision(self, capsys):
        code, _, err = run_cli(capsys, "verify", "ff-4.1", "--precision", "16")
        assert code == 2
        assert "precision" in err

    def test_bad_samples(self, capsys):
        code, _, err = run_cli(capsys, "verify", "ff-4.1", "--samples", "3000")
        assert code == 2
        assert "power of two" in err

    def test_bad_filter_tag(self, capsys):
        code, _, err = run_cli(capsys, "verify", "--all", "--filter", "spectral")
        assert code == 2
        assert "filter" in err

    def test_bad_format_flag(self, capsys):
        code, _, _ = run_cli(capsys, "verify", "ff-4.1", "--format", "xml")
        assert code == 2

    def test_unknown_quantity(self, capsys):
        code, _, err = run_cli(capsys, "compute", "tau", "7")
        assert code == 2
        assert "valid" in err


class TestVerifyFormats:
    def test_json_validates_against_schema(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "verify",
            "qexp-ramanujan",
            "fourier-3.10",
            "eq-1.1",
            "--samples",
            "4096",
            "--format",
            "json",
        )
        assert code == 0
        doc = json.loads(out)
        jsonschema.validate(doc, JSON_SCHEMA)
        assert doc["version"] == "v1"
        assert [r["id"] for r in doc["results"]] == [
            "qexp-ramanujan",
            "fourier-3.10",
            "eq-1.1",
        ]
        assert doc["summary"]["passed"] == 3

    def test_json_wall_ms_is_zero(self, capsys):
        _, out, _ = run_cli(capsys, "verify", "ff-4.1", "--format", "json")
        doc = json.loads(out)
        assert all(r["wall_ms"] == 0 for r in doc["results"])

    def test_json_reruns_are_byte_identical(self, capsys):
        argv = (
            "verify",
            "fourier-3.9",
            "eq-1.1",
            "qexp-f-coeffs",
            "--samples",
            "4096",
            "--format",
            "json",
        )
        _, first, _ = run_cli(capsys, *argv)
        _, second, _ = run_cli(capsys, *argv)
        assert first == second

    def test_csv_round_trips(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "ff-4.1", "ff-ahlgren-ono", "--format", "csv"
        )
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert [row["id"] for row in rows] == ["ff-4.1", "ff-ahlgren-ono"]
        assert all(row["pass"] == "true" for row in rows)
        assert all(row["wall_ms"] == "0" for row in rows)

    def test_text_summary_line(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "wz-pair-1", "qexp-ramanujan")
        assert code == 0
        assert out.strip().endswith(
            "2 checks: 2 passed, 0 failed "
            "(exact 2, high-precision 0, statistical 0)"
        )

    def test_filter_runs_only_that_kind(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "--all", "--filter", "statistical",
            "--samples", "4096", "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert len(doc["results"]) == 5
        assert {r["kind"] for r in doc["results"]} == {"statistical"}


class TestCompute:
    def test_zeta_three_thirty_digits(self, capsys):
        code, out, _ = run_cli(capsys, "compute", "zeta", "3", "--digits", "30")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "1.202056903159594285399738161511"
        assert lines[1] == "route: euler-maclaurin"
        assert lines[2].startswith("error-estimate:")

    def test_ap_seven(self, capsys):
        code, out, _ = run_cli(capsys, "compute", "ap", "7")
        assert code == 0
        assert out.splitlines()[0] == "24"
        assert "q-expansion" in out

    def test_ap_matches_module(self, capsys):
        for n in (2, 3, 9, 25):
            _, out, _ = run_cli(capsys, "compute", "ap", str(n))
            assert int(out.splitlines()[0]) == newform_coefficient(NEWFORM_F, n)

    def test_mrk_large_k_is_log_k(self, capsys):
        code, out, _ = run_cli(capsys, "compute", "mRk", "1e6", "--digits", "12")
        assert code == 0
        value = mp.mpf(out.splitlines()[0])
        with mp.workprec(80):
            assert abs(value - mp.log(1_000_000)) < 1e-11

    def test_mrk_too_small_rejected(self, capsys):
        code, _, err = run_cli(capsys, "compute", "mRk", "8")
        assert code == 2
        assert "16" in err

    def test_catalan_and_l_value(self, capsys):
        _, out, _ = run_cli(capsys, "compute", "catalan", "--digits", "20")
        assert out.splitlines()[0] == "0.91596559417721901505"
        code, out, _ = run_cli(capsys, "compute", "L", "f", "4", "--digits", "20")
        assert code == 0
        assert out.splitlines()[0] == "0.95400065965047333772"

    def test_elliptic_modulus_domain(self, capsys):
        code, out, _ = run_cli(capsys, "compute", "K", "0.5", "--digits", "15")
        assert code == 0
        assert out.splitlines()[0] == "1.685750354812596"
        code, _, _ = run_cli(capsys, "compute", "K", "1.5")
        assert code == 2

    def test_mahler_builtin(self, capsys):
        code, out, _ = run_cli(
            capsys, "compute", "mahler", "p4", "--samples", "65536", "--digits", "8"
        )
        assert code == 0
        value = float(out.splitlines()[0])
        assert abs(value - 1.16624361612) < 1e-3
        assert "lattice-qmc" in out

    def test_mahler_descriptor_file(self, capsys, tmp_path):
        path = tmp_path / "two-torus.txt"
        path.write_text("# x + 1/x + y + 1/y - 4\n1 1 0\n1 -1 0\n1 0 1\n1 0 -1\n-4 0 0\n")
        code, out, _ = run_cli(
            capsys, "compute", "mahler", str(path), "--samples", "65536", "--digits", "6"
        )
        assert code == 0
        assert abs(float(out.splitlines()[0]) - 1.166244) < 1e-2

    def test_mahler_unknown_descriptor(self, capsys):
        code, _, err = run_cli(capsys, "compute", "mahler", "nope")
        assert code == 2
        assert "built-ins" in err

    def test_compute_json_format(self, capsys):
        code, out, _ = run_cli(
            capsys, "compute", "zeta", "2", "--digits", "10", "--format", "json"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["version"] == "v1"
        assert doc["value"] == "1.6449340668"
        assert doc["route"] == "euler-maclaurin"


class TestConfigLayering:
    def test_config_file_sets_format(self, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        (tmp_path / "mahlerlab.cfg").write_text("format = json\nprecision = 96\n")
        code, out, _ = run_cli(capsys, "verify", "ff-4.1")
        assert code == 0
        assert json.loads(out)["summary"]["passed"] == 1

    def test_flag_overrides_file(self, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        (tmp_path / "mahlerlab.cfg").write_text("format = json\n")
        code, out, _ = run_cli(capsys, "verify", "ff-4.1", "--format", "text")
        assert code == 0
        assert out.startswith("PASS")

    def test_bad_config_key_rejected(self, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        (tmp_path / "mahlerlab.cfg").write_text("precison = 96\n")
        code, _, err = run_cli(capsys, "verify", "ff-4.1")
        assert code == 2
        assert "precison" in err

    def test_bad_config_line_rejected(self, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        (tmp_path / "mahlerlab.cfg").write_text("precision 96\n")
        code, _, err = run_cli(capsys, "verify", "ff-4.1")
        assert code == 2
        assert "key=value" in err

    def test_hex_seed_accepted(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "eq-1.1", "--samples", "4096",
            "--seed", "0x5EED", "--format", "json",
        )
        assert code == 0
        assert json.loads(out)["results"][0]["seed"] == 0x5EED

    def test_cache_env_and_flag(self, capsys, tmp_path, monkeypatch):
        env_dir = tmp_path / "env-cache"
        monkeypatch.setenv("MAHLERLAB_CACHE", str(env_dir))
        code, _, _ = run_cli(capsys, "compute", "ap", "11")
        assert code == 0
        assert (env_dir / "f.coeffs").is_file()
        assert (env_dir / "h.coeffs").is_file()
        flag_dir = tmp_path / "flag-cache"
        code, _, _ = run_cli(
            capsys, "compute", "ap", "11", "--cache", str(flag_dir)
        )
        assert code == 0
        assert (flag_dir / "f.coeffs").is_file()
        # reload from the freshly written cache
        code, out, _ = run_cli(capsys, "compute", "ap", "7", "--cache", str(flag_dir))
        assert code == 0
        assert out.splitlines()[0] == "24"

    def test_corrupt_cache_rejected(self, capsys, tmp_path):
        cache = tmp_path / "cache"
        cache.mkdir()
        (cache / "f.coeffs").write_text("1 1\n2 999\n")
        code, _, err = run_cli(capsys, "compute", "ap", "7", "--cache", str(cache))
        assert code == 2
        assert "cache" in err


class TestHelpers:
    def test_fixed_decimal_padding_and_sign(self):
        assert cli._fixed_decimal(mp.mpf("1.5"), 3) == "1.500"
        assert cli._fixed_decimal(mp.mpf("-0.0625"), 2) == "-0.06"
        assert cli._fixed_decimal(mp.mpf("0.0001"), 2) == "0.00"
        assert cli._fixed_decimal(mp.mpf(3), 0) == "3"

    def test_run_config_validation(self):
        with pytest.raises(UsageError):
            RunConfig(precision=8).validate()
        with pytest.raises(UsageError):
            RunConfig(qmc_samples=3000).validate()
        with pytest.raises(UsageError):
            RunConfig(output_format="yaml").validate()
        with pytest.raises(UsageError):
            RunConfig(filter=("nope",)).validate()
        assert RunConfig().validate() == RunConfig()
