import io
import json
import subprocess
import sys

import pytest

from aniso.cli import main
from aniso.replay import UnknownExampleId, replay_ids, run_replay


def run_cli(argv, stdin=None):
    old_in, old_out = sys.stdin, sys.stdout
    sys.stdout = io.StringIO()
    if stdin is not None:
        sys.stdin = io.StringIO(stdin)
    try:
        code = main(argv)
        out = sys.stdout.getvalue()
    finally:
        sys.stdin, sys.stdout = old_in, old_out
    return code, out


def test_bounds_quadric_even_example():
    code, out = run_cli(["bounds", "--kind", "quadric_even", "--n", "4"])
    obj = json.loads(out)
    assert code == 0
    assert obj["divisor_bound"] == "512"


def test_bounds_minkowski_and_torsion_paths():
    code, out = run_cli(["bounds", "--kind", "minkowski", "--n", "2"])
    obj = json.loads(out)
    assert code == 0 and (obj["upsilon_a"], obj["upsilon_m"]) == ("12", "24")

    code, out = run_cli(["bounds", "--kind", "torsion", "--types", "B:2,F:4"])
    assert json.loads(out)["torsion_primes"] == ["2", "3"]


def test_bounds_missing_parameter_is_structured():
    code, out = run_cli(["bounds", "--kind", "torus"])
    obj = json.loads(out)
    assert code == 2
    assert obj["error"]["type"] == "MissingParameter"


def test_all_integers_are_strings():
    code, out = run_cli(["bounds", "--kind", "reductive_perfect",
                         "--n", "2", "--r", "2", "--N", "3"])
    obj = json.loads(out)
    assert code == 0
    for value in obj.values():
        assert not isinstance(value, (int, float))


def test_torus_analyze_stdin():
    model = {"rank": "1",
             "theta_generators": [{"rows": "1", "cols": "1",
                                   "entries": [["-1"]]}],
             "label": "nonsplit"}
    code, out = run_cli(["torus", "analyze", "--input", "-", "--d-max", "6"],
                        stdin=json.dumps(model))
    obj = json.loads(out)
    assert code == 0 and obj["anisotropic"]
    exponents = {row["d"]: row["exponent"] for row in obj["torsion"]}
    assert exponents == {"2": "2", "3": "1", "4": "2", "5": "1", "6": "2"}


def test_malformed_json_is_schema_error():
    code, out = run_cli(["torus", "analyze", "--input", "-"], stdin="{oops")
    obj = json.loads(out)
    assert code == 2
    assert obj["error"]["type"] == "SchemaError"
    assert obj["error"]["path"] == "$"


def test_schema_error_points_at_missing_field():
    code, out = run_cli(["torus", "analyze", "--input", "-"],
                        stdin='{"rank": "1"}')
    obj = json.loads(out)
    assert code == 2
    assert obj["error"]["path"] == "$.theta_generators"


def test_pairing_isotropic_z4_example():
    payload = {"invariant_factors": ["4", "4"],
               "gram": [["0/1", "1/4"], ["-1/4", "0/1"]]}
    code, out = run_cli(["pairing", "isotropic", "--input", "-"],
                        stdin=json.dumps(payload))
    obj = json.loads(out)
    assert code == 0
    assert obj["isotropic_order"] == "4"
    assert obj["generator_orders"] == ["4"]
    assert obj["order_squared_covers_group"] is True


def test_pairing_bad_gram_entry_path():
    payload = {"invariant_factors": ["2"], "gram": [["zebra"]]}
    code, out = run_cli(["pairing", "isotropic", "--input", "-"],
                        stdin=json.dumps(payload))
    obj = json.loads(out)
    assert code == 2
    assert obj["error"]["path"] == "$.gram[0][0]"


def test_pairing_fuzz_is_seeded_and_deterministic():
    first = run_cli(["pairing", "fuzz", "--trials", "8", "--seed", "3"])
    second = run_cli(["pairing", "fuzz", "--trials", "8", "--seed", "3"])
    assert first == second
    code, out = first
    assert code == 0 and json.loads(out)["all_pass"] is True


def test_csa_norm_of_u():
    payload = {"degree": "3", "element": {"1,0": "1"}}
    code, out = run_cli(["csa", "norm", "--input", "-"],
                        stdin=json.dumps(payload))
    obj = json.loads(out)
    assert code == 0
    assert obj["norm_repr"] == "a"


def test_csa_verify_weyl():
    code, out = run_cli(["csa", "verify-weyl", "--p", "3"])
    obj = json.loads(out)
    assert code == 0
    assert obj["splits_as_full_matrix_algebra"] is True


def test_csa_torsion_rank():
    code, out = run_cli(["csa", "torsion", "--p", "2", "--m", "3"])
    obj = json.loads(out)
    assert code == 0
    assert obj["rank"] == "3" and obj["group_order"] == "8"


def test_quad_arf_roundtrip():
    payload = {"field": {"kind": "prime_field", "p": "2"}, "dim": "2",
               "coeffs": {"0,0": "1", "0,1": "1", "1,1": "1"}}
    code, out = run_cli(["quad", "arf", "--input", "-"],
                        stdin=json.dumps(payload))
    obj = json.loads(out)
    assert code == 0
    assert obj["arf_repr"] == "1"


def test_quad_extract_isotropic():
    form = {"field": {"kind": "prime_field", "p": "3"}, "dim": "3",
            "coeffs": {"0,0": "1", "1,1": "1", "2,2": "1"}}
    matrix = [["0", "0", "1"], ["1", "0", "0"], ["0", "1", "0"]]
    code, out = run_cli(["quad", "extract-isotropic", "--input", "-"],
                        stdin=json.dumps({"form": form, "matrix": matrix}))
    obj = json.loads(out)
    assert code == 0
    assert obj["form_value_is_zero"] is True


def test_quad_extract_bad_matrix_path():
    form = {"field": {"kind": "prime_field", "p": "3"}, "dim": "2",
            "coeffs": {"0,0": "1", "1,1": "1"}}
    code, out = run_cli(["quad", "extract-isotropic", "--input", "-"],
                        stdin=json.dumps({"form": form, "matrix": [["1"]]}))
    obj = json.loads(out)
    assert code == 2
    assert obj["error"]["path"] == "$.matrix[0]"


def test_quad_pfister_subcommand():
    code, out = run_cli(["quad", "pfister", "--k", "3", "--trials", "5"])
    obj = json.loads(out)
    assert code == 0
    assert obj["closure_order"] == "8"
    assert obj["closure_nonabelian"] is True
    assert obj["candidates_refuted"] == "5"


def test_replay_ids_registry():
    assert replay_ids() == ("example-2.5", "example-2.6", "example-4.8",
                            "example-5.4", "minkowski-table")


def test_run_replay_filter_and_unknown():
    results = run_replay(["example-2.5"])
    assert len(results) == 1
    assert results[0]["id"] == "example-2.5"
    assert results[0]["status"] == "pass"
    with pytest.raises(UnknownExampleId):
        run_replay(["nonsense"])


def test_replay_cli_unknown_id_exit_code():
    code, out = run_cli(["replay", "nonsense"])
    obj = json.loads(out)
    assert code == 2
    assert obj["error"]["type"] == "UnknownExampleId"


def test_replay_cli_deterministic_bytes():
    first = run_cli(["replay", "minkowski-table", "example-2.5"])
    second = run_cli(["replay", "minkowski-table", "example-2.5"])
    assert first == second
    code, out = first
    arr = json.loads(out)
    assert code == 0
    assert [e["status"] for e in arr] == ["pass", "pass"]


def test_compact_json_flag():
    code, out = run_cli(["bounds", "--kind", "torus", "--n", "1", "--json"])
    assert code == 0
    assert out.count("\n") == 1  # single line
    assert json.loads(out)["divisor_bound"] == "2"


def test_installed_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "aniso.cli", "bounds", "--kind",
         "severi_brauer", "--n", "3", "--json"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["divisor_bound"] == "9"
