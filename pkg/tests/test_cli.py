import json
import os
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from dimalg.cli import SCHEMA_PATH, main
from dimalg.dsl import BracketDecl, parse

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
GOLDEN = Path(__file__).resolve().parent / "golden"
SCHEMA = json.loads(Path(SCHEMA_PATH).read_text())

# name -> (argv without --json, expected exit code)
RUNS = {
    "check_contact": (["check", "contact.dimalg", "--bracket", "J"], 0),
    "check_broken": (["check", "broken.dimalg", "--bracket", "K"], 1),
    "check_linear_poisson": (["check", "linear_poisson.dimalg", "--bracket", "L"], 0),
    "check_so3": (["check", "so3.dimalg", "--bracket", "LP"], 0),
    "check_unit_free": (["check", "unit_free.dimalg", "--bracket", "PB"], 0),
    "bracket_contact_u_z": (["bracket", "contact.dimalg", "--bracket", "J", "u", "z"], 0),
    "bracket_contact_named": (["bracket", "contact.dimalg", "--bracket", "J", "density", "form"], 0),
    "bracket_so3_casimir": (["bracket", "so3.dimalg", "--bracket", "LP", "casimir", "x"], 0),
    "reduce_r4": (["reduce", "reduction.dimalg", "--reduction", "R"], 0),
    "reduce_r4_flags": (["reduce", "reduction.dimalg", "--bracket", "P", "--ideal", "I", "--survivors", "q2,p2"], 0),
    "reduce_idealizer_violation": (["reduce", "reduction.dimalg", "--reduction", "Rbad"], 1),
    "product_casimir": (["product", "unit_free.dimalg", "--product", "PAB"], 0),
    "product_casimir_flags": (
        ["product", "unit_free.dimalg", "--kind", "casimir", "--bracket", "PA", "--bracket", "PB", "--casimir-left", "ua", "--casimir-right", "v"],
        0,
    ),
    "product_bad_casimir": (["product", "contact_product.dimalg", "--product", "Bad"], 1),
    "product_jacobi": (["product", "contact_product.dimalg", "--product", "JJ"], 0),
    "product_poly_poisson": (["product", "products.dimalg", "--product", "PP"], 0),
    "tensor": (["tensor", "products.dimalg", "--bracket", "PA", "--bracket", "PB"], 0),
}


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def corpus_argv(argv):
    return [argv[0], str(CORPUS / argv[1])] + argv[2:]


@pytest.mark.parametrize("name", sorted(RUNS))
def test_golden_json(name, capsys):
    argv, expected_code = RUNS[name]
    code, out, _ = run(corpus_argv(argv) + ["--json"], capsys)
    assert code == expected_code
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    golden = GOLDEN / f"{name}.json"
    if os.environ.get("DIMALG_REGEN_GOLDEN"):
        golden.parent.mkdir(exist_ok=True)
        golden.write_text(out)
    assert out == golden.read_text()


EMITTING = sorted(n for n, (argv, code) in RUNS.items() if argv[0] in ("reduce", "product", "tensor") and code == 0)


@pytest.mark.parametrize("name", EMITTING)
def test_emitted_specs_recheck(name, capsys, tmp_path):
    argv, _ = RUNS[name]
    out_file = tmp_path / "emitted.dimalg"
    code, _, _ = run(corpus_argv(argv) + ["--out", str(out_file)], capsys)
    assert code == 0
    doc = parse(out_file.read_text())
    (bracket,) = doc.of_kind(BracketDecl)
    code, out, _ = run(["check", str(out_file), "--bracket", bracket.name, "--json"], capsys)
    assert code == 0
    assert json.loads(out)["status"] == "pass"


def test_failures_carry_counterexamples(capsys):
    code, out, _ = run(corpus_argv(["check", "broken.dimalg", "--bracket", "K", "--json"]), capsys)
    report = json.loads(out)
    assert code == 1 and report["status"] == "fail"
    first = report["details"]["counterexamples"][0]
    assert first["check"] == "jacobi_generators"
    assert first["elements"] == ["x @ [0]", "y @ [0]", "u @ [1]"]


def test_bad_casimir_prints_witness(capsys):
    code, out, _ = run(corpus_argv(["product", "contact_product.dimalg", "--product", "Bad"]), capsys)
    assert code == 1
    assert '"witness": "z"' in out


def test_bracket_output(capsys):
    code, out, _ = run(corpus_argv(["bracket", "contact.dimalg", "--bracket", "J", "u", "z"]), capsys)
    assert (code, out) == (0, "1 @ [0]\n")
    code, out, _ = run(corpus_argv(["bracket", "contact.dimalg", "--bracket", "J", "density", "1"]), capsys)
    assert (code, out) == (0, "0 @ [1]\n")


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "missing.dimalg", "--bracket", "J"],
        ["check", "contact.dimalg", "--bracket", "Nope"],
        ["check", "contact.dimalg", "--bracket", "density"],
        ["bracket", "unit_free.dimalg", "--bracket", "PA", "ub", "q"],
        ["bracket", "contact.dimalg", "--bracket", "J", "q + u", "z"],
        ["reduce", "reduction.dimalg"],
        ["product", "products.dimalg", "--bracket", "PA"],
        ["product", "unit_free.dimalg", "--kind", "casimir", "--bracket", "PA", "--bracket", "PB", "--casimir-left", "u^-1", "--casimir-right", "v^-1"],
    ],
    ids=["missing_file", "unknown_name", "wrong_kind", "mismatched_models", "mixed_slices", "reduce_no_args", "one_bracket", "dimension_incompatible"],
)
def test_operational_errors_exit_2(argv, capsys):
    code, out, err = run(corpus_argv(argv) + ["--json"], capsys)
    assert code == 2
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    assert report["status"] == "error"
    assert err


def test_parse_error_goes_to_stderr(tmp_path, capsys):
    bad = tmp_path / "bad.dimalg"
    bad.write_text("model M { vars x; lines u; }\nelement a on M = w @ [0];\n")
    code, out, err = run(["check", str(bad), "--bracket", "B"], capsys)
    assert code == 2
    assert "2:18: unknown symbol 'w'" in err


def test_usage_error_exit_2(capsys):
    assert main(["frobnicate"]) == 2
    assert main(["check"]) == 2


def test_timing_only_on_request(capsys):
    argv = corpus_argv(["check", "contact.dimalg", "--bracket", "J", "--json", "--samples", "5"])
    _, out, _ = run(argv, capsys)
    assert "timing" not in json.loads(out)
    _, out, _ = run(argv + ["--timing"], capsys)
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    assert "total" in report["timing"]


def test_seed_and_samples_change_the_sweep(capsys):
    base = corpus_argv(["check", "broken.dimalg", "--bracket", "K", "--json"])
    _, a, _ = run(base, capsys)
    _, b, _ = run(base + ["--seed", "7"], capsys)
    _, c, _ = run(base + ["--seed", "7"], capsys)
    assert a != b and b == c


@pytest.mark.skipif(shutil.which("dimalg") is None, reason="console script not installed")
def test_console_script_exit_codes():
    ok = subprocess.run(["dimalg", "check", str(CORPUS / "contact.dimalg"), "--bracket", "J"], capture_output=True, text=True)
    assert ok.returncode == 0 and "status: pass" in ok.stdout
    bad = subprocess.run(["dimalg", "check", str(CORPUS / "broken.dimalg"), "--bracket", "K"], capture_output=True)
    assert bad.returncode == 1
    missing = subprocess.run(["dimalg", "check", "nowhere.dimalg", "--bracket", "K"], capture_output=True)
    assert missing.returncode == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dimalg.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "dimalg" in proc.stdout
