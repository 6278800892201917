import json
from pathlib import Path

import pytest

from occamlab.cli import main
from occamlab.coding import unpack_bits

GOLDEN = Path(__file__).parent / "golden"

# command line -> expected stdout file, run from inside the golden directory
GOLDEN_RUNS = {
    "bounds_class244.csv": ["bounds", "--epsilon", "0.1", "--delta", "0.05", "--class-size", "244",
                            "--d", "1"],
    "bounds_kc.csv": ["bounds", "--epsilon", "0.1", "--delta", "0.1", "--alpha", "0",
                      "--p", "10"],
    "learn_standard.csv": ["learn", "--algo", "standard", "--sample", "learn3.sample", "--n", "3"],
    "learn_haussler.csv": ["learn", "--algo", "haussler", "--sample", "learn3.sample", "--n", "3"],
    "encode_monomial.csv": ["encode", "--codec", "monomial", "--hypothesis", "hyp.txt",
                            "--target", "target.txt", "--n", "3"],
    "reduce_theorem2.csv": ["reduce", "--theorem", "2", "--system", "monomial", "--learner",
                            "standard", "--sample", "monomial6.sample", "--n", "6"],
    "verify_finite.csv": ["verify", "--config", "verify.json"],
    "vcdim_monomial2.txt": ["vcdim", "--system", "monomial", "--n", "2"],
    "app1_bound_only.csv": ["app1", "--s", "3000000000", "--n", "500", "--bound-only"],
    "app2_n16.csv": ["app2", "--n", "16", "--trials", "20"],
}


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_golden_output(name, capsys, monkeypatch):
    monkeypatch.chdir(GOLDEN)
    code, out, _ = run(GOLDEN_RUNS[name], capsys)
    assert code == 0
    assert out == (GOLDEN / name).read_text()


def test_bounds_row_contains_85(capsys):
    code, out, _ = run(["bounds", "--epsilon", "0.1", "--delta", "0.05", "--class-size", "244"],
                       capsys)
    header, row = out.strip().split("\n")
    assert dict(zip(header.split(","), row.split(",")))["finiteClass"] == "85"


def test_bounds_at_delta_tenth_gives_78(capsys):
    _, out, _ = run(["bounds", "--epsilon", "0.1", "--delta", "0.1", "--class-size", "244"],
                    capsys)
    header, row = out.strip().split("\n")
    assert dict(zip(header.split(","), row.split(",")))["finiteClass"] == "78"


def test_vcdim_prints_two(capsys):
    code, out, _ = run(["vcdim", "--system", "monomial", "--n", "2"], capsys)
    assert code == 0 and out.strip() == "2"


def test_json_output(capsys):
    code, out, _ = run(["vcdim", "--system", "monomial", "--n", "3", "--json"], capsys)
    assert code == 0 and json.loads(out)


def test_deterministic_with_default_seed(capsys):
    argv = ["app2", "--n", "16", "--trials", "10"]
    assert run(argv, capsys)[1] == run(argv + ["--seed", "0"], capsys)[1]


@pytest.mark.parametrize("argv,want", [
    (["frobnicate"], 2),
    ([], 2),
    (["bounds", "--epsilon", "1.5", "--delta", "0.1"], 2),
    (["learn", "--algo", "standard", "--sample", "does-not-exist.sample"], 3),
    (["bounds", "--epsilon", "0.1", "--delta", "0.1", "--p", "1e30"], 4),
    (["app1", "--s", "1000000", "--n", "100"], 4),
])
def test_exit_codes(argv, want, capsys):
    code, _, err = run(argv, capsys)
    assert code == want
    assert err.count("\n") == 1


def test_malformed_sample(tmp_path, capsys):
    path = tmp_path / "bad.sample"
    path.write_text("2\t010\n")
    code, _, err = run(["learn", "--algo", "standard", "--sample", str(path)], capsys)
    assert code == 3 and "line 1" in err


def test_encode_emit(tmp_path, capsys):
    bin_path = tmp_path / "code.bin"
    code, out, _ = run(["encode", "--codec", "monomial", "--hypothesis", str(GOLDEN / "hyp.txt"),
                        "--target", str(GOLDEN / "target.txt"), "--n", "3",
                        "--emit", str(bin_path)], capsys)
    assert code == 0
    assert len(unpack_bits(bin_path.read_bytes())) == 4


def test_stage_failure_exit_code(tmp_path, capsys):
    # parity over three bits is far from any monomial, so stage 1 misses its budget
    lines = [f"{bin(i).count('1') % 2}\t{i:03b}\n" for i in range(8)]
    path = tmp_path / "parity.sample"
    path.write_text("".join(lines * 8))
    code, _, err = run(["reduce", "--theorem", "3", "--system", "monomial", "--learner",
                        "standard", "--sample", str(path), "--n", "3"], capsys)
    assert code == 5 and "stage 1" in err


def test_threshold_circuits_fit_parity(tmp_path, capsys):
    lines = [f"{bin(i).count('1') % 2}\t{i:03b}\n" for i in range(8)]
    path = tmp_path / "parity.sample"
    path.write_text("".join(lines * 8))
    code, out, _ = run(["reduce", "--theorem", "3", "--system", "threshold", "--sample",
                        str(path), "--n", "3"], capsys)
    header, row = out.strip().split("\n")
    assert code == 0 and dict(zip(header.split(","), row.split(",")))["consistent"] == "1"
