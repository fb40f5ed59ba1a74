import io
import json

import pandas as pd
import pytest
from click.testing import CliRunner

from morse_cli import cli
from utils.descriptor_io import load_descriptor
from utils.morse_algebra import cobordism_invariant, diagonal_product


@pytest.fixture
def run(data_dir):
    runner = CliRunner()

    def invoke(*args):
        resolved = [str(data_dir / a) if a.endswith(".json") else a for a in args]
        return runner.invoke(cli, resolved)

    return invoke


def test_invariant_text(run):
    result = run("invariant", "symmetric.json")
    assert result.exit_code == 0
    assert "phis: [0]" in result.output
    assert "token: S2" in result.output


def test_invariant_json_with_z2(run):
    result = run("invariant", "oriented_circle.json", "--format", "json")
    assert result.exit_code == 0
    assert json.loads(result.output)["z2"] == 1


def test_obstruct_csv(run):
    result = run("obstruct", "f.json", "fprime.json", "--K", "5", "--format", "csv")
    assert result.exit_code == 0
    frame = pd.read_csv(io.StringIO(result.output))
    assert len(frame) == 6
    assert frame["product_phi_top"].tolist() == [1, 3, 4, 5, 6, 7]
    assert frame["family_matches_base"].all()
    assert frame["product_distinct"].all()


def test_obstruct_text_lists_checks(run):
    result = run("obstruct", "symmetric.json", "fprime.json", "--K", "3")
    assert result.exit_code == 0
    assert "PASS top-phi-constant" in result.output
    assert "verdict: pass" in result.output


def test_obstruct_is_deterministic(run):
    first = run("obstruct", "f.json", "fprime.json", "--format", "json")
    second = run("obstruct", "f.json", "fprime.json", "--format", "json")
    assert first.output == second.output


def test_validate_bad_descriptor(run):
    result = run("validate", "bad_odd_euler.json")
    assert result.exit_code == 2
    assert "odd-euler" in result.output


def test_validate_good_descriptor(run):
    result = run("validate", "f.json")
    assert result.exit_code == 0
    assert "valid" in result.output


def test_invalid_input_exits_two(run):
    result = run("invariant", "bad_odd_euler.json")
    assert result.exit_code == 2
    assert "Euler" in result.output


def test_missing_file_exits_two(run):
    assert run("invariant", "nowhere.json").exit_code == 2


def test_non_utf8_file_exits_two(run, tmp_path):
    path = tmp_path / "latin1.json"
    path.write_bytes(b'{"dimension": 1, "oriented": false, "counts": [1, 1], "manifold": {"class": [["\xff", 1]]}}')
    result = run("invariant", str(path))
    assert result.exit_code == 2
    assert "UTF-8" in result.output


@pytest.fixture
def short_counts(tmp_path):
    path = tmp_path / "short.json"
    path.write_text('{"dimension": 2, "oriented": false, "counts": [1, 1]}')
    return str(path)


def test_phi_rejects_short_counts(run, short_counts):
    result = run("phi", short_counts, "--j", "2")
    assert result.exit_code == 2
    assert "expected m+1 = 3" in result.output


def test_theorem3_rejects_short_counts(run, short_counts):
    result = run("theorem3", "fprime.json", short_counts, "--j", "0")
    assert result.exit_code == 2
    assert "expected m+1 = 3" in result.output


def test_phi(run):
    result = run("phi", "f.json", "--j", "2")
    assert result.exit_code == 0
    assert result.output.strip() == "phi_2: 1"
    assert run("phi", "f.json", "--j", "5").exit_code == 2


def test_product_writes_output(run, tmp_path):
    target = tmp_path / "product.json"
    result = run("product", "f.json", "fprime.json", "--output", str(target))
    assert result.exit_code == 0
    assert json.loads(result.output)["counts"] == [1, 2, 3, 2]
    assert json.loads(target.read_text())["dimension"] == 3


def test_theorem3(run):
    result = run("theorem3", "fprime.json", "f.json", "--j", "0")
    assert result.exit_code == 0
    assert result.output.strip() == "phi_3: 1 (convolution: 1)"
    assert run("theorem3", "f.json", "fprime.json", "--j", "0").exit_code == 2


def test_theorem3_json(run):
    result = run("theorem3", "fprime.json", "f.json", "--j", "0", "--format", "json")
    assert result.exit_code == 0
    assert json.loads(result.output) == {"j": 0, "index": 3, "theorem3_phi": 1, "convolution_phi": 1}


def test_stabilize(run):
    result = run("stabilize", "fprime.json", "--k", "2")
    assert result.exit_code == 0
    assert json.loads(result.output)["counts"] == [4, 4]
    off = run("stabilize", "fprime.json", "--k", "2", "--extra-middle-pair", "off")
    assert json.loads(off.output)["counts"] == [3, 3]


def test_cobordant_exit_codes(run):
    assert run("cobordant", "fprime.json", "fprime.json").exit_code == 0
    result = run("cobordant", "f.json", "symmetric.json")
    assert result.exit_code == 1
    assert "cobordant: false" in result.output


def test_verify_lemma1_json(run):
    result = run("verify-lemma1", "--f1", "circle_cos:1", "--f2", "circle_cos:1", "--format", "json")
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["verdict"] == "pass"
    assert payload["found_histogram"] == [1, 2, 1]


@pytest.mark.parametrize(
    "args",
    [
        ["--f1", "klein_bottle", "--f2", "circle_cos:1"],
        ["--f1", "circle_cos:1", "--f2", "circle_cos:1", "--weights", "1,0"],
        ["--f1", "circle_cos:1", "--f2", "circle_cos:1", "--weights", "1"],
    ],
)
def test_verify_lemma1_bad_input(run, args):
    assert run("verify-lemma1", *args).exit_code == 2


def test_product_output_round_trips_through_invariant(run, data_dir, tmp_path):
    target = tmp_path / "product.json"
    assert run("product", "f.json", "fprime.json", "--output", str(target)).exit_code == 0
    result = run("invariant", str(target), "--format", "json")
    assert result.exit_code == 0
    expected = cobordism_invariant(
        diagonal_product(load_descriptor(data_dir / "f.json"), load_descriptor(data_dir / "fprime.json"))
    )
    assert json.loads(result.output) == expected.to_dict()


def test_stabilize_output_stays_cobordant(run, tmp_path):
    target = tmp_path / "stable.json"
    assert run("stabilize", "f.json", "--k", "3", "--output", str(target)).exit_code == 0
    assert run("cobordant", "f.json", str(target)).exit_code == 0
