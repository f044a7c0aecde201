from __future__ import annotations

import io
import json

import pytest

from conftest import FIXTURES
from strictify.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


ADJ = FIXTURES / "adjunction"
RULES = FIXTURES / "rules"
CLI_SIG = FIXTURES / "cli" / "sig.sig"


def test_nf1_flattens_and_drops_units():
    code, out, _ = call("nf1", CLI_SIG, "(o (o f (u b)) g)")
    assert code == 0
    assert json.loads(out) == ["f", "g"]


def test_nf1_text_format():
    code, out, _ = call("nf1", CLI_SIG, "(o f g)", "--format", "text")
    assert code == 0 and out.strip()


def test_witness_between_bracketings():
    code, out, _ = call("witness", CLI_SIG, "(o (o f (u b)) g)", "(o f g)")
    assert code == 0
    data = json.loads(out)
    assert data["tgt"] == "(o f g)"


@pytest.mark.parametrize(
    "sig, expected",
    [("adjunction", 1), ("adjunction_snake1", 0), ("adjunction_both", 0), ("adjoint_equivalence", 0)],
)
def test_eq2_snake_one(sig, expected):
    code, out, _ = call("eq", ADJ / f"{sig}.sig", ADJ / "snake1_lhs.t2", ADJ / "snake1_rhs.t2", "--level", 2)
    assert code == expected
    assert json.loads(out)["level"] == 2


def test_eq2_snake_two_undetermined_with_one_relation():
    code, _, _ = call("eq", ADJ / "adjunction_snake1.sig", ADJ / "snake2_lhs.t2", ADJ / "snake2_rhs.t2", "--level", 2)
    assert code == 4


def test_eq2_unit_law():
    code, out, _ = call("eq", ADJ / "adjunction.sig", "eta", "(v eta (id (u a)))", "--level", 2)
    assert code == 0 and json.loads(out)["verdict"] == "equal"


def test_eq2_different_boundaries_not_equal():
    code, out, _ = call("eq", ADJ / "adjunction.sig", "eta", "eps", "--level", 2)
    assert code == 1 and json.loads(out)["verdict"] == "not-equal"


def test_witness_not_parallel_exit_three():
    code, _, err = call("witness", CLI_SIG, "(o f g)", "f")
    assert code == 3 and err.startswith("error:")


@pytest.mark.parametrize(
    "a, b, expected",
    [("swap_a.t3", "swap_b.t3", 0), ("swap_a.t3", "both.t3", 0), ("swap_a.t3", "cancel", 1)],
)
def test_eq3(a, b, expected):
    code, _, _ = call("eq", RULES / "interchange.sig", RULES / a, RULES / b if b.endswith(".t3") else b, "--level", 3)
    assert code == expected


def test_eq3_with_relations_is_unknown():
    code, out, _ = call(
        "eq", RULES / "interchange_rel.sig", "swap", "(id2 (v t s))", "--level", 3
    )
    assert code == 4
    assert json.loads(out)["verdict"] == "unknown"


def test_parse_error_exit_two():
    code, _, err = call("nf1", CLI_SIG, "(o f")
    assert code == 2 and err


def test_missing_file_exit_two():
    code, _, _ = call("check", FIXTURES / "nope.sig")
    assert code == 2


def test_bad_arguments_exit_two():
    code, _, _ = call("eq", CLI_SIG, "f")
    assert code == 2


def test_ill_typed_exit_three():
    code, _, _ = call("nf1", CLI_SIG, "(o g f)")
    assert code == 3


def test_unknown_generator_exit_three():
    code, _, _ = call("strictify2", ADJ / "adjunction.sig", "zeta")
    assert code == 3


@pytest.mark.parametrize("name, expected", [("cocycle.sig", 0), ("trivial.sig", 0), ("cocycle_broken.sig", 1)])
def test_check_tables(name, expected):
    code, out, _ = call("check", FIXTURES / "tables" / name)
    assert code == expected
    if expected == 0:
        assert json.loads(out)["tables"]["ok"] is True


def test_check_reports_counts():
    code, out, _ = call("check", ADJ / "adjunction.sig")
    assert code == 0
    data = json.loads(out)
    assert (data["level"], data["gens1"], data["gens2"]) == ("bicategory", 2, 2)


def test_strictify2_json():
    code, out, _ = call("strictify2", ADJ / "adjunction.sig", ADJ / "snake1_lhs.t2")
    assert code == 0
    data = json.loads(out)
    assert [d["gen"] for d in data["discs"]] == ["eta", "eps"]


def test_gray_nf_trace_round_trip():
    bi = FIXTURES / "biadjunction"
    code, out, _ = call("gray-nf", bi / "biadjunction.sig", bi / "figure1_left.t2", "--trace")
    assert code == 0
    data = json.loads(out)
    assert data["nf"] == json.loads((bi / "figure1_pinned.json").read_text())["left"]
    assert data["trace"][-1]["nf"] == data["nf"]


@pytest.mark.parametrize("fmt, golden", [("svg", "zigzag.svg"), ("tikz", "zigzag.tex")])
def test_render_writes_output(tmp_path, fmt, golden):
    dest = tmp_path / golden
    code, out, _ = call("render", ADJ / "adjunction.sig", RULES / "zigzag.t2", "--format", fmt, "-o", dest)
    assert code == 0
    assert json.loads(out) == {"written": str(dest)}
    assert dest.read_text() == (FIXTURES / "golden" / golden).read_text()


def test_oracle_coherence():
    code, out, _ = call("oracle", "coherence", CLI_SIG, "(o (o f (u b)) g)", "(o f g)", "--max-size", 4)
    assert code == 0
    data = json.loads(out)
    assert data["classes"] == 1 and data["terms"]


def test_oracle_orbit():
    code, out, _ = call("oracle", "orbit", RULES / "interchange.sig", "(o s s)")
    assert code == 0
    assert json.loads(out)["size"] >= 1


def test_oracle_functoriality():
    code, out, _ = call("oracle", "functoriality", "--pass", "strictify2", "--n", 20, "--seed", 3)
    assert code == 0
    data = json.loads(out)
    assert data["counterexample"] is None and data["checks"] == 20


def test_demo_snake_text():
    code, out, _ = call("demo", "snake", "--format", "text")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("adjunction:")
    assert len(lines) == 4


def test_demo_biadjunction_matches_pinned():
    code, out, _ = call("demo", "biadjunction", "--trace", "--fixtures", FIXTURES)
    assert code == 0
    data = json.loads(out)
    assert data["witnesses_typecheck"] is True
    for fig, stem in zip(data["figures"], ("figure1", "figure2")):
        pinned = json.loads((FIXTURES / "biadjunction" / f"{stem}_pinned.json").read_text())
        assert {k: fig[k] for k in pinned} == pinned


def test_version():
    code, _, _ = call("--version")
    assert code == 0
