from conftest import fixture_path

from bihomega.cli import render_report, run_command


def run(args):
    return run_command(args)


def test_validate_ok_exit_zero():
    report, code = run(["--no-timing", "validate", fixture_path("e1.json")])
    assert code == 0
    assert report["status"] == "ok"
    assert report["checks"]["algebra"] == "ok"


def test_validate_broken_exit_one_with_witness():
    report, code = run(["--no-timing", "validate", fixture_path("e1_broken.json")])
    assert code == 1
    assert report["status"] == "witness"
    assert report["witness"]["equation"] == "bihom-associativity"


def test_validate_rbf_fixture_checks_all_blocks():
    report, code = run(["--no-timing", "validate", fixture_path("e1_rbf.json")])
    assert code == 0
    assert report["checks"] == {
        "monoid": "ok",
        "algebra": "ok",
        "rota_baxter": "ok",
        "bimodule": "ok",
        "rbf_bimodule": "ok",
    }


def test_cohomology_e0_table():
    report, code = run(
        ["--no-timing", "cohomology", fixture_path("e0.json"), "--complex", "alg", "--max-degree", "3"]
    )
    assert code == 0
    rows = report["tables"]["alg"]["degrees"]
    assert [r["cohomology"] for r in rows] == [1, 0, 0, 0]


def test_cohomology_rbfa_all_three_tables():
    report, code = run(
        ["--no-timing", "cohomology", fixture_path("e0_rbf.json"), "--complex", "rbfa", "--max-degree", "2"]
    )
    assert code == 0
    assert set(report["tables"]) == {"alg", "rbf", "rbfa"}


def test_mc_check_ok_and_witness():
    report, code = run(["--no-timing", "mc-check", fixture_path("e1.json")])
    assert code == 0 and report["residual_zero"] is True
    report, code = run(["--no-timing", "mc-check", fixture_path("e1_broken.json")])
    assert code == 1 and report["residual_zero"] is False
    assert "witness" in report


def test_star_emits_validating_output():
    report, code = run(["--no-timing", "star", fixture_path("e1_rbf.json")])
    assert code == 0
    assert report["output"]["algebra"]["dim"] == 2


def test_yau_twist_command():
    report, code = run(["--no-timing", "yau-twist", fixture_path("diag2_twist.json")])
    assert code == 0
    assert report["status"] == "ok"


def test_nijenhuis_command():
    report, code = run(["--no-timing", "nijenhuis", fixture_path("e1_nijenhuis.json")])
    assert code == 0
    assert report["nijenhuis"] == "ok"
    assert report["deformed_valid"] and report["homomorphism"] and report["psi_zero"]


def test_deform_check_command():
    report, code = run(["--no-timing", "deform-check", fixture_path("e1_rbf_jet.json")])
    assert code == 0
    assert all(o["associativity"] and o["operator_identity"] for o in report["orders"])


def test_extend_command():
    report, code = run(["--no-timing", "extend", fixture_path("e1_rbf_pair.json")])
    assert code == 0
    assert report["valid"] and report["is_cocycle"]
    assert "extension" in report["output"]


def test_extract_cocycle_command():
    report, code = run(["--no-timing", "extract-cocycle", fixture_path("e1_rbf_extension.json")])
    assert code == 0
    assert "cocycle_pair" in report["output"]


def test_compare_ext_command_cohomologous():
    report, code = run(
        [
            "--no-timing",
            "compare-ext",
            fixture_path("e1_rbf_extension.json"),
            fixture_path("e1_rbf_extension2.json"),
        ]
    )
    assert code == 0
    assert report["cohomologous"] is True
    assert "iso" in report


def test_search_rbf_zero_algebra_counts_all_candidates():
    report, code = run(
        ["--no-timing", "search-rbf", fixture_path("zero1.json"), "--bound", "1", "--weight", "0"]
    )
    assert code == 0
    assert report["count"] == 3  # (2*1+1)^(1*1*1)


def test_search_rbf_e1_contains_zero_family():
    report, code = run(
        ["--no-timing", "search-rbf", fixture_path("e1.json"), "--bound", "1", "--weight", "0"]
    )
    assert code == 0
    assert report["count"] >= 1
    zero_mat = [["0", "0"], ["0", "0"]]
    assert any(fam["0"] == zero_mat for fam in report["families"])


def test_search_rbf_e0_weight_one_contains_negated_identity():
    report, code = run(
        ["--no-timing", "search-rbf", fixture_path("e0.json"), "--bound", "1", "--weight", "1"]
    )
    assert code == 0
    assert any(fam["0"] == [["-1"]] for fam in report["families"])


def test_unknown_flag_exit_two():
    _, code = run(["validate", fixture_path("e1.json"), "--frobnicate"])
    assert code == 2


def test_parse_error_exit_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    report, code = run(["--no-timing", "validate", str(bad)])
    assert code == 2
    assert report["status"] == "error"


def test_reports_deterministic_without_timing():
    a1 = render_report(run(["--no-timing", "cohomology", fixture_path("e1.json"), "--max-degree", "2"])[0])
    a2 = render_report(run(["--no-timing", "cohomology", fixture_path("e1.json"), "--max-degree", "2"])[0])
    assert a1 == a2
    s1 = render_report(run(["--no-timing", "selftest", "--seed", "7", "--samples", "5"])[0])
    s2 = render_report(run(["--no-timing", "selftest", "--seed", "7", "--samples", "5"])[0])
    assert s1 == s2


def test_timing_present_by_default():
    report, _ = run(["validate", fixture_path("e0.json")])
    assert "timing" in report


def test_selftest_passes():
    report, code = run(["--no-timing", "selftest", "--seed", "11", "--samples", "10"])
    assert code == 0
    assert report["results"]["mc_equivalence"] is True


def test_extend_extract_workflow_through_files(tmp_path):
    import json

    report, code = run(["--no-timing", "extend", fixture_path("e1_rbf_pair.json")])
    assert code == 0
    out_file = tmp_path / "built_extension.json"
    out_file.write_text(json.dumps(report["output"], sort_keys=True, indent=2) + "\n")
    report2, code2 = run(["--no-timing", "extract-cocycle", str(out_file)])
    assert code2 == 0
    with open(fixture_path("e1_rbf_pair.json"), encoding="utf-8") as fh:
        original = json.load(fh)
    assert report2["output"]["cocycle_pair"] == original["cocycle_pair"]


def test_every_shipped_fixture_revalidates():
    from conftest import FIXTURES

    for path in sorted(FIXTURES.glob("*.json")):
        text = path.read_text(encoding="utf-8")
        if '"schema"' not in text:
            continue
        report, code = run(["--no-timing", "validate", str(path)])
        if "broken" in path.name:
            assert code == 1, path.name
        else:
            assert code == 0, (path.name, report)
