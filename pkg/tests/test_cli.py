import json

from extmod.cli import main
from extmod.modules import FlashShape, default_params, make_flash
from extmod.textio import parse_module, print_module

P = default_params()


def write_doc(tmp_path, name, module):
    path = tmp_path / name
    path.write_text(print_module(module))
    return str(path)


def test_build_writes_parseable_document(tmp_path, capsys):
    out = tmp_path / "m.txt"
    assert main(["build", "L(1,0,1)@0", "-o", str(out)]) == 0
    assert parse_module(out.read_text()) == make_flash(FlashShape.l(1, 0, 1), P)


def test_build_stdout_and_sum(capsys):
    assert main(["build", "L(0,0,1)@0 + simple@4"]) == 0
    m = parse_module(capsys.readouterr().out)
    assert m.dims_by_degree == {0: 1, 3: 1, 4: 1}


def test_build_transforms(capsys):
    assert main(["build", "truncate(shift(L(2,0,1)@0, 1), 5)"]) == 0
    m = parse_module(capsys.readouterr().out)
    assert m.dims_by_degree == {1: 1, 3: 1, 4: 1, 5: 1}


def test_build_deterministic_randomize(capsys):
    assert main(["build", "randomize(L(1,0,1)@0 + L(0,0,1)@0, 11)"]) == 0
    first = capsys.readouterr().out
    assert main(["build", "randomize(L(1,0,1)@0 + L(0,0,1)@0, 11)"]) == 0
    assert capsys.readouterr().out == first
    # global seed feeds seedless randomize
    assert main(["--seed", "4", "build", "randomize(L(1,0,1)@0)"]) == 0
    with_global = capsys.readouterr().out
    assert main(["build", "randomize(L(1,0,1)@0, 4)"]) == 0
    assert capsys.readouterr().out == with_global


def test_build_free_infers_variant_a(capsys):
    assert main(["build", "free@0"]) == 0
    assert "algebra A" in capsys.readouterr().out


def test_build_bad_expression(capsys):
    assert main(["build", "L(1,0)@0"]) == 2
    assert "error" in capsys.readouterr().err


def test_build_inf_expression(capsys):
    assert main(["build", "inf(0)@trunc=7"]) == 0
    m = parse_module(capsys.readouterr().out)
    assert m.dim(0) == 1 and m.dim(7) == 1


def test_decompose_m1(tmp_path, capsys):
    path = write_doc(tmp_path, "m1.txt", make_flash(FlashShape.l(1, 0, 1), P))
    assert main(["decompose", path, "--certify", "--oracle"]) == 0
    out = capsys.readouterr().out
    assert "L(1,0,1)@0 x1" in out
    assert "certified: True" in out
    assert "oracle agrees: True" in out


def test_decompose_json(tmp_path, capsys):
    path = write_doc(tmp_path, "m1.txt", make_flash(FlashShape.l(1, 0, 1), P))
    assert main(["--report", "json", "decompose", path]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc == {"multiset": {"L(1,0,1)@0": 1}}


def test_filtration_on_stage(tmp_path, capsys):
    from extmod.modules import counterexample_stage
    path = write_doc(tmp_path, "stage.txt", counterexample_stage(4, P))
    assert main(["filtration", path, "--j", "1", "--degree", "0"]) == 0
    assert capsys.readouterr().out.strip() == "dim 4"
    assert main(["filtration", path, "--j", "1"]) == 0
    assert "deg 0: 4" in capsys.readouterr().out


def test_margolis(tmp_path, capsys):
    path = write_doc(tmp_path, "m2.txt", make_flash(FlashShape.l(2, 0, 1), P))
    assert main(["margolis", path, "--op", "e1"]) == 0
    assert capsys.readouterr().out.splitlines() == ["deg 0: 1", "deg 7: 1"]
    assert main(["margolis", path, "--op", "e2"]) == 0
    assert capsys.readouterr().out.strip() == "zero"


def test_split_free(tmp_path, capsys):
    assert main(["build", "randomize(free@0 + L(1,0,1)@0, 3)",
                 "-o", str(tmp_path / "fa.txt")]) == 0
    comp = tmp_path / "comp.txt"
    assert main(["split-free", str(tmp_path / "fa.txt"),
                 "--complement-out", str(comp)]) == 0
    out = capsys.readouterr().out
    assert "free rank @ deg 0: 1" in out
    parsed = parse_module(comp.read_text())
    assert parsed.total_dim == 4


def test_paper_check_passes(capsys):
    assert main(["paper-check", "--N", "2", "--jmax", "4"]) == 0
    out = capsys.readouterr().out
    assert "ALL ITEMS PASS" in out
    assert out.count("[PASS]") == 9


def test_paper_check_json_schema(capsys):
    assert main(["--report", "json", "paper-check", "--N", "1", "--jmax", "2",
                 "--field", "5", "--degs", "2,5"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["pass"] is True
    assert doc["params"]["field"] == 5
    assert doc["params"]["deg_e1"] == 2
    assert {frozenset(item) for item in doc["items"]} == \
        {frozenset({"id", "quote", "data", "pass"})}


def test_paper_check_usage_errors(capsys):
    assert main(["paper-check", "--N", "3", "--jmax", "3"]) == 2
    assert main(["paper-check", "--N", "2", "--jmax", "4",
                 "--field", "6"]) == 2


def test_cli_deterministic_output(tmp_path, capsys):
    path = write_doc(tmp_path, "m.txt", make_flash(FlashShape.l(2, 0, 1), P))
    assert main(["decompose", path]) == 0
    first = capsys.readouterr().out
    assert main(["decompose", path]) == 0
    assert capsys.readouterr().out == first


def test_malformed_document_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("field 2\ndeg e1 1\ndeg e2 3\nalgebra B\nbasis a 0\ne1 a = a\n")
    assert main(["decompose", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "line 6" in err


def test_missing_file_exit_2(capsys):
    assert main(["decompose", "/nonexistent/nothing.txt"]) == 2


def test_variant_a_with_free_part_rejected_by_decompose(tmp_path, capsys):
    assert main(["build", "free@0", "-o", str(tmp_path / "f.txt")]) == 0
    assert main(["decompose", str(tmp_path / "f.txt")]) == 2
    assert "split-free" in capsys.readouterr().err


def test_diagram(tmp_path, capsys):
    path = write_doc(tmp_path, "m1.txt", make_flash(FlashShape.l(1, 0, 1), P))
    assert main(["diagram", path, "--format", "dot"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("digraph")
    assert out.count("->") == 3
    assert main(["diagram", path, "--format", "svg"]) == 2


def test_unknown_subcommand(capsys):
    assert main(["frobnicate"]) == 2


def test_failed_write_leaves_no_file(tmp_path, capsys):
    target = tmp_path / "out" / "x.txt"  # parent missing -> open fails
    code = main(["build", "L(1,0)@0", "-o", str(target)])
    assert code == 2
    assert not target.exists()
    # a good expression but an unwritable target also exits 2, file-free
    assert main(["build", "L(1,0,1)@0", "-o", str(target)]) == 2
    assert not target.exists()
