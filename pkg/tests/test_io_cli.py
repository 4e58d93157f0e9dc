import json
import subprocess
import sys

import pytest

from starforge import build, cli, deform, io, stars
from starforge.errors import UsageError
from starforge.series import TruncSeries


@pytest.fixture()
def lines_doc(tmp_path):
    path = tmp_path / "lines.json"
    io.save_path(str(path), stars.make_lines_star([0, 1, 2]))
    return str(path)


@pytest.fixture()
def pair_docs(tmp_path):
    p1 = tmp_path / "p1.json"
    p2 = tmp_path / "p2.json"
    io.save_path(str(p1), stars.make_congruence_pair_star(1))
    io.save_path(str(p2), stars.make_congruence_pair_star(2))
    return str(p1), str(p2)


class TestDocuments:
    def test_star_round_trip(self):
        star = build.random_tower_detailed(3, 4, 3).star
        doc = io.document_for(star)
        back = io.parse_document(doc)
        assert back.levels == star.levels
        assert back.space == star.space

    def test_deformation_round_trip(self):
        d = deform.make_planes_deformation([0, 1, 2], xdeg=3)
        back = io.parse_document(io.document_for(d))
        assert back.xdeg == d.xdeg
        assert back.levels == d.levels
        assert back.space == d.space

    def test_script_round_trip(self):
        script = io.BuilderScript(
            "pair",
            1,
            [build.ExtensionStep((1, 2), (TruncSeries(1, [1]), TruncSeries(1, [2])))],
        )
        back = io.parse_document(io.document_for(script))
        assert back.base_kind == "pair" and back.base_arg == 1
        assert len(back.steps) == 1
        assert back.steps[0].p_new == (1, 2)
        assert back.steps[0].beta[1] == TruncSeries(1, [2])

    def test_emit_is_canonical(self):
        star = stars.make_lines_star([0, 1, 2])
        text = io.dumps(io.document_for(star))
        assert text.endswith("\n")
        # emit, parse, emit is the identity on the text
        assert io.dumps(io.document_for(io.loads(text))) == text
        parsed = json.loads(text)
        assert parsed["kind"] == "star"
        assert parsed["version"] == io.DOC_VERSION

    def test_scalars_are_strings(self):
        star = stars.make_lines_star([QQ2 := 0, 1, 2])
        doc = io.document_for(star)
        for row in doc["basis"]:
            for c in row:
                assert isinstance(c, str)

    def test_rejections(self):
        good = io.document_for(stars.make_lines_star([0, 1, 2]))
        bad_version = dict(good, version=99)
        with pytest.raises(UsageError):
            io.parse_document(bad_version)
        with pytest.raises(UsageError):
            io.parse_document(dict(good, kind="nonsense"))
        broken = json.loads(json.dumps(good))
        broken["basis"][0][0] = 1.5
        with pytest.raises(UsageError):
            io.parse_document(broken)
        broken2 = json.loads(json.dumps(good))
        broken2["basis"][0] = broken2["basis"][0][:-1]
        with pytest.raises(UsageError):
            io.parse_document(broken2)

    def test_loads_rejects_non_objects(self):
        with pytest.raises(UsageError):
            io.parse_document([1, 2, 3])
        with pytest.raises(UsageError):
            io.loads("not json")


class TestCliAnalyze:
    def test_star_pass(self, lines_doc, capsys):
        assert cli.main(["analyze", lines_doc]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["verdict"] == "pass"
        names = {c["name"] for c in out["checks"]}
        assert "star/ultrametric" in names
        assert "star/fiber-matches-embedding" in names
        assert out["data"]["spectrum"] == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]

    def test_deformation_pass(self, tmp_path, capsys):
        path = tmp_path / "planes.json"
        io.save_path(str(path), deform.make_planes_deformation([0, 1], xdeg=3))
        assert cli.main(["analyze", str(path)]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["verdict"] == "pass"
        assert any(c["name"].startswith("deformation/") for c in out["checks"])

    def test_corrupted_star_fails(self, tmp_path, capsys):
        star = stars.make_lines_star([0, 1, 2])
        doc = io.document_for(star)
        doc["basis"][0][1] = "7"
        path = tmp_path / "broken.json"
        path.write_text(io.dumps(doc))
        assert cli.main(["analyze", str(path)]) == 1
        out = json.loads(capsys.readouterr().out)
        assert out["verdict"] == "fail"
        failed = [c for c in out["checks"] if not c["ok"]]
        assert failed and all("witness" in c for c in failed)

    def test_missing_file(self, capsys):
        assert cli.main(["analyze", "/no/such/file.json"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_builder_script_is_rejected(self, tmp_path, capsys):
        script = io.BuilderScript("pair", 1, [])
        path = tmp_path / "s.json"
        path.write_text(io.dumps(io.document_for(script)))
        assert cli.main(["analyze", str(path)]) == 2

    def test_text_format(self, lines_doc, capsys):
        assert cli.main(["analyze", "--format", "text", lines_doc]) == 0
        text = capsys.readouterr().out
        assert "verdict: PASS" in text
        assert "star/ultrametric" in text

    def test_deterministic_output(self, lines_doc, capsys):
        cli.main(["analyze", lines_doc])
        first = json.loads(capsys.readouterr().out)
        cli.main(["analyze", lines_doc])
        second = json.loads(capsys.readouterr().out)
        first.pop("timing_ms"), second.pop("timing_ms")
        assert first == second


class TestCliBuild:
    def test_build_then_analyze(self, tmp_path, capsys):
        script = {
            "kind": "builder-script",
            "version": 1,
            "base": {"pair": 1},
            "steps": [{"contacts": [1, 2], "units": [["1"], ["2"]]}],
        }
        spath = tmp_path / "script.json"
        spath.write_text(json.dumps(script))
        out_path = tmp_path / "built.json"
        assert cli.main(["build", str(spath), "--output", str(out_path)]) == 0
        assert capsys.readouterr().out == ""

        raw = json.loads(out_path.read_text())
        prov = raw["metadata"]["provenance"]
        assert prov[1]["degeneracy_sum"] == "1/2"
        assert prov[1]["contacts"] == [1, 2]

        built = io.load_path(str(out_path))
        assert built.levels == (2, 3, 3)
        assert cli.main(["analyze", str(out_path)]) == 0
        capsys.readouterr()

    def test_degenerate_step_is_refused(self, tmp_path, capsys):
        script = {
            "kind": "builder-script",
            "version": 1,
            "base": {"pair": 1},
            "steps": [{"contacts": [1, 1], "units": [["1"], ["1"]]}],
        }
        spath = tmp_path / "bad.json"
        spath.write_text(json.dumps(script))
        assert cli.main(["build", str(spath)]) == 1
        err = capsys.readouterr().err
        assert "refused" in err and "degeneracy sum 0" in err

    def test_lines_base(self, tmp_path, capsys):
        script = {
            "kind": "builder-script",
            "version": 1,
            "base": {"lines": ["0", "1", "2"]},
            "steps": [],
        }
        spath = tmp_path / "lines.json"
        spath.write_text(json.dumps(script))
        assert cli.main(["build", str(spath)]) == 0
        # without --output the built document itself goes to stdout
        doc = json.loads(capsys.readouterr().out)
        assert doc["kind"] == "star"
        assert doc["levels"] == [2, 2, 2]


class TestCliCompare:
    def test_strict_inclusion(self, pair_docs, capsys):
        p1, p2 = pair_docs
        assert cli.main(["compare", p1, p2]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["data"]["verdict"] == "strictly-included"
        assert out["data"]["sub"] == 1
        names = {c["name"] for c in out["checks"]}
        assert "witness/uv-zero" in names
        assert "witness/phi-nonzero" in names

    def test_identical(self, pair_docs, capsys):
        p1, _ = pair_docs
        assert cli.main(["compare", p1, p1]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["data"]["verdict"] == "identical"

    def test_branch_mismatch_is_usage(self, pair_docs, lines_doc, capsys):
        p1, _ = pair_docs
        assert cli.main(["compare", p1, lines_doc]) == 2
        assert "error:" in capsys.readouterr().err


class TestCliVerify:
    def test_suite_runs(self, capsys):
        assert cli.main(["verify", "lambda", "--trials", "4", "--seed", "7"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["data"]["lambda/passed"] == 4
        assert out["verdict"] == "pass"

    def test_unknown_suite(self, capsys):
        assert cli.main(["verify", "nope"]) == 2

    def test_multiple_suites(self, capsys):
        code = cli.main(
            ["verify", "lambda", "fiber", "--trials", "3", "--seed", "1"]
        )
        assert code == 0
        out = json.loads(capsys.readouterr().out)
        assert out["data"]["lambda/passed"] == 3
        assert out["data"]["fiber/passed"] == 3


class TestConsoleScript:
    def test_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "starforge.cli", "--help"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "analyze" in proc.stdout and "verify" in proc.stdout
