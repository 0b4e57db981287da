from fractions import Fraction

import pytest

from mtpkit import cli
from mtpkit.cli import main
from mtpkit.config import CliConfig, default_jobs
from mtpkit.corpus import write_corpus
from mtpkit.errors import ConfigurationError
from mtpkit.geometry import Dataset
from mtpkit.io_formats import read_dataset
from mtpkit.ncd import Corpus


@pytest.fixture
def files(tmp_path):
    paths = {
        "three": tmp_path / "three.pts",
        "stretched": tmp_path / "stretched.pts",
        "single": tmp_path / "single.pts",
    }
    paths["three"].write_text("0 0\n1 0\n2 1\n")
    paths["stretched"].write_text("# pattern and stretched copy\n0 0\n1 2\n2 1\n4 0\n6 2\n8 1\n")
    paths["single"].write_text("3 4\n")
    return paths


def test_mtps(files, capsys):
    assert main(["mtps", str(files["three"]), "--jobs", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[-1] == "6 MTPs"
    assert lines[0] == "<-2,-1> (2,1)"
    assert "<1,0> (0,0)" in lines


def test_mtps_min_size(files, capsys):
    assert main(["mtps", str(files["three"]), "--min-size", "4", "--jobs", "1"]) == 0
    assert capsys.readouterr().out == "0 MTPs\n"


def test_missing_file(tmp_path, capsys):
    assert main(["mtps", str(tmp_path / "nope.pts"), "--jobs", "1"]) == 2
    assert "error" in capsys.readouterr().err
    assert main(["ncd", str(tmp_path / "a.pts"), str(tmp_path / "b.pts"), "--jobs", "1"]) == 2


def test_encode_and_decode(files, tmp_path, capsys):
    encoded = tmp_path / "stretched.enc"
    assert main(["encode", str(files["stretched"]), "--class", "2STR", "--output", str(encoded), "--jobs", "1"]) == 0
    assert capsys.readouterr().out == "DL=10 extensional=12 CF=6/5 (1.2000)\n"
    decoded = tmp_path / "decoded.pts"
    assert main(["decode", str(encoded), "--output", str(decoded)]) == 0
    assert read_dataset(decoded) == read_dataset(files["stretched"])


def test_encode_single_point_to_stdout(files, capsys):
    assert main(["encode", str(files["single"]), "--jobs", "1"]) == 0
    captured = capsys.readouterr()
    assert captured.out == "MTPENC 1 2T 2\nP 1\n3 4\nT 0\n"
    assert captured.err.strip() == "DL=2 extensional=2 CF=1 (1.0000)"


@pytest.mark.parametrize("class_id", ["2T", "2TR", "2STR"])
def test_every_class_decodes_to_input(class_id, files, tmp_path, capsys):
    encoded = tmp_path / f"{class_id}.enc"
    assert main(["encode", str(files["stretched"]), "--class", class_id, "--output", str(encoded),
                 "--jobs", "1"]) == 0
    assert main(["decode", str(encoded)]) == 0
    out = capsys.readouterr().out
    assert out.endswith("0 0\n1 2\n2 1\n4 0\n6 2\n8 1\n")


def test_ncd_identical_files(files, capsys):
    assert main(["ncd", str(files["stretched"]), str(files["stretched"]), "--jobs", "1"]) == 0
    value, _ = capsys.readouterr().out.split()
    assert 0 < Fraction(value) < 1


def test_ncd_passes_jobs_on(files, capsys, monkeypatch):
    seen = []
    real_ncd = cli.ncd

    def recording_ncd(*args, **kwargs):
        seen.append(kwargs.get("jobs"))
        return real_ncd(*args, **kwargs)

    monkeypatch.setattr(cli, "ncd", recording_ncd)
    assert main(["ncd", str(files["stretched"]), str(files["three"]), "--jobs", "3"]) == 0
    assert seen == [3]
    assert main(["ncd", str(files["stretched"]), str(files["three"]), "--jobs", "1"]) == 0
    first, second = capsys.readouterr().out.splitlines()
    assert first == second


def test_classify(tmp_path, capsys):
    corpus = Corpus([("a", "x", Dataset([(0, 0), (1, 2), (2, 1)])),
                     ("b", "y", Dataset([(0, 5), (2, 3), (3, 9)]))])
    manifest = write_corpus(corpus, tmp_path / "corpus")
    assert main(["classify", str(manifest), "--no-progress", "--jobs", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "a.pts\tx\ty"
    assert lines[1] == "b.pts\ty\tx"
    assert lines[2] == "SR=0 (0.0000)"


def test_bad_class_is_a_usage_error(files):
    with pytest.raises(SystemExit) as exit_info:
        main(["mtps", str(files["three"]), "--class", "3T"])
    assert exit_info.value.code == 2


def test_jobs_from_environment(files, monkeypatch):
    monkeypatch.setenv("MTPKIT_JOBS", "many")
    assert main(["mtps", str(files["three"])]) == 2
    monkeypatch.setenv("MTPKIT_JOBS", "3")
    assert default_jobs() == 3
    assert default_jobs({}) >= 1


def test_cli_config_validation():
    assert CliConfig("ncd", gap="1/2").gap == Fraction(1, 2)
    for kwargs in ({"class_id": "2X"}, {"min_size": 0}, {"gap": 0}, {"gap": "x"}, {"jobs": 0}):
        with pytest.raises(ConfigurationError):
            CliConfig("mtps", **kwargs)
