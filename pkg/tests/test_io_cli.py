import json

import pytest

from tempsep.cli import main
from tempsep.core import SeparatorTimeline
from tempsep.io import (
    REPORT_SCHEMA,
    FormatError,
    format_instance,
    format_timeline,
    parse_instance,
    parse_timeline,
    read_records,
)
from tempsep.reduction import SetCoverInstance

from instances import FIXTURES, small_example


@pytest.fixture
def example_file(tmp_path):
    path = tmp_path / "example.json"
    path.write_text(format_instance(small_example()))
    return path


def test_instance_round_trip():
    inst = small_example()
    text = format_instance(inst)
    assert parse_instance(text) == inst
    assert format_instance(parse_instance(text)) == text


@pytest.mark.parametrize(
    "mutate, fragment",
    [
        (lambda d: d.pop("deadline"), "deadline"),
        (lambda d: d.update(version=2), "version"),
        (lambda d: d.update(T="6"), "'T'"),
        (lambda d: d["arcs"][0].update(times=["1"]), "arcs[0]"),
        (lambda d: d.update(source="q"), "q"),
        (lambda d: d.update(deadline=99), "deadline"),
    ],
)
def test_instance_errors(mutate, fragment):
    doc = json.loads(format_instance(small_example()))
    mutate(doc)
    with pytest.raises(FormatError) as info:
        parse_instance(json.dumps(doc))
    assert fragment in str(info.value)


def test_bad_json_names_line():
    with pytest.raises(FormatError, match="line 2"):
        parse_instance('{\n  "version": }')


def test_timeline_round_trip():
    inst = small_example()
    tl = SeparatorTimeline.from_mapping(6, {4: (5, 6)})
    assert parse_timeline(format_timeline(tl, inst), inst) == tl
    with pytest.raises(FormatError):
        parse_timeline('{"s": [1, 2]}', inst)
    with pytest.raises(FormatError):
        parse_timeline('{"nope": null}', inst)
    with pytest.raises(FormatError):
        parse_timeline('{"a": [3, 1]}', inst)


def test_cli_count(example_file, capsys):
    assert main(["count", str(example_file)]) == 0
    assert capsys.readouterr().out.strip() == "2 exact"
    assert main(["count", str(example_file), "--budget", "1"]) == 0
    assert capsys.readouterr().out.strip() == "2 walks"


def test_cli_solve_and_verify(example_file, tmp_path, capsys):
    report = tmp_path / "runs.csv"
    assert main(["solve", str(example_file), "--report", str(report), "--seed", "0"]) == 0
    timeline = example_file.with_suffix(".timeline.json")
    assert timeline.exists()
    assert main(["verify", str(example_file), str(timeline)]) == 0
    rows = read_records(report)
    assert rows[0]["SL"] == "2" and rows[0]["path_count"] == "2"
    assert report.read_text().splitlines()[0] == REPORT_SCHEMA
    assert main(["solve", str(example_file), "--mode", "greedy", "--report", str(report)]) == 0
    assert [r["mode"] for r in read_records(report)] == ["exact", "greedy"]


def test_cli_verify_failures(example_file, tmp_path, capsys):
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({n: None for n in "sabcfz"}))
    assert main(["verify", str(example_file), str(empty)]) == 4
    out = capsys.readouterr().out.strip()
    assert out.startswith("s, (s") and out.endswith(", z")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"s": [1, 1]}))
    assert main(["verify", str(example_file), str(bad)]) == 1


def test_cli_input_errors(tmp_path):
    assert main(["count", str(tmp_path / "missing.json")]) == 1
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert main(["solve", str(broken)]) == 1


def test_cli_unseparable(tmp_path):
    inst = tmp_path / "direct.json"
    inst.write_text(json.dumps({
        "version": 1, "T": 2, "vertices": ["s", "z"],
        "arcs": [{"u": "s", "v": "z", "times": [1]}],
        "source": "s", "target": "z", "deadline": 1,
    }))
    assert main(["solve", str(inst)]) == 2


def test_cli_reduce(tmp_path):
    sc = tmp_path / "cover.txt"
    sc.write_text(SetCoverInstance(4, (frozenset({1, 3, 4}), frozenset({1, 2}), frozenset({2, 4}))).format())
    out = tmp_path / "cover.json"
    windows = tmp_path / "windows.json"
    assert main(["reduce", str(sc), "-o", str(out), "--windows-out", str(windows)]) == 0
    doc = json.loads(out.read_text())
    assert doc["deadline"] == 4 and len(doc["vertices"]) == 5
    assert json.loads(windows.read_text())["big_m"] == 1728
    sc.write_text("2 1\n1\n")
    assert main(["reduce", str(sc), "-o", str(out)]) == 1


def test_cli_generate_is_byte_identical(tmp_path):
    net = str(FIXTURES / "ema_class_net.tntp")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["generate", net, "--seed", "3", "-o", str(a)]) == 0
    assert main(["generate", net, "--seed", "3", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_generate_failures(tmp_path):
    net = tmp_path / "bad.tntp"
    net.write_text("<NUMBER OF NODES> 1\n<NUMBER OF LINKS> 0\n<END OF METADATA>\n")
    assert main(["generate", str(net), "--seed", "1", "-o", str(tmp_path / "x.json")]) == 5


def test_cli_ingest_gtfs(tmp_path):
    out = tmp_path / "gtfs.json"
    assert main(["ingest-gtfs", str(FIXTURES / "gtfs_small"), "-o", str(out)]) == 0
    assert json.loads(out.read_text())["T"] == 120
    assert main(["ingest-gtfs", str(tmp_path), "-o", str(out)]) == 5


def test_cli_manifest(example_file, tmp_path, capsys):
    manifest = tmp_path / "runs.txt"
    manifest.write_text("# same instance twice\nexample.json\nexample.json\n")
    report = tmp_path / "runs.csv"
    assert main(["solve", "--manifest", str(manifest), "--jobs", "2", "--report", str(report)]) == 0
    assert [r["SL"] for r in read_records(report)] == ["2", "2"]
