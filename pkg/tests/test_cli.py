import json
from pathlib import Path

import pytest

from nwsynth import fixtures
from nwsynth.cli import main
from nwsynth.nested_word import CALL, RET, build_nested_word, to_trace
from nwsynth.nwba import nwba_to_json, spec_automaton
from nwsynth.nwtl import parse
from nwsynth.rlc import library_to_json

DATA = Path(__file__).resolve().parent.parent / "data"


def d(name):
    return str(DATA / name)


def write(tmp_path, name, content):
    p = tmp_path / name
    p.write_text(content if isinstance(content, str) else json.dumps(content))
    return str(p)


def test_synth_realizable(tmp_path, capsys):
    out = tmp_path / "out.json"
    assert main(["synth", d("loop_library.json"), d("always_x.nwtl"), "-o", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["status"] == "realizable" and len(data["composition"]["elements"]) == 1
    assert main(["validate", "outcome", str(out), "--library", d("loop_library.json")]) == 0


def test_synth_false_is_unrealizable(capsys):
    assert main(["synth", d("loop_library.json"), d("false.nwtl")]) == 3
    assert json.loads(capsys.readouterr().out)["status"] == "unrealizable"


def test_synth_wrong_label_unrealizable():
    assert main(["synth", d("loop_y_library.json"), d("always_x.nwtl")]) == 3


def test_synth_unknown_up_to_rank():
    assert main(["--max-rank", "1", "synth", d("caller_callee_library.json"),
                 d("false.nwtl")]) == 4


def test_synth_cross_check(capsys):
    assert main(["--max-elements", "2", "synth", d("loop_library.json"), d("always_x.nwtl"),
                 "--cross-check"]) == 0
    assert "witness found" in capsys.readouterr().err


def test_synth_with_automaton_file(tmp_path):
    lib = fixtures.loop_library()
    bad = spec_automaton(parse("Gs out:x"), lib.sigma_in, lib.sigma_out)
    A = write(tmp_path, "bad.json", nwba_to_json(bad))
    assert main(["synth", d("loop_library.json"), A]) == 0


def test_dump_flags(capsys):
    main(["--dump-graph", "--dump-abt", "synth", d("loop_library.json"), d("always_x.nwtl")])
    assert "reachable states" in capsys.readouterr().err


def test_check_verified_and_counterexample(capsys):
    assert main(["check", d("loop_library.json"), d("loop_composition.json"),
                 d("always_x.nwtl")]) == 0
    assert main(["check", d("loop_library.json"), d("loop_composition.json"),
                 d("always_y.nwtl")]) == 2
    assert "counterexample" in capsys.readouterr().out


def test_simulate(capsys):
    assert main(["simulate", d("caller_callee_library.json"), d("caller_callee_composition.json"),
          "--input", "aaa"]) == 0
    out = capsys.readouterr().out
    data = json.loads(out)
    assert [p["tag"] for p in data["positions"]] == [CALL, RET, RET]


def test_simulate_rejects_foreign_letters(capsys):
    assert main(["simulate", d("loop_library.json"), d("loop_composition.json"),
                 "--input", "z"]) == 1
    assert "input alphabet" in capsys.readouterr().err


def test_translate(tmp_path):
    out = tmp_path / "a.json"
    assert main(["translate", d("always_x.nwtl"), "-o", str(out)]) == 0
    assert main(["validate", "automaton", str(out)]) == 0


def test_eval(tmp_path, capsys):
    w = build_nested_word([(("a", "x"), CALL), (("a", "x"), RET)])
    trace = write(tmp_path, "t.json", to_trace(w))
    assert main(["eval", trace, d("always_x.nwtl")]) == 0
    assert capsys.readouterr().out.strip() == "true"
    main(["eval", trace, d("always_y.nwtl")])
    assert capsys.readouterr().out.strip() == "false"


def test_missing_file(capsys):
    assert main(["synth", "/nonexistent.json", d("always_x.nwtl")]) == 1
    assert "no such file" in capsys.readouterr().err


def test_malformed_library_names_field(tmp_path, capsys):
    data = library_to_json(fixtures.loop_library())
    del data["components"][0]["labels"]
    lib = write(tmp_path, "lib.json", data)
    assert main(["validate", "library", lib]) == 1
    assert "labels" in capsys.readouterr().err


def test_malformed_automaton_names_field(tmp_path, capsys):
    lib = fixtures.loop_library()
    data = nwba_to_json(spec_automaton(parse("Gs out:x"), lib.sigma_in, lib.sigma_out))
    del data["delta_int"]
    A = write(tmp_path, "a.json", data)
    assert main(["validate", "automaton", A]) == 1
    assert "delta_int" in capsys.readouterr().err


def test_bad_formula(tmp_path, capsys):
    f = write(tmp_path, "f.nwtl", "Gs (out:x")
    assert main(["synth", d("loop_library.json"), f]) == 1


def test_unknown_atom(tmp_path):
    f = write(tmp_path, "f.nwtl", "Gs out:z")
    assert main(["synth", d("loop_library.json"), f]) == 1


def test_invalid_json(tmp_path, capsys):
    lib = write(tmp_path, "lib.json", "{not json")
    assert main(["validate", "library", lib]) == 1
    assert "not valid JSON" in capsys.readouterr().err


def test_composition_needs_library(capsys):
    assert main(["validate", "composition", d("loop_composition.json")]) == 1


def test_dangling_interface(tmp_path):
    comp = write(tmp_path, "c.json", {"elements": [{"component": "LOOP", "interface": [2]}]})
    assert main(["validate", "composition", comp, "--library", d("loop_library.json")]) == 1


def test_bad_max_rank():
    assert main(["--max-rank", "0", "synth", d("loop_library.json"), d("always_x.nwtl")]) == 1


def test_usage_error():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
