"""Write the fixture libraries and compositions to data/, along with a few specs."""
import json
from pathlib import Path

from nwsynth import fixtures
from nwsynth.rlc import composition_to_json, library_to_json

OUT = Path(__file__).resolve().parent.parent / "data"


def dump(name, obj):
    (OUT / name).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    dump("loop_library.json", library_to_json(fixtures.loop_library()))
    dump("loop_y_library.json", library_to_json(fixtures.loop_library("y")))
    dump("loop_composition.json", composition_to_json(fixtures.LOOP_COMPOSITION))
    dump("caller_callee_library.json", library_to_json(fixtures.caller_callee_library()))
    dump("caller_callee_composition.json",
         composition_to_json(fixtures.CALLER_CALLEE_COMPOSITION))
    for n, make in (("one", fixtures.library_one), ("two", fixtures.library_two),
                    ("three", fixtures.library_three)):
        dump(f"library_{n}.json", library_to_json(make()))
    specs = {"always_x.nwtl": "Gs out:x", "always_y.nwtl": "Gs out:y",
             "false.nwtl": "!true", "true.nwtl": "true",
             "calls_return_to_y.nwtl": "Gs(!call | Xmu out:y)"}
    for name, text in specs.items():
        (OUT / name).write_text(text + "\n")


if __name__ == "__main__":
    main()
