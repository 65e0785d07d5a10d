"""Regenerate src/hexhull/data/rules.json from the 2-adic construction."""
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from hexhull.lattice import NB  # noqa: E402
from hexhull import twoadic  # noqa: E402
from hexhull.engine import system_from_json  # noqa: E402
from hexhull.rules import derive_edge_marks, derive_flag_table  # noqa: E402

OFFSETS = [(0, 0)] + list(NB)
SECTOR = [list(d) for d in twoadic.SECTOR_DIGITS]


def name(base_names, lab):
    b, o, c = lab
    return f"{base_names[b]}:{o}:{'+' if c == 0 else '-'}"


def entry(sysname, kind, base_names, labels, pseudo):
    alpha = [{"base": base_names[b], "orientation": o, "chirality": "+" if c == 0 else "-"}
             for b, o, c in labels]
    rule = {}
    for lab, kids in zip(labels, pseudo):
        rule[name(base_names, lab)] = [[off[0], off[1], name(base_names, labels[k])]
                                       for off, k in zip(OFFSETS, kids)]
    return {"name": sysname, "kind": kind, "bases": base_names, "alphabet": alpha,
            "pseudo_rule": rule, "sector_positions": SECTOR}


def main():
    out = {"version": 1, "systems": {}}
    hh = [(0, l, 0) for l in range(3)]
    out["systems"]["halfhex"] = entry(
        "halfhex", "halfhex", ["H"], hh,
        [[twoadic.halfhex_child(l, o) for o in OFFSETS] for _, l, _ in hh])
    ahh = [(0, p, 0) for p in range(6)]
    out["systems"]["arrowed"] = entry(
        "arrowed", "arrowed", ["A"], ahh,
        [[twoadic.arrowed_child(p, o) for o in OFFSETS] for _, p, _ in ahh])
    for sysname, flip, bases in (("taylor", False, ["C", "A", "B", "D", "E", "F", "G"]),
                                 ("penrose", True, ["1", "2", "3", "4", "5", "6", "7"])):
        d = twoadic.decorated_system(sysname, flip)
        e = entry(sysname, "decorated", bases, d["labels"], d["pseudo"])
        sysobj = system_from_json(e)
        e["decoration"] = {"flags": derive_flag_table(sysobj)["table"],
                           "edge_marks": derive_edge_marks(sysobj)}
        out["systems"][sysname] = e
    path = ROOT / "src" / "hexhull" / "data" / "rules.json"
    path.write_text(json.dumps(out, indent=1) + "\n")
    print("wrote", path)


if __name__ == "__main__":
    main()
