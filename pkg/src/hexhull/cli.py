"""Command line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage or I/O error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import json
import sys
from pathlib import Path

from . import engine
from .engine import LabelError, Patch, load_system

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read config {path}: {e}") from None
    cp = configparser.ConfigParser()
    cp.read_string("[defaults]\n" + text)
    return dict(cp["defaults"])


def _system(name: str | None):
    if not name:
        raise UsageError("no system given (use --system or set system in the config file)")
    try:
        return load_system(name)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None


def _opt(args, cfg: dict, name: str, default=None, conv=int):
    """Flag value if given, else the config file entry, else the default."""
    v = getattr(args, name, None)
    if v is not None:
        return v
    if name in cfg:
        try:
            return conv(cfg[name])
        except ValueError:
            raise UsageError(f"bad value for {name} in config: {cfg[name]!r}") from None
    return default


def _read_patch(path: str) -> Patch:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"malformed JSON in {path}: {e}") from None
    try:
        return Patch.from_json(data)
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"bad patch file {path}: {e}") from None


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _report_dir(args) -> Path | None:
    if not getattr(args, "report", None):
        return None
    d = Path(args.report)
    try:
        d.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise UsageError(f"cannot create report directory {d}: {e}") from None
    return d


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _figure():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


# ------------------------------------------------------------ commands

def cmd_gen(args, cfg) -> int:
    s = _system(_opt(args, cfg, "system", "taylor", str))
    try:
        seed = args.seed if args.seed is not None else s.seeds[0]
        p = engine.fixed_point_patch(s, seed, args.steps, mode=args.mode)
    except LabelError as e:
        raise UsageError(str(e)) from None
    _write(args.out, _dump(p.to_json(s)))
    d = _report_dir(args)
    if d:
        from .render import render_patch
        (d / "gen.svg").write_text(render_patch(p))
        _write_csv(d / "gen.csv", ["a", "b", "label"],
                   [(q[0], q[1], s.label_str(l)) for q, l in sorted(p.cells.items())])
    print(f"{s.name}: {len(p)} cells", file=sys.stderr)
    return OK


def cmd_render(args, cfg) -> int:
    from .render import RenderSpec, StyleError, default_spec, render_patch, PARITY_COLOURS
    p = _read_patch(args.patch)
    if args.style:
        try:
            colours = json.loads(Path(args.style).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"bad style file: {e}") from None
        if args.parity:
            colours = {int(k): v for k, v in colours.items()}
        spec = RenderSpec(colours=colours)
    elif args.parity:
        spec = RenderSpec(colours=dict(PARITY_COLOURS))
    else:
        spec = default_spec(p.system)
    spec.arrows, spec.flags, spec.diagonals, spec.scale = args.arrows, args.flags, args.diagonals, args.scale
    try:
        svg = render_patch(p, spec, parity=args.parity)
    except StyleError as e:
        raise UsageError(f"missing style: {e}") from None
    _write(args.out, svg)
    return OK


def cmd_rules(args, cfg) -> int:
    from .rules import check_edge_matching, check_taylor_rules, llama_image
    p = _read_patch(args.patch)
    s = load_system(p.system)
    if s.name == "taylor":
        viol = check_taylor_rules(llama_image(p.cells, s))
    elif s.name == "penrose":
        viol = check_edge_matching(p.cells, s)
    else:
        legal = engine.adjacent_pairs(s)
        from .rules import Violation
        from .lattice import NB
        viol = []
        for q, l in sorted(p.cells.items()):
            for k in range(3):
                r = (q[0] + NB[k][0], q[1] + NB[k][1])
                if r in p.cells and (l, k, p.cells[r]) not in legal:
                    viol.append(Violation("edge-mismatch", q, f"illegal neighbour at {r}"))
    rep = {"system": s.name, "cells": len(p), "violations": [v.to_json() for v in viol],
           "count": len(viol)}
    _write(args.out, _dump(rep))
    return OK if not viol else FAIL


def cmd_corona(args, cfg) -> int:
    from .recon import corona_atlas, save_atlas
    s = _system(_opt(args, cfg, "system", None, str))
    if s.kind != "decorated":
        raise UsageError("corona reconstruction applies to penrose and taylor")
    depth = _opt(args, cfg, "depth", 7)
    atlas = corona_atlas(s, args.order, depth)
    rep = {"system": s.name, "order": args.order, "depth": depth, "coronae": len(atlas.table),
           "collisions": atlas.collisions, "injective": atlas.injective}
    if args.atlas:
        save_atlas(atlas, args.atlas)
    _write(args.out, _dump(rep))
    d = _report_dir(args)
    if d:
        rows = []
        for n in range(0, args.order + 1):
            a = corona_atlas(s, n, depth)
            rows.append((n, len(a.table), a.collisions))
        _write_csv(d / "corona.csv", ["order", "coronae", "collisions"], rows)
        plt = _figure()
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot([r[0] for r in rows], [r[2] for r in rows], "o-")
        ax.set_xlabel("corona order")
        ax.set_ylabel("coronae with several centres")
        ax.set_title(f"{s.name}: corona collisions")
        fig.tight_layout()
        fig.savefig(d / "corona.png", dpi=120)
        plt.close(fig)
    return OK if atlas.injective else FAIL


def cmd_perc(args, cfg) -> int:
    from .percolation import clusters, growth_curve, parity_patch
    s = _system(_opt(args, cfg, "system", None, str))
    if s.kind != "decorated":
        raise UsageError("parity patterns exist for penrose and taylor")
    par = parity_patch(s.name, args.steps)
    rep = clusters(par)
    out = {"system": s.name, "steps": args.steps, "report": rep.to_json()}
    if args.kmin is not None:
        out["growth"] = growth_curve(s.name, args.kmin, args.steps)
    _write(args.out, _dump(out))
    if args.svg:
        from .render import render_parity
        _write(args.svg, render_parity(par))
    d = _report_dir(args)
    if d:
        curve = out.get("growth") or growth_curve(s.name, max(2, args.steps - 4), args.steps)
        _write_csv(d / "perc.csv", ["k", "diameter_white", "diameter_grey"], curve)
        plt = _figure()
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ks = [c[0] for c in curve]
        ax.semilogy(ks, [c[1] for c in curve], "o-", label="white")
        ax.semilogy(ks, [c[2] for c in curve], "s--", label="grey")
        ax.set_xlabel("inflation level k")
        ax.set_ylabel("largest cluster diameter")
        ax.legend()
        ax.set_title(f"{s.name} parity clusters")
        fig.tight_layout()
        fig.savefig(d / "perc.png", dpi=120)
        plt.close(fig)
    return OK


def cmd_zeta(args, cfg) -> int:
    from .periodic import StabilisationError, counts_from_rational, zeta_series
    s = _system(_opt(args, cfg, "system", None, str))
    try:
        rep = zeta_series(s, args.mmax, strict=False, radius_cap=_opt(args, cfg, "radius_cap", 64))
    except StabilisationError as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return FAIL
    _write(args.out, _dump(rep.to_json()))
    d = _report_dir(args)
    if d:
        expect = counts_from_rational(rep.numerator, rep.denominator, args.mmax)
        rows = [(m, a, e) for m, (a, e) in enumerate(zip(rep.a, expect), 1)]
        _write_csv(d / "zeta.csv", ["m", "a_m", "closed_form"], rows)
        plt = _figure()
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.semilogy([r[0] for r in rows], [r[1] for r in rows], "o", label="enumerated")
        ax.semilogy([r[0] for r in rows], [r[2] for r in rows], "-", label="closed form")
        ax.set_xlabel("m")
        ax.set_ylabel("a_m")
        ax.legend()
        ax.set_title(f"{s.name}: periodic points")
        fig.tight_layout()
        fig.savefig(d / "zeta.png", dpi=120)
        plt.close(fig)
    return OK if rep.ok else FAIL


def cmd_cohomology(args, cfg) -> int:
    from .topology import EXPECTED_GROUPS, cohomology, matches_expected, zeta_from_cohomology
    s = _system(_opt(args, cfg, "system", None, str))
    rep = cohomology(s)
    out = rep.to_json()
    out["zeta"] = zeta_from_cohomology(rep)
    ok, diffs = matches_expected(rep)
    out["expected"] = {str(k): v for k, v in EXPECTED_GROUPS[s.name].items()}
    out["matches_expected"] = ok
    out["differences"] = diffs
    _write(args.out, _dump(out))
    d = _report_dir(args)
    if d:
        rows = [(k, rep.approximant[k]["rank"], " ".join(map(str, rep.approximant[k]["torsion"])),
                 rep.limit[k]["eventual_rank"], out["groups"][str(k)]) for k in (0, 1, 2)]
        _write_csv(d / "cohomology.csv", ["degree", "approximant_rank", "approximant_torsion",
                                          "eventual_rank", "group"], rows)
        plt = _figure()
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for k in (1, 2):
            roots = rep.limit[k]["roots"]
            xs = sorted(roots)
            ax.bar([x + (0.15 if k == 2 else -0.15) for x in xs], [roots[x] for x in xs], width=0.3,
                   label=f"H^{k}")
        ax.set_xlabel("eigenvalue of the inflation action")
        ax.set_ylabel("multiplicity")
        ax.legend()
        ax.set_title(f"{s.name}: cohomology eigenvalues")
        fig.tight_layout()
        fig.savefig(d / "cohomology.png", dpi=120)
        plt.close(fig)
    return OK if ok else FAIL


def cmd_modelset(args, cfg) -> int:
    from .modelset import address_report, verify_against_inflation
    if args.seed not in (0, 1, 2):
        raise UsageError("seed type must be 0, 1 or 2")
    radius = _opt(args, cfg, "radius", 64)
    if radius <= 0:
        raise UsageError("radius must be positive")
    rep = verify_against_inflation(f"H:{args.seed}:+", radius)
    rep["addresses"] = {k: v for k, v in address_report(args.seed, radius).items()
                        if k in ("unique", "complete")}
    _write(args.out, _dump(rep))
    return OK if rep["ok"] and all(rep["addresses"].values()) else FAIL


def cmd_derive(args, cfg) -> int:
    from . import systems
    p = _read_patch(args.patch)
    try:
        if args.to == "halfhex":
            out = systems.derive_halfhex(p).to_json()
        elif args.to == "arrowed":
            out = systems.derive_arrowed_halfhex(p).to_json()
        elif args.to == "parity":
            par = systems.parity(p)
            out = {"system": p.system, "parity": [[q[0], q[1], c] for q, c in sorted(par.items())]}
        else:
            dh = systems.double_hexagon(p, p.system)
            out = {"system": dh["system"],
                   "large": [[q[0], q[1], o] for q, o in sorted(dh["large"].items())],
                   "inner": [[q[0], q[1], o] for q, o in sorted(dh["inner"].items())],
                   "vertex": [[v[0], v[1], o] for v, o in sorted(dh["vertex"].items())]}
    except LabelError as e:
        raise UsageError(str(e)) from None
    _write(args.out, _dump(out))
    return OK


# -------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hexhull", description="Hexagonal inflation tilings toolkit")
    ap.add_argument("--config", help="key = value file with defaults (system, depth, radius, radius_cap)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--out", help="output file (default stdout)")
        return p

    p = add("gen", cmd_gen, "generate a fixed-point patch")
    p.add_argument("--system")
    p.add_argument("--seed", help="seed label base:orientation:chirality")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--mode", choices=("sector", "pseudo"), default="sector")
    p.add_argument("--report", help="directory for SVG and CSV output")

    p = add("render", cmd_render, "render a patch as SVG")
    p.add_argument("--patch", required=True)
    p.add_argument("--parity", action="store_true")
    p.add_argument("--arrows", action="store_true")
    p.add_argument("--flags", action="store_true")
    p.add_argument("--diagonals", action="store_true")
    p.add_argument("--scale", type=float, default=12.0)
    p.add_argument("--style", help="JSON map label -> colour")

    p = add("rules", cmd_rules, "check local rules of a patch")
    p.add_argument("--patch", required=True)

    p = add("corona", cmd_corona, "corona atlas and injectivity")
    p.add_argument("--system")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--depth", type=int)
    p.add_argument("--atlas", help="write the atlas table as JSON")
    p.add_argument("--report")

    p = add("perc", cmd_perc, "cluster analysis of parity patterns")
    p.add_argument("--system")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--kmin", type=int)
    p.add_argument("--svg")
    p.add_argument("--report")

    p = add("zeta", cmd_zeta, "periodic point counts and zeta function")
    p.add_argument("--system")
    p.add_argument("--mmax", type=int, default=4)
    p.add_argument("--radius-cap", dest="radius_cap", type=int, help="give up if counts do not settle")
    p.add_argument("--report")

    p = add("cohomology", cmd_cohomology, "cohomology of the hull")
    p.add_argument("--system")
    p.add_argument("--report")

    p = add("modelset", cmd_modelset, "Toeplitz check for half-hex fixed points")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--radius", type=int)

    p = add("derive", cmd_derive, "apply a local derivation")
    p.add_argument("--patch", required=True)
    p.add_argument("--to", choices=("halfhex", "arrowed", "parity", "double-hexagon"), required=True)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        cfg = _load_config(args.config)
        return args.fn(args, cfg)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
