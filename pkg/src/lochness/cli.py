"""Command-line entry point.

Exit status: 0 pass, 1 fail, 2 usage error, 3 resource cap reached.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import archimedean_cert as cert
from . import ends
from . import flag_system as fsys
from . import minimal_cover as mc
from . import periodic_map as pmap
from .errors import InvalidWordError, ResourceLimitError, SearchExhaustedError
from .monodromy import group_of

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
CAP_ENV = "LOCHNESS_CAP"

CSV_HELP = """\
CSV schemas:
  cover patch --csv, certify loch-ness --csv:  r,elements,chi,boundary,genus
      one row per radius; elements = flags (triangles) in the patch,
      boundary = number of boundary curves, genus = orientable genus
      (prefixed with N for a non-orientable genus)
  ends certify --csv:  r,R,components,ball_size

Word syntax: digits 0/1/2, whitespace ignored, parenthesised groups with ^k
powers, e.g. "((10)^2 12)^4".  The cap on elements/nodes defaults to 5000000
and can be overridden with the LOCHNESS_CAP environment variable or --cap.
"""


class UsageError(Exception):
    pass


def _cap(args) -> int:
    if getattr(args, "cap", None) is not None:
        cap = args.cap
    else:
        cap = int(float(os.environ.get(CAP_ENV, mc.DEFAULT_CAP)))
    if cap <= 0:
        raise UsageError("cap must be positive")
    return cap


def _tiling(name: str) -> pmap.PeriodicMap:
    try:
        return pmap.build_tiling(name)
    except KeyError:
        raise UsageError(f"unknown tiling {name!r}; choose from {', '.join(pmap.TILINGS)}")


def _load_map(source: str) -> fsys.FlagSystem:
    path = Path(source)
    if path.exists():
        data = json.loads(path.read_text())
        if "padj" in data:
            raise UsageError(f"{source} holds a periodic map; use --tiling-file")
        return fsys.from_dict(data)
    try:
        return fsys.builtin(source)
    except (KeyError, ValueError):
        raise UsageError(f"{source!r} is neither a map file nor a built-in map "
                         f"({', '.join(fsys.BUILDERS)}, torus:TILING:KxL)")


def _load_periodic(args) -> pmap.PeriodicMap:
    if getattr(args, "tiling_file", None):
        return pmap.from_dict(json.loads(Path(args.tiling_file).read_text()))
    if not args.tiling:
        raise UsageError("give --tiling NAME or --tiling-file FILE")
    return _tiling(args.tiling)


def _ints(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")
    if not values or any(b <= a for a, b in zip(values, values[1:])):
        raise UsageError("schedules must be nonempty and strictly increasing")
    return values


def _schedule(text: Optional[str]):
    if not text:
        return ends.DEFAULT_SCHEDULE
    out = []
    for item in text.split(","):
        try:
            r, R = (int(x) for x in item.split(":"))
        except ValueError:
            raise UsageError(f"schedule entries look like r:R, got {item!r}")
        if not 0 <= r < R:
            raise UsageError(f"need 0 <= r < R in schedule entry {item!r}")
        out.append((r, R))
    if any(b[0] <= a[0] for a, b in zip(out, out[1:])):
        raise UsageError("schedules must be strictly increasing")
    return tuple(out)


def _write_csv(path: Optional[str], rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    if path == "-":
        sys.stdout.write(buf.getvalue())
    elif path:
        Path(path).write_text(buf.getvalue())


def _write(path: Optional[str], text: str) -> None:
    if path == "-" or path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# -- subcommands ----------------------------------------------------------------

def cmd_build(args) -> int:
    if args.tiling:
        data = pmap.to_dict(_tiling(args.tiling))
    elif args.map:
        data = fsys.to_dict(_load_map(args.map))
    else:
        raise UsageError("give --tiling NAME or --map NAME")
    _write(args.out, json.dumps(data, sort_keys=True) + "\n")
    return EXIT_PASS


def cmd_validate(args) -> int:
    if args.map:
        fs = _load_map(args.map)
        report = fsys.validate(fs)
        v, e, f = fsys.cell_counts(fs) if report else (None, None, None)
        print(f"{report}")
        if report:
            print(f"flags={fs.n} V={v} E={e} F={f} chi={v - e + f} "
                  f"orientable={str(fsys.is_orientable(fs)).lower()}")
    else:
        pm = _load_periodic(args)
        report = pmap.validate(pm)
        print(f"{report}")
        if report:
            print(f"m={pm.m} vertex_figures_match={str(pmap.vertex_figures_match(pm)).lower()} "
                  f"aut_orbits={len(pmap.aut_orbits(pm))}")
    return EXIT_PASS if report else EXIT_FAIL


def _element_lines(grp, g) -> list[str]:
    lines = [f"sigma={list(grp.sigma(g))}"]
    for i, (rep, img) in enumerate(zip(grp.reps, g.images)):
        lines.append(f"orbit {i}: ({rep.cell},{rep.x},{rep.y}) -> ({img.cell},{img.x},{img.y})")
    vec = grp.translation_vectors(g)
    lines.append(f"identity={str(grp.is_identity(g)).lower()}")
    lines.append(f"pure_translation={str(vec is not None).lower()}"
                 + (f" vectors={[list(v) for v in vec]}" if vec else ""))
    return lines


def cmd_mon(args) -> int:
    pm = _load_periodic(args)
    grp = group_of(pm)
    if args.mon_cmd == "eval":
        print("\n".join(_element_lines(grp, grp.evaluate(args.word))))
        return EXIT_PASS
    if args.mon_cmd == "fixes-all":
        ok = grp.fixes_all_flags(args.word)
        print(str(ok).lower())
        return EXIT_PASS if ok else EXIT_FAIL
    if args.mon_cmd == "translation-power":
        tp = grp.translation_power(args.word, args.bound)
        print(f"power={tp.power} trivial={str(tp.trivial).lower()}")
        print("\n".join(_element_lines(grp, tp.element)))
        return EXIT_PASS
    if args.mon_cmd == "witness":
        w = grp.kernel_rank_witness()
        for k in range(2):
            print(f"word{k + 1}={''.join(map(str, w.words[k]))} power={w.powers[k]} "
                  f"vectors={[list(v) for v in w.vectors[k]]}")
        print(f"commute={str(w.commute).lower()} independent={str(w.independent).lower()}")
        return EXIT_PASS if w.commute and w.independent else EXIT_FAIL
    raise UsageError("unknown mon subcommand")


def cmd_cover(args) -> int:
    cap = _cap(args)
    if args.cover_cmd == "finite":
        fs = _load_map(args.map)
        data = mc.finite_cover_data(fs, cap)
        cov = data.cover
        v, e, f = fsys.cell_counts(cov)
        print(f"flags={cov.n} V={v} E={e} F={f} chi={v - e + f} "
              f"orientable={str(fsys.is_orientable(cov)).lower()} genus={fsys.genus(cov)} "
              f"regular={str(mc.is_regular(cov)).lower()} "
              f"isomorphic_to_base={str(fsys.is_isomorphic(cov, fs)).lower()} "
              f"sheets={cov.n // fs.n}")
        if args.out:
            _write(args.out, fsys.dumps(cov) + "\n")
        if args.dot:
            _write(args.dot, fsys.to_dot(cov, "cover"))
        return EXIT_PASS
    pm = _load_periodic(args)
    radii = _ints(args.radii) if args.radii else [args.radius]
    big = mc.cover_patch(pm, r=radii[-1], cap=cap)
    stats = [mc.patch_stats(mc.truncate(big, r)) for r in radii]
    if args.stats or not args.csv:
        for s in stats:
            print(f"r={s.r} elements={s.F} V={s.V} E={s.E} F={s.F} chi={s.chi} "
                  f"boundary={s.boundary_cycles} orientable={str(s.orientable).lower()} "
                  f"genus={s.genus if s.orientable else 'N' + str(s.nonorientable_genus)}")
    if args.csv:
        _write_csv(args.csv, mc.csv_rows(stats))
    if args.dot:
        _write(args.dot, ends.ball_to_dot(ends.dual_graph_of(mc.truncate(big, radii[-1])),
                                          radii[-1]))
    return EXIT_PASS


def _graph(name: str) -> ends.GraphGen:
    try:
        return ends.named_graph(name)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"unknown graph {name!r}: {exc}; choose from "
                         f"{', '.join(ends.GRAPHS)}, tree:D, hyperbolic:P:Q, cover:TILING")


def cmd_ends(args) -> int:
    cap = _cap(args)
    g = _graph(args.graph)
    if args.ends_cmd == "probe":
        if not 0 <= args.r < args.R:
            raise UsageError("need 0 <= r < R")
        p = ends.ends_probe(g, args.r, args.R, cap)
        print(f"graph={g.name} r={p.r} R={p.R} components={p.components} ball={p.ball_size}")
        if args.dot:
            _write(args.dot, ends.ball_to_dot(g, args.R))
        return EXIT_PASS
    rep = ends.one_end_certificate(g, _schedule(args.schedule), cap)
    print(rep)
    if args.csv:
        _write_csv(args.csv, [("r", "R", "components", "ball_size")]
                   + [(p.r, p.R, p.components, p.ball_size) for p in rep.probes])
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_certify(args) -> int:
    if args.certify_cmd == "euler":
        rep = cert.euler_contradiction_check()
        print(rep)
        return EXIT_PASS if rep.passed else EXIT_FAIL
    if args.certify_cmd == "363636":
        rep = cert.certify_identifications_363636(args.patch_radius)
        print(rep)
        col = cert.color_dual_edges(radius=args.colour_radius)
        col2 = cert.color_dual_edges(col.patch, order=(2, 1, 0), depth_first=True)
        colour_ok = (col.consistent and col.proper() and col.opposite_rule()
                     and col.state == col2.state)
        ab = all(cert.transport_colour((0, 1), w) == (0, 1) for w in (cert.WORD_A, cert.WORD_B))
        print(f"colouring: base hexagon {col.base_hexagon()}; conflicts={len(col.conflicts)}; "
              f"proper={str(col.proper()).lower()}; opposite edges agree="
              f"{str(col.opposite_rule()).lower()}; order independent="
              f"{str(col.state == col2.state).lower()}; A and B preserve colours="
              f"{str(ab).lower()}")
        iso_ok = True
        for rho in _ints(args.rho):
            iso = cert.cayley_HxH_local_iso(rho=rho, col=None)
            iso_ok = iso_ok and bool(iso)
            print(f"H x H ball rho={rho}: isomorphic={str(iso.isomorphic).lower()} "
                  f"nodes={iso.ball_size} commuting squares close="
                  f"{str(iso.commuting_squares_close).lower()} (a1a3a5)^2 and (a2a4a6)^2 close="
                  f"{str(iso.hexagon_relations_close).lower()}")
        ok = rep.passed and colour_ok and ab and iso_ok
        print("pass" if ok else "fail")
        return EXIT_PASS if ok else EXIT_FAIL
    pm = _load_periodic(args)
    rep = cert.loch_ness_certify(pm, _ints(args.radii), _schedule(args.schedule),
                                 dual=args.dual_hypothesis, extend_to=args.extend_to,
                                 cap=_cap(args), probe_cap=args.probe_cap)
    print(rep)
    if args.csv:
        _write_csv(args.csv, mc.csv_rows(rep.genus_table))
    return EXIT_PASS if rep.consistent else EXIT_FAIL


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    p = argparse.ArgumentParser(prog="lochness", description=__doc__, epilog=CSV_HELP,
                                formatter_class=fmt)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    def tiling_args(sp, required=False):
        sp.add_argument("--tiling", help=f"one of {', '.join(pmap.TILINGS)}")
        sp.add_argument("--tiling-file", help="periodic map JSON file")

    def cap_arg(sp):
        sp.add_argument("--cap", type=int, help=f"element/node cap (env {CAP_ENV})")

    b = sub.add_parser("build", help="write a tiling or finite map as JSON")
    b.add_argument("--tiling")
    b.add_argument("--map", help="built-in map: cube, prism, hemicube, torus:TILING:KxL")
    b.add_argument("--out", default="-")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("validate", help="check the map axioms")
    tiling_args(v)
    v.add_argument("--map", help="map JSON file or built-in map name")
    v.set_defaults(func=cmd_validate)

    m = sub.add_parser("mon", help="monodromy group of a tiling")
    msub = m.add_subparsers(dest="mon_cmd", required=True)
    for name, hlp in (("eval", "evaluate a word"), ("fixes-all", "does the word fix every flag"),
                      ("translation-power", "least power acting by translations"),
                      ("witness", "two commuting independent kernel translations")):
        sp = msub.add_parser(name, help=hlp, epilog=CSV_HELP, formatter_class=fmt)
        tiling_args(sp)
        if name != "witness":
            sp.add_argument("--word", required=True)
        if name == "translation-power":
            sp.add_argument("--bound", type=int)
        sp.set_defaults(func=cmd_mon)

    c = sub.add_parser("cover", help="minimal regular covers")
    csub = c.add_subparsers(dest="cover_cmd", required=True)
    cf = csub.add_parser("finite", help="whole cover of a finite map")
    cf.add_argument("--map", required=True)
    cf.add_argument("--out")
    cf.add_argument("--dot")
    cap_arg(cf)
    cf.set_defaults(func=cmd_cover)
    cp = csub.add_parser("patch", help="Cayley ball of a tiling's monodromy group",
                         epilog=CSV_HELP, formatter_class=fmt)
    tiling_args(cp)
    cp.add_argument("--radius", type=int, default=4)
    cp.add_argument("--radii", help="comma-separated radii, overrides --radius")
    cp.add_argument("--stats", action="store_true")
    cp.add_argument("--csv", help="CSV output path or - for stdout")
    cp.add_argument("--dot", help="DOT of the patch's dual graph")
    cap_arg(cp)
    cp.set_defaults(func=cmd_cover)

    e = sub.add_parser("ends", help="end probes")
    esub = e.add_subparsers(dest="ends_cmd", required=True)
    ep = esub.add_parser("probe")
    ep.add_argument("--graph", required=True)
    ep.add_argument("--r", type=int, required=True)
    ep.add_argument("--R", type=int, required=True)
    ep.add_argument("--dot", help="DOT of the ball of radius R")
    cap_arg(ep)
    ep.set_defaults(func=cmd_ends)
    ec = esub.add_parser("certify", epilog=CSV_HELP, formatter_class=fmt)
    ec.add_argument("--graph", required=True)
    ec.add_argument("--schedule", help="r:R pairs, e.g. 2:6,4:10")
    ec.add_argument("--csv")
    cap_arg(ec)
    ec.set_defaults(func=cmd_ends)

    ce = sub.add_parser("certify", help="certificate pipelines")
    cesub = ce.add_subparsers(dest="certify_cmd", required=True)
    c1 = cesub.add_parser("363636", help="identification words, colouring, H x H")
    c1.add_argument("--patch-radius", type=int, default=cert.LIFT_RADIUS)
    c1.add_argument("--colour-radius", type=int, default=16)
    c1.add_argument("--rho", default="1,2,3")
    c1.set_defaults(func=cmd_certify)
    c2 = cesub.add_parser("euler", help="Euler count for the hexagon patch")
    c2.set_defaults(func=cmd_certify)
    c3 = cesub.add_parser("loch-ness", epilog=CSV_HELP, formatter_class=fmt)
    tiling_args(c3)
    c3.add_argument("--dual-hypothesis", action="store_true",
                    help="use vertex degrees instead of face sizes")
    c3.add_argument("--radii", default=",".join(map(str, mc.DEFAULT_RADII)))
    c3.add_argument("--extend-to", type=int, default=cert.DEFAULT_EXTEND_TO,
                    help="keep adding radii in steps of 4 up to this value while genus is 0 "
                         "(default %(default)s)")
    c3.add_argument("--probe-cap", type=int, default=cert.DEFAULT_PROBE_CAP,
                    help="skip end probes whose ball exceeds this many nodes "
                         "(default %(default)s)")
    c3.add_argument("--schedule", help="end probe schedule, r:R pairs")
    c3.add_argument("--csv")
    cap_arg(c3)
    c3.set_defaults(func=cmd_certify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_PASS
    try:
        return args.func(args)
    except (UsageError, InvalidWordError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource cap reached: {exc}", file=sys.stderr)
        return EXIT_CAP
    except SearchExhaustedError as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
