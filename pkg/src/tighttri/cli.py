"""Command-line entry point: ``tighttri <command> ...``.

Exit codes: 0 success, 1 refuted (certificate or brute-force tightness), 2 usage
or input error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .simplicial import ComplexParseError, ComplexStructureError, format_fct, read_fct, write_fct
from .spiderweb import DeckError, DeckParseError

EXIT_OK, EXIT_REFUTED, EXIT_USAGE = 0, 1, 2


def _cmd_search(args) -> int:
    from .search import SearchTask, search

    task = SearchTask(args.d, args.k, dedup=not args.no_dedup, jobs=args.jobs, out=args.out,
                      units_only=args.units_only)
    result = search(task)
    print(result.summary())
    for fail in result.failures:
        print(f"FAILED m={fail[0]} {fail[2]}", file=sys.stderr)
    return EXIT_OK if not result.failures else EXIT_REFUTED


def _cmd_build(args) -> int:
    from .assembly import boundary_of, build_from_deck
    from .spiderweb import read_deck

    params, m, deck = read_deck(args.deck)
    _, _, K = build_from_deck(params, m, deck)
    X = boundary_of(K)[0] if args.boundary else K.complex
    comments = K.provenance() + (["boundary"] if args.boundary else [])
    if args.out:
        write_fct(args.out, X, comments)
        print(f"wrote {len(X.facets)} facets to {args.out}")
    else:
        sys.stdout.write(format_fct(X, comments))
    return EXIT_OK


def _cmd_certify(args) -> int:
    from .certify import certify_tight

    X = read_fct(args.file)
    cert = certify_tight(X, args.d, [f"file {args.file}"])
    sys.stdout.write(cert.report())
    return EXIT_REFUTED if cert.verdict == "refuted" else EXIT_OK


def _cmd_family(args) -> int:
    from .search import family_count, family_generate

    members = family_generate(args.d, build=args.build)
    if len(members) != family_count(args.d):
        print(f"count mismatch: generated {len(members)}, formula {family_count(args.d)}", file=sys.stderr)
        return EXIT_REFUTED
    print(f"count={len(members)}")
    refuted = False
    if args.list or args.build:
        for spec, sol in members:
            line = f"beta={spec.beta} alpha={spec.alpha} m={spec.m}"
            if sol is not None:
                orient = "orientable" if sol.orientable else "non-orientable"
                line += f" verdict={sol.verdict} b1={sol.betti1} {orient}"
                refuted |= sol.verdict == "refuted"
            print(line)
        if args.build:
            print(f"isomorphism classes={len({sol.key for _, sol in members})}")
    return EXIT_REFUTED if refuted else EXIT_OK


def _cmd_betti(args) -> int:
    from .zhomology import betti_z2

    b = betti_z2(read_fct(args.file))
    print("betti_z2 " + " ".join(map(str, b)))
    return EXIT_OK


def _cmd_orient(args) -> int:
    from .zhomology import is_orientable

    print("orientable" if is_orientable(read_fct(args.file)) else "non-orientable")
    return EXIT_OK


def _cmd_tight(args) -> int:
    from .zhomology import is_z2_tight_bruteforce

    tight = is_z2_tight_bruteforce(read_fct(args.file), args.max_n)
    print("tight" if tight else "not tight")
    return EXIT_OK if tight else EXIT_REFUTED


def _cmd_orbits(args) -> int:
    from .assembly import orbit_representatives

    for f in orbit_representatives(read_fct(args.file), args.n):
        print(" ".join(map(str, f)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tighttri", description="Search, build and certify tight triangulations.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search", help="enumerate (m-vector, deck) solutions for (d, k)")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--no-dedup", action="store_true", help="keep every (m, deck) instead of one per isomorphism class")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", help="directory for .deck/.fct files")
    s.add_argument("--units-only", action="store_true", help="restrict m entries to units mod n")
    s.set_defaults(func=_cmd_search)

    s = sub.add_parser("build", help="build the handlebody from a .deck file")
    s.add_argument("--deck", required=True)
    s.add_argument("--boundary", action="store_true", help="output the boundary instead")
    s.add_argument("--out")
    s.set_defaults(func=_cmd_build)

    s = sub.add_parser("certify", help="tightness certificate for a .fct complex")
    s.add_argument("file")
    s.add_argument("--d", type=int)
    s.set_defaults(func=_cmd_certify)

    s = sub.add_parser("family", help="the m = (d+2, 1) family")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--list", action="store_true")
    s.add_argument("--build", action="store_true", help="build, key and certify every member")
    s.set_defaults(func=_cmd_family)

    s = sub.add_parser("betti", help="mod-2 Betti numbers")
    s.add_argument("file")
    s.set_defaults(func=_cmd_betti)

    s = sub.add_parser("orient", help="orientability")
    s.add_argument("file")
    s.set_defaults(func=_cmd_orient)

    s = sub.add_parser("tight-bruteforce", help="check tightness over all induced subcomplexes")
    s.add_argument("file")
    s.add_argument("--max-n", type=int, default=16)
    s.set_defaults(func=_cmd_tight)

    s = sub.add_parser("orbits", help="rotation orbit representatives")
    s.add_argument("file")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=_cmd_orbits)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ComplexParseError, DeckParseError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except (ComplexStructureError, DeckError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
