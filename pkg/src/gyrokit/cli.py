"""Command-line front end.

Every verb wraps one library operation or a short pipeline over the
same structures the library exposes.  Text reports are canonical;
``--json`` emits the same content machine-readably with deterministic
key order.  Exit status: 0 all requested checks passed, 1 some check
failed, 2 malformed input or usage.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

import numpy as np

from . import catalog, core, extensions, factor_systems, morphisms, semicross, structure

EXIT_OK, EXIT_CHECK_FAILED, EXIT_BAD_INPUT = 0, 1, 2


class CliError(Exception):
    """Bad input reported with exit status 2."""


def resolve_structure(ref: str):
    """A builtin name, or a path to a table file."""
    try:
        return catalog.builtin(ref)
    except KeyError:
        pass
    try:
        return core.load_table(ref)
    except OSError as exc:
        raise CliError(f"cannot resolve {ref!r}: not a builtin and {exc}") from None
    except core.TableFormatError as exc:
        raise CliError(f"bad table file {ref!r}: {exc}") from None


def _structure_arg(args):
    if getattr(args, "builtin", None):
        return resolve_structure(args.builtin)
    if getattr(args, "table", None):
        return resolve_structure(args.table)
    raise CliError("pass --builtin NAME or --table PATH")


def _parse_subset(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise CliError(f"subset must be comma-separated integers, got {text!r}") from None


def _load_extension(args):
    try:
        with open(args.extension, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(str(exc)) from None
    try:
        return extensions.read_extension(text, resolve_structure)
    except (extensions.ExtensionError, ValueError) as exc:
        raise CliError(f"bad extension file: {exc}") from None


def _report_payload(rep: core.Report) -> dict:
    return rep.to_dict()


def _table_lines(table, labels=None) -> list[str]:
    out = []
    for row in np.asarray(table):
        out.append(" ".join(str(int(v)) for v in row))
    return out


def _emit(args, payload: dict, text_lines: list[str]) -> int:
    if args.json:
        print(json.dumps(payload, sort_keys=True, default=_json_default))
    else:
        for line in text_lines:
            print(line)
    return EXIT_OK if payload.get("passed", True) else EXIT_CHECK_FAILED


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"not JSON serializable: {type(obj)}")


# -- verbs --------------------------------------------------------------------


def cmd_verify(args):
    G = _structure_arg(args)
    rep = core.verify_axioms(G, window=args.window, seed=args.seed,
                             threads=args.threads)
    payload = {"command": "verify", "structure": getattr(G, "name", "?"),
               "passed": rep.passed, "report": _report_payload(rep),
               "seed": args.seed}
    return _emit(args, payload, [f"seed: {args.seed}", rep.summary()])


def cmd_identities(args):
    G = _structure_arg(args)
    rep = core.verify_identities(G, window=args.window)
    payload = {"command": "identities", "structure": getattr(G, "name", "?"),
               "passed": rep.passed, "report": _report_payload(rep)}
    return _emit(args, payload, [rep.summary()])


def cmd_gyrtab(args):
    G = _structure_arg(args)
    if isinstance(G, core.RuleGyrogroup):
        raise CliError("gyration tables need a finite structure")
    gy = G.gyr_all()
    perms: dict[tuple, int] = {}
    grid = []
    for a in range(G.n):
        row = []
        for b in range(G.n):
            key = tuple(gy[a, b].tolist())
            row.append(perms.setdefault(key, len(perms)))
        grid.append(row)
    legend = {}
    for key, idx in perms.items():
        legend[idx] = core.GyroPermutation(list(key)).cycles()
    lines = [f"distinct gyrations of {G.name}: {len(perms)}"]
    lines += [f"  [{i}] {legend[i]}" for i in sorted(legend)]
    lines += _table_lines(grid)
    payload = {"command": "gyrtab", "structure": G.name, "passed": True,
               "legend": {str(i): legend[i] for i in legend}, "grid": grid}
    return _emit(args, payload, lines)


def cmd_quotient(args):
    G = _structure_arg(args)
    S = _parse_subset(args.subset)
    ok, wit = structure.is_subgroup(G, S)
    if not ok:
        payload = {"command": "quotient", "passed": False,
                   "reason": f"not a subgroup: {wit}"}
        return _emit(args, payload, [f"not a subgroup: {wit}"])
    nrep = structure.is_normal(G, S)
    if not nrep.passed:
        payload = {"command": "quotient", "passed": False,
                   "report": _report_payload(nrep)}
        return _emit(args, payload, [nrep.summary()])
    q = structure.quotient(G, S)
    lines = [nrep.summary(), f"quotient order {q.n}"]
    lines += _table_lines(q.group.table)
    payload = {"command": "quotient", "passed": True,
               "normality": _report_payload(nrep),
               "cosets": [list(c) for c in q.cosets],
               "table": q.group.table}
    if args.iso_against:
        target = resolve_structure(args.iso_against)
        phi = structure.find_isomorphism(q.group, target)
        payload["isomorphic_to"] = args.iso_against if phi is not None else None
        payload["isomorphism"] = phi
        payload["passed"] = phi is not None
        lines.append(f"isomorphism with {args.iso_against}: "
                     + ("found " + str(phi.tolist()) if phi is not None else "none"))
    return _emit(args, payload, lines)


def cmd_extract(args):
    E, t = _load_extension(args)
    if t is None:
        t = extensions.canonical_section(E)
    fs = extensions.extract_factor_system(E, t, fast=args.fast)
    vrep = factor_systems.validate(fs)
    h_ref, k_ref = args.h_ref, args.k_ref
    if args.out and (h_ref is None or k_ref is None):
        # keep the output self-contained: export the component tables
        if h_ref is None:
            h_ref = f"{args.out}.H.tbl"
            with open(h_ref, "w", encoding="utf-8") as fh:
                fh.write(core.dump_table(fs.H))
        if k_ref is None:
            k_ref = f"{args.out}.K.tbl"
            with open(k_ref, "w", encoding="utf-8") as fh:
                fh.write(core.dump_table(fs.K))
    text = factor_systems.write_factor_system(fs, h_ref or "H", k_ref or "K")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    payload = {"command": "extract", "passed": vrep.passed,
               "validation": _report_payload(vrep),
               "sigma": fs.sigma, "f": fs.f}
    lines = [vrep.summary()] + ([] if args.out else text.splitlines())
    return _emit(args, payload, lines)


def cmd_build(args):
    try:
        with open(args.factor_system, "r", encoding="utf-8") as fh:
            fs = factor_systems.read_factor_system(fh.read(), resolve_structure)
    except OSError as exc:
        raise CliError(str(exc)) from None
    except ValueError as exc:
        raise CliError(f"bad factor system file: {exc}") from None
    G, _, _ = factor_systems.build_extension(fs)
    lines = [f"built order {G.n}; axioms and gyration formula verified"]
    lines += _table_lines(G.table)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(core.dump_table(G))
    payload = {"command": "build", "passed": True, "order": G.n,
               "table": G.table}
    return _emit(args, payload, lines)


def cmd_semicross(args):
    H = resolve_structure(args.h)
    K = resolve_structure(args.k)
    if args.sigma == "trivial":
        sigma = semicross.trivial_sigma(H, K)
    elif args.sigma.startswith("support:"):
        support = set(_parse_subset(args.sigma.split(":", 1)[1]))
        sigma = semicross.sigma_from_support(H, K, support)
    else:
        try:
            with open(args.sigma, "r", encoding="utf-8") as fh:
                sigma = semicross.read_sigma(fh.read(), H, K)
        except OSError as exc:
            raise CliError(str(exc)) from None
        except semicross.SigmaError as exc:
            raise CliError(f"bad sigma file: {exc}") from None
    srep = semicross.validate_sigma(H, K, sigma)
    if not srep.passed:
        payload = {"command": "semicross", "passed": False,
                   "sigma_report": _report_payload(srep)}
        return _emit(args, payload, [srep.summary()])
    G = semicross.semi_cross(H, K, sigma)
    lines = [srep.summary(), f"product order {G.n}; axioms verified"]
    lines += _table_lines(G.table)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(core.dump_table(G))
    payload = {"command": "semicross", "passed": True, "order": G.n,
               "sigma_report": _report_payload(srep), "table": G.table}
    return _emit(args, payload, lines)


def cmd_enumerate_sigma(args):
    H = resolve_structure(args.h)
    K = resolve_structure(args.k)
    res = semicross.enumerate_sigmas(H, K)
    lines = [f"candidates: {res.candidate_count}",
             f"admissible: {res.raw_count}"]
    if res.simplified_applicable:
        lines.append(f"by the simplified law: {res.simplified_count}")
    for i, s in enumerate(res.maps):
        lines.append(f"map {i}:")
        lines += ["  " + " ".join(map(str, row)) for row in s.values.tolist()]
    agree = (not res.simplified_applicable
             or res.simplified_count == res.raw_count)
    payload = {"command": "enumerate-sigma", "passed": agree,
               "candidates": res.candidate_count, "admissible": res.raw_count,
               "simplified_count": res.simplified_count,
               "maps": [s.values for s in res.maps]}
    return _emit(args, payload, lines)


def cmd_split(args):
    E, _ = _load_extension(args)
    t = semicross.is_split(E)
    if t is None:
        payload = {"command": "split", "passed": False, "section": None}
        return _emit(args, payload, ["no homomorphic section exists"])
    f = extensions._f_table(E, t)
    payload = {"command": "split", "passed": True, "section": t,
               "f_trivial": bool((f == 0).all())}
    return _emit(args, payload,
                 [f"splitting section: {t.tolist()}",
                  f"extracted f identically trivial: {bool((f == 0).all())}"])


def cmd_morphism(args):
    E1, t1 = _load_extension_path(args.from_extension)
    E2, t2 = _load_extension_path(args.to_extension)
    try:
        with open(args.maps, "r", encoding="utf-8") as fh:
            m = morphisms.read_extension_morphism(fh.read())
    except OSError as exc:
        raise CliError(str(exc)) from None
    except morphisms.MorphismError as exc:
        raise CliError(f"bad morphism file: {exc}") from None
    ok, wit = morphisms.verify_extension_morphism(m, E1, E2)
    lines = [f"extension morphism: {'ok' if ok else 'FAIL: ' + str(wit)}"]
    payload = {"command": "morphism", "passed": ok, "witness": wit}
    if ok:
        if t1 is None:
            t1 = extensions.canonical_section(E1)
        if t2 is None:
            t2 = extensions.canonical_section(E2)
        fsm = morphisms.induce_fs_morphism(m, E1, E2, t1, t2)
        lines.append(f"induced g: {fsm.g.tolist()}")
        payload["induced_g"] = fsm.g
    return _emit(args, payload, lines)


def _load_extension_path(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return extensions.read_extension(fh.read(), resolve_structure)
    except OSError as exc:
        raise CliError(str(exc)) from None
    except (extensions.ExtensionError, ValueError) as exc:
        raise CliError(f"bad extension file {path}: {exc}") from None


def cmd_section_change(args):
    E, t_file = _load_extension(args)
    if args.sections:
        svals = _parse_subset(args.sections[0])
        tvals = _parse_subset(args.sections[1])
        s = extensions.check_section(E, svals)
        t = extensions.check_section(E, tvals)
    else:
        rng = random.Random(args.seed)
        s = morphisms.random_section(E, rng)
        t = t_file if t_file is not None else extensions.canonical_section(E)
    g, rep = morphisms.section_change(E, s, t)
    lines = [f"seed: {args.seed}", f"g: {g.tolist()}", rep.summary()]
    payload = {"command": "section-change", "passed": rep.passed,
               "seed": args.seed, "g": g, "report": _report_payload(rep)}
    return _emit(args, payload, lines)


def cmd_xyy(args):
    G = _structure_arg(args)
    if isinstance(G, core.RuleGyrogroup):
        raise CliError("the (x+y)+y table needs a finite structure")
    table = semicross.xyy_table(G)
    lines = _table_lines(table)
    payload = {"command": "xyy", "structure": G.name, "passed": True,
               "table": table}
    if G.name == "K8":
        _, diffs = catalog.compare_xyy_reference(G, catalog.K8_XYY_REFERENCE)
        payload["reference_diffs"] = [list(d) for d in diffs]
        lines.append("cells differing from the shipped reference "
                     "(x, y, computed, reference): "
                     + "; ".join(str(d) for d in diffs))
    elif G.name == "Q8":
        _, diffs = catalog.compare_xyy_reference(G, catalog.Q8_XYY_REFERENCE)
        payload["reference_diffs"] = [list(d) for d in diffs]
        lines.append(f"cells differing from the shipped reference: {diffs}")
    return _emit(args, payload, lines)


def cmd_builtin(args):
    if args.list or not args.name:
        lines = list(catalog.BUILTIN_NAMES)
        lines.append("(Z<n> is accepted for any cyclic order)")
        payload = {"command": "builtin", "passed": True,
                   "names": catalog.BUILTIN_NAMES}
        return _emit(args, payload, lines)
    G = catalog.builtin(args.name)
    if isinstance(G, core.RuleGyrogroup):
        rep = core.verify_axioms(G, window=args.window, seed=args.seed,
                                 threads=args.threads)
        lines = [f"{args.name}: rule-backed", rep.summary()]
        payload = {"command": "builtin", "name": args.name,
                   "passed": rep.passed, "report": _report_payload(rep)}
        return _emit(args, payload, lines)
    lines = [f"{args.name}: order {G.n}"]
    lines += _table_lines(G.table)
    payload = {"command": "builtin", "name": args.name, "passed": True,
               "order": G.n, "table": G.table}
    return _emit(args, payload, lines)


def cmd_export(args):
    G = _structure_arg(args)
    if isinstance(G, core.RuleGyrogroup):
        raise CliError("only finite structures can be exported as tables")
    text = core.dump_table(G)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        lines = [f"wrote {args.out}"]
    else:
        lines = text.splitlines()
    payload = {"command": "export", "passed": True, "table": G.table,
               "name": G.name}
    return _emit(args, payload, lines)


# -- wiring -------------------------------------------------------------------


def _add_common(p):
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--window", type=int, default=50,
                   help="window bound for rule-backed structures")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads for windowed verification")


def _add_structure(p):
    p.add_argument("--builtin", help="builtin structure name")
    p.add_argument("--table", help="path to a table file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gyrokit",
        description="verify, decompose and construct gyrogroups")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("verify", help="run the four axiom checks")
    _add_structure(p)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("identities", help="run the six-identity suite")
    _add_structure(p)
    _add_common(p)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("gyrtab", help="print the gyration table")
    _add_structure(p)
    _add_common(p)
    p.set_defaults(func=cmd_gyrtab)

    p = sub.add_parser("quotient", help="normality check and quotient table")
    _add_structure(p)
    p.add_argument("--subset", required=True,
                   help="comma-separated element indices")
    p.add_argument("--iso-against", help="builtin or table to compare the "
                                         "quotient with")
    _add_common(p)
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("extract", help="extract the factor system of an extension")
    p.add_argument("--extension", required=True, help="extension file")
    p.add_argument("--fast", action="store_true",
                   help="skip the closed-formula cross check")
    p.add_argument("--out", help="write the factor system here")
    p.add_argument("--h-ref", help="reference name for H in the output")
    p.add_argument("--k-ref", help="reference name for K in the output")
    _add_common(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("build", help="build the extension of a factor system")
    p.add_argument("--factor-system", required=True, help="factor system file")
    p.add_argument("--out", help="write the product table here")
    _add_common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("semicross", help="build a semi cross product")
    p.add_argument("--h", required=True, help="kernel group (builtin or path)")
    p.add_argument("--k", required=True, help="factor gyrogroup (builtin or path)")
    p.add_argument("--sigma", default="trivial",
                   help="'trivial', 'support:IDX,IDX,...' or a sigma file")
    p.add_argument("--out", help="write the product table here")
    _add_common(p)
    p.set_defaults(func=cmd_semicross)

    p = sub.add_parser("enumerate-sigma", help="enumerate admissible sigma maps")
    p.add_argument("--h", required=True)
    p.add_argument("--k", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_enumerate_sigma)

    p = sub.add_parser("split", help="search for a homomorphic section")
    p.add_argument("--extension", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("morphism", help="verify an extension morphism and "
                                        "induce the factor-system morphism")
    p.add_argument("--from-extension", required=True)
    p.add_argument("--to-extension", required=True)
    p.add_argument("--maps", required=True, help="morphism file")
    _add_common(p)
    p.set_defaults(func=cmd_morphism)

    p = sub.add_parser("section-change", help="compare two sections")
    p.add_argument("--extension", required=True)
    p.add_argument("--sections", nargs=2, metavar=("S", "T"),
                   help="two comma-separated G-index lists")
    _add_common(p)
    p.set_defaults(func=cmd_section_change)

    p = sub.add_parser("xyy", help="print the (x+y)+y table")
    _add_structure(p)
    _add_common(p)
    p.set_defaults(func=cmd_xyy)

    p = sub.add_parser("builtin", help="show a builtin structure")
    p.add_argument("name", nargs="?", help="builtin name")
    p.add_argument("--list", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_builtin)

    p = sub.add_parser("export", help="write a structure as a table file")
    _add_structure(p)
    p.add_argument("--out", help="output path (default: stdout)")
    _add_common(p)
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (ValueError, KeyError, IndexError,
            semicross.SearchGuardError) as exc:
        # covers malformed tables, carrier violations, bad sigma and
        # morphism data, and tripped search guards
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except AssertionError as exc:
        # a construction re-verification failed on the supplied data
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
