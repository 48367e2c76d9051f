"""Command-line interface: ``jordanlab <command> ...`` (or ``python -m jordanlab``).

Exit codes: 0 success, 1 domain error (the error class name is printed),
2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .algmaps import (
    algebraic_fusion,
    autonomy_verdict,
    enumerate_subgroups,
    jaut_enumerate,
)
from .cayley import CayleyTable, abelian_invariants, is_associative, is_commutative, require_group
from .closures import ClosureKind, closure
from .errors import JordanLabError, NotNonRegularThinJS, NotRALoop
from .fileformats import (
    parse_loop_file,
    parse_matrix_file,
    parse_scheme_file,
    serialize_loop,
    serialize_scheme,
)
from .loops import (
    commutator_element,
    construct_LGg,
    diamond_from_scheme,
    is_ra_loop,
    left_translation_rainbow,
    loop_isomorphism,
    loop_properties,
    scheme_from_loop,
)
from .named import parse_group_spec
from .rainbow import ColorMatrix, classify_rainbow, rainbow_from_labels, standard_basis
from .schemes import (
    analyze,
    construct_jcal,
    improper_witness,
    palindromic_membership,
    ratio_report,
    recognize_nonregular_thin,
    symmetrization_membership_check,
)

logger = logging.getLogger("jordanlab")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _scheme(path: str) -> ColorMatrix:
    return parse_scheme_file(_read(path))


def _loop(path: str) -> CayleyTable:
    return parse_loop_file(_read(path))


def _kind_label(rec) -> str:
    if rec.is_as:
        return "AS"
    if rec.is_cc:
        return "CC"
    if rec.is_js:
        return "JS"
    if rec.is_jc:
        return "JC"
    return "rainbow"


def _scheme_summary(cm: ColorMatrix) -> dict:
    rec = analyze(cm)
    info = classify_rainbow(cm)
    out = {
        "order": cm.n,
        "rank": cm.rank,
        "ratio": str(info.ratio),
        "homogeneous": info.homogeneous,
        "regular": info.regular,
        "thin": info.thin,
        "symmetric": info.symmetric,
        "is_cc": rec.is_cc,
        "is_jc": rec.is_jc,
        "is_as": rec.is_as,
        "is_js": rec.is_js,
        "proper_js": rec.proper_js,
        "kind": _kind_label(rec),
    }
    return out


# ----------------------------------------------------------------- commands


def cmd_check(args) -> dict:
    cm = _scheme(args.file)
    out = _scheme_summary(cm)
    out["class_sizes"] = [int(x) for x in cm.class_sizes()]
    rec = analyze(cm)
    for name, tensor in (("intersection_numbers", rec.tensor_assoc),
                         ("jordan_intersection_numbers", rec.tensor_jordan)):
        out[name] = None if tensor is None else [
            [i, j, t, v] for (i, j, t), v in sorted(tensor.values.items())
        ]
    if rec.is_js:
        rep = ratio_report(cm)
        out["ratio_bound_tight"] = rep.bound_tight
        out["fiber_split"] = None if rep.split is None else [list(rep.split[0]), list(rep.split[1])]
    else:
        out["ratio_bound_tight"] = None
        out["fiber_split"] = None
    parts = [out["kind"], "regular" if out["regular"] else "non-regular"]
    if out["thin"]:
        parts.append("thin")
    parts.append(f"ratio {out['ratio']}")
    out["summary"] = ", ".join(parts)
    return out


def cmd_closure(args) -> dict:
    cm = _scheme(args.file)
    if args.seed_matrices:
        mats = [cm.indicator(c) for c in range(cm.rank)]
        mats += [parse_matrix_file(_read(p)) for p in args.seed_matrices]
        cm = standard_basis(mats, cm.n)
    kind = ClosureKind(args.kind)
    result = closure(cm, kind)
    return {
        "kind": kind.value,
        "seed_rank": cm.rank,
        "order": result.n,
        "rank": result.rank,
        "class_sizes": [int(x) for x in result.class_sizes()],
        "colors": result.tolist(),
        "text": serialize_scheme(result),
    }


def _group_element(G: CayleyTable, spec: str) -> int:
    if spec == "s":
        return commutator_element(G)
    try:
        g = int(spec)
    except ValueError:
        raise JordanLabError(f"element must be an index or 's', got {spec!r}") from None
    if not 0 <= g < G.n:
        raise JordanLabError(f"element {g} out of range 0..{G.n - 1}")
    return g


def cmd_construct(args) -> dict:
    what = args.what
    if what == "group-scheme":
        G = parse_group_spec(args.spec)
        require_group(G)
        cm = rainbow_from_labels(left_translation_rainbow(G))
        return {"object": "scheme", "order": cm.n, "rank": cm.rank,
                "colors": cm.tolist(), "text": serialize_scheme(cm)}
    if what == "jcal":
        rec = construct_jcal(parse_group_spec(args.spec))
        cm = rec.cm
        return {"object": "scheme", "order": cm.n, "rank": cm.rank,
                "colors": cm.tolist(), "text": serialize_scheme(cm)}
    if what == "ra-loop":
        G = parse_group_spec(args.base)
        L = construct_LGg(G, _group_element(G, args.g0))
        return {"object": "loop", "order": L.n, "table": L.tolist(), "text": serialize_loop(L)}
    if what == "loop-scheme":
        L = _loop(args.loopfile)
        result = scheme_from_loop(L)
        if result.scheme is None:
            raise NotRALoop(
                f"left translations do not form a Jordan scheme; witness triple {list(result.witness)}"
            )
        cm = result.scheme.cm
        return {"object": "scheme", "order": cm.n, "rank": cm.rank,
                "colors": cm.tolist(), "text": serialize_scheme(cm)}
    raise AssertionError(what)


def _loop_report(L: CayleyTable) -> dict:
    rep = loop_properties(L)
    ra = is_ra_loop(L)
    out = {
        "order": L.n,
        "lip": rep.lip,
        "left_alt": rep.left_alt,
        "right_alt": rep.right_alt,
        "flexible": rep.flexible,
        "left_bol": rep.left_bol,
        "right_bol": rep.right_bol,
        "moufang": rep.moufang,
        "ra": ra.ra,
        "ra_witness": None if ra.witness is None else list(ra.witness),
        "associative": rep.associative,
        "commutative": rep.commutative,
        "exponent_two": rep.exponent_two,
        "center": list(rep.center),
        "left_nucleus": list(rep.left_nucleus),
        "middle_nucleus": list(rep.middle_nucleus),
        "right_nucleus": list(rep.right_nucleus),
    }
    return out


def cmd_loop(args) -> dict:
    if args.loop_command == "check":
        L = _loop(args.loopfile)
        out = _loop_report(L)
        if L.relabeling is not None:
            out["relabeling"] = list(L.relabeling)
        return out
    cm = _scheme(args.file)
    L = diamond_from_scheme(cm, args.base)
    out = {"base": args.base, "table": L.tolist(), "text": serialize_loop(L)}
    out.update(_loop_report(L))
    return out


def cmd_recognize(args) -> dict:
    cm = _scheme(args.file)
    info = classify_rainbow(cm)
    rec = analyze(cm)
    if info.thin and info.regular and rec.is_js:
        L = diamond_from_scheme(cm, 0)
        out = {"type": "regular", "loop": L.tolist(), "is_group": is_associative(L),
               "ra": is_ra_loop(L).ra}
        if is_associative(L) and is_commutative(L):
            out["abelian_invariants"] = abelian_invariants(L)
        return out
    if info.thin and rec.is_js:
        r = recognize_nonregular_thin(cm)
        return {"type": "non_regular", "abelian_invariants": abelian_invariants(r.group),
                "group": r.group.tolist(), "conjugator": list(r.conjugator)}
    raise NotNonRegularThinJS("recognition needs a thin Jordan scheme")


def _perm_list(perms) -> Optional[list]:
    return None if perms is None else [list(p) for p in perms]


def cmd_jaut(args) -> dict:
    cm = _scheme(args.file)
    rep = jaut_enumerate(cm)
    out = {
        "rank": cm.rank,
        "jaut_order": len(rep.jaut),
        "jaut": _perm_list(rep.jaut),
        "tau": list(rep.tau),
        "aaut_order": None if rep.aaut is None else len(rep.aaut),
        "aaut": _perm_list(rep.aaut),
        "taut_order": None if rep.taut is None else len(rep.taut),
        "taut": _perm_list(rep.taut),
        "jaut_equals_taut": None if rep.taut is None else sorted(rep.jaut) == sorted(rep.taut),
    }
    return out


def cmd_fusions(args) -> dict:
    cm = _scheme(args.file)
    rep = jaut_enumerate(cm)
    subgroups = enumerate_subgroups(rep)
    fusions: dict[bytes, dict] = {}
    for sub in subgroups:
        fused = algebraic_fusion(cm, sub)
        key = fused.colors.tobytes()
        if key in fusions:
            fusions[key]["subgroup_orders"].append(len(sub))
            continue
        rec = analyze(fused)
        info = classify_rainbow(fused)
        improper = rec.is_js and improper_witness(fused) is not None
        fusions[key] = {
            "rank": fused.rank,
            "subgroup_orders": [len(sub)],
            "kind": _kind_label(rec),
            "is_cc": rec.is_cc,
            "is_js": rec.is_js,
            "symmetric": info.symmetric,
            "proper_js": rec.proper_js,
            "improper_symmetric": bool(improper and info.symmetric),
            "proper_symmetric_js": bool(rec.is_js and rec.proper_js and info.symmetric),
            "colors": fused.tolist(),
        }
    listed = list(fusions.values())
    return {
        "jaut_order": len(rep.jaut),
        "subgroup_count": len(subgroups),
        "fusion_count": len(listed),
        "proper_symmetric_count": sum(f["proper_symmetric_js"] for f in listed),
        "fusions": listed,
    }


def cmd_autonomy(args) -> dict:
    cm = _scheme(args.file)
    v = autonomy_verdict(cm, brute_force=args.brute_force)
    return {
        "verdict": v.verdict,
        "witness": None if v.witness is None else v.witness.tolist(),
        "phi": _perm_list(v.phi),
        "certificate": v.certificate,
    }


def cmd_experiment(args) -> dict:
    if args.experiment == "basepoints":
        L = _loop(args.loopfile)
        result = scheme_from_loop(L)
        if result.scheme is None:
            raise NotRALoop(f"loop is not RA; witness triple {list(result.witness)}")
        cm = result.scheme.cm
        loops = [diamond_from_scheme(cm, w) for w in range(cm.n)]
        classes: list[list[int]] = []
        for w, M in enumerate(loops):
            for cls in classes:
                if loop_isomorphism(loops[cls[0]], M) is not None:
                    cls.append(w)
                    break
            else:
                classes.append([w])
        return {"order": cm.n, "isomorphism_classes": classes,
                "all_isomorphic": len(classes) == 1}
    cm = _scheme(args.file)
    rng = random.Random(args.seed)
    sym_ok = pal_ok = 0
    for _ in range(args.samples):
        vecs = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(cm.rank)]
                for _ in range(args.k)]
        sym_ok += symmetrization_membership_check(cm, *vecs)
        pal_ok += palindromic_membership(cm, *vecs)
    return {"k": args.k, "samples": args.samples,
            "symmetrized_in_span": sym_ok, "palindromic_in_span": pal_ok}


# ----------------------------------------------------------------- parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="accepted for compatibility; computations run single-threaded")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="jordanlab", parents=[common],
                                     description="Coherent configurations, Jordan schemes and loops.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="classify a scheme file")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("closure", parents=[common], help="WL or Jordan closure")
    p.add_argument("--kind", choices=["wl", "jordan"], required=True)
    p.add_argument("file")
    p.add_argument("--seed-matrices", nargs="+", metavar="FILE")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("construct", parents=[common], help="build schemes and loops")
    csub = p.add_subparsers(dest="what", required=True)
    q = csub.add_parser("group-scheme", parents=[common])
    q.add_argument("spec")
    q = csub.add_parser("jcal", parents=[common])
    q.add_argument("spec")
    q = csub.add_parser("ra-loop", parents=[common])
    q.add_argument("--base", required=True)
    q.add_argument("--g0", required=True)
    q = csub.add_parser("loop-scheme", parents=[common])
    q.add_argument("loopfile")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("loop", parents=[common], help="loop tools")
    lsub = p.add_subparsers(dest="loop_command", required=True)
    q = lsub.add_parser("check", parents=[common])
    q.add_argument("loopfile")
    q = lsub.add_parser("from-scheme", parents=[common])
    q.add_argument("file")
    q.add_argument("--base", type=int, default=0)
    p.set_defaults(func=cmd_loop)

    for name, func, helptext in (("recognize", cmd_recognize, "identify a thin Jordan scheme"),
                                 ("jaut", cmd_jaut, "algebraic automorphisms"),
                                 ("fusions", cmd_fusions, "all algebraic fusions")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("file")
        p.set_defaults(func=func)

    p = sub.add_parser("autonomy", parents=[common], help="autonomy verdict")
    p.add_argument("file")
    p.add_argument("--brute-force", action="store_true")
    p.set_defaults(func=cmd_autonomy)

    p = sub.add_parser("experiment", parents=[common], help="exploratory probes")
    esub = p.add_subparsers(dest="experiment", required=True)
    q = esub.add_parser("basepoints", parents=[common])
    q.add_argument("loopfile")
    q = esub.add_parser("symmetrized-products", parents=[common])
    q.add_argument("file")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--samples", type=int, default=20)
    q.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_experiment)
    return parser


def _to_jsonable(value):
    if isinstance(value, dict):
        return {k: _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, Fraction):
        return str(value)
    return value


def _print_text(result: dict, out):
    text = result.get("text")
    if text is not None:
        out.write(text)
        return
    for key, value in result.items():
        if key == "summary":
            continue
        out.write(f"{key}: {value}\n")
    if "summary" in result:
        out.write(result["summary"] + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    as_json = getattr(args, "json", False)
    try:
        result = args.func(args)
    except JordanLabError as exc:
        name = type(exc).__name__
        if as_json:
            json.dump({"command": args.command, "ok": False, "error": name, "message": str(exc)},
                      sys.stdout, indent=2)
            sys.stdout.write("\n")
        print(f"{name}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if as_json:
        json.dump({"command": args.command, "ok": True, "result": _to_jsonable(result)},
                  sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        _print_text(result, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
