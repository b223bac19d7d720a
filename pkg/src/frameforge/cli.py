"""``frameforge`` command line.

Exit codes: 0 success, 1 a check requested with ``--assert`` came out
negative, 2 bad input (unreadable or schema-invalid files, unknown names,
incompatible shapes, canonical dual of a non-frame).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import duals, gallery, perturb, specio
from .classify import DEFAULT_SCAN_SIZES, classify, exact_block, scan
from .errors import FrameforgeError, InvalidInput
from .numkernel import DEFAULT_TOLERANCE, TolerancePolicy
from .seqmodel import EditedBasis, FiniteSequence, RuleSequence, common_sections, from_matrix

EXIT_OK, EXIT_ASSERT, EXIT_INPUT = 0, 1, 2


def _tolerance(args) -> TolerancePolicy:
    return DEFAULT_TOLERANCE.with_overrides(args.tol) if args.tol else DEFAULT_TOLERANCE


def _scan_dims(text: str | None):
    if not text:
        return DEFAULT_SCAN_SIZES
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InvalidInput(f"--scan-dims expects comma-separated integers, got {text!r}") from None
    return dims


def cmd_classify(args) -> tuple[dict, int]:
    tol = _tolerance(args)
    s = specio.load(args.path)
    schedule = _scan_dims(args.scan_dims)
    result = {"taxonomy": classify(s, tol, schedule).to_dict()}
    if isinstance(s, RuleSequence) or (args.scan_dims and not isinstance(s, FiniteSequence)):
        result["scan"] = scan(s, schedule, tol).to_dict()
    return result, EXIT_OK


def cmd_dual(args) -> tuple[dict, int]:
    tol = _tolerance(args)
    f = specio.load(args.path)
    if args.verify_with:
        g = specio.load(args.verify_with)
        f_tax = classify(f, tol)
        g_tax = classify(g, tol)
        result = {"source_taxonomy": f_tax.to_dict(), "partner_taxonomy": g_tax.to_dict()}
        for relation in ("dual", "codual"):
            cert = duals.verify_duality(f, g, relation, tol=tol, n_vectors=args.section)
            check = duals.check_partner_class(cert, g_tax, f_tax)
            result[relation] = dict(cert.to_dict(), partner_check=check._asdict())
        return result, EXIT_OK
    notes = []
    if isinstance(f, EditedBasis):
        # the operator is block + identity, and the identity part is its own dual
        block = exact_block(f)
        f = from_matrix(f.truncate(block).matrix, f.field)
        notes.append(f"constructed on the exact block of {block.n_vectors} vectors; "
                     "the remaining basis vectors are their own dual")
    elif not isinstance(f, FiniteSequence):
        raise InvalidInput("dual construction needs a finite sequence or an edit script; "
                           "use --verify-with for rule-based pairs")
    if args.kind == "canonical":
        g = duals.canonical_dual(f, tol)
        cert = duals.verify_duality(f, g, "dual", tol=tol)
    elif args.kind == "pseudo":
        g, cert = duals.pseudo_dual_construct(f, tol)
    else:
        g, cert = duals.pseudo_codual_construct(f, tol)
    result = {"kind": args.kind, "dual": specio.serialize(g), "certificate": cert.to_dict()}
    if notes:
        result["notes"] = notes
    return result, EXIT_OK


def cmd_perturb(args) -> tuple[dict, int]:
    tol = _tolerance(args)
    f, g = specio.load(args.path_a), specio.load(args.path_b)
    if isinstance(f, FiniteSequence) and isinstance(g, FiniteSequence) and f.matrix.shape != g.matrix.shape:
        raise InvalidInput(f"incompatible shapes {f.matrix.shape} and {g.matrix.shape}")
    seed = perturb.default_seed()
    if args.theorem == "kato":
        sf, sg, _ = common_sections(f, g, args.section)
        a = args.a
        cert = perturb.kato_certificate(sf, sg - sf, tol, a=a, b=args.b or 0.0, seed=seed)
    elif args.theorem == "pw":
        cert = perturb.pw_certificate(f, g, args.lam, args.mu, tol, n_vectors=args.section, seed=seed)
    else:
        variant = args.theorem.removeprefix("bari-")
        cert = perturb.bari_certificate(f, g, variant, tol, n_vectors=args.section)
    code = EXIT_OK
    if args.assert_ and not (cert.hypothesis_met and cert.empirically_consistent):
        code = EXIT_ASSERT
    return {"certificate": cert.to_dict(), "seed": seed}, code


def _file_stem(name: str) -> str:
    return re.sub(r"[()]", "", re.sub(r"\(", "-", name))


def cmd_gallery(args) -> tuple[dict, int]:
    if args.list or not args.name:
        return {"names": gallery.list_names()}, EXIT_OK
    entry = gallery.get(args.name)
    result = {"entry": entry.expectations(), "sequence": specio.serialize(entry.sequence)}
    if entry.is_pair:
        result["partner"] = specio.serialize(entry.partner)
    if args.emit:
        out = Path(args.emit)
        out.mkdir(parents=True, exist_ok=True)
        stem = _file_stem(entry.name)
        written = [out / f"{stem}.json"]
        specio.dump(entry.sequence, written[0])
        if entry.is_pair:
            written.append(out / f"{stem}.partner.json")
            specio.dump(entry.partner, written[-1])
        written.append(out / f"{stem}.expected.json")
        written[-1].write_text(json.dumps(entry.expectations(), indent=2) + "\n", encoding="utf-8")
        result["written"] = [str(p) for p in written]
    return result, EXIT_OK


def _render(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key, value in obj.items():
            if isinstance(value, (dict, list)) and value and not _flat(value):
                lines.append(f"{pad}{key}:")
                lines.extend(_render(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(value)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)) and not _flat(item):
                lines.append(f"{pad}-")
                lines.extend(_render(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return lines


def _flat(value) -> bool:
    return isinstance(value, list) and all(not isinstance(v, (dict, list)) for v in value)


def _scalar(value) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_scalar(v) for v in value) + "]"
    if isinstance(value, float):
        return f"{value:.6g}"
    if value is None:
        return "-"
    return str(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frameforge", description="Classify sequences of vectors by their "
                                     "synthesis operator, build pseudo-duals and check perturbation results.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", metavar="K=V[,K=V]", help="tolerance overrides, e.g. rank_rtol=1e-8")
    common.add_argument("--json", action="store_true", help="print the JSON report")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="taxonomy of one sequence")
    p.add_argument("path")
    p.add_argument("--scan-dims", metavar="N1,N2,...", help="section sizes for the finite-section scan")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("dual", parents=[common], help="construct or verify (pseudo-)duals")
    p.add_argument("path")
    p.add_argument("--kind", choices=("canonical", "pseudo", "codual"), default="pseudo")
    p.add_argument("--verify-with", metavar="PATH", help="check a supplied partner instead of constructing one")
    p.add_argument("--section", type=int, help="section size for structured pairs")
    p.set_defaults(handler=cmd_dual)

    p = sub.add_parser("perturb", parents=[common], help="perturbation certificate for a pair")
    p.add_argument("path_a")
    p.add_argument("path_b")
    p.add_argument("--theorem", choices=("kato", "pw", "bari-prb", "bari-gamma"), default="pw")
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--a", type=float, help="Kato constant a (default: largest singular value of the difference)")
    p.add_argument("--b", type=float, help="Kato constant b (default 0)")
    p.add_argument("--section", type=int, help="section size for structured pairs")
    p.add_argument("--assert", dest="assert_", action="store_true",
                   help="exit 1 unless the hypothesis holds and the measured data agree")
    p.set_defaults(handler=cmd_perturb)

    p = sub.add_parser("gallery", parents=[common], help="list or emit named examples")
    p.add_argument("name", nargs="?")
    p.add_argument("--list", action="store_true")
    p.add_argument("--emit", metavar="DIR", help="write sequence and expected-results files to DIR")
    p.set_defaults(handler=cmd_gallery)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = _tolerance(args)
        result, code = args.handler(args)
    except FrameforgeError as exc:
        print(f"frameforge: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = {"command": ["frameforge", *argv], "tolerance": tol.to_dict(), "result": result, "exit_code": code}
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print("\n".join(_render({"tolerance": report["tolerance"], **result})))
    return code


if __name__ == "__main__":
    sys.exit(main())
