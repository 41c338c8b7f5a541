"""Command-line interface.

Exit status: 0 success, 1 negative result (invalid, false, none), 2 usage or
input error, 3 resource cap reached.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

from . import canon, coordmodel, finstruct, ramsey, ultra
from .errors import EmbeddingError, MalformedStructure, ResourceCapExceeded, ValidationError
from .presentation import ParseError, parse, render
from .rationals import parse_rat

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    if isinstance(obj, str):
        print(obj)
    else:
        print(json.dumps(obj))


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _load_structure(path: str) -> finstruct.FinStructure:
    S, _ = finstruct.from_json(_load_json(path))
    return S


def _int_list(text: str) -> List[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(p) for p in text.replace(" ", ",").split(",") if p]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def cmd_canon(args) -> int:
    result = render(canon.canonicalize(parse(args.expr)))
    _emit({"canonical": result} if args.json else result)
    return EXIT_OK


def cmd_eq(args) -> int:
    same = canon.same_order_type(parse(args.left), parse(args.right))
    _emit({"equal": same} if args.json else str(same).lower())
    return EXIT_OK if same else EXIT_NEGATIVE


def cmd_validate(args) -> int:
    S = _load_structure(args.file)
    problems = finstruct.validate(S)
    if args.json:
        _emit({
            "valid": not problems,
            "violations": [
                {"axiom": v.axiom, "path": finstruct.path_text(v.path), "points": list(v.points), "message": v.message}
                for v in problems
            ],
        })
    elif problems:
        for v in problems:
            print(v)
    else:
        print("OK")
    return EXIT_NEGATIVE if problems else EXIT_OK


def cmd_embed(args) -> int:
    A, B = _load_structure(args.file_a), _load_structure(args.file_b)
    embs = list(finstruct.enumerate_embeddings(A, B))
    if args.json:
        _emit({"embeddings": [list(e) for e in embs]})
    else:
        for e in embs:
            print(" ".join(map(str, e)))
    return EXIT_OK if embs else EXIT_NEGATIVE


def cmd_coordinatize(args) -> int:
    S = _load_structure(args.file)
    coords = coordmodel.coordinatize(S)
    _emit(finstruct.to_json(S, coords))
    return EXIT_OK


def cmd_amalgamate(args) -> int:
    A, B, C = (_load_structure(p) for p in (args.file_a, args.file_b, args.file_c))
    result = finstruct.amalgamate(A, B, C, _int_list(args.f), _int_list(args.g))
    doc = finstruct.to_json(result.D, result.coords)
    doc["f_prime"] = list(result.f_prime)
    doc["g_prime"] = list(result.g_prime)
    _emit(doc)
    return EXIT_OK


def cmd_gen(args) -> int:
    structures = finstruct.enumerate_structures(parse(args.expr), args.n, cap=args.cap)
    docs = [finstruct.to_json(S) for S in structures]
    if args.json:
        _emit(docs)
    else:
        for doc in docs:
            _emit(doc)
    return EXIT_OK


def cmd_sample(args) -> int:
    S, coords = coordmodel.sample_substructure(parse(args.expr), args.n, args.seed)
    _emit(finstruct.to_json(S, coords))
    return EXIT_OK


def cmd_ramsey_check(args) -> int:
    C, B, A = (_load_structure(p) for p in (args.C, args.B, args.A))
    result = ramsey.check_arrow(C, B, A, args.k, cap=args.cap)
    if args.json:
        coloring = None
        if result.bad_coloring is not None:
            coloring = [{"copy": list(pts), "color": c} for pts, c in result.bad_coloring.items()]
        _emit({"holds": result.holds, "bad_coloring": coloring})
    else:
        print(str(result.holds).lower())
        if result.bad_coloring:
            for pts, c in result.bad_coloring.items():
                print(f"{' '.join(map(str, pts))}: {c}")
    return EXIT_OK if result.holds else EXIT_NEGATIVE


def cmd_ramsey_search(args) -> int:
    B, A = _load_structure(args.B), _load_structure(args.A)
    tree = parse(args.tree) if args.tree else B.tree
    witness = ramsey.search_witness(tree, B, A, args.k, args.size_cap, copy_cap=args.cap)
    if witness is None:
        _emit({"witness": None, "status": "unknown"} if args.json else "unknown")
        return EXIT_CAP
    _emit(finstruct.to_json(witness))
    return EXIT_OK


def _parse_distances(text: str):
    try:
        return [parse_rat(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_um_to_struct(args) -> int:
    u = ultra.from_json(_load_json(args.file))
    _emit(finstruct.to_json(ultra.to_structure(u)))
    return EXIT_OK


def cmd_um_to_um(args) -> int:
    S = _load_structure(args.file)
    _emit(ultra.to_json(ultra.to_ultrametric(S, _parse_distances(args.S))))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(
        prog="sumshuffle",
        description="Sum-shuffle expressions, their coordinate models and finite structures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("canon", parents=[common], help="print the canonical expression")
    p.add_argument("expr")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("eq", parents=[common], help="decide equality of order types")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_eq)

    p = sub.add_parser("validate", parents=[common], help="check a structure file against the axioms")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("embed", parents=[common], help="list embeddings of A into B")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("coordinatize", parents=[common], help="embed a structure into the coordinate model")
    p.add_argument("file")
    p.set_defaults(func=cmd_coordinatize)

    p = sub.add_parser("amalgamate", parents=[common], help="amalgamate B and C over A")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("file_c")
    p.add_argument("--f", required=True, help="embedding A -> B as comma-separated images")
    p.add_argument("--g", required=True, help="embedding A -> C as comma-separated images")
    p.set_defaults(func=cmd_amalgamate)

    p = sub.add_parser("gen", parents=[common], help="all structures of a size, up to isomorphism")
    p.add_argument("expr")
    p.add_argument("n", type=int)
    p.add_argument("--cap", type=int, default=finstruct.DEFAULT_ENUM_CAP)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("sample", parents=[common], help="random substructure of the coordinate model")
    p.add_argument("expr")
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("ramsey", help="arrow relations C -> (B)^A_k")
    rsub = p.add_subparsers(dest="ramsey_command", required=True)
    r = rsub.add_parser("check", parents=[common])
    r.add_argument("--C", required=True)
    r.add_argument("--B", required=True)
    r.add_argument("--A", required=True)
    r.add_argument("-k", type=int, default=2)
    r.add_argument("--cap", type=int, default=ramsey.DEFAULT_COPY_CAP)
    r.set_defaults(func=cmd_ramsey_check)
    r = rsub.add_parser("search", parents=[common])
    r.add_argument("--tree", help="expression; defaults to the tree of B")
    r.add_argument("--B", required=True)
    r.add_argument("--A", required=True)
    r.add_argument("-k", type=int, default=2)
    r.add_argument("--size-cap", type=int, default=6)
    r.add_argument("--cap", type=int, default=ramsey.DEFAULT_COPY_CAP)
    r.set_defaults(func=cmd_ramsey_search)

    p = sub.add_parser("um", help="ultrametric space conversions")
    usub = p.add_subparsers(dest="um_command", required=True)
    u = usub.add_parser("to-struct", parents=[common])
    u.add_argument("file")
    u.set_defaults(func=cmd_um_to_struct)
    u = usub.add_parser("to-um", parents=[common])
    u.add_argument("file")
    u.add_argument("--S", required=True, help="comma-separated distances, increasing")
    u.set_defaults(func=cmd_um_to_um)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ParseError, MalformedStructure, UsageError, ultra.UltraError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, EmbeddingError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except ResourceCapExceeded as exc:
        print(f"cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
