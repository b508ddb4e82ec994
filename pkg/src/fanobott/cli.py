"""Command-line surface for batch classification and verification.

Exit codes: 0 for success or an affirmative answer, 1 for a negative
answer (rejected matrix, inequivalent inputs, failed certificate, oracle
disagreement), 2 for usage or input errors.  Matrix arguments accept a
file path or inline JSON (anything starting with "[" or "{").
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

from fanobott import fan, forest, ops
from fanobott.cohomology import enumerate_sve, peel_signature
from fanobott.matrix import (
    FanoBottError,
    FanoBottMatrix,
    InvalidMatrixError,
    count_matrices,
    enumerate_matrices,
    matrix_from_json,
)


def _compact(data: object) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def _load_json(arg: str) -> object:
    text = arg if arg.lstrip().startswith(("[", "{")) else Path(arg).read_text()
    return json.loads(text)


def _load_matrix(arg: str) -> FanoBottMatrix:
    return matrix_from_json(_load_json(arg))


def _load_forest(arg: str) -> forest.SignedRootedForest:
    data = _load_json(arg)
    if isinstance(data, dict) and "parents" in data:
        return forest.forest_from_json(data)
    return forest.from_matrix(matrix_from_json(data))


def _matrix_arg(args: argparse.Namespace) -> str:
    if getattr(args, "inline", None) is not None:
        return args.inline
    if args.file is None:
        raise ValueError("provide FILE or --inline")
    return args.file


def _code_worker(mode: str, m: FanoBottMatrix) -> str:
    return forest.canonical_code(forest.from_matrix(m), mode).code


def _codes(mats: list[FanoBottMatrix], mode: str, jobs: int) -> list[str]:
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(partial(_code_worker, mode), mats, chunksize=32))
    return [_code_worker(mode, m) for m in mats]


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        m = _load_matrix(_matrix_arg(args))
    except InvalidMatrixError as exc:
        print(_compact(exc.to_json()))
        return 1
    print(_compact({"dim": m.dim, "valid": True}))
    return 0


def _cmd_enumerate(args: argparse.Namespace) -> int:
    if args.count:
        print(count_matrices(args.dim))
        return 0
    for m in enumerate_matrices(args.dim):
        print(_compact(m.to_json()))
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    mats = list(enumerate_matrices(args.dim))
    codes = _codes(mats, args.mode, args.jobs)
    representatives: dict[str, FanoBottMatrix] = {}
    for m, code in zip(mats, codes):
        representatives.setdefault(code, m)
    print(_compact({"classes": len(representatives),
                    "dim": args.dim, "mode": args.mode}))
    for m in representatives.values():
        print(_compact(m.to_json()))
    return 0


def _cmd_canon(args: argparse.Namespace) -> int:
    t = _load_forest(_matrix_arg(args))
    print(forest.canonical_code(t, args.mode).code)
    return 0


def _cmd_equiv(args: argparse.Namespace) -> int:
    t1 = _load_forest(args.first)
    t2 = _load_forest(args.second)
    verdict = forest.equivalent(t1, t2, args.mode)
    print("true" if verdict else "false")
    return 0 if verdict else 1


def _cmd_witness(args: argparse.Namespace) -> int:
    a = _load_matrix(args.first)
    b = _load_matrix(args.second)
    sequence = ops.find_witness(a, b)
    if sequence is None:
        print(_compact({"equivalent": False}))
        return 1
    print(_compact(sequence.to_json()))
    return 0


def _cmd_certify(args: argparse.Namespace) -> int:
    a = _load_matrix(args.first)
    b = _load_matrix(args.second)
    witness = ops.witness_from_json(_load_json(args.witness))
    try:
        certificate = fan.certify_diffeo(a, b, witness)
    except fan.CertificateError as exc:
        print(_compact({"certified": False, "reason": str(exc)}))
        return 1
    print(_compact({"certified": True} | certificate.to_json()))
    return 0


def _cmd_sve(args: argparse.Namespace) -> int:
    m = _load_matrix(_matrix_arg(args))
    print(_compact(enumerate_sve(m).to_json()))
    return 0


def _cmd_peel(args: argparse.Namespace) -> int:
    m = _load_matrix(_matrix_arg(args))
    print(_compact(list(peel_signature(m))))
    return 0


def _cmd_forest_dot(args: argparse.Namespace) -> int:
    t = _load_forest(_matrix_arg(args))
    sys.stdout.write(forest.render_dot(t))
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    mats = list(enumerate_matrices(args.dim))
    codes = _codes(mats, forest.DIFFEO, args.jobs)
    by_code: dict[str, set[str]] = {}
    for m, code in zip(mats, codes):
        by_code.setdefault(code, set()).add(m.digest())
    code_partition = {frozenset(v) for v in by_code.values()}
    bfs_partition = {
        frozenset(m.digest() for m in cls)
        for cls in ops.bfs_closure_classes(args.dim)
    }
    agree = code_partition == bfs_partition
    print(_compact({
        "agree": agree,
        "bfs_classes": len(bfs_partition),
        "code_classes": len(code_partition),
        "dim": args.dim,
    }))
    return 0 if agree else 1


def _add_matrix_input(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("file", nargs="?", help="path or inline JSON")
    sub.add_argument("--inline", help="inline JSON entries, e.g. '[[0,1],[0,0]]'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fanobott",
        description="Classify Fano Bott towers through their matrices and forests.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("validate", help="check a matrix against the row templates")
    _add_matrix_input(sub)
    sub.set_defaults(func=_cmd_validate)

    sub = subs.add_parser("enumerate", help="stream every admissible matrix")
    sub.add_argument("-d", "--dim", type=int, required=True)
    sub.add_argument("--count", action="store_true", help="print only the count")
    sub.set_defaults(func=_cmd_enumerate)

    sub = subs.add_parser("classify", help="count canonical classes with representatives")
    sub.add_argument("-d", "--dim", type=int, required=True)
    sub.add_argument("--mode", choices=forest.MODES, required=True)
    sub.add_argument("--jobs", type=int, default=1)
    sub.set_defaults(func=_cmd_classify)

    sub = subs.add_parser("canon", help="canonical code of one matrix or forest")
    _add_matrix_input(sub)
    sub.add_argument("--mode", choices=forest.MODES, required=True)
    sub.set_defaults(func=_cmd_canon)

    sub = subs.add_parser("equiv", help="decide equivalence of two inputs")
    sub.add_argument("first")
    sub.add_argument("second")
    sub.add_argument("--mode", choices=forest.MODES, required=True)
    sub.set_defaults(func=_cmd_equiv)

    sub = subs.add_parser("witness", help="construct a replayable move sequence")
    sub.add_argument("first")
    sub.add_argument("second")
    sub.set_defaults(func=_cmd_witness)

    sub = subs.add_parser("certify", help="verify a witness end to end")
    sub.add_argument("first")
    sub.add_argument("second")
    sub.add_argument("witness", help="witness JSON (path or inline)")
    sub.set_defaults(func=_cmd_certify)

    sub = subs.add_parser("sve", help="square-vanishing element inventory")
    _add_matrix_input(sub)
    sub.set_defaults(func=_cmd_sve)

    sub = subs.add_parser("peel", help="leaf counts under repeated leaf cutting")
    _add_matrix_input(sub)
    sub.set_defaults(func=_cmd_peel)

    sub = subs.add_parser("forest-dot", help="DOT rendering of the forest")
    _add_matrix_input(sub)
    sub.set_defaults(func=_cmd_forest_dot)

    sub = subs.add_parser("oracle", help="cross-check move reachability against codes")
    sub.add_argument("-d", "--dim", type=int, required=True)
    sub.add_argument("--jobs", type=int, default=1)
    sub.set_defaults(func=_cmd_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FanoBottError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
