"""Command-line driver.  Weights are fundamental-weight coordinates, comma separated."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bar import bar_irrep, bar_tensor
from .cartan import PRESETS, CartanDatum, parse_datum
from .errors import QKMError
from .harness import InstanceSpec, load_specs, run_matrix
from .irrep import build_irrep
from .rmatrix import half_twist_r, oracle_r, theta_op
from .tensor import tensor_rep


class UsageError(Exception):
    pass


def _coords(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="qkm", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def datum_flags(p, weights: tuple[str, ...]):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--cartan", help="preset name or JSON Cartan matrix")
        g.add_argument("--cartan-matrix", help="JSON Cartan matrix, e.g. '[[2,-3],[-3,2]]'")
        for w in weights:
            p.add_argument(f"--{w}", type=_coords, required=w != "weight", dest=w.replace("-", "_"),
                           help="fundamental-weight coordinates")
        p.add_argument("--depth", type=int, help="retained height below the top; required off finite type")
        output_flags(p)

    def output_flags(p):
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--output", help="write to this path instead of stdout")

    datum_flags(sub.add_parser("build-rep", help="irreducible module: blocks and generator matrices"), ("lambda",))
    datum_flags(sub.add_parser("tensor", help="weight blocks of a tensor product"), ("lambda", "mu"))
    datum_flags(sub.add_parser("singulars", help="normalized singular vectors"), ("lambda", "mu", "weight"))
    p = sub.add_parser("bar", help="bar involution on V or V (x) W")
    datum_flags(p, ("lambda",))
    p.add_argument("--mu", type=_coords, help="second factor; omit for the irreducible bar")
    p = sub.add_parser("theta", help="Theta operator on V or V (x) W")
    datum_flags(p, ("lambda",))
    p.add_argument("--mu", type=_coords, help="second factor; omit for the irreducible Theta")
    p = sub.add_parser("rmatrix", help="R-matrix on V (x) W")
    datum_flags(p, ("lambda", "mu"))
    p.add_argument("--oracle", action="store_true", help="solve the intertwining equations instead")
    p = sub.add_parser("verify", help="run verification on one instance or a spec file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--cartan")
    g.add_argument("--cartan-matrix")
    p.add_argument("--spec", help="JSON array of instances")
    p.add_argument("--lambda", type=_coords, dest="lambda_")
    p.add_argument("--mu", type=_coords)
    p.add_argument("--third", type=_coords)
    p.add_argument("--depth", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--golden-dir", help="overrides QKM_GOLDEN_DIR")
    p.add_argument("--update-golden", action="store_true", help="write oracle goldens instead of comparing")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    output_flags(p)
    output_flags(sub.add_parser("presets", help="list named Cartan matrices"))
    return top


def _fix_lambda(args) -> None:
    # argparse cannot name a destination after a keyword
    if hasattr(args, "lambda"):
        args.lambda_ = getattr(args, "lambda")


def _datum(args) -> CartanDatum:
    text = args.cartan if args.cartan is not None else args.cartan_matrix
    if args.cartan_matrix is not None and not args.cartan_matrix.lstrip().startswith("["):
        raise UsageError("--cartan-matrix takes a JSON matrix")
    return parse_datum(text)


def _validate(cd: CartanDatum, args, names: tuple[str, ...]) -> None:
    if args.depth is None and not cd.finite_type:
        raise UsageError("--depth is required for data that are not of finite type")
    if args.depth is not None and args.depth < 0:
        raise UsageError("--depth must be nonnegative")
    for n in names:
        w = getattr(args, n, None)
        if w is None:
            continue
        if len(w) != cd.rank:
            raise UsageError(f"--{n.rstrip('_')} has {len(w)} coordinates; the datum has rank {cd.rank}")
        if n != "weight" and any(c < 0 for c in w):
            raise UsageError(f"--{n.rstrip('_')} must be dominant")


def _text_blocks(blocks: list[dict], key: str = "matrix") -> list[str]:
    out = []
    for b in blocks:
        out.append(f"block {tuple(b['weight'])}")
        rows = b[key]
        width = max((len(x) for r in rows for x in r), default=0)
        out.extend("  " + "  ".join(x.rjust(width) for x in r) for r in rows)
    return out


def _cmd_presets(args):
    data = {name: [list(r) for r in m] for name, m in PRESETS.items()}
    text = [f"{name}: {json.dumps(m)}" for name, m in data.items()]
    return data, text


def _cmd_build_rep(args, cd):
    V = build_irrep(cd, args.lambda_, args.depth)
    data = V.to_json()
    text = [f"weight {tuple(b['weight'])}: {b['dimension']}" for b in data["blocks"]]
    text.append(f"total {V.total_dimension()}" + ("" if V.is_complete() else " (truncated)"))
    return data, text


def _pair(cd, args):
    V = build_irrep(cd, args.lambda_, args.depth)
    W = build_irrep(cd, args.mu, args.depth)
    return V, W, tensor_rep(V, W)


def _cmd_tensor(args, cd):
    _, _, T = _pair(cd, args)
    data = T.to_json()
    text = []
    for b in data["blocks"]:
        parts = ", ".join(f"{tuple(p['left'])}x{tuple(p['right'])}" for p in b["pairs"])
        text.append(f"weight {tuple(b['weight'])}: {b['dimension']}  [{parts}]")
    return data, text


def _cmd_singulars(args, cd):
    _, _, T = _pair(cd, args)
    weights = [cd.weight(args.weight)] if args.weight is not None else T.weights()
    blocks = []
    for nu in weights:
        if not T.retained(nu) or T.dim(nu) == 0:
            continue
        s = T.singular_basis(nu)
        if s.size:
            blocks.append(s.to_json())
    text = []
    for b in blocks:
        text.append(f"weight {tuple(b['weight'])} ({b['normalized_by']})")
        text.extend("  [" + ", ".join(col) + "]" for col in b["columns"])
    return {"datum": cd.to_json(), "singular": blocks}, text


def _carrier_and_bar(cd, args):
    V = build_irrep(cd, args.lambda_, args.depth)
    if args.mu is None:
        return V, bar_irrep(V)
    W = build_irrep(cd, args.mu, args.depth)
    T = tensor_rep(V, W)
    return T, bar_tensor(T, bar_irrep(V), bar_irrep(W))


def _cmd_bar(args, cd):
    _, B = _carrier_and_bar(cd, args)
    data = B.to_json()
    return data, ["bar(v) = M conj(v)"] + _text_blocks(data["blocks"])


def _cmd_theta(args, cd):
    carrier, B = _carrier_and_bar(cd, args)
    data = theta_op(carrier, B).to_json()
    return data, ["Theta(v) = M conj(v)"] + _text_blocks(data["blocks"])


def _cmd_rmatrix(args, cd):
    V, W, T = _pair(cd, args)
    if args.oracle:
        R = oracle_r(T, tensor_rep(W, V))
    else:
        R = half_twist_r(T, bar_irrep(V), bar_irrep(W))
    data = R.to_json()
    return data, [f"provenance {data['provenance']}"] + _text_blocks(data["blocks"])


def _cmd_verify(args):
    if args.spec is not None:
        if args.cartan or args.cartan_matrix or args.lambda_ or args.mu:
            raise UsageError("--spec excludes instance flags")
        specs = load_specs(args.spec)
    else:
        if (args.cartan is None and args.cartan_matrix is None) or args.lambda_ is None or args.mu is None:
            raise UsageError("verify needs --spec or --cartan/--cartan-matrix with --lambda and --mu")
        cd = _datum(args)
        _validate(cd, args, ("lambda_", "mu", "third"))
        name = args.cartan if args.cartan is not None else args.cartan_matrix
        specs = [InstanceSpec(name, args.lambda_, args.mu, third=args.third, depth=args.depth)]
    report = run_matrix(specs, golden_root=args.golden_dir, jobs=args.jobs, write_golden=args.update_golden)
    if not args.timings:
        report = {k: v for k, v in report.items() if k != "timings"}
    text = []
    for inst in report["instances"]:
        fails = [r for r in inst["results"] if r["status"] == "fail"]
        skips = [r for r in inst["results"] if r["status"] == "skip"]
        text.append(f"{'PASS' if inst['ok'] else 'FAIL'} {inst['instance']}: "
                    f"{len(inst['results']) - len(fails) - len(skips)} passed, {len(fails)} failed, {len(skips)} skipped")
        text.extend(f"  {r['check']} {r['block']}: {r['witness']}" for r in fails)
    return report, text, report["ok"]


COMMANDS = {
    "build-rep": (_cmd_build_rep, ("lambda_",)),
    "tensor": (_cmd_tensor, ("lambda_", "mu")),
    "singulars": (_cmd_singulars, ("lambda_", "mu", "weight")),
    "bar": (_cmd_bar, ("lambda_", "mu")),
    "theta": (_cmd_theta, ("lambda_", "mu")),
    "rmatrix": (_cmd_rmatrix, ("lambda_", "mu")),
}


def _emit(args, data, text) -> None:
    body = json.dumps(data, indent=1, sort_keys=True) if args.format == "json" else "\n".join(text)
    body += "\n"
    if args.output:
        Path(args.output).write_text(body)
    else:
        sys.stdout.write(body)


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    _fix_lambda(args)
    ok = True
    try:
        if args.command == "presets":
            data, text = _cmd_presets(args)
        elif args.command == "verify":
            data, text, ok = _cmd_verify(args)
        else:
            fn, names = COMMANDS[args.command]
            cd = _datum(args)
            _validate(cd, args, names)
            data, text = fn(args, cd)
    except UsageError as exc:
        parser.error(str(exc))
    except QKMError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    _emit(args, data, text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
