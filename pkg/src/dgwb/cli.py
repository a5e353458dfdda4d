"""Command-line front end.

``dgwb verify`` runs the check suite; the other subcommands evaluate one
construction on an instance read from a JSON file and print JSON.

Instance files
    rgamma, llambda, injdim, flatdim: ``{"module": <DG-module>, "ideal": [...]}``
        (a serialised zoo instance works as is). ``injdim``/``flatdim``/
        ``projdim`` also accept a bare complex (``{"ranks": ...}``) or module
        presentation (``{"generators": ...}``) over an ordinary ring.
    ext, tor: ``{"N": X, "M": Y, "window": [lo, hi]}`` with ``X``, ``Y`` complexes
        or presentations, or ``{"module": <DG-module>, "target": c, "window": ...}``
        for ``Ext_A(Ā/(c), M)`` / ``Tor^A(Ā/(c), M)``.
    snf: a matrix ``{"ring", "rows", "cols", "entries"}`` over a Euclidean domain.

Exit status: 0 success, 1 some check failed, 2 I/O error, 3 invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import dimensions as dims
from .complexes import FreeComplex, cohomology
from .dg import SemiFreeDGModule
from .errors import InvalidInput, ResourceLimit, UnsupportedInstance
from .matrix import Matrix
from .modules import ModulePresentation
from .snf import smith_normal_form
from .suite import SuiteConfig, run_suite
from .telescope import llambda, llambda_mod_power, llambda_stabilized, rgamma, rgamma_stabilized
from .zoo import Budgets

EXIT_OK, EXIT_FAIL, EXIT_IO, EXIT_INPUT = 0, 1, 2, 3


def _ordinary(data):
    if "ranks" in data:
        return FreeComplex.from_json(data)
    if "generators" in data:
        return ModulePresentation.from_json(data)
    raise InvalidInput("expected a complex ({'ranks': ...}) or a presentation ({'generators': ...})")


def _dg_module(data) -> SemiFreeDGModule:
    if "module" not in data:
        raise InvalidInput("expected a 'module' entry holding a semi-free DG-module")
    return SemiFreeDGModule.from_json(data["module"])


def _lifts(M: SemiFreeDGModule, data) -> tuple:
    if "ideal" not in data:
        raise InvalidInput("expected an 'ideal' entry (list of generators)")
    return tuple(M.ring.base.elem_from_json(x) for x in data["ideal"])


def _window(data) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in data["window"])
    except (KeyError, TypeError, ValueError):
        raise InvalidInput("expected 'window': [lo, hi]") from None
    return lo, hi


def cmd_verify(args) -> tuple[dict | None, int]:
    base = Budgets()
    budgets = Budgets(
        base.max_cells, base.max_span, base.max_koszul,
        cutoff=args.cutoff, stab_cutoff=base.stab_cutoff, precision=args.precision,
    )
    result = run_suite(SuiteConfig(seed=args.seed, count=args.count, budgets=budgets, jobs=args.jobs))
    print(result.describe(), file=sys.stderr if args.json == "-" else sys.stdout)
    if args.json:
        text = result.dumps()
        if args.json == "-":
            sys.stdout.write(text)
        else:
            with open(args.json, "w") as fh:
                fh.write(text)
    return None, EXIT_FAIL if result.failed else EXIT_OK


def cmd_rgamma(args, data):
    M = _dg_module(data)
    lifts = _lifts(M, data)
    if args.order is not None:
        return {"order": args.order, "table": cohomology(rgamma(M.ring, lifts, M, args.order)).to_json()}
    return rgamma_stabilized(M.ring, lifts, M, args.cutoff).to_json()


def cmd_llambda(args, data):
    M = _dg_module(data)
    lifts = _lifts(M, data)
    if args.precision is not None:
        res = llambda_mod_power(M.ring, lifts, M, args.precision)
        return {"precision": res.precision, "order": res.order, "table": res.table.to_json(), **res.status.to_json()}
    if args.order is not None:
        return {"order": args.order, "table": cohomology(llambda(M.ring, lifts, M, args.order)).to_json()}
    return llambda_stabilized(M.ring, lifts, M, args.cutoff).to_json()


def _dimension(kind):
    def run(args, data):
        if "module" in data:
            M = _dg_module(data)
            if kind == "projdim":
                raise InvalidInput("projdim is only available over ordinary rings")
            fn = dims.injdim_dg if kind == "injdim" else dims.flatdim_dg
            return fn(M.ring, M, args.cutoff).to_json()
        fn = {"injdim": dims.injdim_ring, "flatdim": dims.flatdim_ring, "projdim": dims.projdim_ring}[kind]
        return fn(_ordinary(data), args.cutoff).to_json()
    return run


def _derived(kind):
    def run(args, data):
        window = _window(data)
        if "module" in data:
            M = _dg_module(data)
            c = M.ring.base.elem_from_json(data.get("target", "0"))
            fn = dims.ext_dg if kind == "ext" else dims.tor_dg
            table, floor = fn(M.ring, c, M, window)
            return {"window": list(window), "floor": floor, "table": table.to_json()}
        if "N" not in data or "M" not in data:
            raise InvalidInput("expected 'N' and 'M' entries")
        fn = dims.ext_table if kind == "ext" else dims.tor_table
        return {"window": list(window), "table": fn(_ordinary(data["N"]), _ordinary(data["M"]), window).to_json()}
    return run


def cmd_snf(args, data):
    res = smith_normal_form(Matrix.from_json(data))
    R = res.D.ring
    return {
        "U": res.U.to_json(),
        "D": res.D.to_json(),
        "V": res.V.to_json(),
        "invariant_factors": [R.elem_to_json(x) for x in res.invariant_factors],
    }


FILE_COMMANDS = {
    "rgamma": cmd_rgamma,
    "llambda": cmd_llambda,
    "injdim": _dimension("injdim"),
    "flatdim": _dimension("flatdim"),
    "projdim": _dimension("projdim"),
    "ext": _derived("ext"),
    "tor": _derived("tor"),
    "snf": cmd_snf,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dgwb", description="Derived torsion/completion workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the check suite over a generated zoo")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--count", type=int, default=SuiteConfig.count)
    v.add_argument("--cutoff", type=int, default=Budgets.cutoff)
    v.add_argument("--precision", type=int, default=Budgets.precision)
    v.add_argument("--jobs", type=int, default=1, help="worker processes")
    v.add_argument("--json", metavar="OUT", help="write the JSON report here ('-' for stdout)")

    for name in FILE_COMMANDS:
        p = sub.add_parser(name, help=f"evaluate {name} on an instance file")
        p.add_argument("file", metavar="FILE", help="JSON instance ('-' for stdin)")
        p.add_argument("--cutoff", type=int, default=Budgets.cutoff if name in ("injdim", "flatdim", "projdim") else Budgets.stab_cutoff)
        if name in ("rgamma", "llambda"):
            p.add_argument("--order", type=int, help="evaluate at this telescope order instead of stabilising")
        if name == "llambda":
            p.add_argument("--precision", type=int, help="reduce modulo a^K for this K")
        p.add_argument("--json", metavar="OUT", help="write the result here instead of stdout")
    return parser


def _read(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)[1]
        data = _read(args.file)
        out = FILE_COMMANDS[args.command](args, data)
        text = json.dumps(out, sort_keys=True, indent=1) + "\n"
        if args.json:
            with open(args.json, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    except OSError as exc:
        print(f"dgwb: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (InvalidInput, UnsupportedInstance, ResourceLimit, ValueError, KeyError, TypeError) as exc:
        # json.JSONDecodeError is a ValueError
        print(f"dgwb: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
