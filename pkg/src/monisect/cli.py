"""Command-line interface.  Every command prints one JSON document.

Exit status: 0 on success, 1 on a domain error (budget exceeded, monoid not in
DO, ...), 2 on malformed input.  Errors are printed as
``{"error": code, "detail": message}``.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import generate, io
from .compress import DEFAULT_SIFT_BUDGET, compress_witness
from .models import DEFAULT_CLOSURE_CAP, ModelError
from .monoid import DEFAULT_DIVIDES_CAP, MonoidError, NotAssociative
from .reductions import (ReductionError, corridor_tiling_to_instance, instance_to_dfas,
                         instance_to_membership, square_tiling_to_instance)
from .slp import SLPError
from .solver import DEFAULT_STATE_BUDGET, InstanceError, member_slp, nonempty_bfs
from .tiling import TilingError, check_tiling, solve_corridor, solve_square
from .varieties import classify

MALFORMED = (io.MalformedInput, MonoidError, SLPError, InstanceError, TilingError, ModelError,
             KeyError, IndexError, OSError)


class UsageError(Exception):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load(path: str):
    if path == "-":
        try:
            return json.load(sys.stdin), None
        except json.JSONDecodeError as exc:
            raise io.MalformedInput(f"stdin: invalid JSON ({exc.msg})") from None
    return io.read_json(path), Path(path).parent


def _instance(path):
    data, base = _load(path)
    return io.instance_from_json(data, base)


def _word(arg: str):
    p = Path(arg)
    if p.is_file():
        return io.word_from_json(io.read_json(p))
    if arg.startswith("["):
        try:
            return io.word_from_json(json.loads(arg))
        except json.JSONDecodeError:
            raise io.MalformedInput("word is not valid JSON") from None
    return io.word_from_json(arg)


def _witness(w):
    return None if w is None else list(w)


# -- commands ----------------------------------------------------------------------


def cmd_classify(a):
    data, base = _load(a.file)
    M = io.monoid_from_json(data, base)
    R = classify(M, char4=a.char4, divides_cap=a.divides_cap)
    out = io.variety_report_to_json(M, R)
    width = max(len(k) for k in out if k != "witnesses")
    lines = [f"{k:<{width}}  {'yes' if v else 'no'}" for k, v in out.items() if k != "witnesses"]
    print("\n".join(lines), file=sys.stderr)
    return out


def cmd_solve(a):
    I = _instance(a.file)
    r = nonempty_bfs(I, budget=a.budget_states)
    return {"nonempty": r.nonempty, "witness": _witness(r.witness), "states_explored": r.states_explored}


def cmd_compress(a):
    I = _instance(a.file)
    w = _word(a.word)
    S = compress_witness(I, w, lcm_omega=a.lcm_omega, budget=a.budget_sift)
    images = [r.monoid.elements[S.eval_morphism(r.morphism)] for r in I.recognizers]
    return {
        "slp": io.slp_to_json(S),
        "report": {"original_length": len(w), "slp_size": S.size, "images": images},
    }


def cmd_verify(a):
    I = _instance(a.file)
    data, _ = _load(a.slp)
    # accept the output of `compress` as well as a bare SLP
    if isinstance(data, dict) and "slp" in data and "rules" not in data:
        data = data["slp"]
    S = io.slp_from_json(data)
    images = [r.monoid.elements[S.eval_morphism(r.morphism)] for r in I.recognizers]
    return {"member": member_slp(I, S), "images": images}


def cmd_reduce(a):
    if a.kind in ("to-dfa", "to-transmon"):
        I = _instance(a.file)
        if a.kind == "to-dfa":
            return {"dfas": [io.dfa_to_json(D) for D in instance_to_dfas(I)]}
        return io.membership_to_json(*instance_to_membership(I))
    data, _ = _load(a.file)
    T = io.tiling_system_from_json(data)
    if a.kind == "from-square-tiling":
        if a.monoid is not None:
            mdata, mbase = _load(a.monoid)
            M = io.monoid_from_json(mdata, mbase)
            if a.x is None:
                raise UsageError("--x is required with --monoid")
            I = square_tiling_to_instance(T, M, a.x)
        else:
            I = square_tiling_to_instance(T)
    else:
        I = corridor_tiling_to_instance(T)
    return io.instance_to_json(I)


def cmd_gen(a):
    s = a.seed
    if a.kind == "monoid":
        return io.monoid_to_json(generate.random_monoid(s, states=a.states, alphabet=a.alphabet, flt=a.filter,
                                                           cap=a.budget_closure))
    if a.kind == "instance":
        I = generate.random_instance(s, k=a.k, alphabet=a.alphabet, flt=a.filter, singleton=a.singleton)
        return io.instance_to_json(I)
    if a.kind == "tiling":
        return io.tiling_system_to_json(generate.random_tiling_system(s, n=a.n, labels=a.labels, tiles=a.tiles))
    if a.kind == "group-tuple":
        hs = generate.random_group_tuple(s, k=a.k, alphabet=a.alphabet)
        return {"morphisms": [io.morphism_to_json(h) for h in hs]}
    return io.slp_to_json(generate.random_slp(s, alphabet=a.alphabet))


def cmd_check_tiling(a):
    T = io.tiling_system_from_json(_load(a.system)[0])
    t = io.tiling_from_json(_load(a.tiling)[0])
    v = check_tiling(T, t)
    return {"valid": v is None, "violation": None if v is None else {"condition": v.condition, "i": v.i, "j": v.j}}


def cmd_solve_tiling(a):
    T = io.tiling_system_from_json(_load(a.file)[0])
    if a.kind == "square":
        t = solve_square(T, budget=a.budget_states)
        rows = None if t is None else t.rows
    else:
        found = solve_corridor(T)
        rows, t = (None, None) if found is None else found
    return {"solvable": t is not None, "rows": rows, "tiling": None if t is None else io.tiling_to_json(t)["grid"]}


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write the JSON result to this file instead of stdout")
    common.add_argument("--budget-states", type=int, default=DEFAULT_STATE_BUDGET,
                        help=f"search state budget (default {DEFAULT_STATE_BUDGET})")
    common.add_argument("--budget-closure", type=int, default=DEFAULT_CLOSURE_CAP,
                        help=f"closure size cap (default {DEFAULT_CLOSURE_CAP})")
    common.add_argument("--budget-sift", type=int, default=DEFAULT_SIFT_BUDGET,
                        help=f"sift-call budget while building group tables (default {DEFAULT_SIFT_BUDGET})")
    common.add_argument("--divides-cap", type=int, default=DEFAULT_DIVIDES_CAP,
                        help=f"size cap for divisibility checks (default {DEFAULT_DIVIDES_CAP})")

    p = _Parser(prog="monisect", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", parents=[common], help="variety membership of a monoid")
    c.add_argument("file")
    c.add_argument("--char4", action="store_true", help="also test the divisor characterization")
    c.set_defaults(run=cmd_classify)

    c = sub.add_parser("solve", parents=[common], help="intersection non-emptiness")
    c.add_argument("file")
    c.set_defaults(run=cmd_solve)

    c = sub.add_parser("compress", parents=[common], help="compress a witness word into an SLP")
    c.add_argument("file")
    c.add_argument("word", help="word file (JSON list or string), JSON list, or literal string")
    c.add_argument("--lcm-omega", action="store_true", help="use the lcm of element periods as omega")
    c.set_defaults(run=cmd_compress)

    c = sub.add_parser("verify", parents=[common], help="check an SLP against an instance")
    c.add_argument("file")
    c.add_argument("slp")
    c.set_defaults(run=cmd_verify)

    c = sub.add_parser("reduce", parents=[common], help="run one of the reductions")
    c.add_argument("kind", choices=["to-dfa", "to-transmon", "from-square-tiling", "from-corridor-tiling"])
    c.add_argument("file")
    c.add_argument("--monoid", help="monoid JSON for the square reduction (default U1)")
    c.add_argument("--x", help="non-identity element of --monoid")
    c.set_defaults(run=cmd_reduce)

    c = sub.add_parser("gen", parents=[common], help="seeded random objects")
    c.add_argument("kind", choices=["monoid", "instance", "tiling", "group-tuple", "slp"])
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--filter", choices=generate.VARIETY_FILTERS)
    c.add_argument("--states", type=int, default=3)
    c.add_argument("--alphabet", type=int, default=2)
    c.add_argument("--k", type=int, default=2)
    c.add_argument("--singleton", action="store_true")
    c.add_argument("--n", type=int, default=2)
    c.add_argument("--labels", type=int, default=2)
    c.add_argument("--tiles", type=int, default=3)
    c.set_defaults(run=cmd_gen)

    c = sub.add_parser("check-tiling", parents=[common], help="validate a tiling")
    c.add_argument("system")
    c.add_argument("tiling")
    c.set_defaults(run=cmd_check_tiling)

    c = sub.add_parser("solve-tiling", parents=[common], help="brute-force tiling solvers")
    c.add_argument("file")
    c.add_argument("--kind", choices=["square", "corridor"], default="square")
    c.set_defaults(run=cmd_solve_tiling)
    return p


def _error(code: str, detail: str, **extra) -> dict:
    return {"error": code, "detail": detail, **extra}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        result = args.run(args)
    except UsageError as exc:
        out, status = _error("usage", str(exc)), 2
    except NotAssociative as exc:
        out, status = _error(exc.code, str(exc), triple=list(exc.triple)), 2
    except MALFORMED as exc:
        detail = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        out, status = _error(getattr(exc, "code", "malformed_input"), str(detail)), 2
    except (ReductionError, generate.GenerationError, RuntimeError, ValueError, AssertionError) as exc:
        out, status = _error(getattr(exc, "code", type(exc).__name__), str(exc)), 1
    else:
        if args.out:
            Path(args.out).write_text(io.dumps(result), encoding="utf-8")
            return 0
        out, status = result, 0
    sys.stdout.write(io.dumps(out))
    return status


if __name__ == "__main__":
    sys.exit(main())
