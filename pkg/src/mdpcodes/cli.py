"""Command-line front end: ``mdpcodes {check,distances,search,realize,convert,sweep}``.

Exit codes: 0 success or affirmative verdict, 1 negative verdict, 2 input
error, 3 budget exceeded, 4 search found nothing, 5 realization failure,
6 conversion precondition failed.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from . import __version__
from .distance import DEFAULT_ENCODING_BUDGET, code_indices, column_distances, verdict_report
from .errors import BudgetExceeded, ExtensionFailed, MDPError, NotControllable, NotFound, NotObservable, RankDeficient
from .gf import GF
from .io import (
    dumps,
    field_to_json,
    poly_to_json,
    read_markov,
    read_system,
    system_to_json,
)
from .minors import DEFAULT_MINOR_BUDGET
from .poly import generator_matrix, parity_check_matrix, poly_rank
from .realization import SearchConfig, field_size_sweep, minimal_partial_realization, search_mdp_code
from .state_space import CodeParams, markov_parameters

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_NOT_FOUND = 4
EXIT_REALIZATION = 5
EXIT_CONVERSION = 6

# argument keys that say where output goes rather than what is computed
_NOT_IN_MANIFEST = {"out", "func", "command"}


@dataclass
class RunManifest:
    command: str
    arguments: dict
    seed: int
    tool_version: str = __version__
    elapsed_ms: int = 0
    _t0: float = dc_field(default_factory=time.perf_counter, repr=False)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunManifest:
        arguments = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_IN_MANIFEST}
        return cls(args.command, arguments, args.seed)

    def stop(self):
        self.elapsed_ms = int((time.perf_counter() - self._t0) * 1000)

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "command": self.command,
            "arguments": self.arguments,
            "seed": self.seed,
            "tool_version": self.tool_version,
        }
        if timing:
            out["elapsed_ms"] = self.elapsed_ms
        return out


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands -------------------------------------------------------------------------


def cmd_check(args, manifest: RunManifest) -> int:
    code = read_system(args.input)
    report = verdict_report(
        code,
        brute=args.brute,
        strong=args.strong,
        mds=args.mds,
        minor_budget=args.budget_minors,
        encoding_budget=args.budget_encodings,
    )
    manifest.stop()
    report["manifest"] = manifest.to_json()
    _emit(dumps(report), args.out)
    return EXIT_OK if report["mdp"] else EXIT_NEGATIVE


def cmd_distances(args, manifest: RunManifest) -> int:
    code = read_system(args.input)
    J = code_indices(code.params).L if args.max_j is None else args.max_j
    profile = column_distances(code, J, args.budget_encodings)
    manifest.stop()
    _emit(profile.to_csv(), args.out)
    if args.out:
        Path(args.out + ".manifest.json").write_text(dumps(manifest.to_json()))
    return EXIT_OK


def _search_report_json(report, manifest: RunManifest) -> dict:
    return {
        "params": report.params.as_dict(),
        "field": field_to_json(report.field),
        "strategy": report.strategy,
        "attempts": report.attempts,
        "found": report.found,
        "certified_nonexistent": report.certified_nonexistent,
        "system": system_to_json(report.system) if report.system is not None else None,
        "elapsed_ms": report.elapsed_ms,
        "seed": report.seed,
        "route": report.route,
        "controllable": report.controllable,
        "observable": report.observable,
        "padded": report.padded,
        "notes": report.notes,
        "manifest": manifest.to_json(),
    }


def cmd_search(args, manifest: RunManifest) -> int:
    params = CodeParams(args.n, args.k, args.delta)
    cfg = SearchConfig(
        GF(args.q),
        max_attempts=args.attempts,
        seed=args.seed,
        strategy="exhaustive" if args.exhaustive else "random",
        minor_budget=args.budget_minors,
        exhaustive_ceiling=args.ceiling,
    )
    report = search_mdp_code(params, cfg)
    manifest.stop()
    out = _search_report_json(report, manifest)
    if args.out and report.found:
        code = system_to_json(report.system)
        code["manifest"] = manifest.to_json(timing=False)
        Path(args.out).write_text(dumps(code))
    sys.stdout.write(dumps(out))
    if not report.found:
        what = "certified nonexistent" if report.certified_nonexistent else "not found"
        print(f"search: {what} after {report.attempts} attempts", file=sys.stderr)
        return EXIT_NOT_FOUND
    return EXIT_OK


def cmd_realize(args, manifest: RunManifest) -> int:
    ms = read_markov(args.input)
    res = minimal_partial_realization(ms)
    got = markov_parameters(res.system, ms.j)
    code = system_to_json(res.system)
    code["verification"] = {
        "degree": res.degree,
        "reproduced": [got.blocks[i] == ms.blocks[i] for i in range(ms.j + 1)],
    }
    code["manifest"] = manifest.to_json(timing=False)
    _emit(dumps(code), args.out)
    return EXIT_OK


def cmd_convert(args, manifest: RunManifest) -> int:
    code = read_system(args.input)
    G = generator_matrix(code)
    H = parity_check_matrix(code, G)
    P = G if args.to == "generator" else H
    out = {
        "field": field_to_json(code.field),
        "kind": args.to,
        "matrix": poly_to_json(P),
        "display": P.to_string(),
        "verification": {
            "HG_zero": (H @ G).is_zero(),
            "rank_G": poly_rank(G),
            "rank_H": poly_rank(H),
        },
    }
    manifest.stop()
    out["manifest"] = manifest.to_json(timing=False)
    _emit(dumps(out), args.out)
    return EXIT_OK


def _q_list(values) -> list[int]:
    qs = []
    for v in values:
        qs.extend(int(x) for x in str(v).split(",") if x.strip())
    return qs


def cmd_sweep(args, manifest: RunManifest) -> int:
    params = CodeParams(args.n, args.k, args.delta)
    qs = _q_list(args.q_list)
    cfg = SearchConfig(
        GF(qs[0]) if qs else GF(2),
        max_attempts=args.attempts,
        seed=args.seed,
        minor_budget=args.budget_minors,
        exhaustive_ceiling=args.ceiling,
    )
    report = field_size_sweep(params, qs, cfg, jobs=args.jobs)
    manifest.stop()
    report["manifest"] = manifest.to_json()
    _emit(dumps(report), args.out)
    return EXIT_OK


# -- parser --------------------------------------------------------------------------------


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes (results do not depend on it)")
    common.add_argument("--budget-encodings", type=_positive, default=DEFAULT_ENCODING_BUDGET)
    common.add_argument("--budget-minors", type=_positive, default=DEFAULT_MINOR_BUDGET)
    common.add_argument("--out", default=None, help="output file (default stdout)")

    parser = argparse.ArgumentParser(prog="mdpcodes", description="MDP convolutional codes over finite fields")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="decide the MDP property of a code file")
    p.add_argument("input")
    p.add_argument("--brute", action="store_true", help="also decide MDP by enumerating trajectories")
    p.add_argument("--strong", action="store_true", help="also decide strongly MDS")
    p.add_argument("--mds", action="store_true", help="also decide MDS via the free distance")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("distances", parents=[common], help="column distance profile as CSV")
    p.add_argument("input")
    p.add_argument("--max-j", type=_nonneg, default=None, help="last level (default L)")
    p.set_defaults(func=cmd_distances)

    def code_shape(p):
        p.add_argument("--n", type=_positive, required=True)
        p.add_argument("--k", type=_positive, required=True)
        p.add_argument("--delta", type=_nonneg, required=True)
        p.add_argument("--attempts", type=_positive, default=1000)
        p.add_argument("--ceiling", type=_positive, default=2**24, help="largest exhaustive candidate count")

    p = sub.add_parser("search", parents=[common], help="search for an MDP code")
    code_shape(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("realize", parents=[common], help="minimal realization of a Markov sequence file")
    p.add_argument("input")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("convert", parents=[common], help="polynomial generator or parity-check matrix")
    p.add_argument("input")
    p.add_argument("--to", choices=("generator", "parity"), required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("sweep", parents=[common], help="search over several field sizes")
    code_shape(p)
    p.add_argument("--q-list", nargs="*", default=[], help="field orders, space or comma separated")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    manifest = RunManifest.from_args(args)
    try:
        return args.func(args, manifest)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except NotFound as exc:
        print(f"not found: {exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except ExtensionFailed as exc:
        print(f"realization failed: {exc}", file=sys.stderr)
        return EXIT_REALIZATION
    except (NotControllable, NotObservable, RankDeficient) as exc:
        print(f"conversion precondition failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONVERSION
    except (MDPError, ValueError) as exc:
        where = getattr(exc, "field", None)
        prefix = f"{where}: " if where and not str(exc).startswith(str(where)) else ""
        print(f"input error: {prefix}{exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
