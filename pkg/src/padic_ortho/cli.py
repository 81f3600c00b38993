"""Command-line front end: instance I/O, command dispatch, reporting.

Exit codes: 0 success, 2 malformed input or parameters, 3 resource
exhausted (level cap), 4 internal verification failure (an oracle
disagreed with a production algorithm, which is always a bug).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

from . import acceptance, serialize
from .errors import (
    InvalidParameters,
    PadicOrthoError,
    ResourceExhausted,
)
from .lattices import (
    DEFAULT_MAX_LEVEL,
    PAdicLattice,
    SearchStats,
    coset_norm_values,
    solve_cvp,
    solve_lvp,
)
from .linalg import valuation, coordinates_in_span
from .norms import NormPair, format_exponent, lattice_induced_norm
from .oracle import (
    Instance,
    check_orthogonal_determinant,
    exhaustive_cvp,
    generate_instances,
)
from .ortho import (
    check_orthogonal_sampled,
    orthogonalize,
    orthogonalize_rank2_lattice,
    orthogonalize_simultaneous,
)

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_RESOURCE = 3
EXIT_VERIFY = 4


def _emit(report: dict, out: Optional[str]) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _report_skeleton(args, instance: Optional[Instance]) -> dict:
    report = {
        "format": serialize.REPORT_FORMAT,
        "command": list(getattr(args, "_argv", [])),
        "outputs": {},
    }
    if instance is not None:
        report["inputs_digest"] = serialize.instance_digest(instance)
    return report


def _load_instance(args) -> Instance:
    instances = serialize.load_instances(args.instance)
    return serialize.pick_instance(instances, args.index)


def _stats_obj(stats: SearchStats) -> dict:
    return {
        "nodes_explored": stats.nodes_explored,
        "norm_evaluations": stats.norm_evaluations,
        "terminal_level": stats.terminal_level,
        "solver_calls": stats.calls,
    }


def _vectors_obj(vectors) -> list:
    return [serialize.vector_to_obj(v) for v in vectors]


def _exponents_obj(exponents, p: int) -> list:
    return [format_exponent(w, p) for w in exponents]


def cmd_gen(args) -> int:
    instances = generate_instances(
        args.seed,
        args.p,
        args.n,
        weight_denominator=args.weight_denominator,
        entry_bound=args.entry_bound,
        count=args.count,
        rank=args.rank,
        second_norm=args.second_norm,
    )
    payload = serialize.canonical_dumps(serialize.corpus_to_obj(instances))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def cmd_orthogonalize(args) -> int:
    instance = _load_instance(args)
    started = time.perf_counter()
    report = _report_skeleton(args, instance)
    result = orthogonalize(instance.norm, instance.basis, max_level=args.max_level)
    report["outputs"] = {
        "vectors": _vectors_obj(result.vectors),
        "exponents": _exponents_obj(result.exponents[0], instance.p),
        "change_of_basis": serialize.matrix_to_obj(result.change_of_basis),
    }
    if args.stats:
        report["stats"] = _stats_obj(result.stats)
    code = EXIT_OK
    if args.verify:
        ok_det = check_orthogonal_determinant(instance.norm, result.vectors)
        ok_sampled, witness = check_orthogonal_sampled(
            instance.norm, result.vectors, trials=args.trials, depth=args.depth
        )
        report["oracle"] = {"determinant": ok_det, "sampled": ok_sampled}
        if witness is not None:
            report["oracle"]["witness"] = serialize.vector_to_obj(
                witness.coefficients
            )
        if not (ok_det and ok_sampled):
            code = EXIT_VERIFY
    report["wall_time_s"] = round(time.perf_counter() - started, 6)
    _emit(report, args.out)
    return code


def cmd_orthogonalize2(args) -> int:
    instance = _load_instance(args)
    if instance.norm2 is None:
        raise InvalidParameters("instance has no second norm (run gen --second-norm)")
    started = time.perf_counter()
    report = _report_skeleton(args, instance)
    pair = NormPair(instance.norm, instance.norm2)
    result = orthogonalize_simultaneous(pair, instance.basis, max_level=args.max_level)
    report["outputs"] = {
        "vectors": _vectors_obj(result.vectors),
        "exponents_first": _exponents_obj(result.exponents[0], instance.p),
        "exponents_second": _exponents_obj(result.exponents[1], instance.p),
        "change_of_basis": serialize.matrix_to_obj(result.change_of_basis),
    }
    if args.stats:
        report["stats"] = _stats_obj(result.stats)
    code = EXIT_OK
    if args.verify:
        ok1 = check_orthogonal_determinant(instance.norm, result.vectors)
        ok2 = check_orthogonal_determinant(instance.norm2, result.vectors)
        report["oracle"] = {"determinant_first": ok1, "determinant_second": ok2}
        if not (ok1 and ok2):
            code = EXIT_VERIFY
    report["wall_time_s"] = round(time.perf_counter() - started, 6)
    _emit(report, args.out)
    return code


def cmd_rank2(args) -> int:
    instance = _load_instance(args)
    if len(instance.basis) < 2:
        raise InvalidParameters("rank2 needs at least two basis vectors")
    alpha, beta = instance.basis[0], instance.basis[1]
    started = time.perf_counter()
    report = _report_skeleton(args, instance)
    stats = SearchStats()
    a2, b2 = orthogonalize_rank2_lattice(
        instance.norm, alpha, beta, max_level=args.max_level, stats=stats
    )
    report["outputs"] = {
        "alpha": serialize.vector_to_obj(a2),
        "beta": serialize.vector_to_obj(b2),
        "exponents": _exponents_obj(
            [instance.norm.exponent(a2), instance.norm.exponent(b2)], instance.p
        ),
    }
    if args.stats:
        report["stats"] = _stats_obj(stats)
    code = EXIT_OK
    if args.verify:
        ca = coordinates_in_span((alpha, beta), a2)
        cb = coordinates_in_span((alpha, beta), b2)
        unimodular = (
            ca is not None
            and cb is not None
            and all(valuation(c, instance.p) >= 0 for c in ca + cb)
            and valuation(ca[0] * cb[1] - ca[1] * cb[0], instance.p) == 0
        )
        ok_det = check_orthogonal_determinant(instance.norm, (a2, b2))
        report["oracle"] = {"unimodular": unimodular, "determinant": ok_det}
        if not (unimodular and ok_det):
            code = EXIT_VERIFY
    report["wall_time_s"] = round(time.perf_counter() - started, 6)
    _emit(report, args.out)
    return code


def _lattice_and_target(instance: Instance):
    if instance.target is not None:
        lattice = PAdicLattice(p=instance.p, basis=instance.basis)
        return lattice, instance.target
    if len(instance.basis) < 2:
        raise InvalidParameters(
            "need an explicit target or at least two basis vectors"
        )
    return (
        PAdicLattice(p=instance.p, basis=instance.basis[:-1]),
        instance.basis[-1],
    )


def cmd_cvp(args) -> int:
    instance = _load_instance(args)
    lattice, target = _lattice_and_target(instance)
    started = time.perf_counter()
    report = _report_skeleton(args, instance)
    result = solve_cvp(instance.norm, lattice, target, max_level=args.max_level)
    report["outputs"] = {
        "w0": serialize.vector_to_obj(result.w0),
        "coefficients": list(result.coefficients),
        "level": result.level,
        "distance": format_exponent(result.distance, instance.p),
    }
    if args.stats:
        report["stats"] = {
            "nodes_explored": result.nodes_explored,
            "norm_evaluations": result.norm_evaluations,
            "terminal_level": result.level,
        }
    code = EXIT_OK
    if args.verify:
        oracle = exhaustive_cvp(instance.norm, lattice, target, max_level=args.max_level)
        agree = (
            oracle.distance == result.distance
            and oracle.w0 == result.w0
            and oracle.coefficients == result.coefficients
        )
        report["oracle"] = {
            "agrees": agree,
            "oracle_nodes_explored": oracle.nodes_explored,
        }
        if not agree:
            code = EXIT_VERIFY
    report["wall_time_s"] = round(time.perf_counter() - started, 6)
    _emit(report, args.out)
    return code


def cmd_lvp(args) -> int:
    instance = _load_instance(args)
    lattice = PAdicLattice(p=instance.p, basis=instance.basis)
    started = time.perf_counter()
    report = _report_skeleton(args, instance)
    longest = solve_lvp(instance.norm, lattice)
    report["outputs"] = {
        "vector": serialize.vector_to_obj(longest),
        "norm": format_exponent(instance.norm.exponent(longest), instance.p),
    }
    report["wall_time_s"] = round(time.perf_counter() - started, 6)
    _emit(report, args.out)
    return EXIT_OK


def cmd_cosets(args) -> int:
    instance = _load_instance(args)
    lattice, target = _lattice_and_target(instance)
    started = time.perf_counter()
    report = _report_skeleton(args, instance)
    table = coset_norm_values(instance.norm, lattice, target, max_level=args.max_level)
    report["outputs"] = {
        "values": [
            {
                "exponent": format_exponent(entry.exponent, instance.p),
                "representative": serialize.vector_to_obj(entry.representative),
            }
            for entry in table.entries
        ],
        "terminal_level": table.terminal_level,
    }
    if args.stats:
        report["stats"] = {
            "nodes_explored": table.nodes_explored,
            "norm_evaluations": table.norm_evaluations,
            "terminal_level": table.terminal_level,
        }
    code = EXIT_OK
    if args.verify:
        deeper = coset_norm_values(
            instance.norm,
            lattice,
            target,
            max_level=args.max_level,
            extra_levels=1,
        )
        stable = deeper.entries == table.entries
        report["oracle"] = {"stable_under_deepening": stable}
        if not stable:
            code = EXIT_VERIFY
    report["wall_time_s"] = round(time.perf_counter() - started, 6)
    _emit(report, args.out)
    return code


def cmd_induced_norm(args) -> int:
    instance = _load_instance(args)
    started = time.perf_counter()
    report = _report_skeleton(args, instance)
    induced = lattice_induced_norm(instance.basis, instance.p)
    report["outputs"] = {"norm": serialize.norm_to_obj(induced)}
    code = EXIT_OK
    if args.verify:
        ok = check_orthogonal_determinant(induced, instance.basis)
        report["oracle"] = {"basis_orthogonal_under_induced": ok}
        if not ok:
            code = EXIT_VERIFY
    report["wall_time_s"] = round(time.perf_counter() - started, 6)
    _emit(report, args.out)
    return code


def cmd_check(args) -> int:
    instance = _load_instance(args)
    started = time.perf_counter()
    report = _report_skeleton(args, instance)
    verdict_det = check_orthogonal_determinant(instance.norm, instance.basis)
    verdict_sampled, witness = check_orthogonal_sampled(
        instance.norm, instance.basis, trials=args.trials, depth=args.depth
    )
    report["outputs"] = {
        "determinant": verdict_det,
        "sampled": verdict_sampled,
    }
    if witness is not None:
        report["outputs"]["witness"] = {
            "coefficients": serialize.vector_to_obj(witness.coefficients),
            "combination": format_exponent(
                witness.combination_exponent, instance.p
            ),
            "expected": format_exponent(witness.component_exponent, instance.p),
        }
    report["wall_time_s"] = round(time.perf_counter() - started, 6)
    _emit(report, args.out)
    # The sampled check is one-sided: a sampled "true" can accompany a
    # determinant "false", but a sampled witness against a determinant
    # "true" means the oracle itself is broken.
    if verdict_det and not verdict_sampled:
        return EXIT_VERIFY
    return EXIT_OK


def cmd_selftest(args) -> int:
    numbers = args.criteria or None
    results = acceptance.run_criteria(numbers, echo=print)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--instance", required=True, help="instance or corpus JSON file")
    parser.add_argument("--index", type=int, default=0, help="index into a corpus file")
    parser.add_argument("--out", help="also write the report to this file")
    parser.add_argument(
        "--max-level", type=int, default=DEFAULT_MAX_LEVEL, dest="max_level"
    )
    parser.add_argument("--trials", type=int, default=500)
    parser.add_argument("--depth", type=int, default=5)
    parser.add_argument(
        "--verify",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="cross-check results against the oracle (on by default)",
    )
    parser.add_argument("--stats", action="store_true", help="include solver counters")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padic-ortho",
        description="Norm-orthogonal bases in p-adic vector spaces and lattices",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    gen = sub.add_parser("gen", help="emit a deterministic instance corpus")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--p", type=int, default=2)
    gen.add_argument("--n", type=int, default=2)
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument(
        "--weight-denominator", type=int, default=1, dest="weight_denominator"
    )
    gen.add_argument("--entry-bound", type=int, default=10, dest="entry_bound")
    gen.add_argument("--rank", type=int, default=None)
    gen.add_argument(
        "--second-norm", action="store_true", dest="second_norm",
        help="also generate an independent second norm",
    )
    gen.add_argument("--out", help="write the corpus here instead of stdout")
    gen.set_defaults(func=cmd_gen)

    for name, func, help_text in [
        ("orthogonalize", cmd_orthogonalize, "single-norm orthogonal basis"),
        ("orthogonalize2", cmd_orthogonalize2, "basis orthogonal under two norms"),
        ("rank2", cmd_rank2, "orthogonal basis of a rank-2 lattice"),
        ("cvp", cmd_cvp, "closest vector in the lattice of all but the last basis vector"),
        ("lvp", cmd_lvp, "longest lattice vector"),
        ("cosets", cmd_cosets, "all norm values on the target's coset"),
        ("induced-norm", cmd_induced_norm, "norm induced by the basis lattice"),
        ("check", cmd_check, "run both orthogonality checkers on the basis"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        _add_common(cmd)
        cmd.set_defaults(func=func)

    selftest = sub.add_parser("selftest", help="run the acceptance suite")
    selftest.add_argument(
        "--criteria", type=int, nargs="*", help="criterion numbers (default all)"
    )
    selftest.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[list] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = [parser.prog, *argv]
    try:
        return args.func(args)
    except ResourceExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (PadicOrthoError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


def console_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
