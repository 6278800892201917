"""Command-line front end.

Exit codes: 0 success, 1 an asserted check failed, 2 usage, 3 input format,
4 infeasible or infinite bound, 5 stage failure.
"""

from __future__ import annotations

import argparse
import ast
import json
import math
import operator
import sys

from . import bounds, coding, harness, reductions
from .circuits import circuit_table
from .core import BINARY, DNA, Monomial, SuperstringRep
from .errors import InfeasibleError, InputFormatError, NotRealizableError, StageFailure
from .formats import read_examples, read_sample, read_sequence, read_text, to_csv, format_value
from .learners import LEARNERS, circuit_learner, greedy_superstring

EXIT_FAILED, EXIT_USAGE, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_STAGE = 1, 2, 3, 4, 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _jsonable(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _emit(args, rows, fields):
    if args.json:
        payload = rows[0] if len(rows) == 1 else rows
        print(json.dumps(_jsonable(payload), indent=2, sort_keys=False))
    else:
        sys.stdout.write(to_csv(rows, fields))


# -- subcommands ---------------------------------------------------------------


_FUNCTIONS = {"log2": math.log2, "ln": math.log, "log": math.log, "sqrt": math.sqrt,
              "ceil": math.ceil, "floor": math.floor}
_OPERATORS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
              ast.Div: operator.truediv, ast.Pow: operator.pow}


def evaluate_expression(text: str, variables: dict) -> float:
    """Arithmetic on numbers, the given variables and a few math functions."""

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name) and node.id in variables:
            return variables[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _OPERATORS:
            return _OPERATORS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCTIONS and len(node.args) == 1 and not node.keywords):
            return _FUNCTIONS[node.func.id](walk(node.args[0]))
        raise UsageError(f"unsupported element in expression {text!r}")

    try:
        return float(walk(ast.parse(text, mode="eval")))
    except SyntaxError:
        raise UsageError(f"cannot parse expression {text!r}") from None


def cmd_bounds(args):
    p = args.p
    if args.p_expr:
        # the KC bound evaluates p at gamma = delta (deterministic) or delta / 2
        gamma = args.delta / 2 if args.randomized else args.delta
        p = evaluate_expression(args.p_expr, {"n": args.n, "s": args.s, "gamma": gamma})
    inp = bounds.BoundInputs(args.epsilon, args.delta, n=args.n, s=args.s, d=args.d,
                             class_size=args.class_size, alpha=args.alpha, beta=args.beta,
                             p=p)
    rep = bounds.bound_report(inp, deterministic=not args.randomized)
    row = {k: getattr(rep, k) for k in bounds.BoundReport.FIELDS}
    _emit(args, [row], bounds.BoundReport.FIELDS)
    if args.table and not args.json:
        for k in bounds.BoundReport.FIELDS:
            print(f"{k:<12} {format_value(row[k]):>16}  ({rep.logBaseNotes[k]})")
    if rep.kcBased == bounds.INFINITY:
        print("occamlab: infeasible: KC-based bound is infinite", file=sys.stderr)
        return EXIT_INFEASIBLE
    return 0


def _learn(system, learner, sample, n):
    if system == "superstring":
        return greedy_superstring(sample.positives or sample.examples, n)
    factory = LEARNERS.get((system, learner))
    if factory is None:
        raise InputFormatError(f"no learner {learner!r} for system {system!r}")
    return factory(n).learn(sample)


def _infer_n(sample, n):
    if n is not None:
        return n
    lengths = {len(x) for x in sample.examples}
    if len(lengths) != 1:
        raise InputFormatError("examples differ in length; pass --n")
    return lengths.pop()


def cmd_learn(args):
    if args.system is None:
        args.system = "superstring" if args.learner == "greedy-sss" else "monomial"
    if (args.system == "superstring") != (args.learner == "greedy-sss"):
        raise UsageError("greedy-sss is the only superstring learner")
    sample = read_sample(args.sample)
    n = _infer_n(sample, args.n)
    rep = _learn(args.system, args.learner, sample, n)
    row = {"system": args.system, "learner": args.learner, "hypothesis": str(rep),
           "length_bits": rep.length_bits(), "consistent": sample.consistent_with(rep)}
    if isinstance(rep, Monomial):
        row["pattern"] = rep.pattern()
    _emit(args, [row], ("system", "learner", "hypothesis", "pattern", "length_bits",
                        "consistent"))
    return 0


def cmd_encode(args):
    if args.codec == "monomial":
        hyp = Monomial.from_pattern(read_text(args.hypothesis))
        target = Monomial.from_pattern(read_text(args.target))
        code = coding.encode_monomial_given_target(hyp, target, target.n)
    elif args.codec == "superstring":
        if args.examples is None:
            raise UsageError("the superstring codec needs --examples")
        examples = read_examples(args.examples)
        n = args.n or len(examples[0])
        text = read_sequence(args.target)
        alphabet = DNA if set(text) <= set(DNA) else "".join(sorted(set(text)))
        target = SuperstringRep(text, n, alphabet)
        hyp = SuperstringRep(read_sequence(args.hypothesis), n, alphabet)
        code = coding.encode_superstring_given_target(hyp, target, examples)
    else:
        fed = read_examples(args.hypothesis)
        exceptions = read_examples(args.target) if args.target else []
        n = args.n or max(len(x) for x in fed + exceptions)
        alphabet = BINARY if set("".join(fed + exceptions)) <= set(BINARY) else DNA
        code = coding.encode_examples_transcript(fed, exceptions, n, alphabet,
                                                 "auto" if args.unordered else False)
    coding.decode(code)  # raises CodecError if the code does not parse back
    if args.emit:
        coding.emit_bits_file(code.bits, args.emit)
    row = {"codec": code.codec, "bits": len(code.bits), "bound": code.bound,
           "header_bits": code.header_bits}
    _emit(args, [row], ("codec", "bits", "bound", "header_bits"))
    return 0 if len(code.bits) <= code.bound else EXIT_FAILED


def cmd_reduce(args):
    sample = read_sample(args.sample)
    n = _infer_n(sample, args.n)
    if args.system == "threshold":
        learner = circuit_learner(n)
    else:
        learner = LEARNERS[("monomial", args.learner)](n)
    if args.theorem == 2:
        run = reductions.theorem2_occam(learner, sample, n, gamma=args.gamma, seed=args.seed)
    else:
        run = reductions.theorem3_occam(learner, reductions.MAJ3[args.system], sample, n,
                                        gamma=args.gamma, seed=args.seed, retries=args.retries)
    row = {"theorem": args.theorem, "system": args.system, "m": run.m, "n": n,
           "epsilon": run.epsilon, "consistent": run.consistent, "code_bits": run.code_bits,
           "compression": run.compression, "attempts": run.attempts}
    _emit(args, [row], ("theorem", "system", "m", "n", "epsilon", "consistent", "code_bits",
                        "compression", "attempts"))
    return 0 if run.consistent else EXIT_FAILED


TRIAL_FIELDS = harness.TrialResult.CSV_FIELDS + ("required_rate",)


def _trial_rows(results, rate, required):
    rows = [r.row() for r in results]
    errors = [r.error for r in results if not math.isnan(r.error)]
    rows.append({"trial": "summary", "m": results[0].m,
                 "error": sum(errors) / len(errors) if errors else math.nan,
                 "success": rate, "required_rate": required})
    return rows


def cmd_verify(args):
    try:
        config = harness.ExperimentConfig.from_json(args.config)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputFormatError(f"bad config: {exc}") from None
    if args.threads:
        config.threads = args.threads
    rate, results = harness.pac_verify(config)
    required = (1 - config.delta) - harness.binomial_slack(config.delta, config.trials)
    _emit(args, _trial_rows(results, rate, required), TRIAL_FIELDS)
    return 0 if rate >= required else EXIT_FAILED


def cmd_vcdim(args):
    domain = read_examples(args.domain) if args.domain else None
    if args.system == "threshold":
        circuit_table(args.n)  # surfaces the enumeration limit early
    d = harness.vc_dim_bruteforce(args.system, args.n, domain)
    if args.json:
        print(json.dumps({"system": args.system, "n": args.n, "vc_dimension": d}))
    else:
        print(d)
    return 0


APP1_FIELDS = ("mode", "s", "n", "epsilon", "delta", "p_len", "p_kc", "m_len", "m_kc", "ratio")


def cmd_app1(args):
    rep = harness.application1_experiment(args.s, args.n, args.epsilon, args.delta,
                                          args.num_samples, args.bound_only, args.seed)
    rep.pop("runtime")
    fields = APP1_FIELDS + tuple(k for k in rep if k not in APP1_FIELDS)
    _emit(args, [rep], fields)
    ok = args.bound_only or (rep["round_trip"] and rep["p_kc"] <= rep["formula_bound"])
    return 0 if ok else EXIT_FAILED


def cmd_app2(args):
    rep = harness.application2_experiment(args.n, args.target_size, args.epsilon, args.delta,
                                          args.trials, args.seed, args.support_size,
                                          args.threads)
    results = rep.pop("results")
    rep.pop("runtime")
    if args.per_trial:
        _emit(args, _trial_rows(results, rep["success_rate"], rep["required_rate"]),
              TRIAL_FIELDS)
    else:
        _emit(args, [rep], tuple(rep))
    return 0 if rep["passed"] else EXIT_FAILED


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="occamlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--json", action="store_true", help="print JSON instead of CSV")
        return p

    p = add("bounds", cmd_bounds, "sample-complexity calculators")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--d", type=int, help="VC dimension")
    p.add_argument("--class-size", type=int, help="size of a finite hypothesis class")
    p.add_argument("--s", type=float, default=1, help="representation length in bits")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--p", type=float, help="description length given the target")
    p.add_argument("--p-expr", help="description length as an expression in n, s, gamma "
                                    "(functions: log2, ln, sqrt, ceil, floor)")
    p.add_argument("--table", action="store_true", help="also print a readable table")
    p.add_argument("--randomized", action="store_true",
                   help="use the 2/delta confidence term for the KC bound")

    p = add("learn", cmd_learn, "run a learner on a sample file")
    p.add_argument("--algo", "--learner", dest="learner", default="standard",
                   choices=("standard", "haussler", "bruteforce", "greedy-sss"))
    p.add_argument("--system", choices=("monomial", "threshold", "superstring"),
                   help="default: superstring for greedy-sss, monomial otherwise")
    p.add_argument("--sample", required=True)
    p.add_argument("--n", type=int)

    p = add("encode", cmd_encode, "witness-code length of a hypothesis given a target")
    p.add_argument("--codec", choices=coding.CODECS, required=True)
    p.add_argument("--hypothesis", required=True,
                   help="monomial pattern, superstring/FASTA, or fed examples")
    p.add_argument("--target", help="monomial pattern, superstring/FASTA, or exceptions")
    p.add_argument("--examples", help="examples for the superstring codec")
    p.add_argument("--n", type=int)
    p.add_argument("--unordered", action="store_true",
                   help="allow membership bitmaps in transcripts")
    p.add_argument("--emit", help="write the packed bit string to this file")

    p = add("reduce", cmd_reduce, "turn a PAC learner into an Occam algorithm")
    p.add_argument("--theorem", type=int, choices=(2, 3), required=True)
    p.add_argument("--system", choices=("monomial", "threshold"), required=True)
    p.add_argument("--learner", default="standard", choices=("standard", "haussler", "bruteforce"))
    p.add_argument("--sample", required=True)
    p.add_argument("--gamma", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--retries", type=int, default=0)
    p.add_argument("--n", type=int)

    p = add("verify", cmd_verify, "empirical PAC verification from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--threads", type=int, default=0)

    p = add("vcdim", cmd_vcdim, "brute-force VC dimension")
    p.add_argument("--system", choices=("monomial", "threshold"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--domain", help="file of examples (default: all of them)")

    p = add("app1", cmd_app1, "superstring sample-complexity comparison")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--num-samples", type=int)
    p.add_argument("--bound-only", action="store_true")
    p.add_argument("--seed", type=int, default=0)

    p = add("app2", cmd_app2, "monomial sample-complexity comparison and PAC run")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target-size", type=int)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--support-size", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--per-trial", action="store_true", help="one CSV row per trial")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"occamlab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StageFailure as exc:
        print(f"occamlab: {exc}", file=sys.stderr)
        return EXIT_STAGE
    except (InfeasibleError, NotRealizableError) as exc:
        print(f"occamlab: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InputFormatError, OSError) as exc:
        print(f"occamlab: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"occamlab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
