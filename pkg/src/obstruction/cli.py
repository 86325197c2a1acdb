"""Command-line surface for batch experiments.

Model specs name either the initial model ("initial"), an action model
("is", "bc", "sa:K", "sa-trivial", "round:FILE"), or a product of the
initial model with an action ("I[is]", "I[sa:1]", ...). In solve and
obstruct commands a bare action token is shorthand for its product.

Exit codes: 0 affirmative, 1 negative verdict, 2 usage error,
3 resource limit.
"""

import argparse
import json
import os
import random
import sys

from . import adversaries, generators, models, solver, tasks
from .formulas import ParseError, parse, render


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _inputs_arg(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.replace("{", "").replace("}", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad input list {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("input list is empty")
    return values


class UsageError(Exception):
    pass


def _load_adversary(token: str, n: int) -> adversaries.Adversary:
    if token == "waitfree":
        return adversaries.waitfree(n)
    try:
        with open(token) as handle:
            adv = adversaries.adversary_from_json(json.load(handle))
    except OSError as exc:
        raise UsageError(f"cannot read adversary file {token!r}: {exc}")
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad adversary file {token!r}: {exc}")
    if adv.n != n:
        raise UsageError(f"adversary file {token!r} is for n={adv.n}, not n={n}")
    return adv


def _action_tokens(spec: str) -> str | None:
    """The action token inside a spec, or None for the bare initial model."""
    if spec == "initial":
        return None
    if spec.startswith("I[") and spec.endswith("]"):
        return spec[2:-1]
    return spec


def _default_inputs(tokens, n: int) -> tuple[int, ...]:
    relevant = [t for t in tokens if t is not None]
    if any(t.startswith(("sa", "round")) for t in relevant):
        return tuple(range(n + 1))
    return (0, 1)


def _build_action(token: str, n: int, inputs, args) -> tasks.ActionModel:
    if token == "is":
        return tasks.immediate_snapshot_action(n, inputs)
    if token == "bc":
        return tasks.binary_consensus_action(n)
    if token == "sa-trivial":
        return tasks.decide_own_input_action(n, inputs)
    if token.startswith("sa"):
        if token.startswith("sa:"):
            try:
                k = int(token.split(":", 1)[1])
            except ValueError:
                raise UsageError(f"bad agreement bound in {token!r}")
        elif token == "sa" and args.k is not None:
            k = args.k
        else:
            raise UsageError(f"spec {token!r} needs an agreement bound (sa:K or --k)")
        return tasks.set_agreement_action(n, k, inputs)
    if token.startswith("round"):
        if token.startswith("round:"):
            source = token.split(":", 1)[1]
        elif args.adversary is not None:
            source = args.adversary
        else:
            raise UsageError("round spec needs an adversary (round:FILE or --adversary)")
        return tasks.round_operator_action(n, _load_adversary(source, n), inputs)
    raise UsageError(f"unknown model spec {token!r}")


def _build_from_spec(spec: str, n: int, inputs, args):
    """Returns (kind, object): a model, an action model, or a product model."""
    token = _action_tokens(spec)
    if token is None:
        return "model", tasks.initial_model(n, inputs)
    action = _build_action(token, n, inputs, args)
    if spec.startswith("I["):
        return "model", tasks.apply_action(tasks.initial_model(n, inputs), action)
    return "action", action


def _product_model(spec: str, n: int, inputs, args) -> models.SimplicialModel:
    token = _action_tokens(spec)
    if token is None:
        raise UsageError(f"spec {spec!r} does not name a product model")
    action = _build_action(token, n, inputs, args)
    return tasks.apply_action(tasks.initial_model(n, inputs), action)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as handle:
            handle.write(text)


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _model_text(model: models.SimplicialModel) -> str:
    lines = [f"n={model.complex.n} facets={len(model.complex.facets)}"]
    for i, facet in enumerate(model.complex.facets):
        atoms = " ".join(
            f"input({a},{v})" for a, v in sorted(model.atoms_of(facet))
        )
        lines.append(f"f{i}: {facet.text()}  [{atoms}]")
    return "\n".join(lines) + "\n"


def _action_text(action: tasks.ActionModel) -> str:
    lines = [f"n={action.complex.n} name={action.name} facets={len(action.complex.facets)}"]
    for i, facet in enumerate(action.complex.facets):
        lines.append(f"f{i}: {facet.text()}  pre: {render(action.pre[facet])}")
    return "\n".join(lines) + "\n"


def cmd_build(args) -> int:
    inputs = args.inputs or _default_inputs([_action_tokens(args.spec)], args.n)
    kind, built = _build_from_spec(args.spec, args.n, inputs, args)
    if args.format == "json":
        doc = models.model_to_json(built) if kind == "model" else tasks.action_to_json(built)
        _emit(_dump(doc), args.out)
    elif args.format == "dot":
        complex = built.complex
        _emit(models.complex_to_dot(complex), args.out)
    else:
        text = _model_text(built) if kind == "model" else _action_text(built)
        _emit(text, args.out)
    return 0


def cmd_check(args) -> int:
    with open(args.model) as handle:
        model = models.model_from_json(json.load(handle))
    phi = parse(args.formula)
    verdict = model.validity(phi)
    if args.format == "json":
        doc = {
            "formula": render(phi),
            "valid": verdict.is_valid,
            "counterexample": (
                None
                if verdict.is_valid
                else model.complex.index(verdict.counterexample)
            ),
        }
        _emit(_dump(doc), args.out)
    else:
        _emit(models.verdict_text(verdict) + "\n", args.out)
    return 0 if verdict.is_valid else 1


def cmd_obstruct(args) -> int:
    task_token = _action_tokens(args.task)
    protocol_token = _action_tokens(args.protocol)
    inputs = args.inputs or _default_inputs([task_token, protocol_token], args.n)
    task = _product_model(args.task, args.n, inputs, args)
    protocol = _product_model(args.protocol, args.n, inputs, args)

    if args.gen == "bc":
        phi = generators.binary_consensus_obstruction(args.n)
    elif args.gen.startswith("waitfree"):
        if ":" not in args.gen:
            raise UsageError("generator waitfree needs a bound: waitfree:K")
        k = int(args.gen.split(":", 1)[1])
        phi = generators.waitfree_kset_obstruction(args.n, k)
    elif args.gen == "adversary":
        source = args.adversary
        if source is None and protocol_token and protocol_token.startswith("round:"):
            source = protocol_token.split(":", 1)[1]
        if source is None:
            raise UsageError("generator adversary needs --adversary or a round protocol")
        phi = generators.adversary_obstruction(args.n, _load_adversary(source, args.n))
    else:
        raise UsageError(f"unknown generator {args.gen!r}")

    report = generators.verify_obstruction(task, protocol, phi)
    doc = generators.report_to_json(report)
    if args.format == "json":
        _emit(_dump(doc), args.out)
    else:
        lines = [
            f"formula: {doc['formula']}",
            f"positive: {doc['positive']}",
            f"task valid: {doc['task_valid']}",
            f"protocol counterexamples: {doc['protocol_counterexamples']}",
            f"obstruction: {doc['is_obstruction']}",
        ]
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if report.is_obstruction else 1


def cmd_solve(args) -> int:
    protocol_token = _action_tokens(args.protocol)
    task_token = _action_tokens(args.task)
    inputs = args.inputs or _default_inputs([protocol_token, task_token], args.n)
    protocol = _product_model(args.protocol, args.n, inputs, args)
    task = _product_model(args.task, args.n, inputs, args)
    result = solver.find_morphism(protocol, task, args.budget)
    print(f"status: {result.status.value}")
    print(f"explored: {result.explored}")
    if result.status is solver.Solvability.SOLVABLE:
        rng = random.Random(args.seed)
        atom_pool = sorted({p for f in protocol.complex.facets for p in protocol.atoms_of(f)})
        agents = sorted({a for a, _ in atom_pool})
        values = sorted({v for _, v in atom_pool})
        formulas = [
            solver.random_positive_formula(rng, agents, values, depth=3)
            for _ in range(100)
        ]
        preserved = solver.knowledge_gain_check(result.witness, protocol, task, formulas)
        print(f"knowledge preservation (100 formulas, seed {args.seed}): {preserved}")
        if args.out:
            doc = {
                "map": {
                    v.text(): image.text()
                    for v, image in sorted(result.witness.items(), key=lambda kv: kv[0].key())
                },
                "explored": result.explored,
                "transcript": {
                    "morphism": True,
                    "input_preserving": True,
                    "knowledge_preserving": preserved,
                    "seed": args.seed,
                },
            }
            _emit(_dump(doc), args.out)
        return 0
    if result.status is solver.Solvability.UNSOLVABLE:
        return 1
    return 3


def cmd_export(args) -> int:
    with open(args.model) as handle:
        data = json.load(handle)
    if "pre" in data:
        action = tasks.action_from_json(data)
        if args.format == "json":
            _emit(_dump(tasks.action_to_json(action)), args.out)
        elif args.format == "dot":
            _emit(models.complex_to_dot(action.complex), args.out)
        else:
            _emit(_action_text(action), args.out)
        return 0
    model = models.model_from_json(data)
    if args.format == "json":
        _emit(_dump(models.model_to_json(model)), args.out)
    elif args.format == "dot":
        _emit(models.model_to_dot(model), args.out)
    else:
        _emit(_model_text(model), args.out)
    return 0


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="obstruction",
        description="Build epistemic models of one-round protocols and tasks, "
        "check formulas, verify obstructions, and decide solvability.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common_flags(p):
        p.add_argument("--n", type=int, required=True, help="dimension: agents are 0..n")
        p.add_argument("--inputs", type=_inputs_arg, default=None, help="comma-separated input values")
        p.add_argument("--k", type=int, default=None, help="agreement bound for bare 'sa' specs")
        p.add_argument("--adversary", default=None, help="adversary file, or 'waitfree'")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "dot", "text"), default="json")

    p_build = sub.add_parser("build", help="construct and export a model")
    p_build.add_argument("spec")
    common_flags(p_build)
    p_build.set_defaults(func=cmd_build)

    p_check = sub.add_parser("check", help="evaluate a formula over an exported model")
    p_check.add_argument("model")
    p_check.add_argument("--formula", required=True)
    p_check.add_argument("--out", default=None)
    p_check.add_argument("--format", choices=("json", "text"), default="text")
    p_check.set_defaults(func=cmd_check)

    p_obs = sub.add_parser("obstruct", help="generate a formula and verify the obstruction")
    p_obs.add_argument("task")
    p_obs.add_argument("protocol")
    p_obs.add_argument("--gen", required=True, help="bc | waitfree:K | adversary")
    common_flags(p_obs)
    p_obs.set_defaults(func=cmd_obstruct)

    p_solve = sub.add_parser("solve", help="search for a solving decision map")
    p_solve.add_argument("protocol")
    p_solve.add_argument("task")
    common_flags(p_solve)
    p_solve.add_argument("--budget", type=_positive_int, default=10_000_000)
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.set_defaults(func=cmd_solve)

    p_export = sub.add_parser("export", help="convert an exported model between formats")
    p_export.add_argument("model")
    p_export.add_argument("--out", default=None)
    p_export.add_argument("--format", choices=("json", "dot", "text"), default="json")
    p_export.set_defaults(func=cmd_export)

    return parser


def _check_thread_cap() -> None:
    cap = os.environ.get("OBSTRUCTION_THREADS")
    if cap is None:
        return
    try:
        value = int(cap)
    except ValueError:
        raise UsageError(f"OBSTRUCTION_THREADS must be an integer, got {cap!r}")
    if value < 1:
        raise UsageError("OBSTRUCTION_THREADS must be at least 1")
    # Evaluation is sequential, so any cap of one or more is respected.


def main(argv=None) -> int:
    parser = _make_parser()
    args = parser.parse_args(argv)
    try:
        _check_thread_cap()
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"formula error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
