"""Command-line interface.

Subcommands: eval, update, axioms, tree, simulate.  Results go to stdout,
diagnostics to stderr.  Exit codes: 0 success, 1 domain error, 2 parse
error, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .axioms import (
    AXIOM_IDS,
    BeliefFixtures,
    GeneratorConfig,
    MATRIX_RULES,
    axiom_matrix,
    check_axiom,
)
from .dsl import ProblemDoc, parse_problem, parse_tree, serialize_weighted_set
from .dynamics import evaluate_tree
from .errors import DomainError, ParseError
from .learning import ObservationModel, Probe, compare_updaters, simulate
from .measures import likelihood_update
from .decisions import rank
from .rational import parse_rational


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we reserve 2 for parse errors
        raise UsageError(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _load_doc(path: str) -> ProblemDoc:
    return parse_problem(_read(path))


def _lookup(table, name: str, what: str):
    if name not in table:
        known = ", ".join(sorted(table)) or "(none)"
        raise UsageError(f"unknown {what} {name!r}; known: {known}")
    return table[name]


def _belief_for(doc: ProblemDoc, rule: str, measure_name: str | None):
    if rule == "regret":
        return None
    if not doc.hypotheses:
        raise UsageError("the document declares no hypotheses")
    if rule == "seu":
        if measure_name is None:
            raise UsageError("--rule seu requires --measure NAME")
        measure, _ = _lookup(doc.hypotheses, measure_name, "hypothesis")
        return measure
    if rule in ("mer", "mmeu"):
        return doc.measures()
    if rule == "mwer":
        return doc.weighted_set()
    raise UsageError(f"unknown rule {rule!r}")


def _cmd_eval(args) -> int:
    doc = _load_doc(args.file)
    menu = _lookup(doc.menus, args.menu, "menu")
    belief = _belief_for(doc, args.rule, args.measure)
    ranking = rank(args.rule, menu, doc.utility, belief)
    if args.format == "json":
        print(json.dumps(ranking.to_obj(), indent=2))
    else:
        sys.stdout.write(ranking.to_tsv())
    return 0


def _cmd_update(args) -> int:
    doc = _load_doc(args.file)
    event = _lookup(doc.events, args.event, "event")
    wset = doc.weighted_set()
    updated = likelihood_update(wset, event)
    # label each conditioned measure by the hypotheses that condition to it
    contributors: dict = {}
    for name in sorted(doc.hypotheses):
        measure, _ = doc.hypotheses[name]
        if measure.event_prob(event) > 0:
            conditioned = measure.condition(event)
            contributors.setdefault(conditioned, []).append(name)
    names = {
        "+".join(sorted(who)): (measure, Fraction(0))
        for measure, who in contributors.items()
    }
    sys.stdout.write(serialize_weighted_set(updated, names))
    return 0


def _fixtures_for(doc: ProblemDoc) -> BeliefFixtures:
    measures = doc.measures()
    if len(measures) < 2:
        raise UsageError("axiom fixtures need at least two hypotheses")
    return BeliefFixtures(
        utility=doc.utility,
        state_space=doc.states,
        seu=measures[0],
        mer=measures,
        mmeu=measures,
        mwer=doc.weighted_set(),
    )


def _cmd_axioms(args) -> int:
    doc = _load_doc(args.file)
    try:
        fixtures = _fixtures_for(doc)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    config = GeneratorConfig(samples=args.samples)
    if args.axiom == "matrix":
        matrix = axiom_matrix(fixtures=fixtures, seed=args.seed, config=config)
        if args.format == "json":
            print(json.dumps(matrix.to_obj(), indent=2))
        else:
            sys.stdout.write(matrix.to_text())
        return 0
    rules = [args.rule] if args.rule else list(MATRIX_RULES)
    reports = [
        check_axiom(args.axiom, fixtures.oracle(rule), config, seed=args.seed)
        for rule in rules
    ]
    if args.format == "json":
        print(json.dumps([r.to_obj() for r in reports], indent=2))
    else:
        for report in reports:
            line = (
                f"axiom {report.axiom} under {report.rule}: {report.verdict}"
                f" (samples={report.samples}, applicable={report.applicable},"
                f" curated={report.curated}, seed={report.seed})"
            )
            print(line)
            if report.counterexample is not None:
                witness = report.counterexample.to_obj()
                print(f"  witness: {witness['description']}")
                print(f"  menu: {', '.join(witness['menu'])}")
                if witness["scores"]:
                    scores = ", ".join(f"{k}={v}" for k, v in witness["scores"].items())
                    print(f"  scores: {scores}")
    return 0


def _cmd_tree(args) -> int:
    doc = _load_doc(args.file)
    tree = parse_tree(_read(args.treefile), doc)
    evaluation = evaluate_tree(
        tree, doc.utility, doc.weighted_set(),
        planning=args.planning, menu_policy=args.menu_policy,
    )
    if args.format == "json":
        print(json.dumps(evaluation.to_obj(), indent=2))
        return 0
    print(f"chosen plan: {evaluation.chosen.name}")
    print(f"survivors: {', '.join(evaluation.survivors)}")
    for diag in evaluation.diagnostics:
        print(f"node {diag.node} (live: {', '.join(diag.live)})")
        for name in diag.menu:
            marker = ""
            if name in diag.eliminated:
                marker = "  [eliminated]"
            elif name in diag.kept:
                marker = "  [kept]"
            score = diag.scores.get(name)
            shown = str(score) if score is not None else "-"
            print(f"  {name}: {shown}{marker}")
    return 0


def _trajectory_rows(model, prior, probe, rounds, seed):
    return simulate(model, prior, probe, rounds, seed)


def _cmd_simulate(args) -> int:
    doc = _load_doc(args.file)
    if not doc.hypotheses:
        raise UsageError("the document declares no hypotheses")
    _lookup(doc.hypotheses, args.truth, "hypothesis")
    if args.menu is None:
        if len(doc.menus) != 1:
            raise UsageError("--menu NAME is required when the file defines several menus")
        menu = next(iter(doc.menus.values()))
    else:
        menu = _lookup(doc.menus, args.menu, "menu")
    model = ObservationModel(
        outcomes=tuple(doc.states),
        likelihoods={
            name: dict(measure.items()) for name, (measure, _) in doc.hypotheses.items()
        },
        truth=args.truth,
    )
    probe = Probe(
        menu=menu,
        utility=doc.utility,
        measures={name: measure for name, (measure, _) in doc.hypotheses.items()},
    )
    prior = {name: weight for name, (_, weight) in doc.hypotheses.items()}
    seeds = list(range(args.seed, args.seed + args.seeds))
    if args.es_threshold is not None:
        threshold = parse_rational(args.es_threshold)
        summary = compare_updaters(model, prior, probe, args.rounds, seeds, threshold)
        sys.stdout.write(summary.to_csv())
        return 0
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            trajectories = list(
                pool.map(
                    _trajectory_rows,
                    [model] * len(seeds), [prior] * len(seeds),
                    [probe] * len(seeds), [args.rounds] * len(seeds), seeds,
                )
            )
    else:
        trajectories = [
            _trajectory_rows(model, prior, probe, args.rounds, seed) for seed in seeds
        ]
    hypotheses = model.hypotheses
    header = ["seed", "round"] + [f"weight_{h}" for h in hypotheses] + [
        "mwer_ranking", "matches_truth_seu",
    ]
    lines = [",".join(header)]
    for trajectory in trajectories:
        for row in trajectory.rows:
            ranking = ">".join("|".join(group) for group in row.mwer_groups)
            cells = [str(trajectory.seed), str(row.round)]
            cells += [f"{row.weights[h]:.12g}" for h in hypotheses]
            cells += [ranking, str(int(row.matches_truth_seu))]
            lines.append(",".join(cells))
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="wregret",
        description="Decision making under ambiguity with weighted sets of probabilities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="rank a menu under a decision rule")
    p_eval.add_argument("file")
    p_eval.add_argument("--rule", required=True, choices=["seu", "mmeu", "regret", "mer", "mwer"])
    p_eval.add_argument("--menu", required=True)
    p_eval.add_argument("--measure", help="hypothesis name (required for --rule seu)")
    p_eval.add_argument("--format", choices=["tsv", "json"], default="tsv")
    p_eval.set_defaults(func=_cmd_eval)

    p_update = sub.add_parser("update", help="likelihood-update the weighted set on an event")
    p_update.add_argument("file")
    p_update.add_argument("--event", required=True)
    p_update.set_defaults(func=_cmd_update)

    p_axioms = sub.add_parser("axioms", help="check axioms or print the rule-by-axiom matrix")
    p_axioms.add_argument("file")
    p_axioms.add_argument("--axiom", required=True, choices=list(AXIOM_IDS) + ["matrix"])
    p_axioms.add_argument("--rule", choices=list(MATRIX_RULES))
    p_axioms.add_argument("--samples", type=int, default=200)
    p_axioms.add_argument("--seed", type=int, default=0)
    p_axioms.add_argument("--format", choices=["text", "json"], default="text")
    p_axioms.set_defaults(func=_cmd_axioms)

    p_tree = sub.add_parser("tree", help="evaluate a decision tree")
    p_tree.add_argument("file")
    p_tree.add_argument("treefile")
    p_tree.add_argument("--planning", choices=["ex-ante", "sophisticated"], default="sophisticated")
    p_tree.add_argument("--menu-policy", choices=["full", "viable"], default="full")
    p_tree.add_argument("--format", choices=["text", "json"], default="text")
    p_tree.set_defaults(func=_cmd_tree)

    p_sim = sub.add_parser("simulate", help="repeated-observation weight dynamics (CSV)")
    p_sim.add_argument("file")
    p_sim.add_argument("--truth", required=True)
    p_sim.add_argument("--rounds", type=int, default=100)
    p_sim.add_argument("--seeds", type=int, default=1)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--menu")
    p_sim.add_argument("--es-threshold", help="compare updating styles at this threshold")
    p_sim.add_argument("--jobs", type=int, default=1)
    p_sim.set_defaults(func=_cmd_sim_validate)

    return parser


def _cmd_sim_validate(args) -> int:
    if args.rounds < 1:
        raise UsageError("--rounds must be at least 1")
    if args.seeds < 1:
        raise UsageError("--seeds must be at least 1")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    return _cmd_simulate(args)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 3
    except ParseError as exc:
        for diagnostic in exc.diagnostics:
            print(str(diagnostic), file=sys.stderr)
        return 2
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
