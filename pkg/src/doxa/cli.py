"""Command-line interface: ``doxa <command> FILE [options]``.

Exit status is 0 when every check passes (or a query was answered), 1 when
a check fails or a counterexample is found, and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Sequence

from doxa.beliefs import AXIOM_EXHAUSTIVE_MAX, AXIOM_SAMPLES, audit_axioms, check_axiom_correspondence, check_b1
from doxa.decisions import GSTP_EXHAUSTIVE_MAX, GSTP_SAMPLES, agreement_check, satisfies_gstp
from doxa.dot import DotOptions, export_dot
from doxa.errors import DoxaError
from doxa.frames import (
    blindspots,
    check_relation_properties,
    check_structure_properties,
    info_from_relation,
    relation_from_info,
    verify_frame_theorems,
)
from doxa.games import accessibility_degree, verify_extension_theorem
from doxa.group import find_chain, group_info, is_common_information, verify_group_proposition
from doxa.modelfile import (
    ModelFile,
    extension_model,
    format_rational,
    format_value,
    load,
    parse_game,
    read_file,
    serialize_model,
)
from doxa.report import Report, _jsonable, check
from doxa.search import (
    ENUMERATION_CAP,
    GeneratorConfig,
    consistent_credal_sets,
    enumerate_relations,
    prng_header,
    search_agreement_counterexample,
)

OK, FAILED, BAD_INPUT = 0, 1, 2


class Output:
    def __init__(self, as_json: bool, out=None):
        self.as_json = as_json
        self.out = out or sys.stdout
        self.doc: dict = {}

    def text(self, line: str = "") -> None:
        if not self.as_json:
            print(line, file=self.out)

    def raw(self, text: str) -> None:
        self.out.write(text)

    def report(self, rep: Report) -> None:
        self.doc.setdefault("reports", []).append(rep.to_dict())
        self.text(rep.render())

    def put(self, key: str, value) -> None:
        self.doc[key] = _jsonable(value)

    def finish(self) -> None:
        if self.as_json:
            print(json.dumps(self.doc, indent=2, sort_keys=False, ensure_ascii=False), file=self.out)


def _model(args) -> ModelFile:
    return load(read_file(args.file))


def _players(model: ModelFile, args) -> tuple[str, ...]:
    if getattr(args, "player", None):
        model.profile[args.player]
        return (args.player,)
    return model.players


def _state_list(raw: str) -> list[str]:
    return [s.strip() for s in raw.split(",") if s.strip()] if raw else []


def _labels(event) -> str:
    return " ".join(event.labels) if event.mask else "(none)"


def _need_decision(model: ModelFile) -> None:
    if model.decision is None:
        raise DoxaError("the model has no decision function")


# -- commands ---------------------------------------------------------------------


def cmd_check_frame(args, out: Output) -> int:
    model = _model(args)
    ok = True
    for p in _players(model, args):
        info = model.profile[p]
        rel = relation_from_info(info)
        rr, sr = check_relation_properties(rel), check_structure_properties(info)
        props = {
            "serial": rr.serial.holds,
            "transitive": rr.transitive.holds,
            "euclidean": rr.euclidean.holds,
            "viable": sr.viable.holds,
            "inclusive": sr.inclusive.holds,
            "mutual": sr.mutual.holds,
            "divisible": sr.divisible.holds,
            "partitional": sr.partitional.holds,
        }
        out.text(f"player {p}: " + " ".join(f"{k}={'yes' if v else 'no'}" for k, v in props.items()))
        out.doc.setdefault("properties", {})[p] = props
        rep = verify_frame_theorems(rel)
        rep = Report(f"player {p}: {rep.title}", rep.checks)
        out.report(rep)
        ok &= rep.ok
    if len(model.players) > 1 and not getattr(args, "player", None):
        rep = verify_group_proposition(model.profile)
        out.report(rep)
        ok &= rep.ok
    return OK if ok else FAILED


def cmd_convert(args, out: Output) -> int:
    model = _model(args)
    text = serialize_model(model, args.to)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.raw(text)
    return OK


def cmd_blindspots(args, out: Output) -> int:
    model = _model(args)
    players = _players(model, args)
    for p in players:
        b = blindspots(model.profile[p])
        out.doc.setdefault("blindspots", {})[p] = list(b.labels)
        out.text(_labels(b) if len(players) == 1 else f"{p}: {_labels(b)}")
    return OK


def cmd_group_info(args, out: Output) -> int:
    model = _model(args)
    at = args.at or model.actual
    if at is None:
        raise DoxaError("no state given (use --at or set \"actual\")")
    g = group_info(model.profile, at)
    out.put("state", at)
    out.put("group_info", g)
    out.text(f"I^N({at}) = {g}")
    if args.to:
        chain = find_chain(model.profile, at, args.to)
        out.put("chain", None if chain is None else {"players": list(chain.players), "states": list(chain.states)})
        out.text(f"chain: {chain}" if chain else f"chain: none from {at} to {args.to}")
    return OK


def cmd_common_info(args, out: Output) -> int:
    model = _model(args)
    at = args.at or model.actual
    if at is None:
        raise DoxaError("no state given (use --at or set \"actual\")")
    e = model.space.event(_state_list(args.event))
    holds = is_common_information(model.profile, e, at)
    g = group_info(model.profile, at)
    out.put("state", at)
    out.put("event", e)
    out.put("group_info", g)
    out.put("common_information", holds)
    out.text(f"{e} is {'' if holds else 'not '}common information at {at}")
    out.text(f"I^N({at}) = {g}")
    if not holds:
        escape = next(iter((g - e).labels))
        chain = find_chain(model.profile, at, escape)
        out.put("chain", {"players": list(chain.players), "states": list(chain.states)})
        out.text(f"chain leaving the event: {chain}")
    return OK if holds else FAILED


def cmd_gstp(args, out: Output) -> int:
    model = _model(args)
    _need_decision(model)
    checks = []
    for p in _players(model, args):
        res = satisfies_gstp(model.decision, model.profile[p], samples=args.samples, seed=args.seed)
        witness = None
        if res.counterexample:
            s, d = res.counterexample
            witness = (s, format_value(d))
        checks.append(check(f"[{p}] sure-thing principle", res.holds, witness, f"{res.mode}, {res.subsets_checked} subsets"))
    if model.space.n > GSTP_EXHAUSTIVE_MAX:
        out.text(f"# prng: {prng_header()} seed={args.seed}")
    rep = Report("generalized sure-thing principle", tuple(checks))
    out.report(rep)
    return OK if rep.ok else FAILED


def cmd_agree(args, out: Output) -> int:
    model = _model(args)
    _need_decision(model)
    at = args.at or model.actual
    if at is None:
        raise DoxaError("no state given (use --at or set \"actual\")")
    res = agreement_check(model.profile, model.decision, at, gstp_samples=args.samples)
    out.put("state", res.state)
    out.put("decisions", {p: format_value(v) for p, v in res.decisions.items()})
    out.put("hypotheses", res.hypotheses)
    out.put("conclusion", res.conclusion)
    out.put("blindspots", {p: list(b.labels) for p, b in res.blindspots.items()})
    out.put("group_info", res.group_info)
    for p, v in res.decisions.items():
        out.text(f"d^{p}({res.state}) = {format_value(v)}")
    for name, holds in res.hypotheses.items():
        out.text(f"hypothesis {name} {'holds' if holds else 'violated'}")
    if not res.equal_blindspots:
        for p, b in res.blindspots.items():
            out.text(f"  blindspots of {p}: {_labels(b)}")
    if not res.common_information:
        out.text(f"  I^N({res.state}) leaves the decision events at {res.common_information_witness}")
    out.text("decisions agree" if res.conclusion else "decisions disagree")
    if res.theorem_violated:
        out.text("THEOREM VIOLATED: all hypotheses hold but decisions differ")
    return OK if res.hypotheses_hold and res.conclusion else FAILED


def cmd_axioms(args, out: Output) -> int:
    model = _model(args)
    ok = True
    sampled = False
    for p in _players(model, args):
        info = model.profile[p]
        ax = audit_axioms(info, samples=args.samples, seed=args.seed)
        sampled |= ax.mode == "sampled"
        flags = ax.flags()
        out.doc.setdefault("axioms", {})[p] = {k: v.holds for k, v in flags.items()}
        out.text(f"player {p}: " + " ".join(f"{k}={'yes' if v else 'no'}" for k, v in flags.items())
                 + ("  KD45" if ax.kd45 else ""))
        rep = check_axiom_correspondence(info, samples=args.samples, seed=args.seed)
        rep = Report(f"player {p}: {rep.title}", rep.checks)
        out.report(rep)
        ok &= rep.ok
    if sampled:
        out.text(f"# prng: {prng_header()} seed={args.seed}")
    return OK if ok else FAILED


def cmd_credal_check(args, out: Output) -> int:
    model = _model(args)
    checks = []
    for p in _players(model, args):
        if p not in model.credal:
            raise DoxaError(f"no credal set for player {p}")
        res = check_b1(model.credal[p], model.profile[p], mode=args.mode)
        witness = None if res.holds else (res.state, res.direction) + (() if res.measure is None else (f"measure {res.measure}",))
        checks.append(check(f"[{p}] blindspots are exactly the zero-mass states ({args.mode})", res.holds, witness))
    rep = Report("credal blindspot condition", tuple(checks))
    out.report(rep)
    return OK if rep.ok else FAILED


def cmd_extend(args, out: Output) -> int:
    gf = parse_game(read_file(args.file))
    text = serialize_model(extension_model(gf))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.raw(text)
    return OK


def cmd_kd45(args, out: Output) -> int:
    gf = parse_game(read_file(args.file))
    ext = gf.extension
    credal = gf.credal
    if credal is None:
        credal = consistent_credal_sets(ext)
        out.text("no credal sets in file; using measures built from the types")
    rep = verify_extension_theorem(ext, credal, b1_mode=args.b1_mode, per_type=args.per_type, samples=args.samples)
    out.report(rep)
    if ext.size() > AXIOM_EXHAUSTIVE_MAX:
        out.text(f"# prng: {prng_header()} seed=0")
    return OK if rep.ok else FAILED


def cmd_degree(args, out: Output) -> int:
    gf = parse_game(read_file(args.file))
    d = accessibility_degree(gf.extension, args.player, getattr(args, "from"), args.to)
    out.put("degree", format_rational(d))
    out.text(format_rational(d))
    return OK


def cmd_enumerate(args, out: Output) -> int:
    names = ("serial", "transitive", "euclidean", "viable", "inclusive", "mutual", "divisible", "partitional")
    counts = dict.fromkeys(names, 0)
    total = 0
    mismatches = 0
    for rel in enumerate_relations(args.n):
        total += 1
        rep = verify_frame_theorems(rel)
        mismatches += not rep.ok
        rr = check_relation_properties(rel)
        sr = check_structure_properties(info_from_relation(rel))
        for name in names:
            v = getattr(rr if hasattr(rr, name) else sr, name)
            counts[name] += v.holds
    out.put("n", args.n)
    out.put("relations", total)
    out.put("counts", counts)
    out.put("theorem_failures", mismatches)
    out.text(f"n={args.n}: {total} relations")
    for name, c in counts.items():
        out.text(f"  {name}: {c}")
    out.text(f"  frame theorem failures: {mismatches}")
    return OK if mismatches == 0 else FAILED


def cmd_search(args, out: Output) -> int:
    config = GeneratorConfig(
        n=args.n,
        seed=args.seed,
        equal_blindspots=args.equal_blindspots,
        include_known=not args.skip_known,
        budget=args.budget,
        min_n=args.min_n,
    )
    found = search_agreement_counterexample(config)
    out.put("found", found is not None)
    if found is None:
        out.text(f"no counterexample within budget ({config.budget} instances, n <= {config.n})")
        return OK
    inst = found.instance
    model = ModelFile(inst.profile, decision=inst.decision, actual=inst.state, form={p: "info" for p in inst.profile.players})
    res = agreement_check(inst.profile, inst.decision, inst.state)
    out.put("index", found.index)
    out.put("decisions", {p: format_value(v) for p, v in res.decisions.items()})
    out.put("model", json.loads(serialize_model(model)))
    out.text(f"counterexample #{found.index} at {inst.state}: "
             + ", ".join(f"d^{p}={format_value(v)}" for p, v in res.decisions.items()))
    out.text("violated hypotheses: " + (", ".join(res.violated_hypotheses) or "none"))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(serialize_model(model))
    elif not out.as_json:
        out.text(serialize_model(model).rstrip("\n"))
    return FAILED


def cmd_dot(args, out: Output) -> int:
    model = _model(args)
    players = (args.player,) if args.player else None
    text = export_dot(model, DotOptions(merged=args.merged, players=players, degrees=args.degrees))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.raw(text)
    return OK


# -- argument parsing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="doxa", description="Check belief structures over finite state spaces.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, func: Callable, help: str, file: bool = True, json_flag: bool = True):
        p = sub.add_parser(name, help=help, description=help)
        if file:
            p.add_argument("file", help="model or game file (JSON)")
        if json_flag:
            p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func, json=False)
        return p

    p = add("check-frame", cmd_check_frame, "relation/structure properties and their correspondences")
    p.add_argument("--player")
    p = add("convert", cmd_convert, "rewrite a model file with relations or information maps", json_flag=False)
    p.add_argument("--to", choices=("relations", "info"))
    p.add_argument("-o", "--output")
    p = add("blindspots", cmd_blindspots, "states no information set reaches")
    p.add_argument("--player")
    p = add("group-info", cmd_group_info, "group information set at a state")
    p.add_argument("--at")
    p.add_argument("--to", help="also show a shortest chain to this state")
    p = add("common-info", cmd_common_info, "is an event common information at a state")
    p.add_argument("--event", required=True, help="comma-separated state labels")
    p.add_argument("--at")
    p = add("gstp", cmd_gstp, "sure-thing principle of the decision function per player")
    p.add_argument("--player")
    p.add_argument("--samples", type=int, default=GSTP_SAMPLES)
    p.add_argument("--seed", type=int, default=0)
    p = add("agree", cmd_agree, "agreement theorem hypotheses and conclusion at a state")
    p.add_argument("--at")
    p.add_argument("--samples", type=int, default=GSTP_SAMPLES)
    p = add("axioms", cmd_axioms, "audit the belief axioms N, K, D, 4, 5")
    p.add_argument("--player")
    p.add_argument("--samples", type=int, default=AXIOM_SAMPLES)
    p.add_argument("--seed", type=int, default=0)
    p = add("credal-check", cmd_credal_check, "blindspots versus zero credal mass")
    p.add_argument("--player")
    p.add_argument("--mode", choices=("joint", "per_measure"), default="joint")
    p = add("extend", cmd_extend, "model file of the structures a game's types induce", json_flag=False)
    p.add_argument("-o", "--output")
    p = add("kd45", cmd_kd45, "type-induced relations and the KD45 audit for a game")
    p.add_argument("--b1-mode", choices=("joint", "per_measure"), default="per_measure")
    p.add_argument("--per-type", action="store_true", help="one measure must match each whole type")
    p.add_argument("--samples", type=int, default=None)
    p = add("degree", cmd_degree, "accessibility degree between two extension states")
    p.add_argument("--player", required=True)
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    p = add("enumerate", cmd_enumerate, "count properties over all relations on n states", file=False)
    p.add_argument("--n", type=int, required=True, help=f"state count, at most {ENUMERATION_CAP}")
    p = add("search-counterexample", cmd_search, "look for disagreement when blindspots differ", file=False)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--min-n", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=1_000_000)
    p.add_argument("--equal-blindspots", action="store_true")
    p.add_argument("--skip-known", action="store_true", help="do not report the built-in two-state model")
    p.add_argument("-o", "--output")
    p = add("dot", cmd_dot, "Graphviz rendering of the accessibility relations", json_flag=False)
    p.add_argument("--player")
    p.add_argument("--merged", action="store_true", help="one graph with player-labelled edges")
    p.add_argument("--degrees", action="store_true", help="label edges with accessibility degrees (games)")
    p.add_argument("-o", "--output")
    return parser


def run_command(argv: Sequence[str] | None = None, out=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    output = Output(args.json, out)
    try:
        code = args.func(args, output)
    except (DoxaError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and not isinstance(exc, DoxaError) and exc.args else exc
        print(f"doxa {args.command}: error: {msg}", file=sys.stderr)
        return BAD_INPUT
    output.finish()
    return code


def main(argv: Sequence[str] | None = None) -> int:
    return run_command(argv)


if __name__ == "__main__":
    sys.exit(main())
