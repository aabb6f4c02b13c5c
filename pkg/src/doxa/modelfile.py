"""JSON model and game files.

Probabilities and rational decision values are written as strings ``"p/q"``
(or ``"p"`` for integers) so nothing passes through floating point.  A model
file looks like::

    {
      "states": ["w1", "w2"],
      "players": ["1"],
      "relations": {"1": [["w1", "w2"], ["w2", "w2"]]},
      "credal": {"1": [{"w2": "1"}]},
      "decision": {"kind": "posterior", "prior": {"w1": "1/2", "w2": "1/2"}, "target": ["w2"]},
      "actual": "w1"
    }

Each player is described either under ``relations`` (a list of pairs) or
under ``info`` (a total map from state to information set), not both.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from doxa.beliefs import CredalSet
from doxa.decisions import DecisionFunction, Posterior, Table
from doxa.errors import ParseError, ValidationError
from doxa.frames import InfoStructure, Relation, StateSpace, bits, info_from_relation
from doxa.games import EpistemicExtension, StrategicGame, relation_from_types
from doxa.group import Profile

RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(raw: Any, path: str) -> Fraction:
    if isinstance(raw, bool) or isinstance(raw, float):
        raise ValidationError(path, f"expected an exact rational string like \"1/3\", got {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if not isinstance(raw, str) or not RATIONAL.match(raw.strip()):
        raise ValidationError(path, f"expected a rational \"p/q\", got {raw!r}")
    num, _, den = raw.strip().partition("/")
    if den and int(den) == 0:
        raise ValidationError(path, "denominator must be positive")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_value(raw: Any, path: str):
    """A decision value: rationals are recognized, other strings are labels."""
    if isinstance(raw, str) and not RATIONAL.match(raw.strip()):
        return raw
    return parse_rational(raw, path)


def format_value(v) -> str:
    return v if isinstance(v, str) else format_rational(v)


def _load(data: bytes | str, what: str) -> dict:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"byte {exc.start}", "input is not valid UTF-8") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}", exc.msg) from None
    if not isinstance(doc, dict):
        raise ValidationError("$", f"a {what} file must be a JSON object")
    return doc


def _list_of_str(raw: Any, path: str) -> tuple[str, ...]:
    if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
        raise ValidationError(path, "expected a list of strings")
    return tuple(raw)


def _obj(raw: Any, path: str) -> dict:
    if not isinstance(raw, dict):
        raise ValidationError(path, "expected an object")
    return raw


def _labels(space: StateSpace, raw: Any, path: str) -> int:
    names = _list_of_str(raw, path)
    for k, s in enumerate(names):
        if s not in space.labels:
            raise ValidationError(f"{path}[{k}]", f"unknown state {s!r}")
    return space.mask_of(names)


# -- model files -----------------------------------------------------------------


@dataclass(frozen=True)
class ModelFile:
    profile: Profile
    credal: dict[str, CredalSet] = field(default_factory=dict)
    decision: DecisionFunction | None = None
    actual: str | None = None
    form: dict[str, str] = field(default_factory=dict)  # player -> "relations" | "info"
    extension: EpistemicExtension | None = None

    @property
    def space(self) -> StateSpace:
        return self.profile.space

    @property
    def players(self) -> tuple[str, ...]:
        return self.profile.players


def _parse_credal(space: StateSpace, raw: Any, path: str) -> CredalSet:
    if not isinstance(raw, list) or not raw:
        raise ValidationError(path, "expected a nonempty list of measures")
    measures = []
    for m, pmf in enumerate(raw):
        pmf = _obj(pmf, f"{path}[{m}]")
        probs = [Fraction(0)] * space.n
        for s, p in pmf.items():
            if s not in space.labels:
                raise ValidationError(f"{path}[{m}].{s}", f"unknown state {s!r}")
            probs[space.index(s)] = parse_rational(p, f"{path}[{m}].{s}")
        if any(p < 0 for p in probs):
            raise ValidationError(f"{path}[{m}]", "probabilities must be nonnegative")
        if sum(probs) != 1:
            raise ValidationError(f"{path}[{m}]", f"probabilities sum to {format_rational(sum(probs))}, not 1")
        measures.append(tuple(probs))
    return CredalSet(space, tuple(measures))


def _parse_decision(space: StateSpace, raw: Any) -> DecisionFunction:
    raw = _obj(raw, "decision")
    kind = raw.get("kind")
    if kind == "posterior":
        prior_raw = _obj(raw.get("prior"), "decision.prior")
        prior = [Fraction(0)] * space.n
        for s, p in prior_raw.items():
            if s not in space.labels:
                raise ValidationError(f"decision.prior.{s}", f"unknown state {s!r}")
            prior[space.index(s)] = parse_rational(p, f"decision.prior.{s}")
        if any(p < 0 for p in prior):
            raise ValidationError("decision.prior", "probabilities must be nonnegative")
        if sum(prior) != 1:
            raise ValidationError("decision.prior", f"prior sums to {format_rational(sum(prior))}, not 1")
        target = _labels(space, raw.get("target"), "decision.target")
        return Posterior(space, tuple(prior), target)
    if kind == "table":
        entries = {}
        rows = raw.get("entries", [])
        if not isinstance(rows, list):
            raise ValidationError("decision.entries", "expected a list")
        for k, row in enumerate(rows):
            row = _obj(row, f"decision.entries[{k}]")
            mask = _labels(space, row.get("event"), f"decision.entries[{k}].event")
            if mask in entries:
                raise ValidationError(f"decision.entries[{k}]", "event listed twice")
            if "value" not in row:
                raise ValidationError(f"decision.entries[{k}]", "missing value")
            entries[mask] = parse_value(row["value"], f"decision.entries[{k}].value")
        default = raw.get("default")
        default = None if default is None else parse_value(default, "decision.default")
        return Table(space, entries, default)
    raise ValidationError("decision.kind", f"expected \"posterior\" or \"table\", got {kind!r}")


def parse_model(data: bytes | str) -> ModelFile:
    doc = _load(data, "model")
    for key in doc:
        if key not in ("states", "players", "relations", "info", "credal", "decision", "actual"):
            raise ValidationError(key, "unknown field")
    if "states" not in doc:
        raise ValidationError("states", "missing field")
    space = StateSpace(_list_of_str(doc["states"], "states"))
    players = _list_of_str(doc.get("players"), "players")
    if not players:
        raise ValidationError("players", "at least one player is required")
    if len(set(players)) != len(players):
        raise ValidationError("players", "duplicate player identifier")
    relations = _obj(doc.get("relations", {}), "relations")
    info = _obj(doc.get("info", {}), "info")
    for key in list(relations) + list(info):
        if key not in players:
            raise ValidationError(f"relations.{key}" if key in relations else f"info.{key}", "unknown player")

    structures = []
    form = {}
    for p in players:
        if (p in relations) == (p in info):
            raise ValidationError(f"players.{p}", "give exactly one of a relation or an information map")
        if p in relations:
            pairs = relations[p]
            if not isinstance(pairs, list):
                raise ValidationError(f"relations.{p}", "expected a list of pairs")
            rows = [0] * space.n
            for k, pair in enumerate(pairs):
                if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair)):
                    raise ValidationError(f"relations.{p}[{k}]", "expected a pair of state labels")
                for x in pair:
                    if x not in space.labels:
                        raise ValidationError(f"relations.{p}[{k}]", f"unknown state {x!r}")
                rows[space.index(pair[0])] |= 1 << space.index(pair[1])
            structures.append(info_from_relation(Relation(space, tuple(rows))))
            form[p] = "relations"
        else:
            imap = _obj(info[p], f"info.{p}")
            sets = []
            for s in space.labels:
                if s not in imap:
                    raise ValidationError(f"info.{p}", f"information map is not total, missing {s!r}")
                sets.append(_labels(space, imap[s], f"info.{p}.{s}"))
            for s in imap:
                if s not in space.labels:
                    raise ValidationError(f"info.{p}.{s}", f"unknown state {s!r}")
            structures.append(InfoStructure(space, tuple(sets)))
            form[p] = "info"
    profile = Profile(space, players, tuple(structures))

    credal_raw = _obj(doc.get("credal", {}), "credal")
    credal = {}
    for p, raw in credal_raw.items():
        if p not in players:
            raise ValidationError(f"credal.{p}", "unknown player")
        credal[p] = _parse_credal(space, raw, f"credal.{p}")

    decision = _parse_decision(space, doc["decision"]) if doc.get("decision") is not None else None
    actual = doc.get("actual")
    if actual is not None and actual not in space.labels:
        raise ValidationError("actual", f"unknown state {actual!r}")
    return ModelFile(profile, credal, decision, actual, form)


def model_to_dict(model: ModelFile, form: str | None = None) -> dict:
    """Canonical document for ``model``; ``form`` forces relations or info maps."""
    sp = model.space
    doc: dict[str, Any] = {"states": list(sp.labels), "players": list(model.players)}
    relations: dict[str, Any] = {}
    info: dict[str, Any] = {}
    for p, s in model.profile.items():
        use = form or model.form.get(p, "info")
        if use == "relations":
            relations[p] = [[sp.labels[a], sp.labels[b]] for a in range(sp.n) for b in bits(s.sets[a])]
        else:
            info[p] = {lab: list(sp.labels_of(m)) for lab, m in zip(sp.labels, s.sets)}
    if relations:
        doc["relations"] = relations
    if info:
        doc["info"] = info
    if model.credal:
        doc["credal"] = {
            p: [
                {sp.labels[k]: format_rational(x) for k, x in enumerate(m) if x}
                for m in model.credal[p].measures
            ]
            for p in model.players
            if p in model.credal
        }
    f = model.decision
    if isinstance(f, Posterior):
        doc["decision"] = {
            "kind": "posterior",
            "prior": {sp.labels[k]: format_rational(x) for k, x in enumerate(f.prior) if x},
            "target": list(sp.labels_of(f.target)),
        }
    elif isinstance(f, Table):
        dec: dict[str, Any] = {
            "kind": "table",
            "entries": [
                {"event": list(sp.labels_of(mask)), "value": format_value(v)}
                for mask, v in sorted(f.entries.items())
            ],
        }
        if f.default is not None:
            dec["default"] = format_value(f.default)
        doc["decision"] = dec
    if model.actual is not None:
        doc["actual"] = model.actual
    return doc


def _flat(value: Any) -> bool:
    items = value.values() if isinstance(value, dict) else value
    return not any(isinstance(x, (dict, list)) for x in items)


def dump_json(value: Any, depth: int = 0) -> str:
    """Indented JSON that keeps lists and objects of plain values on one line."""
    if not isinstance(value, (dict, list)) or _flat(value):
        return json.dumps(value, ensure_ascii=False)
    pad = "  " * (depth + 1)
    if isinstance(value, dict):
        body = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {dump_json(v, depth + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(body) + "\n" + "  " * depth + "}"
    body = [pad + dump_json(v, depth + 1) for v in value]
    return "[\n" + ",\n".join(body) + "\n" + "  " * depth + "]"


def serialize_model(model: ModelFile, form: str | None = None) -> str:
    return dump_json(model_to_dict(model, form)) + "\n"


# -- game files --------------------------------------------------------------------


@dataclass(frozen=True)
class GameFile:
    extension: EpistemicExtension
    credal: dict[str, CredalSet] | None = None

    @property
    def game(self) -> StrategicGame:
        return self.extension.game


def _profile_key(raw: str, owners: tuple[str, ...], game: StrategicGame, path: str) -> tuple[str, ...]:
    parts = tuple(raw.split(",")) if raw else ()
    if len(parts) != len(owners):
        raise ValidationError(path, f"profile {raw!r} should list actions of {', '.join(owners)}")
    for q, a in zip(owners, parts):
        if a not in game.actions[q]:
            raise ValidationError(path, f"{a!r} is not an action of player {q}")
    return parts


def parse_game(data: bytes | str) -> GameFile:
    doc = _load(data, "game")
    for key in doc:
        if key not in ("players", "actions", "payoffs", "types", "credal"):
            raise ValidationError(key, "unknown field")
    players = _list_of_str(doc.get("players"), "players")
    actions_raw = _obj(doc.get("actions"), "actions")
    actions = {}
    for p in players:
        if p not in actions_raw:
            raise ValidationError(f"actions.{p}", "missing action list")
        actions[p] = _list_of_str(actions_raw[p], f"actions.{p}")
    for p in actions_raw:
        if p not in players:
            raise ValidationError(f"actions.{p}", "unknown player")
    bare = StrategicGame(players, actions)

    payoffs_raw = _obj(doc.get("payoffs", {}), "payoffs")
    payoffs = {}
    for p, table in payoffs_raw.items():
        if p not in players:
            raise ValidationError(f"payoffs.{p}", "unknown player")
        table = _obj(table, f"payoffs.{p}")
        payoffs[p] = {
            _profile_key(k, players, bare, f"payoffs.{p}.{k}"): parse_rational(v, f"payoffs.{p}.{k}")
            for k, v in table.items()
        }
    game = StrategicGame(players, actions, payoffs)

    types_raw = _obj(doc.get("types"), "types")
    types = {}
    for p in players:
        if p not in types_raw or not isinstance(types_raw[p], list):
            raise ValidationError(f"types.{p}", "expected a list of types")
        opp = game.opponents(p)
        listed = []
        for k, t in enumerate(types_raw[p]):
            t = _obj(t, f"types.{p}[{k}]")
            listed.append(
                {
                    _profile_key(key, opp, game, f"types.{p}[{k}].{key}"): parse_rational(v, f"types.{p}[{k}].{key}")
                    for key, v in t.items()
                }
            )
        types[p] = tuple(listed)
    for p in types_raw:
        if p not in players:
            raise ValidationError(f"types.{p}", "unknown player")
    ext = EpistemicExtension(game, types)

    credal = None
    if doc.get("credal") is not None:
        credal_raw = _obj(doc["credal"], "credal")
        credal = {}
        for p, raw in credal_raw.items():
            if p not in players:
                raise ValidationError(f"credal.{p}", "unknown player")
            credal[p] = _parse_credal(ext.space, raw, f"credal.{p}")
    return GameFile(ext, credal)


def extension_model(gf: GameFile) -> ModelFile:
    """The model file of the belief structures a game's types induce."""
    ext = gf.extension
    structures = tuple(info_from_relation(relation_from_types(ext, p)) for p in ext.players)
    profile = Profile(ext.space, ext.players, structures)
    return ModelFile(profile, dict(gf.credal or {}), form={p: "info" for p in ext.players}, extension=ext)


def load(data: bytes | str) -> ModelFile:
    """Parse either kind of file; games are turned into their extension model."""
    doc = _load(data, "model")
    if "actions" in doc:
        return extension_model(parse_game(data))
    return parse_model(data)


def read_file(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(path, exc.strerror or str(exc)) from None


__all__ = [
    "ModelFile",
    "GameFile",
    "parse_model",
    "parse_game",
    "serialize_model",
    "model_to_dict",
    "extension_model",
    "load",
    "parse_rational",
    "format_rational",
]
