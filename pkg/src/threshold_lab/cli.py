"""Command line interface: ``threshold-lab <command> ...``.

Exit codes: 0 when a verdict was produced, 2 when a search was inconclusive
at its cap, 1 on input errors.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from typing import Optional

from . import enumeration as en
from .families import FamilyError, FamilySpec, generate
from .game import GameError, SimpleGame, is_complete, partition_players, swap_certificate, trivial_players
from .invariants import (CharacteristicInvariants, extract_invariants, reconstruct,
                         shift_maximal_losing_types, validate_invariants)
from .trades import Mode, expand_vectorial, find_failure, verify_transform
from .invariants import class_partition
from .weighted import decide_weighted, mp_parameters

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INCONCLUSIVE = 2


class InputError(Exception):
    pass


# -- documents ----------------------------------------------------------------

EXPLICIT_KEYS = {"n", "minimal_winning"}
INVARIANT_KEYS = {"classes", "shift_minimal"}


@dataclass
class GameDocument:
    """A parsed input: an explicit game, invariants, or a weighted game turned explicit."""

    game: Optional[SimpleGame] = None
    invariants: Optional[CharacteristicInvariants] = None
    source_form: str = "explicit"

    @classmethod
    def from_json(cls, doc) -> "GameDocument":
        if not isinstance(doc, dict):
            raise InputError("game document must be a JSON object")
        forms = []
        if "minimal_winning" in doc:
            forms.append("explicit")
        if "shift_minimal" in doc:
            forms.append("invariants")
        if "quota" in doc:
            forms.append("weighted")
        if len(forms) != 1:
            raise InputError("document must contain exactly one of 'minimal_winning', "
                             f"'shift_minimal' or 'quota' (found {forms or 'none'})")
        form = forms[0]
        try:
            if form == "explicit":
                n = _int_field(doc, "n")
                coalitions = doc["minimal_winning"]
                if not isinstance(coalitions, list):
                    raise InputError("field 'minimal_winning' must be a list of player lists")
                for k, c in enumerate(coalitions):
                    if not isinstance(c, list) or not all(isinstance(p, int) for p in c):
                        raise InputError(f"field 'minimal_winning[{k}]' must be a list of integers")
                    if any(not 0 <= p < n for p in c):
                        raise InputError(f"field 'minimal_winning[{k}]' has a player outside 0..{n - 1}")
                return cls(game=SimpleGame.from_lists(n, coalitions), source_form=form)
            if form == "invariants":
                classes = _int_list(doc, "classes")
                rows = doc["shift_minimal"]
                if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
                    raise InputError("field 'shift_minimal' must be a list of rows")
                ci = CharacteristicInvariants(tuple(classes), tuple(tuple(r) for r in rows))
                ok, errors = validate_invariants(ci)
                if not ok:
                    raise InputError("invalid invariants: " + "; ".join(errors))
                return cls(invariants=ci, source_form=form)
            quota = doc["quota"]
            if "weights" in doc:
                weights = doc["weights"]
                if not isinstance(weights, list):
                    raise InputError("field 'weights' must be a list")
            elif "class_weights" in doc:
                cw = _num_list(doc, "class_weights")
                sizes = _int_list(doc, "classes")
                if len(cw) != len(sizes):
                    raise InputError("fields 'class_weights' and 'classes' differ in length")
                weights = [w for w, s in zip(cw, sizes) for _ in range(s)]
            else:
                raise InputError("weighted form needs 'weights' or 'class_weights' with 'classes'")
            return cls(game=SimpleGame.from_weights(quota, weights), source_form=form)
        except KeyError as exc:
            raise InputError(f"missing field {exc.args[0]!r}") from None
        except GameError as exc:
            raise InputError(str(exc)) from None

    def explicit(self) -> SimpleGame:
        if self.game is None:
            self.game = reconstruct(self.invariants)
        return self.game

    def complete(self) -> bool:
        return self.invariants is not None or is_complete(self.game)

    def characteristic(self) -> CharacteristicInvariants:
        if self.invariants is None:
            self.invariants, _ = extract_invariants(self.game)
        return self.invariants


def _int_field(doc, key) -> int:
    v = doc[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise InputError(f"field {key!r} must be an integer")
    return v


def _int_list(doc, key) -> list:
    v = doc[key]
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise InputError(f"field {key!r} must be a list of integers")
    return v


def _num_list(doc, key) -> list:
    v = doc[key]
    if not isinstance(v, list) or not all(isinstance(x, (int, float)) for x in v):
        raise InputError(f"field {key!r} must be a list of numbers")
    return v


def load_document(path: Optional[str], family: Optional[str], params: Optional[str]) -> GameDocument:
    if family:
        return GameDocument(invariants=_family(family, params), source_form="invariants")
    if not path:
        raise InputError("give a game file (or '-' for stdin) or --family")
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return GameDocument.from_json(doc)


def parse_params(text: Optional[str]) -> dict:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise InputError(f"parameter {item!r} is not of the form key=value")
        k, v = item.split("=", 1)
        v = v.strip()
        out[k.strip()] = int(v) if v.lstrip("-").isdigit() else v
    return out


def _family(name: str, params: Optional[str]) -> CharacteristicInvariants:
    try:
        return generate(FamilySpec(name, parse_params(params)))
    except FamilyError as exc:
        raise InputError(str(exc)) from None


# -- output ----------------------------------------------------------------------

def _emit(obj, pretty: bool, out=None) -> None:
    out = out or sys.stdout
    if pretty:
        out.write(_render(obj) + "\n")
    else:
        out.write(json.dumps(obj) + "\n")


def _render(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_render(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_render(v, indent) if isinstance(v, dict) else f"{pad}- {_inline(v)}" for v in obj)
    return pad + _inline(obj)


def _flat(v) -> bool:
    if isinstance(v, dict):
        return False
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in v)


def _inline(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if v is None:
        return "-"
    return str(v)


def _explicit_doc(game: SimpleGame) -> dict:
    return {"n": game.n, "minimal_winning": game.to_lists()}


# -- commands --------------------------------------------------------------------

def cmd_analyze(args) -> int:
    doc = load_document(args.file, args.family, args.params)
    report: dict = {}
    if doc.game is not None and not is_complete(doc.game):
        g = doc.game
        part = partition_players(g)
        x1, x2, i, j = swap_certificate(g)
        vet, nul = trivial_players(g)
        report.update({"complete": False, "n": g.n, "t": part.t,
                       "classes": [list(c) for c in part.classes],
                       "trivial_players": {"vetoers": sorted(vet), "nulls": sorted(nul)},
                       "weighted": False,
                       "swap_certificate": {"x1": _members(x1), "x2": _members(x2), "i": i, "j": j}})
        _emit(report, args.pretty)
        return EXIT_OK
    ci = doc.characteristic()
    report.update({"complete": True, "n": ci.n, "t": ci.t, "r": ci.r,
                   "invariants": ci.to_dict(),
                   "Y": [list(y) for y in shift_maximal_losing_types(ci)]})
    if doc.game is not None:
        _, part = extract_invariants(doc.game)
        vet, nul = trivial_players(doc.game)
        report["classes"] = [list(c) for c in part.classes]
    else:
        g = reconstruct(ci)
        vet, nul = trivial_players(g)
    report["trivial_players"] = {"vetoers": sorted(vet), "nulls": sorted(nul)}
    rep = decide_weighted(doc.game if doc.game is not None else ci)
    report["weighted"] = rep is not None
    if rep is not None:
        report["representation"] = rep.to_dict()
        report["representation"]["verified"] = rep.verify(ci)
        if doc.game is not None:
            report["representation"]["player_weights"] = rep.player_weights()
    if ci.t == 2:
        report["mp"] = mp_parameters(ci).to_dict()
    _emit(report, args.pretty)
    return EXIT_OK


def _members(mask: int) -> list:
    return [p for p in range(mask.bit_length()) if mask >> p & 1]


def cmd_certify(args) -> int:
    doc = load_document(args.file, args.family, args.params)
    mode = Mode.parse(args.mode)
    if doc.game is not None and not is_complete(doc.game):
        x1, x2, i, j = swap_certificate(doc.game)
        _emit({"status": "not-weighted", "complete": False,
               "swap_certificate": {"x1": _members(x1), "x2": _members(x2), "i": i, "j": j}}, args.pretty)
        return EXIT_OK
    ci = doc.characteristic()
    rep = decide_weighted(doc.game if doc.game is not None else ci)
    if rep is not None:
        out = {"status": "weighted", "representation": rep.to_dict()}
        if doc.game is not None:
            out["representation"]["player_weights"] = rep.player_weights()
        _emit(out, args.pretty)
        return EXIT_OK
    report = find_failure(ci, mode, args.max_k)
    if not report.fails:
        _emit({"status": "inconclusive", "mode": mode.value, "max_k": args.max_k,
               "verdict": report.verdict}, args.pretty)
        return EXIT_INCONCLUSIVE
    out = {"status": "not-weighted", "certificate": report.certificate.to_dict(mode)}
    if args.expand:
        if doc.game is not None:
            _, part = extract_invariants(doc.game)
            game = doc.game
        else:
            part = class_partition(ci.nbar)
            game = reconstruct(ci)
        transform = expand_vectorial(report.certificate, part)
        out["transform"] = transform.to_dict()
        out["transform"]["status"] = verify_transform(game, transform).value
    _emit(out, args.pretty)
    return EXIT_OK


def _n_range(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise InputError(f"--n expects N or A..B, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise InputError(f"bad player range {text!r}")
    return list(range(lo, hi + 1))


def cmd_enumerate(args) -> int:
    ns = _n_range(args.n)
    if args.cap_k < 2:
        raise InputError("--cap-k must be at least 2")
    mode = Mode.parse(args.mode)
    reports = []
    records_out = open(args.records, "w", encoding="utf-8") if args.records else None
    try:
        for n in ns:
            if records_out is not None:
                report = en.CountReport(n, args.t, args.r, mode, args.cap_k)
                for rec in en.classify_records(n, args.t, args.r, args.cap_k):
                    k = rec.k_trade_fail if mode is Mode.TRADE else rec.k_invariant_fail
                    report.buckets["weighted" if rec.weighted else en.bucket_name(k)] += 1
                    records_out.write(json.dumps(rec.to_dict()) + "\n")
            else:
                report = en.classify_count(n, args.t, args.r, mode, args.cap_k, args.threads)
            reports.append(report)
    finally:
        if records_out is not None:
            records_out.close()
    if args.csv:
        header = en.CSV_HEADER + (en.CSV_EXTENDED if args.extended else [])
        if args.csv == "-":
            _write_csv(sys.stdout, reports, header, args)
        else:
            with open(args.csv, "w", newline="", encoding="utf-8") as fh:
                _write_csv(fh, reports, header, args)
    if args.csv != "-":
        _emit({"reports": [r.to_dict() for r in reports]}, args.pretty)
    return EXIT_INCONCLUSIVE if any(r.buckets.get(en.bucket_name(None)) for r in reports) else EXIT_OK


def _write_csv(fh, reports, header, args) -> None:
    w = csv.writer(fh, lineterminator="\n")
    if args.header:
        w.writerow(header)
    for r in reports:
        w.writerow(r.csv_row(args.extended))


def cmd_formulas(args) -> int:
    names = en.FORMULAS if args.check == "all" else [args.check]
    out = []
    for name in names:
        try:
            out.append(en.formula_check(name, args.n_max, args.n_min).to_dict())
        except ValueError as exc:
            raise InputError(str(exc)) from None
    _emit({"checks": out, "all_match": all(c["all_match"] for c in out)}, args.pretty)
    return EXIT_OK


def cmd_family(args) -> int:
    ci = _family(args.name, args.params)
    _emit(_convert(GameDocument(invariants=ci, source_form="invariants"), args.to), args.pretty)
    return EXIT_OK


def _convert(doc: GameDocument, to: str) -> dict:
    if to == "explicit":
        return _explicit_doc(doc.explicit())
    if not doc.complete():
        raise InputError("game is not complete; only the explicit form exists")
    if to == "invariants":
        return doc.characteristic().to_dict()
    rep = decide_weighted(doc.game if doc.game is not None else doc.characteristic())
    if rep is None:
        raise InputError("game is not weighted; no weighted form exists")
    if doc.game is not None:
        return {"quota": rep.quota, "weights": rep.player_weights()}
    return rep.to_dict()


def cmd_convert(args) -> int:
    doc = load_document(args.file, args.family, args.params)
    _emit(_convert(doc, args.to), args.pretty)
    return EXIT_OK


def cmd_scan(args) -> int:
    try:
        rep = en.conjecture_scan(args.target, args.n_max, args.n_min)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(rep.to_dict(), args.pretty)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="threshold-lab",
                                description="Weightedness, trade robustness and enumeration of simple games.")
    p.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    sub = p.add_subparsers(dest="command", required=True)

    def game_input(sp):
        sp.add_argument("file", nargs="?", help="game JSON file, or - for stdin")
        sp.add_argument("--family", help="use a named family instead of a file")
        sp.add_argument("--params", help="family parameters as k=v,...")
        sp.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS)

    a = sub.add_parser("analyze", help="structure, invariants and weightedness of a game")
    game_input(a)
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("certify", help="weights, or a minimal trade certificate")
    game_input(c)
    c.add_argument("--mode", default="trade", help="trade or invariant")
    c.add_argument("--max-k", type=int, default=6)
    c.add_argument("--expand", action="store_true", help="also emit the player-level transform")
    c.set_defaults(func=cmd_certify)

    e = sub.add_parser("enumerate", help="classify all complete games")
    e.add_argument("--n", required=True, help="player count N or range A..B")
    e.add_argument("--t", type=int)
    e.add_argument("--r", type=int)
    e.add_argument("--cap-k", type=int, default=en.DEFAULT_CAP)
    e.add_argument("--mode", default="trade")
    e.add_argument("--records", help="write one JSON record per game to this file")
    e.add_argument("--csv", help="write table rows to this file, or - for stdout")
    e.add_argument("--extended", action="store_true", help="add N-4T.. and ROBUST columns")
    e.add_argument("--header", action="store_true", help="write a CSV header line")
    e.add_argument("--threads", type=int, default=None,
                   help=f"worker processes (default ${en.THREADS_ENV} or 1)")
    e.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS)
    e.set_defaults(func=cmd_enumerate)

    f = sub.add_parser("formulas", help="closed-form counts against enumeration")
    f.add_argument("--check", default="all", help="one of " + ", ".join(en.FORMULAS) + " or all")
    f.add_argument("--n-max", type=int, required=True)
    f.add_argument("--n-min", type=int, default=1)
    f.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS)
    f.set_defaults(func=cmd_formulas)

    fa = sub.add_parser("family", help="emit a named game or family member")
    fa.add_argument("name")
    fa.add_argument("--params", help="k=v,...")
    fa.add_argument("--to", choices=["invariants", "explicit", "weighted"], default="invariants")
    fa.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS)
    fa.set_defaults(func=cmd_family)

    cv = sub.add_parser("convert", help="convert between game forms")
    game_input(cv)
    cv.add_argument("--to", choices=["invariants", "explicit", "weighted"], required=True)
    cv.set_defaults(func=cmd_convert)

    s = sub.add_parser("scan", help="search for counterexamples to open conjectures")
    s.add_argument("target", choices=en.SCANS)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--n-min", type=int, default=1)
    s.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS)
    s.set_defaults(func=cmd_scan)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
