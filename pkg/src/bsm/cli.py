"""Command line interface: ``bsm <command> ...``.

Exit codes: 0 success, 1 negative decision, 2 invalid input data,
3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .builders import CASE_STUDIES, BuildError, build_surface, case_study
from .data import validate_discrete
from .fileformat import ParseError, load, serialize, serialize_iso
from .groups import DEFAULT_BOUND
from .isos import REVERSING_NOTE
from .oracle import OracleLimit, brute_isos, brute_out_aut
from .out import out_aut_discrete
from .picard import factorize_pic, picard_presentation
from .search import UnsupportedBackend, find_discrete_isos, morita_equivalent

EXIT_OK, EXIT_NO, EXIT_INVALID, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


class InvalidInput(Exception):
    def __init__(self, lines):
        self.lines = lines
        super().__init__("\n".join(lines))


def _read(path):
    try:
        gr = load(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except ParseError as exc:
        raise InvalidInput([f"{path}: {exc}"]) from None
    rep = validate_discrete(gr)
    if not rep.ok:
        raise InvalidInput([f"{path}: {line}" for line in rep.lines()])
    return gr


def _emit(args, text: str, payload: dict):
    if args.machine:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


def _write(args, text: str):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rho(raw) -> Fraction:
    try:
        r = Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad period {raw!r}") from None
    if r <= 0:
        raise UsageError("period must be positive")
    return r


# commands ----------------------------------------------------------------


def cmd_validate(args) -> int:
    try:
        gr = load(args.file)
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    except ParseError as exc:
        _emit(args, f"{args.file}: {exc}", {"valid": False, "errors": [{"path": exc.path, "line": exc.line, "message": str(exc)}]})
        return EXIT_INVALID
    rep = validate_discrete(gr)
    if rep.ok:
        _emit(args, f"{args.file}: valid ({len(gr.vertices)} vertices, {len(gr.edges)} edges)",
              {"valid": True, "vertices": len(gr.vertices), "edges": len(gr.edges)})
        return EXIT_OK
    _emit(args, "\n".join(f"{args.file}: {line}" for line in rep.lines()),
          {"valid": False, "errors": [{"path": p, "message": m} for p, m in rep.errors]})
    return EXIT_INVALID


def cmd_morita(args) -> int:
    a, b = _read(args.first), _read(args.second)
    dec = morita_equivalent(a, b, args.max_abelian_entry)
    lines = []
    if dec.equivalent:
        lines.append("Morita equivalent: yes")
    elif dec.complete:
        lines.append("Morita equivalent: no")
    else:
        lines.append(f"Morita equivalent: no isomorphism found with entries bounded by {args.max_abelian_entry} (search incomplete)")
    payload = {"equivalent": dec.equivalent, "complete": dec.complete}
    if dec.equivalent and args.witness:
        w = serialize_iso(dec.witness, a, b)
        if dec.witness.reversing:
            lines.append(f"note: {REVERSING_NOTE}")
        lines.append(w.rstrip("\n"))
        payload["witness"] = json.loads(w)
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK if dec.equivalent else EXIT_NO


def cmd_outaut(args) -> int:
    gr = _read(args.file)
    out = out_aut_discrete(gr, args.max_abelian_entry)
    lines = [f"OutAut: {out.describe()}"]
    if out.kind == "finite":
        lines.append(f"automorphism classes: {len(out.representatives)}")
        for n, f in enumerate(out.representatives):
            vm = ", ".join(f"{v}->{w}" for v, w in sorted(f.vertex_map.items()))
            lines.append(f"  [{n}] {f.orientation}; {vm}")
    for note in out.notes:
        lines.append(f"note: {note}")
    inv = out.invariants()
    payload = {
        "kind": out.kind,
        "complete": out.complete,
        "order": out.order,
        "abelian": out.abelian,
        "invariants": None if inv is None else {"free_rank": inv[0], "torsion": list(inv[1])},
        "notes": list(out.notes),
    }
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_picard(args) -> int:
    gr = _read(args.file)
    p = picard_presentation(gr, args.max_abelian_entry, sign_flip=args.reversing_sign_flip)
    fac = factorize_pic(p)
    lines = [
        f"OutAut: {p.out_aut.describe()}",
        f"edges: {p.N}",
        "twist orders: " + ", ".join(f"{e}:{'infinite' if k == 0 else k}" for e, k in zip(p.edges, p.twist_orders)),
        f"Pic: {fac}",
    ]
    if fac.applicable:
        lines.append(f"continuous factors: {fac.continuous_count()}")
    for note in p.notes:
        lines.append(f"note: {note}")
    payload = {
        "applicable": fac.applicable,
        "factors": [str(f) for f in fac.factors],
        "reason": fac.reason,
        "N": p.N,
        "periods": [f"{r.numerator}/{r.denominator}" for r in p.periods],
        "twist_orders": p.twist_orders,
        "out_aut": p.out_aut.describe(),
        "complete": p.out_aut.complete,
        "sign_flip": p.sign_flip,
    }
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_build(args) -> int:
    try:
        with open(args.spec, encoding="utf-8") as fh:
            spec = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.spec}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInput([f"{args.spec}: line {exc.lineno}: {exc.msg}"]) from None
    try:
        gr = build_surface(spec)
    except BuildError as exc:
        raise InvalidInput([f"{args.spec}: {exc}"]) from None
    _write(args, serialize(gr))
    return EXIT_OK


def cmd_case_study(args) -> int:
    spec = None
    if args.spec:
        try:
            with open(args.spec, encoding="utf-8") as fh:
                spec = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read {args.spec}: {exc}") from None
    try:
        gr = case_study(args.name, _rho(args.rho), spec)
    except BuildError as exc:
        raise InvalidInput([str(exc)]) from None
    _write(args, serialize(gr))
    return EXIT_OK


def cmd_oracle(args) -> int:
    a = _read(args.first)
    b = _read(args.second) if args.second else a
    try:
        brute = brute_isos(a, b)
        fast = find_discrete_isos(a, b)
        agree = [f.key() for f in brute] == [f.key() for f in fast.isos]
        lines = [f"oracle isomorphisms: {len(brute)}", f"search isomorphisms: {len(fast.isos)}",
                 f"agree: {'yes' if agree else 'no'}"]
        payload = {"oracle_isos": len(brute), "search_isos": len(fast.isos), "isos_agree": agree}
        if not args.second:
            bo = brute_out_aut(a)
            out = out_aut_discrete(a)
            same = {}
            for f in bo.autos:
                same.setdefault(out.class_key(f), set()).add(bo.class_of[f.key()])
            part = len(same) == bo.order and all(len(s) == 1 for s in same.values())
            lines += [f"oracle OutAut order: {bo.order}", f"search OutAut order: {out.order}",
                      f"classes agree: {'yes' if part else 'no'}"]
            payload.update({"oracle_out_order": bo.order, "search_out_order": out.order, "classes_agree": part})
            agree = agree and part
    except OracleLimit as exc:
        raise UsageError(f"outside the oracle's range: {exc}") from None
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK if agree else EXIT_NO


# parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--machine", action="store_true", help="print structured JSON output")
    common.add_argument("--max-abelian-entry", type=int, default=DEFAULT_BOUND, metavar="B",
                        help="entry bound for automorphism search over infinite abelian groups (default %(default)s)")
    p = _Parser(prog="bsm", description="Morita equivalence, outer automorphisms and Picard groups of discrete data.")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("validate", parents=[common], help="check a data file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("morita", parents=[common], help="decide Morita equivalence of two data files")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--witness", action="store_true", help="print an isomorphism witness")
    s.set_defaults(func=cmd_morita)

    s = sub.add_parser("outaut", parents=[common], help="outer automorphism group")
    s.add_argument("file")
    s.set_defaults(func=cmd_outaut)

    s = sub.add_parser("picard", parents=[common], help="Picard group presentation and factorization")
    s.add_argument("file")
    s.add_argument("--reversing-sign-flip", action="store_true",
                   help="let orientation-reversing classes act by -1 on the period coordinates")
    s.set_defaults(func=cmd_picard)

    s = sub.add_parser("build", parents=[common], help="build surface data from a JSON region spec")
    s.add_argument("spec")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("case-study", parents=[common], help="write one of the named example data sets")
    s.add_argument("name", choices=CASE_STUDIES)
    s.add_argument("--rho", default="1", help="period, e.g. 3/2 (default 1)")
    s.add_argument("--spec", help="JSON spec for cosymplectic_double")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_case_study)

    s = sub.add_parser("oracle", parents=[common], help="compare the search against brute force (small finite data)")
    s.add_argument("first")
    s.add_argument("second", nargs="?")
    s.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if getattr(args, "max_abelian_entry", 1) < 0:
        sys.stderr.write("bsm: error: --max-abelian-entry must be non-negative\n")
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"bsm: error: {exc}\n")
        return EXIT_USAGE
    except InvalidInput as exc:
        for line in exc.lines:
            print(line)
        return EXIT_INVALID
    except UnsupportedBackend as exc:
        sys.stderr.write(f"bsm: unsupported: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
