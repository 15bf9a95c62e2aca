"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 not applicable or hypothesis
failed, 3 not normalizable or no twist found, 4 I/O, parse or usage error.
"""

import argparse
import json
import sys

from . import io
from .automata import export_cycle_dot, export_moore_dot
from .bimodule import extract_twist, left_act_word
from .errors import HypothesisFailed, LevycertError, ParseError, SchemeValidationError
from .freegroup import format_twist, format_word, parse_twist
from .obstruction import (
    build_m0,
    construct_levy_length_l,
    construct_obstructed,
    full_period_commutes,
    omega_candidates,
    verify_levy_certificate,
)
from .scheme import check_omega_hypothesis, classify_scheme, kneading_skeleton, validate_scheme


def _read(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _omega(text):
    return [z.strip() for z in text.split(",") if z.strip()] if text else None


def _skeleton_dot(sk):
    lines = ["digraph skeleton {"]
    for z in sk.states:
        lines.append(f'  "s_{z}";')
    for a, b in sk.edges:
        lines.append(f'  "s_{a}" -> "s_{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_validate(args):
    s = io.parse_scheme_json(_read(args.scheme), validate=False)
    violations = validate_scheme(s)
    if violations:
        return 1, {"valid": False, "violations": [
            {"axiom": v.axiom, "message": v.message} for v in violations]}
    return 0, {"valid": True}


def cmd_classify(args):
    s = io.parse_scheme_json(_read(args.scheme))
    cls = classify_scheme(s)
    out = {
        "kind": cls.kind,
        "hyperbolic": cls.hyperbolic,
        "periodic": cls.periodic,
        "periods": [{"points": list(p.points), "attractor": p.attractor} for p in cls.periods],
        "cases": sorted(cls.cases),
    }
    omega = _omega(args.omega)
    if omega:
        out["omega_hypothesis"] = check_omega_hypothesis(s, omega)
    return 0, out


def cmd_skeleton(args):
    sk = kneading_skeleton(io.parse_scheme_json(_read(args.scheme)))
    if args.format == "dot":
        return 0, _skeleton_dot(sk)
    return 0, {"states": list(sk.states), "edges": [list(e) for e in sk.edges]}


def _pick_omega(s, text):
    omega = _omega(text)
    if omega is not None:
        return omega
    for _, _, om in omega_candidates(s):
        if check_omega_hypothesis(s, om):
            return sorted(om)
    raise ParseError("no --omega given and no suitable invariant set found")


def cmd_construct_m0(args):
    s = io.parse_scheme_json(_read(args.scheme))
    omega = _pick_omega(s, args.omega)
    if args.levy_length and args.levy_length > 1:
        aut, plan = build_m0(s, omega, args.levy_length)
    else:
        if not check_omega_hypothesis(s, omega):
            raise HypothesisFailed("omega does not satisfy the incoming-arrow bound")
        aut, plan = build_m0(s, omega)
    if args.format == "dot":
        return 0, export_moore_dot(aut, "M0")
    doc = io.automaton_to_dict(aut)
    doc["order"] = list(plan.order)
    doc["omega"] = list(plan.omega)
    return 0, doc


def cmd_construct(args):
    s = io.parse_scheme_json(_read(args.scheme))
    omega = _omega(args.omega)
    if args.levy_length and args.levy_length > 1:
        if omega is None:
            raise ParseError("--levy-length needs --omega")
        cert = construct_levy_length_l(s, omega, args.levy_length)
        doc = io.certificate_to_dict(cert)
        doc["whole_period_commutes"] = full_period_commutes(cert)
    else:
        cert = construct_obstructed(s, omega)
        doc = io.certificate_to_dict(cert)
    if args.format == "dot":
        return 0, export_moore_dot(cert.element.kneading, "M_g")
    return 0, doc


def cmd_verify(args):
    cert = io.parse_certificate_json(_read(args.certificate))
    ok, transcript = verify_levy_certificate(cert)
    return (0 if ok else 1), {"verified": ok, "transcript": transcript}


def cmd_act(args):
    m = io.parse_element_json(_read(args.bimodule))
    phi = parse_twist(args.word, m.rank)
    out = left_act_word(phi, m, method=args.method)
    return 0, io.element_to_dict(out)


def cmd_extract_twist(args):
    aut = io.parse_automaton_json(_read(args.automaton))
    got = extract_twist(aut, bound=args.conjugator_bound)
    kneading = got.kneading
    if args.format == "dot":
        return 0, export_moore_dot(kneading, "kneading")
    return 0, {
        "automaton": io.automaton_to_dict(kneading),
        "conjugator": format_word(got.conjugator, aut.names),
        "twist": format_twist(got.twist),
    }


def cmd_export_dot(args):
    text = _read(args.automaton)
    doc = io._load(text)
    if "automaton" in doc and "states" not in doc:
        doc = doc["automaton"]
    aut = io.automaton_from_dict(doc)
    return 0, export_cycle_dot(aut) if args.cycles else export_moore_dot(aut)


def build_parser():
    p = argparse.ArgumentParser(prog="levycert",
                                description="Mapping schemes, kneading automata and Levy certificates.")
    p.add_argument("--out", help="write the result here instead of stdout")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--out", default=argparse.SUPPRESS)
        sp.add_argument("--format", choices=("json", "dot"), default=argparse.SUPPRESS)
        return sp

    sp = add("validate", cmd_validate, "check the scheme axioms")
    sp.add_argument("scheme")
    sp = add("classify", cmd_classify, "periods, kind and obstruction cases")
    sp.add_argument("scheme")
    sp.add_argument("--omega")
    sp = add("skeleton", cmd_skeleton, "arrows of the kneading automaton")
    sp.add_argument("scheme")
    sp = add("construct-m0", cmd_construct_m0, "kneading automaton adapted to omega")
    sp.add_argument("scheme")
    sp.add_argument("--omega")
    sp.add_argument("--levy-length", type=int, default=1)
    sp = add("construct", cmd_construct, "build and verify a Levy certificate")
    sp.add_argument("scheme")
    sp.add_argument("--omega")
    sp.add_argument("--levy-length", type=int, default=1)
    sp = add("verify", cmd_verify, "recheck a certificate")
    sp.add_argument("certificate")
    sp = add("act", cmd_act, "left-act a twist word on a bimodule element")
    sp.add_argument("bimodule")
    sp.add_argument("--word", required=True, help="e.g. 'a(2,1)*a(1,2)^-1'")
    sp.add_argument("--method", choices=("auto", "rules", "direct"), default="auto")
    sp = add("extract-twist", cmd_extract_twist, "split an automaton into kneading part and twist")
    sp.add_argument("automaton")
    sp.add_argument("--conjugator-bound", type=int, default=8)
    sp = add("export-dot", cmd_export_dot, "Moore or cycle diagram as DOT")
    sp.add_argument("automaton")
    sp.add_argument("--cycles", action="store_true", help="draw the cycle diagram instead")
    return p


def _emit(result, out):
    text = result if isinstance(result, str) else json.dumps(result, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None):
    """Run one command; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 4
    try:
        code, result = args.func(args)
    except SchemeValidationError as exc:
        _emit({"valid": False, "violations": [
            {"axiom": getattr(v, "axiom", ""), "message": getattr(v, "message", str(v))}
            for v in exc.violations]}, None)
        return exc.exit_code
    except LevycertError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    try:
        _emit(result, args.out)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 4
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
