"""JSON formats for schemes, automata, bimodule elements and certificates.

Every document carries ``"version": 1``; other versions are rejected.
"""

import json
import re

from .automata import GroupAutomaton
from .bimodule import BimoduleElement
from .errors import ParseError, SchemeValidationError
from .freegroup import format_twist, parse_twist, parse_word
from .obstruction import Check, LevyCertificate, OmegaPlan
from .scheme import MappingScheme, SchemeViolation, validate_scheme
from .wreath import Permutation, WreathRecursion

VERSION = 1

_NAME = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")


def _load(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc


def _check_version(doc, what):
    if not isinstance(doc, dict):
        raise ParseError(f"{what} document must be a JSON object")
    v = doc.get("version", VERSION)
    if v != VERSION:
        raise ParseError(f"unsupported {what} version {v!r}")


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# ------------------------------------------------------------------ schemes

def scheme_to_dict(s):
    return {
        "version": VERSION,
        "degree": s.degree,
        "infinity": s.infinity,
        "points": [{"id": z, "nu": s.nu[z], "alpha": s.alpha[z]} for z in sorted(s.alpha)],
    }


def scheme_from_dict(doc, validate=True):
    _check_version(doc, "scheme")
    if "infinity" not in doc:
        raise SchemeValidationError([SchemeViolation("Infinity", "no infinity point declared")])
    try:
        degree = int(doc["degree"])
        alpha, nu = {}, {}
        for p in doc["points"]:
            z = str(p["id"])
            if z in alpha:
                raise ParseError(f"duplicate point id {z!r}")
            alpha[z] = str(p["alpha"])
            nu[z] = int(p["nu"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed scheme: {exc!r}") from exc
    s = MappingScheme(degree, alpha, nu, str(doc["infinity"]))
    if validate:
        violations = validate_scheme(s)
        if violations:
            raise SchemeValidationError(violations)
    return s


def parse_scheme_json(text, validate=True):
    return scheme_from_dict(_load(text), validate)


# ----------------------------------------------------------------- automata

def automaton_to_dict(aut):
    return {
        "version": VERSION,
        "alphabet": aut.d,
        "states": [
            {"name": name, "perm": list(rec.perm),
             "restrictions": [aut.word_text(r) for r in rec.restrictions]}
            for name, rec in zip(aut.names, aut.recursions)
        ],
    }


def automaton_from_dict(doc):
    _check_version(doc, "automaton")
    try:
        states = doc["states"]
        names = [str(st["name"]) for st in states]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed automaton: {exc!r}") from exc
    for name in names:
        if not _NAME.match(name) or name in ("e", "id"):
            raise ParseError(f"bad state name {name!r}")
    if len(set(names)) != len(names):
        raise ParseError("duplicate state names")
    index = {name: i for i, name in enumerate(names, start=1)}
    recs = []
    for st in states:
        try:
            perm = Permutation(st["perm"])
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(f"state {st.get('name')}: bad permutation: {exc}") from exc
        rs = st.get("restrictions", ["1"] * len(perm))
        if len(rs) != len(perm):
            raise ParseError(f"state {st['name']}: need {len(perm)} restrictions")
        recs.append(WreathRecursion(perm, tuple(parse_word(str(r), index) for r in rs)))
    d = int(doc.get("alphabet", recs[0].d if recs else 0))
    try:
        return GroupAutomaton(d, tuple(names), tuple(recs))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def parse_automaton_json(text):
    return automaton_from_dict(_load(text))


# ----------------------------------------------------------------- elements

def element_to_dict(m):
    return {"version": VERSION, "automaton": automaton_to_dict(m.kneading),
            "twist": format_twist(m.twist)}


def element_from_dict(doc):
    _check_version(doc, "bimodule")
    try:
        aut = automaton_from_dict(doc["automaton"])
        twist = parse_twist(str(doc.get("twist", "1")), aut.n)
    except KeyError as exc:
        raise ParseError(f"malformed bimodule: missing {exc}") from exc
    return BimoduleElement(aut, twist)


def parse_element_json(text):
    return element_from_dict(_load(text))


# ------------------------------------------------------------- certificates

def certificate_to_dict(cert):
    return {
        "version": VERSION,
        "kind": cert.kind,
        "scheme": scheme_to_dict(cert.scheme),
        "omega": list(cert.plan.omega),
        "order": list(cert.plan.order),
        "blocks": [list(b) for b in cert.plan.blocks],
        "element": element_to_dict(cert.element),
        "curves": [format_twist(g) for g in cert.curves],
        "l": cert.l,
        "transcript": [{"curve": c.curve, "lhs": c.lhs, "rhs": c.rhs, "ok": c.ok}
                       for c in cert.checks],
        "verified": cert.verified,
    }


def certificate_from_dict(doc):
    _check_version(doc, "certificate")
    try:
        scheme = scheme_from_dict(doc["scheme"])
        element = element_from_dict(doc["element"])
        plan = OmegaPlan(tuple(doc["order"]), tuple(doc["omega"]),
                         tuple(tuple(int(i) for i in b) for b in doc["blocks"]))
        curves = tuple(parse_twist(str(g), element.rank) for g in doc["curves"])
        checks = tuple(Check(int(c["curve"]), str(c["lhs"]), str(c["rhs"]), bool(c["ok"]))
                       for c in doc.get("transcript", []))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed certificate: {exc!r}") from exc
    if "l" in doc and int(doc["l"]) != len(curves):
        raise ParseError("l does not match the number of curves")
    return LevyCertificate(scheme, plan, element, curves, str(doc.get("kind", "")), checks)


def parse_certificate_json(text):
    return certificate_from_dict(_load(text))
