"""Kneading automata adapted to an invariant set, gamma words and Levy certificates."""

from dataclasses import dataclass, field
from itertools import combinations

from .automata import KNEADING, GroupAutomaton, check_kneading, cycle_hypergraph
from .bimodule import BimoduleElement, elements_equal, left_act_word, right_twist
from .errors import HypothesisFailed, NotApplicable, NotNormalizable
from .freegroup import FreeWord, IDENTITY, TwistWord
from .scheme import (
    check_omega_hypothesis,
    classify_scheme,
    incoming_count,
    quadratic_orbit,
    require_valid,
)
from .wreath import Permutation, WreathRecursion


# ------------------------------------------------------------- gamma words

def block_gamma(first, size, j, rank):
    """Twist word for a curve around indices first..first+size-1, rotated at j.

    The word is a(p,p-1)...a(p,first) a(p,last)...a(p,p+1) with p the j-th
    index of the block.
    """
    if not 1 <= j <= size:
        raise ValueError(f"index {j} outside 1..{size}")
    if size < 2:
        raise ValueError("a block needs at least two indices")
    last = first + size - 1
    p = first + j - 1
    qs = list(range(p - 1, first - 1, -1)) + list(range(last, p, -1))
    return TwistWord(tuple((p, q, 1) for q in qs), rank)


def gamma_generator(k, n, i, rank=None):
    """gamma_i on the period indices k+1..k+n."""
    if n < 2 or not 1 <= i <= n:
        raise ValueError(f"need n >= 2 and 1 <= i <= n, got n={n}, i={i}")
    return block_gamma(k + 1, n, i, rank or k + n)


def product_of(words, rank):
    out = TwistWord.identity(rank)
    for w in words:
        out = out * w
    return out


def full_gamma(k, n, rank=None):
    """gamma_n ... gamma_1."""
    rank = rank or k + n
    return product_of([gamma_generator(k, n, i, rank) for i in range(n, 0, -1)], rank)


# ------------------------------------------------------------- omega plans

@dataclass(frozen=True)
class OmegaPlan:
    """Index order of the post-critical points and the invariant-set layout.

    ``order[i-1]`` is the point of generator s_i.  ``blocks`` lists the index
    blocks of omega; block b has internal label b.
    """

    order: tuple
    omega: tuple
    blocks: tuple
    labels: dict = field(default_factory=dict, compare=False)

    @property
    def rank(self):
        return len(self.order)

    def index(self, z):
        return self.order.index(z) + 1

    def omega_indices(self):
        return [self.index(z) for z in self.omega]


def _orbit_from(s, start):
    out = [start]
    z = s.alpha[start]
    while z != start:
        out.append(z)
        z = s.alpha[z]
    return out


def _cycles_of(s, omega):
    """Split an invariant set into alpha-cycles, each from its smallest id."""
    left = set(omega)
    out = []
    while left:
        z = min(left)
        cyc = _orbit_from(s, z)
        if not set(cyc) <= set(omega):
            raise ValueError("omega is not a union of periods")
        out.append(cyc)
        left -= set(cyc)
    return out


def plan_for(s, omega, l=1):
    """Choose the generator order for ``omega`` (see module docs)."""
    omega = set(omega)
    finite_p = sorted(s.finite(s.postcritical))
    cycles = _cycles_of(s, omega)
    if l > 1:
        if len(cycles) != 1:
            raise ValueError("a length-l construction needs a single period")
        orbit = cycles[0]
        n = len(orbit)
        k = n // l
        ordered = [None] * n
        for t, z in enumerate(orbit):
            a, b = divmod(t, l)
            ordered[a + b * k] = z
        blocks = tuple(tuple(range(b * k + 1, (b + 1) * k + 1)) for b in range(l))
        rest = [z for z in finite_p if z not in omega]
        return OmegaPlan(tuple(ordered + rest), tuple(ordered), blocks)
    quad = quadratic_orbit(s)
    if quad is not None and len(cycles) == 1 and set(quad[0][quad[1]:]) == omega:
        orbit, k, n = quad
        return OmegaPlan(tuple(orbit), tuple(orbit[k:]), (tuple(range(k + 1, k + n + 1)),))
    ordered = [z for cyc in cycles for z in cyc]
    rest = [z for z in finite_p if z not in omega]
    return OmegaPlan(tuple(ordered + rest), tuple(ordered),
                     (tuple(range(1, len(ordered) + 1)),))


# ---------------------------------------------------------- automaton build

def _complete_tree(d, fixed_edges, pending):
    """Choose letter sets for ``pending`` hyperedges so the result is a tree.

    ``pending`` is a list of (owner, size); hyperedges with the same owner
    must be disjoint.  Letters are chosen lowest first with backtracking.
    """
    parent = list(range(d))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for e in fixed_edges:
        e = sorted(e)
        for y in e[1:]:
            ra, rb = find(e[0]), find(y)
            if ra == rb:
                raise NotNormalizable("fixed cycles already contain a loop")
            parent[rb] = ra

    owned = {}
    chosen = []

    def search(idx):
        if idx == len(pending):
            return True
        owner, size = pending[idx]
        used = owned.setdefault(owner, set())
        letters = [x for x in range(d) if x not in used]
        for combo in combinations(letters, size):
            roots = {find(x) for x in combo}
            if len(roots) != size:
                continue
            saved = list(parent)
            roots = sorted(roots)
            for r in roots[1:]:
                parent[r] = roots[0]
            used.update(combo)
            chosen.append(combo)
            if search(idx + 1):
                return True
            chosen.pop()
            used.difference_update(combo)
            parent[:] = saved
        return False

    if not search(0):
        raise NotNormalizable("no tree-shaped assignment of cycles exists")
    return chosen


def build_m0(s, omega, l=1, plan=None):
    """Kneading automaton adapted to ``omega``; returns ``(automaton, plan)``.

    With l = 1 every arrow inside omega is labelled 0, and each omega state
    uses its own letters from 1..d-1 for its cycles and outgoing arrows.
    With l > 1 arrows leaving block b inside omega are labelled b and the
    remaining arrows of the block get distinct letters other than b.
    """
    d = s.degree
    plan = plan or plan_for(s, omega, l)
    idx = {z: plan.index(z) for z in plan.order}
    om = set(plan.omega)
    block_of = {}
    for b, blk in enumerate(plan.blocks):
        for i in blk:
            block_of[plan.order[i - 1]] = b if l > 1 else 0

    cycles = {}    # point -> list of (critical preimage, letters)
    arrows = {}    # point -> {letter: target point}
    fixed_edges = []
    next_free = 1

    for z in plan.omega:
        b = block_of[z]
        arrows[z] = {}
        cycles[z] = []
        used = {b} if l > 1 else set()
        block_taken = set()
        if l > 1:
            block_taken = {x for w in plan.omega if block_of[w] == b
                           for x in arrows.get(w, {}) if x != b}
        for x in s.preimages(z):
            if x in om:
                arrows[z][b] = x
                continue
            if s.nu[x] >= 2:
                if l > 1:
                    raise HypothesisFailed("length-l construction needs a period free of critical values")
                letters = tuple(range(next_free, next_free + s.nu[x]))
                next_free += s.nu[x]
                if letters and letters[-1] >= d:
                    raise HypothesisFailed("not enough letters for the omega states")
                cycles[z].append((x, letters))
                fixed_edges.append(letters)
                if x in idx:
                    arrows[z][letters[0]] = x
            else:
                if l > 1:
                    free = [y for y in range(d) if y not in used and y not in block_taken]
                    if not free:
                        raise HypothesisFailed(f"not enough letters for arrows leaving block {b}")
                    y = free[0]
                    used.add(y)
                    block_taken.add(y)
                else:
                    y = next_free
                    next_free += 1
                    if y >= d:
                        raise HypothesisFailed("not enough letters for the omega states")
                arrows[z][y] = x

    others = [z for z in plan.order if z not in om]
    pending = []
    owners = []
    for z in others:
        for x in s.preimages(z):
            if s.nu[x] >= 2:
                pending.append((z, s.nu[x]))
                owners.append((z, x))
    chosen = _complete_tree(d, fixed_edges, pending)
    for z in others:
        cycles[z] = []
        arrows[z] = {}
    for (z, x), letters in zip(owners, chosen):
        cycles[z].append((x, letters))
        if x in idx:
            arrows[z][letters[0]] = x
    for z in others:
        taken = {y for _, ls in cycles[z] for y in ls}
        for x in s.preimages(z):
            if s.nu[x] >= 2:
                continue
            y = min(y for y in range(d) if y not in taken)
            taken.add(y)
            arrows[z][y] = x

    recs = []
    for z in plan.order:
        cyc = [ls for _, ls in cycles[z]]
        perm = Permutation.from_cycles([list(c) for c in cyc], d)
        rs = [IDENTITY] * d
        for y, x in arrows[z].items():
            rs[y] = FreeWord((idx[x],))
        recs.append(WreathRecursion(perm, tuple(rs)))
    aut = GroupAutomaton.from_recursions(recs)
    if check_kneading(aut) != KNEADING:
        raise NotNormalizable("construction did not produce a kneading automaton")
    labels = {(idx[z], y): idx[x] for z in plan.order for y, x in arrows[z].items()}
    plan = OmegaPlan(plan.order, plan.omega, plan.blocks, labels)
    return aut, plan


def construct_m0(s, omega):
    require_valid(s)
    if not check_omega_hypothesis(s, omega):
        raise HypothesisFailed("omega does not satisfy the incoming-arrow bound")
    return build_m0(s, omega)[0]


def hyperedge_formula(aut):
    """(sum(|E| - 1), d - 1, connected) for the cycle hypergraph of ``aut``."""
    hg = cycle_hypergraph(aut.perms(), aut.d)
    return sum(len(e) - 1 for e in hg.hyperedges), aut.d - 1, hg.is_connected()


# ------------------------------------------------------------- certificates

@dataclass(frozen=True)
class Check:
    curve: int
    lhs: str
    rhs: str
    ok: bool


@dataclass(frozen=True)
class LevyCertificate:
    scheme: object
    plan: OmegaPlan
    element: BimoduleElement
    curves: tuple
    kind: str
    checks: tuple = ()

    @property
    def l(self):
        return len(self.curves)

    @property
    def omega(self):
        return self.plan.omega

    @property
    def verified(self):
        return bool(self.checks) and all(c.ok for c in self.checks)


def _describe(m):
    return f"M_K (x) [{m.twist}]"


def curve_checks(element, curves):
    """Recompute [curve_i] (x) M = M (x) [curve_{i-1 mod l}] for every i."""
    out = []
    l = len(curves)
    for i, g in enumerate(curves):
        prev = curves[(i - 1) % l]
        try:
            lhs = left_act_word(g, element)
        except NotNormalizable as exc:
            out.append(Check(i, f"[{g}] (x) M", f"not normalizable: {exc}", False))
            continue
        rhs = right_twist(element, prev)
        out.append(Check(i, f"[{g}] (x) M = {_describe(lhs)}",
                         f"M (x) [{prev}] = {_describe(rhs)}", elements_equal(lhs, rhs)))
    return tuple(out)


def labelling_checks(aut, plan):
    """Arrows inside omega carry the block label; other labels are distinct."""
    problems = []
    om_idx = set(plan.omega_indices())
    for b, blk in enumerate(plan.blocks):
        label = b if len(plan.blocks) > 1 else 0
        outside = []
        for i in blk:
            rec = aut.recursions[i - 1]
            for x, r in enumerate(rec.restrictions):
                if not r:
                    continue
                target = abs(r[0])
                if target in om_idx:
                    if x != label:
                        problems.append(f"s{i} -> s{target} labelled {x}, expected {label}")
                else:
                    outside.append(x)
        if len(outside) != len(set(outside)) or label in outside:
            problems.append(f"labels leaving block {b} are not distinct: {sorted(outside)}")
    return problems


def scheme_consistency(aut, scheme, plan):
    """Check that ``aut`` realizes the arrows and local degrees of ``scheme``."""
    problems = []
    finite = sorted(scheme.finite(scheme.postcritical))
    if sorted(plan.order) != finite:
        return [f"generator order {list(plan.order)} is not the finite post-critical set"]
    if aut.n != len(finite) or aut.d != scheme.degree:
        return [f"automaton has {aut.n} states on {aut.d} letters, expected "
                f"{len(finite)} on {scheme.degree}"]
    idx = {z: plan.index(z) for z in plan.order}
    for i, z in enumerate(plan.order, start=1):
        rec = aut.recursions[i - 1]
        pre = scheme.preimages(z)
        want = sorted(idx[x] for x in pre if x in idx)
        got = sorted(abs(r[0]) for r in rec.restrictions if r)
        if want != got:
            problems.append(f"s{i} restricts to {got}, scheme arrows give {want}")
        lengths = sorted(len(c) for c in rec.perm.cycles())
        crit = sorted(scheme.nu[x] for x in pre if scheme.nu[x] >= 2)
        if lengths != crit:
            problems.append(f"s{i} has cycle lengths {lengths}, local degrees give {crit}")
        for x, r in enumerate(rec.restrictions):
            if not r:
                continue
            target = plan.order[abs(r[0]) - 1]
            cyc_len = next(len(c) for c in rec.perm.cycles(include_fixed=True) if x in c)
            if cyc_len != scheme.nu.get(target, 1):
                problems.append(f"s{i}|{x} sits on a cycle of length {cyc_len}, "
                                f"but {target} has local degree {scheme.nu.get(target)}")
    return problems


def verify_levy_certificate(cert):
    """Return ``(ok, transcript)``; every equality is recomputed."""
    transcript = []
    aut = cert.element.kneading
    kn = check_kneading(aut)
    transcript.append(f"automaton is {kn}")
    ok = kn == KNEADING
    for p in scheme_consistency(aut, cert.scheme, cert.plan):
        transcript.append(f"scheme: {p}")
        ok = False
    for p in labelling_checks(aut, cert.plan):
        transcript.append(f"labelling: {p}")
        ok = False
    for c in curve_checks(cert.element, cert.curves):
        transcript.append(f"{'ok  ' if c.ok else 'FAIL'} {c.lhs}  ==  {c.rhs}")
        ok = ok and c.ok
    return ok, transcript


def _finish(s, plan, element, curves, kind):
    checks = curve_checks(element, tuple(curves))
    cert = LevyCertificate(s, plan, element, tuple(curves), kind, checks)
    ok, transcript = verify_levy_certificate(cert)
    if not ok:
        raise NotNormalizable("certificate failed verification:\n" + "\n".join(transcript))
    return cert


def certificate_for_period(s, omega):
    aut, plan = build_m0(s, omega)
    rank = plan.rank
    first = plan.blocks[0][0]
    n = len(plan.omega)
    gammas = [block_gamma(first, n, i, rank) for i in range(1, n + 1)]
    twist = product_of(gammas[n - 2::-1], rank)  # gamma_{n-1} ... gamma_1
    gamma = product_of(gammas[::-1], rank)
    m0 = BimoduleElement.untwisted(aut)
    return _finish(s, plan, right_twist(m0, twist), [gamma], "period")


def certificate_for_fixed_pair(s, omega):
    aut, plan = build_m0(s, omega)
    p, q = plan.omega_indices()
    gamma = TwistWord(((q, p, 1), (p, q, 1)), plan.rank)
    return _finish(s, plan, BimoduleElement.untwisted(aut), [gamma], "fixed-pair")


def _key(s, omega):
    return (incoming_count(s, omega), tuple(sorted(omega)))


def omega_candidates(s, cls=None):
    """Candidate (case, kind, omega) triples in order of preference."""
    cls = cls or classify_scheme(s)
    cv = s.critical_values()
    non_attr = [set(p.points) for p in cls.periods if not p.attractor]
    free = [p for p in non_attr if not p & cv]
    out = []
    if 1 in cls.cases:
        for p in sorted((p for p in free if len(p) >= 2), key=lambda p: _key(s, p)):
            out.append((1, "period", p))
    if 2 in cls.cases:
        fixed = [p for p in free if len(p) == 1]
        for a, b in sorted(combinations(fixed, 2), key=lambda ab: _key(s, ab[0] | ab[1])):
            out.append((2, "fixed-pair", a | b))
    if 3 in cls.cases:
        for p in sorted((p for p in non_attr if len(p) >= 2), key=lambda p: _key(s, p)):
            out.append((3, "period", p))
    if 4 in cls.cases:
        pairs = sorted(combinations(non_attr, 2), key=lambda ab: _key(s, ab[0] | ab[1]))
        for a, b in pairs:
            if len(a) == 1 and len(b) == 1:
                out.append((4, "fixed-pair", a | b))
            else:
                for p in (a, b):
                    if len(p) >= 2:
                        out.append((4, "period", p))
    return out


def construct_obstructed(s, omega=None):
    """Build and verify a Levy certificate for a scheme covered by the four cases."""
    require_valid(s)
    cls = classify_scheme(s)
    if omega is not None:
        omega = set(omega)
        if not check_omega_hypothesis(s, omega):
            raise HypothesisFailed("omega does not satisfy the incoming-arrow bound")
        cycles = _cycles_of(s, omega)
        if len(cycles) == 1 and len(omega) >= 2:
            return certificate_for_period(s, omega)
        if len(cycles) == 2 and len(omega) == 2:
            return certificate_for_fixed_pair(s, omega)
        raise NotApplicable("omega must be one period of length >= 2 or two fixed points")
    if not cls.cases:
        reason = "hyperbolic scheme" if cls.hyperbolic else "no obstruction case applies"
        raise NotApplicable(reason)
    errors = []
    seen = set()
    for case, kind, om in omega_candidates(s, cls):
        key = (kind, frozenset(om))
        if key in seen:
            continue
        seen.add(key)
        try:
            if not check_omega_hypothesis(s, om):
                continue
            if kind == "period":
                return certificate_for_period(s, om)
            return certificate_for_fixed_pair(s, om)
        except (HypothesisFailed, NotNormalizable) as exc:
            errors.append(f"case {case} omega {sorted(om)}: {exc}")
    raise HypothesisFailed("no candidate omega worked: " + "; ".join(errors))


def length_l_gammas(k, l, rank):
    """gamma_{i,j} for blocks of size k, and gamma_i = gamma_{i,k} ... gamma_{i,1}."""
    pieces = [[block_gamma(i * k + 1, k, j, rank) for j in range(1, k + 1)] for i in range(l)]
    curves = [product_of(row[::-1], rank) for row in pieces]
    return pieces, curves


def construct_levy_length_l(s, omega, l):
    require_valid(s)
    omega = set(omega)
    cycles = _cycles_of(s, omega)
    if len(cycles) != 1:
        raise ValueError("omega must be a single period")
    n = len(omega)
    if omega & s.critical_values():
        raise HypothesisFailed("the period contains critical values")
    if n < 2 or not 1 < l < n or l > s.degree or n % l:
        raise ValueError(f"need 1 < l < n, l <= d and l | n (n={n}, l={l}, d={s.degree})")
    aut, plan = build_m0(s, omega, l)
    k = n // l
    rank = plan.rank
    pieces, curves = length_l_gammas(k, l, rank)
    twist = product_of(pieces[l - 1][k - 2::-1], rank)  # gamma_{l-1,k-1} ... gamma_{l-1,1}
    m0 = BimoduleElement.untwisted(aut)
    return _finish(s, plan, right_twist(m0, twist), curves, f"length-{l}")


def whole_period_twist(cert):
    """Twist word for the single curve around every point of omega."""
    rank = cert.element.rank
    idx = cert.plan.omega_indices()
    first, n = min(idx), len(idx)
    return product_of([block_gamma(first, n, i, rank) for i in range(n, 0, -1)], rank)


def full_period_commutes(cert):
    """Whether the curve around the whole period passes the commutation test.

    For length-l certificates this is expected to fail.  A failure only says
    that the two sides differ in normal form; it is not a topological proof.
    """
    w = whole_period_twist(cert)
    lhs = left_act_word(w, cert.element)
    return elements_equal(lhs, right_twist(cert.element, w))


def precompose_power(cert, power):
    """Replace M_g by M_g (x) [gamma^power] and re-verify."""
    if cert.l != 1:
        raise ValueError("pre-composition is defined for single-curve certificates")
    gamma = cert.curves[0]
    element = right_twist(cert.element, gamma ** power)
    return _finish(cert.scheme, cert.plan, element, cert.curves, cert.kind)
