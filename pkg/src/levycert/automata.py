"""Group automata, cycle hypergraphs and the dendroid / kneading predicates."""

from dataclasses import dataclass, field

from .freegroup import FreeWord, as_conjugate_of_generator, format_word
from .wreath import Permutation, WreathRecursion


@dataclass(frozen=True)
class GroupAutomaton:
    """Named states s_1..s_n (declaration order is the cyclic order).

    Restriction words use state indices 1..n; the empty word is the trivial
    state.
    """

    d: int
    names: tuple
    recursions: tuple

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "recursions", tuple(self.recursions))
        if len(self.names) != len(self.recursions):
            raise ValueError("one recursion per state name")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate state names")
        n = len(self.names)
        for name, rec in zip(self.names, self.recursions):
            if rec.d != self.d:
                raise ValueError(f"state {name} has alphabet size {rec.d}, expected {self.d}")
            for r in rec.restrictions:
                if r.max_index() > n:
                    raise ValueError(f"state {name} references undeclared state s{r.max_index()}")

    @classmethod
    def from_recursions(cls, recursions, names=None):
        recursions = tuple(recursions)
        if names is None:
            names = tuple(f"s{i}" for i in range(1, len(recursions) + 1))
        d = recursions[0].d if recursions else 0
        return cls(d, names, recursions)

    @property
    def n(self):
        return len(self.names)

    def env(self):
        return {i: rec for i, rec in enumerate(self.recursions, start=1)}

    def index(self, name):
        return self.names.index(name) + 1

    def perms(self):
        return [rec.perm for rec in self.recursions]

    def state_label(self, k):
        return self.names[k - 1]

    def word_text(self, w):
        return format_word(w, self.names)

    def with_recursions(self, recursions):
        return GroupAutomaton(self.d, self.names, tuple(recursions))

    def relabel_letters(self, sigma):
        """Rename every letter x to sigma[x]."""
        sigma = Permutation(sigma)
        inv = sigma.inverse()
        recs = []
        for rec in self.recursions:
            perm = Permutation(sigma[rec.perm[inv[y]]] for y in range(self.d))
            recs.append(WreathRecursion(perm, tuple(rec.restrictions[inv[y]] for y in range(self.d))))
        return self.with_recursions(recs)

    def __str__(self):
        return "\n".join(f"{name} = {self._rec_text(rec)}"
                         for name, rec in zip(self.names, self.recursions))

    def _rec_text(self, rec):
        p = "" if rec.perm.is_identity() else str(rec.perm)
        return p + "(" + ", ".join(self.word_text(r) for r in rec.restrictions) + ")"


@dataclass(frozen=True)
class CycleHypergraph:
    d: int
    hyperedges: tuple = field(default_factory=tuple)

    def components(self):
        parent = list(range(self.d))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.hyperedges:
            e = sorted(e)
            for y in e[1:]:
                parent[find(y)] = find(e[0])
        groups = {}
        for x in range(self.d):
            groups.setdefault(find(x), []).append(x)
        return list(groups.values())

    def is_connected(self):
        return self.d >= 1 and len(self.components()) == 1

    def excess(self):
        """sum(|E| - 1) - (d - 1); zero exactly for trees when connected."""
        return sum(len(e) - 1 for e in self.hyperedges) - (self.d - 1)

    def is_tree(self):
        return self.is_connected() and self.excess() == 0


def cycle_hypergraph(perms, d=None):
    perms = list(perms)
    if d is None:
        if not perms:
            raise ValueError("alphabet size needed for an empty sequence")
        d = len(perms[0])
    if any(len(p) != d for p in perms):
        raise ValueError("permutations act on different alphabets")
    edges = tuple(frozenset(c) for p in perms for c in p.cycles())
    return CycleHypergraph(d, edges)


def is_dendroid_sequence(perms, d=None):
    return cycle_hypergraph(perms, d).is_tree()


@dataclass(frozen=True)
class Violation:
    condition: int
    message: str
    state: str = None
    witnesses: tuple = ()

    def __str__(self):
        return f"condition ({self.condition}): {self.message}"


@dataclass(frozen=True)
class DendroidReport:
    violations: tuple

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok


def _output_key(w):
    return tuple(w)


def check_dendroid_automaton(aut):
    """Check the three dendroid conditions, collecting witnesses."""
    violations = []
    if aut.n and not is_dendroid_sequence(aut.perms(), aut.d):
        hg = cycle_hypergraph(aut.perms(), aut.d)
        reason = "not connected" if not hg.is_connected() else "contains a cycle"
        violations.append(Violation(1, f"cycle diagram is not contractible ({reason})"))
    elif not aut.n and aut.d != 1:
        violations.append(Violation(1, "no states to connect the alphabet"))

    incoming = {}
    for k, rec in enumerate(aut.recursions, start=1):
        for x, r in enumerate(rec.restrictions):
            if r:
                incoming.setdefault(_output_key(r), []).append((aut.names[k - 1], x))
    for key, arrows in sorted(incoming.items()):
        if len(arrows) > 1:
            target = aut.word_text(FreeWord(key))
            violations.append(Violation(
                2, f"state {target} has {len(arrows)} incoming arrows "
                   + ", ".join(f"{a}|{x}" for a, x in arrows),
                state=target, witnesses=tuple(arrows)))

    for k, rec in enumerate(aut.recursions, start=1):
        for cyc in rec.perm.cycles():
            active = [x for x in cyc if rec.restrictions[x]]
            if len(active) > 1:
                name = aut.names[k - 1]
                violations.append(Violation(
                    3, f"state {name} has {len(active)} nontrivial restrictions on cycle {cyc}",
                    state=name, witnesses=tuple((name, x) for x in active)))
    return DendroidReport(tuple(violations))


KNEADING = "kneading"
TWISTED_KNEADING = "twisted_kneading"
NEITHER = "neither"


def check_kneading(aut):
    if not check_dendroid_automaton(aut).ok:
        return NEITHER
    hits = [0] * (aut.n + 1)
    plain = True
    for rec in aut.recursions:
        for r in rec.restrictions:
            if not r:
                continue
            parts = as_conjugate_of_generator(r)
            if parts is None:
                return NEITHER
            q, c = parts
            hits[q] += 1
            plain = plain and not c
    if any(h != 1 for h in hits[1:]):
        return NEITHER
    return KNEADING if plain else TWISTED_KNEADING


def _dot_id(s):
    return '"' + str(s).replace('"', '\\"') + '"'


def export_moore_dot(aut, name="automaton"):
    """Abbreviated Moore diagram: the trivial state and its arrows are omitted."""
    lines = [f"digraph {_dot_id(name)} {{"]
    nodes = []
    edges = []
    extra = {}
    for k, rec in enumerate(aut.recursions, start=1):
        src = aut.names[k - 1]
        label = "" if rec.perm.is_identity() else str(rec.perm)
        nodes.append((src, label))
        for x, r in enumerate(rec.restrictions):
            if not r:
                continue
            parts = as_conjugate_of_generator(r)
            if parts is not None:
                q, c = parts
                tgt = aut.names[q - 1]
                lab = str(x) if not c else f"{x} ^ {aut.word_text(c)}"
            else:
                tgt = aut.word_text(r)
                extra[tgt] = True
                lab = str(x)
            edges.append((src, tgt, lab))
    for node, label in sorted(nodes):
        lines.append(f"  {_dot_id(node)} [label={_dot_id(node + (' ' + label if label else ''))}];")
    for node in sorted(extra):
        lines.append(f"  {_dot_id(node)} [shape=box];")
    for src, tgt, lab in sorted(edges):
        lines.append(f"  {_dot_id(src)} -> {_dot_id(tgt)} [label={_dot_id(lab)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def moore_edges(aut):
    """Arrows (source, letter, target word) for every nontrivial restriction."""
    return {(aut.names[k - 1], x, r)
            for k, rec in enumerate(aut.recursions, start=1)
            for x, r in enumerate(rec.restrictions) if r}


def export_cycle_dot(aut, name="cycles"):
    """Cycle diagram as a bipartite graph: letters and one point per cycle."""
    lines = [f"graph {_dot_id(name)} {{"]
    for x in range(aut.d):
        lines.append(f"  {_dot_id(x)} [shape=circle];")
    for k, rec in enumerate(aut.recursions, start=1):
        for cyc in rec.perm.cycles():
            cid = f"{aut.names[k - 1]}:{''.join(map(str, cyc))}"
            lines.append(f"  {_dot_id(cid)} [shape=point, xlabel={_dot_id(aut.names[k - 1])}];")
            for x in cyc:
                lines.append(f"  {_dot_id(cid)} -- {_dot_id(x)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
