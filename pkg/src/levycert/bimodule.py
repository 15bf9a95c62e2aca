"""Kneading bimodules M_K (x) [rho] and the left action of the a(i,j).

An element is stored right-normalized as ``(K, rho)``: a kneading automaton
and a right twist.  Left actions are computed either by the closed-form
rules for quadratic kneading automata or directly, by conjugating the wreath
recursions and changing basis back to kneading form.
"""

from collections import deque, namedtuple
from dataclasses import dataclass
from itertools import product

from .automata import KNEADING, GroupAutomaton, check_kneading, is_dendroid_sequence
from .errors import NoTwistFound, NotNormalizable
from .freegroup import (
    FreeWord,
    IDENTITY,
    TwistWord,
    as_conjugate_of_generator,
    decompose_conjugating,
    outer_equal,
)
from .wreath import Permutation, WreathRecursion, resolve, wreath_conjugate


# ------------------------------------------------------------ quadratic data

@dataclass(frozen=True)
class QuadraticBits:
    """Kneading bits x_1..x_k | x_{k+1}..x_{k+n} with x_k != x_{k+n}."""

    pre: tuple
    per: tuple

    def __post_init__(self):
        pre, per = tuple(int(b) for b in self.pre), tuple(int(b) for b in self.per)
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)
        if len(pre) < 1 or len(per) < 2:
            raise ValueError("need preperiod k >= 1 and period n >= 2")
        if any(b not in (0, 1) for b in pre + per):
            raise ValueError("bits must be 0 or 1")
        if pre[-1] == per[-1]:
            raise ValueError("x_k must differ from x_{k+n}")

    @classmethod
    def parse(cls, text):
        head, sep, tail = text.replace(",", "|").partition("|")
        if not sep:
            raise ValueError(f"expected 'pre|per' bits, got {text!r}")
        return cls(tuple(int(c) for c in head.strip()), tuple(int(c) for c in tail.strip()))

    @property
    def k(self):
        return len(self.pre)

    @property
    def n(self):
        return len(self.per)

    @property
    def rank(self):
        return self.k + self.n

    def x(self, i):
        """Bit x_i, 1-based."""
        return (self.pre + self.per)[i - 1]

    def complement(self):
        return QuadraticBits(tuple(1 - b for b in self.pre), tuple(1 - b for b in self.per))

    def is_canonical(self):
        return self.pre[-1] == 1

    def canonical(self):
        return self if self.is_canonical() else self.complement()

    def flip(self, i):
        bits = list(self.pre + self.per)
        bits[i - 1] = 1 - bits[i - 1]
        return QuadraticBits(tuple(bits[:self.k]), tuple(bits[self.k:]))

    def __str__(self):
        return "".join(map(str, self.pre)) + "|" + "".join(map(str, self.per))


def canonical_bit_patterns(k, n):
    """All canonical bit strings for preperiod k and period n."""
    for free in product((0, 1), repeat=k + n - 2):
        yield QuadraticBits(free[:k - 1] + (1,), free[k - 1:] + (0,))


def quad_kneading_automaton(bits):
    k, n = bits.k, bits.n
    m = k + n
    recs = [None] * (m + 1)
    recs[1] = WreathRecursion(Permutation((1, 0)), (IDENTITY, IDENTITY))
    for i in range(1, m):
        if i == k:
            a, b = FreeWord((m,)), FreeWord((k,))
            recs[k + 1] = WreathRecursion(Permutation((0, 1)), (a, b) if bits.x(k) else (b, a))
        else:
            r = FreeWord((i,))
            recs[i + 1] = WreathRecursion(
                Permutation((0, 1)), (r, IDENTITY) if bits.x(i) == 0 else (IDENTITY, r))
    return GroupAutomaton.from_recursions(recs[1:])


_SWAP = Permutation((1, 0))


def read_quadratic_bits(aut):
    """Recover canonical bits from a binary kneading automaton, or None.

    Returns ``(bits, swapped)`` where ``swapped`` says whether letters 0 and 1
    must be exchanged to reach the canonical automaton.
    """
    if aut.d != 2 or aut.n < 3:
        return None
    recs = aut.recursions
    if recs[0].perm.is_identity() or any(r for r in recs[0].restrictions):
        return None
    special = [i for i, rec in enumerate(recs, start=1) if sum(1 for r in rec.restrictions if r) == 2]
    if len(special) != 1:
        return None
    k = special[0] - 1
    m = aut.n
    if k < 1 or m - k < 2:
        return None
    bits = []
    for i in range(1, m + 1):
        if i == k:
            rk = recs[k].restrictions
            if rk[1] == FreeWord((k,)):
                bits.append(1)
            elif rk[0] == FreeWord((k,)):
                bits.append(0)
            else:
                return None
        elif i == m:
            bits.append(1 - bits[k - 1] if len(bits) >= k else 0)
        else:
            rs = recs[i].restrictions
            if rs[0] == FreeWord((i,)):
                bits.append(0)
            elif rs[1] == FreeWord((i,)):
                bits.append(1)
            else:
                return None
    try:
        raw = QuadraticBits(tuple(bits[:k]), tuple(bits[k:]))
    except ValueError:
        return None
    if quad_kneading_automaton(raw).recursions != aut.recursions:
        return None
    return raw.canonical(), not raw.is_canonical()


# ------------------------------------------------------------ elements

@dataclass(frozen=True)
class BimoduleElement:
    """The bimodule M_K (x) [twist] generated by kneading automaton K."""

    kneading: GroupAutomaton
    twist: TwistWord

    def __post_init__(self):
        if self.twist.rank != self.kneading.n:
            raise ValueError(f"twist rank {self.twist.rank} != {self.kneading.n} states")

    @classmethod
    def untwisted(cls, aut):
        return cls(aut, TwistWord.identity(aut.n))

    @classmethod
    def quadratic(cls, bits, twist=None):
        aut = quad_kneading_automaton(bits.canonical())
        return cls(aut, twist if twist is not None else TwistWord.identity(aut.n))

    @property
    def rank(self):
        return self.kneading.n

    def bits(self):
        got = read_quadratic_bits(self.kneading)
        return got[0] if got and not got[1] else None

    def recursions(self):
        """Wreath recursions of M_K (x) [twist] on F_n."""
        imgs = self.twist.images()
        out = []
        for rec in self.kneading.recursions:
            rs = []
            for r in rec.restrictions:
                w = []
                for a in r:
                    img = imgs[abs(a) - 1]
                    w.extend(img if a > 0 else img.inverse())
                rs.append(FreeWord(w))
            out.append(WreathRecursion(rec.perm, tuple(rs)))
        return out


def right_twist(m, rho):
    if rho.rank != m.rank:
        raise ValueError("rank mismatch")
    return BimoduleElement(m.kneading, m.twist * rho)


def elements_equal(m1, m2):
    """Same kneading automaton and twists equal modulo inner automorphisms.

    This is a sufficient test for isomorphism of the bimodules.
    """
    if m1.rank != m2.rank or m1.kneading.d != m2.kneading.d:
        return False
    if m1.kneading.recursions != m2.kneading.recursions:
        return False
    return outer_equal(m1.twist, m2.twist, m1.rank)


# ------------------------------------------------------- basis normalization

def _cycle_from(perm, x):
    cyc = [x]
    y = perm[x]
    while y != x:
        cyc.append(y)
        y = perm[y]
    return cyc


def _hinted_position(hint, m, cyc):
    if hint is None:
        return None
    rec = hint.recursions[m]
    if set(_cycle_from(rec.perm, cyc[0])) != set(cyc):
        return None
    for p, x in enumerate(cyc):
        if rec.restrictions[x]:
            return p
    return 0


def _spread_cycle(cyc, rs, h, p):
    """Basis elements on a cycle leaving only position p nontrivial."""
    L = len(cyc)
    vals = [None] * L
    vals[0] = h
    for t in range(p):
        vals[t + 1] = rs[t] * vals[t]
    for t in range(L - 1, p, -1):
        vals[t] = rs[t].inverse() * vals[(t + 1) % L]
    return dict(zip(cyc, vals))


def normalize(recursions, hint=None):
    """Change basis so every restriction is 1 or c^-1 s_q c.

    ``recursions`` are wreath recursions over F_n (one per generator).  The
    basis element of letter 0 is kept trivial, which fixes the answer up to
    an inner automorphism.  Returns ``(K, conjugators)`` with K kneading and
    ``conjugators[q-1]`` the c attached to s_q.  ``hint`` (a kneading
    automaton) decides where each cycle keeps its nontrivial restriction.
    """
    recursions = list(recursions)
    n = len(recursions)
    d = recursions[0].d
    perms = [r.perm for r in recursions]
    if not is_dendroid_sequence(perms, d):
        raise NotNormalizable("permutations are not dendroid")
    h = {0: IDENTITY}
    done = set()
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for m, rec in enumerate(recursions):
            if rec.perm[x] == x:
                continue
            cyc = _cycle_from(rec.perm, x)
            key = (m, frozenset(cyc))
            if key in done:
                continue
            done.add(key)
            rs = [rec.restrictions[y] for y in cyc]
            p = _hinted_position(hint, m, cyc)
            if p is None:
                best = None
                for cand in range(len(cyc)):
                    spread = _spread_cycle(cyc, rs, h[x], cand)
                    cost = sum(len(h[x].inverse() * v) for v in spread.values())
                    if best is None or (cost, cyc[cand]) < best[0]:
                        best = ((cost, cyc[cand]), spread)
                spread = best[1]
            else:
                spread = _spread_cycle(cyc, rs, h[x], p)
            for y, v in spread.items():
                if y not in h:
                    h[y] = v
                    queue.append(y)
    if len(h) != d:
        raise NotNormalizable("alphabet is not connected")

    conj = [None] * n
    new = []
    for m, rec in enumerate(recursions):
        rs = []
        for x in range(d):
            w = h[rec.perm[x]].inverse() * rec.restrictions[x] * h[x]
            if not w:
                rs.append(IDENTITY)
                continue
            parts = as_conjugate_of_generator(w)
            if parts is None:
                raise NotNormalizable(f"restriction of s{m + 1} at {x} is not a conjugate of a generator")
            q, c = parts
            if conj[q - 1] is not None:
                raise NotNormalizable(f"s{q} appears twice among the restrictions")
            conj[q - 1] = c
            rs.append(FreeWord((q,)))
        new.append(WreathRecursion(rec.perm, tuple(rs)))
    if any(c is None for c in conj):
        missing = [q for q, c in enumerate(conj, start=1) if c is None]
        raise NotNormalizable(f"generators {missing} never appear as restrictions")
    return new, conj


def direct_act(phi, aut, hint=None):
    """Compute [phi] (x) M_aut = M_K (x) [rho] by conjugation and basis change.

    Returns ``(K, rho)``.  Binary results are brought to canonical quadratic
    form when they are quadratic kneading automata.
    """
    env = aut.env()
    images = phi.images()
    raw = [resolve(img, env, aut.d) for img in images]
    recs, conj = normalize(raw, hint=hint if hint is not None else aut)
    k_new = aut.with_recursions(recs)
    if check_kneading(k_new) != KNEADING:
        raise NotNormalizable("normalized automaton is not kneading")
    if aut.d == 2:
        got = read_quadratic_bits(k_new)
        if got is not None and got[1]:
            k_new = k_new.relabel_letters(_SWAP)
    rho = decompose_conjugating(conj, aut.n)
    return k_new, rho


# ----------------------------------------------------------- quadratic rules

def quadratic_rule(i, j, exponent, bits):
    """Closed-form [a(i,j)^e] (x) M_bits = M_bits' (x) [rho] for canonical bits."""
    if not bits.is_canonical():
        raise ValueError("bits must be canonical")
    k, n = bits.k, bits.n
    m = k + n
    if i == j or not (1 <= i <= m and 1 <= j <= m):
        raise ValueError(f"invalid generator a({i},{j}) for rank {m}")
    x = bits.x
    ident = TwistWord.identity(m)

    def word(pairs):
        return TwistWord(tuple((p, q, 1) for p, q in pairs if p != q), m)

    if i == k + 1 and j == 1:
        # x_k and x_{k+n} swap, then the 0<->1 relabel complements everything
        pre = tuple(1 - b for b in bits.pre[:-1]) + (1,)
        per = tuple(1 - b for b in bits.per[:-1]) + (0,)
        return QuadraticBits(pre, per), ident
    if j == 1:
        return bits.flip(i - 1), ident
    if i == 1 and j == k + 1:
        rho = word([(t, m) for t in range(1, m + 1) if x(t) == 1]
                   + [(t, k) for t in range(1, m + 1) if x(t) == 0])
    elif i == 1:
        rho = word([(t, j - 1) for t in range(1, m + 1) if x(t) != x(j - 1)])
    elif j == k + 1:
        rho = word([(i - 1, m if x(i - 1) == 0 else k)])
    elif i == k + 1:
        rho = word([(m if x(j - 1) == 0 else k, j - 1)])
    elif x(i - 1) != x(j - 1):
        rho = ident
    else:
        rho = word([(i - 1, j - 1)])
    return bits, (rho if exponent == 1 else rho.inverse())


# ------------------------------------------------------------- left action

def _generator(g):
    if isinstance(g, TwistWord):
        if len(g.factors) != 1:
            raise ValueError("expected a single generator a(i,j)^{+-1}")
        return g.factors[0]
    return tuple(g)


def left_act_generator(g, m, method="auto"):
    """[a(i,j)^e] (x) m, returned right-normalized.

    ``method`` is "rules" (quadratic closed form), "direct" (conjugation and
    basis change) or "auto" (rules when the automaton is quadratic).
    """
    i, j, e = _generator(g)
    if method not in ("auto", "rules", "direct"):
        raise ValueError(f"unknown method {method!r}")
    bits = m.bits() if method != "direct" else None
    if method == "rules" and bits is None:
        raise NotNormalizable("rule-based action needs a canonical quadratic kneading automaton")
    if bits is not None:
        new_bits, rho = quadratic_rule(i, j, e, bits)
        aut = quad_kneading_automaton(new_bits)
    else:
        aut, rho = direct_act(TwistWord(((i, j, e),), m.rank), m.kneading)
    # [g] (x) M_K (x) [tau] = M_K' (x) [rho] (x) [tau]
    return BimoduleElement(aut, rho * m.twist)


def left_act_word(phi, m, method="auto"):
    """[phi] (x) m; the rightmost factor of ``phi`` acts first."""
    if phi.rank != m.rank:
        raise ValueError("rank mismatch")
    for f in reversed(phi.factors):
        m = left_act_generator(f, m, method)
    return m


# ---------------------------------------------------------- twist extraction

ExtractedTwist = namedtuple("ExtractedTwist", "kneading twist conjugator")


def _letters(n):
    for k in range(1, n + 1):
        yield k
        yield -k


def conjugator_words(n, bound):
    """Reduced words ordered by length, then lexicographically."""
    yield IDENTITY
    layer = [()]
    order = list(_letters(n))
    for _ in range(bound):
        nxt = []
        for w in layer:
            for a in order:
                if w and w[-1] == -a:
                    continue
                nxt.append(w + (a,))
        for w in nxt:
            yield FreeWord(w)
        layer = nxt


def split_twisted(aut):
    """Split a (twisted) kneading automaton into kneading part and twist."""
    conj = [None] * aut.n
    recs = []
    for rec in aut.recursions:
        rs = []
        for r in rec.restrictions:
            if not r:
                rs.append(IDENTITY)
                continue
            q, c = as_conjugate_of_generator(r)
            conj[q - 1] = c
            rs.append(FreeWord((q,)))
        recs.append(WreathRecursion(rec.perm, tuple(rs)))
    return aut.with_recursions(recs), decompose_conjugating(conj, aut.n)


def extract_twist(raw, bound=8):
    """Find the shortest conjugator w making ``raw`` twisted kneading.

    Every state is replaced by w^-1 s w (w evaluated in ``raw``).  Returns
    ``(kneading, twist, conjugator)``.
    """
    env = raw.env()
    for w in conjugator_words(raw.n, bound):
        conj = raw.with_recursions(wreath_conjugate(rec, w, env) for rec in raw.recursions) \
            if w else raw
        if check_kneading(conj) == "neither":
            continue
        try:
            kneading, twist = split_twisted(conj)
        except NotNormalizable:
            continue
        return ExtractedTwist(kneading, twist, w)
    raise NoTwistFound(f"no conjugator of length <= {bound} gives twisted kneading form")
