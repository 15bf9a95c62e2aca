"""Wreath recursions pi(a|_0, ..., a|_{d-1}) and their action on the d-ary tree.

Restrictions are FreeWords whose generator indices refer to states of some
environment ``env`` (a mapping from index to WreathRecursion).  Products
compose like functions: ``(ab)(w) = a(b(w))``.
"""

from dataclasses import dataclass

from .freegroup import FreeWord, IDENTITY


class Permutation(tuple):
    """A bijection of {0..d-1}, stored as the tuple of images."""

    def __new__(cls, images):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images) - 1}: {images}")
        return super().__new__(cls, images)

    @classmethod
    def identity(cls, d):
        return cls(range(d))

    @classmethod
    def from_cycles(cls, cycles, d, base=0):
        """Build from cycle notation; letters are shifted down by ``base``."""
        images = list(range(d))
        seen = set()
        for cyc in cycles:
            cyc = [x - base for x in cyc]
            for x in cyc:
                if not 0 <= x < d or x in seen:
                    raise ValueError(f"bad cycle {cyc}")
                seen.add(x)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a] = b
        return cls(images)

    @property
    def d(self):
        return len(self)

    def __call__(self, x):
        return self[x]

    def compose(self, other):
        """self o other (other applied first)."""
        return Permutation(self[other[x]] for x in range(len(self)))

    def inverse(self):
        inv = [0] * len(self)
        for x, y in enumerate(self):
            inv[y] = x
        return Permutation(inv)

    def is_identity(self):
        return all(x == y for x, y in enumerate(self))

    def cycles(self, include_fixed=False):
        """Cycles in canonical order, each starting at its smallest letter."""
        seen = set()
        out = []
        for start in range(len(self)):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self[x]
            if include_fixed or len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        sep = "," if len(self) > 10 else ""
        return "".join("(" + sep.join(str(x) for x in c) + ")" for c in cyc)

    def __repr__(self):
        return f"Permutation({list(self)})"


@dataclass(frozen=True)
class WreathRecursion:
    perm: Permutation
    restrictions: tuple

    def __post_init__(self):
        if not isinstance(self.perm, Permutation):
            object.__setattr__(self, "perm", Permutation(self.perm))
        rs = tuple(r if type(r) is FreeWord else FreeWord(r) for r in self.restrictions)
        if len(rs) != len(self.perm):
            raise ValueError("need one restriction per letter")
        object.__setattr__(self, "restrictions", rs)

    @classmethod
    def identity(cls, d):
        return cls(Permutation.identity(d), (IDENTITY,) * d)

    @property
    def d(self):
        return len(self.perm)

    def restriction(self, x):
        return self.restrictions[x]

    def is_identity(self):
        return self.perm.is_identity() and all(not r for r in self.restrictions)

    def __str__(self):
        body = ", ".join(str(r) for r in self.restrictions)
        p = "" if self.perm.is_identity() else str(self.perm)
        return f"{p}({body})"


def wreath_multiply(a, b):
    """Product ab: perm pi_a o pi_b, restriction at x is a|_{pi_b(x)} b|_x."""
    if a.d != b.d:
        raise ValueError(f"alphabet sizes differ: {a.d} vs {b.d}")
    return WreathRecursion(
        a.perm.compose(b.perm),
        tuple(a.restrictions[b.perm[x]] * b.restrictions[x] for x in range(a.d)),
    )


def wreath_invert(a):
    inv = a.perm.inverse()
    return WreathRecursion(inv, tuple(a.restrictions[inv[x]].inverse() for x in range(a.d)))


def _lookup(env, k):
    try:
        return env[k]
    except (KeyError, IndexError):
        raise KeyError(f"unresolved state s{k}") from None


def resolve(w, env, d=None):
    """Recursion of the word ``w`` with letters resolved in ``env``."""
    if d is None:
        if not w:
            raise ValueError("alphabet size needed to resolve the empty word")
        d = _lookup(env, abs(w[0])).d
    out = WreathRecursion.identity(d)
    for a in w:
        rec = _lookup(env, abs(a))
        out = wreath_multiply(out, rec if a > 0 else wreath_invert(rec))
    return out


def wreath_conjugate(a, w, env):
    """Recursion of w^-1 a w, with ``w`` resolved in ``env``."""
    r = resolve(w, env, a.d)
    return wreath_multiply(wreath_multiply(wreath_invert(r), a), r)


def act_on_tree_word(state, env, word):
    """Image of the tree word ``word`` (sequence of letters) under ``state``.

    ``state`` is a generator index, a FreeWord or a WreathRecursion whose
    restrictions live in ``env``.
    """
    word = tuple(word)
    if isinstance(state, WreathRecursion):
        if not word:
            return ()
        x = word[0]
        return (state.perm[x],) + _act(state.restrictions[x], env, word[1:])
    if isinstance(state, int):
        state = (state,)
    return _act(tuple(state), env, word)


def _act(letters, env, word):
    for a in reversed(letters):
        if not word:
            break
        rec = _lookup(env, abs(a))
        if a > 0:
            x = word[0]
            word = (rec.perm[x],) + _act(rec.restrictions[x], env, word[1:])
        else:
            # a^-1(x w) = y a|_y^-1(w) with y = pi^-1(x)
            y = rec.perm.index(word[0])
            inv = tuple(-b for b in reversed(rec.restrictions[y]))
            word = (y,) + _act(inv, env, word[1:])
    return word
