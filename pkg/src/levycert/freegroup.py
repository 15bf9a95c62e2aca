"""Reduced words in a free group and the pure symmetric automorphisms a(i,j).

Generators are numbered from 1; a letter is a nonzero int, ``k`` for s_k and
``-k`` for its inverse.  ``a(i,j)`` sends s_i to s_j^-1 s_i s_j and fixes every
other generator.

A :class:`TwistWord` ``x1*x2*...*xr`` denotes the tensor product
``[x1] (x) [x2] (x) ... (x) [xr]`` of twisting bimodules.  Since
``[x] (x) [y]`` is the bimodule of ``y o x``, the leftmost factor is applied
first when the word is used as a map on F_n.
"""

import re
from dataclasses import dataclass

from .errors import NotNormalizable, ParseError


class FreeWord(tuple):
    """A freely reduced word; immutable and hashable.

    >>> FreeWord([2, -1, 1, 3])
    FreeWord('s2*s3')
    """

    def __new__(cls, letters=()):
        out = []
        for a in letters:
            if not isinstance(a, int) or a == 0:
                raise ValueError(f"bad letter {a!r}")
            if out and out[-1] == -a:
                out.pop()
            else:
                out.append(a)
        return super().__new__(cls, out)

    @classmethod
    def gen(cls, k, sign=1):
        return cls((k * sign,))

    @property
    def letters(self):
        """The word as (generator index, exponent sign) pairs."""
        return tuple((abs(a), 1 if a > 0 else -1) for a in self)

    def __mul__(self, other):
        if not isinstance(other, FreeWord):
            return FreeWord(tuple(self) + tuple(other))
        # both sides reduced: cancellation happens only at the seam
        i, m = 0, min(len(self), len(other))
        while i < m and self[-1 - i] == -other[i]:
            i += 1
        return tuple.__new__(FreeWord, self[:len(self) - i] + other[i:])

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** -k
        return FreeWord(tuple(self) * k)

    def inverse(self):
        return tuple.__new__(FreeWord, tuple(-a for a in reversed(self)))

    def is_identity(self):
        return len(self) == 0

    def max_index(self):
        return max((abs(a) for a in self), default=0)

    def __str__(self):
        return format_word(self)

    def __repr__(self):
        return f"FreeWord({format_word(self)!r})"

    # tuple's + and * would bypass reduction
    def __add__(self, other):
        return self * other

    def __rmul__(self, other):
        return FreeWord(tuple(other) + tuple(self))


IDENTITY = FreeWord()


def reduce(raw, rank=None):
    """Freely reduce a letter sequence.

    ``raw`` may hold signed ints or (index, sign) pairs.  With ``rank`` given,
    indices outside 1..rank raise ValueError.
    """
    letters = []
    for a in raw:
        if isinstance(a, tuple):
            k, e = a
            if e not in (1, -1):
                raise ValueError(f"exponent sign must be +-1, got {e}")
            a = k * e
        if rank is not None and not 1 <= abs(a) <= rank:
            raise ValueError(f"generator index {abs(a)} out of range 1..{rank}")
        letters.append(a)
    return FreeWord(letters)


def conjugate(w, v):
    """Return w^v = v^-1 w v."""
    return FreeWord(v.inverse() + w + v)


def as_conjugate_of_generator(w):
    """Split ``w = c^-1 s_k c`` into ``(k, c)``, or return None.

    ``c`` comes back without a leading s_k^{+-1}, which makes it unique.
    """
    n = len(w)
    if n % 2 == 0:
        return None
    m = n // 2
    core = w[m]
    if core < 0:
        return None
    head = FreeWord(w[:m])
    tail = FreeWord(w[m + 1:])
    if head != tail.inverse():
        return None
    return core, tail


def cyclically_reduce(w):
    lo, hi = 0, len(w)
    while hi - lo >= 2 and w[lo] == -w[hi - 1]:
        lo += 1
        hi -= 1
    return FreeWord(w[lo:hi])


# ---------------------------------------------------------------- text form

_TOKEN = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*(?:\^\s*(-?\d+))?\s*$")


def parse_word(text, names=None):
    """Parse ``s1*s2^-1*s3`` (or names from ``names``) into a FreeWord.

    ``names`` maps generator names to indices; when omitted, ``s<k>`` means
    generator k.  ``1``, ``e`` and the empty string are the identity.
    """
    text = text.strip()
    if text in ("", "1", "e", "id"):
        return IDENTITY
    letters = []
    for tok in text.split("*"):
        m = _TOKEN.match(tok)
        if not m:
            raise ParseError(f"cannot parse word factor {tok!r} in {text!r}")
        name, exp = m.group(1), int(m.group(2) or 1)
        if names is None:
            if not re.fullmatch(r"s\d+", name) or int(name[1:]) < 1:
                raise ParseError(f"unknown generator {name!r}")
            k = int(name[1:])
        else:
            if name not in names:
                raise ParseError(f"unknown generator {name!r}")
            k = names[name]
        sign = 1 if exp > 0 else -1
        letters.extend([k * sign] * abs(exp))
    return FreeWord(letters)


def format_word(w, names=None):
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        k = abs(w[i])
        name = names[k - 1] if names is not None else f"s{k}"
        exp = (j - i) * (1 if w[i] > 0 else -1)
        parts.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    return "*".join(parts)


# ------------------------------------------------------------- automorphisms

def apply_generator(i, j, exponent, w):
    """Apply a(i,j)^exponent to ``w``."""
    if i == j:
        raise ValueError("a(j,j) is trivial and not a valid factor")
    if exponent not in (1, -1):
        raise ValueError("exponent must be +-1")
    out = []
    for a in w:
        if abs(a) == i:
            out.extend((-j * exponent, a, j * exponent))
        else:
            out.append(a)
    return FreeWord(out)


@dataclass(frozen=True)
class TwistWord:
    """A word in the generators a(i,j)^{+-1} of rank ``rank``."""

    factors: tuple = ()
    rank: int = 0

    def __post_init__(self):
        out = []
        for f in self.factors:
            i, j, e = f
            if i == j:
                raise ValueError(f"a({i},{j}) has equal indices")
            if e not in (1, -1):
                raise ValueError("exponent must be +-1")
            if self.rank and not (1 <= i <= self.rank and 1 <= j <= self.rank):
                raise ValueError(f"a({i},{j}) out of range for rank {self.rank}")
            if out and out[-1] == (i, j, -e):
                out.pop()
            else:
                out.append((i, j, e))
        object.__setattr__(self, "factors", tuple(out))

    @classmethod
    def gen(cls, i, j, rank, exponent=1):
        return cls(((i, j, exponent),), rank)

    @classmethod
    def identity(cls, rank):
        return cls((), rank)

    def __mul__(self, other):
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch {self.rank} vs {other.rank}")
        return TwistWord(self.factors + other.factors, self.rank)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** -k
        return TwistWord(self.factors * k, self.rank)

    def __len__(self):
        return len(self.factors)

    def inverse(self):
        return TwistWord(tuple((i, j, -e) for i, j, e in reversed(self.factors)), self.rank)

    def images(self):
        """Images of s_1..s_rank under the map this word denotes."""
        imgs = [FreeWord((k,)) for k in range(1, self.rank + 1)]
        # right-compose generators from the last factor back to the first
        for i, j, e in reversed(self.factors):
            sj = imgs[j - 1] if e == 1 else imgs[j - 1].inverse()
            imgs[i - 1] = sj.inverse() * imgs[i - 1] * sj
        return tuple(imgs)

    def relabel(self, mapping):
        """Rename indices via ``mapping`` (old index -> new index)."""
        return TwistWord(tuple((mapping[i], mapping[j], e) for i, j, e in self.factors),
                         self.rank)

    def indices(self):
        return {i for i, _, _ in self.factors} | {j for _, j, _ in self.factors}

    def __str__(self):
        return format_twist(self)


def apply_twist_word(phi, w):
    """Apply the automorphism denoted by ``phi`` to the word ``w``."""
    if w.max_index() > phi.rank:
        raise ValueError("word uses generators beyond the twist rank")
    return substitute(w, phi.images())


def substitute(w, images):
    out = []
    for a in w:
        img = images[abs(a) - 1]
        out.extend(img if a > 0 else img.inverse())
    return FreeWord(out)


def _power_of(w, k):
    """Return e if the reduced word w equals s_k^e, else None."""
    if all(a == k for a in w):
        return len(w)
    if all(a == -k for a in w):
        return -len(w)
    return None


def is_inner(images):
    """Decide whether s_k -> images[k-1] is conjugation by one fixed element.

    Returns the conjugator c (with s_k -> c^-1 s_k c) or None.
    """
    split = []
    for k, img in enumerate(images, start=1):
        parts = as_conjugate_of_generator(img)
        if parts is None or parts[0] != k:
            return None
        split.append(parts[1])
    n = len(split)
    if n == 0:
        return IDENTITY
    if n == 1:
        return split[0]
    # c = s_1^p c_1 = s_2^q c_2, so c_1 c_2^-1 = s_1^-p s_2^q
    w = split[0] * split[1].inverse()
    lead = 0
    while lead < len(w) and abs(w[lead]) == 1:
        lead += 1
    if _power_of(FreeWord(w[lead:]), 2) is None:
        return None
    c = FreeWord(w[:lead]).inverse() * split[0]
    for k, ck in enumerate(split, start=1):
        if _power_of(c * ck.inverse(), k) is None:
            return None
    return c


def outer_equal(phi, psi, rank=None):
    """True when phi and psi agree modulo inner automorphisms of F_n."""
    rank = rank or phi.rank
    if phi.rank != rank or psi.rank != rank:
        raise ValueError("rank mismatch")
    theta = psi.inverse() * phi  # psi^-1 first, then phi
    return is_inner(theta.images()) is not None


# ------------------------------------------------------- twist decomposition

def _strip(c, k):
    i = 0
    while i < len(c) and abs(c[i]) == k:
        i += 1
    return FreeWord(c[i:])


def decompose_conjugating(conjugators, rank, max_lookahead=2):
    """Write s_k -> c_k^-1 s_k c_k as a TwistWord.

    ``conjugators`` is a sequence of FreeWords c_1..c_rank.  Greedy peak
    reduction: repeatedly right-compose with a(m,q)^{+-1}, which multiplies c_m
    on the right by an image of s_q^{-+1}, choosing the move that shortens the
    total conjugator length most.  Raises NotNormalizable if the map does not
    reduce to the identity, which happens when it is not an automorphism.
    """
    cs = [_strip(FreeWord(c), k) for k, c in enumerate(conjugators, start=1)]
    moves = []

    def image(q):
        return cs[q - 1].inverse() * FreeWord((q,)) * cs[q - 1]

    def candidates():
        for m in range(1, rank + 1):
            if not cs[m - 1]:
                continue
            for q in range(1, rank + 1):
                if q == m:
                    continue
                img = image(q)
                for eps in (1, -1):
                    new = _strip(cs[m - 1] * (img if eps == -1 else img.inverse()), m)
                    yield len(new) - len(cs[m - 1]), m, q, eps, new

    while any(cs):
        best = min(candidates(), key=lambda t: t[0], default=None)
        if best is None or best[0] >= 0:
            if not _lookahead(cs, moves, rank, max_lookahead):
                raise NotNormalizable(
                    "conjugating map is not a product of a(i,j): "
                    + ", ".join(f"s{k}^{format_word(c)}" for k, c in enumerate(cs, 1) if c))
            continue
        _, m, q, eps, new = best
        cs[m - 1] = new
        moves.append((m, q, eps))
    # tau o g_1 o ... o g_r = id with g_t = a(m,q)^-eps, so tau = g_1^-1 ... g_r^-1
    return TwistWord(tuple((m, q, eps) for m, q, eps in moves), rank)


def _lookahead(cs, moves, rank, depth):
    """Try pairs of moves whose combined effect shortens the conjugators."""
    if depth < 2:
        return False
    total = sum(len(c) for c in cs)
    for m1 in range(1, rank + 1):
        for q1 in range(1, rank + 1):
            if m1 == q1:
                continue
            for e1 in (1, -1):
                trial = list(cs)
                img = trial[q1 - 1].inverse() * FreeWord((q1,)) * trial[q1 - 1]
                trial[m1 - 1] = _strip(trial[m1 - 1] * (img if e1 == -1 else img.inverse()), m1)
                for m2 in range(1, rank + 1):
                    for q2 in range(1, rank + 1):
                        if m2 == q2:
                            continue
                        img2 = trial[q2 - 1].inverse() * FreeWord((q2,)) * trial[q2 - 1]
                        for e2 in (1, -1):
                            c2 = _strip(trial[m2 - 1] * (img2 if e2 == -1 else img2.inverse()), m2)
                            new_total = total - len(cs[m1 - 1]) + len(trial[m1 - 1]) \
                                - len(trial[m2 - 1]) + len(c2)
                            if new_total < total:
                                cs[:] = trial
                                cs[m2 - 1] = c2
                                moves.extend([(m1, q1, e1), (m2, q2, e2)])
                                return True
    return False


# -------------------------------------------------------------- text form

_TWIST_TOKEN = re.compile(r"^\s*a\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*(?:\^\s*(-?\d+))?\s*$")


def parse_twist(text, rank):
    text = text.strip()
    if text in ("", "1", "id"):
        return TwistWord.identity(rank)
    factors = []
    for tok in text.split("*"):
        m = _TWIST_TOKEN.match(tok)
        if not m:
            raise ParseError(f"cannot parse twist factor {tok!r}")
        i, j, exp = int(m.group(1)), int(m.group(2)), int(m.group(3) or 1)
        if exp == 0:
            continue
        factors.extend([(i, j, 1 if exp > 0 else -1)] * abs(exp))
    try:
        return TwistWord(tuple(factors), rank)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def format_twist(t):
    if not t.factors:
        return "1"
    return "*".join(f"a({i},{j})" if e == 1 else f"a({i},{j})^-1" for i, j, e in t.factors)
