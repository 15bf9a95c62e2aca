"""Random valid mapping schemes for end-to-end runs."""

import random

from .scheme import MappingScheme, classify_scheme, validate_scheme


def _partition(total, rng, max_part):
    parts = []
    while total:
        p = rng.randint(1, min(total, max_part))
        parts.append(p)
        total -= p
    return parts


def random_scheme(rng, max_degree=6, max_post=10, max_periods=4):
    """Draw one scheme, or None when the draw violates an axiom.

    Critical multiplicities partition d - 1; periods are created first and
    every critical orbit either lies on a period or runs through a short
    tail into the existing points.
    """
    d = rng.randint(2, max_degree)
    mults = _partition(d - 1, rng, d - 1)
    crit = [f"c{i}" for i in range(len(mults))]
    nu = {c: m + 1 for c, m in zip(crit, mults)}
    nu["inf"] = d
    alpha = {"inf": "inf"}
    load = {}

    def room(z, extra):
        return load.get(z, 0) + extra <= d

    def link(x, z):
        alpha[x] = z
        load[z] = load.get(z, 0) + nu[x]

    budget = max_post
    n_per = rng.randint(1, min(max_periods, len(crit)))
    periods = []
    counter = 0
    for _ in range(n_per):
        length = rng.randint(1, max(1, min(4, budget - n_per + len(periods) + 1)))
        if length > budget:
            break
        pts = [f"p{counter + i}" for i in range(length)]
        counter += length
        budget -= length
        for z in pts:
            nu[z] = 1
        for a, b in zip(pts, pts[1:] + pts[:1]):
            link(a, b)
        periods.append(pts)
    if not periods:
        return None

    targets = list(range(len(periods)))
    rng.shuffle(targets)
    order = list(crit)
    rng.shuffle(order)
    for i, c in enumerate(order):
        goal = periods[targets[i]] if i < len(targets) else None
        if goal is not None and rng.random() < 0.25 and len(goal) >= 1:
            # make the critical point periodic by splicing it into the cycle
            z = rng.choice(goal)
            pre = [x for x, y in alpha.items() if y == z and x in goal][0]
            load[z] -= nu[pre]
            alpha[pre] = c
            load[c] = nu[pre]
            if not room(z, nu[c]):
                return None
            link(c, z)
            goal.insert(goal.index(z), c)
            continue
        pool = goal or [p for per in periods for p in per] + [
            x for x in alpha if x.startswith("t")]
        end = rng.choice(pool)
        tail_len = rng.randint(0, min(3, budget))
        prev = c
        for _ in range(tail_len):
            t = f"t{counter}"
            counter += 1
            budget -= 1
            nu[t] = 1
            link(prev, t)
            prev = t
        if not room(end, nu[prev]):
            return None
        link(prev, end)

    s = MappingScheme(d, alpha, nu, "inf")
    if validate_scheme(s):
        return None
    return s


def generate_corpus(seed=0, per_case=100, hyperbolic=100, max_draws=200000,
                    max_degree=6, max_post=10):
    """Collect schemes until each case 1-4 has ``per_case`` members.

    Returns ``(by_case, hyperbolic_schemes)``; a scheme may appear under
    several cases.
    """
    rng = random.Random(seed)
    by_case = {c: [] for c in (1, 2, 3, 4)}
    hyper = []
    seen = set()
    for _ in range(max_draws):
        if all(len(v) >= per_case for v in by_case.values()) and len(hyper) >= hyperbolic:
            break
        s = random_scheme(rng, max_degree, max_post)
        if s is None or s in seen:
            continue
        if len(s.finite(s.postcritical)) > max_post:
            continue
        seen.add(s)
        cls = classify_scheme(s)
        if cls.hyperbolic:
            if len(hyper) < hyperbolic:
                hyper.append(s)
            continue
        for c in cls.cases:
            if len(by_case[c]) < per_case:
                by_case[c].append(s)
    return by_case, hyper
