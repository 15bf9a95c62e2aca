"""Polynomial mapping schemes: validation, classification and the obstruction cases."""

from dataclasses import dataclass

from .errors import SchemeValidationError


@dataclass(frozen=True)
class MappingScheme:
    """A finite map ``alpha`` on point ids with local degrees ``nu``.

    Critical points are those with nu >= 2; the post-critical set is the
    image of alpha.
    """

    degree: int
    alpha: dict
    nu: dict
    infinity: str

    def __post_init__(self):
        object.__setattr__(self, "alpha", dict(self.alpha))
        object.__setattr__(self, "nu", dict(self.nu))

    def __hash__(self):
        return hash((self.degree, self.infinity, tuple(sorted(self.alpha.items())),
                     tuple(sorted(self.nu.items()))))

    @property
    def points(self):
        return sorted(self.alpha)

    @property
    def critical(self):
        return {z for z in self.alpha if self.nu.get(z, 1) >= 2}

    @property
    def postcritical(self):
        return set(self.alpha.values())

    def finite(self, ids):
        return {z for z in ids if z != self.infinity}

    def preimages(self, z):
        return sorted(x for x, y in self.alpha.items() if y == z)

    def critical_values(self):
        """alpha(c) for finite critical points c."""
        return {self.alpha[c] for c in self.critical if c != self.infinity}


@dataclass(frozen=True)
class SchemeViolation:
    axiom: str
    message: str

    def __str__(self):
        return f"{self.axiom}: {self.message}"


def validate_scheme(s):
    """List every violated axiom; an empty list means the scheme is valid."""
    out = []
    ids = set(s.alpha)
    if s.degree < 2:
        out.append(SchemeViolation("Degree", f"degree {s.degree} < 2"))
    if set(s.nu) != ids:
        out.append(SchemeViolation("Points", "nu and alpha are defined on different ids"))
    for z, v in sorted(s.nu.items()):
        if not isinstance(v, int) or v < 1:
            out.append(SchemeViolation("LocalDegree", f"nu({z}) = {v} is not a positive integer"))
    for z, w in sorted(s.alpha.items()):
        if w not in ids:
            out.append(SchemeViolation("Alpha", f"alpha({z}) = {w} is not a point"))
    if out:
        return out

    C, P = s.critical, s.postcritical
    for z in sorted(ids - (C | P)):
        out.append(SchemeViolation("Points", f"{z} is neither critical nor post-critical"))

    total = sum(v - 1 for v in s.nu.values())
    if total % 2 or total // 2 + 1 != s.degree:
        out.append(SchemeViolation(
            "RiemannHurwitz", f"sum(nu - 1) = {total} but 2d - 2 = {2 * s.degree - 2}"))

    for z in sorted(ids):
        incoming = sum(s.nu[x] for x in s.preimages(z))
        if incoming > s.degree:
            out.append(SchemeViolation(
                "LocalDegrees", f"preimages of {z} have total degree {incoming} > {s.degree}"))

    inf = s.infinity
    if inf not in ids:
        out.append(SchemeViolation("Infinity", f"infinity {inf!r} is not a point"))
    else:
        if s.alpha[inf] != inf:
            out.append(SchemeViolation("Infinity", f"alpha({inf}) = {s.alpha[inf]} != {inf}"))
        if s.nu[inf] != s.degree:
            out.append(SchemeViolation("Infinity", f"nu({inf}) = {s.nu[inf]} != {s.degree}"))

    # every finite post-critical point must come from a critical orbit
    reach = set()
    frontier = [s.alpha[c] for c in C if c != inf]
    while frontier:
        z = frontier.pop()
        if z in reach:
            continue
        reach.add(z)
        frontier.append(s.alpha[z])
    for z in sorted(s.finite(P) - reach):
        out.append(SchemeViolation(
            "PostCriticalSet", f"{z} is not in the forward orbit of a critical value"))
    return out


def require_valid(s):
    violations = validate_scheme(s)
    if violations:
        raise SchemeValidationError(violations)
    return s


@dataclass(frozen=True)
class Period:
    points: tuple
    attractor: bool

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class SchemeClassification:
    periods: tuple
    kind: str
    hyperbolic: bool
    periodic: bool
    cases: frozenset


def periods(s):
    """Directed cycles of alpha on finite points, rotated to the smallest id."""
    finite = s.finite(s.alpha)
    C = s.critical
    seen = set()
    out = []
    for start in sorted(finite):
        if start in seen:
            continue
        path = []
        pos = {}
        z = start
        while z not in pos and z not in seen and z in finite:
            pos[z] = len(path)
            path.append(z)
            z = s.alpha[z]
        seen.update(path)
        if z in pos:
            cyc = path[pos[z]:]
            i = cyc.index(min(cyc))
            cyc = tuple(cyc[i:] + cyc[:i])
            out.append(Period(cyc, any(c in C for c in cyc)))
    out.sort(key=lambda p: p.points)
    return out


def _cases(s, pers):
    cv = s.critical_values()
    non_attr = [p for p in pers if not p.attractor]
    free = [p for p in non_attr if not set(p.points) & cv]
    cases = set()
    if any(len(p) >= 2 for p in free):
        cases.add(1)
    if len(free) >= 2:
        cases.add(2)
    if sum(1 for p in non_attr if len(p) >= 2) >= 2:
        cases.add(3)
    if len(non_attr) >= 4:
        cases.add(4)
    return frozenset(cases)


def classify_scheme(s):
    require_valid(s)
    pers = periods(s)
    C = s.critical
    hyperbolic = all(p.attractor for p in pers)
    periodic = C <= s.postcritical
    kind = "periodic" if periodic else ("hyperbolic" if hyperbolic else "preperiodic")
    return SchemeClassification(tuple(pers), kind, hyperbolic, periodic, _cases(s, pers))


def main_theorem_cases(s):
    return classify_scheme(s).cases


def incoming_count(s, omega):
    """#(alpha^-1(omega) minus omega)."""
    omega = set(omega)
    return sum(1 for x, y in s.alpha.items() if y in omega and x not in omega)


def omega_budget(s, omega):
    """Sum of nu(z) - 1 over finite critical z with alpha(z) outside omega."""
    omega = set(omega)
    return sum(s.nu[z] - 1 for z in s.critical
               if z != s.infinity and s.alpha[z] not in omega)


def check_omega_hypothesis(s, omega):
    omega = set(omega)
    if not omega:
        raise ValueError("omega must be nonempty")
    unknown = omega - set(s.alpha)
    if unknown:
        raise ValueError(f"unknown points in omega: {sorted(unknown)}")
    if omega & s.critical:
        raise ValueError(f"omega contains critical points {sorted(omega & s.critical)}")
    if {s.alpha[z] for z in omega} != omega:
        raise ValueError("omega is not invariant: alpha(omega) != omega")
    return incoming_count(s, omega) <= omega_budget(s, omega)


@dataclass(frozen=True)
class Skeleton:
    """Arrows s_{alpha(z)} -> s_z on the finite post-critical set."""

    states: tuple
    edges: tuple

    def successors(self, z):
        return [b for a, b in self.edges if a == z]


def kneading_skeleton(s):
    require_valid(s)
    states = tuple(sorted(s.finite(s.postcritical)))
    edges = tuple(sorted((s.alpha[z], z) for z in states))
    return Skeleton(states, edges)


def quadratic_orbit(s):
    """For a quadratic preperiodic scheme, return (orbit, k, n).

    ``orbit`` lists the finite post-critical points starting at the critical
    value: preperiod first, then period.  Returns None for other schemes.
    """
    if s.degree != 2:
        return None
    finite_crit = [c for c in s.critical if c != s.infinity]
    if len(finite_crit) != 1:
        return None
    c = finite_crit[0]
    orbit = []
    z = s.alpha[c]
    while z not in orbit:
        orbit.append(z)
        z = s.alpha[z]
    k = orbit.index(z)
    n = len(orbit) - k
    if c in orbit or k < 1 or n < 2:
        return None
    if set(orbit) != s.finite(s.postcritical):
        return None
    return orbit, k, n
