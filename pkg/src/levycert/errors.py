"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class LevycertError(Exception):
    exit_code = 4


class ParseError(LevycertError):
    """Malformed input text, JSON or file."""

    exit_code = 4


class SchemeValidationError(LevycertError):
    """A mapping scheme violates one or more axioms."""

    exit_code = 1

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class NotApplicable(LevycertError):
    exit_code = 2


class HypothesisFailed(LevycertError):
    exit_code = 2


class NotNormalizable(LevycertError):
    """A recursion cannot be rewritten as kneading automaton plus twist."""

    exit_code = 3


class NoTwistFound(LevycertError):
    exit_code = 3
