"""Exact tools for mapping schemes, kneading automata and Levy certificates."""

from .automata import (
    CycleHypergraph,
    GroupAutomaton,
    check_dendroid_automaton,
    check_kneading,
    cycle_hypergraph,
    export_moore_dot,
    is_dendroid_sequence,
)
from .bimodule import (
    BimoduleElement,
    QuadraticBits,
    elements_equal,
    extract_twist,
    left_act_generator,
    left_act_word,
    quad_kneading_automaton,
    right_twist,
)
from .errors import (
    HypothesisFailed,
    LevycertError,
    NotApplicable,
    NotNormalizable,
    NoTwistFound,
    ParseError,
    SchemeValidationError,
)
from .freegroup import (
    FreeWord,
    TwistWord,
    apply_generator,
    apply_twist_word,
    conjugate,
    outer_equal,
    parse_twist,
    parse_word,
    reduce,
)
from .obstruction import (
    LevyCertificate,
    OmegaPlan,
    construct_levy_length_l,
    construct_m0,
    construct_obstructed,
    gamma_generator,
    precompose_power,
    verify_levy_certificate,
)
from .scheme import (
    MappingScheme,
    check_omega_hypothesis,
    classify_scheme,
    kneading_skeleton,
    main_theorem_cases,
    validate_scheme,
)
from .wreath import (
    Permutation,
    WreathRecursion,
    act_on_tree_word,
    wreath_conjugate,
    wreath_invert,
    wreath_multiply,
)

__version__ = "0.1.0"
