"""Pomsets, series-parallel rational expressions, step automata and STMs."""

__version__ = "0.1.0"

from .pomset import (  # noqa: F401
    EMPTY,
    LabelledPoset,
    NotSeriesParallelError,
    Pomset,
    Step,
    depth,
    enumerate_pomsets,
    is_isomorphic,
    is_n_free,
    is_series_parallel,
    par_compose,
    par_factorize,
    parse_pomset,
    parse_step_word,
    format_step_word,
    primitive,
    seq_compose,
    seq_factorize,
    step_pomset,
    step_word_to_pomset,
    subsumes,
    width,
)
from .language import (  # noqa: F401
    PomsetLanguage,
    lang_par,
    lang_parstar,
    lang_seq,
    lang_star,
    lang_substitute,
    lang_union,
)
from .expr import (  # noqa: F401
    ONE,
    ZERO,
    ParseError,
    SprExpr,
    equiv_bounded,
    nullable,
    par_depth,
    parse,
    parstar_depth,
    semantics,
)
from .axioms import AXIOMS, check_axiom, run_suite  # noqa: F401
from .automaton import StepAutomaton  # noqa: F401
from .kleene import (  # noqa: F401
    compile_expr,
    delta_spr,
    extract,
    gamma_spr,
    initial_steps,
    least_solution,
    reachable,
    sa_to_system,
)
from .stm import ClassicalTm, Stm, from_classical_tm  # noqa: F401
from . import machines  # noqa: F401
