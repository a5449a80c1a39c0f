"""Vocabularies, the quantified LTL formula language and its transformations."""

from .parser import ParseError, parse_formula
from .semantics import EvaluationError, compile_formula, eval_state
from .syntax import *  # noqa: F401,F403
from .syntax import Formula, Term
from .transforms import (TransformError, all_names, eliminate_value_quantifiers, expand_next_atoms,
                         fold_constants, fresh_name, miniscope, nnf, pin_ranges, rename_variables,
                         substitute_names, to_nnf)
from .vocab import Domain, Variable, Vocabulary, VocabularyError
