"""Schematic tree grammars, tree substitution grammars and tree adjoining
grammars, with bounded-language tools for comparing their weak capacity."""

__version__ = "0.1.0"

from .derivation import Adjoin, DerivationTrace, Instantiate, Substitute
from .errors import (AlphabetMismatch, FormalismLexicalViolation, GrammarSyntaxError,
                     InvalidAddress, InvalidGrammar, LabelMismatch, LengthCeilingExceeded,
                     NotAnAdjunctionSite, NotASubstitutionSite, PathRecursion,
                     RegexSyntaxError, StgkitError, TagCompletenessUnavailable,
                     TerminalWithChildren, UnbalancedBrackets, UnknownToken,
                     UnsupportedLiteral, ValidationFailed)
from .report import ValidationReport, Violation
from .trees import (EPS, Alphabet, Kind, SyntaxTree, leaf, node, parse_tree, print_tree,
                    replace_at, yield_of)
from .stg import (Annotation, SchematicTree, StgGrammar, enumerate_instantiations,
                  enumerate_stg, instantiate, instantiates, member_stg, path_labels,
                  replay_stg, schema_leaf, schema_node, stg_language, substitute_stg,
                  validate_stg)
from .regular import (Automaton, Regex, automaton_member, build_automaton,
                      compile_stg_to_regex, format_regex, parse_regex, regex_to_stg)
from .tsg import (Cfg, Production, TsgGrammar, cfg_member, count_parses, enumerate_tsg,
                  extract_cfg, replay_tsg, substitute_tsg, validate_tsg)
from .tag import (AuxiliaryTree, TagGrammar, adjoin, auxiliary, enumerate_tag, member_tag,
                  replay_tag, validate_tag)
from .grammar_io import load_fixture, load_grammar, parse_grammar, print_grammar
from .equiv import Counterexample, Equal, LanguageSource, bounded_equiv
from .harness import StageResult, classify_stage, compare_grammars
