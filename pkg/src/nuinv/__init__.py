"""Resonance varieties and nu-invariants of arrangement groups."""
from .arrgmt import Arrangement, LineLattice, LinkingMatrix, linking_from_permutation
from .exactalg import AbelianGroupClass, ProjectivePoint, rank_mod_p, smith_normal_form
from .freegrp import Presentation, Word, parse_word
from .nilquot import free_nilpotent_oracle, kernel_abelianization, nu_table
from .resonance import stratify
from .zinv import ziegler_invariant

__version__ = "0.1.0"
