"""Specification theory workbench for finite labeled transition systems:
refinement, logical operations, composition and quotient over normal
forms and acceptance automata, plus an audit of the algebraic laws."""

from .errors import (
    AlphabetMismatch, NotDeterministic, SpecTheoryError, UndeclaredName,
    UnguardedError, ValidationError,
)
from .models import Alphabet, Lts, bisimilar, lts_compose, loop_lts, pair_name
from .logic import Hmlr, check_hml, flatten, is_guarded
from .specs import (
    NormalForm, bottom, chi, conj, disj, embed, leq, mod_equiv, normalize,
    refines, satisfies, top,
)
from .compose import (
    Naa, compose, enumerate_family, naa_compose, naa_to_nf, nf_to_naa,
    quotient_bounded, quotient_det, quotient_nf_det, unit,
)
from .generators import GenConfig, gen_hmlr, gen_lts, gen_nf
from .audit import AuditReport, Theory, audit, run_suite
from .textio import ParseError, parse, serialize

__version__ = "0.1.0"
