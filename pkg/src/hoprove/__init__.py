"""Termination provers for higher-order rewrite systems: RPO, the general
schema, HORPO and HORPO with a built-in computability closure."""

__version__ = "0.1.0"

from .core import Abs, App, Arrow, BVar, Fun, FunctionSymbol, Sort, SortSymbol, TypeDeclaration, Var
from .orders import LEX, MUL, Precedence, Signature
from .parser import load_spec, parse_spec, parse_term, parse_type, print_spec
from .proof import Proof, Verdict

__all__ = [
    "Abs", "App", "Arrow", "BVar", "Fun", "FunctionSymbol", "LEX", "MUL", "Precedence", "Proof",
    "Signature", "Sort", "SortSymbol", "TypeDeclaration", "Var", "Verdict", "load_spec",
    "parse_spec", "parse_term", "parse_type", "print_spec",
]
