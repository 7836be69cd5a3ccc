"""Exact similarity factors of totally decomposable algebras with involution over Q."""

from .arith import SquareClass, hilbert_symbol, squarefree_class
from .errors import (
    GenerationExhausted,
    InvalidPresentation,
    MalformedCertificate,
    NotAMultiplier,
    ParseError,
    SearchExhausted,
    SimFactorError,
)
from .forms import QuadraticForm, make_form
from .involution import DecomposablePresentation, make_presentation
from .pfister import PfisterForm, make_pfister
from .witness import WitnessCertificate, decompose_multiplier, verify_certificate

__version__ = "0.1.0"

__all__ = [
    "DecomposablePresentation",
    "GenerationExhausted",
    "InvalidPresentation",
    "MalformedCertificate",
    "NotAMultiplier",
    "ParseError",
    "PfisterForm",
    "QuadraticForm",
    "SearchExhausted",
    "SimFactorError",
    "SquareClass",
    "WitnessCertificate",
    "decompose_multiplier",
    "hilbert_symbol",
    "make_form",
    "make_pfister",
    "make_presentation",
    "squarefree_class",
    "verify_certificate",
]
