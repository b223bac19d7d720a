"""Classification of vector sequences by their synthesis operator.

Frames, Riesz sequences and their "pseudo" relatives (finite excess or
deficit) are read off the kernel, range and reduced minimum modulus of the
synthesis operator. Finite sequences are classified exactly; structured
infinite ones through an exact block reduction (edit scripts) or a
finite-section scan (coefficient rules).
"""

from .classify import (FLAG_NAMES, ScanReport, SynthesisAnalysis, Taxonomy, analyze, classify, classify_finite,
                       classify_structured, excess_bruteforce, extend_to_frame, reduce_to_riesz, scan)
from .duals import (DualityCertificate, canonical_dual, check_partner_class, pseudo_codual_construct,
                    pseudo_dual_construct, verify_duality)
from .errors import FrameforgeError, InvalidInput, NotAFrame, NotFound, OutOfRange, UnsupportedExact
from .numkernel import DEFAULT_TOLERANCE, TolerancePolicy
from .perturb import (PerturbationCertificate, bari_certificate, kato_certificate, pw_certificate,
                      stability_trials)
from .seqmodel import (Drop, EditedBasis, FiniteSequence, Insert, Replace, RuleSequence, RuleTerm, Truncation,
                       from_matrix, make_finite, make_rule, make_structured, truncate)

__version__ = "0.1.0"

__all__ = [
    "FrameforgeError",
    "InvalidInput",
    "NotAFrame",
    "NotFound",
    "OutOfRange",
    "UnsupportedExact",
    "DEFAULT_TOLERANCE",
    "TolerancePolicy",
    "FLAG_NAMES",
    "ScanReport",
    "SynthesisAnalysis",
    "Taxonomy",
    "analyze",
    "classify",
    "classify_finite",
    "classify_structured",
    "excess_bruteforce",
    "extend_to_frame",
    "reduce_to_riesz",
    "scan",
    "DualityCertificate",
    "canonical_dual",
    "check_partner_class",
    "pseudo_codual_construct",
    "pseudo_dual_construct",
    "verify_duality",
    "PerturbationCertificate",
    "bari_certificate",
    "kato_certificate",
    "pw_certificate",
    "stability_trials",
    "Drop",
    "EditedBasis",
    "FiniteSequence",
    "Insert",
    "Replace",
    "RuleSequence",
    "RuleTerm",
    "Truncation",
    "from_matrix",
    "make_finite",
    "make_rule",
    "make_structured",
    "truncate",
]
