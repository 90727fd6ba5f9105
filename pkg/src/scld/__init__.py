"""Separable codes with list decoding for collusion-resistant fingerprinting."""
from ._backend import HAVE_EXTENSION, kernels, use_backend
from .attack import AttackSpec, SignalModel, signal_pipeline, symbolic_attack
from .code import (
    Code,
    EvidenceVector,
    covers,
    desc,
    enumerate_coalitions,
    load,
    load_code,
    load_evidence,
    residual,
    save,
)
from .constructions import (
    PackingDesign,
    concatenate,
    fpc_construction4,
    fpc_poly_eval,
    packing_to_scld,
    projective_plane,
    random_expurgated,
    truncate_plane,
    x3_code,
)
from .errors import SCLDError
from .trace import TraceResult, fast_trace_x3, trace_fpc, trace_sc, trace_scld
from .verify import VerifyReport, is_frameproof, is_hld, is_scld, is_separable, lemma1_crosscheck

__version__ = "0.1.0"
