"""Tracing algorithms: recover a coalition from an evidence vector.

``trace_scld`` is the two-step decoder. Step one keeps only codewords
covered by the evidence; step two tries subsets of that list, smallest
first, until one reproduces the evidence exactly. ``fast_trace_x3``
decodes the binary ``(x, x^3)`` code in constant field operations.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

from ._backend import kernels
from .code import Code, Coalition, EvidenceVector, _check_shape, desc, residual
from .errors import AmbiguousEvidenceError, FieldError, ListOverflowError, ParameterError, ShapeError
from .gf import field_create, solve_quadratic_z

IDENTIFIED = "identified"
NO_MATCH = "no-match"
INVALID = "invalid-evidence"


@dataclass
class TraceResult:
    status: str
    coalition: Coalition | None = None
    candidate_count: int | None = None
    subsets_tested: int = 0

    @property
    def identified(self) -> bool:
        return self.status == IDENTIFIED

    def to_dict(self) -> dict:
        out = asdict(self)
        if self.coalition is not None:
            out["coalition"] = list(self.coalition)
        return out


def _search(code: Code, cand, t: int, d: EvidenceVector, diagnostic: bool) -> TraceResult:
    matches, tested = kernels.match_subsets(code, cand, t, d, first_only=not diagnostic)
    if not matches:
        return TraceResult(NO_MATCH, None, len(cand), int(tested))
    if diagnostic and len(matches) > 1:
        raise AmbiguousEvidenceError(f"evidence matches {len(matches)} coalitions: {matches[:3]}")
    return TraceResult(IDENTIFIED, tuple(matches[0]), len(cand), int(tested))


def trace_scld(code: Code, t: int, L: int | None, d: EvidenceVector, diagnostic: bool = False) -> TraceResult:
    """Two-step tracing for a (t, L)-SCLD.

    With ``diagnostic`` every candidate subset is tested and more than one
    match raises ``AmbiguousEvidenceError`` (the code is then not separable).
    """
    if t < 1:
        raise ParameterError("t must be >= 1")
    _check_shape(code, d)
    W = residual(code, d)
    if L is not None and len(W) > L:
        raise ListOverflowError(f"list overflow: {len(W)} candidates > L={L}")
    if not W:
        return TraceResult(NO_MATCH, None, 0, 0)
    return _search(code, W, t, d, diagnostic)


def trace_sc(code: Code, t: int, d: EvidenceVector, diagnostic: bool = False) -> TraceResult:
    """Exhaustive subset search over the whole code, no first step."""
    if t < 1:
        raise ParameterError("t must be >= 1")
    _check_shape(code, d)
    return _search(code, range(code.M), t, d, diagnostic)


def trace_fpc(code: Code, t: int, d: EvidenceVector) -> TraceResult:
    """For a t-frameproof code the covered codewords are the coalition itself."""
    _check_shape(code, d)
    W = residual(code, d)
    if not W or len(W) > t or desc(code, W) != d:
        return TraceResult(INVALID, None, len(W), 0)
    return TraceResult(IDENTIFIED, W, len(W), 0)


def fast_trace_x3(l: int, d: EvidenceVector) -> TraceResult:
    """Decode evidence for the code ``{(x, x^3)}`` over GF(2^l), coalitions of size <= 2.

    Bit ``j`` of a field element is coordinate ``j`` of each half, and the
    codeword index equals the integer value of ``x``.
    """
    if d.q != 2 or d.n != 2 * l:
        raise ShapeError(f"shape error: expected binary evidence of length {2 * l}")
    F = field_create(2, l)
    u = v = low = high = 0
    for i in range(l):
        if d.sets[i] == 3:
            u |= 1 << i
        elif d.sets[i] == 2:
            low |= 1 << i
        if d.sets[l + i] == 3:
            v |= 1 << i
        elif d.sets[l + i] == 2:
            high |= 1 << i
    if u == 0:
        if v == 0 and F.pow(low, 3) == high:
            return TraceResult(IDENTIFIED, (low,), None, 0)
        return TraceResult(INVALID)
    # x, y are the roots of X^2 + uX + (v/u + u^2); substitute X = uz
    c = 1 ^ F.div(v, F.pow(u, 3))
    try:
        z = solve_quadratic_z(F, c)
    except FieldError:
        return TraceResult(INVALID)
    x = F.mul(u, z)
    y = x ^ u
    x3, y3 = F.pow(x, 3), F.pow(y, 3)
    for i in range(l):
        bits = (1 << (x >> i & 1)) | (1 << (y >> i & 1))
        bits3 = (1 << (x3 >> i & 1)) | (1 << (y3 >> i & 1))
        if d.sets[i] != bits or d.sets[l + i] != bits3:
            return TraceResult(INVALID)
    return TraceResult(IDENTIFIED, tuple(sorted((x, y))), None, 0)
