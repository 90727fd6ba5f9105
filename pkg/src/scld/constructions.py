"""Explicit code families and the random-coding-with-expurgation generator."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from functools import cached_property
from itertools import combinations, product
from math import ceil

import numpy as np

from . import _seeding
from .code import Code, _pack
from .errors import ExpurgationError, FieldError, ParameterError
from .gf import Field, field_create, field_of_order
from .verify import CoalitionScan, is_hld, is_scld, is_separable


@dataclass(frozen=True)
class PackingDesign:
    """Generalized (v, b, K, 1) packing on points ``0..v-1``."""

    v: int
    blocks: tuple[tuple[int, ...], ...]
    K: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "K", frozenset(self.K))
        self.validate()

    @property
    def b(self) -> int:
        return len(self.blocks)

    def validate(self) -> None:
        seen: set[tuple[int, int]] = set()
        for blk in self.blocks:
            if blk and len(blk) not in self.K:
                raise ParameterError(f"block size {len(blk)} not in K={sorted(self.K)}")
            if len(set(blk)) != len(blk) or any(not 0 <= x < self.v for x in blk):
                raise ParameterError(f"malformed block {blk}")
            for pair in combinations(blk, 2):
                if pair in seen:
                    raise ParameterError(f"pair {pair} occurs in two blocks")
                seen.add(pair)

    def block_sizes(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for blk in self.blocks:
            out[len(blk)] = out.get(len(blk), 0) + 1
        return out


def _field(q: int) -> Field:
    try:
        return field_of_order(q)
    except FieldError as exc:
        raise ParameterError(f"unsupported q={q}: {exc}") from None


def _normalized_triples(F: Field) -> list[tuple[int, int, int]]:
    q = F.order
    out = [(0, 0, 1)] + [(0, 1, c) for c in range(q)] + [(1, b, c) for b in range(q) for c in range(q)]
    return sorted(out)


def projective_plane(q: int) -> PackingDesign:
    """PG(2, q); points and lines both indexed by sorted normalized triples."""
    F = _field(q)
    reps = _normalized_triples(F)

    def dot(a, b):
        return F.add(F.add(F.mul(a[0], b[0]), F.mul(a[1], b[1])), F.mul(a[2], b[2]))

    blocks = tuple(tuple(i for i, pt in enumerate(reps) if dot(line, pt) == 0) for line in reps)
    return PackingDesign(len(reps), blocks, frozenset({q + 1}))


def truncate_plane(q: int) -> PackingDesign:
    """Drop the last line and its least point, then renumber the points."""
    plane = projective_plane(q)
    gone = plane.blocks[-1][0]
    blocks = tuple(tuple(x - (x > gone) for x in blk if x != gone) for blk in plane.blocks[:-1])
    return PackingDesign(plane.v - 1, blocks, frozenset({q, q + 1}))


def packing_to_scld(design: PackingDesign) -> Code:
    """Length-2 code {(i, x) : x in B_i} over the alphabet of points."""
    if design.b != design.v:
        raise ParameterError(f"block count mismatch: b={design.b}, v={design.v}")
    words = tuple((i, x) for i, blk in enumerate(design.blocks) for x in blk)
    return Code(design.v, 2, words, provenance={"construction": "packing", "v": design.v})


def _poly_eval(F: Field, coeffs, x: int) -> int:
    # coeffs lowest degree first
    acc = 0
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, x), c)
    return acc


def fpc_poly_eval(q: int, l: int, t: int, extended: bool = False) -> Code:
    """Evaluate every polynomial of degree < ceil(l/t) at ``l`` field points.

    Points are ``0, 1, ..., l-1`` in the field's integer enumeration. With
    ``extended`` one extra point at infinity is allowed (``l = q + 1``); it
    reads the coefficient of the top degree, which keeps the code MDS.
    """
    if t < 2 or l < 2:
        raise ParameterError("need t >= 2 and l >= 2")
    F = _field(q)
    if l > q + (1 if extended else 0):
        raise ParameterError(f"not enough evaluation points: l={l} > q={q}")
    k = ceil(l / t)
    finite = min(l, q)
    words = []
    for top_first in product(range(q), repeat=k):
        coeffs = top_first[::-1]
        w = [_poly_eval(F, coeffs, x) for x in range(finite)]
        if l > q:
            w.append(coeffs[-1])
        words.append(tuple(w))
    prov = {"construction": "poly-fpc", "q": q, "l": l, "t": t, "extended": extended}
    return Code(q, l, tuple(words), provenance=prov)


def fpc_construction4(m: int, l: int) -> Code:
    """Two-part frameproof code over {inf} + GF(m)^2, encoded as 0 and 1 + a*m + b."""
    if l < 4 or l % 2:
        raise ParameterError("l must be an even integer >= 4")
    if m < l + 1:
        raise ParameterError(f"need m >= l + 1 (m={m}, l={l})")
    F = _field(m)
    h = l // 2
    alphas = range(2, l + 1)

    def enc(a, b):
        return 1 + a * m + b

    words = []
    for f_top in range(1, m):
        for f_rest in product(range(m), repeat=h - 1):
            f = f_rest[::-1] + (f_top,)
            fv = [_poly_eval(F, f, a) for a in alphas]
            for g in product(range(m), repeat=h):
                g = g[::-1]
                words.append((0,) + tuple(enc(x, _poly_eval(F, g, a)) for x, a in zip(fv, alphas)))
    for s in product(range(m), repeat=h - 1):
        s = s[::-1]
        sv = [_poly_eval(F, s, a) for a in alphas]
        for tc in product(range(m), repeat=h + 1):
            tc = tc[::-1]
            head = enc(_poly_eval(F, tc, 0), _poly_eval(F, tc, 1))
            words.append((head,) + tuple(enc(x, _poly_eval(F, tc, a)) for x, a in zip(sv, alphas)))
    return Code(m * m + 1, l, tuple(words), provenance={"construction": "c4-fpc", "m": m, "l": l})


def construction4_size(m: int, l: int) -> int:
    return m ** (l - 1) * (2 * m - 1)


def concatenate(inner: Code, outer: Code) -> Code:
    """Replace each outer symbol s by the inner codeword number s."""
    if inner.M < outer.q:
        raise ParameterError(f"bijection impossible: inner has {inner.M} codewords, outer alphabet is {outer.q}")
    phi = inner.codewords[: outer.q]
    words = tuple(tuple(s for sym in w for s in phi[sym]) for w in outer.codewords)
    prov = {"construction": "concat", "inner": inner.provenance, "outer": outer.provenance}
    return Code(inner.q, inner.n * outer.n, words, provenance=prov)


def x3_code(l: int) -> Code:
    """Binary words (bits of x, bits of x^3) for every x in GF(2^l), indexed by x."""
    if l < 2:
        raise ParameterError("l must be >= 2")
    try:
        F = field_create(2, l)
    except FieldError as exc:
        raise ParameterError(f"unsupported l={l}: {exc}") from None
    words = []
    for x in range(F.order):
        c = F.pow(x, 3)
        words.append(tuple(x >> i & 1 for i in range(l)) + tuple(c >> i & 1 for i in range(l)))
    return Code(2, 2 * l, tuple(words), provenance={"construction": "x3", "l": l})


# -- random coding with expurgation -----------------------------------------

class _Words:
    """Code-like view over a word array that may contain repeats."""

    def __init__(self, q: int, array: np.ndarray):
        self.q = q
        self.array = np.ascontiguousarray(array, dtype=np.int64)
        self.M, self.n = self.array.shape

    @cached_property
    def packed(self) -> tuple[int, ...]:
        return tuple(_pack(w, self.q) for w in self.array.tolist())


@dataclass
class ExpurgationReport:
    initial_size: int
    removed_bad_pairs: int
    removed_bad_weight: int
    removed_bad_sets: int
    final_size: int
    rounds: int
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


TARGETS = ("SC", "SCLD", "HLD")


def _bad_items(words: _Words, t: int, target: str, L: int | None) -> tuple[set[int], set[int]]:
    """Row positions to drop: (from bad pairs, from bad sets)."""
    tt = min(t, words.M)
    # HLD mode still drops repeated words so that the output is a valid code
    scan = CoalitionScan.run(words, tt if target != "HLD" else 1)
    pair_drop = set()
    for group in scan.collision_groups():
        for a, b in combinations(group, 2):
            pair_drop.add(max(a[-1], b[-1]))
    set_drop = set()
    if L is not None and target in ("SCLD", "HLD"):
        if target == "HLD":
            if words.M < t:
                return pair_drop, set_drop
            scan = CoalitionScan.run(words, t, exact=True)
        for pos in np.flatnonzero(scan.counts > L):
            c = scan.coalition(pos)
            if c[-1] not in pair_drop:
                set_drop.add(c[-1])
    return pair_drop, set_drop


def random_expurgated(
    n: int,
    q: int,
    t: int,
    target: str = "SC",
    L: int | None = None,
    M: int = 64,
    p: float | None = None,
    weight_filter: bool = False,
    seed: int = 0,
    max_rounds: int = 1000,
) -> tuple[Code, ExpurgationReport]:
    """Sample ``M`` random words, then delete one member of every bad item until clean.

    Binary codes use Bernoulli(p) bits when ``p`` is given; otherwise symbols
    are uniform. Bad items are pairs of distinct coalitions (sizes <= t) with
    equal descendants and, for SCLD/HLD targets, coalitions whose residual
    exceeds ``L``. The largest index of each bad item is removed.
    """
    target = target.upper()
    if target not in TARGETS:
        raise ParameterError(f"unknown target {target!r}")
    if target != "SC" and L is None:
        raise ParameterError(f"target {target} needs a list size L")
    if n < 1 or q < 2 or t < 1 or M < 1:
        raise ParameterError("need n >= 1, q >= 2, t >= 1, M >= 1")
    if p is not None and (q != 2 or not 0 < p < 1):
        raise ParameterError("p applies to binary codes only and must lie in (0, 1)")
    if weight_filter and p is None:
        raise ParameterError("weight filter needs p")

    gen = _seeding.rng(seed, "expurgate", n, q, t, target, L, M, p)
    if p is not None:
        rows = (gen.random((M, n)) < p).astype(np.int64)
    else:
        rows = gen.integers(0, q, size=(M, n), dtype=np.int64)

    params = {"n": n, "q": q, "p": p, "t": t, "L": L, "target": target, "M": M, "seed": seed}
    removed_weight = 0
    if weight_filter:
        keep = rows.sum(axis=1) == int(np.floor(p * (n + 1)))
        removed_weight = int((~keep).sum())
        rows = rows[keep]

    removed_pairs = removed_sets = rounds = 0
    while len(rows):
        words = _Words(q, rows)
        pair_drop, set_drop = _bad_items(words, t, target, L)
        if not pair_drop and not set_drop:
            break
        rounds += 1
        if rounds > max_rounds:
            raise ExpurgationError("expurgation did not converge")
        removed_pairs += len(pair_drop)
        removed_sets += len(set_drop)
        keep = np.ones(len(rows), dtype=bool)
        keep[list(pair_drop | set_drop)] = False
        rows = rows[keep]
    if not len(rows):
        raise ExpurgationError("expurgated to empty")

    code = Code(q, n, tuple(map(tuple, rows.tolist())), provenance={"construction": "random", **params})
    tt = min(t, code.M)
    if target == "SC":
        ok = is_separable(code, tt).holds
    elif target == "SCLD":
        ok = is_scld(code, tt, L).holds
    else:
        ok = code.M < t or is_hld(code, t, L).holds
    assert ok, "expurgated code fails its target oracle"
    report = ExpurgationReport(M, removed_pairs, removed_weight, removed_sets, code.M, rounds, params)
    return code, report
