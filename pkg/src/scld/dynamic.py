"""Two-stage dynamic tracing: an HLD screen, then an SCLD on the survivors.

Stage one hands every user a codeword of a list-decoding code; the
coalition's descendant narrows the suspects to the covered set ``W``.
Stage two re-fingerprints only ``W`` with a fresh separable code and traces
exactly.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import ceil, log2
from typing import Callable

import numpy as np

from . import _seeding
from .attack import symbolic_attack
from .bounds import hld_p_star
from .code import Code, residual
from .constructions import random_expurgated, x3_code
from .errors import ExpurgationError, ParameterError
from .trace import trace_scld
from .verify import is_hld, is_scld

MAX_RETRIES = 12


@dataclass
class DynamicSessionConfig:
    M: int
    t: int
    stage1: Code
    L1: int
    alpha: float
    beta: float | None
    seed: int
    stage2: Callable[[int], tuple[Code, int]] = field(repr=False)

    def summary(self) -> dict:
        return {
            "M": self.M,
            "t": self.t,
            "n1": self.stage1.n,
            "L1": self.L1,
            "alpha": self.alpha,
            "beta": self.beta,
            "seed": self.seed,
        }


@dataclass
class DynamicTranscript:
    planted: tuple[int, ...]
    d1: list
    W: tuple[int, ...]
    assignment: dict[int, int]
    d2: list | None
    T: tuple[int, ...] | None
    status: str
    reason: str = ""
    subsets_tested: int = 0
    timings: dict = field(default_factory=dict)

    @property
    def success(self) -> bool:
        return self.status == "success"

    def to_dict(self, timings: bool = True) -> dict:
        out = {
            "planted": list(self.planted),
            "d1": self.d1,
            "W": list(self.W),
            "assignment": {str(k): v for k, v in self.assignment.items()},
            "d2": self.d2,
            "T": None if self.T is None else list(self.T),
            "status": self.status,
            "reason": self.reason,
            "subsets_tested": self.subsets_tested,
        }
        if timings:
            out["timings"] = self.timings
        return out


def _random_stage_code(M: int, t: int, target: str, L: int | None, seed: int, label: str) -> Code:
    """Binary expurgated code with exactly ``M`` words; length grows until it fits."""
    n = max(4, 4 * ceil(log2(max(M, 2))))
    p = hld_p_star(t)
    for attempt in range(MAX_RETRIES):
        try:
            code, _ = random_expurgated(
                n, 2, t, target, L=L, M=M + M // 2 + 4, p=p, seed=_seeding.child_seed(seed, label, attempt)
            )
        except ExpurgationError:
            code = None
        if code is not None and code.M >= M:
            return Code(2, n, code.codewords[:M], provenance={**(code.provenance or {}), "truncated_to": M})
        n += 4
    raise ExpurgationError(f"could not build a {target} code of size {M} after {MAX_RETRIES} attempts")


def make_stage2(t: int, seed: int) -> Callable[[int], tuple[Code, int]]:
    """Stage-two generator: size-w SCLD plus its measured list size, cached per w.

    For t = 2 the (x, x^3) code restricted to its first w words is used;
    larger t get an expurgated random separable code.
    """
    cache: dict[int, tuple[Code, int]] = {}

    def gen(w: int) -> tuple[Code, int]:
        if w < 1:
            raise ParameterError("stage two needs at least one candidate")
        if w not in cache:
            if t == 2:
                code = x3_code(max(2, ceil(log2(max(w, 2))))).subcode(range(w))
            else:
                code = _random_stage_code(w, t, "SC", None, seed, f"stage2-{w}")
            cache[w] = (code, is_scld(code, min(t, w)).minimal_list_size)
        return cache[w]

    return gen


def plan_session(
    M: int, t: int, seed: int = 0, alpha: float = 0.5, beta: float | None = None, stage1: Code | None = None
) -> DynamicSessionConfig:
    if M < 1 or t < 1:
        raise ParameterError("need M >= 1 and t >= 1")
    if stage1 is None:
        if M == 1:
            stage1 = Code(2, 1, ((0,),), provenance={"construction": "trivial"})
        else:
            L_target = max(t, ceil(M**alpha))
            stage1 = _random_stage_code(M, t, "HLD", L_target, seed, "stage1")
    elif stage1.M != M:
        raise ParameterError(f"stage-1 code has {stage1.M} words, expected M={M}")
    L1 = is_hld(stage1, min(t, M)).minimal_list_size
    return DynamicSessionConfig(M, t, stage1, L1, alpha, beta, seed, make_stage2(t, seed))


def run_two_stage(config: DynamicSessionConfig, planted) -> DynamicTranscript:
    J = tuple(sorted(set(int(j) for j in planted)))
    if not J:
        raise ParameterError("empty coalition")
    if len(J) > config.t:
        raise ParameterError(f"coalition larger than t={config.t}")
    clock = time.perf_counter
    t0 = clock()
    d1 = symbolic_attack(config.stage1, J)
    W = residual(config.stage1, d1)
    t1 = clock()
    tr = DynamicTranscript(J, d1.as_sets(), W, {}, None, None, "failure")
    if not set(J) <= set(W):
        tr.reason = "planted coalition not in candidate set"
        return tr
    if len(W) > config.L1:
        tr.reason = f"|W|={len(W)} exceeds L1={config.L1}"
        return tr
    code2, L2 = config.stage2(len(W))
    tr.assignment = {u: k for k, u in enumerate(W)}
    d2 = symbolic_attack(code2, [tr.assignment[j] for j in J])
    res = trace_scld(code2, config.t, L2, d2)
    t2 = clock()
    tr.d2 = d2.as_sets()
    tr.subsets_tested = res.subsets_tested
    tr.timings = {"stage1": t1 - t0, "stage2": t2 - t1}
    if not res.identified:
        tr.reason = f"stage two returned {res.status}"
        return tr
    tr.T = tuple(sorted(W[k] for k in res.coalition))
    if tr.T != J:
        tr.reason = "traced coalition differs from the planted one"
        return tr
    tr.status = "success"
    return tr


@dataclass
class SimulationSummary:
    config: dict
    trials: int
    recovered: int
    mean_W: float
    max_W: int
    stage_time: dict
    transcripts: list[DynamicTranscript] = field(repr=False, default_factory=list)

    @property
    def recovery_rate(self) -> float:
        return self.recovered / self.trials if self.trials else 0.0

    def to_dict(self, timings: bool = True) -> dict:
        out = {
            "config": self.config,
            "trials": self.trials,
            "recovered": self.recovered,
            "recovery_rate": self.recovery_rate,
            "mean_W": self.mean_W,
            "max_W": self.max_W,
        }
        if timings:
            out["stage_time"] = self.stage_time
        return out


def _plant(M: int, t: int, trials: int, seed: int) -> list[list[int]]:
    gen = _seeding.rng(seed, "coalitions", M, t)
    out = []
    for _ in range(trials):
        size = int(gen.integers(1, min(t, M) + 1))
        out.append(sorted(gen.choice(M, size=size, replace=False).tolist()))
    return out


def _run_chunk(M: int, t: int, seed: int, coalitions: list[list[int]]) -> list[DynamicTranscript]:
    config = plan_session(M, t, seed)
    return [run_two_stage(config, J) for J in coalitions]


def simulate(
    M: int, t: int, trials: int, seed: int = 0, config: DynamicSessionConfig | None = None, workers: int = 1
) -> SimulationSummary:
    """Plan one session, then plant ``trials`` random coalitions of size 1..t.

    With ``workers > 1`` the trials are split across processes; each worker
    re-plans the same session from the seed, so results do not depend on
    the worker count.
    """
    coalitions = _plant(M, t, trials, seed)
    workers = max(1, min(workers, trials // 50))
    if config is not None or workers == 1:
        config = config or plan_session(M, t, seed)
        out = [run_two_stage(config, J) for J in coalitions]
    else:
        from concurrent.futures import ProcessPoolExecutor

        chunks = [coalitions[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_run_chunk, [M] * workers, [t] * workers, [seed] * workers, chunks))
        out = [None] * trials
        for i, part in enumerate(parts):
            out[i::workers] = part
        config = plan_session(M, t, seed)
    ws = [len(tr.W) for tr in out]
    times = {
        k: float(np.mean([tr.timings.get(k, 0.0) for tr in out])) if out else 0.0 for k in ("stage1", "stage2")
    }
    return SimulationSummary(
        config.summary(),
        trials,
        sum(tr.success for tr in out),
        float(np.mean(ws)) if ws else 0.0,
        max(ws, default=0),
        times,
        out,
    )
