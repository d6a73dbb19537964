"""Run configuration, check execution, and report emission.

A run resolves to a list of (p, e, f, N) contexts: either the single context
named by the config or the default four-context grid.  Each context gets its
own Workspace; the selected checks execute in dependency order (field tables,
then ring carries, then tree codecs, then operators and quotient oracle), and
the report rows are normalized by check id so that two runs with the same
seed emit byte-identical JSON apart from the timing fields.
"""

from dataclasses import dataclass, field
import json
import random
import time

import numpy as np

from .errors import (ConfigError, CutoffExceeded, LabError, OutOfBall,
                     ResourceBudgetExceeded)
from .checks import CheckOutcome, REGISTRY, all_checks
from .spaces import Workspace

VERSION = "0.1.0"

# unramified/ramified coverage plus the q <= 3 exclusion demos
DEFAULT_GRID = ((2, 1, 2), (3, 2, 1), (5, 2, 1), (2, 2, 1))
# larger residue fields, kept to small balls
SMOKE_GRID = ((2, 1, 3), (3, 1, 2))
SMOKE_BALL_CAP = 2

# labels held by one Workspace before we refuse to enumerate the ball
LABEL_BUDGET = 2_500_000

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59,
           61, 67, 71, 73, 79)

# execution stages; anything not named here runs last, after the operator
# relations it builds on
_STAGE = {
    "infra_field_axioms": 0,
    "identity_power_sums": 0,
    "identity_first_digit": 0,
    "infra_carry_oracle": 1,
    "infra_codec_roundtrip": 2,
    "infra_ball_counts": 2,
    "infra_witness_soundness": 2,
    "relations_iwahori_ops": 3,
    "lemma_L1": 3,
    "lemma_every_fun_is_poly": 3,
    "remark_t_family": 3,
}


def _label_estimate(q: int, N: int) -> int:
    """Vertex labels out to distance N+2 plus oriented edge labels out to
    radius N+1, the exact contents of a radius-(N+1) Workspace ball."""
    verts = 1 + (q + 1) * (q ** (N + 2) - 1) // (q - 1)
    edges = 2 * ((1 + (q + 1) * (q ** (N + 1) - 1) // (q - 1)) - 1)
    return verts + edges


@dataclass
class RunConfig:
    p: int | None = None         # None selects the default grid
    e: int = 1
    f: int = 1
    prec: int | None = None
    ball: int = 3                # invariant-space radius N; Workspace uses N+1
    seed: int = 0
    checks: tuple = ("all",)     # check ids, or ("all",)
    samples: int = 12
    max_cutoff: int = 6
    out: str | None = None
    checked: bool = True
    smoke: bool = False          # add the q=8/9 contexts at N <= 2

    def validate(self):
        if self.p is not None:
            if self.p not in _PRIMES:
                raise ConfigError(f"p={self.p} is not a small prime")
            if self.e < 1 or self.f < 1:
                raise ConfigError("e and f must be at least 1")
            if self.p ** self.f > 81:
                raise ConfigError(f"q={self.p ** self.f} exceeds 81")
        if not 1 <= self.ball <= 4:
            raise ConfigError(f"ball radius {self.ball} outside 1..4")
        if self.prec is not None and self.prec < self.ball + 3:
            raise ConfigError(
                f"prec={self.prec} too small for ball radius {self.ball}")
        if self.samples < 1:
            raise ConfigError("samples must be positive")
        if self.max_cutoff < 1:
            raise ConfigError("max cutoff must be positive")
        for cid in self.checks:
            if cid != "all" and cid not in REGISTRY:
                raise ConfigError(f"unknown check id {cid!r}")

    def contexts(self):
        """(p, e, f, N) tuples this run covers."""
        if self.p is not None:
            return [(self.p, self.e, self.f, self.ball)]
        grid = [(p, e, f, self.ball) for (p, e, f) in DEFAULT_GRID]
        if self.smoke:
            n = min(self.ball, SMOKE_BALL_CAP)
            grid += [(p, e, f, n) for (p, e, f) in SMOKE_GRID]
        return grid

    def selected(self):
        if list(self.checks) == ["all"]:
            return all_checks()
        keep = set(self.checks)
        return [s for s in all_checks() if s.id in keep]


@dataclass
class _CheckCfg:
    N: int
    samples: int
    max_cutoff: int


@dataclass
class Report:
    config: dict
    checks: list
    summary: dict
    version: str = VERSION

    def exit_code(self) -> int:
        if any(r["status"] == "fail" for r in self.checks):
            return 1
        if any(r["status"] == "inconclusive"
               and r["witness"].get("reason") != "budget"
               for r in self.checks):
            return 1
        return 0


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return repr(x)


def run_checks(config: RunConfig) -> Report:
    config.validate()
    specs = config.selected()
    rows = []
    for (p, e, f, N) in config.contexts():
        est = _label_estimate(p ** f, N)
        if est > LABEL_BUDGET:
            raise ResourceBudgetExceeded(
                f"context p={p} e={e} f={f} N={N} needs about {est} labels, "
                f"budget is {LABEL_BUDGET}")
        wanted = [s for s in specs if s.wants(p, e, f, N)]
        if not wanted:
            continue
        ws = Workspace(p, e, f, radius=N + 1, prec=config.prec,
                       checked=config.checked)
        ccfg = _CheckCfg(N=N, samples=config.samples,
                         max_cutoff=config.max_cutoff)
        for spec in sorted(wanted, key=lambda s: (_STAGE.get(s.id, 4), s.id)):
            rng = random.Random(f"{config.seed}:{spec.id}:{p},{e},{f},{N}")
            t0 = time.perf_counter()
            try:
                out = spec.runner(ws, ccfg, rng)
            except (ResourceBudgetExceeded, CutoffExceeded, OutOfBall) as ex:
                out = CheckOutcome("inconclusive",
                                   {"reason": "budget", "detail": str(ex)})
            except LabError as ex:
                out = CheckOutcome(
                    "inconclusive",
                    {"reason": "internal",
                     "detail": f"{type(ex).__name__}: {ex}"})
            ms = int(round(1000 * (time.perf_counter() - t0)))
            rows.append({
                "id": spec.id,
                "params": {"p": p, "e": e, "f": f, "N": N},
                "status": out.status,
                "witness": _jsonable(out.witness),
                "provenance": spec.provenance,
                "ms": ms,
            })
    rows.sort(key=lambda r: (r["id"], r["params"]["p"], r["params"]["e"],
                             r["params"]["f"], r["params"]["N"]))
    summary = {
        "total": len(rows),
        "pass": sum(r["status"] == "pass" for r in rows),
        "fail": sum(r["status"] == "fail" for r in rows),
        "inconclusive": sum(r["status"] == "inconclusive" for r in rows),
    }
    cfg_echo = {
        "grid": [list(c) for c in config.contexts()],
        "prec": config.prec,
        "seed": config.seed,
        "checks": list(config.checks),
        "samples": config.samples,
        "max_cutoff": config.max_cutoff,
        "checked": config.checked,
    }
    return Report(config=cfg_echo, checks=rows, summary=summary)


def report_emit(report: Report, format: str = "text") -> bytes:
    if format == "json":
        doc = {"config": report.config, "checks": report.checks,
               "summary": report.summary, "version": report.version}
        return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()
    if format != "text":
        raise ConfigError(f"unknown report format {format!r}")
    lines = []
    head = f"{'check':36s} {'p':>2s} {'e':>2s} {'f':>2s} {'N':>2s} {'status':12s} {'ms':>7s}"
    lines.append(head)
    lines.append("-" * len(head))
    for r in report.checks:
        pr = r["params"]
        lines.append(f"{r['id']:36s} {pr['p']:2d} {pr['e']:2d} {pr['f']:2d} "
                     f"{pr['N']:2d} {r['status']:12s} {r['ms']:7d}")
    s = report.summary
    lines.append("-" * len(head))
    lines.append(f"total {s['total']}  pass {s['pass']}  fail {s['fail']}  "
                 f"inconclusive {s['inconclusive']}")
    return ("\n".join(lines) + "\n").encode()


def list_checks() -> str:
    lines = []
    for spec in all_checks():
        lines.append(f"{spec.id:36s} {spec.anchor}")
    return "\n".join(lines) + "\n"


def describe_check(check_id: str) -> str:
    if check_id not in REGISTRY:
        raise ConfigError(f"unknown check id {check_id!r}")
    spec = REGISTRY[check_id]
    gates = [f"min ball N >= {spec.min_ball}"]
    if spec.min_q > 2:
        gates.append(f"q >= {spec.min_q}")
    if spec.only_generic:
        gates.append("q > 3 and ef > 1 only")
    if spec.only_contexts:
        gates.append("contexts " + ", ".join(
            f"(p={p},e={e},f={f})" for (p, e, f) in spec.only_contexts))
    return (f"id:         {spec.id}\n"
            f"statement:  {spec.anchor}\n"
            f"expected:   {spec.provenance}\n"
            f"applies:    {'; '.join(gates)}\n")
