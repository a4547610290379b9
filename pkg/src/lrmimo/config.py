"""Experiment configuration: JSON ingestion with strict validation."""

import json
import os
from dataclasses import dataclass
from typing import Optional

from .errors import ConfigError


def _dmt_curve(nt, nr, r):
    from .channel import dmt_optimal_curve
    return dmt_optimal_curve(nt, nr, r)

_TOP_KEYS = {
    "code", "nt", "nr", "T", "rate", "snr_db", "trials", "decoder", "policy",
    "delta", "seed", "enum_cap", "threads", "out", "region",
}
_RATE_KEYS = {"mode", "r", "R"}
_POLICY_KEYS = {"kind", "epsilon", "target_d", "target_c", "budget_exponent"}
_REGION_KEYS = {"target_d", "target_c"}

_CODES = {"cda2x2", "uncoded_qam"}
_DECODERS = {"ml", "lrr", "linear"}
_POLICY_KINDS = {"unrestricted", "lr_halting", "flop_budget", "degrade"}

THREADS_ENV = "LRMIMO_THREADS"


@dataclass(frozen=True)
class ExperimentConfig:
    code: str
    nt: int
    nr: int
    T: int
    rate_mode: str                      # 'scaling' or 'fixed_rate'
    r: float
    fixed_rate: float
    snr_db: tuple
    trials: int
    decoder: str
    policy_kind: str
    epsilon: float
    target_d: float
    target_c: float
    budget_exponent: float
    delta: float
    seed: int
    enum_cap: int
    threads: Optional[int]
    out: Optional[str]
    region_d: tuple = (0.5, 1.0)
    region_c: tuple = (0.5, 1.0)

    def effective_threads(self):
        """Worker count; the environment variable overrides everything."""
        env = os.environ.get(THREADS_ENV)
        if env:
            return max(1, int(env))
        return self.threads or 1


def _need(doc, key, typ, ctx="config"):
    if key not in doc:
        raise ConfigError(f"{ctx}: missing required field '{key}'")
    val = doc[key]
    if typ is float and isinstance(val, int):
        val = float(val)
    if not isinstance(val, typ):
        raise ConfigError(f"{ctx}: field '{key}' must be {typ.__name__}")
    return val


def _reject_unknown(doc, allowed, ctx):
    for k in doc:
        if k not in allowed:
            raise ConfigError(f"{ctx}: unknown key '{k}'")


def parse_config(text):
    """Parse and validate a JSON experiment document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}")
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be an object")
    _reject_unknown(doc, _TOP_KEYS, "config")

    code = _need(doc, "code", str)
    if code not in _CODES:
        raise ConfigError(f"config: code must be one of {sorted(_CODES)}, got '{code}'")

    nt = int(_need(doc, "nt", int))
    nr = int(_need(doc, "nr", int))
    T = int(_need(doc, "T", int))
    if min(nt, nr, T) < 1:
        raise ConfigError("config: nt, nr, T must be positive")
    if code == "cda2x2" and (nt != 2 or T != 2):
        raise ConfigError("config: cda2x2 requires nt = 2 and T = 2")

    rate = _need(doc, "rate", dict)
    _reject_unknown(rate, _RATE_KEYS, "rate")
    mode = _need(rate, "mode", str, "rate")
    if mode not in ("scaling", "fixed_rate"):
        raise ConfigError("rate: mode must be 'scaling' or 'fixed_rate'")
    r = float(rate.get("r", 0.0))
    fixed = float(rate.get("R", 0.0))
    if mode == "scaling":
        if "r" not in rate:
            raise ConfigError("rate: scaling mode requires 'r'")
        if r <= 0 or r > min(nt, nr):
            raise ConfigError(f"rate: r must lie in (0, {min(nt, nr)}]")
    else:
        if "R" not in rate:
            raise ConfigError("rate: fixed_rate mode requires 'R'")
        if fixed <= 0:
            raise ConfigError("rate: R must be positive")

    snr = _need(doc, "snr_db", list)
    if len(snr) < 1:
        raise ConfigError("config: snr_db must not be empty")
    grid = tuple(float(v) for v in snr)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("config: snr_db must be strictly increasing")

    trials = int(_need(doc, "trials", int))
    if trials < 1:
        raise ConfigError("config: trials must be positive")

    decoder = _need(doc, "decoder", str)
    if decoder not in _DECODERS:
        raise ConfigError(f"config: decoder must be one of {sorted(_DECODERS)}")

    pol = doc.get("policy", {"kind": "unrestricted"})
    if not isinstance(pol, dict):
        raise ConfigError("config: policy must be an object")
    _reject_unknown(pol, _POLICY_KEYS, "policy")
    kind = pol.get("kind", "unrestricted")
    if kind not in _POLICY_KINDS:
        raise ConfigError(f"policy: kind must be one of {sorted(_POLICY_KINDS)}")
    epsilon = float(pol.get("epsilon", 0.5))
    if epsilon <= 0:
        raise ConfigError("policy: epsilon must be positive")
    target_d = float(pol.get("target_d", 0.0))
    target_c = float(pol.get("target_c", 0.0))
    budget_exponent = float(pol.get("budget_exponent", 0.0))
    if kind == "degrade":
        if target_d < 0 or target_c < 0:
            raise ConfigError("policy: degrade targets must be nonnegative")
        if decoder != "lrr":
            raise ConfigError("policy: degrade applies to the lrr decoder")
        if mode != "scaling":
            raise ConfigError("policy: degrade needs a scaling-rate schedule")
        if target_c > r * T + 1e-9:
            raise ConfigError(f"policy: target_c must lie in [0, rT] = [0, {r * T}]")
        d_opt = _dmt_curve(nt, nr, r)
        if target_d > d_opt + 1e-9:
            raise ConfigError(
                f"policy: target_d must lie in [0, d_opt(r)] = [0, {d_opt}]")

    delta = float(doc.get("delta", 0.75))
    if not 0.25 < delta <= 1.0:
        raise ConfigError("config: delta must lie in (1/4, 1]")

    seed = int(doc.get("seed", 0))
    enum_cap = int(doc.get("enum_cap", 2 ** 20))
    threads = doc.get("threads")
    if threads is not None:
        threads = int(threads)
        if threads < 1:
            raise ConfigError("config: threads must be positive")
    out = doc.get("out")

    region = doc.get("region", {})
    if not isinstance(region, dict):
        raise ConfigError("config: region must be an object")
    _reject_unknown(region, _REGION_KEYS, "region")
    region_d = tuple(float(v) for v in region.get("target_d", [0.5, 1.0]))
    region_c = tuple(float(v) for v in region.get("target_c", [0.5, 1.0]))

    return ExperimentConfig(
        code=code, nt=nt, nr=nr, T=T, rate_mode=mode, r=r, fixed_rate=fixed,
        snr_db=grid, trials=trials, decoder=decoder, policy_kind=kind,
        epsilon=epsilon, target_d=target_d, target_c=target_c,
        budget_exponent=budget_exponent, delta=delta, seed=seed,
        enum_cap=enum_cap, threads=threads, out=out,
        region_d=region_d, region_c=region_c)


def load_config(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
