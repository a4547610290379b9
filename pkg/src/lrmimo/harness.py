"""Monte Carlo engine over an SNR grid and the exponent estimators.

Trials are independent work units keyed by (master_seed, point, chunk);
chunk boundaries are fixed, so any scheduling of chunks over worker
threads produces bit-identical aggregates.
"""

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from . import _kernels, rng
from .codes import RateSchedule, make_code, schedule_rate
from .decoders import ML_DIRECT_LIMIT, ml_flops
from .errors import CodebookTooLarge, InsufficientData, InvalidWeighting
from .policy import Policy, lr_halting_policy, lr_threshold, unrestricted_policy

_ML_SUBBATCH = 16
_ML_CHUNK_CW = 2 ** 17
_DEGRADE_BASE_FLOPS = 1


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    rho: float
    snr_db: float
    rate_bits: float
    outcome: str                # 'correct', 'error', 'halted'
    flops: int
    kappa: Optional[float]
    lll_cycles: Optional[int]
    seed: int                   # stream position (point << 32) | trial


@dataclass(frozen=True)
class PointSummary:
    rho: float
    snr_db: float
    rate_bits: float
    q: int
    trials: int
    errors: int                 # wrong decisions, halts excluded
    halts: int
    max_flops: int
    mean_flops: float

    @property
    def error_rate(self):
        """Error probability; halted trials count as errors."""
        return (self.errors + self.halts) / self.trials


@dataclass(frozen=True)
class RunSummary:
    points: List[PointSummary]
    master_seed: int
    decoder: str
    policy_kind: str


@dataclass(frozen=True)
class ExponentEstimate:
    value: float
    stderr: float
    grid: List[tuple]           # (log rho, log quantity) pairs used
    base_note: str = "exponents measured against base rho"


def _policy_from_config(cfg):
    if cfg.policy_kind == "unrestricted":
        return unrestricted_policy()
    if cfg.policy_kind == "lr_halting":
        return lr_halting_policy(cfg.nt, cfg.nr, cfg.epsilon)
    if cfg.policy_kind == "flop_budget":
        return Policy(kind="flop_budget", budget_exponent=cfg.budget_exponent)
    return Policy(kind="degrade", target_d=cfg.target_d, target_c=cfg.target_c)


def _schedule_from_config(cfg):
    if cfg.rate_mode == "scaling":
        return RateSchedule(mode="scaling", r=cfg.r)
    return RateSchedule(mode="fixed_rate", fixed_rate=cfg.fixed_rate)


def _draw_chunk(master, point, chunk, ntrials, model, size):
    """Per-chunk channel, noise, and codeword-index draws.

    Column layout per trial: 2*nr*nt uniforms for H, 2*nr*T for the
    noise, one for the codeword index, one for policy flips.  Gaussians
    come from Box-Muller on consecutive uniform pairs.
    """
    dh = 2 * model.nr * model.nt
    dw = 2 * model.nr * model.T
    u = rng.chunk_uniforms(master, point, chunk, ntrials, dh + dw + 2)
    gh0, gh1 = rng.box_muller(u[:, 0:dh:2], u[:, 1:dh:2])
    g = np.empty((ntrials, dh))
    g[:, 0::2] = gh0
    g[:, 1::2] = gh1
    H = (g[:, 0::2] + 1j * g[:, 1::2]) / np.sqrt(2.0)
    H = H.reshape(ntrials, model.nr, model.nt)
    gw0, gw1 = rng.box_muller(u[:, dh:dh + dw:2], u[:, dh + 1:dh + dw:2])
    w = np.empty((ntrials, dw))
    w[:, 0::2] = gw0
    w[:, 1::2] = gw1
    idx = np.minimum((u[:, dh + dw] * size).astype(np.int64), size - 1)
    flip = u[:, dh + dw + 1]
    return H, w, idx, flip


def _embed_channels(H):
    ntr, nr, nt = H.shape
    Hre = np.empty((ntr, 2 * nr, 2 * nt))
    Hre[:, 0::2, 0::2] = H.real
    Hre[:, 0::2, 1::2] = -H.imag
    Hre[:, 1::2, 0::2] = H.imag
    Hre[:, 1::2, 1::2] = H.real
    return Hre


def _received(model, Hre, x, w):
    """y = sqrt(beta) blockdiag(Hre) x + w for a whole chunk."""
    ntr = Hre.shape[0]
    xu = x.reshape(ntr, model.T, 2 * model.nt)
    y = np.sqrt(model.beta) * np.einsum("tij,tuj->tui", Hre, xu)
    return y.reshape(ntr, -1) + w


def _ml_big_chunk(F_all, y_all, code, idx_true, ok_out):
    """Chunked-BLAS exhaustive search for codebooks beyond the direct limit."""
    ntr = F_all.shape[0]
    m = F_all.shape[1]
    for t0 in range(0, ntr, _ML_SUBBATCH):
        t1 = min(t0 + _ML_SUBBATCH, ntr)
        nb = t1 - t0
        Fb = F_all[t0:t1].reshape(nb * m, code.ns)
        yb = y_all[t0:t1]
        best = np.full(nb, np.inf)
        arg = np.full(nb, -1, dtype=np.int64)
        for a in range(0, code.size, _ML_CHUNK_CW):
            b = min(a + _ML_CHUNK_CW, code.size)
            S = (2.0 * code.offsets_matrix(a, b) - (code.Lvec - 1))
            Y = (Fb @ S.T).reshape(nb, m, b - a)
            Y -= yb[:, :, None]
            np.square(Y, out=Y)
            dist = Y.sum(axis=1)
            loc = np.argmin(dist, axis=1)
            d = dist[np.arange(nb), loc]
            better = d < best
            best[better] = d[better]
            arg[better] = a + loc[better]
        ok_out[t0:t1] = arg == idx_true[t0:t1]


def run_grid(cfg, collect_records=True, progress=None):
    """Execute the Monte Carlo grid described by an ExperimentConfig.

    Returns (RunSummary, records) where records is None unless
    collect_records.  Deterministic given cfg.seed, for any thread count.
    """
    from .channel import ChannelModel

    sched = _schedule_from_config(cfg)
    policy = _policy_from_config(cfg)
    threads = cfg.effective_threads()
    points = []
    records = [] if collect_records else None
    family_nsym = 4 if cfg.code == "cda2x2" else cfg.nt * cfg.T

    for p_idx, snr in enumerate(cfg.snr_db):
        rho = 10.0 ** (snr / 10.0)
        R, q = schedule_rate(sched, cfg.code, cfg.nt, cfg.T, family_nsym, rho)
        code = make_code(cfg.code, q, nt=cfg.nt, T=cfg.T)
        model = ChannelModel(cfg.nt, cfg.nr, cfg.T, rho)
        if cfg.decoder == "ml" and code.size > cfg.enum_cap:
            raise CodebookTooLarge(
                f"|X| = {code.size} at {snr} dB exceeds enum_cap {cfg.enum_cap}")

        n_tr = cfg.trials
        ok = np.zeros(n_tr, dtype=np.bool_)
        flops = np.zeros(n_tr, dtype=np.int64)
        kappa = np.full(n_tr, -1.0)
        cycles = np.full(n_tr, -1, dtype=np.int64)
        halted = np.zeros(n_tr, dtype=np.bool_)

        r_pol = sched.policy_multiplexing_gain
        kap_thresh = -1.0
        budget = -1
        if policy.kind == "lr_halting":
            kap_thresh = lr_threshold(rho, r_pol, policy)
        elif policy.kind == "flop_budget":
            budget = int(np.floor(rho ** policy.budget_exponent))

        G2 = np.ascontiguousarray(code.scale * code.G)
        sqrt_beta = np.sqrt(model.beta)
        alpha = model.nt / model.rho
        if cfg.decoder == "ml" and code.size <= ML_DIRECT_LIMIT:
            S_direct = (2.0 * code.offsets_matrix(0, code.size)
                        - (code.Lvec - 1)).astype(np.float64)
        else:
            S_direct = None
        flops_ml = ml_flops(code, model)

        def do_chunk(ci):
            a = ci * rng.CHUNK
            b = min(a + rng.CHUNK, n_tr)
            nb = b - a
            H, w, idx, flip = _draw_chunk(cfg.seed, p_idx, ci, nb, model, code.size)
            if policy.kind == "degrade":
                # synthetic degradation of an ideal transceiver: forced
                # errors at rho^-target_d, busy-work flops rho^target_c
                p_flip = rho ** (-policy.target_d)
                extra = int(np.ceil(rho ** policy.target_c))
                err = flip < p_flip
                ok[a:b] = ~err
                flops[a:b] = _DEGRADE_BASE_FLOPS + extra
                return
            Hre = np.ascontiguousarray(_embed_channels(H))
            ut = np.empty((nb, code.ns), dtype=np.int64)
            rem = idx.copy()
            for j in range(code.ns - 1, -1, -1):
                L = int(code.Lvec[j])
                ut[:, j] = rem % L
                rem //= L
            x = (2.0 * ut - (code.Lvec - 1)) @ G2.T
            y = np.ascontiguousarray(_received(model, Hre, x, w))
            if cfg.decoder == "ml":
                if S_direct is not None:
                    _kernels.run_chunk_ml(Hre, y, idx, G2, S_direct, sqrt_beta,
                                          flops_ml, ok[a:b], flops[a:b])
                else:
                    F_all = sqrt_beta * np.einsum(
                        "tij,ujk->tuik", Hre,
                        G2.reshape(model.T, 2 * model.nt, code.ns)).reshape(
                            nb, 2 * model.nr * model.T, code.ns)
                    _ml_big_chunk(F_all, y, code, idx, ok[a:b])
                    flops[a:b] = flops_ml
            else:
                _kernels.run_chunk_lattice(
                    Hre, y, ut, G2, code.Lvec, sqrt_beta, alpha, cfg.delta,
                    cfg.decoder == "lrr", kap_thresh, budget,
                    ok[a:b], flops[a:b], kappa[a:b], cycles[a:b], halted[a:b])

        n_chunks = (n_tr + rng.CHUNK - 1) // rng.CHUNK
        do_chunk(0)  # warm compiled kernels before fanning out
        if n_chunks > 1:
            if threads > 1:
                with ThreadPoolExecutor(max_workers=threads) as pool:
                    list(pool.map(do_chunk, range(1, n_chunks)))
            else:
                for ci in range(1, n_chunks):
                    do_chunk(ci)

        errors = int(np.sum(~ok & ~halted))
        halts = int(np.sum(halted))
        point = PointSummary(rho=rho, snr_db=snr, rate_bits=R, q=q, trials=n_tr,
                             errors=errors, halts=halts,
                             max_flops=int(flops.max()),
                             mean_flops=float(flops.sum()) / n_tr)
        points.append(point)
        if progress is not None:
            progress(point)

        if collect_records:
            has_kappa = policy.kind == "lr_halting" and cfg.decoder != "ml"
            has_cycles = cfg.decoder == "lrr" and policy.kind != "degrade"
            for t in range(n_tr):
                if halted[t]:
                    outc = "halted"
                elif ok[t]:
                    outc = "correct"
                else:
                    outc = "error"
                records.append(TrialRecord(
                    trial_id=p_idx * n_tr + t, rho=rho, snr_db=snr, rate_bits=R,
                    outcome=outc, flops=int(flops[t]),
                    kappa=float(kappa[t]) if has_kappa and kappa[t] >= 0 else None,
                    lll_cycles=int(cycles[t]) if has_cycles else None,
                    seed=(p_idx << 32) | t))

    summary = RunSummary(points=points, master_seed=cfg.seed,
                         decoder=cfg.decoder, policy_kind=cfg.policy_kind)
    return summary, records


def estimate_exponent(pairs, sign="complexity"):
    """OLS slope of log(quantity) against log(rho), negated for diversity.

    Points with zero quantity are dropped with a warning; fewer than 3
    surviving points raises InsufficientData.
    """
    kept = [(r, v) for r, v in pairs if v > 0]
    if len(kept) < len(pairs):
        warnings.warn(f"dropped {len(pairs) - len(kept)} zero-quantity points")
    if len(kept) < 3:
        raise InsufficientData(f"only {len(kept)} usable grid points")
    x = np.log([r for r, _ in kept])
    y = np.log([v for _, v in kept])
    n = len(kept)
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    resid = y - (ym + slope * (x - xm))
    stderr = float(np.sqrt(np.sum(resid ** 2) / (n - 2) / sxx))
    value = -slope if sign == "diversity" else slope
    return ExponentEstimate(value=value, stderr=stderr, grid=list(zip(x, y)))


def diversity_estimate(summary, min_errors=20):
    """Diversity slope from per-point error rates (halts counted as errors).

    Points with fewer than min_errors combined events are dropped to keep
    the relative error of the rate estimate bounded.
    """
    pairs = [(pt.rho, pt.error_rate) for pt in summary.points
             if pt.errors + pt.halts >= min_errors]
    if len(pairs) < 3:
        raise InsufficientData(
            f"only {len(pairs)} points with >= {min_errors} error events")
    return estimate_exponent(pairs, sign="diversity")


def complexity_estimate(summary):
    """Worst-case complexity slope from per-point max flop counts."""
    return estimate_exponent([(pt.rho, pt.max_flops) for pt in summary.points],
                             sign="complexity")


def halting_estimate(summary, min_halts=1):
    """Slope of the halting rate; InsufficientData when halts are too rare."""
    pairs = [(pt.rho, pt.halts / pt.trials) for pt in summary.points
             if pt.halts >= min_halts]
    if len(pairs) < 3:
        raise InsufficientData(f"only {len(pairs)} points with halting events")
    return estimate_exponent(pairs, sign="diversity")


def _group_flops(records):
    if isinstance(records, dict):
        return {float(r): np.asarray(v) for r, v in records.items()}
    groups = {}
    for rec in records:
        groups.setdefault(rec.rho, []).append(rec.flops)
    return {r: np.asarray(v) for r, v in groups.items()}


def effective_complexity_exponent(records, d_target, step=0.05):
    """Largest c such that P(N >= rho^c) decays no faster than rho^-d_target.

    records is a TrialRecord stream or a {rho: flops-array} mapping
    spanning the grid; the c-grid step is 0.05.
    """
    groups = _group_flops(records)
    if len(groups) < 3:
        raise InsufficientData("need at least 3 SNR points")
    rhos = np.array(sorted(groups))
    logr = np.log(rhos)
    cmax = max(np.log(groups[r].max()) / np.log(r) for r in rhos) + step
    best = 0.0
    c = step
    while c <= cmax + 1e-12:
        tails = []
        for r in rhos:
            N = groups[r]
            p = float(np.mean(N >= r ** c))
            if p > 0:
                tails.append((np.log(r), np.log(p)))
        if len(tails) >= 3:
            x = np.array([t[0] for t in tails])
            y = np.array([t[1] for t in tails])
            xm = x.mean()
            slope = float(np.sum((x - xm) * (y - y.mean())) / np.sum((x - xm) ** 2))
            if -slope <= d_target:
                best = c
        c += step
    return best


@dataclass(frozen=True)
class UtilityLimit:
    """Weighting of the (diversity, complexity) pair into a scalar figure."""
    gamma: float = 0.0
    form: str = "homogeneous"   # 'homogeneous' or 'general'
    weighting: Optional[Callable[[float, float], float]] = None


def utility_limit(d, c, spec):
    """Evaluate a rate-reliability-complexity utility at measured (d, c)."""
    if spec.form == "homogeneous":
        if spec.gamma < 0:
            raise InvalidWeighting("gamma must be nonnegative")
        return float(d - spec.gamma * c)
    if spec.weighting is None:
        raise InvalidWeighting("general form needs a weighting function")
    gam = spec.weighting
    probe_d = sorted({0.0, 1.0, 2.0, 4.0, abs(d)})
    probe_c = sorted({0.0, 0.5, 1.0, 2.0, abs(c)})
    for cc in probe_c:
        vals = [gam(dd, cc) for dd in probe_d]
        if any(b - a < -1e-12 for a, b in zip(vals, vals[1:])):
            raise InvalidWeighting("weighting must be increasing in d")
    for dd in probe_d:
        vals = [gam(dd, cc) for cc in probe_c]
        if any(b - a > 1e-12 for a, b in zip(vals, vals[1:])):
            raise InvalidWeighting("weighting must be decreasing in c")
    return float(gam(d, c))
