"""Rate-reliability-complexity simulation for lattice-reduction-aided MIMO."""

from .channel import (ChannelModel, TransmissionInstance, dmt_optimal_curve,
                      outage_indicator, sample_channel, transmit)
from .codes import (Constellation, LatticeCode, RateSchedule, encode,
                    enumerate_codebook, make_code, make_constellation,
                    schedule_rate)
from .config import ExperimentConfig, load_config, parse_config
from .decoders import (DecodeOutcome, RegularizedSystem, linear_decode,
                       lrr_decode, ml_decode, ml_flops, regularize)
from .harness import (ExponentEstimate, PointSummary, RunSummary, TrialRecord,
                      UtilityLimit, complexity_estimate, diversity_estimate,
                      effective_complexity_exponent, estimate_exponent,
                      halting_estimate, run_grid, utility_limit)
from .numerics import complex_to_real, condition_number, embed_vector
from .policy import (Policy, PolicyDecision, admit, lr_halting_policy,
                     lr_threshold, unrestricted_policy)
from .reduction import ReductionResult, lll_cycle_bound, lll_reduce
from .results import emit_results, read_summary, read_trials

__version__ = "0.1.0"
