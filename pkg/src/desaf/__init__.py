"""Subband adaptive filters (NSAF, SM-NSAF) and a differential-evolution
trained NSAF for channel identification."""

from .de_core import (
    DeConfig,
    DePopulation,
    crossover,
    init_population,
    mutate,
    select,
    step_generation,
)
from .de_nsaf import DeNsafConfig, LearningCurve, de_nsaf_step, run_de_nsaf, subband_cost
from .filterbank import (
    AnalysisBank,
    SubbandBlock,
    analyze_decimate,
    design_cosine_modulated_bank,
    make_blocks,
)
from .harness import (
    AggregateResult,
    ExperimentConfig,
    aggregate,
    compare,
    run_trial,
    sweep,
)
from .nsaf import FilterState, nsaf_update, sm_nsaf_update, subband_output
from .signal_model import (
    Ar4Params,
    ChannelScenario,
    add_noise_snr,
    generate_ar4,
    random_channel,
    simulate_channel,
)

__version__ = "0.1.0"
