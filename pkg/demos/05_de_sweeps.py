# %% [markdown]
# # Population size and crossover rate
#
# DE-NSAF is sensitive to both. Too few members stall well above the noise
# floor; too many spend their generations exploring and descend slowly. A low
# crossover rate changes only a few taps per trial vector and crawls.
# Expect a few minutes of runtime.

# %%
import numpy as np

from desaf.harness import ExperimentConfig, blocks_to_level, sweep

base = ExperimentConfig(algo="de_nsaf", M=32, N=4, snr_db=20, trials=20, blocks=2000, seed=0)

# %%
for param, values in (("PS", [10, 20, 50]), ("Cr", [0.2, 0.8])):
    for value, res in sweep(param, values, base).items():
        print(
            f"{param}={value:<4g} steady {10 * np.log10(res.steady_mean):6.2f} dB, "
            f"blocks to -10 dB: {blocks_to_level(res.mse_db, -10)}"
        )
