# %% [markdown]
# # Four filters on shared scenarios
#
# Every algorithm sees the same channels, inputs and noise per trial, so the
# differences in the table come from the adaptation rules alone. This is the
# desk-scale setup (20 trials, 2000 blocks) and takes about a minute.

# %%
from pathlib import Path

from desaf.harness import blocks_to_level, compare, benchmark_configs

cmp = compare(benchmark_configs(M=32, N=4, snr_db=20, trials=20, blocks=2000, seed=0))
print(cmp.table())

# %% Blocks needed for the ensemble curve to settle below -15 dB.
for entry in cmp.entries:
    print(f"{entry.label:20s} {blocks_to_level(entry.result.mse_db, -15)}")

# %% Save the curves for plotting elsewhere.
paths = cmp.write(Path("results"))
print("wrote", *paths)
