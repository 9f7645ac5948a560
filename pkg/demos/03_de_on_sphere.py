# %% [markdown]
# # DE/rand/1/bin on the sphere function
#
# A sanity run for the optimizer before it trains filter weights. Greedy
# selection makes the best cost monotone, and a population of eight solves the
# two-dimensional sphere to well below 1e-6.

# %%
import numpy as np

from desaf.de_core import DeConfig, evaluate, generation_rng, init_population, sphere, step_generation

cfg = DeConfig(PS=8)
pop = evaluate(init_population(cfg, 2, seed=0), sphere)
history = [pop.best_cost]
for G in range(300):
    pop = step_generation(pop, cfg, sphere, generation_rng(0, G))
    history.append(pop.best_cost)

# %%
for G in (0, 25, 50, 100, 200, 300):
    print(f"G={G:3d} best={history[G]:.3e}")
print("monotone:", bool(np.all(np.diff(history) <= 0)))
print("best member:", pop.best)
