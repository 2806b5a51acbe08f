# %% [markdown]
# # Low- and medium-rank tables
#
# Runs both regimes with 1 and 4 surface modules, four methods each,
# averaged over 100 paired realizations. Writes CSV/text tables and
# per-realization plot data into ``results/``.
#
# Same as ``risrank run --out results``.

# %%
import logging

from risrank.bench import default_experiments, emit_realizations, emit_table, run_batch

logging.basicConfig(level=logging.INFO)
summaries = run_batch(default_experiments(seed=0), workers=4)
print(emit_table(summaries, "results"))
emit_realizations(summaries, "results")
