# %% [markdown]
# # Offline rank analysis of a CSI capture
#
# Captures are plain text, one matrix per line. Here a synthetic capture
# is written from simulated channels and read back, as a measured one
# would be.

# %%
import tempfile
from pathlib import Path

import numpy as np

from risrank import ScenarioSpec, build_geometry, mean_effective_rank, passive_beam_focus, rank_report, synthesize
from risrank.csi import CsiRecord, ingest_csi, write_csi
from risrank.ris import compose_channel

g = build_geometry(1)
spec = ScenarioSpec.for_regime("MediumRank", realizations=20)
records = []
for i in range(spec.realizations):
    ch = synthesize(g, spec, i)
    h = compose_channel(ch, passive_beam_focus(ch).best_config)
    records.append(CsiRecord(subcarrier=28, matrix=h, timestamp=f"frame{i:04d}"))

path = Path(tempfile.mkdtemp()) / "capture.csi"
write_csi(path, records)
print(path.read_text().splitlines()[0][:120], "...")

# %%
reports = [rank_report(r.matrix) for r in ingest_csi(path)]
print(f"{len(reports)} records, mean effective rank {mean_effective_rank(reports):.4f}")
