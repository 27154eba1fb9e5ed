"""
Sweeps, cached spectra and figure bundles
=========================================

Run a small gap-ratio sweep through the task layer, then assemble a CSV
bundle for a figure from the stored run records.  The same steps are
available from the command line::

    xxzeth rsweep --N-values 10 --delta-values 0.5 1 --theta-values 0.5 1 2 4 --out results
    xxzeth emit --figure Fig9 --N 8 --n-realizations 20 --compute --out results
"""
import tempfile
from pathlib import Path

from xxzeth.harness import RunConfig, SpectrumCache, emit_figure_data, figure_requirements, load_records, run_task
from xxzeth.harness.io import read_csv

out = Path(tempfile.mkdtemp(prefix="xxzeth-demo-"))
cache = SpectrumCache(out / "cache")

# %%
cfg = RunConfig(task="rsweep", N_values=(10,), delta_values=(0.5, 1.0), theta_values=(0.5, 1.0, 2.0, 4.0),
                out=str(out), threads=2)
rec = run_task(cfg, cache)
table = read_csv(rec.payload_path("table"))
for d, t, r in zip(table["delta"], table["theta"], table["r_mean"]):
    print(f"delta={d:3} theta={t:3}  <r>={r:.4f}")
print("cache:", cache.misses, "computed,", cache.hits, "reused")

# %%
base = RunConfig(out=str(out), n_realizations=20)
for req in figure_requirements("Fig9", N=8, base=base):
    run_task(req, cache)
files = emit_figure_data(load_records(out), "Fig9", out / "figures", N=8, base=base)
print("wrote", [str(f.relative_to(out)) for f in files])
