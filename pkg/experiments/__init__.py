from experiments.decoupling import verify_decoupling
from experiments.edgestats import edge_stats
from experiments.sweep import run_sweep
