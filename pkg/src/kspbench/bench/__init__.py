from .model import flop_model, stored_vectors, kernel_counts_model
from .runner import (CaseConfig, CaseRecord, SweepResult, run_case, run_suite,
                     scalability_sweep, loglog_slope)
from .csvio import emit_history_csv, emit_summary_csv, SUMMARY_HEADER
