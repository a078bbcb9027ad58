from fisher_kinetic.theorems.gaps import (
    superadditivity_gap, normalized_monotonicity_check, affine_value, mean_info_sequence, affinity_defect,
    diamagnetic_test, convexity_test, superadditivity_decomposition,
)
from fisher_kinetic.theorems.report import GapRecord, TrialRecord, SuiteReport
from fisher_kinetic.theorems.suites import TheoremSuite, run_suite
