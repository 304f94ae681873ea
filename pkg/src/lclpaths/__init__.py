"""Decision engine, algorithm synthesizer and LOCAL simulator for LCL problems on paths and cycles."""
from .core import (CYCLE, PATH, UNSAT, Instance, Labeling, LclError, LclProblem, NormalizedLcl,
                   check_solvable_up_to, check_window, solve_instance, verify_labeling,
                   verify_normalized)

__version__ = "0.1.0"
