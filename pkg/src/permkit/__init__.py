"""permkit: matrix permanents and the statistics of their distributions."""

__version__ = "0.1.0"

from .domains import (COMPLEX, INTEGER, RATIONAL, REAL, PrimeField,  # noqa: F401
                      ScalarDomain)
from .engine import (KahanAccumulator, LimitError, perm_abs_entrywise,  # noqa: F401
                     perm_blocked, perm_glynn, perm_naive, perm_ryser,
                     permanent)
from .gray import (BlockPlan, GrayBlock, block_start_state, gray_code,  # noqa: F401
                   make_block_plan)
from .matrices import (build_all_ones, build_cycle, build_schur,  # noqa: F401
                       lu_log_abs_det, qr_decompose, unitarity_defect)
