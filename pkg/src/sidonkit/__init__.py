"""sidonkit: Sidon / B_h[g] / sum-free sequence toolkit.

Constructors for greedy and saturated sequences, exact pattern verification,
certified enclosures of reciprocal power sums with proven tail bounds,
exact extremal subset search, generating-function probes, and assembled
upper bounds for the distinct distance constant.
"""

from .backend import get_backend, set_backend, using_backend
from .construct import (GreedySpec, ResourceLimitError, greedy, mian_chowla,
                        preset, saturate, saturate_default, zhang)
from .ddc import (BlockPlan, DdcReport, ddc_upper_bound, differential_report,
                  middle_block_bound, self_contained_report)
from .enclosure import DEFAULT_BITS, Enclosure, PrecisionError
from .genfun import (GridSpec, envelope_check, eval_genfun, lalpha_probe,
                     make_grid, mellin_crosscheck)
from .rigor import (SeriesEnclosure, TailRule, first_crossing_index,
                    partial_power_sum, series_enclosure, tail_upper)
from .search import (InfeasibleError, SearchResult, SearchStatus,
                     best_k_prefix, brute_force_oracle, max_reciprocal_subset)
from .sequences import (SIDON, SUM_FREE, IntegerSequence, PatternKind,
                        RepCountProfile, can_extend, make_checker,
                        read_sequence, representation_counts, sumset_cover,
                        verify, write_sequence)

__version__ = "0.1.0"
