"""Construction and analysis of unit-norm frames with low worst-case and
average coherence, plus sparse-recovery experiments that use them."""
from .coherence import (
    average_coherence,
    bound_table,
    coherence_report,
    lb_complex,
    lb_real,
    lb_real_m3,
    scp_check,
    sufficient_conditions,
    welch_bound,
    worst_case_coherence,
)
from .constructions import (
    HarmonicSelection,
    alltop_gabor,
    alltop_seed,
    chirp,
    code_frame,
    gabor,
    gaussian_normalized,
    harmonic_from_indices,
    random_harmonic,
    rebuild,
    spherical_2design,
    steiner_etf,
    steinhaus_gabor,
    steinhaus_seed,
)
from .designs import SteinerSystem, affine_plane_system, pair_system
from .equivalence import (
    FlipPattern,
    WigglePattern,
    apply_flip,
    apply_wiggle,
    exhaustive_flip_search,
    linear_flip,
    random_flip_search,
    verify_equivalence_invariants,
)
from .errors import (
    ConvergenceError,
    DomainError,
    FieldContextError,
    FrameForgeError,
    IllConditionedSelection,
    SearchFailure,
    ZeroColumnError,
)
from .fileio import load_frame, save_frame
from .frame import Frame, gram, normalize_columns, spectral_norm, tightness_defect
from .gf2m import FieldContext, FieldElement, trace
from .sparse import (
    SparseSignal,
    flat_signal,
    floor_sets,
    measure,
    ost,
    ost_threshold,
    recovery_experiment,
    weak_rip_exhaustive,
    weak_rip_test,
)

__version__ = "0.1.0"
