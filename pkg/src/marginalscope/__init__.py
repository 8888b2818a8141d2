"""Local spectra, Kirwan polytopes and orbit geometry of multi-qubit pure states."""
from .qstate import (
    DensityMatrix2,
    LocalSpectra,
    MomentumValue,
    PureState,
    apply_local,
    haar_random_state,
    momentum_map,
    psi,
    reduced_density,
)
from .polytope import (
    ClassPolytope,
    FaceId,
    PolytopeReport,
    SloccClass,
    class_polytope,
    face_classify,
    higuchi_check,
    in_w_polytope,
    three_qubit_vertices,
)
from .slocc import (
    FlowTrace,
    classify,
    hyperdeterminant,
    is_momentum_critical,
    kirwan_flow,
    local_ranks,
    random_slocc_sample,
)
from .orbits import (
    AlgebraBasisElement,
    OrbitReport,
    grassmannian_tangent_dim,
    orbit_report,
    rank_complex,
    rank_real,
    tangent_span,
    w_sphericality_certificate,
)
from .fibers import (
    BoundaryCanonicalForm,
    CloudReport,
    FiberSample,
    InvariantTuple,
    boundary_canonical_degenerate,
    boundary_canonical_nondegenerate,
    boundary_shell_histogram,
    fiber_dimension,
    lu_invariants,
    lu_overlap_max,
    sample_fiber,
)

__version__ = "0.1.0"
