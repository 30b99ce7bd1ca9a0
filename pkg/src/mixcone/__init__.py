"""Measure-cone toolkit for deciding reversibility of classical and quantum state changes."""

from mixcone.classical import (
    StochasticMatrix,
    apply,
    classify_reversible,
    inverse_on_range,
    is_isometry,
    verify_stochastic,
)
from mixcone.cone import (
    HermitianOperator,
    MinimalDecomposition,
    SignedMeasure,
    charge,
    is_orthogonal,
    minimal_decomposition,
    one_norm,
)
from mixcone.mixing import DominanceVerdict, MixingProfile, dominates, is_max_distance, mixing_profile
from mixcone.quantum import (
    IsometryBlueprint,
    KrausChannel,
    apply_channel,
    build_inverse_channel,
    build_isometric_channel,
    is_isometry_channel,
    is_surjective,
    purity,
)
from mixcone.transport import TransportCertificate, check_rss_equivalence, find_transport, is_reversible_transition

__version__ = "0.1.0"
