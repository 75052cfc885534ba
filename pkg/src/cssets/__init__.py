"""Completely syndetic sets in Z: descriptors, witness checks, constructions and group lifts."""
from ._accel import available_backends, backend, set_backend, use_backend
from .constructions import (
    ProductSet,
    alpha_stream,
    construction42_density,
    density_limit,
    empirical_density,
    gamma,
    zd_product,
)
from .errors import (
    BudgetExceeded,
    CertificateDomainError,
    CSSetsError,
    InsufficientData,
    NotSurjective,
    OmegaViolation,
    StreamExhausted,
)
from .grouplift import (
    FreeAbelian,
    GroupHom,
    Heisenberg,
    ball,
    check_witness_group,
    finite_index_lift,
    group_density,
    lift_witness,
    preimage_set,
)
from .setcore import (
    Algebra,
    BlockEncoded,
    BlockStream,
    Construction42,
    CorollaryB,
    Periodic,
    SetDescriptor,
    Window,
    decode_blocks,
    descriptor_from_json,
    encode_blocks,
    member,
    normalize,
    split,
    window,
)
from .syndetic import (
    AnalyticCertificate,
    check_witness,
    construction42_certificate,
    empirical_certificate,
    find_witness,
    gap_bound,
    refute_2syndetic_corB,
    synthesize_witnesses,
    thickness_runs,
)
from .uss import check_not_uss, empirical_L, longest_subAP, uss_profile

__version__ = "0.1.0"
