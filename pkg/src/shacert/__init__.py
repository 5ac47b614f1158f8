"""shacert: construct and certify order-p Tate-Shafarevich classes.

The pipeline: search an admissible prime tuple for a superelliptic curve
family, write down the twisted covers of its Jacobian, certify that a twist
is soluble in every completion, and certify (by F_p linear algebra) that no
global descent class reaches it -- yielding a Hasse-principle violation and
a rank lower bound, all serialized as independently re-checkable evidence.
"""

from .descent import (
    CurveFamily,
    KummerPair,
    TorsionElement,
    TorsorEquations,
    emit_models,
    torsion_image_D,
    torsion_image_Di,
    torsion_image_H,
)
from .errors import (
    BoundNotEstablished,
    CertificateFailure,
    DomainError,
    FactorizationError,
    ParameterError,
    SearchExhausted,
    ShacertError,
    SingularCurveError,
)
from .kummer import (
    LocalClass,
    LocalPlace,
    ResidueClass,
    canonicalize,
    is_prime,
    local_class,
    residue_symbol,
    trial_factor,
)
from .obstruction import (
    GluingSystem,
    ObstructionCertificate,
    ShaBound,
    check_infeasibility,
    enumerate_solution,
    sha_lower_bound,
    solve_mod_p,
    support_check,
)
from .search import (
    AdmissibleTuple,
    ConditionCheck,
    SearchParams,
    build_ramified_set,
    is_admissible,
    reverify_tuple,
    search_tuple,
)
from .solubility import (
    MembershipCertificate,
    PlaceReport,
    local_generators,
    verify_membership,
)

__version__ = "1.0.0"

__all__ = [
    "AdmissibleTuple",
    "BoundNotEstablished",
    "CertificateFailure",
    "ConditionCheck",
    "CurveFamily",
    "DomainError",
    "FactorizationError",
    "GluingSystem",
    "KummerPair",
    "LocalClass",
    "LocalPlace",
    "MembershipCertificate",
    "ObstructionCertificate",
    "ParameterError",
    "PlaceReport",
    "ResidueClass",
    "SearchExhausted",
    "SearchParams",
    "ShaBound",
    "ShacertError",
    "SingularCurveError",
    "TorsionElement",
    "TorsorEquations",
    "build_ramified_set",
    "canonicalize",
    "check_infeasibility",
    "emit_models",
    "enumerate_solution",
    "is_admissible",
    "is_prime",
    "local_class",
    "local_generators",
    "residue_symbol",
    "reverify_tuple",
    "search_tuple",
    "sha_lower_bound",
    "solve_mod_p",
    "support_check",
    "torsion_image_D",
    "torsion_image_Di",
    "torsion_image_H",
    "trial_factor",
    "verify_membership",
    "__version__",
]
