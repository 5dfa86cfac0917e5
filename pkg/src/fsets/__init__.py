"""F-sets and the Mordell-Lang problem for semiabelian varieties over F_p(t).

Exact arithmetic over F_p(t) and a quadratic tower, elliptic curve and torus
group laws, Frobenius relations, finitely generated subgroups and their
Z[F]-spans, F-sets, subvarieties, and a bounded checker for claimed F-set
decompositions of X ∩ Gamma.
"""

from .errors import (
    FSetsError,
    GroupMismatch,
    InvalidArgument,
    InvalidRelation,
    ModulusMismatch,
    ParseError,
    ResourceLimit,
    UnsupportedCoordinate,
    UnsupportedShape,
    ValidationError,
)
from .exactfield import Poly, RatFunc, TowerElem, TowerField
from .frobenius import (
    FrobeniusOp,
    IntPoly,
    apply_poly,
    char_poly_frobenius,
    count_points,
    frob_apply,
    minimal_poly_curve,
    minimal_poly_on_G,
    verify_relation,
)
from .fsetalgebra import (
    FSetUnion,
    GeneralizedFSet,
    GrouplessFSet,
    PseudoGeneralizedFSet,
    enumerate_fset,
    fset_membership,
    normalize_common_k,
    original_caps,
)
from .groupmodel import CurveParams, ECPoint, GroupDescriptor, GroupHom, ProductPoint, ec_add, ec_scalar_mul, hom_apply
from .intersector import (
    Certificate,
    CertificateReport,
    brute_intersect,
    check_certificate,
    example1_setup,
    example2_setup,
    example3_data,
    recurrence_coeffs,
    verify_recurrence,
)
from .valuation import FactoredUnit
from .variety import LaurentPoly, Subvariety, contains, product_stabilizer, torus_stabilizer
from .zfmodule import (
    SpanCoordinates,
    SpanPoint,
    Subgroup,
    bounded_membership,
    enumerate_group,
    span_generators,
    torus_membership,
)

__version__ = "0.1.0"
