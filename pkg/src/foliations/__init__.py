"""Exact resolution of plane foliation germs and their index invariants.

The package reduces the singularities of a 1-form P dx + Q dy by
iterated blow-ups over the rationals, extracts the combinatorics of the
exceptional divisor (proximity and intersection matrices, saddle-node
vectors, balanced divisors), and evaluates the closed formulas for
discrepancies, Milnor numbers, Camacho-Sad, variation, GSV and
Baum-Bott indices, and the polar excess.  Every formula is checked
against an independent recomputation.
"""

from .algebra import ALPHA, AlgebraicOrbit, BiPoly, Rational, x, y
from .combinatorics import (
    Attachment,
    AttachmentDivisor,
    SaddleNodeVectors,
    balanced_divisor,
    intersection_matrix,
    multiplicities_of_divisor,
    permute,
    proximity_matrix,
    pullback_orders,
    saddle_node_vectors,
    tangency_excess_vector,
    transverse_excess,
    weights_vector,
)
from .errors import FoliationError
from .invariants import (
    Classification,
    InvariantReport,
    TreeData,
    analyze,
    attach_user_curve,
    baum_bott,
    classify_foliation,
    cs,
    discrepancy_vector,
    gsv,
    mil_intmil_gap,
    milnor_along,
    milnor_number,
    multiplicity_vector,
    polar_excess,
    theorem_pi_report,
    tree_data,
    user_divisor,
    variation,
)
from .resolution import (
    OneForm,
    ResolutionTree,
    SingularityRecord,
    blow_up,
    classify_singularity,
    cs_index_local,
    reduce_singularities,
    saddle_node_profile,
    weak_separatrix_jet,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
