"""Classical and observability-conditioned probability algebras."""

from .classical import (
    JointDistribution,
    Proposition,
    conditional,
    make_distribution,
    marginal,
    point_mass,
    product_rule_residual,
    propositions,
    random_distribution,
    uniform,
    wd_classical,
)
from .inequalities import (
    ChshScenario,
    certify,
    chsh_star,
    deterministic_chsh_bound,
    star_correlation,
)
from .operators import (
    Projector,
    StateVector,
    binary_projector,
    boolean_operator,
    born,
    classical_embeddability,
    nonlinearity_witness,
    observability_operators,
    parse_expression,
    ratio_frequency,
    ternary_embed,
    tomographic_embed,
)
from .qubit import ComplexQubit, SphereDirection, bloch_project, overlap, restored_born
from .report import InequalityReport
from .search import violation_search
from .ternary import (
    Outcome,
    TernaryDistribution,
    lift_classical,
    make_ternary,
    measurable_frequency,
    star_joint,
    wd_star,
)

__version__ = "0.1.0"
