"""Entropy of measures under error-control families and entropy dimension."""

from .alphabet import (
    BallsRadius,
    ErrorControlFamily,
    ExplicitFamily,
    IntervalsMaxLength,
    Partition,
    is_finer,
    mu_partition_check,
    partition_entropy,
    shannon_fn,
)
from .errors import (
    BudgetError,
    EntdimError,
    PreconditionError,
    ResolutionError,
    SpaceMismatchError,
)
from .measure import (
    DensityPiece,
    FiniteSpace,
    Interval,
    IntervalUnion,
    LineSpace,
    Measure,
    PointSet,
    cantor_prefractal,
    cantor_support,
    complement,
    diameter,
    finite_measure,
    interval,
    linear_density,
    mass,
    measure_from_json,
    measure_to_json,
    mix,
    point_mass,
    points,
    restrict,
    set_difference,
    set_intersection,
    set_union,
    uniform,
)
from .dimension import (
    CountableMixtureReport,
    DimensionEstimate,
    LocalDimension,
    MixtureDimensionReport,
    YoungReport,
    box_dimension,
    countable_mixture_dimension,
    covering_number,
    entropy_dimension,
    local_dimension,
    mixture_dimension_check,
    quadrature_points,
    young_bound_check,
)
from .mixture import (
    MixtureBounds,
    SandwichReport,
    greedy_joint_alphabet,
    mixture_entropy_bounds,
    verify_sandwich,
)
from .solvers import entropy_exact_finite, entropy_greedy, entropy_line_dp
from .weighted import (
    FractionalAssignment,
    derandomize,
    embed_partition,
    hlp_check,
    random_fractional_assignment,
    validate_assignment,
    weighted_entropy,
    weighted_entropy_infimum,
)

__version__ = "0.1.0"
