"""Average Age of Information of a discrete-time GI/Geom/1 queue, with
moment-based bounds and a slot-level simulator."""

from .analysis import (
    AoIBounds,
    QueueSolution,
    alpha_from_lambda,
    aoi_bounds,
    exact_average_aoi,
    jensen_bounds,
    lambda_from_departures,
    pgf_derivative_partial_sum,
    refined_derivative_bounds,
    solve_alpha,
    system_time_pmf,
    traffic_intensity,
)
from .channel import ChannelModel, mean_service, sample_service, service_pmf, success_probability
from .distributions import (
    DiscretePMF,
    MomentVector,
    empirical_moments,
    make_degenerate,
    make_geometric,
    make_two_point,
)
from .errors import (
    DomainError,
    InstabilityError,
    InvalidParameterError,
    MomentOverflowError,
    NumericalError,
)

__version__ = "0.1.0"
