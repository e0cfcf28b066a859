"""Classical and quantum bounds for exclusivity graphs, and dimension witnesses."""
from .errors import (HeuristicFailed, InconsistentRealization, InvalidParameter,
                     MalformedGraph, NotPSD, NotThetaFeasible, NumericError, RankTooHigh,
                     ThetaFailed)
from .graph import (Graph, StableSet, disjoint_union, generate_mermin, generate_qite,
                    generate_standard, independence_number, parse_graph)
from .heuristic import (HeuristicConfig, HeuristicResult, Realization, extract_realization,
                        heuristic_theta_d, min_box_trace, realization_cost)
from .linalg import gram_decompose, lambda_max_of_sum, sym_eig
from .sdp import SdpProblem, SdpSolution, solve_sdp
from .theta import (ThetaResult, barvinok_bound, build_theta_sdp, lovasz_theta,
                    theta_body_membership)
from .witness import (OrthonormalRepresentation, behaviour_from_realization, qite_or,
                      verify_or, witness_report)

__version__ = "0.1.0"
