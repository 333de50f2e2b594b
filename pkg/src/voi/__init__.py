"""Value-of-information solvers for finite decision problems.

The package computes the extremal expected utility attainable under an
information budget: the smooth frontier over stochastic channels, the
step frontiers over deterministic rules, and the simplex analogue under a
Bregman divergence budget; plus the probability primitives, the paradox
catalog, brute-force oracles, and curve/level-set assembly that support
them.  The CLI lives in voi.cli and figure rendering in voi.plotting;
neither is imported here.
"""

from .bregman import (BregmanGenerator, ResourceProblem, bregman_divergence,
                      constrained_value, gibbs_solution, project_to_simplex)
from .curve import (CurvatureReport, LevelSegment, SCurve, assemble_s_curve,
                    curvature_report, segment_direction, simplex_level_sets)
from .decisions import (DecisionProblem, Lottery, PARADOX_NAMES, ParadoxFixture,
                        Preference, eu_compare, expected_utility,
                        joint_expected_utility, paradox)
from .deterministic import (DEFAULT_ENUM_CAP, DeterministicChannel,
                            boltzmann_value, hartley_value)
from .errors import EnumerationCapError, ProblemFileError, SolverFailure
from .frontier import ValueCurve, ValuePoint
from .oracle import (OracleReport, exhaustive_deterministic, grid_max_eu,
                     simplex_grid_value, variational_entropy_check)
from .prob import (Channel, Distribution, entropy, kl_divergence,
                   mutual_information, output_marginal, product)
from .shannon import ba_fixed_beta, lower_value, trace_curve, upper_value

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BregmanGenerator", "ResourceProblem", "bregman_divergence",
    "constrained_value", "gibbs_solution", "project_to_simplex",
    "CurvatureReport", "LevelSegment", "SCurve", "assemble_s_curve",
    "curvature_report", "segment_direction", "simplex_level_sets",
    "DecisionProblem", "Lottery", "PARADOX_NAMES", "ParadoxFixture",
    "Preference", "eu_compare", "expected_utility", "joint_expected_utility",
    "paradox",
    "DEFAULT_ENUM_CAP", "DeterministicChannel", "boltzmann_value", "hartley_value",
    "EnumerationCapError", "ProblemFileError", "SolverFailure",
    "ValueCurve", "ValuePoint",
    "OracleReport", "exhaustive_deterministic", "grid_max_eu",
    "simplex_grid_value", "variational_entropy_check",
    "Channel", "Distribution", "entropy", "kl_divergence",
    "mutual_information", "output_marginal", "product",
    "ba_fixed_beta", "lower_value", "trace_curve", "upper_value",
]
