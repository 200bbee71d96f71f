"""Nash-Stackelberg equilibria in security games with several defenders."""
from .counterexample import CounterexampleCertificate, certify_counterexample
from .coverage import (
    CLEARANCE,
    SSAS,
    ExplicitSchedules,
    FlowPolytope,
    LayeredNetwork,
    enumerate_paths,
    maximin_cov,
    membership,
)
from .estimators import MonotoneNSE, TwoDefenderNSE
from .exceptions import (
    ExistenceViolated,
    GameValidationError,
    MonotoneViolation,
    NSEError,
    OracleError,
    PathCapExceeded,
    PreconditionError,
)
from .game import (
    Defender,
    Game,
    PreferenceOrder,
    StrategyProfile,
    best_response_set,
    is_aic,
    is_waic,
    total_coverage,
)
from .generators import GeneratorConfig, example1, fixture, generate, identity3
from .multi import build_matrix, check_monotone, select_kstar, solve_multi_ms
from .two import build_t_standard, enumerate_equilibrium_targets, partial_set_nonempty, solve_two
from .verify import VerificationReport, deviation_exists, verify_nse

__version__ = "0.1.0"
