"""2-adic stratification of Euler totients.

Stratified totient counts V^l(x), multiplicity sums S^l(x), inverse totients,
and Dickson-form constructions of high-multiplicity totients.
"""

from ._backend import NAME as backend
from .config import RunConfig
from .dickson import DicksonWitness, admissible_check, construct_totient, forms, search_tuple
from .errors import (
    EmptyCandidates,
    InvalidInput,
    LimitExceeded,
    NonTotient,
    PDividesPreimage,
    PNotThreeModFour,
    RangeTooLarge,
    TotientStrataError,
)
from .invphi import (
    LemmaBClass,
    Pattern,
    PreimageSet,
    classify_2r,
    inverse_phi,
    multiplicity,
    preimage_bound,
    r_t_members,
)
from .reports import ReportRow, TableId, check_suite, table1, table_max, table_ratio
from .sieve import OmegaSegment, PhiSegment, is_prime, phi, phi_range, prime_pi, prime_pi_i, v2
from .strata import (
    StrataSummary,
    StratumStats,
    attained_multiplicities,
    ell_of_x,
    k0,
    lift_totient,
    max_mult,
    stratum_stats,
    v1_split,
)

__version__ = "0.1.0"
