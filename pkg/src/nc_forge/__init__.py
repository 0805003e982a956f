"""Exact counting, construction, and certified lower bounds for Novak-Carmichael numbers."""

from .certify import (
    EnumerationReport,
    ExponentRow,
    LowerBoundCertificate,
    Schedule,
    Threshold,
    binomial,
    certify_lower_bound,
    check_binomial_floor,
    enumerate_certificate,
    exponent_report,
    parse_threshold,
    schedule_params,
    verify_certificate,
)
from .construction import (
    ConstructionBase,
    FamilyMember,
    build_base,
    build_member,
    member_from_dict,
    member_to_dict,
    shifted_part_divides_base,
    verify_family,
)
from .errors import DomainError, ResourceError
from .novak import (
    NovakVerdict,
    carmichael_lambda,
    count_nc,
    is_nc_criterion,
    is_nc_definition,
    list_nc,
    resolve_thread_count,
)
from .sieve import (
    FactorTable,
    Factorization,
    PrimeTable,
    Tables,
    build_factor_table,
    build_tables,
    factorize,
    sieve_primes,
)
from .smoothness import (
    ConjectureRow,
    HildebrandRow,
    ShiftedSmoothSet,
    YRule,
    conjecture_table,
    dickman_rho,
    greatest_prime_factor,
    hildebrand_report,
    pi_smooth_count,
    psi_count,
    rows_to_csv,
    rows_to_json,
    shifted_smooth_set,
)

__version__ = "0.1.0"
