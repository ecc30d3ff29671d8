"""Discrete budget aggregation toolkit.

Exact-arithmetic mechanisms that split an integral budget over alternatives
by aggregating voter-proposed splits: fractional and integral moving-phantom
mechanisms, apportionment-based roundings, axiom checkers (truthfulness,
justified representation and EJR+, range-respect, quota proportionality),
and a CNF encoder for computer-aided impossibility checks.
"""

from .core import (
    ApprovalElection,
    FractionalAllocation,
    FractionalProfile,
    Instance,
    IntegralAllocation,
    IntegralProfile,
    Rat,
    allocation_to_committee,
    average,
    canonicalize,
    fractional_profile,
    integral_allocations,
    integral_profile,
    integral_profiles,
    is_single_minded,
    l1_disutility,
    overlap_disutility,
    parse_profile,
    profile_to_json,
    to_approval,
)
from .phantoms import (
    FractionalEvaluation,
    PhantomSystem,
    PiecewisePhantom,
    evaluate_fractional,
    independent_markets,
    independent_markets_mechanism,
    upper_quota_cap,
    utilitarian,
    utilitarian_mechanism,
)
from .schedules import (
    CEILING,
    FLOOR,
    IntegralEvaluation,
    PhantomSchedule,
    RoundingRule,
    build_schedule,
    ceil_im,
    ceil_util,
    evaluate_integral,
    floor_im,
    floor_util,
)
from .apportion import (
    ApportionmentOutcome,
    ByAlternativeIndex,
    ByLargerInput,
    Lexicographic,
    compose,
    hamilton,
    quota_method,
    stationary_divisor,
)
from .axioms import (
    EjrPlusViolation,
    JrViolation,
    LinkedOrder,
    ManipulationWitness,
    check_anonymous,
    check_ejr_plus,
    check_jr,
    check_onto,
    check_range_respect,
    check_sm_quota_prop,
    find_dictator,
    find_manipulation,
    jr_outcomes,
    linked_order,
    snap_to_integral,
)
from .satgen import (
    CnfInstance,
    MechanismTable,
    VarMap,
    decode_model,
    emit_dimacs,
    encode,
    enumerate_canonical_profiles,
    run_solver,
    verify_table,
)

__version__ = "0.1.0"
