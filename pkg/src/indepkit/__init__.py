"""Possible and certain independence of attribute sets in relational data
containing nulls: data model, model checking, implication, and witness
constructions."""

from .atoms import (
    Atom,
    CERTAIN,
    PLAIN,
    POSSIBLE,
    attributes_of,
    ind,
    ind_set,
    is_disjoint,
    is_pia_star,
    make_atom,
    parse_atom,
    parse_constraints,
    render_atom,
)
from .constructions import (
    CnfFormula,
    cnf_to_relation,
    constancy_counterexample,
    exchange_failure_groundings,
    exchange_failure_relation,
    parity_relation,
    pia_separating_family,
    sat_via_pia,
)
from .errors import (
    FragmentError,
    GroundingLimitExceeded,
    IndepkitError,
    OracleInfeasibleError,
    ParseError,
    SaturationLimitError,
    SchemaError,
    SearchBoundsError,
)
from .flow import FlowNetwork, max_flow, max_flow_assignment
from .implication import (
    SearchBounds,
    constants_of,
    implies_cia,
    implies_ia,
    implies_mixed_disjoint,
    implies_pia_star,
    search_counterexample,
)
from .model_check import (
    CheckReport,
    DEFAULT_ORACLE_BOUND,
    build_flow_network,
    check_atom,
    check_cia_fast,
    check_cia_oracle,
    check_ia,
    check_pia,
    check_pia_oracle,
    check_pia_unary,
    cia_oracle_report,
    is_certainly_constant,
    pia_counting_bound,
)
from .relation import (
    NULL,
    Relation,
    Schema,
    domains_from_json,
    domains_to_json,
    infer_domains,
    is_complete_row,
    read_relation,
    relation_from_csv,
    relation_to_csv,
)
from .rules import (
    DEFAULT_ATTRIBUTE_LIMIT,
    Derivation,
    DerivationStep,
    RuleSystem,
    SYSTEM_DISJOINT_MIXED,
    SYSTEM_FULL,
    SYSTEM_I,
    SYSTEM_I_C,
    SYSTEM_I_P,
    SYSTEM_J_PC,
    closure,
    derivation_to_json_list,
    derives,
    render_derivation_text,
    system_by_name,
    validate_derivation,
)

__version__ = "0.1.0"
