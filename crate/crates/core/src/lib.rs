//! Acceptance-maximizing collective decisions.
//!
//! A decision is a (rule, outcome) pair. Agents accept or reject decisions
//! according to satisfying sets over rules and outcomes, and the solvers
//! here pick a feasible decision accepted by as many agents as possible.

pub mod accept;
pub mod adc;
pub mod amendment;
pub mod bounds;
pub mod mechanism;
pub mod model;
pub mod oracle;
pub mod rate;
pub mod schema;

pub use accept::{accepts, substitute_absolute_disjunctivist};
pub use adc::{AdcAgent, AdcDecision, AdcError, AdcInstance, AdcReport, AltSet, Alternative, Threshold};
pub use amendment::{AmendmentError, AmendmentInstance, AmendmentTrace, VotePolicy};
pub use bounds::{BoundsError, BoundsReport, InstanceClass, Mode, ModeChoice};
pub use mechanism::MechanismError;
pub use model::{
    AgentType, Decision, GenericInstance, Implementation, Junction, ModelError, OutcomeId, RuleId, RuleRef,
    SatisfyingSpec, SolveReport,
};
pub use oracle::{oracle_max_accept, OracleReport};
pub use rate::Rate;
pub use schema::{Instance, InstanceFile, SchemaError};
