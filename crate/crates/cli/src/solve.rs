use acceptmax_core::adc::{
    adc_absolute_disjunctivists, adc_consequentialists, adc_ii_conjunctivists, adc_ii_disjunctivists, AdcDecision,
    AdcInstance,
};
use acceptmax_core::mechanism::{
    max_accept_absolute_conjunctivists, max_accept_absolute_proceduralists, max_accept_all_types,
    max_accept_consequentialists_generic,
};
use acceptmax_core::oracle::oracle_max_accept;
use acceptmax_core::schema::Instance;
use acceptmax_core::{AgentType, Decision, GenericInstance, SolveReport};
use anyhow::bail;
use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mechanism {
    /// The specialised mechanism for the agents' common type, else `generic`
    Auto,
    /// Substitute absolute disjunctivists, then maximise rule and outcome coverage
    Generic,
    /// Try every feasible decision
    Oracle,
    AdcConsequentialist,
    AdcAbsDisj,
    AdcIiDisj,
    AdcIiConj,
    AbsProc,
    AbsConj,
    ConseqGeneric,
}

impl Mechanism {
    fn name(self) -> &'static str {
        match self {
            Mechanism::Auto => "auto",
            Mechanism::Generic => "generic",
            Mechanism::Oracle => "oracle",
            Mechanism::AdcConsequentialist => "adc-consequentialist",
            Mechanism::AdcAbsDisj => "adc-abs-disj",
            Mechanism::AdcIiDisj => "adc-ii-disj",
            Mechanism::AdcIiConj => "adc-ii-conj",
            Mechanism::AbsProc => "abs-proc",
            Mechanism::AbsConj => "abs-conj",
            Mechanism::ConseqGeneric => "conseq-generic",
        }
    }

    fn is_adc_only(self) -> bool {
        matches!(
            self,
            Mechanism::AdcConsequentialist | Mechanism::AdcAbsDisj | Mechanism::AdcIiDisj | Mechanism::AdcIiConj
        )
    }
}

#[derive(Serialize)]
pub struct TallyLine<D> {
    pub decision: D,
    pub count: usize,
}

#[derive(Serialize)]
pub struct SolveOutput<D> {
    pub mechanism: &'static str,
    #[serde(flatten)]
    pub report: SolveReport<D>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tally: Option<Vec<TallyLine<D>>>,
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum Output {
    Generic(SolveOutput<Decision>),
    Adc(SolveOutput<AdcDecision>),
}

fn auto_generic(g: &GenericInstance) -> Mechanism {
    let all = |ty| g.agents().iter().all(|a| a.is_type(ty));
    if all(AgentType::Consequentialist) {
        Mechanism::ConseqGeneric
    } else if all(AgentType::AbsoluteProceduralist) {
        Mechanism::AbsProc
    } else if all(AgentType::AbsoluteConjunctivist) {
        Mechanism::AbsConj
    } else {
        Mechanism::Generic
    }
}

fn auto_adc(inst: &AdcInstance) -> Mechanism {
    [
        (AgentType::Consequentialist, Mechanism::AdcConsequentialist),
        (AgentType::AbsoluteDisjunctivist, Mechanism::AdcAbsDisj),
        (AgentType::IiDisjunctivist, Mechanism::AdcIiDisj),
        (AgentType::IiConjunctivist, Mechanism::AdcIiConj),
    ]
    .into_iter()
    .find(|(ty, _)| inst.all_of_type(*ty))
    .map_or(Mechanism::Generic, |(_, m)| m)
}

fn run_generic(g: &GenericInstance, m: Mechanism) -> anyhow::Result<SolveOutput<Decision>> {
    let mut tally = None;
    let report = match m {
        Mechanism::Generic => max_accept_all_types(g),
        Mechanism::Oracle => {
            let o = oracle_max_accept(g);
            tally = Some(o.tally.into_iter().map(|t| TallyLine { decision: t.decision, count: t.count }).collect());
            o.report
        }
        Mechanism::AbsProc => max_accept_absolute_proceduralists(g)?,
        Mechanism::AbsConj => max_accept_absolute_conjunctivists(g)?,
        Mechanism::ConseqGeneric => max_accept_consequentialists_generic(g)?,
        Mechanism::Auto => return run_generic(g, auto_generic(g)),
        _ => bail!("mechanism `{}` needs an instance of kind \"adc\"", m.name()),
    };
    Ok(SolveOutput { mechanism: m.name(), report, tally })
}

fn run_adc(inst: &AdcInstance, m: Mechanism) -> anyhow::Result<SolveOutput<AdcDecision>> {
    let report = match m {
        Mechanism::Auto => return run_adc(inst, auto_adc(inst)),
        Mechanism::AdcConsequentialist => adc_consequentialists(inst)?,
        Mechanism::AdcAbsDisj => adc_absolute_disjunctivists(inst)?,
        Mechanism::AdcIiDisj => adc_ii_disjunctivists(inst)?,
        Mechanism::AdcIiConj => adc_ii_conjunctivists(inst)?,
        _ => {
            debug_assert!(!m.is_adc_only());
            let out = run_generic(&inst.to_generic(), m)?;
            let lift = |d: Decision| inst.decision_from_generic(&d).expect("bridged rule ids name thresholds");
            return Ok(SolveOutput {
                mechanism: out.mechanism,
                report: out.report.map_decision(lift),
                tally: out
                    .tally
                    .map(|t| t.into_iter().map(|l| TallyLine { decision: lift(l.decision), count: l.count }).collect()),
            });
        }
    };
    Ok(SolveOutput { mechanism: m.name(), report, tally: None })
}

pub fn solve(instance: Instance, mechanism: Mechanism) -> anyhow::Result<Output> {
    match instance {
        Instance::Generic(g) => Ok(Output::Generic(run_generic(&g, mechanism)?)),
        Instance::Adc(a) => Ok(Output::Adc(run_adc(&a, mechanism)?)),
        Instance::Amendment(_) => bail!("amendment instances are solved with `acceptmax amend`"),
    }
}
