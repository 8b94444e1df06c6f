//! Experiment orchestration: each experiment consumes the validated config,
//! fills one `Report` (CSV rows + asserted checks), and never invents
//! mathematics of its own; every verdict mirrors an invariant stated by a
//! core module.

mod ledgers;
mod norms;
mod points;

use focklab_core::blocks::{BlockSchedule, BumpProfile};
use focklab_core::fock::FockContext;
use focklab_core::numint::AdaptiveSpec;

use crate::config::Config;
use crate::report::Report;
use crate::HarnessError;

/// Everything the experiments share, built once per run.
pub struct ExpContext {
    pub ctx: FockContext,
    pub profile: BumpProfile,
    pub quad: AdaptiveSpec,
    pub schedule: BlockSchedule,
    pub seed: u64,
}

impl ExpContext {
    pub fn build(cfg: &Config) -> Result<Self, HarnessError> {
        Ok(Self {
            ctx: FockContext::new(cfg.n)?,
            profile: BumpProfile::new(2 * cfg.n)?,
            quad: cfg.quad.spec(),
            schedule: cfg.schedule.build()?,
            seed: cfg.seed,
        })
    }
}

/// The named experiments, in the CLI's spelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    HsIdentity,
    BlockDecay,
    Bridge,
    Berezin,
    Star,
    Offdiag,
    Counterexample,
    BoundsLedger,
    Invariants,
}

impl Experiment {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "hs-identity" => Self::HsIdentity,
            "block-decay" => Self::BlockDecay,
            "bridge" => Self::Bridge,
            "berezin" => Self::Berezin,
            "star" => Self::Star,
            "offdiag" => Self::Offdiag,
            "counterexample" => Self::Counterexample,
            "bounds-ledger" => Self::BoundsLedger,
            "invariants" => Self::Invariants,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::HsIdentity => "hs-identity",
            Self::BlockDecay => "block-decay",
            Self::Bridge => "bridge",
            Self::Berezin => "berezin",
            Self::Star => "star",
            Self::Offdiag => "offdiag",
            Self::Counterexample => "counterexample",
            Self::BoundsLedger => "bounds-ledger",
            Self::Invariants => "invariants",
        }
    }

    pub const ALL: [Experiment; 9] = [
        Self::HsIdentity,
        Self::BlockDecay,
        Self::Bridge,
        Self::Berezin,
        Self::Star,
        Self::Offdiag,
        Self::Counterexample,
        Self::BoundsLedger,
        Self::Invariants,
    ];
}

/// Runs one experiment into a fresh report. The caller owns writing files
/// and mapping `Report::pass` to an exit status.
pub fn run(
    which: Experiment,
    cfg: &Config,
    dump_dir: Option<&std::path::Path>,
) -> Result<Report, HarnessError> {
    let ex = ExpContext::build(cfg)?;
    match which {
        Experiment::HsIdentity => norms::hs_identity(&ex, cfg),
        Experiment::BlockDecay => norms::block_decay(&ex, cfg, dump_dir),
        Experiment::Bridge => norms::bridge(&ex, cfg),
        Experiment::Berezin => points::berezin_pairs(&ex, cfg),
        Experiment::Star => points::star(&ex, cfg),
        Experiment::Offdiag => points::offdiag(&ex, cfg),
        Experiment::Counterexample => points::counterexample(&ex, cfg),
        Experiment::BoundsLedger => ledgers::bounds_ledger(&ex, cfg),
        Experiment::Invariants => ledgers::invariants(&ex, cfg),
    }
}
