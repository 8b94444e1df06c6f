//! Run configuration: one JSON document per invocation, schema-validated,
//! every field defaulted. Unknown keys are rejected so typos surface as
//! configuration errors instead of silently running defaults.

use serde::Deserialize;

use focklab_core::blocks::BlockSchedule;
use focklab_core::numint::AdaptiveSpec;

use crate::HarnessError;

/// Quadrature refinement policy (mirrors the core `AdaptiveSpec`).
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadConfig {
    #[serde(default = "d_initial")]
    pub initial: usize,
    #[serde(default = "d_max_refine")]
    pub max_refine: usize,
    #[serde(default = "d_rel_tol")]
    pub rel_tol: f64,
}

fn d_initial() -> usize {
    8
}
fn d_max_refine() -> usize {
    8
}
fn d_rel_tol() -> f64 {
    1e-9
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            initial: d_initial(),
            max_refine: d_max_refine(),
            rel_tol: d_rel_tol(),
        }
    }
}

impl QuadConfig {
    pub fn spec(&self) -> AdaptiveSpec {
        AdaptiveSpec {
            initial: self.initial,
            max_refine: self.max_refine,
            rel_tol: self.rel_tol,
        }
    }
}

/// Block schedule parameters.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    /// "tame" or "paper".
    #[serde(default = "d_mode")]
    pub mode: String,
    #[serde(default = "d_blocks")]
    pub blocks: usize,
    #[serde(default = "d_r0")]
    pub r0: f64,
    #[serde(default = "d_r_cap")]
    pub r_cap: f64,
    #[serde(default = "d_spacing")]
    pub spacing: f64,
}

fn d_mode() -> String {
    "tame".into()
}
fn d_blocks() -> usize {
    5
}
fn d_r0() -> f64 {
    4.0
}
fn d_r_cap() -> f64 {
    16.0
}
fn d_spacing() -> f64 {
    20.0
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self {
            mode: d_mode(),
            blocks: d_blocks(),
            r0: d_r0(),
            r_cap: d_r_cap(),
            spacing: d_spacing(),
        }
    }
}

impl ScheduleConfig {
    pub fn build(&self) -> Result<BlockSchedule, HarnessError> {
        match self.mode.as_str() {
            "tame" => BlockSchedule::tame(self.blocks, self.r0, self.r_cap, self.spacing)
                .map_err(HarnessError::from),
            "paper" => BlockSchedule::paper(self.blocks).map_err(HarnessError::from),
            other => Err(HarnessError::Config(format!(
                "schedule mode must be \"tame\" or \"paper\", got {other:?}"
            ))),
        }
    }
}

/// (L, G) pair: half-width and sample count of a phase-space grid.
pub type GridSpec = (f64, usize);

/// Per-R grid ladder for the bridge experiment.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BridgeLane {
    pub r: f64,
    pub grids: Vec<GridSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HsIdentityConfig {
    /// Grid ladder used for every symbol in the corpus.
    #[serde(default = "d_hs_grids")]
    pub grids: Vec<GridSpec>,
    #[serde(default = "d_hs_r")]
    pub r_values: Vec<f64>,
    #[serde(default = "d_hs_tol")]
    pub rel_tol: f64,
}

fn d_hs_grids() -> Vec<GridSpec> {
    vec![(8.0, 512), (16.0, 1024), (32.0, 2048)]
}
fn d_hs_r() -> Vec<f64> {
    vec![1.0, 2.0, 4.0, 8.0]
}
fn d_hs_tol() -> f64 {
    1e-3
}

impl Default for HsIdentityConfig {
    fn default() -> Self {
        Self {
            grids: d_hs_grids(),
            r_values: d_hs_r(),
            rel_tol: d_hs_tol(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockDecayConfig {
    #[serde(default = "d_hs_r")]
    pub r_values: Vec<f64>,
    #[serde(default = "d_degrees")]
    pub degrees: Vec<usize>,
    #[serde(default = "d_weyl_r")]
    pub weyl_r_values: Vec<f64>,
    #[serde(default = "d_weyl_grid")]
    pub weyl_grid: GridSpec,
    /// Write each assembled compression as a .bin + JSON sidecar pair.
    #[serde(default)]
    pub dump_matrices: bool,
}

fn d_degrees() -> Vec<usize> {
    vec![16, 32, 48]
}
fn d_weyl_r() -> Vec<f64> {
    vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0]
}
fn d_weyl_grid() -> GridSpec {
    (8.0, 512)
}

impl Default for BlockDecayConfig {
    fn default() -> Self {
        Self {
            r_values: d_hs_r(),
            degrees: d_degrees(),
            weyl_r_values: d_weyl_r(),
            weyl_grid: d_weyl_grid(),
            dump_matrices: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BridgeConfig {
    #[serde(default = "d_degrees")]
    pub degrees: Vec<usize>,
    #[serde(default = "d_bridge_lanes")]
    pub lanes: Vec<BridgeLane>,
}

fn d_bridge_lanes() -> Vec<BridgeLane> {
    vec![
        BridgeLane {
            r: 1.0,
            grids: vec![(8.0, 512), (16.0, 1024), (32.0, 2048)],
        },
        BridgeLane {
            r: 2.0,
            grids: vec![(8.0, 512), (16.0, 1024)],
        },
        BridgeLane {
            r: 4.0,
            grids: vec![(8.0, 256), (8.0, 512)],
        },
        BridgeLane {
            r: 8.0,
            grids: vec![(8.0, 256), (8.0, 512)],
        },
    ]
}

impl Default for BridgeConfig {
    fn default() -> Self {
        Self {
            degrees: d_degrees(),
            lanes: d_bridge_lanes(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BerezinConfig {
    #[serde(default = "d_berezin_deg")]
    pub maxdeg: usize,
    #[serde(default = "d_berezin_points")]
    pub points: Vec<[f64; 2]>,
    #[serde(default = "d_berezin_tol")]
    pub rel_tol: f64,
}

fn d_berezin_deg() -> usize {
    48
}
fn d_berezin_points() -> Vec<[f64; 2]> {
    vec![[0.0, 0.0], [1.0, 0.0], [0.0, -1.5], [2.0, 0.0]]
}
fn d_berezin_tol() -> f64 {
    1e-4
}

impl Default for BerezinConfig {
    fn default() -> Self {
        Self {
            maxdeg: d_berezin_deg(),
            points: d_berezin_points(),
            rel_tol: d_berezin_tol(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarConfig {
    /// Evaluation point a for the weighted norms.
    #[serde(default = "d_star_point")]
    pub point: [f64; 2],
    /// Ratio bound asserted for terms past the documented threshold.
    #[serde(default = "d_star_ratio")]
    pub ratio_bound: f64,
    #[serde(default = "d_star_threshold")]
    pub ratio_threshold: usize,
    /// Moment order N for the paper-mode symbolic exponents.
    #[serde(default = "d_star_order")]
    pub moment_order: usize,
}

fn d_star_point() -> [f64; 2] {
    [0.0, 0.0]
}
fn d_star_ratio() -> f64 {
    1e-3
}
fn d_star_threshold() -> usize {
    2
}
fn d_star_order() -> usize {
    1
}

impl Default for StarConfig {
    fn default() -> Self {
        Self {
            point: d_star_point(),
            ratio_bound: d_star_ratio(),
            ratio_threshold: d_star_threshold(),
            moment_order: d_star_order(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OffdiagConfig {
    /// Off-diagonal sums must stay at or below this bound.
    #[serde(default = "d_offdiag_bound")]
    pub bound: f64,
}

fn d_offdiag_bound() -> f64 {
    0.5
}

impl Default for OffdiagConfig {
    fn default() -> Self {
        Self {
            bound: d_offdiag_bound(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleConfig {
    #[serde(default = "d_ce_deg")]
    pub maxdeg: usize,
    #[serde(default = "d_ce_peak")]
    pub peak_floor: f64,
}

fn d_ce_deg() -> usize {
    32
}
fn d_ce_peak() -> f64 {
    4.5
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        Self {
            maxdeg: d_ce_deg(),
            peak_floor: d_ce_peak(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsLedgerConfig {
    #[serde(default = "d_bl_r")]
    pub r_values: Vec<f64>,
    #[serde(default = "d_bl_orders")]
    pub orders: Vec<usize>,
    #[serde(default = "d_bl_rhos")]
    pub rhos: Vec<f64>,
    /// Number of sampled points per symbol in the quarter-bound corpus.
    #[serde(default = "d_bl_pts")]
    pub corpus_points: usize,
    /// Radius of the sampling disc for corpus points.
    #[serde(default = "d_bl_radius")]
    pub corpus_radius: f64,
}

fn d_bl_r() -> Vec<f64> {
    vec![1.0, 2.0, 4.0]
}
fn d_bl_orders() -> Vec<usize> {
    vec![1, 2]
}
fn d_bl_rhos() -> Vec<f64> {
    vec![1.0, 2.0, 4.0]
}
fn d_bl_pts() -> usize {
    4
}
fn d_bl_radius() -> f64 {
    2.5
}

impl Default for BoundsLedgerConfig {
    fn default() -> Self {
        Self {
            r_values: d_bl_r(),
            orders: d_bl_orders(),
            rhos: d_bl_rhos(),
            corpus_points: d_bl_pts(),
            corpus_radius: d_bl_radius(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantsConfig {
    #[serde(default = "d_inv_r")]
    pub roundtrip_r: Vec<f64>,
    #[serde(default = "d_inv_tol")]
    pub roundtrip_tol: f64,
}

fn d_inv_r() -> Vec<f64> {
    vec![1.0, 2.0, 4.0]
}
fn d_inv_tol() -> f64 {
    1e-6
}

impl Default for InvariantsConfig {
    fn default() -> Self {
        Self {
            roundtrip_r: d_inv_r(),
            roundtrip_tol: d_inv_tol(),
        }
    }
}

/// The whole run configuration. Every field has a default, so `{}` is a
/// valid document and `Config::default()` is the documented baseline.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default = "d_n")]
    pub n: usize,
    #[serde(default = "d_seed")]
    pub seed: u64,
    /// Output directory; overridden by --out, then by FOCKLAB_OUT.
    #[serde(default)]
    pub out_dir: Option<String>,
    #[serde(default)]
    pub quad: QuadConfig,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub hs_identity: HsIdentityConfig,
    #[serde(default)]
    pub block_decay: BlockDecayConfig,
    #[serde(default)]
    pub bridge: BridgeConfig,
    #[serde(default)]
    pub berezin: BerezinConfig,
    #[serde(default)]
    pub star: StarConfig,
    #[serde(default)]
    pub offdiag: OffdiagConfig,
    #[serde(default)]
    pub counterexample: CounterexampleConfig,
    #[serde(default)]
    pub bounds_ledger: BoundsLedgerConfig,
    #[serde(default)]
    pub invariants: InvariantsConfig,
}

fn d_n() -> usize {
    1
}
fn d_seed() -> u64 {
    1
}

impl Default for Config {
    /// Identical to parsing the empty document, so the serde field defaults
    /// are the single source of truth.
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty document is a valid config")
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: Config =
            serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Cross-field checks the serde schema cannot express.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.n != 1 {
            return Err(HarnessError::Config(format!(
                "experiments are implemented for n = 1, got n = {}",
                self.n
            )));
        }
        if self.quad.max_refine > 16 {
            return Err(HarnessError::Config(
                "quad.max_refine beyond 16 doubles past any useful resolution".into(),
            ));
        }
        if !(self.quad.rel_tol > 0.0) {
            return Err(HarnessError::Config("quad.rel_tol must be positive".into()));
        }
        for &(l, g) in self
            .hs_identity
            .grids
            .iter()
            .chain(self.bridge.lanes.iter().flat_map(|lane| lane.grids.iter()))
            .chain(core::iter::once(&self.block_decay.weyl_grid))
        {
            if !(l > 0.0) || g < 8 || !g.is_power_of_two() {
                return Err(HarnessError::Config(format!(
                    "grid ({l}, {g}) needs positive half-width and a power-of-two sample count ≥ 8"
                )));
            }
        }
        if self.star.moment_order == 0 || self.star.moment_order > 4 {
            return Err(HarnessError::Config(
                "star.moment_order must sit in 1..=4".into(),
            ));
        }
        if self.bounds_ledger.corpus_points == 0 {
            return Err(HarnessError::Config(
                "bounds_ledger.corpus_points must be at least 1".into(),
            ));
        }
        self.schedule.build().map(|_| ())
    }
}
