//! Entangling two memories, directly or through a measured bus register.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{graphs_equal, WeightedGraph};
use crate::qudit::{build_graph_state, gates, LocalGate, Outcome, QuditState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntangleMode {
    Direct,
    Bus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntangleRecord {
    pub mode: EntangleMode,
    pub outcome: Option<u8>,
    pub prob: f64,
    /// Power of `S` picked up by each memory.
    pub sigma: i32,
}

/// Phase exponent left on both memories by a Y-basis bus outcome:
/// `(S^σ ⊗ S^σ) CZ`.
pub fn bus_sigma(outcome: u8) -> i32 {
    if outcome == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug)]
pub struct TwoMemoryEngine {
    joint: QuditState,
    /// `S` exponents (mod 4) held on each memory.
    corrections: [i32; 2],
    rng: ChaCha8Rng,
    peak_live: usize,
}

impl TwoMemoryEngine {
    pub fn new(joint: QuditState, seed: u64) -> Result<Self> {
        if joint.n() != 2 || joint.d() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "two qubit memories expected, got n = {}, d = {}",
                joint.n(),
                joint.d()
            )));
        }
        Ok(Self { joint, corrections: [0, 0], rng: ChaCha8Rng::seed_from_u64(seed), peak_live: 2 })
    }

    pub fn stored_state(&self) -> &QuditState {
        &self.joint
    }

    pub fn corrections(&self) -> [i32; 2] {
        self.corrections
    }

    pub fn peak_live_registers(&self) -> usize {
        self.peak_live
    }

    /// Stored state with the recorded `S` powers undone.
    pub fn corrected_state(&self) -> Result<QuditState> {
        let mut out = self.joint.clone();
        for (j, &c) in self.corrections.iter().enumerate() {
            if c != 0 {
                out = out.apply_matrix(j, &gates::phase_s_pow(-c))?;
            }
        }
        Ok(out)
    }

    pub fn entangle(&mut self, mode: EntangleMode, forced: Option<u8>) -> Result<EntangleRecord> {
        match mode {
            EntangleMode::Direct => {
                self.joint = self.joint.apply_cz(0, 1, 1)?;
                Ok(EntangleRecord { mode, outcome: None, prob: 1.0, sigma: 0 })
            }
            EntangleMode::Bus => {
                let joint = self
                    .joint
                    .tensor(&QuditState::plus_state(1, 2)?)?
                    .apply_cz(0, 2, 1)?
                    .apply_cz(1, 2, 1)?;
                self.peak_live = self.peak_live.max(joint.n());
                let basis = LocalGate::new(2, gates::y_basis())?;
                let m = match forced {
                    Some(s) => joint.measure::<ChaCha8Rng>(&basis, Outcome::Forced(s as usize))?,
                    None => joint.measure(&basis, Outcome::Sample(&mut self.rng))?,
                };
                let s = m.outcome as u8;
                let sigma = bus_sigma(s);
                self.joint = m.post;
                for c in &mut self.corrections {
                    *c = (*c + sigma).rem_euclid(4);
                }
                Ok(EntangleRecord { mode, outcome: Some(s), prob: m.prob, sigma })
            }
        }
    }
}

/// Largest residual between bus-then-correct and direct on `input`, over
/// both bus outcomes.
pub fn bus_direct_residual(input: &QuditState) -> Result<f64> {
    let mut direct = TwoMemoryEngine::new(input.clone(), 0)?;
    direct.entangle(EntangleMode::Direct, None)?;
    let mut worst: f64 = 0.0;
    for s in 0..2u8 {
        let mut bus = TwoMemoryEngine::new(input.clone(), 0)?;
        bus.entangle(EntangleMode::Bus, Some(s))?;
        worst = worst.max(bus.corrected_state()?.phase_residual(direct.stored_state()));
    }
    Ok(worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct Fig4Report {
    /// Per outcome, Y-measured line state against `(S^σ ⊗ S^σ) CZ|++⟩`.
    pub branch_residuals: [f64; 2],
    /// Per outcome, the same state after undoing the corrections, against
    /// the edge graph state.
    pub corrected_residuals: [f64; 2],
    /// `LC(line, r)` then deleting `r` gives the edge `m1–m2`.
    pub graph_rule_holds: bool,
}

impl Fig4Report {
    pub fn max_residual(&self) -> f64 {
        let graph = if self.graph_rule_holds { 0.0 } else { 1.0 };
        self.branch_residuals.iter().chain(&self.corrected_residuals).fold(graph, |a, &b| a.max(b))
    }
}

/// The bus construction on the line `m1 – r – m2` with `r` the last
/// register.
pub fn verify_fig4_lu_equivalence() -> Result<Fig4Report> {
    let line = WeightedGraph::unweighted(3, Some(2), &[(0, 2), (1, 2)])?;
    let edge = WeightedGraph::unweighted(2, Some(2), &[(0, 1)])?;
    let line_state = build_graph_state(&line, 2)?;
    let edge_state = build_graph_state(&edge, 2)?;
    let basis = LocalGate::new(2, gates::y_basis())?;

    let mut branch_residuals = [0.0; 2];
    let mut corrected_residuals = [0.0; 2];
    for s in 0..2u8 {
        let m = line_state.measure::<ChaCha8Rng>(&basis, Outcome::Forced(s as usize))?;
        let sp = gates::phase_s_pow(bus_sigma(s));
        let want = edge_state.apply_matrix(0, &sp)?.apply_matrix(1, &sp)?;
        branch_residuals[s as usize] = m.post.phase_residual(&want);
        let spd = gates::phase_s_pow(-bus_sigma(s));
        let undone = m.post.apply_matrix(0, &spd)?.apply_matrix(1, &spd)?;
        corrected_residuals[s as usize] = undone.phase_residual(&edge_state);
    }

    let reduced = line.local_complement(2, 1)?.delete_vertex(2)?;
    let graph_rule_holds = graphs_equal(&reduced, &edge);
    Ok(Fig4Report { branch_residuals, corrected_residuals, graph_rule_holds })
}
