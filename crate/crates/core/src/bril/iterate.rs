use super::refine::{refine_normal, refine_unimodal};
use super::{bootstrap, BrilConfig};
use crate::error::{Error, Result};
use crate::points::{euclidean, IndexSubset, PointSet};
use crate::rng::RngStream;
use serde::{Deserialize, Serialize};

/// One refined group, indexed into the original sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub members: IndexSubset,
    pub center: Vec<f64>,
    /// 1-based iteration that produced the group.
    pub iteration: usize,
    /// Produced by the final iteration, so never selected when another
    /// group exists.
    pub terminal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationDiagnostics {
    pub iteration: usize,
    /// Samples still unassigned when the iteration began.
    pub remaining: usize,
    pub seed: Vec<f64>,
    /// Dip test passed on all remaining samples before any removal.
    pub unimodal_before: bool,
    pub unimodal_size: usize,
    pub dip_trace: Vec<f64>,
    pub normal_trace: Vec<f64>,
    pub unimodal_degenerate: bool,
    pub normal_degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeEstimate {
    pub center: Vec<f64>,
    pub selected_group: GroupRecord,
    /// Position of the selected group in `all_groups`.
    pub selected_index: usize,
    pub all_groups: Vec<GroupRecord>,
    pub unassigned: IndexSubset,
    pub diagnostics: Vec<IterationDiagnostics>,
}

/// Repeatedly bootstrap and refine, removing each group from the sample.
///
/// Stops after an iteration whose remaining samples were already unimodal
/// about its seed, or when too few samples remain. The group from the final
/// iteration is terminal. The estimate is the center of the largest
/// non-terminal group (the earliest on ties), or of the only group.
pub fn bril(points: &PointSet, config: &BrilConfig, rng: &RngStream) -> Result<ModeEstimate> {
    let d = points.dim();
    config.validate(d)?;
    let n = points.len();
    let floor = config.min_input(d);
    if n < floor {
        return Err(Error::InsufficientSamples { needed: floor, got: n });
    }

    let mut remaining: Vec<usize> = (0..n).collect();
    let mut groups: Vec<GroupRecord> = Vec::new();
    let mut diagnostics = Vec::new();
    let mut iteration = 0;
    while remaining.len() >= floor {
        iteration += 1;
        let stage = rng.derive(iteration as u64);
        let sub = points.select(&remaining)?;
        let seed = bootstrap(&sub, &config.bootstrap, &stage.derive(0))?;
        let unimodal = refine_unimodal(&sub, &seed, config)?;
        let normal = refine_normal(&sub, &unimodal.members, config, &stage.derive(1))?;

        let rest = IndexSubset::new(remaining.clone(), n)?;
        let members = rest.compose(&normal.members);
        remaining.retain(|i| !members.contains(*i));
        diagnostics.push(IterationDiagnostics {
            iteration,
            remaining: sub.len(),
            seed,
            unimodal_before: unimodal.unimodal_at_start,
            unimodal_size: unimodal.members.len(),
            dip_trace: unimodal.p_trace,
            normal_trace: normal.p_trace,
            unimodal_degenerate: unimodal.degenerate,
            normal_degenerate: normal.degenerate,
        });
        groups.push(GroupRecord {
            members,
            center: normal.center,
            iteration,
            terminal: false,
        });
        if unimodal.unimodal_at_start {
            break;
        }
    }
    if let Some(last) = groups.last_mut() {
        last.terminal = true;
    }

    let selected_index = if groups.len() == 1 {
        0
    } else {
        let mut best = 0;
        for (i, g) in groups.iter().enumerate() {
            if !g.terminal && (groups[best].terminal || g.members.len() > groups[best].members.len()) {
                best = i;
            }
        }
        best
    };
    let selected_group = groups[selected_index].clone();
    Ok(ModeEstimate {
        center: selected_group.center.clone(),
        selected_group,
        selected_index,
        all_groups: groups,
        unassigned: IndexSubset::from_unsorted(remaining),
        diagnostics,
    })
}

impl ModeEstimate {
    /// Distance from the estimate to `truth`.
    pub fn error_to(&self, truth: &[f64]) -> f64 {
        euclidean(&self.center, truth)
    }
}
