//! Angle schedules and detectors for the three walk phenomena: perfect
//! state transfer, instantaneous uniform mixing, and periodicity.
//!
//! The schedules encode two selection rules. For state transfer, targeted
//! order-2 singleton pieces get a quarter turn spread over `T` steps while
//! every other factor is driven to a multiple of pi, which collapses the
//! power `U^T` to a phase times the permutation by the product of targeted
//! generators. For uniform mixing, a piece of size `gamma` gets `pi/(4T)`,
//! `pi/(3T)`, or `pi/(2T)` for `gamma` 2, 3, 4; no angle works above 4.

use crate::error::{Error, Result};
use crate::group::ElementSet;
use crate::operators::{
    expi_reflection, phase_equal, staggered_step, Angle, ComplexMatrix, EvolutionOperator,
    ReflectionOperator,
};
use crate::tessellation::{commute_settheoretic, ConnectionPartition};
use nalgebra::Complex;
use serde::Serialize;

/// What a schedule was built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleIntent {
    Pst,
    Ium,
    Discretize,
    Custom,
}

/// One angle per tessellation plus the step count the angles were tuned for.
#[derive(Debug, Clone, Serialize)]
pub struct ThetaSchedule {
    pub thetas: Vec<Angle>,
    pub time: u64,
    pub intent: ScheduleIntent,
    /// For transfer schedules: the targeted generators, whose product is the
    /// displacement the walk realizes at time `time`.
    pub target_generators: Option<ElementSet>,
}

/// A transfer witness: `|U^T[to, from]|` at unit magnitude.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferPair {
    pub from: usize,
    pub to: usize,
    pub fidelity: f64,
}

/// Outcome of one detector run.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhenomenonReport {
    Pst {
        pass: bool,
        tol: f64,
        time: u64,
        pairs: Vec<TransferPair>,
        /// Is `U^T` a permutation matrix times one global phase?
        permutation_like: bool,
        global_phase: Option<[f64; 2]>,
    },
    Ium {
        pass: bool,
        tol: f64,
        dimension: usize,
        expected_magnitude: f64,
        min_magnitude: f64,
        max_magnitude: f64,
    },
    Period {
        pass: bool,
        tol: f64,
        period: Option<u64>,
        max_tested: u64,
    },
}

impl PhenomenonReport {
    pub fn pass(&self) -> bool {
        match self {
            PhenomenonReport::Pst { pass, .. }
            | PhenomenonReport::Ium { pass, .. }
            | PhenomenonReport::Period { pass, .. } => *pass,
        }
    }
}

fn check_pairwise_commuting(p: &ConnectionPartition) -> Result<()> {
    let group = p.group();
    let pieces = p.pieces();
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            if !commute_settheoretic(group, &pieces[i], &pieces[j]) {
                return Err(Error::NonCommutingPieces { i, j });
            }
        }
    }
    Ok(())
}

/// Transfer schedule: `pi/(2T)` on each targeted piece, `gamma_i pi / T` on
/// the rest. Targeted pieces must be singletons holding an order-2 element,
/// and all pieces must commute pairwise.
pub fn pst_schedule(
    p: &ConnectionPartition,
    time: u64,
    targets: &[usize],
) -> Result<ThetaSchedule> {
    if time == 0 {
        return Err(Error::InvalidTime);
    }
    if targets.is_empty() {
        return Err(Error::NoTargets);
    }
    let pieces = p.pieces();
    let group = p.group();
    let mut target_flags = vec![false; pieces.len()];
    for &index in targets {
        if index >= pieces.len() {
            return Err(Error::TargetOutOfRange {
                index,
                count: pieces.len(),
            });
        }
        target_flags[index] = true;
    }
    let mut generators = Vec::new();
    for (index, piece) in pieces.iter().enumerate() {
        if !target_flags[index] {
            continue;
        }
        if piece.len() != 1 {
            return Err(Error::TargetNotOrderTwoSingleton { index });
        }
        let g = piece.iter().next().unwrap();
        if group.element_order(g) != 2 {
            return Err(Error::TargetNotOrderTwoSingleton { index });
        }
        generators.push(g);
    }
    check_pairwise_commuting(p)?;
    let t = time as i64;
    let thetas = pieces
        .iter()
        .zip(&target_flags)
        .map(|(piece, &targeted)| {
            if targeted {
                Angle::new(1, 2 * t)
            } else {
                Angle::new(piece.len() as i64 + 1, t)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ThetaSchedule {
        thetas,
        time,
        intent: ScheduleIntent::Pst,
        target_generators: Some(generators.into_iter().collect()),
    })
}

/// Mixing schedule from the cell-size case table. Pieces must be disjoint,
/// pairwise commuting, of subgroup order at most 4, and jointly generating.
pub fn ium_schedule(p: &ConnectionPartition, time: u64) -> Result<ThetaSchedule> {
    if time == 0 {
        return Err(Error::InvalidTime);
    }
    let pieces = p.pieces();
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            if !pieces[i].is_disjoint(&pieces[j]) {
                return Err(Error::PiecesOverlap { i, j });
            }
        }
    }
    check_pairwise_commuting(p)?;
    if !p.connection().generates() {
        return Err(Error::NotGenerating);
    }
    let t = time as i64;
    let thetas = pieces
        .iter()
        .enumerate()
        .map(|(index, piece)| {
            let gamma = piece.len() + 1;
            match gamma {
                2 => Angle::new(1, 4 * t),
                3 => Angle::new(1, 3 * t),
                4 => Angle::new(1, 2 * t),
                _ => Err(Error::MixingInfeasible { index, gamma }),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ThetaSchedule {
        thetas,
        time,
        intent: ScheduleIntent::Ium,
        target_generators: None,
    })
}

/// Build the reflections for a partition's tessellations.
pub fn build_reflections(p: &ConnectionPartition) -> Result<Vec<ReflectionOperator>> {
    p.build_tessellations()
        .iter()
        .map(ReflectionOperator::from_tessellation)
        .collect()
}

/// One staggered step under a schedule's angles.
pub fn schedule_evolution(
    p: &ConnectionPartition,
    schedule: &ThetaSchedule,
) -> Result<EvolutionOperator> {
    let reflections = build_reflections(p)?;
    staggered_step(&reflections, &schedule.thetas)
}

/// Scan `U^T` for unit-magnitude transfers between distinct vertices, and
/// decide whether the whole matrix is a permutation times a global phase.
pub fn detect_pst(u: &EvolutionOperator, time: u64, tol: f64) -> PhenomenonReport {
    let ut = u.power(time);
    let n = ut.nrows();
    let mut pairs = Vec::new();
    for from in 0..n {
        for to in 0..n {
            if from == to {
                continue;
            }
            let mag = ut[(to, from)].norm();
            if mag >= 1.0 - tol {
                pairs.push(TransferPair {
                    from,
                    to,
                    fidelity: mag.min(1.0),
                });
            }
        }
    }

    let mut permutation_like = true;
    let mut phase: Option<Complex<f64>> = None;
    'columns: for col in 0..n {
        let mut big: Option<Complex<f64>> = None;
        for row in 0..n {
            let z = ut[(row, col)];
            if z.norm() >= 1.0 - tol {
                if big.is_some() {
                    permutation_like = false;
                    break 'columns;
                }
                big = Some(z);
            } else if z.norm() > tol {
                permutation_like = false;
                break 'columns;
            }
        }
        let Some(z) = big else {
            permutation_like = false;
            break;
        };
        let unit = z / z.norm();
        match phase {
            None => phase = Some(unit),
            Some(p) if (p - unit).norm() <= tol => {}
            Some(_) => {
                permutation_like = false;
                break;
            }
        }
    }
    let global_phase = if permutation_like {
        phase.map(|p| [p.re, p.im])
    } else {
        None
    };
    PhenomenonReport::Pst {
        pass: !pairs.is_empty(),
        tol,
        time,
        pairs,
        permutation_like,
        global_phase,
    }
}

/// Flatness test: every entry magnitude within `tol` of `1/sqrt(n)`.
pub fn detect_ium(m: &ComplexMatrix, tol: f64) -> PhenomenonReport {
    let n = m.nrows();
    let expected = 1.0 / (n as f64).sqrt();
    let mut min_magnitude = f64::INFINITY;
    let mut max_magnitude: f64 = 0.0;
    for z in m.iter() {
        let mag = z.norm();
        min_magnitude = min_magnitude.min(mag);
        max_magnitude = max_magnitude.max(mag);
    }
    let pass = (min_magnitude - expected).abs() <= tol && (max_magnitude - expected).abs() <= tol;
    PhenomenonReport::Ium {
        pass,
        tol,
        dimension: n,
        expected_magnitude: expected,
        min_magnitude,
        max_magnitude,
    }
}

/// Smallest `p` in `[1, max_p]` with `U^p` equal to the identity up to a
/// global phase.
pub fn detect_period(u: &EvolutionOperator, max_p: u64, tol: f64) -> PhenomenonReport {
    let n = u.dim();
    let identity = ComplexMatrix::identity(n, n);
    let mut acc = identity.clone();
    let mut period = None;
    for p in 1..=max_p {
        acc = &acc * u.matrix();
        if phase_equal(&acc, &identity, tol).expect("identity comparison target is nonzero") {
            period = Some(p);
            break;
        }
    }
    PhenomenonReport::Period {
        pass: period.is_some(),
        tol,
        period,
        max_tested: max_p,
    }
}

/// Flatness of each factor `exp(i theta_i T H_i)` on its own cells: entries
/// inside a cell have magnitude `1/sqrt(gamma_i)`, entries outside are zero.
/// This is the per-factor structure that makes commuting products mix.
pub fn factor_flatness_residual(
    reflections: &[ReflectionOperator],
    schedule: &ThetaSchedule,
) -> Result<f64> {
    if reflections.len() != schedule.thetas.len() {
        return Err(Error::LengthMismatch {
            expected: reflections.len(),
            got: schedule.thetas.len(),
        });
    }
    let mut worst: f64 = 0.0;
    for (h, &theta) in reflections.iter().zip(&schedule.thetas) {
        let factor = expi_reflection(h, theta * schedule.time as i64);
        let expected = 1.0 / (h.gamma() as f64).sqrt();
        let n = h.dim();
        for r in 0..n {
            for c in 0..n {
                let mag = factor[(r, c)].norm();
                let in_cell = r == c || h.matrix()[(r, c)] != 0.0;
                let target = if in_cell { expected } else { 0.0 };
                worst = worst.max((mag - target).abs());
            }
        }
    }
    Ok(worst)
}
