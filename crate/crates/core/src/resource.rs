//! Detectability and resource accounting for three observer pairs.
//!
//! The sequential scheme shares one copy of a maximally entangled state
//! among three symmetric pairs. The non-sequential schemes give each pair
//! its own copy of a noisier state. Two comparisons are made: at equal
//! measurement resources (how much entanglement the copies need) and at
//! equal entanglement (how much measurement robustness the pairs need).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequential::{disturbance_factor, run_schedule, ChainReport, SharpnessSchedule};
use crate::states::{FamilyKind, StateFamily};
use crate::witness::WitnessOperator;

/// Number of observer pairs in the resource comparison.
pub const PAIRS: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectabilityReport {
    pub per_stage: Vec<f64>,
    pub total: f64,
    pub schedule: SharpnessSchedule,
}

impl DetectabilityReport {
    pub fn all_detect(&self) -> bool {
        self.per_stage.iter().all(|d| *d < 0.0)
    }
}

/// Sum of each stage's modulated witness on its incoming averaged state.
pub fn detectability(chain: &ChainReport) -> Result<DetectabilityReport> {
    if chain.schedule.is_empty() {
        return Err(Error::Infeasible("detectability needs at least one stage".into()));
    }
    let w = WitnessOperator::for_family(&chain.family);
    let mut per_stage = Vec::with_capacity(chain.schedule.len());
    for (&(xi, lambda), state) in chain.schedule.stages().iter().zip(&chain.states) {
        per_stage.push(w.modulate(xi, lambda)?.expectation(state)?);
    }
    Ok(DetectabilityReport {
        total: per_stage.iter().sum(),
        per_stage,
        schedule: chain.schedule.clone(),
    })
}

/// Identity and correlation parts of the family's witness on its state.
///
/// The averaged two-sided channel depolarizes each wing, so with a witness
/// that has no local terms stage `k` sees `a + ξλ·b·Π f(ξⱼ)f(λⱼ)/9`.
fn cascade_coefficients(family: &StateFamily) -> Result<(f64, f64)> {
    let parts = WitnessOperator::for_family(family).parts(&family.build()?)?;
    if parts.local_a != 0.0 || parts.local_b != 0.0 {
        return Err(Error::UnsupportedFamily(family.name()));
    }
    Ok((parts.identity, parts.correlation))
}

fn cascade_values(a: f64, b: f64, s: &[f64]) -> Vec<f64> {
    let mut scale = 1.0;
    s.iter()
        .map(|&x| {
            let d = a + x * x * b * scale;
            scale *= disturbance_factor(x).powi(2) / 9.0;
            d
        })
        .collect()
}

fn feasible_total(a: f64, b: f64, s: &[f64; 3]) -> Option<f64> {
    let v = cascade_values(a, b, s);
    v.iter().all(|d| *d < 0.0).then(|| v.iter().sum())
}

/// Most negative total detectability over symmetric three-stage schedules
/// with every stage detecting.
pub fn maximize_detectability(family: &StateFamily) -> Result<DetectabilityReport> {
    maximize_detectability_with(family, [None; PAIRS])
}

/// Nested grid over `[lo, hi]` (endpoints excluded), refined until the step
/// drops below `tol`.
fn refine_1d(lo: f64, hi: f64, tol: f64, mut cost: impl FnMut(f64) -> Option<f64>) -> Option<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    let mut h = (hi - lo) / 100.0;
    for i in 1..100 {
        let x = lo + i as f64 * h;
        if let Some(c) = cost(x) {
            if best.is_none_or(|(_, b)| c < b) {
                best = Some((x, c));
            }
        }
    }
    while h > tol {
        h /= 10.0;
        let centre = best?.0;
        for i in -10..=10 {
            let x = centre + i as f64 * h;
            if x <= lo || x >= hi {
                continue;
            }
            if let Some(c) = cost(x) {
                if best.is_none_or(|(_, b)| c < b) {
                    best = Some((x, c));
                }
            }
        }
    }
    best
}

/// Best middle-stage sharpness for given outer stages.
///
/// Stage 2 detects above `√(−a / (b k))` and stage 3 stops detecting once
/// stage 2 disturbs too little, which bounds the middle sharpness from above.
fn best_middle(a: f64, b: f64, s1: f64, s3: f64, fixed: Option<f64>) -> Option<(f64, f64)> {
    if let Some(s2) = fixed {
        return feasible_total(a, b, &[s1, s2, s3]).map(|t| (s2, t));
    }
    if a + s1 * s1 * b >= 0.0 {
        return None;
    }
    let k = disturbance_factor(s1).powi(2) / 9.0;
    let lo = (-a / (b * k)).sqrt();
    // f(s2) must exceed this for stage 3 to detect
    let need = (9.0 * a / (-b * k * s3 * s3)).max(0.0).sqrt();
    let hi = if need <= 1.0 {
        1.0 + 1e-9
    } else if need >= 3.0 {
        return None;
    } else {
        let r = (need - 1.0) / 2.0;
        (1.0 - r * r).sqrt()
    };
    if lo >= hi.min(1.0 + 1e-9) {
        return None;
    }
    refine_1d(lo, hi, 1e-12, |x| {
        let x = x.min(1.0);
        feasible_total(a, b, &[s1, x, s3])
    })
    .map(|(x, t)| (x.min(1.0), t))
}

/// As [`maximize_detectability`], with some stages pinned to given sharpness.
///
/// Outer stages are searched on a grid refined to `1e-6`; the middle stage is
/// optimized inside its feasible interval for each outer pair.
pub fn maximize_detectability_with(family: &StateFamily, fixed: [Option<f64>; PAIRS]) -> Result<DetectabilityReport> {
    let (a, b) = cascade_coefficients(family)?;
    let mut best: Option<([f64; 3], f64)> = None;
    let consider = |s1: f64, s3: f64, best: &mut Option<([f64; 3], f64)>| {
        if let Some((s2, t)) = best_middle(a, b, s1, s3, fixed[1]) {
            if best.is_none_or(|(_, bt)| t < bt) {
                *best = Some(([s1, s2, s3], t));
            }
        }
    };
    let axis = |v: Option<f64>| -> Vec<f64> {
        match v {
            Some(v) => vec![v],
            None => (1..=100).map(|i| i as f64 / 100.0).collect(),
        }
    };
    for &s1 in &axis(fixed[0]) {
        for &s3 in &axis(fixed[2]) {
            consider(s1, s3, &mut best);
        }
    }
    if best.is_none() {
        return Err(Error::Infeasible(format!("no detecting 3-stage schedule for {family}")));
    }
    let mut h = 0.01;
    while h > 1e-6 {
        h /= 10.0;
        loop {
            let (centre, before) = best.expect("seeded");
            let around = |k: usize| -> Vec<f64> {
                if fixed[k].is_some() {
                    return vec![centre[k]];
                }
                (-10..=10)
                    .map(|i| centre[k] + i as f64 * h)
                    .filter(|x| *x > 0.0 && *x <= 1.0 + 1e-12)
                    .map(|x| x.min(1.0))
                    .collect()
            };
            for &s1 in &around(0) {
                for &s3 in &around(2) {
                    consider(s1, s3, &mut best);
                }
            }
            if best.expect("seeded").1 >= before {
                break;
            }
        }
    }
    let (s, _) = best.expect("seeded");
    let chain = run_schedule(family, &SharpnessSchedule::symmetric(&s)?)?;
    detectability(&chain)
}

/// Sum of all sharpness parameters on both wings.
pub fn total_rom(schedule: &SharpnessSchedule) -> f64 {
    schedule.stages().iter().map(|(xi, lambda)| xi + lambda).sum()
}

/// Non-sequential detectability: each stage measures a fresh copy.
pub fn independent_detectability(family: &StateFamily, schedule: &SharpnessSchedule) -> Result<f64> {
    let parts = WitnessOperator::for_family(family).parts(&family.build()?)?;
    Ok(schedule
        .stages()
        .iter()
        .map(|&(xi, lambda)| parts.modulated(xi, lambda))
        .sum())
}

/// State parameter (`p`, or `θ` for the pure family) at which independent
/// copies measured with `schedule` reach total detectability `target_d`.
pub fn solve_matching_parameter(kind: FamilyKind, schedule: &SharpnessSchedule, target_d: f64) -> Result<f64> {
    let (lo, hi) = kind.parameter_range();
    let hi = if kind == FamilyKind::PureNonMax { hi - 1e-12 } else { hi };
    let g = |x: f64| independent_detectability(&kind.with_parameter(x), schedule).map(|d| d - target_d);
    let lo = lo.max(1e-12);
    let (g_lo, g_hi) = (g(lo)?, g(hi)?);
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::NoRoot(format!(
            "{kind}: detectability {target_d} not reachable with this schedule"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > 1e-12 {
        let mid = 0.5 * (a + b);
        if g(mid)?.signum() == g_lo.signum() {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Total concurrence carried by `copies` copies of the state.
pub fn entanglement_budget(kind: FamilyKind, parameter: f64, copies: usize) -> Result<f64> {
    if copies == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "copies",
            value: 0.0,
            range: ">= 1",
        });
    }
    Ok(copies as f64 * kind.with_parameter(parameter).concurrence_closed_form()?)
}

/// Outcome of the minimum-robustness search at a fixed entanglement budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinRomReport {
    pub parameter: f64,
    /// Required `Σ λᵢ²` for the target detectability.
    pub constraint: f64,
    /// Each pair detects only above this sharpness.
    pub floor: f64,
    pub lambdas: [f64; PAIRS],
    pub total_rom: f64,
}

/// Smallest `2 Σ λᵢ` subject to `Σ λᵢ² = c` and `floor ≤ λᵢ ≤ 1`.
///
/// The objective is concave on the constraint sphere, so the minimum sits
/// with all but one coordinate on a bound.
pub fn minimize_rom_on_sphere(c: f64, floor: f64) -> Result<[f64; PAIRS]> {
    if !(floor > 0.0 && floor <= 1.0) || c > 3.0 + 1e-12 || c < 3.0 * floor * floor - 1e-12 {
        return Err(Error::Infeasible(format!(
            "sum of squares {c} with per-pair floor {floor}"
        )));
    }
    let mut best: Option<([f64; PAIRS], f64)> = None;
    for ones in 0..PAIRS {
        let floors = PAIRS - 1 - ones;
        let rest = c - ones as f64 - floors as f64 * floor * floor;
        if rest < floor * floor - 1e-12 || rest > 1.0 + 1e-12 {
            continue;
        }
        let x = rest.max(0.0).sqrt().clamp(floor, 1.0);
        let mut l = [floor; PAIRS];
        for v in l.iter_mut().take(ones) {
            *v = 1.0;
        }
        l[PAIRS - 1] = x;
        let sum: f64 = l.iter().sum();
        if best.is_none_or(|(_, s)| sum < s) {
            best = Some((l, sum));
        }
    }
    best.map(|(l, _)| l)
        .ok_or_else(|| Error::Infeasible(format!("no boundary point for sum of squares {c}")))
}

fn min_rom_at(kind: FamilyKind, parameter: f64, target_d: f64) -> Result<MinRomReport> {
    let family = kind.with_parameter(parameter);
    let (a, b) = cascade_coefficients(&family)?;
    if b >= 0.0 {
        return Err(Error::Infeasible(format!("{family} is not detected by its witness")));
    }
    let constraint = (target_d - PAIRS as f64 * a) / b;
    let floor = (-a / b).sqrt();
    let lambdas = minimize_rom_on_sphere(constraint, floor)?;
    Ok(MinRomReport {
        parameter,
        constraint,
        floor,
        lambdas,
        total_rom: 2.0 * lambdas.iter().sum::<f64>(),
    })
}

/// Minimum total robustness for three independent copies that together
/// carry `ebit_budget` and reach detectability `target_d`, with `ξᵢ = λᵢ`.
pub fn min_total_rom(kind: FamilyKind, ebit_budget: f64, target_d: f64) -> Result<MinRomReport> {
    if ebit_budget <= 0.0 {
        return Err(Error::ParameterOutOfRange {
            name: "ebit_budget",
            value: ebit_budget,
            range: "> 0",
        });
    }
    let parameter = kind.parameter_for_concurrence(ebit_budget / PAIRS as f64)?;
    min_rom_at(kind, parameter, target_d)
}

/// Grid search over unequal `(ξᵢ, λᵢ)` with the same constraints as
/// [`min_total_rom`]; returns the smallest total robustness found.
pub fn asymmetric_rom_check(report: &MinRomReport, step: f64) -> f64 {
    let lo = report.floor * report.floor;
    let n = ((1.0 - lo) / step).floor() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| 1.0 - i as f64 * step).collect();
    let mut best = f64::INFINITY;
    for &x1 in &grid {
        for &y1 in &grid {
            let p1 = x1 * y1;
            if p1 <= lo {
                continue;
            }
            for &x2 in &grid {
                for &y2 in &grid {
                    let p2 = x2 * y2;
                    if p2 <= lo {
                        continue;
                    }
                    let p3 = report.constraint - p1 - p2;
                    if p3 <= lo {
                        continue;
                    }
                    for &x3 in &grid {
                        let y3 = p3 / x3;
                        if y3 <= 1.0 {
                            best = best.min(x1 + y1 + x2 + y2 + x3 + y3);
                        }
                    }
                }
            }
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowMode {
    /// Same total robustness as the sequential scheme; solve for η.
    FixedRomSolveEta,
    /// Same entanglement as the sequential scheme; minimize robustness.
    FixedEtaMinimizeRom,
}

/// Values recomputed from two-decimal intermediates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaperRounded {
    pub parameter: f64,
    pub detectability: f64,
    pub total_rom: f64,
    pub entanglement_budget: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constraint: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub family: FamilyKind,
    pub mode: RowMode,
    pub detectability: f64,
    pub total_rom: f64,
    pub entanglement_budget: f64,
    /// `p`, or `θ` for the pure family.
    pub parameter: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constraint: Option<f64>,
    /// Best total robustness found with `ξᵢ ≠ λᵢ` allowed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymmetric_check: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paper: Option<PaperRounded>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequentialRow {
    pub detectability: f64,
    pub total_rom: f64,
    pub entanglement_budget: f64,
    pub per_stage: Vec<f64>,
    pub schedule: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paper: Option<PaperRounded>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTables {
    pub sequential: SequentialRow,
    pub table1: Vec<ComparisonRow>,
    pub table2: Vec<ComparisonRow>,
}

pub fn round_dp(x: f64, dp: i32) -> f64 {
    let k = 10f64.powi(dp);
    (x * k).round() / k
}

fn paper_table1(kind: FamilyKind, schedule: &SharpnessSchedule, target_d: f64) -> Result<PaperRounded> {
    let parameter = round_dp(solve_matching_parameter(kind, schedule, target_d)?, 2);
    let c = round_dp(kind.with_parameter(parameter).concurrence_closed_form()?, 2);
    Ok(PaperRounded {
        parameter,
        detectability: target_d,
        total_rom: round_dp(total_rom(schedule), 2),
        entanglement_budget: round_dp(PAIRS as f64 * c, 2),
        constraint: None,
    })
}

fn paper_table2(kind: FamilyKind, target_d: f64) -> Result<PaperRounded> {
    let parameter = round_dp(kind.parameter_for_concurrence(1.0 / PAIRS as f64)?, 2);
    let r = min_rom_at(kind, parameter, target_d)?;
    Ok(PaperRounded {
        parameter,
        detectability: target_d,
        total_rom: round_dp(r.total_rom, 2),
        entanglement_budget: 1.0,
        constraint: Some(round_dp(r.constraint, 2)),
    })
}

/// Both comparison tables. Paper-rounded values are attached when asked.
pub fn build_comparison_tables(paper_rounding: bool) -> Result<ComparisonTables> {
    let bell = StateFamily::BellPsiPlus;
    let best = maximize_detectability(&bell)?;
    let rom = total_rom(&best.schedule);
    let d = best.total;

    let rounded_schedule = SharpnessSchedule::symmetric(
        &best.schedule.stages().iter().map(|s| round_dp(s.0, 2)).collect::<Vec<_>>(),
    )?;
    let rounded_d = round_dp(d, 2);
    let sequential = SequentialRow {
        detectability: d,
        total_rom: rom,
        entanglement_budget: bell.concurrence_closed_form()?,
        per_stage: best.per_stage.clone(),
        schedule: best.schedule.stages().iter().map(|s| s.0).collect(),
        paper: paper_rounding.then(|| PaperRounded {
            parameter: 1.0,
            detectability: rounded_d,
            total_rom: round_dp(total_rom(&rounded_schedule), 2),
            entanglement_budget: 1.0,
            constraint: None,
        }),
    };

    let mut table1 = Vec::with_capacity(3);
    let mut table2 = Vec::with_capacity(3);
    for kind in FamilyKind::ALL {
        let parameter = solve_matching_parameter(kind, &best.schedule, d)?;
        table1.push(ComparisonRow {
            family: kind,
            mode: RowMode::FixedRomSolveEta,
            detectability: d,
            total_rom: rom,
            entanglement_budget: entanglement_budget(kind, parameter, PAIRS)?,
            parameter,
            constraint: None,
            asymmetric_check: None,
            paper: if paper_rounding {
                Some(paper_table1(kind, &rounded_schedule, rounded_d)?)
            } else {
                None
            },
        });

        let min = min_total_rom(kind, 1.0, d)?;
        table2.push(ComparisonRow {
            family: kind,
            mode: RowMode::FixedEtaMinimizeRom,
            detectability: d,
            total_rom: min.total_rom,
            entanglement_budget: 1.0,
            parameter: min.parameter,
            constraint: Some(min.constraint),
            asymmetric_check: Some(asymmetric_rom_check(&min, 0.05)),
            paper: if paper_rounding {
                Some(paper_table2(kind, rounded_d)?)
            } else {
                None
            },
        });
    }
    Ok(ComparisonTables {
        sequential,
        table1,
        table2,
    })
}
