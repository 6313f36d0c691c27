//! Sequential observer chains.
//!
//! Every stage measures unsharp Pauli observables in uniformly random
//! directions and forwards the outcome-averaged state to the next pair. A
//! stage detects entanglement when its sharpness product exceeds the
//! violation threshold of the state it receives; the greedy engines pick
//! the least disturbing sharpness that still detects.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::{check_sharpness, local, Outcome, UnsharpObservable, Wing};
use crate::qcore::{tensor, ComplexMatrix, DensityMatrix, Pauli};
use crate::states::{FamilyKind, StateFamily};
use crate::tolerance;
use crate::witness::WitnessOperator;

/// Safety cap on chain length; real chains stop after a dozen stages.
pub const MAX_STAGES: usize = 256;

/// How far above each violation threshold the greedy engines set sharpness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonPolicy {
    pub first_stage_slack: f64,
    pub later_stage_slack: f64,
    /// Truncate each two-sided stage's sharpness to two decimals before
    /// propagating. One-sided stages always propagate exactly.
    pub paper_rounding: bool,
}

impl EpsilonPolicy {
    pub fn symmetric_default() -> Self {
        Self {
            first_stage_slack: 0.01,
            later_stage_slack: 0.01,
            paper_rounding: false,
        }
    }

    pub fn asymmetric_default() -> Self {
        Self {
            first_stage_slack: 0.01,
            later_stage_slack: 0.0,
            paper_rounding: false,
        }
    }

    /// Zero slack everywhere: the largest number of detecting stages.
    pub fn limit() -> Self {
        Self {
            first_stage_slack: 0.0,
            later_stage_slack: 0.0,
            paper_rounding: false,
        }
    }

    pub fn with_paper_rounding(mut self, on: bool) -> Self {
        self.paper_rounding = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("epsilon1", self.first_stage_slack),
            ("epsilon", self.later_stage_slack),
        ] {
            if !(0.0..0.1).contains(&v) {
                return Err(Error::ParameterOutOfRange {
                    name,
                    value: v,
                    range: "[0, 0.1)",
                });
            }
        }
        Ok(())
    }

    fn slack(&self, stage: usize) -> f64 {
        let s = if stage == 0 {
            self.first_stage_slack
        } else {
            self.later_stage_slack
        };
        s.max(tolerance::ZERO_SLACK_NUDGE)
    }
}

/// Per-stage `(ξ, λ)` sharpness pairs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SharpnessSchedule {
    stages: Vec<(f64, f64)>,
}

impl SharpnessSchedule {
    pub fn new(stages: Vec<(f64, f64)>) -> Result<Self> {
        for &(xi, lambda) in &stages {
            check_sharpness("xi", xi)?;
            check_sharpness("lambda", lambda)?;
        }
        Ok(Self { stages })
    }

    /// `(s, s)` at every stage.
    pub fn symmetric(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&s| (s, s)).collect())
    }

    pub fn stages(&self) -> &[(f64, f64)] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioKind {
    pub alices: usize,
    pub bobs: usize,
    pub family: StateFamily,
}

impl ScenarioKind {
    pub fn new(alices: usize, bobs: usize, family: StateFamily) -> Result<Self> {
        for (name, v) in [("alices", alices), ("bobs", bobs)] {
            if v == 0 {
                return Err(Error::ParameterOutOfRange {
                    name,
                    value: 0.0,
                    range: ">= 1",
                });
            }
        }
        family.validate()?;
        Ok(Self {
            alices,
            bobs,
            family,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageKind {
    TwoSided,
    /// Alice measures projectively, only Bob's sharpness is free.
    OneSided,
}

#[derive(Clone, Debug)]
pub struct ChainReport {
    pub family: StateFamily,
    pub detected_stages: usize,
    pub schedule: SharpnessSchedule,
    pub kinds: Vec<StageKind>,
    /// Threshold of every stage visited, including the first failing one.
    pub thresholds: Vec<f64>,
    /// Averaged state entering each visited stage.
    pub states: Vec<DensityMatrix>,
}

impl ChainReport {
    pub fn two_sided_stages(&self) -> usize {
        self.kinds.iter().filter(|k| **k == StageKind::TwoSided).count()
    }

    pub fn one_sided_stages(&self) -> usize {
        self.kinds.iter().filter(|k| **k == StageKind::OneSided).count()
    }

    /// Bob-side sharpness of the one-sided stages.
    pub fn one_sided_lambdas(&self) -> Vec<f64> {
        self.kinds
            .iter()
            .zip(self.schedule.stages())
            .filter(|(k, _)| **k == StageKind::OneSided)
            .map(|(_, s)| s.1)
            .collect()
    }
}

fn sqrt_effects(sharpness: f64) -> Result<Vec<ComplexMatrix>> {
    let mut out = Vec::with_capacity(6);
    for axis in Pauli::AXES {
        let obs = UnsharpObservable::along(axis, sharpness)?;
        for o in Outcome::ALL {
            out.push(obs.sqrt_effect(o));
        }
    }
    Ok(out)
}

fn sum_sandwiches(kraus: &[ComplexMatrix], rho: &DensityMatrix, weight: f64) -> Result<DensityMatrix> {
    let mut acc = ComplexMatrix::zeros(4)?;
    for k in kraus {
        acc = &acc + &k.sandwich(rho.matrix());
    }
    DensityMatrix::new(acc.scale(weight))
}

/// State received on average after both wings measure with sharpness `ξ`, `λ`.
pub fn average_two_sided(rho: &DensityMatrix, xi: f64, lambda: f64) -> Result<DensityMatrix> {
    check_sharpness("xi", xi)?;
    check_sharpness("lambda", lambda)?;
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch(rho.dim(), 4));
    }
    let a = sqrt_effects(xi)?;
    let b = sqrt_effects(lambda)?;
    let mut kraus = Vec::with_capacity(36);
    for ka in &a {
        for kb in &b {
            kraus.push(tensor(ka, kb)?);
        }
    }
    sum_sandwiches(&kraus, rho, 1.0 / 9.0)
}

/// State received on average when only Bob's side measures.
pub fn average_one_sided(rho: &DensityMatrix, lambda: f64) -> Result<DensityMatrix> {
    check_sharpness("lambda", lambda)?;
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch(rho.dim(), 4));
    }
    let kraus = sqrt_effects(lambda)?
        .iter()
        .map(|k| local(Wing::B, k))
        .collect::<Result<Vec<_>>>()?;
    sum_sandwiches(&kraus, rho, 1.0 / 3.0)
}

/// `1 + 2√(1 − s²)`: three times the factor by which one wing's averaged
/// measurement shrinks the Bloch components it touches.
pub fn disturbance_factor(s: f64) -> f64 {
    1.0 + 2.0 * (1.0 - s * s).max(0.0).sqrt()
}

/// Smallest sharpness product `ξλ` (or `λ` when one-sided) at which the
/// modulated witness expectation reaches zero.
///
/// Two-sided thresholds assume `ξ = λ`; this is exact whenever the witness
/// has no local terms. Returns infinity when no sharpness makes the
/// expectation negative, and values above 1 mean the stage cannot detect.
pub fn violation_threshold(w: &WitnessOperator, rho: &DensityMatrix, one_sided: bool) -> Result<f64> {
    let parts = w.parts(rho)?;
    if one_sided {
        let c0 = parts.identity + parts.local_a;
        let c1 = parts.local_b + parts.correlation;
        return Ok(if c0 < 0.0 {
            0.0
        } else if c1 < 0.0 {
            -c0 / c1
        } else {
            f64::INFINITY
        });
    }
    // value(s) = c0 + c1 s + c2 s² along ξ = λ = s
    let c0 = parts.identity;
    let c1 = parts.local_a + parts.local_b;
    let c2 = parts.correlation;
    if c0 < 0.0 {
        return Ok(0.0);
    }
    let root = if c2 < 0.0 {
        let disc = c1 * c1 - 4.0 * c2 * c0;
        (-c1 - disc.sqrt()) / (2.0 * c2)
    } else if c2 == 0.0 && c1 < 0.0 {
        -c0 / c1
    } else {
        return Ok(f64::INFINITY);
    };
    Ok(root * root)
}

fn truncate2(x: f64) -> f64 {
    ((x * 100.0) + 1e-9).floor() / 100.0
}

/// Sharpness for a detecting stage with threshold `t`.
fn stage_sharpness(t: f64, slack: f64, paper_rounding: bool, two_sided: bool) -> f64 {
    let target = (t + slack).min(1.0);
    let exact = if two_sided { target.sqrt() } else { target };
    if !paper_rounding || !two_sided {
        return exact;
    }
    let mut s = truncate2(exact);
    if s * s <= t {
        s += 0.01;
    }
    s.min(1.0)
}

fn run_chain(family: &StateFamily, policy: &EpsilonPolicy, two_sided_stages: usize) -> Result<ChainReport> {
    policy.validate()?;
    let witness = WitnessOperator::for_family(family);
    let mut state = family.build()?;
    let mut report = ChainReport {
        family: *family,
        detected_stages: 0,
        schedule: SharpnessSchedule::default(),
        kinds: Vec::new(),
        thresholds: Vec::new(),
        states: Vec::new(),
    };
    loop {
        let stage = report.thresholds.len();
        let two_sided = stage < two_sided_stages;
        let t = violation_threshold(&witness, &state, !two_sided)?;
        report.thresholds.push(t);
        report.states.push(state.clone());
        if t >= 1.0 || stage >= MAX_STAGES {
            break;
        }
        let s = stage_sharpness(t, policy.slack(stage), policy.paper_rounding, two_sided);
        let (xi, lambda, next) = if two_sided {
            (s, s, average_two_sided(&state, s, s)?)
        } else {
            (1.0, s, average_one_sided(&state, s)?)
        };
        report.schedule.stages.push((xi, lambda));
        report.kinds.push(if two_sided {
            StageKind::TwoSided
        } else {
            StageKind::OneSided
        });
        report.detected_stages += 1;
        state = next;
    }
    Ok(report)
}

/// Longest chain of symmetric pairs, each measuring with `ξ = λ`.
pub fn greedy_symmetric(family: &StateFamily, policy: &EpsilonPolicy) -> Result<ChainReport> {
    run_chain(family, policy, usize::MAX)
}

/// Longest chain with `alices` observers on one wing and unboundedly many
/// on the other. The first `alices − 1` stages are two-sided; the last
/// Alice measures projectively while later observers on the other wing
/// keep measuring. `detected_stages` counts the detecting Bobs.
pub fn greedy_asymmetric(alices: usize, family: &StateFamily, policy: &EpsilonPolicy) -> Result<ChainReport> {
    if alices == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "alices",
            value: 0.0,
            range: ">= 1",
        });
    }
    run_chain(family, policy, alices - 1)
}

/// Evaluates a fixed two-sided schedule. `detected_stages` is the length of
/// the leading run of stages whose modulated witness is negative.
pub fn run_schedule(family: &StateFamily, schedule: &SharpnessSchedule) -> Result<ChainReport> {
    let witness = WitnessOperator::for_family(family);
    let mut state = family.build()?;
    let mut report = ChainReport {
        family: *family,
        detected_stages: 0,
        schedule: schedule.clone(),
        kinds: vec![StageKind::TwoSided; schedule.len()],
        thresholds: Vec::new(),
        states: Vec::new(),
    };
    let mut leading = true;
    for &(xi, lambda) in schedule.stages() {
        report.thresholds.push(violation_threshold(&witness, &state, false)?);
        let value = witness.parts(&state)?.modulated(xi, lambda);
        if leading && value < 0.0 {
            report.detected_stages += 1;
        } else {
            leading = false;
        }
        report.states.push(state.clone());
        state = average_two_sided(&state, xi, lambda)?;
    }
    Ok(report)
}

/// Number of symmetric pairs able to detect, in the zero-slack limit.
pub fn classify_pair_count(family: &StateFamily) -> Result<usize> {
    match family {
        StateFamily::Werner { .. } | StateFamily::PureNonMax { .. } => {
            Ok(greedy_symmetric(family, &EpsilonPolicy::limit())?.detected_stages)
        }
        other => Err(Error::UnsupportedFamily(other.name())),
    }
}

/// Parameter values at which the symmetric pair count steps up to 1, 2 and
/// 3, located by bisection under `policy`.
pub fn band_edges(kind: FamilyKind, policy: &EpsilonPolicy) -> Result<Vec<f64>> {
    if kind == FamilyKind::ColoredNoise {
        return Err(Error::UnsupportedFamily(kind.name()));
    }
    let (lo, hi) = kind.parameter_range();
    let hi = if kind == FamilyKind::PureNonMax { hi - 1e-12 } else { hi };
    let count = |x: f64| -> Result<usize> {
        Ok(greedy_symmetric(&kind.with_parameter(x), policy)?.detected_stages)
    };
    let mut edges = Vec::new();
    for n in 1..=3 {
        if count(hi)? < n {
            return Err(Error::NoRoot(format!("{kind} never reaches {n} pairs")));
        }
        let (mut a, mut b) = (lo, hi);
        while b - a > 1e-10 {
            let mid = 0.5 * (a + b);
            if mid <= lo || count(mid)? >= n {
                b = mid;
            } else {
                a = mid;
            }
        }
        edges.push(0.5 * (a + b));
    }
    Ok(edges)
}

/// Largest excess of `f(ξ)f(λ)` over its value at `ξ = λ` along the curve
/// `ξλ = product`, scanning `samples` points. Non-positive when the
/// symmetric choice is the least disturbing.
pub fn symmetric_maximizer_gap(product: f64, samples: usize) -> f64 {
    let sym = disturbance_factor(product.sqrt()).powi(2);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..samples.max(2) {
        let xi = product + (1.0 - product) * i as f64 / (samples.max(2) - 1) as f64;
        let lambda = (product / xi).min(1.0);
        worst = worst.max(disturbance_factor(xi) * disturbance_factor(lambda) - sym);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn werner(p: f64) -> DensityMatrix {
        StateFamily::Werner { p }.build().unwrap()
    }

    fn bell() -> DensityMatrix {
        StateFamily::BellPsiPlus.build().unwrap()
    }

    #[test]
    fn two_sided_on_bell_is_werner() {
        for (xi, lambda) in [(0.58, 0.58), (0.3, 0.9), (1.0, 1.0)] {
            let out = average_two_sided(&bell(), xi, lambda).unwrap();
            let p = disturbance_factor(xi) * disturbance_factor(lambda) / 9.0;
            assert!(out.trace_distance(&werner(p)).unwrap() < 1e-12);
        }
        let out = average_two_sided(&bell(), 1.0, 1.0).unwrap();
        assert!(out.trace_distance(&werner(1.0 / 9.0)).unwrap() < 1e-12);
    }

    #[test]
    fn weak_measurement_barely_disturbs() {
        let out = average_two_sided(&bell(), 1e-6, 1e-6).unwrap();
        assert!(out.trace_distance(&bell()).unwrap() < 1e-6);
        let out = average_one_sided(&bell(), 1e-6).unwrap();
        assert!(out.trace_distance(&bell()).unwrap() < 1e-6);
    }

    #[test]
    fn one_sided_on_werner() {
        for p in [1.0, 0.8, 0.45] {
            for lambda in [0.2, 0.63, 1.0] {
                let out = average_one_sided(&werner(p), lambda).unwrap();
                let want = werner(p * disturbance_factor(lambda) / 3.0);
                assert!(out.trace_distance(&want).unwrap() < 1e-12);
            }
        }
        let out = average_one_sided(&bell(), 1.0).unwrap();
        assert!(out.trace_distance(&werner(1.0 / 3.0)).unwrap() < 1e-12);
    }

    #[test]
    fn channels_are_unital() {
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        let a = average_two_sided(&mixed, 0.7, 0.4).unwrap();
        let b = average_one_sided(&mixed, 0.7).unwrap();
        assert!(a.matrix().max_abs_diff(mixed.matrix()) < 1e-15);
        assert!(b.matrix().max_abs_diff(mixed.matrix()) < 1e-15);
    }

    #[test]
    fn channel_rejects_bad_sharpness() {
        assert!(average_two_sided(&bell(), 0.0, 0.5).is_err());
        assert!(average_one_sided(&bell(), 1.5).is_err());
    }

    #[test]
    fn bell_threshold_is_one_third() {
        let w = WitnessOperator::psi_plus();
        assert_abs_diff_eq!(violation_threshold(&w, &bell(), false).unwrap(), 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(violation_threshold(&w, &bell(), true).unwrap(), 1.0 / 3.0, epsilon = 1e-12);
        let sep = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(violation_threshold(&w, &sep, false).unwrap().is_infinite());
    }

    #[test]
    fn paper_rounded_symmetric_chain() {
        let policy = EpsilonPolicy::symmetric_default().with_paper_rounding(true);
        let r = greedy_symmetric(&StateFamily::BellPsiPlus, &policy).unwrap();
        assert_eq!(r.detected_stages, 3);
        let s: Vec<f64> = r.schedule.stages().iter().map(|x| x.0).collect();
        for (got, want) in s.iter().zip([0.58, 0.66, 0.79]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        for (got, want) in r.thresholds.iter().zip([1.0 / 3.0, 0.43, 0.62, 1.13]) {
            assert_abs_diff_eq!(*got, want, epsilon = 0.005);
        }
    }

    #[test]
    fn full_precision_symmetric_chain() {
        let r = greedy_symmetric(&StateFamily::BellPsiPlus, &EpsilonPolicy::symmetric_default()).unwrap();
        assert_eq!(r.detected_stages, 3);
        assert_eq!(r.thresholds.len(), 4);
        assert!(r.thresholds[3] > 1.0);
        for (got, want) in r.schedule.stages().iter().zip([0.58, 0.66, 0.79]) {
            assert_abs_diff_eq!(got.0, want, epsilon = 0.02);
        }
    }

    #[test]
    fn werner_chains() {
        let policy = EpsilonPolicy::symmetric_default();
        let count = |p| greedy_symmetric(&StateFamily::Werner { p }, &policy).unwrap().detected_stages;
        assert_eq!(count(0.9), 3);
        assert_eq!(count(0.5), 1);
        assert_eq!(count(0.3), 0);
    }

    #[test]
    fn asymmetric_counts() {
        let policy = EpsilonPolicy::asymmetric_default();
        let counts: Vec<usize> = (1..=4)
            .map(|a| {
                greedy_asymmetric(a, &StateFamily::BellPsiPlus, &policy)
                    .unwrap()
                    .detected_stages
            })
            .collect();
        assert_eq!(counts, vec![12, 8, 5, 3]);
        assert!(greedy_asymmetric(0, &StateFamily::BellPsiPlus, &policy).is_err());
    }

    #[test]
    fn two_alice_lambda_sequence() {
        let r = greedy_asymmetric(2, &StateFamily::BellPsiPlus, &EpsilonPolicy::asymmetric_default()).unwrap();
        assert_eq!(r.two_sided_stages(), 1);
        let lambdas = r.one_sided_lambdas();
        let want = [0.44, 0.47, 0.51, 0.56, 0.63, 0.74, 0.95];
        assert_eq!(lambdas.len(), want.len());
        for (got, want) in lambdas.iter().zip(want) {
            assert_abs_diff_eq!(*got, want, epsilon = 0.01);
        }
    }

    #[test]
    fn classification() {
        let w = |p| classify_pair_count(&StateFamily::Werner { p }).unwrap();
        assert_eq!((w(0.9), w(0.7), w(0.5)), (3, 2, 1));
        let t = |theta| classify_pair_count(&StateFamily::PureNonMax { theta }).unwrap();
        assert_eq!((t(PI / 7.0), t(PI / 12.0), t(PI / 20.0)), (3, 2, 1));
        assert_eq!(t(PI / 8.0), 3);
        assert!(classify_pair_count(&StateFamily::BellPsiPlus).is_err());
        assert!(classify_pair_count(&StateFamily::ColoredNoise { p: 0.9 }).is_err());
    }

    #[test]
    fn werner_band_edges() {
        let e = band_edges(FamilyKind::Werner, &EpsilonPolicy::limit()).unwrap();
        assert_abs_diff_eq!(e[0], 1.0 / 3.0, epsilon = 1e-6);
        assert_abs_diff_eq!(e[1], 0.57, epsilon = 0.01);
        assert_abs_diff_eq!(e[2], 0.80, epsilon = 0.01);
    }

    #[test]
    fn pure_band_edges() {
        let e = band_edges(FamilyKind::PureNonMax, &EpsilonPolicy::limit()).unwrap();
        assert!(e[0] < 1e-6);
        assert_abs_diff_eq!(e[1], PI / 17.0, epsilon = 0.02);
        assert_abs_diff_eq!(e[2], PI / 8.0, epsilon = 0.02);
        assert!(band_edges(FamilyKind::ColoredNoise, &EpsilonPolicy::limit()).is_err());
    }

    #[test]
    fn symmetric_choice_is_least_disturbing() {
        for t in [1.0 / 3.0 + 0.01, 0.44, 0.6353, 0.9] {
            assert!(symmetric_maximizer_gap(t, 200 * 200) <= 1e-6);
        }
    }

    #[test]
    fn run_schedule_counts_leading_detections() {
        let s = SharpnessSchedule::symmetric(&[0.73, 0.80, 1.0]).unwrap();
        let r = run_schedule(&StateFamily::BellPsiPlus, &s).unwrap();
        assert_eq!(r.detected_stages, 3);
        let s = SharpnessSchedule::symmetric(&[0.5, 0.9]).unwrap();
        assert_eq!(run_schedule(&StateFamily::BellPsiPlus, &s).unwrap().detected_stages, 0);
    }

    #[test]
    fn policy_validation() {
        assert!(EpsilonPolicy::symmetric_default().validate().is_ok());
        let bad = EpsilonPolicy {
            first_stage_slack: 0.1,
            ..EpsilonPolicy::limit()
        };
        assert!(bad.validate().is_err());
        let neg = EpsilonPolicy {
            later_stage_slack: -0.01,
            ..EpsilonPolicy::limit()
        };
        assert!(neg.validate().is_err());
        assert!(ScenarioKind::new(0, 3, StateFamily::BellPsiPlus).is_err());
        assert!(SharpnessSchedule::new(vec![(0.5, 1.1)]).is_err());
    }

    fn check_report(r: &ChainReport) {
        let w = WitnessOperator::for_family(&r.family);
        for (k, &(xi, lambda)) in r.schedule.stages().iter().enumerate() {
            let v = w.modulate(xi, lambda).unwrap().expectation(&r.states[k]).unwrap();
            assert!(v < 0.0, "stage {k}: {v}");
        }
        let last = r.states.last().unwrap();
        let full = w.modulate(1.0, 1.0).unwrap().expectation(last).unwrap();
        assert!(full >= -1e-12, "first failing stage: {full}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn werner_closed_form(p in 0.0f64..=1.0, xi in 0.01f64..=1.0, lambda in 0.01f64..=1.0) {
            let out = average_two_sided(&werner(p), xi, lambda).unwrap();
            let q = p * disturbance_factor(xi) * disturbance_factor(lambda) / 9.0;
            prop_assert!(out.trace_distance(&werner(q)).unwrap() < 1e-12);
        }

        #[test]
        fn bell_symmetric_count_is_stable(e1 in 0.0f64..=0.02, e in 0.0f64..=0.02, rounding: bool) {
            let policy = EpsilonPolicy { first_stage_slack: e1, later_stage_slack: e, paper_rounding: rounding };
            let r = greedy_symmetric(&StateFamily::BellPsiPlus, &policy).unwrap();
            prop_assert_eq!(r.detected_stages, 3);
            for w in r.thresholds.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            check_report(&r);
        }

        #[test]
        fn asymmetric_counts_are_stable(e1 in 0.0f64..=0.02, rounding: bool) {
            let policy = EpsilonPolicy { first_stage_slack: e1, later_stage_slack: 0.0, paper_rounding: rounding };
            for (alices, want) in [(1, 12), (2, 8), (3, 5), (4, 3)] {
                let r = greedy_asymmetric(alices, &StateFamily::BellPsiPlus, &policy).unwrap();
                prop_assert_eq!(r.detected_stages, want);
                check_report(&r);
            }
        }

        #[test]
        fn reports_are_consistent(p in 0.2f64..=1.0, theta in 0.05f64..0.78, rounding: bool) {
            let policy = EpsilonPolicy::symmetric_default().with_paper_rounding(rounding);
            for f in [StateFamily::Werner { p }, StateFamily::ColoredNoise { p }, StateFamily::PureNonMax { theta }] {
                let r = greedy_symmetric(&f, &policy).unwrap();
                check_report(&r);
                for w in r.thresholds.windows(2) {
                    prop_assert!(w[0] < w[1]);
                }
            }
        }
    }
}
