//! Symbolic execution of the averaging argument on root data.
//!
//! Measures are not represented. A run tracks which coarse root subgroups
//! the limiting measure is known to be invariant under, whether it is
//! invariant under the full Cartan subgroup, and at each step a Cartan
//! element `s` with an exponent functional positive on it.
//!
//! The pipeline, after moving `lambda` by a Weyl element so that it pairs
//! nonzero with the first fundamental coweight:
//!
//! 1. average over `U`, the positive roots spanned by `a_2, ..., a_l`, with
//!    `s_1` centralizing `U`;
//! 2. average over `A`;
//! 3. add the negative of every invariant class;
//! 4. keep only classes commuting with `U' = g^{b'}`;
//! 5. average over `U'` with `s_2` centralizing it;
//! 6. average over `A`;
//! 7. add negatives again;
//! 8. close under root addition.
//!
//! The run succeeds when the final set is all of the roots.

mod trace;

use num::{Signed, Zero};
use rand::Rng;

use crate::dims::GroupSpec;
use crate::error::{Error, Result};
use crate::linalg::Sign;
use crate::rational::{self, Vector};
use crate::roots::{build_root_system, CartanElement, Functional, RootSystem, RootSystemType};
use crate::rootset::RootSet;
use crate::weyl::{self, WeylElement};

pub use trace::{parse_trace, write_csv, write_json, write_text, TraceFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    AverageOverU,
    AverageOverA,
    RatnerNegation,
    AdditionClosure,
    CommutationTransfer,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::AverageOverU => "AverageOverU",
            Rule::AverageOverA => "AverageOverA",
            Rule::RatnerNegation => "RatnerNegation",
            Rule::AdditionClosure => "AdditionClosure",
            Rule::CommutationTransfer => "CommutationTransfer",
        }
    }

    /// Tag naming the fact the rule models.
    pub fn citation(self) -> &'static str {
        match self {
            Rule::AverageOverU => "unipotent-averaging-keeps-exponent",
            Rule::AverageOverA => "cartan-averaging-keeps-invariance",
            Rule::RatnerNegation => "opposite-root-invariance",
            Rule::AdditionClosure => "generated-subgroup",
            Rule::CommutationTransfer => "commuting-subgroups-survive-averaging",
        }
    }
}

impl std::str::FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Rule::AverageOverU,
            Rule::AverageOverA,
            Rule::RatnerNegation,
            Rule::AdditionClosure,
            Rule::CommutationTransfer,
        ]
        .into_iter()
        .find(|r| r.as_str() == s)
        .ok_or_else(|| Error::Parse(format!("unknown rule {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InvarianceSet {
    pub roots: RootSet,
    pub a_invariant: bool,
}

impl InvarianceSet {
    pub fn empty() -> Self {
        InvarianceSet {
            roots: RootSet::empty(),
            a_invariant: false,
        }
    }

    pub fn classes(&self, rs: &RootSystem) -> Vec<usize> {
        rs.classes_in(&self.roots)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AveragingStep {
    pub rule: Rule,
    pub citation: String,
    /// Roots of the subgroup averaged over; empty for rules that average
    /// over nothing or over `A`.
    pub subgroup: RootSet,
    /// Invariance after the step.
    pub state: InvarianceSet,
    pub witness: CartanElement,
    pub exponent: Functional,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AveragingTrace {
    pub ty: RootSystemType,
    pub lambda: Functional,
    pub base_change: WeylElement,
    pub beta_hat: usize,
    pub beta_prime: usize,
    pub root_string: Vec<usize>,
    pub steps: Vec<AveragingStep>,
    pub final_state: InvarianceSet,
}

impl AveragingTrace {
    /// `w(lambda)`, the exponent used at every step.
    pub fn moved_lambda(&self) -> Functional {
        self.base_change.apply(&self.lambda)
    }

    pub fn reaches_all_roots(&self, rs: &RootSystem) -> bool {
        self.final_state.roots == rs.all_roots()
    }
}

fn require_rank_two(rs: &RootSystem) -> Result<()> {
    if rs.rank() < 2 {
        return Err(Error::Precondition(format!(
            "averaging needs rank >= 2, {} has rank {}",
            rs.ty(),
            rs.rank()
        )));
    }
    Ok(())
}

/// Weyl element `w` with `w(lambda)` outside the span of `a_2, ..., a_l`.
pub fn choose_base(rs: &RootSystem, lambda: &Functional) -> Result<WeylElement> {
    rs.check_dim(&lambda.coords)?;
    if rs.is_zero_functional(lambda) {
        return Err(Error::Degenerate("lambda vanishes on the Cartan subspace".into()));
    }
    weyl::weyl_orbit_search(rs, lambda, |g| !rs.first_coweight_pairing(g).is_zero())
}

/// `b^`: the highest root, or the second highest for the families whose
/// highest root has coefficient 2 on `a_1`. Checks that `b^ + a_j` is not a
/// root for `j >= 2` and that a root string from `a_1` reaches it.
pub fn select_beta_hat(rs: &RootSystem) -> Result<usize> {
    require_rank_two(rs)?;
    let b = if rs.ty().family().uses_second_highest() {
        rs.second_highest_root()?
    } else {
        rs.highest_root()
    };
    if let Some(j) = (1..rs.rank()).find(|&j| rs.sum(b, rs.simple(j)).is_some()) {
        return Err(Error::Orientation(format!(
            "b^ + a_{} is a root in {}",
            j + 1,
            rs.ty()
        )));
    }
    if rs.root_string_from_first(b).is_none() {
        return Err(Error::Orientation(format!(
            "no root string from a_1 to b^ in {}",
            rs.ty()
        )));
    }
    Ok(b)
}

/// Chain from `a_1` to `to` adding one of `a_2, ..., a_l` at a time.
pub fn root_string(rs: &RootSystem, from: usize, to: usize) -> Result<Vec<usize>> {
    if from != rs.simple(0) {
        return Err(Error::Precondition("root strings start at a_1".into()));
    }
    rs.root_string_from_first(to).ok_or_else(|| Error::NoRootString {
        from: rs.fmt_coeffs(from),
        to: rs.fmt_coeffs(to),
    })
}

/// `s_1` with `a_j(s_1) = 0` for `j >= 2` and `lambda(s_1) > 0`.
pub fn select_s1(rs: &RootSystem, lambda: &Functional) -> Result<CartanElement> {
    rs.check_dim(&lambda.coords)?;
    if rs.first_coweight_pairing(lambda).is_zero() {
        return Err(Error::Precondition(
            "lambda lies in the span of a_2, ..., a_l; choose the base first".into(),
        ));
    }
    let mut constraints: Vec<(Functional, Sign)> = (1..rs.rank())
        .map(|j| (Functional::from(rs.root(rs.simple(j))), Sign::Zero))
        .collect();
    constraints.push((lambda.clone(), Sign::Positive));
    Ok(rs
        .feasible_cartan(&constraints)
        .expect("the coweight line meets lambda > 0"))
}

fn proportional_on_cartan(rs: &RootSystem, root: usize, f: &Functional) -> bool {
    let c: Vector = rs.coefficients(root).iter().map(|&x| rational::q(x)).collect();
    let fc = rs.pi_coords(&f.coords);
    rational::is_zero(&fc) || rational::proportionality(&c, &fc).is_some()
}

/// `s_2` with `b'(s_2) = 0` and `lambda2(s_2) > 0`.
pub fn select_s2(rs: &RootSystem, beta_prime: usize, lambda2: &Functional) -> Result<CartanElement> {
    rs.check_dim(&lambda2.coords)?;
    if proportional_on_cartan(rs, beta_prime, lambda2) {
        return Err(Error::InfeasibleSelection(format!(
            "exponent is proportional to the root {}",
            rs.fmt_coeffs(beta_prime)
        )));
    }
    let constraints = [
        (Functional::from(rs.root(beta_prime)), Sign::Zero),
        (lambda2.clone(), Sign::Positive),
    ];
    rs.feasible_cartan(&constraints).ok_or_else(|| {
        Error::InfeasibleSelection("no Cartan element in ker b' is positive on lambda".into())
    })
}

/// `b'`: `b^` unless the exponent is proportional to it, then `a_1`.
pub fn select_beta_prime(rs: &RootSystem, beta_hat: usize, lambda: &Functional) -> usize {
    if proportional_on_cartan(rs, beta_hat, lambda) {
        rs.simple(0)
    } else {
        beta_hat
    }
}

/// Positive roots in the span of `a_2, ..., a_l`.
pub fn levi_unipotent(rs: &RootSystem) -> RootSet {
    let rest: Vec<usize> = (1..rs.rank()).collect();
    rs.positive_roots()
        .iter()
        .filter(|&i| rs.in_simple_span(i, &rest))
        .collect()
}

fn commutes(rs: &RootSystem, a: usize, b: usize) -> bool {
    a != rs.negation(b) && rs.sum(a, b).is_none()
}

/// Classes of `set` each of whose roots commutes with every root of `with`.
fn commuting_part(rs: &RootSystem, set: &RootSet, with: &RootSet) -> RootSet {
    let keep: Vec<usize> = rs
        .classes_in(set)
        .into_iter()
        .filter(|&c| {
            rs.classes()[c]
                .members
                .iter()
                .all(|&g| with.iter().all(|b| commutes(rs, g, b)))
        })
        .collect();
    rs.set_from_classes(&keep)
}

fn negatives(rs: &RootSystem, set: &RootSet) -> RootSet {
    set.iter().map(|i| rs.negation(i)).collect()
}

/// Applies one rule, checking its side conditions against the current
/// state and the step witness.
fn apply_rule(
    rs: &RootSystem,
    rule: Rule,
    subgroup: &RootSet,
    state: &InvarianceSet,
    witness: &CartanElement,
    exponent: &Functional,
) -> std::result::Result<InvarianceSet, String> {
    if !exponent.eval(witness).is_positive() {
        return Err("exponent is not positive on the witness".into());
    }
    let killed = |set: &RootSet| {
        set.iter()
            .all(|i| Functional::from(rs.root(i)).eval(witness).is_zero())
    };
    match rule {
        Rule::AverageOverU => {
            if subgroup.is_empty() || !rs.is_closed(subgroup) || !rs.is_saturated(subgroup) {
                return Err("subgroup roots are not a saturated closed set".into());
            }
            if !killed(subgroup) {
                return Err("witness does not centralize the subgroup".into());
            }
            if commuting_part(rs, &state.roots, subgroup) != state.roots {
                return Err("current invariance does not commute with the subgroup".into());
            }
            Ok(InvarianceSet {
                roots: state.roots.union(subgroup),
                a_invariant: false,
            })
        }
        Rule::AverageOverA => {
            if !subgroup.is_empty() {
                return Err("averaging over A takes no root subgroup".into());
            }
            Ok(InvarianceSet {
                roots: state.roots,
                a_invariant: true,
            })
        }
        Rule::RatnerNegation => {
            if !state.a_invariant {
                return Err("negation requires A-invariance".into());
            }
            Ok(InvarianceSet {
                roots: state.roots.union(&negatives(rs, &state.roots)),
                a_invariant: true,
            })
        }
        Rule::CommutationTransfer => {
            if subgroup.is_empty() || !rs.is_saturated(subgroup) {
                return Err("commutation target must be a nonempty saturated set".into());
            }
            if !killed(subgroup) {
                return Err("witness does not centralize the subgroup".into());
            }
            Ok(InvarianceSet {
                roots: commuting_part(rs, &state.roots, subgroup),
                a_invariant: state.a_invariant,
            })
        }
        Rule::AdditionClosure => Ok(InvarianceSet {
            roots: rs.closure(&state.roots),
            a_invariant: state.a_invariant,
        }),
    }
}

/// The fixed rule sequence of a run.
pub const PIPELINE: [Rule; 8] = [
    Rule::AverageOverU,
    Rule::AverageOverA,
    Rule::RatnerNegation,
    Rule::CommutationTransfer,
    Rule::AverageOverU,
    Rule::AverageOverA,
    Rule::RatnerNegation,
    Rule::AdditionClosure,
];

/// Index of the first step witnessed by `s_2`.
const SECOND_STAGE: usize = 3;

fn pipeline_subgroups(rs: &RootSystem, beta_prime: usize) -> [RootSet; 8] {
    let u = levi_unipotent(rs);
    let u2 = rs.class_roots(rs.class_of(beta_prime));
    let e = RootSet::empty();
    [u, e, e, u2, u2, e, e, e]
}

/// Runs the pipeline for a nonzero `lambda` on an irreducible system of
/// rank at least 2.
pub fn run_averaging(rs: &RootSystem, lambda: &Functional) -> Result<AveragingTrace> {
    require_rank_two(rs)?;
    let base_change = choose_base(rs, lambda)?;
    let lambda0 = base_change.apply(lambda);
    let beta_hat = select_beta_hat(rs)?;
    let string = root_string(rs, rs.simple(0), beta_hat)?;
    let beta_prime = select_beta_prime(rs, beta_hat, &lambda0);
    let s1 = select_s1(rs, &lambda0)?;
    let s2 = select_s2(rs, beta_prime, &lambda0)?;
    let subgroups = pipeline_subgroups(rs, beta_prime);

    let mut state = InvarianceSet::empty();
    let mut steps = Vec::with_capacity(PIPELINE.len());
    for (k, (&rule, subgroup)) in PIPELINE.iter().zip(&subgroups).enumerate() {
        let s = if k < SECOND_STAGE { &s1 } else { &s2 };
        state = apply_rule(rs, rule, subgroup, &state, s, &lambda0).map_err(|reason| {
            Error::SideCondition {
                step: k,
                citation: rule.citation().into(),
                reason,
            }
        })?;
        steps.push(AveragingStep {
            rule,
            citation: rule.citation().into(),
            subgroup: *subgroup,
            state,
            witness: s.clone(),
            exponent: lambda0.clone(),
        });
    }
    if state.roots != rs.all_roots() {
        return Err(Error::Falsification(format!(
            "averaging on {} ends with {} of {} roots",
            rs.ty(),
            state.roots.len(),
            rs.num_roots()
        )));
    }
    Ok(AveragingTrace {
        ty: rs.ty(),
        lambda: lambda.clone(),
        base_change,
        beta_hat,
        beta_prime,
        root_string: string,
        steps,
        final_state: state,
    })
}

/// Runs the pipeline on each simple ideal of a semisimple product, given
/// the restriction of the exponent to each ideal's Cartan subspace.
///
/// Compact ideals and ideals where the restriction vanishes are skipped
/// (`None`). A nonzero restriction to a rank-one ideal is an error, as for
/// [`run_averaging`].
pub fn run_averaging_product(
    group: &GroupSpec,
    lambdas: &[Functional],
) -> Result<Vec<Option<AveragingTrace>>> {
    if lambdas.len() != group.factors.len() {
        return Err(Error::DimensionMismatch {
            expected: group.factors.len(),
            got: lambdas.len(),
        });
    }
    group
        .factors
        .iter()
        .zip(lambdas)
        .map(|(&(ty, compact), lambda)| {
            let rs = build_root_system(ty)?;
            rs.check_dim(&lambda.coords)?;
            if compact || rs.is_zero_functional(lambda) {
                return Ok(None);
            }
            run_averaging(&rs, lambda).map(Some)
        })
        .collect()
}

/// Nonzero functional with random small rational ambient coordinates.
pub fn random_lambda<R: Rng>(rs: &RootSystem, rng: &mut R) -> Functional {
    loop {
        let coords: Vector = (0..rs.ambient_dim())
            .map(|_| rational::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=6)))
            .collect();
        let f = Functional::new(coords);
        if !rs.is_zero_functional(&f) {
            return f;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayOutcome {
    Valid,
    /// `step` is `None` when the header (base change, `b^`, root string or
    /// `b'`) is at fault.
    Invalid { step: Option<usize>, reason: String },
}

impl ReplayOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, ReplayOutcome::Valid)
    }
}

fn header_check(rs: &RootSystem, t: &AveragingTrace) -> std::result::Result<(), String> {
    if rs.is_zero_functional(&t.lambda) {
        return Err("initial lambda is zero".into());
    }
    if t.base_change.word.iter().any(|&j| j >= rs.rank()) {
        return Err("base change word has an out-of-range letter".into());
    }
    let w = WeylElement::from_word(rs, t.base_change.word.clone());
    let lambda0 = w.apply(&t.lambda);
    if rs.first_coweight_pairing(&lambda0).is_zero() {
        return Err("moved lambda lies in the span of a_2, ..., a_l".into());
    }
    let expected_hat = select_beta_hat(rs).map_err(|e| e.to_string())?;
    if t.beta_hat != expected_hat {
        return Err("b^ is not the root prescribed for this type".into());
    }
    let rest: Vec<usize> = (1..rs.rank()).map(|j| rs.simple(j)).collect();
    let string_ok = t.root_string.first() == Some(&rs.simple(0))
        && t.root_string.last() == Some(&t.beta_hat)
        && t.root_string
            .windows(2)
            .all(|p| rest.iter().any(|&a| rs.sum(p[0], a) == Some(p[1])));
    if !string_ok {
        return Err("root string is not a chain from a_1 to b^ by a_2, ..., a_l".into());
    }
    if t.beta_prime != select_beta_prime(rs, t.beta_hat, &lambda0) {
        return Err("b' does not follow the selection rule".into());
    }
    if proportional_on_cartan(rs, t.beta_prime, &lambda0) {
        return Err("b' is proportional to the exponent".into());
    }
    Ok(())
}

/// Re-checks every side condition of a trace from the empty initial state.
pub fn replay(t: &AveragingTrace) -> ReplayOutcome {
    let rs = match build_root_system(t.ty) {
        Ok(rs) => rs,
        Err(e) => {
            return ReplayOutcome::Invalid {
                step: None,
                reason: e.to_string(),
            }
        }
    };
    replay_with(&rs, t)
}

/// [`replay`] against an already built system of the trace's type.
pub fn replay_with(rs: &RootSystem, t: &AveragingTrace) -> ReplayOutcome {
    let invalid = |step: Option<usize>, reason: String| ReplayOutcome::Invalid { step, reason };
    if rs.ty() != t.ty {
        return invalid(None, "trace type differs from the root system".into());
    }
    if let Err(reason) = header_check(rs, t) {
        return invalid(None, reason);
    }
    let lambda0 = rs.pi_coords(&WeylElement::from_word(rs, t.base_change.word.clone()).apply(&t.lambda).coords);
    let subgroups = pipeline_subgroups(rs, t.beta_prime);
    let mut state = InvarianceSet::empty();
    for (k, step) in t.steps.iter().enumerate() {
        if k >= PIPELINE.len() || step.rule != PIPELINE[k] {
            return invalid(Some(k), format!("unexpected rule {}", step.rule.as_str()));
        }
        if step.citation != step.rule.citation() {
            return invalid(Some(k), "citation does not match the rule".into());
        }
        if step.subgroup != subgroups[k] {
            return invalid(Some(k), "subgroup differs from the pipeline".into());
        }
        if rs.pi_coords(&step.exponent.coords) != lambda0 {
            return invalid(Some(k), "exponent is not the moved lambda".into());
        }
        if k == 0 && (1..rs.rank()).any(|j| !Functional::from(rs.root(rs.simple(j))).eval(&step.witness).is_zero()) {
            return invalid(Some(k), "s_1 is not on the first coweight line".into());
        }
        match apply_rule(rs, step.rule, &step.subgroup, &state, &step.witness, &step.exponent) {
            Ok(next) if next == step.state => state = next,
            Ok(_) => return invalid(Some(k), "recorded invariance differs from recomputation".into()),
            Err(reason) => return invalid(Some(k), reason),
        }
    }
    if t.steps.len() != PIPELINE.len() {
        return invalid(Some(t.steps.len()), "trace ends early".into());
    }
    if state != t.final_state {
        return invalid(Some(t.steps.len()), "final state differs from the last step".into());
    }
    if state.roots != rs.all_roots() {
        return invalid(Some(t.steps.len()), "final invariance is not all roots".into());
    }
    ReplayOutcome::Valid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_ints;
    use crate::roots::{root_system, Family};

    #[test]
    fn a2_generic_run() {
        let rs = root_system(Family::A, 2).unwrap();
        let lambda = Functional::new(from_ints(&[3, 1, -2]));
        let t = run_averaging(&rs, &lambda).unwrap();
        assert!(t.reaches_all_roots(&rs));
        assert_eq!(t.steps.len(), 8);
        assert_eq!(replay(&t), ReplayOutcome::Valid);
    }

    #[test]
    fn product_runs_skip_compact_and_silent_ideals() {
        let g: GroupSpec = "A2,B2*,C3".parse().unwrap();
        let lambdas = [
            Functional::new(from_ints(&[1, 0, 0])),
            Functional::new(from_ints(&[1, 2])),
            Functional::new(from_ints(&[0, 0, 0])),
        ];
        let runs = run_averaging_product(&g, &lambdas).unwrap();
        assert!(runs[0].as_ref().unwrap().final_state.roots.len() == 6);
        assert!(runs[1].is_none() && runs[2].is_none());
        assert!(matches!(
            run_averaging_product(&g, &lambdas[..2]),
            Err(Error::DimensionMismatch { .. })
        ));
        let rank_one: GroupSpec = "A2,A1".parse().unwrap();
        let lambdas = [Functional::new(from_ints(&[0, 0, 0])), Functional::new(from_ints(&[1, -1]))];
        assert!(run_averaging_product(&rank_one, &lambdas).is_err());
    }

    #[test]
    fn zero_lambda_is_degenerate() {
        let rs = root_system(Family::A, 2).unwrap();
        let zero = Functional::new(from_ints(&[1, 1, 1]));
        assert!(matches!(choose_base(&rs, &zero), Err(Error::Degenerate(_))));
    }

    #[test]
    fn a2_choose_base_from_second_simple_root() {
        let rs = root_system(Family::A, 2).unwrap();
        let f = Functional::from(rs.root(rs.simple(1)));
        let w = choose_base(&rs, &f).unwrap();
        assert_eq!(w.word.len(), 1);
        assert!(!rs.first_coweight_pairing(&w.apply(&f)).is_zero());
    }

    #[test]
    fn s2_selection() {
        let rs = root_system(Family::C, 3).unwrap();
        let bh = select_beta_hat(&rs).unwrap();
        let a1 = Functional::from(rs.root(rs.simple(0)));
        let s = select_s2(&rs, bh, &a1).unwrap();
        assert!(Functional::from(rs.root(bh)).eval(&s).is_zero());
        assert!(a1.eval(&s).is_positive());
        let tripled = Functional::from(rs.root(bh)).scaled(&rational::q(3));
        assert!(matches!(select_s2(&rs, bh, &tripled), Err(Error::InfeasibleSelection(_))));
    }

    #[test]
    fn tampering_is_detected() {
        let rs = root_system(Family::B, 3).unwrap();
        let t = run_averaging(&rs, &Functional::new(from_ints(&[2, -1, 5]))).unwrap();
        let mut bad = t.clone();
        let victim = bad.steps[4].state.roots.iter().next().unwrap();
        bad.steps[4].state.roots.remove(victim);
        assert!(matches!(replay(&bad), ReplayOutcome::Invalid { step: Some(4), .. }));

        let mut forged = t;
        forged.steps[1].witness = CartanElement::new(rational::scale(&rational::q(-1), &forged.steps[1].witness.coords));
        assert!(matches!(replay(&forged), ReplayOutcome::Invalid { step: Some(1), .. }));
    }
}
