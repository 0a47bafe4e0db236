//! Mechanical evaluation of the local-existence parameter system.
//!
//! Every inequality is decided in exact rational arithmetic on the binary
//! values of the inputs; the reported `lhs`/`rhs` are the `f64` images.
//! Condition names are stable identifiers keyed to the estimate they come
//! from (`K2_gamma1`, `L_gamma2`, ...).

pub mod admissibility;
mod arith;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use admissibility::{
    g_admissibility, g_admissibility_with, mikhlin_check, mikhlin_check_with, AdmissibilityKind,
    AdmissibilityReport, MikhlinReport,
};
use arith::{to_f64, Arith, Params};

use crate::error::{Error, Result};

/// Gap below which a satisfied or violated condition is flagged as sitting on
/// its boundary.
pub const BOUNDARY_WARNING: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoremInstance {
    pub n: u32,
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    /// Slack realizing `γ^- = γ - ε`.
    pub epsilon: f64,
}

impl TheoremInstance {
    pub const DEFAULT_EPSILON: f64 = 1e-9;

    pub fn validate(&self) -> Result<()> {
        let reals = [
            self.r0, self.r1, self.r2, self.p0, self.p1, self.p2, self.gamma1, self.gamma2, self.gamma3, self.epsilon,
        ];
        if reals.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("theorem instance parameter"));
        }
        if self.n < 2 {
            return Err(Error::Precondition(format!("n must be >= 2, got {}", self.n)));
        }
        if [self.p0, self.p1, self.p2].iter().any(|&p| p <= 0.0) {
            return Err(Error::Precondition("Lebesgue exponents must be positive".into()));
        }
        if self.epsilon <= 0.0 {
            return Err(Error::Precondition(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if [self.gamma1, self.gamma2, self.gamma3].iter().any(|&g| g < 0.0) {
            return Err(Error::Precondition("dissipation orders must be non-negative".into()));
        }
        // γ = 0 is admitted (no dissipation); otherwise γ^- must stay positive
        if let Some(g) = [self.gamma1, self.gamma2, self.gamma3]
            .into_iter()
            .find(|&g| g > 0.0 && self.epsilon >= g)
        {
            return Err(Error::Precondition(format!("epsilon {} must be below gamma {g}", self.epsilon)));
        }
        Ok(())
    }

    pub fn gamma1_minus(&self) -> f64 {
        self.gamma1 - self.epsilon
    }

    pub fn gamma2_minus(&self) -> f64 {
        self.gamma2 - self.epsilon
    }

    pub fn gamma3_minus(&self) -> f64 {
        self.gamma3 - self.epsilon
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Relation {
    fn holds<T: PartialOrd>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub satisfied: bool,
    pub anchor: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub instance: TheoremInstance,
    pub conditions: Vec<Condition>,
    pub feasible: bool,
    /// Infimum of admissible `γ1^-`: the larger of the two γ1 right-hand sides.
    pub min_gamma1: f64,
    /// Infimum of admissible `γ2^-`.
    pub min_gamma2: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ConditionReport {
    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn violated(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.satisfied)
    }
}

/// Collects conditions, deciding each one exactly.
struct Ledger {
    conditions: Vec<Condition>,
    warnings: Vec<String>,
}

impl Ledger {
    fn new() -> Self {
        Ledger {
            conditions: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, lhs: BigRational, rel: Relation, rhs: BigRational, anchor: &str) {
        let satisfied = rel.holds(&lhs, &rhs);
        let gap = to_f64(&(lhs.clone() - rhs.clone())).abs();
        if gap < BOUNDARY_WARNING && !(gap == 0.0 && matches!(rel, Relation::Le | Relation::Ge)) {
            self.warnings.push(format!(
                "{name}: |lhs - rhs| = {gap:e} is below {BOUNDARY_WARNING:e}; verdict depends on the last bits"
            ));
        }
        self.conditions.push(Condition {
            name: name.to_string(),
            lhs: to_f64(&lhs),
            rhs: to_f64(&rhs),
            relation: rel,
            satisfied,
            anchor: anchor.to_string(),
        });
    }
}

fn rat(v: f64) -> BigRational {
    BigRational::real(v)
}

fn int(v: i64) -> BigRational {
    BigRational::int(v)
}

/// Evaluates the full hypothesis list of the general local-existence result.
/// Violations are reported, never returned as errors.
pub fn check_hypotheses(inst: &TheoremInstance) -> ConditionReport {
    let p: Params<BigRational> = Params::from_instance(inst);
    let mut l = Ledger::new();
    use Relation::*;

    l.push("r0_nonneg", p.r0.clone(), Ge, int(0), "hypothesis r_i >= 0");
    l.push("r1_nonneg", p.r1.clone(), Ge, int(0), "hypothesis r_i >= 0");
    l.push("r2_nonneg", p.r2.clone(), Ge, int(0), "hypothesis r_i >= 0");
    l.push("p0_ge_n", p.p0.clone(), Ge, p.n.clone(), "hypothesis p_i >= n");
    l.push("p1_ge_n", p.p1.clone(), Ge, p.n.clone(), "hypothesis p_i >= n");
    l.push("p2_ge_n", p.p2.clone(), Ge, p.n.clone(), "hypothesis p_i >= n");
    l.push("p0_le_p1", p.p0.clone(), Le, p.p1.clone(), "hypothesis p_0 <= p_1 (a_1 semigroup step)");
    l.push("p2_lt_2p0", p.p2.clone(), Lt, int(2) * p.p0.clone(), "hypothesis p_2 < 2 p_0");
    l.push("J1_semigroup_r0_lower", p.g3m.clone() - int(1), Le, p.r0.clone(), "semigroup estimate for J_1");
    l.push("J1_r0_le_gamma3", p.r0.clone(), Le, p.g3m.clone(), "J_1/K_1 assumption");
    l.push(
        "J1_r1_ge_gamma3",
        p.r1.clone(),
        Ge,
        p.g3m.clone(),
        "bound on u in H^{gamma_3^-, p_1} within J_1",
    );
    l.push(
        "J3_semigroup_r2",
        p.r2.clone() - int(1) + p.g3m.clone(),
        Le,
        p.r0.clone(),
        "semigroup estimate for J_3",
    );
    l.push("L_r2_le_r0", p.r2.clone(), Le, p.r0.clone(), "L-p'");
    l.push("K1_r0_lt_n_over_p1", p.r0.clone(), Lt, p.n_p1(), "K_1-p'");
    l.push(
        "K1_r0_lt_n_over_p0_plus_gamma3",
        p.r0.clone(),
        Lt,
        p.n_p0() + p.g3m.clone(),
        "J_2-p'' (ambiguous: label cited from the J_1/K_1 list)",
    );
    l.push("J2_r1_lower", int(2) * p.r1.clone(), Ge, p.r1_floor(), "J_2-p'' and J_2-p'-new");
    l.push("J3_r2_upper", p.r2.clone(), Lt, p.r2_ceiling(), "J_3-p' and r_2-extra");
    l.push("K2_gamma1", p.g1m.clone(), Gt, p.k2(), "K_2-gamma_1");
    l.push("K3_gamma1", p.g1m.clone(), Gt, p.k3(), "K_3-gamma_1");
    l.push("L_gamma2", p.g2m.clone(), Gt, p.l(), "L-gamma_2");

    let feasible = l.conditions.iter().all(|c| c.satisfied);
    ConditionReport {
        instance: *inst,
        feasible,
        min_gamma1: to_f64(&arith::max(p.k2(), p.k3())),
        min_gamma2: to_f64(&p.l()),
        conditions: l.conditions,
        warnings: l.warnings,
    }
}

/// Names of the conditions that constrain `γ1` or `γ2`.
pub const GAMMA_CONDITIONS: [&str; 3] = ["K2_gamma1", "K3_gamma1", "L_gamma2"];

/// True when every condition not involving `γ1`, `γ2` holds.
pub fn structural_hypotheses_hold(inst: &TheoremInstance) -> bool {
    check_hypotheses(inst)
        .conditions
        .iter()
        .filter(|c| !GAMMA_CONDITIONS.contains(&c.name.as_str()))
        .all(|c| c.satisfied)
}

/// Infimum admissible `(γ1, γ2)`: the γ right-hand sides shifted by `ε`.
/// The instance's own `γ1`, `γ2` are ignored.
pub fn min_gamma(inst: &TheoremInstance) -> (f64, f64) {
    let p: Params<f64> = Params::from_instance(inst);
    (p.k2().max(p.k3()) + inst.epsilon, p.l() + inst.epsilon)
}

/// Exponent `a1 = (r1 - r0 + n/p0 - n/p1) / γ1^-` of the weighted norm.
pub fn compute_a1(inst: &TheoremInstance) -> Result<f64> {
    let g1m = inst.gamma1_minus();
    if !(g1m > 0.0) {
        return Err(Error::Precondition(format!("gamma1 - epsilon must be positive, got {g1m}")));
    }
    let n = inst.n as f64;
    let a1 = (inst.r1 - inst.r0 + n / inst.p0 - n / inst.p1) / g1m;
    if !(0.0..1.0).contains(&a1) {
        return Err(Error::A1OutOfRange(a1));
    }
    Ok(a1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpecialCase {
    #[serde(rename = "thm_1_1")]
    Thm11,
    #[serde(rename = "thm_1_2")]
    Thm12,
}

impl FromStr for SpecialCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "thm_1_1" => Ok(SpecialCase::Thm11),
            "thm_1_2" => Ok(SpecialCase::Thm12),
            other => Err(Error::InvalidConfig(format!(
                "unknown special case '{other}' (expected thm_1_1 or thm_1_2)"
            ))),
        }
    }
}

impl fmt::Display for SpecialCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpecialCase::Thm11 => "thm_1_1",
            SpecialCase::Thm12 => "thm_1_2",
        })
    }
}

/// Parameters of the two specializations: `p = p0 = p1`, `q = p2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecialParams {
    pub n: u32,
    pub p: f64,
    pub q: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub epsilon: f64,
}

impl SpecialParams {
    /// The general instance the specialization reduces to:
    /// `r0 = r2 = 0, r1 = 2` for `thm_1_1`, and
    /// `r0 = n/(2p), r1 = 2, r2 = n/(2q)` for `thm_1_2`.
    pub fn to_instance(&self, kind: SpecialCase) -> TheoremInstance {
        let n = self.n as f64;
        let (r0, r2) = match kind {
            SpecialCase::Thm11 => (0.0, 0.0),
            SpecialCase::Thm12 => (n / (2.0 * self.p), n / (2.0 * self.q)),
        };
        TheoremInstance {
            n: self.n,
            r0,
            r1: 2.0,
            r2,
            p0: self.p,
            p1: self.p,
            p2: self.q,
            gamma1: self.gamma1,
            gamma2: self.gamma2,
            gamma3: self.gamma3,
            epsilon: self.epsilon,
        }
    }

    /// Closed-form `(min γ1^-, min γ2^-)` of the specialization.
    pub fn closed_form(&self, kind: SpecialCase) -> (f64, f64) {
        let n = self.n as f64;
        let g3m = self.gamma3 - self.epsilon;
        match kind {
            SpecialCase::Thm11 => (6.0 - g3m, 1.0 + n / self.p),
            SpecialCase::Thm12 => (6.0 - g3m - n / self.p, 1.0 + n / (2.0 * self.p)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialCaseReport {
    pub kind: SpecialCase,
    pub preconditions: Vec<Condition>,
    pub preconditions_hold: bool,
    pub closed_form_min_gamma1: f64,
    pub closed_form_min_gamma2: f64,
    /// Generic and closed-form minima agree to `1e-12`.
    pub closed_form_agrees: bool,
    /// Preconditions and every general condition hold.
    pub feasible_with_preconditions: bool,
    #[serde(flatten)]
    pub report: ConditionReport,
}

/// Instantiates a specialization, checks its own parameter domain and
/// delegates to [`check_hypotheses`].
pub fn check_special_cases(kind: SpecialCase, params: &SpecialParams) -> SpecialCaseReport {
    let inst = params.to_instance(kind);
    let report = check_hypotheses(&inst);
    let n = int(params.n as i64);
    let (p, q) = (rat(params.p), rat(params.q));
    let g3m = rat(params.gamma3) - rat(params.epsilon);
    use Relation::*;

    let mut l = Ledger::new();
    match kind {
        SpecialCase::Thm11 => {
            l.push("thm_1_1_p_ge_n", p.clone(), Ge, n.clone(), "p, q >= n");
            l.push("thm_1_1_q_ge_n", q.clone(), Ge, n, "p, q >= n");
            l.push("thm_1_1_2p_gt_q", int(2) * p, Gt, q, "2p > q");
            l.push("thm_1_1_gamma3_nonneg", rat(params.gamma3), Ge, int(0), "0 <= gamma_3 <= 1");
            l.push("thm_1_1_gamma3_le_1", rat(params.gamma3), Le, int(1), "0 <= gamma_3 <= 1");
        }
        SpecialCase::Thm12 => {
            let half_np = n.clone() / (int(2) * p.clone());
            let half_nq = n.clone() / (int(2) * q.clone());
            l.push("thm_1_2_p_ge_n", p.clone(), Ge, n.clone(), "p, q >= n");
            l.push("thm_1_2_q_ge_n", q.clone(), Ge, n, "p, q >= n");
            l.push(
                "thm_1_2_gamma3_lower",
                g3m.clone() - int(1),
                Le,
                half_np.clone(),
                "gamma_3^- - 1 <= n/2p <= gamma_3^-",
            );
            l.push(
                "thm_1_2_gamma3_upper",
                half_np.clone(),
                Le,
                g3m.clone(),
                "gamma_3^- - 1 <= n/2p <= gamma_3^-",
            );
            l.push(
                "thm_1_2_r2_shift",
                half_nq - int(1) + g3m,
                Le,
                half_np,
                "n/2q - 1 + gamma_3^- <= n/2p",
            );
            l.push("thm_1_2_q_lt_3p_over_2", q, Lt, int(3) * p / int(2), "q < 3p/2");
        }
    }
    let preconditions_hold = l.conditions.iter().all(|c| c.satisfied);
    let (cf1, cf2) = params.closed_form(kind);
    let closed_form_agrees = (cf1 - report.min_gamma1).abs() <= 1e-12 && (cf2 - report.min_gamma2).abs() <= 1e-12;
    let mut report = report;
    report.warnings.extend(l.warnings);
    SpecialCaseReport {
        kind,
        feasible_with_preconditions: preconditions_hold && report.feasible,
        preconditions: l.conditions,
        preconditions_hold,
        closed_form_min_gamma1: cf1,
        closed_form_min_gamma2: cf2,
        closed_form_agrees,
        report,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceEntry {
    /// `<stronger>_over_<weaker>`.
    pub name: String,
    /// `RHS(stronger) - RHS(weaker)` in `f64`.
    pub difference: f64,
    /// Closed-form difference in `f64`.
    pub closed_form: f64,
    /// Both routes agree exactly in rational arithmetic.
    pub exact_match: bool,
    /// Exact difference is non-negative.
    pub nonneg: bool,
}

/// Checks that each stronger γ1 bound dominates the weaker one it replaces,
/// comparing the direct difference of right-hand sides with its closed form.
pub fn dominance_audit(inst: &TheoremInstance) -> Vec<DominanceEntry> {
    let pf: Params<f64> = Params::from_instance(inst);
    let pq: Params<BigRational> = Params::from_instance(inst);
    let zero = BigRational::int(0);
    type Pair<T> = (fn(&Params<T>) -> T, fn(&Params<T>) -> T, fn(&Params<T>) -> T);
    let entries: [(&str, Pair<f64>, Pair<BigRational>); 4] = [
        (
            "K1_over_J1",
            (Params::k1, Params::j1, Params::k1_minus_j1_closed),
            (Params::k1, Params::j1, Params::k1_minus_j1_closed),
        ),
        (
            "K2_over_J2",
            (Params::k2, Params::j2, Params::k2_minus_j2_closed),
            (Params::k2, Params::j2, Params::k2_minus_j2_closed),
        ),
        (
            "K3_over_J3",
            (Params::k3, Params::j3, Params::k3_minus_j3_closed),
            (Params::k3, Params::j3, Params::k3_minus_j3_closed),
        ),
        (
            "K2_over_K1",
            (Params::k2, Params::k1, Params::k2_minus_k1_closed),
            (Params::k2, Params::k1, Params::k2_minus_k1_closed),
        ),
    ];
    entries
        .iter()
        .map(|(name, (sf, wf, cf), (sq, wq, cq))| {
            let exact = sq(&pq) - wq(&pq);
            DominanceEntry {
                name: name.to_string(),
                difference: sf(&pf) - wf(&pf),
                closed_form: cf(&pf),
                exact_match: exact == cq(&pq),
                nonneg: exact >= zero,
            }
        })
        .collect()
}

/// Samples instances satisfying every structural hypothesis (all
/// conditions except the γ1/γ2 ones), with `n ∈ {3, 4, 5}`.
///
/// Candidates are drawn inside the hypothesis region and then confirmed by
/// the exact checker; the rare float-boundary misses are rejected.
pub fn sample_structural_instances(count: usize, seed: u64) -> Vec<TheoremInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eps = TheoremInstance::DEFAULT_EPSILON;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.random_range(3..=5u32);
        let nf = n as f64;
        let p0 = rng.random_range(nf..3.0 * nf);
        let p1 = rng.random_range(p0..3.0 * nf);
        let p2 = rng.random_range(nf..2.0 * p0);
        let r0 = rng.random_range(0.0..nf / p1);
        let g3m = rng.random_range(r0..r0 + 1.0);
        let r1_min = g3m.max(1.0).max(0.5 * (1.0 + g3m - nf / p0 + 2.0 * nf / p1));
        let r1 = rng.random_range(r1_min..r1_min + 3.0);
        let r2_max = r0.min(r0 + 1.0 - g3m).min(nf / p2).min(2.0 * nf / p2 - nf / p0);
        let r2 = if r2_max > 0.0 { rng.random_range(0.0..r2_max) } else { 0.0 };
        let inst = TheoremInstance {
            n,
            r0,
            r1,
            r2,
            p0,
            p1,
            p2,
            gamma1: 10.0,
            gamma2: 10.0,
            gamma3: g3m + eps,
            epsilon: eps,
        };
        if structural_hypotheses_hold(&inst) {
            out.push(inst);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_instance() -> TheoremInstance {
        TheoremInstance {
            n: 3,
            r0: 0.0,
            r1: 2.0,
            r2: 0.0,
            p0: 3.0,
            p1: 3.0,
            p2: 3.0,
            gamma1: 5.5,
            gamma2: 2.5,
            gamma3: 1.0,
            epsilon: 1e-9,
        }
    }

    #[test]
    fn first_special_case_setting() {
        let r = check_hypotheses(&reference_instance());
        assert!(r.feasible, "{:?}", r.violated().collect::<Vec<_>>());
        assert!((r.min_gamma1 - (6.0 - (1.0 - 1e-9))).abs() < 1e-12);
        assert!((r.min_gamma2 - 2.0).abs() < 1e-15);
        for name in GAMMA_CONDITIONS {
            assert!(r.condition(name).is_some());
        }
    }

    #[test]
    fn second_special_case_setting() {
        let inst = TheoremInstance {
            r0: 0.5,
            r2: 0.5,
            gamma3: 1.3,
            ..reference_instance()
        };
        let r = check_hypotheses(&inst);
        let g3m = 1.3 - 1e-9;
        assert!((r.min_gamma1 - (6.0 - g3m - 1.0)).abs() < 1e-12);
        assert!((r.min_gamma2 - 1.5).abs() < 1e-15);
    }

    #[test]
    fn r0_above_gamma3_is_reported() {
        let inst = TheoremInstance {
            r0: 0.9,
            gamma3: 0.5,
            ..reference_instance()
        };
        let r = check_hypotheses(&inst);
        assert!(!r.condition("J1_r0_le_gamma3").unwrap().satisfied);
        assert!(!r.feasible);
    }

    #[test]
    fn boundary_equalities_are_exact() {
        // gamma3 = epsilon makes r0 = 0 = gamma3^- exactly
        let inst = TheoremInstance {
            gamma3: 1e-9,
            ..reference_instance()
        };
        let r = check_hypotheses(&inst);
        assert!(r.condition("J1_r0_le_gamma3").unwrap().satisfied);
        // and a strict inequality at equality fails
        let eps = 2f64.powi(-20);
        let inst = TheoremInstance {
            gamma1: 5.0 + 2.0 * eps,
            epsilon: eps,
            ..reference_instance()
        };
        let r = check_hypotheses(&inst);
        let k2 = r.condition("K2_gamma1").unwrap();
        assert_eq!(k2.lhs, k2.rhs);
        assert!(!k2.satisfied);
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn min_gamma_adds_epsilon() {
        let (g1, g2) = min_gamma(&reference_instance());
        assert!((g1 - (6.0 - 1.0 + 2e-9)).abs() < 1e-12);
        assert!((g2 - (2.0 + 1e-9)).abs() < 1e-12);
    }

    #[test]
    fn min_gamma_collapses_for_equal_parameters() {
        // r0 = r1 = r2 = 0.5, p0 = p1 = p2 = 4, n = 3, gamma3 = 1:
        // K2 = r1 - g3m = -0.5 + eps; K3 = 1 - r1 - g3m + n/p = 0.25 + eps
        let inst = TheoremInstance {
            n: 3,
            r0: 0.5,
            r1: 0.5,
            r2: 0.5,
            p0: 4.0,
            p1: 4.0,
            p2: 4.0,
            gamma1: 1.0,
            gamma2: 1.0,
            gamma3: 1.0,
            epsilon: 1e-9,
        };
        let (g1, g2) = min_gamma(&inst);
        assert!((g1 - (0.25 + 2e-9)).abs() < 1e-12);
        assert!((g2 - (1.25 + 1e-9)).abs() < 1e-12);
    }

    #[test]
    fn k3_bound_falls_twice_as_fast_in_r2() {
        let base = TheoremInstance {
            r1: 0.5,
            r0: 0.5,
            r2: 0.1,
            p2: 5.0,
            ..reference_instance()
        };
        let bumped = TheoremInstance { r2: 0.3, ..base };
        let k3 = |i: &TheoremInstance| check_hypotheses(i).condition("K3_gamma1").unwrap().rhs;
        assert!((k3(&base) - k3(&bumped) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn a1_examples() {
        let inst = TheoremInstance {
            r0: 0.5,
            gamma1: 5.0 + 1e-9,
            ..reference_instance()
        };
        assert!((compute_a1(&inst).unwrap() - 0.3).abs() < 1e-12);
        let flat = TheoremInstance { r1: 0.0, ..reference_instance() };
        assert_eq!(compute_a1(&flat).unwrap(), 0.0);
        let g = 5.5;
        assert!((compute_a1(&reference_instance()).unwrap() - 2.0 / (g - 1e-9)).abs() < 1e-15);
        let steep = TheoremInstance { gamma1: 1.5, ..reference_instance() };
        assert!(matches!(compute_a1(&steep), Err(Error::A1OutOfRange(_))));
        let negative = TheoremInstance { r0: 1.0, r1: 0.0, ..reference_instance() };
        assert!(matches!(compute_a1(&negative), Err(Error::A1OutOfRange(_))));
    }

    #[test]
    fn special_case_preconditions() {
        let params = SpecialParams {
            n: 3,
            p: 3.0,
            q: 6.0,
            gamma1: 6.0,
            gamma2: 3.0,
            gamma3: 1.0,
            epsilon: 1e-9,
        };
        let r = check_special_cases(SpecialCase::Thm11, &params);
        assert!(!r.preconditions.iter().find(|c| c.name == "thm_1_1_2p_gt_q").unwrap().satisfied);
        assert!(!r.preconditions_hold);

        let r = check_special_cases(SpecialCase::Thm12, &SpecialParams { p: 4.0, q: 4.0, gamma3: 1.2, ..params });
        assert!((r.report.min_gamma1 - (6.0 - (1.2 - 1e-9) - 0.75)).abs() < 1e-12);
        assert!(r.closed_form_agrees);
        assert!(!r.preconditions_hold, "n/2q - 1 + gamma3^- exceeds n/2p here");
    }

    #[test]
    fn dominance_on_reference_instance() {
        for e in dominance_audit(&reference_instance()) {
            assert!(e.nonneg && e.exact_match, "{e:?}");
        }
    }

    #[test]
    fn dominance_boundary_is_exactly_zero() {
        let inst = TheoremInstance {
            r0: 0.5,
            gamma3: 0.5 + 1e-9,
            ..reference_instance()
        };
        let k1j1 = &dominance_audit(&inst)[0];
        assert_eq!(k1j1.name, "K1_over_J1");
        assert!(k1j1.exact_match);
        assert!(k1j1.difference.abs() < 1e-15);
    }

    #[test]
    fn json_shape() {
        let r = check_hypotheses(&reference_instance());
        let v = serde_json::to_value(&r).unwrap();
        for key in ["instance", "conditions", "feasible", "min_gamma1", "min_gamma2"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let c = &v["conditions"][0];
        for key in ["name", "lhs", "rhs", "relation", "satisfied", "anchor"] {
            assert!(c.get(key).is_some(), "{key}");
        }
        assert_eq!(v["conditions"].as_array().unwrap().iter().find(|c| c["name"] == "L_gamma2").unwrap()["relation"], ">");
    }
}
