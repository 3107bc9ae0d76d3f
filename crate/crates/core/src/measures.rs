//! Per-rule interestingness measures and rule-set diversity.
//!
//! Every per-rule measure is a function of the contingency counts
//! (n, n_a, n_b, n_ab): the transaction count, the antecedent and consequent
//! supports, and the joint support. Writing P_x for the relative frequencies
//! and ¬b for "consequent absent":
//!
//! | acronym | formula                                              |
//! |---------|------------------------------------------------------|
//! | SUP     | P_ab                                                 |
//! | CONF    | P_ab / P_a                                           |
//! | LIFT    | P_ab / (P_a · P_b)                                   |
//! | GAN     | 2 · CONF - 1                                         |
//! | PS      | n · (P_ab - P_a · P_b)                               |
//! | LOE     | (CONF - P_b) / P_¬b                                  |
//! | ZHANG   | (P_ab - P_a · P_b) / max(P_ab · P_¬b, P_b · P_a¬b)   |
//! | IMPIND  | √n · (P_a¬b - P_a · P_¬b) / √(P_a · P_¬b)            |
//! | LC      | (P_ab - P_a¬b) / P_b                                 |
//! | CONV    | (P_a · P_¬b) / P_a¬b                                 |
//! | IMPINT  | Pr[Poisson(n · P_a · P_¬b) ≥ n_a¬b]                  |
//! | SEB     | P_ab / P_a¬b                                         |
//! | BF      | (P_ab · P_¬b) / (P_b · P_a¬b)                        |
//!
//! Division conventions: a zero denominator yields +∞ or -∞ by the sign of
//! the numerator; when the numerator is zero as well (which only happens at
//! exact independence, P_b ∈ {0, 1}), the measure takes its independence
//! value (1 for LIFT/CONV/BF, 0 for the rest). No input produces NaN.
//!
//! Rule-set diversity: entropy is computed over the rule supports normalized
//! to a probability distribution, optionally divided by the number of rules;
//! variance is the (n-1)-denominator sample variance of the raw supports.

use thiserror::Error;

use crate::bitmatrix::{BitMatrix, BitMatrixError};
use crate::Float;

#[derive(Debug, Error, PartialEq)]
pub enum MeasureError {
    #[error("inconsistent contingency counts: {0}")]
    InvalidCounts(String),
    #[error("antecedent count must be positive")]
    EmptyAntecedent,
    #[error("item index {0} out of range")]
    UnknownItem(usize),
    #[error("rule sides must be non-empty")]
    EmptySide,
    #[error("diversity values must sum to a positive total")]
    ZeroTotal,
    #[error("need at least {needed} values, found {found}")]
    TooFewValues { needed: usize, found: usize },
    #[error("diversity value {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error(transparent)]
    BitMatrix(#[from] BitMatrixError),
}

/// Sufficient statistics for every per-rule measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContingencyCounts {
    n: usize,
    n_a: usize,
    n_b: usize,
    n_ab: usize,
}

impl ContingencyCounts {
    pub fn new(n: usize, n_a: usize, n_b: usize, n_ab: usize) -> Result<Self, MeasureError> {
        if n_a > n || n_b > n {
            return Err(MeasureError::InvalidCounts(format!(
                "marginals ({n_a}, {n_b}) exceed n = {n}"
            )));
        }
        if n_ab > n_a.min(n_b) {
            return Err(MeasureError::InvalidCounts(format!(
                "joint count {n_ab} exceeds min({n_a}, {n_b})"
            )));
        }
        Ok(ContingencyCounts { n, n_a, n_b, n_ab })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn n_ab(&self) -> usize {
        self.n_ab
    }

    /// Counterexample count: antecedent present, consequent absent.
    pub fn n_a_notb(&self) -> usize {
        self.n_a - self.n_ab
    }

    pub fn p_a<T: Float>(&self) -> T {
        T::cast(self.n_a) / T::cast(self.n)
    }

    pub fn p_b<T: Float>(&self) -> T {
        T::cast(self.n_b) / T::cast(self.n)
    }

    pub fn p_ab<T: Float>(&self) -> T {
        T::cast(self.n_ab) / T::cast(self.n)
    }
}

/// Count the contingency statistics of a rule against a bit matrix with
/// column intersections. `n` is the matrix row count; pass an unpruned
/// matrix, since popcounts run over live rows only.
pub fn contingency(
    b: &BitMatrix,
    antecedent: &[usize],
    consequent: &[usize],
) -> Result<ContingencyCounts, MeasureError> {
    if antecedent.is_empty() || consequent.is_empty() {
        return Err(MeasureError::EmptySide);
    }
    for &i in antecedent.iter().chain(consequent) {
        if i >= b.n_cols() {
            return Err(MeasureError::UnknownItem(i));
        }
    }
    let mut union: Vec<usize> = antecedent.iter().chain(consequent).copied().collect();
    union.sort_unstable();
    union.dedup();
    let n_a = b.support_count(antecedent)?;
    let n_b = b.support_count(consequent)?;
    let n_ab = b.support_count(&union)?;
    ContingencyCounts::new(b.n_rows(), n_a, n_b, n_ab)
}

/// The thirteen measures, in the fixed reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Sup,
    Conf,
    Lift,
    Gan,
    Ps,
    Loe,
    Zhang,
    Impind,
    Lc,
    Conv,
    Impint,
    Seb,
    Bf,
}

impl Measure {
    pub const ALL: [Measure; 13] = [
        Measure::Sup,
        Measure::Conf,
        Measure::Lift,
        Measure::Gan,
        Measure::Ps,
        Measure::Loe,
        Measure::Zhang,
        Measure::Impind,
        Measure::Lc,
        Measure::Conv,
        Measure::Impint,
        Measure::Seb,
        Measure::Bf,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Measure::Sup => "SUP",
            Measure::Conf => "CONF",
            Measure::Lift => "LIFT",
            Measure::Gan => "GAN",
            Measure::Ps => "PS",
            Measure::Loe => "LOE",
            Measure::Zhang => "ZHANG",
            Measure::Impind => "IMPIND",
            Measure::Lc => "LC",
            Measure::Conv => "CONV",
            Measure::Impint => "IMPINT",
            Measure::Seb => "SEB",
            Measure::Bf => "BF",
        }
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Measure::ALL
            .iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| format!("unknown measure {s:?}"))
    }
}

/// One value per measure; +∞/-∞ where a denominator vanishes against a
/// non-zero numerator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureVector<T> {
    pub sup: T,
    pub conf: T,
    pub lift: T,
    pub gan: T,
    pub ps: T,
    pub loe: T,
    pub zhang: T,
    pub impind: T,
    pub lc: T,
    pub conv: T,
    pub impint: T,
    pub seb: T,
    pub bf: T,
}

impl<T: Float> MeasureVector<T> {
    pub fn get(&self, m: Measure) -> T {
        match m {
            Measure::Sup => self.sup,
            Measure::Conf => self.conf,
            Measure::Lift => self.lift,
            Measure::Gan => self.gan,
            Measure::Ps => self.ps,
            Measure::Loe => self.loe,
            Measure::Zhang => self.zhang,
            Measure::Impind => self.impind,
            Measure::Lc => self.lc,
            Measure::Conv => self.conv,
            Measure::Impint => self.impint,
            Measure::Seb => self.seb,
            Measure::Bf => self.bf,
        }
    }
}

/// num/den under the module's division conventions. `null` is the measure's
/// exact-independence value, returned for 0/0.
fn ratio<T: Float>(num: T, den: T, null: T) -> T {
    if den > T::zero() {
        num / den
    } else if num > T::zero() {
        T::infinity()
    } else if num < T::zero() {
        T::neg_infinity()
    } else {
        null
    }
}

/// Evaluate all thirteen measures for one set of contingency counts.
///
/// Each formula is evaluated in count form (the probabilities scaled by n or
/// n², which cancels in every ratio): integer products are exact in the
/// scalar, so the independence identities hold exactly rather than to
/// rounding error.
pub fn measure_vector<T: Float>(c: &ContingencyCounts) -> Result<MeasureVector<T>, MeasureError> {
    if c.n_a == 0 {
        return Err(MeasureError::EmptyAntecedent);
    }
    let nn = T::cast(c.n);
    let na = T::cast(c.n_a);
    let nb = T::cast(c.n_b);
    let nab = T::cast(c.n_ab);
    let na_notb = T::cast(c.n_a_notb());
    let n_notb = T::cast(c.n - c.n_b);

    let conf = nab / na;
    // n² · (P_ab - P_a·P_b); exactly zero at independence
    let delta = nn * nab - na * nb;
    Ok(MeasureVector {
        sup: nab / nn,
        conf,
        lift: ratio(nab * nn, na * nb, T::one()),
        gan: T::cast(2) * conf - T::one(),
        ps: delta / nn,
        loe: ratio(delta, na * n_notb, T::zero()),
        zhang: ratio(delta, (nab * n_notb).max(nb * na_notb), T::zero()),
        impind: ratio(-delta, (nn * na * n_notb).sqrt(), T::zero()),
        lc: ratio(nab - na_notb, nb, T::zero()),
        conv: ratio(na * n_notb, nn * na_notb, T::one()),
        impint: poisson_tail(na * n_notb / nn, c.n_a_notb()),
        seb: ratio(nab, na_notb, T::zero()),
        bf: ratio(nab * n_notb, nb * na_notb, T::one()),
    })
}

/// Upper tail Pr[Poisson(lambda) ≥ k].
///
/// Summation of the pmf recurrence p_{j+1} = p_j λ/(j+1) from p_0 = e^{-λ};
/// once e^{-λ} would leave the scalar's normal range the recurrence starts
/// at zero and stays there, so large λ accumulates the same sum in log
/// space instead.
pub fn poisson_tail<T: Float>(lambda: T, k: usize) -> T {
    if k == 0 {
        return T::one();
    }
    if lambda <= T::zero() {
        return T::zero();
    }
    let underflow_edge = -T::min_positive_value().ln() * T::cast(0.95);
    let cdf = if lambda < underflow_edge {
        let mut pmf = (-lambda).exp();
        let mut acc = pmf;
        for j in 1..k {
            pmf = pmf * lambda / T::cast(j);
            acc = acc + pmf;
        }
        acc
    } else {
        log_space_cdf(lambda, k)
    };
    (T::one() - cdf).max(T::zero()).min(T::one())
}

/// Σ_{j<k} pmf(j) via log pmf(j) = -λ + j ln λ - ln j!, shifted by the
/// largest term so the exponentials stay representable.
fn log_space_cdf<T: Float>(lambda: T, k: usize) -> T {
    let ln_lambda = lambda.ln();
    let mut log_pmf = -lambda;
    let mut max_log = log_pmf;
    for j in 1..k {
        log_pmf = log_pmf + ln_lambda - T::cast(j).ln();
        if log_pmf > max_log {
            max_log = log_pmf;
        }
    }
    let mut log_pmf = -lambda;
    let mut acc = (log_pmf - max_log).exp();
    for j in 1..k {
        log_pmf = log_pmf + ln_lambda - T::cast(j).ln();
        acc = acc + (log_pmf - max_log).exp();
    }
    acc * max_log.exp()
}

/// Unit-interval values scored for rule-set diversity (one per rule; the
/// rule supports).
#[derive(Debug, Clone, PartialEq)]
pub struct DiversityInput<T> {
    values: Vec<T>,
}

impl<T: Float> DiversityInput<T> {
    pub fn new(values: Vec<T>) -> Result<Self, MeasureError> {
        if values.is_empty() {
            return Err(MeasureError::TooFewValues {
                needed: 1,
                found: 0,
            });
        }
        for &v in &values {
            if !v.is_finite() || v < T::zero() || v > T::one() {
                return Err(MeasureError::InvalidProbability(
                    v.to_f64().unwrap_or(f64::NAN),
                ));
            }
        }
        Ok(DiversityInput { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Arithmetic mean of the raw values (the q of the variance formula).
    pub fn mean(&self) -> T {
        self.values.iter().copied().sum::<T>() / T::cast(self.values.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntropyMode {
    /// -Σ p·log2 p divided by the number of values (the default).
    #[default]
    Mean,
    /// Plain -Σ p·log2 p.
    Sum,
}

/// Shannon entropy of the values normalized to a probability distribution.
/// 0·log2(0) counts as 0.
pub fn entropy<T: Float>(d: &DiversityInput<T>, mode: EntropyMode) -> Result<T, MeasureError> {
    let total: T = d.values.iter().copied().sum();
    if total <= T::zero() {
        return Err(MeasureError::ZeroTotal);
    }
    let sum = -d
        .values
        .iter()
        .map(|&v| {
            let p = v / total;
            if p > T::zero() {
                p * p.log2()
            } else {
                T::zero()
            }
        })
        .sum::<T>();
    Ok(match mode {
        EntropyMode::Sum => sum,
        EntropyMode::Mean => sum / T::cast(d.len()),
    })
}

/// Sample variance of the raw values: Σ (P_i - q)² / (n - 1).
pub fn variance<T: Float>(d: &DiversityInput<T>) -> Result<T, MeasureError> {
    if d.len() < 2 {
        return Err(MeasureError::TooFewValues {
            needed: 2,
            found: d.len(),
        });
    }
    let q = d.mean();
    let ss = d
        .values
        .iter()
        .map(|&v| {
            let dv = v - q;
            dv * dv
        })
        .sum::<T>();
    Ok(ss / T::cast(d.len() - 1))
}
