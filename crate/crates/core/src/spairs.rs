//! Bracket structure of crossing sign sequences.
//!
//! A pair `(i, j)` is an s-pair when `s_i + … + s_j = 0` and every proper
//! prefix sum starting at `i` is positive. These are exactly matched
//! brackets with `+1` opening and `-1` closing.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::lab::LemmaReport;
use crate::{GeoError, Result};

/// Longest sequence accepted by [`brute_force_oracle`].
pub const ORACLE_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignSequence {
    pub signs: Vec<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<f64>>,
    /// Prefix defect sums.
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<f64>>,
}

impl SignSequence {
    pub fn new(signs: Vec<i8>) -> Result<SignSequence> {
        if let Some(n) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(GeoError::Precondition(format!("sign {n} is {}, expected ±1", signs[n])));
        }
        Ok(SignSequence { signs, theta: None, k: None })
    }

    /// Parses `"++--"`-style strings.
    pub fn from_str_signs(s: &str) -> Result<SignSequence> {
        let signs = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '+' => Ok(1),
                '-' | '−' => Ok(-1),
                _ => Err(GeoError::Precondition(format!("unexpected sign character {c:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        SignSequence::new(signs)
    }

    pub fn with_data(mut self, theta: Vec<f64>, k: Vec<f64>) -> Result<SignSequence> {
        if theta.len() != self.signs.len() || k.len() != self.signs.len() {
            return Err(GeoError::Precondition("θ and K must have one entry per sign".into()));
        }
        if k.windows(2).any(|w| w[1] < w[0] - 1e-9) {
            return Err(GeoError::Precondition("K must be nondecreasing".into()));
        }
        self.theta = Some(theta);
        self.k = Some(k);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Running sums `s_0 + … + s_n`.
    pub fn prefix_sums(&self) -> Vec<i64> {
        self.signs
            .iter()
            .scan(0i64, |acc, &s| {
                *acc += s as i64;
                Some(*acc)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SPair {
    pub i: usize,
    pub j: usize,
    /// Length of the longest chain of nested pairs starting with this one.
    pub depth: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    /// Sorted by opening index.
    pub pairs: Vec<SPair>,
    /// Unpaired indexes, ascending.
    pub unpaired: Vec<usize>,
}

impl Matching {
    pub fn max_depth(&self) -> usize {
        self.pairs.iter().map(|p| p.depth).max().unwrap_or(0)
    }
}

/// Stack matching. A pair's depth is one more than the deepest pair
/// directly inside it.
pub fn match_spairs(seq: &SignSequence) -> Matching {
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut pairs = Vec::new();
    let mut unpaired = Vec::new();
    for (n, &s) in seq.signs.iter().enumerate() {
        if s > 0 {
            stack.push((n, 0));
        } else if let Some((i, inner)) = stack.pop() {
            let depth = inner + 1;
            pairs.push(SPair { i, j: n, depth });
            if let Some(parent) = stack.last_mut() {
                parent.1 = parent.1.max(depth);
            }
        } else {
            unpaired.push(n);
        }
    }
    unpaired.extend(stack.iter().map(|&(i, _)| i));
    unpaired.sort_unstable();
    pairs.sort_unstable();
    Matching { pairs, unpaired }
}

/// Tests every `(i, j)` against the prefix-sum definition, then computes
/// depths from explicit nesting chains.
pub fn brute_force_oracle(seq: &SignSequence) -> Result<Matching> {
    let n = seq.len();
    if n > ORACLE_CAP {
        return Err(GeoError::Precondition(format!("oracle is capped at length {ORACLE_CAP}, got {n}")));
    }
    let mut found = Vec::new();
    for i in 0..n {
        let mut sum = 0i64;
        for j in i..n {
            sum += seq.signs[j] as i64;
            if sum == 0 {
                found.push((i, j));
                break;
            }
            if sum < 0 {
                break;
            }
        }
    }
    // chain length: longest P = P_1 ⊃ P_2 ⊃ … among found pairs
    found.sort_by_key(|&(i, j)| j - i);
    let mut depth = vec![1usize; found.len()];
    for a in 0..found.len() {
        for b in 0..a {
            let (oi, oj) = found[a];
            let (ii, ij) = found[b];
            if oi < ii && ij < oj {
                depth[a] = depth[a].max(depth[b] + 1);
            }
        }
    }
    let mut pairs: Vec<SPair> = found.iter().zip(&depth).map(|(&(i, j), &d)| SPair { i, j, depth: d }).collect();
    pairs.sort_unstable();
    let mut used = vec![false; n];
    for p in &pairs {
        used[p.i] = true;
        used[p.j] = true;
    }
    let unpaired = (0..n).filter(|&k| !used[k]).collect();
    Ok(Matching { pairs, unpaired })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    /// `s[q - 1]` holds the indexes of depth-`q` pairs, ascending.
    pub s: Vec<Vec<usize>>,
    pub r: Vec<usize>,
    /// Indexes grouped by their running sign sum.
    pub q: BTreeMap<i64, Vec<usize>>,
}

/// Splits indexes by pair depth (depths above `q_max` are dropped) and by
/// running sum level.
pub fn partition_indices(seq: &SignSequence, q_max: usize) -> Result<Partition> {
    let m = match_spairs(seq);
    let mut s = vec![Vec::new(); q_max];
    for p in &m.pairs {
        if p.depth <= q_max {
            s[p.depth - 1].extend([p.i, p.j]);
        }
    }
    for level in &mut s {
        level.sort_unstable();
    }
    let mut q: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (n, r) in seq.prefix_sums().into_iter().enumerate() {
        q.entry(r).or_default().push(n);
    }
    for (r, idx) in &q {
        let hits = idx.iter().filter(|n| m.unpaired.binary_search(n).is_ok()).count();
        if hits > 2 {
            return Err(GeoError::Structural(format!("level {r} holds {hits} unpaired indexes")));
        }
    }
    Ok(Partition { s, r: m.unpaired, q })
}

/// Which parts of [`check_depth_bounds`] to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthChecks {
    pub per_depth: bool,
    pub total: bool,
    /// `θ_i - θ_j ≤ depth·(K_j - K_i)`; needs a drifting path.
    pub pairwise: bool,
}

impl Default for DepthChecks {
    fn default() -> Self {
        DepthChecks { per_depth: true, total: true, pairwise: true }
    }
}

pub fn check_depth_bounds(seq: &SignSequence, tau_tc: f64) -> Result<LemmaReport> {
    check_depth_bounds_with(seq, tau_tc, DepthChecks::default())
}

pub fn check_depth_bounds_with(seq: &SignSequence, tau_tc: f64, checks: DepthChecks) -> Result<LemmaReport> {
    let (theta, k) = match (&seq.theta, &seq.k) {
        (Some(t), Some(k)) => (t, k),
        _ => return Err(GeoError::Precondition("depth bounds need θ and K".into())),
    };
    if let Some(n) = theta.iter().position(|t| t.abs() > PI / 2.0 + 1e-9) {
        return Err(GeoError::Precondition(format!("|θ_{n}| exceeds π/2")));
    }
    let mut report = LemmaReport::new("depth-bounds");
    let m = match_spairs(seq);
    let st = |n: usize| seq.signs[n] as f64 * theta[n];
    if checks.per_depth {
        for q in 1..=m.max_depth() {
            let sum: f64 = m.pairs.iter().filter(|p| p.depth == q).map(|p| st(p.i) + st(p.j)).sum();
            report.check(format!("depth-{q}"), sum.abs(), 4.0 * PI * q as f64, tau_tc);
        }
    }
    if checks.total {
        let q_star = seq.prefix_sums().iter().map(|r| r.unsigned_abs()).max().unwrap_or(0) as f64;
        let total: f64 = (0..seq.len()).map(st).sum();
        report.check("total", total.abs(), 2.0 * q_star * (q_star + 1.5) * PI, tau_tc);
    }
    if checks.pairwise {
        for p in &m.pairs {
            let lhs = theta[p.i] - theta[p.j];
            report.check(format!("pair-{}-{}", p.i, p.j), lhs, p.depth as f64 * (k[p.j] - k[p.i]), tau_tc);
        }
    }
    report.count("pairs", m.pairs.len());
    report.count("unpaired", m.unpaired.len());
    if seq.is_empty() {
        report.inconclusive("empty sign sequence");
    }
    Ok(report)
}

/// `θ_n = s_n·(-1)^n·α_n`, the angle-function values at crossings.
pub fn theta_from_alpha(signs: &[i8], alpha: &[f64]) -> Vec<f64> {
    signs
        .iter()
        .zip(alpha)
        .enumerate()
        .map(|(n, (&s, &a))| {
            let alt = if n % 2 == 0 { a } else { -a };
            s as f64 * alt
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::Verdict;

    fn seq(s: &str) -> SignSequence {
        SignSequence::from_str_signs(s).unwrap()
    }

    #[test]
    fn examples() {
        let m = match_spairs(&seq("++--"));
        assert_eq!(m.pairs, vec![SPair { i: 0, j: 3, depth: 2 }, SPair { i: 1, j: 2, depth: 1 }]);
        assert!(m.unpaired.is_empty());
        let m = match_spairs(&seq("+-+-"));
        assert_eq!(m.pairs, vec![SPair { i: 0, j: 1, depth: 1 }, SPair { i: 2, j: 3, depth: 1 }]);
        let m = match_spairs(&seq("++-"));
        assert_eq!(m.pairs, vec![SPair { i: 1, j: 2, depth: 1 }]);
        assert_eq!(m.unpaired, vec![0]);
    }

    #[test]
    fn oracle_limits() {
        assert_eq!(brute_force_oracle(&seq("")).unwrap(), Matching::default());
        assert_eq!(brute_force_oracle(&seq("+-")).unwrap().pairs, vec![SPair { i: 0, j: 1, depth: 1 }]);
        assert!(brute_force_oracle(&SignSequence::new(vec![1; 25]).unwrap()).is_err());
    }

    #[test]
    fn partitions() {
        let p = partition_indices(&seq("++--"), 2).unwrap();
        assert_eq!(p.s, vec![vec![1, 2], vec![0, 3]]);
        assert!(p.r.is_empty());
        let p = partition_indices(&seq("++-"), 1).unwrap();
        assert_eq!(p.r, vec![0]);
        assert_eq!(p.q[&1], vec![0, 2]);
        assert_eq!(p.q[&2], vec![1]);
        let p = partition_indices(&seq("+++++"), 1).unwrap();
        assert_eq!(p.r, vec![0, 1, 2, 3, 4]);
        assert!((1..=5).all(|r| p.q[&r].len() == 1));
    }

    #[test]
    fn depth_bound_negative_control() {
        let s = seq("+-").with_data(vec![0.3, -0.2], vec![0.1, 0.5]).unwrap();
        let r = check_depth_bounds(&s, 1e-4).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let zero = seq("++--").with_data(vec![0.0; 4], vec![0.0; 4]).unwrap();
        assert_eq!(check_depth_bounds(&zero, 1e-4).unwrap().verdict, Verdict::Pass);
        assert!(check_depth_bounds(&seq("+-"), 1e-4).is_err());
    }
}
