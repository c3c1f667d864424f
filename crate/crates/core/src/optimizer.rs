//! Complexity model, utility function, constrained coding-rate optimization,
//! operative-range algorithm, and connectivity-gain computation.
//!
//! The decoding cost closed form is ours (the source of the encoding counts
//! defers decoding to an uncited reference); it sits behind [`ComplexityModel`]
//! so an alternative model can be swapped in.

use alloc::vec::Vec;

use crate::analytics::{reliability_nc, reliability_uncoded, PathProfile};
use crate::error::Error;

/// Per-node operation budget (multiplications + additions).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityBudget {
    pub beta0: u64,
}

impl ComplexityBudget {
    pub fn new(beta0: u64) -> Result<Self, Error> {
        if beta0 == 0 {
            return Err(Error::ConfigError("beta0 must be positive"));
        }
        Ok(ComplexityBudget { beta0 })
    }
}

/// Pluggable operation-count model. The default counts encoding as
/// (n-k)m(2k-1) and decoding as 2nk(k+m).
pub trait ComplexityModel {
    fn enc(&self, k: usize, n: usize, m: usize) -> u64;
    fn dec(&self, k: usize, n: usize, m: usize) -> u64;
}

/// Default model used throughout the crate.
#[derive(Debug, Clone, Copy, Default)]
pub struct DefaultComplexity;

impl ComplexityModel for DefaultComplexity {
    fn enc(&self, k: usize, n: usize, m: usize) -> u64 {
        let (k, n, m) = (k as u64, n as u64, m as u64);
        (n - k) * m * (2 * k - 1)
    }

    fn dec(&self, k: usize, n: usize, m: usize) -> u64 {
        let (k, n, m) = (k as u64, n as u64, m as u64);
        2 * n * k * (k + m)
    }
}

/// Encoding operations: (n-k) coded packets, each km multiplications and
/// (k-1)m additions.
pub fn beta_enc(k: usize, n: usize, m: usize) -> u64 {
    debug_assert!(k <= n);
    DefaultComplexity.enc(k, n, m)
}

/// Decoding operations: 2nk(k+m) — up to n packets eliminated against up to
/// k pivots, (k+m) multiplications plus (k+m) additions each.
pub fn beta_dec(k: usize, n: usize, m: usize) -> u64 {
    debug_assert!(k <= n);
    DefaultComplexity.dec(k, n, m)
}

/// Per-role costs: source encodes, destination decodes, relays do both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeCosts {
    pub beta_s: u64,
    pub beta_r: u64,
    pub beta_d: u64,
}

pub fn node_costs(k: usize, n: usize, m: usize) -> NodeCosts {
    let beta_s = beta_enc(k, n, m);
    let beta_d = beta_dec(k, n, m);
    NodeCosts { beta_s, beta_r: beta_s + beta_d, beta_d }
}

/// One candidate block length with its predicted reliability, utility, costs,
/// and constraint flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityPoint {
    pub n: usize,
    pub r: f64,
    pub rho_pred: f64,
    pub utility: f64,
    pub beta_s: u64,
    pub beta_r: u64,
    pub beta_d: u64,
    pub feasible: bool,
    pub target_met: bool,
}

/// Evaluate the utility u = (rho_pred - rho0) / beta_s at one candidate n.
pub fn utility(
    k: usize,
    n: usize,
    m: usize,
    q: u8,
    path: &PathProfile,
    rho0: f64,
    budget: ComplexityBudget,
) -> Result<UtilityPoint, Error> {
    if n <= k {
        return Err(Error::DomainError("utility requires n > k (cost is zero at rate one)"));
    }
    let costs = node_costs(k, n, m);
    let rho_pred = reliability_nc(k, n, q, path)?;
    Ok(UtilityPoint {
        n,
        r: k as f64 / n as f64,
        rho_pred,
        utility: (rho_pred - rho0) / costs.beta_s as f64,
        beta_s: costs.beta_s,
        beta_r: costs.beta_r,
        beta_d: costs.beta_d,
        feasible: costs.beta_d <= budget.beta0 && costs.beta_r <= budget.beta0,
        target_met: rho_pred >= rho0,
    })
}

fn feasible_candidates(
    k: usize,
    m: usize,
    q: u8,
    path: &PathProfile,
    rho0: f64,
    budget: ComplexityBudget,
) -> Result<Vec<UtilityPoint>, Error> {
    let mut out = Vec::new();
    let mut n = k + 1;
    loop {
        let pt = utility(k, n, m, q, path, rho0, budget)?;
        if !pt.feasible {
            // beta_d and beta_r are increasing in n: no larger n is feasible
            break;
        }
        out.push(pt);
        n += 1;
    }
    if out.is_empty() {
        let first = node_costs(k, k + 1, m);
        return Err(Error::InfeasibleBudget {
            beta0: budget.beta0,
            min_required: first.beta_r.max(first.beta_d),
        });
    }
    Ok(out)
}

fn pick_best(cands: &[UtilityPoint]) -> UtilityPoint {
    let target: Vec<&UtilityPoint> = cands.iter().filter(|p| p.target_met).collect();
    if target.is_empty() {
        // best effort: maximize predicted reliability, ties to smallest n
        return *cands
            .iter()
            .reduce(|best, p| if p.rho_pred > best.rho_pred { p } else { best })
            .expect("nonempty");
    }
    *target
        .iter()
        .copied()
        .reduce(|best, p| if p.utility > best.utility { p } else { best })
        .expect("nonempty")
}

/// Maximize utility over n in {k+1, ..} subject to beta_d <= beta0 and
/// beta_r <= beta0. Exhaustive scan (candidate sets are small); ties break
/// toward the smallest n. If no candidate meets rho0, returns the feasible
/// candidate with the highest rho_pred, flagged target_met = false.
pub fn optimize_rate(
    k: usize,
    m: usize,
    q: u8,
    path: &PathProfile,
    rho0: f64,
    budget: ComplexityBudget,
) -> Result<UtilityPoint, Error> {
    let cands = feasible_candidates(k, m, q, path, rho0, budget)?;
    Ok(pick_best(&cands))
}

/// Ternary search over the integer candidate set, exploiting the observed
/// quasi-concavity of utility in n. Falls back to the exhaustive scan when
/// the sequence is not unimodal (rises to one peak, then falls).
pub fn optimize_rate_ternary(
    k: usize,
    m: usize,
    q: u8,
    path: &PathProfile,
    rho0: f64,
    budget: ComplexityBudget,
) -> Result<UtilityPoint, Error> {
    let cands = feasible_candidates(k, m, q, path, rho0, budget)?;
    if !is_quasi_concave(&cands) || cands.iter().all(|p| !p.target_met) {
        return Ok(pick_best(&cands));
    }
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    while hi - lo > 2 {
        let m1 = lo + (hi - lo) / 3;
        let m2 = hi - (hi - lo) / 3;
        if cands[m1].utility < cands[m2].utility {
            lo = m1 + 1;
        } else {
            hi = m2;
        }
    }
    // smallest-n tie break within the residual window
    let mut best = cands[lo];
    for &p in &cands[lo + 1..=hi] {
        if p.utility > best.utility {
            best = p;
        }
    }
    Ok(best)
}

/// True when the utility sequence rises to a single peak then falls
/// (weak inequalities allowed at the peak).
pub fn is_quasi_concave(cands: &[UtilityPoint]) -> bool {
    let mut falling = false;
    for w in cands.windows(2) {
        if w[1].utility > w[0].utility {
            if falling {
                return false;
            }
        } else if w[1].utility < w[0].utility {
            falling = true;
        }
    }
    true
}

/// Operative range per the three-step activation algorithm: maximal utility,
/// the acceptable set of target-meeting candidates, and an activation
/// predicate against an acceptance threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct OperativeRange {
    pub n_opt: usize,
    pub u_max: f64,
    /// Derived lower bound: smallest utility among feasible, target-meeting
    /// candidates. None when no candidate meets the target.
    pub u_min: Option<f64>,
    /// Feasible, target-meeting (n, utility) pairs, ascending in n.
    pub acceptable: Vec<(usize, f64)>,
    /// Best point (best-effort when acceptable is empty).
    pub point: UtilityPoint,
}

impl OperativeRange {
    /// Step (3): activate when some acceptable point clears the threshold.
    /// `threshold` overrides the derived u_min when supplied.
    pub fn activate(&self, threshold: Option<f64>) -> bool {
        let floor = match threshold.or(self.u_min) {
            Some(f) => f,
            None => return false,
        };
        self.acceptable.iter().any(|&(_, u)| u >= floor)
    }
}

pub fn operative_range(
    k: usize,
    m: usize,
    q: u8,
    path: &PathProfile,
    rho0: f64,
    budget: ComplexityBudget,
) -> Result<OperativeRange, Error> {
    let cands = feasible_candidates(k, m, q, path, rho0, budget)?;
    let point = pick_best(&cands);
    let acceptable: Vec<(usize, f64)> =
        cands.iter().filter(|p| p.target_met).map(|p| (p.n, p.utility)).collect();
    let u_min = acceptable.iter().map(|&(_, u)| u).reduce(f64::min);
    Ok(OperativeRange { n_opt: point.n, u_max: point.utility, u_min, acceptable, point })
}

/// Connectivity horizons with and without coding, and their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectivityResult {
    pub h_nc: usize,
    pub h_unc: usize,
    /// h_nc / h_unc; meaningless when undefined_flag is set.
    pub gamma: f64,
    /// Set when even one uncoded hop misses the target ((1 - eps) < rho0).
    pub undefined_flag: bool,
}

/// Deepest hop count meeting rho0 uncoded and with optimized NC, under a
/// uniform per-hop erasure rate.
pub fn connectivity(
    k: usize,
    m: usize,
    q: u8,
    eps: f64,
    rho0: f64,
    budget: ComplexityBudget,
    h_max: usize,
) -> Result<ConnectivityResult, Error> {
    let mut h_unc = 0;
    while h_unc < h_max {
        let path = PathProfile::uniform(eps, h_unc + 1)?;
        if reliability_uncoded(&path) < rho0 {
            break;
        }
        h_unc += 1;
    }
    // h_nc = max{h <= h_max : optimize_rate at h hops meets the target}.
    // With a uniform eps, some feasible n meets rho0 at h hops iff
    // (1 - eta_min)^h >= rho0 where eta_min is the best per-hop residual over
    // the (h-independent) feasible candidate set, so eta_min is evaluated once.
    let one_hop = PathProfile::uniform(eps, 1)?;
    let eta_min = match feasible_candidates(k, m, q, &one_hop, rho0, budget) {
        Ok(cands) => cands.iter().map(|p| 1.0 - p.rho_pred).fold(f64::INFINITY, f64::min),
        Err(Error::InfeasibleBudget { .. }) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    let mut h_nc = 0;
    let mut rho = 1.0;
    while h_nc < h_max {
        rho *= 1.0 - eta_min;
        if !(rho >= rho0) {
            break;
        }
        h_nc += 1;
    }
    let undefined_flag = h_unc == 0;
    let gamma = if undefined_flag { f64::NAN } else { h_nc as f64 / h_unc as f64 };
    Ok(ConnectivityResult { h_nc, h_unc, gamma, undefined_flag })
}
