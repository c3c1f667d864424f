//! Closed-form reliability formulas: the erasure pmf, per-hop residual
//! erasure rate after systematic-NC decoding, subspace failure probabilities,
//! per-link achievable rate, and multi-hop reliability products.
//!
//! Binomial coefficients are evaluated in the log domain (log-gamma) so block
//! lengths of several hundred do not overflow.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

/// A single-hop code operating point: (k, n, q) and the link erasure rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeOperatingPoint {
    pub k: usize,
    pub n: usize,
    /// Field exponent; field size g = 2^q.
    pub q: u8,
    pub eps: f64,
}

impl CodeOperatingPoint {
    pub fn new(k: usize, n: usize, q: u8, eps: f64) -> Result<Self, Error> {
        if k == 0 || k > n {
            return Err(Error::DomainError("requires 1 <= k <= n"));
        }
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::DomainError("eps must lie in [0, 1]"));
        }
        if q == 0 {
            return Err(Error::DomainError("q must be at least 1"));
        }
        Ok(CodeOperatingPoint { k, n, q, eps })
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn field_size(&self) -> f64 {
        (1u32 << self.q) as f64
    }
}

/// Per-hop erasure rates along a path, in hop order.
#[derive(Debug, Clone, PartialEq)]
pub struct PathProfile {
    eps: Vec<f64>,
}

impl PathProfile {
    pub fn new(eps: Vec<f64>) -> Result<Self, Error> {
        if eps.is_empty() {
            return Err(Error::DomainError("path must have at least one hop"));
        }
        if eps.iter().any(|e| !(0.0..=1.0).contains(e)) {
            return Err(Error::DomainError("eps must lie in [0, 1]"));
        }
        Ok(PathProfile { eps })
    }

    pub fn uniform(eps: f64, hops: usize) -> Result<Self, Error> {
        Self::new(vec![eps; hops])
    }

    pub fn hops(&self) -> usize {
        self.eps.len()
    }

    pub fn eps(&self) -> &[f64] {
        &self.eps
    }
}

/// alpha(j, v, p) = C(v, j) (1-p)^j p^(v-j): probability that exactly j of v
/// i.i.d. packets survive erasure rate p.
pub fn pmf_alpha(j: usize, v: usize, p: f64) -> Result<f64, Error> {
    if j > v {
        return Err(Error::DomainError("requires j <= v"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::DomainError("p must lie in [0, 1]"));
    }
    if p == 0.0 {
        return Ok(if j == v { 1.0 } else { 0.0 });
    }
    if p == 1.0 {
        return Ok(if j == 0 { 1.0 } else { 0.0 });
    }
    let (jf, vf) = (j as f64, v as f64);
    let ln_choose = libm::lgamma(vf + 1.0) - libm::lgamma(jf + 1.0) - libm::lgamma(vf - jf + 1.0);
    Ok(libm::exp(ln_choose + jf * libm::log1p(-p) + (vf - jf) * libm::log(p)))
}

/// P(fewer than k of v packets survive erasure rate p).
fn survival_tail_below(k: usize, v: usize, p: f64) -> f64 {
    (0..k).map(|l| pmf_alpha(l, v, p).expect("valid pmf args")).sum()
}

/// Residual erasure rate after decoding at a single hop,
/// eta = eps (phi1 + phi2), clamped to [0, 1]; eta <= eps always.
pub fn residual_snc(pt: &CodeOperatingPoint) -> f64 {
    let (k, n, eps) = (pt.k, pt.n, pt.eps);
    if eps <= 0.0 {
        return 0.0;
    }
    if eps >= 1.0 {
        return 1.0;
    }
    if n == k {
        // phi1 collapses to 1 and phi2 to 0 at rate one
        return eps;
    }
    let g = pt.field_size();
    let phi1 = survival_tail_below(k, n - 1, eps);

    // phi2 = sum_{l1=0}^{k-1} alpha(l1,k,eps) sum_{l2=k-l1}^{n-k} alpha(l2,n-k,eps)
    //        * (1 - prod_{l3=0}^{k-l1-1} (1 - g^{l3-l2}))
    // With a = k-l1 the pairs satisfy a <= l2; iterating l2 outermost lets the
    // inner product over l3 < a build by cumulative multiplication, so the
    // whole sum costs O(k(n-k)) with no scratch tables.
    let nk = n - k;
    let alpha1: Vec<f64> = (0..k).map(|l1| pmf_alpha(l1, k, eps).expect("valid")).collect();
    let alpha2: Vec<f64> = (0..=nk).map(|l2| pmf_alpha(l2, nk, eps).expect("valid")).collect();
    let mut phi2 = 0.0;
    for l2 in 1..=nk {
        let mut acc = 1.0;
        let mut inner = 0.0;
        for a in 1..=l2.min(k) {
            acc *= 1.0 - libm::pow(g, (a - 1) as f64 - l2 as f64);
            inner += alpha1[k - a] * (1.0 - acc);
        }
        phi2 += alpha2[l2] * inner;
    }
    // phi1 + phi2 double counts slightly at small fields; it is a failure
    // probability, so clamp it to [0, 1] before multiplying by eps.
    eps * (phi1 + phi2).clamp(0.0, 1.0)
}

/// Probability that a k x k matrix with i.i.d. uniform entries over a field
/// of the given size has full rank: prod_{i=1..k} (1 - size^-i).
pub fn prob_full_rank(k: usize, field_size: f64) -> f64 {
    (1..=k).map(|i| 1.0 - libm::pow(field_size, -(i as f64))).product()
}

/// Residual erasure rate of the subspace scheme at one hop:
/// eta = eps (Pr(lambda < k) + Pr(lambda >= k) (1 - prob_full_rank)),
/// where lambda is the number of correctly received packets.
pub fn eta_subspace(pt: &CodeOperatingPoint) -> f64 {
    let (k, n, eps) = (pt.k, pt.n, pt.eps);
    if eps <= 0.0 {
        return 0.0;
    }
    let p_low = survival_tail_below(k, n, eps);
    let p_rank_ok = prob_full_rank(k, pt.field_size());
    let eta = eps * (p_low + (1.0 - p_low) * (1.0 - p_rank_ok));
    eta.clamp(0.0, eps)
}

/// Per-link achievable rate R = r (1 - eta).
pub fn achievable_rate(r: f64, eta: f64) -> f64 {
    r * (1.0 - eta)
}

/// Multi-hop reliability with NC at every hop: prod_i (1 - eta_i).
pub fn reliability_nc(k: usize, n: usize, q: u8, path: &PathProfile) -> Result<f64, Error> {
    // paths usually repeat the same eps; evaluate each distinct value once
    let mut seen: Vec<(u64, f64)> = Vec::new();
    let mut rho = 1.0;
    for &eps in path.eps() {
        let key = eps.to_bits();
        let eta = match seen.iter().find(|&&(k2, _)| k2 == key) {
            Some(&(_, v)) => v,
            None => {
                let v = residual_snc(&CodeOperatingPoint::new(k, n, q, eps)?);
                seen.push((key, v));
                v
            }
        };
        rho *= 1.0 - eta;
    }
    Ok(rho)
}

/// Uncoded multi-hop reliability: prod_i (1 - eps_i).
pub fn reliability_uncoded(path: &PathProfile) -> f64 {
    path.eps().iter().map(|e| 1.0 - e).product()
}
