//! Two-hop achievable-rate-region computation: end-to-end coding vs coding
//! with re-encoding at the relay, plus iso-product and square-shape
//! diagnostics of the region boundary.
//!
//! Rates are realized as an n-grid at fixed k; r = k/n is the only physically
//! realizable discretization of the rate axis.

use alloc::vec::Vec;

use crate::analytics::{residual_snc, CodeOperatingPoint};
use crate::error::Error;

/// Admissible block lengths at fixed k for r in [r_min, r_max], descending n
/// (ascending rate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateGrid {
    pub k: usize,
    /// Candidate block lengths, descending (so rates ascend).
    pub ns: Vec<usize>,
}

impl RateGrid {
    pub fn new(k: usize, r_min: f64, r_max: f64) -> Result<Self, Error> {
        if k == 0 {
            return Err(Error::ConfigError("k must be positive"));
        }
        if !(r_min > 0.0 && r_min <= r_max && r_max <= 1.0) {
            return Err(Error::ConfigError("requires 0 < r_min <= r_max <= 1"));
        }
        let n_lo = {
            // smallest n with k/n <= r_max
            let n = libm::ceil(k as f64 / r_max) as usize;
            n.max(k)
        };
        let n_hi = libm::floor(k as f64 / r_min) as usize;
        if n_hi < n_lo {
            return Err(Error::ConfigError("rate range contains no representable rate"));
        }
        Ok(RateGrid { k, ns: (n_lo..=n_hi).rev().collect() })
    }

    pub fn rates(&self) -> Vec<f64> {
        self.ns.iter().map(|&n| self.k as f64 / n as f64).collect()
    }
}

/// Outcome at one (eps1, eps2) cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub n: usize,
    pub r_star: f64,
    /// End-to-end residual erasure at the chosen rate.
    pub eta: f64,
    /// Achievable rate R = r_star (1 - eta).
    pub rate: f64,
}

/// Memo for residual_snc keyed by (n, eps): grid sweeps hit the same pairs
/// many times.
#[derive(Default)]
pub struct ResidualCache {
    entries: alloc::collections::BTreeMap<(usize, u64), f64>,
}

impl ResidualCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn eta(&mut self, k: usize, n: usize, q: u8, eps: f64) -> Result<f64, Error> {
        let key = (n, eps.to_bits());
        if let Some(&v) = self.entries.get(&key) {
            return Ok(v);
        }
        let v = residual_snc(&CodeOperatingPoint::new(k, n, q, eps)?);
        self.entries.insert(key, v);
        Ok(v)
    }
}

/// Total erasure seen by an end-to-end encoder across two hops.
pub fn eps_total(eps1: f64, eps2: f64) -> f64 {
    1.0 - (1.0 - eps1) * (1.0 - eps2)
}

/// Largest grid rate whose end-to-end residual meets eta0, treating both hops
/// as one erasure channel. None when no grid rate qualifies.
pub fn max_rate_e2e(
    eps1: f64,
    eps2: f64,
    eta0: f64,
    grid: &RateGrid,
    q: u8,
    cache: &mut ResidualCache,
) -> Result<Option<RatePoint>, Error> {
    let et = eps_total(eps1, eps2);
    let mut best = None;
    for &n in &grid.ns {
        // ns descend, so rates ascend: keep the last qualifying entry
        let eta = cache.eta(grid.k, n, q, et)?;
        if eta <= eta0 {
            let r = grid.k as f64 / n as f64;
            best = Some(RatePoint { n, r_star: r, eta, rate: r * (1.0 - eta) });
        }
    }
    Ok(best)
}

/// End-to-end residual when each hop decodes and re-encodes:
/// eta_nc = 1 - (1 - eta1)(1 - eta2).
pub fn eta_nc(eta1: f64, eta2: f64) -> f64 {
    1.0 - (1.0 - eta1) * (1.0 - eta2)
}

/// Largest grid rate whose per-hop-decoded residual product meets eta0.
pub fn max_rate_nc(
    eps1: f64,
    eps2: f64,
    eta0: f64,
    grid: &RateGrid,
    q: u8,
    cache: &mut ResidualCache,
) -> Result<Option<RatePoint>, Error> {
    let mut best = None;
    for &n in &grid.ns {
        let eta1 = cache.eta(grid.k, n, q, eps1)?;
        let eta2 = cache.eta(grid.k, n, q, eps2)?;
        let eta = eta_nc(eta1, eta2);
        if eta <= eta0 {
            let r = grid.k as f64 / n as f64;
            best = Some(RatePoint { n, r_star: r, eta, rate: r * (1.0 - eta) });
        }
    }
    Ok(best)
}

/// Which end-to-end residual model a grid sweep uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    EndToEnd,
    NetworkCoding,
}

/// Dense feasibility/rate evaluation over an (eps1, eps2) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionGrid {
    pub eps1_axis: Vec<f64>,
    pub eps2_axis: Vec<f64>,
    pub eta0: f64,
    pub scheme: Scheme,
    /// Row-major over (eps1 index, eps2 index).
    pub cells: Vec<Option<RatePoint>>,
}

impl RegionGrid {
    pub fn cell(&self, i: usize, j: usize) -> &Option<RatePoint> {
        &self.cells[i * self.eps2_axis.len() + j]
    }

    pub fn feasible_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }
}

/// Evenly spaced axis over [lo, hi] with `points` samples.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return alloc::vec![lo];
    }
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|i| lo + step * i as f64).collect()
}

pub fn region_grid(
    eps1_axis: &[f64],
    eps2_axis: &[f64],
    eta0: f64,
    grid: &RateGrid,
    q: u8,
    scheme: Scheme,
) -> Result<RegionGrid, Error> {
    let mut cache = ResidualCache::new();
    let mut cells = Vec::with_capacity(eps1_axis.len() * eps2_axis.len());
    for &e1 in eps1_axis {
        for &e2 in eps2_axis {
            let cell = match scheme {
                Scheme::EndToEnd => max_rate_e2e(e1, e2, eta0, grid, q, &mut cache)?,
                Scheme::NetworkCoding => max_rate_nc(e1, e2, eta0, grid, q, &mut cache)?,
            };
            cells.push(cell);
        }
    }
    Ok(RegionGrid {
        eps1_axis: eps1_axis.to_vec(),
        eps2_axis: eps2_axis.to_vec(),
        eta0,
        scheme,
        cells,
    })
}

/// For each eps1 sample, the eps2 with (1-eps1)(1-eps2) = A:
/// eps2 = (eps1 + A - 1)/(eps1 - 1). Samples whose eps2 falls outside [0, 1]
/// (or with eps1 = 1) are dropped.
pub fn iso_product_curve(a: f64, eps1_samples: &[f64]) -> Result<Vec<(f64, f64)>, Error> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::DomainError("A must lie in (0, 1]"));
    }
    let mut out = Vec::new();
    for &e1 in eps1_samples {
        if e1 == 1.0 {
            continue;
        }
        let e2 = (e1 + a - 1.0) / (e1 - 1.0);
        if (0.0..=1.0).contains(&e2) {
            out.push((e1, e2));
        }
    }
    Ok(out)
}

/// Feasible-cell-count ratio NC / e2e over identically shaped grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AreaRatio {
    Ratio(f64),
    /// No feasible e2e cell to divide by.
    Undefined,
}

pub fn area_ratio(grid_nc: &RegionGrid, grid_e2e: &RegionGrid) -> Result<AreaRatio, Error> {
    if grid_nc.eps1_axis != grid_e2e.eps1_axis || grid_nc.eps2_axis != grid_e2e.eps2_axis {
        return Err(Error::ConfigError("area_ratio requires identical axes"));
    }
    let denom = grid_e2e.feasible_count();
    if denom == 0 {
        return Ok(AreaRatio::Undefined);
    }
    Ok(AreaRatio::Ratio(grid_nc.feasible_count() as f64 / denom as f64))
}

/// One row of the square-shape diagnostic: the second hop's erasure swept
/// while the rate stays pinned at r0 = max_rate_nc(eps1, 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareRow {
    pub eps2: f64,
    pub eta2: f64,
    pub eta_nc: f64,
    pub rate: f64,
    /// eta_nc exceeds eta0 at this row.
    pub over_target: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SquareDiagnostic {
    /// Rate pinned from the (eps1, eps2=0) corner.
    pub r0: f64,
    pub n0: usize,
    pub eta1: f64,
    pub rows: Vec<SquareRow>,
    /// First eps2 at which eta_nc exceeds eta0, if any.
    pub breakpoint: Option<f64>,
}

pub fn square_diagnostic(
    eps1: f64,
    eta0: f64,
    grid: &RateGrid,
    q: u8,
    eps2_samples: &[f64],
) -> Result<SquareDiagnostic, Error> {
    let mut cache = ResidualCache::new();
    let corner = max_rate_nc(eps1, 0.0, eta0, grid, q, &mut cache)?
        .ok_or(Error::DomainError("no feasible rate at (eps1, 0)"))?;
    let eta1 = cache.eta(grid.k, corner.n, q, eps1)?;
    let mut rows = Vec::with_capacity(eps2_samples.len());
    let mut breakpoint = None;
    for &e2 in eps2_samples {
        let eta2 = cache.eta(grid.k, corner.n, q, e2)?;
        let combined = eta_nc(eta1, eta2);
        let over = combined > eta0;
        if over && breakpoint.is_none() {
            breakpoint = Some(e2);
        }
        rows.push(SquareRow {
            eps2: e2,
            eta2,
            eta_nc: combined,
            rate: corner.r_star * (1.0 - combined),
            over_target: over,
        });
    }
    Ok(SquareDiagnostic { r0: corner.r_star, n0: corner.n, eta1, rows, breakpoint })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn grid_k50() -> RateGrid {
        RateGrid::new(50, 0.5, 1.0).unwrap()
    }

    #[test]
    fn rate_grid_bounds() {
        let g = grid_k50();
        assert_eq!(*g.ns.first().unwrap(), 100);
        assert_eq!(*g.ns.last().unwrap(), 50);
        assert_eq!(g.ns.len(), 51);
        assert!(RateGrid::new(50, 0.99, 0.995).is_err()); // no integer n in range
        let tight = RateGrid::new(10, 0.4, 0.6).unwrap();
        assert_eq!(tight.ns, vec![25, 24, 23, 22, 21, 20, 19, 18, 17]);
    }

    #[test]
    fn eps_total_examples() {
        assert_eq!(eps_total(0.0, 0.0), 0.0);
        assert!((eps_total(0.1, 0.1) - 0.19).abs() < 1e-15);
        assert_eq!(eps_total(1.0, 0.3), 1.0);
    }

    #[test]
    fn lossless_cells_take_max_rate() {
        let g = grid_k50();
        let mut c = ResidualCache::new();
        let e2e = max_rate_e2e(0.0, 0.0, 0.05, &g, 8, &mut c).unwrap().unwrap();
        assert_eq!(e2e.r_star, 1.0);
        assert_eq!(e2e.rate, 1.0);
        let nc = max_rate_nc(0.0, 0.0, 0.05, &g, 8, &mut c).unwrap().unwrap();
        assert_eq!(nc.r_star, 1.0);
        assert_eq!(nc.rate, 1.0);
    }

    #[test]
    fn hop_swap_symmetry() {
        let g = grid_k50();
        let mut c = ResidualCache::new();
        for &(e1, e2) in &[(0.1, 0.3), (0.05, 0.5), (0.0, 0.4)] {
            let a = max_rate_e2e(e1, e2, 0.05, &g, 8, &mut c).unwrap();
            let b = max_rate_e2e(e2, e1, 0.05, &g, 8, &mut c).unwrap();
            assert_eq!(a, b);
            let a = max_rate_nc(e1, e2, 0.05, &g, 8, &mut c).unwrap();
            let b = max_rate_nc(e2, e1, 0.05, &g, 8, &mut c).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn e2e_constant_on_iso_product_curve() {
        let g = grid_k50();
        let mut c = ResidualCache::new();
        let pairs = iso_product_curve(0.72, &linspace(0.0, 0.28, 8)).unwrap();
        assert!(pairs.len() >= 8);
        let first = max_rate_e2e(pairs[0].0, pairs[0].1, 0.05, &g, 8, &mut c).unwrap();
        for &(e1, e2) in &pairs[1..] {
            let pt = max_rate_e2e(e1, e2, 0.05, &g, 8, &mut c).unwrap();
            assert_eq!(pt.map(|p| p.n), first.map(|p| p.n), "at ({e1}, {e2})");
        }
    }

    #[test]
    fn iso_product_values() {
        let pts = iso_product_curve(0.5, &[0.0, 0.5]).unwrap();
        assert_eq!(pts, vec![(0.0, 0.5), (0.5, 0.0)]);
        let pts = iso_product_curve(0.72, &[0.2]).unwrap();
        assert!((pts[0].1 - 0.1).abs() < 1e-12);
        for &(e1, e2) in &iso_product_curve(0.3, &linspace(0.0, 0.9, 20)).unwrap() {
            assert!(((1.0 - e1) * (1.0 - e2) - 0.3).abs() < 1e-12);
        }
        // eps1 = 1 excluded, out-of-range eps2 dropped
        assert!(iso_product_curve(0.5, &[1.0]).unwrap().is_empty());
        assert!(iso_product_curve(0.9, &[0.5]).unwrap().is_empty()); // eps2 would be negative
        assert!(iso_product_curve(0.0, &[0.1]).is_err());
    }

    #[test]
    fn nc_region_contains_e2e_region() {
        let g = grid_k50();
        let ax = linspace(0.0, 0.6, 13);
        let e2e = region_grid(&ax, &ax, 0.05, &g, 8, Scheme::EndToEnd).unwrap();
        let nc = region_grid(&ax, &ax, 0.05, &g, 8, Scheme::NetworkCoding).unwrap();
        for (c_nc, c_e2e) in nc.cells.iter().zip(e2e.cells.iter()) {
            if c_e2e.is_some() {
                assert!(c_nc.is_some(), "e2e feasible but nc not");
            }
        }
        assert!(nc.feasible_count() >= e2e.feasible_count());
    }

    #[test]
    fn nested_in_eta0() {
        let g = grid_k50();
        let ax = linspace(0.0, 0.6, 13);
        let loose = region_grid(&ax, &ax, 0.15, &g, 8, Scheme::NetworkCoding).unwrap();
        let tight = region_grid(&ax, &ax, 0.05, &g, 8, Scheme::NetworkCoding).unwrap();
        for (l, t) in loose.cells.iter().zip(tight.cells.iter()) {
            if t.is_some() {
                assert!(l.is_some());
            }
        }
    }

    #[test]
    fn area_ratio_cases() {
        let g = grid_k50();
        let ax = linspace(0.0, 0.6, 13);
        let nc = region_grid(&ax, &ax, 0.05, &g, 8, Scheme::NetworkCoding).unwrap();
        assert_eq!(area_ratio(&nc, &nc).unwrap(), AreaRatio::Ratio(1.0));
        // impossible target: no e2e cell feasible
        let empty = region_grid(&ax, &ax, 0.0, &g, 8, Scheme::EndToEnd).unwrap();
        let lossless_only = empty.feasible_count();
        if lossless_only == 0 {
            assert_eq!(area_ratio(&nc, &empty).unwrap(), AreaRatio::Undefined);
        }
        // eta0 = 0 keeps only exactly-lossless cells; shift axes off zero instead
        let ax_pos = linspace(0.3, 0.6, 8);
        let e2e0 = region_grid(&ax_pos, &ax_pos, 1e-9, &g, 8, Scheme::EndToEnd).unwrap();
        assert_eq!(e2e0.feasible_count(), 0);
        let nc0 = region_grid(&ax_pos, &ax_pos, 1e-9, &g, 8, Scheme::NetworkCoding).unwrap();
        assert_eq!(area_ratio(&nc0, &e2e0).unwrap(), AreaRatio::Undefined);
        let mismatched = region_grid(&ax_pos, &ax, 0.05, &g, 8, Scheme::EndToEnd).unwrap();
        assert!(area_ratio(&nc, &mismatched).is_err());
    }

    #[test]
    fn square_diagnostic_shape() {
        let g = grid_k50();
        let samples = linspace(0.0, 0.2, 21);
        let d = square_diagnostic(0.1, 0.05, &g, 8, &samples).unwrap();
        // eps2 = 0 row: eta2 = 0, combined = eta1
        assert_eq!(d.rows[0].eta2, 0.0);
        assert!((d.rows[0].eta_nc - d.eta1).abs() < 1e-15);
        // eta2 strictly increasing in eps2
        for w in d.rows.windows(2) {
            assert!(w[1].eta2 > w[0].eta2);
        }
        // square-with-imperfect-corner: target lost before eps2 reaches eps1
        let bp = d.breakpoint.expect("breakpoint below 0.2");
        assert!(bp < 0.1, "breakpoint {bp} not below eps1");
        assert!(matches!(
            square_diagnostic(0.99, 0.01, &g, 8, &samples),
            Err(Error::DomainError(_))
        ));
    }
}
