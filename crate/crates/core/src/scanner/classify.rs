use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::family::MatrixFamily;
use super::symbolic::generic_theta_ranks;
use crate::algebra::{GaussRat, C64};
use crate::error::{Error, Result};
use crate::jordan::{census_exact, theta_power_ranks, JordanCensus};
use crate::tracker::{probe_points, rational_radius};

/// Largest number of grid nodes [`scan_grid`] accepts.
pub const MAX_GRID_POINTS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PointKind {
    Split,
    Jump,
    StableCandidate,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointClass {
    pub point: Vec<GaussRat>,
    pub kind: PointKind,
    /// Present for Jump and StableCandidate points.
    pub census: Option<JordanCensus>,
    /// rank Θ^k for k = 1 … n−1.
    pub rank_theta: Vec<usize>,
    pub distinct: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Classifies ξ from exact data at ξ and at 8 probes on each of the rings of
/// radius r and r/2: more distinct eigenvalues at a probe makes ξ a
/// splitting point; otherwise a strictly larger rank Θ^k at a probe makes it
/// a jump point.
pub fn classify_point(family: &MatrixFamily, point: &[GaussRat], probe_radius: f64, rel_tol: f64) -> Result<PointClass> {
    let a = family.eval(point)?;
    let (m, ranks) = theta_power_ranks(&a)?;
    let r = rational_radius(probe_radius)?;
    let half = &r * &GaussRat::ratio(1, 2);
    let mut jump = false;
    for rr in [r, half] {
        for probe in probe_points(point, &rr, 8) {
            let (mp, rp) = theta_power_ranks(&family.eval(&probe)?)?;
            if mp > m {
                return Ok(PointClass {
                    point: point.to_vec(),
                    kind: PointKind::Split,
                    census: None,
                    rank_theta: ranks,
                    distinct: m,
                    note: None,
                });
            }
            jump |= rp.iter().zip(&ranks).any(|(p, c)| p > c);
        }
    }
    let (census, note) = match census_exact(&a, rel_tol) {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(format!("census unavailable: {e}"))),
    };
    Ok(PointClass {
        point: point.to_vec(),
        kind: if jump { PointKind::Jump } else { PointKind::StableCandidate },
        census,
        rank_theta: ranks,
        distinct: m,
        note,
    })
}

/// Decimal rational with 12 fractional digits closest to `x` (or the exact
/// dyadic value when `x` is too large for that).
pub fn decimal_rational(x: f64) -> Result<GaussRat> {
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    let scaled = (x * 1e12).round();
    if scaled.abs() < 9e15 {
        Ok(GaussRat::ratio(scaled as i64, 1_000_000_000_000))
    } else {
        GaussRat::from_c64(C64::new(x, 0.0)).ok_or(Error::NonFinite)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub params: Vec<String>,
    pub lo: Vec<GaussRat>,
    pub hi: Vec<GaussRat>,
    pub resolution: Vec<usize>,
}

impl GridSpec {
    pub fn new(params: Vec<String>, bounds: &[(f64, f64)], resolution: &[usize]) -> Result<Self> {
        if bounds.len() != params.len() || resolution.len() != params.len() {
            return Err(Error::Invalid(format!(
                "grid needs one interval and one resolution per parameter ({})",
                params.len()
            )));
        }
        if let Some(r) = resolution.iter().find(|&&r| r < 2) {
            return Err(Error::Invalid(format!("resolution must be at least 2 per axis, got {r}")));
        }
        let total = resolution.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r));
        match total {
            Some(t) if t <= MAX_GRID_POINTS => {}
            _ => {
                return Err(Error::SizeLimit(format!(
                    "grid has more than {MAX_GRID_POINTS} points"
                )))
            }
        }
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for &(a, b) in bounds {
            if !(a < b) {
                return Err(Error::Invalid(format!("empty interval [{a}, {b}]")));
            }
            lo.push(decimal_rational(a)?);
            hi.push(decimal_rational(b)?);
        }
        Ok(GridSpec {
            params,
            lo,
            hi,
            resolution: resolution.to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.resolution.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node `index`, first parameter varying slowest. Coordinates are exact:
    /// lo + (hi − lo)·i/(res − 1).
    pub fn node(&self, mut index: usize) -> Vec<GaussRat> {
        let mut idx = vec![0; self.resolution.len()];
        for (c, &r) in self.resolution.iter().enumerate().rev() {
            idx[c] = index % r;
            index /= r;
        }
        idx.iter()
            .enumerate()
            .map(|(c, &i)| {
                let step = GaussRat::ratio(i as i64, self.resolution[c] as i64 - 1);
                &self.lo[c] + &(&(&self.hi[c] - &self.lo[c]) * &step)
            })
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub total: usize,
    pub split: usize,
    pub jump: usize,
    pub stable_candidate: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub grid: GridSpec,
    pub points: Vec<PointClass>,
    pub summary: ScanSummary,
    /// Generic rank of Θ^k, k = 1 … n−1, over the whole parameter space.
    pub generic_rank_theta: Vec<usize>,
    /// Largest rank Θ^k seen on the grid.
    pub grid_max_rank_theta: Vec<usize>,
    pub tool_version: String,
    pub probe_radius: f64,
    pub rel_tol: f64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub probe_radius: f64,
    pub rel_tol: f64,
    pub seed: u64,
    /// Worker threads; 0 picks the rayon default.
    pub jobs: usize,
}

/// Classifies every grid node. Nodes are processed in parallel and
/// collected in grid order, so the report does not depend on `jobs`.
pub fn scan_grid(family: &MatrixFamily, grid: &GridSpec, opts: &ScanOptions) -> Result<ScanReport> {
    if grid.params.len() != family.nparams() {
        return Err(Error::Invalid("grid dimension does not match the family".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    let points: Vec<PointClass> = pool.install(|| {
        (0..grid.len())
            .into_par_iter()
            .map(|i| classify_point(family, &grid.node(i), opts.probe_radius, opts.rel_tol))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut summary = ScanSummary {
        total: points.len(),
        ..Default::default()
    };
    let mut grid_max = vec![0; family.n().saturating_sub(1)];
    for p in &points {
        match p.kind {
            PointKind::Split => summary.split += 1,
            PointKind::Jump => summary.jump += 1,
            PointKind::StableCandidate => summary.stable_candidate += 1,
        }
        for (g, &r) in grid_max.iter_mut().zip(&p.rank_theta) {
            *g = (*g).max(r);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    Ok(ScanReport {
        grid: grid.clone(),
        points,
        summary,
        generic_rank_theta: generic_theta_ranks(family, &mut rng)?,
        grid_max_rank_theta: grid_max,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        probe_radius: opts.probe_radius,
        rel_tol: opts.rel_tol,
        seed: opts.seed,
    })
}
