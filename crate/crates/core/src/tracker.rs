//! Eigenvalue branches by contour integrals, Rouché-checked continuation
//! along paths, splitting amounts and the extended Θ at split points.

use std::f64::consts::PI;

use serde::Serialize;

use crate::algebra::{
    gcd_squarefree_oracle, roots_exact, Eigen, GaussRat, Matrix, MonicPoly, MultiPoly, UniPoly, C64,
};
use crate::error::{Error, Result};
use crate::scanner::MatrixFamily;

/// Probe ring radius used when none is given.
pub const DEFAULT_PROBE_RADIUS: f64 = 1e-3;
/// Boundary points per disk in the Rouché test.
pub const ROUCHE_POINTS: usize = 64;
const MAX_HALVINGS: i32 = 20;
const Q_START: usize = 16;
const Q_MAX: usize = 1 << 14;

/// Unit Gaussian rationals close to the eighth roots of unity, so probe
/// points stay exact: (1, 0), (20/29, 21/29), (0, 1), …
pub fn probe_direction(t: usize) -> GaussRat {
    let (a, b, d) = match t % 8 {
        0 => (1, 0, 1),
        1 => (20, 21, 29),
        2 => (0, 1, 1),
        3 => (-21, 20, 29),
        4 => (-1, 0, 1),
        5 => (-20, -21, 29),
        6 => (0, -1, 1),
        _ => (21, -20, 29),
    };
    GaussRat::new(GaussRat::ratio(a, d).re, GaussRat::ratio(b, d).re)
}

/// Probe `t` moves coordinate `c` by `radius · u_{(t + 3c) mod 8}`.
pub fn probe_points(xi: &[GaussRat], radius: &GaussRat, count: usize) -> Vec<Vec<GaussRat>> {
    (0..count)
        .map(|t| {
            xi.iter()
                .enumerate()
                .map(|(c, x)| x + &(radius * &probe_direction(t + 3 * c)))
                .collect()
        })
        .collect()
}

/// A positive radius as a decimal rational (12 digits), so probe
/// coordinates have small denominators.
pub fn rational_radius(r: f64) -> Result<GaussRat> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Invalid(format!("radius must be positive and finite, got {r}")));
    }
    let scaled = (r * 1e12).round();
    if scaled >= 1.0 && scaled < 9e15 {
        Ok(GaussRat::ratio(scaled as i64, 1_000_000_000_000))
    } else {
        GaussRat::from_c64(C64::new(r, 0.0)).ok_or(Error::NonFinite)
    }
}

pub fn char_poly_at(cp: &MonicPoly<MultiPoly>, point: &[GaussRat]) -> MonicPoly<GaussRat> {
    MonicPoly::new(cp.poly().map(|c| c.eval(point))).expect("leading coefficient is 1")
}

pub fn char_poly_at_c64(cp: &MonicPoly<MultiPoly>, point: &[C64]) -> UniPoly<C64> {
    cp.poly().map(|c| c.eval_c64(point))
}

fn distinct_at(cp: &MonicPoly<MultiPoly>, point: &[GaussRat]) -> usize {
    gcd_squarefree_oracle(&char_poly_at(cp, point)).0
}

/// True if some probe at `radius` or `radius/2` has more distinct
/// eigenvalues than ξ.
pub fn is_split_point(family: &MatrixFamily, xi: &[GaussRat], radius: f64) -> Result<bool> {
    let cp = family.char_poly();
    let m = distinct_at(&cp, xi);
    let r = rational_radius(radius)?;
    let half = &r * &GaussRat::ratio(1, 2);
    for rr in [r, half] {
        for pt in probe_points(xi, &rr, 8) {
            if distinct_at(&cp, &pt) > m {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchState {
    pub centers: Vec<C64>,
    pub multiplicities: Vec<usize>,
    pub radius: f64,
    pub point: Vec<C64>,
}

/// Disks of radius ¼·(minimum pairwise distance), or 1 for a single root.
pub fn isolate(roots: &[(C64, usize)], point: Vec<C64>) -> BranchState {
    let mut min_d = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            min_d = min_d.min((roots[i].0 - roots[j].0).norm());
        }
    }
    BranchState {
        centers: roots.iter().map(|r| r.0).collect(),
        multiplicities: roots.iter().map(|r| r.1).collect(),
        radius: if min_d.is_finite() { 0.25 * min_d } else { 1.0 },
        point,
    }
}

fn horner(c: &[C64], x: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

/// Trapezoidal sums (Σ w P'/P, Σ w² P'/P)/Q with w = z − center.
fn contour_sums(c: &[C64], center: C64, radius: f64, q: usize) -> Result<(C64, C64)> {
    let mut s1 = C64::new(0.0, 0.0);
    let mut s2 = C64::new(0.0, 0.0);
    for k in 0..q {
        let w = C64::from_polar(radius, 2.0 * PI * k as f64 / q as f64);
        let (p, dp) = horner(c, center + w);
        if p.norm() < 1e-300 {
            return Err(Error::Underflow);
        }
        let f = dp / p;
        s1 += w * f;
        s2 += w * w * f;
    }
    Ok((s1 / q as f64, s2 / q as f64))
}

/// The single distinct zero of multiplicity `multiplicity` inside the circle,
/// from λ = center + (1/(n_j 2πi)) ∮ (z − center) P'(z)/P(z) dz.
///
/// Q doubles from 16 until successive values agree to 1e−12·(1 + |λ|).
pub fn contour_root(p: &UniPoly<C64>, center: C64, radius: f64, multiplicity: usize) -> Result<C64> {
    if multiplicity == 0 || !(radius > 0.0) {
        return Err(Error::Invalid("contour needs a positive radius and multiplicity".into()));
    }
    let c = p.coeffs();
    let nj = multiplicity as f64;
    let mut q = Q_START;
    let (_, s2) = contour_sums(c, center, radius, q)?;
    let mut prev = center + s2 / nj;
    while q < Q_MAX {
        q *= 2;
        let (s1, s2) = contour_sums(c, center, radius, q)?;
        let cur = center + s2 / nj;
        if (cur - prev).norm() < 1e-12 * (1.0 + cur.norm()) {
            // winding number must match the claimed multiplicity
            if (s1 - C64::new(nj, 0.0)).norm() > 1e-6 {
                return Err(Error::Invalid(format!(
                    "contour encloses {:.3} zeros, expected {multiplicity}",
                    s1.re
                )));
            }
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NoConvergence)
}

/// |P_new − P_old| < |P_old| at the sampled boundary points of every disk.
pub fn rouche_holds(old: &UniPoly<C64>, new: &UniPoly<C64>, state: &BranchState) -> bool {
    let diff = new.sub(old);
    state.centers.iter().all(|&w| {
        (0..ROUCHE_POINTS).all(|k| {
            let z = w + C64::from_polar(state.radius, 2.0 * PI * k as f64 / ROUCHE_POINTS as f64);
            diff.eval(&z).norm() < old.eval(&z).norm()
        })
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TrackSample {
    /// Path parameter: segment index plus fraction along the segment.
    pub t: f64,
    pub point: Vec<C64>,
    pub values: Vec<C64>,
    pub multiplicities: Vec<usize>,
    /// max_j |P(ζ(t))(λ_j(t))|
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitEvent {
    pub t_lo: f64,
    pub t_hi: f64,
    pub point_lo: Vec<C64>,
    pub point_hi: Vec<C64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrackResult {
    pub samples: Vec<TrackSample>,
    pub events: Vec<SplitEvent>,
}

struct Path<'a> {
    vertices: &'a [Vec<C64>],
}

impl Path<'_> {
    fn end(&self) -> f64 {
        (self.vertices.len() - 1) as f64
    }

    fn at(&self, t: f64) -> Vec<C64> {
        let seg = (t.floor() as usize).min(self.vertices.len() - 2);
        let s = t - seg as f64;
        let (a, b) = (&self.vertices[seg], &self.vertices[seg + 1]);
        a.iter().zip(b).map(|(x, y)| x + (y - x) * s).collect()
    }
}

enum Advance {
    Reached(BranchState),
    Collapsed { t_last: f64 },
}

struct Tracker<'a> {
    cp: MonicPoly<MultiPoly>,
    path: Path<'a>,
    nominal: f64,
}

impl Tracker<'_> {
    fn poly(&self, t: f64) -> UniPoly<C64> {
        char_poly_at_c64(&self.cp, &self.path.at(t))
    }

    /// Moves the branches from `t_from` to `t_to` (either direction) with
    /// Rouché-accepted sub-steps.
    fn advance(&self, mut state: BranchState, t_from: f64, t_to: f64) -> Advance {
        let dir = if t_to >= t_from { 1.0 } else { -1.0 };
        let min_step = self.nominal * 2f64.powi(-MAX_HALVINGS);
        let mut t = t_from;
        let mut p_cur = self.poly(t);
        let mut h = (t_to - t).abs();
        while (t_to - t) * dir > 0.0 {
            h = h.min((t_to - t).abs());
            loop {
                if h < min_step {
                    return Advance::Collapsed { t_last: t };
                }
                let t_new = if h >= (t_to - t).abs() { t_to } else { t + dir * h };
                let p_new = self.poly(t_new);
                if rouche_holds(&p_cur, &p_new, &state) {
                    let values: Result<Vec<C64>> = state
                        .centers
                        .iter()
                        .zip(&state.multiplicities)
                        .map(|(&w, &nj)| contour_root(&p_new, w, state.radius, nj))
                        .collect();
                    if let Ok(values) = values {
                        let roots: Vec<(C64, usize)> =
                            values.into_iter().zip(state.multiplicities.iter().copied()).collect();
                        state = isolate(&roots, self.path.at(t_new));
                        t = t_new;
                        p_cur = p_new;
                        h *= 2.0;
                        break;
                    }
                }
                h *= 0.5;
            }
        }
        Advance::Reached(state)
    }

    /// Fresh branches at a non-splitting path point.
    fn init(&self, family: &MatrixFamily, t: f64) -> Result<Option<BranchState>> {
        let pt = self.path.at(t);
        let exact = crate::scanner::exact_point(&pt)?;
        if is_split_point(family, &exact, DEFAULT_PROBE_RADIUS)? {
            return Ok(None);
        }
        let roots: Vec<(C64, usize)> = roots_exact(&char_poly_at(&self.cp, &exact))
            .into_iter()
            .map(|e| (e.value, e.multiplicity))
            .collect();
        Ok(Some(isolate(&roots, pt)))
    }

    fn sample(&self, t: f64, state: &BranchState) -> TrackSample {
        let p = self.poly(t);
        let residual = state.centers.iter().map(|z| p.eval(z).norm()).fold(0.0, f64::max);
        TrackSample {
            t,
            point: state.point.clone(),
            values: state.centers.clone(),
            multiplicities: state.multiplicities.clone(),
            residual,
        }
    }
}

/// Continues the eigenvalue branches along the polyline through `path`,
/// sampling at `steps` equispaced nodes per segment.
///
/// Each sub-step is accepted only when the Rouché inequality holds on every
/// disk; after 20 halvings below the nominal step a split event is emitted.
/// The event is bracketed from both sides: tracking restarts at the next
/// non-splitting node and runs backwards until it collapses too.
pub fn track_path(family: &MatrixFamily, path: &[Vec<C64>], steps: usize) -> Result<TrackResult> {
    if path.len() < 2 {
        return Err(Error::Invalid("path needs at least two vertices".into()));
    }
    if steps == 0 {
        return Err(Error::Invalid("steps must be positive".into()));
    }
    if let Some(v) = path.iter().find(|v| v.len() != family.nparams()) {
        return Err(Error::Invalid(format!(
            "path vertex has {} coordinates, family has {} parameters",
            v.len(),
            family.nparams()
        )));
    }
    let tr = Tracker {
        cp: family.char_poly(),
        path: Path { vertices: path },
        nominal: 1.0 / steps as f64,
    };
    let nodes: Vec<f64> = (0..=(path.len() - 1) * steps)
        .map(|k| (k / steps) as f64 + (k % steps) as f64 / steps as f64)
        .collect();
    let mut state = tr
        .init(family, 0.0)?
        .ok_or_else(|| Error::Invalid("path start is a splitting point".into()))?;
    let mut samples = vec![tr.sample(0.0, &state)];
    let mut events = Vec::new();
    let mut k = 1;
    while k < nodes.len() {
        let t_prev = nodes[k - 1].max(samples.last().map_or(0.0, |s| s.t));
        match tr.advance(state.clone(), t_prev, nodes[k]) {
            Advance::Reached(s) => {
                state = s;
                samples.push(tr.sample(nodes[k], &state));
                k += 1;
            }
            Advance::Collapsed { t_last } => {
                // restart at the next node that is not a splitting point
                let mut restart = None;
                let mut j = k;
                while j < nodes.len() {
                    if let Some(s) = tr.init(family, nodes[j])? {
                        restart = Some((j, s));
                        break;
                    }
                    j += 1;
                }
                let Some((j, s)) = restart else {
                    events.push(SplitEvent {
                        t_lo: t_last,
                        t_hi: tr.path.end(),
                        point_lo: tr.path.at(t_last),
                        point_hi: tr.path.at(tr.path.end()),
                    });
                    break;
                };
                let t_hi = match tr.advance(s.clone(), nodes[j], t_last) {
                    Advance::Collapsed { t_last: back } => back,
                    Advance::Reached(_) => t_last,
                };
                events.push(SplitEvent {
                    t_lo: t_last,
                    t_hi,
                    point_lo: tr.path.at(t_last),
                    point_hi: tr.path.at(t_hi),
                });
                state = s;
                samples.push(tr.sample(nodes[j], &state));
                k = j + 1;
            }
        }
    }
    Ok(TrackResult { samples, events })
}

#[derive(Clone, Debug, Serialize)]
pub struct SplittingAmounts {
    pub eigenvalues: Vec<C64>,
    pub multiplicities: Vec<usize>,
    pub amounts: Vec<usize>,
    /// Isolation radius ε around the eigenvalues of A(ξ).
    pub epsilon: f64,
    pub probe_radius: f64,
    pub probes_used: usize,
}

fn amounts_at_radius(
    cp: &MonicPoly<MultiPoly>,
    xi: &[GaussRat],
    mu: &[Eigen],
    eps: f64,
    radius: f64,
    count: usize,
) -> Result<Option<(Vec<usize>, usize)>> {
    let r = rational_radius(radius)?;
    let spectra: Vec<Vec<Eigen>> = probe_points(xi, &r, count)
        .iter()
        .map(|p| roots_exact(&char_poly_at(cp, p)))
        .collect();
    // probes with fewer distinct eigenvalues than the best may lie on the splitting set
    let m_max = spectra.iter().map(Vec::len).max().unwrap_or(0);
    let mut found: Option<Vec<usize>> = None;
    let mut used = 0;
    for spec in spectra.iter().filter(|s| s.len() == m_max) {
        let mut kappa = Vec::with_capacity(mu.len());
        for m in mu {
            let inside: Vec<&Eigen> = spec.iter().filter(|e| (e.value - m.value).norm() < eps).collect();
            let total: usize = inside.iter().map(|e| e.multiplicity).sum();
            if total != m.multiplicity {
                return Ok(None);
            }
            kappa.push(inside.len());
        }
        match &found {
            Some(prev) if *prev != kappa => return Ok(None),
            _ => found = Some(kappa),
        }
        used += 1;
    }
    Ok(found.map(|k| (k, used)))
}

/// κ_j: how many distinct eigenvalues of A(ζ) lie near μ_j for ζ on a probe
/// ring around ξ. One retry at half the radius before reporting
/// disagreement.
pub fn splitting_amounts(
    family: &MatrixFamily,
    xi: &[GaussRat],
    radius: f64,
    probes: usize,
) -> Result<SplittingAmounts> {
    if !(1..=8).contains(&probes) {
        return Err(Error::Invalid("probe count must be between 1 and 8".into()));
    }
    let a = family.eval(xi)?;
    let cp = family.char_poly();
    let mu = roots_exact(&char_poly_at(&cp, xi));
    debug_assert_eq!(mu.iter().map(|e| e.multiplicity).sum::<usize>(), a.rows());
    let eps = isolate(
        &mu.iter().map(|e| (e.value, e.multiplicity)).collect::<Vec<_>>(),
        Vec::new(),
    )
    .radius;
    for r in [radius, radius / 2.0] {
        if let Some((amounts, used)) = amounts_at_radius(&cp, xi, &mu, eps, r, probes)? {
            return Ok(SplittingAmounts {
                eigenvalues: mu.iter().map(|e| e.value).collect(),
                multiplicities: mu.iter().map(|e| e.multiplicity).collect(),
                amounts,
                epsilon: eps,
                probe_radius: r,
                probes_used: used,
            });
        }
    }
    Err(Error::ProbeDisagreement)
}

/// Θ_A(ζ) = ∏ (μ_j − A(ζ))^{κ_j}; off the splitting set every κ_j = 1 and
/// this is the ordinary product over distinct eigenvalues.
pub fn theta_extended(family: &MatrixFamily, zeta: &[GaussRat]) -> Result<Matrix<C64>> {
    let a = family.eval(zeta)?;
    let cp = family.char_poly();
    let mu = roots_exact(&char_poly_at(&cp, zeta));
    let kappa = if is_split_point(family, zeta, DEFAULT_PROBE_RADIUS)? {
        splitting_amounts(family, zeta, DEFAULT_PROBE_RADIUS, 8)?.amounts
    } else {
        vec![1; mu.len()]
    };
    let n = a.rows();
    if mu.iter().all(|e| e.exact.is_some()) {
        let mut theta = Matrix::<GaussRat>::identity(n);
        for (e, &k) in mu.iter().zip(&kappa) {
            let f = a.shifted(e.exact.as_ref().unwrap()).pow(k as u32);
            theta = theta.mul(&f);
        }
        return Ok(theta.to_c64());
    }
    let af = a.to_c64();
    let mut theta = Matrix::<C64>::identity(n);
    for (e, &k) in mu.iter().zip(&kappa) {
        theta = theta.mul(&af.shifted(&e.value).pow(k as u32));
    }
    Ok(theta)
}

impl BranchState {
    /// Disks pairwise disjoint.
    pub fn disjoint(&self) -> bool {
        let c = &self.centers;
        (0..c.len()).all(|i| (i + 1..c.len()).all(|j| (c[i] - c[j]).norm() > 2.0 * self.radius))
    }
}
