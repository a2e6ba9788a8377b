//! Numerical exploration of the CP + co-CP splits of a canonical extremal map.
//!
//! Any split of the canonical Choi matrix `H` into a CP part `H1` and a co-CP
//! part `H2` lying in the same face has the shape
//!
//! ```text
//! H1 = [ a1  c  | 0  y  ]     H2 = [ a2  -c  | 0  0  ]
//!      [ c̄   b1 | 0  t1 ]          [ -c̄  b2  | z̄  t2 ]
//!      [ 0   0  | 0  0  ]          [ 0   z   | 0  0  ]
//!      [ ȳ   t̄1 | 0  u1 ]          [ 0   t̄2  | 0  u2 ]
//! ```
//!
//! with `a2 = 1 - a1`, `b2 = (1-u) - b1`, `u2 = u - u1`, `t2 = t - t1`, leaving
//! seven real unknowns. Feasibility is the pair of minor systems for `H1` and
//! `H2^τ`. Under `0 < u < 1`, `y, z ≠ 0` the feasible set is a single point;
//! on the degenerate boundary it contains a segment `b1 ↦ b1 ∓ ε`.

use num_complex::Complex;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::certificate::Certificate;
use crate::certify::{ccp_check, cp_check, FaceCoefficients};
use crate::choi::ChoiMat;
use crate::decompose::decompose_extremal;
use crate::error::{Error, Result};
use crate::extremal::validate_extremal;
use crate::linalg::Mat4;
use crate::scalar::{as_f64, lit, Real};

/// Constraint tolerance used by [`uniqueness_search`] unless overridden.
pub const SEARCH_TOL: f64 = 1e-9;

/// The seven real unknowns of a split. Quantities of the co-CP part are
/// derived on demand from the map's coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real + Serialize"))]
pub struct SplitCandidate<T: Real> {
    pub a1: T,
    pub b1: T,
    pub u1: T,
    pub t1: Complex<T>,
    pub c: Complex<T>,
}

impl<T: Real> SplitCandidate<T> {
    pub fn to_vector(&self) -> [T; 7] {
        [self.a1, self.b1, self.u1, self.t1.re, self.t1.im, self.c.re, self.c.im]
    }

    pub fn from_vector(v: [T; 7]) -> Self {
        Self {
            a1: v[0],
            b1: v[1],
            u1: v[2],
            t1: Complex::new(v[3], v[4]),
            c: Complex::new(v[5], v[6]),
        }
    }

    /// L∞ distance over the seven real coordinates.
    pub fn distance(&self, other: &Self) -> T {
        self.to_vector()
            .iter()
            .zip(other.to_vector())
            .fold(T::zero(), |m, (a, b)| m.max((*a - b).abs()))
    }

    pub fn a2(&self, k: &FaceCoefficients<T>) -> T {
        k.a - self.a1
    }

    pub fn b2(&self, k: &FaceCoefficients<T>) -> T {
        k.b - self.b1
    }

    pub fn u2(&self, k: &FaceCoefficients<T>) -> T {
        k.u - self.u1
    }

    pub fn t2(&self, k: &FaceCoefficients<T>) -> Complex<T> {
        k.t - self.t1
    }

    /// Choi matrices `(H1, H2)` of the split.
    pub fn parts(&self, k: &FaceCoefficients<T>) -> (ChoiMat<T>, ChoiMat<T>) {
        let re = |x: T| Complex::new(x, T::zero());
        let zero = Complex::zero();
        let t2 = self.t2(k);
        let h1 = Mat4::from_rows_unchecked([
            [re(self.a1), self.c, zero, k.y],
            [self.c.conj(), re(self.b1), zero, self.t1],
            [zero, zero, zero, zero],
            [k.y.conj(), self.t1.conj(), zero, re(self.u1)],
        ]);
        let h2 = Mat4::from_rows_unchecked([
            [re(self.a2(k)), -self.c, zero, zero],
            [-self.c.conj(), re(self.b2(k)), k.z.conj(), t2],
            [zero, k.z, zero, zero],
            [zero, t2.conj(), zero, re(self.u2(k))],
        ]);
        (ChoiMat::from_mat4(h1), ChoiMat::from_mat4(h2))
    }
}

pub const CONSTRAINT_NAMES: [&str; 14] = [
    "a1 >= 0",
    "b1 >= 0",
    "u1 >= 0",
    "a2 >= 0",
    "b2 >= 0",
    "u2 >= 0",
    "(CP1) |y|^2 <= a1 u1",
    "(CP2) |t1|^2 <= b1 u1",
    "(CP3) |c|^2 <= a1 b1",
    "(CP4) a1|t1|^2 + u1|c|^2 <= b1(a1 u1 - |y|^2) + 2Re(c t1 conj(y))",
    "(CcP1) |z|^2 <= a2 u2",
    "(CcP2) |t2|^2 <= b2 u2",
    "(CcP3) |c|^2 <= a2 b2",
    "(CcP4) a2|t2|^2 + u2|c|^2 <= b2(a2 u2 - |z|^2) - 2Re(c conj(t2) conj(z))",
];

/// Slack of every constraint, in the order of [`CONSTRAINT_NAMES`].
pub fn constraint_margins<T: Real>(k: &FaceCoefficients<T>, cand: &SplitCandidate<T>) -> [T; 14] {
    let two = lit::<T>(2.0);
    let (a1, b1, u1, t1, c) = (cand.a1, cand.b1, cand.u1, cand.t1, cand.c);
    let (a2, b2, u2, t2) = (cand.a2(k), cand.b2(k), cand.u2(k), cand.t2(k));
    let (y2, z2, c2) = (k.y.norm_sqr(), k.z.norm_sqr(), c.norm_sqr());
    [
        a1,
        b1,
        u1,
        a2,
        b2,
        u2,
        a1 * u1 - y2,
        b1 * u1 - t1.norm_sqr(),
        a1 * b1 - c2,
        b1 * (a1 * u1 - y2) + two * (c * t1 * k.y.conj()).re - a1 * t1.norm_sqr() - u1 * c2,
        a2 * u2 - z2,
        b2 * u2 - t2.norm_sqr(),
        a2 * b2 - c2,
        b2 * (a2 * u2 - z2) - two * (c * t2.conj() * k.z.conj()).re - a2 * t2.norm_sqr() - u2 * c2,
    ]
}

fn is_feasible<T: Real>(k: &FaceCoefficients<T>, cand: &SplitCandidate<T>, tol: T) -> bool {
    constraint_margins(k, cand).iter().all(|&m| m >= -tol)
}

fn extremal_coefficients<T: Real>(h: &ChoiMat<T>, tol: T) -> Result<FaceCoefficients<T>> {
    let cert = validate_extremal(h, tol)?;
    if !cert.is_pass() {
        return Err(Error::NotExtremal(cert.detail));
    }
    FaceCoefficients::extract(h, tol)
}

/// Evaluates the full constraint system for one candidate split.
pub fn feasibility<T: Real>(h: &ChoiMat<T>, cand: &SplitCandidate<T>, tol: T) -> Result<Certificate<T>> {
    let k = extremal_coefficients(h, tol)?;
    let margins = constraint_margins(&k, cand);
    let checks = CONSTRAINT_NAMES
        .iter()
        .zip(margins)
        .map(|(n, m)| (n.to_string(), m))
        .collect();
    Ok(Certificate::from_checks(checks, tol, "feasible split"))
}

/// Reference split: the closed-form one when it exists, otherwise the trivial
/// split putting the whole map on its CP side (`z = 0`) or co-CP side (`y = 0`).
pub fn reference_candidate<T: Real>(h: &ChoiMat<T>, tol: T) -> Result<SplitCandidate<T>> {
    let k = extremal_coefficients(h, tol)?;
    if let Ok(pair) = decompose_extremal(h, tol) {
        return Ok(SplitCandidate {
            a1: pair.h1[(0, 0)].re,
            b1: pair.h1[(1, 1)].re,
            u1: pair.h1[(3, 3)].re,
            t1: pair.h1[(1, 3)],
            c: pair.c,
        });
    }
    if k.z.norm() <= tol {
        Ok(SplitCandidate {
            a1: k.a,
            b1: k.b,
            u1: k.u,
            t1: k.t,
            c: Complex::zero(),
        })
    } else {
        Ok(SplitCandidate {
            a1: T::zero(),
            b1: T::zero(),
            u1: T::zero(),
            t1: Complex::zero(),
            c: Complex::zero(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchConfig {
    /// Half-width of the L∞ box sampled around the reference split.
    pub radius: f64,
    /// Grid spacing of the axis and plane scans.
    pub resolution: f64,
    /// Number of seeded random samples.
    pub samples: usize,
    pub seed: u64,
    /// Constraint tolerance.
    pub tol: f64,
    /// Upper bound on the number of alternates listed in the report.
    pub max_listed: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            radius: 0.2,
            resolution: 1e-2,
            samples: 1_000_000,
            seed: 0,
            tol: SEARCH_TOL,
            max_listed: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real + Serialize"))]
pub struct Alternate<T: Real> {
    pub candidate: SplitCandidate<T>,
    pub distance: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchMeta {
    pub config: SearchConfig,
    pub grid_points: usize,
    pub random_samples: usize,
    /// `true` when `0 < u < 1` and `y, z ≠ 0`, where a single split is expected.
    pub unique_hypotheses: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real + Serialize"))]
pub struct FeasibilityReport<T: Real> {
    /// Reference split the search is centred on.
    pub canonical: SplitCandidate<T>,
    pub canonical_feasible: bool,
    /// Distinct feasible candidates farther than `10 · resolution` from the
    /// reference, farthest first, at most `max_listed` entries.
    pub alternates_found: Vec<Alternate<T>>,
    /// Number of feasible candidates farther than `10 · resolution`.
    pub alternates_total: usize,
    /// Number of evaluated candidates that were feasible.
    pub feasible_count: usize,
    /// L∞ diameter of the feasible candidates found, reference included.
    pub cloud_diameter: T,
    /// Largest L∞ distance from the reference among feasible candidates.
    pub max_distance: T,
    pub search_meta: SearchMeta,
}

struct Cloud<T: Real> {
    reference: SplitCandidate<T>,
    lo: [T; 7],
    hi: [T; 7],
    count: usize,
    max_distance: T,
    threshold: T,
    alternates: Vec<Alternate<T>>,
    alternates_total: usize,
    max_listed: usize,
}

impl<T: Real> Cloud<T> {
    fn new(reference: SplitCandidate<T>, threshold: T, max_listed: usize) -> Self {
        let v = reference.to_vector();
        Self {
            reference,
            lo: v,
            hi: v,
            count: 0,
            max_distance: T::zero(),
            threshold,
            alternates: Vec::new(),
            alternates_total: 0,
            max_listed,
        }
    }

    fn push(&mut self, cand: SplitCandidate<T>) {
        self.count += 1;
        for (i, x) in cand.to_vector().into_iter().enumerate() {
            self.lo[i] = self.lo[i].min(x);
            self.hi[i] = self.hi[i].max(x);
        }
        let distance = cand.distance(&self.reference);
        self.max_distance = self.max_distance.max(distance);
        if distance > self.threshold {
            self.alternates_total += 1;
            self.alternates.push(Alternate { candidate: cand, distance });
            if self.alternates.len() > 4 * self.max_listed.max(1) {
                self.trim();
            }
        }
    }

    fn trim(&mut self) {
        self.alternates.sort_by(|x, y| {
            y.distance
                .partial_cmp(&x.distance)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| {
                    x.candidate
                        .to_vector()
                        .partial_cmp(&y.candidate.to_vector())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
        });
        // axis and plane scans revisit the same points
        self.alternates
            .dedup_by(|x, y| x.candidate.to_vector() == y.candidate.to_vector());
        self.alternates.truncate(self.max_listed);
    }

    fn diameter(&self) -> T {
        self.lo
            .iter()
            .zip(self.hi)
            .fold(T::zero(), |m, (lo, hi)| m.max(hi - *lo))
    }
}

/// Scans for feasible splits other than the reference.
///
/// Two deterministic scans run over the structural box
/// `0 <= a1 <= 1, 0 <= b1 <= 1-u, 0 <= u1 <= u, |Re t1|, |Im t1| <= 2|t|,
/// |Re c|, |Im c| <= 1`: every coordinate axis and every coordinate plane
/// through the reference, at the given resolution. Then `samples` seeded
/// draws perturb a random subset of coordinates of the reference uniformly
/// within `radius`, clamped to the box.
pub fn uniqueness_search<T: Real>(h: &ChoiMat<T>, config: &SearchConfig) -> Result<FeasibilityReport<T>> {
    let valid = |x: f64| x.is_finite() && x > 0.0;
    if !valid(config.resolution) || !valid(config.radius) || !valid(config.tol) {
        return Err(Error::OutOfRange(
            "radius, resolution and tol must be positive and finite".into(),
        ));
    }
    let tol = lit::<T>(config.tol);
    let k = extremal_coefficients(h, tol)?;
    let reference = reference_candidate(h, tol)?;
    let unique_hypotheses = decompose_extremal(h, tol).is_ok();
    let canonical_feasible = is_feasible(&k, &reference, tol);

    let two_t = lit::<T>(2.0) * k.t.norm();
    let lower: [T; 7] = [T::zero(), T::zero(), T::zero(), -two_t, -two_t, -T::one(), -T::one()];
    let upper: [T; 7] = [k.a, k.b, k.u, two_t, two_t, T::one(), T::one()];
    let axis_grid = |i: usize| -> Vec<T> {
        let span = as_f64(upper[i] - lower[i]);
        let n = (span / config.resolution).ceil().max(0.0) as usize;
        if n == 0 {
            return vec![lower[i]];
        }
        (0..=n)
            .map(|s| lower[i] + (upper[i] - lower[i]) * lit::<T>(s as f64 / n as f64))
            .collect()
    };
    let grids: Vec<Vec<T>> = (0..7).map(axis_grid).collect();

    let mut cloud = Cloud::new(reference, lit(10.0 * config.resolution), config.max_listed);
    if canonical_feasible {
        cloud.push(reference);
    }
    let base = reference.to_vector();
    let mut grid_points = 0usize;
    let probe = |v: [T; 7], cloud: &mut Cloud<T>| {
        let cand = SplitCandidate::from_vector(v);
        if is_feasible(&k, &cand, tol) {
            cloud.push(cand);
        }
    };

    for i in 0..7 {
        for &x in &grids[i] {
            let mut v = base;
            v[i] = x;
            probe(v, &mut cloud);
            grid_points += 1;
        }
        for j in (i + 1)..7 {
            for &x in &grids[i] {
                for &y in &grids[j] {
                    let mut v = base;
                    v[i] = x;
                    v[j] = y;
                    probe(v, &mut cloud);
                    grid_points += 1;
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut coords: [usize; 7] = std::array::from_fn(|i| i);
    for _ in 0..config.samples {
        let n_perturbed = rng.gen_range(1..=7);
        coords.shuffle(&mut rng);
        let mut v = base;
        for &i in &coords[..n_perturbed] {
            let offset: f64 = rng.gen_range(-config.radius..=config.radius);
            v[i] = (v[i] + lit(offset)).max(lower[i]).min(upper[i]);
        }
        probe(v, &mut cloud);
    }

    cloud.trim();
    Ok(FeasibilityReport {
        canonical: reference,
        canonical_feasible,
        cloud_diameter: cloud.diameter(),
        max_distance: cloud.max_distance,
        feasible_count: cloud.count,
        alternates_total: cloud.alternates_total,
        alternates_found: cloud.alternates,
        search_meta: SearchMeta {
            config: *config,
            grid_points,
            random_samples: config.samples,
            unique_hypotheses,
        },
    })
}

/// The perturbation `A_ε`: `ε` at the second diagonal position, zero elsewhere.
pub fn epsilon_matrix<T: Real>(eps: T) -> ChoiMat<T> {
    let mut m = Mat4::zeros();
    m[(1, 1)] = Complex::new(eps, T::zero());
    ChoiMat::from_mat4(m)
}

/// For a degenerate extremal matrix (`u = 0`, `y = 0` or `z = 0`) returns
/// `(H - A_ε, A_ε)`: both are CP and co-CP or keep the class of `H`.
pub fn epsilon_family<T: Real>(h: &ChoiMat<T>, eps: T, tol: T) -> Result<(ChoiMat<T>, ChoiMat<T>)> {
    if !(eps > T::zero() && eps.is_finite()) {
        return Err(Error::OutOfRange(format!("eps = {eps} must be positive")));
    }
    let k = extremal_coefficients(h, tol)?;
    let (cp_side, ccp_side) = (k.z.norm() <= tol, k.y.norm() <= tol);
    if !(k.u <= tol || cp_side || ccp_side) {
        return Err(Error::NotDegenerate);
    }
    let a_eps = epsilon_matrix(eps);
    let rest = *h - a_eps;
    let too_large = |reason: &str| Error::EpsilonTooLarge {
        eps: as_f64(eps),
        reason: reason.to_string(),
    };
    if cp_side && !cp_check(&rest, tol)?.is_pass() {
        return Err(too_large("H - A_eps is not completely positive"));
    }
    if ccp_side && !ccp_check(&rest, tol)?.is_pass() {
        return Err(too_large("H - A_eps is not completely copositive"));
    }
    Ok((rest, a_eps))
}

/// The member of the ε-family as a split candidate (its CP part as `H1`).
pub fn epsilon_candidate<T: Real>(h: &ChoiMat<T>, eps: T, tol: T) -> Result<SplitCandidate<T>> {
    let (rest, a_eps) = epsilon_family(h, eps, tol)?;
    let k = FaceCoefficients::extract(h, tol)?;
    let cp_part = if k.z.norm() <= tol { rest } else { a_eps };
    Ok(SplitCandidate {
        a1: cp_part[(0, 0)].re,
        b1: cp_part[(1, 1)].re,
        u1: cp_part[(3, 3)].re,
        t1: cp_part[(1, 3)],
        c: cp_part[(0, 1)],
    })
}

/// Interval `[p²/q, 1 - (1-p)²/(1-q)]` of admissible `r` in the scalar
/// system `p² <= q r`, `(1-p)² <= (1-q)(1-r)`; it is nonempty only at `q = p`.
pub fn pincer_bounds<T: Real>(p: T, q: T) -> (T, T) {
    let one = T::one();
    (p * p / q, one - (one - p) * (one - p) / (one - q))
}
