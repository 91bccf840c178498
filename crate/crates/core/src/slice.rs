//! Numeric monodromy of a cover `P(z, w) = 0`, monic in `w`, over a complex
//! line with coordinate `z`.
//!
//! Branch points are the zeros of the discriminant of `P` in `w`, which is
//! computed as a polynomial in `z`. Loops are lassos from a common basepoint:
//! an approach path, a small counterclockwise circle, and the approach path
//! back. Roots are continued along each path with a Newton corrector and
//! adaptive steps.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)] // math methods come from here when std is absent
use num_traits::Float;
use num_traits::{One, Zero};

use crate::cpoly::{self, CPoly, CPolyError, RootSet};
use crate::monodromy::MonodromyRep;
use crate::perm::Permutation;
use crate::word::{Alphabet, Presentation};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SliceError {
    #[error("cover must have degree at least 1 in w")]
    ZeroDegree,
    #[error("cover is not monic in w (leading coefficient must be a nonzero constant)")]
    NotMonic,
    #[error("discriminant vanishes identically; the cover has a multiple factor")]
    NotSquarefree,
    #[error("point {z} is within the multiple-root threshold of the branch set (root separation {separation:e})")]
    BranchProximity { z: Complex64, separation: f64 },
    #[error("path tracking failed near {at}: step size underflow")]
    TrackingFailure { at: Complex64 },
    #[error("tracked roots at {at} do not match the computed fiber")]
    MatchFailure { at: Complex64 },
    #[error("no sample circle avoids the branch set")]
    NoSampleCircle,
    #[error("interpolation residual {residual:e} exceeds tolerance")]
    InterpolationResidual { residual: f64 },
    #[error("branch point index {0} out of range")]
    NoSuchBranchPoint(usize),
    #[error(transparent)]
    Numeric(#[from] CPolyError),
}

/// Polynomial in `(z, w)` stored by powers of `w`, each coefficient a
/// polynomial in `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly {
    coeffs: Vec<CPoly>,
}

impl BiPoly {
    pub fn new(mut coeffs: Vec<CPoly>) -> Self {
        while coeffs.last().is_some_and(CPoly::is_zero) {
            coeffs.pop();
        }
        BiPoly { coeffs }
    }

    /// Constant-in-`w` polynomial `f(z)`.
    pub fn from_z(f: CPoly) -> Self {
        Self::new(alloc::vec![f])
    }

    pub fn coeffs(&self) -> &[CPoly] {
        &self.coeffs
    }

    pub fn w_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * w + c.eval(z))
    }

    /// The polynomial in `w` obtained by fixing `z`.
    pub fn at(&self, z: Complex64) -> CPoly {
        CPoly::new(self.coeffs.iter().map(|c| c.eval(z)).collect())
    }
}

/// A cover `w^b + c_{b-1}(z) w^{b-1} + ... + c_0(z) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverSlice {
    poly: BiPoly,
}

impl CoverSlice {
    /// `coeffs[k]` multiplies `w^k`. A constant leading coefficient is divided
    /// out.
    pub fn new(coeffs: Vec<CPoly>) -> Result<Self, SliceError> {
        let poly = BiPoly::new(coeffs);
        if poly.w_degree() == 0 {
            return Err(SliceError::ZeroDegree);
        }
        let lead = poly.coeffs.last().expect("degree >= 1");
        if lead.degree() != 0 {
            return Err(SliceError::NotMonic);
        }
        let inv = lead.leading().inv();
        let coeffs = poly.coeffs.iter().map(|c| c.scale(inv)).collect();
        Ok(CoverSlice {
            poly: BiPoly::new(coeffs),
        })
    }

    pub fn degree(&self) -> usize {
        self.poly.w_degree()
    }

    pub fn poly(&self) -> &BiPoly {
        &self.poly
    }

    pub fn at(&self, z: Complex64) -> CPoly {
        self.poly.at(z)
    }

    /// Discriminant in `w` as a polynomial in `z`, by fraction-free
    /// elimination on the Sylvester matrix of `P` and `dP/dw`.
    pub fn discriminant_poly(&self) -> Result<CPoly, SliceError> {
        let b = self.degree();
        if b < 2 {
            return Ok(CPoly::constant(Complex64::one()));
        }
        let p = &self.poly.coeffs;
        let dp: Vec<CPoly> = (1..=b)
            .map(|k| p[k].scale(Complex64::new(k as f64, 0.0)))
            .collect();
        let m = cpoly::sylvester_matrix(p, &dp, CPoly::zero());
        let det = cpoly::poly_det(m, 1e-13);
        let det = if (b * (b - 1) / 2) % 2 == 1 { -&det } else { det };
        let scale = p.iter().map(CPoly::max_norm).fold(1.0, f64::max);
        if det.max_norm() <= 1e-10 * scale.powi(2 * b as i32 - 1) {
            return Err(SliceError::NotSquarefree);
        }
        Ok(det.trim(1e-13))
    }
}

/// Tolerances for branch points and tracking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceOptions {
    /// Tracked roots must land this close (relative) to the computed fiber.
    pub match_tol: f64,
    /// Branch points closer than this are merged.
    pub dedup_tol: f64,
    /// Lasso radius as a fraction of the distance to the nearest other
    /// branch point or the basepoint.
    pub radius_factor: f64,
    /// Largest step along a path.
    pub max_step: f64,
    /// Smallest step before tracking gives up.
    pub min_step: f64,
    /// Relative residual accepted from the root finder.
    pub root_tol: f64,
    /// Relative residual accepted by interpolation.
    pub interp_tol: f64,
}

impl Default for SliceOptions {
    fn default() -> Self {
        SliceOptions {
            match_tol: 1e-8,
            dedup_tol: 1e-8,
            radius_factor: 0.4,
            max_step: 0.05,
            min_step: 1e-12,
            root_tol: cpoly::DEFAULT_ROOT_TOL,
            interp_tol: 1e-8,
        }
    }
}

/// Zeros of the discriminant, merged within `opts.dedup_tol`, in canonical
/// root order.
pub fn branch_points(c: &CoverSlice, opts: &SliceOptions) -> Result<Vec<Complex64>, SliceError> {
    Ok(branch_points_with_multiplicity(c, opts)?
        .into_iter()
        .map(|(z, _)| z)
        .collect())
}

/// Branch points with their multiplicity as zeros of the discriminant.
pub fn branch_points_with_multiplicity(
    c: &CoverSlice,
    opts: &SliceOptions,
) -> Result<Vec<(Complex64, usize)>, SliceError> {
    let d = c.discriminant_poly()?;
    if d.degree() == 0 {
        return Ok(Vec::new());
    }
    // Multiple zeros come out of the root finder as tight clusters.
    let found = cpoly::roots(&d, 1e-10)?.roots;
    let spread = 1e-3 * found.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for z in found {
        match clusters
            .iter_mut()
            .find(|cl| cl.iter().any(|y| (y - z).norm() < spread))
        {
            Some(cl) => cl.push(z),
            None => clusters.push(alloc::vec![z]),
        }
    }
    merge_multiple_zeros(&d, &mut clusters);
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for cl in clusters {
        let k = cl.len();
        let centroid = cl.iter().sum::<Complex64>() / k as f64;
        let z = polish_multiple(&d, centroid, k);
        match out.iter_mut().find(|(y, _)| (y - z).norm() < opts.dedup_tol) {
            Some(entry) => entry.1 += k,
            None => out.push((z, k)),
        }
    }
    out.sort_by(|a, b| cpoly::root_order(&a.0, &b.0));
    Ok(out)
}

/// Relative coefficient noise assumed when predicting how far a multiple
/// zero splits under rounding.
const CLUSTER_NOISE: f64 = 1e-12;

/// Radius within which rounding can scatter the zeros of `d` near `z`, if
/// `z` is a zero of multiplicity `k`.
fn split_radius(d: &CPoly, z: Complex64, k: usize) -> f64 {
    let mut f = d.clone();
    let mut factorial = 1.0;
    for j in 1..=k {
        f = f.derivative();
        factorial *= j as f64;
    }
    let taylor = f.eval(z).norm() / factorial;
    if taylor == 0.0 {
        return f64::INFINITY;
    }
    (CLUSTER_NOISE * d.eval_scale(z) / taylor).powf(1.0 / k as f64)
}

/// Merges clusters whose union is as tight as a single zero of the combined
/// multiplicity would be after rounding. High multiplicities scatter by
/// `noise^(1/k)`, well past any fixed spread.
fn merge_multiple_zeros(d: &CPoly, clusters: &mut Vec<Vec<Complex64>>) {
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let gap = clusters[i]
                    .iter()
                    .flat_map(|a| clusters[j].iter().map(move |b| (a - b).norm()))
                    .fold(f64::INFINITY, f64::min);
                if best.is_none_or(|(g, _, _)| gap < g) {
                    let merged: Vec<Complex64> =
                        clusters[i].iter().chain(&clusters[j]).copied().collect();
                    let k = merged.len();
                    let centroid = merged.iter().sum::<Complex64>() / k as f64;
                    let z = polish_multiple(d, centroid, k);
                    let reach = merged.iter().map(|w| (w - z).norm()).fold(0.0, f64::max);
                    if reach <= 10.0 * split_radius(d, z, k) {
                        best = Some((gap, i, j));
                    }
                }
            }
        }
        let Some((_, i, j)) = best else { return };
        let moved = clusters.swap_remove(j);
        clusters[i].extend(moved);
    }
}

/// Newton on the `(k-1)`-th derivative, where a zero of multiplicity `k` is
/// simple.
fn polish_multiple(d: &CPoly, start: Complex64, k: usize) -> Complex64 {
    let mut f = d.clone();
    for _ in 1..k {
        f = f.derivative();
    }
    let df = f.derivative();
    let mut z = start;
    for _ in 0..20 {
        let v = f.eval(z);
        let dv = df.eval(z);
        if v.is_zero() || dv.is_zero() {
            break;
        }
        let next = z - v / dv;
        if f.eval(next).norm() >= v.norm() {
            break;
        }
        z = next;
    }
    z
}

/// Roots of `P(z, .)`; fails if two of them are closer than the
/// multiple-root threshold.
pub fn fiber(c: &CoverSlice, z: Complex64, opts: &SliceOptions) -> Result<RootSet, SliceError> {
    let p = c.at(z);
    let set = cpoly::roots(&p, opts.root_tol)?;
    let separation = set.min_separation();
    if separation <= cpoly::multiple_root_threshold(&p) {
        return Err(SliceError::BranchProximity { z, separation });
    }
    Ok(set)
}

/// A straight segment or a circular arc, parametrized by `t` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathPiece {
    Segment {
        from: Complex64,
        to: Complex64,
    },
    Arc {
        center: Complex64,
        radius: f64,
        start: f64,
        sweep: f64,
    },
}

impl PathPiece {
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            PathPiece::Segment { from, to } => from + (to - from) * t,
            PathPiece::Arc {
                center,
                radius,
                start,
                sweep,
            } => center + Complex64::from_polar(radius, start + sweep * t),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            PathPiece::Segment { from, to } => (to - from).norm(),
            PathPiece::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn reversed(&self) -> PathPiece {
        match *self {
            PathPiece::Segment { from, to } => PathPiece::Segment { from: to, to: from },
            PathPiece::Arc {
                center,
                radius,
                start,
                sweep,
            } => PathPiece::Arc {
                center,
                radius,
                start: start + sweep,
                sweep: -sweep,
            },
        }
    }
}

/// Concatenation of pieces, each ending where the next starts.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub pieces: Vec<PathPiece>,
}

impl Path {
    pub fn new(pieces: Vec<PathPiece>) -> Self {
        Path { pieces }
    }

    pub fn constant(z: Complex64) -> Self {
        Path::new(alloc::vec![PathPiece::Segment { from: z, to: z }])
    }

    /// Counterclockwise circle around `center` starting and ending at `from`.
    pub fn circle(center: Complex64, from: Complex64) -> Self {
        let d = from - center;
        Path::new(alloc::vec![PathPiece::Arc {
            center,
            radius: d.norm(),
            start: d.arg(),
            sweep: TAU,
        }])
    }

    pub fn start(&self) -> Complex64 {
        self.pieces.first().map_or(Complex64::zero(), |p| p.point(0.0))
    }

    pub fn end(&self) -> Complex64 {
        self.pieces.last().map_or(Complex64::zero(), |p| p.point(1.0))
    }

    pub fn then(&self, other: &Path) -> Path {
        let mut pieces = self.pieces.clone();
        pieces.extend_from_slice(&other.pieces);
        Path::new(pieces)
    }

    pub fn reversed(&self) -> Path {
        Path::new(self.pieces.iter().rev().map(PathPiece::reversed).collect())
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(PathPiece::length).sum()
    }
}

/// Outcome of continuing a fiber along a path.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackResult {
    /// Continued roots, indexed like the starting fiber.
    pub end_roots: Vec<Complex64>,
    /// Root `i` of the start fiber ends at root `permutation(i)` of the
    /// fiber computed at the path's end.
    pub permutation: Permutation,
    pub steps: usize,
    /// Smallest root separation seen along the way.
    pub min_separation: f64,
}

/// Continues `start` along `path` and matches the result against the fiber
/// at the end point.
pub fn track(
    c: &CoverSlice,
    path: &Path,
    start: &RootSet,
    opts: &SliceOptions,
) -> Result<TrackResult, SliceError> {
    let (end_roots, steps, min_separation) = continue_roots(c, path, start.roots.clone(), opts)?;
    let end = path.end();
    let reference = fiber(c, end, opts)?;
    let permutation = match_roots(&end_roots, &reference.roots, opts.match_tol)
        .ok_or(SliceError::MatchFailure { at: end })?;
    Ok(TrackResult {
        end_roots,
        permutation,
        steps,
        min_separation,
    })
}

fn match_roots(tracked: &[Complex64], reference: &[Complex64], tol: f64) -> Option<Permutation> {
    let sep = cpoly::min_separation(reference);
    let mut images = Vec::with_capacity(tracked.len());
    for x in tracked {
        let (j, dist) = nearest(reference, *x);
        if dist > tol * x.norm().max(1.0) || dist >= sep / 3.0 {
            return None;
        }
        images.push(j);
    }
    Permutation::new(images).ok()
}

fn nearest(points: &[Complex64], x: Complex64) -> (usize, f64) {
    points
        .iter()
        .enumerate()
        .map(|(j, y)| (j, (y - x).norm()))
        .fold((usize::MAX, f64::INFINITY), |best, cur| {
            if cur.1 < best.1 {
                cur
            } else {
                best
            }
        })
}

/// Predictor: previous roots. Corrector: Newton on `P(z_next, .)`. A step is
/// accepted when every corrected root is nearest to its own predecessor and
/// moved less than a third of the current minimal separation.
fn continue_roots(
    c: &CoverSlice,
    path: &Path,
    mut roots: Vec<Complex64>,
    opts: &SliceOptions,
) -> Result<(Vec<Complex64>, usize, f64), SliceError> {
    let mut steps = 0;
    let mut min_sep = cpoly::min_separation(&roots);
    for piece in &path.pieces {
        let len = piece.length();
        if len == 0.0 {
            steps += 1;
            continue;
        }
        let max_h = (opts.max_step / len).min(1.0);
        let mut h = max_h;
        let mut t = 0.0;
        while t < 1.0 {
            let t1 = (t + h).min(1.0);
            let z1 = piece.point(t1);
            match corrector_step(c, z1, &roots) {
                Some(next) => {
                    t = t1;
                    roots = next;
                    steps += 1;
                    min_sep = min_sep.min(cpoly::min_separation(&roots));
                    h = (2.0 * h).min(max_h);
                }
                None => {
                    h /= 2.0;
                    if h * len < opts.min_step {
                        return Err(SliceError::TrackingFailure { at: z1 });
                    }
                }
            }
        }
    }
    Ok((roots, steps, min_sep))
}

fn corrector_step(c: &CoverSlice, z: Complex64, prev: &[Complex64]) -> Option<Vec<Complex64>> {
    let p = c.at(z);
    let dp = p.derivative();
    let sep = cpoly::min_separation(prev);
    let mut out = Vec::with_capacity(prev.len());
    for (i, &r) in prev.iter().enumerate() {
        let x = newton(&p, &dp, r)?;
        if (x - r).norm() >= sep / 3.0 || nearest(prev, x).0 != i {
            return None;
        }
        out.push(x);
    }
    Some(out)
}

fn newton(p: &CPoly, dp: &CPoly, start: Complex64) -> Option<Complex64> {
    let mut x = start;
    for _ in 0..30 {
        let d = dp.eval(x);
        if d.is_zero() {
            return None;
        }
        let step = p.eval(x) / d;
        if !step.is_finite() {
            return None;
        }
        x -= step;
        if step.norm() <= 1e-14 * x.norm().max(1.0) {
            return Some(x);
        }
    }
    let v = p.eval(x).norm();
    (v <= 1e-12 * p.eval_scale(x)).then_some(x)
}

/// A loop from the basepoint around one branch point.
#[derive(Debug, Clone, PartialEq)]
pub struct Lasso {
    pub basepoint: Complex64,
    pub center: Complex64,
    pub radius: f64,
    /// From the basepoint to the circle, avoiding the other branch points.
    pub approach: Path,
}

impl Lasso {
    pub fn entry(&self) -> Complex64 {
        self.approach.end()
    }

    /// Approach, one counterclockwise turn, approach reversed.
    pub fn path(&self) -> Path {
        self.approach
            .then(&Path::circle(self.center, self.entry()))
            .then(&self.approach.reversed())
    }
}

/// Branch points sorted by the argument of `(c - b) / (-b)`, ties broken by
/// distance from `b`.
pub fn order_branch_points(points: &[Complex64], basepoint: Complex64) -> Vec<Complex64> {
    let dir = if basepoint.is_zero() {
        Complex64::new(-1.0, 0.0)
    } else {
        -basepoint
    };
    let key = |c: &Complex64| {
        let arg = ((c - basepoint) / dir).arg();
        ((arg * 1e12).round() + 0.0, (c - basepoint).norm())
    };
    let mut out = points.to_vec();
    out.sort_by(|a, b| {
        let (ka, kb) = (key(a), key(b));
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
    out
}

/// One lasso per branch point, for points already in canonical order.
///
/// Another branch point's disk in the way of an approach segment is passed so
/// that points earlier in the order stay on the right.
pub fn build_lassos(ordered: &[Complex64], basepoint: Complex64, radius_factor: f64) -> Vec<Lasso> {
    let radii: Vec<f64> = ordered
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let others = ordered
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &o)| (o - c).norm())
                .fold(f64::INFINITY, f64::min);
            radius_factor * others.min((basepoint - c).norm())
        })
        .collect();
    (0..ordered.len())
        .map(|i| {
            let c = ordered[i];
            let r = radii[i];
            let dir = (basepoint - c) / (basepoint - c).norm();
            let entry = c + dir * r;
            let obstacles: Vec<(Complex64, f64, bool)> = (0..ordered.len())
                .filter(|&j| j != i)
                .map(|j| (ordered[j], radii[j], j < i))
                .collect();
            Lasso {
                basepoint,
                center: c,
                radius: r,
                approach: detour_segment(basepoint, entry, &obstacles),
            }
        })
        .collect()
}

/// Segment from `a` to `b` with every crossed disk `(center, radius,
/// keep_right)` replaced by an arc along its boundary.
fn detour_segment(a: Complex64, b: Complex64, obstacles: &[(Complex64, f64, bool)]) -> Path {
    let d = b - a;
    let mut crossings: Vec<(f64, f64, Complex64, f64, bool)> = Vec::new();
    for &(center, radius, keep_right) in obstacles {
        // |a + s d - center|^2 = radius^2
        let f = a - center;
        let qa = d.norm_sqr();
        let qb = 2.0 * (f.re * d.re + f.im * d.im);
        let qc = f.norm_sqr() - radius * radius;
        let disc = qb * qb - 4.0 * qa * qc;
        if qa == 0.0 || disc <= 0.0 {
            continue;
        }
        let s1 = (-qb - disc.sqrt()) / (2.0 * qa);
        let s2 = (-qb + disc.sqrt()) / (2.0 * qa);
        if s2 <= 0.0 || s1 >= 1.0 {
            continue;
        }
        crossings.push((s1, s2, center, radius, keep_right));
    }
    crossings.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut pieces = Vec::new();
    let mut current = a;
    for (s1, s2, center, radius, keep_right) in crossings {
        let p1 = a + d * s1;
        let p2 = a + d * s2;
        pieces.push(PathPiece::Segment {
            from: current,
            to: p1,
        });
        let t1 = (p1 - center).arg();
        let t2 = (p2 - center).arg();
        let sweep = if keep_right {
            -(t1 - t2).rem_euclid(TAU)
        } else {
            (t2 - t1).rem_euclid(TAU)
        };
        pieces.push(PathPiece::Arc {
            center,
            radius,
            start: t1,
            sweep,
        });
        current = p2;
    }
    pieces.push(PathPiece::Segment { from: current, to: b });
    Path::new(pieces)
}

/// Monodromy of one lasso, in the indexing of the basepoint fiber.
pub fn lasso_monodromy(
    c: &CoverSlice,
    l: &Lasso,
    opts: &SliceOptions,
) -> Result<Permutation, SliceError> {
    let start = fiber(c, l.basepoint, opts)?;
    Ok(track(c, &l.path(), &start, opts)?.permutation)
}

/// Everything computed about the monodromy of a slice.
#[derive(Debug, Clone)]
pub struct SliceMonodromy {
    /// Branch points in lasso order.
    pub branch_points: Vec<Complex64>,
    pub basepoint: Complex64,
    pub fiber: RootSet,
    pub lassos: Vec<Lasso>,
    pub permutations: Vec<Permutation>,
    /// Representation of the free group on `l1, l2, ...`, one generator per
    /// lasso.
    pub rep: MonodromyRep,
    /// Monodromy of the circle `|z| = |basepoint|`, when it encloses every
    /// lasso.
    pub boundary: Option<Permutation>,
    pub min_separation: f64,
    pub steps: usize,
}

impl SliceMonodromy {
    /// Product of the lasso permutations in order.
    pub fn lasso_product(&self) -> Permutation {
        let b = self.fiber.roots.len();
        self.permutations
            .iter()
            .fold(Permutation::identity(b), |acc, p| acc.compose(p).expect("same degree"))
    }

    /// Whether the lasso product equals the boundary circle's monodromy.
    pub fn boundary_consistent(&self) -> Option<bool> {
        self.boundary.as_ref().map(|p| *p == self.lasso_product())
    }
}

/// Name of the free generator for the `i`-th lasso (0-based).
pub fn lasso_name(i: usize) -> String {
    alloc::format!("l{}", i + 1)
}

/// The real basepoint `floor(max |c|) + 2`.
pub fn auto_basepoint(points: &[Complex64]) -> Complex64 {
    let m = points.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Complex64::new(m.floor() + 2.0, 0.0)
}

pub fn full_monodromy(
    c: &CoverSlice,
    basepoint: Option<Complex64>,
    opts: &SliceOptions,
) -> Result<SliceMonodromy, SliceError> {
    let points = branch_points(c, opts)?;
    let basepoint = basepoint.unwrap_or_else(|| auto_basepoint(&points));
    let start = fiber(c, basepoint, opts)?;
    let ordered = order_branch_points(&points, basepoint);
    let lassos = build_lassos(&ordered, basepoint, opts.radius_factor);
    let mut permutations = Vec::with_capacity(lassos.len());
    let mut steps = 0;
    let mut min_separation = start.min_separation();
    for l in &lassos {
        let r = track(c, &l.path(), &start, opts)?;
        steps += r.steps;
        min_separation = min_separation.min(r.min_separation);
        permutations.push(r.permutation);
    }
    let outer = ordered
        .iter()
        .zip(&lassos)
        .map(|(p, l)| p.norm() + l.radius)
        .fold(0.0, f64::max);
    let boundary = if basepoint.norm() > outer {
        let r = track(c, &Path::circle(Complex64::zero(), basepoint), &start, opts)?;
        steps += r.steps;
        min_separation = min_separation.min(r.min_separation);
        Some(r.permutation)
    } else {
        None
    };
    let names: Vec<String> = (0..lassos.len()).map(lasso_name).collect();
    let alphabet = Alphabet::new(&names).expect("distinct generated names");
    let rep = MonodromyRep::with_degree(
        Presentation::free(alphabet),
        c.degree(),
        permutations.clone(),
    )
    .expect("free group, matching degrees");
    Ok(SliceMonodromy {
        branch_points: ordered,
        basepoint,
        fiber: start,
        lassos,
        permutations,
        rep,
        boundary,
        min_separation,
        steps,
    })
}

/// Groups the roots of `P(z, .)` into clusters of coincident roots and
/// returns `(centroid, size)` pairs, largest first.
pub fn root_clusters(c: &CoverSlice, z: Complex64) -> Result<Vec<(Complex64, usize)>, SliceError> {
    let p = c.at(z);
    let found = cpoly::roots(&p, 1e-9)?.roots;
    let spread = 1e-3 * cpoly::root_bound(&p);
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for w in found {
        match clusters
            .iter_mut()
            .find(|cl| cl.iter().any(|y| (y - w).norm() < spread))
        {
            Some(cl) => cl.push(w),
            None => clusters.push(alloc::vec![w]),
        }
    }
    let mut out: Vec<(Complex64, usize)> = clusters
        .into_iter()
        .map(|cl| (cl.iter().sum::<Complex64>() / cl.len() as f64, cl.len()))
        .collect();
    out.sort_by(|a, b| b.1.cmp(&a.1));
    Ok(out)
}

/// Multiplicities of the roots of `P(z, .)`, descending.
pub fn local_multiplicities(c: &CoverSlice, z: Complex64) -> Result<Vec<usize>, SliceError> {
    Ok(root_clusters(c, z)?.into_iter().map(|(_, k)| k).collect())
}

/// Sheets of the basepoint fiber that run into a root of multiplicity
/// `multiplicity` of `P(c, .)` when followed along the approach path of the
/// lasso around branch point `index` (in lasso order). Returns the sheets,
/// sorted, together with the limiting root values.
pub fn sheets_at_branch_point(
    c: &CoverSlice,
    m: &SliceMonodromy,
    index: usize,
    multiplicity: usize,
    opts: &SliceOptions,
) -> Result<(Vec<usize>, Vec<Complex64>), SliceError> {
    let lasso = m.lassos.get(index).ok_or(SliceError::NoSuchBranchPoint(index))?;
    let (at_entry, _, _) = continue_roots(c, &lasso.approach, m.fiber.roots.clone(), opts)?;
    let mut sheets = Vec::new();
    let mut values = Vec::new();
    for (w, k) in root_clusters(c, lasso.center)? {
        if k != multiplicity {
            continue;
        }
        let mut by_distance: Vec<(f64, usize)> = at_entry
            .iter()
            .enumerate()
            .map(|(s, x)| ((x - w).norm(), s))
            .collect();
        by_distance.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        sheets.extend(by_distance.iter().take(k).map(|&(_, s)| s));
        values.push(w);
    }
    sheets.sort_unstable();
    Ok((sheets, values))
}

/// Degree bound for the coefficients of the Weierstrass polynomial of `h`:
/// fiber points grow like `|z|^mu`, so `h` grows like `|z|^H` and the
/// coefficient of `zeta^i` has degree at most `(b - i) H`.
fn weierstrass_degree_bound(c: &CoverSlice, h: &BiPoly) -> usize {
    let b = c.degree();
    let coeffs = c.poly().coeffs();
    let mu = (0..b)
        .filter(|&k| !coeffs[k].is_zero())
        .map(|k| coeffs[k].degree() as f64 / (b - k) as f64)
        .fold(0.0, f64::max);
    let growth = h
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(j, p)| p.degree() as f64 + j as f64 * mu)
        .fold(0.0, f64::max);
    (b as f64 * growth - 1e-9).ceil().max(0.0) as usize
}

/// Elementary-symmetric expansion of `prod_j (zeta - h(z, w_j))` over the
/// fiber at `z`, constant term first.
fn symmetric_values(
    c: &CoverSlice,
    h: &BiPoly,
    z: Complex64,
    opts: &SliceOptions,
) -> Result<Vec<Complex64>, SliceError> {
    let f = fiber(c, z, opts)?;
    let values: Vec<Complex64> = f.roots.iter().map(|&w| h.eval(z, w)).collect();
    let p = CPoly::from_roots(&values);
    Ok((0..=c.degree()).map(|k| p.coeff(k)).collect())
}

/// Coefficients `a_0(z), ..., a_b(z)` of `prod_j (zeta - h(z, w_j))`, found by
/// sampling on a circle and interpolating with an inverse discrete Fourier
/// transform.
pub fn weierstrass_poly_of_function(
    c: &CoverSlice,
    h: &BiPoly,
    opts: &SliceOptions,
) -> Result<Vec<CPoly>, SliceError> {
    let b = c.degree();
    let n = weierstrass_degree_bound(c, h) + 1;
    let points = branch_points(c, opts)?;
    let radius = 1.0;
    let mut samples = None;
    for attempt in 0..20 {
        let offset = 0.1 + 0.37 * attempt as f64;
        let zs: Vec<Complex64> = (0..n)
            .map(|s| Complex64::from_polar(radius, offset + TAU * s as f64 / n as f64))
            .collect();
        let clear = zs
            .iter()
            .all(|z| points.iter().all(|p| (z - p).norm() > 1e-3));
        if !clear {
            continue;
        }
        if let Ok(values) = zs
            .iter()
            .map(|&z| symmetric_values(c, h, z, opts))
            .collect::<Result<Vec<_>, _>>()
        {
            samples = Some((offset, values));
            break;
        }
    }
    let (offset, values) = samples.ok_or(SliceError::NoSampleCircle)?;
    let mut out = Vec::with_capacity(b + 1);
    for i in 0..=b {
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = Complex64::zero();
            for (s, v) in values.iter().enumerate() {
                let angle = -(k as f64) * (offset + TAU * s as f64 / n as f64);
                acc += v[i] * Complex64::from_polar(1.0, angle);
            }
            coeffs.push(acc / (n as f64 * radius.powi(k as i32)));
        }
        let scale = coeffs.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for z in coeffs.iter_mut() {
            if z.re.abs() <= 1e-12 * scale {
                z.re = 0.0;
            }
            if z.im.abs() <= 1e-12 * scale {
                z.im = 0.0;
            }
        }
        out.push(CPoly::new(coeffs));
    }
    // Independent check at points off the sample circle.
    let mut residual = 0.0f64;
    for k in 0..3 {
        let z = Complex64::from_polar(0.6 + 0.5 * k as f64, offset + PI / n as f64 + 0.9 * k as f64);
        let Ok(direct) = symmetric_values(c, h, z, opts) else {
            continue;
        };
        for (i, want) in direct.iter().enumerate() {
            let got = out[i].eval(z);
            residual = residual.max((got - want).norm() / want.norm().max(1.0));
        }
    }
    if residual > opts.interp_tol {
        return Err(SliceError::InterpolationResidual { residual });
    }
    Ok(out)
}

/// Whether `h(z, .)` takes pairwise different values on the fiber over `z`.
pub fn separates_fiber(
    c: &CoverSlice,
    h: &BiPoly,
    z: Complex64,
    tol: f64,
    opts: &SliceOptions,
) -> Result<bool, SliceError> {
    let f = fiber(c, z, opts)?;
    let values: Vec<Complex64> = f.roots.iter().map(|&w| h.eval(z, w)).collect();
    Ok(cpoly::min_separation(&values) > tol)
}
