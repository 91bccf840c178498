//! Properties of numeric slice monodromy on random and fixed covers.

use covext_core::cpoly::{self, CPoly};
use covext_core::slice::{self, CoverSlice, SliceOptions};
use covext_core::{Complex64, Permutation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_c(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    c(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

#[test]
fn cubic_discriminant_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..1000 {
        let p = random_c(&mut rng, 3.0);
        let q = random_c(&mut rng, 3.0);
        let poly = CPoly::new(vec![q, p, c(0.0, 0.0), c(1.0, 0.0)]);
        let got = cpoly::discriminant(&poly).unwrap();
        let want = -4.0 * p * p * p - 27.0 * q * q;
        assert!((got - want).norm() <= 1e-9 * want.norm().max(1.0), "{got} vs {want}");
    }
}

/// `w^b - prod (z - r_i)` with distinct random `r_i`.
fn power_cover(b: usize, roots: &[Complex64]) -> CoverSlice {
    let a = CPoly::from_roots(roots);
    let mut coeffs = vec![-&a];
    coeffs.extend((1..b).map(|_| CPoly::zero()));
    coeffs.push(CPoly::constant(c(1.0, 0.0)));
    CoverSlice::new(coeffs).unwrap()
}

#[test]
fn two_sheet_covers_have_full_monodromy() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let opts = SliceOptions::default();
    for _ in 0..5 {
        let n = rng.gen_range(1..=4);
        let roots: Vec<Complex64> = (0..n).map(|_| random_c(&mut rng, 2.0)).collect();
        let m = slice::full_monodromy(&power_cover(2, &roots), None, &opts).unwrap();
        assert_eq!(m.branch_points.len(), n);
        let swap = Permutation::transposition(2, 0, 1);
        assert!(m.permutations.iter().all(|p| *p == swap));
        assert_eq!(m.boundary_consistent(), Some(true));
    }
}

/// Checks boundary consistency and refinement stability, and returns the
/// cycle types alongside the local root multiplicities.
fn check_properties(cover: &CoverSlice) -> Vec<(Vec<usize>, Vec<usize>)> {
    let opts = SliceOptions::default();
    let m = slice::full_monodromy(cover, None, &opts).unwrap();
    assert_eq!(m.boundary_consistent(), Some(true), "lasso product vs boundary circle");
    let finer = SliceOptions {
        max_step: opts.max_step / 2.0,
        ..opts
    };
    let again = slice::full_monodromy(cover, None, &finer).unwrap();
    assert_eq!(again.permutations, m.permutations, "refinement changed a permutation");
    m.branch_points
        .iter()
        .zip(&m.permutations)
        .map(|(point, perm)| {
            let mult = slice::local_multiplicities(cover, *point).unwrap();
            (perm.cycle_type(), mult)
        })
        .collect()
}

fn assert_unibranch(types: &[(Vec<usize>, Vec<usize>)]) {
    for (cycles, mult) in types {
        assert_eq!(cycles, mult);
    }
}

#[test]
fn random_cubic_covers() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..4 {
        let a = CPoly::new((0..2).map(|_| random_c(&mut rng, 1.0)).collect());
        let b = CPoly::new((0..3).map(|_| random_c(&mut rng, 1.0)).collect());
        let cover = CoverSlice::new(vec![b, a, CPoly::zero(), CPoly::from_real(&[1.0])]).unwrap();
        assert_unibranch(&check_properties(&cover));
    }
}

#[test]
fn fixed_covers() {
    // Cubic cover of the three-sheeted example, and the Galois example.
    let q = CPoly::new(vec![c(0.0, 0.0), c(0.0, 1.0 / 27f64.sqrt())]);
    let cubic = CoverSlice::new(vec![
        q,
        CPoly::from_real(&[4f64.powf(-1.0 / 3.0)]),
        CPoly::zero(),
        CPoly::from_real(&[1.0]),
    ])
    .unwrap();
    assert_unibranch(&check_properties(&cubic));
    let galois = power_cover(3, &[c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
    assert_unibranch(&check_properties(&galois));
    // Over the double zero two local branches meet: the four roots coincide
    // but the monodromy splits them into two 2-cycles.
    let quartic = power_cover(4, &[c(0.5, 0.5), c(0.5, 0.5), c(-1.0, 0.2)]);
    let types = check_properties(&quartic);
    assert_eq!(types.len(), 2);
    assert_eq!(types[0], (vec![2, 2], vec![4]));
    assert_eq!(types[1], (vec![4], vec![4]));
}
