//! Braid group presentations and exhaustive searches for their permutation
//! representations.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::extend;
use crate::monodromy::MonodromyRep;
use crate::perm::{self, Permutation};
use crate::word::{Alphabet, InclusionMap, Presentation, Word};

/// Largest target degree for [`hom_search`].
pub const MAX_HOM_DEGREE: usize = 6;
/// Largest strand count for [`hom_search`].
pub const MAX_STRANDS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BraidError {
    #[error("need at least 2 strands, got {0}")]
    TooFewStrands(usize),
    #[error("cannot include B_{n} into B_{m}")]
    BadInclusion { n: usize, m: usize },
    #[error("search capacity exceeded: {what} {got} > {limit}")]
    Capacity {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("constraint for generator {0} has the wrong degree")]
    PinDegree(usize),
    #[error("{got} pinned images for {expected} generators")]
    PinCount { expected: usize, got: usize },
    #[error("representation is not over a braid group presentation")]
    NotBraid,
}

/// `B_m` with generators `s1, ..., s{m-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidPresentation {
    strands: usize,
    presentation: Presentation,
}

impl BraidPresentation {
    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn into_presentation(self) -> Presentation {
        self.presentation
    }
}

pub fn generator_name(i: usize) -> String {
    format!("s{}", i + 1)
}

/// Braid relators `s_i s_{i+1} s_i s_{i+1}^-1 s_i^-1 s_{i+1}^-1` and
/// commutators `s_i s_j s_i^-1 s_j^-1` for `|i - j| >= 2`.
pub fn braid_presentation(m: usize) -> Result<BraidPresentation, BraidError> {
    if m < 2 {
        return Err(BraidError::TooFewStrands(m));
    }
    let names: Vec<String> = (0..m - 1).map(generator_name).collect();
    let alphabet = Alphabet::new(&names).expect("distinct names");
    let parse = |text: String| alphabet.parse_word(&text).expect("generated text");
    let mut relators: Vec<Word> = Vec::new();
    for i in 0..m.saturating_sub(2) {
        let (a, b) = (generator_name(i), generator_name(i + 1));
        relators.push(parse(format!("{a} {b} {a} {b}^-1 {a}^-1 {b}^-1")));
    }
    for i in 0..m - 1 {
        for j in i + 2..m - 1 {
            let (a, b) = (generator_name(i), generator_name(j));
            relators.push(parse(format!("{a} {b} {a}^-1 {b}^-1")));
        }
    }
    Ok(BraidPresentation {
        strands: m,
        presentation: Presentation::new(alphabet, relators).expect("same alphabet"),
    })
}

/// `s_i -> (i-1 i)` in `S_m`, 0-based: `s1 -> (0 1)`.
pub fn standard_rep(m: usize) -> Result<MonodromyRep, BraidError> {
    let pres = braid_presentation(m)?.into_presentation();
    let images = (0..m - 1)
        .map(|i| Permutation::transposition(m, i, i + 1))
        .collect();
    Ok(MonodromyRep::new(pres, images).expect("standard representation satisfies the relations"))
}

/// `s_i -> s_i` from `B_n` into `B_m`.
pub fn braid_inclusion(n: usize, m: usize) -> Result<InclusionMap, BraidError> {
    if n > m {
        return Err(BraidError::BadInclusion { n, m });
    }
    let source = braid_presentation(n)?.into_presentation();
    let target = braid_presentation(m)?.into_presentation();
    let pairs: Vec<(String, String)> = (0..n - 1)
        .map(|i| (generator_name(i), generator_name(i)))
        .collect();
    let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    Ok(InclusionMap::parse(source.alphabet(), target.alphabet(), &refs).expect("valid names"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSearchConstraints {
    pub degree: usize,
    /// Fixed images for the first generators; shorter than the generator
    /// count leaves the rest free.
    pub pinned: Vec<Option<Permutation>>,
    pub require_transitive: bool,
    pub require_all_nontrivial: bool,
}

fn check_caps(m: usize, degree: usize) -> Result<(), BraidError> {
    if m < 2 {
        return Err(BraidError::TooFewStrands(m));
    }
    if m > MAX_STRANDS {
        return Err(BraidError::Capacity {
            what: "strands",
            got: m,
            limit: MAX_STRANDS,
        });
    }
    if degree > MAX_HOM_DEGREE || degree == 0 {
        return Err(BraidError::Capacity {
            what: "degree",
            got: degree,
            limit: MAX_HOM_DEGREE,
        });
    }
    Ok(())
}

/// All homomorphisms `B_m -> S_n` meeting the constraints, as generator image
/// tuples in lexicographic order of one-line images.
pub fn hom_search(
    m: usize,
    c: &HomSearchConstraints,
) -> Result<Vec<Vec<Permutation>>, BraidError> {
    check_caps(m, c.degree)?;
    let gens = m - 1;
    if c.pinned.len() > gens {
        return Err(BraidError::PinCount {
            expected: gens,
            got: c.pinned.len(),
        });
    }
    let all = perm::all_permutations(c.degree);
    let mut candidates = Vec::with_capacity(gens);
    for i in 0..gens {
        match c.pinned.get(i).cloned().flatten() {
            Some(p) => {
                if p.degree() != c.degree {
                    return Err(BraidError::PinDegree(i));
                }
                if c.require_all_nontrivial && p.is_identity() {
                    candidates.push(Vec::new());
                } else {
                    candidates.push(alloc::vec![p]);
                }
            }
            None => candidates.push(
                all.iter()
                    .filter(|p| !(c.require_all_nontrivial && p.is_identity()))
                    .cloned()
                    .collect(),
            ),
        }
    }
    let mut out = Vec::new();
    search(&candidates, c.degree, c.require_transitive, &mut |t| {
        out.push(t.to_vec());
        true
    });
    Ok(out)
}

/// Depth-first over generators in order; a relation is checked as soon as
/// both of its generators have images. `visit` returns `false` to stop.
fn search(
    candidates: &[Vec<Permutation>],
    degree: usize,
    require_transitive: bool,
    visit: &mut dyn FnMut(&[Permutation]) -> bool,
) {
    fn go(
        k: usize,
        chosen: &mut Vec<Permutation>,
        candidates: &[Vec<Permutation>],
        degree: usize,
        require_transitive: bool,
        visit: &mut dyn FnMut(&[Permutation]) -> bool,
    ) -> bool {
        if k == candidates.len() {
            if require_transitive && !perm::is_transitive(degree, chosen).expect("same degree") {
                return true;
            }
            return visit(chosen);
        }
        for p in &candidates[k] {
            if k >= 1 && !braid_related(&chosen[k - 1], p) {
                continue;
            }
            if chosen[..k.saturating_sub(1)].iter().any(|q| !commute(q, p)) {
                continue;
            }
            chosen.push(p.clone());
            let more = go(k + 1, chosen, candidates, degree, require_transitive, visit);
            chosen.pop();
            if !more {
                return false;
            }
        }
        true
    }
    let mut chosen = Vec::with_capacity(candidates.len());
    go(0, &mut chosen, candidates, degree, require_transitive, visit);
}

fn then(a: &Permutation, b: &Permutation) -> Permutation {
    a.compose(b).expect("same degree")
}

fn braid_related(a: &Permutation, b: &Permutation) -> bool {
    then(&then(a, b), a) == then(&then(b, a), b)
}

fn commute(a: &Permutation, b: &Permutation) -> bool {
    then(a, b) == then(b, a)
}

/// Checks a tuple against the braid relators by evaluating the relator
/// words, independently of the search's pairwise checks.
pub fn satisfies_relators(m: usize, images: &[Permutation]) -> Result<bool, BraidError> {
    let pres = braid_presentation(m)?.into_presentation();
    Ok(MonodromyRep::new(pres, images.to_vec()).is_ok())
}

/// Whether a tuple meets the constraints other than the relators.
pub fn meets_constraints(images: &[Permutation], c: &HomSearchConstraints) -> bool {
    images.iter().all(|p| p.degree() == c.degree)
        && c.pinned
            .iter()
            .zip(images)
            .all(|(pin, p)| pin.as_ref().is_none_or(|q| q == p))
        && !(c.require_all_nontrivial && images.iter().any(Permutation::is_identity))
        && !(c.require_transitive && !perm::is_transitive(c.degree, images).unwrap_or(false))
}

/// How sheets of the original cover may map to sheets of an extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberMode {
    /// Any surjection of fibers (sheets may be glued).
    Surjective,
    /// An injection of fibers: the original sheets embed, new ones may
    /// appear.
    Injective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionWitness {
    pub degree: usize,
    /// Images of `s1, ..., s{m-1}`.
    pub images: Vec<Permutation>,
    /// Sheet of the original cover to sheet of the extension.
    pub fiber_map: Vec<usize>,
}

fn strands_of(g0: &MonodromyRep) -> Result<usize, BraidError> {
    let n = g0.presentation().generator_count() + 1;
    let expected = braid_presentation(n)?;
    if g0.presentation().alphabet() != expected.presentation().alphabet() {
        return Err(BraidError::NotBraid);
    }
    Ok(n)
}

/// First (lexicographic) transitive `g1: B_m -> S_degree` that restricts to
/// `g0` along the inclusion `B_n -> B_m` through a fiber map of the given
/// kind.
pub fn extension_of_degree(
    g0: &MonodromyRep,
    m: usize,
    degree: usize,
    mode: FiberMode,
) -> Result<Option<ExtensionWitness>, BraidError> {
    let n = strands_of(g0)?;
    check_caps(m, degree)?;
    let inclusion = braid_inclusion(n, m)?;
    let b0 = g0.degree();
    let all = perm::all_permutations(degree);
    let gens = m - 1;
    let candidates: Vec<Vec<Permutation>> = match mode {
        FiberMode::Surjective => (0..gens).map(|_| all.clone()).collect(),
        FiberMode::Injective => {
            if degree < b0 {
                return Ok(None);
            }
            // Up to relabeling the injection is s -> s, which pins each
            // included generator on the first b0 points.
            (0..gens)
                .map(|i| {
                    all.iter()
                        .filter(|p| {
                            i >= n - 1
                                || (0..b0).all(|s| p.apply(s) == g0.generator_image(i).apply(s))
                        })
                        .cloned()
                        .collect()
                })
                .collect()
        }
    };
    let target = braid_presentation(m)?.into_presentation();
    let mut found = None;
    search(&candidates, degree, true, &mut |t| {
        let rep = MonodromyRep::new(target.clone(), t.to_vec()).expect("relations checked");
        let fiber_map = match mode {
            FiberMode::Injective => Some((0..b0).collect()),
            FiberMode::Surjective => {
                extend::compatible_fiber_map(g0, &inclusion, &rep).expect("same alphabets")
            }
        };
        match fiber_map {
            Some(fiber_map) => {
                found = Some(ExtensionWitness {
                    degree,
                    images: t.to_vec(),
                    fiber_map,
                });
                false
            }
            None => true,
        }
    });
    Ok(found)
}

/// Smallest degree `N <= n_max` admitting an extension, with its witness.
pub fn minimal_extension_degree(
    g0: &MonodromyRep,
    m: usize,
    n_max: usize,
    mode: FiberMode,
) -> Result<Option<ExtensionWitness>, BraidError> {
    if n_max > MAX_HOM_DEGREE {
        return Err(BraidError::Capacity {
            what: "degree",
            got: n_max,
            limit: MAX_HOM_DEGREE,
        });
    }
    for degree in 1..=n_max {
        if let Some(w) = extension_of_degree(g0, m, degree, mode)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn t(d: usize, a: usize, b: usize) -> Permutation {
        Permutation::transposition(d, a, b)
    }

    #[test]
    fn presentations() {
        assert!(braid_presentation(1).is_err());
        for m in 2..=7 {
            let b = braid_presentation(m).unwrap();
            let r = b.presentation().relators().len();
            assert_eq!(r, (m - 2) + (m - 2) * m.saturating_sub(3) / 2);
            for w in b.presentation().relators() {
                let again = Word::reduce(w.alphabet(), w.letters().iter().copied()).unwrap();
                assert_eq!(&again, w);
            }
        }
        assert!(braid_presentation(2).unwrap().presentation().is_free());
    }

    #[test]
    fn standard_reps() {
        for m in 2..=6 {
            let rep = standard_rep(m).unwrap();
            assert!(rep.is_transitive());
            assert_eq!(rep.images()[0], t(m, 0, 1));
        }
    }

    #[test]
    fn inclusions() {
        let inc = braid_inclusion(3, 4).unwrap();
        assert_eq!(inc.image(0).to_string(), "s1");
        assert_eq!(inc.image(1).to_string(), "s2");
        assert_eq!(braid_inclusion(2, 5).unwrap().images().len(), 1);
        assert!(braid_inclusion(4, 3).is_err());
    }

    fn pinned(degree: usize, pins: &[Permutation], nontrivial: bool) -> HomSearchConstraints {
        HomSearchConstraints {
            degree,
            pinned: pins.iter().cloned().map(Some).collect(),
            require_transitive: false,
            require_all_nontrivial: nontrivial,
        }
    }

    #[test]
    fn three_strands_into_s3() {
        let mut c = pinned(3, &[t(3, 0, 1), t(3, 1, 2)], false);
        c.require_transitive = true;
        let out = hom_search(3, &c).unwrap();
        assert_eq!(out, vec![standard_rep(3).unwrap().images().to_vec()]);
    }

    #[test]
    fn four_strands_into_s3() {
        let c = pinned(3, &[t(3, 0, 1), t(3, 1, 2)], true);
        let out = hom_search(4, &c).unwrap();
        // Oracle: try all six images of s3 against s1 s3 = s3 s1 and the
        // braid relation with s2, pointwise.
        let brute: Vec<Permutation> = perm::all_permutations(3)
            .into_iter()
            .filter(|p| !p.is_identity())
            .filter(|p| {
                let (a, b) = (t(3, 0, 1), t(3, 1, 2));
                (0..3).all(|x| p.apply(a.apply(x)) == a.apply(p.apply(x)))
                    && (0..3).all(|x| p.apply(b.apply(p.apply(x))) == b.apply(p.apply(b.apply(x))))
            })
            .collect();
        assert_eq!(brute, vec![t(3, 0, 1)]);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0][2], t(3, 0, 1));
        for tuple in &out {
            assert!(satisfies_relators(4, tuple).unwrap());
        }
    }

    #[test]
    fn four_strands_into_s4() {
        let c = pinned(4, &[t(4, 0, 1), t(4, 1, 2)], false);
        let out = hom_search(4, &c).unwrap();
        assert!(out.iter().any(|x| x[2] == t(4, 2, 3)));
    }

    #[test]
    fn outputs_are_valid_complete_and_conjugate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (m, n) in [(3, 3), (4, 3), (3, 4), (4, 4)] {
            let c = HomSearchConstraints {
                degree: n,
                pinned: vec![],
                require_transitive: false,
                require_all_nontrivial: false,
            };
            let out = hom_search(m, &c).unwrap();
            for tuple in &out {
                assert!(satisfies_relators(m, tuple).unwrap());
                let ct = tuple[0].cycle_type();
                assert!(tuple.iter().all(|p| p.cycle_type() == ct));
            }
            let mut sorted = out.clone();
            sorted.sort_by(|a, b| {
                a.iter().map(|p| p.images()).cmp(b.iter().map(|p| p.images()))
            });
            assert_eq!(sorted, out);
            let all = perm::all_permutations(n);
            for _ in 0..500 {
                let tuple: Vec<Permutation> =
                    (0..m - 1).map(|_| all[rng.gen_range(0..all.len())].clone()).collect();
                if satisfies_relators(m, &tuple).unwrap() && meets_constraints(&tuple, &c) {
                    assert!(out.contains(&tuple));
                }
            }
        }
    }

    #[test]
    fn caps() {
        let c = pinned(7, &[], false);
        assert!(matches!(hom_search(3, &c), Err(BraidError::Capacity { .. })));
        let c = pinned(3, &[], false);
        assert!(matches!(hom_search(7, &c), Err(BraidError::Capacity { .. })));
    }

    #[test]
    fn minimal_degrees() {
        let trivial = MonodromyRep::trivial(braid_presentation(3).unwrap().into_presentation());
        for mode in [FiberMode::Surjective, FiberMode::Injective] {
            let w = minimal_extension_degree(&trivial, 4, 3, mode).unwrap().unwrap();
            assert_eq!(w.degree, 1);
        }
        let g0 = standard_rep(3).unwrap();
        let w = minimal_extension_degree(&g0, 4, 5, FiberMode::Surjective).unwrap().unwrap();
        assert_eq!(w.degree, 1);
        let w = minimal_extension_degree(&g0, 4, 5, FiberMode::Injective).unwrap().unwrap();
        assert_eq!(w.degree, 3);
        assert_eq!(w.images, vec![t(3, 0, 1), t(3, 1, 2), t(3, 0, 1)]);
        let w4 = extension_of_degree(&g0, 4, 4, FiberMode::Injective).unwrap().unwrap();
        let rep = MonodromyRep::new(braid_presentation(4).unwrap().into_presentation(), w4.images.clone()).unwrap();
        assert!(rep.is_transitive());
        assert!(extend::is_equivariant(&g0, &braid_inclusion(3, 4).unwrap(), &rep, &w4.fiber_map).unwrap());

        let g2 = standard_rep(2).unwrap();
        let w = minimal_extension_degree(&g2, 3, 3, FiberMode::Injective).unwrap().unwrap();
        assert!(w.degree <= 3);
    }
}
