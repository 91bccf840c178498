//! Weak extension of a cover across a larger base, computed on monodromy.
//!
//! A connected cover over `X_0` is a transitive `rho0: G_0 -> S_b0` with
//! `G_0 = pi_1(X_0 \ R_0)`. Given the induced map `iota: G_0 -> G_1`, the
//! sheets of the extension over `X_1` are the cosets of the subgroup
//! generated by `iota(K)`, where `K` is the stabilizer of a sheet. Each sheet
//! `s` of the original cover maps to the coset of `iota(rep_s)`, which gives
//! the fiber map between the two covers.

use alloc::vec::Vec;

use crate::coset::{self, CosetError, SchreierData, TableStatus};
use crate::monodromy::{MonodromyRep, RepError};
use crate::perm::{self, PermError, Permutation, MAX_SEARCH_DEGREE};
use crate::word::{InclusionMap, Presentation, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtendError {
    #[error("the original cover is not connected (monodromy is not transitive)")]
    NotConnected,
    #[error("inclusion map source does not match the representation's generators")]
    SourceMismatch,
    #[error("inclusion map target does not match the target presentation")]
    TargetMismatch,
    #[error("coset enumeration exceeded {cap} cosets; the index is not established")]
    IndexNotEstablished { cap: usize },
    #[error("surjectivity was assumed but the abelianized map is not onto")]
    SurjectivityRefuted,
    #[error("extension has {b1} sheets, more than the original {b0}, although surjectivity was assumed")]
    SheetBoundViolated { b0: usize, b1: usize },
    #[error("candidate is not a connected cover of the target group")]
    CandidateNotConnected,
    #[error("candidate is not an extension of the original cover")]
    NotAnExtension,
    #[error("presentations differ")]
    PresentationMismatch,
    #[error("sheet {sheet} out of range for degree {degree}")]
    SheetOutOfRange { sheet: usize, degree: usize },
    #[error("degree {degree} exceeds the search limit {limit}")]
    Capacity { degree: usize, limit: usize },
    #[error("number of designated generators must be in 1..=8, got {0}")]
    BadGeneratorCount(usize),
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Debug, Clone)]
pub struct ExtensionProblem {
    pub rho0: MonodromyRep,
    pub g1: Presentation,
    pub inclusion: InclusionMap,
    pub surjectivity_assumed: bool,
    pub cap: usize,
}

impl ExtensionProblem {
    pub fn new(
        rho0: MonodromyRep,
        g1: Presentation,
        inclusion: InclusionMap,
        surjectivity_assumed: bool,
        cap: usize,
    ) -> Result<Self, ExtendError> {
        if inclusion.source() != rho0.presentation().alphabet() {
            return Err(ExtendError::SourceMismatch);
        }
        if inclusion.target() != g1.alphabet() {
            return Err(ExtendError::TargetMismatch);
        }
        if !rho0.is_transitive() {
            return Err(ExtendError::NotConnected);
        }
        Ok(ExtensionProblem {
            rho0,
            g1,
            inclusion,
            surjectivity_assumed,
            cap,
        })
    }

    /// The problem with `G_1 = G_0` and the identity map.
    pub fn identity(rho0: MonodromyRep) -> Result<Self, ExtendError> {
        let g1 = rho0.presentation().clone();
        let inclusion = InclusionMap::identity(g1.alphabet());
        Self::new(rho0, g1, inclusion, true, coset::DEFAULT_COSET_CAP)
    }
}

#[derive(Debug, Clone)]
pub struct ExtensionResult {
    pub rho0: MonodromyRep,
    pub inclusion: InclusionMap,
    pub rho1: MonodromyRep,
    pub b1: usize,
    /// Sheet of the original cover to sheet of the extension.
    pub fiber_map: Vec<usize>,
    pub strong: bool,
    pub schreier: SchreierData,
    /// `iota` applied to the stabilizer generators.
    pub pushed_generators: Vec<Word>,
    /// Whether the abelianized inclusion is onto (necessary for surjectivity).
    pub abelian_surjective: bool,
}

impl ExtensionResult {
    pub fn b0(&self) -> usize {
        self.rho0.degree()
    }
}

/// Computes the maximal weak extension of `p.rho0` along `p.inclusion`.
pub fn weak_extend(p: &ExtensionProblem) -> Result<ExtensionResult, ExtendError> {
    let abelian_surjective = abelianization_onto(&p.inclusion, &p.g1);
    if p.surjectivity_assumed && !abelian_surjective {
        return Err(ExtendError::SurjectivityRefuted);
    }
    let schreier = coset::schreier_generators(&p.rho0, 0).map_err(|e| match e {
        CosetError::NotTransitive => ExtendError::NotConnected,
        e => e.into(),
    })?;
    let pushed_generators = schreier
        .stabilizer_generators
        .iter()
        .map(|w| w.substitute(&p.inclusion))
        .collect::<Result<Vec<_>, _>>()?;
    let table = coset::todd_coxeter(&p.g1, &pushed_generators, p.cap)?;
    if let TableStatus::Exceeded(cap) = table.status() {
        return Err(ExtendError::IndexNotEstablished { cap });
    }
    let rho1 = coset::coset_action(&table)?;
    let b1 = rho1.degree();
    let b0 = p.rho0.degree();
    let fiber_map = schreier
        .representatives
        .iter()
        .map(|w| Ok(table.trace(0, &w.substitute(&p.inclusion)?)))
        .collect::<Result<Vec<_>, WordError>>()?;
    if p.surjectivity_assumed && b1 > b0 {
        return Err(ExtendError::SheetBoundViolated { b0, b1 });
    }
    let strong = is_injective(&fiber_map, b1);
    Ok(ExtensionResult {
        rho0: p.rho0.clone(),
        inclusion: p.inclusion.clone(),
        rho1,
        b1,
        fiber_map,
        strong,
        schreier,
        pushed_generators,
        abelian_surjective,
    })
}

fn is_injective(map: &[usize], codomain: usize) -> bool {
    let mut hit = alloc::vec![false; codomain];
    for &x in map {
        if hit[x] {
            return false;
        }
        hit[x] = true;
    }
    true
}

fn is_surjective(map: &[usize], codomain: usize) -> bool {
    let mut hit = alloc::vec![false; codomain];
    for &x in map {
        hit[x] = true;
    }
    hit.into_iter().all(|h| h)
}

/// True iff the fiber map is injective, i.e. no sheets were glued.
pub fn is_strong(r: &ExtensionResult) -> bool {
    is_injective(&r.fiber_map, r.b1)
}

/// Checks `f(rho0(g)(s)) = rho1(iota(g))(f(s))` for every generator and sheet.
pub fn is_equivariant(
    rho0: &MonodromyRep,
    inclusion: &InclusionMap,
    rho1: &MonodromyRep,
    fiber_map: &[usize],
) -> Result<bool, ExtendError> {
    for g in 0..rho0.presentation().generator_count() {
        let image = inclusion.image(g);
        for s in 0..rho0.degree() {
            let lhs = fiber_map[rho0.generator_image(g).apply(s)];
            let rhs = rho1.trace(fiber_map[s], image);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether the exponent-sum images of the source generators, together with
/// the target relators, span `Z^n` for the target alphabet.
pub fn abelianization_onto(inclusion: &InclusionMap, target: &Presentation) -> bool {
    let n = target.generator_count();
    let mut rows: Vec<Vec<i128>> = inclusion
        .images()
        .iter()
        .chain(target.relators())
        .map(|w| w.exponent_vector().into_iter().map(i128::from).collect())
        .collect();
    lattice_is_full(&mut rows, n)
}

/// Integer row reduction; true iff the rows generate all of `Z^n`.
fn lattice_is_full(rows: &mut [Vec<i128>], n: usize) -> bool {
    let mut top = 0;
    for col in 0..n {
        // Euclid on the column below `top` until one row holds the gcd.
        loop {
            let mut pivot: Option<usize> = None;
            for r in top..rows.len() {
                if rows[r][col] != 0
                    && pivot.is_none_or(|p| rows[r][col].abs() < rows[p][col].abs())
                {
                    pivot = Some(r);
                }
            }
            let Some(p) = pivot else {
                return false;
            };
            rows.swap(top, p);
            let mut done = true;
            for r in top + 1..rows.len() {
                let q = rows[r][col] / rows[top][col];
                if q != 0 {
                    for k in col..n {
                        rows[r][k] -= q * rows[top][k];
                    }
                }
                if rows[r][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[top][col].abs() != 1 {
            return false;
        }
        top += 1;
    }
    true
}

/// Outcome of comparing another extension against the computed one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub candidate_degree: usize,
    pub b1: usize,
    /// Lexicographically smallest compatible fiber surjection.
    pub fiber_map: Vec<usize>,
    /// `candidate_degree <= b1`; must hold.
    pub degree_bound_holds: bool,
    /// When the degrees agree: a permutation conjugating the candidate onto
    /// `rho1`. Must exist.
    pub equivalence: Option<Permutation>,
}

/// Compares a connected extension `candidate` of the same original cover
/// with the computed maximal one.
pub fn maximality_check(
    r: &ExtensionResult,
    candidate: &MonodromyRep,
) -> Result<Verdict, ExtendError> {
    if candidate.presentation() != r.rho1.presentation() {
        return Err(ExtendError::PresentationMismatch);
    }
    for degree in [candidate.degree(), r.b0()] {
        if degree > MAX_SEARCH_DEGREE {
            return Err(ExtendError::Capacity {
                degree,
                limit: MAX_SEARCH_DEGREE,
            });
        }
    }
    if !candidate.is_transitive() {
        return Err(ExtendError::CandidateNotConnected);
    }
    let fiber_map = compatible_fiber_map(&r.rho0, &r.inclusion, candidate)?
        .ok_or(ExtendError::NotAnExtension)?;
    let candidate_degree = candidate.degree();
    let equivalence = if candidate_degree == r.b1 {
        perm::conjugating_permutation(candidate.images(), r.rho1.images())?
    } else {
        None
    };
    Ok(Verdict {
        candidate_degree,
        b1: r.b1,
        fiber_map,
        degree_bound_holds: candidate_degree <= r.b1,
        equivalence,
    })
}

/// Smallest surjection `f` from the sheets of `rho0` onto those of `target`
/// with `f(rho0(g)(s)) = target(iota(g))(f(s))`.
///
/// `rho0` is transitive, so `f` is fixed by `f(0)`; all values of `f(0)` are
/// tried in increasing order.
pub fn compatible_fiber_map(
    rho0: &MonodromyRep,
    inclusion: &InclusionMap,
    target: &MonodromyRep,
) -> Result<Option<Vec<usize>>, ExtendError> {
    let images: Vec<Permutation> = inclusion
        .images()
        .iter()
        .map(|w| target.image(w))
        .collect::<Result<_, _>>()?;
    let inverses: Vec<Permutation> = images.iter().map(Permutation::inverse).collect();
    let b0 = rho0.degree();
    'start: for v in 0..target.degree() {
        let mut f: Vec<Option<usize>> = alloc::vec![None; b0];
        f[0] = Some(v);
        let mut stack = alloc::vec![0usize];
        while let Some(s) = stack.pop() {
            let fs = f[s].expect("assigned before push");
            for g in 0..images.len() {
                let steps = [
                    (rho0.generator_image(g).apply(s), images[g].apply(fs)),
                    (rho0.generator_inverse(g).apply(s), inverses[g].apply(fs)),
                ];
                for (t, ft) in steps {
                    match f[t] {
                        Some(existing) if existing != ft => continue 'start,
                        Some(_) => {}
                        None => {
                            f[t] = Some(ft);
                            stack.push(t);
                        }
                    }
                }
            }
        }
        let f: Vec<usize> = f.into_iter().map(|x| x.expect("transitive")).collect();
        if is_surjective(&f, target.degree()) {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// Whether two representations of the same group are conjugate.
pub fn equivalent(a: &MonodromyRep, b: &MonodromyRep) -> Result<bool, ExtendError> {
    if a.presentation().alphabet() != b.presentation().alphabet() {
        return Err(ExtendError::PresentationMismatch);
    }
    if a.degree() != b.degree() {
        return Ok(false);
    }
    Ok(perm::conjugating_permutation(a.images(), b.images())?.is_some())
}

/// Whether the lift of the loop `w` starting at `sheet` closes up.
pub fn lift_is_closed(rep: &MonodromyRep, w: &Word, sheet: usize) -> Result<bool, ExtendError> {
    if sheet >= rep.degree() {
        return Err(ExtendError::SheetOutOfRange {
            sheet,
            degree: rep.degree(),
        });
    }
    if w.alphabet() != rep.presentation().alphabet() {
        return Err(WordError::AlphabetMismatch.into());
    }
    Ok(rep.trace(sheet, w) == sheet)
}

/// Enumerates every representation of the free group on `k` generators into
/// `S_2` sending each generator to the transposition, and checks they are all
/// equivalent. There is exactly one such representation.
pub fn two_sheet_unique(k: usize) -> Result<bool, ExtendError> {
    if !(1..=8).contains(&k) {
        return Err(ExtendError::BadGeneratorCount(k));
    }
    let pres = Presentation::free(crate::word::Alphabet::numbered("g", k));
    let id = Permutation::identity(2);
    let swap = Permutation::transposition(2, 0, 1);
    let mut reps = Vec::new();
    for mask in 0u32..(1 << k) {
        let images: Vec<Permutation> = (0..k)
            .map(|i| if mask >> i & 1 == 1 { swap.clone() } else { id.clone() })
            .collect();
        if images.iter().any(Permutation::is_identity) {
            continue;
        }
        reps.push(MonodromyRep::new(pres.clone(), images)?);
    }
    if reps.is_empty() {
        return Ok(false);
    }
    for a in &reps {
        for b in &reps {
            if !equivalent(a, b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Galois test: the monodromy group acts simply transitively, i.e. it is
/// transitive and its order equals the degree.
pub fn is_galois(rep: &MonodromyRep) -> Result<bool, ExtendError> {
    if !rep.is_transitive() {
        return Ok(false);
    }
    let order = perm::closure_order(rep.degree(), rep.images(), rep.degree() + 1)?;
    Ok(order == perm::ClosureOrder::Order(rep.degree()))
}
