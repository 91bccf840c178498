//! Coset enumeration and Schreier transversals.
//!
//! [`todd_coxeter`] runs the HLT strategy: subgroup generators are scanned at
//! the base coset, then every live coset in turn has each relator scanned and
//! its row filled. When the table is full a lookahead pass scans relators
//! without defining new cosets, coincidences are collapsed and the table is
//! compacted. If that frees nothing the enumeration stops with
//! [`TableStatus::Exceeded`].
//!
//! Column layout: generator `g` occupies column `2g`, its inverse `2g + 1`.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec::Vec;

use crate::monodromy::{MonodromyRep, RepError};
use crate::perm::Permutation;
use crate::word::{Letter, Presentation, Word, WordError};

pub const DEFAULT_COSET_CAP: usize = 1_000_000;

const UNDEF: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CosetError {
    #[error("representation is not transitive: the cover is not connected")]
    NotTransitive,
    #[error("base sheet {base} out of range for degree {degree}")]
    BaseOutOfRange { base: usize, degree: usize },
    #[error("coset cap must be at least 1")]
    ZeroCap,
    #[error("coset enumeration exceeded {0} cosets")]
    Exceeded(usize),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Coset representatives and point-stabilizer generators read off a
/// transitive permutation representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierData {
    pub base: usize,
    /// `representatives[s]` lifts from the base sheet to sheet `s`.
    pub representatives: Vec<Word>,
    pub stabilizer_generators: Vec<Word>,
}

/// Schreier generators of the stabilizer of `base`.
///
/// The transversal is built breadth first from `base`; at each sheet the
/// generators are tried in order, then their inverses. Generators are
/// `rep_s · g · rep_{s^g}^-1` over sheets `s` in index order and generators
/// `g` in alphabet order, with trivial words dropped.
pub fn schreier_generators(rep: &MonodromyRep, base: usize) -> Result<SchreierData, CosetError> {
    let degree = rep.degree();
    if base >= degree {
        return Err(CosetError::BaseOutOfRange { base, degree });
    }
    if !rep.is_transitive() {
        return Err(CosetError::NotTransitive);
    }
    let alphabet = rep.presentation().alphabet().clone();
    let n = alphabet.len();
    let mut reps: Vec<Option<Word>> = alloc::vec![None; degree];
    reps[base] = Some(Word::identity(&alphabet));
    let mut queue = VecDeque::from([base]);
    while let Some(s) = queue.pop_front() {
        let here = reps[s].clone().expect("queued sheets have representatives");
        let steps = (0..n)
            .map(|g| (Letter::new(g, false), rep.generator_image(g).apply(s)))
            .chain((0..n).map(|g| (Letter::new(g, true), rep.generator_inverse(g).apply(s))));
        for (letter, t) in steps.collect::<Vec<_>>() {
            if reps[t].is_none() {
                reps[t] = Some(here.multiply(&Word::reduce(&alphabet, [letter])?)?);
                queue.push_back(t);
            }
        }
    }
    let representatives: Vec<Word> = reps
        .into_iter()
        .map(|w| w.expect("transitive"))
        .collect();
    let mut stabilizer_generators = Vec::new();
    for s in 0..degree {
        for g in 0..n {
            let t = rep.generator_image(g).apply(s);
            let w = representatives[s]
                .multiply(&Word::generator(&alphabet, g)?)?
                .multiply(&representatives[t].inverse())?;
            if !w.is_identity() {
                stabilizer_generators.push(w);
            }
        }
    }
    Ok(SchreierData {
        base,
        representatives,
        stabilizer_generators,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableStatus {
    Closed,
    Exceeded(usize),
}

/// Result of a coset enumeration. A closed table is standardized: cosets are
/// numbered in breadth-first order from coset 0, scanning generator columns
/// before inverse columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    presentation: Presentation,
    subgroup: Vec<Word>,
    status: TableStatus,
    ncols: usize,
    rows: Vec<u32>,
}

impl CosetTable {
    pub fn status(&self) -> TableStatus {
        self.status
    }

    pub fn is_closed(&self) -> bool {
        self.status == TableStatus::Closed
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn subgroup_generators(&self) -> &[Word] {
        &self.subgroup
    }

    /// Number of cosets; zero unless closed.
    pub fn index(&self) -> usize {
        if self.ncols == 0 {
            return if self.is_closed() { 1 } else { 0 };
        }
        self.rows.len() / self.ncols
    }

    /// Coset reached from `coset` by one letter.
    pub fn act(&self, coset: usize, letter: Letter) -> usize {
        let col = 2 * letter.generator + letter.inverse as usize;
        self.rows[coset * self.ncols + col] as usize
    }

    /// Coset reached from `coset` by a word.
    pub fn trace(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.act(c, l))
    }

    /// Debug dump: one row per coset, tab-separated generator images.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let n = self.presentation.generator_count();
        for c in 0..self.index() {
            for g in 0..n {
                if g > 0 {
                    out.push('\t');
                }
                out.push_str(&alloc::format!("{}", self.act(c, Letter::new(g, false))));
            }
            out.push('\n');
        }
        out
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup` in the group
/// presented by `pres`, holding at most `cap` cosets at a time.
pub fn todd_coxeter(
    pres: &Presentation,
    subgroup: &[Word],
    cap: usize,
) -> Result<CosetTable, CosetError> {
    if cap == 0 {
        return Err(CosetError::ZeroCap);
    }
    let subgroup = subgroup
        .iter()
        .map(|w| w.rebase(pres.alphabet()))
        .collect::<Result<Vec<_>, _>>()?;
    let ncols = 2 * pres.generator_count();
    let to_cols = |w: &Word| -> Vec<u32> {
        w.letters()
            .iter()
            .map(|l| (2 * l.generator + l.inverse as usize) as u32)
            .collect()
    };
    let relators: Vec<Vec<u32>> = pres.relators().iter().map(to_cols).collect();
    let sub_cols: Vec<Vec<u32>> = subgroup.iter().map(to_cols).collect();

    let mut en = Enumerator::new(ncols, cap);
    let outcome = en.run(&sub_cols, &relators);
    let status = match outcome {
        Ok(()) => TableStatus::Closed,
        Err(Full) => TableStatus::Exceeded(cap),
    };
    let rows = match status {
        TableStatus::Closed => en.standardized(),
        TableStatus::Exceeded(_) => Vec::new(),
    };
    Ok(CosetTable {
        presentation: pres.clone(),
        subgroup,
        status,
        ncols,
        rows,
    })
}

/// Permutation action of the group on the cosets of a closed table.
pub fn coset_action(table: &CosetTable) -> Result<MonodromyRep, CosetError> {
    if let TableStatus::Exceeded(cap) = table.status {
        return Err(CosetError::Exceeded(cap));
    }
    let index = table.index();
    let images = (0..table.presentation.generator_count())
        .map(|g| {
            Permutation::new(
                (0..index)
                    .map(|c| table.act(c, Letter::new(g, false)))
                    .collect(),
            )
            .map_err(RepError::from)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MonodromyRep::with_degree(
        table.presentation.clone(),
        index,
        images,
    )?)
}

struct Full;

struct Enumerator {
    ncols: usize,
    cap: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    queue: Vec<u32>,
}

impl Enumerator {
    fn new(ncols: usize, cap: usize) -> Self {
        Enumerator {
            ncols,
            cap,
            table: alloc::vec![UNDEF; ncols],
            parent: alloc::vec![0],
            queue: Vec::new(),
        }
    }

    fn allocated(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn get(&self, c: u32, x: u32) -> u32 {
        self.table[c as usize * self.ncols + x as usize]
    }

    #[inline]
    fn set(&mut self, c: u32, x: u32, v: u32) {
        self.table[c as usize * self.ncols + x as usize] = v;
    }

    #[inline]
    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, x: u32) -> Result<u32, Full> {
        if self.allocated() >= self.cap {
            return Err(Full);
        }
        let new = self.allocated() as u32;
        self.parent.push(new);
        self.table.extend(core::iter::repeat_n(UNDEF, self.ncols));
        self.set(c, x, new);
        self.set(new, x ^ 1, c);
        Ok(new)
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    fn merge(&mut self, a: u32, b: u32) {
        let ra = self.rep(a);
        let rb = self.rep(b);
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let dead = self.queue[i];
            i += 1;
            for x in 0..self.ncols as u32 {
                let d = self.get(dead, x);
                if d == UNDEF {
                    continue;
                }
                self.set(d, x ^ 1, UNDEF);
                let mu = self.rep(dead);
                let nu = self.rep(d);
                let mu_x = self.get(mu, x);
                if mu_x != UNDEF {
                    self.merge(nu, mu_x);
                } else {
                    let nu_inv = self.get(nu, x ^ 1);
                    if nu_inv != UNDEF {
                        self.merge(mu, nu_inv);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, x ^ 1, mu);
                    }
                }
            }
        }
        self.queue.clear();
    }

    /// Scans `w` at coset `c`, defining cosets to complete it.
    fn scan_and_fill(&mut self, c: u32, w: &[u32]) -> Result<(), Full> {
        if w.is_empty() {
            return Ok(());
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.get(f, w[i]) != UNDEF {
                f = self.get(f, w[i]);
                i += 1;
            }
            if (i as isize) > j {
                if f != c {
                    self.coincidence(f, c);
                }
                return Ok(());
            }
            while j >= i as isize && self.get(b, w[j as usize] ^ 1) != UNDEF {
                b = self.get(b, w[j as usize] ^ 1);
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    /// Scans without defining; records deductions and coincidences.
    fn scan(&mut self, c: u32, w: &[u32]) {
        if w.is_empty() {
            return;
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        while (i as isize) <= j && self.get(f, w[i]) != UNDEF {
            f = self.get(f, w[i]);
            i += 1;
        }
        if (i as isize) > j {
            if f != c {
                self.coincidence(f, c);
            }
            return;
        }
        while j >= i as isize && self.get(b, w[j as usize] ^ 1) != UNDEF {
            b = self.get(b, w[j as usize] ^ 1);
            j -= 1;
        }
        if j < i as isize {
            self.coincidence(f, b);
        } else if j == i as isize {
            self.set(f, w[i], b);
            self.set(b, w[i] ^ 1, f);
        }
    }

    fn lookahead(&mut self, relators: &[Vec<u32>]) {
        let mut c = 0u32;
        while (c as usize) < self.allocated() {
            if self.is_live(c) {
                for r in relators {
                    self.scan(c, r);
                    if !self.is_live(c) {
                        break;
                    }
                }
            }
            c += 1;
        }
    }

    /// Renumbers live cosets consecutively, preserving their order.
    fn compact(&mut self) {
        let n = self.allocated();
        let mut new_index = alloc::vec![UNDEF; n];
        let mut next = 0u32;
        for c in 0..n {
            if self.is_live(c as u32) {
                new_index[c] = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next as usize * self.ncols);
        for c in 0..n as u32 {
            if !self.is_live(c) {
                continue;
            }
            for x in 0..self.ncols as u32 {
                let v = self.get(c, x);
                let mapped = if v == UNDEF {
                    UNDEF
                } else {
                    new_index[self.rep(v) as usize]
                };
                table.push(mapped);
            }
        }
        self.table = table;
        self.parent = (0..next).collect();
    }

    /// Lookahead plus compaction. Returns the new position of coset `c` and
    /// whether there is now room for another coset.
    fn make_room(&mut self, relators: &[Vec<u32>], c: u32) -> (u32, bool) {
        self.lookahead(relators);
        let before = (0..c).filter(|&k| self.is_live(k)).count() as u32;
        self.compact();
        (before, self.allocated() < self.cap)
    }

    fn run(&mut self, subgroup: &[Vec<u32>], relators: &[Vec<u32>]) -> Result<(), Full> {
        for w in subgroup {
            loop {
                match self.scan_and_fill(0, w) {
                    Ok(()) => break,
                    Err(Full) => {
                        if !self.make_room(relators, 0).1 {
                            return Err(Full);
                        }
                    }
                }
            }
        }
        let mut c = 0u32;
        'cosets: while (c as usize) < self.allocated() {
            if self.is_live(c) {
                for r in relators {
                    if self.scan_and_fill(c, r).is_err() {
                        let (pos, room) = self.make_room(relators, c);
                        if !room {
                            return Err(Full);
                        }
                        c = pos;
                        continue 'cosets;
                    }
                    if !self.is_live(c) {
                        break;
                    }
                }
                if self.is_live(c) {
                    for x in 0..self.ncols as u32 {
                        if self.get(c, x) == UNDEF && self.define(c, x).is_err() {
                            let (pos, room) = self.make_room(relators, c);
                            if !room {
                                return Err(Full);
                            }
                            c = pos;
                            continue 'cosets;
                        }
                    }
                }
            }
            c += 1;
        }
        Ok(())
    }

    /// Live rows renumbered breadth first from coset 0, generator columns
    /// before inverse columns.
    fn standardized(&mut self) -> Vec<u32> {
        self.compact();
        let n = self.allocated();
        let gens = self.ncols / 2;
        let order_cols: Vec<u32> = (0..gens as u32)
            .map(|g| 2 * g)
            .chain((0..gens as u32).map(|g| 2 * g + 1))
            .collect();
        let mut new_index = alloc::vec![UNDEF; n];
        let mut order = alloc::vec![0u32];
        new_index[0] = 0;
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            i += 1;
            for &x in &order_cols {
                let t = self.get(c, x);
                if new_index[t as usize] == UNDEF {
                    new_index[t as usize] = order.len() as u32;
                    order.push(t);
                }
            }
        }
        let mut rows = Vec::with_capacity(n * self.ncols);
        for &c in &order {
            for x in 0..self.ncols as u32 {
                rows.push(new_index[self.get(c, x) as usize]);
            }
        }
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{self, ClosureOrder};
    use crate::word::Alphabet;
    use alloc::vec;

    fn free(names: &[&str]) -> Presentation {
        Presentation::free(Alphabet::new(names).unwrap())
    }

    fn closed_invariants(t: &CosetTable) {
        assert!(t.is_closed());
        let rep = coset_action(t).unwrap();
        for r in t.presentation().relators() {
            for c in 0..t.index() {
                assert_eq!(t.trace(c, r), c, "relator {r} at coset {c}");
            }
        }
        for w in t.subgroup_generators() {
            assert_eq!(t.trace(0, w), 0, "subgroup generator {w}");
        }
        assert!(rep.is_transitive());
        for c in 0..t.index() {
            for g in 0..t.presentation().generator_count() {
                let x = t.act(c, Letter::new(g, false));
                assert_eq!(t.act(x, Letter::new(g, true)), c);
            }
        }
    }

    #[test]
    fn schreier_of_s3_rep() {
        let pres = free(&["alpha1", "alpha2"]);
        let rep = MonodromyRep::new(
            pres,
            vec![
                Permutation::from_cycles(3, &[&[1, 2]]).unwrap(),
                Permutation::from_cycles(3, &[&[0, 1]]).unwrap(),
            ],
        )
        .unwrap();
        let data = schreier_generators(&rep, 0).unwrap();
        let reps: Vec<String> = data.representatives.iter().map(|w| alloc::format!("{w}")).collect();
        assert_eq!(reps, ["", "alpha2", "alpha2 alpha1"]);
        let gens: Vec<String> = data
            .stabilizer_generators
            .iter()
            .map(|w| alloc::format!("{w}"))
            .collect();
        assert_eq!(
            gens,
            [
                "alpha1",
                "alpha2^2",
                "alpha2 alpha1^2 alpha2^-1",
                "alpha2 alpha1 alpha2 alpha1^-1 alpha2^-1",
            ]
        );
        assert_eq!(gens.len(), 3 * (2 - 1) + 1);
        for w in &data.stabilizer_generators {
            assert_eq!(rep.trace(0, w), 0);
        }
        for (s, w) in data.representatives.iter().enumerate() {
            assert_eq!(rep.trace(0, w), s);
        }
    }

    #[test]
    fn schreier_degenerate_cases() {
        let pres = free(&["a", "b"]);
        let one = MonodromyRep::trivial(pres);
        let data = schreier_generators(&one, 0).unwrap();
        let gens: Vec<String> = data.stabilizer_generators.iter().map(|w| alloc::format!("{w}")).collect();
        assert_eq!(gens, ["a", "b"]);

        let pres = free(&["alpha1"]);
        let rep = MonodromyRep::new(pres, vec![Permutation::transposition(2, 0, 1)]).unwrap();
        let data = schreier_generators(&rep, 0).unwrap();
        let gens: Vec<String> = data.stabilizer_generators.iter().map(|w| alloc::format!("{w}")).collect();
        assert_eq!(gens, ["alpha1^2"]);
    }

    #[test]
    fn schreier_rejects_disconnected() {
        let pres = free(&["a"]);
        let rep = MonodromyRep::new(pres, vec![Permutation::transposition(3, 0, 1)]).unwrap();
        assert_eq!(schreier_generators(&rep, 0), Err(CosetError::NotTransitive));
        assert!(matches!(
            schreier_generators(&rep, 5),
            Err(CosetError::BaseOutOfRange { .. })
        ));
    }

    #[test]
    fn cyclic_group_cosets() {
        let pres = free(&["gamma"]);
        let al = pres.alphabet().clone();
        let t = todd_coxeter(&pres, &[al.parse_word("gamma^2").unwrap()], 100).unwrap();
        assert_eq!(t.index(), 2);
        closed_invariants(&t);
        let rep = coset_action(&t).unwrap();
        assert_eq!(rep.generator_image(0), &Permutation::transposition(2, 0, 1));

        let t = todd_coxeter(&pres, &[al.parse_word("gamma").unwrap()], 100).unwrap();
        assert_eq!(t.index(), 1);
        let rep = coset_action(&t).unwrap();
        assert_eq!(rep.degree(), 1);
    }

    #[test]
    fn s3_presentation() {
        let pres = Presentation::parse(&["x", "y"], &["x^2", "y^2", "x y x y x y"]).unwrap();
        let al = pres.alphabet().clone();
        let t = todd_coxeter(&pres, &[al.parse_word("x").unwrap()], 100).unwrap();
        // Oracle: |<(0 1), (1 2)>| / |<x>| with x of order 2.
        let order = perm::closure_order(
            3,
            &[
                Permutation::transposition(3, 0, 1),
                Permutation::transposition(3, 1, 2),
            ],
            100,
        )
        .unwrap();
        assert_eq!(order, ClosureOrder::Order(6));
        assert_eq!(t.index(), 6 / 2);
        closed_invariants(&t);
        let rep = coset_action(&t).unwrap();
        assert_eq!(rep.generator_image(0).apply(0), 0);

        let t = todd_coxeter(&pres, &[], 100).unwrap();
        assert_eq!(t.index(), 6);
        closed_invariants(&t);
    }

    #[test]
    fn infinite_index_exceeds_cap() {
        let pres = free(&["a", "b"]);
        let al = pres.alphabet().clone();
        let t = todd_coxeter(&pres, &[al.parse_word("a").unwrap()], 500).unwrap();
        assert_eq!(t.status(), TableStatus::Exceeded(500));
        assert_eq!(coset_action(&t), Err(CosetError::Exceeded(500)));
        assert!(matches!(todd_coxeter(&pres, &[], 0), Err(CosetError::ZeroCap)));
    }

    #[test]
    fn lookahead_recovers_space() {
        // Coxeter presentation of S_4; the index of the trivial subgroup is 24.
        let pres = Presentation::parse(
            &["a", "b", "c"],
            &["a^2", "b^2", "c^2", "a b a b a b", "b c b c b c", "a c a c"],
        )
        .unwrap();
        let generous = todd_coxeter(&pres, &[], 10_000).unwrap();
        assert_eq!(generous.index(), 24);
        let tight = todd_coxeter(&pres, &[], 30).unwrap();
        assert_eq!(tight.index(), 24);
        assert_eq!(tight, generous);
        closed_invariants(&tight);
    }

    #[test]
    fn deterministic_and_dumpable() {
        let pres = Presentation::parse(&["x", "y"], &["x^2", "y^3", "x y x y"]).unwrap();
        let a = todd_coxeter(&pres, &[], 1000).unwrap();
        let b = todd_coxeter(&pres, &[], 1000).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.index(), 6);
        let dump = a.dump();
        assert_eq!(dump.lines().count(), 6);
        assert!(dump.lines().all(|l| l.split('\t').count() == 2));
    }
}
