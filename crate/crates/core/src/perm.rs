//! Permutations of `{0, ..., d-1}` and the small amount of group theory the
//! covers need: transitivity, naive closure and simultaneous conjugacy.
//!
//! Composition reads left to right: `p.compose(&q)` applies `p` first. With
//! this convention the monodromy of a concatenated loop `u·v` is
//! `rho(u).compose(&rho(v))`.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;
use core::fmt;

/// Largest degree accepted by [`closure_order`].
pub const MAX_CLOSURE_DEGREE: usize = 64;
/// Largest degree accepted by the exhaustive searches over `S_d`.
pub const MAX_SEARCH_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("images do not form a bijection of 0..{0}")]
    NotBijective(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("degree {degree} exceeds the limit {limit}")]
    Capacity { degree: usize, limit: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, PermError> {
        let d = images.len();
        let mut seen = alloc::vec![false; d];
        for &i in &images {
            if i >= d || seen[i] {
                return Err(PermError::NotBijective(d));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    pub fn transposition(degree: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..degree).collect();
        images.swap(a, b);
        Permutation { images }
    }

    /// Builds a permutation from 0-based cycles; points not mentioned are fixed.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(PermError::NotBijective(degree));
                }
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` first, then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.then(other))
    }

    pub(crate) fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = alloc::vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = alloc::vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths, longest first.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn order(&self) -> usize {
        self.cycle_type().into_iter().fold(1, lcm)
    }

    /// Cycle notation with 1-based points, fixed points included: `(1 2)(3)`.
    pub fn cycle_notation(&self) -> alloc::string::String {
        use core::fmt::Write;
        let mut s = alloc::string::String::new();
        for cycle in self.cycles() {
            s.push('(');
            for (k, x) in cycle.iter().enumerate() {
                if k > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{}", x + 1);
            }
            s.push(')');
        }
        s
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_notation())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation())
    }
}

fn check_degrees(degree: usize, gens: &[Permutation]) -> Result<(), PermError> {
    for g in gens {
        if g.degree() != degree {
            return Err(PermError::DegreeMismatch(degree, g.degree()));
        }
    }
    Ok(())
}

/// Orbit of `start` under the group generated by `gens`, in discovery order.
pub fn orbit(degree: usize, gens: &[Permutation], start: usize) -> Vec<usize> {
    let mut seen = alloc::vec![false; degree];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    seen[start] = true;
    queue.push_back(start);
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    order
}

/// True iff the generated group acts transitively on `0..degree`.
pub fn is_transitive(degree: usize, gens: &[Permutation]) -> Result<bool, PermError> {
    check_degrees(degree, gens)?;
    if degree == 0 {
        return Ok(true);
    }
    // Finite group: forward images alone reach the whole orbit.
    Ok(orbit(degree, gens, 0).len() == degree)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureOrder {
    Order(usize),
    Exceeded,
}

/// Order of the generated group by naive closure, or `Exceeded` once more
/// than `cap` elements have been found.
pub fn closure_order(
    degree: usize,
    gens: &[Permutation],
    cap: usize,
) -> Result<ClosureOrder, PermError> {
    check_degrees(degree, gens)?;
    if degree > MAX_CLOSURE_DEGREE {
        return Err(PermError::Capacity {
            degree,
            limit: MAX_CLOSURE_DEGREE,
        });
    }
    let id = Permutation::identity(degree);
    let mut seen: BTreeSet<Permutation> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = p.then(g);
            if !seen.contains(&q) {
                if seen.len() >= cap {
                    return Ok(ClosureOrder::Exceeded);
                }
                seen.insert(q.clone());
                queue.push_back(q);
            }
        }
    }
    Ok(ClosureOrder::Order(seen.len()))
}

/// Advances `v` to the next permutation in lexicographic order; false at the end.
pub(crate) fn next_lex(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All permutations of the given degree in lexicographic order of images.
pub fn all_permutations(degree: usize) -> Vec<Permutation> {
    let mut v: Vec<usize> = (0..degree).collect();
    let mut out = Vec::new();
    loop {
        out.push(Permutation { images: v.clone() });
        if !next_lex(&mut v) {
            break;
        }
    }
    out
}

/// Searches `S_d` in lexicographic order for `sigma` with
/// `sigma^-1 · a[i] · sigma = b[i]` for every `i` (left-to-right products),
/// i.e. `sigma(a[i](x)) = b[i](sigma(x))`. Returns the smallest witness.
pub fn conjugating_permutation(
    a: &[Permutation],
    b: &[Permutation],
) -> Result<Option<Permutation>, PermError> {
    if a.len() != b.len() {
        return Err(PermError::DegreeMismatch(a.len(), b.len()));
    }
    let degree = match a.first() {
        Some(p) => p.degree(),
        None => return Ok(Some(Permutation::identity(0))),
    };
    check_degrees(degree, a)?;
    check_degrees(degree, b)?;
    if degree > MAX_SEARCH_DEGREE {
        return Err(PermError::Capacity {
            degree,
            limit: MAX_SEARCH_DEGREE,
        });
    }
    for (p, q) in a.iter().zip(b) {
        if p.cycle_type() != q.cycle_type() {
            return Ok(None);
        }
    }
    let mut sigma: Vec<usize> = (0..degree).collect();
    loop {
        let ok = a.iter().zip(b).all(|(p, q)| {
            (0..degree).all(|x| sigma[p.apply(x)] == q.apply(sigma[x]))
        });
        if ok {
            return Ok(Some(Permutation { images: sigma }));
        }
        if !next_lex(&mut sigma) {
            return Ok(None);
        }
    }
}

/// Conjugates every permutation by `sigma`: `sigma^-1 · p · sigma`.
pub fn conjugate_all(gens: &[Permutation], sigma: &Permutation) -> Vec<Permutation> {
    let inv = sigma.inverse();
    gens.iter().map(|p| inv.then(p).then(sigma)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn cyc(d: usize, c: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(d, c).unwrap()
    }

    #[test]
    fn rejects_non_bijections() {
        assert_eq!(Permutation::new(vec![0, 0]), Err(PermError::NotBijective(2)));
        assert_eq!(Permutation::new(vec![0, 2]), Err(PermError::NotBijective(2)));
    }

    #[test]
    fn composition_convention() {
        let id = Permutation::identity(3);
        let t01 = cyc(3, &[&[0, 1]]);
        let t12 = cyc(3, &[&[1, 2]]);
        assert_eq!(id.compose(&t01).unwrap(), t01);
        assert!(t01.compose(&t01).unwrap().is_identity());
        // pointwise: x -> t12(t01(x)); 0->1->2, 1->0->0, 2->2->1
        assert_eq!(t01.compose(&t12).unwrap().images(), &[2, 0, 1]);
        assert_eq!(
            t01.compose(&Permutation::identity(2)),
            Err(PermError::DegreeMismatch(3, 2))
        );
    }

    #[test]
    fn cycle_types() {
        assert_eq!(Permutation::identity(3).cycle_type(), vec![1, 1, 1]);
        assert_eq!(cyc(3, &[&[0, 1]]).cycle_type(), vec![2, 1]);
        assert_eq!(cyc(3, &[&[0, 1, 2]]).cycle_type(), vec![3]);
    }

    #[test]
    fn notation() {
        assert_eq!(cyc(3, &[&[0, 1]]).to_string(), "(1 2)(3)");
        assert_eq!(Permutation::identity(2).to_string(), "(1)(2)");
    }

    #[test]
    fn transitivity() {
        let gens = [cyc(3, &[&[0, 1]]), cyc(3, &[&[1, 2]])];
        assert!(is_transitive(3, &gens).unwrap());
        assert!(!is_transitive(3, &gens[..1]).unwrap());
        assert!(is_transitive(1, &[]).unwrap());
        assert!(!is_transitive(3, &[]).unwrap());
    }

    #[test]
    fn closure() {
        let gens = [cyc(3, &[&[0, 1]]), cyc(3, &[&[1, 2]])];
        assert_eq!(closure_order(3, &gens, 100).unwrap(), ClosureOrder::Order(6));
        assert_eq!(
            closure_order(3, &[Permutation::identity(3)], 100).unwrap(),
            ClosureOrder::Order(1)
        );
        assert_eq!(
            closure_order(3, &[cyc(3, &[&[0, 1, 2]])], 100).unwrap(),
            ClosureOrder::Order(3)
        );
        assert_eq!(closure_order(3, &gens, 4).unwrap(), ClosureOrder::Exceeded);
        let big = Permutation::identity(65);
        assert!(matches!(
            closure_order(65, &[big], 10),
            Err(PermError::Capacity { .. })
        ));
    }

    #[test]
    fn conjugacy_search() {
        let a = [cyc(3, &[&[0, 1]])];
        assert_eq!(
            conjugating_permutation(&a, &a).unwrap(),
            Some(Permutation::identity(3))
        );
        // Brute force over S_3 for the oracle.
        let b = [cyc(3, &[&[1, 2]])];
        let witnesses: Vec<_> = all_permutations(3)
            .into_iter()
            .filter(|s| conjugate_all(&a, s) == b)
            .collect();
        assert!(!witnesses.is_empty());
        let found = conjugating_permutation(&a, &b).unwrap().unwrap();
        assert_eq!(found, witnesses[0]);
        assert_eq!(conjugate_all(&a, &found), b);
        assert_eq!(
            conjugating_permutation(&a, &[cyc(3, &[&[0, 1, 2]])]).unwrap(),
            None
        );
        let nine = Permutation::identity(9);
        assert!(matches!(
            conjugating_permutation(&[nine.clone()], &[nine]),
            Err(PermError::Capacity { .. })
        ));
    }

    fn perm(d: usize) -> impl Strategy<Value = Permutation> {
        Just((0..d).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn cycle_type_is_conjugation_invariant(p in perm(6), s in perm(6)) {
            let q = conjugate_all(&[p.clone()], &s).pop().unwrap();
            prop_assert_eq!(p.cycle_type(), q.cycle_type());
        }

        #[test]
        fn transitivity_matches_bfs_oracle(gens in prop::collection::vec(perm(5), 0..3)) {
            // Undirected Schreier-graph search using both directions.
            let mut seen = [false; 5];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(x) = stack.pop() {
                for g in &gens {
                    for y in [g.apply(x), g.inverse().apply(x)] {
                        if !seen[y] {
                            seen[y] = true;
                            stack.push(y);
                        }
                    }
                }
            }
            let oracle = seen.iter().all(|&s| s);
            prop_assert_eq!(is_transitive(5, &gens).unwrap(), oracle);
        }

        #[test]
        fn inverse_composes_to_identity(p in perm(7)) {
            prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
        }
    }
}
