//! Coset enumeration against an orbit count on random permutation actions.
//!
//! For random permutations `x_1..x_k` of `d <= 12` points, the stabilizer of
//! point 0 in the generated group has index equal to the orbit of 0. The
//! stabilizer is generated by tree-path words computed here, independently of
//! the library's own Schreier routine.

use std::collections::VecDeque;
use std::sync::Arc;

use covext_core::coset::{self, TableStatus};
use covext_core::{Alphabet, Letter, Presentation, Word};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_perm(rng: &mut ChaCha8Rng, d: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..d).collect();
    v.shuffle(rng);
    v
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

fn act(perms: &[Vec<usize>], x: usize, l: Letter) -> usize {
    if l.inverse {
        inverse(&perms[l.generator])[x]
    } else {
        perms[l.generator][x]
    }
}

/// Words from 0 to each point of its orbit, by breadth-first search.
fn tree(perms: &[Vec<usize>], d: usize) -> Vec<Option<Vec<Letter>>> {
    let mut path: Vec<Option<Vec<Letter>>> = vec![None; d];
    path[0] = Some(Vec::new());
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for g in 0..perms.len() {
            for inv in [false, true] {
                let l = Letter::new(g, inv);
                let y = act(perms, x, l);
                if path[y].is_none() {
                    let mut p = path[x].clone().unwrap();
                    p.push(l);
                    path[y] = Some(p);
                    queue.push_back(y);
                }
            }
        }
    }
    path
}

fn word(alphabet: &Arc<Alphabet>, letters: Vec<Letter>) -> Word {
    Word::reduce(alphabet, letters).unwrap()
}

fn inverse_letters(ls: &[Letter]) -> Vec<Letter> {
    ls.iter().rev().map(|l| l.inv()).collect()
}

fn order(p: &[usize]) -> usize {
    let mut q: Vec<usize> = p.to_vec();
    let mut n = 1;
    while q.iter().enumerate().any(|(i, &x)| i != x) {
        q = q.iter().map(|&x| p[x]).collect();
        n += 1;
    }
    n
}

#[test]
fn index_equals_orbit_size() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut with_relators = 0;
    for trial in 0..100 {
        let k = rng.gen_range(1..=3);
        let d = rng.gen_range(1..=12);
        let perms: Vec<Vec<usize>> = (0..k).map(|_| random_perm(&mut rng, d)).collect();
        let alphabet = Alphabet::numbered("x", k);

        let paths = tree(&perms, d);
        let orbit = paths.iter().filter(|p| p.is_some()).count();
        let mut gens = Vec::new();
        for x in 0..d {
            let Some(px) = &paths[x] else { continue };
            for g in 0..k {
                let y = perms[g][x];
                let mut w = px.clone();
                w.push(Letter::new(g, false));
                w.extend(inverse_letters(paths[y].as_ref().unwrap()));
                let w = word(&alphabet, w);
                if !w.is_identity() {
                    gens.push(w);
                }
            }
        }
        // Extra stabilizer elements: random words closed up through the tree.
        for _ in 0..rng.gen_range(0..3) {
            let len = rng.gen_range(1..8);
            let mut w: Vec<Letter> = (0..len)
                .map(|_| Letter::new(rng.gen_range(0..k), rng.gen_bool(0.5)))
                .collect();
            let end = w.iter().fold(0, |x, &l| act(&perms, x, l));
            w.extend(inverse_letters(paths[end].as_ref().unwrap()));
            gens.push(word(&alphabet, w));
        }
        gens.shuffle(&mut rng);

        // Half the instances quotient by power relators the action satisfies.
        let pres = if trial % 2 == 0 {
            Presentation::free(alphabet.clone())
        } else {
            with_relators += 1;
            let rels = (0..k)
                .map(|g| word(&alphabet, vec![Letter::new(g, false); order(&perms[g])]))
                .filter(|w| !w.is_identity())
                .collect();
            Presentation::new(alphabet.clone(), rels).unwrap()
        };
        let table = coset::todd_coxeter(&pres, &gens, 100_000).unwrap();
        assert_eq!(table.status(), TableStatus::Closed, "trial {trial}");
        assert_eq!(table.index(), orbit, "trial {trial}: d = {d}, k = {k}");
        let action = coset::coset_action(&table).unwrap();
        assert_eq!(action.degree(), orbit);
        assert!(action.is_transitive());
    }
    assert_eq!(with_relators, 50);
}
