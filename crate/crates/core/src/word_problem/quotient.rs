//! Nontriviality witnesses from homomorphisms onto permutation groups.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::presentations::Presentation;
use crate::words::Word;

/// Largest degree the exhaustive search accepts.
pub const MAX_QUOTIENT_DEGREE: usize = 9;

/// Assignments tried before the search gives up at one degree.
const NODE_LIMIT: u64 = 40_000_000;

/// Generator images in the symmetric group on `degree` points. Words act on
/// the right: the image of `uv` is "apply `u`, then `v`".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientWitness {
    pub degree: usize,
    pub images: Vec<Vec<u8>>,
}

fn compose_into(acc: &mut [u8], perm: &[u8]) {
    for a in acc.iter_mut() {
        *a = perm[*a as usize];
    }
}

fn invert(perm: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p as usize] = i as u8;
    }
    inv
}

fn is_identity(perm: &[u8]) -> bool {
    perm.iter().enumerate().all(|(i, &p)| i == p as usize)
}

fn evaluate(images: &[Vec<u8>], inverses: &[Vec<u8>], w: &Word, degree: usize) -> Vec<u8> {
    let mut acc: Vec<u8> = (0..degree as u8).collect();
    for l in w.letters() {
        let g = l.generator();
        let perm = if l.is_inverse() {
            &inverses[g]
        } else {
            &images[g]
        };
        compose_into(&mut acc, perm);
    }
    acc
}

impl QuotientWitness {
    pub fn image(&self, w: &Word) -> Vec<u8> {
        let inverses: Vec<Vec<u8>> = self.images.iter().map(|p| invert(p)).collect();
        evaluate(&self.images, &inverses, w, self.degree)
    }

    /// The assignment is a homomorphism from the presented group.
    pub fn is_homomorphism(&self, pres: &Presentation) -> bool {
        self.images.len() == pres.generator_count()
            && self.images.iter().all(|p| is_permutation(p, self.degree))
            && pres.relators().iter().all(|r| is_identity(&self.image(r)))
    }

    /// Full re-check by direct evaluation.
    pub fn separates(&self, pres: &Presentation, w: &Word) -> bool {
        self.is_homomorphism(pres) && !is_identity(&self.image(w))
    }
}

fn is_permutation(p: &[u8], degree: usize) -> bool {
    let mut seen = vec![false; degree];
    p.len() == degree
        && p.iter().all(|&x| {
            let x = x as usize;
            x < degree && !std::mem::replace(&mut seen[x], true)
        })
}

/// All permutations of `0..n` in lexicographic order.
fn all_permutations(n: usize) -> Vec<Vec<u8>> {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// One permutation per cycle type: conjugating a whole assignment preserves
/// everything we test, so the first generator ranges over these only.
fn cycle_type_representatives(n: usize) -> Vec<Vec<u8>> {
    fn partitions(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            partitions(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut parts = Vec::new();
    partitions(n, n, &mut Vec::new(), &mut parts);
    parts
        .into_iter()
        .map(|cycles| {
            let mut perm = vec![0u8; n];
            let mut start = 0;
            for len in cycles {
                for i in 0..len {
                    perm[start + i] = (start + (i + 1) % len) as u8;
                }
                start += len;
            }
            perm
        })
        .collect()
}

/// Searches degrees `2..=max_degree` for a homomorphism to a symmetric group
/// under which `w` is not the identity. Deterministic for a given seed.
pub fn finite_quotient_witness(
    pres: &Presentation,
    w: &Word,
    max_degree: usize,
    seed: u64,
) -> Option<QuotientWitness> {
    if w.is_identity() || pres.generator_count() == 0 {
        return None;
    }
    let max_degree = max_degree.min(MAX_QUOTIENT_DEGREE);
    (2..=max_degree).find_map(|d| search_degree(pres, w, d, seed))
}

fn search_degree(
    pres: &Presentation,
    w: &Word,
    degree: usize,
    seed: u64,
) -> Option<QuotientWitness> {
    let n = pres.generator_count();
    // Relators grouped by the last generator they mention.
    let mut checks: Vec<Vec<&Word>> = vec![Vec::new(); n];
    for r in pres.relators() {
        checks[r.generator_bound() - 1].push(r);
    }
    let mut perms = all_permutations(degree);
    if seed != 0 {
        perms.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ degree as u64));
    }
    let reps = cycle_type_representatives(degree);
    let mut state = Search {
        degree,
        checks,
        target: w,
        images: Vec::with_capacity(n),
        inverses: Vec::with_capacity(n),
        nodes: 0,
        n,
    };
    if state.assign(&reps, &perms) {
        Some(QuotientWitness {
            degree,
            images: state.images,
        })
    } else {
        None
    }
}

struct Search<'a> {
    degree: usize,
    checks: Vec<Vec<&'a Word>>,
    target: &'a Word,
    images: Vec<Vec<u8>>,
    inverses: Vec<Vec<u8>>,
    nodes: u64,
    n: usize,
}

impl Search<'_> {
    fn assign(&mut self, reps: &[Vec<u8>], perms: &[Vec<u8>]) -> bool {
        let level = self.images.len();
        if level == self.n {
            return !is_identity(&evaluate(
                &self.images,
                &self.inverses,
                self.target,
                self.degree,
            ));
        }
        let candidates = if level == 0 { reps } else { perms };
        for p in candidates {
            self.nodes += 1;
            if self.nodes > NODE_LIMIT {
                return false;
            }
            self.images.push(p.clone());
            self.inverses.push(invert(p));
            let ok = self.checks[level]
                .iter()
                .all(|r| is_identity(&evaluate(&self.images, &self.inverses, r, self.degree)));
            if ok && self.assign(reps, perms) {
                return true;
            }
            self.images.pop();
            self.inverses.pop();
        }
        false
    }
}
