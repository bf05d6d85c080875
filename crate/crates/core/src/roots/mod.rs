//! Finite root systems of types A, D, E6 in the simple-root integer basis,
//! their Dynkin diagram automorphisms, folding to twisted root systems, and
//! Chevalley structure constants with a normalized sign table.

pub mod chev;
pub mod fold;

pub use chev::{chevalley_constants, ChevTable};
pub use fold::{fold, FoldedSystem, HighestRootData, LengthClass, RootType};

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Simply-laced ambient types accepted as inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kind {
    A,
    D,
    E,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::A => write!(f, "A"),
            Kind::D => write!(f, "D"),
            Kind::E => write!(f, "E"),
        }
    }
}

/// A root as integer coordinates in the simple-root basis.
pub type RootVec = Vec<i64>;

/// Height of a coordinate vector (sum of simple-root coefficients).
pub fn height(v: &[i64]) -> i64 {
    v.iter().sum()
}

/// Strict colexicographic order: compares coordinates from the highest index
/// down. This is the order under which orbit representatives are selected.
pub fn colex_lt(x: &[i64], y: &[i64]) -> bool {
    for (a, b) in x.iter().rev().zip(y.iter().rev()) {
        if a != b {
            return a < b;
        }
    }
    false
}

/// A finite root system with all roots enumerated.
///
/// Roots are stored positives-first, sorted by height and then
/// lexicographically, followed by the negatives in the mirrored order, so
/// `id` and `id + positive_count()` are always a `±` pair.
#[derive(Debug, Clone)]
pub struct RootSystem {
    kind: Kind,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    roots: Vec<RootVec>,
    index: BTreeMap<RootVec, usize>,
    n_pos: usize,
}

/// Builds the full root system for the supported types:
/// `A_N` (N ≥ 1), `D_N` (N ≥ 4), `E_6`.
pub fn build_root_system(kind: Kind, rank: usize) -> Result<RootSystem> {
    RootSystem::build(kind, rank)
}

impl RootSystem {
    /// See [`build_root_system`].
    pub fn build(kind: Kind, rank: usize) -> Result<Self> {
        let cartan = cartan_matrix(kind, rank)?;
        // Close the simple roots under all simple reflections; for these
        // types the Weyl orbit of the simples is the whole system.
        let mut seen: BTreeMap<RootVec, ()> = BTreeMap::new();
        let mut queue: Vec<RootVec> = Vec::new();
        for i in 0..rank {
            let mut v = vec![0i64; rank];
            v[i] = 1;
            seen.insert(v.clone(), ());
            queue.push(v);
        }
        while let Some(v) = queue.pop() {
            for i in 0..rank {
                let mut alpha = vec![0i64; rank];
                alpha[i] = 1;
                let w = reflect_with(&cartan, &alpha, &v);
                if !seen.contains_key(&w) {
                    seen.insert(w.clone(), ());
                    queue.push(w);
                }
            }
        }
        let mut positives: Vec<RootVec> = seen
            .keys()
            .filter(|v| height(v) > 0)
            .cloned()
            .collect();
        positives.sort_by(|x, y| (height(x), x.clone()).cmp(&(height(y), y.clone())));
        let n_pos = positives.len();
        let mut roots = positives;
        for i in 0..n_pos {
            let neg: RootVec = roots[i].iter().map(|c| -c).collect();
            roots.push(neg);
        }
        let index = roots
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        Ok(RootSystem { kind, rank, cartan, roots, index, n_pos })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Cartan matrix entry `a_ij = α_j(H_{α_i})` (0-indexed).
    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    /// Number of roots.
    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    /// Number of positive roots; ids below this bound are the positives.
    pub fn positive_count(&self) -> usize {
        self.n_pos
    }

    /// The root with the given id.
    pub fn root(&self, id: usize) -> &RootVec {
        &self.roots[id]
    }

    /// Id lookup by coordinates.
    pub fn root_id(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        self.index.contains_key(v)
    }

    pub fn is_positive(&self, id: usize) -> bool {
        id < self.n_pos
    }

    /// Id of `-α` for the root with id `id`.
    pub fn neg_id(&self, id: usize) -> usize {
        if id < self.n_pos {
            id + self.n_pos
        } else {
            id - self.n_pos
        }
    }

    /// Id of `α + β` when that sum is again a root.
    pub fn sum_id(&self, a: usize, b: usize) -> Option<usize> {
        let sum: RootVec = self.roots[a]
            .iter()
            .zip(&self.roots[b])
            .map(|(x, y)| x + y)
            .collect();
        self.root_id(&sum)
    }

    /// `β(H_α) = (β, α∨)`; with every root of squared length 2 this equals
    /// the invariant form `(β, α)` on integer vectors.
    pub fn pairing(&self, beta: &[i64], alpha: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, b) in beta.iter().enumerate() {
            if *b == 0 {
                continue;
            }
            for (j, a) in alpha.iter().enumerate() {
                acc += b * self.cartan[i][j] * a;
            }
        }
        acc
    }

    /// Reflection `s_α(β) = β − β(H_α)·α`.
    pub fn reflect(&self, alpha: &[i64], beta: &[i64]) -> RootVec {
        reflect_with(&self.cartan, alpha, beta)
    }

    /// All ids of positive roots.
    pub fn positive_ids(&self) -> impl Iterator<Item = usize> {
        0..self.n_pos
    }

    /// All root ids.
    pub fn all_ids(&self) -> impl Iterator<Item = usize> {
        0..self.roots.len()
    }

    /// The highest root (unique maximum-height positive root).
    pub fn highest_root(&self) -> &RootVec {
        &self.roots[self.n_pos - 1]
    }
}

fn reflect_with(cartan: &[Vec<i64>], alpha: &[i64], beta: &[i64]) -> RootVec {
    let mut pairing = 0;
    for (i, b) in beta.iter().enumerate() {
        for (j, a) in alpha.iter().enumerate() {
            pairing += b * cartan[i][j] * a;
        }
    }
    beta.iter().zip(alpha).map(|(b, a)| b - pairing * a).collect()
}

fn cartan_matrix(kind: Kind, rank: usize) -> Result<Vec<Vec<i64>>> {
    let edges: Vec<(usize, usize)> = match kind {
        Kind::A if rank >= 1 => (0..rank.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        Kind::D if rank >= 4 => {
            let mut e: Vec<(usize, usize)> = (0..rank - 2).map(|i| (i, i + 1)).collect();
            e.push((rank - 3, rank - 1));
            e
        }
        Kind::E if rank == 6 => vec![(0, 1), (1, 2), (2, 3), (2, 4), (4, 5)],
        _ => return Err(Error::Unsupported("root system type/rank")),
    };
    let mut m = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        m[i][i] = 2;
    }
    for (i, j) in edges {
        m[i][j] = -1;
        m[j][i] = -1;
    }
    Ok(m)
}

/// A Dynkin diagram automorphism, acting on node indices; for `(D_4, r = 3)`
/// the auxiliary involution `ω` (swapping the two rotated leaves fixed by
/// neither power of `σ`) is carried along.
#[derive(Debug, Clone)]
pub struct DiagramAut {
    perm: Vec<usize>,
    r: u8,
    omega: Option<Vec<usize>>,
}

/// The diagram automorphism of the requested order, from the classification:
/// `A_N` reversal (N ≥ 2, r = 2), `D_N` leaf swap (r = 2), `E_6` reversal
/// (r = 2), `D_4` triality (r = 3), or the identity (r = 1).
pub fn diagram_aut(kind: Kind, rank: usize, r: u8) -> Result<DiagramAut> {
    let perm: Vec<usize> = match (kind, r) {
        (_, 1) => (0..rank).collect(),
        (Kind::A, 2) if rank >= 2 => (0..rank).map(|i| rank - 1 - i).collect(),
        (Kind::D, 2) if rank >= 4 => {
            let mut p: Vec<usize> = (0..rank).collect();
            p.swap(rank - 2, rank - 1);
            p
        }
        (Kind::E, 2) if rank == 6 => vec![5, 4, 2, 3, 1, 0],
        (Kind::D, 3) if rank == 4 => vec![2, 1, 3, 0],
        _ => return Err(Error::Unsupported("no diagram automorphism of this order")),
    };
    let omega = match (kind, r) {
        (Kind::D, 3) => Some(vec![0, 1, 3, 2]),
        _ => None,
    };
    let aut = DiagramAut { perm, r, omega };
    debug_assert!(aut.preserves_cartan(kind, rank));
    Ok(aut)
}

impl DiagramAut {
    pub fn order(&self) -> u8 {
        self.r
    }

    /// Number of diagram nodes the permutation acts on.
    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    /// Image of node `i` (0-indexed).
    pub fn node(&self, i: usize) -> usize {
        self.perm[i]
    }

    /// True when the auxiliary involution is present (`(D_4, r = 3)` only).
    pub fn has_omega(&self) -> bool {
        self.omega.is_some()
    }

    /// Image of node `i` under the auxiliary involution (identity if absent).
    pub fn omega_node(&self, i: usize) -> usize {
        match &self.omega {
            Some(p) => p[i],
            None => i,
        }
    }

    /// `σ` applied to a coordinate vector: permutes the simple-root basis.
    pub fn apply_root(&self, v: &[i64]) -> RootVec {
        let mut out = vec![0i64; v.len()];
        for (i, c) in v.iter().enumerate() {
            out[self.perm[i]] = *c;
        }
        out
    }

    /// `σ^k` applied to a coordinate vector.
    pub fn apply_root_pow(&self, v: &[i64], k: u8) -> RootVec {
        let mut out = v.to_vec();
        for _ in 0..k {
            out = self.apply_root(&out);
        }
        out
    }

    /// `ω` applied to a coordinate vector (identity if absent).
    pub fn omega_root(&self, v: &[i64]) -> RootVec {
        match &self.omega {
            None => v.to_vec(),
            Some(p) => {
                let mut out = vec![0i64; v.len()];
                for (i, c) in v.iter().enumerate() {
                    out[p[i]] = *c;
                }
                out
            }
        }
    }

    /// Orbit of a node, sorted ascending.
    pub fn node_orbit(&self, i: usize) -> Vec<usize> {
        let mut orbit = vec![i];
        let mut j = self.perm[i];
        while j != i {
            orbit.push(j);
            j = self.perm[j];
        }
        orbit.sort_unstable();
        orbit
    }

    /// Size of the `σ`-orbit of a root vector.
    pub fn root_orbit_size(&self, v: &[i64]) -> u8 {
        let mut w = self.apply_root(v);
        let mut n = 1;
        while w != v {
            w = self.apply_root(&w);
            n += 1;
        }
        n
    }

    fn preserves_cartan(&self, kind: Kind, rank: usize) -> bool {
        let Ok(cartan) = cartan_matrix(kind, rank) else {
            return false;
        };
        let ok_sigma = (0..rank).all(|i| {
            (0..rank).all(|j| cartan[self.perm[i]][self.perm[j]] == cartan[i][j])
        });
        let ok_omega = match &self.omega {
            None => true,
            Some(p) => {
                (0..rank).all(|i| (0..rank).all(|j| cartan[p[i]][p[j]] == cartan[i][j]))
            }
        };
        ok_sigma && ok_omega
    }
}
