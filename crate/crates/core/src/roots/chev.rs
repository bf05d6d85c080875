//! Structure constants of a Chevalley basis, with basis signs chosen so the
//! diagram automorphism acts on root vectors with the normalized signs k_α.
//!
//! Positive-pair constants are built bottom-up by height: the pair (α, β)
//! with α minimal among decompositions of γ = α + β gets +1, and every other
//! decomposition is resolved against it through the Jacobi identity. Pairs
//! involving negative roots reduce to positive pairs by the rotation rule
//! N_{x,y} = N_{y,w} = N_{w,x} for x + y + w = 0 and N_{x,y} = −N_{−x,−y}.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::roots::{DiagramAut, RootSystem, RootVec};
use crate::{Error, Result};

/// Structure constants N_{α,β}, automorphism signs k_α, and the auxiliary
/// involution signs for the triality case. Indices are root ids of the
/// originating `RootSystem`.
#[derive(Debug, Clone)]
pub struct ChevTable {
    n: BTreeMap<(usize, usize), i64>,
    k_sigma: Vec<i64>,
    k_omega: Vec<i64>,
}

/// Builds the table for `rs` twisted by `aut`, re-choosing basis signs until
/// k_α = k_{σ(α)} holds and k_α = −1 exactly on roots of the form β + σ(β).
pub fn chevalley_constants(rs: &RootSystem, aut: &DiagramAut) -> Result<ChevTable> {
    ChevTable::new(rs, aut)
}

impl ChevTable {
    pub fn new(rs: &RootSystem, aut: &DiagramAut) -> Result<Self> {
        if aut.rank() != rs.rank() {
            return Err(Error::Unsupported("automorphism rank differs from root system"));
        }
        let sigma_id = root_id_perm(rs, |v| aut.apply_root(v));
        let omega_id = root_id_perm(rs, |v| aut.omega_root(v));

        let npos = positive_pair_table(rs);
        let raw_k_sigma = raw_signs(rs, &npos, &sigma_id);
        let raw_k_omega = raw_signs(rs, &npos, &omega_id);

        let target = sign_targets(rs, aut);
        // On σ-fixed roots no flip can change k, so the raw sign must already
        // match the target; same for ω-fixed roots and +1.
        let flips = choose_flips(rs, &sigma_id, &omega_id, &raw_k_sigma, &raw_k_omega, &target)?;

        let mut n = BTreeMap::new();
        for a in rs.all_ids() {
            for b in rs.all_ids() {
                let Some(c) = rs.sum_id(a, b) else { continue };
                let raw = resolve(rs, &npos, a, b);
                n.insert((a, b), raw * flips[a] * flips[b] * flips[c]);
            }
        }
        let k_sigma: Vec<i64> = (0..rs.num_roots())
            .map(|a| raw_k_sigma[a] * flips[a] * flips[sigma_id[a]])
            .collect();
        let k_omega: Vec<i64> = (0..rs.num_roots())
            .map(|a| raw_k_omega[a] * flips[a] * flips[omega_id[a]])
            .collect();
        for a in rs.all_ids() {
            if k_sigma[a] != target[a.min(rs.neg_id(a))] || k_omega[a] != 1 {
                return Err(Error::Internal("sign adjustment failed"));
            }
        }
        Ok(ChevTable { n, k_sigma, k_omega })
    }

    /// N_{α,β} for root ids, `None` when α + β is not a root.
    pub fn n(&self, a: usize, b: usize) -> Option<i64> {
        self.n.get(&(a, b)).copied()
    }

    /// Automorphism sign: σ(X_α) = k_α X_{σ(α)}.
    pub fn k(&self, a: usize) -> i64 {
        self.k_sigma[a]
    }

    /// Auxiliary-involution sign: ω(X_α) = k^ω_α X_{ω(α)} (+1 in the chosen
    /// basis).
    pub fn k_omega(&self, a: usize) -> i64 {
        self.k_omega[a]
    }

    /// Coefficients n_i with H_α = Σ n_i H_{α_i}; in a simply-laced system
    /// these are the root coordinates.
    pub fn coroot_decomp(&self, rs: &RootSystem, a: usize) -> RootVec {
        rs.root(a).clone()
    }

    /// Checks N_{σα,σβ} = k_{α+β}·k_α·k_β·N_{α,β} for every composable pair,
    /// and N_{ωα,ωβ} = N_{α,β} when the auxiliary involution is present.
    /// Returns the offending pairs.
    pub fn verify_sign_identities(&self, rs: &RootSystem, aut: &DiagramAut) -> Vec<(usize, usize)> {
        let sigma_id = root_id_perm(rs, |v| aut.apply_root(v));
        let omega_id = root_id_perm(rs, |v| aut.omega_root(v));
        let mut bad = Vec::new();
        for (&(a, b), &nab) in &self.n {
            let c = rs.sum_id(a, b).expect("table key is composable");
            let lhs = self.n(sigma_id[a], sigma_id[b]).expect("σ preserves composability");
            if lhs != self.k_sigma[c] * self.k_sigma[a] * self.k_sigma[b] * nab {
                bad.push((a, b));
                continue;
            }
            if aut.has_omega() {
                let lhs = self.n(omega_id[a], omega_id[b]).expect("ω preserves composability");
                if lhs != nab {
                    bad.push((a, b));
                }
            }
        }
        bad
    }
}

/// Root-id permutation induced by a coordinate map.
fn root_id_perm(rs: &RootSystem, f: impl Fn(&[i64]) -> RootVec) -> Vec<usize> {
    (0..rs.num_roots())
        .map(|id| rs.root_id(&f(rs.root(id))).expect("automorphism permutes roots"))
        .collect()
}

/// The first positive root α (in storage order) with γ − α also positive,
/// paired with γ − α. Defined for non-simple positive γ.
fn extraspecial_pair(rs: &RootSystem, gamma: usize) -> (usize, usize) {
    for a in rs.positive_ids() {
        if a == gamma {
            break;
        }
        let rest: RootVec = rs
            .root(gamma)
            .iter()
            .zip(rs.root(a))
            .map(|(g, x)| g - x)
            .collect();
        if let Some(b) = rs.root_id(&rest) {
            if rs.is_positive(b) {
                return (a, b);
            }
        }
    }
    unreachable!("every non-simple positive root decomposes")
}

/// N over all positive pairs, keyed by ordered id pairs in storage order.
fn positive_pair_table(rs: &RootSystem) -> BTreeMap<(usize, usize), i64> {
    let mut npos: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    // Positive ids ascend by (height, lex), so iterating in id order fills
    // every pair with a lower-height sum before it is consulted.
    for gamma in rs.positive_ids() {
        if crate::roots::height(rs.root(gamma)) < 2 {
            continue;
        }
        let (a1, b1) = extraspecial_pair(rs, gamma);
        npos.insert((a1, b1), 1);
        npos.insert((b1, a1), -1);
        for a in rs.positive_ids() {
            if a <= a1 || a == gamma {
                continue;
            }
            let rest: RootVec =
                rs.root(gamma).iter().zip(rs.root(a)).map(|(g, x)| g - x).collect();
            let Some(b) = rs.root_id(&rest) else { continue };
            if !rs.is_positive(b) || npos.contains_key(&(a, b)) {
                continue;
            }
            // Jacobi identity on (X_{a1}, X_{−a}, X_{−b}), whose weights sum
            // to −b1: N_{a,b} = N_{a1,−a}·N_{a1−a,−b} + N_{−b,a1}·N_{a1−b,−a}.
            let na = rs.neg_id(a);
            let nb = rs.neg_id(b);
            let mut val = 0;
            if rs.sum_id(a1, na).is_some() {
                let mid = rs.sum_id(a1, na).unwrap();
                val += resolve(rs, &npos, a1, na) * resolve(rs, &npos, mid, nb);
            }
            if rs.sum_id(nb, a1).is_some() {
                let mid = rs.sum_id(nb, a1).unwrap();
                val += resolve(rs, &npos, nb, a1) * resolve(rs, &npos, mid, na);
            }
            debug_assert!(val == 1 || val == -1, "simply-laced constants are ±1");
            npos.insert((a, b), val);
            npos.insert((b, a), -val);
        }
    }
    npos
}

/// N_{x,y} for any composable ordered pair, reading positive pairs from the
/// table and reducing the rest by rotation and negation.
fn resolve(rs: &RootSystem, npos: &BTreeMap<(usize, usize), i64>, x: usize, y: usize) -> i64 {
    let s = rs.sum_id(x, y).expect("pair must be composable");
    let xp = rs.is_positive(x);
    let yp = rs.is_positive(y);
    match (xp, yp) {
        (true, true) => *npos.get(&(x, y)).expect("positive pair is tabulated"),
        (false, false) => -resolve(rs, npos, rs.neg_id(x), rs.neg_id(y)),
        (true, false) => {
            if rs.is_positive(s) {
                // Rotate to (−y, s), a positive pair summing to x.
                -resolve(rs, npos, rs.neg_id(y), s)
            } else {
                // Rotate to (−s, x), a positive pair summing to −y.
                resolve(rs, npos, rs.neg_id(s), x)
            }
        }
        (false, true) => -resolve(rs, npos, y, x),
    }
}

/// Signs of the lift acting by X_{α_i} ↦ X_{perm(α_i)} on simple vectors,
/// extended along extraspecial pairs; negatives mirror positives.
fn raw_signs(
    rs: &RootSystem,
    npos: &BTreeMap<(usize, usize), i64>,
    perm: &[usize],
) -> Vec<i64> {
    let mut k = alloc::vec![0i64; rs.num_roots()];
    for gamma in rs.positive_ids() {
        k[gamma] = if crate::roots::height(rs.root(gamma)) == 1 {
            1
        } else {
            let (a, b) = extraspecial_pair(rs, gamma);
            k[a] * k[b] * resolve(rs, npos, perm[a], perm[b]) * resolve(rs, npos, a, b)
        };
        k[rs.neg_id(gamma)] = k[gamma];
    }
    k
}

/// Target signs per positive root id: −1 exactly when the root is β + σ(β)
/// for some root β.
fn sign_targets(rs: &RootSystem, aut: &DiagramAut) -> Vec<i64> {
    let mut target = alloc::vec![1i64; rs.positive_count()];
    if aut.order() == 2 {
        for beta in rs.all_ids() {
            let img = aut.apply_root(rs.root(beta));
            let sum: RootVec = rs.root(beta).iter().zip(&img).map(|(x, y)| x + y).collect();
            if let Some(id) = rs.root_id(&sum) {
                if rs.is_positive(id) {
                    target[id] = -1;
                }
            }
        }
    }
    target
}

/// Per-root flip signs s_α (even under negation) making the adjusted signs
/// match `target` along σ and +1 along ω. Propagates over each orbit graph
/// component and reports contradictions, which would indicate the raw signs
/// on fixed roots disagree with the target.
fn choose_flips(
    rs: &RootSystem,
    sigma_id: &[usize],
    omega_id: &[usize],
    raw_k_sigma: &[i64],
    raw_k_omega: &[i64],
    target: &[i64],
) -> Result<Vec<i64>> {
    let n_pos = rs.positive_count();
    let mut s = alloc::vec![0i64; n_pos];
    let mut stack: Vec<usize> = Vec::new();
    let pos_of = |id: usize| if rs.is_positive(id) { id } else { rs.neg_id(id) };
    for start in 0..n_pos {
        if s[start] != 0 {
            continue;
        }
        s[start] = 1;
        stack.push(start);
        while let Some(a) = stack.pop() {
            // s_{σα} = s_α · k_α · t_α and s_{ωα} = s_α · k^ω_α.
            let step: [(usize, i64); 2] = [
                (pos_of(sigma_id[a]), raw_k_sigma[a] * target[a]),
                (pos_of(omega_id[a]), raw_k_omega[a]),
            ];
            for (b, transfer) in step {
                let want = s[a] * transfer;
                if s[b] == 0 {
                    s[b] = want;
                    stack.push(b);
                } else if s[b] != want {
                    return Err(Error::Internal("inconsistent sign adjustment"));
                }
            }
        }
    }
    let mut flips = alloc::vec![0i64; rs.num_roots()];
    for a in 0..n_pos {
        flips[a] = s[a];
        flips[rs.neg_id(a)] = s[a];
    }
    Ok(flips)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{build_root_system, diagram_aut, Kind};
    use alloc::vec;
    use alloc::vec::Vec;

    fn table(kind: Kind, rank: usize, r: u8) -> (RootSystem, DiagramAut, ChevTable) {
        let rs = build_root_system(kind, rank).unwrap();
        let aut = diagram_aut(kind, rank, r).unwrap();
        let tbl = chevalley_constants(&rs, &aut).unwrap();
        (rs, aut, tbl)
    }

    fn id(rs: &RootSystem, v: &[i64]) -> usize {
        rs.root_id(v).unwrap()
    }

    #[test]
    fn rank_two_constants_match_hand_computation() {
        let (rs, _, tbl) = table(Kind::A, 2, 1);
        let a1 = id(&rs, &[1, 0]);
        let a2 = id(&rs, &[0, 1]);
        let a12 = id(&rs, &[1, 1]);
        // Storage order puts α₂ first, so (α₂, α₁) is the extraspecial pair.
        assert_eq!(tbl.n(a2, a1), Some(1));
        assert_eq!(tbl.n(a1, a2), Some(-1));
        assert_eq!(tbl.n(a12, rs.neg_id(a1)), Some(1), "[X_{{α₁+α₂}}, X_{{−α₁}}] = X_{{α₂}}");
        assert_eq!(tbl.n(a12, rs.neg_id(a2)), Some(-1));
        assert_eq!(tbl.n(a1, a1), None, "2α₁ is not a root");
    }

    #[test]
    fn antisymmetry_and_negation_hold_for_every_pair() {
        for (kind, rank, r) in [(Kind::A, 4, 2), (Kind::D, 4, 3), (Kind::A, 3, 2)] {
            let (rs, _, tbl) = table(kind, rank, r);
            for a in rs.all_ids() {
                for b in rs.all_ids() {
                    let Some(nab) = tbl.n(a, b) else { continue };
                    assert_eq!(nab.abs(), 1, "simply-laced constants are ±1");
                    assert_eq!(tbl.n(b, a), Some(-nab), "antisymmetry");
                    assert_eq!(
                        tbl.n(rs.neg_id(a), rs.neg_id(b)),
                        Some(-nab),
                        "negation rule"
                    );
                }
            }
        }
    }

    #[test]
    fn rotation_identity_holds_on_weight_zero_triples() {
        for (kind, rank) in [(Kind::A, 2), (Kind::A, 3), (Kind::D, 4)] {
            let (rs, _, tbl) = table(kind, rank, 1);
            for x in rs.all_ids() {
                for y in rs.all_ids() {
                    let Some(s) = rs.sum_id(x, y) else { continue };
                    let w = rs.neg_id(s);
                    let nxy = tbl.n(x, y).unwrap();
                    assert_eq!(tbl.n(y, w), Some(nxy));
                    assert_eq!(tbl.n(w, x), Some(nxy));
                }
            }
        }
    }

    #[test]
    fn jacobi_identity_holds_on_root_triples_missing_zero_sums() {
        // Triples with pairwise sums but x+y+z ∉ Δ ∪ {0} must cancel without
        // Cartan terms: N_{x,y}N_{x+y,z} + N_{y,z}N_{y+z,x} + N_{z,x}N_{z+x,y} = 0.
        for (kind, rank) in [(Kind::A, 3), (Kind::D, 4)] {
            let (rs, _, tbl) = table(kind, rank, 1);
            for x in rs.all_ids() {
                for y in rs.all_ids() {
                    for z in rs.all_ids() {
                        let total: RootVec = rs
                            .root(x)
                            .iter()
                            .zip(rs.root(y))
                            .zip(rs.root(z))
                            .map(|((a, b), c)| a + b + c)
                            .collect();
                        if rs.is_root(&total) || total.iter().all(|&c| c == 0) {
                            continue;
                        }
                        let term = |p: usize, q: usize, rmv: usize| -> i64 {
                            match rs.sum_id(p, q) {
                                Some(pq) => match tbl.n(pq, rmv) {
                                    Some(second) => tbl.n(p, q).unwrap() * second,
                                    None => 0,
                                },
                                None => 0,
                            }
                        };
                        let total_term = term(x, y, z) + term(y, z, x) + term(z, x, y);
                        assert_eq!(total_term, 0, "Jacobi fails on ids ({x},{y},{z})");
                    }
                }
            }
        }
    }

    #[test]
    fn signs_are_minus_one_exactly_on_doubled_fixed_roots() {
        let (rs, aut, tbl) = table(Kind::A, 4, 2);
        let fixed_minus: Vec<&[i64]> = vec![
            &[0, 1, 1, 0],
            &[1, 1, 1, 1],
            &[0, -1, -1, 0],
            &[-1, -1, -1, -1],
        ];
        for a in rs.all_ids() {
            let expected = if fixed_minus.contains(&rs.root(a).as_slice()) { -1 } else { 1 };
            assert_eq!(tbl.k(a), expected, "k at {:?}", rs.root(a));
            let sid = rs.root_id(&aut.apply_root(rs.root(a))).unwrap();
            assert_eq!(tbl.k(a), tbl.k(sid), "k is σ-invariant");
        }
    }

    #[test]
    fn triality_signs_are_all_positive() {
        let (rs, _, tbl) = table(Kind::D, 4, 3);
        for a in rs.all_ids() {
            assert_eq!(tbl.k(a), 1);
            assert_eq!(tbl.k_omega(a), 1);
        }
    }

    #[test]
    fn sign_identities_verify_cleanly_for_all_twisted_cases() {
        for (kind, rank, r) in [
            (Kind::A, 3, 2),
            (Kind::A, 4, 2),
            (Kind::A, 5, 2),
            (Kind::D, 4, 3),
            (Kind::D, 5, 2),
        ] {
            let (rs, aut, tbl) = table(kind, rank, r);
            assert!(
                tbl.verify_sign_identities(&rs, &aut).is_empty(),
                "({:?}{}, r={})",
                kind,
                rank,
                r
            );
        }
    }

    #[test]
    fn coroot_decomposition_returns_root_coordinates() {
        let (rs, _, tbl) = table(Kind::A, 2, 1);
        let a12 = id(&rs, &[1, 1]);
        assert_eq!(tbl.coroot_decomp(&rs, a12), vec![1, 1]);
        assert_eq!(tbl.coroot_decomp(&rs, rs.neg_id(a12)), vec![-1, -1]);
    }
}
