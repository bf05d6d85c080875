//! The twisted loop algebra with its two-dimensional central extension:
//! elements of g ⊗ K(ξ)[z^{±1/r}] ⊕ Kc ⊕ Kd, the Galois action, the
//! distinguished real-root vectors, Chevalley pairs, and the affine
//! generator matrix with its defining relations.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::linalg::kernel_dim;
use crate::roots::fold::FoldedEntry;
use crate::roots::{
    build_root_system, chevalley_constants, diagram_aut, fold, height, ChevTable, FoldedSystem,
    Kind, RootSystem, RootType,
};
use crate::scalars::{rat, rat_int, Cyc, Laurent, Rat};
use crate::{Error, Result};

/// A folded system together with its structure-constant table and cached
/// root-id permutations for the two Galois generators.
#[derive(Debug, Clone)]
pub struct Case {
    fold: FoldedSystem,
    chev: ChevTable,
    sigma_id: Vec<usize>,
    omega_id: Vec<usize>,
}

impl Case {
    pub fn new(kind: Kind, rank: usize, r: u8) -> Result<Self> {
        let rs = build_root_system(kind, rank)?;
        let aut = diagram_aut(kind, rank, r)?;
        let chev = chevalley_constants(&rs, &aut)?;
        let fold = fold(rs, aut)?;
        Ok(Case::assemble(fold, chev))
    }

    pub fn assemble(fold: FoldedSystem, chev: ChevTable) -> Self {
        let rs = fold.ambient();
        let aut = fold.aut();
        let sigma_id = (0..rs.num_roots())
            .map(|id| rs.root_id(&aut.apply_root(rs.root(id))).expect("σ permutes roots"))
            .collect();
        let omega_id = (0..rs.num_roots())
            .map(|id| rs.root_id(&aut.omega_root(rs.root(id))).expect("ω permutes roots"))
            .collect();
        Case { fold, chev, sigma_id, omega_id }
    }

    pub fn fold(&self) -> &FoldedSystem {
        &self.fold
    }

    pub fn chev(&self) -> &ChevTable {
        &self.chev
    }

    pub fn rs(&self) -> &RootSystem {
        self.fold.ambient()
    }

    pub fn r(&self) -> u8 {
        self.fold.r()
    }

    pub fn sigma_root_id(&self, id: usize) -> usize {
        self.sigma_id[id]
    }

    pub fn omega_root_id(&self, id: usize) -> usize {
        self.omega_id[id]
    }
}

/// Basis direction of the underlying finite-dimensional algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BasisKey {
    /// Root vector X_α by root id.
    X(usize),
    /// Simple coroot H_{α_i} by node index.
    H(usize),
}

/// An element of the extended loop algebra: a finite sum of basis vectors
/// with Laurent coefficients, plus central and derivation components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieElt {
    r: u8,
    terms: BTreeMap<BasisKey, Laurent>,
    c: Cyc,
    d: Cyc,
}

impl LieElt {
    pub fn zero(r: u8) -> Self {
        LieElt { r, terms: BTreeMap::new(), c: Cyc::zero(r), d: Cyc::zero(r) }
    }

    pub fn x(r: u8, root_id: usize, coeff: Laurent) -> Self {
        let mut e = LieElt::zero(r);
        e.add_term(BasisKey::X(root_id), &coeff);
        e
    }

    pub fn h(r: u8, node: usize, coeff: Laurent) -> Self {
        let mut e = LieElt::zero(r);
        e.add_term(BasisKey::H(node), &coeff);
        e
    }

    pub fn central(r: u8, c: Cyc) -> Self {
        let mut e = LieElt::zero(r);
        e.c = c;
        e
    }

    pub fn derivation(r: u8, d: Cyc) -> Self {
        let mut e = LieElt::zero(r);
        e.d = d;
        e
    }

    pub fn order(&self) -> u8 {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn c_coeff(&self) -> &Cyc {
        &self.c
    }

    pub fn d_coeff(&self) -> &Cyc {
        &self.d
    }

    pub fn terms(&self) -> impl Iterator<Item = (BasisKey, &Laurent)> {
        self.terms.iter().map(|(k, l)| (*k, l))
    }

    pub fn coeff(&self, key: BasisKey) -> Laurent {
        self.terms.get(&key).cloned().unwrap_or_else(|| Laurent::zero(self.r))
    }

    pub fn add_term(&mut self, key: BasisKey, coeff: &Laurent) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, coeff.clone());
            }
            Some(old) => {
                let sum = &old + coeff;
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &LieElt) -> LieElt {
        let mut out = self.clone();
        for (k, l) in &other.terms {
            out.add_term(*k, l);
        }
        out.c = &out.c + &other.c;
        out.d = &out.d + &other.d;
        out
    }

    pub fn neg(&self) -> LieElt {
        self.scale_cyc(&-&Cyc::one(self.r))
    }

    pub fn sub(&self, other: &LieElt) -> LieElt {
        self.add(&other.neg())
    }

    pub fn scale_cyc(&self, s: &Cyc) -> LieElt {
        let mut out = LieElt::zero(self.r);
        for (k, l) in &self.terms {
            out.add_term(*k, &l.scale(s));
        }
        out.c = &self.c * s;
        out.d = &self.d * s;
        out
    }

    pub fn scale_int(&self, s: i64) -> LieElt {
        self.scale_cyc(&Cyc::from_rat(self.r, rat_int(s)))
    }
}

/// κ on basis directions under the normalization (α,α) = 2: root vectors
/// pair to 1 against their negatives, coroots pair by the Cartan matrix.
fn kappa(rs: &RootSystem, k1: BasisKey, k2: BasisKey) -> i64 {
    match (k1, k2) {
        (BasisKey::X(a), BasisKey::X(b)) => {
            if rs.neg_id(a) == b {
                1
            } else {
                0
            }
        }
        (BasisKey::H(i), BasisKey::H(j)) => rs.cartan(i, j),
        _ => 0,
    }
}

/// Σ_n n·x(n)·y(−n), the residue pairing feeding the central term.
fn central_sum(x: &Laurent, y: &Laurent) -> Cyc {
    let mut acc = Cyc::zero(x.order());
    for (n, c) in x.terms() {
        if n == 0 {
            continue;
        }
        let other = y.coeff(-n);
        if other.is_zero() {
            continue;
        }
        acc = &acc + &(&(c * &other) * &Cyc::from_rat(x.order(), rat_int(n)));
    }
    acc
}

/// Laurent coefficient map n·x(n), the action of the degree derivation.
fn deg_scale(x: &Laurent) -> Laurent {
    let mut out = Laurent::zero(x.order());
    for (n, c) in x.terms() {
        out = &out + &Laurent::monomial(x.order(), n, c * &Cyc::from_rat(x.order(), rat_int(n)));
    }
    out
}

/// The extended bracket: pointwise finite-dimensional bracket, central
/// cocycle κ(X,Y)·n·δ_{m+n,0}, and the degree derivation d.
pub fn bracket(case: &Case, x: &LieElt, y: &LieElt) -> LieElt {
    let rs = case.rs();
    let r = x.order();
    let mut out = LieElt::zero(r);
    for (k1, l1) in &x.terms {
        for (k2, l2) in &y.terms {
            let prod = l1 * l2;
            match (*k1, *k2) {
                (BasisKey::X(a), BasisKey::X(b)) => {
                    if let Some(s) = rs.sum_id(a, b) {
                        let n = case.chev().n(a, b).expect("composable pair");
                        out.add_term(BasisKey::X(s), &prod.scale(&Cyc::from_rat(r, rat_int(n))));
                    } else if rs.neg_id(a) == b {
                        for (i, ni) in rs.root(a).iter().enumerate() {
                            if *ni != 0 {
                                out.add_term(
                                    BasisKey::H(i),
                                    &prod.scale(&Cyc::from_rat(r, rat_int(*ni))),
                                );
                            }
                        }
                    }
                }
                (BasisKey::H(i), BasisKey::X(b)) => {
                    let val = pairing_with_node(rs, b, i);
                    out.add_term(BasisKey::X(b), &prod.scale(&Cyc::from_rat(r, rat_int(val))));
                }
                (BasisKey::X(a), BasisKey::H(j)) => {
                    let val = pairing_with_node(rs, a, j);
                    out.add_term(BasisKey::X(a), &prod.scale(&Cyc::from_rat(r, rat_int(-val))));
                }
                (BasisKey::H(_), BasisKey::H(_)) => {}
            }
            let kap = kappa(rs, *k1, *k2);
            if kap != 0 {
                let central = &central_sum(l1, l2) * &Cyc::from_rat(r, rat_int(kap));
                out.c = &out.c + &central;
            }
        }
    }
    if !x.d.is_zero() {
        for (k2, l2) in &y.terms {
            out.add_term(*k2, &deg_scale(l2).scale(&x.d));
        }
    }
    if !y.d.is_zero() {
        let minus = -&y.d;
        for (k1, l1) in &x.terms {
            out.add_term(*k1, &deg_scale(l1).scale(&minus));
        }
    }
    out
}

/// α(H_{α_i}) = (α, α_i) in the simply-laced normalization.
fn pairing_with_node(rs: &RootSystem, root_id: usize, node: usize) -> i64 {
    rs.root(root_id)
        .iter()
        .enumerate()
        .map(|(j, cj)| cj * rs.cartan(j, node))
        .sum()
}

fn unit_vec(rs: &RootSystem, i: usize) -> Vec<i64> {
    let mut v = alloc::vec![0i64; rs.rank()];
    v[i] = 1;
    v
}

/// Which Galois generator to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gamma {
    Sigma,
    Omega,
}

/// The semilinear action: σ twists root vectors by k_α and coefficients by
/// σ'; ω uses the auxiliary permutation and ω'. Both fix c and d up to
/// coefficient conjugation.
pub fn gamma_action(case: &Case, which: Gamma, x: &LieElt) -> LieElt {
    let mut out = LieElt::zero(x.order());
    for (key, l) in &x.terms {
        let (new_key, sign, coeff) = match (which, *key) {
            (Gamma::Sigma, BasisKey::X(a)) => {
                (BasisKey::X(case.sigma_root_id(a)), case.chev().k(a), l.sigma_prime())
            }
            (Gamma::Sigma, BasisKey::H(i)) => {
                (BasisKey::H(case.fold().aut().node(i)), 1, l.sigma_prime())
            }
            (Gamma::Omega, BasisKey::X(a)) => {
                (BasisKey::X(case.omega_root_id(a)), case.chev().k_omega(a), l.omega_prime())
            }
            (Gamma::Omega, BasisKey::H(i)) => {
                (BasisKey::H(case.fold().aut().omega_node(i)), 1, l.omega_prime())
            }
        };
        let coeff = if sign == 1 { coeff } else { coeff.scale(&-&Cyc::one(x.order())) };
        out.add_term(new_key, &coeff);
    }
    match which {
        Gamma::Sigma => {
            out.c = x.c.clone();
            out.d = x.d.clone();
        }
        Gamma::Omega => {
            out.c = x.c.omega_bar();
            out.d = x.d.omega_bar();
        }
    }
    out
}

/// Invariance under both Galois generators.
pub fn is_fixed(case: &Case, x: &LieElt) -> bool {
    gamma_action(case, Gamma::Sigma, x) == *x && gamma_action(case, Gamma::Omega, x) == *x
}

/// A real root of the twisted affinization: a folded root plus n·δ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineRealRoot {
    pub a: Vec<i64>,
    pub n: i64,
}

impl AffineRealRoot {
    pub fn new(a: Vec<i64>, n: i64) -> Self {
        AffineRealRoot { a, n }
    }

    pub fn neg(&self) -> Self {
        AffineRealRoot { a: self.a.iter().map(|c| -c).collect(), n: -self.n }
    }
}

/// Membership in the real-root index set Ω.
pub fn in_omega(fs: &FoldedSystem, root: &AffineRealRoot) -> bool {
    let Ok(entry) = fs.entry(&root.a) else {
        return false;
    };
    if !entry.in_twisted {
        // Doubled images pair only with odd loop degrees.
        return root.n.rem_euclid(2) == 1;
    }
    if entry.rtype == RootType::Fixed {
        return root.n.rem_euclid(fs.r() as i64) == 0;
    }
    true
}

fn entry_checked<'a>(fs: &'a FoldedSystem, root: &AffineRealRoot) -> Result<&'a FoldedEntry> {
    if !in_omega(fs, root) {
        return Err(Error::NotInOmega);
    }
    fs.entry(&root.a)
}

/// Orbit size attached to a type tag.
fn orbit_len(rtype: RootType) -> usize {
    match rtype {
        RootType::Fixed => 1,
        RootType::Pair | RootType::SummingPair => 2,
        RootType::Triple => 3,
    }
}

/// The canonical Γ-fixed vector X̃_{(a,n)}: the orbit sum of the
/// correspondent twisted by ξ^{−jn}, carrying z^{n/r}.
pub fn x_tilde(case: &Case, root: &AffineRealRoot) -> Result<LieElt> {
    let fs = case.fold();
    let entry = entry_checked(fs, root)?;
    let r = fs.r();
    let mut out = LieElt::zero(r);
    let mut id = entry.correspondent;
    for j in 0..orbit_len(entry.rtype) {
        let coeff = Cyc::xi_pow(r, -(j as i64) * root.n);
        out.add_term(BasisKey::X(id), &Laurent::monomial(r, root.n, coeff));
        id = case.sigma_root_id(id);
    }
    Ok(out)
}

/// Squared length of a real root under the normalization (α,α) = 2 on the
/// ambient system.
pub fn norm_sq(fs: &FoldedSystem, root: &AffineRealRoot) -> Result<Rat> {
    let entry = entry_checked(fs, root)?;
    Ok(match entry.rtype {
        RootType::Fixed => rat(2, 1),
        RootType::Pair => rat(1, 1),
        RootType::SummingPair => rat(1, 2),
        RootType::Triple => rat(2, 3),
    })
}

/// The coroot-side element attached to a real root: an orbit sum of coroots
/// plus the central coefficient 2n/(â,â).
pub fn h_hat(case: &Case, root: &AffineRealRoot) -> Result<LieElt> {
    let fs = case.fold();
    let entry = entry_checked(fs, root)?;
    let r = fs.r();
    let rs = case.rs();
    let (orbit_mult, c_per_n) = match entry.rtype {
        RootType::Fixed => (1, 1),
        RootType::Pair => (1, 2),
        RootType::SummingPair => (2, 4),
        RootType::Triple => (1, 3),
    };
    let mut coords = alloc::vec![0i64; rs.rank()];
    let mut id = entry.correspondent;
    for _ in 0..orbit_len(entry.rtype) {
        for (i, ci) in rs.root(id).iter().enumerate() {
            coords[i] += orbit_mult * ci;
        }
        id = case.sigma_root_id(id);
    }
    let mut out = LieElt::zero(r);
    for (i, ni) in coords.iter().enumerate() {
        if *ni != 0 {
            out.add_term(BasisKey::H(i), &Laurent::from_int(r, *ni));
        }
    }
    out.c = Cyc::from_rat(r, rat_int(c_per_n * root.n));
    Ok(out)
}

/// The normalizing prefactor turning X̃ into a Chevalley-pair member:
/// ε_a·ξ_a^{−n} with ξ_a = 1 on positive folded roots and ξ otherwise, and
/// ε_a = 2 only on negative doubled-orbit (summing) roots.
fn pair_prefactor(fs: &FoldedSystem, entry_rtype: RootType, a: &[i64], n: i64) -> Cyc {
    let r = fs.r();
    let positive = height(a) > 0;
    match entry_rtype {
        RootType::Fixed | RootType::Triple => Cyc::one(r),
        RootType::Pair => {
            if positive {
                Cyc::one(r)
            } else {
                Cyc::xi_pow(r, -n)
            }
        }
        RootType::SummingPair => {
            let xi = if positive { Cyc::one(r) } else { Cyc::xi_pow(r, -n) };
            let eps = if positive { 1 } else { 2 };
            &xi * &Cyc::from_rat(r, rat_int(eps))
        }
    }
}

/// (φ(X_â), φ(X_{−â})): the Chevalley pair over the real root â, whose
/// bracket is h_hat(â).
pub fn chevalley_pair(case: &Case, root: &AffineRealRoot) -> Result<(LieElt, LieElt)> {
    let fs = case.fold();
    let plus = {
        let entry = entry_checked(fs, root)?;
        let pref = pair_prefactor(fs, entry.rtype, &root.a, root.n);
        x_tilde(case, root)?.scale_cyc(&pref)
    };
    let neg = root.neg();
    let minus = {
        let entry = entry_checked(fs, &neg)?;
        let pref = pair_prefactor(fs, entry.rtype, &neg.a, neg.n);
        x_tilde(case, &neg)?.scale_cyc(&pref)
    };
    Ok((plus, minus))
}

/// Affine generator data: the (ℓ+1)×(ℓ+1) generalized Cartan matrix with
/// index 0 the affine node, plus the generator triples.
#[derive(Debug, Clone)]
pub struct AffineGCM {
    matrix: Vec<Vec<i64>>,
    h_coords: Vec<Vec<i64>>,
    e_hat: Vec<LieElt>,
    f_hat: Vec<LieElt>,
    h_hat: Vec<LieElt>,
}

impl AffineGCM {
    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &Vec<Vec<i64>> {
        &self.matrix
    }

    pub fn entry(&self, p: usize, q: usize) -> i64 {
        self.matrix[p][q]
    }

    /// Coroot coordinates of H_p over the simple coroots.
    pub fn h_coords(&self, p: usize) -> &[i64] {
        &self.h_coords[p]
    }

    pub fn e(&self, p: usize) -> &LieElt {
        &self.e_hat[p]
    }

    pub fn f(&self, p: usize) -> &LieElt {
        &self.f_hat[p]
    }

    pub fn h(&self, p: usize) -> &LieElt {
        &self.h_hat[p]
    }
}

/// Assembles Ĥ_p, Ê_p, F̂_p and the matrix a_q(H_p) for the affinization.
pub fn chev_generators(case: &Case) -> Result<AffineGCM> {
    let fs = case.fold();
    let rs = case.rs();
    let r = fs.r();
    let ell = fs.ell();
    let mut h_coords: Vec<Vec<i64>> = Vec::with_capacity(ell + 1);
    let mut e_hat: Vec<LieElt> = Vec::with_capacity(ell + 1);
    let mut f_hat: Vec<LieElt> = Vec::with_capacity(ell + 1);
    let mut h_hat_elts: Vec<LieElt> = Vec::with_capacity(ell + 1);

    // The affine triple sits over â₀ = a₀ + δ with a₀ the tabulated lowest
    // folded root.
    let top = fs.highest_a0()?;
    let a0 = AffineRealRoot::new(top.coeffs.iter().map(|c| -c).collect(), 1);
    let (e0, f0) = chevalley_pair(case, &a0)?;
    let h0 = h_hat(case, &a0)?;
    let coords0: Vec<i64> = (0..rs.rank())
        .map(|i| {
            let l = h0.coeff(BasisKey::H(i));
            cyc_to_int(&l.coeff(0))
        })
        .collect();
    h_coords.push(coords0);
    e_hat.push(e0);
    f_hat.push(f0);
    h_hat_elts.push(h0);

    for p in 0..ell {
        let nodes = fs.orbit_nodes(p);
        let linked = nodes
            .iter()
            .any(|&i| nodes.iter().any(|&j| i != j && rs.cartan(i, j) != 0));
        let mult = if linked { 2 } else { 1 };
        let mut coords = alloc::vec![0i64; rs.rank()];
        let mut e = LieElt::zero(r);
        let mut f = LieElt::zero(r);
        let mut h = LieElt::zero(r);
        for &i in nodes {
            coords[i] = mult;
            let id = rs.root_id(&unit_vec(rs, i)).expect("simple root");
            e.add_term(BasisKey::X(id), &Laurent::one(r));
            f.add_term(BasisKey::X(rs.neg_id(id)), &Laurent::from_int(r, mult));
            h.add_term(BasisKey::H(i), &Laurent::from_int(r, mult));
        }
        h_coords.push(coords);
        e_hat.push(e);
        f_hat.push(f);
        h_hat_elts.push(h);
    }

    // a_p(h_i) over the folded simple basis, exact.
    let ap_hi: Vec<Vec<Rat>> = (0..ell)
        .map(|p| {
            (0..rs.rank())
                .map(|i| {
                    let rep = unit_vec(rs, fs.orbit_nodes(p)[0]);
                    let mut acc = 0i64;
                    for j in 0..r {
                        let img = fs.aut().apply_root_pow(&rep, j);
                        acc += rs.pairing(&img, &unit_vec(rs, i));
                    }
                    rat(acc, r as i64)
                })
                .collect()
        })
        .collect();
    let functional = |vec_q: &[i64], i: usize| -> Rat {
        let mut acc = Rat::zero();
        for (p, xq) in vec_q.iter().enumerate() {
            if *xq != 0 {
                acc += &ap_hi[p][i] * rat_int(*xq);
            }
        }
        acc
    };

    let mut matrix = alloc::vec![alloc::vec![0i64; ell + 1]; ell + 1];
    for p in 0..=ell {
        for q in 0..=ell {
            let vec_q: Vec<i64> = if q == 0 {
                a0.a.clone()
            } else {
                (0..ell).map(|t| i64::from(t == q - 1)).collect()
            };
            let mut acc = Rat::zero();
            for (i, hi) in h_coords[p].iter().enumerate() {
                if *hi != 0 {
                    acc += functional(&vec_q, i) * rat_int(*hi);
                }
            }
            if !acc.is_integer() {
                return Err(Error::Internal("non-integer affine pairing"));
            }
            matrix[p][q] = rat_to_int(&acc);
        }
    }
    Ok(AffineGCM { matrix, h_coords, e_hat, f_hat, h_hat: h_hat_elts })
}

fn cyc_to_int(c: &Cyc) -> i64 {
    debug_assert!(c.xi_part().is_zero(), "expected a rational scalar");
    rat_to_int(c.rat_part())
}

fn rat_to_int(q: &Rat) -> i64 {
    debug_assert!(q.is_integer());
    let v = q.numer().clone();
    i64::try_from(v).expect("pairing value fits in i64")
}

/// Checks every defining relation of the generator matrix inside the loop
/// algebra, plus the GCM axioms; returns human-readable failures.
pub fn verify_serre(case: &Case, gcm: &AffineGCM) -> Vec<String> {
    let mut bad = Vec::new();
    let n = gcm.size();
    let fs = case.fold();
    let top = match fs.highest_a0() {
        Ok(t) => t,
        Err(_) => return alloc::vec![String::from("no tabulated lowest root")],
    };
    let d_weight = |p: usize| -> Rat {
        if p == 0 {
            let a0: Vec<i64> = top.coeffs.iter().map(|c| -c).collect();
            fs.norm_sq_folded(&a0) / rat_int(2)
        } else {
            let e: Vec<i64> = (0..fs.ell()).map(|t| i64::from(t == p - 1)).collect();
            fs.norm_sq_folded(&e) / rat_int(2)
        }
    };
    for p in 0..n {
        if gcm.entry(p, p) != 2 {
            bad.push(format!("diagonal entry at {p} is not 2"));
        }
        for q in 0..n {
            if p != q {
                if gcm.entry(p, q) > 0 {
                    bad.push(format!("positive off-diagonal entry at ({p},{q})"));
                }
                if (gcm.entry(p, q) == 0) != (gcm.entry(q, p) == 0) {
                    bad.push(format!("asymmetric zero at ({p},{q})"));
                }
            }
            if d_weight(p) * rat_int(gcm.entry(p, q)) != d_weight(q) * rat_int(gcm.entry(q, p)) {
                bad.push(format!("not symmetrizable at ({p},{q})"));
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            let hh = bracket(case, gcm.h(p), gcm.h(q));
            if !hh.is_zero() {
                bad.push(format!("[H{p}, H{q}] nonzero"));
            }
            let he = bracket(case, gcm.h(p), gcm.e(q));
            if he != gcm.e(q).scale_int(gcm.entry(p, q)) {
                bad.push(format!("[H{p}, E{q}] mismatch"));
            }
            let hf = bracket(case, gcm.h(p), gcm.f(q));
            if hf != gcm.f(q).scale_int(-gcm.entry(p, q)) {
                bad.push(format!("[H{p}, F{q}] mismatch"));
            }
            let ef = bracket(case, gcm.e(p), gcm.f(q));
            let expect = if p == q { gcm.h(p).clone() } else { LieElt::zero(case.r()) };
            if ef != expect {
                bad.push(format!("[E{p}, F{q}] mismatch"));
            }
            if p != q {
                let steps = (1 - gcm.entry(p, q)) as usize;
                let mut acc = gcm.e(q).clone();
                for _ in 0..steps {
                    acc = bracket(case, gcm.e(p), &acc);
                }
                if !acc.is_zero() {
                    bad.push(format!("Serre relation fails on E at ({p},{q})"));
                }
                let mut acc = gcm.f(q).clone();
                for _ in 0..steps {
                    acc = bracket(case, gcm.f(p), &acc);
                }
                if !acc.is_zero() {
                    bad.push(format!("Serre relation fails on F at ({p},{q})"));
                }
            }
        }
    }
    bad
}

/// Dimension of the degree-n graded piece of the twisted loop algebra
/// (coefficient of z^{n/r}).
pub fn graded_dim(case: &Case, n: i64) -> usize {
    let rs = case.rs();
    let dim = rs.num_roots() + rs.rank();
    match case.r() {
        1 => dim,
        2 => {
            // Involution eigenspace count via the trace.
            let mut trace = 0i64;
            for a in rs.all_ids() {
                if case.sigma_root_id(a) == a {
                    trace += case.chev().k(a);
                }
            }
            for i in 0..rs.rank() {
                if case.fold().aut().node(i) == i {
                    trace += 1;
                }
            }
            let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
            ((dim as i64 + sign * trace) / 2) as usize
        }
        3 => graded_dim_triality(case, n),
        _ => unreachable!("order is 1, 2, or 3"),
    }
}

/// Rational-kernel computation of the degree-n piece for the triality case:
/// unknowns are the 1 and ξ components of each basis coefficient, rows are
/// σ(X) = ξ^n X (linear) and ω(X) = X (semilinear).
fn graded_dim_triality(case: &Case, n: i64) -> usize {
    let rs = case.rs();
    let nb = rs.num_roots() + rs.rank();
    let cols = 2 * nb;
    let key_index = |key: BasisKey| -> usize {
        match key {
            BasisKey::X(a) => a,
            BasisKey::H(i) => rs.num_roots() + i,
        }
    };
    let image = |key: BasisKey, omega: bool| -> (usize, i64) {
        match key {
            BasisKey::X(a) => {
                if omega {
                    (key_index(BasisKey::X(case.omega_root_id(a))), case.chev().k_omega(a))
                } else {
                    (key_index(BasisKey::X(case.sigma_root_id(a))), case.chev().k(a))
                }
            }
            BasisKey::H(i) => {
                let j = if omega {
                    case.fold().aut().omega_node(i)
                } else {
                    case.fold().aut().node(i)
                };
                (key_index(BasisKey::H(j)), 1)
            }
        }
    };
    let all_keys: Vec<BasisKey> = (0..rs.num_roots())
        .map(BasisKey::X)
        .chain((0..rs.rank()).map(BasisKey::H))
        .collect();
    let xi_n = Cyc::xi_pow(3, n);
    let xa = xi_n.rat_part().clone();
    let xb = xi_n.xi_part().clone();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    // σ-condition: for each target index t, Σ_{σb=t} k_b·coeff_b − ξ^n·coeff_t = 0.
    let mut sigma_rows = alloc::vec![alloc::vec![Rat::zero(); cols]; 2 * nb];
    for &key in &all_keys {
        let b = key_index(key);
        let (t, sign) = image(key, false);
        // Contribution coeff_b·sign lands at target t: real and ξ rows.
        sigma_rows[2 * t][2 * b] += rat_int(sign);
        sigma_rows[2 * t + 1][2 * b + 1] += rat_int(sign);
        // Subtract ξ^n·coeff_t at its own target rows (ξ² = −1−ξ):
        // (x + yξ)(a + bξ) = (xa − yb) + (xb + ya − yb)ξ.
        sigma_rows[2 * b][2 * b] -= &xa;
        sigma_rows[2 * b][2 * b + 1] -= -&xb;
        sigma_rows[2 * b + 1][2 * b] -= &xb;
        sigma_rows[2 * b + 1][2 * b + 1] -= &xa - &xb;
    }
    rows.extend(sigma_rows);
    // ω-condition: Σ_{ωb=t} k^ω_b·conj(coeff_b) − coeff_t = 0, with
    // conj(x + yξ) = (x − y) − yξ.
    let mut omega_rows = alloc::vec![alloc::vec![Rat::zero(); cols]; 2 * nb];
    for &key in &all_keys {
        let b = key_index(key);
        let (t, sign) = image(key, true);
        omega_rows[2 * t][2 * b] += rat_int(sign);
        omega_rows[2 * t][2 * b + 1] += rat_int(-sign);
        omega_rows[2 * t + 1][2 * b + 1] += rat_int(-sign);
        omega_rows[2 * b][2 * b] -= rat_int(1);
        omega_rows[2 * b + 1][2 * b + 1] -= rat_int(1);
    }
    rows.extend(omega_rows);
    // The semilinear ω-condition cuts the eigenspace down to a ℚ-form, so
    // the rational kernel dimension equals the ℚ(ξ)-eigenspace dimension.
    kernel_dim(&rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn case(kind: Kind, rank: usize, r: u8) -> Case {
        Case::new(kind, rank, r).unwrap()
    }

    #[test]
    fn central_element_brackets_to_zero() {
        let cs = case(Kind::A, 1, 1);
        let c = LieElt::central(1, Cyc::one(1));
        let x = LieElt::x(1, 0, Laurent::monomial(1, 3, Cyc::one(1)));
        assert!(bracket(&cs, &c, &x).is_zero());
        assert!(bracket(&cs, &x, &c).is_zero());
    }

    #[test]
    fn derivation_scales_by_loop_degree() {
        let cs = case(Kind::A, 1, 1);
        let d = LieElt::derivation(1, Cyc::one(1));
        let x = LieElt::x(1, 0, Laurent::monomial(1, 3, Cyc::one(1)));
        assert_eq!(bracket(&cs, &d, &x), x.scale_int(3));
        assert_eq!(bracket(&cs, &x, &d), x.scale_int(-3));
    }

    #[test]
    fn opposite_root_vectors_bracket_to_coroot_plus_center() {
        let cs = case(Kind::A, 1, 1);
        let rs = cs.rs();
        let a = rs.root_id(&[1]).unwrap();
        let x = LieElt::x(1, a, Laurent::monomial(1, 1, Cyc::one(1)));
        let y = LieElt::x(1, rs.neg_id(a), Laurent::monomial(1, -1, Cyc::one(1)));
        let got = bracket(&cs, &x, &y);
        let mut expect = LieElt::h(1, 0, Laurent::one(1));
        expect = expect.add(&LieElt::central(1, Cyc::one(1)));
        assert_eq!(got, expect);
    }

    #[test]
    fn galois_action_matches_the_worked_examples() {
        let cs = case(Kind::A, 4, 2);
        let rs = cs.rs();
        let fixed_id = rs.root_id(&[0, 1, 1, 0]).unwrap();
        let elt = LieElt::x(2, fixed_id, Laurent::monomial(2, 1, Cyc::one(2)));
        assert!(is_fixed(&cs, &elt), "k = −1 cancels the coefficient sign");
        let a1 = rs.root_id(&[1, 0, 0, 0]).unwrap();
        let moved = LieElt::x(2, a1, Laurent::one(2));
        assert!(!is_fixed(&cs, &moved));
        assert_eq!(
            gamma_action(&cs, Gamma::Sigma, &moved),
            LieElt::x(2, rs.root_id(&[0, 0, 0, 1]).unwrap(), Laurent::one(2))
        );
        let c = LieElt::central(2, Cyc::one(2));
        assert!(is_fixed(&cs, &c));
    }

    #[test]
    fn x_tilde_expands_the_triality_orbit() {
        let cs = case(Kind::D, 4, 3);
        let rs = cs.rs();
        for n in [-2i64, 0, 1, 5] {
            let elt = x_tilde(&cs, &AffineRealRoot::new(vec![0, 1], n)).unwrap();
            let mut expect = LieElt::zero(3);
            expect.add_term(
                BasisKey::X(rs.root_id(&[1, 0, 0, 0]).unwrap()),
                &Laurent::monomial(3, n, Cyc::one(3)),
            );
            expect.add_term(
                BasisKey::X(rs.root_id(&[0, 0, 1, 0]).unwrap()),
                &Laurent::monomial(3, n, Cyc::xi_pow(3, -n)),
            );
            expect.add_term(
                BasisKey::X(rs.root_id(&[0, 0, 0, 1]).unwrap()),
                &Laurent::monomial(3, n, Cyc::xi_pow(3, -2 * n)),
            );
            assert_eq!(elt, expect);
            assert!(is_fixed(&cs, &elt));
        }
    }

    #[test]
    fn x_tilde_on_a_doubled_root_is_a_single_fixed_vector() {
        let cs = case(Kind::A, 4, 2);
        let rs = cs.rs();
        let elt = x_tilde(&cs, &AffineRealRoot::new(vec![0, 2], 1)).unwrap();
        assert_eq!(
            elt,
            LieElt::x(2, rs.root_id(&[0, 1, 1, 0]).unwrap(), Laurent::monomial(2, 1, Cyc::one(2)))
        );
        assert!(is_fixed(&cs, &elt));
        assert!(
            x_tilde(&cs, &AffineRealRoot::new(vec![0, 2], 2)).is_err(),
            "doubled roots require odd degree"
        );
    }

    #[test]
    fn x_tilde_in_the_untwisted_case_is_a_plain_loop_vector() {
        let cs = case(Kind::A, 2, 1);
        let rs = cs.rs();
        let elt = x_tilde(&cs, &AffineRealRoot::new(vec![1, 1], 4)).unwrap();
        assert_eq!(
            elt,
            LieElt::x(1, rs.root_id(&[1, 1]).unwrap(), Laurent::monomial(1, 4, Cyc::one(1)))
        );
    }

    #[test]
    fn omega_membership_follows_the_length_rules() {
        let fs = case(Kind::D, 5, 2).fold().clone();
        assert!(in_omega(&fs, &AffineRealRoot::new(vec![0, 0, 0, 1], 7)), "short, any degree");
        let long = vec![0, 0, 1, 2];
        assert!(in_omega(&fs, &AffineRealRoot::new(long.clone(), 2)));
        assert!(!in_omega(&fs, &AffineRealRoot::new(long, 3)), "long roots need r | n");
        assert!(!in_omega(&fs, &AffineRealRoot::new(vec![9, 9, 9, 9], 0)));
    }

    #[test]
    fn coroot_side_matches_the_case_formulas() {
        // Fixed root, n = 0 and n = 2.
        let cs = case(Kind::A, 2, 1);
        let a = AffineRealRoot::new(vec![1, 1], 0);
        let got = h_hat(&cs, &a).unwrap();
        let mut expect = LieElt::h(1, 0, Laurent::one(1));
        expect.add_term(BasisKey::H(1), &Laurent::one(1));
        assert_eq!(got, expect);
        let a2 = AffineRealRoot::new(vec![1, 1], 2);
        let got = h_hat(&cs, &a2).unwrap();
        assert_eq!(got.c_coeff(), &Cyc::from_rat(1, rat_int(2)));

        // Summing pair at degree 1: 2(H_α + H_{σα}) ⊗ 1 + 4c.
        let cs = case(Kind::A, 4, 2);
        let got = h_hat(&cs, &AffineRealRoot::new(vec![0, 1], 1)).unwrap();
        let mut expect = LieElt::zero(2);
        expect.add_term(BasisKey::H(1), &Laurent::from_int(2, 2));
        expect.add_term(BasisKey::H(2), &Laurent::from_int(2, 2));
        expect = expect.add(&LieElt::central(2, Cyc::from_rat(2, rat_int(4))));
        assert_eq!(got, expect);

        // Triality orbit at degree 1: (H_{α₁}+H_{α₃}+H_{α₄}) ⊗ 1 + 3c.
        let cs = case(Kind::D, 4, 3);
        let got = h_hat(&cs, &AffineRealRoot::new(vec![0, 1], 1)).unwrap();
        let mut expect = LieElt::zero(3);
        for i in [0usize, 2, 3] {
            expect.add_term(BasisKey::H(i), &Laurent::one(3));
        }
        expect = expect.add(&LieElt::central(3, Cyc::from_rat(3, rat_int(3))));
        assert_eq!(got, expect);
    }

    #[test]
    fn chevalley_pairs_bracket_to_the_coroot_side() {
        for (kind, rank, r) in [
            (Kind::A, 2, 1),
            (Kind::A, 3, 2),
            (Kind::A, 4, 2),
            (Kind::D, 4, 3),
            (Kind::D, 5, 2),
        ] {
            let cs = case(kind, rank, r);
            let coords: Vec<Vec<i64>> =
                cs.fold().entries().iter().map(|e| e.coords.clone()).collect();
            for a in coords {
                for n in -2i64..=2 {
                    let root = AffineRealRoot::new(a.clone(), n);
                    if !in_omega(cs.fold(), &root) {
                        continue;
                    }
                    let (plus, minus) = chevalley_pair(&cs, &root).unwrap();
                    assert!(is_fixed(&cs, &plus), "({kind:?}{rank},{r}) {a:?}+{n}δ");
                    assert!(is_fixed(&cs, &minus));
                    let got = bracket(&cs, &plus, &minus);
                    let expect = h_hat(&cs, &root).unwrap();
                    assert_eq!(got, expect, "({kind:?}{rank},{r}) {a:?}+{n}δ");
                }
            }
        }
    }

    #[test]
    fn central_term_vanishes_exactly_at_degree_zero_for_fixed_type() {
        let cs = case(Kind::A, 2, 1);
        for n in -3i64..=3 {
            let root = AffineRealRoot::new(vec![1, 1], n);
            let x = x_tilde(&cs, &root).unwrap();
            let y = x_tilde(&cs, &root.neg()).unwrap();
            let c = bracket(&cs, &x, &y).c_coeff().clone();
            assert_eq!(c.is_zero(), n == 0);
        }
    }

    #[test]
    fn affine_matrices_match_the_known_tables() {
        let gcm = chev_generators(&case(Kind::A, 4, 2)).unwrap();
        assert_eq!(
            gcm.matrix(),
            &vec![vec![2, -1, 0], vec![-2, 2, -1], vec![0, -2, 2]]
        );
        let gcm = chev_generators(&case(Kind::D, 4, 3)).unwrap();
        assert_eq!(
            gcm.matrix(),
            &vec![vec![2, 0, -1], vec![0, 2, -1], vec![-1, -3, 2]]
        );
        let gcm = chev_generators(&case(Kind::A, 3, 2)).unwrap();
        assert_eq!(
            gcm.matrix(),
            &vec![vec![2, 0, -2], vec![0, 2, -2], vec![-1, -1, 2]]
        );
        let gcm = chev_generators(&case(Kind::A, 2, 1)).unwrap();
        assert_eq!(
            gcm.matrix(),
            &vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]
        );
    }

    #[test]
    fn affine_pairings_agree_with_folded_geometry() {
        for (kind, rank, r) in [(Kind::A, 4, 2), (Kind::A, 5, 2), (Kind::D, 4, 3), (Kind::D, 5, 2)]
        {
            let cs = case(kind, rank, r);
            let fs = cs.fold();
            let gcm = chev_generators(&cs).unwrap();
            let top = fs.highest_a0().unwrap();
            let vec_of = |p: usize| -> Vec<i64> {
                if p == 0 {
                    top.coeffs.iter().map(|c| -c).collect()
                } else {
                    (0..fs.ell()).map(|t| i64::from(t == p - 1)).collect()
                }
            };
            for p in 0..gcm.size() {
                for q in 0..gcm.size() {
                    let expect =
                        rat(2, 1) * fs.form(&vec_of(q), &vec_of(p)) / fs.norm_sq_folded(&vec_of(p));
                    assert_eq!(rat_int(gcm.entry(p, q)), expect, "entry ({p},{q})");
                }
            }
        }
    }

    #[test]
    fn generator_relations_hold_for_the_small_twisted_cases() {
        for (kind, rank, r) in [(Kind::A, 2, 2), (Kind::A, 4, 2), (Kind::D, 4, 3)] {
            let cs = case(kind, rank, r);
            let gcm = chev_generators(&cs).unwrap();
            let failures = verify_serre(&cs, &gcm);
            assert!(failures.is_empty(), "({kind:?}{rank},{r}): {failures:?}");
        }
    }

    #[test]
    fn graded_dimensions_count_eigenspaces() {
        let cs = case(Kind::A, 2, 1);
        assert_eq!(graded_dim(&cs, 0), 8);
        assert_eq!(graded_dim(&cs, 5), 8);

        let cs = case(Kind::A, 4, 2);
        assert_eq!(graded_dim(&cs, 0), 10, "fixed subalgebra of the involution");
        assert_eq!(graded_dim(&cs, 1), 14);
        assert_eq!(graded_dim(&cs, 0) + graded_dim(&cs, 1), 24);

        let cs = case(Kind::D, 4, 3);
        assert_eq!(graded_dim(&cs, 0), 14, "triality-fixed subalgebra");
        assert_eq!(graded_dim(&cs, 1), 7);
        assert_eq!(graded_dim(&cs, 2), 7);
    }
}
