//! Steinberg-presentation layer for the twisted loop group: the payload
//! group for summing-pair roots, formal generator words with expansion to
//! untwisted atoms, torus-coordinate arithmetic for kernel tests, and the
//! generator-level homomorphisms between the three presentations.

use alloc::vec;
use alloc::vec::Vec;

use crate::loopalg::{in_omega, AffineRealRoot, Case, Gamma};
use crate::roots::fold::FoldedSystem;
use crate::roots::RootType;
use crate::scalars::{rat, rat_int, Cyc, Laurent, Rat};
use crate::{Error, Result};

/// Payload pair `(first, second)` over `K[z^{±1/2}]` subject to
/// `first·σ'(first) = second + σ'(second)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AElt {
    first: Laurent,
    second: Laurent,
}

impl AElt {
    /// Validates the defining identity; both components must live in `r = 2`.
    pub fn new(first: Laurent, second: Laurent) -> Result<Self> {
        if first.order() != 2 || second.order() != 2 {
            return Err(Error::InvalidPayload("pair components must have ground order 2"));
        }
        let lhs = &first * &first.sigma_prime();
        let rhs = &second + &second.sigma_prime();
        if lhs != rhs {
            return Err(Error::InvalidPayload("pair fails first·σ'(first) = second + σ'(second)"));
        }
        Ok(AElt { first, second })
    }

    /// The unit element `(0, 0)`.
    pub fn zero() -> Self {
        AElt { first: Laurent::zero(2), second: Laurent::zero(2) }
    }

    /// The distinguished pair `(1, 1/2)`.
    pub fn one_half() -> Self {
        AElt {
            first: Laurent::one(2),
            second: Laurent::from_rat(2, rat(1, 2)),
        }
    }

    pub fn first(&self) -> &Laurent {
        &self.first
    }

    pub fn second(&self) -> &Laurent {
        &self.second
    }

    /// Membership in the subset whose second component is a unit.
    pub fn has_unit_second(&self) -> bool {
        self.second.is_unit()
    }
}

/// Product `χ ∔ φ = (χ¹ + φ¹, χ² + φ² + σ'(χ¹)·φ¹)`.
pub fn a_plus(chi: &AElt, phi: &AElt) -> AElt {
    let first = &chi.first + &phi.first;
    let cross = &chi.first.sigma_prime() * &phi.first;
    let second = &(&chi.second + &phi.second) + &cross;
    AElt { first, second }
}

/// Inverse `⊖χ = (−χ¹, σ'(χ²))`.
pub fn a_neg(chi: &AElt) -> AElt {
    AElt { first: -&chi.first, second: chi.second.sigma_prime() }
}

/// Scalar hit `s ⇀ χ = (s·χ¹, s·σ'(s)·χ²)`.
pub fn a_act(s: &Laurent, chi: &AElt) -> AElt {
    let first = s * &chi.first;
    let second = &(s * &s.sigma_prime()) * &chi.second;
    AElt { first, second }
}

/// Coordinate `𝔠(ζ, γ) = ζ²·σ'(γ²)⁻¹` of a pair of unit-second payloads.
pub fn c_of(zeta: &AElt, gamma: &AElt) -> Result<Laurent> {
    Ok(&zeta.second * &gamma.second.sigma_prime().inv_unit()?)
}

/// The canonical unit-second payload `ε_a·ξ_a^{−n}·ν·z^{n/2} ⇀ (1, 1/2)`
/// attached to an affine root over a summing-pair folded root; `positive`
/// refers to the folded root.
pub fn chi_hat(positive: bool, n: i64, nu: &Rat) -> AElt {
    let eps: i64 = if positive { 1 } else { 2 };
    let xi_a_pow = if positive { Cyc::one(2) } else { Cyc::xi_pow(2, -n) };
    let coeff = &Cyc::from_rat(2, nu * &rat_int(eps)) * &xi_a_pow;
    a_act(&Laurent::monomial(2, n, coeff), &AElt::one_half())
}

/// Payload of a twisted generator; the variant must match the root type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    /// A single Laurent coefficient.
    Plain(Laurent),
    /// A validated pair, for summing-pair `x`/`w` atoms.
    Pair(AElt),
    /// Two validated pairs, for summing-pair `h` atoms.
    DoublePair(AElt, AElt),
}

/// One factor of a word in the ambient or twisted loop group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenAtom {
    /// `x_α(s)` over an ambient root id.
    X { root: usize, s: Laurent },
    /// `w_α(t) = x_α(t)·x_{−α}(−t⁻¹)·x_α(t)`, `t` a unit.
    W { root: usize, t: Laurent },
    /// `h_α(t) = w_α(t)·w_α(−1)`, `t` a unit.
    H { root: usize, t: Laurent },
    /// Twisted `x`-generator over a folded root.
    XT { coords: Vec<i64>, payload: Payload },
    /// Twisted `w`-generator over a folded root.
    WT { coords: Vec<i64>, payload: Payload },
    /// Twisted `h`-generator over a folded root.
    HT { coords: Vec<i64>, payload: Payload },
}

/// A finite product of generator atoms, leftmost factor first.
pub type GenWord = Vec<GenAtom>;

/// How a folded coordinate vector parametrizes generators: either a genuine
/// folded root of the given type, or the double of a summing-pair root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TwistKind {
    Doubled,
    Fixed,
    Pair,
    SummingPair,
    Triple,
}

fn twist_kind(fs: &FoldedSystem, coords: &[i64]) -> Result<TwistKind> {
    let e = fs.entry(coords)?;
    if !e.in_twisted {
        return Ok(TwistKind::Doubled);
    }
    Ok(match e.rtype {
        RootType::Fixed => TwistKind::Fixed,
        RootType::Pair => TwistKind::Pair,
        RootType::SummingPair => TwistKind::SummingPair,
        RootType::Triple => TwistKind::Triple,
    })
}

fn neg_coords(coords: &[i64]) -> Vec<i64> {
    coords.iter().map(|c| -c).collect()
}

/// Base preimage root for generator expansions over a folded root. Triple
/// orbits use the orbit element fixed by the diagram involution, negated
/// compatibly for negative roots, so that payload domains and rank-one
/// regroupings are uniform; other types use the stored correspondent.
fn gen_base(case: &Case, coords: &[i64]) -> Result<usize> {
    let fs = case.fold();
    let e = fs.entry(coords)?;
    if !e.in_twisted || e.rtype != RootType::Triple {
        return fs.correspondent(coords);
    }
    let positive = folded_is_positive(fs, coords)?;
    let pos = if positive { coords.to_vec() } else { neg_coords(coords) };
    let mut p = fs.correspondent(&pos)?;
    for _ in 0..fs.r() {
        if case.omega_root_id(p) == p {
            return Ok(if positive { p } else { case.rs().neg_id(p) });
        }
        p = case.sigma_root_id(p);
    }
    Err(Error::Internal("triple orbit without an involution-fixed element"))
}

fn folded_is_positive(fs: &FoldedSystem, coords: &[i64]) -> Result<bool> {
    Ok(fs.is_positive_entry(fs.entry_id(coords)?))
}

impl GenAtom {
    pub fn x(root: usize, s: Laurent) -> GenAtom {
        GenAtom::X { root, s }
    }

    pub fn w(root: usize, t: Laurent) -> Result<GenAtom> {
        if !t.is_unit() {
            return Err(Error::InvalidPayload("w payload must be a unit"));
        }
        Ok(GenAtom::W { root, t })
    }

    pub fn h(root: usize, t: Laurent) -> Result<GenAtom> {
        if !t.is_unit() {
            return Err(Error::InvalidPayload("h payload must be a unit"));
        }
        Ok(GenAtom::H { root, t })
    }

    pub fn xt(fs: &FoldedSystem, coords: &[i64], payload: Payload) -> Result<GenAtom> {
        validate_twisted(fs, coords, &payload, false, false)?;
        Ok(GenAtom::XT { coords: coords.to_vec(), payload })
    }

    pub fn wt(fs: &FoldedSystem, coords: &[i64], payload: Payload) -> Result<GenAtom> {
        validate_twisted(fs, coords, &payload, true, false)?;
        Ok(GenAtom::WT { coords: coords.to_vec(), payload })
    }

    pub fn ht(fs: &FoldedSystem, coords: &[i64], payload: Payload) -> Result<GenAtom> {
        validate_twisted(fs, coords, &payload, true, true)?;
        Ok(GenAtom::HT { coords: coords.to_vec(), payload })
    }
}

/// Shared payload checks: variant shape per root type, ground order, the
/// ring constraints of the root type, and unit constraints for `w`/`h`.
fn validate_twisted(
    fs: &FoldedSystem,
    coords: &[i64],
    payload: &Payload,
    unit_required: bool,
    h_atom: bool,
) -> Result<()> {
    let kind = twist_kind(fs, coords)?;
    let r = fs.r();
    match (kind, payload) {
        (TwistKind::Doubled, Payload::Plain(s)) => {
            check_plain(s, r, unit_required)?;
            // The lone summed-root factor is fixed by the twisted action
            // exactly when the payload has this parity (the torus sign
            // cancels for h atoms but not for x/w atoms).
            if h_atom && s.sigma_prime() != *s {
                return Err(Error::InvalidPayload("doubled-root h payload must be invariant under the loop twist"));
            }
            if !h_atom && s.sigma_prime() != -s {
                return Err(Error::InvalidPayload("doubled-root x/w payload must be odd under the loop twist"));
            }
            Ok(())
        }
        (TwistKind::Pair, Payload::Plain(s)) => check_plain(s, r, unit_required),
        (TwistKind::Fixed, Payload::Plain(s)) => {
            check_plain(s, r, unit_required)?;
            if !s.is_gamma_fixed() {
                return Err(Error::InvalidPayload("fixed-root payload must be Galois fixed"));
            }
            Ok(())
        }
        (TwistKind::Triple, Payload::Plain(s)) => {
            check_plain(s, r, unit_required)?;
            if s.omega_prime() != *s {
                return Err(Error::InvalidPayload("triple-root payload must have rational coefficients"));
            }
            Ok(())
        }
        (TwistKind::SummingPair, Payload::Pair(chi)) => {
            if h_atom {
                return Err(Error::InvalidPayload("summing-pair h atom takes two pairs"));
            }
            if unit_required && !chi.has_unit_second() {
                return Err(Error::InvalidPayload("w payload pair needs a unit second component"));
            }
            Ok(())
        }
        (TwistKind::SummingPair, Payload::DoublePair(zeta, gamma)) => {
            if !h_atom {
                return Err(Error::InvalidPayload("only h atoms take two pairs"));
            }
            if !zeta.has_unit_second() || !gamma.has_unit_second() {
                return Err(Error::InvalidPayload("h payload pairs need unit second components"));
            }
            Ok(())
        }
        _ => Err(Error::InvalidPayload("payload variant does not match the root type")),
    }
}

fn check_plain(s: &Laurent, r: u8, unit_required: bool) -> Result<()> {
    if s.order() != r {
        return Err(Error::InvalidPayload("payload ground order mismatch"));
    }
    if unit_required && !s.is_unit() {
        return Err(Error::InvalidPayload("w/h payload must be a unit"));
    }
    Ok(())
}

fn minus_one(r: u8) -> Laurent {
    Laurent::from_int(r, -1)
}

/// `w_α(t)` spelled as its three untwisted factors.
fn w_def(rs_neg: usize, root: usize, t: &Laurent) -> Result<GenWord> {
    let mid = -&t.inv_unit()?;
    Ok(vec![
        GenAtom::X { root, s: t.clone() },
        GenAtom::X { root: rs_neg, s: mid },
        GenAtom::X { root, s: t.clone() },
    ])
}

/// Rewrites one atom as a word in untwisted `x_α(s)` atoms only.
pub fn expand_twisted(case: &Case, atom: &GenAtom) -> Result<GenWord> {
    let rs = case.rs();
    match atom {
        GenAtom::X { .. } => Ok(vec![atom.clone()]),
        GenAtom::W { root, t } => w_def(rs.neg_id(*root), *root, t),
        GenAtom::H { root, t } => {
            let mut out = w_def(rs.neg_id(*root), *root, t)?;
            out.extend(w_def(rs.neg_id(*root), *root, &minus_one(t.order()))?);
            Ok(out)
        }
        GenAtom::XT { coords, payload } => expand_xt(case, coords, payload),
        GenAtom::WT { coords, payload } => expand_wt(case, coords, payload),
        GenAtom::HT { coords, payload } => expand_ht(case, coords, payload),
    }
}

fn expand_xt(case: &Case, coords: &[i64], payload: &Payload) -> Result<GenWord> {
    let fs = case.fold();
    let rs = case.rs();
    let kind = twist_kind(fs, coords)?;
    let alpha = gen_base(case, coords)?;
    match (kind, payload) {
        (TwistKind::Doubled, Payload::Plain(s)) | (TwistKind::Fixed, Payload::Plain(s)) => {
            Ok(vec![GenAtom::X { root: alpha, s: s.clone() }])
        }
        (TwistKind::Pair, Payload::Plain(s)) => {
            let sig = case.sigma_root_id(alpha);
            Ok(vec![
                GenAtom::X { root: alpha, s: s.clone() },
                GenAtom::X { root: sig, s: s.sigma_prime() },
            ])
        }
        (TwistKind::SummingPair, Payload::Pair(chi)) => {
            let sig = case.sigma_root_id(alpha);
            let sum = rs.sum_id(alpha, sig).ok_or(Error::Internal("summing pair must sum to a root"))?;
            let n_const = case
                .chev()
                .n(sig, alpha)
                .ok_or(Error::Internal("structure constant missing for summing pair"))?;
            Ok(vec![
                GenAtom::X { root: alpha, s: chi.first().clone() },
                GenAtom::X { root: sig, s: chi.first().sigma_prime() },
                GenAtom::X { root: sum, s: chi.second().scale(&Cyc::from_int(2, n_const)) },
            ])
        }
        (TwistKind::Triple, Payload::Plain(s)) => {
            let sig = case.sigma_root_id(alpha);
            let sig2 = case.sigma_root_id(sig);
            Ok(vec![
                GenAtom::X { root: alpha, s: s.clone() },
                GenAtom::X { root: sig, s: s.sigma_prime() },
                GenAtom::X { root: sig2, s: s.sigma_prime().sigma_prime() },
            ])
        }
        _ => Err(Error::InvalidPayload("payload variant does not match the root type")),
    }
}

fn expand_wt(case: &Case, coords: &[i64], payload: &Payload) -> Result<GenWord> {
    let fs = case.fold();
    let kind = twist_kind(fs, coords)?;
    let neg = neg_coords(coords);
    match (kind, payload) {
        (TwistKind::Doubled, Payload::Plain(t)) | (TwistKind::Fixed, Payload::Plain(t)) => {
            let alpha = gen_base(case, coords)?;
            w_def(case.rs().neg_id(alpha), alpha, t)
        }
        (TwistKind::Pair, Payload::Plain(q)) => {
            let mid = -&q.sigma_prime().inv_unit()?;
            let mut out = expand_xt(case, coords, &Payload::Plain(q.clone()))?;
            out.extend(expand_xt(case, &neg, &Payload::Plain(mid))?);
            out.extend(expand_xt(case, coords, &Payload::Plain(q.clone()))?);
            Ok(out)
        }
        (TwistKind::SummingPair, Payload::Pair(zeta)) => {
            let inv = zeta.second().sigma_prime().inv_unit()?;
            let mid = a_act(&-&inv, zeta);
            let last = a_act(&(zeta.second() * &inv), zeta);
            let mut out = expand_xt(case, coords, &Payload::Pair(zeta.clone()))?;
            out.extend(expand_xt(case, &neg, &Payload::Pair(mid))?);
            out.extend(expand_xt(case, coords, &Payload::Pair(last))?);
            Ok(out)
        }
        (TwistKind::Triple, Payload::Plain(q)) => {
            let mid = -&q.inv_unit()?;
            let mut out = expand_xt(case, coords, &Payload::Plain(q.clone()))?;
            out.extend(expand_xt(case, &neg, &Payload::Plain(mid))?);
            out.extend(expand_xt(case, coords, &Payload::Plain(q.clone()))?);
            Ok(out)
        }
        _ => Err(Error::InvalidPayload("payload variant does not match the root type")),
    }
}

fn expand_ht(case: &Case, coords: &[i64], payload: &Payload) -> Result<GenWord> {
    let fs = case.fold();
    let kind = twist_kind(fs, coords)?;
    let r = fs.r();
    match (kind, payload) {
        (TwistKind::Doubled, Payload::Plain(t)) | (TwistKind::Fixed, Payload::Plain(t)) => {
            let alpha = gen_base(case, coords)?;
            let neg = case.rs().neg_id(alpha);
            let mut out = w_def(neg, alpha, t)?;
            out.extend(w_def(neg, alpha, &minus_one(r))?);
            Ok(out)
        }
        (TwistKind::Pair, Payload::Plain(q)) | (TwistKind::Triple, Payload::Plain(q)) => {
            let mut out = expand_wt(case, coords, &Payload::Plain(q.clone()))?;
            out.extend(expand_wt(case, coords, &Payload::Plain(minus_one(r)))?);
            Ok(out)
        }
        (TwistKind::SummingPair, Payload::DoublePair(zeta, gamma)) => {
            let mut out = expand_wt(case, coords, &Payload::Pair(zeta.clone()))?;
            out.extend(expand_wt(case, coords, &Payload::Pair(gamma.clone()))?);
            Ok(out)
        }
        _ => Err(Error::InvalidPayload("payload variant does not match the root type")),
    }
}

/// The short product forms of twisted `w`/`h` atoms over non-summing-pair
/// roots (`w̃_a(q) = w_α(q)·w_{σα}(σ'q)` and the analogues), and the
/// two-factor torus form of a summing-pair `h` atom.
pub fn product_form(case: &Case, atom: &GenAtom) -> Result<GenWord> {
    let fs = case.fold();
    match atom {
        GenAtom::WT { coords, payload } => {
            let alpha = gen_base(case, coords)?;
            match (twist_kind(fs, coords)?, payload) {
                (TwistKind::Doubled, Payload::Plain(t)) | (TwistKind::Fixed, Payload::Plain(t)) => {
                    Ok(vec![GenAtom::w(alpha, t.clone())?])
                }
                (TwistKind::Pair, Payload::Plain(q)) => {
                    let sig = case.sigma_root_id(alpha);
                    Ok(vec![GenAtom::w(alpha, q.clone())?, GenAtom::w(sig, q.sigma_prime())?])
                }
                (TwistKind::Triple, Payload::Plain(q)) => {
                    let sig = case.sigma_root_id(alpha);
                    let sig2 = case.sigma_root_id(sig);
                    Ok(vec![
                        GenAtom::w(alpha, q.clone())?,
                        GenAtom::w(sig, q.sigma_prime())?,
                        GenAtom::w(sig2, q.sigma_prime().sigma_prime())?,
                    ])
                }
                _ => Err(Error::InvalidPayload("no short product form for this payload")),
            }
        }
        GenAtom::HT { coords, payload } => {
            let alpha = gen_base(case, coords)?;
            match (twist_kind(fs, coords)?, payload) {
                (TwistKind::Doubled, Payload::Plain(t)) | (TwistKind::Fixed, Payload::Plain(t)) => {
                    Ok(vec![GenAtom::h(alpha, t.clone())?])
                }
                (TwistKind::Pair, Payload::Plain(q)) => {
                    let sig = case.sigma_root_id(alpha);
                    Ok(vec![GenAtom::h(alpha, q.clone())?, GenAtom::h(sig, q.sigma_prime())?])
                }
                (TwistKind::Triple, Payload::Plain(q)) => {
                    let sig = case.sigma_root_id(alpha);
                    let sig2 = case.sigma_root_id(sig);
                    Ok(vec![
                        GenAtom::h(alpha, q.clone())?,
                        GenAtom::h(sig, q.sigma_prime())?,
                        GenAtom::h(sig2, q.sigma_prime().sigma_prime())?,
                    ])
                }
                (TwistKind::SummingPair, Payload::DoublePair(zeta, gamma)) => {
                    let sig = case.sigma_root_id(alpha);
                    let c = c_of(zeta, gamma)?;
                    Ok(vec![GenAtom::h(alpha, c.sigma_prime())?, GenAtom::h(sig, c)?])
                }
                _ => Err(Error::InvalidPayload("no short product form for this payload")),
            }
        }
        _ => Err(Error::InvalidPayload("product form is defined for twisted w/h atoms")),
    }
}

/// A torus element of the simply connected ambient loop group in simple
/// coordinates: the element is `∏_i h_{α_i}(coords[i])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusElt {
    coords: Vec<Laurent>,
}

impl TorusElt {
    pub fn identity(r: u8, rank: usize) -> Self {
        TorusElt { coords: vec![Laurent::one(r); rank] }
    }

    pub fn coords(&self) -> &[Laurent] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Laurent {
        &self.coords[i]
    }

    pub fn mul(&self, other: &TorusElt) -> TorusElt {
        assert_eq!(self.coords.len(), other.coords.len(), "mixed torus ranks");
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).collect();
        TorusElt { coords }
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|c| *c == Laurent::one(c.order()))
    }

    /// Multiplies in `h_α(t)` via the coroot decomposition of `α`.
    fn push_h(&mut self, case: &Case, root: usize, t: &Laurent) -> Result<()> {
        let decomp = case.chev().coroot_decomp(case.rs(), root);
        for (i, &n_i) in decomp.iter().enumerate() {
            if n_i != 0 {
                self.coords[i] = &self.coords[i] * &t.pow_unit(n_i)?;
            }
        }
        Ok(())
    }
}

/// Torus coordinates of a product of `h`-type atoms.
pub fn torus_of(case: &Case, atoms: &[GenAtom]) -> Result<TorusElt> {
    let fs = case.fold();
    let rs = case.rs();
    let mut out = TorusElt::identity(fs.r(), rs.rank());
    for atom in atoms {
        match atom {
            GenAtom::H { root, t } => out.push_h(case, *root, t)?,
            GenAtom::HT { coords, payload } => {
                let alpha = gen_base(case, coords)?;
                match (twist_kind(fs, coords)?, payload) {
                    (TwistKind::Doubled, Payload::Plain(t)) | (TwistKind::Fixed, Payload::Plain(t)) => {
                        out.push_h(case, alpha, t)?;
                    }
                    (TwistKind::Pair, Payload::Plain(q)) => {
                        out.push_h(case, alpha, q)?;
                        out.push_h(case, case.sigma_root_id(alpha), &q.sigma_prime())?;
                    }
                    (TwistKind::Triple, Payload::Plain(q)) => {
                        let sig = case.sigma_root_id(alpha);
                        out.push_h(case, alpha, q)?;
                        out.push_h(case, sig, &q.sigma_prime())?;
                        out.push_h(case, case.sigma_root_id(sig), &q.sigma_prime().sigma_prime())?;
                    }
                    (TwistKind::SummingPair, Payload::DoublePair(zeta, gamma)) => {
                        let c = c_of(zeta, gamma)?;
                        out.push_h(case, alpha, &c.sigma_prime())?;
                        out.push_h(case, case.sigma_root_id(alpha), &c)?;
                    }
                    _ => return Err(Error::InvalidPayload("payload variant does not match the root type")),
                }
            }
            _ => return Err(Error::InvalidPayload("torus coordinates are defined for h atoms")),
        }
    }
    Ok(out)
}

/// True iff the product of the given `h`-type atoms is the identity.
pub fn kernel_test(case: &Case, atoms: &[GenAtom]) -> Result<bool> {
    Ok(torus_of(case, atoms)?.is_identity())
}

/// Generator kinds shared by the two affine Kac-Moody presentations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomKind {
    X,
    W,
    H,
}

/// Generator of the twisted affine Kac-Moody presentation: a kind over a
/// real affine root of the folded system with a rational scalar payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KMAtom {
    pub kind: AtomKind,
    pub root: AffineRealRoot,
    pub payload: Rat,
}

impl KMAtom {
    pub fn x(root: AffineRealRoot, nu: Rat) -> KMAtom {
        KMAtom { kind: AtomKind::X, root, payload: nu }
    }

    pub fn w(root: AffineRealRoot, tau: Rat) -> Result<KMAtom> {
        if tau == rat_int(0) {
            return Err(Error::InvalidPayload("w payload must be nonzero"));
        }
        Ok(KMAtom { kind: AtomKind::W, root, payload: tau })
    }

    pub fn h(root: AffineRealRoot, tau: Rat) -> Result<KMAtom> {
        if tau == rat_int(0) {
            return Err(Error::InvalidPayload("h payload must be nonzero"));
        }
        Ok(KMAtom { kind: AtomKind::H, root, payload: tau })
    }
}

/// Generator of the untwisted affine Kac-Moody presentation over the
/// xi-extension: a kind over an ambient root id and loop degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbientAtom {
    pub kind: AtomKind,
    pub root: usize,
    pub n: i64,
    pub payload: Cyc,
}

impl AmbientAtom {
    pub fn x(root: usize, n: i64, nu: Cyc) -> AmbientAtom {
        AmbientAtom { kind: AtomKind::X, root, n, payload: nu }
    }

    pub fn w(root: usize, n: i64, tau: Cyc) -> Result<AmbientAtom> {
        if tau.is_zero() {
            return Err(Error::InvalidPayload("w payload must be nonzero"));
        }
        Ok(AmbientAtom { kind: AtomKind::W, root, n, payload: tau })
    }

    pub fn h(root: usize, n: i64, tau: Cyc) -> Result<AmbientAtom> {
        if tau.is_zero() {
            return Err(Error::InvalidPayload("h payload must be nonzero"));
        }
        Ok(AmbientAtom { kind: AtomKind::H, root, n, payload: tau })
    }
}

/// `ξ_a^{−n}` for a folded root: `1` when the root is positive, else
/// `ξ^{−n}`; always `1` in the untwisted case.
fn xi_a_pow(fs: &FoldedSystem, coords: &[i64], n: i64) -> Result<Cyc> {
    if folded_is_positive(fs, coords)? {
        Ok(Cyc::one(fs.r()))
    } else {
        Ok(Cyc::xi_pow(fs.r(), -n))
    }
}

fn check_real(fs: &FoldedSystem, root: &AffineRealRoot) -> Result<()> {
    if !in_omega(fs, root) {
        return Err(Error::NotInOmega);
    }
    Ok(())
}

/// Image of an `x`-generator of the twisted affine presentation in the
/// twisted loop group.
pub fn phi_x(fs: &FoldedSystem, atom: &KMAtom) -> Result<GenAtom> {
    if atom.kind != AtomKind::X {
        return Err(Error::InvalidPayload("phi_x expects an x atom"));
    }
    check_real(fs, &atom.root)?;
    let (coords, n) = (&atom.root.a[..], atom.root.n);
    let r = fs.r();
    match twist_kind(fs, coords)? {
        TwistKind::Doubled | TwistKind::Fixed => {
            let s = Laurent::monomial(r, n, Cyc::from_rat(r, atom.payload.clone()));
            GenAtom::xt(fs, coords, Payload::Plain(s))
        }
        TwistKind::Pair => {
            let coeff = &Cyc::from_rat(r, atom.payload.clone()) * &xi_a_pow(fs, coords, n)?;
            GenAtom::xt(fs, coords, Payload::Plain(Laurent::monomial(r, n, coeff)))
        }
        TwistKind::SummingPair => {
            let chi = chi_hat(folded_is_positive(fs, coords)?, n, &atom.payload);
            GenAtom::xt(fs, coords, Payload::Pair(chi))
        }
        TwistKind::Triple => {
            let s = Laurent::monomial(r, n, Cyc::from_rat(r, atom.payload.clone()));
            GenAtom::xt(fs, coords, Payload::Plain(s))
        }
    }
}

/// Image of a `w`-generator of the twisted affine presentation.
pub fn phi_w(fs: &FoldedSystem, atom: &KMAtom) -> Result<GenAtom> {
    if atom.kind != AtomKind::W {
        return Err(Error::InvalidPayload("phi_w expects a w atom"));
    }
    check_real(fs, &atom.root)?;
    let (coords, n) = (&atom.root.a[..], atom.root.n);
    let r = fs.r();
    match twist_kind(fs, coords)? {
        TwistKind::Doubled | TwistKind::Fixed | TwistKind::Triple => {
            let t = Laurent::monomial(r, n, Cyc::from_rat(r, atom.payload.clone()));
            GenAtom::wt(fs, coords, Payload::Plain(t))
        }
        TwistKind::Pair => {
            let coeff = &Cyc::from_rat(r, atom.payload.clone()) * &xi_a_pow(fs, coords, n)?;
            GenAtom::wt(fs, coords, Payload::Plain(Laurent::monomial(r, n, coeff)))
        }
        TwistKind::SummingPair => {
            let chi = chi_hat(folded_is_positive(fs, coords)?, n, &atom.payload);
            GenAtom::wt(fs, coords, Payload::Pair(chi))
        }
    }
}

/// Image of an `h`-generator of the twisted affine presentation; the image
/// does not depend on the loop degree of the input root.
pub fn phi_h(fs: &FoldedSystem, atom: &KMAtom) -> Result<GenAtom> {
    if atom.kind != AtomKind::H {
        return Err(Error::InvalidPayload("phi_h expects an h atom"));
    }
    check_real(fs, &atom.root)?;
    let (coords, n) = (&atom.root.a[..], atom.root.n);
    let r = fs.r();
    match twist_kind(fs, coords)? {
        TwistKind::SummingPair => {
            let positive = folded_is_positive(fs, coords)?;
            let zeta = chi_hat(positive, n, &atom.payload);
            let gamma = chi_hat(positive, n, &rat_int(-1));
            GenAtom::ht(fs, coords, Payload::DoublePair(zeta, gamma))
        }
        _ => {
            let t = Laurent::from_rat(r, atom.payload.clone());
            GenAtom::ht(fs, coords, Payload::Plain(t))
        }
    }
}

/// The Galois action on generators of the untwisted affine presentation.
pub fn gamma_on_km(case: &Case, which: Gamma, atom: &AmbientAtom) -> AmbientAtom {
    match which {
        Gamma::Sigma => {
            let root = case.sigma_root_id(atom.root);
            let payload = match atom.kind {
                AtomKind::H => atom.payload.clone(),
                _ => {
                    let k = Cyc::from_int(atom.payload.order(), case.chev().k(atom.root));
                    &(&atom.payload * &Cyc::xi_pow(atom.payload.order(), -atom.n)) * &k
                }
            };
            AmbientAtom { kind: atom.kind, root, n: atom.n, payload }
        }
        Gamma::Omega => {
            let root = case.omega_root_id(atom.root);
            let k = match atom.kind {
                AtomKind::H => 1,
                _ => case.chev().k_omega(atom.root),
            };
            let payload = &atom.payload.omega_bar() * &Cyc::from_int(atom.payload.order(), k);
            AmbientAtom { kind: atom.kind, root, n: atom.n, payload }
        }
    }
}

/// Expansion of a twisted-level `x̃` over the untwisted affine presentation.
fn ambient_xt(case: &Case, coords: &[i64], n: i64, nu: &Cyc) -> Result<Vec<AmbientAtom>> {
    let fs = case.fold();
    let rs = case.rs();
    let alpha = gen_base(case, coords)?;
    let r = fs.r();
    match twist_kind(fs, coords)? {
        TwistKind::Doubled | TwistKind::Fixed => Ok(vec![AmbientAtom::x(alpha, n, nu.clone())]),
        TwistKind::Pair => {
            let sig = case.sigma_root_id(alpha);
            Ok(vec![
                AmbientAtom::x(alpha, n, nu.clone()),
                AmbientAtom::x(sig, n, nu * &Cyc::xi_pow(r, -n)),
            ])
        }
        TwistKind::SummingPair => {
            let sig = case.sigma_root_id(alpha);
            let sum = rs.sum_id(alpha, sig).ok_or(Error::Internal("summing pair must sum to a root"))?;
            let n_const = case
                .chev()
                .n(sig, alpha)
                .ok_or(Error::Internal("structure constant missing for summing pair"))?;
            let third = &(&(nu * nu) * &Cyc::xi_pow(r, -n)) * &Cyc::from_rat(r, rat(n_const, 2));
            Ok(vec![
                AmbientAtom::x(alpha, n, nu.clone()),
                AmbientAtom::x(sig, n, nu * &Cyc::xi_pow(r, -n)),
                AmbientAtom::x(sum, 2 * n, third),
            ])
        }
        TwistKind::Triple => {
            let sig = case.sigma_root_id(alpha);
            let sig2 = case.sigma_root_id(sig);
            Ok(vec![
                AmbientAtom::x(alpha, n, nu.clone()),
                AmbientAtom::x(sig, n, nu * &Cyc::xi_pow(r, -n)),
                AmbientAtom::x(sig2, n, nu * &Cyc::xi_pow(r, -2 * n)),
            ])
        }
    }
}

/// Lift of a single untwisted `x`-generator: the type-dependent unit
/// prefactor on the payload, then the orbit expansion.
fn theta_x(case: &Case, root: &AffineRealRoot, nu: &Rat) -> Result<Vec<AmbientAtom>> {
    let fs = case.fold();
    let (coords, n) = (&root.a[..], root.n);
    let r = fs.r();
    let factor = match twist_kind(fs, coords)? {
        TwistKind::Doubled | TwistKind::Fixed | TwistKind::Triple => Cyc::one(r),
        TwistKind::Pair => xi_a_pow(fs, coords, n)?,
        TwistKind::SummingPair => {
            let eps: i64 = if folded_is_positive(fs, coords)? { 1 } else { 2 };
            &xi_a_pow(fs, coords, n)? * &Cyc::from_int(r, eps)
        }
    };
    ambient_xt(case, coords, n, &(&Cyc::from_rat(r, nu.clone()) * &factor))
}

/// Lift of a single untwisted `w`-generator, factor by factor through its
/// defining three-term word.
fn theta_w(case: &Case, root: &AffineRealRoot, tau: &Rat) -> Result<Vec<AmbientAtom>> {
    if *tau == rat_int(0) {
        return Err(Error::InvalidPayload("w payload must be a unit"));
    }
    let mid = -tau.recip();
    let mut out = theta_x(case, root, tau)?;
    out.extend(theta_x(case, &root.neg(), &mid)?);
    out.extend(theta_x(case, root, tau)?);
    Ok(out)
}

/// Lift of a twisted-presentation generator into the untwisted affine
/// presentation, expanded to `x`-kind atoms.
pub fn theta(case: &Case, atom: &KMAtom) -> Result<Vec<AmbientAtom>> {
    check_real(case.fold(), &atom.root)?;
    match atom.kind {
        AtomKind::X => theta_x(case, &atom.root, &atom.payload),
        AtomKind::W => theta_w(case, &atom.root, &atom.payload),
        AtomKind::H => {
            let mut out = theta_w(case, &atom.root, &atom.payload)?;
            out.extend(theta_w(case, &atom.root, &rat_int(-1))?);
            Ok(out)
        }
    }
}

/// Evaluation of an untwisted affine generator in the ambient loop group.
pub fn psi(fs: &FoldedSystem, atom: &AmbientAtom) -> Result<GenWord> {
    let r = fs.r();
    let mono = Laurent::monomial(r, atom.n, atom.payload.clone());
    match atom.kind {
        AtomKind::X => Ok(vec![GenAtom::x(atom.root, mono)]),
        AtomKind::W => Ok(vec![GenAtom::w(atom.root, mono)?]),
        AtomKind::H => Ok(vec![
            GenAtom::w(atom.root, mono)?,
            GenAtom::w(atom.root, Laurent::monomial(r, atom.n, -&Cyc::one(r)))?,
        ]),
    }
}

/// Integer power of a nonzero rational.
fn rat_pow(q: &Rat, k: i64) -> Rat {
    let base = if k < 0 { q.recip() } else { q.clone() };
    let mut acc = rat_int(1);
    for _ in 0..k.unsigned_abs() {
        acc = &acc * &base;
    }
    acc
}

/// The standard central-kernel word: `h`-generators over the affine simple
/// roots with the exponent pattern that lands in the kernel of the loop
/// evaluation map.
pub fn zk_element(fs: &FoldedSystem, tau: &Rat) -> Result<Vec<KMAtom>> {
    if *tau == rat_int(0) {
        return Err(Error::InvalidPayload("torus parameter must be nonzero"));
    }
    let hr = fs.highest_a0()?;
    let ell = fs.ell();
    let a0 = neg_coords(&hr.coeffs);
    let mut out = Vec::with_capacity(ell + 1);
    if fs.has_doubled_roots() {
        out.push(KMAtom::h(AffineRealRoot::new(a0, 1), rat_pow(tau, 2))?);
        for p in 0..ell {
            let mut coords = vec![0i64; ell];
            coords[p] = 1;
            let exp = if p + 1 == ell { 1 } else { 2 };
            out.push(KMAtom::h(AffineRealRoot::new(coords, 0), rat_pow(tau, exp))?);
        }
    } else {
        out.push(KMAtom::h(AffineRealRoot::new(a0, 1), tau.clone())?);
        for p in 0..ell {
            let mut coords = vec![0i64; ell];
            coords[p] = 1;
            let rtype = fs.entry(&coords)?.rtype;
            let c_p = hr.coeffs[p];
            let exp = if rtype == RootType::Fixed { i64::from(fs.r()) * c_p } else { c_p };
            out.push(KMAtom::h(AffineRealRoot::new(coords, 0), rat_pow(tau, exp))?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::Kind;
    use alloc::vec;

    fn case(kind: Kind, rank: usize, r: u8) -> Case {
        Case::new(kind, rank, r).unwrap()
    }

    fn mono(r: u8, n: i64, num: i64, den: i64) -> Laurent {
        Laurent::monomial(r, n, Cyc::from_rat(r, rat(num, den)))
    }

    fn sample_chi() -> AElt {
        AElt::new(mono(2, 1, 1, 1), mono(2, 2, -1, 2)).unwrap()
    }

    fn sample_phi() -> AElt {
        let first = &Laurent::one(2) + &mono(2, 1, 1, 1);
        let second = &(&mono(2, 0, 1, 2) + &mono(2, 2, -1, 2)) + &mono(2, 1, 3, 1);
        AElt::new(first, second).unwrap()
    }

    #[test]
    fn pair_validation_enforces_the_defining_identity() {
        assert!(AElt::new(mono(2, 1, 1, 1), mono(2, 2, -1, 2)).is_ok());
        sample_phi();
        let bad = AElt::new(mono(2, 1, 1, 1), mono(2, 2, 1, 2));
        assert!(bad.is_err(), "sigma-trace of the second component must match");
        let wrong_order = AElt::new(Laurent::zero(3), Laurent::zero(3));
        assert!(wrong_order.is_err(), "pair components must live over square roots of z");
    }

    #[test]
    fn pair_group_laws_hold_on_samples() {
        let chi = sample_chi();
        let phi = sample_phi();
        let psi = chi_hat(true, 3, &rat_int(2));
        let assoc_l = a_plus(&a_plus(&chi, &phi), &psi);
        let assoc_r = a_plus(&chi, &a_plus(&phi, &psi));
        assert_eq!(assoc_l, assoc_r, "payload addition must be associative");
        assert_eq!(a_plus(&chi, &AElt::zero()), chi);
        assert_eq!(a_plus(&AElt::zero(), &chi), chi);
        assert_eq!(a_plus(&chi, &a_neg(&chi)), AElt::zero());
        assert_eq!(a_plus(&a_neg(&phi), &phi), AElt::zero());
        assert!(AElt::new(assoc_l.first().clone(), assoc_l.second().clone()).is_ok(),
            "products must satisfy the defining identity");
    }

    #[test]
    fn scalar_action_is_multiplicative() {
        let chi = sample_phi();
        let s = mono(2, -1, 2, 1);
        let t = &mono(2, 2, 1, 3) + &mono(2, 0, 1, 1);
        assert_eq!(a_act(&s, &a_act(&t, &chi)), a_act(&(&s * &t), &chi));
        assert_eq!(a_act(&Laurent::one(2), &chi), chi);

        let hit = a_act(&mono(2, 1, 3, 1), &AElt::one_half());
        assert_eq!(hit.first(), &mono(2, 1, 3, 1));
        assert_eq!(hit.second(), &mono(2, 2, -9, 2), "3z^(1/2) squares to -9z under the twisted norm");
        let hit = a_act(&mono(2, -2, 2, 1), &AElt::one_half());
        assert_eq!(hit.first(), &mono(2, -2, 2, 1));
        assert_eq!(hit.second(), &mono(2, -4, 2, 1));
    }

    #[test]
    fn canonical_pairs_coordinate_is_the_parameter_square() {
        for positive in [true, false] {
            for (n, nu) in [(1i64, rat_int(2)), (-3, rat_int(5)), (0, rat(7, 3))] {
                let zeta = chi_hat(positive, n, &nu);
                let gamma = chi_hat(positive, n, &rat_int(-1));
                let c = c_of(&zeta, &gamma).unwrap();
                assert_eq!(c, Laurent::from_rat(2, &nu * &nu), "coordinate must be the square");
            }
        }
        let fixed = AElt::one_half();
        assert_eq!(c_of(&fixed, &fixed).unwrap(), Laurent::one(2));
        assert!(c_of(&AElt::zero(), &AElt::zero()).is_err(), "zero second component has no coordinate");
    }

    #[test]
    fn canonical_pairs_twist_by_sign_under_sigma() {
        for (n, nu) in [(1i64, rat_int(3)), (2, rat_int(3)), (-1, rat(1, 2))] {
            let c = chi_hat(true, n, &nu);
            let twisted = AElt::new(c.first().sigma_prime(), c.second().sigma_prime()).unwrap();
            let sign = if n % 2 == 0 { nu.clone() } else { -&nu };
            assert_eq!(twisted, chi_hat(true, n, &sign));
        }
    }

    #[test]
    fn twisted_payload_validation_matches_root_types() {
        let a3 = case(Kind::A, 3, 2);
        let f3 = a3.fold();
        assert!(GenAtom::xt(f3, &[1, 0], Payload::Plain(mono(2, 1, 1, 1))).is_ok());
        assert!(GenAtom::wt(f3, &[1, 0], Payload::Plain(Laurent::zero(2))).is_err());
        assert!(GenAtom::xt(f3, &[1, 0], Payload::Pair(AElt::zero())).is_err());
        assert!(GenAtom::xt(f3, &[0, 1], Payload::Plain(mono(2, 2, 1, 1))).is_ok());
        assert!(GenAtom::xt(f3, &[0, 1], Payload::Plain(mono(2, 1, 1, 1))).is_err(),
            "fixed roots take invariant coefficients only");
        assert!(GenAtom::xt(f3, &[1, 0], Payload::Plain(mono(3, 1, 1, 1))).is_err(),
            "ground order must match the case");

        let a4 = case(Kind::A, 4, 2);
        let f4 = a4.fold();
        assert!(GenAtom::xt(f4, &[0, 2], Payload::Plain(mono(2, 1, 1, 1))).is_ok());
        assert!(GenAtom::xt(f4, &[0, 1], Payload::Plain(mono(2, 1, 1, 1))).is_err(),
            "summing pairs take pair payloads");
        assert!(GenAtom::xt(f4, &[0, 1], Payload::Pair(sample_chi())).is_ok());
        assert!(GenAtom::wt(f4, &[0, 1], Payload::Pair(AElt::zero())).is_err());
        assert!(GenAtom::wt(f4, &[0, 1], Payload::Pair(sample_chi())).is_ok());
        assert!(GenAtom::ht(f4, &[0, 1], Payload::Pair(sample_chi())).is_err(),
            "torus atoms over summing pairs take two pairs");
        assert!(GenAtom::ht(f4, &[0, 1], Payload::DoublePair(sample_chi(), sample_chi())).is_ok());

        let d4 = case(Kind::D, 4, 3);
        let fd = d4.fold();
        assert!(GenAtom::xt(fd, &[0, 1], Payload::Plain(mono(3, 1, 1, 1))).is_ok());
        let with_xi = Laurent::monomial(3, 1, Cyc::xi(3));
        assert!(GenAtom::xt(fd, &[0, 1], Payload::Plain(with_xi)).is_err(),
            "triple-orbit payloads have rational coefficients");
        assert!(GenAtom::xt(fd, &[1, 0], Payload::Plain(mono(3, 3, 1, 1))).is_ok());
        assert!(GenAtom::xt(fd, &[1, 0], Payload::Plain(mono(3, 1, 1, 1))).is_err());
    }

    #[test]
    fn x_expansion_follows_the_orbit() {
        let a3 = case(Kind::A, 3, 2);
        let atom = GenAtom::xt(a3.fold(), &[1, 0], Payload::Plain(mono(2, 1, 1, 1))).unwrap();
        let word = expand_twisted(&a3, &atom).unwrap();
        let alpha = a3.fold().correspondent(&[1, 0]).unwrap();
        let expect = vec![
            GenAtom::x(alpha, mono(2, 1, 1, 1)),
            GenAtom::x(a3.sigma_root_id(alpha), mono(2, 1, -1, 1)),
        ];
        assert_eq!(word, expect, "pair atoms expand into the two-element orbit");

        let fixed = GenAtom::xt(a3.fold(), &[0, 1], Payload::Plain(mono(2, 2, 1, 1))).unwrap();
        assert_eq!(expand_twisted(&a3, &fixed).unwrap().len(), 1);

        let a4 = case(Kind::A, 4, 2);
        let doubled = GenAtom::xt(a4.fold(), &[0, 2], Payload::Plain(mono(2, 1, 1, 1))).unwrap();
        let word = expand_twisted(&a4, &doubled).unwrap();
        assert_eq!(word.len(), 1);
        let sum_root = a4.fold().correspondent(&[0, 2]).unwrap();
        assert_eq!(a4.rs().root(sum_root), &[0, 1, 1, 0], "doubled atoms sit on the summed root");

        let chi = sample_chi();
        let atom = GenAtom::xt(a4.fold(), &[0, 1], Payload::Pair(chi.clone())).unwrap();
        let word = expand_twisted(&a4, &atom).unwrap();
        assert_eq!(word.len(), 3);
        let alpha = a4.fold().correspondent(&[0, 1]).unwrap();
        let sig = a4.sigma_root_id(alpha);
        let n_const = a4.chev().n(sig, alpha).unwrap();
        match &word[2] {
            GenAtom::X { root, s } => {
                assert_eq!(*root, a4.rs().sum_id(alpha, sig).unwrap());
                assert_eq!(s, &chi.second().scale(&Cyc::from_int(2, n_const)));
            }
            other => panic!("expected an x atom, got {other:?}"),
        }

        let d4 = case(Kind::D, 4, 3);
        let atom = GenAtom::xt(d4.fold(), &[0, 1], Payload::Plain(mono(3, 1, 2, 1))).unwrap();
        let word = expand_twisted(&d4, &atom).unwrap();
        assert_eq!(word.len(), 3, "triple atoms expand into the three-element orbit");
        let payloads: Vec<Laurent> = word
            .iter()
            .map(|a| match a {
                GenAtom::X { s, .. } => s.clone(),
                other => panic!("expected x atoms, got {other:?}"),
            })
            .collect();
        assert_eq!(payloads[1], payloads[0].sigma_prime());
        assert_eq!(payloads[2], payloads[1].sigma_prime());
    }

    #[test]
    fn w_and_h_expansions_have_rank_one_blocks() {
        let a3 = case(Kind::A, 3, 2);
        let a4 = case(Kind::A, 4, 2);
        let d4 = case(Kind::D, 4, 3);

        let wt_pair = GenAtom::wt(a3.fold(), &[1, 0], Payload::Plain(mono(2, 1, 1, 1))).unwrap();
        assert_eq!(expand_twisted(&a3, &wt_pair).unwrap().len(), 6);
        let ht_pair = GenAtom::ht(a3.fold(), &[1, 0], Payload::Plain(mono(2, 1, 1, 1))).unwrap();
        assert_eq!(expand_twisted(&a3, &ht_pair).unwrap().len(), 12);

        let wt_fixed = GenAtom::wt(a3.fold(), &[0, 1], Payload::Plain(mono(2, 2, 1, 1))).unwrap();
        assert_eq!(expand_twisted(&a3, &wt_fixed).unwrap().len(), 3);
        let ht_fixed = GenAtom::ht(a3.fold(), &[0, 1], Payload::Plain(mono(2, 2, 1, 1))).unwrap();
        assert_eq!(expand_twisted(&a3, &ht_fixed).unwrap().len(), 6);

        let zeta = chi_hat(true, 1, &rat_int(2));
        let wt_sp = GenAtom::wt(a4.fold(), &[0, 1], Payload::Pair(zeta.clone())).unwrap();
        assert_eq!(expand_twisted(&a4, &wt_sp).unwrap().len(), 9);
        let ht_sp = GenAtom::ht(a4.fold(), &[0, 1], Payload::DoublePair(zeta.clone(), zeta)).unwrap();
        assert_eq!(expand_twisted(&a4, &ht_sp).unwrap().len(), 18);

        let wt_triple = GenAtom::wt(d4.fold(), &[0, 1], Payload::Plain(mono(3, 1, 1, 1))).unwrap();
        let word = expand_twisted(&d4, &wt_triple).unwrap();
        assert_eq!(word.len(), 9);
        let neg_orbit: Vec<usize> = word[3..6]
            .iter()
            .map(|a| match a {
                GenAtom::X { root, .. } => *root,
                other => panic!("expected x atoms, got {other:?}"),
            })
            .collect();
        for id in neg_orbit {
            assert!(!d4.rs().is_positive(id), "middle block sits on negative roots");
        }

        let wt_doubled = GenAtom::wt(a4.fold(), &[0, 2], Payload::Plain(mono(2, 1, 1, 1))).unwrap();
        assert_eq!(expand_twisted(&a4, &wt_doubled).unwrap().len(), 3);
    }

    #[test]
    fn product_forms_compress_torus_atoms() {
        let a3 = case(Kind::A, 3, 2);
        let d4 = case(Kind::D, 4, 3);
        let a4 = case(Kind::A, 4, 2);

        let wt = GenAtom::wt(a3.fold(), &[1, 0], Payload::Plain(mono(2, 1, 1, 1))).unwrap();
        let word = product_form(&a3, &wt).unwrap();
        assert_eq!(word.len(), 2);
        assert!(matches!(word[0], GenAtom::W { .. }));

        let ht = GenAtom::ht(a3.fold(), &[1, 0], Payload::Plain(mono(2, 1, 1, 1))).unwrap();
        let word = product_form(&a3, &ht).unwrap();
        assert_eq!(word.len(), 2);
        assert!(matches!(word[0], GenAtom::H { .. }));

        let ht = GenAtom::ht(d4.fold(), &[0, 1], Payload::Plain(mono(3, 1, 1, 1))).unwrap();
        assert_eq!(product_form(&d4, &ht).unwrap().len(), 3);

        let zeta = chi_hat(true, 1, &rat_int(3));
        let gamma = chi_hat(true, 1, &rat_int(-1));
        let ht = GenAtom::ht(a4.fold(), &[0, 1], Payload::DoublePair(zeta.clone(), gamma.clone())).unwrap();
        let word = product_form(&a4, &ht).unwrap();
        let c = c_of(&zeta, &gamma).unwrap();
        let alpha = a4.fold().correspondent(&[0, 1]).unwrap();
        let expect = vec![
            GenAtom::h(alpha, c.sigma_prime()).unwrap(),
            GenAtom::h(a4.sigma_root_id(alpha), c).unwrap(),
        ];
        assert_eq!(word, expect, "the coordinate and its twist split over the orbit");

        let wt = GenAtom::wt(a4.fold(), &[0, 1], Payload::Pair(zeta)).unwrap();
        assert!(product_form(&a4, &wt).is_err(), "no short form over summing pairs");
        assert!(product_form(&a4, &GenAtom::x(0, Laurent::one(2))).is_err());
    }

    #[test]
    fn torus_coordinates_localize_on_the_orbit() {
        let a4 = case(Kind::A, 4, 2);
        let zeta = AElt::new(Laurent::zero(2), mono(2, 1, 1, 1)).unwrap();
        let ht = GenAtom::ht(a4.fold(), &[0, 1], Payload::DoublePair(zeta.clone(), zeta)).unwrap();
        let t = torus_of(&a4, &[ht.clone()]).unwrap();
        let minus_one = Laurent::from_int(2, -1);
        assert_eq!(t.coords(), &[Laurent::one(2), minus_one.clone(), minus_one, Laurent::one(2)]);
        assert!(!t.is_identity());
        assert!(!kernel_test(&a4, &[ht]).unwrap());

        let trivial = GenAtom::ht(
            a4.fold(),
            &[0, 1],
            Payload::DoublePair(AElt::one_half(), AElt::one_half()),
        )
        .unwrap();
        assert!(kernel_test(&a4, &[trivial]).unwrap(), "coordinate one lands in the kernel");

        let mixed = GenAtom::x(0, Laurent::one(2));
        assert!(torus_of(&a4, &[mixed]).is_err(), "only torus atoms have coordinates");
    }

    fn zk_atoms(cs: &Case, tau: &Rat) -> Vec<GenAtom> {
        zk_element(cs.fold(), tau)
            .unwrap()
            .iter()
            .map(|a| phi_h(cs.fold(), a).unwrap())
            .collect()
    }

    #[test]
    fn central_kernel_words_have_the_dual_label_exponents() {
        let five = rat_int(5);
        let cases = [
            (Kind::A, 2, 2, vec![2, 1]),
            (Kind::A, 4, 2, vec![2, 2, 1]),
            (Kind::A, 3, 2, vec![1, 1, 2]),
            (Kind::D, 4, 3, vec![1, 3, 2]),
            (Kind::E, 6, 2, vec![1, 2, 3, 4, 2]),
        ];
        for (kind, rank, r, exps) in cases {
            let cs = case(kind, rank, r);
            let word = zk_element(cs.fold(), &five).unwrap();
            let payloads: Vec<Rat> = word.iter().map(|a| a.payload.clone()).collect();
            let expect: Vec<Rat> = exps.iter().map(|e| rat_pow(&five, *e)).collect();
            assert_eq!(payloads, expect, "({kind:?}{rank},{r}) exponent pattern");
            assert!(kernel_test(&cs, &zk_atoms(&cs, &five)).unwrap(), "({kind:?}{rank},{r}) kernel word");
        }
    }

    #[test]
    fn perturbed_kernel_words_fail() {
        let tau = rat_int(2);

        let d4 = case(Kind::D, 4, 3);
        let mut word = zk_element(d4.fold(), &tau).unwrap();
        word[1] = KMAtom::h(word[1].root.clone(), tau.clone()).unwrap();
        let atoms: Vec<GenAtom> = word.iter().map(|a| phi_h(d4.fold(), a).unwrap()).collect();
        assert!(!kernel_test(&d4, &atoms).unwrap(), "wrong exponent on the fixed node");

        let a4 = case(Kind::A, 4, 2);
        let mut word = zk_element(a4.fold(), &tau).unwrap();
        let last = word.len() - 1;
        word[last] = KMAtom::h(word[last].root.clone(), &tau * &tau).unwrap();
        let atoms: Vec<GenAtom> = word.iter().map(|a| phi_h(a4.fold(), a).unwrap()).collect();
        assert!(
            !kernel_test(&a4, &atoms).unwrap(),
            "a uniform square exponent misses the kernel over doubled systems"
        );

        let a3 = case(Kind::A, 3, 2);
        let mut word = zk_element(a3.fold(), &tau).unwrap();
        word[0] = KMAtom::h(word[0].root.clone(), &tau * &tau).unwrap();
        let atoms: Vec<GenAtom> = word.iter().map(|a| phi_h(a3.fold(), a).unwrap()).collect();
        assert!(!kernel_test(&a3, &atoms).unwrap());
    }

    #[test]
    fn presentation_maps_respect_the_real_root_condition() {
        let a3 = case(Kind::A, 3, 2);
        let err = phi_x(a3.fold(), &KMAtom::x(AffineRealRoot::new(vec![0, 1], 1), rat_int(1)));
        assert!(matches!(err, Err(Error::NotInOmega)), "fixed roots need degrees divisible by the order");
        assert!(phi_x(a3.fold(), &KMAtom::x(AffineRealRoot::new(vec![0, 1], 2), rat_int(1))).is_ok());

        let a4 = case(Kind::A, 4, 2);
        let err = phi_x(a4.fold(), &KMAtom::x(AffineRealRoot::new(vec![0, 2], 2), rat_int(1)));
        assert!(matches!(err, Err(Error::NotInOmega)), "doubled roots need odd degrees");
        assert!(phi_x(a4.fold(), &KMAtom::x(AffineRealRoot::new(vec![0, 2], 1), rat_int(1))).is_ok());

        let d4 = case(Kind::D, 4, 3);
        let err = phi_w(d4.fold(), &KMAtom::w(AffineRealRoot::new(vec![1, 0], 1), rat_int(1)).unwrap());
        assert!(matches!(err, Err(Error::NotInOmega)));
        assert!(phi_w(d4.fold(), &KMAtom::w(AffineRealRoot::new(vec![1, 0], 3), rat_int(1)).unwrap()).is_ok());
    }

    #[test]
    fn presentation_maps_hit_frozen_payloads() {
        let a3 = case(Kind::A, 3, 2);
        let atom = phi_x(a3.fold(), &KMAtom::x(AffineRealRoot::new(vec![1, 0], 1), rat_int(3))).unwrap();
        assert_eq!(
            atom,
            GenAtom::xt(a3.fold(), &[1, 0], Payload::Plain(mono(2, 1, 3, 1))).unwrap()
        );
        let atom = phi_x(a3.fold(), &KMAtom::x(AffineRealRoot::new(vec![-1, 0], 1), rat_int(1))).unwrap();
        assert_eq!(
            atom,
            GenAtom::xt(a3.fold(), &[-1, 0], Payload::Plain(mono(2, 1, -1, 1))).unwrap(),
            "negative pair roots pick up the sign twist"
        );

        let a4 = case(Kind::A, 4, 2);
        let atom = phi_x(a4.fold(), &KMAtom::x(AffineRealRoot::new(vec![0, 1], 1), rat_int(1))).unwrap();
        let expect = GenAtom::xt(a4.fold(), &[0, 1], Payload::Pair(sample_chi())).unwrap();
        assert_eq!(atom, expect, "the canonical pair at degree one is (z^(1/2), -z/2)");

        let d4 = case(Kind::D, 4, 3);
        let atom = phi_w(d4.fold(), &KMAtom::w(AffineRealRoot::new(vec![0, 1], 1), rat_int(2)).unwrap()).unwrap();
        assert_eq!(
            atom,
            GenAtom::wt(d4.fold(), &[0, 1], Payload::Plain(mono(3, 1, 2, 1))).unwrap()
        );
    }

    #[test]
    fn h_images_are_degree_independent() {
        let a3 = case(Kind::A, 3, 2);
        let tau = rat_int(3);
        let h0 = phi_h(a3.fold(), &KMAtom::h(AffineRealRoot::new(vec![1, 0], 0), tau.clone()).unwrap()).unwrap();
        let h2 = phi_h(a3.fold(), &KMAtom::h(AffineRealRoot::new(vec![1, 0], 2), tau.clone()).unwrap()).unwrap();
        assert_eq!(h0, h2);

        let a4 = case(Kind::A, 4, 2);
        let h1 = phi_h(a4.fold(), &KMAtom::h(AffineRealRoot::new(vec![0, 1], 1), tau.clone()).unwrap()).unwrap();
        let h3 = phi_h(a4.fold(), &KMAtom::h(AffineRealRoot::new(vec![0, 1], 3), tau).unwrap()).unwrap();
        assert_eq!(
            torus_of(&a4, &[h1]).unwrap(),
            torus_of(&a4, &[h3]).unwrap(),
            "pair payloads differ by degree but the torus element does not"
        );
    }

    #[test]
    fn galois_action_has_the_expected_order() {
        for (kind, rank, r) in [(Kind::A, 3, 2), (Kind::A, 4, 2), (Kind::D, 4, 3)] {
            let cs = case(kind, rank, r);
            let payload = Cyc::new(r, rat(2, 1), rat(1, 3));
            for id in cs.rs().all_ids() {
                for n in [-2i64, 0, 3] {
                    for atom in [
                        AmbientAtom::x(id, n, payload.clone()),
                        AmbientAtom::w(id, n, payload.clone()).unwrap(),
                        AmbientAtom::h(id, n, payload.clone()).unwrap(),
                    ] {
                        let mut moved = atom.clone();
                        for _ in 0..r {
                            moved = gamma_on_km(&cs, Gamma::Sigma, &moved);
                        }
                        assert_eq!(moved, atom, "({kind:?}{rank},{r}) sigma orbit closes");
                        let twice = gamma_on_km(&cs, Gamma::Omega, &gamma_on_km(&cs, Gamma::Omega, &atom));
                        assert_eq!(twice, atom, "({kind:?}{rank},{r}) omega is an involution");
                    }
                }
            }
        }
    }

    #[test]
    fn galois_action_twists_payloads_but_not_torus_atoms() {
        let a3 = case(Kind::A, 3, 2);
        let id = a3.rs().root_id(&[1, 0, 0]).unwrap();
        let atom = AmbientAtom::x(id, 1, Cyc::from_int(2, 5));
        let moved = gamma_on_km(&a3, Gamma::Sigma, &atom);
        assert_eq!(moved.root, a3.sigma_root_id(id));
        assert_eq!(moved.n, 1);
        assert_eq!(&moved.payload * &moved.payload, Cyc::from_int(2, 25),
            "the sign twist squares away");

        let h = AmbientAtom::h(id, 2, Cyc::from_int(2, 7)).unwrap();
        assert_eq!(gamma_on_km(&a3, Gamma::Sigma, &h).payload, h.payload);

        let untwisted = case(Kind::A, 2, 1);
        let atom = AmbientAtom::x(0, 4, Cyc::from_int(1, 2));
        assert_eq!(gamma_on_km(&untwisted, Gamma::Sigma, &atom), atom);
        assert_eq!(gamma_on_km(&untwisted, Gamma::Omega, &atom), atom);
    }

    fn flatten_psi(cs: &Case, atoms: &[AmbientAtom]) -> GenWord {
        let mut out = GenWord::new();
        for a in atoms {
            out.extend(psi(cs.fold(), a).unwrap());
        }
        out
    }

    #[test]
    fn descent_diagram_commutes_on_generator_words() {
        let a3 = case(Kind::A, 3, 2);
        let a4 = case(Kind::A, 4, 2);
        let d4 = case(Kind::D, 4, 3);

        let mut probes: Vec<(&Case, KMAtom)> = Vec::new();
        for n in [-1i64, 1, 2] {
            probes.push((&a3, KMAtom::x(AffineRealRoot::new(vec![1, 0], n), rat(3, 2))));
            probes.push((&a3, KMAtom::w(AffineRealRoot::new(vec![1, 0], n), rat_int(2)).unwrap()));
            probes.push((&a3, KMAtom::x(AffineRealRoot::new(vec![-1, -1], n), rat_int(1))));
            probes.push((&a4, KMAtom::x(AffineRealRoot::new(vec![0, 1], n), rat(1, 2))));
            probes.push((&a4, KMAtom::w(AffineRealRoot::new(vec![0, 1], n), rat_int(3)).unwrap()));
            probes.push((&a4, KMAtom::h(AffineRealRoot::new(vec![0, 1], n), rat_int(2)).unwrap()));
            probes.push((&a4, KMAtom::w(AffineRealRoot::new(vec![0, -1], n), rat_int(1)).unwrap()));
            probes.push((&d4, KMAtom::x(AffineRealRoot::new(vec![0, 1], n), rat_int(2))));
            probes.push((&d4, KMAtom::w(AffineRealRoot::new(vec![0, 1], n), rat(2, 3)).unwrap()));
            probes.push((&d4, KMAtom::w(AffineRealRoot::new(vec![0, -1], n), rat_int(2)).unwrap()));
        }
        for n in [-1i64, 1] {
            probes.push((&a4, KMAtom::x(AffineRealRoot::new(vec![0, 2], n), rat_int(2))));
            probes.push((&a4, KMAtom::w(AffineRealRoot::new(vec![2, 2], n), rat_int(2)).unwrap()));
        }
        for n in [0i64, 2, -2] {
            probes.push((&a3, KMAtom::x(AffineRealRoot::new(vec![0, 1], n), rat_int(2))));
            probes.push((&a3, KMAtom::w(AffineRealRoot::new(vec![0, 1], n), rat_int(3)).unwrap()));
        }
        for n in [0i64, 3, -3] {
            probes.push((&d4, KMAtom::x(AffineRealRoot::new(vec![1, 0], n), rat_int(1))));
            probes.push((&d4, KMAtom::w(AffineRealRoot::new(vec![1, 0], n), rat_int(2)).unwrap()));
        }
        probes.push((&a3, KMAtom::h(AffineRealRoot::new(vec![1, 0], 0), rat_int(2)).unwrap()));
        probes.push((&d4, KMAtom::h(AffineRealRoot::new(vec![0, 1], 0), rat_int(3)).unwrap()));

        for (cs, atom) in probes {
            let lifted = theta(cs, &atom).unwrap();
            let via_hat = flatten_psi(cs, &lifted);
            let direct = match atom.kind {
                AtomKind::X => expand_twisted(cs, &phi_x(cs.fold(), &atom).unwrap()).unwrap(),
                AtomKind::W => expand_twisted(cs, &phi_w(cs.fold(), &atom).unwrap()).unwrap(),
                AtomKind::H => expand_twisted(cs, &phi_h(cs.fold(), &atom).unwrap()).unwrap(),
            };
            assert_eq!(via_hat, direct, "diagram mismatch at {atom:?}");
        }
    }

    #[test]
    fn lifted_words_are_fixed_by_the_galois_action() {
        let a4 = case(Kind::A, 4, 2);
        let d4 = case(Kind::D, 4, 3);
        for (cs, atom) in [
            (&a4, KMAtom::x(AffineRealRoot::new(vec![0, 2], 1), rat_int(1))),
            (&a4, KMAtom::x(AffineRealRoot::new(vec![1, 0], 2), rat(1, 2))),
            (&d4, KMAtom::x(AffineRealRoot::new(vec![0, 1], 2), rat_int(3))),
            (&d4, KMAtom::x(AffineRealRoot::new(vec![1, 0], 3), rat_int(1))),
        ] {
            let lifted = theta(cs, &atom).unwrap();
            let moved: Vec<AmbientAtom> =
                lifted.iter().map(|a| gamma_on_km(cs, Gamma::Sigma, a)).collect();
            let mut sorted_l: Vec<_> = lifted.iter().map(|a| (a.root, a.n, a.payload.clone())).collect();
            let mut sorted_m: Vec<_> = moved.iter().map(|a| (a.root, a.n, a.payload.clone())).collect();
            sorted_l.sort_by_key(|t| (t.0, t.1));
            sorted_m.sort_by_key(|t| (t.0, t.1));
            assert_eq!(sorted_l, sorted_m, "sigma permutes the lifted factors at {atom:?}");
        }
    }
}
