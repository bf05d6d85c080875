//! Folding a simply-laced root system along a diagram automorphism.
//!
//! The projection π(λ) = (1/r)·Σ_j σ^j(λ) sends the root lattice onto the
//! fixed subspace, whose simple basis {a_1..a_ℓ} is indexed by node orbits.
//! Every image π(α) is an integer vector in that basis; the twisted system
//! keeps all of π(Δ) except, in the even-rank A case, the elements whose
//! half also lies in π(Δ).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::roots::{colex_lt, height, DiagramAut, Kind, RootSystem, RootVec};
use crate::scalars::{rat, Rat};
use crate::{Error, Result};

/// Shape of a σ-orbit of roots, which selects the generator formulas used
/// throughout the twisted constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RootType {
    /// σ(α) = α; covers every root when the automorphism is trivial.
    Fixed,
    /// Order-2 orbit {α, σα} whose members do not sum to a root.
    Pair,
    /// Order-2 orbit {α, σα} with α + σα a root (even-rank A case only).
    SummingPair,
    /// Order-3 orbit (triality).
    Triple,
}

/// Squared-length partition of the folded system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LengthClass {
    Short,
    Long,
    /// Doubled images 2a in the even-rank A case.
    ExtraLong,
}

/// Dynkin label of the fixed-subspace root system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoldedLabel {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl core::fmt::Display for FoldedLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FoldedLabel::A(n) => write!(f, "A{}", n),
            FoldedLabel::B(n) => write!(f, "B{}", n),
            FoldedLabel::C(n) => write!(f, "C{}", n),
            FoldedLabel::D(n) => write!(f, "D{}", n),
            FoldedLabel::E(n) => write!(f, "E{}", n),
            FoldedLabel::F4 => write!(f, "F4"),
            FoldedLabel::G2 => write!(f, "G2"),
        }
    }
}

/// One element of π(Δ), expressed in the folded simple basis.
#[derive(Debug, Clone)]
pub struct FoldedEntry {
    /// Coordinates over {a_1..a_ℓ}.
    pub coords: Vec<i64>,
    pub rtype: RootType,
    pub length: LengthClass,
    /// Whether the element survives into the twisted system Δ^σ.
    pub in_twisted: bool,
    /// Ambient root ids projecting onto this element, ascending.
    pub preimages: Vec<usize>,
    /// Ambient root id of the distinguished orbit member this element
    /// corresponds to.
    pub correspondent: usize,
}

/// Distinguished lowest folded root of the twisted affinization, returned
/// exactly as tabulated case by case.
#[derive(Debug, Clone)]
pub struct HighestRootData {
    /// Coefficients c_p with −a₀ = Σ c_p a_p.
    pub coeffs: Vec<i64>,
    /// The tabulated ambient root attached to −a₀.
    pub alpha: RootVec,
    pub rtype: RootType,
}

/// A root system together with a diagram automorphism and the full folding
/// data: orbits, projections, type tags, and the twisted subsystem.
#[derive(Debug, Clone)]
pub struct FoldedSystem {
    rs: RootSystem,
    aut: DiagramAut,
    label: FoldedLabel,
    /// Node orbits in folded-label order; entries ascending within an orbit.
    orbits: Vec<Vec<usize>>,
    /// Folded index p of each ambient node.
    orbit_of_node: Vec<usize>,
    /// Gram matrix (a_p, a_q) of the folded simple basis.
    gram: Vec<Vec<Rat>>,
    /// π(Δ): positive elements ordered by (height, lex), then their
    /// negatives in the mirrored order.
    entries: Vec<FoldedEntry>,
    by_coords: BTreeMap<Vec<i64>, usize>,
    /// Entry index of π(α) for each ambient root id.
    entry_of_root: Vec<usize>,
    n_pos: usize,
}

/// Computes the folding of `rs` along `aut`.
pub fn fold(rs: RootSystem, aut: DiagramAut) -> Result<FoldedSystem> {
    FoldedSystem::new(rs, aut)
}

impl FoldedSystem {
    pub fn new(rs: RootSystem, aut: DiagramAut) -> Result<Self> {
        if aut.rank() != rs.rank() {
            return Err(Error::Unsupported("automorphism rank differs from root system"));
        }
        let r = aut.order();
        let orbits = node_orbits(&rs, &aut);
        let mut orbit_of_node = alloc::vec![0usize; rs.rank()];
        for (p, orbit) in orbits.iter().enumerate() {
            for &i in orbit {
                orbit_of_node[i] = p;
            }
        }

        // Group ambient roots by folded coordinates (orbit sums).
        let mut groups: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for id in rs.all_ids() {
            let coords = project(rs.root(id), &orbit_of_node, orbits.len());
            groups.entry(coords).or_default().push(id);
        }

        let doubled_case = matches!(rs.kind(), Kind::A) && rs.rank() % 2 == 0 && r == 2;
        let mut positives: Vec<FoldedEntry> = Vec::new();
        for (coords, preimages) in &groups {
            if height(coords) <= 0 {
                continue;
            }
            let rtype = classify(&rs, &aut, preimages[0]);
            let in_twisted = if doubled_case {
                let half: Option<Vec<i64>> =
                    coords.iter().map(|&c| (c % 2 == 0).then_some(c / 2)).collect();
                match half {
                    Some(h) => !groups.contains_key(&h),
                    None => true,
                }
            } else {
                true
            };
            let length = length_class(rtype, doubled_case);
            let correspondent = pick_correspondent(&rs, &aut, rtype, preimages)?;
            positives.push(FoldedEntry {
                coords: coords.clone(),
                rtype,
                length,
                in_twisted,
                preimages: preimages.clone(),
                correspondent,
            });
        }
        positives.sort_by(|x, y| {
            (height(&x.coords), &x.coords).cmp(&(height(&y.coords), &y.coords))
        });
        let n_pos = positives.len();
        let mut entries = positives;
        for i in 0..n_pos {
            let pos = entries[i].clone();
            let coords: Vec<i64> = pos.coords.iter().map(|c| -c).collect();
            let preimages: Vec<usize> = {
                let mut v: Vec<usize> = pos.preimages.iter().map(|&id| rs.neg_id(id)).collect();
                v.sort_unstable();
                v
            };
            let correspondent = pick_correspondent(&rs, &aut, pos.rtype, &preimages)?;
            entries.push(FoldedEntry {
                coords,
                rtype: pos.rtype,
                length: pos.length,
                in_twisted: pos.in_twisted,
                preimages,
                correspondent,
            });
        }
        let by_coords: BTreeMap<Vec<i64>, usize> =
            entries.iter().enumerate().map(|(i, e)| (e.coords.clone(), i)).collect();
        let mut entry_of_root = alloc::vec![usize::MAX; rs.num_roots()];
        for (i, e) in entries.iter().enumerate() {
            for &id in &e.preimages {
                entry_of_root[id] = i;
            }
        }

        let gram = folded_gram(&rs, &aut, &orbits);
        let label = folded_label(&rs, r)?;
        Ok(FoldedSystem {
            rs,
            aut,
            label,
            orbits,
            orbit_of_node,
            gram,
            entries,
            by_coords,
            entry_of_root,
            n_pos,
        })
    }

    pub fn ambient(&self) -> &RootSystem {
        &self.rs
    }

    pub fn aut(&self) -> &DiagramAut {
        &self.aut
    }

    pub fn r(&self) -> u8 {
        self.aut.order()
    }

    pub fn label(&self) -> FoldedLabel {
        self.label
    }

    /// Number ℓ of folded simple roots.
    pub fn ell(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    /// Ambient nodes in the p-th orbit (0-based folded index).
    pub fn orbit_nodes(&self, p: usize) -> &[usize] {
        &self.orbits[p]
    }

    pub fn orbit_of_node(&self, i: usize) -> usize {
        self.orbit_of_node[i]
    }

    /// True exactly in the even-rank A case, where π(Δ) contains doubled
    /// elements outside the twisted system.
    pub fn has_doubled_roots(&self) -> bool {
        matches!(self.rs.kind(), Kind::A) && self.rs.rank() % 2 == 0 && self.r() == 2
    }

    /// Folded coordinates of π(α) for an ambient root vector.
    pub fn project(&self, v: &[i64]) -> Vec<i64> {
        project(v, &self.orbit_of_node, self.orbits.len())
    }

    pub fn entries(&self) -> &[FoldedEntry] {
        &self.entries
    }

    pub fn positive_count(&self) -> usize {
        self.n_pos
    }

    pub fn entry_id(&self, coords: &[i64]) -> Result<usize> {
        self.by_coords.get(coords).copied().ok_or(Error::NotARoot)
    }

    pub fn entry(&self, coords: &[i64]) -> Result<&FoldedEntry> {
        Ok(&self.entries[self.entry_id(coords)?])
    }

    pub fn entry_of_root(&self, id: usize) -> &FoldedEntry {
        &self.entries[self.entry_of_root[id]]
    }

    pub fn neg_entry_id(&self, idx: usize) -> usize {
        if idx < self.n_pos {
            idx + self.n_pos
        } else {
            idx - self.n_pos
        }
    }

    pub fn is_positive_entry(&self, idx: usize) -> bool {
        idx < self.n_pos
    }

    /// Membership in π(Δ).
    pub fn is_projected_root(&self, coords: &[i64]) -> bool {
        self.by_coords.contains_key(coords)
    }

    /// Membership in the twisted system Δ^σ.
    pub fn is_twisted_root(&self, coords: &[i64]) -> bool {
        self.entry(coords).map(|e| e.in_twisted).unwrap_or(false)
    }

    pub fn rtype(&self, coords: &[i64]) -> Result<RootType> {
        Ok(self.entry(coords)?.rtype)
    }

    /// The distinguished ambient root id for a folded root.
    pub fn correspondent(&self, coords: &[i64]) -> Result<usize> {
        Ok(self.entry(coords)?.correspondent)
    }

    /// Bilinear form on the folded weight space.
    pub fn form(&self, x: &[i64], y: &[i64]) -> Rat {
        let mut acc = Rat::zero();
        for (p, &xp) in x.iter().enumerate() {
            if xp == 0 {
                continue;
            }
            for (q, &yq) in y.iter().enumerate() {
                if yq == 0 {
                    continue;
                }
                acc += &self.gram[p][q] * rat(xp * yq, 1);
            }
        }
        acc
    }

    pub fn norm_sq_folded(&self, x: &[i64]) -> Rat {
        self.form(x, x)
    }

    /// Cartan-style pairing matrix of the folded simple basis:
    /// entry (p, q) is 2(a_q, a_p)/(a_p, a_p).
    pub fn folded_cartan(&self) -> Vec<Vec<Rat>> {
        let l = self.ell();
        let mut m = alloc::vec![alloc::vec![Rat::zero(); l]; l];
        for p in 0..l {
            let np = &self.gram[p][p];
            for q in 0..l {
                m[p][q] = &(&self.gram[q][p] * rat(2, 1)) / np;
            }
        }
        m
    }

    /// The tabulated lowest-root data of the twisted affinization.
    pub fn highest_a0(&self) -> Result<HighestRootData> {
        let l = self.ell();
        let rank = self.rs.rank();
        let (coeffs, alpha, rtype): (Vec<i64>, RootVec, RootType) = match (
            self.rs.kind(),
            self.r(),
        ) {
            (_, 1) => {
                let theta = self.rs.highest_root().clone();
                (theta.clone(), theta, RootType::Fixed)
            }
            (Kind::A, 2) if rank % 2 == 1 => {
                // a₁ + 2a₂ + … + 2a_{ℓ−1} + a_ℓ  ↔  α₁ + … + α_{2ℓ−2}
                let mut c = alloc::vec![2i64; l];
                c[0] = 1;
                c[l - 1] = 1;
                let mut alpha = alloc::vec![1i64; rank];
                alpha[rank - 1] = 0;
                (c, alpha, RootType::Pair)
            }
            (Kind::A, 2) => {
                // 2a₁ + … + 2a_ℓ  ↔  α₁ + … + α_{2ℓ}
                (alloc::vec![2i64; l], alloc::vec![1i64; rank], RootType::Fixed)
            }
            (Kind::D, 2) => {
                // a₁ + … + a_ℓ  ↔  α₁ + … + α_ℓ
                let mut alpha = alloc::vec![1i64; rank];
                alpha[rank - 1] = 0;
                (alloc::vec![1i64; l], alpha, RootType::Pair)
            }
            (Kind::E, 2) => {
                let c = alloc::vec![2, 3, 2, 1];
                let alpha = alloc::vec![1, 2, 2, 1, 1, 1];
                (c, alpha, RootType::Pair)
            }
            (Kind::D, 3) => {
                let c = alloc::vec![1, 2];
                let alpha = alloc::vec![1, 1, 1, 0];
                (c, alpha, RootType::Triple)
            }
            _ => return Err(Error::Unsupported("no tabulated lowest root for this case")),
        };
        let entry = self.entry(&coeffs)?;
        if entry.rtype != rtype {
            return Err(Error::Internal("tabulated lowest-root type mismatch"));
        }
        let id = self.rs.root_id(&alpha).ok_or(Error::Internal("tabulated root missing"))?;
        if self.project(&alpha) != coeffs || !entry.preimages.contains(&id) {
            return Err(Error::Internal("tabulated root does not project onto −a₀"));
        }
        Ok(HighestRootData { coeffs, alpha, rtype })
    }
}

fn project(v: &[i64], orbit_of_node: &[usize], ell: usize) -> Vec<i64> {
    let mut out = alloc::vec![0i64; ell];
    for (i, &c) in v.iter().enumerate() {
        out[orbit_of_node[i]] += c;
    }
    out
}

fn node_orbits(rs: &RootSystem, aut: &DiagramAut) -> Vec<Vec<usize>> {
    let mut seen = alloc::vec![false; rs.rank()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for i in 0..rs.rank() {
        if seen[i] {
            continue;
        }
        let mut orbit = aut.node_orbit(i);
        orbit.sort_unstable();
        for &j in &orbit {
            seen[j] = true;
        }
        orbits.push(orbit);
    }
    orbits.sort_by_key(|o| o[0]);
    // Triality labels the fixed node first: a₁ = π(α₂), a₂ = π(α₁).
    if matches!(rs.kind(), Kind::D) && rs.rank() == 4 && aut.order() == 3 {
        orbits.reverse();
    }
    orbits
}

fn classify(rs: &RootSystem, aut: &DiagramAut, id: usize) -> RootType {
    let alpha = rs.root(id);
    let image = aut.apply_root(alpha);
    if image == *alpha {
        return RootType::Fixed;
    }
    if aut.order() == 3 {
        return RootType::Triple;
    }
    let sum: Vec<i64> = alpha.iter().zip(&image).map(|(a, b)| a + b).collect();
    if rs.is_root(&sum) {
        RootType::SummingPair
    } else {
        RootType::Pair
    }
}

fn length_class(rtype: RootType, doubled_case: bool) -> LengthClass {
    match rtype {
        RootType::Fixed => {
            if doubled_case {
                LengthClass::ExtraLong
            } else {
                LengthClass::Long
            }
        }
        RootType::Pair => {
            if doubled_case {
                LengthClass::Long
            } else {
                LengthClass::Short
            }
        }
        RootType::SummingPair => LengthClass::Short,
        RootType::Triple => LengthClass::Short,
    }
}

fn pick_correspondent(
    rs: &RootSystem,
    aut: &DiagramAut,
    rtype: RootType,
    preimages: &[usize],
) -> Result<usize> {
    match rtype {
        RootType::Fixed => {
            if preimages.len() != 1 {
                return Err(Error::Internal("fixed folded root with several preimages"));
            }
            Ok(preimages[0])
        }
        RootType::Pair | RootType::SummingPair => {
            // The orbit member minimal in colexicographic order (most
            // significant coordinate last).
            let mut best = preimages[0];
            for &id in &preimages[1..] {
                if colex_lt(rs.root(id), rs.root(best)) {
                    best = id;
                }
            }
            Ok(best)
        }
        RootType::Triple => {
            // The unique orbit member fixed by the auxiliary involution.
            let mut found = None;
            for &id in preimages {
                let v = rs.root(id);
                if aut.omega_root(v) == *v {
                    if found.is_some() {
                        return Err(Error::Internal("several ω-fixed orbit members"));
                    }
                    found = Some(id);
                }
            }
            found.ok_or(Error::Internal("no ω-fixed orbit member"))
        }
    }
}

fn folded_gram(rs: &RootSystem, aut: &DiagramAut, orbits: &[Vec<usize>]) -> Vec<Vec<Rat>> {
    // (π(α), π(β)) = (1/r)·Σ_j (α, σ^j(β)) with representatives α, β.
    let l = orbits.len();
    let r = aut.order();
    let mut gram = alloc::vec![alloc::vec![Rat::zero(); l]; l];
    for p in 0..l {
        for q in 0..l {
            let mut rep_p = alloc::vec![0i64; rs.rank()];
            rep_p[orbits[p][0]] = 1;
            let mut rep_q = alloc::vec![0i64; rs.rank()];
            rep_q[orbits[q][0]] = 1;
            let mut acc = 0i64;
            for j in 0..r {
                let img = aut.apply_root_pow(&rep_q, j);
                acc += rs.pairing(&rep_p, &img);
            }
            gram[p][q] = rat(acc, r as i64);
        }
    }
    gram
}

fn folded_label(rs: &RootSystem, r: u8) -> Result<FoldedLabel> {
    let n = rs.rank();
    Ok(match (rs.kind(), r) {
        (Kind::A, 1) => FoldedLabel::A(n),
        (Kind::D, 1) => FoldedLabel::D(n),
        (Kind::E, 1) => FoldedLabel::E(n),
        (Kind::A, 2) if n % 2 == 1 => FoldedLabel::C((n + 1) / 2),
        (Kind::A, 2) => FoldedLabel::B(n / 2),
        (Kind::D, 2) => FoldedLabel::B(n - 1),
        (Kind::E, 2) => FoldedLabel::F4,
        (Kind::D, 3) => FoldedLabel::G2,
        _ => return Err(Error::Unsupported("no folded label for this case")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{build_root_system, diagram_aut};
    use alloc::vec;

    fn folded(kind: Kind, rank: usize, r: u8) -> FoldedSystem {
        let rs = build_root_system(kind, rank).unwrap();
        let aut = diagram_aut(kind, rank, r).unwrap();
        fold(rs, aut).unwrap()
    }

    fn positive_coords(fs: &FoldedSystem, rtype: RootType) -> Vec<Vec<i64>> {
        fs.entries()
            .iter()
            .take(fs.positive_count())
            .filter(|e| e.rtype == rtype)
            .map(|e| e.coords.clone())
            .collect()
    }

    #[test]
    fn a4_folding_partitions_into_the_three_known_classes() {
        let fs = folded(Kind::A, 4, 2);
        assert_eq!(fs.label(), FoldedLabel::B(2));
        assert_eq!(fs.ell(), 2);
        assert_eq!(fs.orbits(), &[vec![0, 3], vec![1, 2]]);
        assert_eq!(fs.positive_count(), 6, "π(Δ₊) has six elements");
        let summing = positive_coords(&fs, RootType::SummingPair);
        assert_eq!(summing, vec![vec![0, 1], vec![1, 1]], "short part is {{a₂, a₁+a₂}}");
        let pairs = positive_coords(&fs, RootType::Pair);
        assert_eq!(pairs, vec![vec![1, 0], vec![1, 2]], "long part is {{a₁, a₁+2a₂}}");
        let fixed = positive_coords(&fs, RootType::Fixed);
        assert_eq!(fixed, vec![vec![0, 2], vec![2, 2]], "doubled part is {{2a₂, 2(a₁+a₂)}}");
        for e in fs.entries() {
            let expected = match e.rtype {
                RootType::SummingPair => (LengthClass::Short, true),
                RootType::Pair => (LengthClass::Long, true),
                RootType::Fixed => (LengthClass::ExtraLong, false),
                RootType::Triple => unreachable!(),
            };
            assert_eq!((e.length, e.in_twisted), expected, "entry {:?}", e.coords);
        }
        assert!(fs.has_doubled_roots());
    }

    #[test]
    fn d4_triality_folding_gives_g2() {
        let fs = folded(Kind::D, 4, 3);
        assert_eq!(fs.label(), FoldedLabel::G2);
        assert_eq!(fs.orbits(), &[vec![1], vec![0, 2, 3]], "fixed node labels a₁");
        assert_eq!(fs.positive_count(), 6);
        let triples = positive_coords(&fs, RootType::Triple);
        assert_eq!(triples, vec![vec![0, 1], vec![1, 1], vec![1, 2]]);
        let fixed = positive_coords(&fs, RootType::Fixed);
        assert_eq!(fixed, vec![vec![1, 0], vec![1, 3], vec![2, 3]]);
        for e in fs.entries() {
            assert!(e.in_twisted, "no exclusions outside the even-rank A case");
            let expected = match e.rtype {
                RootType::Triple => LengthClass::Short,
                RootType::Fixed => LengthClass::Long,
                _ => unreachable!(),
            };
            assert_eq!(e.length, expected);
        }
    }

    #[test]
    fn trivial_automorphism_folds_to_the_same_system() {
        let fs = folded(Kind::A, 2, 1);
        assert_eq!(fs.label(), FoldedLabel::A(2));
        assert_eq!(fs.positive_count(), 3);
        for e in fs.entries() {
            assert_eq!(e.rtype, RootType::Fixed);
            assert_eq!(e.length, LengthClass::Long);
            assert!(e.in_twisted);
            assert_eq!(e.preimages.len(), 1);
        }
        assert_eq!(fs.correspondent(&[1, 1]).unwrap(), fs.ambient().root_id(&[1, 1]).unwrap());
    }

    #[test]
    fn a4_correspondence_table_is_reproduced_entry_for_entry() {
        let fs = folded(Kind::A, 4, 2);
        let table: &[(&[i64], &[i64])] = &[
            (&[0, 1], &[0, 1, 0, 0]),
            (&[1, 1], &[1, 1, 0, 0]),
            (&[1, 0], &[1, 0, 0, 0]),
            (&[1, 2], &[1, 1, 1, 0]),
            (&[0, 2], &[0, 1, 1, 0]),
            (&[2, 2], &[1, 1, 1, 1]),
            (&[0, -1], &[0, 0, -1, 0]),
            (&[-1, -1], &[0, 0, -1, -1]),
            (&[-1, 0], &[0, 0, 0, -1]),
            (&[-1, -2], &[0, -1, -1, -1]),
            (&[0, -2], &[0, -1, -1, 0]),
            (&[-2, -2], &[-1, -1, -1, -1]),
        ];
        for (a, alpha) in table {
            let id = fs.correspondent(a).unwrap();
            assert_eq!(
                fs.ambient().root(id).as_slice(),
                *alpha,
                "correspondent of {:?}",
                a
            );
        }
    }

    #[test]
    fn d4_triality_correspondence_picks_the_omega_fixed_member() {
        let fs = folded(Kind::D, 4, 3);
        let table: &[(&[i64], &[i64])] = &[
            (&[0, 1], &[1, 0, 0, 0]),
            (&[1, 1], &[1, 1, 0, 0]),
            (&[1, 2], &[0, 1, 1, 1]),
            (&[0, -1], &[-1, 0, 0, 0]),
            (&[-1, -1], &[-1, -1, 0, 0]),
            (&[-1, -2], &[0, -1, -1, -1]),
        ];
        for (a, alpha) in table {
            let id = fs.correspondent(a).unwrap();
            assert_eq!(
                fs.ambient().root(id).as_slice(),
                *alpha,
                "correspondent of {:?}",
                a
            );
        }
        // Fixed folded roots correspond to their unique fixed preimage.
        assert_eq!(fs.ambient().root(fs.correspondent(&[1, 0]).unwrap()), &vec![0, 1, 0, 0]);
        assert_eq!(
            fs.ambient().root(fs.correspondent(&[-2, -3]).unwrap()),
            &vec![-1, -2, -1, -1]
        );
    }

    #[test]
    fn negating_a_folded_root_negates_and_twists_its_correspondent() {
        for (kind, rank, r) in [(Kind::A, 3, 2), (Kind::A, 4, 2), (Kind::D, 5, 2), (Kind::E, 6, 2)]
        {
            let fs = folded(kind, rank, r);
            for e in fs.entries().iter().take(fs.positive_count()) {
                let neg: Vec<i64> = e.coords.iter().map(|c| -c).collect();
                let alpha = fs.ambient().root(e.correspondent).clone();
                let expect: Vec<i64> = fs.aut().apply_root(&alpha).iter().map(|c| -c).collect();
                let got = fs.ambient().root(fs.correspondent(&neg).unwrap()).clone();
                assert_eq!(got, expect, "−a' pairs with −σ(α) for {:?}", e.coords);
            }
        }
    }

    #[test]
    fn projection_of_a_correspondent_returns_the_folded_root() {
        for (kind, rank, r) in
            [(Kind::A, 4, 2), (Kind::A, 5, 2), (Kind::D, 4, 3), (Kind::D, 5, 2), (Kind::E, 6, 2)]
        {
            let fs = folded(kind, rank, r);
            for e in fs.entries() {
                let alpha = fs.ambient().root(e.correspondent);
                assert_eq!(fs.project(alpha), e.coords);
            }
        }
    }

    #[test]
    fn folded_gram_matrices_match_known_cartan_shapes() {
        let fs = folded(Kind::A, 4, 2);
        let c = fs.folded_cartan();
        assert_eq!(c[0], vec![rat(2, 1), rat(-1, 1)]);
        assert_eq!(c[1], vec![rat(-2, 1), rat(2, 1)]);
        assert_eq!(fs.norm_sq_folded(&[0, 1]), rat(1, 2), "short norm");
        assert_eq!(fs.norm_sq_folded(&[1, 0]), rat(1, 1), "long norm");
        assert_eq!(fs.norm_sq_folded(&[0, 2]), rat(2, 1), "doubled norm");

        let fs = folded(Kind::D, 4, 3);
        let c = fs.folded_cartan();
        assert_eq!(c[0], vec![rat(2, 1), rat(-1, 1)]);
        assert_eq!(c[1], vec![rat(-3, 1), rat(2, 1)]);
        assert_eq!(fs.norm_sq_folded(&[0, 1]), rat(2, 3));
        assert_eq!(fs.norm_sq_folded(&[1, 0]), rat(2, 1));

        let fs = folded(Kind::E, 6, 2);
        let c = fs.folded_cartan();
        let expect = [
            vec![rat(2, 1), rat(-1, 1), rat(0, 1), rat(0, 1)],
            vec![rat(-1, 1), rat(2, 1), rat(-2, 1), rat(0, 1)],
            vec![rat(0, 1), rat(-1, 1), rat(2, 1), rat(-1, 1)],
            vec![rat(0, 1), rat(0, 1), rat(-1, 1), rat(2, 1)],
        ];
        assert_eq!(c, expect, "folded E6 pairing has the F4 shape");

        let fs = folded(Kind::A, 3, 2);
        let c = fs.folded_cartan();
        assert_eq!(c[0], vec![rat(2, 1), rat(-2, 1)]);
        assert_eq!(c[1], vec![rat(-1, 1), rat(2, 1)]);
        assert_eq!(fs.label(), FoldedLabel::C(2));

        let fs = folded(Kind::D, 5, 2);
        assert_eq!(fs.label(), FoldedLabel::B(4));
        let c = fs.folded_cartan();
        assert_eq!(c[3], vec![rat(0, 1), rat(0, 1), rat(-2, 1), rat(2, 1)]);
        assert_eq!(c[2], vec![rat(0, 1), rat(-1, 1), rat(2, 1), rat(-1, 1)]);
    }

    #[test]
    fn tabulated_lowest_roots_match_case_by_case() {
        let cases: &[(Kind, usize, u8, &[i64], &[i64], RootType)] = &[
            (Kind::A, 3, 2, &[1, 1], &[1, 1, 0], RootType::Pair),
            (Kind::A, 4, 2, &[2, 2], &[1, 1, 1, 1], RootType::Fixed),
            (Kind::A, 5, 2, &[1, 2, 1], &[1, 1, 1, 1, 0], RootType::Pair),
            (Kind::D, 5, 2, &[1, 1, 1, 1], &[1, 1, 1, 1, 0], RootType::Pair),
            (Kind::E, 6, 2, &[2, 3, 2, 1], &[1, 2, 2, 1, 1, 1], RootType::Pair),
            (Kind::D, 4, 3, &[1, 2], &[1, 1, 1, 0], RootType::Triple),
            (Kind::A, 2, 1, &[1, 1], &[1, 1], RootType::Fixed),
        ];
        for (kind, rank, r, coeffs, alpha, rtype) in cases {
            let fs = folded(*kind, *rank, *r);
            let data = fs.highest_a0().unwrap();
            assert_eq!(data.coeffs.as_slice(), *coeffs, "({:?}{}, r={})", kind, rank, r);
            assert_eq!(data.alpha.as_slice(), *alpha);
            assert_eq!(data.rtype, *rtype);
        }
    }

    #[test]
    fn classification_is_exhaustive_at_reference_ranks() {
        for (kind, rank, r, n_short, n_long, n_extra) in [
            (Kind::A, 3, 2, 4, 4, 0),
            (Kind::A, 4, 2, 4, 4, 4),
            (Kind::A, 5, 2, 12, 6, 0),
            (Kind::D, 4, 2, 6, 12, 0),
            (Kind::D, 5, 2, 8, 24, 0),
            (Kind::E, 6, 2, 24, 24, 0),
            (Kind::D, 4, 3, 6, 6, 0),
        ] {
            let fs = folded(kind, rank, r);
            let count = |cls: LengthClass| {
                fs.entries().iter().filter(|e| e.length == cls).count()
            };
            assert_eq!(
                (
                    count(LengthClass::Short),
                    count(LengthClass::Long),
                    count(LengthClass::ExtraLong)
                ),
                (n_short, n_long, n_extra),
                "length census for ({:?}{}, r={})",
                kind,
                rank,
                r
            );
            let twisted = fs.entries().iter().filter(|e| e.in_twisted).count();
            assert_eq!(twisted, n_short + n_long, "doubled images are excluded");
        }
    }
}
