//! Seeded random generation of payloads, pairs, atoms, and SU3 words.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twistloop_core::groupwords::{a_act, a_plus, chi_hat, AElt, AtomKind, KMAtom, Payload};
use twistloop_core::loopalg::{in_omega, AffineRealRoot, Case};
use twistloop_core::roots::RootType;
use twistloop_core::scalars::{rat, Cyc, Laurent, Rat};
use twistloop_core::su3::SU3Atom;

/// Deterministic sample stream; the salt keeps independent suites decoupled
/// from each other under a shared command-line seed.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, salt: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed.wrapping_add(salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))) }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen::<bool>()
    }

    pub fn pick(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Nonzero rational with numerator and denominator bounded in magnitude.
    pub fn small_rat(&mut self, max_num: i64, max_den: i64) -> Rat {
        let num = self.int(1, max_num);
        let num = if self.coin() { num } else { -num };
        rat(num, self.int(1, max_den))
    }

    /// Torus parameter bounded away from the unit circle: |tau| is neither
    /// 0 nor 1, so wrong exponent patterns cannot collapse back to 1.
    pub fn tau(&mut self) -> Rat {
        let num = self.int(2, 9);
        let num = if self.coin() { num } else { -num };
        let den = loop {
            let d = self.int(1, 4);
            if d != num.abs() {
                break d;
            }
        };
        rat(num, den)
    }

    /// Single nonzero monomial over the given ground order.
    pub fn mono(&mut self, r: u8, n_lo: i64, n_hi: i64) -> Laurent {
        Laurent::monomial(r, self.int(n_lo, n_hi), Cyc::from_rat(r, self.small_rat(3, 3)))
    }

    /// A random valid pair, mixing canonical pairs, sums, and scalings.
    pub fn aelt(&mut self) -> AElt {
        let mut chi = chi_hat(self.coin(), self.int(-2, 2), &self.small_rat(3, 3));
        if self.coin() {
            chi = a_plus(&chi, &chi_hat(self.coin(), self.int(-2, 2), &self.small_rat(3, 3)));
        }
        if self.coin() {
            chi = a_act(&self.mono(2, -1, 1), &chi);
        }
        chi
    }

    /// A random SU3 generator within the documented sampling bounds:
    /// numerators and denominators at most 3, exponent indices at most 4.
    pub fn su3_atom(&mut self) -> SU3Atom {
        match self.pick(4) {
            0 => SU3Atom::x(self.coin(), self.aelt()),
            1 => {
                let n = [-3, -1, 1, 3][self.pick(4)];
                SU3Atom::x_mono(self.coin(), self.mono_at(n)).expect("odd monomial payload")
            }
            2 => SU3Atom::w(chi_hat(self.coin(), self.int(-2, 2), &self.small_rat(3, 3)))
                .expect("canonical pairs have unit seconds"),
            _ => SU3Atom::h(self.mono(2, -4, 4)).expect("nonzero monomials are units"),
        }
    }

    fn mono_at(&mut self, n: i64) -> Laurent {
        Laurent::monomial(2, n, Cyc::from_rat(2, self.small_rat(3, 3)))
    }

    pub fn su3_word(&mut self, max_len: usize) -> Vec<SU3Atom> {
        let len = self.int(1, max_len as i64) as usize;
        (0..len).map(|_| self.su3_atom()).collect()
    }

    /// A random payload valid for the given folded root and atom kind.
    pub fn payload(&mut self, case: &Case, coords: &[i64], kind: AtomKind) -> Payload {
        let fs = case.fold();
        let r = case.r();
        let entry = fs.entry(coords).expect("sampled coordinates name a folded root");
        if entry.rtype == RootType::SummingPair {
            return match kind {
                AtomKind::X => Payload::Pair(self.aelt()),
                AtomKind::W => Payload::Pair(chi_hat(self.coin(), self.int(-2, 2), &self.small_rat(3, 3))),
                AtomKind::H => Payload::DoublePair(
                    chi_hat(self.coin(), self.int(-2, 2), &self.small_rat(3, 3)),
                    chi_hat(self.coin(), self.int(-2, 2), &self.small_rat(3, 3)),
                ),
            };
        }
        // Plain payloads: the loop degree pattern depends on the class.
        let doubled = entry.rtype == RootType::Fixed && !entry.in_twisted;
        let (step, offset) = if doubled {
            (2, i64::from(kind != AtomKind::H))
        } else if entry.rtype == RootType::Fixed {
            (i64::from(r), 0)
        } else {
            (1, 0)
        };
        let term = |g: &mut Self, k: i64| {
            Laurent::monomial(r, step * k + offset, Cyc::from_rat(r, g.small_rat(3, 3)))
        };
        let degree = self.int(-2, 2);
        let mut s = term(self, degree);
        if kind == AtomKind::X && self.coin() {
            // Units are only required for w/h atoms; widen x payloads.
            s = &s + &term(self, degree + 1);
        }
        Payload::Plain(s)
    }

    /// A random presentation atom with an admissible affine degree.
    pub fn km_atom(&mut self, case: &Case, kind: AtomKind) -> KMAtom {
        let fs = case.fold();
        let entries = fs.entries();
        loop {
            let e = &entries[self.pick(entries.len())];
            let n = self.int(-3, 3);
            let root = AffineRealRoot::new(e.coords.clone(), n);
            if !in_omega(fs, &root) {
                continue;
            }
            let nu = self.small_rat(3, 3);
            return match kind {
                AtomKind::X => KMAtom::x(root, nu),
                AtomKind::W => KMAtom::w(root, nu).expect("nonzero payload"),
                AtomKind::H => KMAtom::h(root, nu).expect("nonzero payload"),
            };
        }
    }
}
