//! Rank-one twisted special unitary group over Laurent polynomials in a
//! square root of the loop variable, with a constructive Euclidean
//! decomposition of every member into a word of elementary generators.
//!
//! Members are `3 × 3` matrices `C` of determinant one over ground order 2
//! that preserve the antidiagonal form `J` under the twisted transpose:
//! `ᵗC·J·σ'(C) = J`.  The reduction repeatedly shrinks the exponent spread
//! of the `(1,1)` entry by corner swaps, torus shifts, and exact unipotent
//! cancellations until the first column is trivial, then reads the remaining
//! matrix off as a torus element times a unipotent element.

use alloc::vec;
use alloc::vec::Vec;

use crate::groupwords::{a_neg, AElt};
use crate::matrep::MatS;
use crate::scalars::{rat, Cyc, Laurent};
use crate::{Error, Result};

/// The invariant antidiagonal form with entries `(-1, 1, -1)`.
pub fn su3_form() -> MatS {
    let rows = vec![
        vec![Laurent::zero(2), Laurent::zero(2), Laurent::from_int(2, -1)],
        vec![Laurent::zero(2), Laurent::from_int(2, 1), Laurent::zero(2)],
        vec![Laurent::from_int(2, -1), Laurent::zero(2), Laurent::zero(2)],
    ];
    MatS::from_rows(2, rows).expect("fixed 3 by 3 shape")
}

fn check_shape(c: &MatS) -> Result<()> {
    if c.r() != 2 || c.dim() != 3 {
        return Err(Error::InvalidPayload("expected a 3 by 3 matrix with ground order 2"));
    }
    Ok(())
}

fn sigma_entrywise(c: &MatS) -> MatS {
    let rows = (0..3)
        .map(|i| (0..3).map(|j| c.entry(i, j).sigma_prime()).collect())
        .collect();
    MatS::from_rows(2, rows).expect("fixed 3 by 3 shape")
}

/// Membership test: determinant one and `ᵗC·J·σ'(C) = J`.
///
/// Matrices of the wrong shape or ground order are an error rather than a
/// plain `false`.
pub fn is_su3(c: &MatS) -> Result<bool> {
    check_shape(c)?;
    if c.det() != Laurent::one(2) {
        return Ok(false);
    }
    let j = su3_form();
    Ok(c.transpose().mul(&j).mul(&sigma_entrywise(c)) == j)
}

/// Elementary generator of the group.
///
/// `X` carries a full payload pair; `XMono` abbreviates the pair `(0, -s)`
/// for a monomial `s` with odd exponent; `W` is the antidiagonal reflection
/// representative for a payload with unit second component; `H` is the
/// diagonal element `diag(t, (-1)^n, (-1)^n·t⁻¹)` for a unit monomial
/// `t = τ·z^{n/2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SU3Atom {
    X { positive: bool, chi: AElt },
    XMono { positive: bool, s: Laurent },
    W { zeta: AElt },
    H { t: Laurent },
}

fn check_x_mono(s: &Laurent) -> Result<()> {
    if s.order() != 2 || !s.is_unit() || s.deg_stats().0.rem_euclid(2) == 0 {
        return Err(Error::InvalidPayload("monomial unipotent payload must be a monomial with odd exponent"));
    }
    Ok(())
}

fn check_w(zeta: &AElt) -> Result<()> {
    if !zeta.has_unit_second() {
        return Err(Error::InvalidPayload("reflection payload must have a unit second component"));
    }
    Ok(())
}

fn check_h(t: &Laurent) -> Result<()> {
    if t.order() != 2 || !t.is_unit() {
        return Err(Error::InvalidPayload("torus payload must be a unit monomial"));
    }
    Ok(())
}

impl SU3Atom {
    /// Unipotent generator for the positive or negative root.
    pub fn x(positive: bool, chi: AElt) -> Self {
        SU3Atom::X { positive, chi }
    }

    /// Unipotent shorthand for the pair `(0, -s)`; valid exactly when `s`
    /// is a monomial with odd exponent.
    pub fn x_mono(positive: bool, s: Laurent) -> Result<Self> {
        check_x_mono(&s)?;
        Ok(SU3Atom::XMono { positive, s })
    }

    /// Reflection representative; the payload needs a unit second component.
    pub fn w(zeta: AElt) -> Result<Self> {
        check_w(&zeta)?;
        Ok(SU3Atom::W { zeta })
    }

    /// Torus element for a unit monomial payload.
    pub fn h(t: Laurent) -> Result<Self> {
        check_h(&t)?;
        Ok(SU3Atom::H { t })
    }

    /// The atom whose matrix inverts this atom's matrix.
    pub fn inverse(&self) -> Self {
        match self {
            SU3Atom::X { positive, chi } => SU3Atom::X { positive: *positive, chi: a_neg(chi) },
            SU3Atom::XMono { positive, s } => SU3Atom::XMono { positive: *positive, s: -s },
            SU3Atom::W { zeta } => {
                let conj = AElt::new(zeta.first().sigma_prime(), zeta.second().sigma_prime())
                    .expect("twist of a valid pair is a valid pair");
                SU3Atom::W { zeta: conj }
            }
            SU3Atom::H { t } => SU3Atom::H { t: t.inv_unit().expect("torus payload is a unit") },
        }
    }
}

/// The matrix of one generator; payload constraints are re-validated.
pub fn gen_matrix(atom: &SU3Atom) -> Result<MatS> {
    let one = Laurent::one(2);
    let zero = Laurent::zero(2);
    match atom {
        SU3Atom::X { positive, chi } => {
            let a = chi.first().clone();
            let b = chi.second().clone();
            let sa = a.sigma_prime();
            let sb = b.sigma_prime();
            let rows = if *positive {
                vec![
                    vec![one.clone(), a, sb],
                    vec![zero.clone(), one.clone(), sa],
                    vec![zero.clone(), zero, one],
                ]
            } else {
                vec![
                    vec![one.clone(), zero.clone(), zero.clone()],
                    vec![sa, one.clone(), zero],
                    vec![sb, a, one],
                ]
            };
            MatS::from_rows(2, rows)
        }
        SU3Atom::XMono { positive, s } => {
            check_x_mono(s)?;
            // (0, -s) satisfies the pair identity because σ'(s) = -s.
            let chi = AElt::new(Laurent::zero(2), -s)?;
            gen_matrix(&SU3Atom::X { positive: *positive, chi })
        }
        SU3Atom::W { zeta } => {
            check_w(zeta)?;
            // The matrix depends on the payload through ξ² = 1/ζ² only.
            let xi2 = zeta.second().inv_unit()?;
            let m13 = xi2.sigma_prime();
            let m22 = -&(&xi2 * &xi2.sigma_prime().inv_unit()?);
            let m31 = xi2.inv_unit()?;
            let rows = vec![
                vec![zero.clone(), zero.clone(), m13],
                vec![zero.clone(), m22, zero.clone()],
                vec![m31, zero.clone(), zero],
            ];
            MatS::from_rows(2, rows)
        }
        SU3Atom::H { t } => {
            check_h(t)?;
            let sign = if t.deg_stats().0.rem_euclid(2) == 0 { 1 } else { -1 };
            let mid = Laurent::from_int(2, sign);
            let last = &mid * &t.inv_unit()?;
            let rows = vec![
                vec![t.clone(), zero.clone(), zero.clone()],
                vec![zero.clone(), mid, zero.clone()],
                vec![zero.clone(), zero, last],
            ];
            MatS::from_rows(2, rows)
        }
    }
}

/// Product of the generator matrices of a word, leftmost factor first.
pub fn eval_su3(word: &[SU3Atom]) -> Result<MatS> {
    let mut acc = MatS::identity(2, 3);
    for atom in word {
        acc = acc.mul(&gen_matrix(atom)?);
    }
    Ok(acc)
}

fn apply(word: &[SU3Atom], c: &MatS) -> Result<MatS> {
    Ok(eval_su3(word)?.mul(c))
}

fn spread(s: &Laurent) -> i64 {
    s.deg_stats().2
}

fn top_exp(s: &Laurent) -> i64 {
    s.deg_stats().0
}

/// Word for the corner exchange `diag(1/2, 1, 2)·antidiag(2, -1, 1/2)`;
/// its matrix sends rows `(r1, r2, r3)` to `(r3, -r2, r1)`.
fn swap_word() -> Vec<SU3Atom> {
    vec![
        SU3Atom::H { t: Laurent::from_rat(2, rat(1, 2)) },
        SU3Atom::W { zeta: AElt::one_half() },
    ]
}

/// Reversed word of inverse atoms; evaluates to the inverse matrix.
fn inv_rev(word: &[SU3Atom]) -> Vec<SU3Atom> {
    word.iter().rev().map(SU3Atom::inverse).collect()
}

/// Exchanges the first-column corners (negating the middle row) when the
/// bottom corner has the larger exponent spread; otherwise a no-op.
pub fn swap_reduce(c: &MatS) -> Result<(Vec<SU3Atom>, MatS)> {
    check_shape(c)?;
    if spread(c.entry(2, 0)) <= spread(c.entry(0, 0)) {
        return Ok((Vec::new(), c.clone()));
    }
    let word = swap_word();
    let next = apply(&word, c)?;
    Ok((word, next))
}

/// Aligns the top exponents of the first-column corners by torus shifts
/// and, across odd exponent gaps, exact monomial cancellations.
///
/// Preconditions: both corners are nonzero and the bottom spread does not
/// exceed the top spread.  On return the tops agree or a corner became zero;
/// the top spread never grows.
pub fn align_tops(c: &MatS) -> Result<(Vec<SU3Atom>, MatS)> {
    check_shape(c)?;
    if c.entry(0, 0).is_zero() || c.entry(2, 0).is_zero() {
        return Err(Error::Decomposition("alignment needs nonzero first-column corners"));
    }
    let k11 = spread(c.entry(0, 0));
    let k31 = spread(c.entry(2, 0));
    if k31 > k11 {
        return Err(Error::Decomposition("alignment needs the bottom corner spread bounded by the top one"));
    }
    // Atoms are applied one at a time on the left, so the accumulated word
    // grows at the front: the last atom applied is the leftmost factor.
    let mut word = Vec::new();
    let mut cur = c.clone();
    // Each cancellation strictly lowers one top while the minimal exponents
    // are bounded below, so the budget is never exhausted on group members.
    let mut budget = k11 + k31 + 2;
    loop {
        if cur.entry(0, 0).is_zero() || cur.entry(2, 0).is_zero() {
            break;
        }
        let d = top_exp(cur.entry(0, 0)) - top_exp(cur.entry(2, 0));
        if d == 0 {
            break;
        }
        if d % 2 == 0 {
            let atom = SU3Atom::H { t: Laurent::monomial(2, -d / 2, Cyc::one(2)) };
            cur = apply(core::slice::from_ref(&atom), &cur)?;
            word.insert(0, atom);
            continue;
        }
        let shift = -(d - d.signum()) / 2;
        if shift != 0 {
            let atom = SU3Atom::H { t: Laurent::monomial(2, shift, Cyc::one(2)) };
            cur = apply(core::slice::from_ref(&atom), &cur)?;
            word.insert(0, atom);
        }
        // The tops now differ by exactly one; cancel the higher one with a
        // monomial unipotent of exponent one half.
        if budget == 0 {
            return Err(Error::Decomposition("alignment exceeded its cancellation budget"));
        }
        budget -= 1;
        let s11 = cur.entry(0, 0).clone();
        let s31 = cur.entry(2, 0).clone();
        let p = top_exp(&s11);
        let q = top_exp(&s31);
        let atom = if p == q + 1 {
            let ratio = &s11.coeff(p) * &s31.coeff(q).inv()?;
            SU3Atom::XMono { positive: true, s: Laurent::monomial(2, 1, -&ratio) }
        } else {
            let ratio = &s31.coeff(q) * &s11.coeff(p).inv()?;
            SU3Atom::XMono { positive: false, s: Laurent::monomial(2, 1, -&ratio) }
        };
        cur = apply(core::slice::from_ref(&atom), &cur)?;
        word.insert(0, atom);
    }
    Ok((word, cur))
}

/// One exact Euclidean cancellation at an aligned state.
///
/// The unipotent payload pair of constants `(-2ν/ι, 2ν²/ι²)` is built from
/// the three aligned top coefficients of the first column; multiplying by it
/// removes the top exponent of the `(1,1)` entry, so its spread strictly
/// shrinks (or the entry becomes zero).
pub fn euclid_step(c: &MatS) -> Result<(Vec<SU3Atom>, MatS)> {
    check_shape(c)?;
    let s11 = c.entry(0, 0);
    let s21 = c.entry(1, 0);
    let s31 = c.entry(2, 0);
    if s11.is_zero() || s21.is_zero() || s31.is_zero() {
        return Err(Error::Decomposition("the cancellation step needs a nonzero first column"));
    }
    let (p, m11, k11) = s11.deg_stats();
    let (u, m21, _) = s21.deg_stats();
    let (q, m31, _) = s31.deg_stats();
    if p != q || u != p {
        return Err(Error::Decomposition("the cancellation step needs aligned first-column tops"));
    }
    if m11 > m21 || m11 > m31 {
        return Err(Error::Decomposition("the cancellation step needs the minimal exponent on top"));
    }
    let nu = s11.coeff(p);
    let iota = s21.coeff(p);
    let mu = s31.coeff(p);
    let two_nu = &Cyc::from_rat(2, rat(2, 1)) * &nu;
    if &iota * &iota != &two_nu * &mu {
        return Err(Error::Decomposition("the aligned top coefficients fail the unitary identity"));
    }
    let first = -&(&two_nu * &iota.inv()?);
    let second = &(&two_nu * &nu) * &(&iota * &iota).inv()?;
    let chi = AElt::new(Laurent::constant(first), Laurent::constant(second))?;
    let atom = SU3Atom::X { positive: true, chi };
    let next = apply(core::slice::from_ref(&atom), c)?;
    let after = next.entry(0, 0);
    if !after.is_zero() && spread(after) >= k11 {
        return Err(Error::Internal("the cancellation step failed to shrink the corner spread"));
    }
    Ok((vec![atom], next))
}

/// Left-multiplier word sending a terminal-pattern matrix to the identity.
///
/// Accepted patterns: the identity (empty word), a zero `(1,1)` entry, or a
/// zero first column below a nonzero `(1,1)` entry.
fn terminal_core(c: &MatS) -> Result<Vec<SU3Atom>> {
    if c.is_identity() {
        return Ok(Vec::new());
    }
    let mut prefix = Vec::new();
    let mut cur = c.clone();
    if !cur.entry(0, 0).is_zero() {
        if !cur.entry(1, 0).is_zero() || !cur.entry(2, 0).is_zero() {
            return Err(Error::Decomposition("the terminal pattern needs a zero corner or a zero lower first column"));
        }
        // Move the nonzero corner entry out of the way first.
        prefix = swap_word();
        cur = apply(&prefix, &cur)?;
    }
    if !cur.entry(0, 1).is_zero() || !cur.entry(1, 0).is_zero() {
        return Err(Error::Decomposition("the terminal pattern forces zeros next to the empty corner"));
    }
    let s13 = cur.entry(0, 2).clone();
    if !s13.is_unit() {
        return Err(Error::Decomposition("the terminal pattern needs a unit (1,3) entry"));
    }
    let s32 = cur.entry(2, 1).clone();
    let s33 = cur.entry(2, 2).clone();
    // Swapping the corner rows leaves an upper triangular matrix, which must
    // factor as a torus element times a unipotent element read off from the
    // far row; the comparison below verifies every structural identity.
    let exchange = swap_word();
    let upper = apply(&exchange, &cur)?;
    let t = s13.sigma_prime().inv_unit()?;
    let chi = AElt::new(&s13.sigma_prime() * &s32, &s13 * &s33.sigma_prime())
        .map_err(|_| Error::Decomposition("the terminal pattern is not in the group"))?;
    let factor = vec![SU3Atom::H { t }, SU3Atom::X { positive: true, chi }];
    if eval_su3(&factor)? != upper {
        return Err(Error::Decomposition("the terminal pattern is not in the group"));
    }
    let mut word = inv_rev(&factor);
    word.extend(exchange);
    word.extend(prefix);
    Ok(word)
}

/// Word of generators reproducing a terminal-pattern matrix exactly.
///
/// The `(1,1)` entry must be zero, or the rest of the first column must be
/// zero; the identity yields the empty word.
pub fn terminal_decompose(c: &MatS) -> Result<Vec<SU3Atom>> {
    check_shape(c)?;
    let reduce = terminal_core(c)?;
    let word = inv_rev(&reduce);
    if eval_su3(&word)? != *c {
        return Err(Error::Internal("the terminal word does not reproduce its input"));
    }
    Ok(word)
}

/// Kind of one recorded reduction step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// Corner exchange bounding the bottom spread by the top one.
    Swap,
    /// Torus shift aligning the corner tops across an even exponent gap.
    AlignEven,
    /// Shift plus monomial cancellations across an odd exponent gap.
    AlignOdd,
    /// Exact cancellation of the aligned top of the `(1,1)` entry.
    Euclid,
    /// Final rewrite of a terminal-pattern matrix as a generator word.
    Terminal,
}

/// One reduction step: a left-multiplier word together with the exponent
/// spread of the `(1,1)` entry before and after applying it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: StepKind,
    pub atoms: Vec<SU3Atom>,
    pub k_before: i64,
    pub k_after: i64,
}

/// Ordered log of a decomposition: applying each step's word on the left,
/// in order, sends the input matrix to the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompTrace {
    pub steps: Vec<TraceStep>,
}

/// Decomposes a group member into a generator word, with a step trace.
///
/// The returned word evaluates to the input matrix exactly; it is the
/// reversed inverse of the concatenated trace words.  Matrices outside the
/// group are an error.
pub fn decompose(c: &MatS) -> Result<(Vec<SU3Atom>, DecompTrace)> {
    if !is_su3(c)? {
        return Err(Error::Decomposition("the input matrix is not in the twisted unitary group"));
    }
    let mut steps: Vec<TraceStep> = Vec::new();
    let mut cur = c.clone();
    // Every cancellation round shrinks the corner spread, with at most two
    // swaps and one alignment in between, so this budget is generous.
    let mut budget = 4 * (spread(c.entry(0, 0)) + spread(c.entry(2, 0)) + 2) + 8;
    loop {
        if budget == 0 {
            return Err(Error::Decomposition("the reduction exceeded its step budget"));
        }
        budget -= 1;
        if cur.is_identity() {
            break;
        }
        let k_before = spread(cur.entry(0, 0));
        if cur.entry(0, 0).is_zero() || cur.entry(2, 0).is_zero() {
            let atoms = terminal_core(&cur)?;
            cur = apply(&atoms, &cur)?;
            steps.push(TraceStep { kind: StepKind::Terminal, atoms, k_before, k_after: 0 });
            break;
        }
        let k31 = spread(cur.entry(2, 0));
        if k31 > k_before {
            let atoms = swap_word();
            cur = apply(&atoms, &cur)?;
            let k_after = spread(cur.entry(0, 0));
            steps.push(TraceStep { kind: StepKind::Swap, atoms, k_before, k_after });
            continue;
        }
        let gap = top_exp(cur.entry(0, 0)) - top_exp(cur.entry(2, 0));
        if gap != 0 {
            let kind = if gap % 2 == 0 { StepKind::AlignEven } else { StepKind::AlignOdd };
            let (atoms, next) = align_tops(&cur)?;
            cur = next;
            let k_after = spread(cur.entry(0, 0));
            steps.push(TraceStep { kind, atoms, k_before, k_after });
            continue;
        }
        if k_before == 0 {
            // A monomial first column cancels to an empty corner in one
            // step; fold that step into the terminal rewrite so that every
            // recorded cancellation strictly descends.
            let (cancel, next) = euclid_step(&cur)?;
            let mut atoms = terminal_core(&next)?;
            cur = apply(&atoms, &next)?;
            atoms.extend(cancel);
            steps.push(TraceStep { kind: StepKind::Terminal, atoms, k_before, k_after: 0 });
            break;
        }
        let (atoms, next) = euclid_step(&cur)?;
        cur = next;
        let k_after = spread(cur.entry(0, 0));
        if !cur.entry(0, 0).is_zero() && k_after >= k_before {
            return Err(Error::Internal("a cancellation step failed to descend"));
        }
        steps.push(TraceStep { kind: StepKind::Euclid, atoms, k_before, k_after });
    }
    if !cur.is_identity() {
        return Err(Error::Internal("the reduction did not reach the identity"));
    }
    let mut word = Vec::new();
    for step in &steps {
        word.extend(inv_rev(&step.atoms));
    }
    if eval_su3(&word)? != *c {
        return Err(Error::Internal("the decomposition word does not reproduce the input"));
    }
    Ok((word, DecompTrace { steps }))
}
