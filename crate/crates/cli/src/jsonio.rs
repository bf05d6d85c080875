//! JSON encodings for scalars, matrices, and SU3 words, plus text rendering.

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use twistloop_core::groupwords::AElt;
use twistloop_core::matrep::MatS;
use twistloop_core::scalars::{Cyc, Laurent, Rat};
use twistloop_core::su3::{DecompTrace, StepKind, SU3Atom};

/// Exact rational as a decimal-free string: `"p"` or `"p/q"`.
pub fn rat_to_string(q: &Rat) -> String {
    if q.denom() == &BigInt::one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"p"` or `"p/q"` with arbitrary-precision integer parts.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let mut parts = text.splitn(2, '/');
    let numer: BigInt = parts
        .next()
        .unwrap_or("")
        .parse()
        .with_context(|| format!("invalid rational numerator in {text:?}"))?;
    let denom: BigInt = match parts.next() {
        Some(d) => d.parse().with_context(|| format!("invalid rational denominator in {text:?}"))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        bail!("zero denominator in {text:?}");
    }
    Ok(Rat::new(numer, denom))
}

/// One Laurent term: coefficient `a + b·xi` on `z^(n/r)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub n: i64,
    pub a: String,
    pub b: String,
}

/// A Laurent polynomial in `z^(1/r)` over `Q(xi)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LaurentJson {
    pub r: u8,
    pub terms: Vec<TermJson>,
}

pub fn laurent_to_json(s: &Laurent) -> LaurentJson {
    let terms = s
        .terms()
        .map(|(n, c)| TermJson {
            n,
            a: rat_to_string(c.rat_part()),
            b: rat_to_string(c.xi_part()),
        })
        .collect();
    LaurentJson { r: s.order(), terms }
}

pub fn laurent_from_json(j: &LaurentJson) -> Result<Laurent> {
    if !(1..=3).contains(&j.r) {
        bail!("ground order must be 1, 2, or 3, got {}", j.r);
    }
    let mut out = Laurent::zero(j.r);
    let mut seen = std::collections::BTreeSet::new();
    for t in &j.terms {
        if !seen.insert(t.n) {
            bail!("duplicate exponent index {} in Laurent terms", t.n);
        }
        let a = parse_rat(&t.a)?;
        let b = parse_rat(&t.b)?;
        if j.r <= 2 && !b.is_zero() {
            bail!("the xi coefficient must be \"0\" when r <= 2, got {:?} at n = {}", t.b, t.n);
        }
        out = &out + &Laurent::monomial(j.r, t.n, Cyc::new(j.r, a, b));
    }
    Ok(out)
}

/// A square matrix over Laurent polynomials.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub r: u8,
    pub dim: usize,
    pub entries: Vec<Vec<LaurentJson>>,
}

pub fn matrix_to_json(m: &MatS) -> MatrixJson {
    let entries = (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| laurent_to_json(m.entry(i, j))).collect())
        .collect();
    MatrixJson { r: m.r(), dim: m.dim(), entries }
}

pub fn matrix_from_json(j: &MatrixJson) -> Result<MatS> {
    if j.entries.len() != j.dim {
        bail!("matrix declares dim {} but has {} rows", j.dim, j.entries.len());
    }
    let mut rows = Vec::with_capacity(j.dim);
    for row in &j.entries {
        if row.len() != j.dim {
            bail!("matrix declares dim {} but a row has {} entries", j.dim, row.len());
        }
        let mut out = Vec::with_capacity(j.dim);
        for cell in row {
            if cell.r != j.r {
                bail!("entry ground order {} disagrees with matrix order {}", cell.r, j.r);
            }
            out.push(laurent_from_json(cell)?);
        }
        rows.push(out);
    }
    MatS::from_rows(j.r, rows).map_err(|e| anyhow!("invalid matrix: {e}"))
}

/// One SU3 generator in its serialized form.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SU3AtomJson {
    X { positive: bool, first: LaurentJson, second: LaurentJson },
    XMono { positive: bool, s: LaurentJson },
    W { first: LaurentJson, second: LaurentJson },
    H { t: LaurentJson },
}

pub fn su3_atom_to_json(atom: &SU3Atom) -> SU3AtomJson {
    match atom {
        SU3Atom::X { positive, chi } => SU3AtomJson::X {
            positive: *positive,
            first: laurent_to_json(chi.first()),
            second: laurent_to_json(chi.second()),
        },
        SU3Atom::XMono { positive, s } => {
            SU3AtomJson::XMono { positive: *positive, s: laurent_to_json(s) }
        }
        SU3Atom::W { zeta } => SU3AtomJson::W {
            first: laurent_to_json(zeta.first()),
            second: laurent_to_json(zeta.second()),
        },
        SU3Atom::H { t } => SU3AtomJson::H { t: laurent_to_json(t) },
    }
}

pub fn su3_atom_from_json(j: &SU3AtomJson) -> Result<SU3Atom> {
    let pair = |first: &LaurentJson, second: &LaurentJson| -> Result<AElt> {
        AElt::new(laurent_from_json(first)?, laurent_from_json(second)?)
            .map_err(|e| anyhow!("invalid payload pair: {e}"))
    };
    Ok(match j {
        SU3AtomJson::X { positive, first, second } => SU3Atom::x(*positive, pair(first, second)?),
        SU3AtomJson::XMono { positive, s } => {
            SU3Atom::x_mono(*positive, laurent_from_json(s)?)
                .map_err(|e| anyhow!("invalid monomial payload: {e}"))?
        }
        SU3AtomJson::W { first, second } => {
            SU3Atom::w(pair(first, second)?).map_err(|e| anyhow!("invalid reflection payload: {e}"))?
        }
        SU3AtomJson::H { t } => {
            SU3Atom::h(laurent_from_json(t)?).map_err(|e| anyhow!("invalid torus payload: {e}"))?
        }
    })
}

/// A decomposition word together with its length.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WordJson {
    pub length: usize,
    pub atoms: Vec<SU3AtomJson>,
}

pub fn word_to_json(word: &[SU3Atom]) -> WordJson {
    WordJson { length: word.len(), atoms: word.iter().map(su3_atom_to_json).collect() }
}

pub fn word_from_json(j: &WordJson) -> Result<Vec<SU3Atom>> {
    j.atoms.iter().map(su3_atom_from_json).collect()
}

/// One trace step of the corner-degree descent.
#[derive(Debug, Clone, Serialize)]
pub struct TraceStepJson {
    pub kind: String,
    pub k_before: i64,
    pub k_after: i64,
    pub atoms: Vec<SU3AtomJson>,
}

pub fn step_kind_name(kind: StepKind) -> &'static str {
    match kind {
        StepKind::Swap => "swap",
        StepKind::AlignEven => "align-even",
        StepKind::AlignOdd => "align-odd",
        StepKind::Euclid => "euclid",
        StepKind::Terminal => "terminal",
    }
}

pub fn trace_to_json(trace: &DecompTrace) -> Vec<TraceStepJson> {
    trace
        .steps
        .iter()
        .map(|s| TraceStepJson {
            kind: step_kind_name(s.kind).to_string(),
            k_before: s.k_before,
            k_after: s.k_after,
            atoms: s.atoms.iter().map(su3_atom_to_json).collect(),
        })
        .collect()
}

/// Compact text form of a Laurent polynomial, for tables and messages.
pub fn laurent_str(s: &Laurent) -> String {
    if s.is_zero() {
        return "0".to_string();
    }
    let r = i64::from(s.order());
    let mut out = String::new();
    for (i, (n, c)) in s.terms().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        let coeff = if c.xi_part().is_zero() {
            rat_to_string(c.rat_part())
        } else {
            format!("({} + {} xi)", rat_to_string(c.rat_part()), rat_to_string(c.xi_part()))
        };
        if n == 0 {
            out.push_str(&coeff);
            continue;
        }
        if coeff != "1" {
            out.push_str(&coeff);
            out.push('*');
        }
        if n == r {
            out.push('z');
        } else if n % r == 0 {
            out.push_str(&format!("z^{}", n / r));
        } else {
            out.push_str(&format!("z^({n}/{r})"));
        }
    }
    out
}

/// One-line text form of an SU3 generator.
pub fn su3_atom_str(atom: &SU3Atom) -> String {
    let sign = |positive: bool| if positive { "+" } else { "-" };
    match atom {
        SU3Atom::X { positive, chi } => format!(
            "x{}({}; {})",
            sign(*positive),
            laurent_str(chi.first()),
            laurent_str(chi.second())
        ),
        SU3Atom::XMono { positive, s } => format!("m{}({})", sign(*positive), laurent_str(s)),
        SU3Atom::W { zeta } => {
            format!("w({}; {})", laurent_str(zeta.first()), laurent_str(zeta.second()))
        }
        SU3Atom::H { t } => format!("h({})", laurent_str(t)),
    }
}
