//! Data-export subcommands and the SU3 matrix commands.

use anyhow::{anyhow, Context, Result};
use serde::Serialize;
use std::path::Path;

use twistloop_core::loopalg::{chev_generators, Case};
use twistloop_core::roots::fold::FoldedLabel;
use twistloop_core::roots::{Kind, LengthClass, RootType};
use twistloop_core::su3::{decompose, eval_su3, is_su3, SU3Atom};

use crate::jsonio::{
    matrix_from_json, matrix_to_json, su3_atom_str, su3_atom_to_json, trace_to_json, word_to_json,
    MatrixJson, SU3AtomJson, TraceStepJson, WordJson,
};
use crate::report::Report;
use crate::sample::Sampler;

pub fn class_name(rt: RootType) -> &'static str {
    match rt {
        RootType::Fixed => "fixed",
        RootType::Pair => "pair",
        RootType::SummingPair => "summing-pair",
        RootType::Triple => "triple",
    }
}

fn length_name(lc: LengthClass) -> &'static str {
    match lc {
        LengthClass::Short => "short",
        LengthClass::Long => "long",
        LengthClass::ExtraLong => "extra-long",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseJson {
    #[serde(rename = "type")]
    pub kind: String,
    pub rank: usize,
    pub r: u8,
}

pub fn case_json(case: &Case) -> CaseJson {
    let rs = case.rs();
    CaseJson { kind: rs.kind().to_string(), rank: rs.rank(), r: case.r() }
}

/// Short case tag used in report records, e.g. `A4/2`.
pub fn case_label(case: &Case) -> String {
    format!("{}{}/{}", case.rs().kind(), case.rs().rank(), case.r())
}

#[derive(Debug, Serialize)]
struct FoldRootJson {
    coords: Vec<i64>,
    class: &'static str,
    length: &'static str,
    twisted: bool,
    preimages: Vec<Vec<i64>>,
    correspondent: Vec<i64>,
}

#[derive(Debug, Serialize)]
struct FoldJson {
    case: CaseJson,
    label: String,
    rank: usize,
    orbits: Vec<Vec<usize>>,
    roots: Vec<FoldRootJson>,
}

fn fold_json(case: &Case) -> FoldJson {
    let fs = case.fold();
    let rs = fs.ambient();
    let roots = fs
        .entries()
        .iter()
        .map(|e| FoldRootJson {
            coords: e.coords.clone(),
            class: class_name(e.rtype),
            length: length_name(e.length),
            twisted: e.in_twisted,
            preimages: e.preimages.iter().map(|&id| rs.root(id).clone()).collect(),
            correspondent: rs.root(e.correspondent).clone(),
        })
        .collect();
    FoldJson {
        case: case_json(case),
        label: fs.label().to_string(),
        rank: fs.ell(),
        orbits: fs.orbits().to_vec(),
        roots,
    }
}

pub fn cmd_fold(case: &Case, json: bool) -> Result<String> {
    if json {
        return Ok(serde_json::to_string_pretty(&fold_json(case))? + "\n");
    }
    let fs = case.fold();
    let rs = fs.ambient();
    let mut out = String::new();
    out.push_str(&format!(
        "{}{} with an order-{} diagram automorphism folds to {} (rank {})\n",
        rs.kind(),
        rs.rank(),
        case.r(),
        fs.label(),
        fs.ell()
    ));
    out.push_str("node orbits:");
    for orbit in fs.orbits() {
        let names: Vec<String> = orbit.iter().map(|i| (i + 1).to_string()).collect();
        out.push_str(&format!(" {{{}}}", names.join(", ")));
    }
    out.push('\n');
    out.push_str("positive classes:\n");
    for class in [RootType::SummingPair, RootType::Pair, RootType::Triple, RootType::Fixed] {
        let members: Vec<String> = fs
            .entries()
            .iter()
            .take(fs.positive_count())
            .filter(|e| e.rtype == class)
            .map(|e| format!("{:?}", e.coords))
            .collect();
        if members.is_empty() {
            continue;
        }
        let e = fs
            .entries()
            .iter()
            .find(|e| e.rtype == class)
            .expect("class has members");
        out.push_str(&format!(
            "  {} ({}, {}): {}\n",
            class_name(class),
            length_name(e.length),
            if e.in_twisted { "twisted" } else { "untwisted" },
            members.join("  ")
        ));
    }
    out.push_str("correspondence:\n");
    for e in fs.entries() {
        out.push_str(&format!("  {:?} -> {:?}\n", e.coords, rs.root(e.correspondent)));
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct PairConstantJson {
    a: Vec<i64>,
    b: Vec<i64>,
    sum: Vec<i64>,
    n: i64,
}

#[derive(Debug, Serialize)]
struct ConstantsJson {
    case: CaseJson,
    roots: Vec<Vec<i64>>,
    k: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_omega: Option<Vec<i64>>,
    pairs: Vec<PairConstantJson>,
}

fn constants_json(case: &Case) -> ConstantsJson {
    let rs = case.rs();
    let tbl = case.chev();
    let roots: Vec<Vec<i64>> = rs.all_ids().map(|id| rs.root(id).clone()).collect();
    let k: Vec<i64> = rs.all_ids().map(|id| tbl.k(id)).collect();
    let k_omega = if case.fold().aut().has_omega() {
        Some(rs.all_ids().map(|id| tbl.k_omega(id)).collect())
    } else {
        None
    };
    let mut pairs = Vec::new();
    for a in rs.all_ids() {
        for b in rs.all_ids() {
            if let (Some(sum), Some(n)) = (rs.sum_id(a, b), tbl.n(a, b)) {
                pairs.push(PairConstantJson {
                    a: rs.root(a).clone(),
                    b: rs.root(b).clone(),
                    sum: rs.root(sum).clone(),
                    n,
                });
            }
        }
    }
    ConstantsJson { case: case_json(case), roots, k, k_omega, pairs }
}

pub fn cmd_constants(case: &Case, json: bool) -> Result<String> {
    let data = constants_json(case);
    if json {
        return Ok(serde_json::to_string_pretty(&data)? + "\n");
    }
    let mut out = String::new();
    out.push_str(&format!(
        "structure constants for {}{} ({} roots, {} composable pairs)\n",
        data.case.kind,
        data.case.rank,
        data.roots.len(),
        data.pairs.len()
    ));
    out.push_str("sign table k:\n");
    for (root, k) in data.roots.iter().zip(&data.k) {
        out.push_str(&format!("  k{root:?} = {k}\n"));
    }
    out.push_str("bracket constants N:\n");
    for p in &data.pairs {
        out.push_str(&format!("  N[{:?}, {:?}] = {}\n", p.a, p.b, p.n));
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct GcmJson {
    case: CaseJson,
    label: String,
    size: usize,
    matrix: Vec<Vec<i64>>,
    coroot_coords: Vec<Vec<i64>>,
}

pub fn cmd_affine_gcm(case: &Case, json: bool) -> Result<String> {
    let gcm = chev_generators(case).map_err(|e| anyhow!("affine generators unavailable: {e}"))?;
    let size = gcm.size();
    let data = GcmJson {
        case: case_json(case),
        label: case.fold().label().to_string(),
        size,
        matrix: gcm.matrix().clone(),
        coroot_coords: (0..size).map(|p| gcm.h_coords(p).to_vec()).collect(),
    };
    if json {
        return Ok(serde_json::to_string_pretty(&data)? + "\n");
    }
    let mut out = String::new();
    out.push_str(&format!(
        "affine generalized Cartan matrix over folded type {} ({}x{})\n",
        data.label, size, size
    ));
    for row in &data.matrix {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
        out.push_str(&format!("  [{}]\n", cells.join(" ")));
    }
    Ok(out)
}

fn read_matrix(path: &Path) -> Result<twistloop_core::matrep::MatS> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let parsed: MatrixJson = serde_json::from_str(&text)
        .with_context(|| format!("{} is not a matrix document", path.display()))?;
    matrix_from_json(&parsed)
}

pub fn cmd_su3_check(path: &Path, json: bool) -> Result<(String, bool)> {
    let m = read_matrix(path)?;
    let mut rep = Report::new();
    let (ok, detail) = match is_su3(&m) {
        Ok(true) => (true, "determinant and form equations hold".to_string()),
        Ok(false) => (false, "determinant or form equation fails".to_string()),
        Err(e) => (false, format!("not a candidate: {e}")),
    };
    rep.push("su3", "check", ok, detail);
    rep.finalize();
    let out = if json { rep.render_json() } else { rep.render_table() };
    Ok((out, ok))
}

#[derive(Debug, Serialize)]
struct DecomposeJson {
    word: WordJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<TraceStepJson>>,
}

pub fn cmd_su3_decompose(path: &Path, with_trace: bool, json: bool) -> Result<(String, bool)> {
    let m = read_matrix(path)?;
    let (word, trace) = match decompose(&m) {
        Ok(pair) => pair,
        Err(e) => {
            let mut rep = Report::new();
            rep.push("su3", "decompose", false, format!("{e}"));
            rep.finalize();
            let out = if json { rep.render_json() } else { rep.render_table() };
            return Ok((out, false));
        }
    };
    if json {
        let doc = DecomposeJson {
            word: word_to_json(&word),
            trace: with_trace.then(|| trace_to_json(&trace)),
        };
        return Ok((serde_json::to_string_pretty(&doc)? + "\n", true));
    }
    let mut out = String::new();
    if word.is_empty() {
        out.push_str("decomposition word (0 atoms): the matrix is the identity\n");
    } else {
        out.push_str(&format!("decomposition word ({} atoms):\n", word.len()));
        for (i, atom) in word.iter().enumerate() {
            out.push_str(&format!("  {:>3}: {}\n", i + 1, su3_atom_str(atom)));
        }
    }
    if with_trace {
        out.push_str(&format!("descent trace ({} steps):\n", trace.steps.len()));
        for step in &trace.steps {
            out.push_str(&format!(
                "  {:<10} corner degree {} -> {} ({} atoms)\n",
                crate::jsonio::step_kind_name(step.kind),
                step.k_before,
                step.k_after,
                step.atoms.len()
            ));
        }
    }
    Ok((out, true))
}

#[derive(Debug, Serialize)]
struct RandomWordJson {
    length: usize,
    atoms: Vec<SU3AtomJson>,
    matrix: MatrixJson,
}

pub fn cmd_su3_random_word(len: usize, seed: u64, json: bool) -> Result<String> {
    let mut gen = Sampler::new(seed, 5);
    let word: Vec<SU3Atom> = (0..len).map(|_| gen.su3_atom()).collect();
    let matrix = eval_su3(&word).map_err(|e| anyhow!("sampled word failed to evaluate: {e}"))?;
    if json {
        let doc = RandomWordJson {
            length: word.len(),
            atoms: word.iter().map(su3_atom_to_json).collect(),
            matrix: matrix_to_json(&matrix),
        };
        return Ok(serde_json::to_string_pretty(&doc)? + "\n");
    }
    let mut out = String::new();
    out.push_str(&format!("random word ({} atoms, seed {}):\n", word.len(), seed));
    for (i, atom) in word.iter().enumerate() {
        out.push_str(&format!("  {:>3}: {}\n", i + 1, su3_atom_str(atom)));
    }
    Ok(out)
}

/// Parses `--type` values; accepted names are the ambient families.
pub fn parse_kind(text: &str) -> std::result::Result<Kind, String> {
    match text {
        "A" | "a" => Ok(Kind::A),
        "D" | "d" => Ok(Kind::D),
        "E" | "e" => Ok(Kind::E),
        other => Err(format!("unknown root system type {other:?}; expected A, D, or E")),
    }
}

/// The folded label expected for a supported `(kind, rank, r)` selection.
pub fn expected_label(kind: Kind, rank: usize, r: u8) -> String {
    let label = match (kind, r) {
        (Kind::A, 1) => FoldedLabel::A(rank),
        (Kind::D, 1) => FoldedLabel::D(rank),
        (Kind::E, 1) => FoldedLabel::E(rank),
        (Kind::A, 2) if rank % 2 == 0 => FoldedLabel::B(rank / 2),
        (Kind::A, 2) => FoldedLabel::C((rank + 1) / 2),
        (Kind::D, 2) => FoldedLabel::B(rank - 1),
        (Kind::D, 3) => FoldedLabel::G2,
        (Kind::E, 2) => FoldedLabel::F4,
        _ => FoldedLabel::A(0),
    };
    label.to_string()
}
