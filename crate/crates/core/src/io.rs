//! Deterministic JSON file formats for groups, braces, configurations and
//! solutions. Written files reparse to equal values; the brace `meta` block
//! is advisory and ignored for equality.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brace::{orbit_decomposition, socle, validate_brace, Brace, BraceViolation};
use crate::group::{validate_group, FiniteGroup, GroupViolation};
use crate::solution::{ConfigViolation, PointLabel, Solution, SolutionConfig, SolutionError};
use crate::subgroup::{Subgroup, SubgroupError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(String),
    #[error(transparent)]
    Group(#[from] GroupViolation),
    #[error(transparent)]
    Brace(#[from] BraceViolation),
    #[error(transparent)]
    Config(#[from] ConfigViolation),
    #[error(transparent)]
    Subgroup(#[from] SubgroupError),
    #[error(transparent)]
    Solution(#[from] SolutionError),
    #[error("label {index} is malformed: {label:?}")]
    BadLabel { index: usize, label: String },
    #[error("declared order {declared} does not match table size {actual}")]
    OrderMismatch { declared: usize, actual: usize },
    #[error("configuration file carries no brace and no brace was supplied")]
    MissingBrace,
    #[error("cannot read {path}: {message}")]
    File { path: String, message: String },
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json(e.to_string())
    }
}

#[derive(Serialize, Deserialize)]
struct GroupFile {
    order: usize,
    table: Vec<Vec<u16>>,
}

/// Parses and validates a group file; the identity is relabeled to 0.
pub fn group_from_json(text: &str) -> Result<FiniteGroup, IoError> {
    let f: GroupFile = serde_json::from_str(text)?;
    if f.table.len() != f.order {
        return Err(IoError::OrderMismatch { declared: f.order, actual: f.table.len() });
    }
    Ok(validate_group(&f.table)?)
}

pub fn group_to_json(g: &FiniteGroup) -> String {
    let f = GroupFile { order: g.order(), table: g.rows() };
    to_pretty(&f)
}

#[derive(Serialize, Deserialize)]
struct BraceFile {
    order: usize,
    add: Vec<Vec<u16>>,
    mul: Vec<Vec<u16>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<BraceMeta>,
}

/// Canonical metadata carried by emitted brace files; parsers ignore it for
/// equality.
#[derive(Serialize, Deserialize)]
struct BraceMeta {
    socle: Vec<u16>,
    orbits: Vec<Vec<u16>>,
}

pub fn brace_from_json(text: &str) -> Result<Brace, IoError> {
    let f: BraceFile = serde_json::from_str(text)?;
    if f.add.len() != f.order || f.mul.len() != f.order {
        return Err(IoError::OrderMismatch {
            declared: f.order,
            actual: f.add.len().max(f.mul.len()),
        });
    }
    Ok(validate_brace(&f.add, &f.mul)?)
}

pub fn brace_to_json(b: &Brace) -> String {
    let d = orbit_decomposition(b);
    let f = BraceFile {
        order: b.order(),
        add: b.add_group().rows(),
        mul: b.mul_group().rows(),
        meta: Some(BraceMeta {
            socle: socle(b).elements().to_vec(),
            orbits: d.orbits().to_vec(),
        }),
    };
    to_pretty(&f)
}

#[derive(Serialize, Deserialize)]
struct SolutionFile {
    size: usize,
    labels: Vec<String>,
    sigma: Vec<Vec<u16>>,
}

pub fn solution_from_json(text: &str) -> Result<Solution, IoError> {
    let f: SolutionFile = serde_json::from_str(text)?;
    if f.sigma.len() != f.size || f.labels.len() != f.size {
        return Err(IoError::OrderMismatch { declared: f.size, actual: f.sigma.len() });
    }
    let labels = f
        .labels
        .iter()
        .enumerate()
        .map(|(index, l)| {
            parse_label(l).ok_or_else(|| IoError::BadLabel { index, label: l.clone() })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Solution::from_parts(labels, f.sigma)?)
}

pub fn solution_to_json(s: &Solution) -> String {
    let f = SolutionFile {
        size: s.size(),
        labels: s.labels().iter().map(format_label).collect(),
        sigma: s.sigmas().iter().map(|p| p.images().to_vec()).collect(),
    };
    to_pretty(&f)
}

fn format_label(l: &PointLabel) -> String {
    format!("orbit:{}/family:{}/coset:{}", l.orbit, l.family, l.coset)
}

fn parse_label(s: &str) -> Option<PointLabel> {
    let mut parts = s.split('/');
    let orbit = parse_field(parts.next()?, "orbit")?;
    let family = parse_field(parts.next()?, "family")?;
    let coset = parse_field(parts.next()?, "coset")?;
    if parts.next().is_some() {
        return None;
    }
    Some(PointLabel { orbit, family, coset: coset as u16 })
}

fn parse_field(part: &str, name: &str) -> Option<usize> {
    let rest = part.strip_prefix(name)?.strip_prefix(':')?;
    rest.parse().ok()
}

#[derive(Serialize, Deserialize)]
struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    brace: Option<BraceRef>,
    orbits: Vec<u16>,
    families: Vec<Vec<Vec<u16>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BraceRef {
    Path(String),
    Inline(BraceFile),
}

/// Parses a configuration file. The brace comes from `override_brace` when
/// given, otherwise from the file's inline table or path reference (resolved
/// relative to `base_dir`).
pub fn config_from_json(
    text: &str,
    override_brace: Option<Arc<Brace>>,
    base_dir: Option<&Path>,
) -> Result<SolutionConfig, IoError> {
    let f: ConfigFile = serde_json::from_str(text)?;
    let brace = match (override_brace, f.brace) {
        (Some(b), _) => b,
        (None, Some(BraceRef::Inline(bf))) => {
            let text = to_pretty(&bf);
            Arc::new(brace_from_json(&text)?)
        }
        (None, Some(BraceRef::Path(p))) => {
            let path = match base_dir {
                Some(d) => d.join(&p),
                None => Path::new(&p).to_path_buf(),
            };
            let text = std::fs::read_to_string(&path).map_err(|e| IoError::File {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            Arc::new(brace_from_json(&text)?)
        }
        (None, None) => return Err(IoError::MissingBrace),
    };
    let families = f
        .families
        .into_iter()
        .map(|fam| {
            fam.into_iter()
                .map(|elems| Subgroup::new(brace.mul_group(), elems))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SolutionConfig::from_reps(brace, &f.orbits, families)?)
}

/// Writes a configuration with the canonical orbit representatives; the
/// brace is inlined when `inline_brace` is set.
pub fn config_to_json(cfg: &SolutionConfig, inline_brace: bool) -> String {
    let d = orbit_decomposition(cfg.brace());
    let brace = inline_brace.then(|| {
        let b = cfg.brace();
        BraceRef::Inline(BraceFile {
            order: b.order(),
            add: b.add_group().rows(),
            mul: b.mul_group().rows(),
            meta: None,
        })
    });
    let f = ConfigFile {
        brace,
        orbits: cfg.orbit_indices().iter().map(|&i| d.rep(i) as u16).collect(),
        families: cfg
            .families()
            .iter()
            .map(|fam| fam.iter().map(|k| k.elements().to_vec()).collect())
            .collect(),
    };
    to_pretty(&f)
}

fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialization cannot fail");
    s.push('\n');
    s
}
