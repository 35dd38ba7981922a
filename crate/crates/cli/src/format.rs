//! JSON problem and solution files.
//!
//! Numbers are written in shortest round-trip form and parsed exactly, so a
//! file survives any number of read/write cycles bit for bit.

use std::fs;
use std::path::Path;

use contact_lcp::{
    BeamConfig, CascadeBlock, CascadeProblem, ContactLcp, Coupling, DenseMatrix, DenseVector,
    LcpProblem, Load, Stabilizer,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(flatten)]
    pub payload: Payload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Payload {
    General {
        m: Vec<Vec<f64>>,
        q: Vec<f64>,
    },
    Contact {
        k: Vec<Vec<f64>>,
        q_tilde: Vec<f64>,
        y_star: Vec<f64>,
    },
    Cascade {
        blocks: Vec<BlockFile>,
    },
    Beam {
        length: f64,
        ei: f64,
        stabilizers: Vec<StabilizerFile>,
        loads: Vec<LoadFile>,
    },
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::General { .. } => "general",
            Payload::Contact { .. } => "contact",
            Payload::Cascade { .. } => "cascade",
            Payload::Beam { .. } => "beam",
        }
    }

    fn fields(kind: &str) -> Option<&'static [&'static str]> {
        Some(match kind {
            "general" => &["m", "q"],
            "contact" => &["k", "q_tilde", "y_star"],
            "cascade" => &["blocks"],
            "beam" => &["length", "ei", "stabilizers", "loads"],
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockFile {
    pub k: Vec<Vec<f64>>,
    #[serde(default)]
    pub couplings: Vec<CouplingFile>,
    pub q_lower: Vec<f64>,
    pub q_upper: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingFile {
    pub source: usize,
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilizerFile {
    pub position: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadFile {
    pub position: f64,
    pub magnitude: f64,
}

/// A validated problem ready for the solvers.
#[derive(Debug, Clone)]
pub enum Problem {
    General(LcpProblem),
    Contact(ContactLcp),
    Cascade(CascadeProblem),
    Beam(BeamConfig, ContactLcp),
}

impl Problem {
    pub fn kind(&self) -> &'static str {
        match self {
            Problem::General(_) => "general",
            Problem::Contact(_) => "contact",
            Problem::Cascade(_) => "cascade",
            Problem::Beam(..) => "beam",
        }
    }

    /// The assembled LCP `(q, M)`.
    pub fn lcp(&self) -> LcpProblem {
        match self {
            Problem::General(p) => p.clone(),
            Problem::Contact(c) | Problem::Beam(_, c) => c.assemble(),
            Problem::Cascade(c) => c.assemble_full(),
        }
    }

    pub fn contact(&self) -> Option<&ContactLcp> {
        match self {
            Problem::Contact(c) | Problem::Beam(_, c) => Some(c),
            _ => None,
        }
    }
}

fn schema(field: impl Into<String>, message: impl ToString) -> CliError {
    CliError::Schema {
        field: field.into(),
        message: message.to_string(),
    }
}

fn matrix(field: &str, rows: &[Vec<f64>], expect: (usize, usize)) -> Result<DenseMatrix, CliError> {
    if rows.len() != expect.0 {
        return Err(schema(
            field,
            format!("has {} rows, expected {}", rows.len(), expect.0),
        ));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != expect.1 {
            return Err(schema(
                format!("{field}[{i}]"),
                format!("has {} entries, expected {}", r.len(), expect.1),
            ));
        }
    }
    DenseMatrix::from_rows(rows).map_err(|e| schema(field, e))
}

fn vector(field: &str, v: &[f64], len: usize) -> Result<DenseVector, CliError> {
    if v.len() != len {
        return Err(schema(
            field,
            format!(
                "has length {}, expected {len} to match the matrix side",
                v.len()
            ),
        ));
    }
    DenseVector::new(v.to_vec()).map_err(|e| schema(field, e))
}

fn nonempty(field: &str, len: usize) -> Result<usize, CliError> {
    if len == 0 {
        return Err(schema(field, "must not be empty"));
    }
    Ok(len)
}

impl ProblemFile {
    pub fn new(payload: Payload) -> Self {
        Self {
            payload,
            name: None,
            seed: None,
        }
    }

    /// Parses a problem file, rejecting unknown top-level fields.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(CliError::Json)?;
        let obj = value
            .as_object()
            .ok_or_else(|| schema("<root>", "expected a JSON object"))?;
        let kind = obj
            .get("kind")
            .ok_or_else(|| schema("kind", "missing"))?
            .as_str()
            .ok_or_else(|| schema("kind", "expected a string"))?;
        let fields = Payload::fields(kind).ok_or_else(|| {
            schema(
                "kind",
                format!("unknown kind `{kind}`, expected general, contact, cascade or beam"),
            )
        })?;
        for key in obj.keys() {
            if !["kind", "name", "seed"].contains(&key.as_str()) && !fields.contains(&key.as_str())
            {
                return Err(schema(
                    key.as_str(),
                    format!("unknown field for kind `{kind}`"),
                ));
            }
        }
        serde_json::from_str(text).map_err(CliError::Json)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| e.in_file(path))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("problem files always serialize");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.to_json()).map_err(|e| CliError::io(path, e))
    }

    /// Checks dimensions and builds the solver-side problem.
    pub fn to_problem(&self) -> Result<Problem, CliError> {
        match &self.payload {
            Payload::General { m, q } => {
                let n = nonempty("m", m.len())?;
                let m = matrix("m", m, (n, n))?;
                let q = vector("q", q, n)?;
                Ok(Problem::General(
                    LcpProblem::new(m, q).map_err(|e| schema("m", e))?,
                ))
            }
            Payload::Contact { k, q_tilde, y_star } => {
                let n = nonempty("k", k.len())?;
                let k = matrix("k", k, (n, n))?;
                let q_tilde = vector("q_tilde", q_tilde, n)?;
                let y_star = vector("y_star", y_star, n)?;
                if y_star.iter().any(|&y| y <= 0.0) {
                    return Err(schema("y_star", "entries must be strictly positive"));
                }
                Ok(Problem::Contact(
                    ContactLcp::new(k, q_tilde, y_star).map_err(|e| schema("k", e))?,
                ))
            }
            Payload::Cascade { blocks } => {
                nonempty("blocks", blocks.len())?;
                let mut dims = Vec::with_capacity(blocks.len());
                let mut built = Vec::with_capacity(blocks.len());
                for (i, b) in blocks.iter().enumerate() {
                    let at = |f: &str| format!("blocks[{i}].{f}");
                    let n = nonempty(&at("k"), b.k.len())?;
                    let k = matrix(&at("k"), &b.k, (n, n))?;
                    let q_lower = vector(&at("q_lower"), &b.q_lower, n)?;
                    let q_upper = vector(&at("q_upper"), &b.q_upper, n)?;
                    let mut couplings = Vec::with_capacity(b.couplings.len());
                    for (c_idx, c) in b.couplings.iter().enumerate() {
                        let field = at(&format!("couplings[{c_idx}]"));
                        if c.source >= i {
                            return Err(schema(
                                format!("{field}.source"),
                                format!("must refer to an earlier block, got {}", c.source),
                            ));
                        }
                        couplings.push(Coupling {
                            source: c.source,
                            matrix: matrix(
                                &format!("{field}.matrix"),
                                &c.matrix,
                                (n, dims[c.source]),
                            )?,
                        });
                    }
                    dims.push(n);
                    built.push(
                        CascadeBlock::new(k, couplings, q_lower, q_upper)
                            .map_err(|e| schema(format!("blocks[{i}]"), e))?,
                    );
                }
                Ok(Problem::Cascade(
                    CascadeProblem::new(built).map_err(|e| schema("blocks", e))?,
                ))
            }
            Payload::Beam {
                length,
                ei,
                stabilizers,
                loads,
            } => {
                nonempty("stabilizers", stabilizers.len())?;
                let stabs = stabilizers
                    .iter()
                    .map(|s| Stabilizer {
                        position: s.position,
                        gap: s.gap,
                    })
                    .collect();
                let loads = loads
                    .iter()
                    .map(|l| Load {
                        position: l.position,
                        magnitude: l.magnitude,
                    })
                    .collect();
                let cfg =
                    BeamConfig::new(*length, *ei, stabs, loads).map_err(|e| schema("beam", e))?;
                let contact = cfg.to_contact_lcp().map_err(|e| schema("stabilizers", e))?;
                Ok(Problem::Beam(cfg, contact))
            }
        }
    }
}

/// Residuals of a reported point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Residuals {
    pub min_z: f64,
    pub min_w: f64,
    pub comp_gap: f64,
}

/// Forces and gaps of one contact block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContactReport {
    pub f_lower: Vec<f64>,
    pub f_upper: Vec<f64>,
    pub gap_lower: Vec<f64>,
    pub gap_upper: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveReport {
    pub solver: String,
    pub z: Vec<f64>,
    pub w: Vec<f64>,
    pub residuals: Residuals,
    pub iterations: usize,
    /// Seconds.
    pub wall_time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contact: Option<Vec<ContactReport>>,
    /// `unique`, `multiple` or `none`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniqueness: Option<String>,
}

impl SolveReport {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(CliError::Json)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}

/// A solution file. Only `z` is read, so a [`SolveReport`] also qualifies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub z: Vec<f64>,
}

impl SolutionFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(CliError::Json)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| e.in_file(path))
    }
}
