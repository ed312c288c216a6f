//! File formats: the JSON set document and headerless CSV matrices.

use serde::{Deserialize, Serialize};

use crate::construct::GcsSet;
use crate::ebf::ZqSequence;
use crate::error::{GcsError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<u64>>,
    pub seq: Vec<u64>,
}

/// `{p,q,L,m,k,digits,pi,c,c_prime,g,members:[{gamma,seq}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GcsSetDoc {
    pub p: u64,
    pub q: u64,
    #[serde(rename = "L")]
    pub length: usize,
    pub m: usize,
    pub k: usize,
    pub digits: Vec<u64>,
    pub pi: Vec<usize>,
    pub c: Vec<u64>,
    pub c_prime: u64,
    /// ANF text of `g`.
    pub g: String,
    pub members: Vec<MemberDoc>,
}

impl From<&GcsSet> for GcsSetDoc {
    fn from(set: &GcsSet) -> Self {
        let params = &set.params;
        GcsSetDoc {
            p: params.p(),
            q: params.q(),
            length: params.length(),
            m: params.m(),
            k: params.k(),
            digits: params.digits().to_vec(),
            pi: params.pi().to_vec(),
            c: params.c().to_vec(),
            c_prime: params.c_prime(),
            g: params.g().to_string(),
            members: set
                .members
                .iter()
                .map(|m| MemberDoc {
                    gamma: Some(m.gamma.clone()),
                    seq: m.zq.values().to_vec(),
                })
                .collect(),
        }
    }
}

pub fn set_to_json(set: &GcsSet) -> String {
    serde_json::to_string_pretty(&GcsSetDoc::from(set)).expect("serializable")
}

/// Sequences read back from a file, with coset labels when present.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceFile {
    pub q: u64,
    pub gammas: Vec<Option<Vec<u64>>>,
    pub sequences: Vec<ZqSequence>,
}

#[derive(Deserialize)]
struct LooseDoc {
    q: u64,
    members: Vec<MemberDoc>,
}

/// Reads the `q` and `members` fields of a set document; other fields are
/// ignored.
pub fn read_sequences_json(text: &str) -> Result<SequenceFile> {
    let doc: LooseDoc = serde_json::from_str(text).map_err(|e| GcsError::Parse {
        line: Some(e.line()),
        field: None,
        message: e.to_string(),
    })?;
    let mut gammas = Vec::with_capacity(doc.members.len());
    let mut sequences = Vec::with_capacity(doc.members.len());
    for (idx, member) in doc.members.into_iter().enumerate() {
        let seq = ZqSequence::new(doc.q, member.seq).map_err(|e| GcsError::Parse {
            line: None,
            field: None,
            message: format!("member {idx}: {e}"),
        })?;
        gammas.push(member.gamma);
        sequences.push(seq);
    }
    check_rectangular(&sequences, |i| format!("member {i}"))?;
    Ok(SequenceFile {
        q: doc.q,
        gammas,
        sequences,
    })
}

fn check_rectangular(seqs: &[ZqSequence], name: impl Fn(usize) -> String) -> Result<()> {
    let first = seqs
        .first()
        .ok_or_else(|| GcsError::parse("no sequences in input"))?;
    if let Some((i, s)) = seqs
        .iter()
        .enumerate()
        .find(|(_, s)| s.len() != first.len())
    {
        return Err(GcsError::parse(format!(
            "{} has length {}, expected {}",
            name(i),
            s.len(),
            first.len()
        )));
    }
    Ok(())
}

/// Reads one sequence per nonblank line, entries separated by commas.
pub fn read_sequences_csv(text: &str, q: u64) -> Result<SequenceFile> {
    let mut sequences = Vec::new();
    let mut width = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let at = |field: Option<usize>, message: String| GcsError::Parse {
            line: Some(lineno + 1),
            field,
            message,
        };
        let values = line
            .split(',')
            .enumerate()
            .map(|(f, v)| {
                let v: u64 = v.trim().parse().map_err(|_| {
                    at(
                        Some(f + 1),
                        format!("`{}` is not a nonnegative integer", v.trim()),
                    )
                })?;
                if v >= q {
                    return Err(at(Some(f + 1), format!("{v} is not reduced mod {q}")));
                }
                Ok(v)
            })
            .collect::<Result<Vec<u64>>>()?;
        match width {
            None => width = Some(values.len()),
            Some(w) if w != values.len() => {
                return Err(at(
                    None,
                    format!("row has {} entries, expected {w}", values.len()),
                ));
            }
            _ => {}
        }
        sequences.push(ZqSequence::new(q, values).map_err(|e| at(None, e.to_string()))?);
    }
    check_rectangular(&sequences, |i| format!("row {}", i + 1))?;
    Ok(SequenceFile {
        q,
        gammas: vec![None; sequences.len()],
        sequences,
    })
}

/// One line per sequence, entries joined by commas.
pub fn matrix_csv<'a, I>(seqs: I) -> String
where
    I: IntoIterator<Item = &'a ZqSequence>,
{
    let mut out = String::new();
    for seq in seqs {
        let row: Vec<String> = seq.values().iter().map(u64::to_string).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
