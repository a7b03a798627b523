//! Generic line-oriented tuple interchange format:
//! `c1 \t type \t fwd \t c2 \t bwd \t phrase|phrase \t negated`.

use crate::error::{IngestError, InvalidValue};
use crate::graph::Graph;
use crate::types::{ConceptToken, ContextSet, KnowledgeTuple, SignedAssocType};

fn parse_line(line: &str) -> Result<KnowledgeTuple, String> {
    let f: Vec<&str> = line.split('\t').collect();
    if f.len() != 7 {
        return Err(format!("expected 7 tab-separated fields, found {}", f.len()));
    }
    let value = |e: InvalidValue| e.to_string();
    let t: i64 = f[1]
        .trim()
        .parse()
        .map_err(|_| format!("association type {:?} is not an integer", f[1]))?;
    let stype = SignedAssocType::new(t).map_err(value)?;
    let phrases: Vec<&str> = if f[5].is_empty() {
        Vec::new()
    } else {
        f[5].split('|').collect()
    };
    let context = ContextSet::new(phrases).map_err(value)?;
    let negated = match f[6].trim() {
        "0" => false,
        "1" => true,
        other => return Err(format!("negated flag must be 0 or 1, found {other:?}")),
    };
    let c1 = ConceptToken::new(f[0]).map_err(value)?;
    let c2 = ConceptToken::new(f[3]).map_err(value)?;
    // A reciprocal type is the same association read from the other end.
    let tuple = if stype.is_forward() {
        KnowledgeTuple::new(c1, stype, f[2], c2, f[4], context)
    } else {
        KnowledgeTuple::new(c2, stype.invert(), f[4], c1, f[2], context)
    }
    .map_err(value)?;
    Ok(if negated { tuple.negate() } else { tuple })
}

pub fn parse_tuples(input: &str, file: &str) -> Result<Vec<KnowledgeTuple>, IngestError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        out.push(parse_line(line).map_err(|message| IngestError::Syntax {
            file: file.to_string(),
            line: i + 1,
            message,
        })?);
    }
    Ok(out)
}

pub fn render_tuple(t: &KnowledgeTuple) -> String {
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
        t.c1,
        t.stype,
        t.fwd_name,
        t.c2,
        t.bwd_name,
        t.context.phrases().join("|"),
        u8::from(t.negated)
    )
}

/// Every forward-signed stored edge as a tuple line, in storage order.
/// Re-ingesting the output rebuilds the same edge set (weights aside).
pub fn dump(g: &Graph) -> String {
    let mut out = String::new();
    for e in g.edges().filter(|e| e.stype.is_forward()) {
        let mut t = KnowledgeTuple::new(
            e.from.clone(),
            e.stype,
            &e.fwd_name,
            e.to.clone(),
            &e.bwd_name,
            e.context.clone(),
        )
        .expect("stored edges are valid");
        t.negated = e.negated;
        out.push_str(&render_tuple(&t));
    }
    out
}
