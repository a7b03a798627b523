//! Dynamic-linker dependency listings (the text `ldd` prints).

use crate::types::{ConceptToken, ContextSet, KnowledgeTuple, SignedAssocType};

pub const DEFAULT_LDD_CONTEXT: &str = "host application software dependencies security";

/// One resolved dependency line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkerLine {
    pub soname: String,
    pub path: Option<String>,
}

fn split_addr(s: &str) -> Option<(&str, &str)> {
    let s = s.trim_end();
    let open = s.rfind(" (")?;
    let addr = s[open + 2..].strip_suffix(')')?;
    if !addr.starts_with("0x") || !addr[2..].chars().all(|c| c.is_ascii_hexdigit()) {
        return None;
    }
    Some((s[..open].trim(), addr))
}

/// Parses `<soname> => <path> (<addr>)` or `<path> (<addr>)`.
pub fn parse_linker_line(line: &str) -> Option<LinkerLine> {
    let line = line.trim();
    if let Some((soname, rest)) = line.split_once("=>") {
        let soname = soname.trim();
        if soname.is_empty() || soname.contains(char::is_whitespace) {
            return None;
        }
        let rest = rest.trim();
        let path = if rest.starts_with('(') {
            split_addr(&format!(" {rest}"))?;
            ""
        } else {
            split_addr(rest)?.0
        };
        if path.contains(char::is_whitespace) {
            return None;
        }
        return Some(LinkerLine {
            soname: soname.to_string(),
            path: (!path.is_empty()).then(|| path.to_string()),
        });
    }
    let (path, _) = split_addr(line)?;
    if path.is_empty() || path.contains(char::is_whitespace) {
        return None;
    }
    Some(LinkerLine {
        soname: path.to_string(),
        path: Some(path.to_string()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LddParse {
    pub tuples: Vec<KnowledgeTuple>,
    pub lines: Vec<LinkerLine>,
    /// Non-blank lines that were not dependency lines.
    pub skipped: usize,
}

/// Turns an `ldd` listing for `binary_name` into "depends on" tuples.
pub fn parse_ldd(
    binary_name: &str,
    input: &str,
    context_phrase: &str,
) -> Result<LddParse, crate::error::InvalidValue> {
    let binary = ConceptToken::new(binary_name)?;
    let context = ContextSet::single(context_phrase)?;
    let mut out = LddParse {
        tuples: Vec::new(),
        lines: Vec::new(),
        skipped: 0,
    };
    for raw in input.lines() {
        if raw.trim().is_empty() {
            continue;
        }
        let Some(ll) = parse_linker_line(raw) else {
            out.skipped += 1;
            continue;
        };
        let Ok(dep) = ConceptToken::new(&ll.soname) else {
            out.skipped += 1;
            continue;
        };
        out.tuples.push(KnowledgeTuple::new(
            binary.clone(),
            SignedAssocType::forward(2),
            "depends on",
            dep,
            "partly determines",
            context.clone(),
        )?);
        out.lines.push(ll);
    }
    Ok(out)
}
