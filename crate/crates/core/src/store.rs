//! Directory-per-concept persistence.
//!
//! ```text
//! <root>/<concept>/<signed-type>/<next-concept>
//! ```
//!
//! Each next-concept file holds one line per association from the concept
//! to the next concept under that type:
//! `fwd \t bwd \t phrase|phrase \t negated \t weight \t last_updated \n`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{SanitizeError, StoreError};
use crate::graph::Graph;
use crate::types::{AssociationEdge, ConceptToken, ContextSet, SignedAssocType};

/// Maps a concept name to a directory/file name: every '/' becomes '!'.
pub fn sanitize_name(name: &str) -> Result<String, SanitizeError> {
    if name.is_empty() {
        return Err(SanitizeError::Empty);
    }
    if name.contains('\0') {
        return Err(SanitizeError::Nul(name.to_string()));
    }
    if name.contains('!') && name.contains('/') {
        return Err(SanitizeError::Ambiguous(name.to_string()));
    }
    if cfg!(windows) && name.contains('\\') {
        return Err(SanitizeError::Reserved(name.to_string()));
    }
    if name == "." || name == ".." {
        return Err(SanitizeError::Reserved(name.to_string()));
    }
    Ok(name.replace('/', "!"))
}

/// Inverse of [`sanitize_name`] for names that contained no '!'.
pub fn desanitize_name(stored: &str) -> String {
    stored.replace('!', "/")
}

/// Filesystem location of a concept inside a store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StorePath {
    pub root_dir: PathBuf,
    pub concept_dir_name: String,
}

impl StorePath {
    pub fn new(root_dir: &Path, concept: &ConceptToken) -> Result<Self, SanitizeError> {
        Ok(StorePath {
            root_dir: root_dir.to_path_buf(),
            concept_dir_name: sanitize_name(concept.as_str())?,
        })
    }

    pub fn concept_dir(&self) -> PathBuf {
        self.root_dir.join(&self.concept_dir_name)
    }

    pub fn next_concept_file(
        &self,
        stype: SignedAssocType,
        next: &ConceptToken,
    ) -> Result<PathBuf, SanitizeError> {
        Ok(self
            .concept_dir()
            .join(stype.to_string())
            .join(sanitize_name(next.as_str())?))
    }
}

/// One serialized association line.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord {
    pub fwd_name: String,
    pub bwd_name: String,
    pub phrases: Vec<String>,
    pub negated: bool,
    pub weight: f64,
    pub last_updated: i64,
}

impl EdgeRecord {
    pub fn from_edge(e: &AssociationEdge) -> Self {
        EdgeRecord {
            fwd_name: e.fwd_name.clone(),
            bwd_name: e.bwd_name.clone(),
            phrases: e.context.phrases().to_vec(),
            negated: e.negated,
            weight: e.weight,
            last_updated: e.last_updated,
        }
    }

    pub fn to_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            self.fwd_name,
            self.bwd_name,
            self.phrases.join("|"),
            u8::from(self.negated),
            self.weight,
            self.last_updated
        )
    }

    /// Parses a line without its trailing newline.
    pub fn parse(line: &str) -> Result<Self, String> {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 6 {
            return Err(format!("expected 6 tab-separated fields, found {}", fields.len()));
        }
        if fields[0].is_empty() || fields[1].is_empty() {
            return Err("empty association name".to_string());
        }
        let phrases = if fields[2].is_empty() {
            Vec::new()
        } else {
            fields[2].split('|').map(str::to_string).collect()
        };
        let negated = match fields[3] {
            "0" => false,
            "1" => true,
            other => return Err(format!("negated flag must be 0 or 1, found {other:?}")),
        };
        let weight: f64 = fields[4]
            .parse()
            .map_err(|_| format!("bad weight {:?}", fields[4]))?;
        if !weight.is_finite() || weight < 0.0 {
            return Err(format!("weight {weight} must be finite and non-negative"));
        }
        let last_updated: i64 = fields[5]
            .parse()
            .map_err(|_| format!("bad timestamp {:?}", fields[5]))?;
        Ok(EdgeRecord {
            fwd_name: fields[0].to_string(),
            bwd_name: fields[1].to_string(),
            phrases,
            negated,
            weight,
            last_updated,
        })
    }

    fn into_edge(
        self,
        from: ConceptToken,
        stype: SignedAssocType,
        to: ConceptToken,
    ) -> Result<AssociationEdge, String> {
        let context = ContextSet::new(&self.phrases).map_err(|e| e.to_string())?;
        let mut e = AssociationEdge::new(
            from,
            stype,
            &self.fwd_name,
            to,
            &self.bwd_name,
            context,
            self.negated,
        )
        .map_err(|e| e.to_string())?;
        e.weight = self.weight;
        e.last_updated = self.last_updated;
        Ok(e)
    }
}

static SAVE_SEQ: std::sync::atomic::AtomicUsize = std::sync::atomic::AtomicUsize::new(0);

/// Writes the full layout into `root_dir`, replacing whatever it held.
///
/// The tree is built in a sibling staging directory and swapped in, so a
/// failed save leaves the previous store intact.
pub fn save(g: &Graph, root_dir: &Path) -> Result<(), StoreError> {
    let parent = match root_dir.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let base = root_dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "store".to_string());
    fs::create_dir_all(&parent).map_err(|e| StoreError::io(&parent, e))?;
    let tag = format!(
        "{}-{}",
        std::process::id(),
        SAVE_SEQ.fetch_add(1, std::sync::atomic::Ordering::Relaxed)
    );
    let staging = parent.join(format!(".{base}.saving-{tag}"));
    if staging.exists() {
        fs::remove_dir_all(&staging).map_err(|e| StoreError::io(&staging, e))?;
    }
    write_tree(g, &staging)?;

    if root_dir.exists() {
        let old = parent.join(format!(".{base}.old-{tag}"));
        fs::rename(root_dir, &old).map_err(|e| StoreError::io(root_dir, e))?;
        fs::rename(&staging, root_dir).map_err(|e| StoreError::io(root_dir, e))?;
        fs::remove_dir_all(&old).map_err(|e| StoreError::io(&old, e))?;
    } else {
        fs::rename(&staging, root_dir).map_err(|e| StoreError::io(root_dir, e))?;
    }
    Ok(())
}

fn write_tree(g: &Graph, dir: &Path) -> Result<(), StoreError> {
    fs::create_dir_all(dir).map_err(|e| StoreError::io(dir, e))?;
    for concept in g.nodes() {
        let sp = StorePath::new(dir, concept)?;
        let cdir = sp.concept_dir();
        fs::create_dir(&cdir).map_err(|e| StoreError::io(&cdir, e))?;

        // Storage order is sorted by type then target, so the records of
        // one file are contiguous.
        let mut type_dir: Option<SignedAssocType> = None;
        let mut current: Option<(PathBuf, String)> = None;
        for (stype, e) in g.typed_edges(concept) {
            if type_dir != Some(stype) {
                let tdir = cdir.join(stype.to_string());
                fs::create_dir(&tdir).map_err(|e| StoreError::io(&tdir, e))?;
                type_dir = Some(stype);
            }
            let file = sp.next_concept_file(stype, &e.to)?;
            let line = EdgeRecord::from_edge(e).to_line();
            match &mut current {
                Some((path, buf)) if *path == file => buf.push_str(&line),
                _ => {
                    if let Some((path, buf)) = current.replace((file, line)) {
                        write_file(&path, &buf)?;
                    }
                }
            }
        }
        if let Some((path, buf)) = current.take() {
            write_file(&path, &buf)?;
        }
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), StoreError> {
    // Two targets whose sanitized names collide would share a file; append
    // keeps both sets of records.
    let mut f = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| StoreError::io(path, e))?;
    f.write_all(contents.as_bytes())
        .map_err(|e| StoreError::io(path, e))
}

fn sorted_entries(dir: &Path) -> Result<Vec<fs::DirEntry>, StoreError> {
    let mut entries = fs::read_dir(dir)
        .map_err(|e| StoreError::io(dir, e))?
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| StoreError::io(dir, e))?;
    entries.sort_by_key(|e| e.file_name());
    Ok(entries)
}

fn utf8_name(entry: &fs::DirEntry) -> Result<String, StoreError> {
    entry.file_name().into_string().map_err(|_| StoreError::Layout {
        path: entry.path(),
        message: "name is not UTF-8".to_string(),
    })
}

/// Reads a store written by [`save`].
pub fn load(root_dir: &Path) -> Result<Graph, StoreError> {
    if !root_dir.is_dir() {
        return Err(StoreError::io(
            root_dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "graph directory not found"),
        ));
    }
    let mut g = Graph::new();
    for centry in sorted_entries(root_dir)? {
        let cname = utf8_name(&centry)?;
        let cpath = centry.path();
        if !centry.file_type().map_err(|e| StoreError::io(&cpath, e))?.is_dir() {
            return Err(StoreError::Layout {
                path: cpath,
                message: "expected a concept directory".to_string(),
            });
        }
        let from = ConceptToken::new(desanitize_name(&cname)).map_err(|e| StoreError::Layout {
            path: cpath.clone(),
            message: e.to_string(),
        })?;
        g.add_node(from.clone());

        for tentry in sorted_entries(&cpath)? {
            let tpath = tentry.path();
            let tname = utf8_name(&tentry)?;
            let stype = tname
                .parse::<i64>()
                .ok()
                .and_then(|v| SignedAssocType::new(v).ok())
                .filter(|t| t.to_string() == tname)
                .ok_or_else(|| StoreError::Layout {
                    path: tpath.clone(),
                    message: format!("{tname:?} is not an association type directory"),
                })?;

            for nentry in sorted_entries(&tpath)? {
                let npath = nentry.path();
                let to = ConceptToken::new(desanitize_name(&utf8_name(&nentry)?)).map_err(|e| {
                    StoreError::Layout {
                        path: npath.clone(),
                        message: e.to_string(),
                    }
                })?;
                let text = fs::read_to_string(&npath).map_err(|e| StoreError::io(&npath, e))?;
                if !text.is_empty() && !text.ends_with('\n') {
                    return Err(StoreError::Parse {
                        path: npath,
                        line: text.lines().count(),
                        message: "missing final newline".to_string(),
                    });
                }
                for (i, line) in text.lines().enumerate() {
                    let parse_err = |message: String| StoreError::Parse {
                        path: npath.clone(),
                        line: i + 1,
                        message,
                    };
                    let record = EdgeRecord::parse(line).map_err(parse_err)?;
                    let edge = record
                        .into_edge(from.clone(), stype, to.clone())
                        .map_err(parse_err)?;
                    g.put_half(edge);
                }
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sanitize_examples() {
        assert_eq!(
            sanitize_name("/lib64/ld-linux-x86-64.so.2").unwrap(),
            "!lib64!ld-linux-x86-64.so.2"
        );
        assert_eq!(
            sanitize_name("https://url1/form/element1").unwrap(),
            "https:!!url1!form!element1"
        );
        assert_eq!(sanitize_name("doctor").unwrap(), "doctor");
    }

    #[test]
    fn sanitize_errors() {
        assert_eq!(sanitize_name(""), Err(SanitizeError::Empty));
        assert!(matches!(sanitize_name("a!/b"), Err(SanitizeError::Ambiguous(_))));
        assert!(matches!(sanitize_name("a\0b"), Err(SanitizeError::Nul(_))));
        assert!(matches!(sanitize_name(".."), Err(SanitizeError::Reserved(_))));
    }

    #[test]
    fn record_line_roundtrip() {
        let r = EdgeRecord {
            fwd_name: "depends on".into(),
            bwd_name: "partly determines".into(),
            phrases: vec!["errors and faults".into(), "software".into()],
            negated: true,
            weight: 2.5,
            last_updated: 1_700_000_000,
        };
        let line = r.to_line();
        assert_eq!(
            line,
            "depends on\tpartly determines\terrors and faults|software\t1\t2.5\t1700000000\n"
        );
        assert_eq!(EdgeRecord::parse(line.trim_end_matches('\n')).unwrap(), r);
    }

    #[test]
    fn record_parse_errors() {
        assert!(EdgeRecord::parse("a\tb\t\t0\t1").is_err());
        assert!(EdgeRecord::parse("a\tb\t\t2\t1\t0").is_err());
        assert!(EdgeRecord::parse("a\tb\t\t0\t-1\t0").is_err());
        assert!(EdgeRecord::parse("a\tb\t\t0\tx\t0").is_err());
        assert!(EdgeRecord::parse("a\tb\t\t0\t1\t0").is_ok());
    }
}
