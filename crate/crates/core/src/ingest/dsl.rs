//! The declarative knowledge language:
//!
//! ```text
//! // comments run to the end of the line
//! ContextCluster("patient doctor registration");
//! RoleCluster("GP doctor","doctor","general practitioner","patient health service");
//! AliasDef(a_step1, 2, "uses step 1 and may originate from", "is step 1 for");
//! Gr("doctor",a_promises,"doctor availability","patient doctor registration");
//! Gr("tidal",NOT a_caused_by,"the moon","tidal as a company");
//! ```

use std::fmt;

use crate::alias::AliasRegistry;
use crate::error::IngestError;
use crate::ingest::Action;
use crate::types::{ConceptToken, ContextSet, KnowledgeTuple, SignedAssocType};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatementKind {
    Gr,
    ContextCluster,
    RoleCluster,
    AliasDef,
}

impl StatementKind {
    fn from_ident(s: &str) -> Option<Self> {
        match s {
            "Gr" => Some(StatementKind::Gr),
            "ContextCluster" => Some(StatementKind::ContextCluster),
            "RoleCluster" => Some(StatementKind::RoleCluster),
            "AliasDef" => Some(StatementKind::AliasDef),
            _ => None,
        }
    }

    pub fn arity(self) -> usize {
        match self {
            StatementKind::Gr | StatementKind::RoleCluster | StatementKind::AliasDef => 4,
            StatementKind::ContextCluster => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StatementKind::Gr => "Gr",
            StatementKind::ContextCluster => "ContextCluster",
            StatementKind::RoleCluster => "RoleCluster",
            StatementKind::AliasDef => "AliasDef",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DslArg {
    Text(String),
    Alias { name: String, negated: bool },
    Int(i64),
}

impl fmt::Display for DslArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DslArg::Text(s) => {
                f.write_str("\"")?;
                for ch in s.chars() {
                    if ch == '"' || ch == '\\' {
                        f.write_str("\\")?;
                    }
                    write!(f, "{ch}")?;
                }
                f.write_str("\"")
            }
            DslArg::Alias { name, negated: true } => write!(f, "NOT {name}"),
            DslArg::Alias { name, negated: false } => f.write_str(name),
            DslArg::Int(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceLocation {
    pub file: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DslStatement {
    pub kind: StatementKind,
    pub args: Vec<DslArg>,
    pub location: SourceLocation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Str(String),
    Int(i64),
    Punct(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Str(s) => write!(f, "{:?}", s),
            Tok::Int(v) => write!(f, "`{v}`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    file: &'a str,
}

impl<'a> Lexer<'a> {
    fn err(&self, line: usize, message: impl Into<String>) -> IngestError {
        IngestError::Syntax {
            file: self.file.to_string(),
            line,
            message: message.into(),
        }
    }

    fn next_tok(&mut self) -> Result<Option<(Tok, usize)>, IngestError> {
        loop {
            let Some(&ch) = self.chars.peek() else {
                return Ok(None);
            };
            if ch == '\n' {
                self.line += 1;
                self.chars.next();
            } else if ch.is_whitespace() {
                self.chars.next();
            } else if ch == '/' {
                self.chars.next();
                if self.chars.peek() == Some(&'/') {
                    while let Some(&c) = self.chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.chars.next();
                    }
                } else {
                    return Err(self.err(self.line, "unexpected `/`"));
                }
            } else {
                break;
            }
        }
        let line = self.line;
        let ch = self.chars.next().expect("peeked");
        let tok = match ch {
            '(' | ')' | ',' | ';' => Tok::Punct(ch),
            '"' => {
                let mut s = String::new();
                loop {
                    match self.chars.next() {
                        None => return Err(self.err(line, "unterminated string")),
                        Some('"') => break,
                        Some('\\') => match self.chars.next() {
                            None => return Err(self.err(line, "unterminated string")),
                            Some(c) => {
                                if c == '\n' {
                                    self.line += 1;
                                }
                                s.push(c)
                            }
                        },
                        Some(c) => {
                            if c == '\n' {
                                self.line += 1;
                            }
                            s.push(c)
                        }
                    }
                }
                Tok::Str(s)
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' => {
                let mut s = String::from(c);
                while let Some(&d) = self.chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    self.chars.next();
                }
                let v = s
                    .parse::<i64>()
                    .map_err(|_| self.err(line, format!("bad integer `{s}`")))?;
                Tok::Int(v)
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::from(c);
                while let Some(&d) = self.chars.peek() {
                    if !(d.is_alphanumeric() || d == '_') {
                        break;
                    }
                    s.push(d);
                    self.chars.next();
                }
                Tok::Ident(s)
            }
            other => return Err(self.err(line, format!("unexpected character `{other}`"))),
        };
        Ok(Some((tok, line)))
    }
}

/// Parses a whole DSL document. `file` is only used in error locations.
pub fn parse_dsl(input: &str, file: &str) -> Result<Vec<DslStatement>, IngestError> {
    let mut lx = Lexer {
        chars: input.chars().peekable(),
        line: 1,
        file,
    };
    let mut toks = Vec::new();
    while let Some(t) = lx.next_tok()? {
        toks.push(t);
    }
    let err = |line: usize, message: String| IngestError::Syntax {
        file: file.to_string(),
        line,
        message,
    };

    let mut out = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        let (head, line) = &toks[i];
        let kind = match head {
            Tok::Ident(name) => StatementKind::from_ident(name)
                .ok_or_else(|| err(*line, format!("unknown statement kind {head}")))?,
            other => return Err(err(*line, format!("expected a statement, found {other}"))),
        };
        let line = *line;
        i += 1;
        let expect = |i: usize, want: char| -> Result<(), IngestError> {
            match toks.get(i) {
                Some((Tok::Punct(c), _)) if *c == want => Ok(()),
                Some((t, l)) => Err(err(*l, format!("expected `{want}`, found {t}"))),
                None => Err(err(line, format!("expected `{want}`, found end of input"))),
            }
        };
        expect(i, '(')?;
        i += 1;
        let mut args = Vec::new();
        if !matches!(toks.get(i), Some((Tok::Punct(')'), _))) {
            loop {
                let arg = match toks.get(i) {
                    Some((Tok::Str(s), _)) => DslArg::Text(s.clone()),
                    Some((Tok::Int(v), _)) => DslArg::Int(*v),
                    Some((Tok::Ident(w), l)) if w == "NOT" => {
                        i += 1;
                        match toks.get(i) {
                            Some((Tok::Ident(name), _)) => DslArg::Alias {
                                name: name.clone(),
                                negated: true,
                            },
                            Some((t, l)) => {
                                return Err(err(*l, format!("expected an alias after NOT, found {t}")))
                            }
                            None => return Err(err(*l, "expected an alias after NOT".into())),
                        }
                    }
                    Some((Tok::Ident(name), _)) => DslArg::Alias {
                        name: name.clone(),
                        negated: false,
                    },
                    Some((t, l)) => return Err(err(*l, format!("expected an argument, found {t}"))),
                    None => return Err(err(line, "unterminated statement".into())),
                };
                args.push(arg);
                i += 1;
                match toks.get(i) {
                    Some((Tok::Punct(','), _)) => i += 1,
                    Some((Tok::Punct(')'), _)) => break,
                    Some((t, l)) => return Err(err(*l, format!("expected `,` or `)`, found {t}"))),
                    None => return Err(err(line, "unterminated statement".into())),
                }
            }
        }
        expect(i, ')')?;
        i += 1;
        expect(i, ';')?;
        i += 1;
        if args.len() != kind.arity() {
            return Err(err(
                line,
                format!(
                    "{} takes {} arguments, found {}",
                    kind.name(),
                    kind.arity(),
                    args.len()
                ),
            ));
        }
        out.push(DslStatement {
            kind,
            args,
            location: SourceLocation {
                file: file.to_string(),
                line,
            },
        });
    }
    Ok(out)
}

/// Writes statements back out, one per line.
pub fn render_dsl(stmts: &[DslStatement]) -> String {
    let mut out = String::new();
    for s in stmts {
        let args: Vec<String> = s.args.iter().map(ToString::to_string).collect();
        out.push_str(&format!("{}({});\n", s.kind.name(), args.join(",")));
    }
    out
}

/// Result of lowering statements to graph actions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lowered {
    pub actions: Vec<Action>,
    pub warnings: Vec<String>,
}

/// Lowers statements to tuples and cluster-builder calls, resolving aliases
/// through `registry` (which `AliasDef` statements extend in order).
pub fn dsl_to_actions(
    stmts: &[DslStatement],
    registry: &mut AliasRegistry,
) -> Result<Lowered, IngestError> {
    let mut lowered = Lowered::default();
    let mut context_hubs: Vec<(String, usize)> = Vec::new();
    let mut role_hubs: Vec<(String, usize)> = Vec::new();

    for s in stmts {
        let loc = &s.location;
        let syntax = |message: String| IngestError::Syntax {
            file: loc.file.clone(),
            line: loc.line,
            message,
        };
        let value = |source| IngestError::Value {
            file: loc.file.clone(),
            line: loc.line,
            source,
        };
        let text = |i: usize| -> Result<&str, IngestError> {
            match &s.args[i] {
                DslArg::Text(t) => Ok(t.as_str()),
                other => Err(syntax(format!(
                    "{} argument {} must be a quoted string, found {other}",
                    s.kind.name(),
                    i + 1
                ))),
            }
        };

        match s.kind {
            StatementKind::Gr => {
                let (name, negated_arg) = match &s.args[1] {
                    DslArg::Alias { name, negated } => (name.as_str(), *negated),
                    other => {
                        return Err(syntax(format!("Gr argument 2 must be an alias, found {other}")))
                    }
                };
                let (alias, negated_name) =
                    registry.resolve(name).map_err(|source| IngestError::Alias {
                        file: loc.file.clone(),
                        line: loc.line,
                        source,
                    })?;
                let ctx_text = text(3)?;
                let context = if ctx_text.trim().is_empty() {
                    ContextSet::empty()
                } else {
                    ContextSet::single(ctx_text).map_err(value)?
                };
                let mut tuple = KnowledgeTuple::new(
                    ConceptToken::new(text(0)?).map_err(value)?,
                    alias.stype,
                    &alias.fwd_name,
                    ConceptToken::new(text(2)?).map_err(value)?,
                    &alias.bwd_name,
                    context,
                )
                .map_err(value)?;
                if negated_arg ^ negated_name {
                    tuple = tuple.negate();
                }
                lowered.actions.push(Action::Learn(tuple));
            }
            StatementKind::ContextCluster => {
                let phrase = text(0)?;
                ContextSet::single(phrase).map_err(value)?;
                context_hubs.push((phrase.trim().to_string(), loc.line));
                lowered
                    .actions
                    .push(Action::ContextCluster(phrase.trim().to_string()));
            }
            StatementKind::RoleCluster => {
                let compound = text(0)?.trim().to_string();
                ConceptToken::new(&compound).map_err(value)?;
                role_hubs.push((compound.clone(), loc.line));
                lowered.actions.push(Action::RoleCluster {
                    compound,
                    role: text(1)?.to_string(),
                    qualifier: text(2)?.to_string(),
                    context: text(3)?.to_string(),
                });
            }
            StatementKind::AliasDef => {
                let name = match &s.args[0] {
                    DslArg::Alias {
                        name,
                        negated: false,
                    } => name.clone(),
                    DslArg::Text(t) => t.clone(),
                    other => {
                        return Err(syntax(format!(
                            "AliasDef argument 1 must be an alias name, found {other}"
                        )))
                    }
                };
                let stype = match &s.args[1] {
                    DslArg::Int(v) => SignedAssocType::new(*v).map_err(value)?,
                    other => {
                        return Err(syntax(format!(
                            "AliasDef argument 2 must be a type 1..4, found {other}"
                        )))
                    }
                };
                registry
                    .define(&name, stype, text(2)?, text(3)?)
                    .map_err(value)?;
            }
        }
    }

    for (name, line) in &role_hubs {
        if let Some((_, cline)) = context_hubs.iter().find(|(c, _)| c == name) {
            lowered.warnings.push(format!(
                "{name:?} is both a context cluster (line {cline}) and a role cluster (line {line}); they share one node"
            ));
        }
    }
    Ok(lowered)
}
