//! Named association aliases (`a_depends`, `a_promises`, ...) and the
//! registry that resolves them to a signed type and both directional texts.

use std::collections::BTreeMap;

use crate::error::{AliasError, InvalidValue};
use crate::types::{SignedAssocType, QUALIFIER_LINK, ROLE_LINK};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alias {
    pub stype: SignedAssocType,
    pub fwd_name: String,
    pub bwd_name: String,
}

const BUILTINS: &[(&str, u8, &str, &str)] = &[
    // proximity
    ("a_near", 1, "is close to", "is close to"),
    ("a_approx", 1, "is approximately", "is approximately"),
    ("a_equivalent", 1, "approximates", "is equivalent to"),
    ("a_connected", 1, "is connected to", "is connected to"),
    ("a_adjacent", 1, "is adjacent to", "is adjacent to"),
    ("a_correlated", 1, "is correlated with", "is correlated with"),
    ("a_related", 1, "may be related to", "may be related to"),
    ("a_alias", 1, "also known as", "also known as"),
    // order, causation, dependency
    ("a_depends", 2, "depends on", "partly determines"),
    ("a_enables", 2, "depends on", "enables"),
    ("a_caused_by", 2, "is caused by", "causes"),
    ("a_maybe_caused_by", 2, "may be caused by", "may cause"),
    ("a_follows", 2, "follows", "precedes"),
    ("a_uses", 2, "may use", "may be used by"),
    ("a_originates", 2, "may originate from", "may be the origin of"),
    // containment, membership
    ("a_contains", 3, "contains", "belongs to or is part of"),
    ("a_surrounds", 3, "surrounds", "is inside"),
    ("a_generalizes", 3, "generalizes", "is an aspect of"),
    ("a_generalized_by", 3, "is generalized by", "generalizes"),
    ("a_qualifier", 3, QUALIFIER_LINK.0, QUALIFIER_LINK.1),
    // expression, attributes
    ("a_promises", 4, "promises", "is promised by"),
    ("a_has_value", 4, "has value", "is the value of"),
    ("a_has_name", 4, "has name", "is the name of"),
    ("a_characterizes", 4, "characterizes", "is a property of"),
    ("a_expresses", 4, "expresses", "is expressed by"),
    ("a_has_role", 4, ROLE_LINK.0, ROLE_LINK.1),
];

/// Alias table: the builtins plus anything declared while ingesting.
#[derive(Debug, Clone)]
pub struct AliasRegistry {
    entries: BTreeMap<String, Alias>,
}

impl Default for AliasRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl AliasRegistry {
    pub fn builtin() -> Self {
        let entries = BUILTINS
            .iter()
            .map(|&(name, m, fwd, bwd)| {
                (
                    name.to_string(),
                    Alias {
                        stype: SignedAssocType::forward(m),
                        fwd_name: fwd.to_string(),
                        bwd_name: bwd.to_string(),
                    },
                )
            })
            .collect();
        AliasRegistry { entries }
    }

    /// Declares (or redefines) an alias. Only forward types may be declared.
    pub fn define(
        &mut self,
        name: &str,
        stype: SignedAssocType,
        fwd_name: &str,
        bwd_name: &str,
    ) -> Result<(), InvalidValue> {
        if !stype.is_forward() {
            return Err(InvalidValue::InverseTupleType(stype.value()));
        }
        for text in [fwd_name, bwd_name] {
            if text.trim().is_empty() {
                return Err(InvalidValue::EmptyAlias);
            }
            if text.contains(['\t', '\n', '\r']) {
                return Err(InvalidValue::AliasControlChar(text.to_string()));
            }
        }
        self.entries.insert(
            name.to_string(),
            Alias {
                stype,
                fwd_name: fwd_name.trim().to_string(),
                bwd_name: bwd_name.trim().to_string(),
            },
        );
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Result<&Alias, AliasError> {
        self.entries.get(name).ok_or_else(|| AliasError::Unknown {
            name: name.to_string(),
            known: self.names(),
        })
    }

    /// Resolves `name`, treating `a_not_<x>` as the negation of `a_<x>` when
    /// no alias of that exact name exists. Returns the alias and the flag.
    pub fn resolve(&self, name: &str) -> Result<(&Alias, bool), AliasError> {
        if let Some(alias) = self.entries.get(name) {
            return Ok((alias, false));
        }
        if let Some(rest) = name.strip_prefix("a_not_") {
            if let Some(alias) = self.entries.get(&format!("a_{rest}")) {
                return Ok((alias, true));
            }
        }
        self.lookup(name).map(|a| (a, false))
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }
}

/// Looks up a builtin alias by name.
pub fn builtin_alias(name: &str) -> Result<(SignedAssocType, String, String), AliasError> {
    let registry = AliasRegistry::builtin();
    let alias = registry.lookup(name)?;
    Ok((alias.stype, alias.fwd_name.clone(), alias.bwd_name.clone()))
}
