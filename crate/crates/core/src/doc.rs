//! Definition documents: algebras and modules as TOML or JSON files.
//!
//! The on-disk shape mirrors the in-memory one: a basis list with
//! family/index/parity/degree and bracket entries as polynomial strings.
//! Module documents embed their algebra and either a family shortcut or a
//! raw action table. All rationals travel as strings, so the files are
//! exact and deterministic.

use crate::catalog::{finite_block, kb_quotient, n2_algebra, CatalogError};
use crate::conformal::{Algebra, AlgebraKind, LinComb, Parity, SymbolInfo};
use crate::module::{build_family, Family, Generator, Module, ModuleError};
use crate::poly::Poly;
use crate::scalar::{FieldContext, GaussRat, Scalar, ScalarError};
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("toml parse: {0}")]
    TomlDe(#[from] toml::de::Error),
    #[error("toml write: {0}")]
    TomlSer(#[from] toml::ser::Error),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("algebra error: {0}")]
    Algebra(#[from] crate::conformal::AlgebraError),
    #[error("unsupported schema version {0}")]
    SchemaVersion(u32),
    #[error("{0}")]
    Invalid(String),
}

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AlgebraDoc {
    pub schema_version: u32,
    pub label: String,
    /// `kb-quotient`, `n2` or `custom`.
    pub kind: String,
    pub p: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u32>,
    pub basis: Vec<BasisDoc>,
    pub brackets: Vec<BracketDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisDoc {
    pub family: String,
    pub index: u32,
    pub parity: Parity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BracketDoc {
    pub a: String,
    pub b: String,
    pub value: Vec<TermDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermDoc {
    pub symbol: String,
    pub coeff: String,
}

pub fn algebra_to_doc(alg: &Algebra) -> AlgebraDoc {
    let (kind, p, cutoff) = match &alg.kind {
        AlgebraKind::BlockQuotient { p, cutoff } => {
            ("kb-quotient".to_string(), p.to_string(), Some(*cutoff))
        }
        AlgebraKind::N2 { p } => ("n2".to_string(), p.to_string(), None),
        AlgebraKind::Custom => ("custom".to_string(), alg.ctx.p().to_string(), None),
    };
    let basis = alg
        .symbols()
        .iter()
        .map(|s| BasisDoc {
            family: s.family.clone(),
            index: s.index,
            parity: s.parity,
            degree: s.degree,
        })
        .collect();
    let mut brackets = Vec::new();
    for a in 0..alg.dim() {
        for b in 0..alg.dim() {
            let entry = alg.table(a, b);
            if entry.is_zero() {
                continue;
            }
            brackets.push(BracketDoc {
                a: alg.symbol_name(a),
                b: alg.symbol_name(b),
                value: entry
                    .terms()
                    .map(|(id, p)| TermDoc {
                        symbol: alg.symbol_name(*id),
                        coeff: p.to_string(),
                    })
                    .collect(),
            });
        }
    }
    AlgebraDoc {
        schema_version: SCHEMA_VERSION,
        label: alg.label.clone(),
        kind,
        p,
        cutoff,
        basis,
        brackets,
    }
}

pub fn algebra_from_doc(doc: &AlgebraDoc) -> Result<Algebra, DocError> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(DocError::SchemaVersion(doc.schema_version));
    }
    let p = GaussRat::parse(&doc.p)?;
    let kind = match doc.kind.as_str() {
        "kb-quotient" => AlgebraKind::BlockQuotient {
            p: p.clone(),
            cutoff: doc
                .cutoff
                .ok_or_else(|| DocError::Invalid("kb-quotient needs a cutoff".into()))?,
        },
        "n2" => AlgebraKind::N2 { p: p.clone() },
        "custom" => AlgebraKind::Custom,
        other => return Err(DocError::Invalid(format!("unknown algebra kind `{other}`"))),
    };
    let ctx = FieldContext::new(p)?;
    let symbols: Vec<SymbolInfo> = doc
        .basis
        .iter()
        .map(|b| SymbolInfo {
            family: b.family.clone(),
            index: b.index,
            parity: b.parity,
            degree: b.degree,
        })
        .collect();
    let name_to_pos = |name: &str| -> Result<usize, DocError> {
        symbols
            .iter()
            .position(|s| s.name() == name)
            .ok_or_else(|| DocError::Invalid(format!("unknown symbol `{name}`")))
    };
    let mut entries = Vec::new();
    for b in &doc.brackets {
        let mut lc = LinComb::zero();
        for t in &b.value {
            lc.add_term(name_to_pos(&t.symbol)?, Poly::parse(&t.coeff, &ctx)?);
        }
        entries.push((b.a.clone(), b.b.clone(), lc));
    }
    Ok(Algebra::new(
        ctx,
        doc.label.clone(),
        kind,
        symbols,
        entries,
    )?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ModuleDoc {
    pub schema_version: u32,
    pub label: String,
    pub algebra: AlgebraDoc,
    /// Family shortcut; when present the raw table below is ignored.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub actions: Vec<ActionDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub name: String,
    pub parity: Parity,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ActionDoc {
    pub symbol: String,
    pub generator: String,
    pub value: Vec<GenTermDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenTermDoc {
    pub generator: String,
    pub coeff: String,
}

pub fn family_from_doc(doc: &FamilyDoc, ctx: &FieldContext) -> Result<Family, DocError> {
    let scalar = |field: &Option<String>, name: &str| -> Result<Scalar, DocError> {
        let text = field
            .as_ref()
            .ok_or_else(|| DocError::Invalid(format!("family parameter `{name}` missing")))?;
        Ok(Scalar::parse(text, ctx)?)
    };
    match doc.name.to_ascii_lowercase().as_str() {
        "v1" => Ok(Family::V1 {
            delta: scalar(&doc.delta, "delta")?,
            alpha: scalar(&doc.alpha, "alpha")?,
        }),
        "v2" => Ok(Family::V2 {
            delta: scalar(&doc.delta, "delta")?,
            alpha: scalar(&doc.alpha, "alpha")?,
        }),
        "v22" => {
            let delta = scalar(&doc.delta, "delta")?;
            let lambda = scalar(&doc.lambda, "lambda")?;
            let alpha = scalar(&doc.alpha, "alpha")?;
            match &doc.beta {
                None => Ok(Family::V22 {
                    delta,
                    lambda,
                    alpha,
                }),
                Some(b) => Ok(Family::V22Ext {
                    delta,
                    lambda,
                    alpha,
                    beta: Scalar::parse(b, ctx)?,
                }),
            }
        }
        other => Err(DocError::Invalid(format!("unknown family `{other}`"))),
    }
}

pub fn family_to_doc(family: &Family) -> FamilyDoc {
    match family {
        Family::V1 { delta, alpha } => FamilyDoc {
            name: "v1".into(),
            delta: Some(delta.to_string()),
            lambda: None,
            alpha: Some(alpha.to_string()),
            beta: None,
        },
        Family::V2 { delta, alpha } => FamilyDoc {
            name: "v2".into(),
            delta: Some(delta.to_string()),
            lambda: None,
            alpha: Some(alpha.to_string()),
            beta: None,
        },
        Family::V22 {
            delta,
            lambda,
            alpha,
        } => FamilyDoc {
            name: "v22".into(),
            delta: Some(delta.to_string()),
            lambda: Some(lambda.to_string()),
            alpha: Some(alpha.to_string()),
            beta: None,
        },
        Family::V22Ext {
            delta,
            lambda,
            alpha,
            beta,
        } => FamilyDoc {
            name: "v22".into(),
            delta: Some(delta.to_string()),
            lambda: Some(lambda.to_string()),
            alpha: Some(alpha.to_string()),
            beta: Some(beta.to_string()),
        },
    }
}

pub fn module_to_doc(m: &Module) -> ModuleDoc {
    let algebra = algebra_to_doc(&m.algebra);
    let family = m.family.as_ref().map(family_to_doc);
    let generators = m
        .generators()
        .iter()
        .map(|g| GeneratorDoc {
            name: g.name.clone(),
            parity: g.parity,
        })
        .collect();
    let mut actions = Vec::new();
    for s in 0..m.algebra.dim() {
        for g in 0..m.rank() {
            let value = m.action(s, g);
            if value.is_zero() {
                continue;
            }
            actions.push(ActionDoc {
                symbol: m.algebra.symbol_name(s),
                generator: m.generators()[g].name.clone(),
                value: value
                    .terms()
                    .map(|(w, p)| GenTermDoc {
                        generator: m.generators()[*w].name.clone(),
                        coeff: p.to_string(),
                    })
                    .collect(),
            });
        }
    }
    ModuleDoc {
        schema_version: SCHEMA_VERSION,
        label: m.label.clone(),
        algebra,
        family,
        generators,
        actions,
    }
}

/// Rebuilds a module from a document: the family shortcut goes through the
/// gated builder, the raw table through direct validation.
pub fn module_from_doc(doc: &ModuleDoc) -> Result<Module, DocError> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(DocError::SchemaVersion(doc.schema_version));
    }
    let algebra = Arc::new(algebra_from_doc(&doc.algebra)?);
    if let Some(f) = &doc.family {
        let family = family_from_doc(f, &algebra.ctx)?;
        return Ok(build_family(&family, &algebra)?);
    }
    let generators: Vec<Generator> = doc
        .generators
        .iter()
        .map(|g| Generator {
            name: g.name.clone(),
            parity: g.parity,
        })
        .collect();
    if generators.is_empty() {
        return Err(DocError::Invalid(
            "module document needs a family or a generator list".into(),
        ));
    }
    let gen_pos = |name: &str| -> Result<usize, DocError> {
        generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| DocError::Invalid(format!("unknown generator `{name}`")))
    };
    let mut entries = Vec::new();
    for a in &doc.actions {
        let mut lc = LinComb::zero();
        for t in &a.value {
            lc.add_term(gen_pos(&t.generator)?, Poly::parse(&t.coeff, &algebra.ctx)?);
        }
        entries.push((a.symbol.clone(), a.generator.clone(), lc));
    }
    Ok(Module::new(
        algebra,
        doc.label.clone(),
        None,
        generators,
        entries,
    )?)
}

/// Builds a catalog algebra by family tag, as the CLI exposes it.
pub fn build_catalog_algebra(
    family: &str,
    p: &GaussRat,
    cutoff: u32,
) -> Result<Algebra, DocError> {
    match family {
        "kb" => Ok(kb_quotient(p, cutoff)?),
        "kn" => {
            let n = match (p.im.is_zero(), p.re.denom().is_one()) {
                (true, true) => {
                    let n = -p.re.numer().clone();
                    u32::try_from(n).map_err(|_| {
                        DocError::Invalid("kn requires p = -n with n >= 1".into())
                    })?
                }
                _ => return Err(DocError::Invalid("kn requires p = -n with n >= 1".into())),
            };
            Ok(finite_block(n)?)
        }
        "k2" => Ok(n2_algebra(p)?),
        other => Err(DocError::Invalid(format!("unknown algebra family `{other}`"))),
    }
}

fn is_toml(path: &Path) -> bool {
    path.extension().map(|e| e == "toml").unwrap_or(false)
}

pub fn save_algebra(alg: &Algebra, path: &Path) -> Result<(), DocError> {
    let doc = algebra_to_doc(alg);
    let text = if is_toml(path) {
        toml::to_string_pretty(&doc)?
    } else {
        serde_json::to_string_pretty(&doc)? + "\n"
    };
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_algebra(path: &Path) -> Result<Algebra, DocError> {
    let text = std::fs::read_to_string(path)?;
    let doc: AlgebraDoc = if is_toml(path) {
        toml::from_str(&text)?
    } else {
        serde_json::from_str(&text)?
    };
    algebra_from_doc(&doc)
}

pub fn save_module(m: &Module, path: &Path) -> Result<(), DocError> {
    let doc = module_to_doc(m);
    let text = if is_toml(path) {
        toml::to_string_pretty(&doc)?
    } else {
        serde_json::to_string_pretty(&doc)? + "\n"
    };
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_module(path: &Path) -> Result<Module, DocError> {
    let text = std::fs::read_to_string(path)?;
    let doc: ModuleDoc = if is_toml(path) {
        toml::from_str(&text)?
    } else {
        serde_json::from_str(&text)?
    };
    module_from_doc(&doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::param;

    #[test]
    fn algebra_doc_round_trip() {
        let alg = kb_quotient(&GaussRat::parse("1/2").unwrap(), 2).unwrap();
        let doc = algebra_to_doc(&alg);
        let back = algebra_from_doc(&doc).unwrap();
        assert_eq!(back.dim(), alg.dim());
        for a in 0..alg.dim() {
            for b in 0..alg.dim() {
                assert_eq!(back.table(a, b), alg.table(a, b));
            }
        }
        // Through TOML and JSON text as well.
        let text = toml::to_string_pretty(&doc).unwrap();
        let parsed: AlgebraDoc = toml::from_str(&text).unwrap();
        assert_eq!(
            algebra_from_doc(&parsed).unwrap().table(0, 0),
            alg.table(0, 0)
        );
        let text = serde_json::to_string(&doc).unwrap();
        let parsed: AlgebraDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(
            algebra_from_doc(&parsed).unwrap().table(0, 0),
            alg.table(0, 0)
        );
    }

    #[test]
    fn module_doc_round_trip_family_and_raw() {
        let alg = Arc::new(kb_quotient(&GaussRat::from_int(2), 1).unwrap());
        let m = build_family(
            &Family::V22 {
                delta: param(1, 2),
                lambda: param(1, 1),
                alpha: param(-1, 1),
            },
            &alg,
        )
        .unwrap();
        let doc = module_to_doc(&m);
        let back = module_from_doc(&doc).unwrap();
        assert!(back.same_table(&m));
        // Raw path: drop the family shortcut.
        let mut raw = doc.clone();
        raw.family = None;
        let back = module_from_doc(&raw).unwrap();
        assert!(back.same_table(&m));
    }

    #[test]
    fn catalog_builder_tags() {
        assert!(build_catalog_algebra("kb", &GaussRat::from_int(3), 1).is_ok());
        assert!(build_catalog_algebra("k2", &GaussRat::from_int(3), 0).is_ok());
        let k = build_catalog_algebra("kn", &GaussRat::from_int(-2), 0).unwrap();
        assert_eq!(k.dim(), 12);
        assert!(build_catalog_algebra("kn", &GaussRat::from_int(2), 0).is_err());
    }
}
