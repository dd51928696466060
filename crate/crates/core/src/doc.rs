//! The JSON document model: bundles of named algebra, form, module,
//! bimodule, Morita-context, skeleton and report documents, with parsing
//! into the typed structures and canonical emission.
//!
//! Scalars travel as strings ("p/q" or "p" over the rationals, a decimal
//! representative over a prime field). Emission canonicalizes by reducing
//! fractions and sorting object keys, so equal bundles are byte-equal.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::cy::CYPresentation;
use crate::error::Error;
use crate::field::{FieldSpec, Scalar};
use crate::frobenius::FrobeniusForm;
use crate::linalg::Matrix;
use crate::modules::LeftModule;
use crate::morita::{Bimodule, MoritaContext};
use crate::report::Report;

pub const FORMAT_VERSION: u32 = 1;

/// Errors raised while reading a bundle; each class is distinct so the
/// driver can report precise causes.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("unknown format version {0}")]
    UnknownVersion(u32),
    #[error("duplicate document name '{0}'")]
    DuplicateName(String),
    #[error(
        "document '{reference}' referenced by '{referrer}' does not exist or has the wrong kind"
    )]
    DanglingReference { referrer: String, reference: String },
    #[error("bad scalar in '{name}': {detail}")]
    BadScalar { name: String, detail: String },
    #[error("bad field descriptor '{0}'")]
    BadField(String),
    #[error("inconsistent dimensions in '{name}': {detail}")]
    BadDimensions { name: String, detail: String },
}

fn field_of(text: &str) -> Result<FieldSpec, ParseError> {
    if text == "0" {
        return Ok(FieldSpec::Rational);
    }
    let p: u64 = text
        .parse()
        .map_err(|_| ParseError::BadField(text.into()))?;
    FieldSpec::prime(p).map_err(|_| ParseError::BadField(text.into()))
}

fn scalars_of(name: &str, field: FieldSpec, texts: &[String]) -> Result<Vec<Scalar>, ParseError> {
    texts
        .iter()
        .map(|t| {
            Scalar::parse(t, field).map_err(|e| ParseError::BadScalar {
                name: name.into(),
                detail: format!("'{t}': {e}"),
            })
        })
        .collect()
}

fn matrix_of(name: &str, field: FieldSpec, rows: &[Vec<String>]) -> Result<Matrix, ParseError> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    let mut entries = Vec::with_capacity(r * c);
    for row in rows {
        if row.len() != c {
            return Err(ParseError::BadDimensions {
                name: name.into(),
                detail: "ragged matrix".into(),
            });
        }
        entries.extend(scalars_of(name, field, row)?);
    }
    Matrix::from_entries(field, r, c, entries).map_err(|e| ParseError::BadDimensions {
        name: name.into(),
        detail: e.to_string(),
    })
}

fn matrix_to_rows(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.at(i, j).to_string()).collect())
        .collect()
}

fn scalars_to_strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// One document of a bundle, as serialized.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DocModel {
    Algebra {
        name: String,
        field: String,
        dim: usize,
        structure_constants: Vec<Vec<Vec<String>>>,
        unit: Vec<String>,
    },
    Form {
        name: String,
        algebra: String,
        lambda: Vec<String>,
    },
    Module {
        name: String,
        algebra: String,
        dim: usize,
        actions: Vec<Vec<Vec<String>>>,
    },
    Bimodule {
        name: String,
        left_algebra: String,
        right_algebra: String,
        dim: usize,
        left_actions: Vec<Vec<Vec<String>>>,
        right_actions: Vec<Vec<Vec<String>>>,
    },
    MoritaContext {
        name: String,
        algebra_a: String,
        algebra_b: String,
        m: String,
        n: String,
        epsilon: Vec<Vec<String>>,
        eta: Vec<Vec<String>>,
    },
    CyPresentation {
        name: String,
        field: String,
        dims: Vec<usize>,
        weights: Vec<String>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        source: Option<String>,
    },
    Report(Report),
}

impl DocModel {
    pub fn name(&self) -> &str {
        match self {
            DocModel::Algebra { name, .. }
            | DocModel::Form { name, .. }
            | DocModel::Module { name, .. }
            | DocModel::Bimodule { name, .. }
            | DocModel::MoritaContext { name, .. }
            | DocModel::CyPresentation { name, .. } => name,
            DocModel::Report(r) => &r.command,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleModel {
    pub format_version: u32,
    pub documents: Vec<DocModel>,
}

/// A form together with the name of the algebra it lives on.
#[derive(Debug, Clone)]
pub struct NamedForm {
    pub algebra: String,
    pub form: FrobeniusForm,
}

/// A module together with the name of its algebra.
#[derive(Debug, Clone)]
pub struct NamedModule {
    pub algebra: String,
    pub module: LeftModule,
}

/// The typed contents of a parsed bundle.
#[derive(Debug, Default)]
pub struct Bundle {
    pub algebras: BTreeMap<String, Arc<Algebra>>,
    pub forms: BTreeMap<String, NamedForm>,
    pub modules: BTreeMap<String, NamedModule>,
    pub bimodules: BTreeMap<String, Bimodule>,
    pub contexts: BTreeMap<String, MoritaContext>,
    pub presentations: BTreeMap<String, CYPresentation>,
    pub reports: Vec<Report>,
}

pub fn parse(text: &str) -> Result<Bundle, ParseError> {
    let model: BundleModel =
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    if model.format_version != FORMAT_VERSION {
        return Err(ParseError::UnknownVersion(model.format_version));
    }
    let mut bundle = Bundle::default();
    let mut names: Vec<String> = Vec::new();
    let mut register = |name: &str| -> Result<(), ParseError> {
        if names.iter().any(|n| n == name) {
            return Err(ParseError::DuplicateName(name.into()));
        }
        names.push(name.into());
        Ok(())
    };
    // two passes: algebras first, then everything that references them
    for doc in &model.documents {
        if let DocModel::Algebra {
            name,
            field,
            dim,
            structure_constants,
            unit,
        } = doc
        {
            register(name)?;
            let f = field_of(field)?;
            let mut constants = Vec::with_capacity(dim * dim * dim);
            if structure_constants.len() != *dim
                || structure_constants.iter().any(|p| p.len() != *dim)
            {
                return Err(ParseError::BadDimensions {
                    name: name.clone(),
                    detail: "structure constant array shape".into(),
                });
            }
            for plane in structure_constants {
                for line in plane {
                    if line.len() != *dim {
                        return Err(ParseError::BadDimensions {
                            name: name.clone(),
                            detail: "structure constant array shape".into(),
                        });
                    }
                    constants.extend(scalars_of(name, f, line)?);
                }
            }
            let unit = scalars_of(name, f, unit)?;
            let algebra =
                Algebra::new(f, *dim, constants, unit).map_err(|e| ParseError::BadDimensions {
                    name: name.clone(),
                    detail: e.to_string(),
                })?;
            bundle.algebras.insert(name.clone(), Arc::new(algebra));
        }
    }
    let lookup_algebra = |bundle: &Bundle, referrer: &str, name: &str| {
        bundle
            .algebras
            .get(name)
            .cloned()
            .ok_or_else(|| ParseError::DanglingReference {
                referrer: referrer.into(),
                reference: name.into(),
            })
    };
    for doc in &model.documents {
        match doc {
            DocModel::Algebra { .. } => {}
            DocModel::Form {
                name,
                algebra,
                lambda,
            } => {
                register(name)?;
                let a = lookup_algebra(&bundle, name, algebra)?;
                let coords = scalars_of(name, a.field(), lambda)?;
                let form =
                    FrobeniusForm::new(&a, coords).map_err(|e| ParseError::BadDimensions {
                        name: name.clone(),
                        detail: e.to_string(),
                    })?;
                bundle.forms.insert(
                    name.clone(),
                    NamedForm {
                        algebra: algebra.clone(),
                        form,
                    },
                );
            }
            DocModel::Module {
                name,
                algebra,
                dim,
                actions,
            } => {
                register(name)?;
                let a = lookup_algebra(&bundle, name, algebra)?;
                let mats = actions
                    .iter()
                    .map(|rows| matrix_of(name, a.field(), rows))
                    .collect::<Result<Vec<_>, _>>()?;
                if mats.iter().any(|m| m.rows() != *dim) {
                    return Err(ParseError::BadDimensions {
                        name: name.clone(),
                        detail: "action matrix size differs from declared dim".into(),
                    });
                }
                let module = LeftModule::new(Arc::clone(&a), mats).map_err(|e| {
                    ParseError::BadDimensions {
                        name: name.clone(),
                        detail: e.to_string(),
                    }
                })?;
                bundle.modules.insert(
                    name.clone(),
                    NamedModule {
                        algebra: algebra.clone(),
                        module,
                    },
                );
            }
            DocModel::Bimodule {
                name,
                left_algebra,
                right_algebra,
                dim,
                left_actions,
                right_actions,
            } => {
                register(name)?;
                let b = lookup_algebra(&bundle, name, left_algebra)?;
                let a = lookup_algebra(&bundle, name, right_algebra)?;
                let left = left_actions
                    .iter()
                    .map(|rows| matrix_of(name, b.field(), rows))
                    .collect::<Result<Vec<_>, _>>()?;
                let right = right_actions
                    .iter()
                    .map(|rows| matrix_of(name, a.field(), rows))
                    .collect::<Result<Vec<_>, _>>()?;
                if left.iter().chain(right.iter()).any(|m| m.rows() != *dim) {
                    return Err(ParseError::BadDimensions {
                        name: name.clone(),
                        detail: "action matrix size differs from declared dim".into(),
                    });
                }
                let bm =
                    Bimodule::new(&b, &a, left, right).map_err(|e| ParseError::BadDimensions {
                        name: name.clone(),
                        detail: e.to_string(),
                    })?;
                bundle.bimodules.insert(name.clone(), bm);
            }
            DocModel::MoritaContext {
                name,
                algebra_a,
                algebra_b,
                m,
                n,
                epsilon,
                eta,
            } => {
                register(name)?;
                let a = lookup_algebra(&bundle, name, algebra_a)?;
                let b = lookup_algebra(&bundle, name, algebra_b)?;
                let m_bim = bundle.bimodules.get(m).cloned().ok_or_else(|| {
                    ParseError::DanglingReference {
                        referrer: name.clone(),
                        reference: m.clone(),
                    }
                })?;
                let n_bim = bundle.bimodules.get(n).cloned().ok_or_else(|| {
                    ParseError::DanglingReference {
                        referrer: name.clone(),
                        reference: n.clone(),
                    }
                })?;
                let eps = matrix_of(name, a.field(), epsilon)?;
                let eta = matrix_of(name, a.field(), eta)?;
                let ctx = MoritaContext::new(&a, &b, m_bim, n_bim, eps, eta).map_err(|e| {
                    ParseError::BadDimensions {
                        name: name.clone(),
                        detail: e.to_string(),
                    }
                })?;
                bundle.contexts.insert(name.clone(), ctx);
            }
            DocModel::CyPresentation {
                name,
                field,
                dims,
                weights,
                source,
            } => {
                register(name)?;
                let f = field_of(field)?;
                let w = scalars_of(name, f, weights)?;
                let cy = CYPresentation::new(f, dims.clone(), w, source.clone()).map_err(|e| {
                    ParseError::BadDimensions {
                        name: name.clone(),
                        detail: e.to_string(),
                    }
                })?;
                bundle.presentations.insert(name.clone(), cy);
            }
            DocModel::Report(r) => {
                if r.overall != r.checks.iter().all(|c| c.verdict) {
                    return Err(ParseError::BadDimensions {
                        name: r.command.clone(),
                        detail: "overall verdict is not the conjunction of the checks".into(),
                    });
                }
                bundle.reports.push(r.clone());
            }
        }
    }
    Ok(bundle)
}

/// Canonical serialization: sorted keys, reduced scalars, two-space indent.
pub fn emit(documents: &[DocModel]) -> String {
    let model = BundleModel {
        format_version: FORMAT_VERSION,
        documents: documents.to_vec(),
    };
    let value = serde_json::to_value(&model).expect("bundle serializes");
    let mut out = serde_json::to_string_pretty(&value).expect("value prints");
    out.push('\n');
    out
}

pub fn algebra_doc(name: &str, a: &Algebra) -> DocModel {
    let d = a.dim();
    let mut constants = Vec::with_capacity(d);
    for i in 0..d {
        let mut plane = Vec::with_capacity(d);
        for j in 0..d {
            plane.push(
                (0..d)
                    .map(|k| a.constant(i, j, k).to_string())
                    .collect::<Vec<_>>(),
            );
        }
        constants.push(plane);
    }
    DocModel::Algebra {
        name: name.into(),
        field: a.field().to_string(),
        dim: d,
        structure_constants: constants,
        unit: scalars_to_strings(a.unit()),
    }
}

pub fn form_doc(name: &str, algebra: &str, form: &FrobeniusForm) -> DocModel {
    DocModel::Form {
        name: name.into(),
        algebra: algebra.into(),
        lambda: scalars_to_strings(&form.lambda),
    }
}

pub fn module_doc(name: &str, algebra: &str, module: &LeftModule) -> DocModel {
    DocModel::Module {
        name: name.into(),
        algebra: algebra.into(),
        dim: module.dim(),
        actions: (0..module.algebra().dim())
            .map(|i| matrix_to_rows(module.action(i)))
            .collect(),
    }
}

pub fn bimodule_doc(
    name: &str,
    left_algebra: &str,
    right_algebra: &str,
    bm: &Bimodule,
) -> DocModel {
    DocModel::Bimodule {
        name: name.into(),
        left_algebra: left_algebra.into(),
        right_algebra: right_algebra.into(),
        dim: bm.dim(),
        left_actions: (0..bm.left_algebra().dim())
            .map(|i| matrix_to_rows(bm.left_module().action(i)))
            .collect(),
        right_actions: (0..bm.right_algebra().dim())
            .map(|k| matrix_to_rows(bm.right_module().action(k)))
            .collect(),
    }
}

pub fn context_doc(
    name: &str,
    algebra_a: &str,
    algebra_b: &str,
    m: &str,
    n: &str,
    ctx: &MoritaContext,
) -> DocModel {
    DocModel::MoritaContext {
        name: name.into(),
        algebra_a: algebra_a.into(),
        algebra_b: algebra_b.into(),
        m: m.into(),
        n: n.into(),
        epsilon: matrix_to_rows(&ctx.eps),
        eta: matrix_to_rows(&ctx.eta),
    }
}

pub fn presentation_doc(name: &str, cy: &CYPresentation) -> DocModel {
    DocModel::CyPresentation {
        name: name.into(),
        field: cy.field.to_string(),
        dims: cy.dims.clone(),
        weights: scalars_to_strings(&cy.weights),
        source: cy.source.clone(),
    }
}

impl From<Error> for ParseError {
    fn from(e: Error) -> ParseError {
        ParseError::BadDimensions {
            name: "<bundle>".into(),
            detail: e.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix_algebra;

    fn qi(n: i64) -> Scalar {
        Scalar::ratio(n, 1)
    }

    #[test]
    fn round_trip_is_canonical() {
        let a = matrix_algebra(FieldSpec::Rational, 2);
        let form = FrobeniusForm {
            lambda: vec![qi(1), qi(0), qi(0), qi(1)],
        };
        let docs = vec![algebra_doc("A", &a), form_doc("tr", "A", &form)];
        let text = emit(&docs);
        let bundle = parse(&text).unwrap();
        assert_eq!(bundle.algebras["A"].as_ref(), &a);
        assert_eq!(bundle.forms["tr"].form, form);
        // canonical: emitting the re-read content is byte-identical
        let docs2 = vec![
            algebra_doc("A", bundle.algebras["A"].as_ref()),
            form_doc("tr", "A", &bundle.forms["tr"].form),
        ];
        assert_eq!(text, emit(&docs2));
    }

    #[test]
    fn fraction_syntax_parses() {
        let s = Scalar::parse("1/2", FieldSpec::Rational).unwrap();
        assert_eq!(s, Scalar::ratio(1, 2));
    }

    #[test]
    fn dangling_reference_is_reported() {
        let text = r#"{
            "format_version": 1,
            "documents": [
                {"kind": "form", "name": "f", "algebra": "missing", "lambda": ["1"]}
            ]
        }"#;
        match parse(text) {
            Err(ParseError::DanglingReference { reference, .. }) => {
                assert_eq!(reference, "missing")
            }
            other => panic!("expected dangling reference, got {other:?}"),
        }
    }

    #[test]
    fn version_and_json_errors_are_distinct() {
        assert!(matches!(parse("nonsense"), Err(ParseError::Json(_))));
        let wrong = r#"{"format_version": 9, "documents": []}"#;
        assert!(matches!(parse(wrong), Err(ParseError::UnknownVersion(9))));
        let dup = r#"{
            "format_version": 1,
            "documents": [
                {"kind": "algebra", "name": "A", "field": "0", "dim": 1,
                 "structure_constants": [[["1"]]], "unit": ["1"]},
                {"kind": "algebra", "name": "A", "field": "0", "dim": 1,
                 "structure_constants": [[["1"]]], "unit": ["1"]}
            ]
        }"#;
        assert!(matches!(parse(dup), Err(ParseError::DuplicateName(_))));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let text = r#"{
            "format_version": 1,
            "documents": [
                {"kind": "algebra", "name": "A", "field": "0", "dim": 2,
                 "structure_constants": [[["1"]]], "unit": ["1", "0"]}
            ]
        }"#;
        assert!(matches!(parse(text), Err(ParseError::BadDimensions { .. })));
    }

    #[test]
    fn bad_residue_is_reported() {
        let text = r#"{
            "format_version": 1,
            "documents": [
                {"kind": "algebra", "name": "A", "field": "3", "dim": 1,
                 "structure_constants": [[["5"]]], "unit": ["1"]}
            ]
        }"#;
        assert!(matches!(parse(text), Err(ParseError::BadScalar { .. })));
    }
}
