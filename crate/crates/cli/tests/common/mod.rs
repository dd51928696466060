//! Bundle fixtures shared by the CLI and acceptance tests, built through
//! the library so they stay canonical. Each test target uses a subset.
#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Output;
use std::sync::Arc;

use cytrace::algebra::{
    cyclic_group_table, group_algebra, matrix_algebra, product_algebra, Algebra,
};
use cytrace::doc::{self, DocModel};
use cytrace::field::{FieldSpec, Scalar};
use cytrace::frobenius::{weighted_trace_form, FrobeniusForm};
use cytrace::linalg::Matrix;
use cytrace::modules::{simple_modules, LeftModule};
use cytrace::morita::context_from_progenerator;

pub fn qi(n: i64) -> Scalar {
    Scalar::ratio(n, 1)
}

pub fn matrix_trace_form(n: usize) -> FrobeniusForm {
    let mut lambda = vec![qi(0); n * n];
    for i in 0..n {
        lambda[i * n + i] = qi(1);
    }
    FrobeniusForm { lambda }
}

/// Columns K^n over M_n.
pub fn column_module(field: FieldSpec, n: usize) -> LeftModule {
    let a = Arc::new(matrix_algebra(field, n));
    let actions = (0..n * n)
        .map(|idx| {
            Matrix::from_fn(field, n, n, |r, c| {
                if r == idx / n && c == idx % n {
                    field.one()
                } else {
                    field.zero()
                }
            })
        })
        .collect();
    LeftModule::new(a, actions).unwrap()
}

/// M₂(Q) with the matrix trace and the column module.
pub fn m2_bundle() -> String {
    let a = matrix_algebra(FieldSpec::Rational, 2);
    let v = column_module(FieldSpec::Rational, 2);
    let docs = vec![
        doc::algebra_doc("A", &a),
        doc::form_doc("tr", "A", &matrix_trace_form(2)),
        doc::module_doc("V", "A", &v),
    ];
    doc::emit(&docs)
}

/// F₂[Z₂] with the point-evaluation form and the modules S (trivial) and P
/// (the unipotent two-dimensional module).
pub fn f2z2_bundle() -> String {
    let f2 = FieldSpec::prime(2).unwrap();
    let a = Arc::new(group_algebra(f2, &cyclic_group_table(2)).unwrap());
    let form = FrobeniusForm::new(&a, vec![f2.one(), f2.zero()]).unwrap();
    let s = LeftModule::new(
        Arc::clone(&a),
        vec![Matrix::identity(f2, 1), Matrix::identity(f2, 1)],
    )
    .unwrap();
    let one = f2.one();
    let g_action = Matrix::from_rows(
        f2,
        vec![vec![one.clone(), one.clone()], vec![f2.zero(), one]],
    )
    .unwrap();
    let p = LeftModule::new(Arc::clone(&a), vec![Matrix::identity(f2, 2), g_action]).unwrap();
    let docs = vec![
        doc::algebra_doc("A", &a),
        doc::form_doc("delta", "A", &form),
        doc::module_doc("S", "A", &s),
        doc::module_doc("P", "A", &p),
    ];
    doc::emit(&docs)
}

/// M₂(Q) × M₃(Q) with the (2, 5)-weighted trace form.
pub fn m23_bundle() -> String {
    let (a, form) = m23_data();
    let docs = vec![doc::algebra_doc("A", &a), doc::form_doc("w25", "A", &form)];
    doc::emit(&docs)
}

pub fn m23_data() -> (Arc<Algebra>, FrobeniusForm) {
    let a = Arc::new(
        product_algebra(
            &matrix_algebra(FieldSpec::Rational, 2),
            &matrix_algebra(FieldSpec::Rational, 3),
        )
        .unwrap(),
    );
    let wd = a.wedderburn(1).unwrap();
    let simples = simple_modules(&a, &wd).unwrap();
    let form = weighted_trace_form(&a, &[qi(2), qi(5)], &simples).unwrap();
    (a, form)
}

/// A skeleton document with dims (2,3) and weights (2,5).
pub fn presentation_bundle() -> String {
    let cy =
        cytrace::cy::CYPresentation::new(FieldSpec::Rational, vec![2, 3], vec![qi(2), qi(5)], None)
            .unwrap();
    doc::emit(&[doc::presentation_doc("skeleton", &cy)])
}

/// The standard context between M₂(Q) and the endomorphism algebra of its
/// column module, with two forms on the endomorphism side (identity and
/// doubled) for compatibility tests.
pub fn context_bundle() -> String {
    let v = column_module(FieldSpec::Rational, 2);
    let a = Arc::clone(v.algebra());
    let ctx = context_from_progenerator(&a, &v).unwrap();
    let docs: Vec<DocModel> = vec![
        doc::algebra_doc("A", &a),
        doc::algebra_doc("B", &ctx.b),
        doc::form_doc("trA", "A", &matrix_trace_form(2)),
        doc::form_doc(
            "idB",
            "B",
            &FrobeniusForm {
                lambda: vec![qi(1)],
            },
        ),
        doc::form_doc(
            "twoB",
            "B",
            &FrobeniusForm {
                lambda: vec![qi(2)],
            },
        ),
        doc::bimodule_doc("M", "B", "A", &ctx.m),
        doc::bimodule_doc("N", "A", "B", &ctx.n),
        doc::context_doc("ctx", "A", "B", "M", "N", &ctx),
    ];
    doc::emit(&docs)
}

/// The same context with η scaled by 2, so the context diagrams fail.
pub fn broken_context_bundle() -> String {
    let v = column_module(FieldSpec::Rational, 2);
    let a = Arc::clone(v.algebra());
    let ctx = context_from_progenerator(&a, &v).unwrap();
    let broken = cytrace::morita::scale_eta(&ctx, &qi(2)).unwrap();
    let docs: Vec<DocModel> = vec![
        doc::algebra_doc("A", &a),
        doc::algebra_doc("B", &ctx.b),
        doc::bimodule_doc("M", "B", "A", &broken.m),
        doc::bimodule_doc("N", "A", "B", &broken.n),
        doc::context_doc("ctx_bad", "A", "B", "M", "N", &broken),
    ];
    doc::emit(&docs)
}

pub fn write_temp(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path
}

pub fn run_cli(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_cytrace"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}
