//! Command-line driver: every subcommand reads a JSON bundle (except fuzz),
//! runs the corresponding check or construction, and prints a canonical
//! report document on stdout. Exit code 0 means every check passed, 1 means
//! some check failed (the report carries a witness), 2 means the input was
//! unusable.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use cytrace::algebra::Algebra;
use cytrace::cy;
use cytrace::doc::{self, Bundle, NamedForm};
use cytrace::error::Error;
use cytrace::field::{FieldSpec, Scalar};
use cytrace::frobenius::{self, FrobeniusForm};
use cytrace::linalg::Matrix;
use cytrace::modules::{self, LeftModule};
use cytrace::morita;
use cytrace::report::Report;
use cytrace::sample::{self, GenParams};
use cytrace::trace;

#[derive(Parser)]
#[command(
    name = "cytrace",
    about = "Exact checks for symmetric Frobenius algebras, Morita contexts and the trace on their module categories",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate every document in a bundle (algebra axioms, module axioms,
    /// bimodule and context laws)
    Validate { bundle: PathBuf },
    /// Check non-degeneracy and symmetry of a form
    CheckFrobenius {
        bundle: PathBuf,
        #[arg(long)]
        form: Option<String>,
    },
    /// Multiplicities of the simple modules inside a module
    Decompose {
        bundle: PathBuf,
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// The trace of an endomorphism (default: the identity) of a module
    Trace {
        bundle: PathBuf,
        #[arg(long)]
        module: String,
        #[arg(long)]
        form: Option<String>,
        /// JSON file with a square matrix of scalar strings
        #[arg(long)]
        endo: Option<PathBuf>,
    },
    /// Certify the Calabi-Yau structure of the module category of (A, λ);
    /// on failure, search the bundle's modules for a degeneracy witness
    CertifyCy {
        bundle: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        form: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        max_dim: usize,
    },
    /// Validate a Morita context and both of its defining diagrams
    CheckMorita {
        bundle: PathBuf,
        #[arg(long)]
        context: Option<String>,
    },
    /// Compatibility of a context with two forms, against the trace
    /// preservation of its tensor functor
    CheckCompat {
        bundle: PathBuf,
        #[arg(long)]
        context: Option<String>,
        #[arg(long)]
        form_a: String,
        #[arg(long)]
        form_b: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// The skeletal presentation (dims and weights) of the module category
    Rep {
        bundle: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        form: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The basic algebra K^r carrying the weights of a presentation
    Reconstruct {
        bundle: PathBuf,
        #[arg(long)]
        presentation: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Full round trip: presentation, reconstruction, compatibility, trace
    /// preservation
    Roundtrip {
        bundle: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        form: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Seeded random instances through the whole property battery
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: u64,
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
        /// 0 for the rationals, a prime p for F_p
        #[arg(long, default_value = "0")]
        field: String,
    },
}

/// Anything that prevents running the checks at all (exit code 2).
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> InputError {
        InputError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            print!("{}", report.to_json());
            if report.overall {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(msg)) => {
            eprintln!("input error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_bundle(path: &Path) -> Result<Bundle, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    doc::parse(&text).map_err(|e| InputError(e.to_string()))
}

/// Picks the named entry, or the only one when the bundle is unambiguous.
fn select<'a, T>(
    map: &'a std::collections::BTreeMap<String, T>,
    requested: Option<&String>,
    what: &str,
) -> Result<(&'a String, &'a T), InputError> {
    match requested {
        Some(name) => map
            .get_key_value(name)
            .ok_or_else(|| InputError(format!("no {what} named '{name}' in the bundle"))),
        None => {
            if map.len() == 1 {
                Ok(map.iter().next().unwrap())
            } else {
                Err(InputError(format!(
                    "bundle has {} {what} documents; pick one with --{what}",
                    map.len(),
                )))
            }
        }
    }
}

fn form_on_algebra<'a>(
    bundle: &'a Bundle,
    named: &'a NamedForm,
) -> Result<(&'a Arc<Algebra>, &'a FrobeniusForm), InputError> {
    let algebra = bundle.algebras.get(&named.algebra).ok_or_else(|| {
        InputError(format!(
            "form references missing algebra '{}'",
            named.algebra
        ))
    })?;
    Ok((algebra, &named.form))
}

fn run(command: Command) -> Result<Report, InputError> {
    match command {
        Command::Validate { bundle } => cmd_validate(&read_bundle(&bundle)?),
        Command::CheckFrobenius { bundle, form } => {
            cmd_check_frobenius(&read_bundle(&bundle)?, form.as_ref())
        }
        Command::Decompose {
            bundle,
            module,
            seed,
        } => cmd_decompose(&read_bundle(&bundle)?, &module, seed),
        Command::Trace {
            bundle,
            module,
            form,
            endo,
        } => cmd_trace(
            &read_bundle(&bundle)?,
            &module,
            form.as_ref(),
            endo.as_deref(),
        ),
        Command::CertifyCy {
            bundle,
            algebra,
            form,
            seed,
            max_dim,
        } => cmd_certify(
            &read_bundle(&bundle)?,
            algebra.as_ref(),
            form.as_ref(),
            seed,
            max_dim,
        ),
        Command::CheckMorita { bundle, context } => {
            cmd_check_morita(&read_bundle(&bundle)?, context.as_ref())
        }
        Command::CheckCompat {
            bundle,
            context,
            form_a,
            form_b,
            seed,
        } => cmd_check_compat(
            &read_bundle(&bundle)?,
            context.as_ref(),
            &form_a,
            &form_b,
            seed,
        ),
        Command::Rep {
            bundle,
            algebra,
            form,
            seed,
            output,
        } => cmd_rep(
            &read_bundle(&bundle)?,
            algebra.as_ref(),
            form.as_ref(),
            seed,
            output.as_deref(),
        ),
        Command::Reconstruct {
            bundle,
            presentation,
            output,
        } => cmd_reconstruct(
            &read_bundle(&bundle)?,
            presentation.as_ref(),
            output.as_deref(),
        ),
        Command::Roundtrip {
            bundle,
            algebra,
            form,
            seed,
        } => cmd_roundtrip(
            &read_bundle(&bundle)?,
            algebra.as_ref(),
            form.as_ref(),
            seed,
        ),
        Command::Fuzz {
            seed,
            count,
            max_dim,
            field,
        } => cmd_fuzz(seed, count, max_dim, &field),
    }
}

fn cmd_validate(bundle: &Bundle) -> Result<Report, InputError> {
    let mut report = Report::new("validate", vec![]);
    for (name, a) in &bundle.algebras {
        let defects = a.validate();
        report.push(
            format!("algebra:{name}"),
            defects.is_empty(),
            summarize(defects.iter().map(|d| d.to_string())),
        );
    }
    for (name, m) in &bundle.modules {
        let defects = m.module.validate();
        report.push(
            format!("module:{name}"),
            defects.is_empty(),
            summarize(defects.iter().map(|d| d.to_string())),
        );
    }
    for (name, b) in &bundle.bimodules {
        let defects = b.validate();
        report.push(
            format!("bimodule:{name}"),
            defects.is_empty(),
            summarize(defects),
        );
    }
    for (name, ctx) in &bundle.contexts {
        let defects = morita::validate_context(ctx).map_err(|e| InputError(e.to_string()))?;
        report.push(
            format!("morita_context:{name}"),
            defects.is_empty(),
            summarize(defects),
        );
    }
    Ok(report)
}

fn summarize(defects: impl IntoIterator<Item = String>) -> Option<String> {
    let list: Vec<String> = defects.into_iter().take(8).collect();
    if list.is_empty() {
        None
    } else {
        Some(list.join("; "))
    }
}

fn cmd_check_frobenius(bundle: &Bundle, form: Option<&String>) -> Result<Report, InputError> {
    let (name, named) = select(&bundle.forms, form, "form")?;
    let (algebra, form) = form_on_algebra(bundle, named)?;
    let mut report = Report::new("check-frobenius", vec![]);
    let gram = frobenius::pairing_gram(algebra, form)?;
    let frob = gram.rank() == algebra.dim();
    let sym = gram == gram.transpose();
    report.push(
        format!("frobenius:{name}"),
        frob,
        (!frob).then(|| format!("pairing rank {} < {}", gram.rank(), algebra.dim())),
    );
    report.push(format!("symmetric:{name}"), sym, None);
    Ok(report)
}

fn cmd_decompose(bundle: &Bundle, module: &str, seed: u64) -> Result<Report, InputError> {
    let named = bundle
        .modules
        .get(module)
        .ok_or_else(|| InputError(format!("no module named '{module}'")))?;
    let algebra = bundle
        .algebras
        .get(&named.algebra)
        .ok_or_else(|| InputError("module references missing algebra".into()))?;
    let wd = algebra.wedderburn(seed)?;
    let simples = modules::simple_modules(algebra, &wd)?;
    let dec = modules::decompose(&named.module, &simples)?;
    let mut report = Report::new("decompose", vec![seed]);
    report.push(
        format!("decomposition:{module}"),
        true,
        Some(format!(
            "multiplicities {:?} against simple dimensions {:?}",
            dec.multiplicities, wd.block_dims
        )),
    );
    let iso_rows: Vec<Vec<String>> = (0..dec.iso.rows())
        .map(|i| {
            (0..dec.iso.cols())
                .map(|j| dec.iso.at(i, j).to_string())
                .collect()
        })
        .collect();
    Ok(report.with_payload(serde_json::json!({
        "block_dims": wd.block_dims,
        "multiplicities": dec.multiplicities,
        "iso": iso_rows,
    })))
}

fn parse_endo(path: &Path, field: FieldSpec, dim: usize) -> Result<Matrix, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let rows: Vec<Vec<String>> =
        serde_json::from_str(&text).map_err(|e| InputError(format!("endomorphism file: {e}")))?;
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(InputError(format!(
            "endomorphism must be a {dim}x{dim} matrix"
        )));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for row in &rows {
        for t in row {
            entries.push(Scalar::parse(t, field)?);
        }
    }
    Ok(Matrix::from_entries(field, dim, dim, entries)?)
}

fn cmd_trace(
    bundle: &Bundle,
    module: &str,
    form: Option<&String>,
    endo: Option<&Path>,
) -> Result<Report, InputError> {
    let named_module = bundle
        .modules
        .get(module)
        .ok_or_else(|| InputError(format!("no module named '{module}'")))?;
    let (_, named_form) = select(&bundle.forms, form, "form")?;
    if named_form.algebra != named_module.algebra {
        return Err(InputError(
            "module and form live over different algebras".into(),
        ));
    }
    let m = &named_module.module;
    let f = match endo {
        Some(path) => parse_endo(path, m.algebra().field(), m.dim())?,
        None => Matrix::identity(m.algebra().field(), m.dim()),
    };
    let value = trace::hs_trace(m, &named_form.form, &f)?;
    let mut report = Report::new("trace", vec![]);
    report.push(format!("trace:{module}"), true, Some(value.to_string()));
    Ok(report.with_payload(serde_json::json!({ "value": value.to_string() })))
}

fn cmd_certify(
    bundle: &Bundle,
    algebra: Option<&String>,
    form: Option<&String>,
    seed: u64,
    max_dim: usize,
) -> Result<Report, InputError> {
    let (form_name, named) = select(&bundle.forms, form, "form")?;
    let (algebra_arc, the_form) = form_on_algebra(bundle, named)?;
    if let Some(requested) = algebra {
        if requested != &named.algebra {
            return Err(InputError(format!(
                "form '{form_name}' lives on '{}', not '{requested}'",
                named.algebra
            )));
        }
    }
    let mut report = Report::new("certify-cy", vec![seed]);
    match trace::certify_cy(algebra_arc, the_form, seed, max_dim) {
        Ok(cert) => {
            for c in &cert.checks {
                report.push(c.name.clone(), c.passed, c.witness.clone());
            }
            report = report.with_payload(serde_json::json!({
                "weights": cert.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            }));
        }
        Err(e @ (Error::AsymmetricForm | Error::NotFrobenius)) => {
            // certification fails on the form itself; witness the defect
            let gram = frobenius::pairing_gram(algebra_arc, the_form)?;
            let witness = (0..algebra_arc.dim())
                .flat_map(|i| (0..algebra_arc.dim()).map(move |j| (i, j)))
                .find(|&(i, j)| gram.at(i, j) != gram.at(j, i))
                .map(|(i, j)| {
                    format!(
                        "λ(e{i}e{j}) = {} but λ(e{j}e{i}) = {}",
                        gram.at(i, j),
                        gram.at(j, i)
                    )
                })
                .unwrap_or_else(|| format!("pairing rank {} < {}", gram.rank(), algebra_arc.dim()));
            report.push("form_symmetric_frobenius", false, Some(witness));
            let _ = e;
        }
        Err(e @ (Error::NotSemisimple | Error::UnsupportedCharacteristic | Error::NotSplit(_))) => {
            report.push("calabi_yau_structure", false, Some(e.to_string()));
            // hunt for a concrete degeneracy witness among the bundle's modules
            let algebra_name = &named.algebra;
            let mods: Vec<(&String, &LeftModule)> = bundle
                .modules
                .iter()
                .filter(|(_, nm)| &nm.algebra == algebra_name)
                .map(|(k, nm)| (k, &nm.module))
                .collect();
            // the predicate is one-sided (composites landing in End(M)),
            // so both orders of every pair are examined
            for (name_m, m) in &mods {
                for (name_n, n) in &mods {
                    if name_m == name_n {
                        continue;
                    }
                    if let Some(w) = trace::cy_obstruction_witness(m, n)? {
                        report.push(
                            format!("degenerate_pair:{name_m},{name_n}"),
                            false,
                            Some(format!(
                                "hom dimensions {} and {} but every composite vanishes",
                                w.hom_fwd_dim, w.hom_bwd_dim
                            )),
                        );
                    }
                }
            }
        }
        Err(e) => return Err(e.into()),
    }
    Ok(report)
}

fn cmd_check_morita(bundle: &Bundle, context: Option<&String>) -> Result<Report, InputError> {
    let (name, ctx) = select(&bundle.contexts, context, "context")?;
    let mut report = Report::new("check-morita", vec![]);
    let defects = morita::validate_context(ctx)?;
    report.push(
        format!("context:{name}"),
        defects.is_empty(),
        summarize(defects),
    );
    let d1 = morita::check_first_diagram(ctx)?;
    let d2 = morita::check_second_diagram(ctx)?;
    report.push("diagram_over_m", d1, None);
    report.push("diagram_over_n", d2, None);
    report.push(
        "diagram_verdicts_agree",
        d1 == d2,
        (d1 != d2).then(|| format!("over M: {d1}, over N: {d2}")),
    );
    Ok(report)
}

fn cmd_check_compat(
    bundle: &Bundle,
    context: Option<&String>,
    form_a: &str,
    form_b: &str,
    seed: u64,
) -> Result<Report, InputError> {
    let (_, ctx) = select(&bundle.contexts, context, "context")?;
    let named_a = bundle
        .forms
        .get(form_a)
        .ok_or_else(|| InputError(format!("no form named '{form_a}'")))?;
    let named_b = bundle
        .forms
        .get(form_b)
        .ok_or_else(|| InputError(format!("no form named '{form_b}'")))?;
    let compatible = morita::is_compatible(ctx, &named_a.form, &named_b.form)?;
    // trace preservation over the default sample spec
    let wd = ctx.a.wedderburn(seed)?;
    let simples = modules::simple_modules(&ctx.a, &wd)?;
    let weights = frobenius::extract_block_weights(&ctx.a, &named_a.form, &wd, &simples)?;
    let inst = sample::Instance {
        algebra: Arc::clone(&ctx.a),
        wd,
        simples,
        form: named_a.form.clone(),
        weights,
    };
    let functor =
        morita::check_cy_functor_samples(ctx, &named_a.form, &named_b.form, &inst, seed, 10)?;
    let mut report = Report::new("check-compat", vec![seed]);
    let compat_witness = if compatible {
        None
    } else {
        // the first basis element where the transported form disagrees
        let raw = morita::eps_preimage_of_unit(ctx)?;
        let g = morita::transfer_map(ctx, &raw)?;
        let transported = g.transpose().mul_vec(&named_b.form.lambda)?;
        (0..ctx.a.dim())
            .find(|&j| transported[j] != named_a.form.lambda[j])
            .map(|j| {
                format!(
                    "λ^A(e{j}) = {} but λ^B applied to the transfer gives {}",
                    named_a.form.lambda[j], transported[j]
                )
            })
    };
    report.push("compatible", compatible, compat_witness);
    report.push("cy_functor", functor, None);
    report.push(
        "verdicts_agree",
        compatible == functor,
        (compatible != functor)
            .then(|| format!("compatible: {compatible}, trace-preserving: {functor}")),
    );
    Ok(report)
}

fn cmd_rep(
    bundle: &Bundle,
    algebra: Option<&String>,
    form: Option<&String>,
    seed: u64,
    output: Option<&Path>,
) -> Result<Report, InputError> {
    let (form_name, named) = select(&bundle.forms, form, "form")?;
    let (algebra_arc, the_form) = form_on_algebra(bundle, named)?;
    if let Some(requested) = algebra {
        if requested != &named.algebra {
            return Err(InputError(format!(
                "form '{form_name}' lives on '{}', not '{requested}'",
                named.algebra
            )));
        }
    }
    let mut cy = cy::rep_fg(algebra_arc, the_form, seed)?;
    cy.source = Some(named.algebra.clone());
    let doc_out = doc::presentation_doc("rep", &cy);
    if let Some(path) = output {
        std::fs::write(path, doc::emit(&[doc_out]))
            .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    }
    let mut report = Report::new("rep", vec![seed]);
    report.push("rep", true, None);
    Ok(report.with_payload(serde_json::json!({
        "dims": cy.dims,
        "weights": cy.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
    })))
}

fn cmd_reconstruct(
    bundle: &Bundle,
    presentation: Option<&String>,
    output: Option<&Path>,
) -> Result<Report, InputError> {
    let (_, cy) = select(&bundle.presentations, presentation, "presentation")?;
    let (algebra, form) = cy::reconstruct_frobenius(cy)?;
    let docs = vec![
        doc::algebra_doc("reconstructed", &algebra),
        doc::form_doc("reconstructed_form", "reconstructed", &form),
    ];
    if let Some(path) = output {
        std::fs::write(path, doc::emit(&docs))
            .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    }
    let mut report = Report::new("reconstruct", vec![]);
    report.push("reconstruct", true, None);
    Ok(report.with_payload(serde_json::json!({
        "dim": algebra.dim(),
        "weights": form.lambda.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
    })))
}

fn cmd_roundtrip(
    bundle: &Bundle,
    algebra: Option<&String>,
    form: Option<&String>,
    seed: u64,
) -> Result<Report, InputError> {
    let (form_name, named) = select(&bundle.forms, form, "form")?;
    let (algebra_arc, the_form) = form_on_algebra(bundle, named)?;
    if let Some(requested) = algebra {
        if requested != &named.algebra {
            return Err(InputError(format!(
                "form '{form_name}' lives on '{}', not '{requested}'",
                named.algebra
            )));
        }
    }
    let rt = cy::roundtrip_check(algebra_arc, the_form, seed, 10)?;
    let mut report = Report::new("roundtrip", vec![seed]);
    for c in &rt.checks {
        report.push(c.name.clone(), c.passed, c.witness.clone());
    }
    Ok(report.with_payload(serde_json::json!({
        "dims": rt.rep_a.dims,
        "weights": rt.rep_a.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "reconstructed_weights": rt.rep_b.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
    })))
}

fn cmd_fuzz(seed: u64, count: u64, max_dim: usize, field: &str) -> Result<Report, InputError> {
    let field = if field == "0" {
        FieldSpec::Rational
    } else {
        let p: u64 = field
            .parse()
            .map_err(|_| InputError(format!("bad field '{field}'")))?;
        FieldSpec::prime(p)?
    };
    let params = GenParams::new(field);
    let mut report = Report::new("fuzz", vec![seed]);
    for k in 0..count {
        let mut rng = sample::rng_for(seed, k);
        let inst = sample::instance(&mut rng, &params)?;
        let tag = format!("i{k:04}");
        report.push(
            format!("{tag}_algebra_valid"),
            inst.algebra.validate().is_empty(),
            None,
        );
        let frob = frobenius::is_frobenius(&inst.algebra, &inst.form)?;
        let sym = frobenius::is_symmetric(&inst.algebra, &inst.form)?;
        report.push(format!("{tag}_form_frobenius"), frob, None);
        report.push(format!("{tag}_form_symmetric"), sym, None);
        // weight formula on every simple
        let mut weights_ok = true;
        for (v, w) in inst.simples.iter().zip(&inst.weights) {
            let id = Matrix::identity(field, v.dim());
            if &trace::hs_trace(v, &inst.form, &id)? != w {
                weights_ok = false;
            }
        }
        report.push(format!("{tag}_weight_formula"), weights_ok, None);
        // trace route agreement and the trace identities on random modules;
        // the module budget shrinks as the algebra grows so rational
        // eliminations stay small
        let budget = match inst.algebra.dim() {
            0..=8 => max_dim,
            9..=14 => max_dim.min(4),
            _ => max_dim.min(3),
        };
        let m = sample::random_module(&mut rng, &inst, budget)?;
        let n = sample::random_module(&mut rng, &inst, budget)?;
        if m.dim() > 0 {
            let f = sample::random_endomorphism(&mut rng, &m)?;
            let direct = trace::hs_trace(&m, &inst.form, &f)?;
            let via_db = trace::hs_trace_via_dual_basis(&m, &inst.form, &f)?;
            report.push(
                format!("{tag}_trace_routes_agree"),
                direct == via_db,
                (direct != via_db).then(|| format!("{direct} vs {via_db}")),
            );
        }
        let pairing = trace::trace_pairing(&m, &n, &inst.form)?;
        let full_rank = pairing.gram.rank() == pairing.hom_fwd.dim()
            && pairing.gram.rank() == pairing.hom_bwd.dim();
        report.push(
            format!("{tag}_pairing_nondegenerate"),
            full_rank,
            (!full_rank).then(|| {
                format!(
                    "Gram rank {} on hom spaces of dimensions {} and {}",
                    pairing.gram.rank(),
                    pairing.hom_fwd.dim(),
                    pairing.hom_bwd.dim()
                )
            }),
        );
        let f = sample::random_endomorphism(&mut rng, &m)?;
        let g = sample::random_endomorphism(&mut rng, &n)?;
        let additive = trace::check_additivity(&m, &n, &inst.form, &f, &g)?;
        report.push(
            format!("{tag}_additivity"),
            additive,
            (!additive).then(|| {
                format!(
                    "trace of the block sum differs on modules of dimensions {} and {}",
                    m.dim(),
                    n.dim()
                )
            }),
        );
        let fwd = modules::hom_basis(&m, &n)?;
        let bwd = modules::hom_basis(&n, &m)?;
        if fwd.dim() > 0 && bwd.dim() > 0 {
            report.push(
                format!("{tag}_symmetry"),
                trace::check_symmetry(&m, &n, &inst.form, &fwd.basis[0], &bwd.basis[0])?,
                None,
            );
        }
    }
    Ok(report)
}
