mod gens;

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mumford_core::flow::{self, NamedGenerator, WeightedPair};
use mumford_core::grassmann::ChartPoint;
use mumford_core::json;
use mumford_core::scalar::{format_scalar, Scalar};
use mumford_core::super_ns::{self, NSElement};
use mumford_core::verify::{self, Suite, VerifyConfig};
use mumford_core::witt::{self, WittElement};
use mumford_core::{Error, Parity, Result};
use num_traits::Zero;
use serde_json::{json, Value};

const GENERATOR_HELP: &str = "Generators: terms `c*Ln` or `c*Gr` joined by `+`, with rational c (`p` or `p/q`), \
integer n and half-integer r written `p/2`; a bare leading `-` negates a term; whitespace is ignored; \
lists are separated by `,`. Examples: `L-2`, `1/2*L3 + L-1`, `G3/2,L2`.";

#[derive(Parser)]
#[command(name = "mumford", version, about = "Exact Witt/Neveu-Schwarz cocycles, Grassmannian flows and Mumford form jets", after_help = GENERATOR_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Central-charge table: η(ρ_j(L_m), ρ_j(L_-m)) against j = 1.
    ChargeTable {
        #[arg(long, default_value = "-3..5", allow_hyphen_values = true)]
        j: String,
        #[arg(long, default_value = "2..6", allow_hyphen_values = true)]
        m: String,
    },
    /// Japanese cocycle of two generators under ρ_j (or the supertrace cocycle with --super).
    Cocycle {
        #[arg(long, allow_hyphen_values = true)]
        j: i64,
        /// Exactly two generators, `x,y`.
        #[arg(long, allow_hyphen_values = true)]
        gens: String,
        #[arg(long = "super")]
        super_: bool,
        /// Also evaluate on the dense window [-N, N].
        #[arg(long)]
        window: Option<i64>,
    },
    /// Jet of the flow of the standard origin along ρ_j(x).
    Flow {
        #[arg(long, allow_hyphen_values = true)]
        j: i64,
        #[arg(long, allow_hyphen_values = true)]
        gens: String,
        #[arg(long, default_value_t = 4)]
        order: u32,
    },
    /// Mumford form jet on Gr₂ × Gr₁ at the standard origin.
    MumfordJet {
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        gens: String,
        #[arg(long, default_value_t = 4)]
        order: u32,
        #[arg(long, default_value = "1,-13", allow_hyphen_values = true)]
        weights: String,
    },
    /// Super Mumford form jet on Gr_{3/2} × Gr_{1/2} at the standard origin.
    SuperMumfordJet {
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        gens: String,
        #[arg(long, default_value_t = 4)]
        order: u32,
        #[arg(long, default_value = "1,-5", allow_hyphen_values = true)]
        weights: String,
    },
    /// Runs the seeded property suites.
    Verify {
        /// One of homomorphism, cocycle, alpha, curvature, flow, super, det, all.
        #[arg(default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        /// Replace the flatness weights (bosonic and super) with `w2,w1`.
        #[arg(long, allow_hyphen_values = true)]
        weights: Option<String>,
    },
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

struct Output {
    text: String,
    exit: ExitCode,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, exit: ExitCode::SUCCESS }
    }
}

fn index_text(v: &Value) -> String {
    match v {
        Value::Object(o) => {
            let parity = if o["parity"] == "odd" { "f" } else { "e" };
            format!("{parity}{}", o["level"])
        }
        other => other.to_string(),
    }
}

/// TSV of a jet document: `kind  row  col  monomial  value`.
fn jet_document_tsv(doc: &Value) -> String {
    let mut out = String::from("kind\trow\tcol\tmonomial\tvalue\n");
    let terms = |v: &Value| -> Vec<(String, String)> {
        v.as_array()
            .into_iter()
            .flatten()
            .map(|t| {
                let exps: Vec<String> = t[0].as_array().into_iter().flatten().map(|e| e.to_string()).collect();
                (exps.join(","), t[1].as_str().unwrap_or_default().to_string())
            })
            .collect()
    };
    for (m, c) in terms(&doc["phi"]) {
        out.push_str(&format!("phi\t-\t-\t{m}\t{c}\n"));
    }
    for key in ["a", "a2", "a1"] {
        for entry in doc[key].as_array().into_iter().flatten() {
            for (m, c) in terms(&entry[2]) {
                out.push_str(&format!("{key}\t{}\t{}\t{m}\t{c}\n", index_text(&entry[0]), index_text(&entry[1])));
            }
        }
    }
    out
}

fn render(format: Format, doc: &Value, tsv: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => json::render(doc),
        Format::Tsv => tsv(),
    }
}

fn charge_table(j: &str, m: &str, format: Format) -> Result<Output> {
    let (js, ms) = (gens::parse_range(j)?, gens::parse_range(m)?);
    if let Some(bad) = ms.iter().find(|m| **m < 2) {
        return Err(Error::Precondition(format!("m must be at least 2 (got {bad})")));
    }
    let mut rows = Vec::new();
    let mut all_match = true;
    for &j in &js {
        for &m in &ms {
            let value = witt::pulled_back_cocycle(j, m);
            let ratio = witt::central_charge_ratio(j, m)?;
            let expected = witt::expected_charge(j);
            let matched = ratio == expected;
            all_match &= matched;
            rows.push((j, m, value, ratio, expected, matched));
        }
    }
    let doc = json!({
        "rows": rows.iter().map(|(j, m, v, r, e, ok)| json!({
            "j": j, "m": m, "cocycle": json::scalar(v), "ratio": json::scalar(r),
            "expected": json::scalar(e), "match": ok,
        })).collect::<Vec<_>>(),
        "all_match": all_match,
    });
    let text = render(format, &doc, || {
        let mut out = String::from("j\tm\tcocycle\tratio\texpected\tmatch\n");
        for (j, m, v, r, e, ok) in &rows {
            out.push_str(&format!("{j}\t{m}\t{}\t{}\t{}\t{ok}\n", format_scalar(v), format_scalar(r), format_scalar(e)));
        }
        out
    });
    Ok(Output { text, exit: if all_match { ExitCode::SUCCESS } else { ExitCode::from(1) } })
}

/// `tr(F^{-+}G^{+-} - G^{-+}F^{+-})` from dense windows of both operators.
fn window_cocycle(f: &[Vec<Scalar>], g: &[Vec<Scalar>], lo: i64) -> Scalar {
    let n = f.len();
    let mut total = Scalar::zero();
    for d in 0..n {
        for k in 0..n {
            if lo + (d as i64) < 0 && lo + (k as i64) >= 0 {
                total += &f[d][k] * &g[k][d] - &g[d][k] * &f[k][d];
            }
        }
    }
    total
}

fn cocycle(j: i64, gens_text: &str, super_: bool, window: Option<i64>, format: Format) -> Result<Output> {
    let parts = gens::split_list(gens_text);
    let [x, y] = parts.as_slice() else {
        return Err(Error::Parse(format!("cocycle needs exactly two generators, got {}", parts.len())));
    };
    let mut doc = json!({ "j": j, "x": x.trim(), "y": y.trim(), "super": super_ });
    if super_ {
        let value = super_ns::super_pulled_back(j, &gens::parse_ns(x)?, &gens::parse_ns(y)?)?;
        doc["value"] = json::scalar(&value);
    } else {
        let (f, g) = (flow::represent(j, &gens::parse_witt(x)?)?, flow::represent(j, &gens::parse_witt(y)?)?);
        doc["value"] = json::scalar(&witt::japanese_cocycle(&f, &g));
        if let Some(n) = window {
            if n < 1 {
                return Err(Error::Precondition("window must be positive".into()));
            }
            doc["window"] = json!([-n, n]);
            doc["window_value"] = json::scalar(&window_cocycle(&f.render_dense(-n, n), &g.render_dense(-n, n), -n));
        }
    }
    let text = render(format, &doc, || {
        let mut out = String::from("j\tx\ty\tvalue");
        let mut row = format!("{j}\t{}\t{}\t{}", x.trim(), y.trim(), doc["value"].as_str().unwrap_or_default());
        if let Some(w) = doc.get("window_value") {
            out.push_str("\twindow_value");
            row.push_str(&format!("\t{}", w.as_str().unwrap_or_default()));
        }
        format!("{out}\n{row}\n")
    });
    Ok(Output::ok(text))
}

fn flow_cmd(j: i64, gens_text: &str, order: u32, format: Format) -> Result<Output> {
    let x = gens::parse_witt(gens_text)?;
    let out = flow::flow_jet(&x, &ChartPoint::standard_origin(), j, order)?;
    let mut doc = json::flow_jet(&out);
    doc["generator"] = json!(x.to_string());
    doc["j"] = json!(j);
    let text = render(format, &doc, || jet_document_tsv(&doc));
    Ok(Output::ok(text))
}

fn witt_generators(text: &str) -> Result<Vec<NamedGenerator<WittElement>>> {
    gens::split_list(text)
        .iter()
        .enumerate()
        .map(|(i, g)| Ok(NamedGenerator::even(format!("t{}", i + 1), gens::parse_witt(g)?)))
        .collect()
}

fn ns_generators(text: &str) -> Result<Vec<NamedGenerator<NSElement>>> {
    gens::split_list(text)
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let x = gens::parse_ns(g)?;
            let parity = x
                .parity()
                .ok_or_else(|| Error::ParityMismatch(format!("generator `{g}` mixes L and G terms")))?;
            let name = match parity {
                Parity::Even => format!("s{}", i + 1),
                Parity::Odd => format!("sigma{}", i + 1),
            };
            Ok(NamedGenerator::new(name, parity, x))
        })
        .collect()
}

fn mumford_jet_cmd(text: &str, order: u32, weights: &str, format: Format) -> Result<Output> {
    let (w2, w1) = gens::parse_weights(weights)?;
    let mj = flow::mumford_jet(&WeightedPair::standard(w2, w1), &witt_generators(text)?, order)?;
    let doc = json::mumford_jet(&mj);
    Ok(Output::ok(render(format, &doc, || jet_document_tsv(&doc))))
}

fn super_mumford_jet_cmd(text: &str, order: u32, weights: &str, format: Format) -> Result<Output> {
    let (w2, w1) = gens::parse_weights(weights)?;
    let mj = super_ns::super_mumford_jet(&WeightedPair::super_standard(w2, w1), &ns_generators(text)?, order)?;
    let doc = json::mumford_jet(&mj);
    Ok(Output::ok(render(format, &doc, || jet_document_tsv(&doc))))
}

fn verify_cmd(suite: Suite, seed: u64, weights: Option<&str>, format: Format) -> Result<Output> {
    let weights = weights.map(gens::parse_weights).transpose()?;
    let report = verify::run(suite, &VerifyConfig { seed, weights });
    let text = render(format, &report.to_json(), || report.to_tsv());
    Ok(Output { text, exit: if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) } })
}

fn run(cli: &Cli) -> Result<Output> {
    let format = cli.format;
    match &cli.command {
        Command::ChargeTable { j, m } => charge_table(j, m, format),
        Command::Cocycle { j, gens, super_, window } => cocycle(*j, gens, *super_, *window, format),
        Command::Flow { j, gens, order } => flow_cmd(*j, gens, *order, format),
        Command::MumfordJet { gens, order, weights } => mumford_jet_cmd(gens, *order, weights, format),
        Command::SuperMumfordJet { gens, order, weights } => super_mumford_jet_cmd(gens, *order, weights, format),
        Command::Verify { suite, seed, weights } => verify_cmd(*suite, *seed, weights.as_deref(), format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &output.text),
                None => {
                    print!("{}", output.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            output.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_guard() { 3 } else { 2 })
        }
    }
}
