use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};
use upho::congruence::{Engine, LcReport};
use upho::convolution::{convolve, verify_convolution_counts_with, ConvolutionSpec};
use upho::greedy::{greedy_lch_series_with, greedy_zero_series, treeify_with, GreedyLchResult, GreedyZeroResult};
use upho::poset::{build_poset_prefix_with, export_hasse, HasseFormat};
use upho::series::{
    classify_roots, factor_over_z, parse_csv, toeplitz_tp_check_window, Polynomial, Series, TpReport, TpVerdict,
};
use upho::tpbuild::{build_tp_monoid_with, verify_certificate_with, TpCertificate};
use upho::{Error, Presentation, Result};

use crate::{Cli, Command, Format, EXIT_ANOMALY, EXIT_NEGATIVE, EXIT_USAGE};

pub struct Outcome {
    pub text: String,
    /// False for a negative verdict (exit 1).
    pub positive: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, positive: true }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Anomaly(_) => EXIT_ANOMALY,
        Error::Routing(_) | Error::NotLeftCancellative(_) => EXIT_NEGATIVE,
        _ => EXIT_USAGE,
    }
}

fn read_presentation(path: &Path) -> Result<Presentation> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Presentation::parse_bytes(&bytes)
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn text_or_json(format: Format) -> Result<bool> {
    match format {
        Format::Text => Ok(false),
        Format::Json => Ok(true),
        Format::Dot => Err(Error::InvalidInput("dot output is only available for `hasse`".into())),
    }
}

fn sequence(coeffs: &str, depth: Option<usize>) -> Result<(Vec<u64>, usize)> {
    let b: Vec<u64> = parse_csv(coeffs)?;
    let depth = depth.unwrap_or(b.len().saturating_sub(1));
    Ok((b, depth))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let engine = cli.budget.map_or_else(Engine::default, Engine::with_budget);
    match &cli.command {
        Command::Enum { p, max_len, format } => {
            let json = text_or_json(*format)?;
            let counts = engine.layer_counts(&read_presentation(&p.path)?, *max_len)?;
            Ok(Outcome::ok(if json { pretty(&json!({ "counts": counts })) } else { format!("{}\n", join(&counts)) }))
        }
        Command::Classes { p, max_len, format } => {
            let json = text_or_json(*format)?;
            let pres = read_presentation(&p.path)?;
            let graded = engine.graded(&pres, *max_len)?;
            let a = pres.alphabet();
            let layers: Vec<(Vec<String>, bool)> = (0..=*max_len)
                .map(|k| {
                    let layer = graded.layer(k);
                    (layer.reps.iter().map(|w| a.render(w)).collect(), layer.has_zero)
                })
                .collect();
            if json {
                let v: Vec<Value> = layers
                    .iter()
                    .enumerate()
                    .map(|(k, (reps, zero))| json!({ "length": k, "reps": reps, "zero": zero }))
                    .collect();
                return Ok(Outcome::ok(pretty(&v)));
            }
            let mut out = String::new();
            for (k, (reps, zero)) in layers.iter().enumerate() {
                let zero = if *zero { " (+0)" } else { "" };
                writeln!(out, "{k}: {}{zero}", reps.join(", ")).unwrap();
            }
            Ok(Outcome::ok(out))
        }
        Command::Hasse { p, max_len, format } => {
            let format = match format {
                Format::Dot => HasseFormat::Dot,
                Format::Json => HasseFormat::Json,
                Format::Text => return Err(Error::InvalidInput("hasse output is dot or json".into())),
            };
            let poset = build_poset_prefix_with(&engine, &read_presentation(&p.path)?, *max_len)?;
            Ok(Outcome::ok(export_hasse(&poset, format)))
        }
        Command::LcCheck { p, depth, format } => {
            let json = text_or_json(*format)?;
            let pres = read_presentation(&p.path)?;
            let report = engine.check_left_cancellative(&pres, *depth)?;
            Ok(Outcome { text: lc_text(&pres, &report, json), positive: report.passed() })
        }
        Command::GreedyZero { coeffs, depth, format } => {
            let json = text_or_json(*format)?;
            let (b, depth) = sequence(coeffs, *depth)?;
            let r = greedy_zero_series(&b, depth)?;
            let text = if json { pretty(&r.to_json()) } else { greedy_zero_text(&r) };
            Ok(Outcome { text, positive: r.succeeded() })
        }
        Command::GreedyLch { coeffs, depth, format } => {
            let json = text_or_json(*format)?;
            let (c, depth) = sequence(coeffs, *depth)?;
            let r = greedy_lch_series_with(&engine, &c, depth)?;
            let text = if json { pretty(&r.to_json()) } else { greedy_lch_text(&r) };
            Ok(Outcome { text, positive: r.succeeded() })
        }
        Command::Treeify { p, depth } => {
            let tree = treeify_with(&engine, &read_presentation(&p.path)?, *depth)?;
            Ok(Outcome::ok(tree.to_text()))
        }
        Command::Convolve { p, with, xmap, depth } => {
            let m1 = read_presentation(&p.path)?;
            let m2 = read_presentation(with)?;
            let spec = match xmap {
                Some(text) => ConvolutionSpec::with_named_xmap(m1, m2, text)?,
                None => ConvolutionSpec::new(m1, m2, None)?,
            };
            let mut text = convolve(&spec)?.to_text();
            if let Some(n) = depth {
                let counts = verify_convolution_counts_with(&engine, &spec, *n)?;
                writeln!(text, "# counts: {}", join(&counts.counts)).unwrap();
            }
            Ok(Outcome::ok(text))
        }
        Command::TpCheck { coeffs, order, window, format } => {
            let json = text_or_json(*format)?;
            let s = Series::new(parse_csv::<i64>(coeffs)?);
            let report = toeplitz_tp_check_window(&s, *order, window.unwrap_or(2 * order))?;
            let positive = report.verdict == TpVerdict::Accept;
            Ok(Outcome { text: if json { pretty(&report) } else { tp_text(&report) }, positive })
        }
        Command::Roots { coeffs, format } => {
            let json = text_or_json(*format)?;
            let c = classify_roots(&Polynomial::<i64>::parse_csv(coeffs)?)?;
            let text = if json {
                pretty(&c)
            } else {
                format!(
                    "verdict: {}\ndegree: {}\nall_real: {}\nnegative: {}\nin (0,1): {}\nat 1: {}\ngreater than 1: {}\n",
                    c.verdict.as_str(),
                    c.degree,
                    c.all_real,
                    c.negative_count,
                    c.positive_in_unit_count,
                    c.unit_count,
                    c.greater_than_one_count
                )
            };
            Ok(Outcome::ok(text))
        }
        Command::Factor { coeffs, format } => {
            let json = text_or_json(*format)?;
            let factors = factor_over_z(&Polynomial::<i64>::parse_csv(coeffs)?)?;
            let text = if json {
                pretty(&factors.iter().map(|f| f.coeffs().to_vec()).collect::<Vec<_>>())
            } else {
                factors.iter().map(|f| format!("{}\n", f.to_csv())).collect()
            };
            Ok(Outcome::ok(text))
        }
        Command::TpBuild { num, den, depth } => {
            let g = Polynomial::<i64>::parse_csv(num)?;
            let h = Polynomial::<i64>::parse_csv(den)?;
            Ok(Outcome::ok(build_tp_monoid_with(&engine, &g, &h, *depth)?.to_json()))
        }
        Command::VerifyCert { cert, format } => {
            let json = text_or_json(*format)?;
            let text = std::fs::read_to_string(cert).map_err(|e| Error::Io(format!("{}: {e}", cert.display())))?;
            let check = verify_certificate_with(&engine, &TpCertificate::from_json(&text)?)?;
            let text = if json {
                pretty(&json!({ "verdict": if check.passed() { "pass" } else { "fail" }, "checks": check }))
            } else if check.passed() {
                "pass\n".to_string()
            } else {
                format!(
                    "fail: target_matches={} enumeration_matches={} table_agrees={} recorded_pass={}\n",
                    check.target_matches, check.enumeration_matches, check.table_agrees, check.recorded_pass
                )
            };
            Ok(Outcome { text, positive: check.passed() })
        }
    }
}

fn lc_text(p: &Presentation, r: &LcReport, json: bool) -> String {
    let a = p.alphabet();
    let witness =
        r.witness.as_ref().map(|w| (a.name(w.generator).to_string(), a.render(&w.first), a.render(&w.second)));
    if json {
        let w = witness.map(|(x, f, s)| json!({ "generator": x, "first": f, "second": s }));
        return pretty(&json!({ "verdict": r.verdict, "depth_checked": r.depth_checked, "witness": w }));
    }
    match witness {
        None => format!("pass (depth {})\n", r.depth_checked),
        Some((x, f, s)) => format!("violation at length {}: {x} {f} = {x} {s}\n", r.depth_checked),
    }
}

fn greedy_zero_text(r: &GreedyZeroResult) -> String {
    let a = r.presentation.alphabet();
    let mut out = String::new();
    for s in &r.steps {
        let killed: Vec<String> = s.killed.iter().map(|w| a.render(w)).collect();
        writeln!(out, "k {}: count {}, killed [{}]", s.k, s.count, killed.join(", ")).unwrap();
    }
    match r.failure_k {
        None => out.push_str("success\n"),
        Some(k) => writeln!(out, "failure at k {k}").unwrap(),
    }
    out.push_str(&r.presentation.to_text());
    out
}

fn greedy_lch_text(r: &GreedyLchResult) -> String {
    let a = r.presentation.alphabet();
    let mut out = String::new();
    for s in &r.steps {
        let rels: Vec<String> = s.relations.iter().map(|(l, r)| format!("{} = {}", a.render(l), a.render(r))).collect();
        write!(out, "k {}: count {}, relations [{}]", s.k, s.count, rels.join(", ")).unwrap();
        if let Some(c) = s.recount {
            write!(out, ", recount {c}").unwrap();
        }
        out.push('\n');
    }
    match (r.failure_k, r.failure_reason) {
        (Some(k), Some(reason)) => {
            let reason = serde_json::to_value(reason).expect("serializable");
            writeln!(out, "failure at k {k}: {}", reason.as_str().unwrap_or("unknown")).unwrap();
        }
        _ => out.push_str("success\n"),
    }
    out.push_str(&r.presentation.to_text());
    out
}

fn tp_text(r: &TpReport<i64>) -> String {
    match (&r.verdict, &r.witness) {
        (TpVerdict::Reject, Some(m)) => {
            format!("reject: rows {} cols {} det {}\n", join(&m.rows), join(&m.cols), m.det)
        }
        _ => format!(
            "accept: {} minors of order <= {} in a {}x{} window\n",
            r.minors_checked, r.order, r.window, r.window
        ),
    }
}
