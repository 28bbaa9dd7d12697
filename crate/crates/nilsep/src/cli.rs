//! Command line interface. [`run`] returns the text to print and the exit
//! code: 0 for yes or success, 1 for no or a refused separation, 2 when
//! search bounds ran out and 3 for input errors.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use nilsep_core::criteria::{
    check_amalgam_normal, check_amalgam_retract, check_graph_central, check_hnn_chain, check_hnn_cyclic, AmalgamInstance,
    CriteriaBounds, HnnChainInstance, HnnCyclicInstance, Outcome, Verdict,
};
use nilsep_core::isolator::{isolator, nth_roots, root_witness};
use nilsep_core::separability::{residually_c, separate, SeparationBounds};
use nilsep_core::{Element, PcPresentation, Subgroup};

use crate::error::{Error, Result};
use crate::format::{parse_primes, parse_word, parse_word_list, read_presentation, write_presentation};
use crate::graph::read_graph;
use crate::oracle::{default_prime_sets, load_fixture_dir, oracle_compare};

#[derive(Debug, Parser)]
#[command(name = "nilsep", version, about = "Isolators, roots and separability in polycyclic nilpotent groups")]
pub struct Cli {
    /// Print a JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SubgroupArgs {
    #[arg(long)]
    pub group: PathBuf,
    /// Generators separated by `;`.
    #[arg(long, default_value = "")]
    pub subgroup: String,
    /// `2,3`, `all` or `all-except:2,3`.
    #[arg(long)]
    pub primes: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Isolator of a subgroup.
    Isolate(SubgroupArgs),
    /// Root witness for an element.
    Roots {
        #[command(flatten)]
        sub: SubgroupArgs,
        #[arg(long)]
        element: String,
    },
    /// All n-th roots of an element.
    Nthroot {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        element: String,
        #[arg(long)]
        n: i128,
    },
    /// Finite p-group quotient keeping an element outside a subgroup.
    Separate {
        #[command(flatten)]
        sub: SubgroupArgs,
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 50)]
        pmax: u64,
        #[arg(long, default_value_t = 16)]
        kmax: u32,
    },
    /// Whether the group is residually a finite P-group.
    Residual {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        primes: String,
    },
    #[command(subcommand)]
    Check(CheckCommand),
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    /// HNN extension with central infinite cyclic associated subgroups.
    HnnCyclic {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        h: String,
        #[arg(long)]
        k: String,
        #[arg(long)]
        primes: String,
    },
    /// HNN extension with central associated subgroups.
    HnnChain {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value = "")]
        h_gens: String,
        #[arg(long, default_value = "")]
        k_gens: String,
        /// Images of the H generators, separated by `;`.
        #[arg(long, default_value = "")]
        phi: String,
        #[arg(long)]
        primes: String,
        #[arg(long, default_value_t = 16)]
        kmax: u32,
        #[arg(long, default_value_t = 64)]
        imax: i128,
    },
    /// Amalgamated product; with `--retract` the retract criterion is used.
    Amalgam {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value = "")]
        u_in_a: String,
        #[arg(long, default_value = "")]
        u_in_b: String,
        /// Images in B of the generators of B under a retraction onto U.
        #[arg(long)]
        retract: Option<String>,
        #[arg(long)]
        primes: String,
    },
    /// Graph of groups with central edge subgroups.
    Graph {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        primes: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Compare the library against brute force on finite fixtures.
    Compare {
        /// Group files or directories of `*.pc` files.
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Skip fixtures larger than this.
        #[arg(long, default_value_t = 243)]
        max_order: i128,
    },
}

/// Printable result of a command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

impl Response {
    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

/// Exit code for an error.
pub fn error_code(e: &Error) -> i32 {
    use nilsep_core::Error as E;
    match e {
        Error::Core(E::SearchExhausted(_) | E::TooLarge(_) | E::Overflow) => 2,
        Error::Core(E::InsideIsolator | E::NoRootFound) => 1,
        _ => 3,
    }
}

fn words(x: &PcPresentation, els: &[Element]) -> Vec<String> {
    els.iter().map(|e| x.format_element(e)).collect()
}

fn bracket(x: &PcPresentation, els: &[Element]) -> String {
    format!("<{}>", words(x, els).join(", "))
}

fn subgroup(x: &PcPresentation, s: &str) -> Result<Subgroup> {
    Ok(Subgroup::span(x, &parse_word_list(x, s)?)?)
}

pub fn run(cli: &Cli) -> Result<Response> {
    match &cli.command {
        Command::Isolate(a) => isolate(a),
        Command::Roots { sub, element } => roots(sub, element),
        Command::Nthroot { group, element, n } => nthroot(group, element, *n),
        Command::Separate { sub, element, pmax, kmax } => separation(sub, element, SeparationBounds { pmax: *pmax, kmax: *kmax }),
        Command::Residual { group, primes } => residual(group, primes),
        Command::Check(c) => check(c),
        Command::Oracle(OracleCommand::Compare { paths, max_order }) => compare(paths, *max_order),
    }
}

fn isolate(a: &SubgroupArgs) -> Result<Response> {
    let x = read_presentation(&a.group)?;
    let primes = parse_primes(&a.primes)?;
    let y = subgroup(&x, &a.subgroup)?;
    let iso = isolator(&x, &y, &primes)?;
    let index = iso.relative_index(&x, &y)?;
    let isolated = iso == y;
    let text = format!(
        "group {}\nprimes {primes}\nsubgroup {}\nisolator {}\nindex {index}\nisolated {}\n",
        x.name(),
        bracket(&x, &y.generators()),
        bracket(&x, &iso.generators()),
        if isolated { "yes" } else { "no" }
    );
    let json = json!({
        "command": "isolate",
        "group": x.name(),
        "primes": primes.to_string(),
        "subgroup": words(&x, &y.generators()),
        "isolator": words(&x, &iso.generators()),
        "index": index.to_string(),
        "isolated": isolated,
    });
    Ok(Response { text, json, code: 0 })
}

fn roots(a: &SubgroupArgs, element: &str) -> Result<Response> {
    let x = read_presentation(&a.group)?;
    let primes = parse_primes(&a.primes)?;
    let y = subgroup(&x, &a.subgroup)?;
    let e = parse_word(&x, element)?;
    let head = format!("element {}\nprimes {primes}\nsubgroup {}\n", x.format_element(&e), bracket(&x, &y.generators()));
    Ok(match root_witness(&x, &y, &e, &primes)? {
        Some(w) => Response {
            text: format!("{head}root yes\nq {}\npower {}\n", w.q, x.format_element(&w.power)),
            json: json!({
                "command": "roots", "element": x.format_element(&e), "primes": primes.to_string(),
                "root": true, "q": w.q.to_string(), "power": x.format_element(&w.power),
            }),
            code: 0,
        },
        None => Response {
            text: format!("{head}root no\n"),
            json: json!({"command": "roots", "element": x.format_element(&e), "primes": primes.to_string(), "root": false}),
            code: 1,
        },
    })
}

fn nthroot(group: &Path, element: &str, n: i128) -> Result<Response> {
    let x = read_presentation(group)?;
    let e = parse_word(&x, element)?;
    let rs = nth_roots(&x, &e, n)?;
    let mut text = format!("element {}\nn {n}\n", x.format_element(&e));
    if rs.is_empty() {
        text.push_str("root none\n");
    }
    for r in &rs {
        text.push_str(&format!("root {}\n", x.format_element(r)));
    }
    let json = json!({"command": "nthroot", "element": x.format_element(&e), "n": n.to_string(), "roots": words(&x, &rs)});
    Ok(Response { text, json, code: if rs.is_empty() { 1 } else { 0 } })
}

fn separation(a: &SubgroupArgs, element: &str, bounds: SeparationBounds) -> Result<Response> {
    let x = read_presentation(&a.group)?;
    let primes = parse_primes(&a.primes)?;
    let y = subgroup(&x, &a.subgroup)?;
    let e = parse_word(&x, element)?;
    match separate(&x, &y, &e, &primes, bounds) {
        Ok(w) => {
            let q = &w.quotient;
            let mut text = format!("# prime {} k {} kernel {}\n", w.prime, w.k, bracket(&x, &w.kernel.generators()));
            text.push_str(&write_presentation(q));
            let mut images = serde_json::Map::new();
            for (g, img) in x.generators().iter().zip(w.projection.images()) {
                text.push_str(&format!("img {} = {}\n", g.name, q.format_element(img)));
                images.insert(g.name.clone(), Value::String(q.format_element(img)));
            }
            let json = json!({
                "command": "separate", "separated": true, "prime": w.prime, "k": w.k,
                "kernel": words(&x, &w.kernel.generators()), "quotient": write_presentation(q), "images": images,
            });
            Ok(Response { text, json, code: 0 })
        }
        Err(nilsep_core::Error::InsideIsolator) => {
            let w = root_witness(&x, &y, &e, &primes)?.expect("element in the isolator has a root witness");
            let ev = format!("({})^{} = {}", x.format_element(&e), w.q, x.format_element(&w.power));
            Ok(Response {
                text: format!("refused: the element lies in the isolator\nwitness {ev}\n"),
                json: json!({"command": "separate", "separated": false, "q": w.q.to_string(), "power": x.format_element(&w.power)}),
                code: 1,
            })
        }
        Err(err) => Err(err.into()),
    }
}

fn residual(group: &Path, primes: &str) -> Result<Response> {
    let x = read_presentation(group)?;
    let primes = parse_primes(primes)?;
    if residually_c(&x, &primes)? {
        return Ok(Response {
            text: format!("group {}\nprimes {primes}\nresidual yes\n", x.name()),
            json: json!({"command": "residual", "group": x.name(), "primes": primes.to_string(), "residual": true}),
            code: 0,
        });
    }
    let t = nilsep_core::isolator::torsion_isolator(&x, &primes)?;
    let g = t.generators().into_iter().next().expect("nontrivial torsion");
    let o = x.element_order(&g)?.expect("torsion element");
    Ok(Response {
        text: format!("group {}\nprimes {primes}\nresidual no\nwitness {} order {o}\n", x.name(), x.format_element(&g)),
        json: json!({
            "command": "residual", "group": x.name(), "primes": primes.to_string(), "residual": false,
            "witness": x.format_element(&g), "order": o.to_string(),
        }),
        code: 1,
    })
}

fn verdict_response(kind: &str, v: &Verdict) -> Response {
    let mut text = format!("verdict {}\n", v.outcome);
    if let Outcome::Unknown(reason) = &v.outcome {
        text.push_str(&format!("reason {reason}\n"));
    }
    for c in &v.conditions {
        text.push_str(&format!("condition {}: {}\n  {}\n", c.label, c.status, c.evidence));
    }
    let conditions: Vec<Value> = v
        .conditions
        .iter()
        .map(|c| json!({"label": c.label, "status": c.status.to_string(), "evidence": c.evidence}))
        .collect();
    let mut json = json!({"command": format!("check {kind}"), "verdict": v.outcome.to_string(), "conditions": conditions});
    if let Outcome::Unknown(reason) = &v.outcome {
        json["reason"] = Value::String(reason.clone());
    }
    let code = match v.outcome {
        Outcome::Yes => 0,
        Outcome::No => 1,
        Outcome::Unknown(_) => 2,
    };
    Response { text, json, code }
}

fn check(c: &CheckCommand) -> Result<Response> {
    match c {
        CheckCommand::HnnCyclic { group, h, k, primes } => {
            let x = read_presentation(group)?;
            let inst = HnnCyclicInstance { h: parse_word(&x, h)?, k: parse_word(&x, k)?, primes: parse_primes(primes)?, group: x };
            Ok(verdict_response("hnn-cyclic", &check_hnn_cyclic(&inst)?))
        }
        CheckCommand::HnnChain { group, h_gens, k_gens, phi, primes, kmax, imax } => {
            let x = read_presentation(group)?;
            let (h, k, img) = (parse_word_list(&x, h_gens)?, parse_word_list(&x, k_gens)?, parse_word_list(&x, phi)?);
            let inst = HnnChainInstance::new(x, h, k, img, parse_primes(primes)?)?;
            let bounds = CriteriaBounds { kmax: *kmax, imax: *imax, ..CriteriaBounds::default() };
            Ok(verdict_response("hnn-chain", &check_hnn_chain(&inst, &bounds)?))
        }
        CheckCommand::Amalgam { a, b, u_in_a, u_in_b, retract, primes } => {
            let (xa, xb) = (read_presentation(a)?, read_presentation(b)?);
            let (ua, ub) = (parse_word_list(&xa, u_in_a)?, parse_word_list(&xb, u_in_b)?);
            let r = retract.as_deref().map(|r| parse_word_list(&xb, r)).transpose()?;
            let with_retract = r.is_some();
            let inst = AmalgamInstance::new(xa, xb, ua, ub, r, parse_primes(primes)?)?;
            if with_retract {
                Ok(verdict_response("amalgam", &check_amalgam_retract(&inst)?))
            } else {
                Ok(verdict_response("amalgam", &check_amalgam_normal(&inst)?))
            }
        }
        CheckCommand::Graph { spec, primes } => {
            let g = read_graph(spec, parse_primes(primes)?)?;
            Ok(verdict_response("graph", &check_graph_central(&g)?))
        }
    }
}

fn compare(paths: &[PathBuf], max_order: i128) -> Result<Response> {
    let mut fixtures = Vec::new();
    for p in paths {
        if p.is_dir() {
            fixtures.extend(load_fixture_dir(p)?);
        } else {
            let name = p.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
            fixtures.push((name, read_presentation(p)?));
        }
    }
    fixtures.retain(|(_, x)| x.order().is_some_and(|o| o <= max_order));
    let report = oracle_compare(&fixtures, &default_prime_sets())?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for f in &report.fixtures {
        text.push_str(&format!(
            "fixture {} order {} subgroups {} checks {} mismatches {}\n",
            f.name,
            f.order,
            f.subgroups,
            f.checks,
            f.mismatches.len()
        ));
        for m in &f.mismatches {
            text.push_str(&format!("  mismatch {m}\n"));
        }
        rows.push(json!({
            "name": f.name, "order": f.order, "subgroups": f.subgroups, "checks": f.checks, "mismatches": f.mismatches,
        }));
    }
    text.push_str(&format!("total fixtures {} checks {} mismatches {}\n", report.fixtures.len(), report.checks(), report.mismatches()));
    let json = json!({
        "command": "oracle compare", "fixtures": rows, "checks": report.checks(), "mismatches": report.mismatches(),
    });
    Ok(Response { text, json, code: if report.mismatches() == 0 { 0 } else { 1 } })
}
