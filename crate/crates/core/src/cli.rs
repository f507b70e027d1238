//! Command-line front end. Every subcommand parses its arguments, calls
//! the library, and prints either text or a single JSON object.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on
//! usage, parse or input errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::exactarith::ExtendedRational;
use crate::family::{self, Variant};
use crate::ledger::{Ledger, SlopeSet};
use crate::montesinos::{self, MontesinosLink};
use crate::seifert::{self, SeifertManifold};
use crate::surgery::{self, FramedLink};
use crate::tangle::{self, SlottedPresentation};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "sfslopes", version, about = "Exact tangle, Montesinos, Seifert and surgery calculus")]
pub struct Cli {
    /// Emit a single JSON object instead of text
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rational tangles
    #[command(subcommand)]
    Tangle(TangleCmd),
    /// Montesinos links
    #[command(subcommand)]
    Montesinos(MontesinosCmd),
    /// Seifert fibered spaces over S²
    #[command(subcommand)]
    Seifert(SeifertCmd),
    /// Framed-link surgery descriptions
    #[command(subcommand)]
    Surgery(SurgeryCmd),
    /// The twist family K_n
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Known exceptional-slope facts
    #[command(subcommand)]
    Ledger(LedgerCmd),
}

fn fraction(s: &str) -> Result<ExtendedRational, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn montesinos_link(s: &str) -> Result<MontesinosLink, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn seifert_manifold(s: &str) -> Result<SeifertManifold, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn slots(s: &str) -> Result<SlottedPresentation, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn slope_set(s: &str) -> Result<SlopeSet, String> {
    s.parse()
}

#[derive(Debug, Subcommand)]
pub enum TangleCmd {
    /// Fraction and canonical continued-fraction word of a tangle
    Fraction {
        #[arg(value_parser = fraction, allow_hyphen_values = true)]
        r: ExtendedRational,
    },
    /// Mirror image of a tangle
    Mirror {
        #[arg(value_parser = fraction, allow_hyphen_values = true)]
        r: ExtendedRational,
    },
    /// Untangle surgery on a marked slot, e.g. --slots "inf*,inf*,3/1" --slot 1 --r -1/2
    Surgery {
        #[arg(long, value_parser = slots, allow_hyphen_values = true)]
        slots: SlottedPresentation,
        #[arg(long)]
        slot: usize,
        #[arg(long, value_parser = fraction, allow_hyphen_values = true)]
        r: ExtendedRational,
    },
    /// Number of slots holding non-integral finite tangles
    Count {
        #[arg(value_parser = slots, allow_hyphen_values = true)]
        slots: SlottedPresentation,
    },
}

#[derive(Debug, Args)]
pub struct OneLink {
    #[arg(value_parser = montesinos_link)]
    link: MontesinosLink,
}

#[derive(Debug, Subcommand)]
pub enum MontesinosCmd {
    /// Normal form with every fraction in (0, 1)
    Normalize(OneLink),
    /// Mirror image
    Mirror(OneLink),
    /// Compare two links up to isotopy
    Equiv {
        #[arg(value_parser = montesinos_link)]
        a: MontesinosLink,
        #[arg(value_parser = montesinos_link)]
        b: MontesinosLink,
        /// Also allow a global mirror
        #[arg(long)]
        unoriented: bool,
    },
    /// Seifert invariants of the double branched cover
    Dbc(OneLink),
}

#[derive(Debug, Args)]
pub struct OneManifold {
    #[arg(value_parser = seifert_manifold)]
    manifold: SeifertManifold,
}

#[derive(Debug, Subcommand)]
pub enum SeifertCmd {
    /// Normal form
    Normalize(OneManifold),
    /// Order of first homology
    H1(OneManifold),
    /// Exceptional-fiber type S²(n1, n2, n3), if there are exactly three
    Type(OneManifold),
    /// Lens space, if there are at most two exceptional fibers
    Lens(OneManifold),
    /// Orientation reversal
    Mirror(OneManifold),
    /// Euler number
    Euler(OneManifold),
    /// All invariants
    Info(OneManifold),
    /// Compare two manifolds
    Homeo {
        #[arg(value_parser = seifert_manifold)]
        a: SeifertManifold,
        #[arg(value_parser = seifert_manifold)]
        b: SeifertManifold,
        #[arg(long)]
        unoriented: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum SurgeryCmd {
    /// Order of H1 of a link given as a JSON file path or inline JSON
    H1 { link: String },
    /// Rolfsen twist along an unknotted component
    Twist {
        link: String,
        #[arg(long)]
        component: String,
        #[arg(long, allow_hyphen_values = true)]
        t: i64,
        /// Delete unfilled components afterwards
        #[arg(long)]
        delete: bool,
    },
    /// Slope r - m w² on the untwisted knot
    Slope {
        #[arg(value_parser = fraction, allow_hyphen_values = true)]
        r: ExtendedRational,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, default_value_t = 1)]
        w: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum FamilyCmd {
    /// Verify one member of the family
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        /// Mirror-of-K_{-n} variant, n in {3, 4, 5}
        #[arg(long)]
        primed: bool,
    },
    /// Verify every standard member in a range
    Sweep {
        #[arg(long, allow_hyphen_values = true, default_value_t = -100)]
        from: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 100)]
        to: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum LedgerCmd {
    /// Facts deciding membership of a slope in a set
    Query {
        #[arg(long, value_parser = slope_set)]
        set: SlopeSet,
        #[arg(long, value_parser = fraction, allow_hyphen_values = true)]
        slope: ExtendedRational,
        /// Alternative facts file
        #[arg(long)]
        facts: Option<PathBuf>,
    },
    /// Containment facts among the slope sets
    Containments {
        #[arg(long)]
        facts: Option<PathBuf>,
    },
}

/// Result of a subcommand: JSON payload, text rendering, exit code.
struct Output {
    json: Value,
    text: String,
    code: u8,
}

impl Output {
    fn ok(json: Value, text: impl Into<String>) -> Self {
        Output { json, text: text.into(), code: EXIT_OK }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            // the flag never got parsed, so look for it by hand
            if e.use_stderr() && argv.iter().skip(1).any(|a| a == "--json") {
                let first = rendered.lines().next().unwrap_or_default();
                let _ = writeln!(out, "{}", json!({ "error": first.trim_start_matches("error: ") }));
            }
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{rendered}");
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(o) => {
            let body = if cli.json { o.json.to_string() } else { o.text };
            let _ = writeln!(out, "{}", body.trim_end());
            o.code
        }
        Err(message) => {
            if cli.json {
                let _ = writeln!(out, "{}", json!({ "error": message }));
            }
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
    }
}

fn execute(command: &Command) -> Result<Output, String> {
    match command {
        Command::Tangle(c) => tangle_cmd(c),
        Command::Montesinos(c) => montesinos_cmd(c),
        Command::Seifert(c) => Ok(seifert_cmd(c)),
        Command::Surgery(c) => surgery_cmd(c),
        Command::Family(c) => family_cmd(c),
        Command::Ledger(c) => ledger_cmd(c),
    }
}

fn tangle_json(t: &tangle::RationalTangle) -> Output {
    Output::ok(
        json!({ "fraction": t.fraction().to_string(), "word": t.word().to_string() }),
        format!("{} {}", t.fraction(), t.word()),
    )
}

fn tangle_cmd(c: &TangleCmd) -> Result<Output, String> {
    Ok(match c {
        TangleCmd::Fraction { r } => tangle_json(&tangle::tangle_from_fraction(r)),
        TangleCmd::Mirror { r } => tangle_json(&tangle::mirror(&tangle::tangle_from_fraction(r))),
        TangleCmd::Surgery { slots, slot, r } => {
            let p = tangle::untangle_surgery(slots, *slot, r).map_err(|e| e.to_string())?;
            Output::ok(
                json!({
                    "presentation": p.to_string(),
                    "nontrivial_slots": tangle::nontrivial_slot_count(&p),
                }),
                p.to_string(),
            )
        }
        TangleCmd::Count { slots } => {
            let n = tangle::nontrivial_slot_count(slots);
            Output::ok(json!({ "nontrivial_slots": n }), n.to_string())
        }
    })
}

fn link_output(m: &MontesinosLink) -> Output {
    Output::ok(json!({ "link": m.to_string() }), m.to_string())
}

fn montesinos_cmd(c: &MontesinosCmd) -> Result<Output, String> {
    Ok(match c {
        MontesinosCmd::Normalize(OneLink { link }) => link_output(&montesinos::normalize(link)),
        MontesinosCmd::Mirror(OneLink { link }) => link_output(&montesinos::mirror(link)),
        MontesinosCmd::Equiv { a, b, unoriented } => {
            let eq = montesinos::equivalent(a, b, !unoriented);
            Output::ok(json!({ "equivalent": eq }), eq.to_string())
        }
        MontesinosCmd::Dbc(OneLink { link }) => {
            let s = montesinos::double_branched_cover(link);
            Output::ok(s.to_json(), seifert::normalize(&s).to_string())
        }
    })
}

fn seifert_cmd(c: &SeifertCmd) -> Output {
    let manifold_output = |s: &SeifertManifold| Output::ok(json!({ "manifold": s.to_string() }), s.to_string());
    match c {
        SeifertCmd::Normalize(OneManifold { manifold }) => manifold_output(&seifert::normalize(manifold)),
        SeifertCmd::Mirror(OneManifold { manifold }) => manifold_output(&seifert::mirror(manifold)),
        SeifertCmd::H1(OneManifold { manifold }) => {
            let h = seifert::h1_order(manifold);
            Output::ok(json!({ "h1": crate::json_h1(&h) }), h.to_string())
        }
        SeifertCmd::Type(OneManifold { manifold }) => {
            let t = seifert::small_seifert_type(manifold);
            let text = match &t {
                Some([a, b, c]) => format!("S2({a},{b},{c})"),
                None => "none".into(),
            };
            let json_t = t.map(|t| t.iter().map(crate::json_int).collect::<Vec<_>>());
            Output::ok(json!({ "type_triple": json_t }), text)
        }
        SeifertCmd::Lens(OneManifold { manifold }) => {
            let l = seifert::as_lens(manifold).map(|l| l.to_string());
            let text = l.clone().unwrap_or_else(|| "none".into());
            Output::ok(json!({ "lens": l }), text)
        }
        SeifertCmd::Euler(OneManifold { manifold }) => {
            let e = seifert::euler_number(manifold).to_string();
            Output::ok(json!({ "euler_number": e }), e)
        }
        SeifertCmd::Info(OneManifold { manifold }) => {
            let v = manifold.to_json();
            let text = format!(
                "{} euler={} h1={}",
                seifert::normalize(manifold),
                seifert::euler_number(manifold),
                seifert::h1_order(manifold)
            );
            Output::ok(v, text)
        }
        SeifertCmd::Homeo { a, b, unoriented } => {
            let eq = seifert::same_up_to_homeo(a, b, !unoriented);
            Output::ok(json!({ "homeomorphic": eq }), eq.to_string())
        }
    }
}

fn read_link(arg: &str) -> Result<FramedLink, String> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| format!("reading {arg}: {e}"))?
    };
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("link JSON: {e}"))?;
    FramedLink::from_json(&value).map_err(|e| e.to_string())
}

fn surgery_cmd(c: &SurgeryCmd) -> Result<Output, String> {
    Ok(match c {
        SurgeryCmd::H1 { link } => {
            let l = read_link(link)?;
            let h = surgery::h1_from_link(&l).map_err(|e| e.to_string())?;
            Output::ok(json!({ "h1": crate::json_h1(&h) }), h.to_string())
        }
        SurgeryCmd::Twist { link, component, t, delete } => {
            let l = read_link(link)?;
            let u = l.index_of(component).map_err(|e| e.to_string())?;
            let mut twisted = surgery::rolfsen_twist(&l, u, *t).map_err(|e| e.to_string())?;
            if *delete {
                twisted = surgery::delete_unfilled(&twisted);
            }
            Output::ok(json!({ "link": twisted.to_json() }), twisted.to_string())
        }
        SurgeryCmd::Slope { r, m, w } => {
            let s = surgery::twist_slope(r, *m, *w).map_err(|e| e.to_string())?;
            Output::ok(json!({ "slope": s.to_string() }), s.to_string())
        }
    })
}

fn family_cmd(c: &FamilyCmd) -> Result<Output, String> {
    match c {
        FamilyCmd::Verify { n, primed } => {
            let variant = if *primed { Variant::Primed } else { Variant::Standard };
            let report = family::verify(*n, variant).map_err(|e| e.to_string())?;
            let code = if report.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED };
            Ok(Output { json: report.to_json(), text: report.to_string(), code })
        }
        FamilyCmd::Sweep { from, to } => {
            if from > to {
                return Err(format!("empty range: --from {from} is above --to {to}"));
            }
            let reports = family::sweep(*from, *to);
            let failed: Vec<i64> = reports.iter().filter(|r| !r.all_passed()).map(|r| r.n).collect();
            let mut text = String::new();
            for r in &reports {
                let status = if r.all_passed() { "ok" } else { "FAIL" };
                let triple = match &r.type_triple {
                    Some([a, b, c]) => format!("S2({a},{b},{c})"),
                    None => r.lens.as_ref().map_or("none".into(), |l| l.to_string()),
                };
                text.push_str(&format!("n={:>5} {:<16} h1={:<9} {status}\n", r.n, triple, r.h1.to_string()));
            }
            text.push_str(&format!("{} of {} passed\n", reports.len() - failed.len(), reports.len()));
            let json = json!({
                "from": from,
                "to": to,
                "all_passed": failed.is_empty(),
                "failed": failed,
                "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            });
            let code = if failed.is_empty() { EXIT_OK } else { EXIT_CHECK_FAILED };
            Ok(Output { json, text, code })
        }
    }
}

fn load_ledger(path: &Option<PathBuf>) -> Result<Ledger, String> {
    match path {
        Some(p) => Ledger::load(p).map_err(|e| e.to_string()),
        None => Ok(Ledger::builtin()),
    }
}

fn ledger_cmd(c: &LedgerCmd) -> Result<Output, String> {
    match c {
        LedgerCmd::Query { set, slope, facts } => {
            let ledger = load_ledger(facts)?;
            let hits = ledger.query(*set, slope);
            let text: Vec<String> = hits.iter().map(|f| f.to_string()).collect();
            Ok(Output::ok(
                json!({
                    "set": set.to_string(),
                    "slope": slope.to_string(),
                    "facts": hits.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
                }),
                if text.is_empty() { "no facts".to_string() } else { text.join("\n") },
            ))
        }
        LedgerCmd::Containments { facts } => {
            let ledger = load_ledger(facts)?;
            let hits = ledger.containments();
            let text: Vec<String> = hits.iter().map(|f| f.to_string()).collect();
            Ok(Output::ok(
                json!({ "facts": hits.iter().map(|f| f.to_json()).collect::<Vec<_>>() }),
                text.join("\n"),
            ))
        }
    }
}
