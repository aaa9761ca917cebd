use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use airytrace::airy::{trace, F2Poly, Family, Form, SheafSpec};
use airytrace::census::{census_for_g, census_naive, census_wht, empirical_moment, moment_decimal, CensusReport, Domain, NaiveOptions};
use airytrace::exactnum::RealInterval;
use airytrace::gf2m::{is_irreducible, parse_modulus, FieldCtx, FqElt};
use airytrace::moments::corollary_m4_check;
use airytrace::ppd::{f_at_one_closed, f_eval, sweep, verify_tori, ToriFamily, ToriReport};
use airytrace::vdgvv::kernel_trace_report;
use airytrace::verify::{self, Tier};

#[derive(Parser, Debug)]
#[command(name = "airytrace", version, about = "Exact trace computations for Airy sheaves over F_2^d")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Working precision for interval computations.
    #[arg(long, global = true, default_value_t = 128)]
    precision_bits: u32,
    /// JSON-lines checkpoint file for the naive census.
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,
    /// Override the field modulus (hex, e.g. 0x211 for x^9 + x^4 + 1).
    #[arg(long, global = true)]
    field_poly: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Modulus, size and a primitive element of F_2^d.
    FieldInfo {
        #[arg(long, default_value_t = 8)]
        degree: u32,
    },
    /// One trace value.
    Trace {
        /// suzuki:N, infg:N, top:N, monomial:N:E or exps:N:E1,E2,...
        #[arg(long, default_value = "suzuki:1")]
        spec: String,
        #[arg(long)]
        degree: u32,
        /// Field element as an integer bit pattern (decimal or 0x-hex).
        #[arg(long, default_value = "1")]
        t: String,
        /// Use the descent G with r = t(q).
        #[arg(long)]
        descent: bool,
    },
    /// Exact multiset of trace values over a field.
    Census {
        #[arg(long, default_value = "suzuki:1")]
        spec: String,
        #[arg(long)]
        degree: u32,
        #[arg(long, value_enum, default_value_t = DomainArg::Units)]
        domain: DomainArg,
        /// Per-t evaluation instead of the transform.
        #[arg(long)]
        naive: bool,
        #[arg(long)]
        descent: bool,
        /// Also report M_{a,b} for these exponents.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        moment: Option<Vec<u32>>,
    },
    /// Moment bounds.
    Moments {
        #[command(subcommand)]
        cmd: MomentsCmd,
    },
    /// Torus orders, primitive prime divisors and cosine products.
    Ppd {
        #[command(subcommand)]
        cmd: PpdCmd,
    },
    /// |trace at 0|^2 through the kernel of the linearized pairing.
    Kernel {
        #[arg(long)]
        n: u32,
        /// Defaults to 2(2n+1).
        #[arg(long)]
        degree: Option<u32>,
        /// Also sum directly.
        #[arg(long)]
        direct: bool,
    },
    /// Run the reproduction battery and print the ledger.
    VerifyPaper {
        #[arg(long, value_enum, default_value_t = TierArg::Quick)]
        tier: TierArg,
    },
}

#[derive(Subcommand, Debug)]
enum MomentsCmd {
    /// The exact ledger ruling out M_{2,2} = 2.
    M4Check,
}

#[derive(Subcommand, Debug)]
enum PpdCmd {
    Suzuki(SweepArgs),
    Ree(SweepArgs),
    /// All torus checks for one n.
    Check {
        #[arg(long)]
        family: ToriFamily,
        #[arg(long)]
        n: u64,
    },
    /// f_n^(alpha mod delta)(x) with its closed constant at x = 1.
    Product {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        alpha: u64,
        #[arg(long)]
        delta: u64,
        /// Rational point p/q.
        #[arg(long, default_value = "1")]
        x: String,
    },
}

#[derive(clap::Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    n_min: Option<u64>,
    #[arg(long)]
    n_max: u64,
    /// Certify a primitive prime divisor up to this n.
    #[arg(long, default_value_t = 49)]
    ppd_max: u64,
    /// Cross-check resultants against cosine products up to this n.
    #[arg(long, default_value_t = 99)]
    interval_max: u64,
    /// Output format for the sweep (overrides --format).
    #[arg(long, value_enum)]
    report: Option<Format>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DomainArg {
    All,
    Units,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TierArg {
    Quick,
    Full,
}

/// What a subcommand produced; every format is a projection of the JSON.
struct Report {
    json: Value,
    csv: String,
    text: String,
    ok: bool,
}

impl Report {
    fn plain(json: Value, text: String) -> Self {
        let csv = match &json {
            Value::Object(m) => {
                let keys: Vec<&String> = m.keys().collect();
                let vals: Vec<String> = m.values().map(csv_cell).collect();
                format!("{}\n{}\n", keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(","), vals.join(","))
            }
            v => format!("{}\n", csv_cell(v)),
        };
        Report { json, csv, text, ok: true }
    }
}

fn csv_cell(v: &Value) -> String {
    let s = match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

fn parse_spec(s: &str) -> Result<SheafSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    let n = |i: usize| -> Result<u32> {
        parts.get(i).ok_or_else(|| anyhow!("spec {s:?} is missing n"))?.parse().with_context(|| format!("bad n in {s:?}"))
    };
    let spec = match parts[0] {
        "suzuki" => SheafSpec::suzuki_standard(n(1)?)?,
        "infg" => SheafSpec::infg_family(n(1)?)?,
        "top" => SheafSpec::top_monomial(n(1)?)?,
        "monomial" => {
            let e = parts.get(2).ok_or_else(|| anyhow!("monomial spec needs an exponent"))?.parse()?;
            SheafSpec::monomial(n(1)?, e)?
        }
        "exps" => {
            let list = parts.get(2).ok_or_else(|| anyhow!("exps spec needs exponents"))?;
            let exps = list.split(',').map(|e| e.trim().parse::<u128>()).collect::<std::result::Result<Vec<_>, _>>()?;
            SheafSpec::new(n(1)?, F2Poly::from_exponents(exps), None, Form::F, Family::Custom)?
        }
        other => bail!("unknown spec kind {other:?}"),
    };
    Ok(spec)
}

fn parse_elt(s: &str) -> Result<u32> {
    match s.strip_prefix("0x") {
        Some(h) => Ok(u32::from_str_radix(h, 16)?),
        None => Ok(s.parse()?),
    }
}

fn parse_ratio(s: &str, prec: u32) -> Result<RealInterval> {
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q): (i64, i64) = (p.trim().parse()?, q.trim().parse()?);
            if q <= 0 {
                bail!("denominator must be positive");
            }
            Ok(RealInterval::from_ratio(p, q, prec))
        }
        None => Ok(RealInterval::from_int(s.trim().parse()?, prec)),
    }
}

fn field(cli: &Cli, degree: u32) -> Result<FieldCtx> {
    let ctx = match &cli.field_poly {
        Some(p) => {
            let ctx = FieldCtx::with_modulus(parse_modulus(p)?)?;
            if ctx.degree() != degree {
                bail!("--field-poly has degree {} but degree {degree} was requested", ctx.degree());
            }
            ctx
        }
        None => FieldCtx::new(degree)?,
    };
    Ok(if degree <= 20 { ctx.with_tables() } else { ctx })
}

fn census_report(rep: &CensusReport, moment: Option<&[u32]>) -> Result<Report> {
    let mut json = rep.to_json();
    let mut text = rep.to_text();
    if let Some([a, b]) = moment {
        let m = empirical_moment(rep, *a, *b)?;
        json["moment"] = json!({ "a": a, "b": b, "exact": m.to_string(), "decimal": moment_decimal(&m, 30) });
        if (*a, *b) != (2, 2) {
            text.push_str(&format!("M_{a},{b} = {}\n", moment_decimal(&m, 30)));
        }
    }
    Ok(Report { json, csv: rep.to_csv(), text, ok: true })
}

fn sweep_report(reports: &[ToriReport]) -> Report {
    let mut csv = String::from("family,n,passed,p_minus,p_plus,ppd_minus,ppd_plus\n");
    let mut text = String::new();
    for r in reports {
        let ell = |w: &Option<airytrace::ppd::PpdWitness>| w.as_ref().map(|w| w.ell.clone()).unwrap_or_default();
        csv.push_str(&format!(
            "{:?},{},{},{},{},{},{}\n",
            r.family,
            r.n,
            r.passed(),
            r.p_minus,
            r.p_plus,
            ell(&r.ppd_minus),
            ell(&r.ppd_plus)
        ));
        if !r.passed() {
            text.push_str(&format!("n={}: {}\n", r.n, r.failures.join("; ")));
        }
    }
    let ok = reports.iter().all(ToriReport::passed);
    text.push_str(&format!("{} of {} values of n pass\n", reports.iter().filter(|r| r.passed()).count(), reports.len()));
    Report { json: serde_json::to_value(reports).expect("reports serialize"), csv, text, ok }
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.cmd {
        Cmd::FieldInfo { degree } => {
            let degree = match &cli.field_poly {
                Some(p) => FieldCtx::with_modulus(parse_modulus(p)?)?.degree(),
                None => *degree,
            };
            let ctx = field(cli, degree)?;
            let g = ctx.primitive_element();
            let json = json!({
                "degree": ctx.degree(),
                "modulus": ctx.modulus_hex(),
                "irreducible": is_irreducible(ctx.modulus()),
                "size": ctx.size(),
                "primitive_element": format!("{:#x}", g.0),
            });
            let text = format!("F_2^{} = F_2[x]/({}), {} elements, primitive element {:#x}\n", ctx.degree(), ctx.modulus_hex(), ctx.size(), g.0);
            Ok(Report::plain(json, text))
        }
        Cmd::Trace { spec, degree, t, descent } => {
            let mut spec = parse_spec(spec)?;
            if *descent {
                spec = spec.default_descent()?;
            }
            let ctx = field(cli, *degree)?;
            let t = ctx.check(FqElt(parse_elt(t)?))?;
            let v = trace(&spec, &ctx, t)?;
            let json = json!({ "spec": spec.summary(), "degree": degree, "t": format!("{:#x}", t.0), "trace": v.to_string() });
            Ok(Report::plain(json, format!("{v}\n")))
        }
        Cmd::Census { spec, degree, domain, naive, descent, moment } => {
            let spec = parse_spec(spec)?;
            let ctx = field(cli, *degree)?;
            let domain = match domain {
                DomainArg::All => Domain::All,
                DomainArg::Units => Domain::Units,
            };
            let rep = if *descent {
                if domain == Domain::All {
                    bail!("the descent census is over k^x only");
                }
                census_for_g(&spec.default_descent()?, &ctx)?
            } else if *naive || cli.checkpoint.is_some() {
                let opts = NaiveOptions { checkpoint: cli.checkpoint.as_deref(), ..NaiveOptions::default() };
                census_naive(&spec, &ctx, domain, &opts)?
            } else {
                census_wht(&spec, &ctx, domain)?
            };
            census_report(&rep, moment.as_deref())
        }
        Cmd::Moments { cmd: MomentsCmd::M4Check } => {
            let l = corollary_m4_check()?;
            let text = format!(
                "invariant dims {:?}\nminimum {}\nSwan bound {}\nbound at M = 2: {} ~ {}\ncontradiction with 3.999: {}\n",
                l.candidate_dims, l.min_dim, l.swan_bound, l.rhs_exact, l.rhs_decimal, l.contradiction
            );
            let mut r = Report::plain(serde_json::to_value(&l)?, text);
            r.ok = l.contradiction;
            Ok(r)
        }
        Cmd::Ppd { cmd } => match cmd {
            PpdCmd::Suzuki(a) | PpdCmd::Ree(a) => {
                let family = if matches!(cmd, PpdCmd::Suzuki(_)) { ToriFamily::Suzuki } else { ToriFamily::Ree };
                let lo = a.n_min.unwrap_or(family.minus_threshold());
                Ok(sweep_report(&sweep(family, lo, a.n_max, a.ppd_max, a.interval_max)?))
            }
            PpdCmd::Check { family, n } => Ok(sweep_report(&[verify_tori(*family, *n)?])),
            PpdCmd::Product { n, alpha, delta, x } => {
                let prec = cli.precision_bits;
                let v = f_eval(*n, *alpha, *delta, &parse_ratio(x, prec)?)?;
                let mut json = json!({
                    "n": n, "alpha": alpha, "delta": delta, "x": x,
                    "lo": v.lo().to_f64(), "hi": v.hi().to_f64(), "width_log2": v.width_log2(),
                });
                let mut text = format!("f({x}) in [{:e}, {:e}]\n", v.lo().to_f64(), v.hi().to_f64());
                if let Ok(c) = f_at_one_closed(*n, *alpha, *delta) {
                    json["closed_at_one"] = json!(c.to_string());
                    text.push_str(&format!("f(1) = {c}\n"));
                }
                Ok(Report::plain(json, text))
            }
        },
        Cmd::Kernel { n, degree, direct } => {
            let spec = SheafSpec::suzuki_standard(*n)?;
            let ctx = field(cli, degree.unwrap_or(2 * (2 * n + 1)))?;
            let rep = kernel_trace_report(&spec, &ctx, *direct)?;
            let text = format!(
                "kernel size {}, kernel sum {}, direct {}\n",
                rep.kernel_size,
                rep.kernel_sum,
                rep.direct_abs_sq.as_deref().unwrap_or("-")
            );
            let mut r = Report::plain(serde_json::to_value(&rep)?, text);
            r.ok = rep.consistent;
            Ok(r)
        }
        Cmd::VerifyPaper { tier } => {
            let tier = match tier {
                TierArg::Quick => Tier::Quick,
                TierArg::Full => Tier::Full,
            };
            let ledger = verify::run(tier);
            Ok(Report { json: serde_json::to_value(&ledger)?, csv: ledger.to_csv(), text: ledger.to_text(), ok: ledger.all_passed() })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    // a bad modulus is rejected before any work, whatever the subcommand
    if let Some(p) = &cli.field_poly {
        if let Err(e) = parse_modulus(p).and_then(FieldCtx::with_modulus) {
            eprintln!("error: --field-poly {p}: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(r) => {
            let fmt = match &cli.cmd {
                Cmd::Ppd { cmd: PpdCmd::Suzuki(a) | PpdCmd::Ree(a) } => a.report.unwrap_or(cli.format),
                _ => cli.format,
            };
            match fmt {
                Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).expect("json")),
                Format::Csv => print!("{}", r.csv),
                Format::Text => print!("{}", r.text),
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
