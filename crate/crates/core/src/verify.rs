//! The reproduction battery: each check recomputes one published value or
//! statement and records expected value, computed value and verdict.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::airy::{f2_point_traces_predicted, trace_f, trace_g, SheafSpec};
use crate::census::{census_naive, census_wht, CensusReport, Domain, NaiveOptions};
use crate::error::Result;
use crate::exactnum::interval::sqrt_int;
use crate::exactnum::{rational_to_decimal, rational_to_decimal_rounded, ClearedValue, RealInterval};
use crate::gf2m::{FieldCtx, FqElt};
use crate::moments::corollary_m4_check;
use crate::ntheory::gcd;
use crate::ppd::{
    diophantine_check, equi1_check, equi2_check, f_at_one_closed, f_eval, increasing_lemma_holds, sweep, ToriFamily,
};
use crate::vdgvv::{direct_closed_forms, kernel_trace_report, linearized_kernel, predict_closed_forms, traces_f0c_check, LinearizedPoly};
use crate::witt2::{w_trace, w_trace_fold, Witt2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Quick,
    Full,
}

impl std::str::FromStr for Tier {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "quick" => Ok(Tier::Quick),
            "full" => Ok(Tier::Full),
            _ => Err(format!("unknown tier {s:?}")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: u32,
    pub name: String,
    pub statement: String,
    pub expected: String,
    pub computed: String,
    pub passed: bool,
    /// Excluded from determinism comparisons.
    pub elapsed_ms: u128,
}

impl Check {
    pub fn line(&self) -> String {
        format!("{} [{:>2}] {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Ledger {
    pub tier: Tier,
    pub checks: Vec<Check>,
}

impl Ledger {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(s, "{}", c.line());
            let _ = writeln!(s, "       statement: {}", c.statement);
            let _ = writeln!(s, "       expected:  {}", c.expected);
            let _ = writeln!(s, "       computed:  {}", c.computed);
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(s, "{passed}/{} checks passed", self.checks.len());
        s
    }

    pub fn to_csv(&self) -> String {
        let q = |v: &str| format!("\"{}\"", v.replace('"', "\"\""));
        let mut s = String::from("id,name,passed,expected,computed\n");
        for c in &self.checks {
            let _ = writeln!(s, "{},{},{},{},{}", c.id, q(&c.name), c.passed, q(&c.expected), q(&c.computed));
        }
        s
    }
}

fn timed<F: FnOnce() -> Result<(String, String, bool)>>(id: u32, name: &str, statement: &str, f: F) -> Check {
    let start = Instant::now();
    let (expected, computed, passed) = match f() {
        Ok(v) => v,
        Err(e) => ("(no error)".into(), format!("error: {e}"), false),
    };
    Check {
        id,
        name: name.into(),
        statement: statement.into(),
        expected,
        computed,
        passed,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

fn seven_traces() -> BTreeMap<ClearedValue, u64> {
    [((0, -2), 16256), ((-2, 0), 4095), ((-1, 0), 52429), ((0, 0), 112347), ((1, 0), 60495), ((0, 2), 16512), ((14, 0), 9)]
        .into_iter()
        .map(|((a, b), m)| (ClearedValue::from_i64(a, b), m))
        .collect()
}

fn render_multiset(m: &BTreeMap<ClearedValue, u64>) -> String {
    m.iter().map(|(v, c)| format!("{v}:{c}")).collect::<Vec<_>>().join(", ")
}

pub const M22_PRINTED: &str = "3.99963378766551080898593515753";

/// The q = 8 census over F_2^18^x.
pub fn census_18() -> Result<CensusReport> {
    let spec = SheafSpec::suzuki_standard(1)?;
    let ctx = FieldCtx::new(18)?;
    census_wht(&spec, &ctx, Domain::Units)
}

pub fn check_census(report: &Result<CensusReport>) -> Check {
    timed(1, "seven-trace census over F_2^18", "the traces over F_2^18^x for q = 8 and their multiplicities", || {
        let rep = report.as_ref().map_err(Clone::clone)?;
        let want = seven_traces();
        let got = rep.multiset();
        Ok((render_multiset(&want), render_multiset(&got), got == want))
    })
}

pub fn check_m22(report: &Result<CensusReport>) -> Check {
    timed(2, "empirical fourth absolute moment over F_2^18", "M_{2,2} over F_2^18^x, printed to 29 decimals", || {
        let rep = report.as_ref().map_err(Clone::clone)?;
        let m = rep.m22();
        let rounded = rational_to_decimal_rounded(&m, 29);
        let computed = format!("{} = {}... (rounds to {rounded})", m, rational_to_decimal(&m, 32));
        Ok((M22_PRINTED.into(), computed, rounded == M22_PRINTED))
    })
}

pub fn check_descent_trace() -> Check {
    timed(3, "descent trace at t = 1 over F_2^15", "trace of Frob_1 on G_8 over F_2^15", || {
        let g = SheafSpec::suzuki_standard(1)?.default_descent()?;
        let ctx = FieldCtx::new(15)?.with_tables();
        let v = trace_g(&g, &ctx, FqElt(1))?;
        Ok(("14".into(), v.to_string(), v == ClearedValue::from_i64(14, 0)))
    })
}

pub fn check_f2_points(tier: Tier) -> Check {
    let randoms = if tier == Tier::Full { 20 } else { 10 };
    timed(4, "traces at t = 0, 1 over F_2", "case table by parity of (number of monomials) - n", || {
        let ctx = FieldCtx::new(1)?;
        let mut specs: Vec<SheafSpec> = (1..=6).map(SheafSpec::suzuki_standard).collect::<Result<_>>()?;
        let mut rng = ChaCha8Rng::seed_from_u64(0x01);
        for _ in 0..randoms {
            let n = rng.gen_range(1..=6);
            specs.push(SheafSpec::random(n, 6, &mut rng)?);
        }
        let mut bad = Vec::new();
        for s in &specs {
            let got = (trace_f(s, &ctx, FqElt(0))?, trace_f(s, &ctx, FqElt(1))?);
            if got != f2_point_traces_predicted(s) {
                bad.push(s.summary());
            }
        }
        Ok((
            format!("{} specs match the table", specs.len()),
            if bad.is_empty() { format!("{} specs match", specs.len()) } else { format!("mismatch: {}", bad.join("; ")) },
            bad.is_empty(),
        ))
    })
}

pub fn check_closed_forms() -> Check {
    timed(5, "traces at 0 and 1 over F_q", "Trace(Frob_0 | F_q) = -eps 2^n i and Trace(Frob_1 | F_q) = -1, n = 1..5", || {
        let mut exp = Vec::new();
        let mut got = Vec::new();
        let mut ok = true;
        for n in 1..=5 {
            let p = predict_closed_forms(n)?;
            let d = direct_closed_forms(n)?;
            ok &= p == d;
            exp.push(format!("n={n}: ({}, {})", p.0, p.1));
            got.push(format!("n={n}: ({}, {})", d.0, d.1));
        }
        Ok((exp.join("; "), got.join("; "), ok))
    })
}

pub fn check_kernel_method() -> Check {
    timed(6, "|trace at 0|^2 over F_{q^2}", "equals q/2 by the kernel sum and by direct summation; #Ker(F_{q^2}) = #Ker(F_q)", || {
        let mut exp = Vec::new();
        let mut got = Vec::new();
        let mut ok = true;
        for n in 1..=3u32 {
            let spec = SheafSpec::suzuki_standard(n)?;
            let big = FieldCtx::new(2 * (2 * n + 1))?.with_tables();
            let small = FieldCtx::new(2 * n + 1)?;
            let rep = kernel_trace_report(&spec, &big, true)?;
            let l = LinearizedPoly::new(0..=2 * n as u64);
            let kb = 1u64 << linearized_kernel(&big, &l).len();
            let ks = 1u64 << linearized_kernel(&small, &l).len();
            let half = 1i64 << (2 * n);
            ok &= rep.kernel_sum == half && rep.consistent && kb == ks && ks as i64 == half;
            exp.push(format!("n={n}: {half}"));
            got.push(format!(
                "n={n}: kernel {} direct {} #Ker {kb}/{ks}",
                rep.kernel_sum,
                rep.direct_abs_sq.unwrap_or_default()
            ));
        }
        Ok((exp.join("; "), got.join("; "), ok))
    })
}

pub fn check_nonintegral() -> Check {
    timed(7, "non-integral traces for f = x^((1+2^n) t(q))", "Frob_1 over F_2^k(n) for (n, k(n)) = (2,7), (3,5), (4,7), (5,7)", || {
        let cases = [(2u32, 7u32, (-7, 2), 2), (3, 5, (3, 5), 2), (4, 7, (7, -3), 4), (5, 7, (5, 0), 2)];
        let mut exp = Vec::new();
        let mut got = Vec::new();
        let mut ok = true;
        for (n, k, (re, im), den) in cases {
            let spec = SheafSpec::top_monomial(n)?;
            let ctx = FieldCtx::new(k)?;
            let v = trace_f(&spec, &ctx, FqElt(1))?;
            let q = |a: i64| BigRational::new(a.into(), BigInt::from(den));
            let want = ClearedValue::from_rational_parts(&q(re), &q(im)).expect("dyadic");
            ok &= v == want;
            exp.push(want.to_string());
            got.push(v.to_string());
        }
        Ok((exp.join(", "), got.join(", "), ok))
    })
}

fn tori_check(id: u32, family: ToriFamily, tier: Tier) -> Check {
    let (name, statement, lo, hi, ppd_max, iv_max) = match (family, tier) {
        (ToriFamily::Suzuki, Tier::Full) => ("Suzuki torus sweep", "P_{2,a}(n) > 2n for odd 7 <= n <= 2601, with identities and ppd(2, 4n) for n <= 49", 7, 2601, 49, 601),
        (ToriFamily::Suzuki, Tier::Quick) => ("Suzuki torus sweep", "P_{2,a}(n) > 2n for odd 7 <= n <= 199, with identities and ppd(2, 4n) for n <= 49", 7, 199, 49, 99),
        (ToriFamily::Ree, Tier::Full) => ("Ree torus sweep", "P_{3,a}(n) > 2n for odd 3 <= n <= 353, with identities and ppd(3, 6n) for n <= 25", 3, 353, 25, 353),
        (ToriFamily::Ree, Tier::Quick) => ("Ree torus sweep", "P_{3,a}(n) > 2n for odd 3 <= n <= 199, with identities and ppd(3, 6n) for n <= 25", 3, 199, 25, 99),
    };
    timed(id, name, statement, || {
        let reports = sweep(family, lo, hi, ppd_max, iv_max)?;
        let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| format!("n={}: {}", r.n, r.failures.join("; "))).collect();
        let ppds: Vec<String> = reports
            .iter()
            .filter(|r| r.n <= 13)
            .filter_map(|r| r.ppd_minus.as_ref().map(|w| format!("n={} l={}", r.n, w.ell)))
            .collect();
        let computed = if failed.is_empty() {
            format!("{} values of n pass; t- witnesses {}", reports.len(), ppds.join(", "))
        } else {
            failed.join(" | ")
        };
        Ok((format!("all odd n in [{lo}, {hi}] pass"), computed, failed.is_empty()))
    })
}

pub fn check_constants(tier: Tier) -> Check {
    let (hi, samples) = if tier == Tier::Full { (199, 100) } else { (99, 30) };
    timed(10, "constants f_n(1) and the growth bound", "closed forms of f_n(1) for (8,1), (8,3), (12,1), (12,5) and f(x) >= f(1) ((x+1)/2)^(2 phi(delta n)/phi(delta))", || {
        let mut bad = Vec::new();
        for n in (3..=hi).step_by(2) {
            for (delta, alpha) in [(8, 1), (8, 3), (12, 1), (12, 5)] {
                let closed = f_at_one_closed(n, alpha, delta)?;
                let direct = f_eval(n, alpha, delta, &RealInterval::from_int(1, 128))?;
                if !closed.to_interval(128).overlaps(&direct) {
                    bad.push(format!("closed n={n} {alpha} mod {delta}: {closed}"));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x10);
        let xs = [RealInterval::from_ratio(11, 10, 128), sqrt_int(2, 128), sqrt_int(3, 128), RealInterval::from_int(2, 128)];
        for _ in 0..samples {
            let n = rng.gen_range(1..=hi);
            let (delta, alpha) = [(8, 1), (8, 3), (12, 1), (12, 5)][rng.gen_range(0..4)];
            let xi = rng.gen_range(0..4);
            if !increasing_lemma_holds(n, alpha, delta, &xs[xi])? {
                bad.push(format!("growth n={n} {alpha} mod {delta} x#{xi}"));
            }
        }
        Ok((
            format!("closed forms agree for odd 3 <= n <= {hi}; {samples} growth samples hold"),
            if bad.is_empty() { "all agree".into() } else { bad.join(", ") },
            bad.is_empty(),
        ))
    })
}

pub fn check_equidistribution(tier: Tier) -> Check {
    let (s1, s2) = if tier == Tier::Full { (500, 200) } else { (100, 50) };
    timed(11, "equidistribution of coprime residues", "|N_a - phi(n)/m| < 2^omega(n); for m = 12 and 3 | n, |N_a - phi(n)/8| < 2^(omega(n)-1)", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x11);
        let mut bad = Vec::new();
        let mut done = 0;
        while done < s1 {
            let n = rng.gen_range(1..=10_000u64);
            let m = rng.gen_range(2..=30u64);
            if gcd(m, n) != 1 {
                continue;
            }
            done += 1;
            if !equi1_check(n, m)? {
                bad.push(format!("(m={m}, n={n})"));
            }
        }
        for _ in 0..s2 {
            let n = 3 * (2 * rng.gen_range(0..1666u64) + 1);
            if !equi2_check(n)? {
                bad.push(format!("n={n}"));
            }
        }
        Ok((format!("{s1} + {s2} samples hold"), if bad.is_empty() { "all hold".into() } else { bad.join(", ") }, bad.is_empty()))
    })
}

pub fn check_eqns() -> Check {
    timed(12, "no solutions to D = x^2-1, x(x-1)/2, x(x-1)/2-1", "D = 2^n (2^(2n+1) - 1), 2 <= n <= 50; n = 1 has x = 6 in the third", || {
        let mut bad = Vec::new();
        for n in 2..=50 {
            if !diophantine_check(n)?.consistent() {
                bad.push(n.to_string());
            }
        }
        let one = diophantine_check(1)?;
        let ok = bad.is_empty() && one.sol_iii.as_deref() == Some("6") && one.sol_i.is_none() && one.sol_ii.is_none();
        Ok((
            "none for 2..50; n=1: x=6".into(),
            format!(
                "failures [{}]; n=1: (i) {:?} (ii) {:?} (iii) {:?}",
                bad.join(","),
                one.sol_i,
                one.sol_ii,
                one.sol_iii
            ),
            ok,
        ))
    })
}

pub fn check_m4() -> Check {
    timed(13, "M_{2,2} = 2 ruled out", "invariant dimensions, Swan bound 8232 and the bound below 3.999", || {
        let l = corollary_m4_check()?;
        let ok = l.contradiction && l.min_dim == "7684" && l.swan_bound == 8232;
        Ok((
            "min dim 7684, Swan 8232, bound < 3.999".into(),
            format!(
                "dims {:?}, min {}, Swan {}, exact bound {} ~ {}, printed form ~ {}",
                l.candidate_dims, l.min_dim, l.swan_bound, l.rhs_exact, l.rhs_decimal, l.rhs_printed_decimal
            ),
            ok,
        ))
    })
}

pub fn check_oracles(tier: Tier) -> Check {
    let max_d = if tier == Tier::Full { 12 } else { 10 };
    timed(14, "transform census = naive census; closed Witt trace = fold", "exact equality for d <= 12 (5 random specs each) and all Witt vectors for d <= 8", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x14);
        let mut bad = Vec::new();
        for d in 1..=max_d {
            let ctx = FieldCtx::new(d)?.with_tables();
            for _ in 0..5 {
                let n = rng.gen_range(1..=3);
                let spec = SheafSpec::random(n, 5, &mut rng)?;
                let a = census_wht(&spec, &ctx, Domain::All)?;
                let b = census_naive(&spec, &ctx, Domain::All, &NaiveOptions::default())?;
                if a.multiset() != b.multiset() {
                    bad.push(format!("census d={d} {}", spec.summary()));
                }
            }
        }
        for d in 1..=8 {
            let ctx = FieldCtx::new(d)?;
            for a in ctx.elements() {
                for b in ctx.elements() {
                    let w = Witt2::new(a, b);
                    if w_trace(&ctx, w) != w_trace_fold(&ctx, w) {
                        bad.push(format!("witt d={d} ({a:?}, {b:?})"));
                    }
                }
            }
        }
        Ok(("identical".into(), if bad.is_empty() { "identical".into() } else { bad.join(", ") }, bad.is_empty()))
    })
}

pub fn check_f0c() -> Check {
    timed(15, "|trace at 0 over F_2^m|^2 in {0, 2^(m-1)}", "for the second family, n = 2..6, m = 2 floor(n/2) + 1; never 1", || {
        let mut exp = Vec::new();
        let mut got = Vec::new();
        let mut ok = true;
        for n in 2..=6 {
            let r = traces_f0c_check(n)?;
            ok &= r.allowed && r.abs_sq != "1";
            exp.push(format!("n={n}: 0 or {}", 1u64 << (r.m - 1)));
            got.push(format!("n={n}: {}", r.abs_sq));
        }
        Ok((exp.join("; "), got.join("; "), ok))
    })
}

/// Every check in order; the quick tier leaves out the F_2^18 census.
pub fn run(tier: Tier) -> Ledger {
    let mut checks = Vec::new();
    if tier == Tier::Full {
        let census = census_18();
        let mut first = check_census(&census);
        if let Ok(rep) = &census {
            first.elapsed_ms += rep.elapsed_ms;
        }
        checks.push(first);
        checks.push(check_m22(&census));
    }
    checks.extend([
        check_descent_trace(),
        check_f2_points(tier),
        check_closed_forms(),
        check_kernel_method(),
        check_nonintegral(),
        tori_check(8, ToriFamily::Suzuki, tier),
        tori_check(9, ToriFamily::Ree, tier),
        check_constants(tier),
        check_equidistribution(tier),
        check_eqns(),
        check_m4(),
        check_oracles(tier),
        check_f0c(),
    ]);
    Ledger { tier, checks }
}

/// Helper for callers that want a numeric summary.
pub fn passed_count(ledger: &Ledger) -> (usize, usize) {
    (ledger.checks.iter().filter(|c| c.passed).count(), ledger.checks.len())
}
