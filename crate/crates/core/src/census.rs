//! Full-field trace censuses.
//!
//! For the F form the Witt trace of [x^t(q), f(x) + t x] splits as
//! c0(x) + 2 Tr(t x) in Z/4, and Tr(t x) = parity(t & m(x)) with m the
//! trace mask. The raw sum at every t is then one Walsh-Hadamard transform of
//! s(m(x)) = i^c0(x). The naive path evaluates each t separately.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::airy::{self, Form, SheafSpec};
use crate::error::{Error, Result};
use crate::exactnum::{rational_to_decimal, ClearedRecord, ClearedValue, GaussInt};
use crate::gf2m::{FieldCtx, FqElt};
use crate::witt2::{w_trace, Witt2};

/// Largest degree for any census.
pub const MAX_CENSUS_DEGREE: u32 = 26;
/// Largest degree for the quadratic-time naive path.
pub const MAX_NAIVE_DEGREE: u32 = 20;
pub const CHECKPOINT_VERSION: u32 = 1;

/// Per-x data: the Z/4 class c0(x) and the trace mask m(x).
#[derive(Clone, Debug)]
pub struct PrecompTable {
    degree: u32,
    class: Vec<u8>,
    mask: Vec<u32>,
}

impl PrecompTable {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn class(&self, x: FqElt) -> u8 {
        self.class[x.bits() as usize]
    }

    pub fn mask(&self, x: FqElt) -> u32 {
        self.mask[x.bits() as usize]
    }

    /// Full Z/4 exponent at (x, t).
    #[inline]
    pub fn exponent(&self, x: FqElt, t: FqElt) -> u32 {
        let i = x.bits() as usize;
        (self.class[i] as u32 + 2 * ((t.bits() & self.mask[i]).count_ones() & 1)) & 3
    }

    /// How many x fall in each class.
    pub fn class_histogram(&self) -> [u64; 4] {
        let mut h = [0u64; 4];
        for &c in &self.class {
            h[c as usize] += 1;
        }
        h
    }

    /// Raw sum at t, straight from the table.
    pub fn raw_at(&self, t: u32) -> (i64, i64) {
        let mut cnt = [0i64; 4];
        for (c, m) in self.class.iter().zip(&self.mask) {
            let e = (*c as u32 + 2 * ((t & m).count_ones() & 1)) & 3;
            cnt[e as usize] += 1;
        }
        (cnt[0] - cnt[2], cnt[1] - cnt[3])
    }
}

fn check_degree(ctx: &FieldCtx, limit: u32) -> Result<()> {
    if ctx.degree() > limit {
        return Err(Error::TooLarge { degree: ctx.degree(), limit });
    }
    Ok(())
}

pub fn precompute(spec: &SheafSpec, ctx: &FieldCtx) -> Result<PrecompTable> {
    if spec.form() != Form::F {
        return Err(Error::InvalidSpec("the census table needs the F form".into()));
    }
    check_degree(ctx, MAX_CENSUS_DEGREE)?;
    let tq = spec.t_q();
    let size = ctx.size() as u32;
    let class: Vec<u8> = (0..size)
        .into_par_iter()
        .map(|x| {
            let x = FqElt(x);
            w_trace(ctx, Witt2::new(ctx.pow(x, tq), spec.f().eval(ctx, x))).value() as u8
        })
        .collect();
    let mask: Vec<u32> = (0..size).into_par_iter().map(|x| ctx.trace_mask(FqElt(x))).collect();
    Ok(PrecompTable { degree: ctx.degree(), class, mask })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    /// All of k.
    All,
    /// k^x.
    Units,
}

impl Domain {
    pub fn label(self) -> &'static str {
        match self {
            Domain::All => "k",
            Domain::Units => "k*",
        }
    }

    fn first(self) -> u32 {
        match self {
            Domain::All => 0,
            Domain::Units => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Naive,
    Wht,
    /// Reindexed from an F-census through t -> t^r.
    Reindexed,
    /// Per-point descent traces.
    Direct,
}

#[derive(Clone, Debug)]
pub struct CensusReport {
    pub n: u32,
    pub degree: u32,
    pub sheaf: String,
    pub spec_summary: String,
    pub domain: Domain,
    /// Sorted by value.
    pub entries: Vec<(ClearedValue, u64)>,
    pub provenance: Provenance,
    pub elapsed_ms: u128,
}

impl CensusReport {
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn multiplicity(&self, v: &ClearedValue) -> u64 {
        self.entries.iter().find(|(w, _)| w == v).map_or(0, |(_, m)| *m)
    }

    /// The multiset, for comparisons.
    pub fn multiset(&self) -> BTreeMap<ClearedValue, u64> {
        self.entries.iter().cloned().collect()
    }

    pub fn m22(&self) -> BigRational {
        empirical_moment(self, 2, 2).expect("a = b")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let m22 = self.m22();
        serde_json::json!({
            "n": self.n,
            "degree": self.degree,
            "sheaf": self.sheaf,
            "domain": self.domain.label(),
            "provenance": format!("{:?}", self.provenance).to_lowercase(),
            "entries": self.entries.iter().map(|(v, m)| {
                let r = v.to_record();
                serde_json::json!({"re": r.re, "im": r.im, "denom_exp": r.denom_exp, "value": v.rational_form(), "mult": m})
            }).collect::<Vec<_>>(),
            "m22": {
                "num": m22.numer().to_string(),
                "den": m22.denom().to_string(),
                "decimal": rational_to_decimal(&m22, 40),
            },
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("re,im,denom_exp,value,mult\n");
        for (v, m) in &self.entries {
            let r = v.to_record();
            s.push_str(&format!("{},{},{},{},{}\n", r.re, r.im, r.denom_exp, v.rational_form(), m));
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "census of {} over F_2^{} ({}), {} points, path {:?}\n",
            self.spec_summary,
            self.degree,
            self.domain.label(),
            self.total(),
            self.provenance
        );
        for (v, m) in &self.entries {
            s.push_str(&format!("  {:>16}  {m}\n", v.rational_form()));
        }
        s.push_str(&format!("M_2,2 = {}\n", rational_to_decimal(&self.m22(), 30)));
        s
    }
}

/// Clears raw sums and aggregates them into a report.
fn build_report(spec: &SheafSpec, ctx: &FieldCtx, domain: Domain, raw_counts: HashMap<(i64, i64), u64>, provenance: Provenance, start: Instant) -> CensusReport {
    let mut agg: BTreeMap<ClearedValue, u64> = BTreeMap::new();
    for ((re, im), m) in raw_counts {
        let v = ClearedValue::from_raw_sum(&GaussInt::from_i64(re, im), spec.n_is_odd(), ctx.degree());
        *agg.entry(v).or_default() += m;
    }
    CensusReport {
        n: spec.n(),
        degree: ctx.degree(),
        sheaf: match spec.form() {
            Form::F => "F".into(),
            Form::G { .. } => "G".into(),
        },
        spec_summary: spec.summary(),
        domain,
        entries: agg.into_iter().collect(),
        provenance,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

/// In-place exact Walsh-Hadamard transform of (re, im) pairs.
pub fn wht_in_place(re: &mut [i32], im: &mut [i32]) {
    let len = re.len();
    assert!(len.is_power_of_two() && im.len() == len);
    let mut h = 1;
    while h < len {
        let stage = |(re_blk, im_blk): (&mut [i32], &mut [i32])| {
            let (rl, rh) = re_blk.split_at_mut(h);
            let (il, ih) = im_blk.split_at_mut(h);
            for j in 0..h {
                let (a, b) = (rl[j], rh[j]);
                rl[j] = a + b;
                rh[j] = a - b;
                let (a, b) = (il[j], ih[j]);
                il[j] = a + b;
                ih[j] = a - b;
            }
        };
        re.par_chunks_mut(2 * h).zip(im.par_chunks_mut(2 * h)).for_each(stage);
        h *= 2;
    }
}

/// Raw sums at every t, indexed by bits(t), via one transform.
pub fn raw_sums_wht(table: &PrecompTable) -> (Vec<i32>, Vec<i32>) {
    let size = table.class.len();
    let mut re = vec![0i32; size];
    let mut im = vec![0i32; size];
    for (c, &m) in table.class.iter().zip(&table.mask) {
        let (a, b) = match c {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        // x -> m(x) is a bijection, so each slot is written once
        debug_assert!(re[m as usize] == 0 && im[m as usize] == 0);
        re[m as usize] = a;
        im[m as usize] = b;
    }
    wht_in_place(&mut re, &mut im);
    (re, im)
}

pub fn census_wht(spec: &SheafSpec, ctx: &FieldCtx, domain: Domain) -> Result<CensusReport> {
    let start = Instant::now();
    let table = precompute(spec, ctx)?;
    let (re, im) = raw_sums_wht(&table);
    let mut counts: HashMap<(i64, i64), u64> = HashMap::new();
    for t in domain.first() as usize..re.len() {
        *counts.entry((re[t] as i64, im[t] as i64)).or_default() += 1;
    }
    Ok(build_report(spec, ctx, domain, counts, Provenance::Wht, start))
}

/// Sum over t of |raw(t)|^2, which Parseval fixes at 2^(2d).
pub fn parseval_sum(re: &[i32], im: &[i32]) -> u128 {
    re.iter().zip(im).map(|(&a, &b)| (a as i64 * a as i64 + b as i64 * b as i64) as u128).sum()
}

#[derive(Serialize, Deserialize)]
struct CheckpointHeader {
    version: u32,
    degree: u32,
    spec_hash: String,
    chunk_size: u64,
}

#[derive(Serialize, Deserialize)]
struct CheckpointChunk {
    chunk: u64,
    /// (raw re, raw im, multiplicity)
    counts: ChunkCounts,
}

/// Hash identifying a (spec, field, domain) triple in checkpoints.
pub fn spec_hash(spec: &SheafSpec, ctx: &FieldCtx, domain: Domain) -> String {
    let mut h = Sha256::new();
    h.update(spec.summary().as_bytes());
    h.update(format!("|modulus={:#x}|domain={}", ctx.modulus(), domain.label()).as_bytes());
    hex::encode(h.finalize())
}

/// (re, im, multiplicity) of raw sums within one chunk of t.
type ChunkCounts = Vec<(i64, i64, u64)>;

/// Options for the naive path.
#[derive(Clone, Debug)]
pub struct NaiveOptions<'a> {
    pub chunk_size: u64,
    pub checkpoint: Option<&'a Path>,
}

impl Default for NaiveOptions<'_> {
    fn default() -> Self {
        NaiveOptions { chunk_size: 1 << 10, checkpoint: None }
    }
}

fn read_checkpoint(path: &Path, header: &CheckpointHeader) -> Result<HashMap<u64, ChunkCounts>> {
    let mut done = HashMap::new();
    if !path.exists() {
        return Ok(done);
    }
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let Some(first) = lines.next() else {
        return Ok(done);
    };
    let got: CheckpointHeader = serde_json::from_str(&first?).map_err(|e| Error::Checkpoint(format!("bad header: {e}")))?;
    if got.version != header.version {
        return Err(Error::Checkpoint(format!("version {} != {}", got.version, header.version)));
    }
    if got.degree != header.degree || got.spec_hash != header.spec_hash || got.chunk_size != header.chunk_size {
        return Err(Error::Checkpoint("checkpoint belongs to a different computation".into()));
    }
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        // a torn final line from an interrupted run is simply recomputed
        if let Ok(c) = serde_json::from_str::<CheckpointChunk>(&line) {
            done.insert(c.chunk, c.counts);
        }
    }
    Ok(done)
}

/// Per-t census through the table's inner loop, with optional JSON-lines
/// checkpointing on chunk boundaries of t.
pub fn census_naive(spec: &SheafSpec, ctx: &FieldCtx, domain: Domain, opts: &NaiveOptions) -> Result<CensusReport> {
    let start = Instant::now();
    check_degree(ctx, MAX_NAIVE_DEGREE)?;
    let table = precompute(spec, ctx)?;
    let size = ctx.size();
    let chunk_size = opts.chunk_size.max(1);
    let n_chunks = size.div_ceil(chunk_size);
    let header = CheckpointHeader {
        version: CHECKPOINT_VERSION,
        degree: ctx.degree(),
        spec_hash: spec_hash(spec, ctx, domain),
        chunk_size,
    };
    let done = match opts.checkpoint {
        Some(p) => read_checkpoint(p, &header)?,
        None => HashMap::new(),
    };
    let writer = match opts.checkpoint {
        Some(p) => {
            let existing = if p.exists() { std::fs::read(p)? } else { Vec::new() };
            let mut f = OpenOptions::new().create(true).append(true).open(p)?;
            if existing.is_empty() {
                writeln!(f, "{}", serde_json::to_string(&header).expect("header serializes"))?;
            } else if existing.last() != Some(&b'\n') {
                // terminate a torn record so new records start on their own line
                writeln!(f)?;
            }
            Some(Mutex::new(f))
        }
        None => None,
    };
    let todo: Vec<u64> = (0..n_chunks).filter(|c| !done.contains_key(c)).collect();
    let fresh: Vec<Result<(u64, ChunkCounts)>> = todo
        .into_par_iter()
        .map(|c| {
            let lo = (c * chunk_size).max(domain.first() as u64);
            let hi = ((c + 1) * chunk_size).min(size);
            let mut local: HashMap<(i64, i64), u64> = HashMap::new();
            for t in lo..hi {
                *local.entry(table.raw_at(t as u32)).or_default() += 1;
            }
            let mut counts: ChunkCounts = local.into_iter().map(|((a, b), m)| (a, b, m)).collect();
            counts.sort_unstable();
            if let Some(w) = &writer {
                let line = serde_json::to_string(&CheckpointChunk { chunk: c, counts: counts.clone() }).expect("chunk serializes");
                let mut f = w.lock().expect("checkpoint writer");
                writeln!(f, "{line}")?;
                f.flush()?;
            }
            Ok((c, counts))
        })
        .collect();
    let mut total: HashMap<(i64, i64), u64> = HashMap::new();
    for counts in done.into_values().chain(fresh.into_iter().map(|r| r.map(|(_, c)| c)).collect::<Result<Vec<_>>>()?) {
        for (a, b, m) in counts {
            *total.entry((a, b)).or_default() += m;
        }
    }
    Ok(build_report(spec, ctx, domain, total, Provenance::Naive, start))
}

/// Census of a descent over k^x: a reindexing of the F-census when t -> t^r
/// permutes k^x, otherwise per-point descent traces.
pub fn census_for_g(spec_g: &SheafSpec, ctx: &FieldCtx) -> Result<CensusReport> {
    let Form::G { r } = spec_g.form() else {
        return Err(Error::InvalidSpec("census_for_g needs the G form".into()));
    };
    let start = Instant::now();
    let order = ctx.unit_order() as u128;
    let coprime = num_integer::gcd(r % order, order) == 1 || order == 1;
    if coprime {
        let mut rep = census_wht(&spec_g.as_f(), ctx, Domain::Units)?;
        rep.sheaf = "G".into();
        rep.spec_summary = spec_g.summary();
        rep.provenance = Provenance::Reindexed;
        rep.elapsed_ms = start.elapsed().as_millis();
        return Ok(rep);
    }
    let units: Vec<u32> = (1..ctx.size() as u32).collect();
    let vals: Vec<ClearedValue> = units
        .par_iter()
        .map(|&t| airy::trace_g(spec_g, ctx, FqElt(t)))
        .collect::<Result<Vec<_>>>()?;
    let mut agg: BTreeMap<ClearedValue, u64> = BTreeMap::new();
    for v in vals {
        *agg.entry(v).or_default() += 1;
    }
    Ok(CensusReport {
        n: spec_g.n(),
        degree: ctx.degree(),
        sheaf: "G".into(),
        spec_summary: spec_g.summary(),
        domain: Domain::Units,
        entries: agg.into_iter().collect(),
        provenance: Provenance::Direct,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// (1/#domain) sum_t |T(t)|^(2a); only a = b is supported here.
pub fn empirical_moment(report: &CensusReport, a: u32, b: u32) -> Result<BigRational> {
    if a != b {
        return Err(Error::Precondition("real moments need a = b; use complex_moment".into()));
    }
    let mut sum = BigRational::zero();
    for (v, m) in &report.entries {
        let mut p = BigRational::one();
        let sq = v.abs_square();
        for _ in 0..a {
            p *= &sq;
        }
        sum += p * BigRational::from_integer(BigInt::from(*m));
    }
    let total = report.total();
    if total == 0 {
        return Ok(BigRational::zero());
    }
    Ok(sum / BigRational::from_integer(BigInt::from(total)))
}

/// (1/#domain) sum_t T^a conj(T)^b as (re, im).
pub fn complex_moment(report: &CensusReport, a: u32, b: u32) -> (BigRational, BigRational) {
    let mut sum = ClearedValue::zero();
    for (v, m) in &report.entries {
        let mut p = ClearedValue::from_i64(*m as i64, 0);
        let c = v.conj();
        for _ in 0..a {
            p = p.mul(v);
        }
        for _ in 0..b {
            p = p.mul(&c);
        }
        sum = sum.add(&p);
    }
    let (re, im) = sum.to_rational_parts();
    let total = BigRational::from_integer(BigInt::from(report.total().max(1)));
    (re / &total, im / total)
}

/// Decimal rendering of the moment M_{a,a}.
pub fn moment_decimal(m: &BigRational, digits: usize) -> String {
    rational_to_decimal(m, digits)
}

/// Parses a census entry list back from its JSON form.
pub fn entries_from_json(v: &serde_json::Value) -> Option<Vec<(ClearedValue, u64)>> {
    v.get("entries")?
        .as_array()?
        .iter()
        .map(|e| {
            let rec = ClearedRecord {
                re: e.get("re")?.as_str()?.to_string(),
                im: e.get("im")?.as_str()?.to_string(),
                denom_exp: e.get("denom_exp")?.as_u64()?,
            };
            Some((ClearedValue::from_record(&rec)?, e.get("mult")?.as_u64()?))
        })
        .collect()
}

/// Distinct values of a report.
pub fn distinct_values(report: &CensusReport) -> HashSet<ClearedValue> {
    report.entries.iter().map(|(v, _)| v.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy::trace_f;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(d: u32) -> FieldCtx {
        FieldCtx::new(d).unwrap().with_tables()
    }

    #[test]
    fn table_basics() {
        let spec = SheafSpec::suzuki_standard(1).unwrap();
        let ctx = field(3);
        let t = precompute(&spec, &ctx).unwrap();
        assert_eq!((t.class(FqElt::ZERO), t.mask(FqElt::ZERO)), (0, 0));
        assert_eq!(t.class_histogram().iter().sum::<u64>(), 8);
    }

    #[test]
    fn table_matches_direct_rank_one_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let spec = SheafSpec::random(2, 3, &mut rng).unwrap();
        let ctx = field(11);
        let table = precompute(&spec, &ctx).unwrap();
        let a = crate::airy::F2Poly::monomial(spec.t_q());
        for _ in 0..1000 {
            let (x, t) = (ctx.random(&mut rng), ctx.random(&mut rng));
            let b = spec.f().eval(&ctx, x) + ctx.mul(t, x);
            let direct = crate::witt2::psi2(w_trace(&ctx, Witt2::new(a.eval(&ctx, x), b)));
            let tab = crate::witt2::psi2(crate::witt2::W2F2::new(table.exponent(x, t)));
            assert_eq!(direct, tab);
        }
    }

    #[test]
    fn naive_matches_pointwise_traces() {
        let spec = SheafSpec::infg_family(2).unwrap();
        let ctx = field(6);
        let rep = census_naive(&spec, &ctx, Domain::All, &NaiveOptions::default()).unwrap();
        let mut direct: BTreeMap<ClearedValue, u64> = BTreeMap::new();
        for t in ctx.elements() {
            *direct.entry(trace_f(&spec, &ctx, t).unwrap()).or_default() += 1;
        }
        assert_eq!(rep.multiset(), direct);
        assert_eq!(rep.total(), 64);
    }

    #[test]
    fn wht_matches_naive_and_parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for d in 1..=9 {
            let ctx = field(d);
            let spec = SheafSpec::random(1 + d % 2, 5, &mut rng).unwrap();
            let a = census_wht(&spec, &ctx, Domain::All).unwrap();
            let b = census_naive(&spec, &ctx, Domain::All, &NaiveOptions::default()).unwrap();
            assert_eq!(a.entries, b.entries);
            let (re, im) = raw_sums_wht(&precompute(&spec, &ctx).unwrap());
            assert_eq!(parseval_sum(&re, &im), 1u128 << (2 * d));
            for (v, _) in &a.entries {
                assert!(v.abs_square() <= BigRational::from_integer((1u64 << d).into()));
            }
        }
    }

    #[test]
    fn raw_zero_is_trace_at_zero() {
        let spec = SheafSpec::suzuki_standard(1).unwrap();
        let ctx = field(10);
        let (re, im) = raw_sums_wht(&precompute(&spec, &ctx).unwrap());
        let v = ClearedValue::from_raw_sum(&GaussInt::from_i64(re[0] as i64, im[0] as i64), true, 10);
        assert_eq!(v, trace_f(&spec, &ctx, FqElt::ZERO).unwrap());
    }

    #[test]
    fn checkpoint_resume() {
        let spec = SheafSpec::suzuki_standard(1).unwrap();
        let ctx = field(9);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.jsonl");
        let opts = NaiveOptions { chunk_size: 64, checkpoint: Some(&path) };
        let full = census_naive(&spec, &ctx, Domain::Units, &opts).unwrap();
        // drop the last three chunks and one torn line, then resume
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        let mut kept = lines[..lines.len() - 3].join("\n");
        kept.push_str("\n{\"chunk\": 7, \"cou");
        std::fs::write(&path, kept).unwrap();
        let resumed = census_naive(&spec, &ctx, Domain::Units, &opts).unwrap();
        assert_eq!(full.entries, resumed.entries);
        assert_eq!(resumed.total(), 511);
        let again = census_naive(&spec, &ctx, Domain::Units, &opts).unwrap();
        assert_eq!(full.entries, again.entries);
        // a different spec must refuse the file
        let other = SheafSpec::infg_family(1).unwrap();
        let other = SheafSpec::new(1, other.f().clone(), None, Form::F, crate::airy::Family::Custom).unwrap();
        assert!(matches!(census_naive(&other, &ctx, Domain::Units, &opts), Err(Error::Checkpoint(_))));
    }

    #[test]
    fn descent_census() {
        let f = SheafSpec::suzuki_standard(1).unwrap();
        let g = f.default_descent().unwrap();
        // gcd(5, 2^6 - 1) = 1: reindexed; compare against direct traces
        let ctx = field(6);
        let re = census_for_g(&g, &ctx).unwrap();
        assert_eq!(re.provenance, Provenance::Reindexed);
        let mut direct: BTreeMap<ClearedValue, u64> = BTreeMap::new();
        for t in 1..64 {
            *direct.entry(airy::trace_g(&g, &ctx, FqElt(t)).unwrap()).or_default() += 1;
        }
        assert_eq!(re.multiset(), direct);
        // gcd(5, 15) = 5: fallback
        let ctx = field(4);
        let rep = census_for_g(&g, &ctx).unwrap();
        assert_eq!(rep.provenance, Provenance::Direct);
        assert_eq!(rep.total(), 15);
        let one = airy::trace_g(&g, &ctx, FqElt::ONE).unwrap();
        assert!(rep.multiplicity(&one) >= 1);
    }

    #[test]
    fn moments() {
        let spec = SheafSpec::suzuki_standard(1).unwrap();
        let rep = census_wht(&spec, &field(7), Domain::Units).unwrap();
        let m11 = empirical_moment(&rep, 1, 1).unwrap();
        let direct: BigRational = rep
            .entries
            .iter()
            .map(|(v, m)| v.abs_square() * BigRational::from_integer((*m).into()))
            .fold(BigRational::zero(), |a, b| a + b)
            / BigRational::from_integer(127.into());
        assert_eq!(m11, direct);
        assert_eq!(complex_moment(&rep, 2, 2).0, rep.m22());
        assert!(empirical_moment(&rep, 1, 2).is_err());
        let empty = CensusReport { entries: vec![(ClearedValue::zero(), 5)], ..rep.clone() };
        assert!(empirical_moment(&empty, 2, 2).unwrap().is_zero());
        let js = rep.to_json();
        assert_eq!(entries_from_json(&js).unwrap(), rep.entries);
    }
}
