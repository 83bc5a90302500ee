//! Counter-game benchmark family and a grid runner.
//!
//! The environment raises `add`; the agent answers with `grant` and keeps an
//! `n`-bit counter in `b0..b{n-1}` (least significant first). A granted
//! request increments the counter at the next instant. The goal is to see
//! every bit set; the environment only promises `K` consecutive requests.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::besteffort::{synth_reactive, synth_with, Algorithm, Problem, SynthOptions, TimingsMs, Verdict};
use crate::error::{Error, Result};
use crate::ltlf::{Formula, Partition};

pub const MAX_BITS: usize = 10;
pub const MAX_REQUESTS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CounterGameSpec {
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
}

impl CounterGameSpec {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if !(1..=MAX_BITS).contains(&n) {
            return Err(Error::OutOfRange(format!("bit count {n} not in 1..={MAX_BITS}")));
        }
        if !(1..=MAX_REQUESTS).contains(&k) {
            return Err(Error::OutOfRange(format!("request count {k} not in 1..={MAX_REQUESTS}")));
        }
        Ok(CounterGameSpec { n, k })
    }

    /// The realizability rule the family is built around.
    pub fn expected_realizable(&self) -> bool {
        self.k + 1 >= 1 << self.n
    }

    /// All specs with `1 <= n <= n_max` and `1 <= K <= k_max`, `n` major.
    pub fn grid(n_max: usize, k_max: usize) -> Result<Vec<CounterGameSpec>> {
        let mut out = Vec::new();
        for n in 1..=n_max {
            for k in 1..=k_max {
                out.push(CounterGameSpec::new(n, k)?);
            }
        }
        Ok(out)
    }
}

pub fn counter_partition(n: usize) -> Partition {
    let agent: Vec<String> = std::iter::once("grant".to_string()).chain((0..n).map(|i| format!("b{i}"))).collect();
    Partition::new(vec!["add".to_string()], agent).expect("counter names are distinct identifiers")
}

/// `F(add ∧ WX(add ∧ WX(… add)))` with `k` occurrences of `add`.
pub fn counter_env_spec(partition: &Partition, k: usize) -> Formula {
    let add = Formula::atom(partition.lookup("add").expect("counter partition"));
    let mut inner = add.clone();
    for _ in 1..k {
        inner = Formula::and(add.clone(), Formula::weak_next(inner));
    }
    Formula::eventually(inner)
}

/// Initial zero, increment dynamics and the all-ones target.
pub fn counter_goal(partition: &Partition, n: usize) -> Formula {
    let atom = |name: &str| Formula::atom(partition.lookup(name).expect("counter partition"));
    let bits: Vec<Formula> = (0..n).map(|i| atom(&format!("b{i}"))).collect();
    let init = Formula::conj(bits.iter().map(|b| Formula::not(b.clone())));
    let mut carry = Formula::and(atom("add"), atom("grant"));
    let mut dynamics = Vec::with_capacity(n);
    for b in &bits {
        let nb = Formula::not(b.clone());
        let flip = Formula::and(
            Formula::implies(b.clone(), Formula::weak_next(nb.clone())),
            Formula::implies(nb.clone(), Formula::weak_next(b.clone())),
        );
        let hold = Formula::and(
            Formula::implies(b.clone(), Formula::weak_next(b.clone())),
            Formula::implies(nb.clone(), Formula::weak_next(nb.clone())),
        );
        dynamics.push(Formula::and(
            Formula::implies(carry.clone(), flip),
            Formula::implies(Formula::not(carry.clone()), hold),
        ));
        carry = Formula::and(carry, b.clone());
    }
    let full = Formula::eventually(Formula::conj(bits));
    Formula::conj([init, Formula::always(Formula::conj(dynamics)), full])
}

pub fn gen_counter_game(spec: CounterGameSpec) -> Result<Problem> {
    let spec = CounterGameSpec::new(spec.n, spec.k)?;
    let p = counter_partition(spec.n);
    let env = counter_env_spec(&p, spec.k);
    let goal = counter_goal(&p, spec.n);
    Problem::new(env, goal, p)
}

/// A pipeline entry in a benchmark grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BenchAlg {
    BestEffort(Algorithm),
    /// Single adversarial game on `E -> φ`.
    Reactive,
}

impl fmt::Display for BenchAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchAlg::BestEffort(a) => write!(f, "{a}"),
            BenchAlg::Reactive => f.write_str("reactive"),
        }
    }
}

impl FromStr for BenchAlg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.trim() == "reactive" {
            Ok(BenchAlg::Reactive)
        } else {
            s.parse().map(BenchAlg::BestEffort)
        }
    }
}

impl Serialize for BenchAlg {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BenchAlg {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub spec: CounterGameSpec,
    pub alg: BenchAlg,
    /// `None` after a timeout or a resource error.
    pub verdict: Option<Verdict>,
    pub timings_ms: TimingsMs,
    pub total_ms: f64,
    pub timeout: bool,
    /// Error text when the run failed for a reason other than the timeout.
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub algorithms: Vec<BenchAlg>,
    pub timeout: Duration,
    /// Instances run concurrently; 1 keeps timings free of interference.
    pub jobs: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            algorithms: Algorithm::ALL.into_iter().map(BenchAlg::BestEffort).collect(),
            timeout: Duration::from_secs(1000),
            jobs: 1,
        }
    }
}

/// Runs one instance on a worker thread with its own manager. A run that
/// misses its budget is reported as a timeout; its worker notices the
/// deadline at the next check and exits on its own.
pub fn run_instance(spec: CounterGameSpec, alg: BenchAlg, timeout: Duration) -> BenchRecord {
    let (tx, rx) = mpsc::channel();
    let start = Instant::now();
    let opts = SynthOptions { deadline: Some(start + timeout), ..SynthOptions::default() };
    std::thread::spawn(move || {
        let out = gen_counter_game(spec).and_then(|p| match alg {
            BenchAlg::BestEffort(a) => synth_with(&p, a, &opts).map(|s| (s.verdict, s.times)),
            BenchAlg::Reactive => synth_reactive(&p, &opts).map(|r| (r.verdict, r.times)),
        });
        let _ = tx.send(out);
    });
    let mut rec = BenchRecord {
        spec,
        alg,
        verdict: None,
        timings_ms: TimingsMs::default(),
        total_ms: 0.0,
        timeout: false,
        error: None,
    };
    match rx.recv_timeout(timeout + Duration::from_millis(50)) {
        Ok(Ok((verdict, times))) => {
            rec.verdict = Some(verdict);
            rec.timings_ms = times.to_ms();
        }
        Ok(Err(Error::Timeout)) | Err(_) => rec.timeout = true,
        Ok(Err(e)) => rec.error = Some(e.to_string()),
    }
    rec.total_ms = start.elapsed().as_secs_f64() * 1e3;
    rec
}

/// Every (spec, algorithm) pair, in grid order.
pub fn run_bench(grid: &[CounterGameSpec], config: &BenchConfig) -> Vec<BenchRecord> {
    let jobs: Vec<(CounterGameSpec, BenchAlg)> =
        grid.iter().flat_map(|&s| config.algorithms.iter().map(move |&a| (s, a))).collect();
    let workers = config.jobs.max(1);
    if workers == 1 {
        return jobs.into_iter().map(|(s, a)| run_instance(s, a, config.timeout)).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results = std::sync::Mutex::new(vec![None; jobs.len()]);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(&(s, a)) = jobs.get(i) else { break };
                let rec = run_instance(s, a, config.timeout);
                results.lock().expect("result lock")[i] = Some(rec);
            });
        }
    });
    results.into_inner().expect("result lock").into_iter().map(|r| r.expect("every job ran")).collect()
}

pub const CSV_HEADER: [&str; 11] = [
    "n",
    "K",
    "alg",
    "verdict",
    "t_translate_ms",
    "t_product_ms",
    "t_adv_ms",
    "t_coop_ms",
    "t_extract_ms",
    "t_total_ms",
    "timeout",
];

pub fn write_csv<W: Write>(out: W, records: &[BenchRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Format(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        let t = &r.timings_ms;
        let verdict = match (r.verdict, &r.error) {
            (Some(v), _) => v.to_string(),
            (None, Some(_)) => "error".to_string(),
            (None, None) => "timeout".to_string(),
        };
        w.write_record([
            r.spec.n.to_string(),
            r.spec.k.to_string(),
            r.alg.to_string(),
            verdict,
            format!("{:.3}", t.translate),
            format!("{:.3}", t.product),
            format!("{:.3}", t.adversarial),
            format!("{:.3}", t.cooperative),
            format!("{:.3}", t.extract),
            format!("{:.3}", r.total_ms),
            r.timeout.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Format(e.to_string()))
}

pub fn to_json(records: &[BenchRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}
