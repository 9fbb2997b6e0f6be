use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use causal_probe::checks::{all_passed, run_checks, Fault, VerifyOptions};
use causal_probe::combinat::{multiplicity, partition_count};
use causal_probe::discrimination::monte_carlo_classical;
use causal_probe::formulas::{self, claim as find_claim};
use causal_probe::quantum::{Dependence, HypothesisSpec, Rng};
use causal_probe::strategies::classical_output_distribution;
use causal_probe::{Error, Execution};

use crate::{ClaimArgs, CurveArgs, InfoArgs, Range, SimulateArgs, Strategy, VerifyArgs};

type CmdResult = Result<ExitCode, Box<dyn std::error::Error>>;

const MIN_TRIALS: u64 = 100;

/// Shortest representation that parses back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x:?}")
}

impl Strategy {
    fn label(self) -> &'static str {
        match self {
            Strategy::Classical => "classical",
            Strategy::Coherent => "coherent",
            Strategy::IndefiniteBound => "indefinite_bound",
            Strategy::Reference => "reference",
            Strategy::SeqBound => "seq_bound",
            Strategy::Singlet => "singlet",
        }
    }

    /// `(p, log₂ p)`, or `None` when the strategy is undefined at `(n, d)`.
    fn point(self, n: usize, d: usize) -> causal_probe::Result<Option<(f64, f64)>> {
        use formulas::*;
        Ok(Some(match self {
            Strategy::Classical => (p_classical(n, d)?, log2_p_classical(n, d)?),
            Strategy::Coherent => (p_coherent(n, d)?, log2_p_coherent(n, d)?),
            Strategy::Singlet if n >= d => (p_singlet(n, d)?, log2_p_singlet(n, d)?),
            Strategy::Reference if n.is_multiple_of(d) => (p_reference(n, d)?, log2_p_reference(n, d)?),
            Strategy::SeqBound => (seq_lower_bound(n, d)?, log2_seq_lower_bound(n, d)?),
            Strategy::IndefiniteBound => (indefinite_lower_bound(n, d)?, log2_indefinite_lower_bound(n, d)?),
            _ => return Ok(None),
        }))
    }
}

impl Range {
    fn values(&self) -> Result<Vec<usize>, Error> {
        let hi = self.n_max.unwrap_or(self.n);
        if self.n == 0 || self.n_step == 0 || hi < self.n {
            return Err(Error::InvalidArgument(format!(
                "empty n range {}..={} step {}",
                self.n, hi, self.n_step
            )));
        }
        if self.d < 2 {
            return Err(Error::InvalidArgument(format!("need d >= 2, got {}", self.d)));
        }
        Ok((self.n..=hi).step_by(self.n_step).collect())
    }
}

fn open_out(path: &Path) -> io::Result<Box<dyn Write>> {
    Ok(if path.as_os_str() == "-" {
        Box::new(io::stdout().lock())
    } else {
        Box::new(File::create(path)?)
    })
}

pub fn curve(args: CurveArgs) -> CmdResult {
    let ns = args.range.values()?;
    let d = args.range.d;
    let mut strategies = if args.strategies.is_empty() {
        vec![
            Strategy::Classical,
            Strategy::Coherent,
            Strategy::IndefiniteBound,
            Strategy::Reference,
            Strategy::SeqBound,
            Strategy::Singlet,
        ]
    } else {
        args.strategies
    };
    strategies.sort_by_key(|s| s.label());
    strategies.dedup();

    let cells: Vec<(Strategy, usize)> =
        strategies.iter().flat_map(|&s| ns.iter().map(move |&n| (s, n))).collect();
    let points = Execution::default().map_range(cells.len(), |i| cells[i].0.point(cells[i].1, d));

    let mut w = csv::Writer::from_writer(open_out(&args.out)?);
    w.write_record(["n", "d", "strategy", "p_err", "log2_p_err"])?;
    for ((s, n), p) in cells.iter().zip(points) {
        match p? {
            Some((p, l)) => w.write_record([n.to_string(), d.to_string(), s.label().into(), num(p), num(l)])?,
            None => eprintln!("warning: {} is undefined at n = {n}, d = {d}; row omitted", s.label()),
        }
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

pub fn verify(args: VerifyArgs) -> CmdResult {
    if let Some(t) = args.tolerance {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!("tolerance {t} must be a non-negative number")).into());
        }
    }
    let opts = VerifyOptions {
        tolerance_override: args.tolerance,
        fault: args.fault_inject.then_some(Fault::MultiplicityFlip),
        seed: args.seed,
    };
    if opts.fault.is_some() {
        eprintln!("warning: fault injection active, m(4,2) replaced by 3");
    }
    let outcomes = run_checks(&opts);
    let mut out = io::stdout().lock();
    for o in &outcomes {
        writeln!(out, "{o}")?;
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    eprintln!("{} checks, {} failed", outcomes.len(), failed);
    Ok(if all_passed(&outcomes) { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

pub fn simulate(args: SimulateArgs) -> CmdResult {
    if args.trials < MIN_TRIALS {
        return Err(Error::InvalidArgument(format!("need at least {MIN_TRIALS} trials, got {}", args.trials)).into());
    }
    let d = args.range.d;
    let runs: Vec<Vec<usize>> = match args.inputs {
        Some(inputs) => vec![inputs],
        None => args.range.values()?.into_iter().map(|n| vec![0; n]).collect(),
    };
    let rng = Rng::new(args.seed);
    let mut rows = Vec::with_capacity(runs.len());
    for (i, inputs) in runs.iter().enumerate() {
        let n = inputs.len();
        let h1 = classical_output_distribution(inputs, &HypothesisSpec::h1(d, Dependence::Permutation)?)?;
        let h2 = classical_output_distribution(inputs, &HypothesisSpec::h2(d, Dependence::Permutation)?)?;
        let tv = h1.total_variation(&h2)?;
        let closed = (1.0 - *tv.numer() as f64 / *tv.denom() as f64) / 2.0;
        let r = monte_carlo_classical(d, n, inputs, args.trials, &rng.fork(i as u64))?;
        let se = r.diagnostics.std_error.unwrap_or(0.0);
        let z = if se > 0.0 {
            (r.error_probability - closed) / se
        } else if r.error_probability == closed {
            0.0
        } else {
            f64::INFINITY
        };
        let pattern: Vec<String> = inputs.iter().map(|v| v.to_string()).collect();
        rows.push([
            n.to_string(),
            d.to_string(),
            pattern.join("_"),
            args.trials.to_string(),
            num(r.error_probability),
            num(se),
            num(closed),
            num(z),
        ]);
    }
    let mut w = csv::Writer::from_writer(open_out(&args.out)?);
    w.write_record(["n", "d", "inputs_pattern", "trials", "p_hat", "std_err", "p_closed_form", "z_score"])?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

pub fn claim(args: ClaimArgs) -> CmdResult {
    let c = find_claim(args.d, args.threshold)?;
    println!("d={} threshold={}", c.d, num(c.threshold));
    println!("quantum_n={} quantum_p={}", c.quantum_n, num(c.quantum_p));
    println!("classical_n={} classical_p={}", c.classical_n, num(c.classical_p));
    Ok(ExitCode::SUCCESS)
}

pub fn info(args: InfoArgs) -> CmdResult {
    let (d, n) = (args.d, args.n);
    println!("causal-probe {}", env!("CARGO_PKG_VERSION"));
    println!("parallel={} threads={}", Execution::default().is_parallel(), Execution::threads());
    println!("d={d} n={n}");
    println!("p_classical={}", num(formulas::p_classical(n, d)?));
    println!("p_coherent={}", num(formulas::p_coherent(n, d)?));
    if n >= d {
        println!("p_singlet={}", num(formulas::p_singlet(n, d)?));
    }
    if n % d == 0 {
        println!("groupings={}", partition_count(n, d)?);
        println!("multiplicity={}", multiplicity(n, d)?);
        println!("p_reference={}", num(formulas::p_reference(n, d)?));
        println!("p_reference_asymptotic={}", num(formulas::p_reference_asymptotic(n, d)?));
    }
    println!("seq_lower_bound={}", num(formulas::seq_lower_bound(n, d)?));
    println!("indefinite_lower_bound={}", num(formulas::indefinite_lower_bound(n, d)?));
    Ok(ExitCode::SUCCESS)
}
