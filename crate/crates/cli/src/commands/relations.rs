use num_bigint::BigUint;
use primerel::oracle::primes_leq_sqrt;
use primerel::relations::{
    enumerate_certified, enumerate_multiset, eval_relation1, eval_relation1_factorial,
    eval_relation2, eval_relation3, Budget, Family, Parity, Relation1FactorialParams,
    Relation1Params, Relation2Params, Relation3Params,
};
use primerel::PrimeBasis;
use serde_json::json;

use super::{emit_certificate, parse_biguint};
use crate::output::Printer;
use crate::{Context, Failure};

#[derive(Debug, clap::Args)]
pub struct EnumerateArgs {
    /// Emit every certified value reachable within the budget.
    #[arg(long)]
    pub enumerate: bool,
    /// Bound on every multiplier and exponent.
    #[arg(long, requires = "enumerate")]
    pub budget: Option<u32>,
    /// Every accepted tuple rather than each value once.
    #[arg(long, requires = "enumerate")]
    pub verbose: bool,
    /// How many primes above the basis relation 1 may raise to a power.
    #[arg(long, default_value_t = 3)]
    pub large_primes: usize,
}

#[derive(Debug, clap::Args)]
pub struct Rel1Args {
    #[arg(long, value_parser = parse_biguint)]
    pub bound: BigUint,
    /// Exponent of -1 on the basis term (only its parity matters).
    #[arg(long)]
    pub b1: Option<u64>,
    /// Exponent of -1 on the large-prime term.
    #[arg(long)]
    pub b2: Option<u64>,
    #[arg(long, value_parser = parse_biguint)]
    pub k: Option<BigUint>,
    /// Exponents of the primes after the square root, in order.
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<u32>,
    #[command(flatten)]
    pub enumerate: EnumerateArgs,
}

#[derive(Debug, clap::Args)]
pub struct Rel1fArgs {
    #[arg(long, value_parser = parse_biguint)]
    pub bound: BigUint,
    #[arg(long)]
    pub b1: Option<u64>,
    #[arg(long)]
    pub b2: Option<u64>,
    #[arg(long, value_parser = parse_biguint)]
    pub k1: Option<BigUint>,
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<u32>,
    #[command(flatten)]
    pub enumerate: EnumerateArgs,
}

#[derive(Debug, clap::Args)]
pub struct Rel2Args {
    #[arg(long, value_parser = parse_biguint)]
    pub bound: BigUint,
    /// Primes of the first product.
    #[arg(long, value_delimiter = ',', required = true)]
    pub s1: Vec<u64>,
    /// Primes of the second product (defaults to the rest of the basis).
    #[arg(long, value_delimiter = ',')]
    pub s2: Vec<u64>,
    #[arg(long)]
    pub b1: Option<u64>,
    #[arg(long)]
    pub b2: Option<u64>,
    #[arg(long, default_value_t = 2)]
    pub b3: u64,
    #[arg(long, value_parser = parse_biguint)]
    pub k1: Option<BigUint>,
    #[arg(long, value_parser = parse_biguint)]
    pub k2: Option<BigUint>,
    #[arg(long, value_parser = parse_biguint, default_value = "0")]
    pub k3: BigUint,
    #[command(flatten)]
    pub enumerate: EnumerateArgs,
}

#[derive(Debug, clap::Args)]
pub struct Rel3Args {
    #[arg(long, value_parser = parse_biguint)]
    pub bound: BigUint,
    /// Exponents of -1, one per basis prime plus an optional last (default 2).
    #[arg(long, value_delimiter = ',')]
    pub b: Vec<u64>,
    /// Multipliers, one per basis prime plus an optional last (default 0).
    #[arg(long, value_delimiter = ',', value_parser = parse_biguint)]
    pub k: Vec<BigUint>,
    #[command(flatten)]
    pub enumerate: EnumerateArgs,
}

fn required<T: Clone>(value: &Option<T>, flag: &str) -> Result<T, Failure> {
    value
        .clone()
        .ok_or_else(|| Failure::Validation(format!("--{flag} is required unless --enumerate is given")))
}

fn enumerate(
    family: Family,
    basis: &PrimeBasis,
    args: &EnumerateArgs,
    ctx: &Context,
    p: &mut Printer,
) -> Result<(), Failure> {
    let budget = args
        .budget
        .ok_or_else(|| Failure::Validation("--enumerate needs --budget".into()))?;
    let budget = Budget {
        large_primes: args.large_primes,
        candidate_cap: ctx.candidate_cap,
        ..Budget::uniform(budget)
    };
    let certs = if args.verbose {
        enumerate_multiset(&family, basis, &budget)?
    } else {
        enumerate_certified(&family, basis, &budget)?
    };
    p.extra("count", json!(certs.len()));
    for c in &certs {
        emit_certificate(p, c)?;
    }
    p.text(format!("{} certified", certs.len()))?;
    Ok(())
}

pub fn rel1(args: &Rel1Args, ctx: &Context, p: &mut Printer) -> Result<(), Failure> {
    let basis = primes_leq_sqrt(&args.bound)?;
    if args.enumerate.enumerate {
        return enumerate(Family::Relation1, &basis, &args.enumerate, ctx, p);
    }
    let params = Relation1Params::new(
        basis,
        Parity::of(required(&args.b1, "b1")?),
        Parity::of(required(&args.b2, "b2")?),
        required(&args.k, "k")?,
        &args.m,
    );
    emit_certificate(p, &eval_relation1(&params)?)
}

pub fn rel1f(args: &Rel1fArgs, ctx: &Context, p: &mut Printer) -> Result<(), Failure> {
    let basis = primes_leq_sqrt(&args.bound)?;
    if args.enumerate.enumerate {
        return enumerate(Family::Relation1Factorial, &basis, &args.enumerate, ctx, p);
    }
    let params = Relation1FactorialParams::new(
        basis,
        Parity::of(required(&args.b1, "b1")?),
        Parity::of(required(&args.b2, "b2")?),
        required(&args.k1, "k1")?,
        &args.m,
    );
    emit_certificate(p, &eval_relation1_factorial(&params)?)
}

pub fn rel2(args: &Rel2Args, ctx: &Context, p: &mut Printer) -> Result<(), Failure> {
    let basis = primes_leq_sqrt(&args.bound)?;
    let mut params = Relation2Params::with_complement(basis.clone(), &args.s1, [Parity::Even; 3], [1, 1, 0]);
    let complement = params.second.clone();
    if !args.s2.is_empty() {
        let mut s2 = args.s2.clone();
        s2.sort_unstable();
        params.second = s2;
    }
    params.validate()?;
    if args.enumerate.enumerate {
        if params.second != complement {
            return Err(Failure::Validation("--s2 must be the rest of the basis".into()));
        }
        return enumerate(Family::Relation2 { first: params.first }, &basis, &args.enumerate, ctx, p);
    }
    params.signs = [
        Parity::of(required(&args.b1, "b1")?),
        Parity::of(required(&args.b2, "b2")?),
        Parity::of(args.b3),
    ];
    params.k1 = required(&args.k1, "k1")?;
    params.k2 = required(&args.k2, "k2")?;
    params.k3 = args.k3.clone();
    emit_certificate(p, &eval_relation2(&params)?)
}

pub fn rel3(args: &Rel3Args, ctx: &Context, p: &mut Printer) -> Result<(), Failure> {
    let basis = primes_leq_sqrt(&args.bound)?;
    if args.enumerate.enumerate {
        return enumerate(Family::Relation3, &basis, &args.enumerate, ctx, p);
    }
    let n = basis.len();
    if args.b.len() != n && args.b.len() != n + 1 {
        return Err(Failure::Validation(format!(
            "--b needs {n} or {} values for a basis of {n} primes",
            n + 1
        )));
    }
    if args.k.len() != n && args.k.len() != n + 1 {
        return Err(Failure::Validation(format!(
            "--k needs {n} or {} values for a basis of {n} primes",
            n + 1
        )));
    }
    let mut signs: Vec<Parity> = args.b.iter().map(|&b| Parity::of(b)).collect();
    if signs.len() == n {
        signs.push(Parity::Even);
    }
    let params = Relation3Params {
        basis,
        signs,
        multipliers: args.k[..n].to_vec(),
        last: args.k.get(n).cloned().unwrap_or_default(),
    };
    emit_certificate(p, &eval_relation3(&params)?)
}
