use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;
use serde_json::{json, Value};

use symtwirl::approx::{approx_bound_report, diamond_bracket, verify_channel_design};
use symtwirl::bounds::{bounds_report, support_lower_bound, support_upper_bound, DimensionConvention};
use symtwirl::design::{
    build_constraint_system, caratheodory_reduce, is_uniform_forced, verify_design, verify_design_operational, Verdict,
    Violation,
};
use symtwirl::typestat::{enumerate_types, type_class_size};
use symtwirl::{DesignFile, DistributionOverSn, Error, Limits, WeightedDesign};

use crate::args::{
    ApproxArgs, BoundsArgs, ChannelCommand, ChannelVerifyArgs, Cli, Command, DesignCommand, Dimension, FindArgs,
    TypesArgs, VerifyArgs,
};

pub enum Outcome {
    Success,
    VerificationFailed,
}

impl Outcome {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Outcome::Success => ExitCode::SUCCESS,
            Outcome::VerificationFailed => ExitCode::from(1),
        }
    }

    fn from_verdict(ok: bool) -> Self {
        if ok {
            Outcome::Success
        } else {
            Outcome::VerificationFailed
        }
    }
}

pub fn error_exit_code(err: &Error) -> ExitCode {
    match err {
        Error::Contract(_) => ExitCode::from(1),
        _ => ExitCode::from(2),
    }
}

type CmdResult = Result<Outcome, Error>;

pub fn run(cli: &Cli) -> CmdResult {
    let limits = match cli.max_dim {
        Some(max_dim) => Limits::DEFAULT.with_max_dim(max_dim),
        None => Limits::DEFAULT,
    };
    match &cli.command {
        Command::Design(DesignCommand::Find(args)) => design_find(args, &limits),
        Command::Design(DesignCommand::Verify(args)) => design_verify(args, &limits),
        Command::Bounds(args) => bounds(args, &limits),
        Command::Types(args) => types(args, &limits),
        Command::Approx(args) => approx(args, &limits),
        Command::Channel(ChannelCommand::Verify(args)) => channel_verify(args, &limits),
    }
}

fn emit(value: &impl Serialize) -> Result<(), Error> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn convention(dimension: Dimension) -> DimensionConvention {
    match dimension {
        Dimension::TensorPower => DimensionConvention::TensorPower,
        Dimension::Local => DimensionConvention::Local,
    }
}

fn violation_json(v: &Violation) -> Value {
    json!({
        "pattern": v.pattern,
        "image": v.image,
        "expected": v.expected.to_string(),
        "actual": v.actual.to_string(),
    })
}

fn read_design(path: &Path) -> Result<(usize, DistributionOverSn), Error> {
    let file = DesignFile::read(path)?;
    let dist = file.to_distribution()?;
    Ok((file.d, dist))
}

fn read_verified(path: &Path, limits: &Limits) -> Result<Result<WeightedDesign, Violation>, Error> {
    let (d, dist) = read_design(path)?;
    let sys = build_constraint_system(d, dist.n(), limits)?;
    Ok(match verify_design(&dist, &sys)? {
        Verdict::Accept => Ok(WeightedDesign::verify(dist, &sys)?),
        Verdict::Reject(v) => Err(v),
    })
}

fn design_find(args: &FindArgs, limits: &Limits) -> CmdResult {
    let sys = build_constraint_system(args.d, args.n, limits)?;
    let uniform = DistributionOverSn::uniform(args.n, limits)?;
    let design = caratheodory_reduce(&uniform, &sys)?;
    let file = design.to_file();
    if let Some(out) = &args.out {
        file.write(out)?;
    }
    print!("{}", file.to_json());
    let forced = is_uniform_forced(&sys);
    eprintln!(
        "support {} within [{}, {}]; uniform is {}the only design",
        design.support_len(),
        support_lower_bound(args.d, args.n),
        support_upper_bound(args.d, args.n),
        if forced { "" } else { "not " }
    );
    Ok(Outcome::Success)
}

fn design_verify(args: &VerifyArgs, limits: &Limits) -> CmdResult {
    let (d, dist) = read_design(&args.design)?;
    let sys = build_constraint_system(d, dist.n(), limits)?;
    let verdict = verify_design(&dist, &sys)?;
    let mut report = json!({
        "d": d,
        "n": dist.n(),
        "support": dist.support_len(),
        "accepted": verdict.is_accept(),
    });
    if let Verdict::Reject(v) = &verdict {
        report["violation"] = violation_json(v);
        eprintln!("rejected: {v}");
    }
    let mut ok = verdict.is_accept();
    if args.trials > 0 {
        let operational = verify_design_operational(&dist, d, args.trials, args.seed, limits)?;
        report["operational"] = json!(operational);
        if operational != ok {
            return Err(Error::Contract("exact and operational verifiers disagree".into()));
        }
        ok &= operational;
    }
    emit(&report)?;
    if ok {
        eprintln!("accepted: support {} at d={d}, n={}", dist.support_len(), dist.n());
    }
    Ok(Outcome::from_verdict(ok))
}

fn bounds(args: &BoundsArgs, limits: &Limits) -> CmdResult {
    let design = match &args.design {
        None => None,
        Some(path) => match read_verified(path, limits)? {
            Ok(design) => Some(design),
            Err(v) => {
                eprintln!("design does not verify, refusing to evaluate bounds on it: {v}");
                return Ok(Outcome::VerificationFailed);
            }
        },
    };
    let report = bounds_report(args.d, args.n, design.as_ref(), args.eps, convention(args.dimension))?;
    emit(&report)?;
    eprintln!(
        "support in [{}, {}]; entropy rate lower bound {:.6}",
        report.support_lower_bound, report.support_upper_bound, report.entropy_rate_lower.raw
    );
    if let Some(section) = &report.design {
        if !section.support_within_bounds {
            eprintln!(
                "note: support {} lies outside [{}, {}] even though the design verifies",
                section.support, report.support_lower_bound, report.support_upper_bound
            );
        }
    }
    let ok = report.design.as_ref().is_none_or(|s| s.rate_meets_lower_bound);
    Ok(Outcome::from_verdict(ok))
}

fn number_or_string(value: num_bigint::BigUint) -> Value {
    match u64::try_from(&value) {
        Ok(v) => json!(v),
        Err(_) => json!(value.to_string()),
    }
}

fn types(args: &TypesArgs, limits: &Limits) -> CmdResult {
    let all = enumerate_types(args.n, args.d, limits)?;
    let total: num_bigint::BigUint = all.iter().map(type_class_size).sum();
    let entries: Vec<Value> = all
        .iter()
        .map(|mu| {
            json!({
                "counts": mu.counts(),
                "class_size": number_or_string(type_class_size(mu)),
                "entropy_bits": mu.entropy_bits(),
            })
        })
        .collect();
    emit(&json!({
        "n": args.n,
        "d": args.d,
        "count": all.len(),
        "total_words": number_or_string(total.clone()),
        "types": entries,
    }))?;
    eprintln!("{} types covering {total} words", all.len());
    Ok(Outcome::Success)
}

fn approx(args: &ApproxArgs, limits: &Limits) -> CmdResult {
    let (file_d, dist) = read_design(&args.design)?;
    let d = args.d.unwrap_or(file_d);
    let report = approx_bound_report(&dist, d, convention(args.dimension), limits)?;
    emit(&report)?;
    let witness = diamond_bracket(&dist, d, limits)?.witness;
    eprintln!(
        "distance in [{:.3e}, {:.6}] (lower bound attained by {witness:?}); entropy rate {:.6} vs bound {:.6}",
        report.eps_lower, report.eps_upper, report.h_rate, report.rhs_at_upper
    );
    Ok(Outcome::from_verdict(report.holds))
}

fn channel_verify(args: &ChannelVerifyArgs, limits: &Limits) -> CmdResult {
    let (_, dist) = read_design(&args.design)?;
    let verdict = verify_channel_design(&dist, args.dh, args.dk, args.trials, args.seed, limits)?;
    let mut report = json!({
        "n": dist.n(),
        "dh": args.dh,
        "dk": args.dk,
        "state_dimension": args.dh * args.dk,
        "accepted": verdict.accepted,
        "spot_checks": verdict.spot_checks,
    });
    if let Some(v) = &verdict.violation {
        report["violation"] = violation_json(v);
        eprintln!("rejected at local dimension {}: {v}", args.dh * args.dk);
    } else {
        eprintln!("accepted as a channel design ({} direct checks)", verdict.spot_checks);
    }
    emit(&report)?;
    Ok(Outcome::from_verdict(verdict.accepted))
}
