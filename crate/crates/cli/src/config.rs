use anyhow::{bail, Context, Result};
use ctpower_core::{InputMode, Method, Pe4Params, SchemeId, YangVariant};

use crate::args::{MethodArg, ModeArg, SchemeArgs, SchemeName};

/// Squared amplitudes may be off by at most this much before being rejected.
pub const SUM_TOLERANCE: f64 = 1e-6;

pub fn method(arg: MethodArg) -> Method {
    match arg {
        MethodArg::Mc => Method::MonteCarlo,
        MethodArg::Analytic => Method::Analytic,
        MethodArg::Both => Method::Both,
    }
}

pub fn mode(arg: ModeArg) -> InputMode {
    match arg {
        ModeArg::Arbitrary => InputMode::Arbitrary,
        ModeArg::Product => InputMode::Product,
    }
}

/// Renormalizes squared amplitudes whose sum is within [`SUM_TOLERANCE`] of 1.
pub fn pe4_params(a2: f64, b2: f64, c2: f64, d2: f64) -> Result<Pe4Params> {
    let sq = [a2, b2, c2, d2];
    if sq.iter().any(|x| !x.is_finite() || *x < 0.0) {
        bail!("squared amplitudes must be finite and nonnegative, got {sq:?}");
    }
    let sum: f64 = sq.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        bail!("squared amplitudes sum to {sum}, expected 1 within {SUM_TOLERANCE}");
    }
    Pe4Params::from_squared(a2 / sum, b2 / sum, c2 / sum, d2 / sum)
        .context("invalid PE4 parameters")
}

pub fn scheme_id(args: &SchemeArgs) -> Result<SchemeId> {
    let n = args.n.unwrap_or(1);
    let m = args.m.unwrap_or(1);
    let has_pe4 = [args.a2, args.b2, args.c2, args.d2].iter().any(Option::is_some);
    if has_pe4 && args.scheme != SchemeName::Pe4 {
        bail!("--a2/--b2/--c2/--d2 only apply to --scheme pe4");
    }
    if args.variant.is_some() && args.scheme != SchemeName::Yang {
        bail!("--variant only applies to --scheme yang");
    }
    let fixed = |name: &str, fixed_n: usize| -> Result<()> {
        if args.n.is_some_and(|v| v != fixed_n) || args.m.is_some_and(|v| v != 1) {
            bail!("{name} has n = {fixed_n} and a single controller");
        }
        Ok(())
    };
    Ok(match args.scheme {
        SchemeName::Ghz => {
            fixed("ghz", 1)?;
            SchemeId::Ghz
        }
        SchemeName::TwoGhz => {
            fixed("2ghz", 2)?;
            SchemeId::TwoGhz
        }
        SchemeName::Nghz => SchemeId::NGhz { n, m },
        SchemeName::Yang => SchemeId::Yang {
            n,
            m,
            variant: YangVariant::from_index(args.variant.unwrap_or(1))?,
        },
        SchemeName::Man => SchemeId::Man { n, m },
        SchemeName::Pe4 => {
            fixed("pe4", 1)?;
            let p = match (args.a2, args.b2, args.c2, args.d2) {
                (None, None, None, None) => pe4_params(0.25, 0.25, 0.25, 0.25)?,
                (Some(a), Some(b), Some(c), Some(d)) => pe4_params(a, b, c, d)?,
                _ => bail!("give all of --a2 --b2 --c2 --d2 or none"),
            };
            SchemeId::Pe4(p)
        }
    })
}
