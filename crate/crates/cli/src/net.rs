//! Net subcommands: cap covers, certified parameters, snapping, cardinality.

use covfun_betanet::{cap_cover, net_cardinality_log_bound, net_params, snap_to_net};
use covfun_core::john::john_normalize;
use serde_json::json;

use crate::io::{load_body, write_file};
use crate::report::InputDigest;
use crate::{Cli, CliError, CommandResult, NetCmd};

pub(crate) fn dispatch(cli: &Cli, cmd: &NetCmd) -> Result<CommandResult, CliError> {
    match cmd {
        NetCmd::Snap { body, beta, out } => snap(cli, body, *beta, out.as_deref()),
        NetCmd::Params { n, beta } => params(*n, *beta),
        NetCmd::Caps { n, theta } => caps(*n, *theta),
        NetCmd::Cardinality { n, beta, c } => cardinality(*n, *beta, *c),
    }
}

fn snap(
    _cli: &Cli,
    body_path: &std::path::Path,
    beta: f64,
    out: Option<&std::path::Path>,
) -> Result<CommandResult, CliError> {
    let (body, body_bytes) = load_body(body_path)?;
    let digest =
        InputDigest::new("net snap").bytes("body", &body_bytes).arg("beta", beta).finish();
    let (affine, normalized) = john_normalize(&body)?;
    let params = net_params(normalized.dim(), beta)?;
    let caps = cap_cover(normalized.dim(), params.theta)?;
    let snapped = snap_to_net(&normalized, &params, &caps)?;
    if let Some(path) = out {
        let full = serde_json::to_string_pretty(&snapped)
            .map_err(|e| CliError::Usage(format!("snap serialization: {e}")))?;
        write_file(path, &full)?;
    }
    let outcome = json!({
        "params": snapped.params,
        "inner_factor": snapped.inner_factor,
        "sigma": snapped.outer_factor,
        "bm_log_bound": snapped.bm_log_bound,
        "certified": snapped.bm_log_bound <= beta,
        "vertices": snapped.p.vertices.len(),
        "cap_count": caps.count(),
        "normalization": {
            "matrix": affine.matrix,
            "shift": affine.shift,
            "verified_inner": affine.verified_inner,
            "verified_outer": affine.verified_outer,
        },
    });
    Ok(CommandResult { command: "net snap", digest, outcome, exit: 0 })
}

fn params(n: usize, beta: f64) -> Result<CommandResult, CliError> {
    let digest = InputDigest::new("net params").arg("n", n).arg("beta", beta).finish();
    let params = net_params(n, beta)?;
    let outcome = serde_json::to_value(&params)
        .map_err(|e| CliError::Usage(format!("parameter serialization: {e}")))?;
    Ok(CommandResult { command: "net params", digest, outcome, exit: 0 })
}

fn caps(n: usize, theta: f64) -> Result<CommandResult, CliError> {
    let digest = InputDigest::new("net caps").arg("n", n).arg("theta", theta).finish();
    let cover = cap_cover(n, theta)?;
    let outcome = json!({
        "n": cover.n,
        "theta": cover.theta,
        "theta_prime": cover.theta_prime,
        "count": cover.count(),
        "cardinality_benchmark": cover.cardinality_benchmark,
    });
    Ok(CommandResult { command: "net caps", digest, outcome, exit: 0 })
}

fn cardinality(n: usize, beta: f64, c: f64) -> Result<CommandResult, CliError> {
    let digest =
        InputDigest::new("net cardinality").arg("n", n).arg("beta", beta).arg("c", c).finish();
    let log_bound = net_cardinality_log_bound(n, beta, c)?;
    let outcome = json!({
        "n": n,
        "beta": beta,
        "c": c,
        "log_cardinality_bound": log_bound,
    });
    Ok(CommandResult { command: "net cardinality", digest, outcome, exit: 0 })
}
