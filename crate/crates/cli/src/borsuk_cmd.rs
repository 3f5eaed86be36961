//! Diameter-partition subcommands: phi, reuleaux, check.

use covfun_borsuk::{
    constant_width_radii_check, phi_upper, reuleaux_polygon, PointCloud, WIDTH_GRID,
};
use covfun_core::{grids, minkowski, volume};
use serde_json::json;

use crate::commands::search_budget;
use crate::io::{load_body, load_cloud, write_file};
use crate::report::InputDigest;
use crate::{BorsukCmd, Cli, CliError, CommandResult};

pub(crate) fn dispatch(cli: &Cli, cmd: &BorsukCmd) -> Result<CommandResult, CliError> {
    match cmd {
        BorsukCmd::Phi { cloud, body, samples, m } => {
            phi(cli, cloud.as_deref(), body.as_deref(), *samples, *m)
        }
        BorsukCmd::Reuleaux { k, out } => reuleaux(*k, out.as_deref()),
        BorsukCmd::Check { body, n } => check(body, *n),
    }
}

fn phi(
    cli: &Cli,
    cloud_path: Option<&std::path::Path>,
    body_path: Option<&std::path::Path>,
    samples: usize,
    m: usize,
) -> Result<CommandResult, CliError> {
    let (cloud, digest, source) = match (cloud_path, body_path) {
        (Some(path), None) => {
            let (cloud, bytes) = load_cloud(path)?;
            let digest = InputDigest::new("borsuk phi")
                .bytes("cloud", &bytes)
                .arg("m", m)
                .arg("seed", cli.seed)
                .finish();
            (cloud, digest, "file")
        }
        (None, Some(path)) => {
            let (body, bytes) = load_body(path)?;
            let cloud = PointCloud::on_boundary(&body, samples)?;
            let digest = InputDigest::new("borsuk phi")
                .bytes("body", &bytes)
                .arg("samples", samples)
                .arg("m", m)
                .arg("seed", cli.seed)
                .finish();
            (cloud, digest, "sampled")
        }
        _ => {
            return Err(CliError::Usage(
                "provide exactly one of --cloud or --body".to_string(),
            ))
        }
    };
    let result = phi_upper(&cloud, m, &search_budget(cli))?;
    let outcome = json!({
        "r_ratio": result.r_ratio,
        "exact": result.exact,
        "assignment": result.assignment,
        "m": m,
        "points": cloud.len(),
        "diameter": cloud.diameter(),
        "source": source,
    });
    Ok(CommandResult { command: "borsuk phi", digest, outcome, exit: 0 })
}

fn reuleaux(k: usize, out: Option<&std::path::Path>) -> Result<CommandResult, CliError> {
    let digest = InputDigest::new("borsuk reuleaux").arg("k", k).finish();
    let body = reuleaux_polygon(k)?;
    let mut residual = 0.0f64;
    for u in grids::directions(2, WIDTH_GRID) {
        let w = minkowski::width(&body, &u)?;
        residual = residual.max((w - 1.0).abs());
    }
    let schema = serde_json::to_string_pretty(&body)
        .map_err(|e| CliError::Usage(format!("body serialization: {e}")))?;
    if let Some(path) = out {
        write_file(path, &schema)?;
    }
    let outcome = json!({
        "k": k,
        "area": volume::reuleaux_area(k),
        "max_width_residual": residual,
        "body": body,
    });
    Ok(CommandResult { command: "borsuk reuleaux", digest, outcome, exit: 0 })
}

fn check(body_path: &std::path::Path, n: usize) -> Result<CommandResult, CliError> {
    let (body, bytes) = load_body(body_path)?;
    let digest = InputDigest::new("borsuk check").bytes("body", &bytes).arg("n", n).finish();
    let report = constant_width_radii_check(&body, n)?;
    let exit = if report.holds { 0 } else { 1 };
    let outcome = serde_json::to_value(&report)
        .map_err(|e| CliError::Usage(format!("report serialization: {e}")))?;
    Ok(CommandResult { command: "borsuk check", digest, outcome, exit })
}
