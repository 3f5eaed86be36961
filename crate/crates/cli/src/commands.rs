//! The single-shot subcommands: verify, gamma, bm, render.

use std::path::Path;

use covfun_core::banach::{bm_distance_upper, BmBudget};
use covfun_covering::{gamma_upper, verify_cover_with, SearchBudget, Verdict, VerifyOptions};
use serde_json::json;

use crate::io::{load_body, load_config, write_file};
use crate::report::{value_digest, InputDigest};
use crate::{svg, Cli, CliError, CommandResult};

pub(crate) fn verdict_exit(verdict: &Verdict) -> i32 {
    match verdict {
        Verdict::Covered => 0,
        Verdict::Uncovered { .. } => 1,
        Verdict::Unknown { .. } => 2,
    }
}

pub(crate) fn verify_options(cli: &Cli) -> VerifyOptions {
    VerifyOptions { max_depth: cli.depth.unwrap_or(40), ..VerifyOptions::default() }
}

pub(crate) fn search_budget(cli: &Cli) -> SearchBudget {
    SearchBudget {
        max_time: cli.budget_seconds.unwrap_or(60.0),
        seed: cli.seed,
        ..SearchBudget::default()
    }
}

pub(crate) fn verify(
    cli: &Cli,
    body_path: &Path,
    config_path: &Path,
    svg_out: Option<&Path>,
) -> Result<CommandResult, CliError> {
    let (body, body_bytes) = load_body(body_path)?;
    let (cfg, cfg_bytes) = load_config(config_path)?;
    let opts = verify_options(cli);
    let digest = InputDigest::new("verify")
        .bytes("body", &body_bytes)
        .bytes("config", &cfg_bytes)
        .arg("depth", opts.max_depth)
        .finish();
    let cert = verify_cover_with(&body, &cfg, &opts)?;
    let exit = verdict_exit(&cert.verdict);
    if let Some(out) = svg_out {
        if body.dim() != 2 {
            return Err(CliError::Usage(
                "--svg renders 2-D bodies only; use the render command with --slice".to_string(),
            ));
        }
        let witness = match &cert.verdict {
            Verdict::Uncovered { witness } => Some(witness),
            _ => None,
        };
        let image = svg::render(&body, &cfg, witness, None)?;
        write_file(out, &image)?;
    }
    let outcome = json!({
        "certificate": cert,
        "ratio": cfg.ratio,
        "translates": cfg.centers.len(),
    });
    Ok(CommandResult { command: "verify", digest, outcome, exit })
}

pub(crate) fn gamma(cli: &Cli, body_path: &Path, m: usize) -> Result<CommandResult, CliError> {
    let (body, body_bytes) = load_body(body_path)?;
    let budget = search_budget(cli);
    let digest = InputDigest::new("gamma")
        .bytes("body", &body_bytes)
        .arg("m", m)
        .arg("seed", budget.seed)
        .arg("budget_seconds", budget.max_time)
        .finish();
    let result = gamma_upper(&body, m, &budget)?;
    let cert_value = serde_json::to_value(&result.certificate)
        .map_err(|e| CliError::Usage(format!("certificate serialization: {e}")))?;
    let outcome = json!({
        "r_upper": result.r_upper,
        "volume_floor": result.volume_floor,
        "config": result.config,
        "certificate": cert_value,
        "certificate_digest": value_digest(&cert_value),
    });
    Ok(CommandResult { command: "gamma", digest, outcome, exit: 0 })
}

pub(crate) fn bm(cli: &Cli, path1: &Path, path2: &Path) -> Result<CommandResult, CliError> {
    let (k1, bytes1) = load_body(path1)?;
    let (k2, bytes2) = load_body(path2)?;
    let budget = BmBudget { seed: cli.seed, ..BmBudget::default() };
    let digest = InputDigest::new("bm")
        .bytes("body1", &bytes1)
        .bytes("body2", &bytes2)
        .arg("seed", budget.seed)
        .finish();
    let sandwich = bm_distance_upper(&k1, &k2, &budget)?;
    let outcome = json!({
        "log_ratio": sandwich.log_ratio,
        "ratio": sandwich.ratio,
        "map_matrix": sandwich.map_matrix,
        "map_shift": sandwich.map_shift,
        "outer_shift": sandwich.outer_shift,
    });
    Ok(CommandResult { command: "bm", digest, outcome, exit: 0 })
}

pub(crate) fn render(
    cli: &Cli,
    body_path: &Path,
    config_path: &Path,
    out: &Path,
    slice: Option<f64>,
) -> Result<CommandResult, CliError> {
    let (body, body_bytes) = load_body(body_path)?;
    let (cfg, cfg_bytes) = load_config(config_path)?;
    if body.dim() == 3 && slice.is_none() {
        return Err(CliError::Usage("rendering a 3-D body needs --slice z".to_string()));
    }
    let opts = verify_options(cli);
    let mut digest = InputDigest::new("render")
        .bytes("body", &body_bytes)
        .bytes("config", &cfg_bytes)
        .arg("depth", opts.max_depth);
    if let Some(z) = slice {
        digest = digest.arg("slice", z);
    }
    let digest = digest.finish();
    let cert = verify_cover_with(&body, &cfg, &opts)?;
    let witness = match &cert.verdict {
        Verdict::Uncovered { witness } => Some(witness),
        _ => None,
    };
    let image = svg::render(&body, &cfg, witness, slice)?;
    write_file(out, &image)?;
    let outcome = json!({
        "certificate": cert,
        "out": out.display().to_string(),
        "slice": slice,
        "svg_bytes": image.len(),
    });
    Ok(CommandResult { command: "render", digest, outcome, exit: verdict_exit(&cert.verdict) })
}
