//! File loading with exit-3 error mapping: missing files and malformed JSON
//! both surface as [`CliError`] before any computation starts.

use std::path::Path;

use covfun_borsuk::PointCloud;
use covfun_core::body::ConvexBody;
use covfun_covering::CoverConfig;

use crate::CliError;

pub(crate) fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

pub(crate) fn load_body(path: &Path) -> Result<(ConvexBody, Vec<u8>), CliError> {
    let bytes = read_file(path)?;
    let body = serde_json::from_slice::<ConvexBody>(&bytes)
        .map_err(|e| CliError::Usage(format!("malformed body JSON in {}: {e}", path.display())))?;
    Ok((body, bytes))
}

pub(crate) fn load_config(path: &Path) -> Result<(CoverConfig, Vec<u8>), CliError> {
    let bytes = read_file(path)?;
    let cfg = serde_json::from_slice::<CoverConfig>(&bytes).map_err(|e| {
        CliError::Usage(format!("malformed covering configuration in {}: {e}", path.display()))
    })?;
    Ok((cfg, bytes))
}

pub(crate) fn load_cloud(path: &Path) -> Result<(PointCloud, Vec<u8>), CliError> {
    let bytes = read_file(path)?;
    let cloud = serde_json::from_slice::<PointCloud>(&bytes)
        .map_err(|e| CliError::Usage(format!("malformed point cloud in {}: {e}", path.display())))?;
    Ok((cloud, bytes))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
