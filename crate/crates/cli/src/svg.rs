//! Deterministic SVG rendering of covering configurations.
//!
//! Canvas is fixed at 800x800 with a 5% margin; every coordinate is written
//! with three decimals, so a fixed body, configuration, and slice render to
//! identical bytes on every run.

use covfun_core::body::ConvexBody;
use covfun_core::point::Point;
use covfun_core::{convert, minkowski};
use covfun_covering::CoverConfig;

use crate::CliError;

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 0.05 * CANVAS;
const OUTLINE_SAMPLES: usize = 256;
const SLICE_SAMPLES: usize = 192;

/// Render a 2-D configuration, or a 3-D one cut at height `slice`.
pub(crate) fn render(
    body: &ConvexBody,
    cfg: &CoverConfig,
    witness: Option<&Point>,
    slice: Option<f64>,
) -> Result<String, CliError> {
    match body.dim() {
        2 => render_planar(body, cfg, witness, planar_scene(body, cfg)?),
        3 => {
            let z = slice.ok_or_else(|| {
                CliError::Usage("rendering a 3-D body needs --slice z".to_string())
            })?;
            let witness = witness.filter(|w| (w.z() - z).abs() <= 1e-9);
            render_planar(body, cfg, witness, slice_scene(body, cfg, z)?)
        }
        d => Err(CliError::Usage(format!("rendering supports 2-D and 3-D bodies, got {d}-D"))),
    }
}

/// The outlines to draw, in world coordinates: the body and one polygon per
/// nonempty translate.
struct Scene {
    body_outline: Vec<(f64, f64)>,
    translates: Vec<Vec<(f64, f64)>>,
}

fn planar_scene(body: &ConvexBody, cfg: &CoverConfig) -> Result<Scene, CliError> {
    let outline = outline_2d(body)?;
    let a = body.reference_point();
    let translates = cfg
        .centers
        .iter()
        .map(|x| {
            outline
                .iter()
                .map(|&(px, py)| {
                    let world = Point::new2(px, py);
                    let q = a + (world - a).scale(cfg.ratio) + *x;
                    (q.x(), q.y())
                })
                .collect()
        })
        .collect();
    Ok(Scene { body_outline: outline, translates })
}

fn slice_scene(body: &ConvexBody, cfg: &CoverConfig, z: f64) -> Result<Scene, CliError> {
    let a = body.reference_point();
    let body_outline = slice_outline(body, z)?.ok_or_else(|| {
        CliError::Usage(format!("slice z={z} misses the body"))
    })?;
    let mut translates = Vec::with_capacity(cfg.centers.len());
    for x in &cfg.centers {
        // a point of the translate at height z comes from the body at height
        // z' with a_z + r (z' - a_z) + x_z = z
        let z_src = a.z() + (z - a.z() - x.z()) / cfg.ratio;
        let Some(outline) = slice_outline(body, z_src)? else {
            translates.push(Vec::new());
            continue;
        };
        let mapped = outline
            .iter()
            .map(|&(px, py)| {
                (
                    a.x() + cfg.ratio * (px - a.x()) + x.x(),
                    a.y() + cfg.ratio * (py - a.y()) + x.y(),
                )
            })
            .collect();
        translates.push(mapped);
    }
    Ok(Scene { body_outline, translates })
}

fn render_planar(
    _body: &ConvexBody,
    _cfg: &CoverConfig,
    witness: Option<&Point>,
    scene: Scene,
) -> Result<String, CliError> {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    let all_points = scene
        .body_outline
        .iter()
        .chain(scene.translates.iter().flatten())
        .copied()
        .chain(witness.map(|w| (w.x(), w.y())));
    for (x, y) in all_points {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    if !(min_x.is_finite() && min_y.is_finite() && max_x > min_x - 1.0 && max_y > min_y - 1.0) {
        return Err(CliError::Usage("nothing to render".to_string()));
    }
    let width = (max_x - min_x).max(1e-9);
    let height = (max_y - min_y).max(1e-9);
    let scale = (CANVAS - 2.0 * MARGIN) / width.max(height);
    let off_x = (CANVAS - scale * width) / 2.0;
    let off_y = (CANVAS - scale * height) / 2.0;
    let sx = |x: f64| off_x + (x - min_x) * scale;
    let sy = |y: f64| CANVAS - (off_y + (y - min_y) * scale);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{c}\" height=\"{c}\" viewBox=\"0 0 {c} {c}\">\n",
        c = CANVAS as u32
    ));
    svg.push_str("<rect width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n");
    for outline in &scene.translates {
        if outline.is_empty() {
            continue;
        }
        svg.push_str("<polygon points=\"");
        push_points(&mut svg, outline, &sx, &sy);
        svg.push_str(
            "\" fill=\"#4878b0\" fill-opacity=\"0.10\" stroke=\"#4878b0\" stroke-width=\"1.5\"/>\n",
        );
    }
    svg.push_str("<polygon points=\"");
    push_points(&mut svg, &scene.body_outline, &sx, &sy);
    svg.push_str("\" fill=\"none\" stroke=\"#202020\" stroke-width=\"2.5\"/>\n");
    if let Some(w) = witness {
        svg.push_str(&format!(
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"6\" fill=\"none\" stroke=\"#c03030\" stroke-width=\"3\"/>\n",
            sx(w.x()),
            sy(w.y())
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn push_points(
    svg: &mut String,
    outline: &[(f64, f64)],
    sx: &impl Fn(f64) -> f64,
    sy: &impl Fn(f64) -> f64,
) {
    for (i, (x, y)) in outline.iter().enumerate() {
        if i > 0 {
            svg.push(' ');
        }
        svg.push_str(&format!("{:.3},{:.3}", sx(*x), sy(*y)));
    }
}

/// Boundary ring of a 2-D body: exact vertices for polytopes, dense radial
/// samples otherwise.
fn outline_2d(body: &ConvexBody) -> Result<Vec<(f64, f64)>, CliError> {
    if let Some(vertices) = body.polytope_vertices().map_err(CliError::Geom)? {
        let ring = convert::polygon_ccw(&vertices).map_err(CliError::Geom)?;
        return Ok(ring.iter().map(|p| (p.x(), p.y())).collect());
    }
    let mut outline = Vec::with_capacity(OUTLINE_SAMPLES);
    for i in 0..OUTLINE_SAMPLES {
        let angle = 2.0 * std::f64::consts::PI * i as f64 / OUTLINE_SAMPLES as f64;
        let u = Point::new2(angle.cos(), angle.sin());
        let p = minkowski::boundary_point(body, &u).map_err(CliError::Geom)?;
        outline.push((p.x(), p.y()));
    }
    Ok(outline)
}

/// Horizontal cross-section of a 3-D body at height `z`, as a planar ring
/// around the reference axis; `None` when the plane misses the body there.
fn slice_outline(body: &ConvexBody, z: f64) -> Result<Option<Vec<(f64, f64)>>, CliError> {
    let a = body.reference_point();
    let center = Point::new3(a.x(), a.y(), z);
    if !minkowski::contains(body, &center, 1e-9).map_err(CliError::Geom)? {
        return Ok(None);
    }
    let mut outline = Vec::with_capacity(SLICE_SAMPLES);
    for i in 0..SLICE_SAMPLES {
        let angle = 2.0 * std::f64::consts::PI * i as f64 / SLICE_SAMPLES as f64;
        let (dx, dy) = (angle.cos(), angle.sin());
        let inside = |t: f64| {
            minkowski::contains(
                body,
                &Point::new3(a.x() + t * dx, a.y() + t * dy, z),
                1e-12,
            )
        };
        let mut hi = 1.0;
        let mut grew = 0;
        while inside(hi).map_err(CliError::Geom)? && grew < 60 {
            hi *= 2.0;
            grew += 1;
        }
        let mut lo = 0.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if inside(mid).map_err(CliError::Geom)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        outline.push((a.x() + lo * dx, a.y() + lo * dy));
    }
    Ok(Some(outline))
}
